"""
swirlflow - steady radially symmetric swirling flows and circular transonic shocks in an annulus
"""

__version__ = "0.1.0"
