"""
Entry point for running swirlflow from a source checkout
"""
import sys

from swirlflow.cli import main

if __name__ == "__main__":
    sys.exit(main())
