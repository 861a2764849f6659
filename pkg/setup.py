"""
Setup script for swirlflow
"""
from pathlib import Path
from typing import List

from setuptools import find_packages, setup

from swirlflow import __version__


def read_requirements() -> List[str]:
    """Runtime requirements, without the test tooling"""
    lines = Path(__file__).with_name("requirements.txt").read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith("pytest")]


setup(
    name="swirlflow",
    version=__version__,
    description="Smooth and transonic shock solutions of steady radially symmetric swirling Euler flows",
    packages=find_packages(exclude=("tests",)),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest==8.0.0"]},
    entry_points={"console_scripts": ["swirlflow=swirlflow.cli:main"]},
)
