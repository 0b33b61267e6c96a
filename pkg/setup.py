#!/usr/bin/env python3
"""
Setup script for the Max3Sat suite.

Installs the max3sat_suite package and the `max3sat` command.
"""

from pathlib import Path

from setuptools import find_packages, setup


def read_requirements():
    """Runtime requirements; test-only packages are left to requirements.txt."""
    lines = Path(__file__).with_name("requirements.txt").read_text().splitlines()
    requirements = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    return [r for r in requirements if not r.startswith("pytest")]


setup(
    name="max3sat-suite",
    version="0.1.0",
    description="Gray-box Max3Sat optimization: MOCSM, IPP, partition crossover and backbone analysis",
    long_description=Path(__file__).with_name("USAGE_GUIDE.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "tests.*")),
    package_data={"max3sat_suite": ["README.md"]},
    python_requires=">=3.8",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7.0.0"]},
    entry_points={"console_scripts": ["max3sat=max3sat_suite.cli:main"]},
)
