"""
Setup script for linquench

Installation modes:
    pip install linquench        # library + command line
    pip install linquench[dev]   # plus test tooling

Usage:
    linquench check --spec specs/iid.yaml
    python -m linquench failure --spec specs/failure_k2.yaml --out out/failure
"""

from setuptools import setup, find_packages

# Read version without importing the full package (avoids dependency issues)
__version__ = "0.0.0"
try:
    with open("linquench/__init__.py", "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("__version__"):
                __version__ = line.split("=")[1].strip().strip('"').strip("'")
                break
except Exception:
    pass

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

requirements = [
    # Numerics
    "numpy>=1.24",
    "scipy>=1.10",
    # Figures (Agg backend, SVG only)
    "matplotlib>=3.7",
    # Configuration
    "pyyaml>=6.0.1",
    "pydantic>=2.6.0",
    "pydantic-settings>=2.2.0",
    # Logging
    "python-json-logger>=2.0.7",
    # Utilities
    "psutil>=5.9.7",
]

setup(
    name="linquench",
    version=__version__,
    author="linquench contributors",
    description="Quenched vs. annealed CLT toolkit for causal linear processes",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=7.4.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "linquench=linquench.__main__:main",
        ],
    },
    include_package_data=True,
)
