"""Setup configuration for qhgeom - quantum hyperbolic state sums"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="qhgeom",
    version="0.1.0",
    description="Quantum hyperbolic state sums, flattenings and charges on branched triangulations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"qhgeom": ["data/*.json"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "sympy>=1.14",
        "networkx>=3.0",
        "colorama>=0.4.6",
        "tqdm>=4.66.0",
    ],
    entry_points={
        "console_scripts": [
            "qhgeom=qhgeom.cli:main",
        ],
    },
)
