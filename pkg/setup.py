"""Setup script for the loewnerlab package"""

from setuptools import setup, find_packages

# Read long description from README
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Main setup configuration
setup(
    name="loewnerlab",
    version="0.1.0",
    description="Numerical Loewner chains, hull geometry and driving-function regularity experiments",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(where="python", exclude=["tests", "tests.*"]),
    package_dir={"": "python"},
    package_data={"loewnerlab": ["data/*.json"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22.0",
        "pandas>=1.4.0",
        "scipy>=1.8.0",
        "matplotlib>=3.5.0",
        "seaborn>=0.11.0",
        "statsmodels>=0.13.0",
        "plotly>=5.5.0",
        "s3fs>=2022.1.0",
        "joblib>=1.1.0",
    ],
    extras_require={
        "dev": [
            "black>=22.1.0",
            "isort>=5.10.0",
            "flake8>=4.0.0",
            "pytest>=7.0.0",
            "pytest-cov>=3.0.0",
            "sphinx>=4.4.0",
            "sphinx-rtd-theme>=1.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "loewner=loewnerlab.cli:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
