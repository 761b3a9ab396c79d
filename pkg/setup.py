from os import path

from setuptools import find_packages, setup

here = path.abspath(path.dirname(__file__))

with open(path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

pkg_vars = {}
with open("advicegame/_version.py") as f:
    exec(f.read(), pkg_vars)

setup(
    name="advicegame",
    version=pkg_vars["__version__"],
    description="Classical, no-signaling and entangled advice in conflicting-interest Bayesian games",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    python_requires=">= 3.8",
    classifiers=[
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    keywords="game theory bayesian game correlated equilibrium no-signaling quantum",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy",
        "pandas",
        "pydantic>=2.0",
        "tqdm",
    ],
    extras_require={
        "dev": [
            "faker",
            "pytest",
            "scipy",
            "myst-nb",
            "sphinx-autoapi",
            "sphinx-rtd-theme",
        ],
    },
    entry_points={
        "console_scripts": ["advicegame=advicegame._cli:main"],
    },
    include_package_data=True,
    zip_safe=False,
)
