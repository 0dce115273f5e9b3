import os
import runpy
from setuptools import setup, find_packages

# Get version
cwd = os.path.abspath(os.path.dirname(__file__))
versionpath = os.path.join(cwd, 'asd_tools', 'version.py')
version = runpy.run_path(versionpath)['__version__']

# Get the documentation
with open(os.path.join(cwd, 'README.md'), "r") as fh:
    long_description = fh.read()

CLASSIFIERS = [
    "Environment :: Console",
    "Intended Audience :: Science/Research",
    "Operating System :: OS Independent",
    "Programming Language :: Python",
    "Topic :: Scientific/Engineering :: Mathematics",
    "Development Status :: 4 - Beta",
    "Programming Language :: Python :: 3.8",
]

setup(
    name="asdlab",
    version=version,
    description="Numerical verification of p-adic congruences between meromorphic modular forms and Frobenius data of elliptic curves",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=["modular forms", "p-adic", "congruences", "elliptic curves", "Atkin-Swinnerton-Dyer"],
    platforms=["OS Independent"],
    classifiers=CLASSIFIERS,
    packages=find_packages(exclude=['tests', 'scripts']),
    include_package_data=True,
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "pandas",
        "psutil",
        "gmpy2>=2.1",
        "sciris>=1.0.0",
    ],
    entry_points={
        "console_scripts": [
            "asdlab=asd_tools.cli:main",
        ],
    },
)
