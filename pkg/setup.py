# coding:utf8
from setuptools import setup, find_packages

from ccfedsim import version

setup(
    name="ccfedsim",
    version=version,
    description="Federated averaging simulator for clients with computation budgets",
    long_description=open("README.md", encoding="utf8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["ccfedsim.test", "ccfedsim.examples"]),
    install_requires=[
        "numpy>=1.22",
        "better-exceptions",
        "tqdm",
        "python-dotenv",
    ],
    entry_points={"console_scripts": ["ccfedsim=ccfedsim.__main__:main"]},
    license="BSD",
    # https://pypi.org/classifiers/
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Operating System :: POSIX",
        "Programming Language :: Python :: 3 :: Only",
        "License :: OSI Approved :: BSD License",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    keywords=["federated-learning", "fedavg", "simulation"],
)
