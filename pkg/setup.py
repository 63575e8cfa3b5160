from setuptools import find_packages, setup

# Basic (bare minimum) requirements for local machine
requirements = [
    "numpy",
    "pandas",
    "scipy",
]

extras_require = {
    "dev": [
        "black==24.10.0",
        "isort==5.13.2",
        "pre-commit==4.0.1",
        "pytest",
        "twine",
        "wheel",
    ],
}

setup(
    name="herding-market",
    version="1.0.0",
    description="Agent-based market simulation with moving price thresholds, herding and a geometric Brownian baseline",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=requirements,
    extras_require=extras_require,
    python_requires=">=3.10,<3.13",
    entry_points={
        "console_scripts": [
            "herding-market=herding_market.cli.main:main",
        ],
    },
)
