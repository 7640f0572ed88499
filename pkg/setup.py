from setuptools import find_packages, setup

setup(
    name="lsvrand",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy==2.2.4",
        "pandas==2.2.3",
        "scipy==1.15.2",
        "joblib==1.4.2",
        "pydantic==2.11.3",
        "tomli==2.2.1; python_version < '3.11'",
        "python-dateutil==2.9.0.post0",
        "pytz==2025.2",
        "six==1.17.0",
        "tzdata==2025.2",
        "setuptools==80.9.0",
    ],
    entry_points={
        "console_scripts": [
            "lsvrand=lsvrand.cli:main",
        ]
    },
    python_requires=">=3.10",
    description="Numerical experiments for random compositions of intermittent LSV maps",
    license="GPL-3.0-or-later",
    classifiers=[
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Operating System :: OS Independent",
    ],
)
