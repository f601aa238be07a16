from setuptools import setup

setup(
    name="tame_local_factors",
    version="0.1.0",
    py_modules=[
        "cli",
        "characters",
        "exact_scalars",
        "factors",
        "job_config",
        "lagrangian",
        "logger_config",
        "plancherel",
        "ratfun",
        "schwartz",
        "slcm",
        "tame_field",
        "verification",
    ],
    install_requires=[
        "python-dotenv>=1.0.0",
        "pydantic>=2.4.2",
        "sympy>=1.12",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "pytest-cov>=4.1.0",
            "black>=23.7.0",
            "isort>=5.12.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "local-factors=cli:main",
        ],
    },
    python_requires=">=3.9",
)
