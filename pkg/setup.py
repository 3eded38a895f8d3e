from setuptools import setup

setup(
    name="gpc",
    version="0.1.0",
    description="Generalized Pauli channel dynamics: memory kernels, semi-Markov maps and certificates.",
    packages=["gpc", "gpc.tests"],
    package_data={"gpc": ["repro/cases/*.json", "repro/scenarios/*.json"]},
    install_requires=["six", "numpy", "scipy", "mpmath", "joblib"],
    entry_points={"console_scripts": ["gpc = gpc.cli:main"]},
)
