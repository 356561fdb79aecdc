"""persistlab: persistence probabilities of Gaussian processes with slowly decaying correlations.

Submodules
----------
rv        regularly varying tails rho, primitives I, decay-rate functional, Karamata checks
kernels   covariance kernel catalog, Gram/Cholesky assembly, conditional Gaussian law
walk      lattice random walk return probabilities, Green functions, interface covariance
sampler   Gaussian path sampling, persistence estimators (crude MC / sequential IS), bounds, fits
langevin  Euler-Maruyama simulation of the linear interface Langevin system on a torus
verify    property suites wired to the CLI `verify` subcommand
"""

from . import errors, kernels, langevin, rv, sampler, walk  # noqa: F401

__version__ = "0.1.0"
