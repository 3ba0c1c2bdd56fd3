"""Generalized integrals and bilinear integrals of Macdonald and Gegenbauer functions.

Modules
-------
gammakit
    Gamma, digamma and polygamma functions with the identities used elsewhere.
genint
    The generalized (finite-part) integral, its scaling and substitution laws,
    and dimensional regularization.
bessel
    Modified Bessel functions I and K, with integral-representation oracles.
gegenbauer
    Olver-normalized Gegenbauer functions S and Z, connection formulas and
    asymptotics.
bilinear
    Closed forms of the bilinear integrals and their generalized-integral oracles.
suites, cli
    Verification suites and the ``genint`` command line.
"""

__version__ = "0.1.0"

from .bessel import bessel_i, bessel_k
from .bilinear import (
    BilinearResult,
    gegenbauer_s_bilinear,
    gegenbauer_z_bilinear,
    macdonald_bilinear,
)
from .errors import ConvergenceError, DomainError, GenBilinearError, InvalidExpansionError, PoleError
from .gammakit import digamma, gamma, ln_gamma
from .gegenbauer import gegen_s, gegen_z
from .genint import GenIntegrand, SingularExpansion, gen_integrate

__all__ = [
    "__version__",
    "BilinearResult",
    "ConvergenceError",
    "DomainError",
    "GenBilinearError",
    "GenIntegrand",
    "InvalidExpansionError",
    "PoleError",
    "SingularExpansion",
    "bessel_i",
    "bessel_k",
    "digamma",
    "gamma",
    "gegen_s",
    "gegen_z",
    "gegenbauer_s_bilinear",
    "gegenbauer_z_bilinear",
    "gen_integrate",
    "ln_gamma",
    "macdonald_bilinear",
]
