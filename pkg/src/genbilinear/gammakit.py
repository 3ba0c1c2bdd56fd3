"""Complex Gamma-function toolkit.

Log-Gamma, reciprocal Gamma and digamma delegate to :mod:`scipy.special`,
which supports complex arguments. The polygamma derivatives psi' and psi''
for complex arguments are not provided by scipy, so they are computed here
by shifting the argument with the recurrence until it is large enough for
the asymptotic (Bernoulli) series.

All functions take and return Python complex scalars and use principal
branches.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import PoleError

__all__ = [
    "ASYMPTOTIC_THRESHOLD",
    "EULER_GAMMA",
    "digamma",
    "gamma",
    "harmonic_shifted",
    "is_nonpositive_integer",
    "ln_gamma",
    "pochhammer",
    "reciprocal_gamma",
    "sinpi",
    "tetragamma",
    "trigamma",
]

EULER_GAMMA = 0.57721566490153286061

#: The recurrence shifts z until Re z >= ASYMPTOTIC_THRESHOLD (or |z| is at
#: least that large with Re z >= 0) before the asymptotic series is summed.
ASYMPTOTIC_THRESHOLD = 15.0

#: Pochhammer products with more factors than this use log-Gamma differences.
POCHHAMMER_DIRECT_MAX = 64

_POLE_TOL = 1e-14

# B_2, B_4, ..., B_24
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
_B2K = [float(b) for b in _BERNOULLI]


def is_nonpositive_integer(z, tol: float = _POLE_TOL) -> bool:
    """Return True when ``z`` is within ``tol`` of 0, -1, -2, ..."""
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol * max(1.0, abs(z.real))


def _check_pole(z: complex, name: str) -> None:
    if is_nonpositive_integer(z):
        raise PoleError(f"{name} has a pole at z = {z.real:g}")


def ln_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Raises
    ------
    PoleError
        If ``z`` is a non-positive integer.
    """
    z = complex(z)
    _check_pole(z, "ln_gamma")
    return complex(special.loggamma(z))


def sinpi(z) -> complex:
    """sin(pi z) with the argument reduced to the nearest integer first.

    Near an integer m, ``sin(pi * z)`` loses the relative accuracy of
    ``z - m`` to the rounding of ``pi * z``; this form keeps it.
    """
    z = complex(z)
    m = round(z.real)
    s = cmath.sin(math.pi * (z - m))
    return -s if m % 2 else s


def gamma(z) -> complex:
    """Gamma(z) for complex z; raises :class:`PoleError` at the poles."""
    z = complex(z)
    _check_pole(z, "gamma")
    if z.imag == 0.0:
        return complex(special.gamma(z.real))
    return complex(special.gamma(z))


def reciprocal_gamma(z) -> complex:
    """1/Gamma(z), an entire function with zeros at 0, -1, -2, ..."""
    z = complex(z)
    if is_nonpositive_integer(z, 0.0):
        return 0j
    if z.imag == 0.0:
        return complex(special.rgamma(z.real))
    return complex(special.rgamma(z))


def digamma(z) -> complex:
    """psi(z) = d/dz log Gamma(z)."""
    z = complex(z)
    _check_pole(z, "digamma")
    if z.imag == 0.0:
        return complex(special.psi(z.real))
    return complex(special.psi(z))


def _shift_count(z: complex) -> int:
    n = 0
    while True:
        w = z + n
        if w.real >= ASYMPTOTIC_THRESHOLD or (w.real >= 0.0 and abs(w) >= ASYMPTOTIC_THRESHOLD):
            return n
        n += 1


def _polygamma_shifted(z: complex, order: int) -> complex:
    """psi^(order)(z) for order 1 or 2 via recurrence plus asymptotic series."""
    n = _shift_count(z)
    acc = 0j
    sign = 1.0 if order == 1 else -2.0
    for k in range(n):
        acc += sign / (z + k) ** (order + 1)
    w = z + n
    inv = 1.0 / w
    inv2 = inv * inv
    if order == 1:
        # psi'(w) ~ 1/w + 1/(2w^2) + sum B_2k / w^(2k+1)
        s = inv + 0.5 * inv2
        p = inv * inv2
        for b in _B2K:
            term = b * p
            s += term
            if abs(term) < 1e-18 * abs(s):
                break
            p *= inv2
    else:
        # psi''(w) ~ -1/w^2 - 1/w^3 - sum (2k+1) B_2k / w^(2k+2)
        s = -inv2 - inv2 * inv
        p = inv2 * inv2
        for k, b in enumerate(_B2K, start=1):
            term = -(2 * k + 1) * b * p
            s += term
            if abs(term) < 1e-18 * abs(s):
                break
            p *= inv2
    return s + acc


def trigamma(z) -> complex:
    """psi'(z) for complex z."""
    z = complex(z)
    _check_pole(z, "trigamma")
    if z.imag == 0.0 and z.real > 0:
        return complex(special.polygamma(1, z.real))
    return _polygamma_shifted(z, 1)


def tetragamma(z) -> complex:
    """psi''(z) for complex z."""
    z = complex(z)
    _check_pole(z, "tetragamma")
    if z.imag == 0.0 and z.real > 0:
        return complex(special.polygamma(2, z.real))
    return _polygamma_shifted(z, 2)


def pochhammer(z, k: int) -> complex:
    """Pochhammer symbol (z)_k = Gamma(z+k)/Gamma(z) for integer k.

    For ``k >= 0`` this is the product z(z+1)...(z+k-1); for ``k < 0`` it
    is 1/((z-1)(z-2)...(z+k)).

    Raises
    ------
    ZeroDivisionError
        If ``k < 0`` and one of the factors z-1, ..., z+k vanishes.
    """
    z = complex(z)
    k = int(k)
    if k == 0:
        return 1 + 0j
    if k > 0:
        if k <= POCHHAMMER_DIRECT_MAX:
            p = 1 + 0j
            for i in range(k):
                p *= z + i
            return p
        if is_nonpositive_integer(z, 0.0):
            return 0j if z.real + k > 0 else _direct_product(z, k)
        return cmath.exp(ln_gamma(z + k) - ln_gamma(z))
    p = 1 + 0j
    for i in range(1, -k + 1):
        f = z - i
        if f == 0:
            raise PoleError(f"pochhammer({z}, {k}): factor z-{i} vanishes")
        p *= f
    return 1.0 / p


def _direct_product(z: complex, k: int) -> complex:
    p = 1 + 0j
    for i in range(k):
        p *= z + i
    return p


def harmonic_shifted(k: int, z) -> complex:
    """Shifted harmonic number H_k(z) = 1/z + 1/(z+1) + ... + 1/(z+k-1)."""
    z = complex(z)
    s = 0j
    for i in range(int(k)):
        f = z + i
        if f == 0:
            raise PoleError(f"harmonic_shifted({k}, {z}): term 1/(z+{i}) is singular")
        s += 1.0 / f
    return s


def poch_digamma(x, n: int) -> complex:
    """Return (x)_n * psi(x), continued to the removable points.

    When x is a non-positive integer -j with j < n the Pochhammer factor has
    a simple zero cancelling the pole of psi, and the limit
    -prod_{l != j} (x + l) is returned.
    """
    x = complex(x)
    if is_nonpositive_integer(x, 0.0):
        j = int(round(-x.real))
        if j < n:
            p = 1 + 0j
            for l in range(n):
                if l != j:
                    p *= x + l
            return -p
        raise PoleError(f"digamma pole at {x.real:g} is not cancelled")
    return pochhammer(x, n) * digamma(x)


def binomial_series(p, n_terms: int, sign: float = 1.0) -> np.ndarray:
    """Coefficients of (1 + sign*x)^p as an array of length ``n_terms``."""
    c = np.empty(n_terms, dtype=complex)
    c[0] = 1.0
    p = complex(p)
    for n in range(1, n_terms):
        c[n] = c[n - 1] * (p - n + 1) / n * sign
    return c

