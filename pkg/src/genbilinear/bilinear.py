"""Bilinear integrals of Macdonald and Gegenbauer functions.

Three families are covered, each with its integration variable fixed
because anomalous generalized integrals depend on that choice:

* Macdonald: gen-int_0^oo K_a(ar) K_a(br) 2r dr, variable u = r^2.
* Gegenbauer S: gen-int_{-1}^1 S_{a,i b1} S_{a,i b2} (1-w^2)^a d2w, variable u = 2(w+1).
* Gegenbauer Z: gen-int_1^oo Z_{a,l1} Z_{a,l2} (w^2-1)^a d2w, variable u = 2(w-1).

Here ``d2w`` is 2 dw. Closed forms come from Green's identity and the
explicit singular expansions at the left endpoint; the ``*_oracle``
functions compute the same quantities directly from the definition of the
generalized integral, subtracting the analytic singular part of the
product of the two local series.

Removable singularities of the closed forms (coincident eigenvalues,
alpha -> 0, half-integer lambda in the anomalous Z formulas) are handled by
exact limit formulas at coincidence and by a Cauchy integral on a circle
around the removable point in the band 1e-6 <= distance < 1e-3.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _quad
from .bessel import bessel_k, bessel_k_derivative
from .errors import DomainError, InvalidExpansionError
from .gammakit import (
    binomial_series,
    digamma,
    harmonic_shifted,
    ln_gamma,
    poch_digamma,
    pochhammer,
    reciprocal_gamma,
    sinpi,
    tetragamma,
    trigamma,
)
from .gegenbauer import (
    gegen_s,
    gegen_s_derivative,
    gegen_z,
    gegen_z_derivative,
)
from .genint import (
    EXPONENT_TOL,
    GenIntegrand,
    LaurentData,
    SingularExpansion,
    dimreg_extract,
    gen_integrate,
)

__all__ = [
    "AsymptoticsReport",
    "BilinearResult",
    "COINCIDENCE_TOL",
    "LIMIT_BAND",
    "SingularProductExpansion",
    "bilinear_asymptotics_check",
    "gegenbauer_s_bilinear",
    "gegenbauer_s_bilinear_oracle",
    "gegenbauer_s_expansion",
    "gegenbauer_z_bilinear",
    "gegenbauer_z_bilinear_oracle",
    "gegenbauer_z_expansion",
    "green_identity_check",
    "macdonald_bilinear",
    "macdonald_bilinear_oracle",
    "macdonald_bilinear_quadrature",
    "macdonald_dimreg",
    "macdonald_expansion",
    "resiu_family",
]

#: Parameters closer than this are treated as coincident (diagonal formulas).
COINCIDENCE_TOL = 1e-6
#: Below this distance (and above COINCIDENCE_TOL) a Cauchy integral is used.
LIMIT_BAND = 1e-3
#: alpha within this distance of an integer is treated as that integer.
INTEGER_ALPHA_TOL = 1e-10
#: Width of the alpha band around 0 where the non-integer forms cancel.
ALPHA_ZERO_BAND = 0.05
#: Non-integer alpha closer than this to an integer is evaluated by the oracles
#: through a Cauchy integral in alpha; the local expansion cancels there.
ORACLE_NEAR_INTEGER = 1e-3
_ORACLE_RADIUS = 0.05
_ORACLE_NODES = 16

_LN2 = math.log(2.0)
_LN4 = math.log(4.0)
_PI = math.pi

CONVENTIONS = ("u=r²", "u=2(w+1)", "u=2(w−1)")
METHODS = ("closed_form", "oracle")


# ---------------------------------------------------------------------------
# result types

@dataclass(frozen=True)
class BilinearResult:
    """Value of a bilinear generalized integral with its bookkeeping.

    Attributes
    ----------
    value : complex
    anomalous : bool
        True when the integrand has a nonzero u^-1 coefficient, so that the
        value depends on the integration variable.
    variable_convention : str
        One of ``"u=r²"``, ``"u=2(w+1)"``, ``"u=2(w−1)"``.
    method : str
        ``"closed_form"`` or ``"oracle"``.
    """

    value: complex
    anomalous: bool
    variable_convention: str
    method: str

    def __post_init__(self):
        if self.variable_convention not in CONVENTIONS:
            raise ValueError(f"unknown variable convention {self.variable_convention!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class SingularProductExpansion(SingularExpansion):
    """Singular part of a product of two local series, in the u variable.

    Attributes
    ----------
    provenance : str
        The local series used for the two factors.
    order : int
        Number of terms kept in each factor series.
    """

    provenance: str = ""
    order: int = 0


@dataclass(frozen=True)
class AsymptoticsReport:
    """Ratios of the scaled Gegenbauer bilinear integral to its Macdonald limit."""

    kind: str
    alpha: float
    params: tuple
    ratios: tuple
    errors: tuple
    rate: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "params": list(self.params),
            "ratios": [[r.real, r.imag] for r in self.ratios],
            "errors": list(self.errors),
            "rate": self.rate,
        }


# ---------------------------------------------------------------------------
# small helpers

def _cpow(z: complex, p: complex) -> complex:
    return cmath.exp(complex(p) * cmath.log(z))


def _nearest_integer(x: complex) -> tuple[int, float]:
    m = int(round(complex(x).real))
    return m, abs(complex(x) - m)


def _cauchy(fn: Callable[[complex], complex], center: complex, target: complex,
            radius: float = 0.25, nodes: int = 48) -> complex:
    """Value at ``target`` of a function holomorphic in a disc, from boundary values."""
    total = 0j
    for k in range(nodes):
        e = cmath.exp(2j * _PI * (k + 0.5) / nodes)
        z = center + radius * e
        total += fn(z) * (radius * e) / (z - target)
    return total / nodes


def _near_integer_oracle(oracle: Callable[[complex], complex], al: complex, pole: Callable[[int], bool]):
    """Oracle value at alpha near an integer m, or None outside the band.

    The generalized integral is holomorphic in alpha near m except for a
    simple pole when m is anomalous, so (alpha - m) times it is read off a
    circle of radius 0.05 where the direct oracle is accurate.
    """
    m, dist = _nearest_integer(al)
    if not INTEGER_ALPHA_TOL < dist < ORACLE_NEAR_INTEGER:
        return None
    if pole(m):
        return _cauchy(lambda z: (z - m) * oracle(z), complex(m), al, _ORACLE_RADIUS, _ORACLE_NODES) / (al - m)
    return _cauchy(oracle, complex(m), al, _ORACLE_RADIUS, _ORACLE_NODES)


def _cauchy_pair(fn: Callable[[complex], tuple[complex, float]], center: complex, target: complex,
                 radius: float = 0.25, nodes: int = 48) -> tuple[complex, float]:
    """``_cauchy`` for functions returned as (mantissa, log_scale) pairs."""
    ref = fn(center + radius)[1]

    def scaled(z):
        m, ls = fn(z)
        return m * math.exp(ls - ref)

    return _cauchy(scaled, center, target, radius, nodes), ref


def _unpair(pair: tuple[complex, float]) -> complex:
    m, ls = pair
    if m == 0:
        return 0j
    return complex(m) * math.exp(ls)


def _log_cosh(y: complex) -> complex:
    """log cosh(y), stable for large real |y|."""
    y = complex(y)
    if y.imag == 0:
        a = abs(y.real)
        return complex(a + math.log1p(math.exp(-2 * a)) - _LN2)
    return cmath.log(cmath.cosh(y))


def _canonical_beta(beta: complex) -> complex:
    beta = complex(beta)
    if beta.real < 0 or (beta.real == 0 and beta.imag < 0):
        return -beta
    return beta


def _pair_center(x: complex) -> tuple[complex, float]:
    """Contour center and radius for a removable point of ``f(x, y)`` at y = x and y = -x."""
    if abs(x) >= 0.25:
        return x, min(0.25, 0.5 * abs(x))
    return 0j, 0.4


# ---------------------------------------------------------------------------
# Macdonald closed forms

def _mac_generic(al: complex, a: complex, b: complex) -> complex:
    # (a/b)^al - (b/a)^al = 2 sinh(al log(a/b)), free of cancellation near al = 0
    return _PI / sinpi(al) * 2 * cmath.sinh(al * cmath.log(a / b)) / (a * a - b * b)


def _mac_generic_diag(al: complex, a: complex) -> complex:
    if al == 0:
        return 1.0 / (a * a)
    return _PI * al / (a * a * sinpi(al))


def _mac_integer(m: int, a: complex, b: complex) -> complex:
    sign = (-1) ** m
    ra, rb = a / b, b / a
    main = 2 * (_cpow(ra, m) * cmath.log(a / 2) - _cpow(rb, m) * cmath.log(b / 2)) / (a * a - b * b)
    corr = 0j
    for k in range(m):
        corr += _cpow(ra, 2 * k - m + 1) * (digamma(1 + k) + digamma(m - k))
    return sign * main - sign * corr / (a * b)


def _mac_integer_diag(m: int, b: complex) -> complex:
    psi = digamma(1 + m)
    return (-1) ** m / (b * b) * (1 + m * cmath.log(b * b / 4) + 2 * m * (1 - psi))


def _check_macdonald(a: complex, b: complex) -> None:
    if not (a + b).real > 0:
        raise DomainError("the Macdonald bilinear integral requires Re(a+b) > 0")
    if a == 0 or b == 0:
        raise DomainError("a and b must be nonzero")


def _macdonald_value(al: complex, a: complex, b: complex) -> tuple[complex, bool]:
    m, dist = _nearest_integer(al)
    integer = dist <= INTEGER_ALPHA_TOL
    if integer:
        m = abs(m)
        off = lambda bb: _mac_integer(m, a, bb)  # noqa: E731
        diag = lambda aa: _mac_integer_diag(m, aa)  # noqa: E731
    else:
        off = lambda bb: _mac_generic(al, a, bb)  # noqa: E731
        diag = lambda aa: _mac_generic_diag(al, aa)  # noqa: E731
    d = abs(a - b)
    if d < COINCIDENCE_TOL:
        if not a.real > 0:
            raise DomainError("the diagonal Macdonald integral requires Re a > 0")
        return diag(a), integer and m != 0
    if d < LIMIT_BAND:
        return _cauchy(off, a, b, radius=0.25 * abs(a)), integer and m != 0
    return off(b), integer and m != 0


def macdonald_bilinear(alpha, a, b) -> BilinearResult:
    """gen-int_0^oo K_alpha(a r) K_alpha(b r) 2r dr in closed form.

    Non-integer alpha:
        pi/sin(pi alpha) ((a/b)^alpha - (b/a)^alpha)/(a^2 - b^2),  diagonal pi alpha/(a^2 sin(pi alpha)).
    alpha = 0:
        2 ln(a/b)/(a^2 - b^2),  diagonal 1/a^2.
    Integer alpha = +-m, m >= 1 (anomalous, variable u = r^2):
        (-1)^m 2((a/b)^m ln(a/2) - (b/a)^m ln(b/2))/(a^2 - b^2)
        - (-1)^m/(ab) sum_{k<m} (a/b)^(2k-m+1) (psi(1+k) + psi(m-k)),
        diagonal (-1)^m/b^2 (1 + m ln(b^2/4) + 2m(1 - psi(1+m))).

    Raises
    ------
    DomainError
        If Re(a+b) <= 0, or Re a <= 0 on the diagonal.
    """
    al, a, b = complex(alpha), complex(a), complex(b)
    _check_macdonald(a, b)
    value, anomalous = _macdonald_value(al, a, b)
    return BilinearResult(value, anomalous, "u=r²", "closed_form")


# ---------------------------------------------------------------------------
# local series (blocks x^e (ln x)^p sum_n c_n x^n)

@dataclass
class _Block:
    exponent: complex
    log_power: int
    coeffs: np.ndarray


def _block(e, p, coeffs) -> _Block:
    return _Block(complex(e), int(p), np.asarray(coeffs, dtype=complex))


def _mul_blocks(xs: list[_Block], ys: list[_Block], n: int) -> list[_Block]:
    out = []
    for x in xs:
        for y in ys:
            c = np.convolve(x.coeffs, y.coeffs)[:n]
            out.append(_block(x.exponent + y.exponent, x.log_power + y.log_power, c))
    return out


#: The oracles also subtract integrable terms up to this real exponent; a
#: remainder like u^-0.97 is integrable but defeats adaptive quadrature.
ORACLE_SUBTRACT_BELOW = -0.5


def _split_singular(blocks: list[_Block], scale: float) -> tuple[dict, list[tuple[_Block, int]]]:
    """Separate the pure powers with Re exponent <= ORACLE_SUBTRACT_BELOW; ``x = u/scale``."""
    sing: dict = {}
    kept = []
    for blk in blocks:
        start = 0
        for j, c in enumerate(blk.coeffs):
            e = blk.exponent + j
            if e.real > ORACLE_SUBTRACT_BELOW:
                break
            start = j + 1
            if c == 0:
                continue
            if blk.log_power:
                if abs(c) > 1e-300:
                    raise InvalidExpansionError(
                        f"logarithmic term x^{e} (ln x)^{blk.log_power} in the subtracted part")
                continue
            key = (round(e.real, 9), round(e.imag, 9))
            ce = c * _cpow(scale, -e)
            if key in sing:
                sing[key] = (sing[key][0], sing[key][1] + ce)
            else:
                sing[key] = (e, ce)
        kept.append((blk, start))
    return sing, kept


def _eval_kept(kept: list[tuple[_Block, int]], x: float) -> complex:
    lx = math.log(x)
    total = 0j
    for blk, start in kept:
        c = blk.coeffs[start:]
        if not len(c):
            continue
        poly = np.polynomial.polynomial.polyval(x, c)
        total += poly * cmath.exp((blk.exponent + start) * lx) * lx ** blk.log_power
    return total


@dataclass(frozen=True)
class _LocalProduct:
    """Local series of an integrand at the left endpoint, in x = u/scale.

    ``expansion`` is the non-integrable part. ``subtracted`` adds the
    integrable terms down to ORACLE_SUBTRACT_BELOW, and ``remainder`` is
    the series minus ``subtracted``.
    """

    expansion: SingularProductExpansion
    subtracted: SingularExpansion
    kept: tuple
    scale: float

    def remainder(self, u: float) -> complex:
        return _eval_kept(list(self.kept), u / self.scale)


def _build_local(factory: Callable[[int], list[_Block]], scale: float, x_split: float,
                 provenance: str, n0: int, integer_m: int | None) -> _LocalProduct:
    """Build the product series, doubling the order until the remainder settles at the split."""
    n = n0
    prev = None
    for _ in range(6):
        sing, kept = _split_singular(factory(n), scale)
        val = _eval_kept(kept, x_split)
        if prev is not None and abs(val - prev) <= 1e-15 * max(1.0, abs(val)):
            break
        prev = val
        n *= 2
    all_terms = tuple(sorted(sing.values(), key=lambda t: t[0].real))
    terms = tuple(t for t in all_terms if t[0].real <= -1 + EXPONENT_TOL)
    if integer_m is not None and integer_m > 0:
        expected = sorted(k - integer_m for k in range(integer_m))
        got = sorted(round(e.real) for e, _ in terms)
        if got != expected or any(abs(e.imag) > 1e-12 or abs(e.real - round(e.real)) > 1e-9 for e, _ in terms):
            raise InvalidExpansionError(f"singular exponents {got} differ from {expected}")
    exp = SingularProductExpansion(terms, provenance=provenance, order=n)
    return _LocalProduct(exp, SingularExpansion(all_terms), tuple(kept), scale)


def _order(alpha: complex) -> int:
    return max(2 * math.ceil(abs(complex(alpha).real)) + 8, 16)


# Macdonald factors in u = r^2 -------------------------------------------------

def _k_blocks(nu: complex, a: complex, n: int) -> list[_Block]:
    """K_nu(a sqrt(u)) as blocks in u (Re nu >= 0)."""
    m, dist = _nearest_integer(nu)
    la = cmath.log(a / 2)
    if dist <= INTEGER_ALPHA_TOL:
        head = [0.5 * (-1) ** k * math.factorial(m - k - 1) / math.factorial(k) * cmath.exp((2 * k - m) * la)
                for k in range(m)]
        c0 = np.zeros(n, dtype=complex)
        c1 = np.zeros(n, dtype=complex)
        for j in range(n):
            t = cmath.exp((2 * j + m) * la) / (math.factorial(j) * math.factorial(m + j))
            psi = digamma(j + 1) + digamma(m + j + 1)
            c0[j] = 0.5 * (-1) ** m * t * (psi - 2 * la)
            c1[j] = -0.5 * (-1) ** m * t
        blocks = [_block(m / 2, 0, c0), _block(m / 2, 1, c1)]
        if m:
            blocks.insert(0, _block(-m / 2, 0, head))
        return blocks
    pref = _PI / (2 * sinpi(nu))
    neg = [pref * cmath.exp((2 * k - nu) * la) * reciprocal_gamma(k - nu + 1) / math.factorial(k) for k in range(n)]
    pos = [-pref * cmath.exp((2 * k + nu) * la) * reciprocal_gamma(k + nu + 1) / math.factorial(k) for k in range(n)]
    return [_block(-nu / 2, 0, neg), _block(nu / 2, 0, pos)]


def macdonald_expansion(alpha, a, b) -> SingularProductExpansion:
    """Singular part of K_alpha(a sqrt u) K_alpha(b sqrt u) at u = 0."""
    return _macdonald_local(complex(alpha), complex(a), complex(b))[0].expansion


def _macdonald_local(al, a, b):
    nu = -al if al.real < 0 else al
    m, dist = _nearest_integer(nu)
    integer_m = m if dist <= INTEGER_ALPHA_TOL else None
    u_split = min(1.0, 1.0 / max(abs(a), abs(b)) ** 2)

    def factory(n):
        return _mul_blocks(_k_blocks(nu, a, n), _k_blocks(nu, b, n), n)

    loc = _build_local(factory, 1.0, u_split, "K_alpha small-argument series (pure powers and log series)",
                       _order(nu), integer_m)
    return loc, nu, u_split


def macdonald_bilinear_oracle(alpha, a, b, tol: float = 1e-10) -> BilinearResult:
    """gen-int of K_alpha(a sqrt u) K_alpha(b sqrt u) du from the definition.

    The singular coefficients come from the product of the small-argument
    series of the two Macdonald functions.
    """
    al, a, b = complex(alpha), complex(a), complex(b)
    _check_macdonald(a, b)
    near = _near_integer_oracle(lambda z: macdonald_bilinear_oracle(z, a, b, tol).value, al, lambda m: m != 0)
    if near is not None:
        return BilinearResult(near, False, "u=r²", "oracle")
    loc, nu, u_split = _macdonald_local(al, a, b)

    def f(u):
        r = math.sqrt(u)
        return bessel_k(nu, a * r) * bessel_k(nu, b * r)

    g = GenIntegrand(f=f, expansion=loc.subtracted, split=u_split, remainder=loc.remainder)
    value = gen_integrate(g, tol=tol)
    return BilinearResult(value, loc.expansion.anomalous, "u=r²", "oracle")


def macdonald_bilinear_quadrature(alpha, a, b, tol: float = 1e-12) -> BilinearResult:
    """Convergent integral int_0^oo K_alpha(ar) K_alpha(br) 2r dr for |Re alpha| < 1 by plain quadrature."""
    al, a, b = complex(alpha), complex(a), complex(b)
    _check_macdonald(a, b)
    if not abs(al.real) < 1:
        raise DomainError("the integral converges only for |Re alpha| < 1")

    def f(r):
        return 2 * r * bessel_k(al, a * r) * bessel_k(al, b * r)

    split = 1.0 / max(abs(a), abs(b))
    head, _ = _quad.gauss_kronrod(f, 0.0, split, epsabs=0.5 * tol, epsrel=1e-13)
    tail = _quad.semi_infinite_tail(f, split, epsabs=0.5 * tol, epsrel=1e-13)
    return BilinearResult(head + tail, False, "u=r²", "oracle")


# ---------------------------------------------------------------------------
# dimensional regularization of the Macdonald family

def resiu_family(alpha, a, b) -> complex:
    """gen-int (ab/4)^(-alpha) K_alpha(ar) K_alpha(br) d(r^2) for non-integer alpha.

    Equals pi/sin(pi alpha) ((b/2)^(-2 alpha) - (a/2)^(-2 alpha))/(a^2 - b^2),
    meromorphic in alpha with simple poles at the integers.
    """
    al, a, b = complex(alpha), complex(a), complex(b)
    return (_PI / sinpi(al) * (_cpow(b / 2, -2 * al) - _cpow(a / 2, -2 * al)) / (a * a - b * b))


def _resiu_correction(m: int, a: complex, b: complex) -> complex:
    """f'_{m-1}(-m): alpha-derivative of the u^-1 coefficient of the family at alpha = -m."""
    s = 0j
    for k in range(m):
        s += (_cpow(a / 2, 2 * k) * _cpow(b / 2, 2 * m - 2 - 2 * k)
              * (-digamma(1 + k) - digamma(m - k)))
    return (-1) ** (m - 1) / 4 * s


def macdonald_dimreg(m: int, a, b, *, radius: float = 0.25) -> tuple[complex, LaurentData]:
    """Anomalous Macdonald value at integer order m >= 1 by dimensional regularization.

    The family ``resiu_family`` has a simple pole at alpha = -m. Its
    finite part minus the derivative correction f'_{m-1}(-m) is the
    generalized integral of (ab/4)^m K_m K_m in u = r^2; dividing by
    (ab/4)^m gives ``macdonald_bilinear(m, a, b)``.

    For |a - b| < 1e-3 the value and the Laurent data are obtained by a
    Cauchy integral in b, since the family degenerates at a = b.

    Returns the value and the Laurent data (with the correction filled in).
    """
    m = int(m)
    if m < 1:
        raise DomainError("the anomalous case needs m >= 1")
    a, b = complex(a), complex(b)
    _check_macdonald(a, b)
    if abs(a - b) < LIMIT_BAND:
        # the family is singular at a = b; every Laurent coefficient is analytic in b
        rho = 0.25 * abs(a)
        pts = {}

        def comp(bb, i):
            if bb not in pts:
                pts[bb] = _dimreg_point(m, a, bb, radius)
            return pts[bb][i]

        value = _cauchy(lambda bb: comp(bb, 0), a, b, radius=rho)
        data = LaurentData(*(_cauchy(lambda bb, i=i: comp(bb, 1)[i], a, b, radius=rho) for i in range(3)))
        return value, data
    value, coeffs = _dimreg_point(m, a, b, radius)
    return value, LaurentData(*coeffs)


def _dimreg_point(m: int, a: complex, b: complex, radius: float):
    data = dimreg_extract(lambda z: resiu_family(z, a, b), -m, radius=radius)
    data = data.with_correction(_resiu_correction(m, a, b))
    value = data.gen_integral("plus") * _cpow(a * b / 4, -m)
    return value, (data.residue, data.finite_part, data.derivative_correction)


# ---------------------------------------------------------------------------
# Gegenbauer S closed forms (lambda = i beta)

def _rg_pair(al: complex, beta: complex) -> complex:
    """1/(Gamma(1/2+al-i beta) Gamma(1/2+al+i beta))."""
    return reciprocal_gamma(0.5 + al - 1j * beta) * reciprocal_gamma(0.5 + al + 1j * beta)


def _s_generic(al, b1, b2) -> complex:
    pref = cmath.exp((2 * al + 2) * _LN2) / ((b1 * b1 - b2 * b2) * sinpi(al))
    return pref * (cmath.cosh(_PI * b1) * _rg_pair(al, b2) - cmath.cosh(_PI * b2) * _rg_pair(al, b1))


def _s_generic_diag(al, beta) -> tuple[complex, float]:
    """Diagonal of the non-integer S formula as (mantissa, log_scale); beta != 0."""
    log = _log_cosh(_PI * beta) - ln_gamma(0.5 + al - 1j * beta) - ln_gamma(0.5 + al + 1j * beta)
    dpsi = (digamma(0.5 + al + 1j * beta) - digamma(0.5 + al - 1j * beta)
            + digamma(0.5 - 1j * beta) - digamma(0.5 + 1j * beta))
    mant = cmath.exp((2 * al + 1) * _LN2) * 1j / (beta * sinpi(al)) * dpsi
    return mant * cmath.exp(1j * log.imag), log.real


def _s_generic_zero(al) -> complex:
    return (cmath.exp((2 * al + 1) * _LN2) * (_PI ** 2 - 2 * trigamma(0.5 + al))
            / sinpi(al) * reciprocal_gamma(0.5 + al) ** 2)


def _s0(b1, b2) -> complex:
    d = digamma(0.5 - 1j * b1) + digamma(0.5 + 1j * b1) - digamma(0.5 - 1j * b2) - digamma(0.5 + 1j * b2)
    return 4 * cmath.cosh(_PI * b1) * cmath.cosh(_PI * b2) * d / (_PI ** 2 * (b1 * b1 - b2 * b2))


def _s0_diag(beta) -> tuple[complex, float]:
    log = 2 * _log_cosh(_PI * beta)
    mant = 2j * (trigamma(0.5 + 1j * beta) - trigamma(0.5 - 1j * beta)) / (beta * _PI ** 2)
    return mant * cmath.exp(1j * log.imag), log.real


def _s0_zero() -> complex:
    return -4 * tetragamma(0.5) / _PI ** 2


def _poch_pm(beta, k) -> complex:
    """(1/2+i beta)_k (1/2-i beta)_k."""
    return pochhammer(0.5 + 1j * beta, k) * pochhammer(0.5 - 1j * beta, k)


def _s_int_prefactor_log(m, b1, b2) -> complex:
    """log of (-1/4)^(m+1) prod Gamma(1/2+m +- i beta_i), without the sign."""
    return (-(m + 1) * _LN4 + ln_gamma(0.5 + m + 1j * b1) + ln_gamma(0.5 + m - 1j * b1)
            + ln_gamma(0.5 + m + 1j * b2) + ln_gamma(0.5 + m - 1j * b2))


def _s_int(m: int, b1, b2) -> complex:
    def part(b):
        return _poch_pm(b, m) * (_LN4 - digamma(0.5 + m + 1j * b) - digamma(0.5 + m - 1j * b))

    rhs = (part(b1) - part(b2)) / (b1 * b1 - b2 * b2)
    for k in range(m):
        ratio = _poch_pm(b2, m) * _poch_pm(b1, k) / _poch_pm(b2, k + 1)
        h = harmonic_shifted(m - 1 - k, 0.5 - m + 1j * b2) + harmonic_shifted(m - 1 - k, 0.5 - m - 1j * b2)
        rhs += ratio * (digamma(m - k) + digamma(1 + k) - h)
    return (-1) ** (m + 1) * rhs * cmath.exp(-_s_int_prefactor_log(m, b1, b2))


def _s_int_diag(m: int, beta) -> tuple[complex, float]:
    rhs = 0j
    for k in range(m):
        num = (_LN4 + digamma(m - k) + digamma(k + 1)
               - digamma(-0.5 - k + 1j * beta) - digamma(-0.5 - k - 1j * beta))
        rhs += num / ((k + 0.5) ** 2 + beta * beta)
    rhs -= 0.5j / beta * (trigamma(0.5 + m + 1j * beta) - trigamma(0.5 + m - 1j * beta))
    log = (_log_cosh(_PI * beta) - math.log(_PI) + (m + 1) * _LN4
           - ln_gamma(0.5 + m + 1j * beta) - ln_gamma(0.5 + m - 1j * beta))
    mant = (-1) ** (m + 1) * rhs
    return mant * cmath.exp(1j * log.imag), log.real


def _s_int_zero(m: int) -> complex:
    rhs = tetragamma(0.5 + m)
    for k in range(m):
        rhs += (_LN4 + digamma(m - k) + digamma(k + 1) - 2 * digamma(-0.5 - k)) / (k + 0.5) ** 2
    return (-1) ** (m + 1) * 4 ** (m + 1) * rhs / (_PI * math.gamma(0.5 + m) ** 2)


def _diag_with_zero(diag_pair, zero, beta) -> tuple[complex, float]:
    """Diagonal value handling beta -> 0 (an even, removable point of the 1/beta form)."""
    if abs(beta) < COINCIDENCE_TOL:
        return complex(zero()), 0.0
    if abs(beta) < LIMIT_BAND:
        return _cauchy_pair(diag_pair, 0j, beta)
    return diag_pair(beta)


def _two_point(off, diag_pair, b1, b2) -> tuple[complex, float]:
    """Off-diagonal formula with the coincidence b1 = b2 routed to the diagonal form."""
    d = abs(b1 - b2)
    if d < COINCIDENCE_TOL:
        return diag_pair(b1)
    if d < LIMIT_BAND:
        center, radius = _pair_center(b1)
        return _cauchy(lambda z: off(b1, z), center, b2, radius=radius), 0.0
    return off(b1, b2), 0.0


def _s_pair(al: complex, b1: complex, b2: complex) -> tuple[tuple[complex, float], bool]:
    m, dist = _nearest_integer(al)
    b1, b2 = _canonical_beta(b1), _canonical_beta(b2)
    if dist <= INTEGER_ALPHA_TOL:
        if m == 0:
            diag = lambda b: _diag_with_zero(_s0_diag, _s0_zero, b)  # noqa: E731
            return _two_point(_s0, diag, b1, b2), False
        diag = lambda b: _diag_with_zero(lambda x: _s_int_diag(m, x), lambda: _s_int_zero(m), b)  # noqa: E731
        return _two_point(lambda x, y: _s_int(m, x, y), diag, b1, b2), True
    if abs(al) < ALPHA_ZERO_BAND:
        return _cauchy_pair(lambda a: _s_pair_generic(a, b1, b2), 0j, al), False
    return _s_pair_generic(al, b1, b2), False


def _s_pair_generic(al, b1, b2) -> tuple[complex, float]:
    diag = lambda b: _diag_with_zero(lambda x: _s_generic_diag(al, x), lambda: _s_generic_zero(al), b)  # noqa: E731
    return _two_point(lambda x, y: _s_generic(al, x, y), diag, b1, b2)


def _check_s_alpha(al: complex) -> None:
    if not al.real > -1:
        raise DomainError("the S bilinear integral needs Re alpha > -1")


def gegenbauer_s_bilinear(alpha, beta1, beta2) -> BilinearResult:
    """gen-int_{-1}^1 S_{alpha,i beta1}(w) S_{alpha,i beta2}(w) (1-w^2)^alpha d2w in closed form.

    Non-integer alpha (continued from |Re alpha| < 1):
        2^(2 alpha+2)/((beta1^2-beta2^2) sin(pi alpha))
        (cosh(pi beta1)/(Gamma(1/2+alpha-i beta2) Gamma(1/2+alpha+i beta2)) - (beta1 <-> beta2)),
    with limit forms at alpha = 0, beta1 = beta2 and beta = 0. Positive
    integer alpha is anomalous (variable u = 2(w+1)) and uses the
    logarithmic formula with the finite psi/harmonic-number sum.

    Raises
    ------
    DomainError
        If Re alpha <= -1.
    """
    al, b1, b2 = complex(alpha), complex(beta1), complex(beta2)
    _check_s_alpha(al)
    pair, anomalous = _s_pair(al, b1, b2)
    return BilinearResult(_unpair(pair), anomalous, "u=2(w+1)", "closed_form")


# ---------------------------------------------------------------------------
# Gegenbauer Z closed forms

def _z_generic(al, l1, l2) -> complex:
    pref = cmath.exp((l1 + l2 + 1) * _LN2) / ((l1 * l1 - l2 * l2) * sinpi(al))
    t1 = reciprocal_gamma(0.5 - al + l1) * reciprocal_gamma(0.5 + al + l2)
    t2 = reciprocal_gamma(0.5 - al + l2) * reciprocal_gamma(0.5 + al + l1)
    return pref * (t1 - t2)


def _z_generic_diag(al, lam) -> tuple[complex, float]:
    dpsi = digamma(0.5 + al + lam) - digamma(0.5 - al + lam)
    mant = dpsi / (lam * sinpi(al))
    log = 2 * lam * _LN2 - ln_gamma(0.5 - al + lam) - ln_gamma(0.5 + al + lam)
    return mant * cmath.exp(1j * log.imag), log.real


def _z0(l1, l2) -> complex:
    return (cmath.exp((l1 + l2 + 2) * _LN2) * (digamma(0.5 + l1) - digamma(0.5 + l2))
            * reciprocal_gamma(0.5 + l1) * reciprocal_gamma(0.5 + l2) / (_PI * (l1 * l1 - l2 * l2)))


def _z0_diag(lam) -> tuple[complex, float]:
    log = (2 * lam + 1) * _LN2 - 2 * ln_gamma(0.5 + lam)
    mant = trigamma(0.5 + lam) / (_PI * lam)
    return mant * cmath.exp(1j * log.imag), log.real


def _z_int(m: int, l1, l2) -> complex:
    def part(lam):
        return (pochhammer(0.5 + lam, m) * pochhammer(0.5 - lam, m)
                * (-_LN4 + digamma(0.5 + m + lam) + digamma(0.5 - m + lam)))

    rhs = (part(l1) - part(l2)) / (l1 * l1 - l2 * l2)
    p2 = pochhammer(0.5 + l2, m) * pochhammer(0.5 - l2, m)
    s = 0j
    for k in range(m):
        ratio = (pochhammer(0.5 + l1, k) * pochhammer(0.5 - l1, k)
                 / (pochhammer(0.5 + l2, k + 1) * pochhammer(0.5 - l2, k + 1)))
        h = harmonic_shifted(m - 1 - k, 0.5 - m + l2) + harmonic_shifted(m - 1 - k, 0.5 - m - l2)
        s += ratio * (-digamma(m - k) - digamma(1 + k) + h)
    rhs -= p2 * s
    log = (l1 + l2 + 1) * _LN2 - math.log(_PI) - ln_gamma(0.5 + m + l1) - ln_gamma(0.5 + m + l2)
    return rhs * cmath.exp(log)


def _z_int_diag(m: int, lam) -> tuple[complex, float]:
    rhs = 0j
    for sgn in (1, -1):
        rhs += trigamma(0.5 + sgn * m + lam) - sgn * harmonic_shifted(m, 0.5 + sgn * lam) * _LN4
    rhs /= 2 * lam
    for k in range(m):
        rhs += ((digamma(1.5 + k + lam) + digamma(-0.5 - k + lam) - digamma(m - k) - digamma(1 + k))
                / (lam * lam - (0.5 + k) ** 2))
    log = (2 * lam + 1) * _LN2 - math.log(_PI) - ln_gamma(0.5 + m + lam) - ln_gamma(0.5 - m + lam)
    mant = (-1) ** m * rhs
    return mant * cmath.exp(1j * log.imag), log.real


def _near_half_integer(lam: complex, upto: int) -> float | None:
    """The half-integer h in {1/2, ..., upto-1/2} within LIMIT_BAND of lam, if any."""
    for j in range(upto):
        h = j + 0.5
        if abs(lam - h) < LIMIT_BAND:
            return h
    return None


def _z_int_off_safe(m: int, l1, l2) -> complex:
    if _near_half_integer(l1, m) is None and _near_half_integer(l2, m) is None:
        return _z_int(m, l1, l2)
    # shift both parameters together: the difference (and so the diagonal) is untouched
    return _cauchy(lambda t: _z_int(m, l1 + t, l2 + t), 0j, 0j, radius=0.2)


def _z_int_diag_safe(m: int, lam) -> tuple[complex, float]:
    h = _near_half_integer(lam, m)
    if h is not None:
        return _cauchy_pair(lambda z: _z_int_diag(m, z), h, lam, radius=0.2)
    return _z_int_diag(m, lam)


def _z_int_pair(m: int, l1, l2) -> tuple[complex, float]:
    if abs(l1 - l2) >= COINCIDENCE_TOL and (_near_half_integer(l1, m) is not None
                                            or _near_half_integer(l2, m) is not None):
        return _cauchy_pair(lambda t: _lambda_two_point(lambda x, y: _z_int(m, x, y),
                                                        lambda x: _z_int_diag(m, x), l1 + t, l2 + t),
                            0j, 0j, radius=0.2)
    return _lambda_two_point(lambda x, y: _z_int_off_safe(m, x, y),
                             lambda x: _z_int_diag_safe(m, x), l1, l2)


def _z_generic_diag_safe(al, lam) -> tuple[complex, float]:
    # Gamma(1/2-alpha+lambda) meets a pole where the psi difference has one too
    x = 0.5 - al + lam
    n = round(x.real)
    if n <= 0 and abs(x - n) < LIMIT_BAND:
        return _cauchy_pair(lambda z: _z_generic_diag(al, z), lam - (x - n), lam)
    return _z_generic_diag(al, lam)


def _lambda_two_point(off, diag_pair, l1, l2) -> tuple[complex, float]:
    d = abs(l1 - l2)
    if d < COINCIDENCE_TOL:
        return diag_pair(l1)
    if d < LIMIT_BAND:
        radius = min(0.25, 0.5 * abs(l1))
        return _cauchy(lambda z: off(l1, z), l1, l2, radius=radius), 0.0
    return off(l1, l2), 0.0


def _z_pair(al: complex, l1: complex, l2: complex) -> tuple[tuple[complex, float], bool]:
    m, dist = _nearest_integer(al)
    if dist <= INTEGER_ALPHA_TOL:
        m = abs(m)
        if m == 0:
            return _lambda_two_point(_z0, _z0_diag, l1, l2), False
        return _z_int_pair(m, l1, l2), True
    if abs(al) < ALPHA_ZERO_BAND:
        return _cauchy_pair(lambda a: _z_pair_generic(a, l1, l2), 0j, al), False
    return _z_pair_generic(al, l1, l2), False


def _z_pair_generic(al, l1, l2) -> tuple[complex, float]:
    return _lambda_two_point(lambda x, y: _z_generic(al, x, y),
                             lambda x: _z_generic_diag_safe(al, x), l1, l2)


def _check_z_lambdas(l1: complex, l2: complex) -> None:
    if not (l1.real > 0 and l2.real > 0):
        raise DomainError("the Z bilinear integral needs Re lambda_i > 0")


def gegenbauer_z_bilinear(alpha, lam1, lam2) -> BilinearResult:
    """gen-int_1^oo Z_{alpha,lam1}(w) Z_{alpha,lam2}(w) (w^2-1)^alpha d2w in closed form.

    Non-integer alpha:
        2^(lam1+lam2+1)/((lam1^2-lam2^2) sin(pi alpha))
        (1/(Gamma(1/2-alpha+lam1) Gamma(1/2+alpha+lam2)) - (lam1 <-> lam2)),
    with limit forms at alpha = 0 and lam1 = lam2. Nonzero integer alpha
    is anomalous (variable u = 2(w-1)); the value depends on |alpha| only.

    Raises
    ------
    DomainError
        If Re lam1 <= 0 or Re lam2 <= 0.
    """
    al, l1, l2 = complex(alpha), complex(lam1), complex(lam2)
    _check_z_lambdas(l1, l2)
    pair, anomalous = _z_pair(al, l1, l2)
    return BilinearResult(_unpair(pair), anomalous, "u=2(w−1)", "closed_form")


# ---------------------------------------------------------------------------
# Gegenbauer local series

def _hyp_coeffs(p, q, c_shift, n, sign=1.0) -> np.ndarray:
    """Coefficients (p)_j (q)_j/(j! Gamma(c_shift+j)) sign^j, j < n."""
    out = np.empty(n, dtype=complex)
    t = reciprocal_gamma(c_shift)
    for j in range(n):
        if j:
            t *= (p + j - 1) * (q + j - 1) / (j * (c_shift + j - 1)) * sign
        out[j] = t
    return out


def _hyp_coeffs_safe(p, q, c, n, sign=1.0) -> np.ndarray:
    # 1/Gamma(c+j) recurrence breaks when c is a non-positive integer; restart there
    m, dist = _nearest_integer(c)
    if m <= 0 and dist < 1e-12:
        out = np.zeros(n, dtype=complex)
        j0 = 1 - m
        if j0 < n:
            t = pochhammer(p, j0) * pochhammer(q, j0) / math.factorial(j0) * sign ** j0
            out[j0] = t
            for j in range(j0 + 1, n):
                t *= (p + j - 1) * (q + j - 1) / (j * (c + j - 1)) * sign
                out[j] = t
        return out
    return _hyp_coeffs(p, q, c, n, sign)


def _s_factor_blocks(al: complex, lam: complex, n: int) -> list[_Block]:
    """S_{al,lam}(w) near w = -1 as blocks in x = (1+w)/2."""
    m, dist = _nearest_integer(al)
    if dist <= INTEGER_ALPHA_TOL and m >= 0:
        return _log_factor_blocks(m, lam, n, family="S")
    s = sinpi(al)
    a = -cmath.cos(_PI * lam) / s * _hyp_coeffs_safe(0.5 + al + lam, 0.5 + al - lam, al + 1, n)
    c2 = cmath.exp(2 * al * _LN2) * _PI * reciprocal_gamma(0.5 + al + lam) * reciprocal_gamma(0.5 + al - lam)
    cser = _hyp_coeffs_safe(0.5 - al - lam, 0.5 - al + lam, 1 - al, n)
    cser = np.convolve(cser, binomial_series(-al, n, sign=-1.0))[:n]
    cser *= c2 / s * cmath.exp(-2 * al * _LN2)
    return [_block(0, 0, a), _block(-al, 0, cser)]


def _z_factor_blocks(al: complex, lam: complex, n: int) -> list[_Block]:
    """Z_{al,lam}(w) near w = 1 as blocks in x = (w-1)/2."""
    m, dist = _nearest_integer(al)
    if dist <= INTEGER_ALPHA_TOL and m >= 0:
        return _log_factor_blocks(m, lam, n, family="Z")
    s = sinpi(al)
    rt = math.sqrt(_PI) / s
    a = (-cmath.exp((lam - al - 0.5) * _LN2) * rt * reciprocal_gamma(0.5 - al + lam)
         * _hyp_coeffs_safe(0.5 + al + lam, 0.5 + al - lam, al + 1, n, sign=-1.0))
    cser = _hyp_coeffs_safe(0.5 - al - lam, 0.5 - al + lam, 1 - al, n, sign=-1.0)
    cser = np.convolve(cser, binomial_series(-al, n, sign=1.0))[:n]
    cser *= (cmath.exp((lam + al - 0.5) * _LN2) * rt * reciprocal_gamma(0.5 + al + lam)
             * cmath.exp(-2 * al * _LN2))
    return [_block(0, 0, a), _block(-al, 0, cser)]


def _log_factor_blocks(m: int, lam: complex, n: int, family: str) -> list[_Block]:
    """Logarithmic local series at integer alpha = m >= 0.

    S_{m,lam}(w), x = (1+w)/2:
        R [sum_{k<m} h_k x^(k-m) + sum_j c_j (-x)^j (psi_j - ln x)],
    Z_{m,lam}(w), x = (w-1)/2:
        [sum_{k<m} h_k (-x)^(k-m) + sum_j x^j (c_j (psi_j - ln x) - c_j psi(a_j))]/norm,
    with h_k = (1/2+lam-k)_{2k} (m-k-1)!/k! and c_j = (1/2+lam-m-j)_{2m+2j}/(j!(j+m)!).
    """
    head = np.array([pochhammer(0.5 + lam - k, 2 * k) * math.factorial(m - k - 1) / math.factorial(k)
                     for k in range(m)], dtype=complex)
    a0 = 0.5 + lam - m
    coef = pochhammer(a0, 2 * m) / math.factorial(m)
    coef_psi = poch_digamma(a0, 2 * m) / math.factorial(m)
    psi1, psi2, psi3 = digamma(1 + m), digamma(1), digamma(0.5 + lam + m)
    psi4 = digamma(0.5 - lam + m) if family == "S" else 0j
    c0 = np.zeros(n, dtype=complex)
    c1 = np.zeros(n, dtype=complex)
    for j in range(n):
        if j:
            a = a0 - j
            f = (0.5 + lam + m + j - 1) / (j * (j + m))
            coef, coef_psi = f * a * coef, f * (a * coef_psi - coef)
            psi1 += 1.0 / (m + j)
            psi2 += 1.0 / j
            psi3 += 1.0 / (0.5 + lam + m + j - 1)
            if family == "S":
                psi4 += 1.0 / (0.5 - lam + m + j - 1)
        if family == "S":
            sgn = (-1) ** j
            c0[j] = sgn * coef * (psi1 + psi2 - psi3 - psi4)
            c1[j] = -sgn * coef
        else:
            c0[j] = coef * (psi1 + psi2 - psi3) - coef_psi
            c1[j] = -coef
    if family == "S":
        scale = reciprocal_gamma(0.5 + lam + m) * reciprocal_gamma(0.5 - lam + m)
    else:
        scale = 1.0 / (math.sqrt(2 * _PI) * (-1) ** m * cmath.exp((m - lam) * _LN2)
                       * cmath.exp(ln_gamma(0.5 + lam + m)))
        head = head * np.array([(-1) ** (k - m) for k in range(m)])
    blocks = [_block(0, 0, scale * c0), _block(0, 1, scale * c1)]
    if m:
        blocks.insert(0, _block(-m, 0, scale * head))
    return blocks


def _measure_blocks(al: complex, n: int, sign: float) -> list[_Block]:
    """4^al x^al (1 + sign x)^al."""
    return [_block(al, 0, cmath.exp(2 * al * _LN2) * binomial_series(al, n, sign=sign))]


def _s_local(al, b1, b2) -> _LocalProduct:
    m, dist = _nearest_integer(al)
    integer_m = m if dist <= INTEGER_ALPHA_TOL else None
    meas_al = complex(m) if integer_m is not None else al
    l1, l2 = 1j * complex(b1), 1j * complex(b2)

    def factory(n):
        prod = _mul_blocks(_s_factor_blocks(al, l1, n), _s_factor_blocks(al, l2, n), n)
        return _mul_blocks(prod, _measure_blocks(meas_al, n, -1.0), n)

    prov = "log series of S at integer alpha" if integer_m is not None else "connection formula for S at w = -1"
    return _build_local(factory, 4.0, 0.25, prov, max(_order(al), 40), integer_m)


def _z_local(al, l1, l2) -> _LocalProduct:
    m, dist = _nearest_integer(al)
    if dist <= INTEGER_ALPHA_TOL:
        al = complex(abs(m))
        m = abs(m)
    integer_m = m if dist <= INTEGER_ALPHA_TOL else None

    def factory(n):
        prod = _mul_blocks(_z_factor_blocks(al, l1, n), _z_factor_blocks(al, l2, n), n)
        return _mul_blocks(prod, _measure_blocks(al, n, 1.0), n)

    prov = "log series of Z at integer alpha" if integer_m is not None else "connection formula for Z at w = 1"
    return _build_local(factory, 4.0, 0.25, prov, max(_order(al), 40), integer_m)


def gegenbauer_s_expansion(alpha, beta1, beta2) -> SingularProductExpansion:
    """Singular part at u = 0 of the S integrand in u = 2(w+1)."""
    return _s_local(complex(alpha), complex(beta1), complex(beta2)).expansion


def gegenbauer_z_expansion(alpha, lam1, lam2) -> SingularProductExpansion:
    """Singular part at u = 0 of the Z integrand in u = 2(w-1)."""
    return _z_local(complex(alpha), complex(lam1), complex(lam2)).expansion


def _s_integrand(al, b1, b2):
    l1, l2 = 1j * b1, 1j * b2

    def f(u):
        w = u / 2 - 1
        weight = _cpow((4 - u) / 2 * (u / 2), al)
        return gegen_s(al, l1, w) * gegen_s(al, l2, w) * weight

    return f


def gegenbauer_s_bilinear_oracle(alpha, beta1, beta2, tol: float = 1e-10, *,
                                 scale: float = 1.0) -> BilinearResult:
    """The S bilinear integral from the definition, in u = 2(w+1).

    Parameters
    ----------
    scale : float
        Integrate in v = u/scale instead, that is c f(c v) dv with c = scale.
        For anomalous integrands the value shifts by -f_{-1} ln(scale).
    """
    al, b1, b2 = complex(alpha), complex(beta1), complex(beta2)
    _check_s_alpha(al)
    c = float(scale)
    if not c > 0:
        raise DomainError("scale must be positive")
    if abs(al + 1) < ORACLE_NEAR_INTEGER:
        raise DomainError(f"the S oracle needs alpha at least {ORACLE_NEAR_INTEGER} away from -1")
    near = _near_integer_oracle(lambda z: gegenbauer_s_bilinear_oracle(z, b1, b2, tol, scale=c).value,
                                al, lambda m: m > 0)
    if near is not None:
        return BilinearResult(near, False, "u=2(w+1)", "oracle")
    loc = _s_local(al, b1, b2)
    f = _s_integrand(al, b1, b2)
    terms = tuple((k, coef * c ** (k + 1)) for k, coef in loc.subtracted.terms)
    g = GenIntegrand(
        f=lambda v: c * f(c * v),
        expansion=SingularExpansion(terms),
        split=1.0 / c,
        support=4.0 / c,
        remainder=lambda v: c * loc.remainder(c * v),
    )
    value = gen_integrate(g, tol=tol)
    return BilinearResult(value, loc.expansion.anomalous, "u=2(w+1)", "oracle")


def gegenbauer_z_bilinear_oracle(alpha, lam1, lam2, tol: float = 1e-10) -> BilinearResult:
    """The Z bilinear integral from the definition, in u = 2(w-1)."""
    al, l1, l2 = complex(alpha), complex(lam1), complex(lam2)
    _check_z_lambdas(l1, l2)
    near = _near_integer_oracle(lambda z: gegenbauer_z_bilinear_oracle(z, l1, l2, tol).value, al, lambda m: m != 0)
    if near is not None:
        return BilinearResult(near, False, "u=2(w−1)", "oracle")
    loc = _z_local(al, l1, l2)

    def f(u):
        w = 1 + u / 2
        weight = _cpow(u / 2 * (2 + u / 2), al)
        return gegen_z(al, l1, w) * gegen_z(al, l2, w) * weight

    power = 1 + (l1 + l2).real
    g = GenIntegrand(f=f, expansion=loc.subtracted, split=1.0,
                     tail_decay=("algebraic", power), remainder=loc.remainder)
    value = gen_integrate(g, tol=tol)
    return BilinearResult(value, loc.expansion.anomalous, "u=2(w−1)", "oracle")


# ---------------------------------------------------------------------------
# large-parameter limit

def _macdonald_diag_value(al: complex, p: float) -> complex:
    m, dist = _nearest_integer(al)
    if dist <= INTEGER_ALPHA_TOL:
        return _mac_integer_diag(abs(m), complex(p))
    return _mac_generic_diag(al, complex(p))


def _scaled_ratio(kind: str, al: complex, p: float) -> complex:
    if kind == "S_case":
        mant, log = _s_pair(al, complex(p), complex(p))[0]
        log += 2 * math.log(_PI) - 2 * _PI * p + 2 * al.real * (math.log(p) - _LN2)
        mant *= cmath.exp(2j * al.imag * (math.log(p) - _LN2))
    elif kind == "Z_case":
        mant, log = _z_pair(al, complex(p), complex(p))[0]
        lg = ln_gamma(0.5 + al + p)
        shift = math.log(_PI) + 2 * lg - (2 * p + 1) * _LN2 - 2 * al * math.log(p)
        log += shift.real
        mant *= cmath.exp(1j * shift.imag)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return mant * math.exp(log) / _macdonald_diag_value(al, p)


def bilinear_asymptotics_check(kind: str, alpha, large_param_grid: Sequence[float]) -> AsymptoticsReport:
    """Compare the scaled bilinear integrals with their Macdonald limit.

    ``"S_case"``: pi^2 e^(-2 pi b) b^(2 alpha)/2^(2 alpha) gen-int S_{alpha,i b}^2 (1-w^2)^alpha d2w
    over gen-int K_alpha(b r)^2 2r dr.
    ``"Z_case"``: pi Gamma(1/2+alpha+l)^2/(2^(2l+1) l^(2 alpha)) gen-int Z_{alpha,l}^2 (w^2-1)^alpha d2w
    over gen-int K_alpha(l r)^2 2r dr.

    Both ratios tend to 1; ``rate`` is the fitted exponent of |ratio - 1|
    against the parameter. It comes out near -2. For Z at half-integer
    alpha the ratio is 1 up to rounding and the rate is meaningless.
    """
    al = complex(alpha)
    if kind == "S_case":
        _check_s_alpha(al)
    params = tuple(float(p) for p in large_param_grid)
    ratios = tuple(_scaled_ratio(kind, al, p) for p in params)
    errors = tuple(abs(r - 1) for r in ratios)
    rate = float("nan")
    good = [(p, e) for p, e in zip(params, errors) if e > 0]
    if len(good) >= 2:
        xs = np.log([p for p, _ in good])
        ys = np.log([e for _, e in good])
        rate = float(np.polyfit(xs, ys, 1)[0])
    return AsymptoticsReport(kind, float(al.real), params, ratios, errors, rate)


# ---------------------------------------------------------------------------
# Green's identity

def _extrapolate(fn: Callable[[float], complex], exponents: list[float], logs: bool,
                 d_max: float, n_points: int = 24) -> complex:
    """Constant term of fn(d) = c0 + sum c_e d^e (ln d)^p by least squares on a log-spaced grid."""
    ds = np.geomspace(d_max, d_max * 1e-3, n_points)
    cols = [np.ones_like(ds)]
    for e in exponents:
        cols.append((ds / d_max) ** e)
        if logs:
            cols.append((ds / d_max) ** e * np.log(ds))
            cols.append((ds / d_max) ** e * np.log(ds) ** 2)
    a = np.column_stack(cols)
    y = np.array([complex(fn(d)) for d in ds])
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    return complex(sol[0])


def _boundary_exponents(nu: float, step: float, n_max: float) -> list[float]:
    out: list[float] = []
    for base in (step * (1 - nu), 0.0, step * (1 + nu)):
        e = base
        while e <= n_max:
            if e > 1e-9 and all(abs(e - x) > 1e-6 for x in out):
                out.append(e)
            e += step
    return sorted(out)


def green_identity_check(family: str, params: dict) -> float:
    """Relative residual between the bilinear integral and its Wronskian boundary form.

    For two eigenfunctions f1, f2 of the same Sturm-Liouville operator
    (p f')' - q f = -E rho f, the integral of f1 f2 rho equals the limit at
    the singular endpoint of p (f1 f2' - f1' f2) divided by E1 - E2. The
    limit is extrapolated from small offsets. Only convergent integrals
    (|alpha| < 1) are accepted. The residual is divided by max(1, |integral|).

    Parameters
    ----------
    family : {"macdonald", "gegenbauer_s", "gegenbauer_z"}
    params : dict
        ``alpha`` plus ``a, b`` / ``beta1, beta2`` / ``lam1, lam2``.

    Raises
    ------
    DomainError
        On coincident eigenvalues or parameters outside the convergent range.
    """
    al = float(params["alpha"])
    if not abs(al) < 1:
        raise DomainError("Green's identity check needs a convergent integral (|alpha| < 1)")
    nu = abs(al)
    logs = nu < INTEGER_ALPHA_TOL
    if family == "macdonald":
        a, b = complex(params["a"]), complex(params["b"])
        de = a * a - b * b
        if abs(a - b) < COINCIDENCE_TOL:
            raise DomainError("eigenvalues coincide (a = b)")

        def bnd(d):
            fa, fb = bessel_k(al, a * d), bessel_k(al, b * d)
            da, db = a * bessel_k_derivative(al, a * d), b * bessel_k_derivative(al, b * d)
            return -2 * d * (da * fb - fa * db) / de

        exps = _boundary_exponents(nu, 2.0, 9.0)
        boundary = _extrapolate(bnd, exps, logs, d_max=0.8 / max(abs(a), abs(b)))
        closed = macdonald_bilinear(al, a, b).value
    elif family == "gegenbauer_s":
        b1, b2 = complex(params["beta1"]), complex(params["beta2"])
        if abs(_canonical_beta(b1) - _canonical_beta(b2)) < COINCIDENCE_TOL:
            raise DomainError("eigenvalues coincide (beta1^2 = beta2^2)")
        l1, l2 = 1j * b1, 1j * b2
        de = b1 * b1 - b2 * b2

        def bnd(d):
            w = -1 + d
            s1, s2 = gegen_s(al, l1, w), gegen_s(al, l2, w)
            d1, d2 = gegen_s_derivative(al, l1, w), gegen_s_derivative(al, l2, w)
            return 2 * _cpow(d * (2 - d), al + 1) * (s1 * d2 - d1 * s2) / de

        exps = _boundary_exponents(nu, 1.0, 4.0)
        boundary = _extrapolate(bnd, exps, logs, d_max=0.05)
        closed = gegenbauer_s_bilinear(al, b1, b2).value
    elif family == "gegenbauer_z":
        l1, l2 = complex(params["lam1"]), complex(params["lam2"])
        if abs(l1 - l2) < COINCIDENCE_TOL:
            raise DomainError("eigenvalues coincide (lam1 = lam2)")
        de = l1 * l1 - l2 * l2

        def bnd(d):
            w = 1 + d
            z1, z2 = gegen_z(al, l1, w), gegen_z(al, l2, w)
            d1, d2 = gegen_z_derivative(al, l1, w), gegen_z_derivative(al, l2, w)
            return 2 * _cpow(d * (2 + d), al + 1) * (z1 * d2 - d1 * z2) / de

        exps = _boundary_exponents(nu, 1.0, 4.0)
        boundary = _extrapolate(bnd, exps, logs, d_max=0.05)
        closed = gegenbauer_z_bilinear(al, l1, l2).value
    else:
        raise ValueError(f"unknown family {family!r}")
    return abs(closed - boundary) / max(1.0, abs(closed))
