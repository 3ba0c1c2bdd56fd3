"""Modified Bessel functions I and K of complex order, and their relatives.

Evaluation paths
----------------
``bessel_i``
    Ascending series.
``bessel_k``
    For ``|r| <= 2``: the connection formula
    ``K = pi/(2 sin(pi a)) (I_{-a} - I_a)`` for non-integer order, the
    logarithmic series at integer order, and a Cauchy integral in the
    order around the integer for orders within 0.05 of one.
    For ``|r| > 2``: Steed's continued fraction for K_mu, K_{mu+1} with
    ``|Re mu| <= 1/2``, then upward recurrence in the order.

Standard Bessel and Hankel functions are obtained by rotating the argument.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

import numpy as np
from scipy import integrate

from . import _quad
from .errors import ConvergenceError, DomainError
from .gammakit import EULER_GAMMA, gamma, reciprocal_gamma, sinpi

__all__ = [
    "INTEGER_ORDER_TOL",
    "NEAR_INTEGER_WIDTH",
    "bessel_half_integer",
    "bessel_i",
    "bessel_j",
    "bessel_k",
    "bessel_k_basset_oracle",
    "bessel_k_derivative",
    "bessel_poisson_oracles",
    "bessel_recurrence_apply",
    "hankel",
]

#: Orders within this distance of an integer use the logarithmic series.
INTEGER_ORDER_TOL = 1e-10
#: Orders closer than this to an integer avoid the 1/sin(pi a) formula.
NEAR_INTEGER_WIDTH = 0.05
#: Radius and node count of the Cauchy integral in the order.
_ORDER_CONTOUR_RADIUS = 0.25
_ORDER_CONTOUR_NODES = 32
#: Arguments up to this modulus use series; beyond it the continued fraction.
SERIES_RADIUS = 2.0
SERIES_MAX_TERMS = 400
_SERIES_EPS = 1e-17


def _cpow(z: complex, p: complex) -> complex:
    """Principal power z**p with 0**p = 0 for Re p > 0."""
    if z == 0:
        return 0j if p.real > 0 else complex(float("inf"))
    return cmath.exp(p * cmath.log(z))


def _check_argument(r: complex) -> None:
    if r.imag == 0.0 and r.real <= 0.0:
        raise DomainError(f"argument {r} lies on the cut ]-oo, 0]")


def _nearest_integer(alpha: complex) -> tuple[int, float]:
    m = int(round(alpha.real))
    return m, abs(alpha - m)


def _i_series(alpha: complex, r: complex) -> complex:
    """sum_n (r/2)^(2n+alpha) / (n! Gamma(alpha+n+1))."""
    m, dist = _nearest_integer(alpha)
    if m < 0 and dist == 0.0:
        alpha = complex(-m)  # I_{-m} = I_m
    half = r / 2.0
    q = half * half
    term = _cpow(half, alpha) * reciprocal_gamma(alpha + 1)
    if term == 0:
        return 0j
    total = term
    cap = SERIES_MAX_TERMS + int(2 * abs(r))
    for n in range(1, cap):
        term = term * q / (n * (alpha + n))
        total += term
        if abs(term) <= _SERIES_EPS * abs(total) and n > abs(r) / 2:
            return total
    raise ConvergenceError(f"I-series for order {alpha} at r={r} did not converge in {cap} terms")


def bessel_i(alpha, r) -> complex:
    """Modified Bessel function of the first kind I_alpha(r).

    Parameters
    ----------
    alpha : complex
        Order.
    r : complex
        Argument off the cut ]-oo, 0] (r = 0 is allowed for Re alpha >= 0).

    Raises
    ------
    OverflowError
        When the result does not fit in double precision.
    """
    alpha, r = complex(alpha), complex(r)
    if r == 0:
        if alpha == 0:
            return 1 + 0j
        if alpha.real > 0:
            return 0j
        raise DomainError("I_alpha(0) is singular for Re alpha <= 0, alpha != 0")
    _check_argument(r)
    if abs(r.real) > 700:
        raise OverflowError(f"I_alpha({r}) overflows double precision")
    return _i_series(alpha, r)


def _k_integer_series(m: int, r: complex) -> complex:
    """Logarithmic series for K_m, m >= 0."""
    half = r / 2.0
    log_half = cmath.log(half)
    total = 0j
    if m > 0:
        p = _cpow(half, complex(-m))
        q = half * half
        for k in range(m):
            total += 0.5 * (-1) ** k * math.factorial(m - k - 1) / math.factorial(k) * p
            p *= q
    # second sum
    q = half * half
    t = _cpow(half, complex(m)) / math.factorial(m)  # (r/2)^(2j+m)/(j!(m+j)!)
    hj = 0.0
    hmj = sum(1.0 / i for i in range(1, m + 1))
    sign = 0.5 * (-1) ** m
    acc = 0j
    for j in range(SERIES_MAX_TERMS):
        if j > 0:
            t = t * q / (j * (m + j))
            hj += 1.0 / j
            hmj += 1.0 / (m + j)
        term = (hj + hmj - 2 * EULER_GAMMA - 2 * log_half) * t
        acc += term
        if abs(term) <= _SERIES_EPS * abs(acc) and j > 2:
            return total + sign * acc
    raise ConvergenceError("integer-order K series did not converge")


def _k_connection(alpha: complex, r: complex) -> complex:
    return math.pi / (2 * sinpi(alpha)) * (_i_series(-alpha, r) - _i_series(alpha, r))


def _order_contour(fn: Callable[[complex], complex], center: int, alpha: complex) -> complex:
    """Evaluate a holomorphic function of the order at ``alpha`` via Cauchy's formula."""
    rho = _ORDER_CONTOUR_RADIUS
    n = _ORDER_CONTOUR_NODES
    total = 0j
    for k in range(n):
        e = cmath.exp(2j * math.pi * (k + 0.5) / n)
        z = center + rho * e
        total += fn(z) * (rho * e) / (z - alpha)
    return total / n


def _k_small(alpha: complex, r: complex) -> complex:
    m, dist = _nearest_integer(alpha)
    if dist <= INTEGER_ORDER_TOL:
        return _k_integer_series(abs(m), r)
    if dist < NEAR_INTEGER_WIDTH:
        return _order_contour(lambda z: _k_connection(z, r), m, alpha)
    return _k_connection(alpha, r)


def _k_steed(mu: complex, x: complex) -> tuple[complex, complex]:
    """K_mu(x) and K_{mu+1}(x) by Steed's continued fraction (|Re mu| <= 1/2)."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0j, 1 + 0j
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels) < 1e-17 * abs(s) and abs(delh) < 1e-17 * abs(h):
            break
    else:
        raise ConvergenceError(f"continued fraction for K at x={x} did not converge")
    h = a1 * h
    k_mu = cmath.sqrt(math.pi / (2.0 * x)) * cmath.exp(-x) / s
    k_mu1 = k_mu * (mu + x + 0.5 - h) / x
    return k_mu, k_mu1


def _k_large(alpha: complex, r: complex) -> complex:
    if alpha.real < 0:
        alpha = -alpha
    n = int(math.floor(alpha.real + 0.5))
    mu = alpha - n
    k0, k1 = _k_steed(mu, r)
    if n == 0:
        return k0
    for j in range(1, n):
        k0, k1 = k1, k0 + 2 * (mu + j) / r * k1
    return k1


def bessel_k(alpha, r) -> complex:
    """Macdonald function K_alpha(r).

    Parameters
    ----------
    alpha : complex
        Order; K is even in the order.
    r : complex
        Argument with ``Re r >= 0``, ``r != 0``. Imaginary arguments are
        supported for the Hankel functions.
    """
    alpha, r = complex(alpha), complex(r)
    if r == 0:
        raise DomainError("K_alpha(0) is singular")
    if r.real < 0:
        raise DomainError(f"K_alpha(r) requires Re r >= 0, got {r}")
    if alpha.real < 0:
        alpha = -alpha
    if abs(r) <= SERIES_RADIUS:
        return _k_small(alpha, r)
    return _k_large(alpha, r)


def bessel_k_derivative(alpha, r) -> complex:
    """d/dr K_alpha(r) = -K_{alpha-1}(r) - (alpha/r) K_alpha(r)."""
    alpha, r = complex(alpha), complex(r)
    return -bessel_k(alpha - 1, r) - alpha / r * bessel_k(alpha, r)


def bessel_k_basset_oracle(alpha, r, tol: float = 1e-13) -> complex:
    """K_alpha(r) from the integral (1/2) int_0^oo exp(-(r/2)(s+1/s)) s^(alpha-1) ds.

    With s = e^t the integrand decays doubly exponentially, so the
    trapezoid rule in t converges geometrically.
    """
    alpha, r = complex(alpha), complex(r)
    if not r.real > 0:
        raise DomainError("the Basset integral needs Re r > 0")
    a = abs(alpha.real)
    # choose t_max with Re(r) cosh t - a t beyond the double-precision range
    t_max = 1.0
    while r.real * math.cosh(t_max) - a * t_max < 760 + math.log(max(1.0, a)):
        t_max += 0.25

    def f(t):
        ex = -r * math.cosh(t) + alpha * t
        if ex.real < -745:
            return 0j
        return cmath.exp(ex)

    return 0.5 * _quad.trapezoid_line(f, t_max, tol=tol)


def bessel_poisson_oracles(kind: str, alpha, r, tol: float = 1e-12) -> complex:
    """Evaluate a Poisson-type integral representation.

    ``kind`` is one of:

    ``"I_poi"``
        I_a(r) = (r/2)^a/(sqrt(pi) Gamma(a+1/2)) int_{-1}^1 (1-t^2)^(a-1/2) e^(rt) dt,
        Re a > -1/2.
    ``"K_poiss1"``
        K_a(r) = sqrt(pi) (r/2)^a/Gamma(a+1/2) int_1^oo e^(-sr) (s^2-1)^(a-1/2) ds,
        Re a > -1/2, Re r > 0.
    ``"K_poiss2"``
        K_a(r) = Gamma(a+1/2)/(2 sqrt(pi)) (r/2)^(-a) int_R e^(-isr) (s^2+1)^(-a-1/2) ds,
        Re a > 0, r > 0.
    """
    alpha, r = complex(alpha), complex(r)
    if kind == "I_poi":
        if not alpha.real > -0.5:
            raise DomainError("(poi) needs Re alpha > -1/2")
        p = alpha - 0.5

        def f(t, dl, dr):
            return _cpow(complex(dl * dr), p) * cmath.exp(r * t)

        integral = _quad.tanh_sinh(f, -1.0, 1.0, tol=tol)
        return _cpow(r / 2, alpha) * reciprocal_gamma(alpha + 0.5) / math.sqrt(math.pi) * integral
    if kind == "K_poiss1":
        if not (alpha.real > -0.5 and r.real > 0):
            raise DomainError("(poiss1) needs Re alpha > -1/2 and Re r > 0")
        p = alpha - 0.5

        def f(s, d):
            ex = -r * s
            if ex.real < -745:
                return 0j
            return cmath.exp(ex) * _cpow(complex(d * (d + 2.0)), p)

        integral = _quad.exp_sinh(f, 1.0, tol=tol, scale=1.0 / abs(r))
        return math.sqrt(math.pi) * _cpow(r / 2, alpha) * reciprocal_gamma(alpha + 0.5) * integral
    if kind == "K_poiss2":
        if not (alpha.real > 0 and r.imag == 0 and r.real > 0):
            raise DomainError("(poiss2) needs Re alpha > 0 and r > 0")
        x = r.real
        p = -alpha - 0.5

        # integrate by parts once: int_0^oo cos(xs) g ds = -(1/x) int_0^oo sin(xs) g'(s) ds,
        # which decays one power faster and keeps the QAWF cycle extrapolation stable
        def dg(s):
            return 2 * p * s * _cpow(complex(s * s + 1), p - 1)

        vr = -integrate.quad(lambda s: dg(s).real, 0, np.inf, weight="sin", wvar=x,
                             epsabs=tol * 0.1, limlst=200)[0] / x
        vi = 0.0
        if alpha.imag != 0:
            vi = -integrate.quad(lambda s: dg(s).imag, 0, np.inf, weight="sin", wvar=x,
                                 epsabs=tol * 0.1, limlst=200)[0] / x
        # the integrand is even in s: int_R = 2 int_0^oo cos(sr) (...)
        integral = 2 * complex(vr, vi)
        return gamma(alpha + 0.5) / (2 * math.sqrt(math.pi)) * _cpow(r / 2, -alpha) * integral
    raise ValueError(f"unknown Poisson representation {kind!r}")


def bessel_j(alpha, r) -> complex:
    """Bessel function J_alpha(r) for r > 0.

    Uses J_a(r) = e^(i pi a/2) I_a(-ir) for r <= 5 and the Hankel average
    J = (H^+ + H^-)/2 beyond.
    """
    alpha, r = complex(alpha), complex(r)
    if not (r.imag == 0 and r.real > 0):
        raise DomainError("bessel_j is implemented for real positive arguments")
    if r.real <= 5.0:
        return cmath.exp(0.5j * math.pi * alpha) * _i_series(alpha, -1j * r)
    return 0.5 * (hankel(+1, alpha, r) + hankel(-1, alpha, r))


def hankel(sign: int, alpha, r) -> complex:
    """Hankel functions H^(+-)_a(r) = (2/pi) e^(-+i pi (a+1)/2) K_a(-+ i r), r > 0."""
    alpha, r = complex(alpha), complex(r)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not (r.imag == 0 and r.real > 0):
        raise DomainError("hankel is implemented for real positive arguments")
    return 2 / math.pi * cmath.exp(-sign * 0.5j * math.pi * (alpha + 1)) * bessel_k(alpha, -sign * 1j * r)


def bessel_recurrence_apply(direction: str, n: int, alpha, r) -> complex:
    """Apply the order-raising or lowering differential operator n times.

    ``K_up``:   (-(1/r) d/dr)^n r^(-a) K_a(r) = r^(-a-n) K_(a+n)(r)
    ``K_down``: (-(1/r) d/dr)^n r^(a) K_a(r)  = r^(a-n) K_(a-n)(r)
    ``I_up``:   ((1/r) d/dr)^n r^(-a) I_a(r)  = r^(-a-n) I_(a+n)(r)
    ``I_down``: ((1/r) d/dr)^n r^(a) I_a(r)   = r^(a-n) I_(a-n)(r)
    """
    alpha, r = complex(alpha), complex(r)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if direction == "K_up":
        return _cpow(r, -alpha - n) * bessel_k(alpha + n, r)
    if direction == "K_down":
        return _cpow(r, alpha - n) * bessel_k(alpha - n, r)
    if direction == "I_up":
        return _cpow(r, -alpha - n) * bessel_i(alpha + n, r)
    if direction == "I_down":
        return _cpow(r, alpha - n) * bessel_i(alpha - n, r)
    raise ValueError(f"unknown direction {direction!r}")


# Half-integer closed forms. A state maps a basis function name to a dict
# {p: c} standing for sum_p c * basis(r) * r**(-p), with integer c.
_DERIV = {"exp_neg": ("exp_neg", -1), "sinh": ("cosh", 1), "cosh": ("sinh", 1),
          "sin": ("cos", 1), "cos": ("sin", -1), "exp_pi": ("exp_pi", 1j),
          "exp_mi": ("exp_mi", -1j)}
_BASIS = {"exp_neg": lambda r: cmath.exp(-r), "sinh": cmath.sinh, "cosh": cmath.cosh,
          "sin": cmath.sin, "cos": cmath.cos, "exp_pi": lambda r: cmath.exp(1j * r),
          "exp_mi": lambda r: cmath.exp(-1j * r)}


def _ladder(basis: str, k: int, sign: int) -> dict:
    """Apply (sign (1/r) d/dr)^k to basis(r)/r with exact (Gaussian) integer coefficients."""
    state = {basis: {1: 1}}
    for _ in range(k):
        new: dict = {}
        for b, poly in state.items():
            db, dsign = _DERIV[b]
            for p, c in poly.items():
                # d/dr (b r^-p) = b' r^-p - p b r^-(p+1); then times sign/r
                new.setdefault(db, {})
                new[db][p + 1] = new[db].get(p + 1, 0) + sign * dsign * c
                new.setdefault(b, {})
                new[b][p + 2] = new[b].get(p + 2, 0) - sign * p * c
        state = new
    return state


def _eval_ladder(state: dict, r: complex) -> complex:
    total = 0j
    for b, poly in state.items():
        fb = _BASIS[b](r)
        total += fb * sum(c * r ** (-p) for p, c in poly.items())
    return total


def bessel_half_integer(kind: str, k: int, r) -> complex:
    """Closed forms at half-integer order via the differentiation ladders.

    ``kind``:

    ``"K"``       K_{1/2+k}(r) = sqrt(pi/2) r^(1/2+k) (-(1/r) d/dr)^k e^(-r)/r
    ``"I_plus"``  I_{1/2+k}(r) = sqrt(2/pi) r^(1/2+k) ((1/r) d/dr)^k sinh(r)/r
    ``"I_minus"`` I_{-1/2-k}(r) = sqrt(2/pi) r^(1/2+k) ((1/r) d/dr)^k cosh(r)/r
    ``"J_plus"``  J_{1/2+k}(r) = sqrt(2/pi) r^(1/2+k) (-(1/r) d/dr)^k sin(r)/r
    ``"J_minus"`` J_{-1/2-k}(r) = sqrt(2/pi) r^(1/2+k) ((1/r) d/dr)^k cos(r)/r
    ``"H_plus"``  H^+_{-1/2-k}(r) = sqrt(2/pi) r^(1/2+k) ((1/r) d/dr)^k e^(ir)/r
    ``"H_minus"`` H^-_{-1/2-k}(r) = sqrt(2/pi) r^(1/2+k) ((1/r) d/dr)^k e^(-ir)/r
    """
    r = complex(r)
    if k < 0:
        raise ValueError("k must be nonnegative")
    table = {
        "K": ("exp_neg", -1, math.sqrt(math.pi / 2)),
        "I_plus": ("sinh", 1, math.sqrt(2 / math.pi)),
        "I_minus": ("cosh", 1, math.sqrt(2 / math.pi)),
        "J_plus": ("sin", -1, math.sqrt(2 / math.pi)),
        "J_minus": ("cos", 1, math.sqrt(2 / math.pi)),
        "H_plus": ("exp_pi", 1, math.sqrt(2 / math.pi)),
        "H_minus": ("exp_mi", 1, math.sqrt(2 / math.pi)),
    }
    if kind not in table:
        raise ValueError(f"unknown kind {kind!r}")
    basis, sign, pref = table[kind]
    if kind in ("I_plus", "J_plus") and abs(r) <= max(2.0, k):
        # the closed form cancels for small r; apply the ladder to the Taylor series instead
        return pref * _cpow(r, complex(0.5 + k)) * _ladder_series(-1 if kind == "J_plus" else 1, k, r)
    return pref * _cpow(r, complex(0.5 + k)) * _eval_ladder(_ladder(basis, k, sign), r)


def _ladder_series(parity: int, k: int, r: complex) -> complex:
    """(sign (1/r) d/dr)^k of sinh(r)/r (parity 1) or sin(r)/r (parity -1, sign -1), termwise.

    With f = sum_n parity^n r^(2n)/(2n+1)!, each step maps r^(2n) to 2n r^(2n-2);
    for sin the sign -1 per step cancels parity^k, leaving (-1)^(n-k).
    """
    r2 = r * r
    total = 0j
    n = k
    # coefficient of r^(2(n-k)): 2^k n!/(n-k)! / (2n+1)!
    coef = 2.0 ** k / math.prod(range(k + 1, 2 * k + 2))
    term_pow = 1 + 0j
    while True:
        term = coef * term_pow * (parity ** (n - k))
        total += term
        if abs(term) <= 1e-17 * abs(total) or n > k + 400:
            return total
        n += 1
        coef *= n / ((n - k) * (2 * n) * (2 * n + 1))
        term_pow *= r2
