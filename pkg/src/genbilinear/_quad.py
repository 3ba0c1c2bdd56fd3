"""Quadrature kernels used by the oracles.

Adaptive Gauss-Kronrod comes from :func:`scipy.integrate.quad`. The
double-exponential rules below pass endpoint distances to the integrand in
addition to the abscissa, so that factors like ``(1 - x)**p`` can be formed
without the rounding loss of ``1 - x`` near the endpoint.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError

_HALF_PI = 0.5 * math.pi

# Largest |t| for the tanh-sinh map before endpoint distances underflow.
_TANH_SINH_TMAX = 6.0
# Largest t for the exp-sinh and sinh-sinh maps.
_EXP_SINH_TMAX = 6.5
# Abscissae beyond exp(_MAX_EXPONENT) are dropped to keep integrands finite.
_MAX_EXPONENT = 150.0
_MAX_LEVEL = 9


def gauss_kronrod(f: Callable[[float], complex], a: float, b: float, *,
                  epsabs: float = 1e-13, epsrel: float = 1e-13, limit: int = 400,
                  points=None) -> tuple[complex, float]:
    """Adaptive Gauss-Kronrod integral of a complex integrand on [a, b].

    Returns ``(value, error_estimate)``. Raises :class:`ConvergenceError`
    if QUADPACK reports a failure with an error estimate that misses the
    requested tolerance by more than a factor of 100.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit,
                             points=points, complex_func=True, full_output=1)
    val, err, info = res[0], res[1], res[2]
    err = abs(complex(err).real) + abs(complex(err).imag)
    if isinstance(info, dict) and "real" in info:
        ier = max(_ier(info["real"]), _ier(info["imag"]))
    else:
        ier = 0
    if not np.isfinite(val) or (ier not in (0,) and err > 100 * max(epsabs, epsrel * abs(val))):
        raise ConvergenceError(
            f"adaptive quadrature on [{a:g}, {b:g}] did not converge (error estimate {err:.3g})")
    return complex(val), err


def _ier(info) -> int:
    # per-part output is (infodict,) on success and (infodict, message, ...) otherwise
    if isinstance(info, tuple) and len(info) > 1:
        return 1
    return 0


def semi_infinite_tail(f: Callable[[float], complex], start: float, *, epsabs: float = 1e-13,
                       epsrel: float = 1e-12, max_doublings: int = 80,
                       algebraic_power: float | None = None) -> complex:
    """Integral of ``f`` over [start, infinity) on doubling intervals.

    The loop stops when a block contributes less than the tolerance. For an
    algebraic decay ``x**(-p)`` the remaining geometric tail of blocks is
    added in closed form.
    """
    if start <= 0:
        raise ValueError("start must be positive")
    total = 0j
    lo = start
    prev = None
    quiet = 0
    for _ in range(max_doublings):
        hi = 2.0 * lo
        block, _err = gauss_kronrod(f, lo, hi, epsabs=epsabs * 0.1, epsrel=epsrel * 0.1)
        total += block
        small = abs(block) <= max(epsabs, epsrel * abs(total)) * 0.01
        if algebraic_power is not None and prev is not None and block != 0:
            q = 2.0 ** (1.0 - algebraic_power)
            if 0 < q < 1:
                # blocks behave like A q^k + B (q/2)^k for f ~ x^-p (c0 + c1/x + ...)
                q2 = 0.5 * q
                b_coef = (block - q * prev) / (q2 - q)
                a_coef = block - b_coef
                rest1 = block * q / (1.0 - q)
                rest2 = a_coef * q / (1.0 - q) + b_coef * q2 / (1.0 - q2)
                if abs(rest2 - rest1) <= 0.01 * max(epsabs, epsrel * abs(total)):
                    return total + rest2
        quiet = quiet + 1 if small else 0
        if quiet >= 2:
            return total
        prev = block
        lo = hi
    raise ConvergenceError("tail integral did not settle on doubling intervals")


def tanh_sinh(f: Callable[[float, float, float], complex], a: float, b: float, *,
              tol: float = 1e-13) -> complex:
    """Tanh-sinh quadrature of ``f(x, x - a, b - x)`` over [a, b].

    The integrand receives the abscissa together with accurate distances
    to both endpoints.
    """
    half = 0.5 * (b - a)

    def node(t):
        u = _HALF_PI * math.sinh(t)
        ch = math.cosh(u)
        e = math.exp(-abs(u))
        # distances to the endpoints: half * e^{+-u} / cosh(u)
        if u >= 0:
            d_right = half * e / ch
            d_left = 2 * half - d_right
        else:
            d_left = half * e / ch
            d_right = 2 * half - d_left
        x = a + d_left if d_left <= d_right else b - d_right
        w = half * _HALF_PI * math.cosh(t) / (ch * ch)
        return x, d_left, d_right, w

    def level_sum(h, offset):
        s = 0j
        sabs = 0.0
        k = offset
        while True:
            t = k * h
            if t > _TANH_SINH_TMAX:
                break
            for tt in ((t,) if t == 0 else (t, -t)):
                x, dl, dr, w = node(tt)
                if w == 0.0 or dl <= 0 or dr <= 0:
                    continue
                v = w * f(x, dl, dr)
                s += v
                sabs += abs(v)
            k += 2 if offset else 1
        return s, sabs

    return _de_levels(level_sum, tol)


def exp_sinh(f: Callable[[float, float], complex], a: float, *, tol: float = 1e-13,
             scale: float = 1.0) -> complex:
    """Exp-sinh quadrature of ``f(x, x - a)`` over [a, infinity)."""

    def level_sum(h, offset):
        s = 0j
        sabs = 0.0
        kmin = -int(_TANH_SINH_TMAX / h) - 1
        # walk both directions from k=offset (stride 2 when refining)
        stride = 2 if offset else 1
        ks = list(range(offset, int(_EXP_SINH_TMAX / h) + 1, stride))
        ks += list(range(offset - stride, kmin, -stride))
        for k in ks:
            t = k * h
            u = _HALF_PI * math.sinh(t)
            if u > _MAX_EXPONENT or u < -700:
                continue
            d = scale * math.exp(u)
            if d == 0.0:
                continue
            w = d * _HALF_PI * math.cosh(t)
            v = w * f(a + d, d)
            s += v
            sabs += abs(v)
        return s, sabs

    return _de_levels(level_sum, tol)


def sinh_sinh(f: Callable[[float], complex], *, tol: float = 1e-13, scale: float = 1.0) -> complex:
    """Sinh-sinh quadrature of ``f`` over the real line."""

    def level_sum(h, offset):
        s = 0j
        sabs = 0.0
        stride = 2 if offset else 1
        kmax = int(_EXP_SINH_TMAX / h) + 1
        start = -kmax if (kmax - offset) % 2 == 0 else -kmax + 1
        for k in range(start if offset else -kmax, kmax + 1, stride):
            t = k * h
            u = _HALF_PI * math.sinh(t)
            if abs(u) > _MAX_EXPONENT:
                continue
            x = scale * math.sinh(u)
            w = scale * math.cosh(u) * _HALF_PI * math.cosh(t)
            v = w * f(x)
            s += v
            sabs += abs(v)
        return s, sabs

    return _de_levels(level_sum, tol)


def _de_levels(level_sum, tol: float) -> complex:
    """Drive a double-exponential rule by halving the step size."""
    h = 0.5
    total, total_abs = level_sum(h, 0)
    est = h * total
    for _level in range(_MAX_LEVEL):
        h *= 0.5
        s, sabs = level_sum(h, 1)
        total += s
        total_abs += sabs
        new = h * total
        scale = max(abs(new), 1e-3 * h * total_abs)
        if abs(new - est) <= tol * scale and _level >= 1:
            return new
        est = new
    if abs(new - est) <= 1e3 * tol * scale:
        return new
    raise ConvergenceError("double-exponential quadrature did not converge")


def trapezoid_line(f: Callable[[float], complex], t_max: float, *, tol: float = 1e-14) -> complex:
    """Trapezoid rule for a doubly-exponentially decaying ``f`` on [-t_max, t_max]."""
    h = 0.5
    n = int(math.ceil(t_max / h))
    total = sum(f(k * h) for k in range(-n, n + 1))
    est = h * total
    for _ in range(12):
        h *= 0.5
        n = int(math.ceil(t_max / h))
        odd = n if n % 2 else n + 1
        total += sum(f(k * h) for k in range(-odd, odd + 1, 2))
        new = h * total
        if abs(new - est) <= tol * max(abs(new), 1e-300):
            return new
        est = new
    raise ConvergenceError("trapezoid rule did not converge")
