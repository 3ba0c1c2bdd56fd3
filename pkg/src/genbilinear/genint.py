"""The generalized (finite-part) integral on the half-line and its calculus.

A function f on ]0, oo[ is integrable in the generalized sense when

    f(r) = sum_{k in Omega} f_k r^k + (integrable near 0)

for a finite set Omega of exponents with Re k <= -1, and f is integrable
at infinity. Its generalized integral is

    sum_{k != -1} f_k s^{k+1}/(k+1) + f_{-1} ln s
        + int_0^s (f - sum f_k r^k) dr + int_s^oo f dr,

which does not depend on the split point s.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _quad
from .errors import ConvergenceError, DomainError, InvalidExpansionError

__all__ = [
    "EXAMPLES",
    "EXPONENT_TOL",
    "GenIntegrand",
    "LaurentData",
    "SingularExpansion",
    "change_of_variables_correction",
    "contour_derivative",
    "dimreg_extract",
    "example_integrand",
    "example_value",
    "fit_singular_coefficients",
    "gen_integrate",
    "gen_integrate_delta_limit",
    "power_substitute",
    "ratio_derivatives_from_taylor",
    "scale_integrand",
]

#: Exponents closer than this to -1 are treated as exactly -1 (anomalous).
EXPONENT_TOL = 1e-12


def _is_minus_one(k: complex) -> bool:
    return abs(k + 1) <= EXPONENT_TOL


@dataclass(frozen=True)
class SingularExpansion:
    """Finite set of terms ``f_k r**k`` describing the behavior at 0.

    Parameters
    ----------
    terms : tuple of (exponent, coefficient)
        Exponents must be distinct. Only terms with ``Re k <= -1`` are
        needed for integrability, but integrable terms are allowed too.
    """

    terms: tuple = ()

    def __post_init__(self):
        cleaned = tuple((complex(k), complex(c)) for k, c in self.terms)
        ks = [k for k, _ in cleaned]
        for i, k in enumerate(ks):
            for k2 in ks[i + 1:]:
                if abs(k - k2) <= EXPONENT_TOL:
                    raise ValueError(f"duplicate exponent {k} in singular expansion")
        object.__setattr__(self, "terms", cleaned)

    @property
    def anomalous(self) -> bool:
        """True when there is a nonzero coefficient at r**-1."""
        return self.log_coefficient != 0

    @property
    def log_coefficient(self) -> complex:
        """The coefficient f_{-1}."""
        for k, c in self.terms:
            if _is_minus_one(k):
                return c
        return 0j

    def coefficient(self, k) -> complex:
        k = complex(k)
        for k2, c in self.terms:
            if abs(k2 - k) <= EXPONENT_TOL:
                return c
        return 0j

    def __call__(self, r):
        """Evaluate sum f_k r**k (``r`` may be a float or array)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        for k, c in self.terms:
            out = out + c * r ** k
        return out if out.shape else complex(out)

    def primitive_at(self, s: float) -> complex:
        """sum_{k != -1} f_k s^{k+1}/(k+1) + f_{-1} ln s."""
        total = 0j
        for k, c in self.terms:
            if _is_minus_one(k):
                total += c * math.log(s)
            else:
                total += c * s ** (k + 1) / (k + 1)
        return total


@dataclass(frozen=True)
class GenIntegrand:
    """An integrand on ]0, oo[ together with its singular expansion at 0.

    Parameters
    ----------
    f : callable
        ``f(r) -> complex`` for ``r > 0``. Must be safe to call concurrently.
    expansion : SingularExpansion
        Non-integrable terms at 0.
    split : float
        Split point between the subtracted head and the plain tail.
    tail_decay : str or tuple
        ``"exponential"`` or ``("algebraic", p)`` for decay like r**-p.
    support : float, optional
        If given, ``f`` vanishes for ``r > support``.
    remainder : callable, optional
        ``remainder(r) = f(r) - sum f_k r**k`` evaluated without
        cancellation. Strongly singular integrands should supply it, since
        the plain difference loses about ``log10(|f|/|remainder|)`` digits.
    """

    f: Callable[[float], complex]
    expansion: SingularExpansion = field(default_factory=SingularExpansion)
    split: float = 1.0
    tail_decay: object = "exponential"
    support: float | None = None
    remainder: Callable[[float], complex] | None = None

    def __post_init__(self):
        if not self.split > 0:
            raise DomainError("split point must be positive")

    def head_integrand(self) -> Callable[[float], complex]:
        if self.remainder is not None:
            return self.remainder
        f, ex = self.f, self.expansion

        def rem(r):
            return f(r) - ex(r)

        return rem

    @property
    def algebraic_power(self) -> float | None:
        if isinstance(self.tail_decay, tuple) and self.tail_decay[0] == "algebraic":
            return float(self.tail_decay[1])
        return None


def _check_remainder(rem: Callable[[float], complex], s: float) -> None:
    """Reject expansions that leave a non-integrable remainder at 0."""
    probes = [s * 10.0 ** (-j) for j in (3, 5, 7)]
    try:
        vals = [abs(r * rem(r)) for r in probes]
    except (OverflowError, ZeroDivisionError) as exc:
        raise InvalidExpansionError(f"remainder blows up near 0: {exc}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise InvalidExpansionError("remainder is not finite near 0")
    # r * |remainder| must decay for an integrable remainder; a missing r^k term
    # with Re k <= -1 keeps it constant or growing
    if vals[2] > 1e-10 and vals[2] >= 0.98 * vals[1] >= 0.98 ** 2 * vals[0]:
        raise InvalidExpansionError(
            "subtracted integrand still behaves like r^k with Re k <= -1 near 0; "
            "the singular expansion is incomplete")


def gen_integrate(g: GenIntegrand, tol: float = 1e-10) -> complex:
    """Generalized integral of ``g`` over ]0, oo[.

    The tolerance is split evenly between the subtracted head on ]0, split]
    and the tail on [split, oo[.

    Raises
    ------
    InvalidExpansionError
        If the subtracted integrand is not integrable at 0.
    ConvergenceError
        If a quadrature fails.
    """
    s = float(g.split)
    rem = g.head_integrand()
    _check_remainder(rem, s)
    half_tol = 0.5 * tol
    head_end = s if g.support is None else min(s, g.support)
    head, _ = _quad.gauss_kronrod(rem, 0.0, head_end, epsabs=half_tol, epsrel=1e-13)
    if g.support is not None and g.support < s:
        # f vanishes on ]support, s]; only the subtracted terms remain there
        head += -(g.expansion.primitive_at(s) - g.expansion.primitive_at(g.support))
    tail = _tail_integral(g, s, half_tol)
    return g.expansion.primitive_at(s) + head + tail


def _tail_integral(g: GenIntegrand, start: float, tol: float) -> complex:
    if g.support is not None:
        if g.support <= start:
            return 0j
        val, _ = _quad.gauss_kronrod(g.f, start, g.support, epsabs=tol, epsrel=1e-13)
        return val
    return _quad.semi_infinite_tail(g.f, start, epsabs=tol, epsrel=1e-13,
                                    algebraic_power=g.algebraic_power)


def gen_integrate_delta_limit(g: GenIntegrand, delta_sequence: Sequence[float] | None = None,
                              *, tol: float = 1e-9) -> complex:
    """Generalized integral as a limit over a decreasing sequence of cut-offs.

    Evaluates ``F(d) = int_d^oo f + sum_{k != -1} f_k d^{k+1}/(k+1) + f_{-1} ln d``
    without subtracting anything under the integral, then removes the
    error terms ``c_1 d + c_2 d^2 + ...`` by repeated Richardson
    extrapolation. This assumes the remainder ``f - sum f_k r^k`` has a
    Taylor expansion at 0, which holds for the examples used as a second
    evaluation path.

    Raises
    ------
    ConvergenceError
        If the extrapolation table does not settle (non-Cauchy sequence).
    """
    s = float(g.split)
    if delta_sequence is None:
        delta_sequence = [s * 2.0 ** (-j) for j in range(1, 9)]
    deltas = [float(d) for d in delta_sequence]
    if any(d2 >= d1 for d1, d2 in zip(deltas, deltas[1:])):
        raise ValueError("delta_sequence must be strictly decreasing")
    tail = _tail_integral(g, s, 1e-14)
    stop = s if g.support is None else min(s, g.support)
    values = []
    for d in deltas:
        mid = 0j
        if d < stop:
            mid, _ = _quad.gauss_kronrod(g.f, d, stop, epsabs=1e-15, epsrel=1e-14)
        values.append(mid + tail + g.expansion.primitive_at(d))
    # Neville-style Richardson for integer powers of d (polynomial extrapolation to 0)
    table = [values[0]]
    best = values[0]
    diffs = []
    for i in range(1, len(values)):
        row = [values[i]]
        for j in range(1, i + 1):
            num = deltas[i - j] * row[j - 1] - deltas[i] * table[j - 1]
            row.append(num / (deltas[i - j] - deltas[i]))
        diffs.append(abs(row[-1] - table[-1]))
        best = row[-1]
        table = row
    if len(diffs) >= 2 and diffs[-1] > tol * max(1.0, abs(best)):
        raise ConvergenceError(
            f"delta-limit extrapolation did not settle (last change {diffs[-1]:.3g})")
    return best


def scale_integrand(g: GenIntegrand, alpha: float) -> tuple[GenIntegrand, complex]:
    """Rescale ``u -> f(alpha u) alpha``.

    Returns the new integrand and the anomaly shift ``-f_{-1} ln alpha`` so
    that ``gen_integrate(new) = gen_integrate(old) + shift``.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError("scale factor must be positive")
    f = g.f
    terms = tuple((k, c * alpha ** (k + 1)) for k, c in g.expansion.terms)
    r0 = g.remainder
    rem = None if r0 is None else (lambda u: alpha * r0(alpha * u))

    new = replace(
        g,
        f=lambda u: alpha * f(alpha * u),
        expansion=SingularExpansion(terms),
        support=None if g.support is None else g.support / alpha,
        remainder=rem,
    )
    return new, -g.expansion.log_coefficient * math.log(alpha)


def power_substitute(g: GenIntegrand, alpha: float) -> GenIntegrand:
    """Substitute ``r = u**alpha``: the integrand becomes f(u^alpha) alpha u^(alpha-1).

    Each term f_k r^k maps to alpha f_k u^(alpha(k+1)-1); the generalized
    integral is unchanged.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError("power must be positive")
    if alpha == 1.0:
        return g
    f = g.f
    terms = tuple((alpha * (k + 1) - 1, alpha * c) for k, c in g.expansion.terms)
    r0 = g.remainder
    rem = None if r0 is None else (lambda u: alpha * u ** (alpha - 1) * r0(u ** alpha))

    p = g.algebraic_power
    tail = g.tail_decay if p is None else ("algebraic", alpha * (p - 1) + 1)
    return replace(
        g,
        f=lambda u: alpha * u ** (alpha - 1) * f(u ** alpha),
        expansion=SingularExpansion(terms),
        support=None if g.support is None else g.support ** (1.0 / alpha),
        remainder=rem,
        tail_decay=tail,
    )


def change_of_variables_correction(expansion: SingularExpansion, g_prime0: complex,
                                   ratio_derivatives: Mapping[int, complex] | None = None) -> complex:
    """Correction term for a smooth change of variables ``r = g(u)`` with g(0) = 0.

    Returns ``-f_{-1} ln g'(0) + sum_{l>=2} f_{-l}/((l-1)(l-1)!) D_l`` where
    ``D_l = d^{l-1}/du^{l-1} (u/g(u))^{l-1}`` at u = 0, so that the
    generalized integral of ``f(g(u)) g'(u)`` equals that of ``f`` plus the
    correction.

    Parameters
    ----------
    expansion : SingularExpansion
    g_prime0 : complex
        g'(0), nonzero.
    ratio_derivatives : mapping l -> D_l
        Needed for every l >= 2 with a nonzero coefficient f_{-l}.

    Raises
    ------
    KeyError
        If a required derivative order is missing.
    """
    if g_prime0 == 0:
        raise DomainError("g'(0) must be nonzero")
    ratio_derivatives = dict(ratio_derivatives or {})
    total = -expansion.log_coefficient * cmath.log(g_prime0)
    for k, c in expansion.terms:
        if c == 0 or _is_minus_one(k):
            continue
        l = -k.real
        if abs(k.imag) > EXPONENT_TOL or abs(l - round(l)) > EXPONENT_TOL or round(l) < 2:
            continue
        l = int(round(l))
        if l not in ratio_derivatives:
            raise KeyError(f"derivative data of order {l - 1} (for f_(-{l})) is missing")
        total += c / ((l - 1) * math.factorial(l - 1)) * ratio_derivatives[l]
    return total


def ratio_derivatives_from_taylor(g_coeffs: Sequence[complex], l_max: int) -> dict[int, complex]:
    """Compute ``D_l = d^{l-1}/du^{l-1} (u/g(u))^{l-1}`` at 0 from Taylor data.

    ``g_coeffs[j]`` is the coefficient of u**j in g, with ``g_coeffs[0] == 0``.
    """
    g = np.zeros(l_max + 1, dtype=complex)
    g[: min(len(g_coeffs), l_max + 1)] = np.asarray(g_coeffs, dtype=complex)[: l_max + 1]
    if g[0] != 0 or g[1] == 0:
        raise DomainError("need g(0) = 0 and g'(0) != 0")
    # h(u) = g(u)/u = g1 + g2 u + ...; q = 1/h as a power series
    h = g[1:]
    n = len(h)
    q = np.zeros(n, dtype=complex)
    q[0] = 1.0 / h[0]
    for j in range(1, n):
        q[j] = -sum(h[i] * q[j - i] for i in range(1, j + 1)) / h[0]
    out = {}
    power = np.zeros(n, dtype=complex)
    power[0] = 1.0
    for l in range(2, l_max + 1):
        power = np.convolve(power, q)[:n]
        out[l] = power[l - 1] * math.factorial(l - 1)
    return out


def fit_singular_coefficients(f: Callable[[float], complex], exponents: Sequence[complex],
                              window: tuple[float, float] = (0.0, 1e-2), *, n_samples: int = 40,
                              extra_powers: int = 3, cond_max: float = 1e12) -> tuple[SingularExpansion, float]:
    """Least-squares fit of singular coefficients on a log-spaced sample.

    The model is ``sum_k c_k r^k`` over the given exponents plus the
    integer powers ``r^0, ..., r^(extra_powers-1)`` standing in for the
    integrable remainder. Returns the expansion restricted to the given
    exponents and the relative residual of the fit.

    Raises
    ------
    ConvergenceError
        If the scaled design matrix is too ill-conditioned.
    """
    lo, hi = window
    r_max = float(hi)
    r_min = r_max * 1e-4 if lo <= 0 else float(lo)
    rs = np.geomspace(r_min, r_max, n_samples)
    ks = [complex(k) for k in exponents] + [complex(j) for j in range(extra_powers)]
    # scale columns by their value at r_max for conditioning
    cols = []
    for k in ks:
        col = (rs / r_max) ** k
        cols.append(col)
    a = np.column_stack(cols)
    y = np.array([complex(f(r)) for r in rs])
    cond = np.linalg.cond(a)
    if not cond < cond_max:
        raise ConvergenceError(f"singular-coefficient fit is ill-conditioned (cond={cond:.3g})")
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = float(np.linalg.norm(a @ sol - y) / max(np.linalg.norm(y), 1e-300))
    coeffs = [sol[i] / r_max ** ks[i] for i in range(len(exponents))]
    return SingularExpansion(tuple(zip(exponents, coeffs))), resid


@dataclass(frozen=True)
class LaurentData:
    """Laurent data of a holomorphic family at a simple pole z0.

    ``gen_integral`` combines the finite part with the derivative
    correction according to the orientation of the singular exponents.
    """

    residue: complex
    finite_part: complex
    derivative_correction: complex = 0j

    def gen_integral(self, orientation: str = "plus") -> complex:
        """Generalized integral at the pole.

        ``orientation="plus"`` for singular terms r^(alpha+n) (subtract the
        correction), ``"minus"`` for r^(-alpha+n) (add it).
        """
        if orientation == "plus":
            return self.finite_part - self.derivative_correction
        if orientation == "minus":
            return self.finite_part + self.derivative_correction
        raise ValueError("orientation must be 'plus' or 'minus'")

    def with_correction(self, correction: complex) -> "LaurentData":
        return replace(self, derivative_correction=complex(correction))


def _laurent_coeffs(F, z0: complex, radius: float, nodes: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(nodes) / nodes
    zs = z0 + radius * np.exp(1j * theta)
    vals = np.array([complex(F(z)) for z in zs])
    # c_j = mean(F * (radius e^{i theta})^{-j}), returned for j = -nodes/2 .. nodes/2-1
    fft = np.fft.fft(vals) / nodes
    js = np.fft.fftfreq(nodes, 1.0 / nodes).astype(int)
    return {int(j): fft[i] * radius ** (-j) for i, j in enumerate(js)}


def dimreg_extract(F: Callable[[complex], complex], pole: complex, radius: float = 0.25,
                   nodes: int = 64, *, tol: float = 1e-9) -> LaurentData:
    """Residue and finite part of ``F`` at a simple pole by contour quadrature.

    The trapezoid rule on the circle ``|z - pole| = radius`` is spectrally
    accurate for F holomorphic on the closed punctured disc. The
    computation is repeated with half the radius; the results must agree
    to ``tol``. The derivative correction is left at 0 for the caller to
    fill in (see :func:`contour_derivative`).

    Raises
    ------
    ConvergenceError
        If the two radii disagree (another singularity nearby) or the pole
        is not simple.
    """
    z0 = complex(pole)
    c1 = _laurent_coeffs(F, z0, radius, nodes)
    c2 = _laurent_coeffs(F, z0, 0.5 * radius, nodes)
    res1, fp1 = c1[-1], c1[0]
    res2, fp2 = c2[-1], c2[0]
    scale = max(1.0, abs(fp1), abs(res1))
    if abs(res1 - res2) > tol * scale or abs(fp1 - fp2) > tol * scale:
        raise ConvergenceError(
            "contour results depend on the radius; another singularity lies near the contour")
    for j in (-2, -3):
        if abs(c2[j]) > tol * scale * (0.5 * radius) ** (-j):
            raise ConvergenceError(f"pole of order {-j} or higher detected; expected a simple pole")
    return LaurentData(residue=complex(res2), finite_part=complex(fp2))


def contour_derivative(f: Callable[[complex], complex], z0: complex, radius: float = 0.25,
                       nodes: int = 32) -> complex:
    """Derivative of a holomorphic ``f`` at ``z0`` by Cauchy's formula on a circle."""
    c = _laurent_coeffs(f, complex(z0), radius, nodes)
    return complex(c[1])


# ---------------------------------------------------------------------------
# Built-in examples: Gamma and Beta integrals and the alpha r^(-1+alpha) family

EXAMPLES = ("gamma_example", "beta_interval", "beta_halfline", "cautionary")

_SNAP = 1e-12


def _snap_integer(z: complex) -> complex:
    n = round(z.real)
    return complex(n) if abs(z - n) < _SNAP else z


def _series_remainder(coeffs_from: Callable[[int], complex], start: int, x: float) -> complex:
    """sum_{n >= start} c_n x^n for |x| <= 1/2, summed until the terms are negligible."""
    total, n, xn = 0j, start, x ** start
    while True:
        term = coeffs_from(n) * xn
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300) or n > start + 400:
            return total
        n += 1
        xn *= x


def _power_series_example(power: complex, coeff: Callable[[int], complex], closed: Callable[[float], complex],
                          **kwargs) -> GenIntegrand:
    """r^power * sum c_n r^n with the singular part taken from the series."""
    n_sing = max(-1, math.floor(-1 - power.real + 1e-12))
    terms = tuple((power + n, coeff(n)) for n in range(n_sing + 1) if coeff(n) != 0)

    def rem(r):
        if r <= 0.5:
            return r ** power * _series_remainder(coeff, n_sing + 1, r)
        return closed(r) - sum(c * r ** k for k, c in terms)

    return GenIntegrand(f=closed, expansion=SingularExpansion(terms), remainder=rem, **kwargs)


def example_integrand(name: str, **params) -> GenIntegrand:
    """Integrand of a built-in example.

    ``gamma_example`` (``alpha``, default 0): e^{-r} r^{-1+alpha} on ]0, oo[.
    ``beta_interval`` (``u``, ``v``): r^{-1+u} (1-r)^{v-1} on ]0, 1[, Re v > 0.
    ``beta_halfline`` (``u``, ``v``): r^{-1+u} (1+r)^{v-1} on ]0, oo[, Re(u+v) < 1.
    ``cautionary`` (``alpha``): alpha r^{-1+alpha} on ]0, 1[.
    """
    if name == "gamma_example":
        a = _snap_integer(complex(params.get("alpha", 0.0)))
        fact = [1.0]

        def coeff(n):
            while len(fact) <= n:
                fact.append(fact[-1] * len(fact))
            return (-1) ** n / fact[n]

        return _power_series_example(a - 1, coeff, lambda r: cmath.exp(-r) * r ** (a - 1), split=0.5)
    if name in ("beta_interval", "beta_halfline"):
        u = _snap_integer(complex(params["u"]))
        v = complex(params["v"])
        sign = -1.0 if name == "beta_interval" else 1.0
        cache = [1 + 0j]

        def coeff(n):
            while len(cache) <= n:
                k = len(cache)
                cache.append(cache[-1] * (v - 1 - k + 1) / k * sign)
            return cache[n]

        def closed(r):
            return r ** (u - 1) * (1 + sign * r) ** (v - 1)

        if name == "beta_interval":
            if not v.real > 0:
                raise DomainError("beta_interval needs Re v > 0")
            return _power_series_example(u - 1, coeff, closed, split=0.5, support=1.0)
        p = 2 - (u + v).real
        if not p > 1:
            raise DomainError("beta_halfline needs Re(u+v) < 1")
        return _power_series_example(u - 1, coeff, closed, split=0.5, tail_decay=("algebraic", p))
    if name == "cautionary":
        a = complex(params["alpha"])
        # the single term is kept even when integrable, so the head is exactly zero
        terms = ((a - 1, a),) if a != 0 else ()
        return GenIntegrand(f=lambda r: a * r ** (a - 1) if r <= 1 else 0j, expansion=SingularExpansion(terms),
                            split=1.0, support=1.0,
                            remainder=(lambda r: 0j) if terms else None)
    raise ValueError(f"unknown example {name!r}; expected one of {EXAMPLES}")


def example_value(name: str, **params) -> complex:
    """Closed-form generalized integral of a built-in example (see :func:`example_integrand`)."""
    from .gammakit import digamma, gamma, is_nonpositive_integer, poch_digamma, pochhammer, reciprocal_gamma

    if name == "gamma_example":
        a = _snap_integer(complex(params.get("alpha", 0.0)))
        if is_nonpositive_integer(a):
            m = int(round(-a.real))
            return (-1) ** m / math.factorial(m) * digamma(m + 1)
        return gamma(a)
    if name in ("beta_interval", "beta_halfline"):
        u = _snap_integer(complex(params["u"]))
        v = complex(params["v"])
        if is_nonpositive_integer(u):
            m = int(round(-u.real))
            # (x)_m psi(x) stays finite where the Pochhammer zero cancels the pole
            if name == "beta_interval":
                x = v - m
                return (-1) ** m * (pochhammer(x, m) * digamma(m + 1) - poch_digamma(x, m)) / math.factorial(m)
            return (-1) ** m * pochhammer(1 - v, m) * (digamma(m + 1) - digamma(1 + m - v)) / math.factorial(m)
        if name == "beta_interval":
            return gamma(u) * gamma(v) * reciprocal_gamma(u + v)
        return gamma(u) * gamma(1 - u - v) * reciprocal_gamma(1 - v)
    if name == "cautionary":
        return 0j if complex(params["alpha"]) == 0 else 1 + 0j
    raise ValueError(f"unknown example {name!r}; expected one of {EXAMPLES}")
