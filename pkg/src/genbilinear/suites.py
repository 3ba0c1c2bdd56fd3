"""Verification suites: identity residuals, closed forms against oracles, asymptotics.

Each suite returns a :class:`SuiteReport`. A check carries its own
tolerance; identity checks accept an override (``tol``), while checks
whose bound is part of their statement (asymptotic ratios, inequalities)
keep theirs.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as sp

from . import bessel as bs
from . import bilinear as bl
from . import gammakit as gk
from . import gegenbauer as gg
from . import genint as gi

__all__ = ["Check", "SuiteReport", "SUITES", "run_suite"]


@dataclass
class Check:
    """One named residual against a bound."""

    name: str
    residual: float
    tol: float
    passed: bool
    overridable: bool = True
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tol": self.tol,
                "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        """Largest residual among the identity (tolerance-overridable) checks."""
        vals = [c.residual for c in self.checks if c.overridable]
        return max(vals) if vals else 0.0

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "max_residual": self.max_residual,
            "elapsed_s": round(self.elapsed, 3),
            "checks": [c.as_dict() for c in self.checks],
            **self.extra,
        }


class _Collector:
    def __init__(self, tol: float | None):
        self.tol = tol
        self.checks: list[Check] = []

    def residual(self, name: str, values, default_tol: float, **detail) -> Check:
        """Identity check: the largest of ``values`` must not exceed the tolerance."""
        res = float(max(values)) if np.ndim(values) else float(values)
        tol = self.tol if self.tol is not None else default_tol
        ok = math.isfinite(res) and res <= tol
        c = Check(name, res, tol, ok, True, detail)
        self.checks.append(c)
        return c

    def bound(self, name: str, residual: float, tol: float, ok: bool | None = None, **detail) -> Check:
        """Check with a fixed bound (not affected by ``tol``)."""
        residual = float(residual)
        if ok is None:
            ok = math.isfinite(residual) and residual <= tol
        c = Check(name, residual, float(tol), bool(ok), False, detail)
        self.checks.append(c)
        return c

    def guarded(self, name: str, fn: Callable[[], None]) -> None:
        """Run ``fn``; an exception becomes a failed check instead of aborting the suite."""
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            self.checks.append(Check(name, math.inf, 0.0, False, True, {"error": f"{type(exc).__name__}: {exc}"}))


def _rel(x: complex, y: complex) -> float:
    return abs(complex(x) - complex(y)) / max(1.0, abs(complex(y)))


def _relp(x: complex, y: complex) -> float:
    """Relative difference without the absolute floor."""
    return abs(complex(x) - complex(y)) / abs(complex(y))


# ---------------------------------------------------------------------------
# gamma_identities


def gamma_identities(tol: float | None = None) -> list[Check]:
    col = _Collector(tol)
    zs = [complex(x, y) for x in np.linspace(-4.7, 4.7, 12) for y in (0.0, 0.8, -2.3)]

    def reflection():
        res = [_rel(gk.reciprocal_gamma(z) * gk.reciprocal_gamma(1 - z), cmath.sin(math.pi * z) / math.pi)
               for z in zs]
        col.residual("reflection", res, 1e-12)

    def duplication():
        lams = [x for x in np.linspace(-9.85, 10, 27)] + [complex(0.3, 2.0), complex(-2.2, -1.5)]
        res = []
        for lam in lams:
            lhs = cmath.exp(gk.ln_gamma(2 * lam + 1) - gk.ln_gamma(0.5 + lam) - gk.ln_gamma(1 + lam))
            res.append(_relp(lhs, 4 ** complex(lam) / math.sqrt(math.pi)))
        col.residual("duplication", res, 1e-12)

    def digamma_shift():
        res = []
        for z in zs[::3]:
            for k in (1, 5, 12, 20):
                lhs, p0, h = gk.digamma(z + k), gk.digamma(z), gk.harmonic_shifted(k, z)
                # scaled by the largest term: psi(z) is large next to a pole
                res.append(abs(lhs - p0 - h) / max(1.0, abs(lhs), abs(p0), abs(h)))
        col.residual("digamma_shift", res, 1e-12)

    def induction():
        res = []
        for m in range(1, 31):
            lhs = sum(gk.digamma(1 + k) for k in range(m))
            res.append(_rel(lhs, m * (gk.digamma(1 + m) - 1)))
        col.residual("induction", res, 1e-12)

    def digamma_tan():
        pts = [complex(x, y) for x in (-2.3, -0.8, -0.2, 0.1, 0.45, 1.3, 3.7) for y in (0.0, 0.6)]
        res = [_rel(gk.digamma(0.5 + z) - gk.digamma(0.5 - z), math.pi * cmath.tan(math.pi * z)) for z in pts]
        col.residual("digamma_reflection_tan", res, 1e-11)

    def trigamma_reflection():
        res = [_rel(gk.trigamma(z) + gk.trigamma(1 - z), (math.pi / cmath.sin(math.pi * z)) ** 2) for z in zs]
        col.residual("trigamma_reflection", res, 1e-11)

    def pochhammer():
        res = [_rel(gk.pochhammer(z, k), cmath.exp(gk.ln_gamma(z + k) - gk.ln_gamma(z)))
               for z in (0.3, 2.5, complex(1.2, 3.1), -3.4) for k in (0, 3, 17, 70, 90)]
        col.residual("pochhammer_vs_gamma_ratio", res, 1e-11)

    def ratio_limits():
        ab = [-2.0, -0.5, 1.0, 2.0]
        for lam in (20.0, 50.0, 100.0, 200.0):
            worst = 0.0
            for a, b in itertools.product(ab, ab):
                r = cmath.exp(gk.ln_gamma(a + lam) - gk.ln_gamma(b + lam)) * lam ** (b - a)
                worst = max(worst, abs(r - 1))
            col.bound(f"gamma_ratio_limit[lambda={lam:g}]", worst, 5 / lam)
        for beta in (20.0, 50.0, 100.0, 200.0):
            worst = 0.0
            for al in (-1.0, 0.0, 0.5, 1.0, 2.0):
                lg = (gk.ln_gamma(complex(al, beta)) + gk.ln_gamma(complex(al, -beta))
                      + math.pi * beta - math.log(2 * math.pi) - (2 * al - 1) * math.log(beta))
                worst = max(worst, abs(cmath.exp(lg) - 1))
            col.bound(f"gamma_imaginary_limit[beta={beta:g}]", worst, 5 / beta)

    for name, fn in [("reflection", reflection), ("duplication", duplication), ("digamma_shift", digamma_shift),
                     ("induction", induction), ("digamma_reflection_tan", digamma_tan),
                     ("trigamma_reflection", trigamma_reflection), ("pochhammer", pochhammer),
                     ("ratio_limits", ratio_limits)]:
        col.guarded(name, fn)
    return col.checks


# ---------------------------------------------------------------------------
# bessel_identities


def bessel_identities(tol: float | None = None) -> list[Check]:
    col = _Collector(tol)
    rs = np.linspace(0.1, 10, 12)

    def symmetry():
        alphas = [a for a in np.linspace(-3, 3, 25) if abs(a - round(a)) >= 0.05]
        res = [_relp(bs.bessel_k(-a, r), bs.bessel_k(a, r)) for a in alphas for r in rs]
        col.residual("K_symmetry", res, 1e-11)

    def monotonicity():
        orders = [0.0, 0.3, 0.5, 1.0, 1.7, 2.5, 3.0]
        worst = -math.inf
        for r in rs:
            vals = [bs.bessel_k(a, r).real for a in orders]
            worst = max(worst, max(v1 / v2 - 1 for v1, v2 in zip(vals, vals[1:])))
        col.bound("K_monotone_in_order", worst, 0.0, ok=worst < 0)

    def neat():
        worst = -math.inf
        grid = np.linspace(0.05, 10, 15)
        for a in (0.6, 1.0, 2.5):
            for r, R in itertools.combinations(grid, 2):
                lhs = bs.bessel_k(a, r).real / bs.bessel_k(a, R).real
                rhs = math.exp(R - r) * (R / r) ** a
                worst = max(worst, lhs / rhs - 1)
        col.bound("neat_inequality", worst, 0.0, ok=worst < 0)

    def integer_continuity():
        eps = 1e-6
        worst = 0.0
        for m in (0, 1, 2):
            for r in (0.3, 1.0, 4.0):
                d = abs(bs.bessel_k(m + eps, r) - bs.bessel_k(m, r)) / eps
                # C from the order derivative (zero at m = 0, so add the second-order term)
                c = abs(gi.contour_derivative(lambda a: bs.bessel_k(a, r), m + 0.3)) + 1.0
                worst = max(worst, d / c)
        col.bound("K_integer_continuity", worst, 1.0)

    def asymptotics():
        worst = 0.0
        for r in (20.0, 40.0, 80.0):
            for a in np.linspace(0, 2, 5):
                ratio = bs.bessel_k(a, r) / (math.sqrt(math.pi / (2 * r)) * math.exp(-r))
                worst = max(worst, abs(ratio - 1) * r / 2)
        col.bound("K_large_argument", worst, 1.0, scaled_by="r/2")

    def half_integer():
        res = []
        for k in range(0, 6):
            nu = 0.5 + k
            for r in (0.2, 1.5, 7.0):
                res.append(_relp(bs.bessel_half_integer("K", k, r), bs.bessel_k(nu, r)))
                res.append(_relp(bs.bessel_half_integer("I_plus", k, r), bs.bessel_i(nu, r)))
                res.append(_relp(bs.bessel_half_integer("I_minus", k, r), bs.bessel_i(-nu, r)))
                res.append(_relp(bs.bessel_half_integer("J_plus", k, r), sp.jv(nu, r)))
                res.append(_relp(bs.bessel_half_integer("J_minus", k, r), sp.jv(-nu, r)))
        col.residual("half_integer_forms", res, 1e-11)

    def reference():
        res = [_relp(bs.bessel_k(a, r), sp.kv(a, r)) for a in (0, 0.3, 1, 1.98, 2.5, 4) for r in rs]
        res += [_relp(bs.bessel_i(a, r), sp.iv(a, r)) for a in (0, 0.3, 1, 2.5, -0.7) for r in rs]
        col.residual("scipy_reference", res, 1e-11)

    def integral_oracles():
        res = [_relp(bs.bessel_k_basset_oracle(a, r), bs.bessel_k(a, r))
               for a in (0.0, 0.4, 1.0, 2.7) for r in (0.5, 2.0, 6.0)]
        for kind, orders in (("I_poi", (0.0, 0.7, 2.0)), ("K_poiss1", (0.0, 0.7, 2.0)), ("K_poiss2", (0.3, 1.0, 2.0))):
            for a in orders:
                for r in (0.5, 2.0, 6.0):
                    ref = bs.bessel_i(a, r) if kind == "I_poi" else bs.bessel_k(a, r)
                    res.append(_relp(bs.bessel_poisson_oracles(kind, a, r), ref))
        col.residual("integral_representations", res, 1e-10)

    def recurrences():
        res = []
        for a in (0.3, 1.2):
            for n in (1, 3):
                for r in (0.7, 3.0):
                    res.append(_relp(bs.bessel_recurrence_apply("K_up", n, a, r), r ** (-a - n) * bs.bessel_k(a + n, r)))
                    res.append(_relp(bs.bessel_recurrence_apply("K_down", n, a, r), r ** (a - n) * bs.bessel_k(a - n, r)))
                    res.append(_relp(bs.bessel_recurrence_apply("I_up", n, a, r), r ** (-a - n) * bs.bessel_i(a + n, r)))
                    res.append(_relp(bs.bessel_recurrence_apply("I_down", n, a, r), r ** (a - n) * bs.bessel_i(a - n, r)))
        col.residual("recurrences", res, 1e-10)

    def green():
        res = [bl.green_identity_check("macdonald", {"alpha": a, "a": x, "b": y})
               for a in (0.0, 0.3, -0.7) for x, y in ((1, 2), (0.5, 1.3))]
        col.residual("green_identity", res, 1e-9)

    for name, fn in [("K_symmetry", symmetry), ("K_monotone_in_order", monotonicity), ("neat_inequality", neat),
                     ("K_integer_continuity", integer_continuity), ("K_large_argument", asymptotics),
                     ("half_integer_forms", half_integer), ("scipy_reference", reference),
                     ("integral_representations", integral_oracles), ("recurrences", recurrences),
                     ("green_identity", green)]:
        col.guarded(name, fn)
    return col.checks


# ---------------------------------------------------------------------------
# gegenbauer_identities

WHIPPLE_GRID = tuple(itertools.product((-0.3, 0.2, 0.45, 0.7), (0.3, 0.8, 1.3, 2.1, 3.4), (1.5, 3.0)))


def gegenbauer_identities(tol: float | None = None) -> list[Check]:
    col = _Collector(tol)

    def whipple():
        assert len(WHIPPLE_GRID) == 40
        res = [_relp(gg.whipple("Z_from_S", a, lam, w), gg.gegen_z(a, lam, w)) for a, lam, w in WHIPPLE_GRID]
        res += [_relp(gg.whipple("S_from_Z", a, lam, w), gg.gegen_s(a, lam, w))
                for a, lam, w in WHIPPLE_GRID if w > 2]
        col.residual("whipple", res, 1e-10, points=len(WHIPPLE_GRID))

    def formu1():
        # connection formula against the expansions at -1 and at infinity
        res = []
        for a in (-0.7, -0.3, 0.3, 0.7):
            for lam in (0.4, 1.1):
                for w in (1.3, 1.7, 2.5, 4.0):
                    ref = gg._unscale(gg._z_plus(a, lam, w) if w < 2 else gg._z_infinity(a, lam, w))
                    res.append(_relp(gg._formu1(a, lam, w), ref))
        col.residual("connection_formu1", res, 1e-10)

    def formu2():
        res = []
        for a in (-0.7, -0.3, 0.3, 0.7):
            for lam in (0.4, 1.1, complex(0.2, 3.0)):
                for w in (0.2, 0.4, 0.55):
                    res.append(_relp(gg.gegen_s_reflected(a, lam, w), gg.gegen_s(a, lam, -w)))
        col.residual("connection_formu2", res, 1e-10)

    def degenerate():
        res = []
        for m in (1, 2, 3):
            for lam in (0.3, 1.1, 2.7):
                for w in (0.3, -0.5, 0.8, complex(0.2, 0.4)):
                    res.append(gg.degenerate_relation_check(m, lam, w) / max(1.0, abs(gg.gegen_s(m, lam, w))))
        col.residual("degenerate_relation", res, 1e-10)

    def z_signs():
        res = []
        for a in (0.3, 0.7, 1.4):
            for lam in (0.6, 1.9):
                for w in (1.2, 2.0, 3.5):
                    lhs = gg.gegen_z(a, lam, w) * gg.BulletPower(w, a).value()
                    res.append(_relp(lhs, gg.gegen_z(-a, lam, w)))
        col.residual("Z_sign_identity", res, 1e-11)

    def half_integer():
        res = []
        for n in range(0, 5):
            for lam in (0.35, 1.6):
                for w in (0.3, -0.6):
                    res.append(_relp(gg.gegen_half_integer("S_minus", n, lam, w), gg.gegen_s(-0.5 - n, lam, w)))
                    res.append(_relp(gg.gegen_half_integer("S_plus", n, lam, w), gg.gegen_s(0.5 + n, lam, w)))
                for w in (1.4, 3.0):
                    res.append(_relp(gg.gegen_half_integer("Z_minus", n, lam, w), gg.gegen_z(-0.5 - n, lam, w)))
                    res.append(_relp(gg.gegen_half_integer("Z_plus", n, lam, w), gg.gegen_z(0.5 + n, lam, w)))
        col.residual("half_integer_forms", res, 1e-11)

    def classical():
        res = []
        for n in range(0, 9):
            for x in (-0.7, 0.1, 0.55):
                res.append(_rel(gg.classical_polynomials("legendre_p", n, 0, x), sp.eval_legendre(n, x)))
                res.append(_rel(gg.classical_polynomials("chebyshev_t", n, 0, x), sp.eval_chebyt(n, x)))
                res.append(_rel(gg.classical_polynomials("chebyshev_u", n, 0, x), sp.eval_chebyu(n, x)))
                for a in (0.3, 1.5):
                    res.append(_rel(gg.classical_polynomials("jacobi_aa", n, a, x), sp.eval_jacobi(n, a, a, x)))
                    res.append(_rel(gg.classical_polynomials("gegenbauer_c", n, a, x), sp.eval_gegenbauer(n, a + 0.5, x)))
        col.residual("classical_polynomials", res, 1e-11)

    def parity():
        res = []
        for n in range(0, 13):
            for a in (0.3, 1.5):
                for x in (0.2, 0.65):
                    p1 = gg.classical_polynomials("jacobi_aa", n, a, -x)
                    p2 = gg.classical_polynomials("jacobi_aa", n, a, x)
                    res.append(_rel(p1, (-1) ** n * p2))
        col.residual("jacobi_parity", res, 1e-12)

    def recurrences():
        res = []
        for fam, w in (("S", 0.3), ("Z", 2.2)):
            for idx in (1, 2, 3, 4):
                for a, lam in ((0.3, 0.8), (1.2, 1.7)):
                    res.append(gg.recurrence_residual(fam, idx, a, lam, w))
        col.residual("recurrences", res, 1e-7)

    def ode():
        res = []
        h = 1e-4
        for fam, w in (("S", 0.35), ("Z", 2.3)):
            d = gg.gegen_s_derivative if fam == "S" else gg.gegen_z_derivative
            f = gg.gegen_s if fam == "S" else gg.gegen_z
            for a, lam in ((0.3, 0.8), (-0.4, 1.6), (1.0, 0.7)):
                f0, f1 = f(a, lam, w), d(a, lam, w)
                f2 = (d(a, lam, w + h) - d(a, lam, w - h)) / (2 * h)
                r = (1 - w * w) * f2 - 2 * (1 + a) * w * f1 + (lam * lam - (a + 0.5) ** 2) * f0
                res.append(abs(r) / max(1.0, abs(f0), abs(f1), abs(f2)))
        col.residual("ode_residual", res, 1e-6)

    def green():
        res = [bl.green_identity_check("gegenbauer_s", {"alpha": a, "beta1": 0.5, "beta2": 1.5}) for a in (-0.4, 0.3)]
        res += [bl.green_identity_check("gegenbauer_z", {"alpha": a, "lam1": 0.8, "lam2": 1.4}) for a in (-0.5, 0.5)]
        col.residual("green_identity", res, 1e-9)

    for name, fn in [("whipple", whipple), ("connection_formu1", formu1), ("connection_formu2", formu2),
                     ("degenerate_relation", degenerate), ("Z_sign_identity", z_signs),
                     ("half_integer_forms", half_integer), ("classical_polynomials", classical),
                     ("jacobi_parity", parity), ("recurrences", recurrences), ("ode_residual", ode),
                     ("green_identity", green)]:
        col.guarded(name, fn)
    return col.checks


# ---------------------------------------------------------------------------
# bilinear_closed_vs_oracle

MAC_NONANOM = (tuple((a, p) for a in (-0.7, -0.3, 0.3, 0.7) for p in ((1, 2), (0.5, 1.3), (1, 1))))
MAC_ANOM = (tuple((a, p) for a in (1, 2, 3) for p in ((1, 2), (1.3, 0.7), (1, 1))))
S_PAIRS = ((0.5, 1.5), (1, 1), (0, 0))
Z_PAIRS = ((0.8, 1.4), (0.9, 0.9))


def macdonald_rows(alphas_pairs, oracle: str):
    rows = []
    for al, (a, b) in alphas_pairs:
        c = bl.macdonald_bilinear(al, a, b).value
        o = (bl.macdonald_bilinear_quadrature(al, a, b) if oracle == "quadrature"
             else bl.macdonald_bilinear_oracle(al, a, b)).value
        rows.append((al, a, b, c, o, _relp(c, o)))
    return rows


def bilinear_closed_vs_oracle(tol: float | None = None) -> list[Check]:
    col = _Collector(tol)

    def crit1():
        res = [r[-1] for r in macdonald_rows(MAC_NONANOM, "quadrature")]
        col.residual("macdonald_nonanomalous_vs_quadrature", res, 1e-9, points=len(res))

    def crit2():
        res = [r[-1] for r in macdonald_rows(MAC_ANOM, "genint")]
        col.residual("macdonald_anomalous_vs_oracle", res, 1e-7, points=len(res))
        spot = bl.macdonald_bilinear(1, 1, 1).value
        col.residual("macdonald_spot_alpha1", abs(spot - (math.log(4) - 1 - 2 * gk.EULER_GAMMA)), 1e-9)

    def s_rows(alphas):
        res = []
        for al in alphas:
            for b1, b2 in S_PAIRS:
                c = bl.gegenbauer_s_bilinear(al, b1, b2).value
                o = bl.gegenbauer_s_bilinear_oracle(al, b1, b2).value
                res.append(_relp(c, o))
        return res

    def crit5():
        col.residual("S_thm_generic_vs_oracle", s_rows((-0.4, 0.4)), 1e-7)
        col.residual("S_thm_anomalous_vs_oracle", s_rows((1, 2)), 1e-6)
        res = [_rel(bl.gegenbauer_s_bilinear(al, b2, b1).value, bl.gegenbauer_s_bilinear(al, b1, b2).value)
               for al in (-0.4, 0.4, 1, 2) for b1, b2 in ((0.5, 1.5), (0.2, 2.7))]
        col.residual("S_beta_swap_symmetry", res, 1e-9)

    def z_rows(alphas):
        res = []
        for al in alphas:
            for l1, l2 in Z_PAIRS:
                c = bl.gegenbauer_z_bilinear(al, l1, l2).value
                o = bl.gegenbauer_z_bilinear_oracle(al, l1, l2).value
                res.append(_relp(c, o))
        return res

    def crit6():
        col.residual("Z_thm_generic_vs_oracle", z_rows((-0.5, 0.5)), 1e-7)
        col.residual("Z_thm_anomalous_vs_oracle", z_rows((1, 2)), 1e-6)
        res = [_rel(bl.gegenbauer_z_bilinear(-al, l1, l2).value, bl.gegenbauer_z_bilinear(al, l1, l2).value)
               for al in (0.5, 0.3, 1, 2) for l1, l2 in Z_PAIRS]
        col.residual("Z_alpha_sign_flip", res, 1e-10)
        spot = bl.gegenbauer_z_bilinear(0, 0.5, 0.5).value
        col.residual("Z_spot_alpha0_half", abs(spot - 4 * math.pi / 3), 1e-9)

    for name, fn in [("criterion_1", crit1), ("criterion_2", crit2), ("criterion_5", crit5), ("criterion_6", crit6)]:
        col.guarded(name, fn)
    return col.checks


# ---------------------------------------------------------------------------
# asymptotics

THM45_ALPHAS = (0.0, 1.0, 1.5)
THM45_THETAS = (0.2, 0.8)
THM48_ALPHAS = (0.0, 1.0, 1.5)


def asymptotics(tol: float | None = None) -> tuple[list[Check], dict]:
    col = _Collector(tol)
    table = []

    def thm45():
        for kind in ("S_interval", "S_reflected", "Z_halfline"):
            for al in THM45_ALPHAS:
                for th in THM45_THETAS:
                    e1 = abs(gg.asymptotic_ratio(kind, al, 100.0, th) - 1)
                    e2 = abs(gg.asymptotic_ratio(kind, al, 200.0, th) - 1)
                    rate = math.log(e2 / e1) / math.log(2) if e1 > 0 and e2 > 0 else float("nan")
                    table.append({"theorem": "4.5", "kind": kind, "alpha": al, "theta": th,
                                  "err_100": e1, "err_200": e2, "exponent": rate})
                    tag = f"{kind}[alpha={al:g},theta={th:g}]"
                    col.bound(f"thm45_ratio_{tag}", e1, 1e-2)
                    halving = e1 / e2 if e2 > 0 else math.inf
                    col.bound(f"thm45_halving_{tag}", abs(halving - 2), 0.4)

    def thm48():
        for kind in ("S_case", "Z_case"):
            for al in THM48_ALPHAS:
                rep = bl.bilinear_asymptotics_check(kind, al, (40.0, 80.0))
                e40, e80 = (abs(x) for x in rep.errors)
                table.append({"theorem": "4.8", "kind": kind, "alpha": al, "err_40": e40, "err_80": e80,
                              "exponent": rep.rate})
                tag = f"{kind}[alpha={al:g}]"
                col.bound(f"thm48_at_40_{tag}", e40, 0.05)
                col.bound(f"thm48_at_80_{tag}", e80, 0.025 * 1.2)

    col.guarded("theorem_4_5", thm45)
    col.guarded("theorem_4_8", thm48)
    return col.checks, {"rate_table": table}


# ---------------------------------------------------------------------------
# dimreg


def dimreg(tol: float | None = None) -> list[Check]:
    col = _Collector(tol)

    def macdonald():
        res = []
        for al, (a, b) in MAC_ANOM:
            v, _ = bl.macdonald_dimreg(al, a, b)
            res.append(_relp(v, bl.macdonald_bilinear(al, a, b).value))
        col.residual("macdonald_dimreg_vs_closed", res, 1e-6, points=len(res))

    def gamma_family():
        res = []
        for m in (0, 1, 2, 3):
            data = gi.dimreg_extract(gk.gamma, -m)
            # the r^-1 coefficient (-1)^m/m! does not depend on alpha, so no derivative correction
            res.append(_rel(data.gen_integral("plus"), gi.example_value("gamma_example", alpha=-m)))
            res.append(_rel(data.residue, (-1) ** m / math.factorial(m)))
        col.residual("gamma_family", res, 1e-10)

    def synthetic():
        res = []
        rng = np.random.default_rng(7)
        for m in (0, 1, 2):
            c = rng.normal(size=5) + 1j * rng.normal(size=5)

            def F(z, c=c, m=m):
                t = z + m
                return c[0] / t + c[1] + c[2] * t + c[3] * t * t + c[4] * t ** 3

            d = gi.dimreg_extract(F, -m)
            res += [abs(d.residue - c[0]), abs(d.finite_part - c[1])]
        col.residual("synthetic_laurent", res, 1e-10)

    def cautionary():
        near = [gi.gen_integrate(gi.example_integrand("cautionary", alpha=a), 1e-12) for a in (-1e-3, 1e-3, -0.2)]
        limit_err = max(abs(v - 1) for v in near)
        at_zero = gi.gen_integrate(gi.example_integrand("cautionary", alpha=0.0))
        d = gi.dimreg_extract(lambda a: 1.0 + 0j, 0.0)
        # f_{-1}(alpha) = alpha, so f'_{-1}(0) = 1 and finite part minus correction gives gen-int of f(., 0)
        corr = gi.contour_derivative(lambda a: a, 0.0)
        dim_val = d.with_correction(corr).gen_integral("plus")
        col.residual("cautionary_limit_is_1", limit_err, 1e-10)
        col.bound("cautionary_gen_integral_is_0", abs(at_zero), 0.0, ok=at_zero == 0)
        col.residual("cautionary_dimreg_matches_0", abs(dim_val), 1e-12)

    for name, fn in [("macdonald_dimreg", macdonald), ("gamma_family", gamma_family),
                     ("synthetic_laurent", synthetic), ("cautionary", cautionary)]:
        col.guarded(name, fn)
    return col.checks


SUITES = {
    "gamma_identities": gamma_identities,
    "bessel_identities": bessel_identities,
    "gegenbauer_identities": gegenbauer_identities,
    "bilinear_closed_vs_oracle": bilinear_closed_vs_oracle,
    "asymptotics": asymptotics,
    "dimreg": dimreg,
}


def run_suite(name: str, tol: float | None = None) -> SuiteReport:
    """Run a named suite. ``tol`` overrides the tolerance of identity checks."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    t0 = time.perf_counter()
    out = SUITES[name](tol)
    checks, extra = out if isinstance(out, tuple) else (out, {})
    return SuiteReport(name, checks, time.perf_counter() - t0, extra)
