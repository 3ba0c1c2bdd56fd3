"""Command-line front end: ``genint eval | verify | sweep``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical error (domain, pole, convergence) in ``eval``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import __version__
from . import bessel as bs
from . import bilinear as bl
from . import gammakit as gk
from . import gegenbauer as gg
from . import genint as gi
from .errors import GenBilinearError
from .suites import SUITES, run_suite

log = logging.getLogger("genbilinear")

DEFAULT_TOL = 1e-9
MAX_GRID_POINTS = 10_000
SWEEP_FORMAT_VERSION = 1
SWEEP_COLUMNS = (
    "index", "target", "alpha", "param1", "param2",
    "closed_re", "closed_im", "oracle_re", "oracle_im",
    "abs_err", "rel_err", "anomalous", "variable_convention", "runtime_s", "error",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing and formatting


def parse_complex(text: str) -> complex:
    """Parse "a", "a+bi", "bi", "(a-bi)"; "j" is accepted as well as "i"."""
    s = str(text).strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise UsageError(f"cannot parse {text!r} as a number")
    s = s.replace("i", "j")
    if s.endswith("j"):
        head = s[:-1]
        # bare "j", "+j", "1+j": supply the unit coefficient
        if head == "" or head[-1] in "+-":
            s = head + "1j"
    try:
        z = complex(s)
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a number (expected re+imi)") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"{text!r} is not finite")
    return z


def parse_grid(values: Sequence[str] | None) -> list[complex] | None:
    """Expand a list of numbers; "start:stop:num" gives num evenly spaced real points."""
    if values is None:
        return None
    out: list[complex] = []
    for v in values:
        if v.count(":") == 2 and "i" not in v and "j" not in v:
            a, b, n = v.split(":")
            try:
                pts = np.linspace(float(a), float(b), int(n))
            except ValueError:
                raise UsageError(f"bad range {v!r}; expected start:stop:num") from None
            out.extend(complex(float(p)) for p in pts)
        else:
            out.append(parse_complex(v))
    return out


def fmt_number(z: complex, digits: int = 15) -> str:
    """Format with ``digits`` significant digits in the "a+bi" syntax."""
    z = complex(z)
    re_s = f"{z.real:.{digits}g}"
    if z.imag == 0:
        return re_s
    return f"{re_s}{z.imag:+.{digits}g}i"


def exact_number(z: complex) -> str:
    """Shortest round-tripping form (re-parses to the same double)."""
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'+' if math.copysign(1, z.imag) > 0 else '-'}{abs(z.imag)!r}i"


def _plain(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# eval registry


def _need(args, name: str, flag: str, single: bool = True):
    v = getattr(args, name)
    if v is None or (isinstance(v, list) and not v):
        raise UsageError(f"this function needs --{flag}")
    if isinstance(v, list):
        if single and len(v) != 1:
            raise UsageError(f"--{flag} takes one value here")
        return v[0] if single else v
    return v


def _pair(args, name: str, flag: str) -> tuple[complex, complex]:
    v = _need(args, name, flag, single=False)
    if len(v) == 1:
        return v[0], v[0]
    if len(v) != 2:
        raise UsageError(f"--{flag} takes one or two values here")
    return v[0], v[1]


def _gamma_fn(fn):
    def run(args):
        z = _need(args, "z", "z")
        return fn(z), {"params": {"z": z}, "method": "direct"}
    return run


def _bessel_fn(fn):
    def run(args):
        al, r = _need(args, "alpha", "alpha"), _need(args, "r", "r")
        return fn(al, r), {"params": {"alpha": al, "r": r}, "method": "direct"}
    return run


def _gegen_fn(fn):
    def run(args):
        al, lam, w = _need(args, "alpha", "alpha"), _need(args, "lam", "lambda"), _need(args, "w", "w")
        return fn(al, lam, w), {"params": {"alpha": al, "lambda": lam, "w": w}, "method": "direct"}
    return run


def _result_meta(res: bl.BilinearResult, params: dict) -> tuple[complex, dict]:
    return res.value, {"params": params, "method": res.method, "anomalous": res.anomalous,
                       "variable_convention": res.variable_convention}


def _eval_macdonald(args):
    al, a, b = _need(args, "alpha", "alpha"), _need(args, "a", "a"), _need(args, "b", "b")
    params = {"alpha": al, "a": a, "b": b}
    if args.method == "oracle":
        return _result_meta(bl.macdonald_bilinear_oracle(al, a, b, tol=args.tol), params)
    return _result_meta(bl.macdonald_bilinear(al, a, b), params)


def _eval_s_bilinear(args):
    al = _need(args, "alpha", "alpha")
    b1, b2 = _pair(args, "beta", "beta")
    params = {"alpha": al, "beta1": b1, "beta2": b2}
    if args.method == "oracle":
        return _result_meta(bl.gegenbauer_s_bilinear_oracle(al, b1, b2, tol=args.tol), params)
    return _result_meta(bl.gegenbauer_s_bilinear(al, b1, b2), params)


def _eval_z_bilinear(args):
    al = _need(args, "alpha", "alpha")
    l1, l2 = _pair(args, "lam", "lambda")
    params = {"alpha": al, "lambda1": l1, "lambda2": l2}
    if args.method == "oracle":
        return _result_meta(bl.gegenbauer_z_bilinear_oracle(al, l1, l2, tol=args.tol), params)
    return _result_meta(bl.gegenbauer_z_bilinear(al, l1, l2), params)


def _eval_gen_integrate(args):
    name = args.example or "gamma_example"
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = parse_complex(v)
    if args.alpha and "alpha" not in params:
        params["alpha"] = args.alpha[0]
    try:
        g = gi.example_integrand(name, **params)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"example {name!r}: missing or unexpected parameter ({exc})") from None
    value = gi.gen_integrate(g, tol=min(args.tol, 1e-10))
    meta = {"params": {"example": name, **params}, "method": "gen_integrate",
            "anomalous": g.expansion.anomalous,
            "closed_form": gi.example_value(name, **params)}
    return value, meta


EVAL_FUNCTIONS: dict[str, Callable] = {
    "gamma": _gamma_fn(gk.gamma),
    "ln_gamma": _gamma_fn(gk.ln_gamma),
    "reciprocal_gamma": _gamma_fn(gk.reciprocal_gamma),
    "digamma": _gamma_fn(gk.digamma),
    "trigamma": _gamma_fn(gk.trigamma),
    "tetragamma": _gamma_fn(gk.tetragamma),
    "bessel_k": _bessel_fn(bs.bessel_k),
    "bessel_i": _bessel_fn(bs.bessel_i),
    "bessel_j": _bessel_fn(bs.bessel_j),
    "gegen_s": _gegen_fn(gg.gegen_s),
    "gegen_z": _gegen_fn(gg.gegen_z),
    "gegen_s_reflected": _gegen_fn(gg.gegen_s_reflected),
    "gen_integrate": _eval_gen_integrate,
    "macdonald_bilinear": _eval_macdonald,
    "gegenbauer_s_bilinear": _eval_s_bilinear,
    "gegenbauer_z_bilinear": _eval_z_bilinear,
}


def _jsonable(obj):
    if isinstance(obj, complex):
        return _plain(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def cmd_eval(args, out) -> int:
    value, meta = EVAL_FUNCTIONS[args.function](args)
    value = complex(value)
    if args.format == "json":
        doc = {"function": args.function, "value": _plain(value), "value_15g": fmt_number(value),
               "value_exact": exact_number(value), **_jsonable(meta)}
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["function", "value", "value_exact", "method"])
        w.writerow([args.function, fmt_number(value), exact_number(value), meta.get("method", "")])
        return 0
    out.write(fmt_number(value) + "\n")
    out.write(f"  function: {args.function}\n")
    for k, v in meta.items():
        if k == "params":
            v = ", ".join(f"{pk}={fmt_number(pv) if isinstance(pv, complex) else pv}" for pk, pv in v.items())
        elif isinstance(v, complex):
            v = fmt_number(v)
        out.write(f"  {k}: {v}\n")
    out.write(f"  exact: {exact_number(value)}\n")
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n, args.tol) for n in names]
    for r in reports:
        log.info("suite %s: %s (max residual %.3g, %.1f s)", r.suite, "pass" if r.passed else "FAIL",
                 r.max_residual, r.elapsed)
    ok = all(r.passed for r in reports)
    if args.format == "json":
        doc = reports[0].as_dict() if len(reports) == 1 else \
            {"passed": ok, "suites": [r.as_dict() for r in reports]}
        out.write(json.dumps(_jsonable(doc), indent=2) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["suite", "check", "residual", "tol", "passed"])
        for r in reports:
            for c in r.checks:
                w.writerow([r.suite, c.name, repr(c.residual), repr(c.tol), c.passed])
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# sweep

SWEEP_TARGETS = {
    # target: (second/third parameter flags, defaults for missing grids)
    "macdonald_bilinear": (("a", "b"), (1.0, 2.0)),
    "macdonald_bilinear_quadrature": (("a", "b"), (1.0, 2.0)),
    "gegenbauer_s_bilinear": (("beta", "beta2"), (0.5, None)),
    "gegenbauer_z_bilinear": (("lam", "lam2"), (0.8, None)),
}


def _sweep_point(task: tuple) -> dict:
    """Evaluate one grid point. Errors are recorded in the row."""
    index, target, al, p1, p2, tol, timing = task
    row = {"index": index, "target": target, "alpha": al, "param1": p1, "param2": p2}
    t0 = time.perf_counter()
    try:
        if target.startswith("macdonald"):
            closed = bl.macdonald_bilinear(al, p1, p2)
            if target == "macdonald_bilinear_quadrature":
                oracle = bl.macdonald_bilinear_quadrature(al, p1, p2, tol=tol)
            else:
                oracle = bl.macdonald_bilinear_oracle(al, p1, p2, tol=tol)
        elif target == "gegenbauer_s_bilinear":
            closed = bl.gegenbauer_s_bilinear(al, p1, p2)
            oracle = bl.gegenbauer_s_bilinear_oracle(al, p1, p2, tol=tol)
        else:
            closed = bl.gegenbauer_z_bilinear(al, p1, p2)
            oracle = bl.gegenbauer_z_bilinear_oracle(al, p1, p2, tol=tol)
        c, o = complex(closed.value), complex(oracle.value)
        err = abs(c - o)
        row.update(closed=c, oracle=o, abs_err=err, rel_err=err / abs(o) if o != 0 else math.inf,
                   anomalous=closed.anomalous, variable_convention=closed.variable_convention, error="")
    except GenBilinearError as exc:
        row.update(closed=None, oracle=None, abs_err=None, rel_err=None, anomalous=None,
                   variable_convention="", error=f"{type(exc).__name__}: {exc}")
    row["runtime_s"] = time.perf_counter() - t0 if timing else None
    return row


def build_grid(args) -> list[tuple]:
    target = args.target
    (f1, f2), (d1, d2) = SWEEP_TARGETS[target]
    alphas = parse_grid(args.alpha)
    g1 = parse_grid(getattr(args, f1))
    g2 = parse_grid(getattr(args, f2))
    alphas = [0.5 + 0j] if alphas is None else alphas
    g1 = [complex(d1)] if g1 is None else g1
    if g2 is None:
        # diagonal when the second grid is absent for the Gegenbauer targets
        pairs = [(x, x if d2 is None else complex(d2)) for x in g1]
    elif args.zip:
        if len(g1) != len(g2):
            raise UsageError("--zip needs grids of equal length")
        pairs = list(zip(g1, g2))
    else:
        pairs = list(itertools.product(g1, g2))
    n = len(alphas) * len(pairs)
    if n > MAX_GRID_POINTS:
        raise UsageError(f"grid has {n} points; the limit is {MAX_GRID_POINTS}")
    timing = not args.no_timing
    return [(i, target, al, p1, p2, args.tol, timing)
            for i, (al, (p1, p2)) in enumerate(itertools.product(alphas, pairs))]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return exact_number(v)
    if isinstance(v, float):
        return repr(v + 0.0)  # folds -0.0 into 0.0
    return str(v)


def _row_cells(row: dict) -> list[str]:
    c, o = row.get("closed"), row.get("oracle")
    vals = {
        **row,
        "closed_re": None if c is None else c.real, "closed_im": None if c is None else c.imag,
        "oracle_re": None if o is None else o.real, "oracle_im": None if o is None else o.imag,
    }
    return [_csv_cell(vals.get(k)) for k in SWEEP_COLUMNS]


def run_sweep(tasks: list[tuple], jobs: int) -> list[dict]:
    """Evaluate all points; results come back in grid order for any ``jobs``."""
    if jobs <= 1 or len(tasks) <= 1:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def cmd_sweep(args, out) -> int:
    tasks = build_grid(args)
    log.info("sweep %s: %d points, %d jobs", args.target, len(tasks), args.jobs)
    rows = run_sweep(tasks, args.jobs)
    n_err = sum(1 for r in rows if r["error"])
    if args.format == "json":
        doc = {"format_version": SWEEP_FORMAT_VERSION, "package_version": __version__,
               "target": args.target, "tol": args.tol, "columns": list(SWEEP_COLUMNS),
               "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows]}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"# genbilinear sweep format_version={SWEEP_FORMAT_VERSION} "
                  f"package_version={__version__} target={args.target} tol={args.tol!r}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow(_row_cells(r))
    if n_err:
        log.warning("%d of %d points raised errors (recorded in the error column)", n_err, len(rows))
    return 0


# ---------------------------------------------------------------------------
# entry point


def _tol(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _cnum(text: str) -> complex:
    try:
        return parse_complex(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genint", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, default_format, tol_default):
        sp.add_argument("--tol", type=_tol, default=tol_default)
        sp.add_argument("--format", choices=formats, default=default_format)
        sp.add_argument("--out", help="write to this file instead of stdout")

    e = sub.add_parser("eval", help="evaluate a function or a bilinear integral")
    e.add_argument("function", choices=sorted(EVAL_FUNCTIONS))
    e.add_argument("--alpha", type=_cnum, nargs="+")
    e.add_argument("--lambda", dest="lam", type=_cnum, nargs="+")
    e.add_argument("--beta", type=_cnum, nargs="+")
    for name in ("a", "b", "w", "r", "z"):
        e.add_argument(f"--{name}", type=_cnum)
    e.add_argument("--method", choices=bl.METHODS, default="closed_form",
                   help="bilinear integrals: closed form or generalized-integral oracle")
    e.add_argument("--example", choices=gi.EXAMPLES, help="gen_integrate: built-in integrand")
    e.add_argument("--param", action="append", help="gen_integrate: example parameter KEY=VALUE")
    common(e, ("text", "json", "csv"), "text", DEFAULT_TOL)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--tol", type=_tol, default=None,
                   help="override the tolerance of identity checks (default: per-check bounds)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out")

    s = sub.add_parser("sweep", help="closed form against oracle over a parameter grid")
    s.add_argument("target", choices=sorted(SWEEP_TARGETS))
    for flag, dest in (("alpha", "alpha"), ("a", "a"), ("b", "b"), ("beta", "beta"), ("beta2", "beta2"),
                       ("lambda", "lam"), ("lambda2", "lam2")):
        s.add_argument(f"--{flag}", dest=dest, nargs="*", metavar="V",
                       help="values or start:stop:num")
    s.add_argument("--zip", action="store_true", help="pair the two parameter grids instead of crossing them")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timing", action="store_true",
                   help="leave runtime_s empty so repeated runs are byte-identical")
    common(s, ("csv", "json"), "csv", DEFAULT_TOL)
    return p


def _setup_logging() -> None:
    level = os.environ.get("GENINT_LOG", "WARNING").strip().upper()
    lvl = int(level) if level.isdigit() else getattr(logging, level, logging.WARNING)
    logging.basicConfig(level=lvl, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    handlers = {"eval": cmd_eval, "verify": cmd_verify, "sweep": cmd_sweep}
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        code = handlers[args.command](args, buf)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except (GenBilinearError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"{parser.prog}: {type(exc).__name__}: {exc}\n")
        return 3
    text = buf.getvalue()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"{parser.prog}: cannot write {args.out}: {exc}\n")
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
