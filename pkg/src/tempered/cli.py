"""Command-line front end.

Objects are read as JSON (see the README for schemas), tables are written
as CSV with 17 significant digits.  Exit status: 0 success, 1 bad input,
2 numerical contract violation.

Inputs may be a path, ``-`` for stdin, or a built-in fixture name
(``gaussian``, ``zero``, ``basis:N``).  Relative paths that do not exist
are also looked up in the directory named by ``$TEMPERED_FIXTURES``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance
from . import distribution as dist
from . import lcs
from . import schwartz as sw
from . import sobolev as sob

FIXTURE_ENV = "TEMPERED_FIXTURES"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONTRACT = 2


class InputError(Exception):
    """Malformed or missing input (exit status 1)."""


class ContractViolation(Exception):
    """A numerical contract failed (exit status 2)."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


# input helpers ----------------------------------------------------------------

def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if not path.exists() and not path.is_absolute() and os.environ.get(FIXTURE_ENV):
        path = Path(os.environ[FIXTURE_ENV]) / source
    try:
        return path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source!r}: {exc.strerror or exc}") from None


def _read_json(source: str):
    text = _read_text(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_schwartz(source: str) -> sw.SchwartzFn:
    if source == "gaussian":
        return sw.gaussian()
    if source == "zero":
        return sw.zero()
    if source.startswith("basis:"):
        try:
            return sw.basis(int(source.split(":", 1)[1]))
        except ValueError:
            raise InputError(f"bad fixture {source!r}") from None
    try:
        return sw.SchwartzFn.from_dict(_read_json(source))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def load_dist(source: str) -> dist.TemperedDist:
    if source in dist.BUILTIN_ORACLES:
        return dist.BUILTIN_ORACLES[source]()
    try:
        return dist.dist_from_dict(_read_json(source))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def operator_from_dict(obj) -> callable:
    """Build a linear map on Schwartz functions from its JSON description.

    ``{"op": "identity" | "fourier" | "inverse_fourier" | "derivative" | "mul_by_x"}``,
    ``{"op": "mul_by_poly", "poly": [p0, p1, ...]}``,
    ``{"op": "scale", "c": [re, im]}`` or
    ``{"op": "compose", "ops": [first, second, ...]}`` (applied in list order).
    """
    if not isinstance(obj, dict) or "op" not in obj:
        raise ValueError("operator JSON needs an 'op' field")
    name = obj["op"]
    simple = {
        "identity": lambda f: f,
        "fourier": sw.fourier,
        "inverse_fourier": sw.inverse_fourier,
        "derivative": sw.derivative,
        "mul_by_x": sw.mul_by_x,
    }
    if name in simple:
        return simple[name]
    if name == "mul_by_poly":
        poly = obj.get("poly")
        if not isinstance(poly, list) or not poly:
            raise ValueError("mul_by_poly needs a non-empty 'poly' list")
        p = [float(c) for c in poly]
        return lambda f: sw.mul_by_poly(f, p)
    if name == "scale":
        c = obj.get("c")
        if not isinstance(c, list) or len(c) != 2:
            raise ValueError("scale needs 'c': [re, im]")
        z = complex(float(c[0]), float(c[1]))
        return lambda f: sw.scale(z, f)
    if name == "compose":
        ops = [operator_from_dict(o) for o in obj.get("ops", [])]
        if not ops:
            raise ValueError("compose needs a non-empty 'ops' list")

        def composed(f):
            for op in ops:
                f = op(f)
            return f
        return composed
    raise ValueError(f"unknown operator {name!r}")


# output helpers --------------------------------------------------------------

class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.buf = io.StringIO()

    def csv(self, header, rows):
        writer = csv.writer(self.buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])

    def json(self, obj):
        self.buf.write(json.dumps(obj) + "\n")

    def text(self, line: str):
        self.buf.write(line + "\n")

    def flush(self):
        data = self.buf.getvalue()
        if self.path and self.path != "-":
            Path(self.path).write_text(data)
        else:
            sys.stdout.write(data)
            sys.stdout.flush()


# commands -------------------------------------------------------------------------

def cmd_eval(args, out: _Output) -> int:
    f = load_schwartz(args.function)
    rows = []
    for x in args.x:
        v = f(x)
        rows.append([x, v.real, v.imag])
    out.csv(["x", "re", "im"], rows)
    return EXIT_OK


def cmd_fourier(args, out: _Output) -> int:
    f = load_schwartz(args.function)
    g = sw.inverse_fourier(f) if args.inverse else sw.fourier(f)
    out.json(g.to_dict())
    return EXIT_OK


def cmd_seminorms(args, out: _Output) -> int:
    f = load_schwartz(args.function)
    kmax, nmax = args.grid
    if kmax < 0 or nmax < 0:
        raise InputError("--grid values must be non-negative")
    table = np.array([[sw.seminorm(f, (k, n)) for n in range(nmax + 1)] for k in range(kmax + 1)])
    out.csv(["k", "n", "seminorm"],
            [[k, n, table[k, n]] for k in range(kmax + 1) for n in range(nmax + 1)])
    if args.plot:
        from .plotting import seminorm_heatmap
        seminorm_heatmap(table, args.plot)
    return EXIT_OK


def cmd_pair(args, out: _Output) -> int:
    f, g = load_schwartz(args.f), load_schwartz(args.g)
    p, q = sw.pairing(f, g), sw.inner(f, g)
    out.csv(["pairing_re", "pairing_im", "inner_re", "inner_im"], [[p.real, p.imag, q.real, q.imag]])
    return EXIT_OK


_DIST_OPS = {
    "fourier": dist.fourier_dist,
    "inverse_fourier": dist.inverse_fourier_dist,
    "derivative": dist.derivative_dist,
    "x": lambda u: dist.mul_poly_dist(u, [0.0, 1.0]),
}


def cmd_apply_dist(args, out: _Output) -> int:
    u = load_dist(args.dist)
    f = load_schwartz(args.function)
    for name in args.op or []:
        u = _DIST_OPS[name](u)
    v = dist.apply(u, f)
    out.csv(["re", "im"], [[v.real, v.imag]])
    return EXIT_OK


def cmd_multiplier(args, out: _Output) -> int:
    try:
        m = sob.multiplier_from_label(args.symbol)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    f = load_schwartz(args.function)
    try:
        res = sob.apply_multiplier(m, f, args.proj_degree)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    obj = res.fn.to_dict()
    obj["aliasing_residual"] = res.aliasing_residual
    obj["proj_degree"] = res.proj_degree
    obj["symbol"] = m.label
    out.json(obj)
    if args.plot:
        from .plotting import multiplier_figure
        multiplier_figure(f, res.fn, m.label, args.plot)
    if args.tol is not None and res.aliasing_residual > args.tol:
        raise ContractViolation(f"aliasing residual {res.aliasing_residual:.3g} exceeds --tol {args.tol:g}")
    return EXIT_OK


def cmd_sobolev(args, out: _Output) -> int:
    f = load_schwartz(args.function)
    try:
        est = sob.sobolev_estimate(f, args.s, args.proj_degree)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.csv(["s", "norm", "aliasing_residual", "proj_degree"],
            [[float(args.s), est.norm, est.aliasing_residual, est.proj_degree]])
    if args.plot:
        from .plotting import sobolev_figure
        sobolev_figure(f, args.s, args.plot)
    if args.tol is not None and est.aliasing_residual > args.tol:
        raise ContractViolation(f"aliasing residual {est.aliasing_residual:.3g} exceeds --tol {args.tol:g}")
    return EXIT_OK


def cmd_certify(args, out: _Output) -> int:
    try:
        op = operator_from_dict(_read_json(args.op))
        cert = lcs.BoundCertificate.from_dict(_read_json(args.cert))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        report = lcs.validate_certificate(op, cert, trials=args.trials, max_degree=args.degree,
                                          seed=args.seed, stop_on_violation=args.stop_on_violation)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.text(report.to_json())
    if not report.clean:
        raise ContractViolation(f"certificate violated in {len(report.violations)} check(s)")
    return EXIT_OK


def cmd_plancherel(args, out: _Output) -> int:
    f = load_schwartz(args.function)
    a, b = sw.l2_norm(f), sw.l2_norm(sw.fourier(f))
    out.csv(["l2_norm", "fourier_l2_norm", "difference"], [[a, b, b - a]])
    if args.plot:
        from .plotting import plancherel_figure
        plancherel_figure(f, args.plot)
    if args.tol is not None and abs(b - a) > args.tol:
        raise ContractViolation(f"Plancherel defect {abs(b - a):.3g} exceeds --tol {args.tol:g}")
    return EXIT_OK


def cmd_selftest(args, out: _Output) -> int:
    def emit(line):
        out.text(line)
        if not args.output:
            out.flush()
            out.buf = io.StringIO()

    results = acceptance.run_all(emit)
    total = sum(r.seconds for r in results)
    failed = [r for r in results if not r.passed]
    ok = not failed and total <= acceptance.SELFTEST_BUDGET
    out.text(f"[{'PASS' if ok else 'FAIL'}] 11 selftest: {len(results) - len(failed)}/{len(results)} "
             f"criteria passed in {total:.1f}s (budget {acceptance.SELFTEST_BUDGET:.0f}s)")
    if not ok:
        raise ContractViolation("selftest failed")
    return EXIT_OK


# parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write output here instead of stdout")

    p = _Parser(prog="tempered", description="Schwartz functions, tempered distributions and Sobolev norms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="evaluate f at points")
    s.add_argument("function")
    s.add_argument("x", type=float, nargs="+")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("fourier", parents=[common], help="Fourier transform of f (JSON)")
    s.add_argument("function")
    s.add_argument("--inverse", action="store_true")
    s.set_defaults(func=cmd_fourier)

    s = sub.add_parser("seminorms", parents=[common], help="CSV table of p_{k,n}(f)")
    s.add_argument("function")
    s.add_argument("--grid", nargs=2, type=int, metavar=("KMAX", "NMAX"), default=(2, 2))
    s.add_argument("--plot", metavar="PNG", help="also write a heat map")
    s.set_defaults(func=cmd_seminorms)

    s = sub.add_parser("pair", parents=[common], help="bilinear pairing and inner product")
    s.add_argument("f")
    s.add_argument("g")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("apply-dist", parents=[common], help="evaluate a distribution on f")
    s.add_argument("dist", help="delta, const_one, or a distribution JSON file")
    s.add_argument("function")
    s.add_argument("--op", action="append", choices=sorted(_DIST_OPS),
                   help="transform the distribution first (repeatable, applied in order)")
    s.set_defaults(func=cmd_apply_dist)

    s = sub.add_parser("multiplier", parents=[common], help="apply F^-1 m F to f")
    s.add_argument("symbol", help="one, laplacian_2pi, d_dx or japanese_bracket:<s>")
    s.add_argument("function")
    s.add_argument("--proj-degree", type=int)
    s.add_argument("--tol", type=float, help="fail (exit 2) if the aliasing residual exceeds this")
    s.add_argument("--plot", metavar="PNG")
    s.set_defaults(func=cmd_multiplier)

    s = sub.add_parser("sobolev", parents=[common], help="H^s norm of f")
    s.add_argument("function")
    s.add_argument("--s", type=float, required=True)
    s.add_argument("--proj-degree", type=int)
    s.add_argument("--tol", type=float, help="fail (exit 2) if the aliasing residual exceeds this")
    s.add_argument("--plot", metavar="PNG")
    s.set_defaults(func=cmd_sobolev)

    s = sub.add_parser("certify", parents=[common], help="falsification run for a bound certificate")
    s.add_argument("op", help="operator JSON")
    s.add_argument("cert", help="certificate JSON")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--degree", type=int, default=16, help="max degree of random test functions")
    s.add_argument("--stop-on-violation", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("plancherel", parents=[common], help="|f|_2, |Ff|_2 and their difference")
    s.add_argument("function")
    s.add_argument("--tol", type=float)
    s.add_argument("--plot", metavar="PNG")
    s.set_defaults(func=cmd_plancherel)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.output)
    try:
        code = args.func(args, out)
    except InputError as exc:
        print(f"tempered: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContractViolation as exc:
        out.flush()
        print(f"tempered: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
