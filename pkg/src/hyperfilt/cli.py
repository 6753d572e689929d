"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 domain error, 3 I/O error,
4 integrity error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import List, Optional

import numpy as np

from . import checks
from . import filtration as F
from . import polynomials as P
from .errors import CapabilityError, ContractError, DomainError, IntegrityError, QuadratureError
from .geometry import surface_area
from .io import fmt, grid_checksum, parse_grid, parse_values, render_grid, render_values
from .quadrature import SampledFunction, l2_norm, sphere_grid

EXIT_OK, EXIT_CHECK, EXIT_DOMAIN, EXIT_IO, EXIT_INTEGRITY = 0, 1, 2, 3, 4

METHODS = ("explicit", "rodrigues", "integral", "recurrence")


def _emit(rows, out=None):
    out = out or sys.stdout
    for row in rows:
        out.write("\t".join(row) + "\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _load(args):
    grid = parse_grid(_read(args.grid))
    checksum = grid_checksum(grid)
    f = parse_values(_read(args.values), grid, checksum)
    return grid, checksum, f


# ---------------------------------------------------------------- subcommands


def cmd_dims(args) -> int:
    rows = [("l", "dim")]
    rows += [(str(l), str(P.dim_harmonics(l, args.n))) for l in range(args.lmax + 1)]
    _emit(rows)
    return EXIT_OK


def _legendre(method, l, N, t):
    if method == "explicit":
        return P.eval_legendre(l, N, t)
    if method == "rodrigues":
        return P.eval_legendre_rodrigues(l, N, t)
    if method == "integral":
        return P.eval_legendre_integral(l, N, t)
    return P.eval_legendre_recurrence(l, N, t)


def cmd_eval(args) -> int:
    ts = args.t
    if any(abs(t) > 1 for t in ts):
        raise DomainError("t must lie in [-1, 1]")
    if args.kind == "gegenbauer":
        if args.alpha is None:
            raise DomainError("gegenbauer needs --alpha")
        rows = [("t", "value")]
        rows += [(fmt(t), fmt(P.eval_gegenbauer(args.l, args.alpha, t))) for t in ts]
        _emit(rows)
        return EXIT_OK
    if args.n is None:
        raise DomainError("legendre needs --n")
    if not args.all_methods:
        rows = [("t", "value")]
        rows += [(fmt(t), fmt(_legendre(args.method, args.l, args.n, t))) for t in ts]
        _emit(rows)
        return EXIT_OK
    methods = [m for m in METHODS if not (m == "integral" and args.n < 3)]
    rows = [("t",) + tuple(methods) + ("max_dev",)]
    for t in ts:
        vals = []
        for m in methods:
            try:
                vals.append(_legendre(m, args.l, args.n, t))
            except DomainError:
                vals.append(float("nan"))
        finite = [v for v in vals if not math.isnan(v)]
        dev = max(finite) - min(finite) if finite else float("nan")
        rows.append((fmt(t),) + tuple(fmt(v) for v in vals) + (fmt(dev),))
    _emit(rows)
    return EXIT_OK


def cmd_quad(args) -> int:
    grid = sphere_grid(args.n, args.order)
    _write(args.out, render_grid(grid))
    total = float(np.sum(grid.weights))
    area = surface_area(args.n)
    _emit([
        ("points", str(grid.size)),
        ("sum_weights", fmt(total)),
        ("surface_area", fmt(area)),
        ("relative_deviation", f"{abs(total - area) / area:.3e}"),
    ])
    return EXIT_OK


def cmd_kernel_table(args) -> int:
    count = max(2, args.order)
    ts = np.linspace(-1.0, 1.0, count)
    vals = F.gegenbauer_kernel(args.n, args.r, ts)
    _emit([("t", "G")] + [(fmt(t), fmt(v)) for t, v in zip(ts, vals)])
    return EXIT_OK


def cmd_sample(args) -> int:
    grid = parse_grid(_read(args.grid))
    if args.l is None:
        f = SampledFunction(grid, np.full(grid.size, args.constant), 0)
    else:
        pole = np.zeros(grid.N)
        pole[-1] = 1.0
        t = np.clip(grid.points @ pole, -1.0, 1.0)
        f = SampledFunction(grid, args.constant * P.eval_legendre_recurrence(args.l, grid.N, t), args.l)
    _write(args.out, render_values(f))
    _emit([("rows", str(grid.size)), ("l2_norm", fmt(l2_norm(f)))])
    return EXIT_OK


def cmd_project(args) -> int:
    grid, checksum, f = _load(args)
    g = F.project_component(f, args.l)
    _write(args.out, render_values(g, checksum))
    _emit([("input_l2_norm", fmt(l2_norm(f))), ("output_l2_norm", fmt(l2_norm(g)))])
    return EXIT_OK


def cmd_filter(args) -> int:
    if not 0.0 <= args.r < 1.0:
        raise DomainError(f"r must satisfy 0 <= r < 1, got {args.r}")
    grid, checksum, f = _load(args)
    if args.lmax is not None and f.band_limit is None:
        f = SampledFunction(grid, f.values, args.lmax)
    cfg = F.FilterConfig(args.r, args.lmax, grid.N)
    g = F.filtrate(f, cfg)
    _write(args.out, render_values(g, checksum))
    rows = [("input_l2_norm", fmt(l2_norm(f))), ("output_l2_norm", fmt(l2_norm(g)))]
    if args.verify:
        if args.lmax is None:
            raise DomainError("--verify compares against the spectral path and needs --lmax")
        direct = F.filtrate(f, cfg, method="direct")
        rows.append(("direct_vs_spectral_max_dev", f"{np.max(np.abs(direct.values - g.values)):.3e}"))
    _emit(rows)
    return EXIT_OK


def _profile(args, N):
    if args.kernel == "poisson":
        if args.r is None:
            raise DomainError("poisson kernel needs --r")
        return F.ZonalProfile.gegenbauer(N, args.r)
    if args.kernel == "legendre":
        if args.l is None:
            raise DomainError("legendre kernel needs --l")
        return F.ZonalProfile.legendre(args.l, N)
    return F.ZonalProfile.polynomial([1.0], N)


def cmd_convolve(args) -> int:
    grid, checksum, f = _load(args)
    h = _profile(args, grid.N)
    g = F.zonal_convolve(f, h)
    _write(args.out, render_values(g, checksum))
    rows = [("input_l2_norm", fmt(l2_norm(f))), ("output_l2_norm", fmt(l2_norm(g)))]
    if args.lmax is not None:
        for l in range(args.lmax + 1):
            mult, claimed = F.convolution_spectrum(h, l, grid.N)
            rows.append((f"multiplier_l{l}", fmt(mult), fmt(claimed)))
    _emit(rows)
    return EXIT_OK


def cmd_check(args) -> int:
    results = checks.run(args.suite)
    for res in results:
        sys.stdout.write(res.line() + "\n")
    failed = sum(not r.passed for r in results)
    sys.stdout.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_OK if failed == 0 else EXIT_CHECK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperfilt", description="Harmonic analysis and Gegenbauer filtration on S^(N-1).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dims", help="dimensions of harmonic subspaces")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--lmax", type=int, required=True)
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("eval", help="tabulate Legendre or Gegenbauer polynomials")
    s.add_argument("kind", choices=("legendre", "gegenbauer"))
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--alpha", type=float)
    s.add_argument("--t", type=float, nargs="+", required=True)
    s.add_argument("--method", choices=METHODS, default="recurrence")
    s.add_argument("--all-methods", action="store_true")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("quad", help="write a sphere quadrature grid manifest")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_quad)

    s = sub.add_parser("kernel-table", help="tabulate the Gegenbauer filtration kernel")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--order", type=int, default=21, help="number of equispaced t samples")
    s.set_defaults(func=cmd_kernel_table)

    s = sub.add_parser("sample", help="write a values file with c * P_{l,N}(x . e_N)")
    s.add_argument("--grid", required=True)
    s.add_argument("--l", type=int)
    s.add_argument("--constant", type=float, default=1.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("project", help="degree-l harmonic component of sampled data")
    s.add_argument("--grid", required=True)
    s.add_argument("--values", required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("filter", help="Gegenbauer filtration of sampled data")
    s.add_argument("--grid", required=True)
    s.add_argument("--values", required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--lmax", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("convolve", help="convolution with a zonal kernel")
    s.add_argument("--grid", required=True)
    s.add_argument("--values", required=True)
    s.add_argument("--kernel", choices=("poisson", "legendre", "constant"), default="poisson")
    s.add_argument("--r", type=float)
    s.add_argument("--l", type=int)
    s.add_argument("--lmax", type=int, help="also print multipliers for l <= lmax")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("check", help="run the invariant suite")
    s.add_argument("suite", nargs="?", default="all", choices=("all",) + tuple(checks.SUITES))
    s.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntegrityError as exc:
        code, msg = EXIT_INTEGRITY, str(exc)
    except OSError as exc:
        code, msg = EXIT_IO, str(exc)
    except (DomainError, CapabilityError, ContractError, QuadratureError) as exc:
        code, msg = EXIT_DOMAIN, str(exc)
    sys.stderr.write(f"hyperfilt {args.command}: {msg}\n")
    return code

if __name__ == "__main__":
    sys.exit(main())
