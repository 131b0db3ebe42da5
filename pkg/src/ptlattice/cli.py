"""Command-line front end.

Examples::

    ptlattice spectrum --A 0.09 --B 0.1 --C 1
    ptlattice slice --A 0.09 --B -0.01 --scan --out slice.csv
    ptlattice trace --grid "0.1:3:0.1,-1:3:0.1" --jobs 4 --out mesh.csv
    ptlattice classify --A 0 --B 1 --C 1 --direction 1,0,0
    ptlattice selftest --samples 10000

Exit codes: 0 success, 2 usage error, 3 numerical or tolerance failure.
"""
from __future__ import annotations

import argparse
import itertools
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import io as pio
from .domain import (
    InconclusiveCrossingError,
    c_slice,
    classify_transition,
    classify_transition4,
    membership,
    scan_lambda4,
    trace_boundary,
)
from .implicit import UnphysicalLimitError, c_branch_profile
from .model import CartesianCouplings, ProductCouplings, to_products
from .secular import DEFAULT_TOL, spectrum, spectrum4
from .selftest import DEFAULT_SEED, run_battery

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


@dataclass(frozen=True)
class SweepConfig:
    """Axis ranges of a point sweep, either in products (A,B,C) or in (x,y,z)."""

    ranges: tuple[tuple[float, float, float], ...]
    cartesian: bool = False
    tol: float = DEFAULT_TOL
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if len(self.ranges) != 3:
            raise ValueError("a sweep needs three axis ranges")
        for lo, hi, step in self.ranges:
            if not step > 0 or hi < lo:
                raise ValueError(f"bad range {lo}:{hi}:{step}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")

    def axes(self) -> list[np.ndarray]:
        return [_axis(*r) for r in self.ranges]

    def points(self):
        for v in itertools.product(*self.axes()):
            v = tuple(float(t) for t in v)
            yield to_products(CartesianCouplings(*v)) if self.cartesian else ProductCouplings(*v)


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    return lo + step * np.arange(int(np.floor((hi - lo) / step + 1e-9)) + 1)


def _range(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}")
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"range {text!r} must have step > 0 and hi >= lo")
    return lo, hi, step


def _grid(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError('--grid expects "amin:amax:step,bmin:bmax:step"')
    return _range(parts[0]), _range(parts[1])


def _vector(text: str) -> tuple[float, float, float]:
    try:
        v = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}")
    if len(v) != 3 or not any(v):
        raise argparse.ArgumentTypeError("direction needs three comma-separated numbers, not all zero")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _add_point(p: argparse.ArgumentParser, need_c: bool = True) -> None:
    for name in ("A", "B", "C") if need_c else ("A", "B"):
        p.add_argument(f"--{name}", type=float)
    for name in ("x", "y", "z") if need_c else ("x", "y"):
        p.add_argument(f"--{name}", type=float)


def _point(args, parser) -> ProductCouplings:
    prod = [args.A, args.B, args.C]
    cart = [args.x, args.y, args.z]
    if all(v is not None for v in prod) and not any(v is not None for v in cart):
        return ProductCouplings(*prod)
    if all(v is not None for v in cart) and not any(v is not None for v in prod):
        return to_products(CartesianCouplings(*cart))
    parser.error("give either all of --A --B --C or all of --x --y --z")


def _emit(text: str, out) -> None:
    if out:
        pio.write_text(out, text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_spectrum(args, parser) -> int:
    if args.lam is not None or args.a4 is not None:
        if args.lam is None or args.a4 is None:
            parser.error("the N=4 model needs both --lam and --a4")
        res = spectrum4(args.lam, args.a4, args.tol)
    else:
        res = spectrum(_point(args, parser), args.tol)
    _emit(pio.spectrum_to_json(res), args.out)
    return EXIT_OK


def cmd_slice(args, parser) -> int:
    if args.A is None or args.B is None:
        if args.x is None or args.y is None:
            parser.error("give --A --B (or --x --y)")
        a, b = 1 - args.x**2, 1 - args.y**2
    else:
        a, b = args.A, args.B
    if args.scan:
        cs = _axis(*args.crange)
        verdicts = [membership(ProductCouplings(a, b, float(c)), args.tol) for c in cs]
        if args.format == "json":
            rows = [{"C": float(c), "verdict": v.verdict.value} for c, v in zip(cs, verdicts)]
            _emit(pio.dumps(rows), args.out)
        else:
            _emit(pio.scan_to_csv(cs, verdicts), args.out)
        return EXIT_OK
    sl = c_slice(a, b, args.tol)
    if args.format == "csv":
        _emit(pio.table_to_csv(["C_lo", "C_hi"], sl.intervals), args.out)
    else:
        _emit(pio.slice_to_json(sl), args.out)
    return EXIT_OK


def cmd_profile(args, parser) -> int:
    try:
        prof = c_branch_profile(args.alpha, args.B)
    except (UnphysicalLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(pio.profile_to_json(prof), args.out)
    return EXIT_OK


def cmd_curve(args, parser) -> int:
    e = _axis(*args.erange)
    params = {"b": args.B, "c": args.C, "alpha": args.alpha}
    needed = {"C": ("b", "alpha"), "alpha": ("b", "c"), "B": ("c", "alpha")}[args.kind]
    missing = [k for k in needed if params[k] is None]
    if missing:
        parser.error(f"curve {args.kind} needs " + " ".join(f"--{'alpha' if k == 'alpha' else k.upper()}" for k in missing))
    e, vals = pio.sample_curve(args.kind, e, **{k: params[k] for k in needed})
    _emit(pio.curve_to_csv(args.kind, e, vals), args.out)
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    prod = [args.A, args.B, args.C]
    cart = [args.x, args.y, args.z]
    if all(v is not None for v in prod) and not any(v is not None for v in cart):
        ranges, cartesian = prod, False
    elif all(v is not None for v in cart) and not any(v is not None for v in prod):
        ranges, cartesian = cart, True
    else:
        parser.error("give lo:hi:step ranges for all of --A --B --C or all of --x --y --z")
    cfg = SweepConfig(tuple(ranges), cartesian, args.tol, args.out, args.format or "csv")
    rows = []
    for p in cfg.points():
        v = membership(p, cfg.tol)
        rows.append((p.A, p.B, p.C, v.verdict.value, v.n_real))
    header = ["A", "B", "C", "verdict", "n_real"]
    if cfg.format == "json":
        _emit(pio.dumps([dict(zip(header, r)) for r in rows]), cfg.out)
    else:
        _emit(pio.table_to_csv(header, rows), cfg.out)
    return EXIT_OK


def cmd_trace(args, parser) -> int:
    (a_rng, b_rng) = args.grid
    if a_rng[0] <= 0:
        parser.error("the A range must lie in (0, a_max]")
    mesh = trace_boundary(a_rng, b_rng, jobs=args.jobs)
    if args.format == "json":
        pts = [{"A": p.a, "B": p.b, "C": p.c, "sheet_tag": p.sheet} for p in mesh.points]
        _emit(pio.dumps({"planes": list(mesh.planes), "points": pts}), args.out)
    else:
        _emit(pio.mesh_to_csv(mesh), args.out)
    return EXIT_OK


def cmd_classify(args, parser) -> int:
    try:
        if args.lam is not None:
            if args.a4 is None:
                parser.error("the N=4 model needs --a4 with --lam")
            rep = classify_transition4(args.lam, args.a4, args.eps, args.tol)
        else:
            if args.direction is None:
                parser.error("--direction is required for the six-site model")
            rep = classify_transition(_point(args, parser), args.direction, args.eps, args.tol)
    except (InconclusiveCrossingError, ValueError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(pio.transition_to_json(rep), args.out)
    return EXIT_OK


def cmd_scan4(args, parser) -> int:
    lo, hi, step = args.lrange
    ps = scan_lambda4(args.a4, lo, hi, step, args.tol)
    _emit(pio.physical_set_to_json(ps), args.out)
    return EXIT_OK


def cmd_selftest(args, parser) -> int:
    checks = run_battery(samples=args.samples, seed=args.seed)
    for chk in checks:
        print(chk.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptlattice", description="Physical domain of the PT-symmetric six-site lattice.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="degeneracy tolerance")
        p.add_argument("--out", help="write to this file instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("spectrum", help="six energies at one point (or N=4 with --lam/--a4)")
    _add_point(p)
    p.add_argument("--lam", type=float)
    p.add_argument("--a4", type=float, help="inner product a of the N=4 model")
    common(p)
    p.set_defaults(func=cmd_spectrum, parser=p)

    p = sub.add_parser("slice", help="physical C-intervals at fixed (A, B)")
    _add_point(p, need_c=False)
    p.add_argument("--scan", action="store_true", help="emit (C, verdict) CSV instead of the interval JSON")
    p.add_argument("--crange", type=_range, default=(-1.0, 6.0, 1e-3), help="lo:hi:step of the C scan")
    common(p, fmt=True)
    p.set_defaults(func=cmd_slice, parser=p)

    p = sub.add_parser("profile", help="critical levels of C(E) at fixed (alpha, B)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_profile, parser=p)

    p = sub.add_parser("curve", help="sample C(E), alpha(E) or B(E) as two-column CSV")
    p.add_argument("kind", choices=("C", "alpha", "B"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--C", type=float)
    p.add_argument("--erange", type=_range, default=(-3.0, 3.0, 1e-2))
    common(p)
    p.set_defaults(func=cmd_curve, parser=p)

    p = sub.add_parser("sweep", help="verdict on a 3D grid; each axis flag takes lo:hi:step")
    for name in ("A", "B", "C", "x", "y", "z"):
        p.add_argument(f"--{name}", type=_range)
    common(p, fmt=True)
    p.set_defaults(func=cmd_sweep, parser=p)

    p = sub.add_parser("trace", help="boundary mesh over an (A, B) grid")
    p.add_argument("--grid", type=_grid, default=((0.01, 3.0, 0.01), (-1.0, 3.0, 0.01)),
                   help='"amin:amax:step,bmin:bmax:step"')
    p.add_argument("--jobs", type=int, default=1)
    common(p, fmt=True)
    p.set_defaults(func=cmd_trace, parser=p)

    p = sub.add_parser("classify", help="first- or second-kind transition at a boundary point")
    _add_point(p)
    p.add_argument("--direction", type=_vector)
    p.add_argument("--lam", type=float)
    p.add_argument("--a4", type=float)
    p.add_argument("--eps", type=_positive, default=1e-4)
    common(p)
    p.set_defaults(func=cmd_classify, parser=p)

    p = sub.add_parser("scan4", help="physical lambda-set of the N=4 model")
    p.add_argument("--a4", type=float, required=True)
    p.add_argument("--lrange", type=_range, default=(-1.0, 3.0, 1e-4))
    common(p)
    p.set_defaults(func=cmd_scan4, parser=p)

    p = sub.add_parser("selftest", help="run the invariant battery")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_selftest, parser=p)
    return ap


_NEG_RANGE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-1:2:0.1" (or "-1,0,0") for an option; fuse it onto its flag
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG_RANGE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    return args.func(args, args.parser)


if __name__ == "__main__":
    raise SystemExit(main())
