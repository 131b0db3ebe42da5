"""Physical-domain membership, slices, boundary meshes and transition kinds."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .implicit import c_branch_profile
from .model import ProductCouplings
from .secular import DEFAULT_TOL, Classification, SpectrumResult, spectrum, spectrum4

__all__ = [
    "Verdict",
    "DomainVerdict",
    "BoundarySlice",
    "BoundaryPoint",
    "BoundaryMesh",
    "PhysicalSet",
    "TransitionKind",
    "TransitionReport",
    "InconclusiveCrossingError",
    "membership",
    "membership4",
    "c_slice",
    "detect_gap",
    "trace_boundary",
    "scan_physical_set",
    "scan_lambda4",
    "classify_transition",
    "classify_transition4",
    "COORDINATE_PLANES",
]

COORDINATE_PLANES = ("A=0", "B=0", "C=0")


class Verdict(str, Enum):
    PHYSICAL = "Physical"
    UNPHYSICAL = "Unphysical"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class DomainVerdict:
    verdict: Verdict
    n_real: int
    min_separation: float
    degeneracy: float
    tol: float
    on_plane: str | None = None
    spectrum: SpectrumResult | None = field(default=None, repr=False, compare=False)

    @property
    def physical(self) -> bool:
        return self.verdict is Verdict.PHYSICAL

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "n_real": self.n_real,
            "min_separation": self.min_separation,
            "degeneracy": self.degeneracy,
            "tol": self.tol,
            "on_plane": self.on_plane,
        }


def _verdict_from(sp: SpectrumResult, on_plane: str | None = None) -> DomainVerdict:
    if on_plane is not None or sp.classification is Classification.DEGENERATE:
        v = Verdict.BOUNDARY
    elif sp.classification is Classification.ALL_REAL:
        v = Verdict.PHYSICAL
    else:
        v = Verdict.UNPHYSICAL
    return DomainVerdict(v, sp.n_real, sp.min_separation, sp.degeneracy, sp.tol_used, on_plane, sp)


def membership(p: ProductCouplings, tol: float = DEFAULT_TOL) -> DomainVerdict:
    """Physical / Unphysical / Boundary verdict for the six-site lattice.

    Points within ``tol`` of a coordinate plane are Boundary regardless of
    the spectrum: each plane is a surface of exceptional points.
    """
    plane = None
    for name, v in zip(COORDINATE_PLANES, p.as_tuple()):
        if abs(v) <= tol:
            plane = name
            break
    return _verdict_from(spectrum(p, tol), plane)


def membership4(lam: float, a: float, tol: float = DEFAULT_TOL) -> DomainVerdict:
    return _verdict_from(spectrum4(lam, a, tol))


# ---------------------------------------------------------------- slices


@dataclass(frozen=True)
class BoundarySlice:
    """Physical values of C at fixed ``(A, B)``.

    ``intervals`` are open and sorted; ``math.inf`` marks the unbounded end.
    ``punctures`` lists isolated boundary points inside an interval (the
    C = 0 plane, where a level pair crosses at E = 0).
    """

    a: float
    b: float
    intervals: tuple[tuple[float, float], ...]
    gap: tuple[float, float] | None = None
    punctures: tuple[float, ...] = ()
    note: str = ""

    def contains(self, c: float) -> bool:
        return any(lo < c < hi for lo, hi in self.intervals) and c not in self.punctures

    def endpoints(self) -> list[float]:
        return [x for iv in self.intervals for x in iv if math.isfinite(x)] + list(self.punctures)

    def to_dict(self) -> dict:
        def enc(x):
            return x if math.isfinite(x) else None

        return {
            "a": self.a,
            "b": self.b,
            "intervals": [[enc(lo), enc(hi)] for lo, hi in self.intervals],
            "gap": list(self.gap) if self.gap else None,
            "punctures": list(self.punctures),
            "note": self.note,
        }


def c_slice(a: float, b: float, tol: float = DEFAULT_TOL) -> BoundarySlice:
    """Physical C-intervals at fixed ``(A, B)`` from the critical levels of ``C(E)``."""
    if a <= 0:
        return BoundarySlice(a, b, (), note="A <= 0: no physical C (A = 0 is an EP plane)")
    if b == 0:
        return BoundarySlice(a, b, (), note="B = 0: EP plane, levels +-sqrt(C) are doubly degenerate")
    prof = c_branch_profile(math.sqrt(a), b)
    if prof.has_gap:
        intervals = ((prof.c_min, prof.c_max), (prof.c_ep, math.inf))
        gap = (prof.c_max, prof.c_ep)
    else:
        intervals = ((prof.c_ep, math.inf),)
        gap = None
    punctures = (0.0,) if any(lo < 0.0 < hi for lo, hi in intervals) else ()
    return BoundarySlice(a, b, intervals, gap, punctures)


def detect_gap(a: float, b: float) -> tuple[float, float] | None:
    if a <= 0:
        raise ValueError("detect_gap needs A > 0")
    return c_slice(a, b).gap


# ---------------------------------------------------------------- mesh


@dataclass(frozen=True)
class BoundaryPoint:
    a: float
    b: float
    c: float
    sheet: str


@dataclass(frozen=True)
class BoundaryMesh:
    points: tuple[BoundaryPoint, ...]
    planes: tuple[str, ...] = COORDINATE_PLANES

    @property
    def sheets(self) -> set[str]:
        return {p.sheet for p in self.points}


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ValueError("grid step must be positive")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def _cell_points(ab: tuple[float, float]) -> list[BoundaryPoint]:
    a, b = ab
    if a <= 0 or b == 0:
        return []
    prof = c_branch_profile(math.sqrt(a), b)
    pts = [BoundaryPoint(a, b, prof.c_ep, "c_ep")]
    if prof.has_gap:
        pts += [BoundaryPoint(a, b, prof.c_min, "c_min"), BoundaryPoint(a, b, prof.c_max, "c_max")]
    return pts


def trace_boundary(a_range, b_range, resolution: float | None = None, jobs: int = 1) -> BoundaryMesh:
    """Boundary C-values over an (A, B) grid.

    ``a_range`` and ``b_range`` are ``(lo, hi)`` or ``(lo, hi, step)``;
    ``resolution`` supplies the step when a range omits it.  Cells on the
    B = 0 plane are skipped: the coordinate planes are reported analytically
    in ``BoundaryMesh.planes``.  Output order is by grid index regardless of
    ``jobs``.
    """
    def axis(r):
        if len(r) == 3:
            return _grid(*r)
        if resolution is None:
            raise ValueError("range needs a step or a resolution")
        return _grid(r[0], r[1], resolution)

    a_vals, b_vals = axis(a_range), axis(b_range)
    if a_vals.size and a_vals[0] <= 0:
        raise ValueError("A range must lie in (0, a_max]")
    cells = [(float(a), float(b)) for a in a_vals for b in b_vals]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_cell_points, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        chunks = [_cell_points(c) for c in cells]
    return BoundaryMesh(tuple(p for chunk in chunks for p in chunk))


# ---------------------------------------------------------------- scans


@dataclass(frozen=True)
class PhysicalSet:
    """Physical parameter values found along a one-dimensional scan.

    ``reaches_lo`` / ``reaches_hi`` mark intervals that run into the scan
    bounds, whose true extent is unknown beyond them.
    """

    intervals: tuple[tuple[float, float], ...]
    punctures: tuple[float, ...]
    lo: float
    hi: float
    step: float
    reaches_lo: bool = False
    reaches_hi: bool = False


def _level_gap(sp: SpectrumResult) -> float:
    e = np.sort(sp.real_energies())
    return float(np.min(np.diff(e))) if e.size > 1 else math.inf


def _real_gap(v: DomainVerdict) -> float:
    return _level_gap(v.spectrum) if v.spectrum.is_real else math.inf


def _bisect_edge(verdict_at, t_in: float, t_out: float, xtol: float) -> float:
    """Locate the edge between a physical ``t_in`` and a non-physical ``t_out``."""
    for _ in range(200):
        if abs(t_out - t_in) <= xtol * max(1.0, abs(t_in)):
            break
        mid = 0.5 * (t_in + t_out)
        if verdict_at(mid).physical:
            t_in = mid
        else:
            t_out = mid
    return 0.5 * (t_in + t_out)


def scan_physical_set(
    verdict_at: Callable[[float], DomainVerdict],
    lo: float,
    hi: float,
    step: float,
    xtol: float = 1e-13,
) -> PhysicalSet:
    """Grid scan of a one-parameter family with bisected endpoints.

    Runs of physical grid points become intervals.  Inside each run, local
    minima of the smallest level spacing are refined; if the refined point
    is a Boundary (a real level crossing the grid stepped over) it becomes
    a puncture that splits the interval.
    """
    ts = _grid(lo, hi, step)
    verdicts = [verdict_at(float(t)) for t in ts]
    phys = [v.physical for v in verdicts]
    intervals: list[tuple[float, float]] = []
    punctures: list[float] = []
    reaches_lo = reaches_hi = False
    n = len(ts)
    i = 0
    while i < n:
        if not phys[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and phys[j + 1]:
            j += 1
        if i == 0:
            left, reaches_lo = float(ts[0]), True
        else:
            left = _bisect_edge(verdict_at, float(ts[i]), float(ts[i - 1]), xtol)
        if j == n - 1:
            right, reaches_hi = float(ts[-1]), True
        else:
            right = _bisect_edge(verdict_at, float(ts[j]), float(ts[j + 1]), xtol)

        gaps = [_level_gap(verdicts[k].spectrum) for k in range(i, j + 1)]
        cuts = []
        for k in range(1, len(gaps) - 1):
            g, gl, gr = gaps[k], gaps[k - 1], gaps[k + 1]
            # a crossing between grid points leaves a V whose depth is comparable to its slopes
            if g <= gl and g <= gr and g <= 2.0 * ((gl - g) + (gr - g)):
                t0, t1 = float(ts[i + k - 1]), float(ts[i + k + 1])
                res = minimize_scalar(
                    lambda t: _real_gap(verdict_at(t)),
                    bounds=(t0, t1),
                    method="bounded",
                    options={"xatol": xtol, "maxiter": 500},
                )
                if verdict_at(float(res.x)).verdict is Verdict.BOUNDARY:
                    cuts.append(float(res.x))
        edges = [left, *sorted(set(cuts)), right]
        punctures += cuts
        intervals += list(zip(edges, edges[1:]))
        i = j + 1
    # a crossing hit exactly by the grid shows up as two nearly touching intervals
    for (_, r), (l2, _) in zip(intervals, intervals[1:]):
        if r not in punctures and l2 - r < step and verdict_at(0.5 * (r + l2)).verdict is Verdict.BOUNDARY:
            punctures.append(0.5 * (r + l2))
    return PhysicalSet(tuple(intervals), tuple(sorted(punctures)), lo, hi, step, reaches_lo, reaches_hi)


def scan_lambda4(a: float, lo: float, hi: float, step: float = 1e-4, tol: float = DEFAULT_TOL) -> PhysicalSet:
    """Physical set of the four-site model in the outer product ``lam`` at fixed ``a``."""
    return scan_physical_set(lambda t: membership4(t, a, tol), lo, hi, step)


# ---------------------------------------------------------------- transitions


class TransitionKind(str, Enum):
    FIRST = "FirstKind"
    SECOND = "SecondKind"


class InconclusiveCrossingError(RuntimeError):
    """Two-sided evidence does not single out a transition kind."""


@dataclass(frozen=True)
class TransitionReport:
    point: tuple[float, ...]
    direction: tuple[float, ...]
    kind: TransitionKind
    eps: float
    tol: float
    minus: SpectrumResult
    center: SpectrumResult
    plus: SpectrumResult
    level_exchange: bool
    model: str = "N6"

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "point": list(self.point),
            "direction": list(self.direction),
            "kind": self.kind.value,
            "eps": self.eps,
            "tol": self.tol,
            "level_exchange": self.level_exchange,
            "minus": self.minus.to_dict(),
            "center": self.center.to_dict(),
            "plus": self.plus.to_dict(),
        }


def _levels_exchange(minus: SpectrumResult, center: SpectrumResult, plus: SpectrumResult) -> bool:
    """Continue each level linearly through the center and match it to the far side.

    Levels that cross come out of the center in swapped order, so the
    optimal matching of predictions to the sorted far-side levels is not
    the identity.
    """
    em, e0, ep = (s.real_energies() for s in (minus, center, plus))
    pred = 2.0 * e0 - em
    _, perm = linear_sum_assignment(np.abs(pred[:, None] - ep[None, :]))
    return bool(np.any(perm != np.arange(len(perm))))


def _classify(spec_at: Callable[[float], SpectrumResult], eps: float):
    center = spec_at(0.0)
    if center.classification is not Classification.DEGENERATE:
        raise ValueError("classify_transition needs a boundary point (degenerate spectrum)")
    minus, plus = spec_at(-eps), spec_at(eps)
    sides = (minus.classification, plus.classification)
    if Classification.DEGENERATE in sides:
        raise InconclusiveCrossingError(
            "a side point is still degenerate; eps is too small to leave the boundary (or too large)"
        )
    n_complex = sides.count(Classification.COMPLEXIFIED)
    if n_complex == 1:
        return TransitionKind.FIRST, minus, center, plus, False
    if n_complex == 2:
        raise InconclusiveCrossingError("both sides complexified; try a smaller eps or another direction")
    if _levels_exchange(minus, center, plus):
        return TransitionKind.SECOND, minus, center, plus, True
    raise InconclusiveCrossingError("both sides real but no level exchange resolved; try a smaller eps")


def classify_transition(
    p: ProductCouplings, direction, eps: float = 1e-4, tol: float = DEFAULT_TOL
) -> TransitionReport:
    """First kind (a side complexifies) or second kind (real levels cross) at a boundary point."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    kind, m, c, pl, exch = _classify(lambda t: spectrum(p.shifted(d, t), tol), eps)
    return TransitionReport(p.as_tuple(), tuple(d), kind, eps, tol, m, c, pl, exch)


def classify_transition4(lam: float, a: float, eps: float = 1e-4, tol: float = DEFAULT_TOL) -> TransitionReport:
    """Same classification for the four-site model, crossing along ``lam``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    kind, m, c, pl, exch = _classify(lambda t: spectrum4(lam + t, a, tol), eps)
    return TransitionReport((lam, a), (1.0, 0.0), kind, eps, tol, m, c, pl, exch, model="N4")
