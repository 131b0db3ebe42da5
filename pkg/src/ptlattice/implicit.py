"""Implicit-function curves that carve out the physical domain.

For real ``alpha = +-sqrt(A)`` the sextic splits into two cubics in E,

    E^3 - alpha E^2 - (B + C) E + alpha C = 0      (and alpha -> -alpha),

whose mirror images give the rest of the spectrum.  Solving that cubic for
one coupling at a time yields the three explicit curves

    C(E)     = E^2 - B E / (E - alpha)
    alpha(E) = (1 - B / (E^2 - C)) E
    B(E)     = (E - alpha)(E^2 - C) / E

and every energy at fixed couplings is an intersection of such a curve
with a horizontal line.  Their critical values therefore bound the
intervals of couplings with an all-real spectrum.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .secular import cubic_discriminant, solve_cubic, solve_s_quadratic

__all__ = [
    "PoleError",
    "UnphysicalLimitError",
    "AlphaRoot",
    "BranchProfile",
    "AlphaProfile",
    "POLE_GUARD",
    "alpha_roots",
    "c_of_e",
    "alpha_of_e",
    "alpha_of_e_partial_fractions",
    "b_of_e",
    "zeros_of_c",
    "critical_energies",
    "c_branch_profile",
    "b_ep_of_c_branch",
    "alpha_profile",
    "alpha_critical_energies",
    "b_threshold",
    "b_critical_energies",
    "cubic_real_root_count",
    "scan_stationary_points",
]

POLE_GUARD = 1e-12
B_EP_TOL = 1e-12


class PoleError(ValueError):
    """Curve evaluated within ``POLE_GUARD`` of one of its poles."""


class UnphysicalLimitError(ValueError):
    """The B = 0 limit, where the curve degenerates."""


def _finish(x):
    return float(x) if np.ndim(x) == 0 else x


def _guard(dist, what):
    if np.any(np.abs(dist) < POLE_GUARD):
        raise PoleError(f"evaluation too close to the pole of {what}; resample")


@dataclass(frozen=True)
class AlphaRoot:
    value: float
    sign: int
    a_source: float


def alpha_roots(a: float) -> tuple[AlphaRoot, AlphaRoot]:
    """The two real square roots of ``a``, positive first."""
    if a < 0:
        raise ValueError(f"alpha = +-sqrt(A) needs A >= 0, got {a}")
    r = math.sqrt(a)
    return AlphaRoot(r, +1, a), AlphaRoot(-r, -1, a)


def c_of_e(e, b, alpha):
    """Outermost coupling C on the curve through energy ``e``."""
    e = np.asarray(e, dtype=float)
    _guard(e - alpha, "C(E)")
    return _finish(e * e - b * e / (e - alpha))


def alpha_of_e(e, b, c):
    e = np.asarray(e, dtype=float)
    _guard(e * e - c, "alpha(E)")
    return _finish((1.0 - b / (e * e - c)) * e)


def alpha_of_e_partial_fractions(e, b, c):
    """``alpha(E)`` split into simple poles at ``+-gamma``; needs ``c = gamma^2 > 0``."""
    if c <= 0:
        raise ValueError("partial-fraction form needs C > 0")
    g = math.sqrt(c)
    e = np.asarray(e, dtype=float)
    _guard(e * e - c, "alpha(E)")
    return _finish(e - 0.5 * b * (1.0 / (e + g) + 1.0 / (e - g)))


def b_of_e(e, c, alpha):
    e = np.asarray(e, dtype=float)
    _guard(e, "B(E)")
    return _finish((e - alpha) * (e * e - c) / e)


def zeros_of_c(alpha: float, b: float) -> tuple[float, float] | None:
    """Nonzero zeros ``(E+, E-)`` of ``C(E)``; ``None`` when they are complex."""
    d = alpha * alpha + 4.0 * b
    if d < 0:
        return None
    r = math.sqrt(d)
    return (0.5 * (alpha + r), 0.5 * (alpha - r))


def _real_roots(roots) -> list[float]:
    return sorted(z.real for z in roots if z.imag == 0.0)


def critical_energies(alpha: float, b: float) -> list[float]:
    """Real stationary points of ``C(E)``: roots of ``2E^3 - 4 alpha E^2 + 2 alpha^2 E + alpha B``."""
    if alpha == 0:
        raise ValueError("alpha = 0 lies on the A = 0 boundary plane")
    return _real_roots(solve_cubic(-2.0 * alpha, alpha * alpha, 0.5 * alpha * b))


def _critical_discriminant(alpha: float, b: float) -> float:
    return cubic_discriminant(-2.0 * alpha, alpha * alpha, 0.5 * alpha * b)[0]


def b_ep_of_c_branch(alpha: float) -> float:
    """Negative B at which the two critical energies left of the pole merge.

    Found by bisection on the sign of the critical cubic's discriminant.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    a2 = alpha * alpha
    lo, hi = -a2, -1e-3 * a2  # discriminant < 0 at lo, > 0 at hi
    if not (_critical_discriminant(alpha, lo) < 0 < _critical_discriminant(alpha, hi)):
        raise RuntimeError("b_ep bracket lost; discriminant has unexpected signs")
    width = B_EP_TOL * min(1.0, a2)
    for _ in range(200):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if _critical_discriminant(alpha, mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BranchProfile:
    """Zeros, pole and critical levels of ``C(E)`` for one sign of alpha."""

    alpha: float
    b: float
    pole: float
    zeros: tuple[float, ...]
    critical_energies: tuple[float, ...]
    c_ep: float
    c_min: float | None = None
    c_max: float | None = None
    b_ep: float | None = None
    e_ep: float = math.nan
    tolerances: dict = field(default_factory=lambda: {"pole_guard": POLE_GUARD, "b_ep": B_EP_TOL})

    @property
    def has_gap(self) -> bool:
        return self.c_min is not None

    def mirrored(self) -> "BranchProfile":
        """Same profile for ``-alpha`` (E -> -E; C levels unchanged)."""
        return BranchProfile(
            alpha=-self.alpha,
            b=self.b,
            pole=-self.pole,
            zeros=tuple(sorted(-z for z in self.zeros)),
            critical_energies=tuple(sorted(-e for e in self.critical_energies)),
            c_ep=self.c_ep,
            c_min=self.c_min,
            c_max=self.c_max,
            b_ep=self.b_ep,
            e_ep=-self.e_ep,
            tolerances=dict(self.tolerances),
        )

    def to_dict(self) -> dict:
        return asdict(self)


def c_branch_profile(alpha: float, b: float) -> BranchProfile:
    """Critical-level catalogue of ``C(E)`` at fixed ``(alpha, B)``.

    For ``B > 0`` the left U-shaped part has a single minimum ``c_ep`` at a
    negative energy.  For ``B < 0`` the minimum ``c_ep`` of the U-shape to
    the right of the pole exceeds ``alpha^2``; when ``B`` is also above
    ``b_ep`` the part left of the pole has a local minimum ``c_min`` and a
    local maximum ``c_max``, both below ``c_ep``.  A negative ``alpha`` is
    handled through the E -> -E mirror.
    """
    if alpha == 0:
        raise ValueError("alpha = 0 lies on the A = 0 boundary plane; no interior profile")
    if b == 0:
        raise UnphysicalLimitError("B = 0 makes both C(E) limits unphysical")
    if alpha < 0:
        return c_branch_profile(-alpha, b).mirrored()

    crit = critical_energies(alpha, b)
    z = zeros_of_c(alpha, b)
    zeros = tuple(sorted({0.0, *(z or ())}))
    b_ep = b_ep_of_c_branch(alpha)
    if b > 0:
        (e_ep,) = [e for e in crit if e < 0]
        return BranchProfile(alpha, b, alpha, zeros, tuple(crit), float(c_of_e(e_ep, b, alpha)),
                             b_ep=b_ep, e_ep=e_ep)

    e_right = max(crit)
    c_ep = float(c_of_e(e_right, b, alpha))
    left = [e for e in crit if e < alpha]
    c_min = c_max = None
    if len(left) == 2:
        e_min, e_max = left
        c_min = float(c_of_e(e_min, b, alpha))
        c_max = float(c_of_e(e_max, b, alpha))
    return BranchProfile(alpha, b, alpha, zeros, tuple(crit), c_ep, c_min, c_max, b_ep, e_right)


def cubic_real_root_count(b: float, c: float, d: float) -> int:
    """Number of distinct real roots of ``x^3 + b x^2 + c x + d`` (1, 2 or 3)."""
    disc, _ = cubic_discriminant(b, c, d)
    if disc > 0:
        return 3
    if disc < 0:
        return 1
    return len(set(_real_roots(solve_cubic(b, c, d))))


def alpha_critical_energies(b: float, c: float) -> list[float]:
    """Real stationary points of ``alpha(E)``.

    ``alpha'(E) = 1 + B (E^2 + C) / (E^2 - C)^2`` vanishes where
    ``u = E^2`` solves ``u^2 + (B - 2C) u + C^2 + BC = 0``.
    """
    out = []
    for u in solve_s_quadratic(b - 2.0 * c, c * c + b * c):
        if u.imag == 0.0 and u.real > 0 and abs(u.real - c) > POLE_GUARD:
            r = math.sqrt(u.real)
            out += [-r, r]
    return sorted(out)


def scan_stationary_points(deriv, lo: float, hi: float, step: float = 1e-3, poles=(), xtol: float = 1e-12) -> list[float]:
    """Zeros of ``deriv`` on ``[lo, hi]`` found by a sign-change scan plus safeguarded Newton.

    ``deriv`` must accept arrays and return ``(f, f')`` where ``f`` is the
    derivative being zeroed.  Brackets that contain one of ``poles`` are
    skipped, since the sign change there is not a root.
    """
    n = max(1, int(math.ceil((hi - lo) / step)))
    grid = lo + (hi - lo) * np.arange(n + 1) / n
    for pole in poles:
        grid = grid[np.abs(grid - pole) > POLE_GUARD]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals, _ = deriv(grid)
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        if any(a <= p <= b for p in poles) or not (np.isfinite(vals[i]) and np.isfinite(vals[i + 1])):
            continue
        fa = float(vals[i])
        if fa == 0.0:
            if not out or out[-1] != a:
                out.append(a)
            continue
        if vals[i + 1] == 0.0:
            # exact zero on a node: recorded by the next bracket (or here if it is the last node)
            if i + 2 == len(grid):
                out.append(b)
            continue
        x = 0.5 * (a + b)
        for _ in range(100):
            fx, dfx = (float(np.ravel(v)[0]) for v in deriv(np.array([x])))
            if fx == 0.0:
                break
            if (fx > 0) == (fa > 0):
                a, fa = x, fx
            else:
                b = x
            newton = x - fx / dfx if dfx != 0 else math.nan
            x_new = newton if a < newton < b else 0.5 * (a + b)
            if abs(x_new - x) <= xtol * max(1.0, abs(x)):
                x = x_new
                break
            x = x_new
        if not out or abs(x - out[-1]) > 10 * xtol * max(1.0, abs(x)):
            out.append(x)
    return out


def _alpha_derivatives(b, c):
    def deriv(e):
        d = e * e - c
        f = 1.0 + b * (e * e + c) / (d * d)
        df = b * (2.0 * e * d - 4.0 * e * (e * e + c)) / d**3
        return np.asarray(f), np.asarray(df)

    return deriv


@dataclass(frozen=True)
class AlphaProfile:
    """Admissible innermost couplings ``A`` at fixed ``(B, C)``.

    ``a_intervals`` are open intervals of A with six real simple energies
    (``math.inf`` marks an unbounded end); ``gap`` separates an anomalous
    low-A component from the bulk when one exists.
    """

    b: float
    c: float
    critical_energies: tuple[float, ...]
    critical_alphas: tuple[float, ...]
    a_intervals: tuple[tuple[float, float], ...]
    gap: tuple[float, float] | None
    extra_extrema: bool = False

    def admits(self, a: float) -> bool:
        return any(lo < a < hi for lo, hi in self.a_intervals)

    def to_dict(self) -> dict:
        return asdict(self)


def _three_real(alpha: float, b: float, c: float) -> bool:
    return cubic_real_root_count(-alpha, -(b + c), alpha * c) == 3


def alpha_profile(b: float, c: float, verify: bool = True) -> AlphaProfile:
    """Intervals of ``A = alpha^2`` for which the line ``alpha = const`` cuts ``alpha(E)`` three times.

    Breakpoints are the critical values ``|alpha(E*)|``; between consecutive
    breakpoints the intersection count is constant and is read off the
    discriminant of the underlying cubic at the midpoint.  With ``verify``
    the stationary points are also located by a grid scan of ``alpha'(E)``
    and ``extra_extrema`` flags any the closed form missed.
    """
    crit = alpha_critical_energies(b, c)
    extra = False
    if verify and b != 0:
        span = 2.0 + 2.0 * math.sqrt(abs(c)) + 2.0 * math.sqrt(abs(b))
        poles = (-math.sqrt(c), math.sqrt(c)) if c > 0 else ()
        scanned = scan_stationary_points(_alpha_derivatives(b, c), -span, span, 1e-3, poles)
        extra = any(min((abs(x - e) for e in crit), default=math.inf) > 1e-8 for x in scanned)
    vals = sorted({abs(float(alpha_of_e(e, b, c))) for e in crit})
    cuts = [0.0] + [v for v in vals if v > 0]
    spans = list(zip(cuts, cuts[1:])) + [(cuts[-1], math.inf)]
    good = []
    for lo, hi in spans:
        mid = lo + 1.0 if hi == math.inf else 0.5 * (lo + hi)
        if b != 0 and c != 0 and _three_real(mid, b, c):
            good.append((lo, hi))
    merged: list[list[float]] = []
    for lo, hi in good:
        if merged and merged[-1][1] == lo and lo != 0.0:
            # tangency that does not change the count is not a boundary
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    a_int = tuple((lo * lo, hi * hi if hi != math.inf else math.inf) for lo, hi in merged)
    gap = None
    if len(a_int) >= 2:
        gap = (a_int[-2][1], a_int[-1][0])
    return AlphaProfile(
        b=b,
        c=c,
        critical_energies=tuple(crit),
        critical_alphas=tuple(float(alpha_of_e(e, b, c)) for e in crit),
        a_intervals=a_int,
        gap=gap,
        extra_extrema=extra,
    )


def b_critical_energies(c: float, alpha: float) -> list[float]:
    """Real stationary points of ``B(E)``: roots of ``2E^3 - alpha E^2 - alpha C``."""
    return [e for e in _real_roots(solve_cubic(-0.5 * alpha, 0.0, -0.5 * alpha * c)) if e != 0.0]


def b_threshold(c: float, alpha: float) -> float:
    """Lower bound of physical B at fixed ``(C, alpha)``.

    Zero for ``C > 0``.  For ``C < 0`` the minimum of the U-shaped part of
    ``B(E)``, which sits on the side of the origin where ``alpha C / E > 0``.
    """
    if c > 0:
        return 0.0
    if c == 0:
        raise ValueError("C = 0 lies on the boundary plane")
    if alpha == 0:
        return -c  # B(E) = E^2 - C, infimum approached as E -> 0
    side = math.copysign(1.0, alpha * c)
    cands = [e for e in b_critical_energies(c, alpha) if e * side > 0]
    return min(float(b_of_e(e, c, alpha)) for e in cands)
