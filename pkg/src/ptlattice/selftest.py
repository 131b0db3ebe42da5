"""Invariant battery shared by ``ptlattice selftest`` and the acceptance tests.

Every check compares two independent routes (closed form vs. oracle, curve
vs. spectrum, analytic vs. scanned) at a fixed tolerance and reports
pass/fail with the worst deviation seen.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import implicit, secular
from .domain import (
    TransitionKind,
    Verdict,
    c_slice,
    classify_transition4,
    membership,
    scan_lambda4,
)
from .model import (
    CartesianCouplings,
    ProductCouplings,
    build_hamiltonian6,
    build_product_representative,
    check_pt_symmetry,
)
from .oracle import charpoly, eig_dense

DEFAULT_SEED = 20161
BOX = (-2.0, 3.0)

# pinned tolerances
COEFF_RTOL = 1e-12
ODD_ATOL = 1e-13
SPECTRUM_ATOL = 1e-8
CURVE_ATOL = 1e-9
ENDPOINT_ATOL = 1e-6
ROUNDTRIP_RTOL = 1e-12
RESIDUAL_ATOL = 1e-9
CRITICAL_RTOL = 1e-10
SCALING_ATOL = 1e-10
SYMMETRY_ATOL = 1e-12

SIX_LEVEL_POINT = ProductCouplings(0.09, 0.1, 1.0)
GAP_POINTS = ((0.09, -0.01), (1.0, -0.1), (0.5, -0.05), (2.0, -0.3))
N4_A_VALUES = (0.5, 1.0, 2.0)
SCALING_ALPHAS = (0.3, 0.5, 1.0, 2.0)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_products(n: int, seed: int = DEFAULT_SEED) -> list[ProductCouplings]:
    rng = np.random.default_rng(seed)
    return [ProductCouplings(*map(float, row)) for row in rng.uniform(*BOX, size=(n, 3))]


def _timed(fn: Callable[[], Check]) -> Check:
    t0 = time.perf_counter()
    chk = fn()
    chk.seconds = time.perf_counter() - t0
    return chk


def check_coefficients(points) -> Check:
    worst = worst_odd = 0.0
    for p in points:
        k = secular.coefficients(p)
        ref = charpoly(build_product_representative(p, 6))
        mine = k.sextic()
        scale = max(1.0, max(abs(c) for c in mine))
        worst = max(worst, max(abs(a - b) for a, b in zip(mine, ref)) / scale)
        worst_odd = max(worst_odd, max(abs(ref[i]) for i in (1, 3, 5)))
    ok = worst <= COEFF_RTOL and worst_odd <= ODD_ATOL
    return Check("secular coefficients vs Faddeev-LeVerrier", ok,
                 f"{len(points)} pts, max rel dev {worst:.2e} (tol {COEFF_RTOL:g}), "
                 f"max odd coeff {worst_odd:.2e} (tol {ODD_ATOL:g})")


def check_spectra(points) -> Check:
    worst = 0.0
    n_complex = 0
    for p in points:
        mine = np.array(secular.spectrum(p).energies)
        ref = np.array(eig_dense(build_product_representative(p, 6)).eigenvalues)
        worst = max(worst, float(np.max(np.abs(mine - ref))))
        n_complex += int(np.any(np.abs(mine.imag) > 0))
    return Check("Cardano spectra vs Aberth oracle", worst <= SPECTRUM_ATOL,
                 f"{len(points)} pts ({n_complex} complexified), max |dE| {worst:.2e} (tol {SPECTRUM_ATOL:g})")


def alpha_line_intersections(b: float, c: float, level: float, lo: float = -6.0, hi: float = 6.0,
                             step: float = 1e-3) -> list[float]:
    """Energies where ``alpha(E)`` meets the horizontal line ``alpha = level``."""
    poles = sorted({-math.sqrt(c), math.sqrt(c)}) if c > 0 else []
    edges = [lo, *[p for p in poles if lo < p < hi], hi]
    roots = []
    for a, b_ in zip(edges, edges[1:]):
        grid = np.linspace(a, b_, max(3, int((b_ - a) / step)))[1:-1]
        vals = implicit.alpha_of_e(grid, b, c) - level
        for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            roots.append(brentq(lambda e: implicit.alpha_of_e(e, b, c) - level, grid[i], grid[i + 1],
                                xtol=1e-15, rtol=1e-15))
    return sorted(roots, reverse=True)


def check_curve_intersections() -> Check:
    s = secular.spectrum(SIX_LEVEL_POINT)
    alpha = math.sqrt(SIX_LEVEL_POINT.A)
    found = sorted(alpha_line_intersections(SIX_LEVEL_POINT.B, SIX_LEVEL_POINT.C, alpha)
                   + alpha_line_intersections(SIX_LEVEL_POINT.B, SIX_LEVEL_POINT.C, -alpha), reverse=True)
    energies = s.real_energies()
    simple = s.classification is secular.Classification.ALL_REAL and s.n_real == 6
    dev = float(np.max(np.abs(np.array(found) - energies))) if len(found) == 6 else math.inf
    ok = simple and dev <= CURVE_ATOL
    return Check("six real levels at (0.09, 0.1, 1) as alpha-curve intersections", ok,
                 f"{s.classification.value}, {len(found)} curve intersections, max |dE| {dev:.2e} (tol {CURVE_ATOL:g})")


def check_n4(step: float = 1e-4) -> Check:
    worst = 0.0
    kinds_ok = True
    shape_ok = True
    for a in N4_A_VALUES:
        ps = scan_lambda4(a, -a / 4 - 0.5, 3.0, step)
        if len(ps.intervals) != 2 or not ps.reaches_hi or ps.reaches_lo:
            shape_ok = False
            continue
        (l1, r1), (l2, _) = ps.intervals
        worst = max(worst, abs(l1 + a / 4), abs(r1), abs(l2))
        kinds_ok &= classify_transition4(0.0, a).kind is TransitionKind.SECOND
        kinds_ok &= classify_transition4(-a / 4, a).kind is TransitionKind.FIRST
    ok = shape_ok and kinds_ok and worst <= ENDPOINT_ATOL
    return Check("N=4 physical set (-A/4,0)u(0,inf) and transition kinds", ok,
                 f"A in {N4_A_VALUES}, max endpoint err {worst:.2e} (tol {ENDPOINT_ATOL:g}), "
                 f"kinds {'ok' if kinds_ok else 'WRONG'}")


def check_gap() -> Check:
    problems = []
    widths = []
    for a, b in GAP_POINTS:
        sl = c_slice(a, b)
        if len(sl.intervals) != 2 or sl.gap is None:
            problems.append(f"({a},{b}) no gap")
            continue
        (lo1, hi1), (lo2, _) = sl.intervals
        widths.append(sl.gap[1] - sl.gap[0])
        mids = [0.5 * (lo1 + hi1), 0.5 * (hi1 + lo2), lo2 + 1.0]
        if lo1 < 0.0 < hi1 and abs(mids[0]) < 1e-6:
            mids[0] = 0.5 * (0.0 + hi1)
        got = [membership(ProductCouplings(a, b, c)).verdict for c in mids]
        if got != [Verdict.PHYSICAL, Verdict.UNPHYSICAL, Verdict.PHYSICAL]:
            problems.append(f"({a},{b}) pattern {[v.value for v in got]}")
    ok = not problems and all(w > 0 for w in widths)
    detail = f"{len(GAP_POINTS)} points, min gap width {min(widths, default=math.nan):.3e}"
    return Check("anomalous C-interval and gap", ok, detail + ("; " + "; ".join(problems) if problems else ""))


def check_round_trips(n: int = 100_000, seed: int = DEFAULT_SEED) -> Check:
    rng = np.random.default_rng(seed + 1)
    m = 2 * n
    e = rng.uniform(-3, 3, m)
    b = rng.uniform(-2, 2, m)
    alpha = rng.uniform(-2, 2, m)
    # stay clear of E = alpha, E = 0 and of vanishing B or alpha (relative error undefined)
    keep = (np.abs(e - alpha) > 0.05) & (np.abs(e) > 0.05) & (np.abs(b) > 0.05) & (np.abs(alpha) > 0.05)
    e, b, alpha = e[keep][:n], b[keep][:n], alpha[keep][:n]
    c = implicit.c_of_e(e, b, alpha)
    back_a = implicit.alpha_of_e(e, b, c)
    back_b = implicit.b_of_e(e, c, alpha)
    rel_a = float(np.max(np.abs(back_a - alpha) / np.abs(alpha)))
    rel_b = float(np.max(np.abs(back_b - b) / np.abs(b)))
    worst_res = 0.0
    for ei, ai, bi, ci in zip(e, alpha, b, c):
        k = secular.coefficients(ProductCouplings(ai * ai, bi, ci))
        worst_res = max(worst_res, abs(secular.eval_secular(ei, k)))
    ok = rel_a <= ROUNDTRIP_RTOL and rel_b <= ROUNDTRIP_RTOL and worst_res <= RESIDUAL_ATOL
    return Check("round trips alpha(E), B(E) through C(E)", ok,
                 f"{e.size} pts, rel dev alpha {rel_a:.2e}, B {rel_b:.2e} (tol {ROUNDTRIP_RTOL:g}), "
                 f"max |secular(E)| {worst_res:.2e} (tol {RESIDUAL_ATOL:g})")


def check_critical(points: int = 200, seed: int = DEFAULT_SEED) -> Check:
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    count = 0
    for alpha, b in rng.uniform(-2, 2, size=(points, 2)):
        if abs(alpha) < 1e-3:
            continue
        for e in implicit.critical_energies(alpha, b):
            lhs, rhs = alpha * b, -2.0 * e * (e - alpha) ** 2
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
            count += 1
    b1 = implicit.b_ep_of_c_branch(1.0)
    scaling = max(abs(implicit.b_ep_of_c_branch(a) - a * a * b1) for a in SCALING_ALPHAS)
    ok = worst <= CRITICAL_RTOL and scaling <= SCALING_ATOL
    return Check("critical energies and b_ep scaling", ok,
                 f"{count} roots, max rel dev {worst:.2e} (tol {CRITICAL_RTOL:g}); "
                 f"b_ep(1)={b1:.12f}, scaling dev {scaling:.2e} (tol {SCALING_ATOL:g})")


def check_symmetry(points) -> Check:
    worst = 0.0
    for p in points:
        s = secular.spectrum(p)
        e = np.array(s.energies)
        neg = np.array(secular.sort_energies(-e))
        conj = np.array(secular.sort_energies(e.conj()))
        worst = max(worst, float(np.max(np.abs(neg - e))), float(np.max(np.abs(conj - e))))
    rng = np.random.default_rng(DEFAULT_SEED + 3)
    pt_ok = all(check_pt_symmetry(build_hamiltonian6(CartesianCouplings(*map(float, xyz))))
                for xyz in rng.uniform(-3, 3, size=(100, 3)))
    refl = 0.0
    for alpha, b in ((1.0, 2.0), (0.3, -0.01), (0.7, -0.5), (1.5, 0.2)):
        plus = implicit.c_branch_profile(alpha, b)
        minus = implicit.c_branch_profile(-alpha, b)
        refl = max(refl,
                   max(abs(x + y) for x, y in zip(plus.critical_energies, reversed(minus.critical_energies))),
                   max(abs(x + y) for x, y in zip(plus.zeros, reversed(minus.zeros))),
                   abs(plus.c_ep - minus.c_ep))
    ok = worst <= SYMMETRY_ATOL and pt_ok and refl <= SYMMETRY_ATOL
    return Check("negation/conjugation, PT and +-alpha reflection", ok,
                 f"spectral dev {worst:.2e}, PT {'ok' if pt_ok else 'FAIL'} on 100 H, reflection dev {refl:.2e}")


def run_battery(samples: int = 1000, seed: int = DEFAULT_SEED, roundtrips: int = 100_000) -> list[Check]:
    pts = random_products(samples, seed)
    return [
        _timed(lambda: check_coefficients(pts)),
        _timed(lambda: check_spectra(pts)),
        _timed(check_curve_intersections),
        _timed(check_n4),
        _timed(check_gap),
        _timed(lambda: check_round_trips(roundtrips, seed)),
        _timed(lambda: check_critical(seed=seed)),
        _timed(lambda: check_symmetry(pts[:100])),
    ]
