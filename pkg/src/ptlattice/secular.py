"""Closed-form spectra from the secular polynomial.

The six-site characteristic polynomial is even in E,

    E^6 + c4 E^4 + c2 E^2 + c0,
    c4 = -2C - 2B - A,  c2 = 2BC + 2AC + C^2 + B^2,  c0 = -A C^2,

so the spectrum follows from a cubic in s = E^2.  The four-site model gives
the quadratic s^2 - (2 lam + a) s + lam^2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import ProductCouplings

__all__ = [
    "SecularCoefficients",
    "Classification",
    "SpectrumResult",
    "coefficients",
    "eval_secular",
    "solve_cubic",
    "solve_s_cubic",
    "cubic_discriminant",
    "spectrum",
    "spectrum4",
    "count_real_energies",
    "sort_energies",
]

DEFAULT_TOL = 1e-10
_POLISH_STEPS = 3
SMALL_PAIR_RATIO = 1e-2


@dataclass(frozen=True)
class SecularCoefficients:
    c4: float
    c2: float
    c0: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.c4, self.c2, self.c0)

    def sextic(self) -> list[float]:
        """Monic E-polynomial coefficients, highest power first."""
        return [1.0, 0.0, self.c4, 0.0, self.c2, 0.0, self.c0]


class Classification(str, Enum):
    ALL_REAL = "AllReal"
    DEGENERATE = "Degenerate"
    COMPLEXIFIED = "Complexified"


@dataclass(frozen=True)
class SpectrumResult:
    """Energies (sorted by descending real, then imaginary part) and their reality class.

    ``degeneracy`` is the smallest normalised coalescence measure found
    among the s-roots (root separation, sqrt|s| and discriminant); the point is
    ``Degenerate`` when it does not exceed ``tol_used``.
    """

    energies: tuple[complex, ...]
    n_real: int
    s_roots: tuple[complex, ...]
    classification: Classification
    tol_used: float
    min_separation: float = math.inf
    degeneracy: float = math.inf
    coefficients: tuple[float, ...] = field(default=(), repr=False)

    @property
    def is_real(self) -> bool:
        return self.n_real == len(self.energies)

    def real_energies(self) -> np.ndarray:
        return np.array([e.real for e in self.energies])

    def to_dict(self) -> dict:
        return {
            "energies": [{"re": e.real, "im": e.imag} for e in self.energies],
            "n_real": self.n_real,
            "classification": self.classification.value,
            "tol": self.tol_used,
            "s_roots": [{"re": s.real, "im": s.imag} for s in self.s_roots],
            "min_separation": self.min_separation,
            "degeneracy": self.degeneracy,
        }


def coefficients(p: ProductCouplings) -> SecularCoefficients:
    A, B, C = p.A, p.B, p.C
    return SecularCoefficients(
        c4=-2 * C - 2 * B - A,
        c2=2 * B * C + 2 * A * C + C * C + B * B,
        c0=-A * C * C,
    )


def eval_secular(e, k: SecularCoefficients):
    """Evaluate the sextic at ``e`` (scalar or array) by Horner in E^2."""
    s = e * e
    return ((s + k.c4) * s + k.c2) * s + k.c0


def cubic_discriminant(b: float, c: float, d: float) -> tuple[float, float]:
    """Discriminant of ``x^3 + b x^2 + c x + d`` and the sum of its term magnitudes."""
    terms = (18 * b * c * d, -4 * b**3 * d, b * b * c * c, -4 * c**3, -27 * d * d)
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _polish(f, df, roots: list[complex]) -> list[complex]:
    """Newton steps that are kept only if they shrink the residual and stay near their root."""
    out = list(roots)
    for i, r in enumerate(out):
        others = [o for j, o in enumerate(out) if j != i]
        gap = min((abs(r - o) for o in others), default=math.inf)
        for _ in range(_POLISH_STEPS):
            fr = f(r)
            if fr == 0:
                break
            d = df(r)
            if d == 0:
                break
            cand = r - fr / d
            if abs(f(cand)) >= abs(fr) or abs(cand - r) > 0.5 * gap:
                break
            r = cand
        out[i] = r
    return out


def solve_cubic(b: float, c: float, d: float) -> list[complex]:
    """All three roots of ``x^3 + b x^2 + c x + d`` with real coefficients.

    See :func:`_solve_cubic_raw`.  When one real root dominates the other
    two, the small pair is rebuilt from Vieta's relations: their product
    ``-d/x0`` and sum ``(c - product)/x0`` carry no cancellation, whereas the
    depressed-cubic discriminant does.
    """
    roots = _solve_cubic_raw(b, c, d)
    real = [z for z in roots if z.imag == 0.0]
    if not real or d == 0.0:
        return roots
    x0 = max(real, key=abs).real
    rest = list(roots)
    rest.remove(complex(x0))
    if x0 == 0.0 or max(abs(z) for z in rest) > SMALL_PAIR_RATIO * abs(x0):
        return roots
    prod = -d / x0
    pair = solve_s_quadratic(-(c - prod) / x0, prod)
    return sorted([complex(x0), *pair], key=lambda z: (-z.real, -z.imag))


def _solve_cubic_raw(b: float, c: float, d: float) -> list[complex]:
    """All three roots of ``x^3 + b x^2 + c x + d`` with real coefficients.

    Three real roots come from the trigonometric (Viete) form so they carry
    no spurious imaginary parts.  Otherwise Cardano with a real cube root
    gives one real root and an exact conjugate pair.  Each root then gets up
    to three guarded Newton steps on the undepressed cubic.  A vanishing
    constant term is deflated exactly.
    """
    if d == 0.0:
        # exact zero root (the A = 0 and C = 0 planes): deflate instead of blurring it
        return sorted([0j, *solve_s_quadratic(b, c)], key=lambda z: (-z.real, -z.imag))
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = -(4.0 * p**3 + 27.0 * q * q)

    def f(x):
        return ((x + b) * x + c) * x + d

    def df(x):
        return (3.0 * x + 2.0 * b) * x + c

    if disc > 0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
        roots = [complex(x) for x in _polish(f, df, roots)]
        return sorted(roots, key=lambda z: -z.real)

    # one real root and a conjugate pair (or repeated real roots when disc == 0)
    w = math.sqrt(max(q * q / 4.0 + p**3 / 27.0, 0.0))
    u = -_cbrt(q / 2.0 + math.copysign(w, q))
    v = -p / (3.0 * u) if u != 0 else 0.0
    t_real = u + v
    re = -0.5 * t_real - shift
    im = 0.5 * math.sqrt(3.0) * abs(u - v)
    (x0,) = _polish(f, df, [t_real - shift])
    if im == 0.0:
        return sorted([complex(x0), complex(re), complex(re)], key=lambda z: -z.real)
    (z,) = _polish(f, df, [complex(re, im)])
    z = complex(z.real, abs(z.imag))
    return [complex(x0), z, z.conjugate()]


def solve_s_cubic(k: SecularCoefficients) -> list[complex]:
    return solve_cubic(k.c4, k.c2, k.c0)


def sort_energies(values, tol: float = 1e-9) -> list[complex]:
    """Sort by descending real part, then descending imaginary part.

    Real parts within ``tol`` (relative to max(1, |re|)) are treated as
    equal, so conjugate and +/- imaginary pairs order the same way no matter
    which solver produced them.
    """
    vals = sorted((complex(v) for v in values), key=lambda z: (-z.real, -z.imag))
    out: list[complex] = []
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and abs(vals[j].real - vals[j - 1].real) <= tol * max(1.0, abs(vals[j].real)):
            j += 1
        out.extend(sorted(vals[i:j], key=lambda z: -z.imag))
        i = j
    return out


def _energies_from_s(s_roots, tol):
    energies: list[complex] = []
    n_real = 0
    for s in s_roots:
        if s.imag == 0.0:
            x = s.real
            if math.sqrt(abs(x)) <= tol:
                n_real += 2  # degenerate pair at the origin
                r = cmath.sqrt(x)
            elif x > 0:
                n_real += 2
                r = complex(math.sqrt(x))
            else:
                r = complex(0.0, math.sqrt(-x))
            energies += [r, -r]
        elif s.imag > 0:
            # conjugate s-pair: one call emits the whole quadruple
            r = cmath.sqrt(s)
            energies += [r, -r, r.conjugate(), -r.conjugate()]
    return energies, n_real


def _snap_double_root(coeffs) -> list[complex]:
    """Roots of a monic polynomial known to have a (numerically) double root.

    The double root is the critical point with the smallest residual; for
    the cubic the simple root then follows from the trace.
    """
    if len(coeffs) == 2:
        b, _ = coeffs
        return [complex(-0.5 * b)] * 2
    b, c, d = coeffs
    crit = solve_s_quadratic(2.0 * b / 3.0, c / 3.0)
    r = min(crit, key=lambda x: abs(((x + b) * x + c) * x + d)).real
    return sorted([complex(r), complex(r), complex(-b - 2.0 * r)], key=lambda z: -z.real)


def _is_triple(coeffs, tol: float) -> bool:
    b, c, d = coeffs
    t = b / 3.0
    p = c - 3.0 * t * t
    q = d - t * c + 2.0 * t**3
    r = max(abs(t), math.sqrt(abs(c)), abs(d) ** (1.0 / 3.0))  # root magnitude
    if r == 0.0:
        return True
    return abs(p) <= tol * r * r and abs(q) <= tol * r**3


def _min_separation(roots) -> float:
    seps = [abs(roots[i] - roots[j]) for i in range(len(roots)) for j in range(i + 1, len(roots))]
    return min(seps) if seps else math.inf


def _build_result(s_roots, disc, disc_scale, coeffs, tol) -> SpectrumResult:
    # a double root computed in floating point splits by ~sqrt(eps); the discriminant
    # only confirms a coalescence the roots already show (clusters of three make it
    # tiny while the roots stay well apart)
    near = _min_separation(s_roots) / max(1.0, max(abs(s) for s in s_roots)) <= math.sqrt(tol)
    disc_rel = abs(disc) / disc_scale if disc_scale > 0 else 0.0
    if len(coeffs) == 3 and _is_triple(coeffs, tol):
        # a triple root smears by eps**(1/3), beyond any separation test
        s_roots = [complex(-coeffs[0] / 3.0)] * 3
        near, disc_rel = True, 0.0
    elif near and disc_rel <= tol:
        s_roots = _snap_double_root(coeffs)
    s_roots = sorted(s_roots, key=lambda z: (-z.real, -z.imag))
    scale = max(1.0, max(abs(s) for s in s_roots))
    min_sep = _min_separation(s_roots)
    # a pair meeting at E = 0 is split by 2 sqrt|s|, so judge it in energy units
    measures = [min_sep / scale, min(math.sqrt(abs(s)) for s in s_roots)]
    if near:
        measures.append(disc_rel)
    degeneracy = min(measures)
    energies, n_real = _energies_from_s(s_roots, tol)
    if degeneracy <= tol:
        cls = Classification.DEGENERATE
    elif n_real < len(energies):
        cls = Classification.COMPLEXIFIED
    else:
        cls = Classification.ALL_REAL
    return SpectrumResult(
        energies=tuple(sort_energies(energies)),
        n_real=n_real,
        s_roots=tuple(s_roots),
        classification=cls,
        tol_used=tol,
        min_separation=min_sep,
        degeneracy=degeneracy,
        coefficients=coeffs,
    )


def spectrum(p: ProductCouplings, tol: float = DEFAULT_TOL) -> SpectrumResult:
    """Six energies of the lattice at product couplings ``p``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = coefficients(p)
    disc, disc_scale = cubic_discriminant(*k.as_tuple())
    return _build_result(solve_s_cubic(k), disc, disc_scale, k.as_tuple(), tol)


def solve_s_quadratic(b: float, c: float) -> list[complex]:
    """Roots of ``s^2 + b s + c`` without cancellation."""
    disc = b * b - 4.0 * c
    if disc >= 0:
        w = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        if w == 0.0:
            return [0j, 0j]
        return [complex(w), complex(c / w)]
    z = complex(-0.5 * b, 0.5 * math.sqrt(-disc))
    return [z, z.conjugate()]


def spectrum4(lam: float, a: float, tol: float = DEFAULT_TOL) -> SpectrumResult:
    """Four energies of the N=4 lattice from ``s^2 - (2 lam + a) s + lam^2``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    b, c = -(2.0 * lam + a), lam * lam
    disc = b * b - 4.0 * c
    return _build_result(solve_s_quadratic(b, c), disc, b * b + 4.0 * abs(c), (b, c), tol)


def count_real_energies(p: ProductCouplings, tol: float = DEFAULT_TOL) -> int:
    return spectrum(p, tol).n_real
