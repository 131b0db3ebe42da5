"""Independent numerical ground truth for the closed-form spectra.

Nothing here knows about the secular cubic: the characteristic polynomial
comes from the Faddeev-LeVerrier trace recursion and its roots from
Aberth-Ehrlich simultaneous iteration, seeded on a circle sized by the
companion matrix.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .secular import sort_energies

__all__ = ["EigenResult", "ConvergenceError", "charpoly", "eig_dense", "companion_matrix", "polyval"]

MAX_DIM = 16
MAX_ITER = 200
EPS = float(np.finfo(float).eps)


class ConvergenceError(RuntimeError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: tuple[complex, ...]
    residual_norms: tuple[float, ...]
    iterations: int
    eigenvectors: np.ndarray | None = None


def _exact_entries(m) -> bool:
    return all(isinstance(v, Rational) for v in np.asarray(m, dtype=object).flat)


def charpoly(m) -> list:
    """Monic coefficients of det(E I - M), highest power first.

    Integer or ``Fraction`` entries are processed in exact rational
    arithmetic and return ``Fraction`` coefficients; anything else runs in
    double precision.
    """
    arr = np.asarray(m, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("charpoly needs a square matrix")
    n = arr.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds oracle cap {MAX_DIM}")
    if _exact_entries(arr):
        a = [[Fraction(v) for v in row] for row in arr.tolist()]
        return _faddeev_leverrier_exact(a)
    return _faddeev_leverrier_float(np.asarray(m, dtype=float))


def _faddeev_leverrier_float(a: np.ndarray) -> list[float]:
    n = a.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * eye
        coeffs.append(-np.trace(a @ mk) / k)
    return [float(c) for c in coeffs]


def _faddeev_leverrier_exact(a: list[list[Fraction]]) -> list[Fraction]:
    n = len(a)

    def matmul(x, y):
        return [[sum(x[i][t] * y[t][j] for t in range(n)) for j in range(n)] for i in range(n)]

    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        mk = matmul(a, mk)
        for i in range(n):
            mk[i][i] += coeffs[-1]
        am = matmul(a, mk)
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    return coeffs


def polyval(coeffs, z):
    """Horner evaluation, highest power first; returns (p(z), p'(z))."""
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def companion_matrix(coeffs) -> np.ndarray:
    """Frobenius companion matrix of a monic polynomial (highest power first)."""
    c = np.asarray(coeffs, dtype=float)
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(n - 1)
    return comp


def _rounding_bound(abs_coeffs: list[float], z: complex) -> float:
    """Running error bound of Horner's rule: below it |p(z)| is rounding noise."""
    r = abs(z)
    acc = 0.0
    for c in abs_coeffs:
        acc = acc * r + c
    return 4.0 * EPS * acc


def _aberth(coeffs: list[float], tol: float) -> tuple[list[complex], int]:
    n = len(coeffs) - 1
    comp = companion_matrix(coeffs)
    # every eigenvalue of the companion matrix lies inside its infinity-norm disc
    radius = max(np.abs(comp).sum(axis=1).max(), 1e-300)
    center = -coeffs[1] / (n * coeffs[0])
    z = [center + 0.5 * radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    abs_coeffs = [abs(c) for c in coeffs]
    done = [False] * n
    for it in range(1, MAX_ITER + 1):
        for i in range(n):
            if done[i]:
                continue
            p, dp = polyval(coeffs, z[i])
            # a root is final once its residual is rounding noise or its step is negligible
            if abs(p) <= _rounding_bound(abs_coeffs, z[i]):
                done[i] = True
                continue
            ratio = p / dp if dp != 0 else p
            repulsion = sum(1.0 / (z[i] - z[j]) for j in range(n) if j != i and z[i] != z[j])
            w = ratio / (1.0 - ratio * repulsion)
            z[i] -= w
            if abs(w) <= tol * max(1.0, abs(z[i])):
                done[i] = True
        if all(done):
            return z, it
    raise ConvergenceError(f"Aberth iteration did not converge in {MAX_ITER} steps", best=z)


def _pair_conjugates(z: list[complex]) -> list[complex]:
    """Make the roots of a real polynomial exactly conjugation-closed."""
    out: list[complex] = []
    pending = sorted(z, key=lambda v: -v.imag)
    uppers = [v for v in pending if v.imag > 0]
    lowers = [v for v in pending if v.imag <= 0]
    for u in uppers:
        if not lowers:
            out.append(u)
            continue
        j = min(range(len(lowers)), key=lambda t: abs(lowers[t] - u.conjugate()))
        low = lowers[j]
        # partner must sit much closer to conj(u) than the pair's own imaginary spread
        if low.imag < 0 and abs(low - u.conjugate()) <= 0.5 * u.imag:
            lowers.pop(j)
            m = 0.5 * (u + low.conjugate())
            out += [m, m.conjugate()]
        else:
            out.append(complex(u.real, 0.0) if u.imag <= 1e-14 * max(1.0, abs(u)) else u)
    for v in lowers:
        out.append(complex(v.real, 0.0) if abs(v.imag) <= 1e-14 * max(1.0, abs(v)) else v)
    return out


def eig_dense(m, tol: float = 1e-12, vectors: bool = False) -> EigenResult:
    """Eigenvalues of a small real matrix via its characteristic polynomial.

    Exact zero eigenvalues (vanishing trailing coefficients) are deflated;
    the remaining roots are found by Aberth-Ehrlich iteration and then get a
    single Newton step on the characteristic polynomial.
    """
    arr = np.asarray(m, dtype=float)
    coeffs = [float(c) for c in charpoly(m)]
    n = len(coeffs) - 1
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
        zeros += 1
    iterations = 0
    roots: list[complex] = []
    if len(coeffs) > 1:
        roots, iterations = _aberth(coeffs, tol)
        polished = []
        for r in roots:
            p, dp = polyval(coeffs, r)
            cand = r - p / dp if dp != 0 else r
            polished.append(cand if abs(polyval(coeffs, cand)[0]) <= abs(p) else r)
        roots = polished
    roots = _pair_conjugates(roots) + [0j] * zeros
    full = [float(c) for c in charpoly(m)]
    scale = sum(abs(c) for c in full)
    residuals = tuple(abs(polyval(full, r)[0]) / (scale * max(1.0, abs(r)) ** n) for r in roots)
    ordered = sort_energies(roots)
    vecs = None
    if vectors:
        # null vector of (M - E I) by SVD, for diagnostics only
        vecs = np.column_stack(
            [np.linalg.svd(arr - e * np.eye(arr.shape[0]))[2][-1].conj() for e in ordered]
        )
    res_by_root = dict(zip(roots, residuals))
    return EigenResult(
        eigenvalues=tuple(ordered),
        residual_norms=tuple(res_by_root.get(r, 0.0) for r in ordered),
        iterations=iterations,
        eigenvectors=vecs,
    )
