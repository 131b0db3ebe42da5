"""Matrices of the PT-symmetric tridiagonal lattice.

Builds the parity operator, the discrete Laplacean, the three-parameter
six-site Hamiltonian, its four-site predecessor, and a real representative
matrix valid for any real product couplings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

__all__ = [
    "CartesianCouplings",
    "ProductCouplings",
    "InvalidDimensionError",
    "DomainError",
    "build_parity",
    "build_laplacean",
    "build_hamiltonian6",
    "build_hamiltonian4",
    "build_product_representative",
    "to_products",
    "from_products",
    "check_pt_symmetry",
]

PT_FLOAT_ATOL = 1e-14


class InvalidDimensionError(ValueError):
    """Matrix dimension is not a positive even integer (or not supported)."""


class DomainError(ValueError):
    """Arguments fall outside the real domain of a construction."""


@dataclass(frozen=True)
class CartesianCouplings:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError(f"couplings must be finite, got {self}")


@dataclass(frozen=True)
class ProductCouplings:
    """Pair products (A, B, C) of the innermost, middle and outermost bonds."""

    A: float
    B: float
    C: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.A, self.B, self.C)):
            raise ValueError(f"couplings must be finite, got {self}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.A, self.B, self.C)

    def shifted(self, direction, step: float) -> "ProductCouplings":
        d = np.asarray(direction, dtype=float)
        return ProductCouplings(self.A + step * d[0], self.B + step * d[1], self.C + step * d[2])


def _check_even(n: int) -> None:
    if not isinstance(n, Integral) or n < 2 or n % 2:
        raise InvalidDimensionError(f"dimension must be a positive even integer, got {n!r}")


def build_parity(n: int) -> np.ndarray:
    """Antidiagonal matrix of ones; an involution."""
    _check_even(n)
    return np.fliplr(np.eye(n, dtype=int))


def build_laplacean(n: int) -> np.ndarray:
    """Discrete Laplacean with -1 on both off-diagonals."""
    _check_even(n)
    off = -np.ones(n - 1, dtype=int)
    return np.diag(off, 1) + np.diag(off, -1)


def _tridiagonal(sup, sub) -> np.ndarray:
    sup = np.asarray(sup)
    sub = np.asarray(sub)
    return np.diag(sup, 1) + np.diag(sub, -1)


def build_hamiltonian6(c: CartesianCouplings) -> np.ndarray:
    """Six-site Hamiltonian H(x, y, z).

    The superdiagonal is ``-1 + (z, y, x, y, z)`` and the subdiagonal
    ``-1 - (z, y, x, y, z)``; everything else vanishes.
    """
    g = np.array([c.z, c.y, c.x, c.y, c.z], dtype=float)
    return _tridiagonal(-1.0 + g, -1.0 - g)


def build_hamiltonian4(lam: float, a: float) -> np.ndarray:
    """Four-site Hamiltonian with outer product ``lam`` and inner product ``a``.

    Requires ``lam <= 1`` and ``a <= 1`` so that the square roots are real;
    otherwise use :func:`build_product_representative` with products
    ``(lam, a, lam)``.
    """
    if lam > 1 or a > 1:
        raise DomainError(
            f"H4 entries are complex for lam={lam}, a={a}; "
            "use build_product_representative((lam, a, lam), 4) instead"
        )
    u = math.sqrt(1.0 - lam)
    v = math.sqrt(1.0 - a)
    g = np.array([u, v, u])
    return _tridiagonal(-1.0 + g, -1.0 - g)


def to_products(c: CartesianCouplings) -> ProductCouplings:
    return ProductCouplings(1.0 - c.x * c.x, 1.0 - c.y * c.y, 1.0 - c.z * c.z)


def from_products(p: ProductCouplings) -> CartesianCouplings:
    """Nonnegative preimage ``x = sqrt(1 - A)`` etc.; products must be <= 1."""
    if p.A > 1 or p.B > 1 or p.C > 1:
        raise DomainError(f"no real preimage for products {p.as_tuple()} (all must be <= 1)")
    return CartesianCouplings(math.sqrt(1.0 - p.A), math.sqrt(1.0 - p.B), math.sqrt(1.0 - p.C))


def build_product_representative(p, n: int = 6) -> np.ndarray:
    """Real tridiagonal matrix whose opposing off-diagonal pairs multiply to the products.

    For ``n == 6`` the products are ``(C, B, A, B, C)`` read from ``p``
    (a :class:`ProductCouplings` or an ``(A, B, C)`` triple).  For ``n == 4``
    ``p`` is ``(lam, a)`` or ``(lam, a, lam)`` and the products are
    ``(lam, a, lam)``.  The superdiagonal carries ``-products``, the
    subdiagonal is all ``-1``.  Because the characteristic polynomial of a
    zero-diagonal tridiagonal matrix only depends on these pair products,
    this matrix is isospectral with the lattice Hamiltonian for every real
    choice of couplings, including those with no real (x, y, z).
    """
    if isinstance(p, ProductCouplings):
        vals = p.as_tuple()
    else:
        vals = tuple(p)
    if n == 6:
        if len(vals) != 3:
            raise ValueError("n=6 needs three products (A, B, C)")
        A, B, C = vals
        prods = [C, B, A, B, C]
    elif n == 4:
        if len(vals) == 2:
            lam, a = vals
        elif len(vals) == 3 and vals[0] == vals[2]:
            lam, a, _ = vals
        else:
            raise ValueError("n=4 needs products (lam, a) or (lam, a, lam)")
        prods = [lam, a, lam]
    else:
        raise InvalidDimensionError(f"product representative only defined for n in (4, 6), got {n!r}")
    if all(isinstance(v, Rational) for v in prods):
        # keep ints/Fractions as Python objects so charpoly can stay exact
        m = np.zeros((n, n), dtype=object)
        for i, v in enumerate(prods):
            m[i, i + 1] = -v
            m[i + 1, i] = -1
        return m
    return _tridiagonal(-np.asarray(prods, dtype=float), -np.ones(n - 1))


def _is_exact(h: np.ndarray) -> bool:
    if h.dtype.kind in "iub":
        return True
    if h.dtype == object:
        return all(isinstance(v, (Integral, Fraction)) for v in h.flat)
    return False


def check_pt_symmetry(h) -> bool:
    """True iff ``P H P == H.T`` (exactly for integer/rational input, else to 1e-14)."""
    h = np.asarray(h)
    n = h.shape[0]
    if h.ndim != 2 or h.shape[1] != n or n % 2:
        return False
    flipped = h[::-1, ::-1]
    if _is_exact(h):
        return bool(np.all(flipped == h.T))
    return bool(np.all(np.abs(flipped - h.T) <= PT_FLOAT_ATOL))
