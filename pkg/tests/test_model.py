import math
from fractions import Fraction

import numpy as np
import pytest

from ptlattice.model import (
    CartesianCouplings,
    DomainError,
    InvalidDimensionError,
    ProductCouplings,
    build_hamiltonian4,
    build_hamiltonian6,
    build_laplacean,
    build_parity,
    build_product_representative,
    check_pt_symmetry,
    from_products,
    to_products,
)
from ptlattice.oracle import charpoly, eig_dense


def test_parity_small_and_involutive():
    assert build_parity(2).tolist() == [[0, 1], [1, 0]]
    p6 = build_parity(6)
    assert np.array_equal(p6, np.fliplr(np.eye(6, dtype=int)))
    assert np.array_equal(p6 @ p6, np.eye(6, dtype=int))


@pytest.mark.parametrize("n", [0, 3, -2, 2.0])
def test_bad_dimension(n):
    with pytest.raises(InvalidDimensionError):
        build_parity(n)
    with pytest.raises(InvalidDimensionError):
        build_laplacean(n)


def test_laplacean():
    assert build_laplacean(2).tolist() == [[0, -1], [-1, 0]]
    assert build_laplacean(6)[2].tolist() == [0, -1, 0, -1, 0, 0]
    ev = np.sort(np.array(eig_dense(build_laplacean(6)).eigenvalues).real)
    expect = np.sort([s * 2 * math.cos(k * math.pi / 7) for k in (1, 2, 3) for s in (1, -1)])
    assert np.allclose(ev, expect, atol=1e-10)


def test_hamiltonian6():
    assert np.array_equal(build_hamiltonian6(CartesianCouplings(0, 0, 0)), build_laplacean(6))
    h = build_hamiltonian6(CartesianCouplings(1, 1, 1))
    assert np.all(np.diag(h, 1) == 0)
    assert np.all(np.diag(h, -1) == -2)
    h = build_hamiltonian6(CartesianCouplings(0.3, 0.4, 0.5))
    assert h[0, 1] == -0.5 and h[1, 0] == -1.5


def test_hamiltonian4():
    # lam and a are pair products: unit products give the free lattice
    h0 = build_hamiltonian4(0, 0)
    assert np.all(np.diag(h0, -1) == -2) and np.all(np.diag(h0, 1) == 0)
    h = build_hamiltonian4(1, 1)
    assert np.array_equal(h, build_laplacean(4))
    ev = np.sort(np.array(eig_dense(h).eigenvalues).real)
    phi = (1 + math.sqrt(5)) / 2
    assert np.allclose(ev, [-phi, -1 / phi, 1 / phi, phi], atol=1e-10)
    with pytest.raises(DomainError):
        build_hamiltonian4(2, 0.5)


def test_products_round_trip():
    assert to_products(CartesianCouplings(0, 0, 0)) == ProductCouplings(1, 1, 1)
    assert to_products(CartesianCouplings(1, 1, 1)) == ProductCouplings(0, 0, 0)
    assert from_products(ProductCouplings(1, 1, 1)) == CartesianCouplings(0, 0, 0)
    assert from_products(ProductCouplings(0, 0, 0)) == CartesianCouplings(1, 1, 1)
    x = from_products(ProductCouplings(0.09, 0.5, -1)).x
    assert x == pytest.approx(math.sqrt(0.91))
    c = CartesianCouplings(-0.3, 0.7, -1.2)
    back = from_products(to_products(c))
    assert np.allclose([back.x, back.y, back.z], [0.3, 0.7, 1.2], atol=1e-15)
    with pytest.raises(DomainError):
        from_products(ProductCouplings(2, 1, 1))


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        ProductCouplings(float("nan"), 0, 0)
    with pytest.raises(ValueError):
        CartesianCouplings(0, float("inf"), 0)


def test_product_representative():
    assert np.array_equal(build_product_representative(ProductCouplings(1, 1, 1)), build_laplacean(6))
    m = build_product_representative(ProductCouplings(-1, 1, 1))
    assert np.diag(m, 1).tolist() == [-1, -1, 1, -1, -1]
    with pytest.raises(InvalidDimensionError):
        build_product_representative(ProductCouplings(1, 1, 1), n=8)


def test_representative_exact_for_rationals():
    m = build_product_representative(ProductCouplings(Fraction(9, 100), Fraction(1, 10), 1))
    assert charpoly(m) == [1, 0, Fraction(-229, 100), 0, Fraction(139, 100), 0, Fraction(-9, 100)]


def test_representative_matches_cartesian_charpoly():
    rng = np.random.default_rng(3)
    for a, b, c in rng.uniform(-2, 1, size=(50, 3)):
        p = ProductCouplings(a, b, c)
        k1 = np.array(charpoly(build_hamiltonian6(from_products(p))), dtype=float)
        k2 = np.array(charpoly(build_product_representative(p)), dtype=float)
        assert np.allclose(k1, k2, rtol=0, atol=1e-12 * max(1, np.abs(k2).max()))


def test_pt_symmetry():
    h = build_hamiltonian6(CartesianCouplings(0.5, 0.5, 0.5))
    assert check_pt_symmetry(h)
    assert check_pt_symmetry(build_laplacean(6))
    h[0, 1] = 7
    assert not check_pt_symmetry(h)
    rng = np.random.default_rng(0)
    for x, y, z in rng.normal(scale=3, size=(100, 3)):
        assert check_pt_symmetry(build_hamiltonian6(CartesianCouplings(x, y, z)))
