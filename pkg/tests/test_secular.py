import math

import numpy as np
import pytest

from ptlattice.implicit import c_of_e
from ptlattice.model import ProductCouplings
from ptlattice.secular import (
    Classification,
    SecularCoefficients,
    coefficients,
    count_real_energies,
    cubic_discriminant,
    eval_secular,
    solve_cubic,
    solve_s_cubic,
    sort_energies,
    spectrum,
    spectrum4,
)

FREE = [2 * math.cos(k * math.pi / 7) for k in (1, 2, 3)]


def test_coefficients_examples():
    # free lattice: characteristic polynomial of the six-site path is E^6 - 5E^4 + 6E^2 - 1
    assert coefficients(ProductCouplings(1, 1, 1)).as_tuple() == (-5, 6, -1)
    assert coefficients(ProductCouplings(0, 0, 0)).as_tuple() == (0, 0, 0)
    k = coefficients(ProductCouplings(0.09, 0.1, 1))
    assert np.allclose(k.as_tuple(), (-2.29, 1.39, -0.09), rtol=1e-14)


def test_eval_secular():
    k = coefficients(ProductCouplings(1, 1, 1))
    assert eval_secular(0, k) == -1
    assert eval_secular(1, k) == 1
    for e in FREE:
        assert abs(eval_secular(e, k)) < 1e-13
    c = c_of_e(2.0, 0.1, 0.3)
    assert c == pytest.approx(3.8823529412, abs=1e-10)
    assert abs(eval_secular(2.0, coefficients(ProductCouplings(0.09, 0.1, c)))) < 1e-9
    assert abs(eval_secular(2.0, coefficients(ProductCouplings(0.09, 0.1, 3.8823529412)))) < 1e-9


def test_solve_s_cubic():
    assert solve_s_cubic(SecularCoefficients(0, 0, 0)) == [0, 0, 0]
    s = sorted(r.real for r in solve_s_cubic(SecularCoefficients(-5, 6, -1)))
    assert np.allclose(s, sorted(e * e for e in FREE), atol=1e-12)
    assert np.allclose(s, [0.1980623, 1.5549581, 3.2469796], atol=1e-7)


@pytest.mark.parametrize("roots", [(1, 2, 3), (1, 1, 5), (2, 2, 2), (-1, 1j, -1j), (1e-8, 1, 1 + 1e-7), (0, 0, 4)])
def test_solve_cubic_known_roots(roots):
    b = -sum(roots)
    c = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    d = -roots[0] * roots[1] * roots[2]
    got = solve_cubic(b.real, c.real, d.real)
    for r in roots:
        assert min(abs(g - r) for g in got) < 1e-6 * max(1, abs(r))


def test_discriminant_sign():
    assert cubic_discriminant(-6, 11, -6)[0] > 0
    assert cubic_discriminant(0, 1, 0)[0] < 0
    assert cubic_discriminant(-4, 5, -2)[0] == 0


def test_spectrum_examples():
    s = spectrum(ProductCouplings(1, 1, 1))
    assert s.classification is Classification.ALL_REAL
    expect = sorted([e for f in FREE for e in (f, -f)], reverse=True)
    assert np.allclose([e.real for e in s.energies], expect, atol=1e-12)
    s = spectrum(ProductCouplings(0.09, 0.1, 1))
    assert s.classification is Classification.ALL_REAL and s.n_real == 6
    assert spectrum(ProductCouplings(-1, 1, 1)).classification is Classification.COMPLEXIFIED


def test_spectrum_sorted_descending():
    s = spectrum(ProductCouplings(-1, 2, 0.5))
    re = [e.real for e in s.energies]
    assert re == sorted(re, reverse=True)


def test_spectrum4():
    s = spectrum4(1, 1)
    phi = (1 + math.sqrt(5)) / 2
    assert s.classification is Classification.ALL_REAL
    assert np.allclose([e.real for e in s.energies], [phi, 1 / phi, -1 / phi, -phi], atol=1e-12)
    s = spectrum4(0, 1)
    assert s.classification is Classification.DEGENERATE and s.n_real == 4
    assert spectrum4(-0.5, 1).classification is Classification.COMPLEXIFIED


def test_count_real():
    assert count_real_energies(ProductCouplings(1, 1, 1)) == 6
    # (-1, 1, 1): s^3 - 3s^2 + 2s + 1 has one negative root and a complex pair, so no level stays real
    assert count_real_energies(ProductCouplings(-1, 1, 1)) == 0
    s = spectrum(ProductCouplings(0, 1, 1))
    assert s.n_real == 6 and s.classification is Classification.DEGENERATE


def test_vieta_and_negation():
    rng = np.random.default_rng(11)
    for a, b, c in rng.uniform(-2, 3, size=(300, 3)):
        p = ProductCouplings(a, b, c)
        k = coefficients(p)
        s = spectrum(p)
        roots = np.array(s.s_roots)
        assert abs(roots.sum() + k.c4) <= 1e-10 * max(1, abs(k.c4))
        assert abs(np.prod(roots) + k.c0) <= 1e-10 * max(1, abs(k.c0))
        e = np.array(s.energies)
        assert np.allclose(np.sort_complex(e), np.sort_complex(-e), atol=1e-10)
        assert np.allclose(np.sort_complex(e), np.sort_complex(e.conj()), atol=1e-10)
        for z in e:
            assert abs(eval_secular(z, k)) <= 1e-8 * max(1, abs(z) ** 6)


def test_sort_energies_groups_pairs():
    out = sort_energies([1 - 1j, 1 + 1j, 2, -2])
    assert out == [2, 1 + 1j, 1 - 1j, -2]


def test_tolerance_changes_verdict():
    p = ProductCouplings(0, 1, 1).shifted((1, 0, 0), 1e-12)
    assert spectrum(p, tol=1e-10).classification is Classification.DEGENERATE
    assert spectrum(p, tol=1e-14).classification is Classification.ALL_REAL


def test_to_dict_schema():
    d = spectrum(ProductCouplings(1, 1, 1)).to_dict()
    assert set(d) >= {"energies", "n_real", "classification", "tol"}
    assert len(d["energies"]) == 6 and set(d["energies"][0]) == {"re", "im"}
    assert d["classification"] == "AllReal"


def _max_residual(p):
    k = coefficients(p)
    return max(abs(eval_secular(z, k)) for z in spectrum(p).energies)


def test_zero_constant_term_is_deflated():
    # s^2 (s - 1): double root at s = 0 must not split into a complex pair
    s = spectrum(ProductCouplings(1, 0, 0))
    assert s.classification is Classification.DEGENERATE and s.n_real == 6
    assert sorted(abs(e) for e in s.energies)[:4] == [0, 0, 0, 0]


def test_small_pair_beside_dominant_root():
    s = spectrum(ProductCouplings(1.0, 1.192092896e-07, 3.896216423129759e-133))
    assert s.n_real == 6
    assert s.energies[1].real == pytest.approx(1.192092896e-07, rel=1e-6)
    s = spectrum(ProductCouplings(1, 1, 1e-9))
    assert s.classification is Classification.ALL_REAL
    assert s.energies[2].real == pytest.approx(1e-9, rel=1e-6)


def test_clustered_but_separated_roots_are_not_snapped():
    p = ProductCouplings(1, 0.001, 1)
    s = spectrum(p)
    assert s.classification is Classification.ALL_REAL
    assert _max_residual(p) < 1e-12


def test_triple_root():
    a = 2.1567531490085132
    s = spectrum(ProductCouplings(a, 0, a))
    assert s.classification is Classification.DEGENERATE and s.n_real == 6
    assert np.allclose(np.abs(s.energies), math.sqrt(a), atol=1e-14)


def test_small_scale_not_mistaken_for_triple():
    s = spectrum(ProductCouplings(0, 0, 1e-6))
    assert sorted(abs(e.real) for e in s.energies)[-1] == pytest.approx(1e-3, rel=1e-9)
