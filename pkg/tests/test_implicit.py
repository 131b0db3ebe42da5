import math

import numpy as np
import pytest

from ptlattice.domain import membership
from ptlattice.implicit import (
    POLE_GUARD,
    PoleError,
    UnphysicalLimitError,
    alpha_critical_energies,
    alpha_of_e,
    alpha_of_e_partial_fractions,
    alpha_profile,
    alpha_roots,
    b_ep_of_c_branch,
    b_of_e,
    b_threshold,
    c_branch_profile,
    c_of_e,
    critical_energies,
    cubic_real_root_count,
    scan_stationary_points,
    zeros_of_c,
)
from ptlattice.model import ProductCouplings
from ptlattice.secular import coefficients, eval_secular, spectrum

C_EP_1_2 = -0.41858782039271


def test_alpha_roots():
    r = alpha_roots(0.09)
    assert sorted(x.value for x in r) == pytest.approx([-0.3, 0.3])
    with pytest.raises(ValueError):
        alpha_roots(-1)


def test_c_of_e():
    assert c_of_e(0.0, 0.7, 0.3) == 0
    assert c_of_e(2.0, 0.1, 0.3) == pytest.approx(4 - 0.2 / 1.7, rel=1e-15)
    s = spectrum(ProductCouplings(0.09, 0.1, c_of_e(2.0, 0.1, 0.3)))
    assert min(abs(e - 2) for e in s.energies) < 1e-9
    with pytest.raises(PoleError):
        c_of_e(0.3, 0.1, 0.3)
    with pytest.raises(PoleError):
        c_of_e(0.3 + POLE_GUARD / 2, 0.1, 0.3)


def test_alpha_of_e():
    assert alpha_of_e(1.7, 0.0, 5.0) == 1.7
    c = c_of_e(2.0, 0.1, 0.3)
    assert alpha_of_e(2.0, 0.1, c) == pytest.approx(0.3, rel=1e-12)
    with pytest.raises(PoleError):
        alpha_of_e(1.0, 0.1, 1.0)


def test_alpha_partial_fractions_agree():
    e = np.linspace(-3, 3, 601)
    e = e[np.abs(np.abs(e) - 1.0) > 1e-3]
    a1 = alpha_of_e(e, 0.1, 1.0)
    a2 = alpha_of_e_partial_fractions(e, 0.1, 1.0)
    assert np.allclose(a1, a2, rtol=1e-13, atol=0)


def test_alpha_curve_monotone_for_positive_couplings():
    # dalpha/dE = 1 + B(E^2 + C)/(E^2 - C)^2 > 0 when B, C > 0
    assert alpha_critical_energies(0.1, 1.0) == []
    e = np.linspace(1.001, 4, 3000)
    assert np.all(np.diff(alpha_of_e(e, 0.1, 1.0)) > 0)


def test_alpha_curve_minimum_for_small_negative_b():
    crit = [e for e in alpha_critical_energies(-0.01, 1.0) if e > 1]
    assert len(crit) == 1
    e0 = crit[0]
    assert alpha_of_e(e0, -0.01, 1.0) < min(alpha_of_e(e0 - 1e-3, -0.01, 1.0), alpha_of_e(e0 + 1e-3, -0.01, 1.0))
    assert alpha_of_e(e0, -0.01, 1.0) > 0


def test_b_of_e():
    assert b_of_e(0.3, 2.0, 0.3) == 0
    assert b_of_e(math.sqrt(2.0), 2.0, 0.3) == pytest.approx(0, abs=1e-15)
    assert b_of_e(2.0, c_of_e(2.0, 0.1, 0.3), 0.3) == pytest.approx(0.1, rel=1e-12)
    with pytest.raises(PoleError):
        b_of_e(0.0, 1.0, 0.3)


def test_zeros_of_c():
    assert sorted(zeros_of_c(1, 0)) == [0, 1]
    assert sorted(zeros_of_c(0, 1)) == [-1, 1]
    assert sorted(zeros_of_c(0.3, 0.1)) == pytest.approx([-0.2, 0.5])
    assert zeros_of_c(0.1, -1) is None


def test_critical_energies():
    crit = critical_energies(1, 2)
    assert crit == pytest.approx([-0.4655712318767681], abs=1e-12)
    near = sorted(critical_energies(1, -1e-9))
    assert near == pytest.approx([0, 1, 1], abs=1e-3)
    crit = critical_energies(0.3, -0.01)
    assert len(crit) == 3 and sum(0 < e < 0.3 for e in crit) == 2
    for a, b in [(1, 2), (0.3, -0.01), (-0.5, 0.2), (2, -0.5)]:
        for e in critical_energies(a, b):
            assert abs(a * b + 2 * e * (e - a) ** 2) <= 1e-10 * max(abs(a * b), 1e-300)


def test_b_ep_closed_form_and_scaling():
    b1 = b_ep_of_c_branch(1.0)
    assert b1 == pytest.approx(-8 / 27, abs=1e-11)
    for a in (0.3, 0.5, 1.0, 2.0, -0.7):
        assert b_ep_of_c_branch(a) == pytest.approx(a * a * b1, abs=1e-10)
    assert cubic_real_root_count(-2, 1, (b1 + 1e-6) / 2) == 3
    assert cubic_real_root_count(-2, 1, (b1 - 1e-6) / 2) == 1
    with pytest.raises(ValueError):
        b_ep_of_c_branch(0)


def test_branch_profile_positive_b():
    prof = c_branch_profile(1, 2)
    assert prof.c_ep == pytest.approx(C_EP_1_2, abs=1e-12)
    assert prof.c_ep == pytest.approx(c_of_e(-0.4655712318767681, 2, 1), abs=1e-12)
    assert not prof.has_gap


def test_branch_profile_gap_ordering():
    prof = c_branch_profile(0.3, -0.01)
    assert prof.has_gap and prof.c_min < prof.c_max < prof.c_ep
    mids = [0.5 * (prof.c_max + max(prof.c_min, 0.0)), 0.5 * (prof.c_max + prof.c_ep), prof.c_ep + 1.0]
    got = [membership(ProductCouplings(0.09, -0.01, c)).verdict.value for c in mids]
    assert got == ["Physical", "Unphysical", "Physical"]


def test_branch_profile_c_ep_rises_as_b_falls():
    vals = [c_branch_profile(1, b).c_ep for b in (-0.01, -0.05, -0.1, -0.2)]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_branch_profile_reflection():
    for a, b in [(1, 2), (0.3, -0.01), (0.7, 0.4)]:
        p, m = c_branch_profile(a, b), c_branch_profile(-a, b)
        assert m.c_ep == pytest.approx(p.c_ep, abs=1e-14)
        assert sorted(m.critical_energies) == pytest.approx(sorted(-e for e in p.critical_energies), abs=1e-14)
        assert sorted(m.zeros) == pytest.approx(sorted(-z for z in p.zeros), abs=1e-14)


def test_branch_profile_limits():
    with pytest.raises(UnphysicalLimitError):
        c_branch_profile(1, 0)
    with pytest.raises(ValueError):
        c_branch_profile(0, 1)


def test_round_trip_and_secular_residual():
    rng = np.random.default_rng(9)
    e, b, al = rng.uniform(-3, 3, 2000), rng.uniform(-2, 2, 2000), rng.uniform(-2, 2, 2000)
    keep = (np.abs(e - al) > 0.05) & (np.abs(e) > 0.05) & (np.abs(b) > 0.05) & (np.abs(al) > 0.05)
    e, b, al = e[keep], b[keep], al[keep]
    c = c_of_e(e, b, al)
    ok = np.abs(e * e - c) > 1e-6
    e, b, al, c = e[ok], b[ok], al[ok], c[ok]
    assert np.max(np.abs(alpha_of_e(e, b, c) / al - 1)) < 1e-12
    assert np.max(np.abs(b_of_e(e, c, al) / b - 1)) < 1e-12
    for ei, bi, ai, ci in zip(e[:300], b[:300], al[:300], c[:300]):
        assert abs(eval_secular(ei, coefficients(ProductCouplings(ai * ai, bi, ci)))) < 1e-9


def test_alpha_profile():
    assert alpha_profile(0.1, 1).admits(0.09)
    prof = alpha_profile(1, 1)
    assert prof.a_intervals == ((0.0, math.inf),)
    for a in np.linspace(0.01, 3, 30):
        assert membership(ProductCouplings(a, 1, 1)).verdict.value == "Physical"
    prof = alpha_profile(-0.01, 1)
    assert prof.gap is not None and not prof.extra_extrema
    assert max(prof.critical_alphas) == pytest.approx(-min(prof.critical_alphas), abs=1e-10)
    lo, hi = prof.gap
    assert membership(ProductCouplings(0.5 * (lo + hi), -0.01, 1)).verdict.value == "Unphysical"
    assert membership(ProductCouplings(hi + 0.1, -0.01, 1)).verdict.value == "Physical"


def test_scan_stationary_points_matches_closed_form():
    f = lambda x: (3 * x * x - 3, 6 * x)
    assert scan_stationary_points(f, -2, 2) == pytest.approx([-1, 1], abs=1e-12)


def test_b_threshold():
    assert b_threshold(1, 0.3) == 0
    t = b_threshold(-1, 0.3)
    assert t > 0
    bs = np.arange(t - 0.05, t + 0.05, 1e-3)
    verdicts = [membership(ProductCouplings(0.09, b, -1)).verdict.value for b in bs]
    first = bs[verdicts.index("Physical")]
    assert abs(first - t) <= 1e-3
    assert all(v != "Physical" for b, v in zip(bs, verdicts) if b < t - 1e-3)
    # alpha -> 0 regression value: approaches -C
    assert b_threshold(-1, 1e-6) == pytest.approx(1.0, abs=1e-3)
