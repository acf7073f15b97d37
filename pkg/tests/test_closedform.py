"""Closed-form ladders, Laguerre helpers, resonance loci."""

import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import genlaguerre

from resonancekit.closedform import (
    displacement_element,
    f_laguerre,
    jc_spectrum,
    laguerre,
    require_one_photon_resonance,
    resonance_loci,
    rt2_spectrum,
    strong_avg_spectrum,
    strong_rt_spectrum,
)
from resonancekit.operators import (
    ModelParams,
    TruncationConfig,
    build_jaynes_cummings,
)
from resonancekit.spectrum import eigh


def _params(g, omega0=None):
    return ModelParams(omega=1.0, omega0=1.0 if omega0 is None else omega0, g=g)


def _physical(levels):
    return sorted(lv.energy for lv in levels if not lv.spurious)


# ---------------------------------------------------------------- laguerre


def test_laguerre_small_cases():
    assert laguerre(0, 0, 3.7) == 1.0
    assert laguerre(1, 0, 0.25) == 0.75
    assert laguerre(2, 0, 2.0) == pytest.approx(-1.0, abs=1e-14)
    assert laguerre(1, 1, 0.5) == pytest.approx(1.5, abs=1e-14)


def test_laguerre_validates_arguments():
    with pytest.raises(ValueError, match="n must be >= 0"):
        laguerre(-1, 0, 1.0)
    with pytest.raises(ValueError, match="alpha must be >= 0"):
        laguerre(2, -1, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(min_value=0, max_value=30),
    alpha=st.integers(min_value=0, max_value=5),
    x=st.floats(min_value=0.0, max_value=50.0, allow_nan=False),
)
def test_laguerre_matches_scipy(n, alpha, x):
    mine = laguerre(n, alpha, x)
    oracle = float(genlaguerre(n, alpha)(x))
    assert abs(mine - oracle) <= 1e-10 * max(1.0, abs(oracle))


def test_f_laguerre_vacuum_is_pure_damping():
    params = _params(0.3)
    assert f_laguerre(0, params) == pytest.approx(math.exp(-2 * 0.3**2), rel=1e-14)


def test_f_laguerre_first_zero_at_half_omega():
    # L_1(4g^2/w^2) vanishes identically at g = w/2.
    assert f_laguerre(1, _params(0.5)) == 0.0


# ---------------------------------------------------------------- displacement


def test_displacement_element_basics():
    params = _params(0.4)
    assert displacement_element(0, 0, params) == pytest.approx(
        f_laguerre(0, params), rel=1e-14
    )
    decoupled = _params(0.0)
    assert displacement_element(3, 3, decoupled) == 1.0
    assert displacement_element(3, 5, decoupled) == 0.0
    with pytest.raises(ValueError, match="m, n must be >= 0"):
        displacement_element(-1, 0, params)


def test_displacement_element_adjoint_symmetry():
    params = _params(0.7)
    for m, n in ((0, 3), (2, 5), (4, 1)):
        assert displacement_element(m, n, params, sign=+1) == pytest.approx(
            displacement_element(n, m, params, sign=-1), rel=1e-13
        )


@pytest.mark.parametrize("g", [0.5, 2.0])
def test_displacement_element_against_matrix_exponential(g):
    params = _params(g)
    fock = 121
    a = np.zeros((fock, fock))
    for n in range(fock - 1):
        a[n, n + 1] = math.sqrt(n + 1)
    gen = (2.0 * g / params.omega) * (a.T - a)
    big = scipy.linalg.expm(gen)
    for m in range(21):
        for n in range(21):
            assert displacement_element(m, n, params, sign=+1) == pytest.approx(
                big[m, n], abs=1e-10
            )


def test_require_one_photon_resonance():
    require_one_photon_resonance(_params(0.3))  # no raise at resonance
    with pytest.raises(ValueError, match="require omega0 = omega"):
        require_one_photon_resonance(ModelParams(omega=1.0, omega0=1.1, g=0.3))


# ---------------------------------------------------------------- ladders


def test_jc_spectrum_decoupled_ladder():
    levels = jc_spectrum(_params(0.0), 4)
    assert _physical(levels) == [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]
    spurious = [lv for lv in levels if lv.spurious]
    assert len(spurious) == 1
    assert (spurious[0].n, spurious[0].branch) == (0, "+")


def test_jc_spectrum_matches_exact_pair_diagonalization():
    params = _params(0.35)
    closed = _physical(jc_spectrum(params, 12))[:10]
    exact = eigh(build_jaynes_cummings(params, TruncationConfig(n_max=40)))
    np.testing.assert_allclose(closed, exact.values[:10], atol=1e-12)


def test_jc_spectrum_branch_values():
    params = _params(0.2)
    by_key = {(lv.n, lv.branch): lv.energy for lv in jc_spectrum(params, 5)}
    for n in range(1, 6):
        assert by_key[(n, "+")] == pytest.approx(n + 0.2 * math.sqrt(n), rel=1e-15)
        assert by_key[(n, "-")] == pytest.approx(n - 0.2 * math.sqrt(n), rel=1e-15)


def test_rt2_spectrum_decoupled_reduces_to_free_ladder():
    levels = rt2_spectrum(_params(0.0), 6)
    pairs = [[n - 2.0, float(n)] for n in range(3, 7)]
    assert _physical(levels) == sorted([0.0, 1.0, 2.0] + sum(pairs, []))
    assert sum(lv.spurious for lv in levels) == 3


def test_rt2_spectrum_keeps_gap_open_at_first_active_locus():
    # At g_1 = 2w/(1 + sqrt(3)) the one-photon ladder has an exact crossing;
    # the two-photon treatment replaces it with a gap ~ g*sqrt(n+... ).
    g1 = 2.0 / (1.0 + math.sqrt(3.0))
    by_key = {(lv.n, lv.branch): lv.energy for lv in rt2_spectrum(_params(g1), 6)}
    gap = by_key[(3, "+")] - by_key[(3, "-")]
    assert gap == pytest.approx(g1 * math.sqrt(2.0), rel=1e-10)


def test_strong_avg_spectrum_decoupled_ladder():
    levels = strong_avg_spectrum(_params(0.0), 5)
    assert _physical(levels)[:8] == [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0]


def test_strong_avg_branches_cross_where_f1_vanishes():
    by_key = {(lv.n, lv.branch): lv.energy for lv in strong_avg_spectrum(_params(0.5), 3)}
    assert by_key[(1, "+")] == by_key[(1, "-")]


def test_strong_rt_spectrum_decoupled_is_exact():
    levels = strong_rt_spectrum(_params(0.0), 4)
    assert _physical(levels) == [0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]


def test_strong_rt_ground_level_formula():
    params = _params(0.8)
    by_key = {(lv.n, lv.branch): lv for lv in strong_rt_spectrum(params, 2)}
    expect = 0.5 - 0.8**2 - 0.5 * math.exp(-2 * 0.8**2)
    assert by_key[(0, "+")].energy == pytest.approx(expect, rel=1e-14)
    assert by_key[(0, "-")].spurious
    assert by_key[(0, "-")].energy == 0.0


def test_strong_rt_spurious_zero_at_any_coupling():
    for g in (0.0, 1.0, 2.5):
        levels = strong_rt_spectrum(_params(g), 3)
        spurious = [lv for lv in levels if lv.spurious]
        assert len(spurious) == 1
        assert (spurious[0].n, spurious[0].branch, spurious[0].energy) == (0, "-", 0.0)


def test_strong_variants_coincide_at_large_coupling():
    diffs = []
    for g in (2.5, 3.0, 3.5, 4.0):
        avg = _physical(strong_avg_spectrum(_params(g), 12))[:8]
        rt = _physical(strong_rt_spectrum(_params(g), 12))[:8]
        diffs.append(max(abs(a - b) for a, b in zip(avg, rt)))
    assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
    assert diffs[-1] < 1e-2


# ---------------------------------------------------------------- loci


def test_resonance_loci_values_and_kinds():
    loci = resonance_loci(range(3), omega=1.0)
    by_key = {(lc.n, lc.kind): lc.g for lc in loci}
    assert by_key[(0, "active")] == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert by_key[(0, "mute")] == pytest.approx(1.0, rel=1e-15)
    assert by_key[(1, "active")] == pytest.approx(2.0 / (1.0 + math.sqrt(3.0)), rel=1e-15)
    assert by_key[(1, "mute")] == pytest.approx(1.0 / (1.0 + math.sqrt(2.0)), rel=1e-15)


def test_resonance_loci_decrease_with_n():
    loci = resonance_loci(range(8), omega=1.0)
    for kind in ("active", "mute"):
        gs = [lc.g for lc in loci if lc.kind == kind]
        assert all(b < a for a, b in zip(gs, gs[1:]))


def test_resonance_loci_scale_with_omega():
    one = resonance_loci([2], omega=1.0)
    two = resonance_loci([2], omega=2.0)
    assert two[0].g == pytest.approx(2.0 * one[0].g, rel=1e-15)


def test_resonance_loci_reject_negative_index():
    with pytest.raises(ValueError, match="locus index must be >= 0"):
        resonance_loci([-1], omega=1.0)
