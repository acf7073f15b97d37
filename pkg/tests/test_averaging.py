"""Degeneracy clustering, averaging projector, cohomological equation."""

import numpy as np
import pytest

from resonancekit.averaging import (
    DegeneracyClusters,
    build_effective,
    classify_resonances,
    cluster_degeneracies,
    combined_projector,
    project_average,
    solve_cohomological,
)
from resonancekit.operators import (
    ModelParams,
    TruncatedOperator,
    TruncationConfig,
    build_jaynes_cummings,
    build_rabi,
)
from resonancekit.spectrum import EigenDecomposition, eigh


def _diag_decomp(values):
    values = np.asarray(values, dtype=float)
    return EigenDecomposition(values=values, vectors=np.eye(values.size, dtype=complex))


# ---------------------------------------------------------------- clustering


def test_cluster_degeneracies_groups_adjacent_values():
    decomp = _diag_decomp([0.0, 1.0, 1.0 + 1e-12, 2.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    assert clusters.clusters == ((0,), (1, 2), (3,))
    np.testing.assert_allclose(clusters.means, [0.0, 1.0, 2.0], atol=1e-9)
    assert clusters.tol_deg == 1e-9


def test_cluster_degeneracies_chains_through_small_gaps():
    # Chaining is deliberate: consecutive gaps below tol merge transitively
    # even when the cluster ends up wider than tol.
    decomp = _diag_decomp([0.0, 5e-10, 1e-9, 1.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    assert clusters.clusters == ((0, 1, 2), (3,))


def test_cluster_degeneracies_requires_positive_tol():
    with pytest.raises(ValueError, match="tol_deg must be > 0"):
        cluster_degeneracies(_diag_decomp([0.0, 1.0]), tol_deg=0.0)


def test_co_rotating_level_crossing_forms_cluster():
    # At g = 2/(1 + sqrt(3)) the dressed levels 1 + g and 3 - g*sqrt(3)
    # coincide, so the exact decomposition acquires a two-member cluster.
    g1 = 2.0 / (1.0 + np.sqrt(3.0))
    params = ModelParams(omega=1.0, omega0=1.0, g=g1)
    decomp = eigh(build_jaynes_cummings(params, TruncationConfig(n_max=12)))
    clusters = cluster_degeneracies(decomp, tol_deg=1e-8)
    sizes = [len(c) for c in clusters.clusters]
    assert max(sizes) == 2
    pair = clusters.clusters[sizes.index(2)]
    assert clusters.means[sizes.index(2)] == pytest.approx(1.0 + g1, abs=1e-8)
    assert len(pair) == 2


# ---------------------------------------------------------------- projector


def test_project_average_nondegenerate_keeps_diagonal(rng, make_hermitian):
    values = np.arange(6.0)
    decomp = _diag_decomp(values)
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    v = make_hermitian(rng, 6)
    pv = project_average(v, decomp, clusters)
    np.testing.assert_allclose(pv, np.diag(np.diag(v)), atol=1e-12)


def test_project_average_single_cluster_returns_v(rng, make_hermitian):
    decomp = _diag_decomp(np.zeros(5))
    clusters = cluster_degeneracies(decomp, tol_deg=1.0)
    assert clusters.clusters == ((0, 1, 2, 3, 4),)
    v = make_hermitian(rng, 5)
    np.testing.assert_allclose(project_average(v, decomp, clusters), v, atol=1e-13)


def test_project_average_idempotent_hermitian_commutant(
    rng, make_hermitian, make_degenerate_reference
):
    h0, _ = make_degenerate_reference(rng, (3, 2, 1, 4), spacing=1.0)
    decomp = eigh(TruncatedOperator(entries=h0, hermitian=True))
    clusters = cluster_degeneracies(decomp, tol_deg=1e-8)
    assert tuple(len(c) for c in clusters.clusters) == (3, 2, 1, 4)
    v = make_hermitian(rng, 10)
    pv = project_average(v, decomp, clusters)
    ppv = project_average(pv, decomp, clusters)
    assert np.abs(ppv - pv).max() <= 1e-12
    assert np.abs(pv - pv.conj().T).max() <= 1e-12
    comm = h0 @ pv - pv @ h0
    bound = 1e-10 * np.linalg.norm(h0, 2) * np.linalg.norm(v, 2)
    assert np.abs(comm).max() <= bound


def test_project_average_invariant_under_degenerate_remixing(
    rng, make_hermitian, make_degenerate_reference
):
    # The projector depends only on the degenerate subspaces, not on the
    # arbitrary eigenvector basis the solver picked inside them.
    h0, _ = make_degenerate_reference(rng, (3, 2, 2), spacing=1.0)
    decomp = eigh(TruncatedOperator(entries=h0, hermitian=True))
    clusters = cluster_degeneracies(decomp, tol_deg=1e-8)
    v = make_hermitian(rng, 7)
    pv = project_average(v, decomp, clusters)

    mixed = decomp.vectors.copy()
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    mixed[:, :3] = mixed[:, :3] @ q
    remixed = EigenDecomposition(values=decomp.values, vectors=mixed)
    pv2 = project_average(v, remixed, clusters)
    assert np.abs(pv - pv2).max() <= 1e-12


# ---------------------------------------------------------------- cohomology


def test_solve_cohomological_two_level():
    decomp = _diag_decomp([0.0, 1.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    v = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    w = solve_cohomological(v, decomp, clusters)
    np.testing.assert_allclose(w, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-14)
    h0 = np.diag(decomp.values)
    d = project_average(v, decomp, clusters)
    np.testing.assert_allclose(h0 @ w - w @ h0 + v, d, atol=1e-14)


def test_solve_cohomological_fully_degenerate_gives_zero(rng, make_hermitian):
    decomp = _diag_decomp(np.zeros(4))
    clusters = cluster_degeneracies(decomp, tol_deg=1.0)
    v = make_hermitian(rng, 4)
    w = solve_cohomological(v, decomp, clusters)
    np.testing.assert_array_equal(w, np.zeros((4, 4)))
    np.testing.assert_allclose(project_average(v, decomp, clusters), v, atol=1e-13)


def test_solve_cohomological_random_residual(rng, make_hermitian, make_degenerate_reference):
    h0, _ = make_degenerate_reference(rng, (4, 4, 4, 4), spacing=0.7)
    decomp = eigh(TruncatedOperator(entries=h0, hermitian=True))
    clusters = cluster_degeneracies(decomp, tol_deg=1e-8)
    v = make_hermitian(rng, 16, scale=0.3)
    w = solve_cohomological(v, decomp, clusters)
    assert np.abs(w + w.conj().T).max() <= 1e-12
    # In-cluster blocks of W vanish.
    w_eig = decomp.vectors.conj().T @ w @ decomp.vectors
    for cluster in clusters.clusters:
        block = w_eig[np.ix_(cluster, cluster)]
        assert np.abs(block).max() <= 1e-12
    d = project_average(v, decomp, clusters)
    residual = h0 @ w - w @ h0 + v - d
    assert np.linalg.norm(residual, 2) <= 1e-10 * np.linalg.norm(v, 2)


def test_solve_cohomological_rejects_inconsistent_clustering():
    decomp = _diag_decomp([0.0, 1e-12, 1.0])
    bad = DegeneracyClusters(
        clusters=((0,), (1,), (2,)),
        means=(0.0, 1e-12, 1.0),
        tol_deg=1e-9,
    )
    v = np.ones((3, 3), dtype=complex)
    with pytest.raises(ValueError, match="clustering inconsistency"):
        solve_cohomological(v, decomp, bad)


# ---------------------------------------------------------------- resonances


def test_classify_resonances_flags_coupled_clusters():
    decomp = _diag_decomp([0.0, 0.0, 1.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    assert clusters.clusters == ((0, 1), (2,))
    v = np.array(
        [[0.0, 0.5, 0.1], [0.5, 0.0, 0.0], [0.1, 0.0, 0.3]], dtype=complex
    )
    flagged = classify_resonances(v, decomp, clusters)
    assert flagged.active == (True, False)  # singletons are always passive
    assert flagged.tol_active > 0.0


def test_classify_resonances_zero_coupling_is_passive():
    decomp = _diag_decomp([0.0, 0.0, 1.0, 1.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    flagged = classify_resonances(np.zeros((4, 4)), decomp, clusters)
    assert flagged.active == (False, False)


def test_classify_resonances_honors_explicit_threshold():
    decomp = _diag_decomp([0.0, 0.0])
    clusters = cluster_degeneracies(decomp, tol_deg=1e-9)
    v = np.array([[0.0, 1e-3], [1e-3, 0.0]], dtype=complex)
    assert classify_resonances(v, decomp, clusters).active == (True,)
    assert classify_resonances(v, decomp, clusters, tol_active=1e-2).active == (False,)


# ---------------------------------------------------------------- effective


def test_build_effective_reproduces_co_rotating_model():
    # Averaging the full coupling over the decoupled reference keeps exactly
    # the co-rotating half: the effective operator IS the pair-block model.
    params = ModelParams(omega=1.0, omega0=1.0, g=0.3)
    trunc = TruncationConfig(n_max=12)
    h_free = build_rabi(ModelParams(1.0, 1.0, 0.0), trunc)
    v = build_rabi(params, trunc).entries - h_free.entries
    decomp = eigh(h_free)
    clusters = cluster_degeneracies(decomp, tol_deg=1e-8)
    h_eff = build_effective(h_free.entries, v, decomp, clusters)
    h_jc = build_jaynes_cummings(params, trunc)
    assert h_eff.hermitian
    np.testing.assert_allclose(h_eff.entries, h_jc.entries, atol=1e-12)


# ---------------------------------------------------------------- combined


def test_combined_projector_single_member_delegates(rng, make_hermitian):
    h = make_hermitian(rng, 8)
    v = make_hermitian(rng, 8)
    combined = combined_projector(v, [h], tol_deg=1e-6)
    decomp = eigh(TruncatedOperator(entries=h, hermitian=True))
    direct = project_average(v, decomp, cluster_degeneracies(decomp, 1e-6))
    np.testing.assert_allclose(combined, direct, atol=1e-12)


def test_combined_projector_takes_union_of_diagonal_supports(rng, make_hermitian):
    v = make_hermitian(rng, 3)
    fam = [np.diag([0.0, 0.0, 1.0]), np.diag([0.0, 1.0, 1.0])]
    combined = combined_projector(v, fam, tol_deg=1e-9)
    mask = np.array(
        [[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=bool
    )
    np.testing.assert_allclose(combined, np.where(mask, v, 0.0), atol=1e-14)
    # Projecting a second time changes nothing.
    np.testing.assert_allclose(
        combined_projector(combined, fam, tol_deg=1e-9), combined, atol=1e-14
    )


def test_combined_projector_validates_family(rng, make_hermitian):
    v = make_hermitian(rng, 4)
    with pytest.raises(ValueError, match="H0_family must not be empty"):
        combined_projector(v, [])
    with pytest.raises(ValueError, match="dimension mismatch"):
        combined_projector(v, [np.eye(3)])
    rot = make_hermitian(rng, 4)
    with pytest.raises(ValueError, match="diagonal in the working basis"):
        combined_projector(v, [np.diag([0.0, 1.0, 2.0, 3.0]), rot])
