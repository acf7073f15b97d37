"""Shared fixtures: seeded RNG and random Hermitian factories."""

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)


@pytest.fixture
def make_hermitian():
    """Dense random Hermitian matrix factory."""

    def build(rng, dim, scale=1.0):
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return scale * 0.5 * (m + m.conj().T)

    return build


@pytest.fixture
def make_degenerate_reference():
    """Hermitian reference with seeded exactly-degenerate clusters.

    Returns (matrix, eigenvalues): cluster k holds ``cluster_sizes[k]`` copies
    of the eigenvalue k*spacing, rotated by a random unitary.
    """

    def build(rng, cluster_sizes, spacing=1.0):
        values = []
        for k, size in enumerate(cluster_sizes):
            values.extend([k * spacing] * size)
        values = np.array(values, dtype=float)
        dim = values.size
        m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, _ = np.linalg.qr(m)
        h0 = q @ np.diag(values).astype(complex) @ q.conj().T
        return 0.5 * (h0 + h0.conj().T), values

    return build
