"""Registry of spectrum-computation methods used by sweeps and comparisons.

Every method maps (params, trunc, n_levels) to the same shape of output: the
lowest physical levels in ascending energy order, spurious kernel zeros
already filtered, each level carrying a branch tag (closed forms only), a
parity label, and its energy.  Matrix-path methods label parity from the
expectation value of the parity operator conjugated through their chain;
closed forms carry analytic labels.

Truncation policy: matrix chains run at the caller's truncation, except the
contact-iteration refinements (rt1_kam, rt_full_kam), which rebuild their
chain at a small truncation tied to the requested level count — the
small-denominator correction is only contractive while every retained pair
of reference levels keeps a gap well above its coupling, and the dense top
of a large Fock box violates that long before the levels of interest do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .averaging import build_effective, cluster_degeneracies
from .closedform import (
    ClosedFormLevel,
    jc_spectrum,
    require_one_photon_resonance,
    rt2_spectrum,
    strong_avg_spectrum,
    strong_rt_spectrum,
)
from .kam import kam_iterate_full
from .operators import (
    ModelParams,
    TruncationConfig,
    TruncatedOperator,
    build_parity,
    build_rabi,
)
from .spectrum import (
    PARITY_NA,
    PARITY_UNCLASSIFIED,
    PARITY_EVEN,
    PARITY_ODD,
    classify_parity,
    eigh,
)
from .transforms import (
    TransformedHamiltonian,
    atom_rotate,
    generic_numeric_rt,
    rt_one_photon,
    rt_two_photon,
    rt_zero_field,
    spurious_filter,
    strong_chain,
)

__all__ = [
    "METHOD_ORDER",
    "WEAK_METHODS",
    "CLOSED_FORM_METHODS",
    "BRANCH_UNASSIGNED",
    "MethodLevel",
    "compute_levels",
    "kam_truncation",
    "rabi_rt1_chain",
    "rabi_rt2_chain",
    "rt2_iterated_chain",
    "strong_avg_decomposition",
    "strong_rt_chain",
    "levels_from_chain",
]

METHOD_ORDER = (
    "exact",
    "jc",
    "rt1",
    "rt1_kam",
    "rt2",
    "rt2_iter_2",
    "rt2_iter_3",
    "rt2_iter_4",
    "rt_full_kam",
    "strong_avg",
    "strong_rt",
)

# Methods built on the one-photon-resonance chains; they require omega0 = omega.
WEAK_METHODS = frozenset(
    {"jc", "rt1", "rt1_kam", "rt2", "rt2_iter_2", "rt2_iter_3", "rt2_iter_4", "rt_full_kam"}
)

CLOSED_FORM_METHODS = frozenset({"jc", "rt2", "strong_avg", "strong_rt"})

BRANCH_UNASSIGNED = "unassigned"

# Cluster tolerance for physically near-degenerate reference levels, as a
# fraction of omega (avoided crossings swept through by the coupling grid).
PHYSICAL_CLUSTER_FRACTION = 1e-3

_OVERLAP_MIN = 0.99


@dataclass(frozen=True)
class MethodLevel:
    """One physical level of one method at one coupling value."""

    level: int
    branch: str
    parity: str
    energy: float
    spurious: bool = False


def kam_truncation(n_levels: int) -> TruncationConfig:
    """Small Fock box for contact-iteration refinements: the requested level
    count plus a two-photon margin."""
    return TruncationConfig(n_max=n_levels + 2)


def _closed_form_count(params: ModelParams, n_levels: int) -> int:
    """Photon range that provably contains the lowest ``n_levels`` closed-form
    energies: beyond g^2/(4 omega^2) every branch is increasing in n."""
    ratio = params.g / params.omega
    return n_levels + math.ceil(ratio * ratio + 4.0 * ratio) + 8


def _levels_from_closed_form(
    levels: list[ClosedFormLevel], n_levels: int
) -> list[MethodLevel]:
    physical = sorted(
        (lv for lv in levels if not lv.spurious), key=lambda lv: (lv.energy, lv.n)
    )
    if len(physical) < n_levels:
        raise ValueError(
            f"requested {n_levels} levels but only {len(physical)} are available"
        )
    return [
        MethodLevel(
            level=i, branch=lv.branch, parity=lv.parity, energy=float(lv.energy)
        )
        for i, lv in enumerate(physical[:n_levels])
    ]


def _parity_label(vector: np.ndarray, parity_mat: np.ndarray | None) -> str:
    if parity_mat is None:
        return PARITY_NA
    expectation = float(np.real(vector.conj() @ parity_mat @ vector))
    if expectation >= _OVERLAP_MIN:
        return PARITY_EVEN
    if expectation <= -_OVERLAP_MIN:
        return PARITY_ODD
    return PARITY_UNCLASSIFIED


def _extract_levels(
    values: np.ndarray,
    vectors: np.ndarray,
    parity_mat: np.ndarray | None,
    spurious,
    loss_band: int,
    n_max: int,
    n_levels: int,
) -> list[MethodLevel]:
    """Shared tail of every matrix path: drop kernel zeros by eigenvector
    overlap, drop levels living in the corrupted top photon band, sort, rank."""
    values = np.asarray(values, dtype=float)
    _, kept, _ = spurious_filter(values, vectors, tuple(spurious))
    photon_cap = n_max - loss_band
    usable = []
    for k in kept:
        photon = int(np.argmax(np.abs(vectors[:, k]))) // 2
        if photon > photon_cap:
            continue
        usable.append(k)
    usable.sort(key=lambda k: values[k])
    if len(usable) < n_levels:
        raise ValueError(
            f"requested {n_levels} levels but only {len(usable)} survive the "
            f"guard band (loss_band={loss_band}, n_max={n_max})"
        )
    out = []
    for rank, k in enumerate(usable[:n_levels]):
        out.append(
            MethodLevel(
                level=rank,
                branch=BRANCH_UNASSIGNED,
                parity=_parity_label(vectors[:, k], parity_mat),
                energy=float(values[k]),
            )
        )
    return out


def levels_from_chain(th: TransformedHamiltonian, n_levels: int) -> list[MethodLevel]:
    """Read levels off a chain whose reference is diagonal: slot energies are
    the level estimates, slot vectors the (current-basis) eigenvectors."""
    ref = th.reference
    off = np.abs(ref - np.diag(np.diag(ref))).max()
    if off > 1e-10 * max(1.0, np.abs(ref).max()):
        raise ValueError("chain reference is not diagonal; no level estimate to read")
    values = np.real(np.diag(ref))
    vectors = np.eye(th.dim, dtype=complex)
    n_max = th.trunc.n_max if th.trunc is not None else th.dim // 2 - 1
    return _extract_levels(
        values, vectors, th.parity, th.spurious, th.loss_band, n_max, n_levels
    )


def rabi_rt1_chain(params: ModelParams, trunc: TruncationConfig) -> TransformedHamiltonian:
    return rt_one_photon(build_rabi(params, trunc), params, trunc)


def rabi_rt2_chain(params: ModelParams, trunc: TruncationConfig) -> TransformedHamiltonian:
    return rt_two_photon(rabi_rt1_chain(params, trunc))


def rt2_iterated_chain(
    params: ModelParams, trunc: TruncationConfig, iterations: int
) -> TransformedHamiltonian:
    """One-photon + two-photon reductions followed by ``iterations - 1``
    numeric transformations of the residual near-degeneracies."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    th = rabi_rt2_chain(params, trunc)
    tol = PHYSICAL_CLUSTER_FRACTION * params.omega
    for _ in range(iterations - 1):
        th = generic_numeric_rt(th, tol_deg=tol)
    return th


def strong_avg_decomposition(params: ModelParams, trunc: TruncationConfig):
    """Matrix path behind strong_avg: displaced chain, averaging over the
    doubly degenerate displaced ladder, diagonalization of the effective
    operator.  Returns (decomposition, chain)."""
    th = strong_chain(build_rabi(params, trunc), params, trunc)
    ref_op = TruncatedOperator(entries=th.reference, hermitian=True)
    decomp = eigh(ref_op)
    clusters = cluster_degeneracies(decomp, 1e-8 * params.omega)
    heff = build_effective(th.reference, th.operator - th.reference, decomp, clusters)
    return eigh(heff), th


def strong_rt_chain(params: ModelParams, trunc: TruncationConfig) -> TransformedHamiltonian:
    """Matrix path behind strong_rt: displaced chain, atomic rotation,
    zero-field photon-shift reduction, numeric diagonalization of the
    doublet blocks of the averaged operator."""
    th = strong_chain(build_rabi(params, trunc), params, trunc)
    th = atom_rotate(th)
    th = rt_zero_field(th)
    return generic_numeric_rt(th, tol_deg=1e-8 * params.omega)


def _exact_levels(
    params: ModelParams, trunc: TruncationConfig, n_levels: int
) -> list[MethodLevel]:
    h = build_rabi(params, trunc)
    decomp = classify_parity(eigh(h), build_parity(trunc))
    if n_levels > decomp.values.size:
        raise ValueError(f"requested {n_levels} levels from dim {decomp.values.size}")
    return [
        MethodLevel(
            level=i,
            branch=BRANCH_UNASSIGNED,
            parity=decomp.parity[i],
            energy=float(decomp.values[i]),
        )
        for i in range(n_levels)
    ]


def _kam_levels(
    th: TransformedHamiltonian, params: ModelParams, n_levels: int
) -> list[MethodLevel]:
    chain = kam_iterate_full(
        th.reference,
        th.operator - th.reference,
        max_steps=1,
        tol_deg=PHYSICAL_CLUSTER_FRACTION * params.omega,
    )
    n_max = th.trunc.n_max if th.trunc is not None else th.dim // 2 - 1
    return _extract_levels(
        chain.estimate,
        chain.vectors,
        th.parity,
        th.spurious,
        th.loss_band,
        n_max,
        n_levels,
    )


def compute_levels(
    method: str,
    params: ModelParams,
    trunc: TruncationConfig,
    n_levels: int,
) -> list[MethodLevel]:
    """Compute the lowest ``n_levels`` physical levels by the named method."""
    if method not in METHOD_ORDER:
        raise ValueError(f"unknown method {method!r}; known: {', '.join(METHOD_ORDER)}")
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if method in WEAK_METHODS:
        require_one_photon_resonance(params)

    if method == "exact":
        return _exact_levels(params, trunc, n_levels)
    if method == "jc":
        return _levels_from_closed_form(
            jc_spectrum(params, _closed_form_count(params, n_levels)), n_levels
        )
    if method == "rt2":
        return _levels_from_closed_form(
            rt2_spectrum(params, _closed_form_count(params, n_levels)), n_levels
        )
    if method == "strong_avg":
        return _levels_from_closed_form(
            strong_avg_spectrum(params, _closed_form_count(params, n_levels)), n_levels
        )
    if method == "strong_rt":
        return _levels_from_closed_form(
            strong_rt_spectrum(params, _closed_form_count(params, n_levels)), n_levels
        )
    if method == "rt1":
        return levels_from_chain(rabi_rt1_chain(params, trunc), n_levels)
    if method == "rt1_kam":
        small = kam_truncation(n_levels)
        return _kam_levels(rabi_rt1_chain(params, small), params, n_levels)
    if method.startswith("rt2_iter_"):
        iterations = int(method.rsplit("_", 1)[1])
        return levels_from_chain(rt2_iterated_chain(params, trunc, iterations), n_levels)
    if method == "rt_full_kam":
        small = kam_truncation(n_levels)
        return _kam_levels(rt2_iterated_chain(params, small, 4), params, n_levels)
    raise AssertionError(f"unhandled method {method!r}")
