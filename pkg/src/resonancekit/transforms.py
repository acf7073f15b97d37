"""Isometric/unitary transformation chains with spurious-eigenvalue bookkeeping.

Index-shifting isometries are built directly as 0/1 (or 0/sqrt) entry
matrices, never via operator square roots.  Each photon shift invalidates the
top 1-2 photon rows at truncation, so a chain accumulates a loss band that is
added to the guard band of validity claims.  A non-unitary (isometric)
transformation R with R^H R = 1 - sum of kernel projectors adds one exact
zero eigenvalue per kernel vector; those vectors are carried along the chain
so the extra zeros can be matched and filtered by eigenvector overlap rather
than by energy (physical zero eigenvalues exist too).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .averaging import combined_projector
from .closedform import require_one_photon_resonance, rt2_mixing_angle
from .kam import unitary_exp
from .operators import (
    ModelParams,
    TruncationConfig,
    TruncatedOperator,
    atom_block,
    basis_index,
    basis_label,
    build_parity,
    tensor,
)
from .spectrum import eigh as _eigh
from .averaging import cluster_degeneracies

__all__ = [
    "SpuriousLevel",
    "IsometryRecord",
    "TransformedHamiltonian",
    "atom_rotation_t",
    "shift_down",
    "op_A",
    "op_A_perp0",
    "rt_one_photon",
    "rt_two_photon",
    "generic_numeric_rt",
    "strong_chain",
    "rt_zero_field",
    "spurious_filter",
]


@dataclass(frozen=True)
class SpuriousLevel:
    """Exact zero eigenvalue attached to a transformation-kernel vector."""

    label: str
    vector: np.ndarray
    energy: float = 0.0


@dataclass(frozen=True)
class IsometryRecord:
    """One isometric reduction step: matrix, kernel, dressing, truncation loss."""

    matrix: np.ndarray
    kernel_labels: tuple[str, ...]
    photon_dressing: int
    loss_rows: int


@dataclass(frozen=True)
class TransformedHamiltonian:
    """A Hamiltonian conjugated through a chain of transformations.

    operator: the conjugated full Hamiltonian in the current basis.
    reference: the renormalized reference whose spectrum is the chain's
    level estimate (diagonal for the explicit chains).
    parity: the parity operator conjugated through the same chain (None when
    the chain was started from a bare matrix without parity bookkeeping).
    spurious: kernel levels accumulated so far, vectors in the current basis.
    loss_band: top photon levels invalidated by index shifting / displacement.
    """

    operator: np.ndarray
    reference: np.ndarray
    parity: np.ndarray | None
    spurious: tuple[SpuriousLevel, ...]
    provenance: tuple[str, ...]
    loss_band: int
    params: ModelParams | None = None
    trunc: TruncationConfig | None = None
    records: tuple[IsometryRecord, ...] = ()

    @property
    def dim(self) -> int:
        return self.operator.shape[0]


def _mat(op) -> np.ndarray:
    return op.entries if isinstance(op, TruncatedOperator) else np.asarray(op, dtype=complex)


def atom_rotation_t() -> np.ndarray:
    """pi/2 rotation about the atomic y-axis: T^H sigma_x T = sigma_z."""
    return np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / math.sqrt(2.0)


def shift_down(fock_dim: int) -> np.ndarray:
    """Normalized lowering shift sum_n |n><n+1| on the field factor."""
    return np.eye(fock_dim, k=1, dtype=complex)


def op_A(fock_dim: int) -> np.ndarray:
    """Two-photon shift A = sum_n sqrt(n+1) |n><n+2|."""
    a = np.zeros((fock_dim, fock_dim), dtype=complex)
    for n in range(fock_dim - 2):
        a[n, n + 2] = math.sqrt(n + 1)
    return a


def op_A_perp0(fock_dim: int) -> np.ndarray:
    """A restricted off the vacuum: sum_{n>=1} sqrt(n+1) |n><n+2|."""
    a = op_A(fock_dim)
    a[0, :] = 0.0
    return a


def _conjugate(th: TransformedHamiltonian, s: np.ndarray, tag: str, **updates) -> dict:
    """Shared bookkeeping for conjugating a chain by a (possibly isometric) s."""
    out = dict(
        operator=s.conj().T @ th.operator @ s,
        parity=None if th.parity is None else s.conj().T @ th.parity @ s,
        spurious=tuple(
            replace(sp, vector=s.conj().T @ sp.vector) for sp in th.spurious
        ),
        provenance=th.provenance + (tag,),
        loss_band=th.loss_band,
        params=th.params,
        trunc=th.trunc,
        records=th.records,
    )
    out.update(updates)
    return out


def rt_one_photon(
    H, params: ModelParams, trunc: TruncationConfig
) -> TransformedHamiltonian:
    """One-photon resonant transformation: photon-shift isometry on the "+"
    atomic block followed by the atomic rotation on the n >= 1 subspace.

    The result of applying it to the full Hamiltonian splits into the exactly
    diagonal dressed ladder omega*N (x) 1 + g*sqrt(N) (x) sigma_z (the
    reference) plus a two-photon-coupling remainder.  The kernel |0,+> turns
    into an exact spurious zero level.
    """
    require_one_photon_resonance(params)
    h = _mat(H)
    fock_dim = trunc.n_max + 1
    if h.shape[0] != 2 * fock_dim:
        raise ValueError(f"dimension mismatch: H is {h.shape}, trunc dim {2 * fock_dim}")
    eye_f = np.eye(fock_dim, dtype=complex)
    r1 = atom_block(shift_down(fock_dim), np.zeros_like(eye_f), np.zeros_like(eye_f), eye_f)
    p0 = np.zeros_like(eye_f)
    p0[0, 0] = 1.0
    t1 = tensor(p0, np.eye(2)) + tensor(eye_f - p0, atom_rotation_t())
    s = r1 @ t1

    ns = np.arange(fock_dim)
    ref_diag = np.empty(2 * fock_dim)
    ref_diag[0::2] = params.omega * ns + params.g * np.sqrt(ns)
    ref_diag[1::2] = params.omega * ns - params.g * np.sqrt(ns)

    parity = build_parity(trunc).entries
    kernel = np.zeros(2 * fock_dim, dtype=complex)
    kernel[basis_index(0, 0)] = 1.0
    base = TransformedHamiltonian(
        operator=h,
        reference=np.diag(ref_diag).astype(complex),
        parity=parity,
        spurious=(),
        provenance=(),
        loss_band=0,
        params=params,
        trunc=trunc,
    )
    fields = _conjugate(base, s, "rt_one_photon")
    fields["reference"] = np.diag(ref_diag).astype(complex)
    fields["spurious"] = (SpuriousLevel(label=basis_label(0), vector=kernel),)
    fields["loss_band"] = 1
    fields["records"] = (
        IsometryRecord(
            matrix=r1, kernel_labels=(basis_label(0),), photon_dressing=-1, loss_rows=1
        ),
    )
    return TransformedHamiltonian(**fields)


def _rt2_family(params: ModelParams, fock_dim: int) -> list[np.ndarray]:
    """Dressed references at every active locus g_n with n+2 inside truncation."""
    w = params.omega
    ns = np.arange(fock_dim)
    family = []
    for n in range(fock_dim - 2):
        g_n = 2.0 * w / (math.sqrt(n) + math.sqrt(n + 2))
        diag = np.empty(2 * fock_dim)
        diag[0::2] = w * ns + g_n * np.sqrt(ns)
        diag[1::2] = w * ns - g_n * np.sqrt(ns)
        family.append(np.diag(diag).astype(complex))
    return family


def build_r2(omega: float, g: float, fock_dim: int) -> np.ndarray:
    """Combined two-photon reduction: two-photon shift on the "+" block away
    from the vacuum, a reflection by the mixing angle on the (0,-)/(2,-)
    pair, identity on (0,+)."""
    dim = 2 * fock_dim
    r2 = np.zeros((dim, dim), dtype=complex)
    for n in range(1, fock_dim - 2):
        r2[basis_index(n, 0), basis_index(n + 2, 0)] = 1.0
    for n in range(1, fock_dim):
        if n != 2:
            r2[basis_index(n, 1), basis_index(n, 1)] = 1.0
    r2[basis_index(0, 0), basis_index(0, 0)] = 1.0
    theta = rt2_mixing_angle(omega, g)
    i0, i2 = basis_index(0, 1), basis_index(2, 1)
    r2[i0, i0] = -math.cos(theta)
    r2[i0, i2] = -math.sin(theta)
    r2[i2, i0] = -math.sin(theta)
    r2[i2, i2] = math.cos(theta)
    return r2


def rt_two_photon(H1: TransformedHamiltonian, g: float | None = None) -> TransformedHamiltonian:
    """Two-photon resonant transformation on a one-photon-transformed chain.

    Extracts the resonant part of the remainder with the combined projector
    over the whole active-locus family, reduces it with the two-photon shift
    isometry plus the (0,2,-) reflection, and finishes with the per-photon
    2x2 rotation on the commuting blocks.  Adds two spurious zeros at the
    kernel slots |1,+> and |2,+>.
    """
    params = H1.params
    if params is None or H1.trunc is None:
        raise ValueError("rt_two_photon needs the params/trunc carried by rt_one_photon")
    if g is None:
        g = params.g
    w = params.omega
    fock_dim = H1.trunc.n_max + 1
    dim = 2 * fock_dim

    v1 = H1.operator - H1.reference
    resonant = combined_projector(v1, _rt2_family(params, fock_dim), tol_deg=1e-8 * w)
    h1_eff = H1.reference + resonant

    r2 = build_r2(w, g, fock_dim)
    m = r2.conj().T @ h1_eff @ r2
    rot = np.eye(dim, dtype=complex)
    for n in range(3, fock_dim):
        i, j = basis_index(n, 0), basis_index(n, 1)
        block = np.array([[m[i, i], m[i, j]], [m[j, i], m[j, j]]])
        block = 0.5 * (block + block.conj().T)
        _, q = np.linalg.eigh(block)
        rot[np.ix_([i, j], [i, j])] = q
    s = r2 @ rot

    ref_new = s.conj().T @ h1_eff @ s
    scale = max(np.abs(ref_new).max(), 1.0)
    off = ref_new - np.diag(np.diag(ref_new))
    if np.abs(off).max() > 1e-10 * scale:
        raise ArithmeticError(
            f"two-photon reduction failed to diagonalize the effective part "
            f"(off-diagonal {np.abs(off).max():.3e})"
        )
    ref_new = np.diag(np.real(np.diag(ref_new))).astype(complex)

    kernels = []
    for n in (1, 2):
        vec = np.zeros(dim, dtype=complex)
        vec[basis_index(n, 0)] = 1.0
        kernels.append(SpuriousLevel(label=basis_label(basis_index(n, 0)), vector=vec))

    fields = _conjugate(H1, s, "rt_two_photon")
    fields["reference"] = ref_new
    fields["spurious"] = fields["spurious"] + tuple(kernels)
    fields["loss_band"] = H1.loss_band + 2
    fields["records"] = H1.records + (
        IsometryRecord(
            matrix=r2,
            kernel_labels=tuple(k.label for k in kernels),
            photon_dressing=-2,
            loss_rows=2,
        ),
    )
    return TransformedHamiltonian(**fields)


def atom_rotate(th: TransformedHamiltonian) -> TransformedHamiltonian:
    """Conjugate a chain by the global atomic rotation 1 (x) T.

    Used between the displacement chain and the zero-field reduction to move
    the averaged remainder onto the atomic z-axis.  The reference must be
    scalar on each atomic doublet (invariant under the rotation); asserted.
    """
    fock_dim = th.dim // 2
    s = tensor(np.eye(fock_dim, dtype=complex), atom_rotation_t())
    rotated = s.conj().T @ th.reference @ s
    if not np.allclose(rotated, th.reference, atol=1e-12 * max(1.0, np.abs(th.reference).max())):
        raise ValueError("atom_rotate needs a reference invariant under the atomic rotation")
    fields = _conjugate(th, s, "atom_rotate")
    fields["reference"] = th.reference
    return TransformedHamiltonian(**fields)


def generic_numeric_rt(
    H,
    reference=None,
    clusters=None,
    tol_deg: float | None = None,
) -> TransformedHamiltonian:
    """Numeric resonant transformation without hand-built isometries.

    Diagonalizes the effective operator H0 + (averaged V) by rotating inside
    the degeneracy-cluster blocks of the reference and conjugates the full
    operator by that block rotation.  Unitary: no spurious levels, no new
    truncation loss.  Accepts either a TransformedHamiltonian (chains) or a
    bare operator plus reference.
    """
    if isinstance(H, TransformedHamiltonian):
        th = H
    else:
        if reference is None:
            raise ValueError("generic_numeric_rt on a bare operator needs a reference")
        th = TransformedHamiltonian(
            operator=_mat(H),
            reference=_mat(reference),
            parity=None,
            spurious=(),
            provenance=(),
            loss_band=0,
        )
    if tol_deg is None:
        omega = th.params.omega if th.params is not None else max(np.abs(th.reference).max(), 1.0)
        tol_deg = 1e-3 * omega

    ref = 0.5 * (th.reference + th.reference.conj().T)
    decomp = _eigh(TruncatedOperator(entries=ref, hermitian=True))
    if clusters is None:
        clusters = cluster_degeneracies(decomp, tol_deg)
    u = decomp.vectors
    v_eig = u.conj().T @ (th.operator - ref) @ u
    q = np.eye(th.dim, dtype=complex)
    new_e = decomp.values.copy()
    for cluster in clusters.clusters:
        idx = list(cluster)
        block = np.diag(decomp.values[idx]) + v_eig[np.ix_(idx, idx)]
        block = 0.5 * (block + block.conj().T)
        vals, vecs = np.linalg.eigh(block)
        q[np.ix_(idx, idx)] = vecs
        new_e[idx] = vals
    s = u @ q
    fields = _conjugate(th, s, "generic_numeric_rt")
    fields["reference"] = np.diag(new_e).astype(complex)
    return TransformedHamiltonian(**fields)


def strong_chain(
    H, params: ModelParams, trunc: TruncationConfig
) -> TransformedHamiltonian:
    """Atomic rotation followed by the opposite displacements of the two
    atomic blocks: the unbounded part of the Hamiltonian becomes the exactly
    diagonal displaced ladder (omega*(N+1/2) - g^2/omega) (x) 1 (the
    reference); the bounded remainder carries the displacement matrix
    elements.  Unitary for any g (the truncated a^H - a is anti-Hermitian),
    but the displacement corrupts a g-dependent top band.
    """
    h = _mat(H)
    fock_dim = trunc.n_max + 1
    if h.shape[0] != 2 * fock_dim:
        raise ValueError(f"dimension mismatch: H is {h.shape}, trunc dim {2 * fock_dim}")
    w, g = params.omega, params.g
    a = np.zeros((fock_dim, fock_dim), dtype=complex)
    for n in range(fock_dim - 1):
        a[n, n + 1] = math.sqrt(n + 1)
    gen = (g / w) * (a.conj().T - a)
    zeros = np.zeros_like(a)
    u = atom_block(unitary_exp(-gen), zeros, zeros, unitary_exp(gen))
    s = tensor(np.eye(fock_dim), atom_rotation_t()) @ u

    ns = np.arange(fock_dim)
    ref_diag = np.repeat(w * (ns + 0.5) - g * g / w, 2)
    band = min(math.ceil(8.0 * g * g / (w * w)) + 10, trunc.n_max)

    base = TransformedHamiltonian(
        operator=h,
        reference=np.diag(ref_diag).astype(complex),
        parity=build_parity(trunc).entries,
        spurious=(),
        provenance=(),
        loss_band=0,
        params=params,
        trunc=trunc,
    )
    fields = _conjugate(base, s, "strong_chain")
    fields["reference"] = np.diag(ref_diag).astype(complex)
    fields["loss_band"] = band
    return TransformedHamiltonian(**fields)


def rt_zero_field(H2: TransformedHamiltonian) -> TransformedHamiltonian:
    """Photon-shift isometry on the "-" atomic block, treating the zero-field
    degeneracies of the displaced ladder.  The new reference is the bare
    ladder omega*N (x) 1; |0,-> becomes an exact spurious zero."""
    params = H2.params
    if params is None or H2.trunc is None:
        raise ValueError("rt_zero_field needs the params/trunc carried by the chain")
    fock_dim = H2.trunc.n_max + 1
    eye_f = np.eye(fock_dim, dtype=complex)
    zeros = np.zeros_like(eye_f)
    r1 = atom_block(eye_f, zeros, zeros, shift_down(fock_dim))

    ns = np.arange(fock_dim)
    ref_diag = np.repeat(params.omega * ns.astype(float), 2)
    vec = np.zeros(2 * fock_dim, dtype=complex)
    vec[basis_index(0, 1)] = 1.0

    fields = _conjugate(H2, r1, "rt_zero_field")
    fields["reference"] = np.diag(ref_diag).astype(complex)
    fields["spurious"] = fields["spurious"] + (
        SpuriousLevel(label=basis_label(basis_index(0, 1)), vector=vec),
    )
    fields["loss_band"] = H2.loss_band + 1
    fields["records"] = H2.records + (
        IsometryRecord(
            matrix=r1,
            kernel_labels=(basis_label(basis_index(0, 1)),),
            photon_dressing=-1,
            loss_rows=1,
        ),
    )
    return TransformedHamiltonian(**fields)


def spurious_filter(
    values: np.ndarray,
    vectors: np.ndarray,
    spurious: tuple[SpuriousLevel, ...],
    zero_tol: float | None = None,
) -> tuple[np.ndarray, list[int], list[int]]:
    """Remove exactly one zero level per kernel vector.

    Matching is by eigenvector concentration on the kernel vector (overlap
    >= 0.99), not by energy alone — physical zero eigenvalues exist.  A kernel
    without a matching zero level indicates a transformation bug and raises.

    Returns (cleaned values, kept indices, removed indices).
    """
    values = np.asarray(values, dtype=float)
    if zero_tol is None:
        zero_tol = 1e-8 * max(1.0, np.abs(values).max())
    removed: list[int] = []
    for sp in spurious:
        w = sp.vector / max(np.linalg.norm(sp.vector), np.finfo(float).tiny)
        overlaps = np.abs(w.conj() @ vectors)
        order = np.argsort(-overlaps)
        match = -1
        for idx in order:
            if overlaps[idx] < 0.99:
                break
            if idx in removed:
                continue
            if abs(values[idx]) <= zero_tol:
                match = int(idx)
                break
        if match < 0:
            raise ValueError(
                f"no zero level matches kernel {sp.label} "
                f"(best overlap {overlaps[order[0]]:.3f})"
            )
        removed.append(match)
    kept = [i for i in range(len(values)) if i not in removed]
    return values[kept], kept, removed
