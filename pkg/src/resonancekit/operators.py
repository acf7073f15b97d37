"""Truncated-Fock operator construction for a two-level atom in one field mode.

All operators act on the space spanned by |n, s> with n = 0..n_max the photon
number and s the atomic state ("+" or "-").  The flat basis index is

    k = 2*n + s,    s = 0 for "+", 1 for "-",

so atomic 2x2 blocks sit inside each photon level and photon-shift operators
are clean block-row shifts.  Matrices are dense complex; dimensions stay in
the low hundreds, where dense eigensolvers dominate the cost anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ATOM_PLUS",
    "ATOM_MINUS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "ModelParams",
    "TruncationConfig",
    "TruncatedOperator",
    "basis_index",
    "basis_label",
    "build_boson_ops",
    "tensor",
    "atom_block",
    "build_rabi",
    "build_parity",
    "default_guard",
    "validated_level_count",
]

ATOM_PLUS = 0
ATOM_MINUS = 1

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_HERM_RTOL = 1e-14


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters (hbar = 1).

    Attributes
    ----------
    omega : float
        Field-mode frequency, must be > 0.
    omega0 : float
        Atomic splitting, must be >= 0.
    g : float
        Dipole coupling, must be >= 0.
    """

    omega: float
    omega0: float
    g: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")


@dataclass(frozen=True)
class TruncationConfig:
    """Numerical truncation controls.

    Attributes
    ----------
    n_max : int
        Maximum photon number retained; matrix dimension is 2*(n_max+1).
    guard : int or None
        Number of top photon levels excluded from validity claims.  None
        means "resolve from the coupling via :func:`default_guard`".
    """

    n_max: int
    guard: int | None = None

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.guard is not None and not 0 <= self.guard < self.n_max:
            raise ValueError(
                f"guard must satisfy 0 <= guard < n_max, got {self.guard}"
            )

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense complex matrix on the truncated atom (x) field space.

    Attributes
    ----------
    entries : numpy.ndarray
        dim x dim complex matrix in the k = 2n+s basis.
    dim : int
        Matrix dimension, 2*(n_max+1).
    hermitian : bool
        When set, entries were verified equal to their conjugate transpose
        to 1e-14 relative at construction.
    """

    entries: np.ndarray
    dim: int = field(default=-1)
    hermitian: bool = False

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {entries.shape}")
        if self.dim == -1:
            object.__setattr__(self, "dim", entries.shape[0])
        elif self.dim != entries.shape[0]:
            raise ValueError(
                f"dim {self.dim} does not match entries shape {entries.shape}"
            )
        if self.hermitian:
            scale = max(np.abs(entries).max(), 1.0)
            if np.abs(entries - entries.conj().T).max() > _HERM_RTOL * scale:
                raise ValueError("hermitian flag set on a non-Hermitian matrix")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n_max(self) -> int:
        return self.dim // 2 - 1


def basis_index(n: int, s: int) -> int:
    """Flat index of |n, s> (s = 0 for atom "+", 1 for atom "-")."""
    return 2 * n + s


def basis_label(k: int) -> str:
    """Human-readable label of basis index k, e.g. ``|0,+>``."""
    n, s = divmod(k, 2)
    return f"|{n},{'+' if s == ATOM_PLUS else '-'}>"


def build_boson_ops(trunc: TruncationConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation, creation and number operators on the field factor.

    Returns
    -------
    (a, a_dag, N) : tuple of (n_max+1) x (n_max+1) complex arrays
        a[n, n+1] = sqrt(n+1); a_dag = a^H; N = diag(0..n_max).
    """
    if trunc.n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {trunc.n_max}")
    d = trunc.n_max + 1
    a = np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)
    n_op = np.diag(np.arange(d)).astype(complex)
    return a, a.conj().T, n_op


def tensor(field_op: np.ndarray, atom_op: np.ndarray) -> np.ndarray:
    """Kronecker product field_op (x) atom_op in the k = 2n+s convention."""
    field_op = np.asarray(field_op, dtype=complex)
    atom_op = np.asarray(atom_op, dtype=complex)
    if atom_op.shape != (2, 2):
        raise ValueError(f"atom factor must be 2x2, got {atom_op.shape}")
    if field_op.ndim != 2 or field_op.shape[0] != field_op.shape[1]:
        raise ValueError(f"field factor must be square, got {field_op.shape}")
    return np.kron(field_op, atom_op)


def atom_block(
    f_pp: np.ndarray, f_pm: np.ndarray, f_mp: np.ndarray, f_mm: np.ndarray
) -> np.ndarray:
    """Assemble a 2x2 operator-valued block matrix [[f_pp, f_pm], [f_mp, f_mm]].

    Each argument is an operator on the field factor; the result acts on the
    full space with the "+"/"-" atomic blocks filled accordingly.  This is the
    transcription helper for block expressions written per atomic state.
    """
    e_pp = np.array([[1, 0], [0, 0]], dtype=complex)
    e_pm = np.array([[0, 1], [0, 0]], dtype=complex)
    e_mp = np.array([[0, 0], [1, 0]], dtype=complex)
    e_mm = np.array([[0, 0], [0, 1]], dtype=complex)
    return (
        tensor(f_pp, e_pp)
        + tensor(f_pm, e_pm)
        + tensor(f_mp, e_mp)
        + tensor(f_mm, e_mm)
    )


def build_rabi(params: ModelParams, trunc: TruncationConfig) -> TruncatedOperator:
    """Full Hamiltonian omega*(N+1/2) (x) 1 + (omega0/2) 1 (x) sigma_z + g*(a+a^H) (x) sigma_x."""
    a, a_dag, n_op = build_boson_ops(trunc)
    eye_f = np.eye(trunc.n_max + 1, dtype=complex)
    h = (
        params.omega * tensor(n_op + 0.5 * eye_f, np.eye(2))
        + 0.5 * params.omega0 * tensor(eye_f, SIGMA_Z)
        + params.g * tensor(a + a_dag, SIGMA_X)
    )
    return TruncatedOperator(entries=h, hermitian=True)


def build_jaynes_cummings(params: ModelParams, trunc: TruncationConfig) -> TruncatedOperator:
    """Rotating-wave Hamiltonian: the coupling keeps only the co-rotating
    terms g*(a (x) sigma_+ + a^H (x) sigma_-), which exchange one photon with
    one atomic flip and couple the degenerate pairs |n,+> <-> |n+1,->."""
    a, a_dag, n_op = build_boson_ops(trunc)
    eye_f = np.eye(trunc.n_max + 1, dtype=complex)
    sigma_plus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    h = (
        params.omega * tensor(n_op + 0.5 * eye_f, np.eye(2))
        + 0.5 * params.omega0 * tensor(eye_f, SIGMA_Z)
        + params.g * (tensor(a, sigma_plus) + tensor(a_dag, sigma_plus.conj().T))
    )
    return TruncatedOperator(entries=h, hermitian=True)


def build_parity(trunc: TruncationConfig) -> TruncatedOperator:
    """Parity operator P = (-1)^N (x) sigma_z; P = P^H, P^2 = 1, [P, H] = 0."""
    signs_f = np.diag((-1.0) ** np.arange(trunc.n_max + 1)).astype(complex)
    return TruncatedOperator(entries=tensor(signs_f, SIGMA_Z), hermitian=True)


def default_guard(params: ModelParams, trunc: TruncationConfig) -> int:
    """Guard band: top photon levels excluded from validity claims.

    The strong-coupling displacement shifts photon occupation by
    O((2g/omega)^2), so validity must exclude a g-dependent top band;
    ceil(8 g^2/omega^2) + 10 is calibrated by the truncation-doubling test.
    Capped at n_max - 1 so at least one photon level stays validated.
    """
    if trunc.guard is not None:
        return trunc.guard
    band = math.ceil(8.0 * params.g**2 / params.omega**2) + 10
    return min(band, trunc.n_max - 1)


def validated_level_count(params: ModelParams, trunc: TruncationConfig) -> int:
    """Number of low eigenvalues covered by validity claims: 2(n_max+1) - 2*guard."""
    return max(0, 2 * (trunc.n_max + 1) - 2 * default_guard(params, trunc))
