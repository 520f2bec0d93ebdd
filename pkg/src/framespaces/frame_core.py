"""Dense complex frame primitives.

A frame is a d×N complex matrix whose columns span C^d.  This module holds the
basic objects everything else builds on: the :class:`Frame`, :class:`Spectrum`
and :class:`NormVector` value types, the frame / partial-frame / Gram
operators, a deterministic Hermitian eigendecomposition, and the ambient
symplectic pairing on tangent matrices.

Tangent matrices and Hermitian operators are represented as plain complex
ndarrays; the value types below exist where there is genuine structure to
enforce (sortedness, positivity, shape coupling).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EIG_GROUP_TOL",
    "RANK_TOL",
    "Frame",
    "FrameError",
    "NonHermitianError",
    "NotAFrameError",
    "NormVector",
    "Spectrum",
    "frame_operator",
    "gram_matrix",
    "haar_unitary",
    "hermitian_eig",
    "norms_of",
    "numerical_rank",
    "partial_frame_operator",
    "spectrum_of",
    "symplectic_pairing",
]

# Two eigenvalues are grouped as "equal" when |a - b| <= EIG_GROUP_TOL * max(1, |a|).
EIG_GROUP_TOL = 1e-8

# Numerical rank gate: singular values below RANK_TOL * sigma_max count as zero.
RANK_TOL = 1e-8

_HERMITIAN_TOL = 1e-12


class FrameError(Exception):
    """Base class for all domain errors raised by this package."""


class NotAFrameError(FrameError):
    """The matrix does not span C^d (rank-deficient), so it is not a frame."""


class NonHermitianError(FrameError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


def _as_complex_matrix(entries, what: str = "matrix") -> np.ndarray:
    arr = np.asarray(entries, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"{what} must be 2-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Frame:
    """A frame of N vectors in C^d, stored as the d×N matrix of columns.

    Column order is significant: eigensteps depend on it.  The spanning
    condition (rank d) is *not* checked at construction; operations that
    need it call :func:`spectrum_of` or check rank themselves.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_complex_matrix(self.entries, "frame")
        d, n = arr.shape
        if d < 1:
            raise ValueError("frame must have at least one row")
        if n < d:
            raise ValueError(f"frame needs at least d={d} vectors, got N={n}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_columns(cls, columns) -> "Frame":
        return cls(np.column_stack([np.asarray(c, dtype=np.complex128) for c in columns]))

    def column(self, i: int) -> np.ndarray:
        """Frame vector f_i, 1-based."""
        if not 1 <= i <= self.N:
            raise IndexError(f"column index {i} out of range 1..{self.N}")
        return self.entries[:, i - 1]

    def __repr__(self) -> str:  # keep reprs short; entries can be large
        return f"Frame(d={self.d}, N={self.N})"


def _check_sorted_positive(values: tuple[float, ...], what: str) -> None:
    if len(values) == 0:
        raise ValueError(f"{what} must be nonempty")
    for v in values:
        if not (v > 0.0) or not np.isfinite(v):
            raise ValueError(f"{what} entries must be positive finite reals, got {v}")
    for a, b in zip(values, values[1:]):
        if b > a + 1e-12 * max(1.0, abs(a)):
            raise ValueError(f"{what} must be nonincreasing, got {a} before {b}")


@dataclass(frozen=True)
class Spectrum:
    """Nonincreasing positive eigenvalue list of a frame operator."""

    values: tuple[float, ...]

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(float(v) for v in values))
        _check_sorted_positive(self.values, "spectrum")

    @property
    def d(self) -> int:
        return len(self.values)

    @property
    def total(self) -> float:
        return float(sum(self.values))

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """Multiplicities k_1,...,k_l under the grouping tolerance.

        Values are grouped against the first member of the current group, so a
        slow drift of near-equal values cannot chain indefinitely.
        """
        mults: list[int] = []
        leader = self.values[0]
        count = 0
        for v in self.values:
            if count > 0 and abs(v - leader) <= EIG_GROUP_TOL * max(1.0, abs(leader)):
                count += 1
            else:
                if count:
                    mults.append(count)
                leader, count = v, 1
        mults.append(count)
        return tuple(mults)


@dataclass(frozen=True)
class NormVector:
    """Nonincreasing positive list of squared column norms."""

    values: tuple[float, ...]

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(float(v) for v in values))
        _check_sorted_positive(self.values, "norm vector")

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def total(self) -> float:
        return float(sum(self.values))


def hermitian_eig(H, check: bool = True):
    """Eigendecomposition of a Hermitian matrix, descending, deterministic.

    Parameters
    ----------
    H : (n, n) complex array
        Hermitian matrix (entrywise equal to its conjugate transpose within
        1e-12 absolute).
    check : bool
        Validate Hermitian-ness before decomposing.

    Returns
    -------
    values : (n,) real array, nonincreasing
    vectors : (n, n) complex array
        Unitary; column j is the eigenvector for values[j].  Each column is
        phase-normalized so that its largest-modulus entry is real positive,
        which makes the decomposition reproducible across calls.
    """
    H = _as_complex_matrix(H, "operator")
    n, m = H.shape
    if n != m:
        raise ValueError(f"operator must be square, got {H.shape}")
    if check:
        dev = np.max(np.abs(H - H.conj().T)) if n else 0.0
        if dev > _HERMITIAN_TOL:
            raise NonHermitianError(
                f"matrix deviates from Hermitian by {dev:.3e} > {_HERMITIAN_TOL:.0e}"
            )
    w, v = np.linalg.eigh((H + H.conj().T) / 2.0)
    # Stable descending order: within an exactly-tied group, keep the basis
    # order eigh produced (a plain [::-1] would reverse degenerate subspaces,
    # e.g. turning the kernel basis of the zero matrix into e_n, ..., e_1).
    order = np.argsort(-w, kind="stable")
    w = w[order].copy()
    v = v[:, order].copy()
    # Deterministic phases: rotate each column so its largest-modulus entry is
    # real positive (uu* is phase-invariant, so nothing downstream changes
    # mathematically -- this only pins the representative).
    for j in range(n):
        col = v[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0.0:
            v[:, j] = col * (pivot.conjugate() / abs(pivot))
    return w, v


def frame_operator(F: Frame) -> np.ndarray:
    """The d×d frame operator FF* (positive semidefinite Hermitian)."""
    S = F.entries @ F.entries.conj().T
    return (S + S.conj().T) / 2.0


def partial_frame_operator(F: Frame, k: int) -> np.ndarray:
    """S_k = f_1 f_1* + ... + f_k f_k*, the partial frame operator (S_0 = 0)."""
    if not 0 <= k <= F.N:
        raise ValueError(f"k={k} out of range 0..{F.N}")
    Fk = F.entries[:, :k]
    S = Fk @ Fk.conj().T
    return (S + S.conj().T) / 2.0


def gram_matrix(F: Frame) -> np.ndarray:
    """The N×N Gram matrix F*F (rank ≤ d, same nonzero spectrum as FF*)."""
    G = F.entries.conj().T @ F.entries
    return (G + G.conj().T) / 2.0


def norms_of(F: Frame) -> np.ndarray:
    """Squared column norms ||f_i||^2 in column order (not sorted)."""
    return np.einsum("ij,ij->j", F.entries.conj(), F.entries).real.copy()


def numerical_rank(M, tol: float = RANK_TOL) -> int:
    """Rank of M, counting singular values above tol * sigma_max."""
    M = np.atleast_2d(np.asarray(M))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def spectrum_of(F: Frame) -> Spectrum:
    """Descending eigenvalues of FF* as a Spectrum.

    Raises NotAFrameError when the columns do not span C^d.
    """
    if numerical_rank(F.entries) < F.d:
        raise NotAFrameError(
            f"columns do not span C^{F.d}: not a frame (rank gate {RANK_TOL:.0e})"
        )
    w = np.linalg.eigvalsh(frame_operator(F))[::-1]
    return Spectrum(w)


def symplectic_pairing(X, Y) -> float:
    """The ambient symplectic form omega(X, Y) = -Im tr(Y* X) on tangent matrices."""
    X = _as_complex_matrix(X, "tangent matrix")
    Y = _as_complex_matrix(Y, "tangent matrix")
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    # vdot conjugates its first argument and sums entrywise, i.e. tr(Y* X).
    return float(-np.imag(np.vdot(Y, X)))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase fix makes the distribution exactly Haar rather than
    merely unitary.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases
