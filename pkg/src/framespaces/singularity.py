"""Orthodecomposability detection, stabilizers, and the singular cone.

A frame is orthodecomposable when its columns split into groups spanning
pairwise orthogonal subspaces that jointly fill the ambient space.  These
are exactly the frames where the diagonal torus-times-unitary action fails
to be locally free, which shows up in three equivalent ways:

* the column overlap graph (edges where |<f_i, f_j>| is nonzero) is
  disconnected,
* the differential of the norms-and-frame-operator map drops rank,
* the stabilizer linear system has a positive-dimensional solution space.

The graph form is the cheap one and is what :func:`is_orthodecomposable`
uses; the other two are exposed as :func:`momentum_jacobian_rank` and
:func:`stabilizer_dimension` and the package's test battery holds all three
to agreement.  :func:`cone_membership` tests tangent directions against the
linear and quadratic equations cutting out the singular cone at an
orthodecomposable frame.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .frame_core import (
    RANK_TOL,
    Frame,
    FrameError,
    NotAFrameError,
    hermitian_eig,
    numerical_rank,
)

__all__ = [
    "EDGE_TOL",
    "InvalidPartitionError",
    "OdfPartition",
    "StabilizerElement",
    "is_orthodecomposable",
    "stabilizer_dimension",
    "stabilizer_basis",
    "momentum_jacobian_rank",
    "cone_membership",
]

#: Relative gate for overlap-graph edges: |<f_i, f_j>| > EDGE_TOL * |f_i||f_j|.
EDGE_TOL = 1e-8


class InvalidPartitionError(FrameError):
    """The proposed column partition does not orthodecompose the frame."""


@dataclass(frozen=True)
class OdfPartition:
    """Column partition into groups spanning pairwise orthogonal subspaces.

    `parts` holds disjoint, sorted, 1-based column index sets covering
    1..N, ordered by smallest member; `subspace_dims` holds the rank of
    each part's column block.  The dims sum to d.
    """

    parts: Tuple[Tuple[int, ...], ...]
    subspace_dims: Tuple[int, ...]

    @property
    def n_parts(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class StabilizerElement:
    """One solution (xi, theta) of the stabilizer system.

    xi is d x d skew-Hermitian, theta is a vector of N reals with the last
    entry pinned to 0 (gauge), and xi f_j = i theta_j f_j for every column.
    """

    xi: np.ndarray
    theta: np.ndarray


def _overlap_parts(entries: np.ndarray, tol: float):
    """0-based connected components of the relative overlap graph."""
    n = entries.shape[1]
    gram = np.abs(entries.conj().T @ entries)
    norms = np.linalg.norm(entries, axis=0)
    scale = np.outer(norms, norms)
    adj = gram > tol * scale
    seen = np.zeros(n, dtype=bool)
    parts = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in np.flatnonzero(adj[u]):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        parts.append(sorted(comp))
    parts.sort()
    return parts


def is_orthodecomposable(F: Frame, tol: float = EDGE_TOL) -> Optional[OdfPartition]:
    """Finest orthogonal column decomposition of F, or None when there is none.

    Builds the graph on columns with edges where the normalized inner
    product exceeds `tol`, and returns its connected components when there
    are at least two.  Component spans are pairwise orthogonal (every cross
    pair fails the edge gate) and jointly spanning, so disconnectedness is
    exactly orthodecomposability.

    Raises NotAFrameError when the columns do not span C^d.
    """
    if numerical_rank(F.entries) < F.d:
        raise NotAFrameError(
            f"columns do not span C^{F.d}: orthodecomposability is undefined"
        )
    parts = _overlap_parts(F.entries, tol)
    if len(parts) < 2:
        return None
    dims = tuple(numerical_rank(F.entries[:, p]) for p in parts)
    return OdfPartition(
        parts=tuple(tuple(i + 1 for i in p) for p in parts),
        subspace_dims=dims,
    )


def _skew_hermitian_basis(d: int):
    """Real basis of the d x d skew-Hermitian matrices (d^2 elements)."""
    basis = []
    for j in range(d):
        B = np.zeros((d, d), dtype=np.complex128)
        B[j, j] = 1j
        basis.append(B)
    for j in range(d):
        for k in range(j + 1, d):
            B = np.zeros((d, d), dtype=np.complex128)
            B[j, k], B[k, j] = 1.0, -1.0
            basis.append(B)
            B = np.zeros((d, d), dtype=np.complex128)
            B[j, k], B[k, j] = 1j, 1j
            basis.append(B)
    return basis


def _stabilizer_matrix(F: Frame) -> np.ndarray:
    """Real matrix of the system xi f_j = i theta_j f_j, theta_N = 0.

    Unknown layout: d^2 skew-Hermitian coordinates, then theta_1..theta_{N-1}.
    Equations: 2dN real (stacked real and imaginary parts of xi F - F theta).
    """
    d, n = F.d, F.N
    cols = [(B @ F.entries).ravel() for B in _skew_hermitian_basis(d)]
    for c in range(n - 1):
        col = np.zeros((d, n), dtype=np.complex128)
        col[:, c] = -1j * F.entries[:, c]
        cols.append(col.ravel())
    M = np.array(cols).T
    return np.vstack([M.real, M.imag])


def stabilizer_dimension(F: Frame) -> int:
    """Real dimension of the solution space of the stabilizer system.

    Zero exactly when the combined unitary/phase action is locally free at
    F; equals the number of orthogonal blocks minus one for block frames.
    """
    M = _stabilizer_matrix(F)
    return M.shape[1] - numerical_rank(M)


def stabilizer_basis(F: Frame, tol: float = RANK_TOL):
    """A basis of StabilizerElement solutions (empty when the stabilizer is
    trivial), from the numerical null space of the assembled system."""
    M = _stabilizer_matrix(F)
    _, s, vt = np.linalg.svd(M)
    cutoff = tol * (s[0] if s.size else 0.0)
    null = vt[np.sum(s > cutoff) :]
    d, n = F.d, F.N
    basis = _skew_hermitian_basis(d)
    out = []
    for vec in null:
        xi = np.zeros((d, d), dtype=np.complex128)
        for coef, B in zip(vec[: d * d], basis):
            xi += coef * B
        theta = np.zeros(n)
        theta[: n - 1] = vec[d * d :]
        out.append(StabilizerElement(xi=xi, theta=theta))
    return out


def momentum_jacobian_rank(F: Frame) -> int:
    """Rank of the differential X -> (-FX* - XF*, (2 Re<f_j, x_j>)_{j<N}).

    The map goes from 2dN real dimensions onto at most d^2 + N - 1; F is a
    regular point of the combined norms/frame-operator map exactly when the
    rank is full, and the deficiency equals stabilizer_dimension(F).
    """
    d, n = F.d, F.N
    E = F.entries
    cols = []
    for a in range(d):
        for b in range(n):
            for unit in (1.0, 1j):
                X = np.zeros((d, n), dtype=np.complex128)
                X[a, b] = unit
                H = -E @ X.conj().T - X @ E.conj().T
                row = [H[j, j].real for j in range(d)]
                for j in range(d):
                    for k in range(j + 1, d):
                        row.extend([H[j, k].real, H[j, k].imag])
                for c in range(n - 1):
                    row.append(2.0 * np.vdot(E[:, c], X[:, c]).real)
                cols.append(row)
    return numerical_rank(np.array(cols).T)


def _normalize_partition(F: Frame, partition, tol: float) -> OdfPartition:
    if isinstance(partition, OdfPartition):
        parts = partition.parts
    else:
        parts = tuple(tuple(sorted(int(i) for i in p)) for p in partition)
        parts = tuple(sorted(parts))
    flat = [i for p in parts for i in p]
    if sorted(flat) != list(range(1, F.N + 1)):
        raise InvalidPartitionError(
            f"parts must exactly cover 1..{F.N}, got {parts}"
        )
    if any(len(p) == 0 for p in parts) or len(parts) < 2:
        raise InvalidPartitionError("need at least two nonempty parts")
    # cross-part orthogonality, relative gate
    norms = np.linalg.norm(F.entries, axis=0)
    for ai in range(len(parts)):
        for bi in range(ai + 1, len(parts)):
            for i in parts[ai]:
                for j in parts[bi]:
                    bound = tol * norms[i - 1] * norms[j - 1]
                    if abs(np.vdot(F.entries[:, i - 1], F.entries[:, j - 1])) > bound:
                        raise InvalidPartitionError(
                            f"columns {i} and {j} of different parts are not orthogonal"
                        )
    dims = tuple(numerical_rank(F.entries[:, [i - 1 for i in p]]) for p in parts)
    if sum(dims) != F.d:
        raise InvalidPartitionError(
            f"part subspace dims {dims} do not sum to d={F.d}"
        )
    return OdfPartition(parts=parts, subspace_dims=dims)


def _block_rotation(F: Frame, P: OdfPartition) -> np.ndarray:
    """Unitary Q whose conjugate-transpose maps each part's span onto its own
    coordinate slice (part order), via block-projector eigenvectors."""
    blocks = []
    for part, dim in zip(P.parts, P.subspace_dims):
        B = F.entries[:, [i - 1 for i in part]]
        _, vecs = hermitian_eig(B @ B.conj().T)
        blocks.append(vecs[:, :dim])
    return np.hstack(blocks)


def cone_membership(F: Frame, partition, X, tol: float = 1e-8) -> bool:
    """Is the tangent direction X in the singular cone of F at `partition`?

    Membership requires the linear equations FX* = 0 and <f_j, x_j> = 0 for
    j = 1..N-1, plus, per part k, the quadratic balance: the mass its
    columns send into the other parts' subspaces equals the mass the other
    parts' columns send into its subspace.  All comparisons are relative to
    the scales of F and X.

    Raises InvalidPartitionError when the partition does not
    orthodecompose F.
    """
    P = _normalize_partition(F, partition, tol)
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (F.d, F.N):
        raise ValueError(f"tangent matrix must have shape {(F.d, F.N)}, got {X.shape}")
    xnorm = float(np.linalg.norm(X))
    lin_scale = max(1.0, float(np.linalg.norm(F.entries, 2)) * xnorm)
    if np.max(np.abs(F.entries @ X.conj().T)) > tol * lin_scale:
        return False
    for c in range(F.N - 1):
        if abs(np.vdot(F.entries[:, c], X[:, c])) > tol * lin_scale:
            return False
    Q = _block_rotation(F, P)
    Xb = Q.conj().T @ X
    # mass[k][m]: squared mass of part-k columns inside part-m coordinates
    slices, row0 = [], 0
    for dim in P.subspace_dims:
        slices.append(slice(row0, row0 + dim))
        row0 += dim
    mass = np.zeros((P.n_parts, P.n_parts))
    for k, part in enumerate(P.parts):
        cols = [i - 1 for i in part]
        for m, sl in enumerate(slices):
            mass[k, m] = float(np.sum(np.abs(Xb[sl, :][:, cols]) ** 2))
    quad_scale = max(1.0, xnorm**2)
    for k in range(P.n_parts):
        balance = sum(mass[k, m] - mass[m, k] for m in range(P.n_parts) if m != k)
        if abs(balance) > tol * quad_scale:
            return False
    return True
