"""Circle and torus actions on frames driven by partial-sum eigenvalues.

Each index pair (k, j) with 1 <= k <= N and 1 <= j <= min(k, d) names one
circle action: rotate the first k frame vectors by

    W(t) = I + (exp(it) - 1) u u*

where u is the j-th descending eigenvector of the partial frame operator
S_k = sum_{i<=k} f_i f_i*.  The action is well defined only while the
underlying eigenvalue is isolated; at ties it degenerates and the functions
here refuse to act.  The eigenvalue itself is the conserved quantity of the
rotation, and :func:`verify_momentum_identity` checks the Hamiltonian
relation between its derivative and the symplectic pairing numerically.
"""
from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np

from .frame_core import (
    Frame,
    FrameError,
    hermitian_eig,
    partial_frame_operator,
    symplectic_pairing,
)

__all__ = [
    "GAP_TOL",
    "ActionIndex",
    "DegenerateActionError",
    "circle_action",
    "torus_action",
    "momentum_value",
    "infinitesimal_field",
    "verify_momentum_identity",
]

#: Minimum gap to adjacent eigenvalues of S_k for the action to be defined.
GAP_TOL = 1e-8


class DegenerateActionError(FrameError):
    """The indexed eigenvalue of S_k is not isolated, so the circle action
    degenerates (the eigenvector, hence the rotation, is not well defined)."""


class ActionIndex(NamedTuple):
    k: int
    j: int


def _check_index(F: Frame, idx) -> ActionIndex:
    try:
        k, j = idx
    except (TypeError, ValueError):
        raise ValueError(f"action index must be a (k, j) pair, got {idx!r}") from None
    k, j = int(k), int(j)
    if not 1 <= k <= F.N:
        raise ValueError(f"k={k} out of range 1..{F.N}")
    if not 1 <= j <= min(k, F.d):
        raise ValueError(f"j={j} out of range 1..{min(k, F.d)} for k={k}")
    return ActionIndex(k, j)


def _isolated_eigvector(F: Frame, idx: ActionIndex):
    """Eigenvalue/eigenvector pair for (k, j), gated on isolation.

    The gap is measured against the adjacent eigenvalues of the full d x d
    operator S_k (including the implied zeros when k < d), because that is
    the space where the eigenvector lives.
    """
    k, j = idx
    w, v = hermitian_eig(partial_frame_operator(F, k))
    gap = np.inf
    if j - 2 >= 0:
        gap = min(gap, float(w[j - 2] - w[j - 1]))
    if j < F.d:
        gap = min(gap, float(w[j - 1] - w[j]))
    if gap <= GAP_TOL:
        raise DegenerateActionError(
            f"degenerate action at (k={k}, j={j}): "
            f"eigenvalue gap {gap:.3e} <= {GAP_TOL:.0e}"
        )
    return float(w[j - 1]), v[:, j - 1]


def circle_action(F: Frame, idx, t: float) -> Frame:
    """Rotate the first k frame vectors by I + (e^{it} - 1) u u*.

    Parameters
    ----------
    F : Frame
    idx : (k, j) pair
        Which partial-sum eigenvalue drives the rotation.
    t : real angle

    Returns
    -------
    Frame with columns 1..k transformed and columns k+1..N untouched.
    Squared norms, the frame operator, and the whole eigenstep table are
    preserved (up to roundoff).

    Raises
    ------
    DegenerateActionError
        When the indexed eigenvalue is within GAP_TOL of a neighbor.
    """
    idx = _check_index(F, idx)
    _, u = _isolated_eigvector(F, idx)
    t = float(t)
    if t == 0.0:
        return F
    k = idx.k
    W = np.eye(F.d, dtype=np.complex128) + (np.exp(1j * t) - 1.0) * np.outer(
        u, u.conj()
    )
    G = np.array(F.entries, dtype=np.complex128)
    G[:, :k] = W @ G[:, :k]
    return Frame(G)


def torus_action(F: Frame, pack: Mapping) -> Frame:
    """Apply several circle actions, one per (k, j) index in `pack`.

    `pack` maps (k, j) pairs to angles.  Application order is ascending in
    (k, j); the actions commute, so the order is a convention rather than a
    semantic choice.  An empty pack returns F unchanged.
    """
    normalized: dict[ActionIndex, float] = {}
    for raw, t in pack.items():
        idx = _check_index(F, raw)
        if idx in normalized:
            raise ValueError(f"duplicate action index {tuple(idx)}")
        normalized[idx] = float(t)
    out = F
    for idx in sorted(normalized):
        out = circle_action(out, idx, normalized[idx])
    return out


def momentum_value(F: Frame, idx) -> float:
    """The conserved quantity of the (k, j) circle action: the j-th
    descending eigenvalue of S_k.  Defined for every frame (no gap gate)."""
    idx = _check_index(F, idx)
    w = np.linalg.eigvalsh(partial_frame_operator(F, idx.k))
    return float(w[F.d - idx.j])


def infinitesimal_field(F: Frame, idx, s: float) -> np.ndarray:
    """Tangent matrix of the circle action at F, scaled by speed s.

    Returns the d x N matrix  i s u u* [f_1 | ... | f_k | 0 | ... | 0],
    the derivative at t = 0 of t -> circle_action(F, idx, s t).

    Raises DegenerateActionError at non-isolated eigenvalues.
    """
    idx = _check_index(F, idx)
    _, u = _isolated_eigvector(F, idx)
    X = np.zeros((F.d, F.N), dtype=np.complex128)
    X[:, : idx.k] = (1j * float(s)) * (np.outer(u, u.conj()) @ F.entries[:, : idx.k])
    return X


def verify_momentum_identity(F: Frame, X, idx, s: float, h: float = 1e-5) -> float:
    """Residual of the Hamiltonian identity for one circle action.

    The conserved quantity mu_{k,j} generates the action: for any tangent
    direction X,

        (s / 2) * D mu_{k,j}(F)[X]  =  pairing(X, field(F, idx, s))

    where the left side uses the s t / 2 pairing normalization on the circle's
    dual and the right side is :func:`symplectic_pairing` against the
    infinitesimal field.  The derivative is approximated by the central
    difference of momentum_value along F + eps X with step h; the absolute
    difference of the two sides is returned.

    Raises DegenerateActionError when the eigenvalue fails the isolation
    gate anywhere on the probe path {F - hX, F, F + hX}.
    """
    idx = _check_index(F, idx)
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (F.d, F.N):
        raise ValueError(f"tangent matrix must have shape {(F.d, F.N)}, got {X.shape}")
    h = float(h)
    if h <= 0.0:
        raise ValueError("step h must be positive")
    plus = Frame(F.entries + h * X)
    minus = Frame(F.entries - h * X)
    for probe in (F, plus, minus):
        _isolated_eigvector(probe, idx)  # degeneracy gate along the path
    diff = (momentum_value(plus, idx) - momentum_value(minus, idx)) / (2.0 * h)
    lhs = (float(s) / 2.0) * diff
    rhs = symplectic_pairing(X, infinitesimal_field(F, idx, s))
    return abs(lhs - rhs)
