"""Small dense two-phase simplex solver.

Solves   maximize c . y   subject to   G y <= h,   y free,
which is all the linear programming this package needs (max-min-slack interior
points and implicit-equality probes on eigenstep polytopes).  Problem sizes are
tiny (tens of rows), so the implementation favors robustness over speed:
free variables are split into positive parts, artificial variables give a
guaranteed feasible start, and Bland's rule prevents cycling.
"""
from __future__ import annotations

import numpy as np

__all__ = ["LpResult", "solve_lp_max", "max_min_slack"]

_PIVOT_TOL = 1e-9


class LpResult:
    __slots__ = ("status", "y", "value")

    def __init__(self, status: str, y=None, value: float = np.nan):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.y = y
        self.value = value

    def __repr__(self):
        return f"LpResult(status={self.status!r}, value={self.value})"


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and abs(T[i, col]) > 0.0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def _run_simplex(T: np.ndarray, basis: np.ndarray, cost: np.ndarray, max_iter: int) -> str:
    """Maximize cost over the canonical tableau in place.  Bland's rule throughout."""
    m = T.shape[0]
    for _ in range(max_iter):
        reduced = cost - cost[basis] @ T[:, :-1]
        entering = -1
        for j in range(reduced.size):
            if reduced[j] > _PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        leaving = -1
        best = np.inf
        for i in range(m):
            a = T[i, entering]
            if a > _PIVOT_TOL:
                ratio = T[i, -1] / a
                if ratio < best - _PIVOT_TOL or (
                    abs(ratio - best) <= _PIVOT_TOL
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return "unbounded"
        _pivot(T, basis, leaving, entering)
    raise RuntimeError("simplex failed to converge (iteration cap hit)")


def solve_lp_max(c, G, h, max_iter: int = 20000) -> LpResult:
    """Maximize c . y subject to G y <= h with y unrestricted in sign.

    Returns an LpResult whose status is "optimal" (y and value filled in),
    "infeasible", or "unbounded".
    """
    c = np.asarray(c, dtype=float)
    G = np.atleast_2d(np.asarray(G, dtype=float))
    h = np.asarray(h, dtype=float)
    n = c.size
    if G.size == 0:
        G = G.reshape(0, n)
    m = G.shape[0]
    if G.shape[1] != n or h.size != m:
        raise ValueError("inconsistent LP dimensions")
    if m == 0:
        if np.all(np.abs(c) <= _PIVOT_TOL):
            return LpResult("optimal", np.zeros(n), 0.0)
        return LpResult("unbounded")

    # Split y = u - v with u, v >= 0 and add one slack per row.
    A = np.hstack([G, -G, np.eye(m)])
    b = h.astype(float).copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    art_rows = np.nonzero(flip)[0]
    n_core = A.shape[1]
    if art_rows.size:
        art_cols = np.zeros((m, art_rows.size))
        for j, i in enumerate(art_rows):
            art_cols[i, j] = 1.0
        A = np.hstack([A, art_cols])

    T = np.hstack([A, b[:, None]])
    basis = np.empty(m, dtype=int)
    art_set = set()
    next_art = n_core
    for i in range(m):
        if flip[i]:
            basis[i] = next_art
            art_set.add(next_art)
            next_art += 1
        else:
            basis[i] = 2 * n + i  # the slack column

    if art_set:
        cost1 = np.zeros(T.shape[1] - 1)
        for j in art_set:
            cost1[j] = -1.0
        status = _run_simplex(T, basis, cost1, max_iter)
        if status != "optimal":
            raise RuntimeError("phase-1 simplex cannot be unbounded")
        phase1 = cost1[basis] @ T[:, -1]
        if phase1 < -1e-7 * max(1.0, np.max(np.abs(b))):
            return LpResult("infeasible")
        # Pivot any leftover basic artificials out (they sit at level ~0),
        # dropping rows that turn out to be redundant.
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] in art_set:
                row = T[i, :n_core]
                cols = np.nonzero(np.abs(row) > _PIVOT_TOL)[0]
                if cols.size:
                    _pivot(T, basis, i, int(cols[0]))
                else:
                    keep[i] = False
        if not np.all(keep):
            T = T[keep]
            basis = basis[keep]
            m = T.shape[0]
        T = np.hstack([T[:, :n_core], T[:, -1:]])

    cost2 = np.zeros(n_core)
    cost2[:n] = c
    cost2[n : 2 * n] = -c
    status = _run_simplex(T, basis, cost2, max_iter)
    if status == "unbounded":
        return LpResult("unbounded")
    values = np.zeros(n_core)
    values[basis] = T[:, -1]
    y = values[:n] - values[n : 2 * n]
    return LpResult("optimal", y, float(c @ y))


def max_min_slack(A, b) -> LpResult:
    """Maximize the minimum slack of A x <= b over x.

    Solves max s subject to A x + s <= b.  The returned y is (x, s): the point
    and its worst-case slack.  A positive optimum certifies interior; a
    near-zero optimum flags a degenerate (lower-dimensional) feasible set; an
    infeasible status means the system has no solution at all.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    G = np.hstack([A, np.ones((m, 1))])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    return solve_lp_max(c, G, h=b)
