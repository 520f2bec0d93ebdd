"""Eigenstep tables and the polytope they fill out.

The k-th partial frame operator S_k of a frame F has a descending spectrum
mu_{k,1} >= ... >= mu_{k,min(k,d)} (>= 0, with d - k implicit zeros when
k < d).  Stacking these rows for k = 1..N gives the eigenstep table of F.  A
triangular array of reals is a table of some frame with squared column norms r
and final spectrum lambda exactly when every row sums to the running total of
r, consecutive rows interlace, and the top row equals lambda.  For fixed
(lambda, r) the valid tables form a convex polytope; this module builds an
explicit affine chart of it (free coordinates + inequalities), finds interior
points by maximizing the minimum slack, and samples it uniformly with
hit-and-run.

Repeated values in lambda force a triangle of entries in the top rows to equal
the repeated value; those entries are fixed up front, and one entry per
remaining row is eliminated through the row-sum equality, so the chart's free
coordinates match the dimension formula for strongly admissible data.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ._simplex import max_min_slack, solve_lp_max
from .admissibility import check_admissible
from .frame_core import (
    Frame,
    FrameError,
    NormVector,
    Spectrum,
    partial_frame_operator,
)

__all__ = [
    "INTERIOR_SLACK",
    "EigenstepTable",
    "EmptyPolytopeError",
    "NoInteriorError",
    "NotAdmissibleError",
    "PolytopeSystem",
    "ValidationReport",
    "compute_eigensteps",
    "face_restriction",
    "forced_entries",
    "hit_and_run",
    "implicit_equality_mask",
    "interior_point",
    "polytope_system",
    "sample_tables",
    "table_from_csv",
    "table_to_csv",
    "validate_eigensteps",
]

# A point is interior only if every inequality has at least this much slack.
# Below this margin the synthesis formulas downstream start to degenerate.
INTERIOR_SLACK = 1e-10

_COEF_EPS = 1e-12


class NotAdmissibleError(FrameError):
    """The requested (lambda, r) fails the majorization precondition."""


class EmptyPolytopeError(FrameError):
    """The constraint system has no solution at all."""


class NoInteriorError(FrameError):
    """The polytope is nonempty but has no interior point (it is degenerate)."""


# --------------------------------------------------------------------------- #
# the table type
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, init=False)
class EigenstepTable:
    """Triangular array mu_{k,j}, k = 1..N, j = 1..min(k, d).

    Row k is stored as a tuple of length min(k, d); structural shape is
    enforced here, while the numeric constraints (interlacing, row sums,
    nonnegativity) are the business of validate_eigensteps.
    """

    rows: tuple[tuple[float, ...], ...]

    def __init__(self, rows):
        rows = tuple(tuple(float(v) for v in row) for row in rows)
        if not rows:
            raise ValueError("table needs at least one row")
        d = len(rows[-1])
        n = len(rows)
        for k, row in enumerate(rows, start=1):
            if len(row) != min(k, d):
                raise ValueError(
                    f"row {k} has {len(row)} entries, expected {min(k, d)}"
                )
        object.__setattr__(self, "rows", rows)

    @property
    def N(self) -> int:
        return len(self.rows)

    @property
    def d(self) -> int:
        return len(self.rows[-1])

    def row(self, k: int) -> tuple[float, ...]:
        """Row k, 1-based."""
        if not 1 <= k <= self.N:
            raise IndexError(f"row index {k} out of range 1..{self.N}")
        return self.rows[k - 1]

    def entry(self, k: int, j: int) -> float:
        """mu_{k,j}, both indices 1-based."""
        row = self.row(k)
        if not 1 <= j <= len(row):
            raise IndexError(f"entry index ({k},{j}) out of range")
        return row[j - 1]

    def __repr__(self) -> str:
        return f"EigenstepTable(d={self.d}, N={self.N})"


def compute_eigensteps(F: Frame) -> EigenstepTable:
    """Eigenstep table of a frame: row k = descending spectrum of S_k."""
    rows = []
    for k in range(1, F.N + 1):
        vals = np.linalg.eigvalsh(partial_frame_operator(F, k))[::-1]
        rows.append(tuple(vals[: min(k, F.d)]))
    return EigenstepTable(rows)


# --------------------------------------------------------------------------- #
# validation
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_eigensteps(T: EigenstepTable, lam, r_ordered, tol: float = 1e-8) -> ValidationReport:
    """Check a table against a spectrum and squared norms in column order.

    r_ordered follows the frame's actual column order (row k must sum to
    r_1 + ... + r_k for the columns as given); it is *not* resorted here.
    Never raises: every broken constraint is listed in the report with its
    slack. Checks: top row equals lambda, row sums, interlacing between
    consecutive rows (including nonnegativity via the implicit zeros of the
    shorter row), all within tol relative to max(1, lambda_1).
    """
    lam = lam if isinstance(lam, Spectrum) else Spectrum(lam)
    r = tuple(float(v) for v in np.asarray(r_ordered, dtype=float).ravel())
    bad: list[str] = []
    if T.d != lam.d:
        bad.append(f"table has d={T.d}, spectrum has d={lam.d}")
    if T.N != len(r):
        bad.append(f"table has N={T.N}, norms have N={len(r)}")
    if bad:
        return ValidationReport(False, tuple(bad))

    scale = max(1.0, abs(lam.values[0]))
    cut = tol * scale

    for j in range(1, T.d + 1):
        diff = T.entry(T.N, j) - lam.values[j - 1]
        if abs(diff) > cut:
            bad.append(f"top row: mu[{T.N},{j}]={T.entry(T.N, j)!r} != lambda_{j}={lam.values[j - 1]!r} (diff {diff:.3e})")

    running = 0.0
    for k in range(1, T.N + 1):
        running += r[k - 1]
        diff = sum(T.row(k)) - running
        if abs(diff) > cut:
            bad.append(f"row {k} sums to {sum(T.row(k))!r}, expected {running!r} (diff {diff:.3e})")

    for k in range(1, T.N + 1):
        cur = T.row(k)
        prev = T.row(k - 1) if k > 1 else ()
        for j in range(1, len(cur) + 1):
            low = prev[j - 1] if j <= len(prev) else 0.0
            gap = cur[j - 1] - low
            if gap < -cut:
                bad.append(f"interlacing: mu[{k},{j}]={cur[j - 1]!r} < mu[{k - 1},{j}]={low!r} (gap {gap:.3e})")
        for j in range(1, len(prev) + 1):
            if j + 1 <= len(cur):
                gap = prev[j - 1] - cur[j]
                if gap < -cut:
                    bad.append(f"interlacing: mu[{k - 1},{j}]={prev[j - 1]!r} < mu[{k},{j + 1}]={cur[j]!r} (gap {gap:.3e})")

    return ValidationReport(not bad, tuple(bad))


# --------------------------------------------------------------------------- #
# the polytope chart
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class PolytopeSystem:
    """Affine chart of the eigenstep polytope for fixed (lambda, r).

    Every table entry (k, j) is an affine function const + coef . x of the
    free coordinate vector x; `free` lists which entries the coordinates are.
    The polytope itself is {x : A x <= b}; `labels[i]` says which interlacing
    relation row i encodes.
    """

    lam: tuple[float, ...]
    r: tuple[float, ...]
    free: tuple[tuple[int, int], ...]
    A: np.ndarray
    b: np.ndarray
    labels: tuple[str, ...]
    _const: dict
    _coef: dict

    @property
    def d(self) -> int:
        return len(self.lam)

    @property
    def N(self) -> int:
        return len(self.r)

    @property
    def dimension(self) -> int:
        return len(self.free)

    def entry_affine(self, k: int, j: int) -> tuple[float, np.ndarray]:
        """(const, coef) with mu_{k,j} = const + coef . x."""
        return self._const[(k, j)], self._coef[(k, j)]

    def table_from_point(self, x) -> EigenstepTable:
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.dimension:
            raise ValueError(f"point has {x.size} coordinates, chart has {self.dimension}")
        rows = []
        for k in range(1, self.N + 1):
            rows.append(
                tuple(
                    self._const[(k, j)] + float(self._coef[(k, j)] @ x)
                    for j in range(1, min(k, self.d) + 1)
                )
            )
        return EigenstepTable(rows)

    def point_from_table(self, T: EigenstepTable) -> np.ndarray:
        if (T.d, T.N) != (self.d, self.N):
            raise ValueError("table shape does not match this chart")
        return np.array([T.entry(k, j) for (k, j) in self.free], dtype=float)

    def residuals(self, x) -> np.ndarray:
        """Slack b - A x of every inequality (nonnegative inside)."""
        x = np.asarray(x, dtype=float).ravel()
        if self.A.shape[0] == 0:
            return np.zeros(0)
        return self.b - self.A @ x

    def contains(self, x, tol: float = 1e-9) -> bool:
        res = self.residuals(x)
        return bool(res.size == 0 or res.min() >= -tol * max(1.0, abs(self.lam[0])))


def _lambda_runs(lam: Spectrum):
    """Maximal constant runs of lambda as (start, end) 1-based inclusive."""
    runs = []
    a = 1
    for m in lam.multiplicities:
        runs.append((a, a + m - 1))
        a += m
    return runs


def forced_entries(lam, n: int) -> dict[tuple[int, int], float]:
    """Entries pinned to a value in *every* valid table for (lambda, any r).

    The top row equals lambda, and each maximal repeated run
    lambda_a = ... = lambda_b forces the upside-down triangle
    mu_{n-t, j} = lambda_a for t = 1..(b-a), j = a..(b-t): interlacing traps
    those entries between two copies of the repeated value.
    """
    lam = lam if isinstance(lam, Spectrum) else Spectrum(lam)
    d = lam.d
    forced: dict[tuple[int, int], float] = {}
    for j in range(1, d + 1):
        forced[(n, j)] = lam.values[j - 1]
    for a, b in _lambda_runs(lam):
        value = lam.values[a - 1]
        for t in range(1, b - a + 1):
            k = n - t
            if k < 1:
                break
            for j in range(a, b - t + 1):
                if j <= min(k, d):
                    forced[(k, j)] = value
    return forced


def polytope_system(lam, r) -> PolytopeSystem:
    """Build the affine chart of the eigenstep polytope for (lambda, r).

    Requires r to be lambda-admissible (the polytope is otherwise empty).
    Fixed entries: the top row (= lambda) and, under each maximal repeated
    run lambda_a = ... = lambda_b, the upside-down triangle mu_{N-t, j} for
    t = 1..(b-a) and j = a..(b-t), which interlacing pins to the repeated
    value.  In every other row the non-fixed entry with the largest j is
    eliminated through the row-sum equality; all remaining entries are the
    free coordinates.  Inequalities are all interlacing relations (with
    implicit zeros below the triangle's staircase) expressed in the chart.
    """
    lam = lam if isinstance(lam, Spectrum) else Spectrum(lam)
    r = r if isinstance(r, NormVector) else NormVector(r)
    verdict = check_admissible(lam, r)
    if not verdict.admissible:
        raise NotAdmissibleError(
            f"r is not lambda-admissible (failing_index={verdict.failing_index}, "
            f"sum_mismatch={verdict.sum_mismatch}); the polytope is empty"
        )
    d, n = lam.d, r.N
    scale = max(1.0, abs(lam.values[0]))
    forced = forced_entries(lam, n)

    # one pass to decide the role of every entry
    free: list[tuple[int, int]] = []
    eliminated: dict[int, int] = {}  # row -> eliminated j
    for k in range(1, n):
        open_js = [j for j in range(1, min(k, d) + 1) if (k, j) not in forced]
        if open_js:
            eliminated[k] = open_js[-1]
            free.extend((k, j) for j in open_js[:-1])

    dim = len(free)
    index_of = {kj: i for i, kj in enumerate(free)}

    const: dict[tuple[int, int], float] = {}
    coef: dict[tuple[int, int], np.ndarray] = {}
    cum_r = np.cumsum(r.values)
    infeasible_marks: list[str] = []
    for k in range(1, n + 1):
        width = min(k, d)
        for j in range(1, width + 1):
            if (k, j) in forced:
                const[(k, j)] = forced[(k, j)]
                coef[(k, j)] = np.zeros(dim)
            elif (k, j) in index_of:
                const[(k, j)] = 0.0
                c = np.zeros(dim)
                c[index_of[(k, j)]] = 1.0
                coef[(k, j)] = c
        if k < n:
            je = eliminated.get(k)
            fixed_sum = sum(forced.get((k, j), 0.0) for j in range(1, width + 1) if (k, j) in forced)
            if je is None:
                # fully forced row: the row-sum equality must already hold
                if abs(fixed_sum - cum_r[k - 1]) > 1e-9 * scale:
                    infeasible_marks.append(
                        f"forced row {k} sums to {fixed_sum!r}, needs {cum_r[k - 1]!r}"
                    )
            else:
                c = np.zeros(dim)
                for j in range(1, width + 1):
                    if (k, j) in index_of:
                        c[index_of[(k, j)]] = -1.0
                const[(k, je)] = float(cum_r[k - 1] - fixed_sum)
                coef[(k, je)] = c

    rows_a: list[np.ndarray] = []
    rows_b: list[float] = []
    labels: list[str] = []

    def add(le_coef, le_const, label):
        # constraint: le_coef . x <= le_const
        if np.max(np.abs(le_coef), initial=0.0) < _COEF_EPS:
            if le_const < -1e-9 * scale:
                rows_a.append(np.zeros(dim))
                rows_b.append(float(le_const))
                labels.append(label + " (unsatisfiable)")
            return
        rows_a.append(np.asarray(le_coef, dtype=float))
        rows_b.append(float(le_const))
        labels.append(label)

    for k in range(1, n + 1):
        width = min(k, d)
        prev_width = min(k - 1, d) if k > 1 else 0
        for j in range(1, width + 1):
            if k > 1 and j <= prev_width:
                c_lo, v_lo = coef[(k - 1, j)], const[(k - 1, j)]
                lo_name = f"mu[{k - 1},{j}]"
            else:
                c_lo, v_lo = np.zeros(dim), 0.0
                lo_name = "0"
            add(c_lo - coef[(k, j)], const[(k, j)] - v_lo, f"mu[{k},{j}] >= {lo_name}")
        for j in range(1, prev_width + 1):
            if j + 1 <= width:
                add(
                    coef[(k, j + 1)] - coef[(k - 1, j)],
                    const[(k - 1, j)] - const[(k, j + 1)],
                    f"mu[{k - 1},{j}] >= mu[{k},{j + 1}]",
                )

    for mark in infeasible_marks:
        rows_a.append(np.zeros(dim))
        rows_b.append(-1.0)
        labels.append(mark)

    A = np.array(rows_a, dtype=float).reshape(len(rows_a), dim)
    b = np.array(rows_b, dtype=float)
    return PolytopeSystem(
        lam=lam.values,
        r=r.values,
        free=tuple(free),
        A=A,
        b=b,
        labels=tuple(labels),
        _const=const,
        _coef=coef,
    )


# --------------------------------------------------------------------------- #
# interior points and sampling
# --------------------------------------------------------------------------- #


def interior_point(P: PolytopeSystem) -> np.ndarray:
    """Free-coordinate vector maximizing the minimum inequality slack.

    Raises NoInteriorError when the polytope is nonempty but degenerate
    (zero-dimensional chart, or max-min slack below the interior margin) and
    EmptyPolytopeError when the constraints are unsatisfiable.
    """
    scale = max(1.0, abs(P.lam[0]))
    if P.dimension == 0:
        worst = float(P.b.min()) if P.b.size else 0.0
        if worst < -1e-9 * scale:
            raise EmptyPolytopeError(f"empty polytope ({P.labels[int(np.argmin(P.b))]})")
        raise NoInteriorError("no interior: the polytope is a single point (0 free coordinates)")
    res = max_min_slack(P.A, P.b)
    if res.status == "infeasible":
        raise EmptyPolytopeError("empty polytope (slack program infeasible)")
    if res.status == "unbounded":
        raise RuntimeError("slack program unbounded; eigenstep polytopes are bounded")
    slack = res.value
    if slack > INTERIOR_SLACK:
        return res.y[:-1]
    if slack >= -INTERIOR_SLACK:
        raise NoInteriorError(
            f"no interior: an equality collapses the polytope (max-min slack {slack:.3e})"
        )
    raise EmptyPolytopeError(f"empty polytope (max-min slack {slack:.3e})")


def _chord_steps(A, b, x, rng, steps, collect_every, out):
    """Run hit-and-run chords in place; append every collect_every-th state to out."""
    dim = x.size
    taken = 0
    while taken < steps:
        u = rng.standard_normal(dim)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            continue
        u /= nu
        au = A @ u if A.shape[0] else np.zeros(0)
        slack = b - A @ x if A.shape[0] else np.zeros(0)
        lo, hi = -np.inf, np.inf
        pos = au > 1e-13
        neg = au < -1e-13
        if np.any(pos):
            hi = float(np.min(slack[pos] / au[pos]))
        if np.any(neg):
            lo = float(np.max(slack[neg] / au[neg]))
        if not np.isfinite(lo) or not np.isfinite(hi):
            raise RuntimeError("unbounded chord; eigenstep polytopes are bounded")
        if hi < lo:  # numerically pinched; stay put
            lo = hi = 0.0
        x = x + rng.uniform(lo, hi) * u
        taken += 1
        if taken % collect_every == 0:
            out.append(x.copy())
    return x


def hit_and_run(
    P: PolytopeSystem,
    start,
    count: int,
    burn_in: int = 1000,
    thin: int | None = None,
    seed: int = 0,
) -> list[EigenstepTable]:
    """Uniform samples of the eigenstep polytope as tables.

    Standard hit-and-run: from the current point pick a uniform direction,
    intersect the line with the polytope, jump to a uniform point of the
    chord.  After burn_in steps, every thin-th state is emitted (thin
    defaults to 10 x dimension).  Deterministic for a given seed.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return []
    x0 = np.asarray(start, dtype=float).ravel()
    if x0.size != P.dimension:
        raise ValueError(f"start has {x0.size} coordinates, chart has {P.dimension}")
    if P.dimension == 0:
        if P.b.size and P.b.min() < 0.0:
            raise FrameError("start not strictly feasible (the polytope is empty)")
        return [P.table_from_point(x0) for _ in range(count)]
    res = P.residuals(x0)
    if res.size and res.min() <= 0.0:
        i = int(np.argmin(res))
        raise FrameError(
            f"start not strictly feasible: slack {res[i]:.3e} on {P.labels[i]}"
        )
    if thin is None:
        thin = 10 * P.dimension
    thin = max(1, int(thin))
    rng = np.random.default_rng(seed)
    states: list[np.ndarray] = []
    x = x0.copy()
    if burn_in > 0:
        x = _chord_steps(P.A, P.b, x, rng, burn_in, burn_in + 1, states)
        states.clear()
    _chord_steps(P.A, P.b, x, rng, count * thin, thin, states)
    return [P.table_from_point(s) for s in states]


# --------------------------------------------------------------------------- #
# faces: where the polytope has no interior
# --------------------------------------------------------------------------- #


def _implicit_mask(A: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    m = A.shape[0]
    mask = np.zeros(m, dtype=bool)
    for i in range(m):
        if np.max(np.abs(A[i]), initial=0.0) < _COEF_EPS:
            mask[i] = abs(b[i]) <= tol
            continue
        res = solve_lp_max(-A[i], A, b)
        if res.status == "infeasible":
            raise EmptyPolytopeError("empty polytope (equality probe infeasible)")
        if res.status == "unbounded":
            continue
        mask[i] = (b[i] + res.value) <= tol
    return mask


def implicit_equality_mask(P: PolytopeSystem, tol: float = INTERIOR_SLACK) -> np.ndarray:
    """Boolean mask of the inequalities that are tight on every feasible point.

    Row i is an implicit equality when max (b_i - a_i . x) over the polytope
    is <= tol.  One linear program per row.
    """
    return _implicit_mask(P.A, P.b, tol)


@dataclass(frozen=True, eq=False)
class FaceChart:
    """Affine chart of a face: x = origin + basis . z with A_red z <= b_red."""

    origin: np.ndarray
    basis: np.ndarray  # (dim_full, dim_face), orthonormal columns
    A_red: np.ndarray
    b_red: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def to_full(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float).ravel()
        return self.origin + self.basis @ z


def _face_of(A: np.ndarray, b: np.ndarray, scale: float, mask: np.ndarray) -> FaceChart:
    dim = A.shape[1]
    A_e, b_e = A[mask], b[mask]
    if A_e.size:
        nz = np.max(np.abs(A_e), axis=1) >= _COEF_EPS
        A_e, b_e = A_e[nz], b_e[nz]
    if A_e.shape[0] == 0:
        origin = np.zeros(dim)
        basis = np.eye(dim)
    else:
        origin, *_ = np.linalg.lstsq(A_e, b_e, rcond=None)
        if np.max(np.abs(A_e @ origin - b_e)) > 1e-8 * scale:
            raise EmptyPolytopeError("implicit equalities are inconsistent")
        _, s, vt = np.linalg.svd(A_e)
        rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
        basis = vt[rank:].T
    A_rest, b_rest = A[~mask], b[~mask]
    A_red = A_rest @ basis
    b_red = b_rest - A_rest @ origin
    if A_red.shape[0]:
        keep = np.max(np.abs(A_red), axis=1, initial=0.0) >= _COEF_EPS
        if np.any((~keep) & (b_red < -1e-9 * scale)):
            raise EmptyPolytopeError("face is empty (residual constraint unsatisfiable)")
        A_red, b_red = A_red[keep], b_red[keep]
    return FaceChart(origin=origin, basis=basis, A_red=A_red, b_red=b_red)


def face_restriction(P: PolytopeSystem, mask=None) -> FaceChart:
    """Restrict the chart to the face where the masked inequalities are equalities.

    Solves A_E x = b_E by least squares for an anchor point, takes an
    orthonormal null-space basis of A_E for the face directions, and rewrites
    the remaining inequalities in the reduced coordinates.
    """
    if mask is None:
        mask = implicit_equality_mask(P)
    return _face_of(P.A, P.b, max(1.0, abs(P.lam[0])), np.asarray(mask, dtype=bool))


def sample_tables(
    P: PolytopeSystem,
    count: int,
    seed: int = 0,
    burn_in: int = 1000,
    thin: int | None = None,
) -> list[EigenstepTable]:
    """Sample `count` tables from the polytope, degenerate cases included.

    With an interior point this is plain hit-and-run.  Without one, the
    implicit equalities are peeled off (convexity guarantees the remaining
    system has a relative interior, so the loop terminates) and the chords run
    inside the carrying face; a zero-dimensional face yields `count` copies of
    its single point.
    """
    if count == 0:
        return []
    try:
        x0 = interior_point(P)
        return hit_and_run(P, x0, count, burn_in=burn_in, thin=thin, seed=seed)
    except NoInteriorError:
        pass

    scale = max(1.0, abs(P.lam[0]))
    origin = np.zeros(P.dimension)
    basis = np.eye(P.dimension)
    A, b = P.A.copy(), P.b.copy()
    for _ in range(P.dimension + 1):
        if basis.shape[1] == 0:
            return [P.table_from_point(origin)] * count
        probe = max_min_slack(A, b)
        if probe.status != "optimal":
            raise RuntimeError(f"slack program {probe.status} on a face")
        if probe.value < -INTERIOR_SLACK:
            raise EmptyPolytopeError("face is empty")
        if probe.value > INTERIOR_SLACK:
            states: list[np.ndarray] = []
            rng = np.random.default_rng(seed)
            t = max(1, int(thin if thin is not None else 10 * basis.shape[1]))
            x = probe.y[:-1].copy()
            if burn_in > 0:
                x = _chord_steps(A, b, x, rng, burn_in, burn_in + 1, states)
                states.clear()
            _chord_steps(A, b, x, rng, count * t, t, states)
            return [P.table_from_point(origin + basis @ z) for z in states]
        chart = _face_of(A, b, scale, _implicit_mask(A, b, INTERIOR_SLACK))
        origin = origin + basis @ chart.origin
        basis = basis @ chart.basis
        A, b = chart.A_red, chart.b_red
    raise RuntimeError("face reduction failed to terminate")


# --------------------------------------------------------------------------- #
# CSV round trip
# --------------------------------------------------------------------------- #

_HEADER_RE = re.compile(r"^#\s*d=(\d+)\s+N=(\d+)\s*$")


def table_to_csv(T: EigenstepTable) -> str:
    """One row per k, comma-separated, with a '# d=<d> N=<N>' header line."""
    lines = [f"# d={T.d} N={T.N}"]
    for row in T.rows:
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def table_from_csv(text: str) -> EigenstepTable:
    """Inverse of table_to_csv (exact round trip via repr floats)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty eigenstep CSV")
    m = _HEADER_RE.match(lines[0].strip())
    if not m:
        raise ValueError(f"bad header line {lines[0]!r}, expected '# d=<d> N=<N>'")
    d, n = int(m.group(1)), int(m.group(2))
    rows = [tuple(float(tok) for tok in ln.split(",")) for ln in lines[1:]]
    if len(rows) != n:
        raise ValueError(f"header says N={n} but found {len(rows)} rows")
    T = EigenstepTable(rows)
    if T.d != d:
        raise ValueError(f"header says d={d} but last row has {T.d} entries")
    return T
