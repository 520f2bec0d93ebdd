"""Frame synthesis from eigenstep tables, and random-frame generation.

Given a valid eigenstep table, a frame realizing it is built one column at a
time: if S_k has eigenvalues a_1 >= ... (row k, padded with a single zero when
k < d) with eigenvectors u_j, and row k+1 prescribes the spectrum b of
S_k + f f*, then the mass of f on each eigendirection is forced to

    |c_j|^2 = - prod_i (a_j - b_i) / prod_{i != j} (a_j - a_i),

the rank-one interpolation identity (validated by the brute-force oracle in
tests/test_synthesis.py before this module was written).  Repeated a-values
are handled by grouping: the identity then yields the mass on each eigenspace,
and the canonical construction concentrates it on the group's leading
eigenvector.

Randomization is layered on top of the canonical construction: uniform
eigenstep tables from hit-and-run, torus angles at the free action indices,
a Haar-random left unitary, and independent column phases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admissibility import check_admissible
from .eigensteps import (
    EigenstepTable,
    forced_entries,
    hit_and_run,
    interior_point,
    polytope_system,
    sample_tables,
    validate_eigensteps,
)
from .frame_core import (
    EIG_GROUP_TOL,
    Frame,
    FrameError,
    NormVector,
    Spectrum,
    haar_unitary,
    hermitian_eig,
    norms_of,
    spectrum_of,
)

__all__ = [
    "DegenerateEigenstepsError",
    "InconsistentTableError",
    "InvalidWitnessError",
    "SynthesisOptions",
    "derive_seed",
    "frame_from_eigensteps",
    "random_frame",
    "rank_one_masses",
    "spark_deficient_witness",
]

# Strictness margin for interlacing in strict mode, and the clamp window for
# round-off-negative masses.
STRICT_GAP = 1e-10
MASS_CLAMP = 1e-10

_MODES = ("strict", "perturb", "boundary")


class DegenerateEigenstepsError(FrameError):
    """The table has ties, which strict-mode synthesis refuses."""


class InconsistentTableError(FrameError):
    """The table does not describe any frame (validation or mass failure)."""


class InvalidWitnessError(FrameError):
    """(I, J) is not a valid partition witness for (lambda, r)."""


@dataclass(frozen=True)
class SynthesisOptions:
    """Knobs for frame_from_eigensteps.

    mode: "strict" rejects tables with ties; "perturb" spreads within-row
    near-ties by <= 1e-9 first; "boundary" synthesizes tied tables directly
    through eigenspace grouping.  canonical=True takes every coefficient as
    the nonnegative square root; setting it False allows the two seeds to
    randomize coefficient phases and apply a Haar-random left unitary.
    """

    mode: str = "strict"
    canonical: bool = True
    phase_seed: int | None = None
    left_unitary_seed: int | None = None

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.canonical and (self.phase_seed is not None or self.left_unitary_seed is not None):
            raise ValueError("canonical synthesis forbids phase_seed/left_unitary_seed")


def derive_seed(root_seed: int, index: int) -> int:
    """Child seed for sample `index` of a batch rooted at `root_seed`.

    Splitmix-style: advance the 64-bit state by the golden-gamma multiple of
    the index, then apply the splitmix64 finalizer.  Documented here so batch
    results are reproducible across processes.
    """
    mask = (1 << 64) - 1
    z = (int(root_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return (z ^ (z >> 31)) & mask


# --------------------------------------------------------------------------- #
# the coefficient formula
# --------------------------------------------------------------------------- #


def _group_descending(vals, tol):
    """(value, multiplicity) groups of a descending list, leader-anchored."""
    groups: list[list[float]] = []
    for v in vals:
        if groups and abs(groups[-1][0] - v) <= tol * max(1.0, abs(groups[-1][0])):
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(g[0], len(g)) for g in groups]


def rank_one_masses(row_k, row_next, d: int, tol: float = EIG_GROUP_TOL):
    """Eigenspace masses forcing spectrum(S + ff*) = row_next given spectrum(S) = row_k.

    Returns (alphas, mults, starts, masses): the grouped active eigenvalues of
    S (row k padded with one zero when k < d), their multiplicities, the
    0-based slot where each group starts in descending eigenvector order, and
    the required |c|^2 mass per group.  Masses in [-1e-10, 0) are clamped to
    0; anything more negative raises InconsistentTableError.
    """
    row_k = tuple(float(v) for v in row_k)
    b_hat = [float(v) for v in row_next]
    a_hat = list(row_k) + ([0.0] if len(row_k) < len(b_hat) else [])
    if len(a_hat) != len(b_hat):
        raise ValueError("row lengths are incompatible")
    groups = _group_descending(a_hat, tol)
    scale = max(1.0, abs(b_hat[0]) if b_hat else 1.0)

    # remove m-1 nearest b-entries per group (they are the eigenvalues S keeps)
    b_rest = list(b_hat)
    for alpha, m in groups:
        for _ in range(m - 1):
            i = min(range(len(b_rest)), key=lambda t: abs(b_rest[t] - alpha))
            b_rest.pop(i)

    alphas = [g[0] for g in groups]
    masses = []
    for t, (alpha, _m) in enumerate(groups):
        num = -1.0  # num accumulates -prod(alpha - b)
        for bv in b_rest:
            num *= alpha - bv
        den = 1.0
        for s, (alpha_s, _) in enumerate(groups):
            if s != t:
                den *= alpha - alpha_s
        w = num / den
        if w < -MASS_CLAMP * scale:
            raise InconsistentTableError(
                f"negative mass {w:.3e} for eigenvalue {alpha!r}; table is not realizable"
            )
        masses.append(max(w, 0.0))
    starts = []
    pos = 0
    for _, m in groups:
        starts.append(pos)
        pos += m
    return alphas, [m for _, m in groups], starts, masses


def _strictness_violations(T: EigenstepTable, margin: float):
    """Non-forced interlacing relations that hold with gap <= margin.

    Ties between two entries that every valid table pins anyway (top row and
    repeated-lambda triangles) are not degeneracies — the polytope's interior
    still contains them — so they are exempt here.
    """
    forced = forced_entries(Spectrum(T.row(T.N)), T.N)
    out = []
    for k in range(1, T.N + 1):
        cur = T.row(k)
        prev = T.row(k - 1) if k > 1 else ()
        for j in range(1, len(cur) + 1):
            low = prev[j - 1] if j <= len(prev) else 0.0
            if (k, j) in forced and (k - 1, j) in forced:
                continue
            if cur[j - 1] - low <= margin:
                out.append(f"mu[{k},{j}] ~ mu[{k - 1},{j}] (gap {cur[j - 1] - low:.3e})")
        for j in range(1, len(prev) + 1):
            if j + 1 <= len(cur):
                if (k - 1, j) in forced and (k, j + 1) in forced:
                    continue
                if prev[j - 1] - cur[j] <= margin:
                    out.append(f"mu[{k - 1},{j}] ~ mu[{k},{j + 1}] (gap {prev[j - 1] - cur[j]:.3e})")
    return out


def _spread_row_ties(T: EigenstepTable, eps: float = 1e-9) -> EigenstepTable:
    """Separate non-forced within-row near-ties symmetrically, keeping row sums.

    Forced ties (repeated-lambda triangles) are left alone: they are exact in
    every valid table and the grouped mass formula absorbs them.
    """
    forced = forced_entries(Spectrum(T.row(T.N)), T.N)
    rows = []
    for k in range(1, T.N):
        row = list(T.row(k))
        i = 0
        while i < len(row):
            j = i
            while j + 1 < len(row) and row[i] - row[j + 1] <= 10 * STRICT_GAP:
                j += 1
            m = j - i + 1
            if m > 1 and not all((k, j0) in forced for j0 in range(i + 1, j + 2)):
                center = sum(row[i : j + 1]) / m
                for t in range(m):
                    row[i + t] = center + eps * ((m - 1) / 2.0 - t)
            i = j + 1
        rows.append(tuple(row))
    rows.append(T.row(T.N))
    return EigenstepTable(rows)


def frame_from_eigensteps(T: EigenstepTable, r_ordered, opts: SynthesisOptions | None = None) -> Frame:
    """Build a frame whose eigenstep table is T and whose squared column norms
    are r_ordered (in column order).

    Columns are produced left to right; each new column's eigenbasis masses
    come from rank_one_masses on consecutive table rows, and canonical mode
    places the nonnegative square root of each mass on the group's leading
    eigenvector.  The result reproduces T within 1e-8 and the norms within
    1e-10 (round-trip checked in the test suite, not here).
    """
    if opts is None:
        opts = SynthesisOptions()
    r = np.asarray(r_ordered, dtype=float).ravel()
    lam = Spectrum(T.row(T.N))
    report = validate_eigensteps(T, lam, r, tol=1e-8)
    if not report.ok:
        raise InconsistentTableError(
            "table fails validation: " + "; ".join(report.violations[:4])
        )
    if opts.mode == "strict":
        ties = _strictness_violations(T, STRICT_GAP)
        if ties:
            raise DegenerateEigenstepsError(
                "degenerate eigensteps (ties): " + "; ".join(ties[:4])
            )
    elif opts.mode == "perturb":
        T = _spread_row_ties(T)

    d, n = T.d, T.N
    phase_rng = (
        np.random.default_rng(opts.phase_seed) if opts.phase_seed is not None else None
    )
    cols = []
    S = np.zeros((d, d), dtype=complex)
    for k in range(n):
        row_k = T.row(k) if k >= 1 else ()
        row_next = T.row(k + 1)
        _, vecs = hermitian_eig(S)
        _alphas, _mults, starts, masses = rank_one_masses(row_k, row_next, d)
        f = np.zeros(d, dtype=complex)
        for start, w in zip(starts, masses):
            c = np.sqrt(w)
            if phase_rng is not None:
                c = c * np.exp(2j * np.pi * phase_rng.uniform())
            f += c * vecs[:, start]
        cols.append(f)
        S = S + np.outer(f, f.conj())
        S = (S + S.conj().T) / 2.0
    M = np.column_stack(cols)
    if opts.left_unitary_seed is not None:
        M = haar_unitary(d, np.random.default_rng(opts.left_unitary_seed)) @ M
    return Frame(M)


# --------------------------------------------------------------------------- #
# random frames
# --------------------------------------------------------------------------- #


def random_frame(lam, r, count: int, seed: int = 0) -> list[Frame]:
    """`count` random members of the frame space for strongly admissible (lambda, r).

    Per sample (all seeds derived from `seed` and the sample index):
      1. draw one eigenstep table uniformly (hit-and-run over the polytope);
      2. synthesize the canonical frame for that table;
      3. push it around the torus: an independent uniform angle at every free
         action index of the polytope chart;
      4. mix coordinates by a Haar-random unitary on the left;
      5. put an independent uniform phase on every column.
    Each output is re-verified to carry spectrum lambda and norms r to 1e-8.
    """
    from .torus_action import torus_action  # local import; torus_action imports us not

    lam = lam if isinstance(lam, Spectrum) else Spectrum(lam)
    r = r if isinstance(r, NormVector) else NormVector(r)
    verdict = check_admissible(lam, r)
    if not verdict.strong:
        raise FrameError(
            "random_frame requires strongly lambda-admissible r "
            f"(admissible={verdict.admissible}, failing_index={verdict.failing_index})"
        )
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return []

    P = polytope_system(lam, r)
    x0 = interior_point(P) if P.dimension > 0 else np.zeros(0)
    scale = max(1.0, lam.values[0])
    out = []
    for i in range(count):
        child = derive_seed(seed, i)
        rng = np.random.default_rng(child)
        if P.dimension > 0:
            (T,) = hit_and_run(P, x0, 1, seed=derive_seed(child, 1))
        else:
            T = P.table_from_point(np.zeros(0))
        F = frame_from_eigensteps(T, r.values, SynthesisOptions(mode="perturb"))
        if P.free:
            angles = {idx: 2 * np.pi * rng.uniform() for idx in P.free}
            F = torus_action(F, angles)
        U = haar_unitary(P.d, rng)
        phases = np.exp(2j * np.pi * rng.uniform(size=P.N))
        F = Frame((U @ F.entries) * phases[None, :])

        got_lam = spectrum_of(F).values
        got_r = norms_of(F)
        if np.max(np.abs(np.asarray(got_lam) - np.asarray(lam.values))) > 1e-8 * scale:
            raise RuntimeError(f"sample {i}: spectrum drifted beyond 1e-8")
        if np.max(np.abs(got_r - np.asarray(r.values))) > 1e-8 * scale:
            raise RuntimeError(f"sample {i}: norms drifted beyond 1e-8")
        out.append(F)
    return out


# --------------------------------------------------------------------------- #
# deterministic spark-deficient members
# --------------------------------------------------------------------------- #


def _deterministic_member(lam: Spectrum, r: NormVector) -> Frame:
    """One canonical frame with the given data (polytope may be degenerate)."""
    P = polytope_system(lam, r)
    (T,) = sample_tables(P, 1, seed=0)
    return frame_from_eigensteps(T, r.values, SynthesisOptions(mode="boundary"))


def spark_deficient_witness(lam, r, I, J) -> Frame:
    """Block-diagonal member of the frame space built from a partition witness.

    The sub-frame with data (lambda_J, r_I) occupies the first |J| coordinates
    and the columns listed in I; the complementary data fills the remaining
    coordinates and columns.  The output has spectrum lambda and norms r, and
    is orthodecomposable (hence spark-deficient whenever d > 1).
    """
    lam = lam if isinstance(lam, Spectrum) else Spectrum(lam)
    r = r if isinstance(r, NormVector) else NormVector(r)
    d, n = lam.d, r.N
    I = tuple(sorted(int(i) for i in I))
    J = tuple(sorted(int(j) for j in J))
    if not I or not J or len(I) >= n or len(J) >= d:
        raise InvalidWitnessError("witness must use proper nonempty index sets")
    if any(not 1 <= i <= n for i in I) or any(not 1 <= j <= d for j in J):
        raise InvalidWitnessError("witness indices out of range")
    Ic = tuple(i for i in range(1, n + 1) if i not in I)
    Jc = tuple(j for j in range(1, d + 1) if j not in J)
    lam_j = [lam.values[j - 1] for j in J]
    lam_jc = [lam.values[j - 1] for j in Jc]
    r_i = [r.values[i - 1] for i in I]
    r_ic = [r.values[i - 1] for i in Ic]
    tol = 1e-9 * max(1.0, lam.total)
    if abs(sum(r_i) - sum(lam_j)) > tol:
        raise InvalidWitnessError("witness sums do not match")
    if not check_admissible(lam_j, r_i).admissible or not check_admissible(lam_jc, r_ic).admissible:
        raise InvalidWitnessError("witness halves are not admissible")

    F1 = _deterministic_member(Spectrum(lam_j), NormVector(r_i))
    F2 = _deterministic_member(Spectrum(lam_jc), NormVector(r_ic))
    G = np.zeros((d, n), dtype=complex)
    dj = len(J)
    for col, i in enumerate(I):
        G[:dj, i - 1] = F1.entries[:, col]
    for col, i in enumerate(Ic):
        G[dj:, i - 1] = F2.entries[:, col]
    return Frame(G)
