"""Classification of parameter pairs (spectrum, norms).

Whether the space of frames with spectrum lambda and squared norms r is empty,
a smooth manifold, or a singular variety is decided entirely by majorization
arithmetic on the two sorted lists: the partial-sum inequalities, their strictness,
and the existence of a compatible split of both lists into two admissible halves.
This module implements those verdicts plus the three dimension formulas.

Index sets in witnesses are 1-based (I into r, J into lambda), matching the
reported JSON.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .frame_core import FrameError, NormVector, Spectrum

__all__ = [
    "SUM_TOL",
    "AdmissibilityVerdict",
    "DimensionReport",
    "SearchTooLargeError",
    "SpaceClassification",
    "check_admissible",
    "classify_space",
    "frame_space_dimensions",
    "partition_witness",
]

# Relative tolerance on every sum comparison in this module.
SUM_TOL = 1e-9

# Subset enumeration bound for the partition search.
MAX_PARTITION_N = 24


class SearchTooLargeError(FrameError):
    """The subset enumeration would exceed the documented bound."""


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """Outcome of the majorization test of r against lambda.

    failing_index is present exactly when the verdict is not strong: the first
    k where a partial-sum inequality is violated, or the first k where it holds
    with equality when admissible-but-not-strong.  When only the total-sum
    equality fails (every inequality holds but the sums differ), the index is
    reported as k = d, the position the equality constraint is anchored to.
    sum_mismatch carries the signed difference sum(r) - sum(lambda) when it
    exceeds tolerance.
    """

    admissible: bool
    strong: bool
    failing_index: int | None = None
    sum_mismatch: float | None = None

    def __post_init__(self):
        if self.strong and not self.admissible:
            raise ValueError("strong verdict requires admissible")
        if (self.failing_index is None) != self.strong:
            raise ValueError("failing_index must be present iff not strong")


@dataclass(frozen=True)
class SpaceClassification:
    """Empty / SingularVariety / SmoothManifold, with a split witness when singular."""

    kind: str  # one of "Empty", "SingularVariety", "SmoothManifold"
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None  # (I, J), 1-based

    def __post_init__(self):
        if self.kind not in ("Empty", "SingularVariety", "SmoothManifold"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.witness is not None) != (self.kind == "SingularVariety"):
            raise ValueError("witness present iff kind is SingularVariety")


@dataclass(frozen=True)
class DimensionReport:
    dim_frame_space: int
    dim_quotient: int
    dim_polytope: int

    def __post_init__(self):
        if min(self.dim_frame_space, self.dim_quotient, self.dim_polytope) < 0:
            raise ValueError("dimensions must be nonnegative")
        if 2 * self.dim_polytope != self.dim_quotient:
            raise ValueError("polytope dimension must be half the quotient dimension")


def _sum_tol(lam_total: float) -> float:
    return SUM_TOL * max(1.0, abs(lam_total))


def _as_spectrum(lam) -> Spectrum:
    return lam if isinstance(lam, Spectrum) else Spectrum(lam)


def _as_norms(r) -> NormVector:
    return r if isinstance(r, NormVector) else NormVector(r)


def _is_admissible_lists(lam: tuple[float, ...], r: tuple[float, ...], tol: float) -> bool:
    """Majorization test on raw sorted-nonincreasing lists (both halves of a split use this)."""
    if len(r) < len(lam):
        return False
    if abs(sum(r) - sum(lam)) > tol:
        return False
    cum_r = 0.0
    cum_l = 0.0
    for k in range(len(lam)):
        cum_r += r[k]
        cum_l += lam[k]
        if cum_r > cum_l + tol:
            return False
    return True


def check_admissible(lam: Spectrum, r: NormVector) -> AdmissibilityVerdict:
    """Test whether r is lambda-admissible, and strongly so.

    Admissible: equal sums and every partial sum of r bounded by the matching
    partial sum of lambda for k = 1..d.  Strong: every one of those d
    inequalities is strict by more than the tolerance.
    """
    lam, r = _as_spectrum(lam), _as_norms(r)
    if r.N < lam.d:
        raise ValueError(f"need N >= d, got N={r.N} < d={lam.d}")
    tol = _sum_tol(lam.total)
    mismatch = r.total - lam.total
    sums_equal = abs(mismatch) <= tol

    first_violation = None
    first_equality = None
    cum_r = 0.0
    cum_l = 0.0
    for k in range(1, lam.d + 1):
        cum_r += r.values[k - 1]
        cum_l += lam.values[k - 1]
        gap = cum_l - cum_r
        if gap < -tol:
            first_violation = k
            break
        if gap <= tol and first_equality is None:
            first_equality = k

    if first_violation is not None:
        return AdmissibilityVerdict(
            admissible=False,
            strong=False,
            failing_index=first_violation,
            sum_mismatch=None if sums_equal else mismatch,
        )
    if not sums_equal:
        return AdmissibilityVerdict(
            admissible=False, strong=False, failing_index=lam.d, sum_mismatch=mismatch
        )
    if first_equality is not None:
        return AdmissibilityVerdict(admissible=True, strong=False, failing_index=first_equality)
    return AdmissibilityVerdict(admissible=True, strong=True)


def partition_witness(lam: Spectrum, r: NormVector):
    """Smallest split witness (I, J) with both halves admissible, or None.

    Searches proper nonempty J subset of {1..d} in lexicographic order, and for each
    J the proper nonempty subsets I of {1..N} with sum(r_I) = sum(lambda_J) in
    lexicographic order (depth-first with suffix-sum pruning), returning the
    first (J, I) pair for which r_I is lambda_J-admissible and the complements
    are admissible as well.  Deterministic by construction.
    """
    lam, r = _as_spectrum(lam), _as_norms(r)
    if r.N > MAX_PARTITION_N:
        raise SearchTooLargeError(
            f"partition search capped at N <= {MAX_PARTITION_N}, got N={r.N}"
        )
    tol = _sum_tol(lam.total)
    d, n = lam.d, r.N
    rv = r.values
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + rv[i]

    all_j = sorted(
        itertools.chain.from_iterable(
            itertools.combinations(range(1, d + 1), s) for s in range(1, d)
        )
    )
    for J in all_j:
        lam_j = tuple(lam.values[j - 1] for j in J)
        lam_jc = tuple(lam.values[j - 1] for j in range(1, d + 1) if j not in J)
        target = sum(lam_j)

        found = _find_matching_subset(rv, suffix, target, tol, lam_j, lam_jc, n)
        if found is not None:
            return found, J
    return None


def _find_matching_subset(rv, suffix, target, tol, lam_j, lam_jc, n):
    """First (lex order) proper nonempty I with sum r_I = target and both halves admissible."""
    chosen: list[int] = []

    def check_current() -> bool:
        r_i = tuple(rv[i - 1] for i in chosen)
        taken = set(chosen)
        r_ic = tuple(rv[i - 1] for i in range(1, n + 1) if i not in taken)
        return _is_admissible_lists(lam_j, r_i, tol) and _is_admissible_lists(lam_jc, r_ic, tol)

    def dfs(pos: int, acc: float):
        if pos > n or acc + suffix[pos - 1] < target - tol:
            return None
        # include pos first: keeps candidate subsets in lexicographic order
        new_acc = acc + rv[pos - 1]
        if new_acc <= target + tol:
            chosen.append(pos)
            if abs(new_acc - target) <= tol and len(chosen) < n and check_current():
                return tuple(chosen)
            hit = dfs(pos + 1, new_acc)
            chosen.pop()
            if hit is not None:
                return hit
        return dfs(pos + 1, acc)

    return dfs(1, 0.0)


def classify_space(lam: Spectrum, r: NormVector) -> SpaceClassification:
    """Empty / SingularVariety (with witness) / SmoothManifold for the pair (lambda, r)."""
    lam, r = _as_spectrum(lam), _as_norms(r)
    verdict = check_admissible(lam, r)
    if not verdict.admissible:
        return SpaceClassification(kind="Empty")
    witness = partition_witness(lam, r)
    if witness is not None:
        i_set, j_set = witness
        return SpaceClassification(kind="SingularVariety", witness=(i_set, j_set))
    return SpaceClassification(kind="SmoothManifold")


def frame_space_dimensions(lam: Spectrum, r: NormVector) -> DimensionReport:
    """The three dimension formulas, valid for strongly admissible data.

    With multiplicities k_1,...,k_l of lambda and K = sum of k_j^2:
    frame space 2dN - N + 1 - K; quotient 2N(d-1) + 2 - d^2 - K; polytope =
    quotient / 2 (always an even split: d^2 and K have equal parity).
    """
    lam, r = _as_spectrum(lam), _as_norms(r)
    verdict = check_admissible(lam, r)
    if not verdict.strong:
        raise FrameError(
            "dimension formulas require strongly admissible data "
            f"(verdict: admissible={verdict.admissible}, failing_index={verdict.failing_index})"
        )
    d, n = lam.d, r.N
    ksq = sum(k * k for k in lam.multiplicities)
    dim_frame = 2 * d * n - n + 1 - ksq
    dim_quotient = 2 * n * (d - 1) + 2 - d * d - ksq
    assert dim_quotient % 2 == 0
    return DimensionReport(
        dim_frame_space=dim_frame,
        dim_quotient=dim_quotient,
        dim_polytope=dim_quotient // 2,
    )
