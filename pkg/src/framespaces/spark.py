"""Spark computation and Plücker-coordinate machinery.

The spark of a frame is the size of the smallest linearly dependent subset
of its columns; it is at most d+1, and equals d+1 exactly when every d
columns form a basis ("full spark").  Dependence is detected numerically
with a relative gate: a subset counts as dependent when its smallest
singular value (or, for d-subsets, the modulus of its determinant) falls
below `tol` times the natural scale of F.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Tuple

import numpy as np

from .frame_core import Frame, FrameError

__all__ = [
    "DEFAULT_SPARK_TOL",
    "SEARCH_LIMIT",
    "SearchTooLargeError",
    "SparkReport",
    "spark",
    "is_full_spark",
    "plucker_coordinates",
    "plucker_product",
]

DEFAULT_SPARK_TOL = 1e-9

#: Refuse subset searches with more than this many d-subsets.
SEARCH_LIMIT = 10**7


class SearchTooLargeError(FrameError):
    """C(N, d) exceeds the subset-search budget."""


@dataclass(frozen=True)
class SparkReport:
    """Outcome of a spark search.

    spark = d+1, witness = None and min_abs_minor > tol_used all say the
    same thing: the frame is full spark.  Otherwise `witness` is the
    lexicographically smallest minimal dependent subset (1-based).
    """

    spark: int
    witness: Optional[Tuple[int, ...]]
    min_abs_minor: float
    tol_used: float

    @property
    def full_spark(self) -> bool:
        return self.witness is None


def _guard_size(F: Frame) -> None:
    n_minors = comb(F.N, F.d)
    if n_minors > SEARCH_LIMIT:
        raise SearchTooLargeError(
            f"search too large: C({F.N},{F.d}) = {n_minors} d-subsets "
            f"exceeds the limit of {SEARCH_LIMIT}"
        )


def _minor_dets(F: Frame):
    """All d×d minors as (index tuples, stacked determinants).

    Index tuples are 1-based and lexicographically ordered.
    """
    d = F.d
    subsets = list(combinations(range(F.N), d))
    stacked = np.stack([F.entries[:, s] for s in subsets])
    dets = np.linalg.det(stacked)
    labels = [tuple(i + 1 for i in s) for s in subsets]
    return labels, dets


def spark(F: Frame, tol: float = DEFAULT_SPARK_TOL) -> SparkReport:
    """Smallest m such that some m columns of F are linearly dependent.

    Subset sizes are searched in ascending order, so the witness (when one
    exists) is minimal in size and lexicographically smallest among subsets
    of that size.  Sizes below d use the smallest singular value against
    tol·σ_max(F); size d uses |det| against tol·σ_max(F)^d, which is also
    the `tol_used` recorded in the report.

    Raises SearchTooLargeError when C(N, d) > 10^7.
    """
    _guard_size(F)
    sigma_max = float(np.linalg.norm(F.entries, 2))
    labels, dets = _minor_dets(F)
    mods = np.abs(dets)
    min_abs_minor = float(np.min(mods))
    tol_used = tol * sigma_max**F.d

    for m in range(1, F.d):
        for subset in combinations(range(F.N), m):
            svals = np.linalg.svd(F.entries[:, subset], compute_uv=False)
            if svals[-1] <= tol * sigma_max:
                witness = tuple(i + 1 for i in subset)
                return SparkReport(m, witness, min_abs_minor, tol_used)
    for label, mod in zip(labels, mods):
        if mod <= tol_used:
            return SparkReport(F.d, label, min_abs_minor, tol_used)
    return SparkReport(F.d + 1, None, min_abs_minor, tol_used)


def is_full_spark(F: Frame, tol: float = DEFAULT_SPARK_TOL) -> bool:
    """True iff every d×d minor of F has |det| > tol·σ_max(F)^d."""
    _guard_size(F)
    sigma_max = float(np.linalg.norm(F.entries, 2))
    _, dets = _minor_dets(F)
    return bool(np.min(np.abs(dets)) > tol * sigma_max**F.d)


def plucker_coordinates(F: Frame):
    """All C(N, d) minors of F as (1-based column set, determinant) pairs,
    in lexicographic order of the column sets."""
    _guard_size(F)
    labels, dets = _minor_dets(F)
    return [(label, complex(det)) for label, det in zip(labels, dets)]


def plucker_product(F: Frame, tol: float = DEFAULT_SPARK_TOL):
    """Product of all Plücker coordinates of F, with the minimum modulus.

    The product vanishes exactly when some minor does, i.e. when F is not
    full spark; in that case (0j, min_modulus) is returned.  Otherwise the
    product is accumulated in log-magnitude/phase form so that C(N, d)
    factors cannot overflow or underflow the intermediate values.
    """
    _guard_size(F)
    sigma_max = float(np.linalg.norm(F.entries, 2))
    _, dets = _minor_dets(F)
    mods = np.abs(dets)
    min_modulus = float(np.min(mods))
    if min_modulus <= tol * sigma_max**F.d:
        return 0j, min_modulus
    log_mag = float(np.sum(np.log(mods)))
    phase = float(np.sum(np.angle(dets)))
    try:
        product = cmath.rect(math.exp(log_mag), phase)
    except OverflowError:
        product = cmath.rect(math.inf, phase)
    return product, min_modulus
