"""Closed-form expected Rand index under four hard random models.

Each model defines a distribution over hard clusterings and the resulting
expectation has the same shape: the probability that both random
clusterings co-cluster a random pair, plus the probability that both
separate it.

* Perm: labels permuted uniformly, cluster sizes fixed to those observed.
* Cat: each point draws an independent categorical label with the
  observed cluster proportions.
* Num: uniform over all partitions into exactly n nonempty clusters
  (Stirling-number ratios).
* All: uniform over every partition (Bell-number ratio).

Stirling and Bell tables are computed in log space so large point counts
do not overflow; small exact values used in tests come from integer
recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapabilityError, ValidationError

NUM_EXACT_MAX_POINTS = 5000
_ALL_EXACT_MAX_POINTS = 25


def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class ClusterSizes:
    """Cluster size vector of a hard clustering; counts[i] = points in cluster i."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) < 1:
            raise ValidationError("need at least one cluster")
        for i, c in enumerate(counts):
            if c < 0:
                raise ValidationError(f"cluster {i} has negative count {c}")
        if sum(counts) < 1:
            raise ValidationError("cluster sizes sum to zero")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_hard(cls, m) -> "ClusterSizes":
        # column sums of a hard matrix count the points carrying its 1
        from .membership import Classification, classify

        if classify(m) is not Classification.HARD:
            raise ValidationError("cluster sizes require a hard matrix")
        return cls(tuple(int(round(s)) for s in m.values.sum(axis=0)))

    @property
    def n_points(self) -> int:
        return sum(self.counts)

    @property
    def n_clusters(self) -> int:
        return len(self.counts)

    @property
    def pairs(self) -> int:
        """Total number of unordered point pairs."""
        return _pair_count(self.n_points)

    @property
    def co_clustered_pairs(self) -> int:
        """Number of pairs placed in the same cluster."""
        return sum(_pair_count(c) for c in self.counts)

    def proportions(self) -> "ProportionVector":
        n = self.n_points
        return ProportionVector(tuple(Fraction(c, n) for c in self.counts))


@dataclass(frozen=True)
class ProportionVector:
    """Point on the probability simplex; typically cluster proportions c/N."""

    p: tuple

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) < 1:
            raise ValidationError("need at least one proportion")
        for i, x in enumerate(p):
            if not np.isfinite(x) or x < 0:
                raise ValidationError(f"proportion {i} invalid: {x}")
        if abs(sum(p) - 1.0) > 1e-9:
            raise ValidationError(f"proportions sum to {sum(p)}, expected 1")
        object.__setattr__(self, "p", p)

    @property
    def sum_sq(self) -> float:
        return float(sum(x * x for x in self.p))


def _as_sizes(s) -> ClusterSizes:
    return s if isinstance(s, ClusterSizes) else ClusterSizes(tuple(s))


def _as_props(p) -> ProportionVector:
    return p if isinstance(p, ProportionVector) else ProportionVector(tuple(p))


def expected_ri_perm_exact(s1, s2) -> Fraction:
    """Rational permutation-model expectation; see expected_ri_perm."""
    s1, s2 = _as_sizes(s1), _as_sizes(s2)
    if s1.n_points != s2.n_points:
        raise ValidationError(
            f"point counts differ: {s1.n_points} vs {s2.n_points}"
        )
    if s1.n_points < 2:
        raise ValidationError("permutation expectation needs at least 2 points")
    big_p = s1.pairs
    t1, t2 = s1.co_clustered_pairs, s2.co_clustered_pairs
    return Fraction(t1 * t2 + (big_p - t1) * (big_p - t2), big_p * big_p)


def expected_ri_perm(s1, s2) -> float:
    """Expected Rand index when both labelings are uniformly permuted.

    With T_k the co-clustered pair count of clustering k and P the total
    pair count, a uniformly permuted labeling co-clusters a fixed pair
    with probability T_k / P, independently across the two clusterings,
    giving [T1*T2 + (P-T1)*(P-T2)] / P^2.
    """
    return float(expected_ri_perm_exact(s1, s2))


def expected_ri_cat(p1, p2) -> float:
    """Expected Rand index when every point draws an i.i.d. categorical label.

    Two points share a label under clustering k with probability
    sum_i p_k[i]^2, independently across clusterings.
    """
    q1 = _as_props(p1).sum_sq
    q2 = _as_props(p2).sum_sq
    return q1 * q2 + (1.0 - q1) * (1.0 - q2)


@lru_cache(maxsize=8)
def _log_stirling2_last_rows(n_points: int):
    """Rows N-1 and N of the log Stirling-second-kind table, k = 0..N."""
    neg_inf = -np.inf
    with np.errstate(divide="ignore"):
        logk = np.log(np.arange(n_points + 1, dtype=np.float64))
    row = np.full(n_points + 1, neg_inf)
    row[0] = 0.0
    prev = row
    for _ in range(1, n_points + 1):
        prev = row
        shifted = np.empty_like(prev)
        shifted[0] = neg_inf
        shifted[1:] = prev[:-1]
        # S(m, k) = k*S(m-1, k) + S(m-1, k-1)
        row = np.logaddexp(logk + prev, shifted)
    prev.setflags(write=False)
    row.setflags(write=False)
    return prev, row


def _log_cocluster_prob_num(n_clusters: int, n_points: int) -> float:
    rows = _log_stirling2_last_rows(n_points)
    return float(rows[0][n_clusters] - rows[1][n_clusters])


def expected_ri_num(n1: int, n2: int, n_points=None, exact: bool = False) -> float:
    """Expected Rand index under uniform partitions into n nonempty clusters.

    The probability a fixed pair is co-clustered under a uniform partition
    of N points into exactly n clusters is S(N-1, n)/S(N, n).  exact=False
    uses the large-N approximation 1/(n1*n2) + (1 - 1/n1)(1 - 1/n2), which
    needs no point count.
    """
    n1, n2 = int(n1), int(n2)
    if n1 < 1 or n2 < 1:
        raise ValidationError(f"cluster counts must be >= 1, got {n1}, {n2}")
    if not exact:
        return 1.0 / (n1 * n2) + (1.0 - 1.0 / n1) * (1.0 - 1.0 / n2)
    if n_points is None:
        raise ValidationError("exact=True requires the point count")
    n_points = int(n_points)
    if n_points < max(n1, n2):
        raise ValidationError(
            f"point count {n_points} below cluster count {max(n1, n2)}"
        )
    if n_points > NUM_EXACT_MAX_POINTS:
        raise CapabilityError(
            f"exact Stirling ratios limited to {NUM_EXACT_MAX_POINTS} points; "
            "use exact=False for the approximation"
        )
    q1 = np.exp(_log_cocluster_prob_num(n1, n_points))
    q2 = np.exp(_log_cocluster_prob_num(n2, n_points))
    return float(q1 * q2 + (1.0 - q1) * (1.0 - q2))


def _bell_triangle_exact(n_rows: int) -> list:
    rows = [[1]]
    for _ in range(1, n_rows):
        prev = rows[-1]
        row = [prev[-1]]
        for value in prev:
            row.append(row[-1] + value)
        rows.append(row)
    return rows


@lru_cache(maxsize=32)
def _log_bell_ratio(n_points: int) -> float:
    """log(B_{N-1} / B_N) via the Bell triangle."""
    if n_points <= _ALL_EXACT_MAX_POINTS:
        rows = _bell_triangle_exact(n_points)
        last = rows[-1]
        # first entry of row r is B_r, last entry is B_{r+1}
        return math.log(float(Fraction(last[0], last[-1])))
    row = np.zeros(1)
    for _ in range(1, n_points):
        row = np.logaddexp.accumulate(np.concatenate((row[-1:], row)))
    return float(row[0] - row[-1])


def expected_ri_all(n_points: int) -> float:
    """Expected Rand index under a uniform draw over every partition.

    A fixed pair is co-clustered with probability r = B_{N-1}/B_N, so the
    expectation is r^2 + (1-r)^2.
    """
    n_points = int(n_points)
    if n_points < 2:
        raise ValidationError("need at least 2 points")
    r = float(np.exp(_log_bell_ratio(n_points)))
    return r * r + (1.0 - r) * (1.0 - r)
