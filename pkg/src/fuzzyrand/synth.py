"""Synthetic allocation generators for examples and benchmarks.

toy_allocations builds five 9-point, 3-cluster matrices (two low-fuzzy,
their hard versions, and a near-uniform high-fuzzy one) plus the ten
canonical comparison pairs between them.

generate_pair drives the factorial benchmark: two initially identical
hard clusterings whose rows are partially replaced by i.i.d. draws from
a shared replacement distribution, controlled by cluster count, point
count, imbalance, precision, and randomize rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dirichlet import CategoricalParams, DirichletParams, sample
from .errors import ValidationError
from .membership import MembershipMatrix, harden

HEAVY_SHARE = 0.8


@dataclass(frozen=True)
class FactorialParams:
    """One cell of the factorial benchmark grid.

    imbalance is the proportion of clusters that receive 80% of the
    points (and 80% of the replacement concentration); precision scales
    the replacement Dirichlet (total concentration = precision *
    n_clusters; 0 means hard categorical replacements); randomize_rate
    is the fraction of rows replaced (both matrices when sided="two",
    only the second when sided="one").
    """

    n_clusters: int
    n_points: int
    imbalance: float
    precision: float
    randomize_rate: float
    sided: str = "two"
    seed: int = 0

    def __post_init__(self):
        if int(self.n_clusters) < 1:
            raise ValidationError("n_clusters must be >= 1")
        if int(self.n_points) < 2:
            raise ValidationError("n_points must be >= 2")
        if not (0.0 < float(self.imbalance) <= 1.0):
            raise ValidationError("imbalance must be in (0, 1]")
        if float(self.precision) < 0.0:
            raise ValidationError("precision must be >= 0")
        if not (0.0 < float(self.randomize_rate) <= 1.0):
            raise ValidationError("randomize_rate must be in (0, 1]")
        if self.sided not in ("one", "two"):
            raise ValidationError("sided must be 'one' or 'two'")
        object.__setattr__(self, "n_clusters", int(self.n_clusters))
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ToyAllocations:
    """The five named toy matrices and the ten ordered comparison pairs."""

    uneven_low_fuzzy: MembershipMatrix
    even_low_fuzzy: MembershipMatrix
    high_fuzzy: MembershipMatrix
    uneven_hard: MembershipMatrix
    even_hard: MembershipMatrix
    comparisons: tuple  # ((name1, name2), ...) indexed by comparison id - 1

    def matrix(self, name: str) -> MembershipMatrix:
        return getattr(self, name)

    def pairs(self):
        """(comparison id, name1, name2, matrix1, matrix2) in id order."""
        return [
            (i + 1, a, b, self.matrix(a), self.matrix(b))
            for i, (a, b) in enumerate(self.comparisons)
        ]


def _low_fuzzy_rows(labels) -> np.ndarray:
    rows = np.full((len(labels), 3), 0.01)
    rows[np.arange(len(labels)), labels] = 0.98
    return rows


def toy_allocations() -> ToyAllocations:
    """Five 9x3 allocations: uneven/even low-fuzzy, their hard versions,
    and a high-fuzzy matrix with every row close to uniform."""
    uneven_labels = [0] * 7 + [1, 2]
    even_labels = [0, 0, 0, 1, 1, 1, 2, 2, 2]
    uneven_lf = MembershipMatrix(_low_fuzzy_rows(uneven_labels))
    even_lf = MembershipMatrix(_low_fuzzy_rows(even_labels))
    high = np.full((9, 3), 0.33)
    high[np.arange(9), np.arange(9) % 3] = 0.34
    comparisons = (
        ("uneven_low_fuzzy", "even_low_fuzzy"),
        ("uneven_low_fuzzy", "high_fuzzy"),
        ("uneven_low_fuzzy", "uneven_hard"),
        ("uneven_low_fuzzy", "even_hard"),
        ("even_low_fuzzy", "high_fuzzy"),
        ("even_low_fuzzy", "uneven_hard"),
        ("even_low_fuzzy", "even_hard"),
        ("high_fuzzy", "uneven_hard"),
        ("high_fuzzy", "even_hard"),
        ("uneven_hard", "even_hard"),
    )
    return ToyAllocations(
        uneven_low_fuzzy=uneven_lf,
        even_low_fuzzy=even_lf,
        high_fuzzy=MembershipMatrix(high),
        uneven_hard=harden(uneven_lf),
        even_hard=harden(even_lf),
        comparisons=comparisons,
    )


def _apportion(total: int, k: int) -> list:
    """Split total into k integers, as even as possible, extras to the
    lowest indices (largest-remainder rule with equal quotas)."""
    base, rem = divmod(total, k)
    return [base + 1 if i < rem else base for i in range(k)]


def _split_80_20(n_points: int) -> tuple:
    """Integer 80/20 split by largest remainder; a tie goes to the 80% side."""
    heavy = (4 * n_points) // 5
    light = n_points // 5
    if heavy + light < n_points:  # one leftover point
        if (4 * n_points) % 5 >= n_points % 5:
            heavy += 1
        else:
            light += 1
    return heavy, light


def _group_sizes(p: FactorialParams) -> tuple:
    """Per-cluster point counts and the number of heavy clusters."""
    n_heavy = math.ceil(p.imbalance * p.n_clusters)
    if n_heavy < 1:
        raise ValidationError("imbalance leaves no cluster with the 80% share")
    n_heavy = min(n_heavy, p.n_clusters)
    n_light = p.n_clusters - n_heavy
    if n_light == 0:
        return _apportion(p.n_points, n_heavy), n_heavy
    heavy_total, light_total = _split_80_20(p.n_points)
    return _apportion(heavy_total, n_heavy) + _apportion(light_total, n_light), n_heavy


def _replacement_distribution(p: FactorialParams, n_heavy: int):
    """Shared row-replacement distribution: 80% of the weight on the heavy
    clusters, spread evenly within each group."""
    n_light = p.n_clusters - n_heavy
    w = np.empty(p.n_clusters)
    if n_light == 0:
        w[:] = 1.0 / n_heavy
    else:
        w[:n_heavy] = HEAVY_SHARE / n_heavy
        w[n_heavy:] = (1.0 - HEAVY_SHARE) / n_light
    if p.precision == 0.0:
        return CategoricalParams(w)
    return DirichletParams(w * (p.precision * p.n_clusters))


def generate_pair(p: FactorialParams):
    """Two allocations that start in perfect agreement and are partially
    re-randomized.

    The base hard clustering assigns ceil(imbalance * n_clusters) heavy
    clusters 80% of the points, evenly within each group (all points when
    no light cluster remains).  round(rate * N) rows, drawn without
    replacement, are then overwritten with i.i.d. draws from the
    replacement distribution: in both matrices (independently) when
    sided="two", only in the second when sided="one".  Deterministic
    given the seed.
    """
    rng = np.random.default_rng(p.seed)
    sizes, n_heavy = _group_sizes(p)
    labels = np.repeat(np.arange(p.n_clusters), sizes)
    base = np.zeros((p.n_points, p.n_clusters))
    base[np.arange(p.n_points), labels] = 1.0

    dist = _replacement_distribution(p, n_heavy)
    n_replace = math.floor(p.randomize_rate * p.n_points + 0.5)
    arr1 = base.copy()
    arr2 = base.copy()
    if n_replace > 0:
        chosen = np.sort(rng.choice(p.n_points, size=n_replace, replace=False))
        if p.sided == "two":
            arr1[chosen] = sample(dist, rng, n_replace)
        arr2[chosen] = sample(dist, rng, n_replace)
    return MembershipMatrix(arr1), MembershipMatrix(arr2)
