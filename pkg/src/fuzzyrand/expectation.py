"""Monte-Carlo estimation of expected pairwise concordance.

Because random membership vectors are drawn i.i.d. per point, the
expected index over a whole clustering equals the expected concordance of
a single random pair, so every estimator here samples pairs:

* two-sided: all four membership vectors drawn from the two model
  distributions;
* one-sided: one clustering's pair drawn from its model, the other pair
  drawn uniformly from the observed matrix;
* permutation: both pairs drawn uniformly (and independently) from the
  two observed matrices, which reproduces the label-permutation
  expectation because a uniform permutation maps a fixed pair to a
  uniformly random pair.

Estimates are deterministic given (samples, seed, workers): worker w owns
the PCG64 stream derived from SeedSequence(seed, spawn_key=(w,)), consumes
its quota in fixed-size chunks, and the partial sums are combined in
worker order with exact summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dirichlet
from .errors import CapabilityError, ValidationError
from .indices import IndexKind, _agreement_rows, _concordance_values, pair_agreements
from .membership import MembershipMatrix, require_simplex

DEFAULT_SAMPLES = 10_000_000
ALL_PAIRS_MAX_POINTS = 512
_CHUNK_SCALARS = 2_000_000

RNG_NAME = "pcg64"


@dataclass(frozen=True)
class McConfig:
    """Sampling budget and reproducibility contract for the estimators."""

    seed: int
    samples: int = DEFAULT_SAMPLES
    workers: int = 1

    def __post_init__(self):
        if int(self.samples) < 1:
            raise ValidationError(f"samples must be >= 1, got {self.samples}")
        if int(self.workers) < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if int(self.seed) < 0:
            raise ValidationError("seed must be a nonnegative integer")
        object.__setattr__(self, "samples", int(self.samples))
        object.__setattr__(self, "workers", int(self.workers))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ExpectationEstimate:
    value: float
    std_error: float
    samples: int
    model: str


def _worker_rng(seed: int, worker: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(worker,))
    return np.random.Generator(np.random.PCG64(ss))


def _mc_run(cfg: McConfig, scalars_per_sample: int, chunk_fn, model: str):
    """Drive chunk_fn(rng, k) -> k concordance values over the full budget."""
    chunk = max(1, _CHUNK_SCALARS // max(1, int(scalars_per_sample)))
    base, extra = divmod(cfg.samples, cfg.workers)
    sums, sq_sums = [], []
    for w in range(cfg.workers):
        quota = base + (1 if w < extra else 0)
        if quota == 0:
            continue
        rng = _worker_rng(cfg.seed, w)
        left = quota
        while left > 0:
            k = min(chunk, left)
            v = chunk_fn(rng, k)
            sums.append(float(np.sum(v)))
            sq_sums.append(float(np.sum(v * v)))
            left -= k
    n = cfg.samples
    mean = math.fsum(sums) / n
    if n > 1:
        var = max(0.0, (math.fsum(sq_sums) - n * mean * mean) / (n - 1))
        std_error = math.sqrt(var / n)
    else:
        std_error = 0.0
    return ExpectationEstimate(
        value=min(1.0, max(0.0, mean)),
        std_error=std_error,
        samples=n,
        model=model,
    )


def _draw_pair_indices(rng: np.random.Generator, n_points: int, k: int):
    """k uniform draws of distinct (i, j); unordered-uniform by symmetry."""
    i = rng.integers(0, n_points, size=k)
    j = rng.integers(0, n_points - 1, size=k)
    j = j + (j >= i)
    return i, j


def expected_conc_two_sided(d1, d2, kind: IndexKind, cfg: McConfig,
                            model: str = "two-sided") -> ExpectationEstimate:
    """Expected concordance with both clusterings drawn from their models.

    Per sample, (z11, z12) are i.i.d. from d1 and (z21, z22) i.i.d. from
    d2; the estimate averages conc(agree(z11, z12), agree(z21, z22)).
    """
    n1 = d1.n_dims if hasattr(d1, "n_dims") else None
    n2 = d2.n_dims if hasattr(d2, "n_dims") else None
    if n1 is None or n2 is None:
        raise ValidationError("model distributions required")

    def chunk_fn(rng, k):
        z11 = dirichlet.sample(d1, rng, k)
        z12 = dirichlet.sample(d1, rng, k)
        z21 = dirichlet.sample(d2, rng, k)
        z22 = dirichlet.sample(d2, rng, k)
        a1 = _agreement_rows(kind, z11, z12)
        a2 = _agreement_rows(kind, z21, z22)
        return _concordance_values(a1, a2, kind)

    return _mc_run(cfg, 2 * (n1 + n2), chunk_fn, model)


def expected_conc_one_sided(d1, c2: MembershipMatrix, kind: IndexKind,
                            cfg: McConfig, all_pairs: bool = False,
                            model: str = "one-sided") -> ExpectationEstimate:
    """Expected concordance with the second clustering held fixed at c2.

    Default mode draws one observed pair of c2 uniformly per sample, so
    cost is independent of the point count.  all_pairs=True averages each
    sample against every observed pair instead (lower variance; limited
    to 512 points).
    """
    require_simplex(c2, "fixed allocation")
    n_points = c2.n_points
    if n_points < 2:
        raise ValidationError("fixed allocation needs at least 2 points")
    n1 = d1.n_dims if hasattr(d1, "n_dims") else None
    if n1 is None:
        raise ValidationError("model distribution required")
    rows = c2.values

    if all_pairs:
        if n_points > ALL_PAIRS_MAX_POINTS:
            raise CapabilityError(
                f"all-pairs mode limited to {ALL_PAIRS_MAX_POINTS} points; "
                "use pair sampling"
            )
        a2 = np.sort(pair_agreements(c2, kind))
        n_pairs = a2.size
        prefix = np.concatenate(([0.0], np.cumsum(a2)))
        total = float(prefix[-1])
        a2_mean = total / n_pairs

        def chunk_fn(rng, k):
            z11 = dirichlet.sample(d1, rng, k)
            z12 = dirichlet.sample(d1, rng, k)
            a1 = _agreement_rows(kind, z11, z12)
            if kind is IndexKind.NDC:
                # mean over pairs of 1 - |a1 - a2| via sorted prefix sums
                pos = np.searchsorted(a2, a1, side="left")
                below = a1 * pos - prefix[pos]
                above = (total - prefix[pos]) - a1 * (n_pairs - pos)
                return 1.0 - (below + above) / n_pairs
            return a1 * a2_mean + (1.0 - a1) * (1.0 - a2_mean)

    else:

        def chunk_fn(rng, k):
            z11 = dirichlet.sample(d1, rng, k)
            z12 = dirichlet.sample(d1, rng, k)
            a1 = _agreement_rows(kind, z11, z12)
            i, j = _draw_pair_indices(rng, n_points, k)
            a2 = _agreement_rows(kind, rows[i], rows[j])
            return _concordance_values(a1, a2, kind)

    return _mc_run(cfg, 2 * n1 + 2, chunk_fn, model)


def expected_conc_perm(c1: MembershipMatrix, c2: MembershipMatrix,
                       kind: IndexKind, cfg: McConfig,
                       model: str = "perm") -> ExpectationEstimate:
    """Permutation-model expectation for arbitrary (fuzzy or hard) inputs.

    Independent uniform label permutations send any fixed pair of points
    to independent uniform pairs, so the expectation is estimated by
    drawing one pair from each matrix independently per sample.
    """
    require_simplex(c1, "first allocation")
    require_simplex(c2, "second allocation")
    if c1.n_points != c2.n_points:
        raise ValidationError(
            f"allocations disagree on point count: {c1.n_points} vs {c2.n_points}"
        )
    if c1.n_points < 2:
        raise ValidationError("need at least 2 points")
    rows1, rows2 = c1.values, c2.values
    n_points = c1.n_points

    def chunk_fn(rng, k):
        i1, j1 = _draw_pair_indices(rng, n_points, k)
        i2, j2 = _draw_pair_indices(rng, n_points, k)
        a1 = _agreement_rows(kind, rows1[i1], rows1[j1])
        a2 = _agreement_rows(kind, rows2[i2], rows2[j2])
        return _concordance_values(a1, a2, kind)

    return _mc_run(cfg, 2 * (c1.n_clusters + c2.n_clusters), chunk_fn, model)
