"""Dirichlet distributions on the simplex: density, sampling, and MLE.

The maximum-likelihood fits (general and symmetric) use the classic
fixed-point iteration on the digamma equations, with a Newton-based
digamma inverse.  Two degenerate regimes are handled explicitly:

* Hard or near-hard data drives the MLE precision toward 0; the limit is
  a categorical distribution with p = alpha / sum(alpha), so the fit
  returns a categorical model instead of a vanishing Dirichlet.
* Nearly constant fuzzy data (every row almost identical) drives the
  precision toward infinity; concentrations are capped so sampling stays
  finite, and the cap is flagged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma, gammaln, polygamma

from .errors import FitNonConvergenceError, ValidationError
from .membership import Classification, MembershipMatrix, classify

CLAMP_EPS = 1e-6
PRECISION_FLOOR = 1e-2
CONCENTRATION_CAP = 1e6
FIT_TOL = 1e-10
FIT_MAX_ITER = 10_000
# relative movement below this at the iteration cap counts as a stall
# (slow geometric tail), not a failure
FIT_STALL_TOL = 1e-3

_DIGAMMA_ONE = float(digamma(1.0))


@dataclass(frozen=True)
class DirichletParams:
    """Concentration vector of a Dirichlet distribution."""

    alpha: np.ndarray
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ValidationError("concentration vector must be a nonempty 1-D array")
        if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0):
            raise ValidationError("concentrations must be positive and finite")
        alpha = alpha.copy()
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def n_dims(self) -> int:
        return self.alpha.size

    @property
    def precision(self) -> float:
        return float(self.alpha.sum())

    def mean(self) -> np.ndarray:
        return self.alpha / self.alpha.sum()


@dataclass(frozen=True)
class CategoricalParams:
    """One-hot sampling distribution; the alpha -> 0 limit of a Dirichlet."""

    p: np.ndarray
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("probability vector must be a nonempty 1-D array")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValidationError("probabilities must be finite and nonnegative")
        if abs(float(p.sum()) - 1.0) > 1e-9:
            raise ValidationError(f"probabilities sum to {float(p.sum())}, expected 1")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def n_dims(self) -> int:
        return self.p.size

    def mean(self) -> np.ndarray:
        return self.p


# a model distribution is either DirichletParams or CategoricalParams
ModelDistribution = object


def describe(d) -> dict:
    """Provenance-friendly summary of a model distribution."""
    if isinstance(d, DirichletParams):
        return {"kind": "dirichlet", "alpha": [float(a) for a in d.alpha],
                "flags": list(d.flags)}
    if isinstance(d, CategoricalParams):
        return {"kind": "categorical", "p": [float(x) for x in d.p],
                "flags": list(d.flags)}
    raise ValidationError(f"not a model distribution: {type(d).__name__}")


def log_pdf(d: DirichletParams, x) -> float:
    """Log density at a point strictly inside the open simplex."""
    if not isinstance(d, DirichletParams):
        raise ValidationError("log_pdf requires Dirichlet parameters")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != d.n_dims:
        raise ValidationError(f"point must be a vector of length {d.n_dims}")
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise ValidationError("density is defined on the open simplex only")
    if abs(float(x.sum()) - 1.0) > 1e-9:
        raise ValidationError(f"coordinates sum to {float(x.sum())}, expected 1")
    a = d.alpha
    log_norm = float(gammaln(a).sum() - gammaln(a.sum()))
    return float(((a - 1.0) * np.log(x)).sum()) - log_norm


def sample(d, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw i.i.d. membership vectors; shape (count, n_dims).

    Dirichlet draws use the generator's gamma/stick-breaking sampler (a
    beta draw in 2 dimensions); categorical draws are one-hot rows via
    inverse-CDF lookup.  Deterministic given the generator state.
    """
    count = int(count)
    if count < 1:
        raise ValidationError("count must be >= 1")
    if isinstance(d, CategoricalParams):
        cdf = np.cumsum(d.p)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, rng.random(count), side="right")
        np.clip(idx, 0, d.n_dims - 1, out=idx)
        out = np.zeros((count, d.n_dims))
        out[np.arange(count), idx] = 1.0
        return out
    if isinstance(d, DirichletParams):
        if d.n_dims == 2:
            x0 = rng.beta(d.alpha[0], d.alpha[1], size=count)
            return np.column_stack((x0, 1.0 - x0))
        return rng.dirichlet(d.alpha, size=count)
    raise ValidationError(f"not a model distribution: {type(d).__name__}")


def _inv_digamma(y: np.ndarray) -> np.ndarray:
    """Newton inverse of digamma; standard 5-step scheme, accurate ~1e-12."""
    y = np.asarray(y, dtype=np.float64)
    x = np.where(y >= -2.22, np.exp(y) + 0.5, -1.0 / (y - _DIGAMMA_ONE))
    for _ in range(5):
        x = x - (digamma(x) - y) / polygamma(1, x)
    return x


def _clamped_rows(m: MembershipMatrix) -> np.ndarray:
    x = np.clip(m.values, CLAMP_EPS, 1.0 - CLAMP_EPS)
    return x / x.sum(axis=1, keepdims=True)


def fit_mle(m: MembershipMatrix, symmetric: bool = False):
    """Maximum-likelihood Dirichlet for the rows of m.

    Rows are clamped into [eps, 1-eps] and renormalized before taking
    logs.  The fixed point solves psi(alpha_i) = psi(sum alpha) + mean
    log x_i (all alpha_i tied when symmetric), stopping when no
    coordinate moves more than 1e-10 or after 10 000 iterations.

    Hard input, or a fitted precision below 0.01, returns the
    categorical limit: p = column means (uniform when symmetric).

    High-precision fits converge geometrically at rate about 1 - 1/sum(alpha),
    so nearly uniform data can still be drifting in the far decimals at the
    iteration cap.  The iterate is accepted with a "max_iterations" flag
    when its relative movement is tiny; a genuinely unstable iteration
    raises instead.  Concentrations are capped at 1e6 (flagged), since
    constant rows push the MLE precision to infinity.
    """
    kind = classify(m)
    if kind is Classification.POSSIBILISTIC:
        raise ValidationError("fit requires rows on the probability simplex")
    if m.n_points < 2:
        raise ValidationError("fit needs at least 2 points")
    n = m.n_clusters
    if kind is Classification.HARD:
        if symmetric:
            p = np.full(n, 1.0 / n)
        else:
            p = m.values.mean(axis=0)
            p = p / p.sum()
        return CategoricalParams(p, flags=("hard_limit",))

    x = _clamped_rows(m)
    mean_log = np.log(x).mean(axis=0)
    col_mean = x.mean(axis=0)

    # method-of-moments start (first-coordinate precision estimate)
    mean_sq = float((x[:, 0] ** 2).mean())
    var0 = mean_sq - float(col_mean[0]) ** 2
    if var0 > 0:
        s0 = (float(col_mean[0]) - mean_sq) / var0
    else:
        s0 = 1.0
    if not np.isfinite(s0) or s0 <= 0:
        s0 = 1.0

    flags = []
    last_moved = np.inf
    if symmetric:
        a = max(s0 / n, CLAMP_EPS)
        target = float(mean_log.mean())
        converged = False
        for _ in range(FIT_MAX_ITER):
            a_new = float(_inv_digamma(digamma(n * a) + target))
            if a_new > CONCENTRATION_CAP:
                a_new = CONCENTRATION_CAP
                flags.append("precision_cap")
                a = a_new
                converged = True
                break
            last_moved = abs(a_new - a)
            a = a_new
            if last_moved < FIT_TOL:
                converged = True
                break
        alpha = np.full(n, a)
    else:
        alpha = np.maximum(s0 * col_mean, CLAMP_EPS)
        converged = False
        for _ in range(FIT_MAX_ITER):
            alpha_new = _inv_digamma(digamma(alpha.sum()) + mean_log)
            if np.any(alpha_new > CONCENTRATION_CAP):
                alpha = np.minimum(alpha_new, CONCENTRATION_CAP)
                flags.append("precision_cap")
                converged = True
                break
            last_moved = float(np.max(np.abs(alpha_new - alpha)))
            alpha = alpha_new
            if last_moved < FIT_TOL:
                converged = True
                break
    alpha = np.asarray(alpha, dtype=np.float64)
    if float(alpha.sum()) < PRECISION_FLOOR:
        if symmetric:
            p = np.full(n, 1.0 / n)
        else:
            p = col_mean / col_mean.sum()
        return CategoricalParams(p, flags=("precision_floor",))
    if not converged:
        stalled = (
            np.all(np.isfinite(alpha))
            and last_moved <= FIT_STALL_TOL * max(1.0, float(np.max(alpha)))
        )
        if not stalled:
            raise FitNonConvergenceError(
                f"no convergence after {FIT_MAX_ITER} iterations "
                f"(last movement {last_moved:.3e})",
                last_alpha=alpha,
            )
        flags.append("max_iterations")
    return DirichletParams(alpha, flags=tuple(flags))


def build_model(m1: MembershipMatrix, m2: MembershipMatrix, model: str):
    """Pair of model distributions for the given family: fit, sym, or flat."""
    name = str(model).lower()
    if name == "fit":
        return fit_mle(m1, symmetric=False), fit_mle(m2, symmetric=False)
    if name == "sym":
        return fit_mle(m1, symmetric=True), fit_mle(m2, symmetric=True)
    if name == "flat":
        return (
            DirichletParams(np.ones(m1.n_clusters)),
            DirichletParams(np.ones(m2.n_clusters)),
        )
    raise ValidationError(f"unknown model family: {model!r}")
