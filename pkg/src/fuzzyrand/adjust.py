"""Chance-adjusted indices: (raw - expected) / (max - expected), max = 1.

The random model determines the expectation route:

* perm: closed form for hard inputs, pair-resampling Monte Carlo for
  fuzzy ones (one- and two-sided coincide under this model);
* cat/num/all: hard closed forms only;
* fit/sym/flat: Dirichlet (or limit-categorical) models estimated by
  Monte Carlo, one- or two-sided.

max = 1 is used for both index kinds; the Brouwer index is not reflexive,
so its adjusted value can sit below 1 even for identical fuzzy inputs
(flagged in provenance).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .dirichlet import DirichletParams, build_model, describe, fit_mle
from .errors import DegenerateAdjustmentError, FuzzyRandError, UsageError
from .expectation import (
    McConfig,
    RNG_NAME,
    expected_conc_one_sided,
    expected_conc_perm,
    expected_conc_two_sided,
)
from .hard_models import (
    ClusterSizes,
    expected_ri_all,
    expected_ri_cat,
    expected_ri_num,
    expected_ri_perm,
)
from .indices import IndexKind, raw_index
from .membership import Classification, MembershipMatrix, classify

DEGENERATE_TOL = 1e-9


class ModelFamily(Enum):
    PERM = "perm"
    CAT = "cat"
    NUM = "num"
    ALL = "all"
    FIT = "fit"
    SYM = "sym"
    FLAT = "flat"

    @property
    def is_dirichlet(self) -> bool:
        return self in (ModelFamily.FIT, ModelFamily.SYM, ModelFamily.FLAT)

    @property
    def hard_only(self) -> bool:
        return self in (ModelFamily.CAT, ModelFamily.NUM, ModelFamily.ALL)


class Sided(Enum):
    ONE = "one"
    TWO = "two"


_ONE_SIDED_FAMILIES = (
    ModelFamily.PERM,
    ModelFamily.FIT,
    ModelFamily.SYM,
    ModelFamily.FLAT,
)


@dataclass(frozen=True)
class RandomModel:
    """A model family plus sidedness and the closed-form/exact preference.

    exact_hint=True uses hard closed forms when inputs allow (and exact
    Stirling ratios for num); exact_hint=False forces Monte Carlo for
    perm and the large-N approximation for num.
    """

    family: ModelFamily
    sided: Sided = Sided.TWO
    exact_hint: bool = True

    def __post_init__(self):
        if self.sided is Sided.ONE and self.family not in _ONE_SIDED_FAMILIES:
            raise UsageError(
                f"one-sided adjustment not supported for {self.family.value}"
            )

    @property
    def label(self) -> str:
        return f"{self.family.value}/{self.sided.value}-sided"


@dataclass(frozen=True)
class AdjustedResult:
    raw: float
    expected: float
    adjusted: float
    max_index: float = 1.0
    provenance: dict = field(default_factory=dict)


def _require_hard(model: RandomModel, kinds) -> None:
    if any(k is not Classification.HARD for k in kinds):
        raise UsageError(
            f"{model.family.value} closed form requires hard inputs; "
            "use perm or a Dirichlet model for fuzzy allocations"
        )


def _need_cfg(cfg, model: RandomModel) -> McConfig:
    if cfg is None:
        raise UsageError(
            f"{model.label} needs Monte-Carlo sampling; provide a sampling config"
        )
    return cfg


def _expected(c1, c2, model, kind, cfg, fit_lookup):
    """Expectation value, std_error (None when closed form), extra provenance."""
    kinds = (classify(c1), classify(c2))
    extra = {}
    family = model.family

    if family is ModelFamily.PERM:
        both_hard = all(k is Classification.HARD for k in kinds)
        if both_hard and model.exact_hint:
            value = expected_ri_perm(
                ClusterSizes.from_hard(c1), ClusterSizes.from_hard(c2)
            )
            extra["route"] = "closed-form"
            return value, None, extra
        est = expected_conc_perm(c1, c2, kind, _need_cfg(cfg, model))
        extra["route"] = "monte-carlo"
        return est.value, est.std_error, extra

    if family is ModelFamily.CAT:
        _require_hard(model, kinds)
        value = expected_ri_cat(
            ClusterSizes.from_hard(c1).proportions(),
            ClusterSizes.from_hard(c2).proportions(),
        )
        extra["route"] = "closed-form"
        return value, None, extra

    if family is ModelFamily.NUM:
        _require_hard(model, kinds)
        value = expected_ri_num(
            c1.n_clusters, c2.n_clusters, c1.n_points, exact=model.exact_hint
        )
        extra["route"] = "closed-form" if model.exact_hint else "approximation"
        return value, None, extra

    if family is ModelFamily.ALL:
        _require_hard(model, kinds)
        value = expected_ri_all(c1.n_points)
        extra["route"] = "closed-form"
        return value, None, extra

    # Dirichlet families
    if family is ModelFamily.FLAT:
        d1 = DirichletParams(np.ones(c1.n_clusters))
        d2 = DirichletParams(np.ones(c2.n_clusters))
    else:
        symmetric = family is ModelFamily.SYM
        d1 = fit_lookup(c1, symmetric)
        d2 = fit_lookup(c2, symmetric)
    extra["route"] = "monte-carlo"
    extra["distributions"] = [describe(d1), describe(d2)]
    mc = _need_cfg(cfg, model)
    if model.sided is Sided.ONE:
        est = expected_conc_one_sided(d1, c2, kind, mc)
    else:
        est = expected_conc_two_sided(d1, d2, kind, mc)
    return est.value, est.std_error, extra


def adjusted_index(c1: MembershipMatrix, c2: MembershipMatrix,
                   model: RandomModel, kind: IndexKind = IndexKind.NDC,
                   cfg: McConfig = None, _raw=None,
                   _fit_lookup=None) -> AdjustedResult:
    """Adjusted index of two allocations under one random model.

    raw and expected both live in [0, 1]; the adjusted value is
    (raw - expected) / (1 - expected), which is 1 exactly when raw is 1
    and 0 when the observed similarity matches the model's expectation.
    """
    raw = raw_index(c1, c2, kind) if _raw is None else float(_raw)
    fit_lookup = _fit_lookup if _fit_lookup is not None else fit_mle
    expected, std_error, extra = _expected(c1, c2, model, kind, cfg, fit_lookup)

    provenance = {
        "model": model.family.value,
        "sided": model.sided.value,
        "kind": kind.value,
        "rng": RNG_NAME,
        "samples": None if std_error is None else cfg.samples,
        "seed": None if std_error is None else cfg.seed,
        "workers": None if std_error is None else cfg.workers,
        "std_error": std_error,
    }
    provenance.update(extra)
    flags = []
    for d in extra.get("distributions", ()):
        flags.extend(d.get("flags", ()))
    if kind is IndexKind.BROUWER:
        flags.append("max_not_attained_by_identity")
    provenance["degenerate_flags"] = flags

    if abs(1.0 - expected) < DEGENERATE_TOL:
        raise DegenerateAdjustmentError(
            f"expected index {expected:.12f} leaves no room above chance; "
            "adjusted value undefined"
        )
    adjusted = (raw - expected) / (1.0 - expected)
    return AdjustedResult(
        raw=raw, expected=expected, adjusted=adjusted, provenance=provenance
    )


@dataclass(frozen=True)
class BatchCell:
    pair_index: int
    model: RandomModel
    result: AdjustedResult = None
    error: str = None


def _cell_seed(seed: int, pair_index: int, model_index: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(pair_index, model_index))
    return int(ss.generate_state(1, np.uint64)[0])


def adjusted_batch(pairs, models, kind: IndexKind = IndexKind.NDC,
                   cfg: McConfig = None) -> list:
    """One AdjustedResult per (pair, model); failures recorded, not raised.

    Fitted distributions are cached per matrix content, raw indices per
    pair, and each cell draws its own seed from (seed, pair index, model
    index) so results do not depend on evaluation order.
    """
    fit_cache = {}
    raw_cache = {}

    def fit_lookup(m, symmetric):
        key = (m.content_hash(), symmetric)
        if key not in fit_cache:
            fit_cache[key] = fit_mle(m, symmetric)
        return fit_cache[key]

    cells = []
    for pi, (c1, c2) in enumerate(pairs):
        for mi, model in enumerate(models):
            try:
                raw_key = (c1.content_hash(), c2.content_hash(), kind)
                if raw_key not in raw_cache:
                    raw_cache[raw_key] = raw_index(c1, c2, kind)
                cell_cfg = cfg
                if cfg is not None:
                    cell_cfg = replace(cfg, seed=_cell_seed(cfg.seed, pi, mi))
                result = adjusted_index(
                    c1, c2, model, kind, cell_cfg,
                    _raw=raw_cache[raw_key], _fit_lookup=fit_lookup,
                )
                cells.append(BatchCell(pi, model, result=result))
            except FuzzyRandError as exc:
                cells.append(BatchCell(pi, model, error=str(exc)))
    return cells
