import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyrand import (
    CategoricalParams,
    DirichletParams,
    MembershipMatrix,
    ValidationError,
    build_model,
    fit_mle,
    log_pdf,
    sample,
)
from fuzzyrand.dirichlet import CONCENTRATION_CAP, describe

from conftest import make_fuzzy, one_hot


# --- parameter containers


def test_dirichlet_params_derived_quantities():
    d = DirichletParams([2.0, 6.0])
    assert d.n_dims == 2
    assert d.precision == pytest.approx(8.0)
    assert np.allclose(d.mean(), [0.25, 0.75])


def test_dirichlet_params_rejects_nonpositive():
    with pytest.raises(ValidationError):
        DirichletParams([1.0, 0.0])
    with pytest.raises(ValidationError):
        DirichletParams([1.0, -2.0])
    with pytest.raises(ValidationError):
        DirichletParams([1.0, np.inf])


def test_categorical_params_requires_simplex():
    CategoricalParams([0.7, 0.3])
    with pytest.raises(ValidationError):
        CategoricalParams([0.7, 0.4])
    with pytest.raises(ValidationError):
        CategoricalParams([-0.1, 1.1])


def test_describe_round_trips_parameters():
    d = describe(DirichletParams([1.5, 2.5], flags=("precision_cap",)))
    assert d == {"kind": "dirichlet", "alpha": [1.5, 2.5], "flags": ["precision_cap"]}
    c = describe(CategoricalParams([0.25, 0.75]))
    assert c == {"kind": "categorical", "p": [0.25, 0.75], "flags": []}


# --- density


def test_log_pdf_flat_two_dims_is_zero():
    d = DirichletParams([1.0, 1.0])
    assert log_pdf(d, [0.3, 0.7]) == pytest.approx(0.0, abs=1e-12)


def test_log_pdf_symmetric_two_two():
    d = DirichletParams([2.0, 2.0])
    assert log_pdf(d, [0.5, 0.5]) == pytest.approx(math.log(1.5), abs=1e-12)


def test_log_pdf_flat_three_dims():
    d = DirichletParams([1.0, 1.0, 1.0])
    assert log_pdf(d, [0.2, 0.3, 0.5]) == pytest.approx(math.log(2.0), abs=1e-12)


def test_log_pdf_rejects_boundary_and_non_simplex():
    d = DirichletParams([2.0, 3.0])
    with pytest.raises(ValidationError):
        log_pdf(d, [0.0, 1.0])
    with pytest.raises(ValidationError):
        log_pdf(d, [0.4, 0.7])


def test_log_pdf_integrates_to_one_under_flat_proposal():
    rng = np.random.default_rng(90)
    for alpha in ([2.0, 3.0], [0.8, 1.2, 2.0], [2.0, 2.0, 2.0, 5.0]):
        d = DirichletParams(alpha)
        flat = DirichletParams(np.ones(len(alpha)))
        x = sample(flat, rng, 60_000)
        x = np.clip(x, 1e-12, None)
        x /= x.sum(axis=1, keepdims=True)
        log_ratio = np.array([log_pdf(d, row) - log_pdf(flat, row) for row in x])
        estimate = float(np.mean(np.exp(log_ratio)))
        assert estimate == pytest.approx(1.0, abs=0.01)


# --- sampling


def test_sample_flat_two_dims_mean():
    rng = np.random.default_rng(11)
    draws = sample(DirichletParams([1.0, 1.0]), rng, 1_000_000)
    assert float(draws[:, 0].mean()) == pytest.approx(0.5, abs=0.002)


def test_sample_mean_matches_concentrations():
    rng = np.random.default_rng(12)
    draws = sample(DirichletParams([8.0, 2.0]), rng, 1_000_000)
    assert float(draws[:, 0].mean()) == pytest.approx(0.8, abs=0.002)
    assert float(draws[:, 1].mean()) == pytest.approx(0.2, abs=0.002)


def test_sample_categorical_is_one_hot_with_right_frequencies():
    rng = np.random.default_rng(13)
    draws = sample(CategoricalParams([0.7, 0.3]), rng, 1_000_000)
    assert set(np.unique(draws)) == {0.0, 1.0}
    assert np.all(draws.sum(axis=1) == 1.0)
    assert float(draws[:, 0].mean()) == pytest.approx(0.7, abs=0.002)


def test_sample_moments_match_dirichlet_formulas():
    alpha = np.array([2.0, 5.0, 3.0])
    d = DirichletParams(alpha)
    rng = np.random.default_rng(14)
    draws = sample(d, rng, 1_000_000)
    total = alpha.sum()
    mean = alpha / total
    var = alpha * (total - alpha) / (total * total * (total + 1.0))
    for k in range(3):
        se_mean = math.sqrt(var[k] / draws.shape[0])
        assert float(draws[:, k].mean()) == pytest.approx(mean[k], abs=3 * se_mean)
        sample_var = float(draws[:, k].var())
        # variance of the sample variance, normal approximation
        fourth = float(((draws[:, k] - mean[k]) ** 4).mean())
        se_var = math.sqrt(max(fourth - var[k] ** 2, 0.0) / draws.shape[0])
        assert sample_var == pytest.approx(var[k], abs=3 * se_var + 1e-9)


def test_sample_deterministic_given_seed():
    d = DirichletParams([1.5, 2.5, 3.0])
    a = sample(d, np.random.default_rng(55), 1000)
    b = sample(d, np.random.default_rng(55), 1000)
    assert np.array_equal(a, b)


def test_sample_tiny_concentrations_stay_on_simplex():
    d = DirichletParams([0.05, 0.05, 0.05])
    draws = sample(d, np.random.default_rng(16), 100_000)
    assert np.all(np.isfinite(draws))
    assert np.all(draws >= 0.0)
    assert np.allclose(draws.sum(axis=1), 1.0, atol=1e-6)


def test_sample_rejects_bad_count():
    with pytest.raises(ValidationError):
        sample(DirichletParams([1.0, 1.0]), np.random.default_rng(0), 0)


# --- maximum likelihood


def test_fit_recovers_known_concentrations():
    d = DirichletParams([2.0, 5.0])
    draws = sample(d, np.random.default_rng(21), 100_000)
    fitted = fit_mle(MembershipMatrix(draws))
    assert isinstance(fitted, DirichletParams)
    assert np.allclose(fitted.alpha, [2.0, 5.0], rtol=0.02)


def test_symmetric_fit_recovers_shared_concentration():
    d = DirichletParams([3.0, 3.0, 3.0, 3.0])
    draws = sample(d, np.random.default_rng(22), 100_000)
    fitted = fit_mle(MembershipMatrix(draws), symmetric=True)
    assert isinstance(fitted, DirichletParams)
    assert np.allclose(fitted.alpha, fitted.alpha[0])
    assert fitted.alpha[0] == pytest.approx(3.0, abs=0.06)


@settings(max_examples=8)
@given(
    st.lists(st.floats(0.5, 10.0), min_size=2, max_size=8),
    st.integers(0, 2**31 - 1),
)
def test_fit_recovery_within_five_percent(alpha, seed):
    d = DirichletParams(alpha)
    draws = sample(d, np.random.default_rng(seed), 100_000)
    fitted = fit_mle(MembershipMatrix(draws))
    assert isinstance(fitted, DirichletParams)
    assert np.allclose(fitted.alpha, alpha, rtol=0.05)


def test_fit_on_hard_matrix_returns_cluster_proportions():
    m = MembershipMatrix(one_hot([0] * 7 + [1, 2]))
    fitted = fit_mle(m)
    assert isinstance(fitted, CategoricalParams)
    assert np.allclose(fitted.p, [7 / 9, 1 / 9, 1 / 9])
    assert "hard_limit" in fitted.flags


def test_symmetric_fit_on_hard_matrix_is_uniform():
    m = MembershipMatrix(one_hot([0, 0, 1, 2, 2]))
    fitted = fit_mle(m, symmetric=True)
    assert isinstance(fitted, CategoricalParams)
    assert np.allclose(fitted.p, [1 / 3, 1 / 3, 1 / 3])


def test_fit_concentrates_hard_on_u_shaped_data():
    # extreme data pushes the fit toward the categorical limit, but the
    # 1e-6 clamp bounds the mean log, so the precision stays well above
    # the degenerate threshold and a Dirichlet comes back
    d = DirichletParams([0.004, 0.004])
    draws = sample(d, np.random.default_rng(23), 2000)
    draws = np.clip(draws, 1e-9, 1 - 1e-9)
    draws = draws / draws.sum(axis=1, keepdims=True)
    fitted = fit_mle(MembershipMatrix(draws))
    assert isinstance(fitted, DirichletParams)
    assert fitted.precision < 0.5


def test_fit_caps_diverging_concentrations_on_constant_rows():
    rows = np.tile([0.4, 0.6], (50, 1))
    fitted = fit_mle(MembershipMatrix(rows))
    assert isinstance(fitted, DirichletParams)
    assert "precision_cap" in fitted.flags
    assert np.all(np.isfinite(fitted.alpha))
    assert np.max(fitted.alpha) <= CONCENTRATION_CAP * (1 + 1e-9)


def test_fit_accepts_slow_tail_at_iteration_cap(toys):
    # nearly-uniform rows give a huge but finite MLE precision whose
    # fixed-point iteration moves geometrically slowly; the iterate at the
    # cap is accepted and flagged instead of raising
    fitted = fit_mle(toys.high_fuzzy)
    assert isinstance(fitted, DirichletParams)
    assert "max_iterations" in fitted.flags
    assert np.all(np.isfinite(fitted.alpha))
    assert fitted.precision > 1000.0


def test_fit_rejects_single_row():
    with pytest.raises(ValidationError):
        fit_mle(MembershipMatrix([[0.5, 0.5]]))


def test_fit_rejects_possibilistic():
    with pytest.raises(ValidationError):
        fit_mle(MembershipMatrix([[0.5, 0.7], [0.6, 0.6]]))


# --- model constructors


def test_build_model_flat_ignores_data():
    m1 = MembershipMatrix(one_hot([0, 1, 2]))
    m2 = MembershipMatrix(one_hot([0, 1, 0]))
    d1, d2 = build_model(m1, m2, "flat")
    assert isinstance(d1, DirichletParams) and np.allclose(d1.alpha, [1, 1, 1])
    assert isinstance(d2, DirichletParams) and np.allclose(d2.alpha, [1, 1])


def test_build_model_sym_on_hard_is_uniform_categorical():
    m = MembershipMatrix(one_hot([0, 0, 1, 1, 2, 2]))
    d1, d2 = build_model(m, m, "sym")
    for d in (d1, d2):
        assert isinstance(d, CategoricalParams)
        assert np.allclose(d.p, [1 / 3, 1 / 3, 1 / 3])


def test_build_model_fit_on_toy_hard_pair(toys):
    d1, d2 = build_model(toys.uneven_hard, toys.even_hard, "fit")
    assert np.allclose(d1.p, [7 / 9, 1 / 9, 1 / 9])
    assert np.allclose(d2.p, [1 / 3, 1 / 3, 1 / 3])


def test_build_model_rejects_unknown_name():
    m = MembershipMatrix(one_hot([0, 1]))
    with pytest.raises(ValidationError):
        build_model(m, m, "fitt")
