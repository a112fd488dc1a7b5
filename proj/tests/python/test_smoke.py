"""Smoke tests for the Python bindings."""

import math

import pytest

import snsqkd


def test_scalar_helpers():
    assert snsqkd.binary_entropy(0.5) == pytest.approx(1.0)
    assert snsqkd.binary_entropy(0.0) == 0.0
    assert snsqkd.poisson_pmf(0, 0.3) == pytest.approx(math.exp(-0.3))
    assert snsqkd.transmittance(100.0, 0.01) == pytest.approx(0.1)
    assert snsqkd.slice_acceptance_probability(2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        snsqkd.binary_entropy(1.5)


def test_source_equivalence():
    eq = snsqkd.check_source_equivalence(1.2, 4.5)
    assert eq.mixture_distance < 1e-12
    assert eq.unitarity_deviation < 1e-12


def default_params(windows):
    p = snsqkd.ProtocolParams()
    p.mu = 0.12
    p.epsilon = 0.02
    p.p_x = 0.05
    p.lambda_ = 0.1
    p.n_windows = windows
    return p


def test_analytic_pipeline_positive_rate():
    params = default_params(10**12)
    ch = snsqkd.ChannelModel.paper_channel(50.0, 0.1)
    counts = snsqkd.expected_observables(params, ch)
    bounds = snsqkd.analyze(counts, params)
    assert not bounds.collapsed()
    assert bounds.R > 0.0
    assert 0.0 < bounds.e1ph_U < 0.5


def test_monte_carlo_determinism_and_analysis():
    params = default_params(500_000)
    ch = snsqkd.ChannelModel.paper_channel(50.0, 0.1)
    a = snsqkd.monte_carlo_observables(params, ch, 7)
    b = snsqkd.monte_carlo_observables(params, ch, 7)
    assert a.counts.n_t == b.counts.n_t
    assert a.counts.N_C == b.counts.N_C
    assert a.truth.true_n1 == b.truth.true_n1

    opts = snsqkd.McOptions()
    opts.seed = 7
    opts.threads = 2
    c = snsqkd.monte_carlo_observables(params, ch, opts)
    assert c.counts.n_t == a.counts.n_t


def test_optimize_single_distance():
    space = snsqkd.SearchSpace()
    space.mu_min = 0.05
    space.mu_max = 0.6
    space.eps_min = 0.01
    space.eps_max = 0.2
    space.lambda_min = 0.2
    space.lambda_max = 1.0
    space.px_min = 0.1
    space.px_max = 0.3
    space.grid_points = 4
    result = snsqkd.optimize(snsqkd.ChannelModel.paper_channel(50.0, 0.1), space)
    assert result.bounds.R > 0.0
    rows = snsqkd.sweep([50.0], snsqkd.ChannelModel.paper_channel(0.0, 0.1), space)
    assert len(rows) == 1
    assert rows[0].bounds.R == pytest.approx(result.bounds.R)
