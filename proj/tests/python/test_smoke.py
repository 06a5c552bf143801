"""Smoke tests for the python surface. Numerical correctness lives in the
C++ suites; these check that the bindings wire through and that a few
end-to-end values round-trip."""

import math
import os

import numpy as np
import pytest

import mixkit


DATA_DIR = os.environ.get("MIXKIT_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_exact_summary_constant_sample():
    data = mixkit.Dataset.univariate_count([0] * 10)
    fam = mixkit.family("poisson")
    prior = mixkit.PriorSpec.default_for(fam, 2, data)
    s = mixkit.exact_summary(data, 2, fam, prior)
    assert s["distinct_statistics"] == 11
    assert s["total_multiplicity"] == "1024"
    assert math.isfinite(s["log_marginal"])


def test_exact_evidence_matches_summary():
    data = mixkit.Dataset.univariate_count([1, 0, 3, 1, 6, 2])
    fam = mixkit.family("poisson")
    prior = mixkit.PriorSpec.default_for(fam, 2, data)
    s = mixkit.exact_summary(data, 2, fam, prior)
    e = mixkit.exact_evidence(data, 2, fam, prior)
    assert e["log_marginal"] == pytest.approx(s["log_marginal"], abs=1e-12)


def test_sampler_trace_shape_and_determinism():
    data = mixkit.Dataset.univariate_count([1, 0, 3, 1, 6, 2])
    fam = mixkit.family("poisson")
    prior = mixkit.PriorSpec.default_for(fam, 2, data)
    cfg = mixkit.ChainConfig()
    cfg.iterations = 500
    cfg.seed = 7
    a = mixkit.sample(data, 2, fam, prior, cfg)
    b = mixkit.sample(data, 2, fam, prior, cfg)
    ma, mb = a.matrix(), b.matrix()
    assert ma.shape == (450, 4)  # default burn-in is 10%
    assert a.column_names == ["p.1", "p.2", "lambda.1", "lambda.2"]
    np.testing.assert_array_equal(ma, mb)
    np.testing.assert_array_equal(a.log_lik, b.log_lik)
    # Weights lie on the simplex.
    np.testing.assert_allclose(ma[:, 0] + ma[:, 1], 1.0, atol=1e-12)


def test_evidence_estimators_agree_with_exact():
    data = mixkit.Dataset.univariate_count([1, 0, 3, 1, 6, 2])
    fam = mixkit.family("poisson")
    prior = mixkit.PriorSpec.default_for(fam, 2, data)
    exact = mixkit.exact_evidence(data, 2, fam, prior)["log_marginal"]

    cfg = mixkit.ChainConfig()
    cfg.iterations = 4000
    cfg.seed = 11
    cfg.store_allocations = True
    trace = mixkit.sample(data, 2, fam, prior, cfg)

    ch = mixkit.chib(trace, data, prior, symmetrize=True, seed=12)
    assert ch["log_marginal"] == pytest.approx(exact, abs=5 * ch["mc_std_err"] + 0.05)

    mc = mixkit.prior_monte_carlo(data, 2, fam, prior, draws=200000, seed=13)
    assert mc["log_marginal"] == pytest.approx(exact, abs=5 * mc["mc_std_err"])

    gd = mixkit.gelfand_dey(trace, data, prior, kind="fitted")
    assert math.isfinite(gd["log_marginal"])


def test_relabel_and_point_estimates():
    data, labels = mixkit.simulate_t_benchmark(300, seed=5)
    assert len(data) == 300 and set(labels) <= {0, 1}
    fam = mixkit.family("student-t")
    prior = mixkit.PriorSpec.default_for(fam, 2, data)
    cfg = mixkit.ChainConfig()
    cfg.iterations = 1500
    cfg.seed = 6
    trace = mixkit.sample(data, 2, fam, prior, cfg, nu_known=[5.0, 11.0])
    rel = mixkit.reorder_trace(trace, prior)
    assert rel.relabeled and not trace.relabeled
    np.testing.assert_allclose(rel.log_lik, trace.log_lik)
    est = mixkit.point_estimates(rel)
    mu_lo, mu_hi = sorted([est["mean"][2], est["mean"][5]])
    assert abs(mu_lo - 0.0) < 1.0 and abs(mu_hi - 5.0) < 1.0


def test_loaders_and_standardize():
    galaxy = mixkit.load_univariate(os.path.join(DATA_DIR, "galaxy.txt"))
    z = mixkit.standardize(galaxy)
    assert len(z) == len(galaxy)
    assert abs(sum(z.reals)) < 1e-9
    st = mixkit.load_binary_matrix(os.path.join(DATA_DIR, "stouffer_toby.csv"), 4)
    assert len(st) == 216


def test_error_taxonomy():
    with pytest.raises(mixkit.DataError):
        mixkit.load_univariate("definitely_missing.txt")
    data = mixkit.Dataset.univariate_count([0, 1, 2])
    fam = mixkit.family("normal")
    prior = mixkit.PriorSpec.default_for(mixkit.family("poisson"), 2, data)
    with pytest.raises(mixkit.ValidationError):
        mixkit.exact_summary(data, 2, fam, prior)
    with pytest.raises(mixkit.UsageError):
        mixkit.sample(data, 2, mixkit.family("poisson"), prior, mixkit.ChainConfig(),
                      sampler="nope")
