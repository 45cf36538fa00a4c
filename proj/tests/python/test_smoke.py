import math

import numpy as np
import pytest

import rank1horn as rh


def test_additive_sample_shape_and_trace():
    x = rh.sample("additive", [1.0, 0.0], b=1.0, n=50, seed=7)
    assert x.shape == (50, 2)
    assert np.all(np.abs(x.sum(axis=1) - 2.0) < 1e-9)
    assert np.all((x[:, 0] > 1.0) & (x[:, 0] < 2.0))
    assert np.all((x[:, 1] > 0.0) & (x[:, 1] < 1.0))


def test_sampling_is_reproducible_across_threads():
    a = rh.sample("additive", [2.0, 1.0, 0.0], b=0.5, method="oracle", n=200, seed=3, threads=1)
    b = rh.sample("additive", [2.0, 1.0, 0.0], b=0.5, method="oracle", n=200, seed=3, threads=4)
    assert np.array_equal(a, b)


def test_secular_and_oracle_agree():
    kw = dict(b=1.0, n=4000, seed=11)
    sec = rh.sample("additive", [1.0, 0.0], **kw)
    ora = rh.sample("additive", [1.0, 0.0], method="oracle", stream=1 << 40, **kw)
    for k in range(2):
        assert rh.ks_two_sample(sec[:, k], ora[:, k])["pass"]


def test_roots_round_trip():
    a = [3.0, 1.5, 0.0, -1.0]
    w = [0.1, 0.2, 0.3, 0.4]
    roots = rh.additive_roots(a, w, 0.8)["eigenvalues"]
    assert sum(roots) == pytest.approx(sum(a) + 0.8, abs=1e-12)
    assert rh.weights_from_roots_additive(a, roots, 0.8) == pytest.approx(w, abs=1e-12)

    mu = rh.projection_roots(a, w)["eigenvalues"]
    assert rh.weights_from_roots_projection(a, mu) == pytest.approx(w, abs=1e-12)

    theta = [0.3, 2.0, 4.5]
    q = [0.2, 0.5, 0.3]
    psi = rh.multiplicative_roots(theta, q, 1.1)["eigenvalues"]
    assert rh.weights_from_roots_multiplicative(theta, psi, 1.1) == pytest.approx(q, abs=1e-12)


def test_densities():
    assert rh.pdf_additive([1.0, 0.0], 0.5, [1.2]) > 0.0
    assert rh.pdf_additive([1.0, 0.0], 0.5, [1.6]) == 0.0
    assert rh.pdf_quadratic_form([0.0, 2.0], 0.7) == pytest.approx(0.5)
    grid = np.linspace(1.0, 1.5, 20001)
    vals = np.array([rh.pdf_additive([1.0, 0.0], 0.5, [t]) for t in grid])
    mass = np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid))
    assert mass == pytest.approx(1.0, abs=1e-4)


def test_hciz():
    assert rh.hciz([1.0, 0.0], [1.0, 0.0]) == pytest.approx(math.e - 1.0, abs=1e-12)
    assert rh.hciz([3.0], [2.0]) == pytest.approx(math.exp(6.0))
    mean, se = rh.hciz_monte_carlo([1.0, 0.0], [1.0, 0.0], 20000, seed=2)
    assert abs(mean - (math.e - 1.0)) < 4.0 * se


def test_reports():
    r = rh.roundtrip_additive([2.0, 1.0, 0.0, -1.0], 0.7, 100, seed=1)
    assert r["pass"]
    assert set(r) == {"test_name", "statistic", "threshold", "n_samples", "pass", "details"}
    assert rh.change_of_variables_check([2.0, 1.0, 0.0, -1.0], 0.7, 20, seed=1)["pass"]


def test_errors_are_raised():
    with pytest.raises(rh.Rank1HornError, match="OrderViolation"):
        rh.sample("additive", [0.0, 1.0], b=1.0)
    with pytest.raises(ValueError):
        rh.sample("additive", [1.0, 0.0], b=-1.0)
    with pytest.raises(rh.Rank1HornError):
        rh.hciz([1.0, 1.0], [1.0, 0.0])
