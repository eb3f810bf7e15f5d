"""End-to-end smoke tests for the python bindings.

Exercises each exposed surface once against hand-computed values; the
exhaustive checks live in the C++ test suites.
"""

import math

import numpy as np
import pytest

import sgdcert


@pytest.fixture
def pair():
    return sgdcert.scaled_quadratic([1.0, 3.0], [0.0], seed=1)


def test_constants_and_window(pair):
    c = sgdcert.compute_constants(pair)
    assert c.L == pytest.approx(2.0, abs=1e-15)
    assert c.mu == pytest.approx(2.0, abs=1e-15)
    assert c.B == pytest.approx(1.5, abs=1e-15)
    assert sgdcert.max_stable_step(c.L, c.B) == pytest.approx(4.0 / 9.0, abs=1e-15)
    assert sgdcert.reference_step(c.L, c.B) == pytest.approx(2.0 / 9.0, abs=1e-15)
    assert sgdcert.geometric_rate(c.mu, c.L, c.B, 2.0 / 9.0) == pytest.approx(
        5.0 / 9.0, abs=1e-15
    )


def test_exact_one_step_oracle(pair):
    expected = pair.exact_expected_one_step(np.array([1.0]), 2.0 / 9.0)
    assert expected == pytest.approx(29.0 / 81.0, abs=1e-15)
    rhs = sgdcert.descent_bound_rhs(pair.value([1.0]), 4.0, 2.0 / 9.0, 2.0, 1.5)
    assert rhs == pytest.approx(5.0 / 9.0, abs=1e-15)
    assert expected <= rhs


def test_error_moment_and_growth(pair):
    x = np.array([1.0])
    assert pair.error_second_moment(x) == pytest.approx(1.0, abs=1e-15)
    assert pair.growth_ratio(x) == pytest.approx(1.5, abs=1e-15)


def test_sublinear_bound_values():
    assert sgdcert.sublinear_bound(1.5, 2.0, 1.0, 1.0, 1) == pytest.approx(3.5)
    assert sgdcert.sublinear_bound(1.0, 2.0, 5.0, 1.0, 1) == pytest.approx(1.0)
    assert sgdcert.sublinear_bound(1.0, 4.0, 0.0, 3.0, 2) == pytest.approx(9.0)


def test_run_shapes_and_determinism(pair):
    out = sgdcert.run(pair, "sgd", 2.0 / 9.0, 10, seed=42)
    assert len(out["gap"]) == 11
    assert out["gap"][0] == pytest.approx(1.0, abs=1e-15)
    assert all(math.isfinite(g) for g in out["gap"])
    assert len(out["grad_norm"]) == 11
    assert len(out["dist_to_opt"]) == 11
    assert np.asarray(out["final"]).shape == (1,)
    assert out["diverged_at"] is None

    again = sgdcert.run(pair, "sgd", 2.0 / 9.0, 10, seed=42)
    assert out["gap"] == again["gap"]
    other = sgdcert.run(pair, "sgd", 2.0 / 9.0, 10, seed=43)
    assert out["gap"] != other["gap"]


def test_gd_closed_form(pair):
    out = sgdcert.run(pair, "gd", 0.25, 6, x0=np.array([1.0]))
    for k, gap in enumerate(out["gap"]):
        assert gap == pytest.approx(0.25**k, rel=1e-12)


def test_least_squares_interpolation():
    p = sgdcert.consistent_least_squares(12, 5, 5, 10.0, seed=7)
    assert p.components == 12
    assert p.dimension == 5
    c = sgdcert.compute_constants(p)
    assert c.mu > 0 and c.L >= c.mu and c.B >= 1.0
    assert np.linalg.norm(p.gradient(p.minimizer)) < 1e-10
    for i in range(p.components):
        assert np.linalg.norm(p.component_gradient(i, p.minimizer)) < 1e-10
    emp = sgdcert.estimate_growth_constant(p, n_samples=200, seed=3)
    assert 1.0 <= emp <= c.B + 1e-9


def test_fit_geometric_rate():
    gaps = [0.5**k for k in range(30)]
    assert sgdcert.fit_geometric_rate(gaps) == pytest.approx(0.5, abs=1e-12)


def test_exception_mapping(pair):
    with pytest.raises(ValueError):
        sgdcert.scaled_quadratic([], [], seed=0)
    # At the minimizer every gradient vanishes: the ratio resolves to 1.
    assert pair.growth_ratio(np.array([0.0])) == 1.0
    with pytest.raises(sgdcert.WindowViolation):
        sgdcert.geometric_rate(2.0, 2.0, 1.5, 0.5)
    assert issubclass(sgdcert.ContractViolation, ValueError)
    assert issubclass(sgdcert.GrowthViolation, RuntimeError)
