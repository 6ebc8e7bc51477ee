import math

import numpy as np
import pytest

from splitnoise.errors import DomainError, PreconditionError
from splitnoise.sampling import EstimateWithError, derive_rng
from splitnoise.theorem import (
    arcsine_nodes,
    arcsine_theta,
    entrance_start_time,
    rhs_factors,
    rhs_integral,
    sensitivity_curve,
    verify_theorem,
)
from splitnoise.timesets import TimeSet, affine_preimage

EMPTY = TimeSet.empty()
FULL = TimeSet.full()
QUARTER_HALF = TimeSet.parse("1/4..1/2")


def test_arcsine_substitution_is_exact():
    assert arcsine_theta(0.0) == 0.0
    assert arcsine_theta(1.0) == pytest.approx(1.0, abs=1e-15)
    assert arcsine_theta(0.5) == pytest.approx(0.5, abs=1e-15)


def test_arcsine_nodes_weights():
    nodes = arcsine_nodes(0.0, 1.0, 64)
    assert sum(n.weight for n in nodes) == pytest.approx(1.0, abs=1e-12)
    half = arcsine_nodes(0.0, 0.5, 64)
    assert sum(n.weight for n in half) == pytest.approx(0.5, abs=1e-12)
    assert all(0.0 < n.t < 0.5 for n in half)
    with pytest.raises(DomainError):
        arcsine_nodes(0.5, 0.25, 4)
    with pytest.raises(DomainError):
        arcsine_nodes(0.0, 1.0, 0)


def test_arcsine_mean_against_argmin_simulation():
    # quadrature of f(t)=t gives the arc-sine mean 1/2; cross-check with
    # the argmin time of a simulated Brownian path
    nodes = arcsine_nodes(0.0, 1.0, 256)
    quad = sum(n.weight * n.t for n in nodes)
    assert quad == pytest.approx(0.5, abs=1e-6)

    rng = derive_rng(100, 0)
    n_grid, n_samples = 2048, 20_000
    db = rng.standard_normal((n_samples, n_grid)) / math.sqrt(n_grid)
    cs = np.cumsum(db, axis=1)
    inner = cs.argmin(axis=1) + 1
    idx = np.where(cs.min(axis=1) >= 0, 0, inner)
    g = idx / n_grid
    se = g.std() / math.sqrt(n_samples)
    assert abs(g.mean() - quad) < 4 * se


def test_entrance_start_rule():
    assert entrance_start_time(0.08) == pytest.approx(0.01)
    assert entrance_start_time(1e-9) == 1e-9  # never beyond the gap
    assert entrance_start_time(2.0**-15) == 2.0**-16  # floored below gap/8


def test_rhs_factors_empty_sides():
    left, right = rhs_factors(0.6, QUARTER_HALF, 0.5, 100, seed=1, n_steps=64)
    assert right == EstimateWithError.exact(1.0)
    assert left.n_samples == 100

    left, right = rhs_factors(0.1, QUARTER_HALF, 0.5, 100, seed=1, n_steps=64)
    assert left == EstimateWithError.exact(1.0)
    assert right.n_samples == 100

    with pytest.raises(PreconditionError):
        rhs_factors(0.3, QUARTER_HALF, 0.5, 100, seed=1)


def test_rhs_factor_pullback_set():
    # at t=1/4 the region [1/2,3/4] seen from the right is [1/3,2/3]
    pulled = affine_preimage(TimeSet.parse("1/2..3/4"), 1.0 - 0.25, 0.25)
    assert pulled[0][0] == pytest.approx(1 / 3)
    assert pulled[0][1] == pytest.approx(2 / 3)


def test_rhs_factors_at_rho_one_are_mass_conservation():
    # all correlations 1: both factors reduce to the entrance mass, i.e. 1
    left, right = rhs_factors(0.6, QUARTER_HALF, 1.0, 20_000, seed=2, n_steps=256)
    assert right.mean == 1.0
    assert abs(left.mean - 1.0) < 4 * left.stderr


def test_rhs_integral_edge_cases():
    assert rhs_integral(EMPTY, 0.5, 8, 100, seed=3) == EstimateWithError.exact(1.0)
    assert rhs_integral(FULL, 0.5, 8, 100, seed=3) == EstimateWithError.exact(0.0)


def test_rhs_integral_frozen_regression_value():
    # pinned by the first cross-validated high-precision run (48 nodes x
    # 50k samples, 1536 steps): rhs = 0.62703 +- 0.00075 for this pair,
    # in agreement with the direct route at 2^13/2^14 grids
    est = rhs_integral(QUARTER_HALF, 0.5, 16, 10_000, seed=12, n_steps=512)
    assert est.mean == pytest.approx(0.62703, abs=4 * est.stderr + 2e-3)
    assert 0.0 < est.mean < 1.0


def test_rhs_integral_monotone_in_region():
    small = rhs_integral(QUARTER_HALF, 0.5, 8, 4000, seed=4, n_steps=256)
    large = rhs_integral(TimeSet.parse("1/4..1/2,5/8..3/4"), 0.5, 8, 4000,
                         seed=5, n_steps=256)
    tol = 4 * math.hypot(small.stderr, large.stderr)
    assert small.mean >= large.mean - tol
    rows = small.extra["nodes"]
    assert {r["component"] for r in rows} == {0, 1}
    assert all(0 < r["t"] < 1 for r in rows)


def test_verify_theorem_empty_region():
    report = verify_theorem(EMPTY, 0.7, seed=6, lhs_n_grid=128, lhs_samples=500,
                            n_nodes=4, node_samples=100)
    assert report.lhs.mean == 1.0
    assert report.rhs.mean == 1.0
    assert report.passed
    assert report.combined_stderr == 0.0


def test_verify_theorem_full_region_rhs_zero():
    report = verify_theorem(FULL, 0.5, seed=7, lhs_n_grid=1 << 12,
                            lhs_samples=4000, n_nodes=4, node_samples=100)
    assert report.rhs.mean == 0.0
    assert report.lhs.mean < 0.05  # grid coincidences vanish with refinement


def test_verify_theorem_small_case_passes():
    report = verify_theorem(QUARTER_HALF, 0.5, seed=8, lhs_n_grid=1 << 10,
                            lhs_samples=5000, n_nodes=8, node_samples=5000,
                            node_steps=256)
    assert report.passed
    assert abs(report.discrepancy) <= 4 * report.combined_stderr
    d = report.as_dict()
    assert d["pass"] and "nodes" not in d["rhs"]


def test_sensitivity_curve_identical_at_rho_one():
    rows = sensitivity_curve(1.0, [4, 8, 16], 100, seed=9)
    assert all(est.mean == 1.0 and est.stderr == 0.0 for _, est in rows)


def test_sensitivity_curve_decreasing_trend():
    rows = sensitivity_curve(0.5, [8, 64, 1024], 20_000, seed=10)
    vals = [est.mean for _, est in rows]
    assert vals[0] > vals[1] > vals[2]
    with pytest.raises(DomainError):
        sensitivity_curve(0.5, [8, 8], 100, seed=11)
