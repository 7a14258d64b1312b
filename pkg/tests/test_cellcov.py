"""Cell-averaged log covariance against its independent oracles."""

import io
import math


from numpy.testing import assert_allclose

from oracles import cell_cov_zero_lag_mc
from dewijs import cellcov

# frozen from the Monte Carlo oracle (1e7 pairs, seed 123: 0.805083 +- 2e-4)
# and confirmed by the quadrature at two resolutions
ZERO_LAG_VALUE = 0.8050867219500707


def test_zero_lag_value_frozen():
    assert_allclose(cellcov.cell_cov(0, 0), ZERO_LAG_VALUE, rtol=0, atol=1e-9)


def test_zero_lag_against_monte_carlo_oracle():
    estimate, stderr = cell_cov_zero_lag_mc(10_000_000, seed=123)
    assert abs(cellcov.cell_cov(0, 0) - estimate) < 3.0 * stderr


def test_dihedral_symmetry():
    for s, t in [(0, 1), (1, 2), (3, 5), (2, 2)]:
        vals = {cellcov.cell_cov(a, b)
                for a, b in [(s, t), (t, s), (-s, t), (s, -t), (-t, -s)]}
        assert max(vals) - min(vals) <= 1e-12


def test_far_field_matches_point_log():
    assert abs(cellcov.cell_cov(100, 0) + math.log(100.0)) < 1e-3


def test_regularization_decays_monotonically_on_axis():
    deviations = [abs(cellcov.cell_cov(s, 0) + math.log(float(s)))
                  for s in range(5, 16)]
    assert all(d2 <= d1 for d1, d2 in zip(deviations, deviations[1:]))


def test_cache_hits_are_identical():
    first = cellcov.cell_cov(4, 7)
    assert cellcov.cell_cov(-7, 4) == first
    assert cellcov.cache_size() >= 1


def test_adjacent_and_diagonal_lags_finite():
    for lag in [(0, 0), (0, 1), (1, 1)]:
        v = cellcov.cell_cov(*lag)
        assert math.isfinite(v)


def test_csv_export_format():
    buf = io.StringIO()
    cellcov.export_csv(1, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "s,t,value"
    assert len(lines) == 1 + 9
    s, t, v = lines[1].split(",")
    assert (int(s), int(t)) == (-1, -1)
    assert_allclose(float(v), cellcov.cell_cov(1, 1), rtol=1e-10)
