"""Poisson kernel, hitting samplers and circle kriging on the unit disk."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dewijs import disk
from dewijs.errors import NotInteriorError


def test_poisson_kernel_from_center_is_uniform():
    for angle in (0.0, 1.0, 3.0, 5.5):
        assert_allclose(disk.poisson_kernel(angle, (0.0, 0.0)),
                        1.0 / (2.0 * math.pi), rtol=1e-15)


def test_poisson_kernel_near_and_far_points():
    assert_allclose(disk.poisson_kernel(0.0, (0.5, 0.0)),
                    3.0 / (2.0 * math.pi), rtol=1e-14)
    assert_allclose(disk.poisson_kernel(math.pi, (0.5, 0.0)),
                    1.0 / (6.0 * math.pi), rtol=1e-14)


def test_poisson_kernel_requires_interior():
    with pytest.raises(NotInteriorError):
        disk.poisson_kernel(0.0, (1.0, 0.0))


def test_poisson_normalization_random_points():
    gen = np.random.default_rng(31)
    worst = 0.0
    for _ in range(50):
        r = 0.9 * math.sqrt(gen.random())
        phi = 2.0 * math.pi * gen.random()
        x0 = (r * math.cos(phi), r * math.sin(phi))
        worst = max(worst, abs(disk.poisson_normalization(x0) - 1.0))
    assert worst <= 1e-10


def test_rotation_equivariance():
    gen = np.random.default_rng(37)
    for _ in range(20):
        r = 0.8 * gen.random()
        phi = 2.0 * math.pi * gen.random()
        x0 = (r * math.cos(phi), r * math.sin(phi))
        theta = 2.0 * math.pi * gen.random()
        rot = 2.0 * math.pi * gen.random()
        x0r = (r * math.cos(phi + rot), r * math.sin(phi + rot))
        assert_allclose(disk.poisson_kernel(theta + rot, x0r),
                        disk.poisson_kernel(theta, x0), rtol=0, atol=1e-12)


def test_harmonic_identity_mean_value():
    # from the center the identity is the mean-value property of log
    assert disk.harmonic_identity_check((0.0, 0.0), (2.0, 0.0)) < 1e-8


def test_harmonic_identity_generic_point():
    assert disk.harmonic_identity_check((0.3, 0.4), (2.0, 0.0)) < 1e-8


def test_harmonic_identity_singular_boundary_point():
    assert disk.harmonic_identity_check((0.0, 0.0), (1.0, 0.0)) < 1e-6
    assert disk.harmonic_identity_check((0.3, -0.2),
                                        (math.cos(2.0), math.sin(2.0))) < 1e-6


def test_harmonic_identity_rejects_interior_y():
    with pytest.raises(ValueError):
        disk.harmonic_identity_check((0.0, 0.0), (0.5, 0.0))


def test_wos_uniform_from_center():
    n = 200_000
    dist = disk.sample_hitting((0.0, 0.0), n, method="wos", seed=2)
    counts, _ = dist.histogram(36)
    p = 1.0 / 36.0
    se = math.sqrt(n * p * (1 - p))
    assert np.max(np.abs(counts - n * p)) < 4.0 * se


def test_wos_matches_poisson_bins():
    n = 200_000
    x0 = (0.5, 0.0)
    dist = disk.sample_hitting(x0, n, method="wos", seed=3)
    counts, _ = dist.histogram(36)
    expected, _ = disk.expected_bin_counts(x0, n, 36)
    se = np.sqrt(expected * (1.0 - expected / n))
    assert np.max(np.abs(counts - expected) / se) < 4.0


def test_sampler_determinism_and_worker_dependence():
    a = disk.sample_hitting((0.3, 0.1), 500, seed=9, workers=2)
    b = disk.sample_hitting((0.3, 0.1), 500, seed=9, workers=2)
    assert np.array_equal(a.angles, b.angles)
    c = disk.sample_hitting((0.3, 0.1), 500, seed=9, workers=3)
    assert not np.array_equal(a.angles, c.angles)


def test_euler_requires_small_step():
    with pytest.raises(ValueError):
        disk.sample_hitting((0.0, 0.0), 10, method="euler", step=0.01)


def test_euler_agrees_with_wos_coarsely():
    n = 20_000
    x0 = (0.5, 0.0)
    w = disk.sample_hitting(x0, n, method="wos", seed=4)
    e = disk.sample_hitting(x0, n, method="euler", seed=5, step=1e-3)
    cw, _ = w.histogram(36)
    ce, _ = e.histogram(36)
    assert disk.total_variation(cw, ce) < 0.05


def test_chi_square_property_over_random_centers():
    gen = np.random.default_rng(41)
    threshold = disk.chi_square_threshold(36)
    below = 0
    for i in range(10):
        r = 0.7 * math.sqrt(gen.random())
        phi = 2.0 * math.pi * gen.random()
        x0 = (r * math.cos(phi), r * math.sin(phi))
        n = 1_000_000
        dist = disk.sample_hitting(x0, n, method="wos", seed=100 + i)
        counts, _ = dist.histogram(36)
        expected, _ = disk.expected_bin_counts(x0, n, 36)
        if disk.chi_square_statistic(counts, expected) < threshold:
            below += 1
    assert below >= 9


def test_circle_kriging_center_uniform():
    res = disk.discretized_circle_kriging((0.0, 0.0), 16)
    assert np.max(np.abs(res.weights - 1.0 / 16.0)) < 1e-9


def test_circle_kriging_sum_and_error():
    res = disk.discretized_circle_kriging((0.5, 0.0), 90)
    assert abs(res.solution.weight_sum - 1.0) <= 1e-10
    assert res.max_error < 1e-3


def test_circle_kriging_needs_enough_segments():
    with pytest.raises(ValueError):
        disk.discretized_circle_kriging((0.0, 0.0), 4)


def test_empirical_samples_lie_on_circle():
    dist = disk.sample_hitting((0.2, -0.4), 100, seed=8)
    assert dist.kind == "empirical"
    assert dist.capped_walks == 0
    assert np.all(dist.angles >= 0.0) and np.all(dist.angles < 2 * math.pi)


def test_wos_cap_warns():
    from dewijs.errors import WalkCapWarning
    with pytest.warns(WalkCapWarning):
        dist = disk.sample_hitting((0.5, 0.0), 20, seed=1, cap=1)
    assert dist.capped_walks > 0


def test_circle_kriging_csv(tmp_path):
    res = disk.discretized_circle_kriging((0.3, 0.0), 12)
    path = tmp_path / "segments.csv"
    with open(path, "w") as fh:
        disk.circle_kriging_to_csv(res, fh)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "segment,theta_start,theta_end,weight,poisson_integral"
    assert len(lines) == 1 + 12
    j, a, b, w, p = lines[1].split(",")
    assert j == "0" and float(a) == 0.0
    assert abs(float(w) - res.weights[0]) < 1e-12
