"""Potential kernel, Dirichlet solves, the Dynkin crosscheck, occupation MC."""

import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import (dirichlet_dense_solve, potential_diagonal_exact,
                     potential_series)
from dewijs import lattice
from dewijs.contrasts import from_pairs
from dewijs.errors import NotInteriorError
from dewijs.kernels import lattice_potential_kernel
from dewijs.kriging import KrigingProblem, solve_ordinary_kriging


def test_potential_zero_at_origin(potential_table):
    assert potential_table.lookup(0, 0) == 0.0


def test_potential_nearest_neighbor_against_series_oracle(potential_table):
    oracle = potential_series(1, 0)
    assert abs(oracle - 1.0) < 1e-8
    assert abs(potential_table.lookup(1, 0) - oracle) < 1e-8


def test_potential_diagonal_against_series_oracle(potential_table):
    oracle = potential_series(1, 1)
    assert abs(oracle - 4.0 / math.pi) < 1e-8
    assert abs(potential_table.lookup(1, 1) - oracle) < 1e-8


@pytest.mark.parametrize("n", [2, 5, 11, 16])
def test_potential_diagonal_closed_form(potential_table, n):
    assert_allclose(potential_table.lookup(n, n), potential_diagonal_exact(n),
                    rtol=0, atol=1e-10)


def test_potential_laplacian_identity(potential_table):
    assert potential_table.laplacian_residual() < 1e-10


def test_potential_symmetry_and_sign(potential_table):
    v = potential_table.values
    assert np.min(v) >= 0.0
    assert_allclose(v, v[::-1, :], atol=1e-12)
    assert_allclose(v, v[:, ::-1], atol=1e-12)
    assert_allclose(v, v.T, atol=1e-12)


def test_potential_axis_asymptotics_cauchy(potential_table):
    # a(s,0) - (2/pi) log s settles toward a constant; successive increments
    # must shrink (the constant itself is reported, never asserted)
    cs = [potential_table.lookup(s, 0) - (2.0 / math.pi) * math.log(s)
          for s in range(5, 17)]
    increments = [abs(b - a) for a, b in zip(cs, cs[1:])]
    assert increments[-1] < increments[0]
    assert increments[-1] < 1e-3


def test_potential_lookup_bounds(potential_table):
    with pytest.raises(ValueError):
        potential_table.lookup(17, 0)


def test_potential_csv():
    table = lattice.potential_kernel(1)
    buf = io.StringIO()
    table.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "s,t,a"
    assert len(lines) == 1 + 9


def test_four_neighbor_hitting_probabilities():
    dom = lattice.box_domain(1)
    probs = lattice.hitting_probabilities(dom, (0, 0))
    assert len(probs) == 4
    for v in probs.values():
        assert_allclose(v, 0.25, rtol=0, atol=1e-12)


def test_hitting_probabilities_match_dense_oracle():
    dom = lattice.box_domain(3)
    probs = lattice.hitting_probabilities(dom, (0, 0))
    oracle = dirichlet_dense_solve(dom.interior, dom.boundary, (0, 0))
    for p, v in probs.items():
        assert abs(v - oracle[p]) < 1e-12
    # axis-adjacent boundary points dominate
    top = max(probs.values())
    for p in [(0, 2), (0, -2), (2, 0), (-2, 0)]:
        assert_allclose(probs[p], top, rtol=1e-12)


def test_hitting_probabilities_sum_and_sign():
    dom = lattice.random_simply_connected_domain(25, seed=1)
    for x in dom.interior_order:
        probs = lattice.hitting_probabilities(dom, x)
        vals = np.array(list(probs.values()))
        assert abs(vals.sum() - 1.0) <= 1e-10
        assert vals.min() >= -1e-12


def test_hitting_requires_interior_point():
    dom = lattice.box_domain(3)
    with pytest.raises(NotInteriorError):
        lattice.hitting_probabilities(dom, (5, 5))


def test_domain_invariants_and_io():
    dom = lattice.random_simply_connected_domain(30, seed=7)
    assert not (dom.interior & dom.boundary)
    for x, y in dom.interior:
        for dx, dy in lattice.NEIGHBOR_STEPS:
            assert (x + dx, y + dy) in dom.interior | dom.boundary
    buf = io.StringIO()
    lattice.write_domain(dom, buf)
    buf.seek(0)
    back = lattice.read_domain(buf)
    assert back.interior == dom.interior
    assert back.boundary == dom.boundary


def test_domain_rejects_bad_boundary():
    with pytest.raises(ValueError):
        lattice.LatticeDomain([(0, 0)], [(1, 0), (-1, 0), (0, 1)])


def test_dynkin_four_neighbor(potential_table):
    dom = lattice.box_domain(1)
    assert lattice.dynkin_crosscheck(dom, (0, 0), potential_table) < 1e-10


def test_dynkin_box5_all_interior(potential_table):
    dom = lattice.box_domain(5)
    for x in dom.interior_order:
        assert lattice.dynkin_crosscheck(dom, x, potential_table) < 1e-8


def test_dynkin_box9_offcenter(potential_table):
    dom = lattice.box_domain(9)
    assert lattice.dynkin_crosscheck(dom, (2, 1), potential_table) < 1e-8


def test_kriging_weights_invariant_to_kernel_normalization(potential_table):
    # scaling or shifting -a leaves the weights alone, which is why the
    # unknown proportionality constant of the lattice analogue is harmless
    dom = lattice.box_domain(3)
    kernel = lattice_potential_kernel(potential_table)
    base = solve_ordinary_kriging(
        KrigingProblem(dom.boundary_order, (0, 1), kernel))
    for variant in (kernel.scaled(math.pi), kernel.shifted(2.5),
                    kernel.scaled(0.3).shifted(-1.0)):
        sol = solve_ordinary_kriging(
            KrigingProblem(dom.boundary_order, (0, 1), variant))
        assert np.max(np.abs(sol.weights - base.weights)) < 1e-9


def test_kriged_surface_constant_data(potential_table):
    dom = lattice.box_domain(3)
    data = {p: 4.2 for p in dom.boundary_order}
    res = lattice.kriged_surface_laplacian_residual(dom, data, potential_table)
    assert res < 1e-10


def test_kriged_surface_linear_data(potential_table):
    dom = lattice.box_domain(5)
    data = {p: float(p[0]) for p in dom.boundary_order}
    res = lattice.kriged_surface_laplacian_residual(dom, data, potential_table)
    assert res < 1e-9


def test_kriged_surface_random_data(potential_table):
    gen = np.random.default_rng(13)
    dom = lattice.box_domain(5)
    data = gen.normal(size=len(dom.boundary_order))
    res = lattice.kriged_surface_laplacian_residual(dom, data, potential_table)
    assert res < 1e-8


def test_occupation_empty_contrast_is_exact_zero(potential_table):
    sigma = from_pairs([((0, 0), 1.0), ((1, 0), -1.0)], space="lattice")
    empty = from_pairs([((0, 0), 1.0), ((0, 0), -1.0)], space="lattice")
    res = lattice.occupation_identity_check(sigma, empty, 100, 10,
                                            table=potential_table)
    assert res.estimate == 0.0
    assert res.relative_error == 0.0


def test_occupation_determinism(potential_table):
    sigma = from_pairs([((0, 0), 1.0), ((1, 0), -1.0)], space="lattice")
    r1 = lattice.occupation_identity_check(sigma, sigma, 2000, 400, seed=6,
                                           table=potential_table)
    r2 = lattice.occupation_identity_check(sigma, sigma, 2000, 400, seed=6,
                                           table=potential_table)
    assert r1.estimate == r2.estimate
    assert r1.kernel_value == 2.0 * potential_table.lookup(1, 0)


def test_occupation_small_scale_agreement(potential_table):
    sigma = from_pairs([((0, 0), 1.0), ((1, 0), -1.0)], space="lattice")
    res = lattice.occupation_identity_check(sigma, sigma, 20_000, 40_000,
                                            seed=12, table=potential_table)
    assert res.relative_error < 0.15
    assert np.isfinite(res.calibration)


def test_occupation_rejects_cell_contrasts(potential_table):
    cells = from_pairs([((0, 0), 1.0), ((1, 0), -1.0)], space="lattice",
                       support_kind="cell")
    with pytest.raises(Exception):
        lattice.occupation_identity_check(cells, cells, 100, 10,
                                          table=potential_table)
