import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helly_select.exceptions import OriginNotInteriorError, PreconditionError, UnboundedError
from helly_select.grunbaum import GrunbaumSelection
from helly_select.hull import hull_facets
from helly_select.instances import cube, random_instance, regular_simplex
from helly_select.pipeline import (MODE_2D, MODE_2D_PLUS_1, back_map, homothetic_factor, polarize,
                                   prepare, run_pipeline, select_prepared)
from helly_select.polytope import HPolytope, VPolytope, enumerate_vertices


def test_cube_polar_is_cross_polytope():
    inst = polarize(cube(3), np.zeros(3))
    np.testing.assert_allclose(inst.points, np.vstack([np.eye(3), -np.eye(3)]))


def test_unit_offsets_polar_points_are_normals():
    U = np.random.default_rng(0).normal(size=(12, 3))
    U /= np.linalg.norm(U, axis=1)[:, None]
    inst = polarize(HPolytope(U, np.ones(12)), np.zeros(3))
    np.testing.assert_allclose(inst.points, U)


def test_shifted_cube_same_polar():
    shift = np.array([3.0, -1.0, 2.0])
    K = cube(3).translate(shift)
    prep = prepare(K)
    np.testing.assert_allclose(prep.z, shift, atol=1e-12)
    np.testing.assert_allclose(prep.polar.points, np.vstack([np.eye(3), -np.eye(3)]), atol=1e-12)


def test_polarize_rejects_boundary_center():
    with pytest.raises(OriginNotInteriorError):
        polarize(cube(2), [1.0, 0.0])


def test_polarize_unbounded_detected():
    K = HPolytope([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]], [1.0, 1.0, 1.0])
    with pytest.raises(UnboundedError):
        polarize(K, np.zeros(2))


def _fake_selection(indices):
    return GrunbaumSelection("x", tuple(indices), 0.0, 0.0, 1.0, "generic", None)


def test_back_map_cube():
    inst = polarize(cube(2), np.zeros(2))
    Q = inst.Q.points
    e1 = int(np.flatnonzero(np.all(Q == [1.0, 0.0], axis=1))[0])
    m1 = int(np.flatnonzero(np.all(Q == [-1.0, 0.0], axis=1))[0])
    assert back_map(_fake_selection([e1, m1]), inst) == (0, 2)


def test_back_map_duplicate_smallest_index():
    A = np.vstack([np.eye(2), -np.eye(2), [[0.0, 1.0]]])
    inst = polarize(HPolytope(A, np.ones(5)), np.zeros(2))
    assert 4 not in inst.extreme
    local = [k for k, i in enumerate(inst.extreme) if i == 1]
    assert back_map(_fake_selection(local), inst) == (1,)


@pytest.mark.parametrize("seed", range(5))
def test_back_map_polar_containment(seed):
    K = random_instance(3, 20, seed)
    res = run_pipeline(K, "2d+1")
    z = res.z
    sub = K.subfamily(res.indices)
    chosen = polarize(K, z).points[list(res.indices)]
    # every chosen polar point is a vertex of the polar of K_sigma - z
    polar_sub = polarize(sub, z).points
    for p in chosen:
        assert np.min(np.abs(polar_sub - p).max(axis=1)) < 1e-12
    # and K_sigma - z lies in the halfspaces <p, x> <= 1 of the chosen points
    V = enumerate_vertices(sub).points - z
    assert np.all(V @ chosen.T <= 1 + 1e-9)


def test_homothetic_factor_simple():
    C = VPolytope(enumerate_vertices(cube(3)).points)
    assert homothetic_factor(C, cube(3), np.zeros(3)) == pytest.approx(1.0)
    assert homothetic_factor(cube(3, 2.0), cube(3), np.zeros(3)) == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(5))
def test_homothetic_factor_matches_grid(seed):
    rng = np.random.default_rng(seed)
    outer = random_instance(2, 7, rng)
    z = enumerate_vertices(outer).points.mean(axis=0)
    inner_pts = z + 0.8 * rng.normal(size=(6, 2))
    c = homothetic_factor(inner_pts, outer, z)
    step = 1e-3
    grid = np.arange(step, 20.0, step)

    def fits(t):
        return all(outer.contains(z - (x - z) / t, slack=1e-12) for x in inner_pts)

    first = grid[np.argmax([fits(t) for t in grid])]
    assert first - step <= c <= first + 1e-12


def test_cube_selection_keeps_every_facet():
    for d in (2, 3, 4):
        res = run_pipeline(cube(d), "2d")
        assert res.indices == tuple(range(2 * d))
        assert res.diam_ratio == pytest.approx(1.0)
        assert res.lambda_ == pytest.approx(1.0)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_regular_simplex_selection(d):
    res = run_pipeline(regular_simplex(d), "2d")
    assert res.indices == tuple(range(d + 1))
    assert res.lambda_ == pytest.approx(d, abs=1e-6)
    assert res.measured_factor == pytest.approx(d, rel=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_random_d2_dimension_constants(seed):
    prep = prepare(random_instance(2, 10, seed))
    mu = select_prepared(prep, "2d")
    sg = select_prepared(prep, "2d+1")
    assert mu.mode == MODE_2D and sg.mode == MODE_2D_PLUS_1
    assert len(mu.indices) <= 4 and len(sg.indices) <= 5
    assert mu.certified_factor <= 64 and mu.diam_ratio <= 64
    assert sg.certified_factor <= 16
    assert mu.passed and sg.passed


@pytest.mark.parametrize("seed", range(3))
def test_random_d3_measured_by_vertex_membership(seed):
    K = random_instance(3, 50, seed)
    res = run_pipeline(K, "2d")
    c = res.measured_factor
    assert c <= res.certified_factor * (1 + 1e-7) <= 216 * (1 + 1e-7)
    V = enumerate_vertices(K.subfamily(res.indices)).points
    # every reflected, shrunk vertex of K_mu lies in K
    for x in V:
        assert K.contains(res.z - (x - res.z) / (c * (1 + 1e-9)), slack=1e-9)


def test_loewner_center_pipeline():
    res = run_pipeline(random_instance(3, 12, 5), "2d", center="loewner")
    assert res.center_method == "loewner" and res.passed


def test_bad_inputs():
    with pytest.raises(PreconditionError):
        run_pipeline(cube(2), mode="3d")
    with pytest.raises(UnboundedError):
        run_pipeline(HPolytope([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0]))


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_polar_round_trip(seed):
    K = random_instance(3, 8, seed)
    V = enumerate_vertices(K).points
    z = V.mean(axis=0)
    inst = polarize(K, z)
    # the facets of the polar hull are <a_f, p> = h_f with vertices of K - z at a_f / h_f
    R = np.array([f.normal / f.offset for f in hull_facets(inst.Q)]) + z
    assert len(R) == len(V)
    for v in V:
        assert np.min(np.abs(R - v).max(axis=1)) < 1e-7


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.lists(st.floats(-20, 20), min_size=2, max_size=2))
def test_selection_translation_invariant(seed, shift):
    K = random_instance(2, 8, seed)
    a = run_pipeline(K, "2d")
    b = run_pipeline(K.translate(np.array(shift)), "2d")
    assert a.indices == b.indices
    assert a.measured_factor == pytest.approx(b.measured_factor, rel=1e-6)
