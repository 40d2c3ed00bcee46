import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from helly_select.centers import asymmetry_lambda, compute_center, mvee
from helly_select.exceptions import OriginNotInteriorError, PreconditionError
from helly_select.instances import cube, random_instance, regular_simplex, regular_simplex_vertices, standard_simplex
from helly_select.pipeline import polarize


def test_centroid_center_known():
    np.testing.assert_allclose(compute_center(cube(3)), 0.0, atol=1e-12)
    np.testing.assert_allclose(compute_center(standard_simplex(2)), [1 / 3, 1 / 3], atol=1e-12)


def test_loewner_center_symmetric_cases():
    C = np.array(list(itertools.product([-1.0, 1.0], repeat=3)))
    E = mvee(C)
    np.testing.assert_allclose(E.center, 0.0, atol=1e-6)
    # enclosing ball of the cube has radius sqrt(d)
    np.testing.assert_allclose(E.shape, np.eye(3) / 3, atol=1e-6)
    V = regular_simplex_vertices(3) + [1.0, 2.0, -0.5]
    np.testing.assert_allclose(mvee(V).center, V.mean(axis=0), atol=1e-6)
    np.testing.assert_allclose(compute_center(cube(2), "loewner"), 0.0, atol=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_mvee_containment_is_tight(seed):
    X = np.random.default_rng(seed).normal(size=(30, 2))
    E = mvee(X)
    assert np.all(E.contains(X))
    assert not np.all(E.contains(X, scale=1 - 1e-5))


def test_mvee_volume_matches_convex_program():
    cp = pytest.importorskip("cvxpy")
    X = np.random.default_rng(4).normal(size=(25, 3))
    # {x : |B x + c| <= 1}, maximise log det B
    B = cp.Variable((3, 3), PSD=True)
    c = cp.Variable(3)
    prob = cp.Problem(cp.Maximize(cp.log_det(B)), [cp.norm(B @ x + c) <= 1 for x in X])
    prob.solve(solver="CLARABEL")
    ref_factor = 1.0 / np.linalg.det(B.value)
    E = mvee(X, gap=1e-9)
    assert E.volume_factor == pytest.approx(ref_factor, rel=1e-5)
    np.testing.assert_allclose(E.center, -np.linalg.solve(B.value, c.value), atol=1e-4)


def test_unknown_center_method():
    with pytest.raises(PreconditionError):
        compute_center(cube(2), "incenter")


def test_lambda_symmetric_is_one():
    assert asymmetry_lambda(np.vstack([np.eye(3), -np.eye(3)])) == pytest.approx(1.0)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_lambda_regular_simplex_polar(d):
    K = regular_simplex(d)
    inst = polarize(K, compute_center(K))
    lam = asymmetry_lambda(inst.Q)
    # explicit polar: conv(-d v_j); its facet opposite -d v_j is <v_j, x> = 1, so the
    # reflected vertex d v_j has gauge <v_j, d v_j> / 1 = d
    V = regular_simplex_vertices(d)
    ref = max(np.max(V @ (d * v)) for v in V)
    assert ref == pytest.approx(d)
    assert lam == pytest.approx(ref, abs=1e-6)


def test_lambda_shifted_square_matches_vertex_lp():
    Q = np.array(list(itertools.product([-1.0, 1.0], repeat=2))) + [0.5, 0.0]
    lam = asymmetry_lambda(Q)
    best = 0.0
    for p in Q:
        # min t : -p = sum beta_i q_i, beta >= 0, sum beta = t
        res = linprog(np.ones(4), A_eq=Q.T, b_eq=-p, bounds=[(0, None)] * 4, method="highs")
        best = max(best, res.fun)
    assert best == pytest.approx(3.0)
    assert lam == pytest.approx(best, rel=1e-9)


def test_lambda_needs_interior_origin():
    with pytest.raises(OriginNotInteriorError):
        asymmetry_lambda(np.eye(2).tolist() + [[1.0, 1.0]])


@settings(max_examples=15)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_centroid_lambda_at_most_d(d, seed):
    K = random_instance(d, 3 * d, seed)
    lam = asymmetry_lambda(polarize(K, compute_center(K)).Q)
    assert 1.0 - 1e-9 <= lam <= d + 1e-6
