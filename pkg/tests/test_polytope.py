import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import HalfspaceIntersection

from helly_select.exceptions import (DegenerateInputError, EnumerationOverflowError,
                                     PreconditionError, UnboundedError)
from helly_select.instances import cube, random_instance, standard_simplex
from helly_select.polytope import (Halfspace, HPolytope, check_bounded_full_dim, dedupe_points,
                                   enumerate_vertices, irredundant_rows, require_body)


def clipped_edges(A, b):
    """2-D oracle: clip each boundary line against all other halfplanes.

    Each line carrying an edge of positive length contributes one edge, and a
    polygon has as many vertices as edges.
    """
    edges = []
    for i in range(len(A)):
        a = A[i]
        p0 = a * b[i] / (a @ a)
        t_dir = np.array([-a[1], a[0]])
        lo, hi = -np.inf, np.inf
        for j in range(len(A)):
            if j == i:
                continue
            rate, room = A[j] @ t_dir, b[j] - A[j] @ p0
            if abs(rate) < 1e-14:
                if room < 0:
                    lo, hi = 1.0, 0.0
                continue
            if rate > 0:
                hi = min(hi, room / rate)
            else:
                lo = max(lo, room / rate)
        if hi - lo > 1e-9:
            edges.append((p0 + lo * t_dir, p0 + hi * t_dir))
    return edges


def test_cube_vertices():
    V = enumerate_vertices(cube(3)).points
    expected = np.array(list(itertools.product([-1.0, 1.0], repeat=3)))
    np.testing.assert_allclose(V, expected)


def test_simplex_vertices():
    V = enumerate_vertices(standard_simplex(2)).points
    np.testing.assert_allclose(V, [[0, 0], [0, 1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_vertex_count_matches_line_clipping(seed):
    K = random_instance(2, 10, seed)
    V = enumerate_vertices(K).points
    edges = clipped_edges(K.A, K.b)
    assert len(V) == len(edges)
    ends = np.vstack([e for pair in edges for e in pair])
    for v in V:
        assert np.min(np.linalg.norm(ends - v, axis=1)) < 1e-9


@pytest.mark.parametrize("d,n,seed", [(3, 12, 0), (3, 30, 1), (4, 15, 2), (4, 25, 3), (5, 14, 4)])
def test_vertices_match_qhull_intersection(d, n, seed):
    K = random_instance(d, n, seed)
    V = enumerate_vertices(K).points
    interior = check_bounded_full_dim(K).center
    hs = HalfspaceIntersection(np.hstack([K.A, -K.b[:, None]]), interior)
    ref = hs.intersections[dedupe_points(hs.intersections, 1e-8)]
    assert len(V) == len(ref)
    for v in ref:
        assert np.min(np.abs(V - v).max(axis=1)) < 1e-8


def test_vertices_lexicographic_and_feasible(rng):
    K = random_instance(3, 20, rng)
    V = enumerate_vertices(K).points
    assert [tuple(v) for v in V] == sorted(tuple(v) for v in V)
    assert np.all(V @ K.A.T <= K.b + 1e-9)


def test_pruning_does_not_change_vertices():
    K = random_instance(3, 25, 7)
    np.testing.assert_array_equal(enumerate_vertices(K).points,
                                  enumerate_vertices(K, prune=False).points)


def test_body_checks():
    assert check_bounded_full_dim(cube(3)).is_body
    assert not check_bounded_full_dim(HPolytope([[1.0, 0.0]], [1.0])).bounded
    flat = HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 1])
    report = check_bounded_full_dim(flat)
    assert report.bounded and not report.full_dim and not report.empty
    empty = HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 1, 1])
    assert check_bounded_full_dim(empty).empty


def test_require_body_errors():
    with pytest.raises(UnboundedError):
        require_body(HPolytope([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0]))
    with pytest.raises(DegenerateInputError):
        require_body(HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 1]))
    with pytest.raises(UnboundedError):
        enumerate_vertices(HPolytope([[1.0, 0.0]], [1.0]))


def test_input_validation():
    with pytest.raises(PreconditionError):
        HPolytope([[1.0]], [1.0])
    with pytest.raises(PreconditionError):
        HPolytope([[0.0, 0.0]], [1.0])
    with pytest.raises(PreconditionError):
        HPolytope([[1.0, np.nan]], [1.0])
    with pytest.raises(PreconditionError):
        Halfspace((0, 0), 1)
    with pytest.raises(ValueError):
        HPolytope([[1.0, 0.0]], [1.0, 2.0])


def test_enumeration_cap():
    with pytest.raises(EnumerationOverflowError):
        enumerate_vertices(cube(3), cap=5, prune=False)


def test_subfamily_and_halfspaces():
    K = cube(2)
    sub = K.subfamily([3, 0, 0])
    np.testing.assert_array_equal(sub.A, K.A[[0, 3]])
    assert HPolytope.from_halfspaces(K.halfspaces).b.tolist() == K.b.tolist()
    assert K.contains([1.0, 1.0]) and not K.contains([1.1, 0.0])


def test_duplicate_rows_keep_smallest_index():
    A = np.vstack([np.eye(2), -np.eye(2), np.eye(2)[:1]])
    K = HPolytope(A, np.ones(5))
    assert irredundant_rows(K).tolist() == [0, 1, 2, 3]


def test_dedupe_points_representatives():
    P = np.array([[0.0, 0.0], [1.0, 1.0], [1e-12, 0.0], [1.0, 1.0 + 1e-12], [2.0, 2.0]])
    assert dedupe_points(P, 1e-9).tolist() == [0, 1, 4]


@given(st.integers(0, 10**6), st.floats(-5, 5), st.floats(-5, 5))
def test_translation_moves_vertices(seed, sx, sy):
    K = random_instance(2, 6, seed)
    shift = np.array([sx, sy])
    V = enumerate_vertices(K).points
    W = enumerate_vertices(K.translate(shift)).points
    np.testing.assert_allclose(np.sort(W, axis=0), np.sort(V + shift, axis=0), atol=1e-8)
