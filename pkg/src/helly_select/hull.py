"""Geometry of V-polytopes: facets, volume, centroid, gauge and ray casting."""
from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist

from .exceptions import DegenerateInputError, OriginNotInteriorError, PreconditionError
from .lp import LPProblem, solve_lp
from .polytope import VPolytope, dedupe_points
from .tolerance import DEFAULT_TOLERANCE, Tolerance


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``<normal, x> = offset`` with ``normal`` of unit length."""

    normal: np.ndarray
    offset: float
    points: tuple  # indices of input points lying on the facet


def _points(P):
    return P.points if isinstance(P, VPolytope) else np.asarray(P, dtype=float)


def affine_rank(points):
    X = np.asarray(points, dtype=float)
    if len(X) < 2:
        return 0
    sv = np.linalg.svd(X - X.mean(axis=0), compute_uv=False)
    return int(np.sum(sv > 1e-10 * max(1.0, sv[0])))


def _qhull(X):
    d = X.shape[1]
    if affine_rank(X) < d:
        raise DegenerateInputError(f"points span an affine subspace of dimension < {d}")
    try:
        return ConvexHull(X)
    except QhullError as exc:
        raise DegenerateInputError(f"qhull failed: {exc}") from None


def hull_facets(P, tol: Tolerance = DEFAULT_TOLERANCE):
    """Outward facet description of ``conv(P)``.

    Qhull returns a triangulated boundary; coplanar pieces are merged so each
    geometric facet is reported once.  Facets are ordered by their sorted
    incident-point tuples, which makes the order a function of the input only.
    """
    X = _points(P)
    hull = _qhull(X)
    scale = 1.0 + float(np.max(np.abs(X)))
    thresh = 10 * tol.eps_rel * scale
    groups = []
    for eq in hull.equations:
        normal, offset = eq[:-1], -eq[-1]
        for g in groups:
            if g[0] @ normal > 1.0 - 1e-9 and abs(g[1] - offset) <= thresh:
                break
        else:
            groups.append((normal, offset))
    facets = []
    for normal, offset in groups:
        on = np.flatnonzero(np.abs(X @ normal - offset) <= thresh)
        facets.append(Facet(normal.copy(), float(offset), tuple(int(i) for i in on)))
    facets.sort(key=lambda f: f.points)
    return facets


def _fan(X):
    hull = _qhull(X)
    apex = X[hull.vertices].mean(axis=0)
    simp = X[hull.simplices] - apex
    vols = np.abs(np.linalg.det(simp)) / factorial(X.shape[1])
    cents = apex + simp.sum(axis=1) / (X.shape[1] + 1)
    return vols, cents


def volume(P) -> float:
    """Hull volume from a fan of simplices over the boundary triangulation."""
    vols, _ = _fan(_points(P))
    return float(vols.sum())


def centroid_of_hull(P) -> np.ndarray:
    """Volume centroid of ``conv(P)`` (not the average of the points)."""
    vols, cents = _fan(_points(P))
    return (vols @ cents) / vols.sum()


def diameter(P) -> float:
    X = _points(P)
    if len(X) == 0:
        raise PreconditionError("diameter of an empty point set")
    if len(X) == 1:
        return 0.0
    return float(pdist(X).max())


def origin_is_interior(P, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    X = _points(P)
    try:
        facets = hull_facets(X, tol)
    except DegenerateInputError:
        return False
    scale = 1.0 + float(np.max(np.abs(X)))
    return all(f.offset > tol.eps_rel * scale for f in facets)


def gauge_lp(P, x):
    """Solve ``min sum(beta)`` s.t. ``P^T beta = x``, ``beta >= 0``; returns the LP solution."""
    X = _points(P)
    x = np.asarray(x, dtype=float)
    m, d = X.shape
    return solve_lp(LPProblem(np.ones(m), X.T, x, senses=("==",) * d))


def gauge(P, x) -> float:
    """Minkowski functional ``min{t >= 0 : x in t conv(P)}`` for origin-interior ``P``."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return 0.0
    sol = gauge_lp(P, x)
    if not sol.optimal:
        raise OriginNotInteriorError("x is outside the cone of P; the origin is not interior")
    return float(sol.value)


def ray_boundary(P, direction):
    """Boundary point ``y = t*direction`` of ``conv(P)`` on the ray from the origin."""
    direction = np.asarray(direction, dtype=float)
    if not np.any(direction):
        raise PreconditionError("ray direction must be nonzero")
    g = gauge(P, direction)
    if g <= 0.0:
        raise OriginNotInteriorError("ray never leaves conv(P)")
    t = 1.0 / g
    return t * direction, t


def in_hull_lp(X, point):
    """LP feasibility of ``point`` in ``conv(X)``; returns the solution object."""
    m, d = X.shape
    A = np.vstack([X.T, np.ones((1, m))])
    rhs = np.concatenate([point, [1.0]])
    return solve_lp(LPProblem(np.zeros(m), A, rhs, senses=("==",) * (d + 1)))


def extreme_points(P, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Indices of the extreme points of ``conv(P)``, sorted.

    Coincident points are collapsed onto their smallest index first; every
    remaining point is then tested for membership in the hull of the others.
    """
    X = _points(P)
    reps = dedupe_points(X, tol.eps_rel)
    if len(reps) == 1:
        return reps
    keep = []
    for k, i in enumerate(reps):
        others = X[np.delete(reps, k)]
        if not in_hull_lp(others, X[i]).optimal:
            keep.append(int(i))
    return np.array(keep, dtype=int)
