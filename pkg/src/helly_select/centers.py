"""Interior centers ``z`` with small asymmetry of the polar body ``(K - z)°``."""
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalFailure, OriginNotInteriorError, PreconditionError
from .hull import centroid_of_hull, extreme_points, gauge, origin_is_interior
from .polytope import HPolytope, VPolytope, enumerate_vertices
from .tolerance import DEFAULT_TOLERANCE, Tolerance

CENTER_METHODS = ("centroid", "loewner")


@dataclass
class CenterReport:
    z: np.ndarray
    method: str
    lambda_: float


@dataclass
class Ellipsoid:
    """``{x : (x - center)^T shape (x - center) <= 1}``."""

    center: np.ndarray
    shape: np.ndarray
    iterations: int
    gap: float

    def contains(self, X, scale=1.0):
        D = np.atleast_2d(X) - self.center
        return np.einsum("ij,jk,ik->i", D, self.shape, D) <= scale**2 * (1.0 + 1e-12)

    @property
    def volume_factor(self):
        """Volume divided by the unit-ball volume."""
        return float(np.linalg.det(self.shape) ** -0.5)


def mvee(points, gap=1e-7, max_iter=100_000) -> Ellipsoid:
    """Minimum-volume enclosing ellipsoid by Khachiyan's weight ascent.

    Uses the Todd-Yildirim away steps so the weights of interior points can
    drop to zero, which gives linear convergence near the optimum.  ``gap`` is
    the relative excess of the largest leverage over ``d + 1``.  The returned
    shape is rescaled so that every point lies inside.
    """
    X = np.asarray(points, dtype=float)
    m, d = X.shape
    Q = np.hstack([X, np.ones((m, 1))])
    u = np.full(m, 1.0 / m)
    for it in range(max_iter):
        Minv = np.linalg.inv(Q.T @ (u[:, None] * Q))
        lev = np.einsum("ij,jk,ik->i", Q, Minv, Q)
        j = int(np.argmax(lev))
        rel = lev[j] / (d + 1) - 1.0
        support = np.flatnonzero(u > 0)
        k = int(support[np.argmin(lev[support])])
        away = 1.0 - lev[k] / (d + 1)
        if rel <= gap and away <= gap:
            break
        if rel >= away:
            step = (lev[j] - d - 1) / ((d + 1) * (lev[j] - 1))
            u *= 1.0 - step
            u[j] += step
        else:
            step = min((d + 1 - lev[k]) / ((d + 1) * (lev[k] - 1)), u[k] / (1.0 - u[k]))
            u *= 1.0 + step
            u[k] -= step
            u[k] = max(u[k], 0.0)
    else:
        raise NumericalFailure(f"MVEE did not reach gap {gap} in {max_iter} iterations")
    c = u @ X
    D = X - c
    shape = np.linalg.inv(D.T @ (u[:, None] * D)) / d
    worst = np.einsum("ij,jk,ik->i", D, shape, D).max()
    return Ellipsoid(c, shape / worst, it, float(rel))


def center_centroid(K: HPolytope, vertices: VPolytope = None, tol: Tolerance = DEFAULT_TOLERANCE):
    V = enumerate_vertices(K, tol) if vertices is None else vertices
    return centroid_of_hull(V)


def center_loewner(K: HPolytope, vertices: VPolytope = None, tol: Tolerance = DEFAULT_TOLERANCE):
    V = enumerate_vertices(K, tol) if vertices is None else vertices
    z = mvee(V.points).center
    slack = K.slacks(z) / np.linalg.norm(K.A, axis=1)
    if slack.min() <= 0.0:
        raise NumericalFailure("Loewner center is not strictly interior to K")
    return z


def compute_center(K: HPolytope, method="centroid", vertices=None, tol=DEFAULT_TOLERANCE):
    if method == "centroid":
        return center_centroid(K, vertices, tol)
    if method == "loewner":
        return center_loewner(K, vertices, tol)
    raise PreconditionError(f"unknown center method {method!r}; expected one of {CENTER_METHODS}")


def asymmetry_lambda(Q, tol: Tolerance = DEFAULT_TOLERANCE, extreme=None, check=True) -> float:
    """Smallest ``lam`` with ``Q ⊆ -lam Q``: the largest gauge of a reflected extreme point."""
    X = Q.points if isinstance(Q, VPolytope) else np.asarray(Q, dtype=float)
    if check and not origin_is_interior(X, tol):
        raise OriginNotInteriorError("origin is not interior to conv(Q)")
    idx = extreme_points(X, tol) if extreme is None else np.asarray(extreme)
    hull_pts = X[idx]
    return max(gauge(hull_pts, -p) for p in hull_pts)
