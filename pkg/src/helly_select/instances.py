"""Canonical and random halfspace families used by tests, sweeps and the CLI."""
import numpy as np

from .polytope import HPolytope, check_bounded_full_dim


def cube(d, half_width=1.0):
    """``|x_i| <= half_width``; rows ``e_1..e_d`` then ``-e_1..-e_d``."""
    eye = np.eye(d)
    return HPolytope(np.vstack([eye, -eye]), np.full(2 * d, float(half_width)))


def standard_simplex(d):
    """``x_i >= 0`` and ``sum(x) <= 1``."""
    return HPolytope(np.vstack([-np.eye(d), np.ones((1, d))]), np.concatenate([np.zeros(d), [1.0]]))


def regular_simplex_vertices(d):
    """Vertices of a regular simplex centred at the origin with unit circumradius."""
    E = np.eye(d + 1) - 1.0 / (d + 1)
    # orthonormal basis of the hyperplane sum(x) = 0 in R^(d+1)
    basis = np.linalg.svd(E)[2][:d]
    V = E @ basis.T
    return V / np.linalg.norm(V[0])


def regular_simplex(d):
    """Regular simplex centred at the origin as ``<-v_j, x> <= 1/d``.

    For unit circumradius the facet opposite ``v_j`` lies at distance ``1/d``.
    """
    V = regular_simplex_vertices(d)
    return HPolytope(-V, np.full(d + 1, 1.0 / d))


def random_instance(d, n, rng, max_tries=1000):
    """A random bounded full-dimensional family of ``n`` halfspaces in ``R^d``.

    Unit normals at distances in ``[0.5, 1.5]`` from the origin, pushed through
    a random well-conditioned affine map; unbounded draws are rejected.
    """
    rng = np.random.default_rng(rng)
    for _ in range(max_tries):
        U = rng.normal(size=(n, d))
        U /= np.linalg.norm(U, axis=1)[:, None]
        r = rng.uniform(0.5, 1.5, size=n)
        M = np.eye(d) + 0.4 * rng.normal(size=(d, d))
        if np.linalg.cond(M) > 20:
            continue
        shift = rng.normal(size=d)
        # x = M^{-1}(y - shift) maps <u, x> <= r to <M^{-T} u, y> <= r + <M^{-T} u, shift>
        A = np.linalg.solve(M.T, U.T).T
        K = HPolytope(A, r + A @ shift)
        report = check_bounded_full_dim(K)
        if report.is_body:
            return K
    raise RuntimeError(f"no bounded instance found for d={d}, n={n}")
