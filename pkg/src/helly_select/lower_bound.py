"""Large points inside few halfspaces tangent to the unit sphere.

For unit vectors ``u_i`` and a subfamily ``sigma`` spanning the space, the
symmetric strip body ``{x : |<u_i, x>| <= 1, i in sigma}`` contains a point of
norm at least ``d / sqrt(|sigma|)``.  The point is found constructively by
maximising ``|x|^2`` over the vertices of the strip body.  With
``A = sum u_i u_i^T`` and ``p = A^{1/2} q`` one has ``<p, A^{-1} p> = |q|^2``, and
the strip body always holds a point with ``<p, A^{-1} p> >= tr A^{-1}``, which by
Cauchy-Schwarz on the eigenvalues is at least ``d^2 / |sigma|``.
"""
from dataclasses import dataclass
from math import comb, cos, pi, sqrt

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.stats import norm, qmc

from .exceptions import EnumerationOverflowError, PreconditionError, SpanDeficientError
from .hull import diameter
from .polytope import HPolytope, check_bounded_full_dim, enumerate_vertices

WITNESS_CAP = 10**7
COND_LIMIT = 1e12


@dataclass
class StripFamily:
    vectors: np.ndarray
    covering_radius: float = float("nan")

    def __post_init__(self):
        U = np.array(self.vectors, dtype=float)
        if U.ndim != 2 or U.shape[1] < 2:
            raise PreconditionError("vectors must be an (n, d) array with d >= 2")
        lengths = np.linalg.norm(U, axis=1)
        if np.any(lengths == 0):
            raise PreconditionError("zero vector in strip family")
        self.vectors = U / lengths[:, None]

    @property
    def dim(self):
        return self.vectors.shape[1]

    @property
    def n(self):
        return self.vectors.shape[0]

    def halfspaces(self):
        """The one-sided family ``<u_i, x> <= 1``."""
        return HPolytope(self.vectors, np.ones(self.n))


@dataclass
class LowerBoundWitness:
    """A far point ``q`` of the strip body and the matching point ``p = A^{1/2} q``.

    ``p_form_value`` is ``<p, A^{-1} p>`` (equal to ``norm**2``), the quantity
    bounded below by ``trace_bound = tr A^{-1}``; ``q_form_value`` is
    ``<q, A^{-1} q>``, reported for comparison only.
    """

    sigma: tuple
    A: np.ndarray
    q: np.ndarray
    p: np.ndarray
    norm: float
    bound: float
    trace_bound: float
    p_form_value: float
    q_form_value: float
    feasibility: float


def _rng(seed):
    return np.random.default_rng(seed)


def _random_rotation(d, rng):
    Z = rng.normal(size=(d, d))
    Qm, R = np.linalg.qr(Z)
    return Qm * np.sign(np.diag(R))


def covering_radius(U, n_samples=20000, seed=0):
    """Largest angle from a direction on the sphere to its nearest vector in ``U``.

    Each facet ``<a, x> = h`` of ``conv(U)`` cuts off a cap of angular radius
    ``arccos(h)`` containing no vector of ``U``, and the deepest hole is the
    centre of one of these caps, so the radius is exact whenever the origin is
    interior to the hull.  Otherwise it is estimated from random directions.
    """
    U = np.asarray(U, dtype=float)
    try:
        h = -ConvexHull(U).equations[:, -1]
        if np.all(h > 0):
            return float(np.arccos(np.clip(h.min(), -1.0, 1.0)))
    except QhullError:
        pass
    X = _rng(seed).normal(size=(n_samples, U.shape[1]))
    X /= np.linalg.norm(X, axis=1)[:, None]
    best = np.clip((X @ U.T).max(axis=1), -1.0, 1.0)
    return float(np.arccos(best.min()))


def sphere_family(d, n, seed=0, preset=None, n_samples=20000) -> StripFamily:
    """Quasi-uniform unit vectors on the sphere, reproducible from ``seed``.

    Equispaced angles (randomly phased) in the plane, a randomly rotated
    Fibonacci lattice in three dimensions, and normalised Gaussian-transformed
    Halton points otherwise.  ``preset="axes"`` returns ``±e_i`` (``n = 2d``).
    """
    if preset == "axes":
        eye = np.eye(d)
        U = np.vstack([eye, -eye])
        return StripFamily(U, covering_radius(U, n_samples, seed))
    if preset is not None:
        raise PreconditionError(f"unknown preset {preset!r}")
    if n < d + 1:
        raise PreconditionError(f"need n >= d + 1, got n={n}, d={d}")
    rng = _rng(seed)
    if d == 2:
        theta = rng.uniform(0.0, 2 * pi / n) + 2 * pi * np.arange(n) / n
        U = np.column_stack([np.cos(theta), np.sin(theta)])
    elif d == 3:
        k = np.arange(n) + 0.5
        z = 1.0 - 2.0 * k / n
        r = np.sqrt(1.0 - z * z)
        phi = pi * (3.0 - sqrt(5.0)) * k
        U = np.column_stack([r * np.cos(phi), r * np.sin(phi), z]) @ _random_rotation(3, rng).T
    else:
        H = qmc.Halton(d, scramble=True, seed=rng).random(n)
        U = norm.ppf(np.clip(H, 1e-12, 1 - 1e-12))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    return StripFamily(U, covering_radius(U, n_samples, seed))


def _gram_factors(U):
    """``A``, ``A^{-1}`` and ``A^{1/2}`` for ``A = U^T U``, rejecting near-singular ``A``."""
    A = U.T @ U
    evals, evecs = np.linalg.eigh(A)
    if evals[0] <= 0 or evals[-1] / evals[0] > COND_LIMIT:
        raise SpanDeficientError("vectors do not span the space (strip body is unbounded)")
    return A, (evecs / evals) @ evecs.T, (evecs * np.sqrt(evals)) @ evecs.T


def witness(family: StripFamily, sigma, cap=WITNESS_CAP) -> LowerBoundWitness:
    """Vertex of ``{|<u_i, x>| <= 1 : i in sigma}`` of largest norm.

    Raises :class:`SpanDeficientError` when ``{u_i : i in sigma}`` does not span,
    in which case the strip body is unbounded.
    """
    sigma = tuple(sorted(set(int(i) for i in sigma)))
    U = family.vectors[list(sigma)]
    d = family.dim
    A, Ainv, Ahalf = _gram_factors(U)
    if comb(2 * len(sigma), d) > cap:
        raise EnumerationOverflowError(f"C({2 * len(sigma)}, {d}) exceeds the cap {cap}")
    strips = HPolytope(np.vstack([U, -U]), np.ones(2 * len(sigma)))
    V = enumerate_vertices(strips, check=False, cap=cap).points
    sq = np.einsum("ij,ij->i", V, V)
    q = V[int(np.argmax(sq))]
    p = Ahalf @ q
    return LowerBoundWitness(sigma, A, q, p, float(np.linalg.norm(q)), d / sqrt(len(sigma)),
                             float(np.trace(Ainv)), float(p @ Ainv @ p), float(q @ Ainv @ q),
                             float(np.abs(U @ q).max()))


def conjecture2_probe(vectors) -> dict:
    """Largest norm in ``{x : <u_i, x> <= 1}`` for exactly ``2d`` unit vectors (report only)."""
    fam = StripFamily(vectors)
    d = fam.dim
    if fam.n != 2 * d:
        raise PreconditionError(f"expected exactly {2 * d} vectors, got {fam.n}")
    report = {"dimension": d, "sqrt_d": sqrt(d)}
    if np.linalg.matrix_rank(fam.vectors) < d or not check_bounded_full_dim(fam.halfspaces()).bounded:
        report.update(status="unbounded", max_norm=float("inf"), point=None, reaches_sqrt_d=True)
        return report
    V = enumerate_vertices(fam.halfspaces(), check=False).points
    norms = np.linalg.norm(V, axis=1)
    k = int(np.argmax(norms))
    report.update(status="bounded", max_norm=float(norms[k]), point=V[k].tolist(),
                  reaches_sqrt_d=bool(norms[k] >= sqrt(d) - 1e-6))
    return report


def diameter_gap_experiment(d, n, trials, seed=0, max_resamples=1000) -> dict:
    """Witness norms for random ``2d``-subfamilies of a dense sphere family.

    The whole family cuts out nearly the unit ball (its diameter is at most
    ``2 / cos(covering radius)``), while every ``2d``-subfamily keeps a point of
    norm ``>= sqrt(d/2)``; since the origin lies in every ``K_sigma`` this is also
    a lower bound on ``diam(K_sigma)``.
    """
    if d < 2 or trials < 1 or n < 2 * d:
        raise PreconditionError("need d >= 2, trials >= 1 and n >= 2d")
    fam = sphere_family(d, n, seed)
    K = fam.halfspaces()
    diam_K = diameter(enumerate_vertices(K))
    radius = fam.covering_radius
    diam_bound = 2.0 / cos(radius) if radius < pi / 2 else float("inf")
    rng = np.random.default_rng([seed, 1])
    bound = d / sqrt(2 * d)
    norms, rows, deficient = [], [], 0
    for t in range(trials):
        for _ in range(max_resamples):
            sigma = tuple(sorted(int(i) for i in rng.choice(n, size=2 * d, replace=False)))
            try:
                w = witness(fam, sigma)
                break
            except SpanDeficientError:
                deficient += 1
        else:
            raise PreconditionError("could not draw a spanning subfamily")
        norms.append(w.norm)
        rows.append({"trial": t, "sigma": list(sigma), "norm": w.norm,
                     "p_form_value": w.p_form_value, "trace_bound": w.trace_bound,
                     "q": w.q.tolist(), "diam_lower_one_sided": w.norm,
                     "diam_lower_strips": 2 * w.norm,
                     "ok": w.norm >= bound - 1e-6 and w.p_form_value >= w.trace_bound - 1e-6})
    norms = np.array(norms)
    return {
        "dimension": d, "n": n, "trials": trials, "seed": seed,
        "covering_radius": radius, "diameter_K": diam_K, "diameter_bound": diam_bound,
        "diameter_ok": bool(diam_K <= diam_bound * (1 + 1e-6)),
        "witness_bound": bound, "min_norm": float(norms.min()),
        "median_norm": float(np.median(norms)), "max_norm": float(norms.max()),
        "all_ok": bool(all(r["ok"] for r in rows)), "deficient_draws": deficient,
        "trials_detail": rows,
    }
