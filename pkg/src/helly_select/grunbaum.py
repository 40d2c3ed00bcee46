"""Choosing at most 2d+1 (or 2d) extreme points whose hull, reflected and
dilated, covers a body ``Q`` with ``Q ⊆ -lam Q``.

Every containment used by the construction is recorded as a :class:`Check`
and re-verified numerically; :func:`audit_selection` re-derives all of them
from the output fields through facet descriptions instead of LPs.
"""
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .exceptions import CertificateError, NumericalFailure, OriginNotInteriorError, PreconditionError
from .hull import diameter, gauge, hull_facets, ray_boundary
from .lp import LPProblem, solve_lp
from .polytope import VPolytope, _combination_chunks
from .tolerance import DEFAULT_TOLERANCE, Tolerance

VARIANT_2D_PLUS_1 = "A_2dplus1"
VARIANT_2D = "B_2d"
EXHAUSTIVE_CAP = 10**6


@dataclass
class Check:
    """One verified inequality ``value <= bound``."""

    name: str
    value: float
    bound: float
    passed: bool

    @classmethod
    def le(cls, name, value, bound, slack):
        value, bound = float(value), float(bound)
        return cls(name, value, bound, value <= bound + slack * max(1.0, abs(bound)))


@dataclass
class SimplexCertificate:
    indices: tuple
    v: np.ndarray
    volume: float
    containment_ok: bool
    containment_violation: float
    method: str
    swaps: int = 0


@dataclass
class CaratheodoryPoint:
    y: np.ndarray
    t: float
    indices: tuple
    weights: np.ndarray
    facet_normal: np.ndarray
    facet_offset: float


@dataclass
class GrunbaumSelection:
    variant: str
    indices: tuple
    factor: float
    measured: float
    lam: float
    branch: str
    simplex: SimplexCertificate
    checks: list = field(default_factory=list)
    aux: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def _pts(Q):
    return Q.points if isinstance(Q, VPolytope) else np.asarray(Q, dtype=float)


def simplex_volume(V):
    V = np.asarray(V, dtype=float)
    d = V.shape[1]
    return abs(np.linalg.det(V[1:] - V[0])) / np.prod(np.arange(1, d + 1))


def barycentric(S, X):
    """Barycentric coordinates (columns follow the rows of ``S``) of each row of ``X``."""
    S = np.asarray(S, dtype=float)
    X = np.atleast_2d(X)
    M = np.vstack([S.T, np.ones(len(S))])
    rhs = np.vstack([X.T, np.ones(len(X))])
    return np.linalg.solve(M, rhs).T


def simplex_halfspaces(S):
    """Outward unit-normal description ``A x <= b`` of a full-dimensional simplex.

    Row ``j`` is the facet opposite vertex ``j``.
    """
    S = np.asarray(S, dtype=float)
    k, d = S.shape
    A = np.empty((k, d))
    b = np.empty(k)
    centre = S.mean(axis=0)
    for j in range(k):
        F = np.delete(S, j, axis=0)
        normal = np.linalg.svd(F[1:] - F[0])[2][-1]
        offset = normal @ F[0]
        if normal @ centre > offset:
            normal, offset = -normal, -offset
        A[j], b[j] = normal, offset
    return A, b


def _reflected_violation(S, X):
    """Largest excess of a point of ``X`` over the reflected simplex ``-d(S - v) + v``."""
    d = S.shape[1]
    v = S.mean(axis=0)
    R = (d + 1) * v - d * S
    A, b = simplex_halfspaces(R)
    return float(np.max(X @ A.T - b)), float(1.0 + np.abs(R).max())


def _greedy_fill(X, chosen):
    """Extend ``chosen`` by repeatedly adding the point farthest from its affine hull."""
    d = X.shape[1]
    chosen = list(chosen)
    while len(chosen) < d + 1:
        base = X[chosen[0]]
        rel = X - base
        if len(chosen) == 1:
            resid = np.linalg.norm(rel, axis=1)
        else:
            B = rel[chosen[1:]].T
            coef, *_ = np.linalg.lstsq(B, rel.T, rcond=None)
            resid = np.linalg.norm(rel.T - B @ coef, axis=0)
        resid[chosen] = -1.0
        chosen.append(int(np.argmax(resid)))
    return chosen


def _farthest_pair_start(X):
    D = squareform(pdist(X))
    i, j = np.unravel_index(np.argmax(D), D.shape)
    return _greedy_fill(X, [int(min(i, j)), int(max(i, j))])


def _swap_to_local_max(X, chosen, max_swaps):
    chosen = list(chosen)
    for swaps in range(max_swaps + 1):
        L = np.abs(barycentric(X[chosen], X))
        p, j = np.unravel_index(np.argmax(L), L.shape)
        if L[p, j] <= 1.0 + 1e-12:
            return sorted(chosen), swaps
        chosen[j] = int(p)
    raise NumericalFailure("simplex local search exceeded its swap budget")


def exhaustive_max_simplex(X, cap=EXHAUSTIVE_CAP):
    """Largest-volume simplex on the rows of ``X`` by checking every (d+1)-subset."""
    X = np.asarray(X, dtype=float)
    m, d = X.shape
    if comb(m, d + 1) > cap:
        raise PreconditionError(f"C({m}, {d + 1}) exceeds the exhaustive cap {cap}")
    best, best_vol = None, -1.0
    for combos in _combination_chunks(m, d + 1):
        P = X[combos]
        vols = np.abs(np.linalg.det(P[:, 1:] - P[:, :1]))
        k = int(np.argmax(vols))
        if vols[k] > best_vol * (1.0 + 1e-12):
            best, best_vol = combos[k], vols[k]
    return tuple(int(i) for i in best), best_vol / np.prod(np.arange(1, d + 1))


def max_volume_simplex(Q, tol: Tolerance = DEFAULT_TOLERANCE, max_swaps=10_000,
                       restarts=True) -> SimplexCertificate:
    """Swap-locally-maximal simplex on the points of ``Q``, with its containment checked.

    A vertex ``j`` can be profitably replaced by ``p`` exactly when the
    barycentric coordinate of ``p`` at ``j`` exceeds one in absolute value, so
    the search stops once all coordinates lie in ``[-1, 1]``.  The first start
    grows a simplex greedily from the farthest pair; with ``restarts`` one more
    greedy start is grown from every point and the largest local maximum wins.
    The containment of ``Q`` in the reflected simplex ``-d(S - v) + v`` is then
    verified from the facets of that simplex.
    """
    X = _pts(Q)
    m, d = X.shape
    if m < d + 1:
        raise PreconditionError(f"need at least {d + 1} points, got {m}")
    starts = [_farthest_pair_start(X)]
    if restarts:
        starts += [_greedy_fill(X, [i]) for i in range(m)]
    if simplex_volume(X[starts[0]]) <= 1e-14 * (1.0 + np.abs(X).max()) ** d:
        raise PreconditionError("points are affinely dependent; Q is not full dimensional")
    chosen, best_vol, swaps = None, -1.0, 0
    for start in starts:
        local, n_swaps = _swap_to_local_max(X, start, max_swaps)
        vol = simplex_volume(X[local])
        swaps += n_swaps
        if vol > best_vol * (1.0 + 1e-12):
            chosen, best_vol = local, vol
    S = X[chosen]
    viol, scale = _reflected_violation(S, X)
    method = "local"
    if viol > tol.containment_slack * scale:
        if comb(m, d + 1) > EXHAUSTIVE_CAP:
            raise CertificateError("local simplex fails the containment check and exhaustive "
                                   "search is over budget")
        chosen, _ = exhaustive_max_simplex(X)
        chosen = sorted(chosen)
        S = X[chosen]
        viol, scale = _reflected_violation(S, X)
        method = "exhaustive"
    ok = viol <= tol.containment_slack * scale
    return SimplexCertificate(tuple(chosen), S.mean(axis=0), simplex_volume(S), ok, viol, method, swaps)


def caratheodory_boundary(Q, direction, tol: Tolerance = DEFAULT_TOLERANCE, facets=None):
    """Boundary point on the ray from the origin, as a combination of at most ``d`` extreme points.

    The facet containing the boundary point is located among the hull facets
    (closest first, smallest index on ties) and a basic solution of ``P^T beta = y, beta >= 0``
    over that facet's points supplies the combination.
    """
    X = _pts(Q)
    d = X.shape[1]
    y, t = ray_boundary(X, direction)
    if facets is None:
        facets = hull_facets(X, tol)
    scale = 1.0 + np.abs(X).max()
    resid = np.array([abs(f.normal @ y - f.offset) for f in facets])
    hits = np.flatnonzero(resid <= 1e3 * tol.eps_rel * scale)
    if hits.size == 0:
        raise NumericalFailure(f"no facet contains the boundary point (closest at {resid.min():.3g})")
    # near a lower-dimensional face several facets pass the test; take the closest that spans y
    for k in hits[np.argsort(resid[hits], kind="stable")]:
        facet = facets[int(k)]
        idx = np.array(facet.points)
        sol = solve_lp(LPProblem(np.zeros(len(idx)), X[idx].T, y, senses=("==",) * d))
        if sol.optimal:
            break
    else:
        raise NumericalFailure("boundary point is not in the hull of any nearby facet")
    beta = sol.x
    keep = beta > 1e-12
    weights = beta[keep] / beta[keep].sum()
    return CaratheodoryPoint(y, t, tuple(int(i) for i in idx[keep]), weights,
                             facet.normal, facet.offset)


def covering_factor(Q, chosen_points):
    """Smallest ``c`` with ``Q ⊆ -c conv(chosen_points)``, by one gauge LP per point of ``Q``."""
    X = _pts(Q)
    C = np.asarray(chosen_points, dtype=float)
    try:
        return max(gauge(C, -p) for p in X)
    except OriginNotInteriorError:
        return np.inf


def _reflected_factor(X, S, v):
    """Certified factor ``d + (d+1) g`` for ``Q ⊆ -d S + (d+1) v`` with ``v ∈ -g conv S``."""
    d = X.shape[1]
    return d + (d + 1) * gauge(S, -v)


def _degenerate(variant, X, lam, simplex, tol, reason):
    S = X[list(simplex.indices)]
    factor = _reflected_factor(X, S, simplex.v)
    measured = covering_factor(X, S)
    checks = [
        Check("reflected_simplex_containment", simplex.containment_violation, 0.0,
              simplex.containment_ok),
        Check.le("measured_le_certified", measured, factor, tol.containment_slack),
    ]
    return GrunbaumSelection(variant, simplex.indices, factor, measured, lam, reason, simplex,
                             checks, {"v": simplex.v})


def _require(sel):
    failed = [c for c in sel.checks if not c.passed]
    if failed:
        names = ", ".join(f"{c.name} ({c.value:.6g} > {c.bound:.6g})" for c in failed)
        raise CertificateError(f"certificate failure: {names}")
    return sel


def select_2d_plus_1(Q, lam, tol: Tolerance = DEFAULT_TOLERANCE, simplex=None, facets=None):
    """At most ``2d+1`` extreme points with ``Q ⊆ -(lam+1)(d+1) conv(chosen)``."""
    X = _pts(Q)
    d = X.shape[1]
    simplex = max_volume_simplex(X, tol) if simplex is None else simplex
    v = simplex.v
    if np.linalg.norm(v) <= tol.eps_rel * diameter(X):
        return _require(_degenerate(VARIANT_2D_PLUS_1, X, lam, simplex, tol, "v_at_origin"))
    carath = caratheodory_boundary(X, -v, tol, facets)
    chosen = tuple(sorted(set(simplex.indices) | set(carath.indices)))
    C = X[list(chosen)]
    factor = (lam + 1) * (d + 1)
    slack = tol.containment_slack
    checks = [
        Check("reflected_simplex_containment", simplex.containment_violation, 0.0, simplex.containment_ok),
        Check.le("v_in_minus_lam_conv", _safe_gauge(C, -v), lam, slack),
    ]
    measured = covering_factor(X, C)
    checks.append(Check.le("measured_le_certified", measured, factor, slack))
    aux = {"v": v, "y": carath.y, "boundary_indices": carath.indices,
           "boundary_weights": carath.weights}
    return _require(GrunbaumSelection(VARIANT_2D_PLUS_1, chosen, factor, measured, lam, "generic",
                                      simplex, checks, aux))


def _safe_gauge(C, x):
    try:
        return gauge(C, x)
    except OriginNotInteriorError:
        return np.inf


def exit_facet(S, v):
    """Facet of ``S`` hit by the ray from ``v`` in direction ``v``.

    Returns ``(j, q)`` where ``j`` is the index of the vertex opposite that facet.
    Along ``v + s v`` the barycentric coordinates are ``(1+s)/(d+1) - s*mu`` with
    ``mu`` the coordinates of the origin, so the exit parameter at ``j`` is
    ``(1/(d+1)) / (mu_j - 1/(d+1))`` for the coordinates that decrease.
    """
    k = len(S)
    mu = barycentric(S, np.zeros(S.shape[1]))[0]
    rate = mu - 1.0 / k
    cand = np.flatnonzero(rate > 1e-15)
    if cand.size == 0:
        raise NumericalFailure("ray from the simplex centroid never exits")
    s = (1.0 / k) / rate[cand]
    best = s.min()
    j = int(cand[np.flatnonzero(s <= best * (1.0 + 1e-12))[0]])
    return j, v + best * v


def select_2d(Q, lam, tol: Tolerance = DEFAULT_TOLERANCE, simplex=None, facets=None):
    """At most ``2d`` extreme points with ``Q ⊆ -(lam+1)(2d^2+2d+1) conv(chosen)``.

    One vertex of the maximal simplex is dropped: the facet ``F`` where the
    ray from ``v`` away from the origin leaves the simplex is kept, together
    with at most ``d`` points spanning the boundary point in direction ``-w``,
    ``w`` being the centroid of ``conv{v, F}``.
    """
    X = _pts(Q)
    d = X.shape[1]
    simplex = max_volume_simplex(X, tol) if simplex is None else simplex
    v = simplex.v
    diam = diameter(X)
    if np.linalg.norm(v) <= tol.eps_rel * diam:
        return _require(_degenerate(VARIANT_2D, X, lam, simplex, tol, "v_at_origin"))
    S = X[list(simplex.indices)]
    j, q = exit_facet(S, v)
    F_idx = tuple(i for k, i in enumerate(simplex.indices) if k != j)
    S1 = np.vstack([v, X[list(F_idx)]])
    w = S1.mean(axis=0)
    if np.linalg.norm(w) <= tol.eps_rel * diam:
        return _require(_degenerate(VARIANT_2D, X, lam, simplex, tol, "w_at_origin"))
    carath = caratheodory_boundary(X, -w, tol, facets)
    chosen = tuple(sorted(set(F_idx) | set(carath.indices)))
    C = X[list(chosen)]
    slack = tol.containment_slack
    big, shift = 2 * d * (d + 1), 2 * d * d + 2 * d + 1
    factor = (lam + 1) * shift

    # x ∈ -big*S1 + shift*w  <=>  (shift*w - x)/big ∈ S1
    A1, b1 = simplex_halfspaces(S1)
    Y = (shift * w - X) / big
    excess = float(np.max(Y @ A1.T - b1))
    scale1 = 1.0 + np.abs(S1).max()
    checks = [
        Check("reflected_simplex_containment", simplex.containment_violation, 0.0, simplex.containment_ok),
        Check("dilated_s1_containment", excess, 0.0, excess <= slack * scale1),
        Check.le("s1_in_conv", max(_safe_gauge(C, p) for p in S1), 1.0, slack),
        Check.le("w_in_minus_lam_conv", _safe_gauge(C, -w), lam, slack),
    ]
    measured = covering_factor(X, C)
    checks.append(Check.le("measured_le_certified", measured, factor, slack))
    aux = {"v": v, "q": q, "facet_opposite": int(simplex.indices[j]), "w": w, "y2": carath.y,
           "boundary_indices": carath.indices, "boundary_weights": carath.weights}
    return _require(GrunbaumSelection(VARIANT_2D, chosen, factor, measured, lam, "generic",
                                      simplex, checks, aux))


def _facet_gauge(C, X):
    """Gauges of the rows of ``X`` w.r.t. ``conv(C)`` from the facet inequalities."""
    facets = hull_facets(C)
    N = np.array([f.normal for f in facets])
    h = np.array([f.offset for f in facets])
    if np.any(h <= 0):
        return np.full(len(np.atleast_2d(X)), np.inf)
    return np.max(np.atleast_2d(X) @ N.T / h, axis=1).clip(min=0.0)


def audit_selection(Q, sel: GrunbaumSelection, tol: Tolerance = DEFAULT_TOLERANCE) -> dict:
    """Recompute every recorded containment from the selection's fields alone.

    Gauges are evaluated through the facets of ``conv(chosen)`` and membership
    in simplices through barycentric coordinates, so nothing here reuses the
    LP path that produced the selection.  Returns ``{check name: passed}``.
    """
    X = _pts(Q)
    d = X.shape[1]
    slack = tol.containment_slack
    C = X[list(sel.indices)]
    S = X[list(sel.simplex.indices)]
    out = {}
    v = S.mean(axis=0)
    lam_bc = barycentric(S, X)
    out["reflected_simplex_containment"] = bool(lam_bc.max() <= 1.0 + slack)
    limit = 2 * d + 1 if sel.variant == VARIANT_2D_PLUS_1 else 2 * d
    out["size"] = len(sel.indices) <= limit
    measured = _facet_gauge(C, -X).max()
    out["measured_le_certified"] = bool(measured <= sel.factor * (1.0 + slack))
    out["measured_agrees"] = bool(abs(measured - sel.measured) <= 1e-6 * max(1.0, measured))
    if sel.branch != "generic":
        return out
    if sel.variant == VARIANT_2D_PLUS_1:
        out["v_in_minus_lam_conv"] = bool(_facet_gauge(C, -v)[0] <= sel.lam * (1.0 + slack))
    else:
        w = sel.aux["w"]
        F = np.array([X[i] for i in sel.simplex.indices if i != sel.aux["facet_opposite"]])
        S1 = np.vstack([v, F])
        big, shift = 2 * d * (d + 1), 2 * d * d + 2 * d + 1
        bc = barycentric(S1, (shift * w - X) / big)
        out["dilated_s1_containment"] = bool(bc.min() >= -slack)
        out["s1_in_conv"] = bool(_facet_gauge(C, S1).max() <= 1.0 + slack)
        out["w_in_minus_lam_conv"] = bool(_facet_gauge(C, -w)[0] <= sel.lam * (1.0 + slack))
    return out
