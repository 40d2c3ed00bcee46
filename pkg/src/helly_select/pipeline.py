"""From a halfspace family to a certified subfamily of size at most 2d (or 2d+1).

The body ``K`` is centred at ``z``, polarised (halfspace ``i`` becomes the
point ``u_i / (b_i - <u_i, z>)``), the point selection runs on the polar and
the chosen points are mapped back to halfspace indices.  The resulting
subfamily is then checked directly in the primal: its vertices must satisfy
``K_sigma - z ⊆ -c (K - z)``.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .centers import asymmetry_lambda, compute_center
from .exceptions import CertificateError, OriginNotInteriorError, PreconditionError, UnboundedError
from .grunbaum import Check, GrunbaumSelection, max_volume_simplex, select_2d, select_2d_plus_1
from .hull import diameter, extreme_points, hull_facets, origin_is_interior, volume
from .polytope import HPolytope, VPolytope, check_bounded_full_dim, enumerate_vertices, require_body
from .tolerance import DEFAULT_TOLERANCE, Tolerance

MODE_2D = "mu_2d"
MODE_2D_PLUS_1 = "sigma_2dplus1"
MODE_ALIASES = {"2d": MODE_2D, "mu": MODE_2D, MODE_2D: MODE_2D,
                "2d+1": MODE_2D_PLUS_1, "sigma": MODE_2D_PLUS_1, MODE_2D_PLUS_1: MODE_2D_PLUS_1}
VOLUME_MAX_DIM = 4


@dataclass
class PolarInstance:
    z: np.ndarray
    points: np.ndarray  # row i is the polar point of halfspace i
    extreme: np.ndarray  # indices of rows that are extreme points of the polar

    @property
    def Q(self):
        return VPolytope(self.points[self.extreme])

    def global_index(self, local):
        return int(self.extreme[local])


@dataclass
class SelectionResult:
    mode: str
    indices: tuple
    z: np.ndarray
    center_method: str
    lambda_: float
    certified_factor: float
    measured_factor: float
    polar_measured_factor: float
    diam_ratio: float
    vol_ratio: Optional[float]
    bounded: bool
    selection: GrunbaumSelection
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def polarize(K: HPolytope, z, tol: Tolerance = DEFAULT_TOLERANCE, check=True) -> PolarInstance:
    """Polar of ``K - z`` as the hull of one point per halfspace."""
    z = np.asarray(z, dtype=float)
    slack = K.slacks(z)
    norms = np.linalg.norm(K.A, axis=1)
    scale = 1.0 + float(np.max(np.abs(K.b / norms)))
    if np.any(slack / norms <= tol.eps_rel * scale):
        raise OriginNotInteriorError(f"center is not strictly interior (min slack {np.min(slack / norms):.3g})")
    P = K.A / slack[:, None]
    ext = extreme_points(P, tol)
    if check and not origin_is_interior(P[ext], tol):
        raise UnboundedError("origin is not interior to the polar; K - z is unbounded")
    return PolarInstance(z, P, ext)


def back_map(sel: GrunbaumSelection, inst: PolarInstance, tol: Tolerance = DEFAULT_TOLERANCE):
    """Smallest halfspace index whose polar point equals each chosen point (as a sorted set)."""
    out = set()
    Q = inst.Q.points
    for local in sel.indices:
        p = Q[local]
        close = np.max(np.abs(inst.points - p), axis=1) <= tol.eps_rel * (1.0 + np.abs(p).max())
        hits = np.flatnonzero(close)
        if hits.size == 0:
            raise CertificateError(f"chosen polar point {p} matches no halfspace")
        out.add(int(hits[0]))
    return tuple(sorted(out))


def homothetic_factor(inner, outer: HPolytope, z, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Smallest ``c > 0`` with ``inner - z ⊆ -c (outer - z)``.

    For a vertex ``x`` of ``inner`` the condition ``-(x - z)/c ∈ outer - z`` reads
    ``-<u_i, x - z> <= c s_i`` with ``s_i`` the slack of ``z``, so the answer is
    the largest ratio ``-<u_i, x - z> / s_i``.
    """
    z = np.asarray(z, dtype=float)
    if isinstance(inner, HPolytope):
        report = check_bounded_full_dim(inner, tol)
        if not report.bounded:
            raise UnboundedError("inner body is unbounded")
        inner = enumerate_vertices(inner, tol)
    X = inner.points if isinstance(inner, VPolytope) else np.atleast_2d(inner)
    s = outer.slacks(z)
    if np.any(s <= 0):
        raise OriginNotInteriorError("z is not interior to the outer body")
    ratios = -((X - z) @ outer.A.T) / s
    return float(max(ratios.max(), 0.0))


@dataclass
class PreparedBody:
    """Everything that does not depend on the selection mode."""

    K: HPolytope
    vertices: VPolytope
    z: np.ndarray
    center_method: str
    polar: PolarInstance
    lambda_: float
    diameter: float
    volume: Optional[float]
    facets: list
    simplex: object


def prepare(K: HPolytope, center="centroid", tol: Tolerance = DEFAULT_TOLERANCE) -> PreparedBody:
    require_body(K, tol)
    V = enumerate_vertices(K, tol, check=False)
    z = compute_center(K, center, V, tol)
    inst = polarize(K, z, tol)
    Q = inst.Q
    lam = asymmetry_lambda(Q, tol, extreme=np.arange(len(Q)), check=False)
    vol = volume(V) if K.dim <= VOLUME_MAX_DIM else None
    facets = hull_facets(Q, tol)
    simplex = max_volume_simplex(Q, tol)
    return PreparedBody(K, V, z, center, inst, lam, diameter(V), vol, facets, simplex)


def select_prepared(prep: PreparedBody, mode="2d", tol: Tolerance = DEFAULT_TOLERANCE) -> SelectionResult:
    mode = MODE_ALIASES.get(mode)
    if mode is None:
        raise PreconditionError(f"unknown mode; expected one of {sorted(MODE_ALIASES)}")
    K, d = prep.K, prep.K.dim
    Q = prep.polar.Q
    select = select_2d if mode == MODE_2D else select_2d_plus_1
    sel = select(Q, prep.lambda_, tol, simplex=prep.simplex, facets=prep.facets)
    idx = back_map(sel, prep.polar, tol)
    sub = K.subfamily(idx)
    slack = tol.containment_slack
    bounded = check_bounded_full_dim(sub, tol).bounded
    if not bounded:
        raise CertificateError(f"selected subfamily {idx} is unbounded")
    Vs = enumerate_vertices(sub, tol, check=False)
    measured = homothetic_factor(Vs, K, prep.z)
    diam_ratio = diameter(Vs) / prep.diameter
    vol_ratio = volume(Vs) / prep.volume if prep.volume is not None else None
    limit = 2 * d if mode == MODE_2D else 2 * d + 1
    top = 8 * d**3 if mode == MODE_2D else 4 * d * d
    checks = list(sel.checks) + [
        Check.le("subfamily_size", len(idx), limit, 0.0),
        Check.le("lambda_le_d", prep.lambda_, d, 1e-6 / d),
        Check.le("primal_measured_le_certified", measured, sel.factor, slack),
        Check.le("certified_le_dimension_constant", sel.factor, top, slack),
    ]
    if mode == MODE_2D:
        checks.append(Check.le("diam_ratio", diam_ratio, (2 * d) ** 3, 1e-6))
        if vol_ratio is not None:
            checks.append(Check.le("vol_ratio", vol_ratio, float(2 * d) ** (3 * d),
                                   (1 + 1e-6) ** d - 1))
    result = SelectionResult(mode, idx, prep.z, prep.center_method, prep.lambda_, sel.factor,
                             measured, sel.measured, diam_ratio, vol_ratio, bounded, sel, checks)
    failed = [c for c in checks if not c.passed]
    if failed:
        raise CertificateError("; ".join(f"{c.name}: {c.value:.6g} > {c.bound:.6g}" for c in failed))
    return result


def run_pipeline(K: HPolytope, mode="2d", center="centroid",
                 tol: Tolerance = DEFAULT_TOLERANCE) -> SelectionResult:
    """Centre, polarise, select, map back, and verify the subfamily in the primal."""
    return select_prepared(prepare(K, center, tol), mode, tol)
