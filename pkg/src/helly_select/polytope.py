"""H- and V-represented polytopes, vertex enumeration and body checks."""
import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import (DegenerateInputError, EnumerationOverflowError,
                         PreconditionError, UnboundedError)
from .lp import LPProblem, solve_lp
from .tolerance import DEFAULT_TOLERANCE, Tolerance

ENUMERATION_CAP = 10**7
_CHUNK = 100_000


def _as_matrix(points, name):
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise PreconditionError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if arr.shape[1] < 2:
        raise PreconditionError(f"dimension must be at least 2, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``{x : <normal, x> <= offset}``."""

    normal: tuple
    offset: float

    def __post_init__(self):
        normal = tuple(float(u) for u in self.normal)
        if not any(normal):
            raise PreconditionError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    def contains(self, x, slack=0.0):
        return float(np.dot(self.normal, x)) <= self.offset + slack


class HPolytope:
    """Intersection of an ordered family of halfspaces ``A x <= b``.

    Row ``i`` is the family member ``K_i``; indices are preserved by every
    operation that selects a subfamily.
    """

    def __init__(self, A, b):
        A = _as_matrix(A, "A")
        b = np.array(b, dtype=float).ravel()
        if b.size != A.shape[0]:
            raise PreconditionError("A and b disagree on the number of halfspaces")
        if not np.all(np.isfinite(b)):
            raise PreconditionError("b contains non-finite entries")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0.0):
            raise PreconditionError(f"zero normal at rows {np.flatnonzero(norms == 0.0).tolist()}")
        self.A = A
        self.b = b
        self.A.flags.writeable = False
        self.b.flags.writeable = False

    @classmethod
    def from_halfspaces(cls, halfspaces):
        halfspaces = list(halfspaces)
        if not halfspaces:
            raise PreconditionError("empty halfspace family")
        return cls([h.normal for h in halfspaces], [h.offset for h in halfspaces])

    @property
    def dim(self):
        return self.A.shape[1]

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def halfspaces(self):
        return [Halfspace(tuple(a), float(b)) for a, b in zip(self.A, self.b)]

    def normalized(self):
        """Rows rescaled to unit normals (same set, same indices)."""
        norms = np.linalg.norm(self.A, axis=1)
        return self.A / norms[:, None], self.b / norms

    def subfamily(self, indices):
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=int)
        if idx.size == 0:
            raise PreconditionError("subfamily must be nonempty")
        return HPolytope(self.A[idx], self.b[idx])

    def translate(self, shift):
        """The body ``K + shift``."""
        return HPolytope(self.A, self.b + self.A @ np.asarray(shift, dtype=float))

    def slacks(self, x):
        return self.b - self.A @ np.asarray(x, dtype=float)

    def contains(self, x, slack=0.0):
        return bool(np.all(self.slacks(x) >= -slack))

    def __repr__(self):
        return f"HPolytope(n={self.n}, dim={self.dim})"


class VPolytope:
    """Convex hull of a finite ordered point set."""

    def __init__(self, points):
        self.points = _as_matrix(points, "points")
        self.points.flags.writeable = False

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def subset(self, indices):
        return VPolytope(self.points[list(indices)])

    def __repr__(self):
        return f"VPolytope(m={len(self)}, dim={self.dim})"


@dataclass
class BodyReport:
    bounded: bool
    full_dim: bool
    empty: bool
    inradius: float
    center: Optional[np.ndarray] = None
    recession_direction: Optional[np.ndarray] = None
    details: dict = field(default_factory=dict)

    @property
    def is_body(self):
        return self.bounded and self.full_dim and not self.empty


def check_bounded_full_dim(K: HPolytope, tol: Tolerance = DEFAULT_TOLERANCE) -> BodyReport:
    """Decide whether ``K`` is a convex body (bounded with nonempty interior)."""
    A, b = K.normalized()
    n, d = A.shape
    recession = None
    for j in range(d):
        for sign in (1.0, -1.0):
            c = np.zeros(d)
            c[j] = sign
            sol = solve_lp(LPProblem(c, A, np.zeros(n), lower=-np.ones(d), upper=np.ones(d),
                                     maximize=True))
            if sol.optimal and sol.value > tol.eps_rel:
                recession = sol.x
                break
        if recession is not None:
            break

    # Chebyshev ball: maximise r subject to <a_i, x> + r <= b_i, capped to keep the LP bounded.
    scale = 1.0 + float(np.max(np.abs(b)))
    cap = 1e6 * scale
    c = np.zeros(d + 1)
    c[-1] = 1.0
    lower = np.concatenate([np.full(d, -np.inf), [-np.inf]])
    upper = np.concatenate([np.full(d, np.inf), [cap]])
    sol = solve_lp(LPProblem(c, np.hstack([A, np.ones((n, 1))]), b, lower=lower, upper=upper,
                             maximize=True))
    if not sol.optimal:
        return BodyReport(recession is None, False, True, -np.inf, None, recession)
    radius = float(sol.x[-1])
    empty = radius < -tol.eps_rel * scale
    full = radius > tol.eps_rel * scale
    return BodyReport(recession is None, full, empty, radius, sol.x[:d].copy(), recession,
                      details={"scale": scale})


def require_body(K: HPolytope, tol: Tolerance = DEFAULT_TOLERANCE) -> BodyReport:
    """Raise unless ``K`` is bounded and full dimensional."""
    report = check_bounded_full_dim(K, tol)
    if not report.bounded:
        raise UnboundedError(f"halfspace family is unbounded along {report.recession_direction}")
    if report.empty:
        raise DegenerateInputError("halfspace family has empty intersection")
    if not report.full_dim:
        raise DegenerateInputError(f"intersection is flat (inradius {report.inradius:.3g})")
    return report


def _combination_chunks(n, k, size=_CHUNK):
    it = itertools.combinations(range(n), k)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, size)),
                            dtype=np.intp)
        if block.size == 0:
            return
        yield block.reshape(-1, k)


def dedupe_points(points, eps_rel):
    """Indices of representatives after merging points closer than ``eps_rel*(1+|v|_inf)``.

    Each cluster is represented by its smallest index; the result is sorted.
    """
    points = np.asarray(points, dtype=float)
    if len(points) <= 1:
        return np.arange(len(points))
    mag = np.max(np.abs(points), axis=1)
    tree = cKDTree(points)
    pairs = tree.query_pairs(r=eps_rel * (1.0 + mag.max()), p=np.inf, output_type="ndarray")
    parent = np.arange(len(points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        gap = np.max(np.abs(points[i] - points[j]))
        if gap <= eps_rel * (1.0 + max(mag[i], mag[j])):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(len(points))])
    return np.unique(roots)


def irredundant_rows(K: HPolytope, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Indices of a subfamily with the same intersection as ``K``.

    Rows are tested from the last to the first against the rows still kept,
    so of two identical halfspaces the smaller index survives.
    """
    A, b = K.normalized()
    n, d = A.shape
    keep = list(range(n))
    free = np.full(d, -np.inf)
    for i in reversed(range(n)):
        others = [j for j in keep if j != i]
        if not others:
            continue
        sol = solve_lp(LPProblem(A[i], A[others], b[others], lower=free, maximize=True))
        if sol.optimal and sol.value <= b[i] + tol.eps_rel * (1.0 + abs(b[i])):
            keep.remove(i)
    return np.array(keep, dtype=int)


def enumerate_vertices(K: HPolytope, tol: Tolerance = DEFAULT_TOLERANCE, check=True,
                       cap=ENUMERATION_CAP, prune=True) -> VPolytope:
    """Vertex set of a bounded full-dimensional ``K`` by brute force over d-subsets.

    Every d-subset of constraints with an invertible system is solved; the
    solutions satisfying all constraints are kept and deduplicated.  Vertices
    are returned in lexicographic order.  With ``prune`` the redundant rows are
    dropped first, which leaves the vertex set unchanged.
    """
    if check:
        require_body(K, tol)
    A, b = K.normalized()
    if prune:
        rows = irredundant_rows(K, tol)
        A, b = A[rows], b[rows]
    n, d = A.shape
    total = comb(n, d)
    if total > cap:
        raise EnumerationOverflowError(f"C({n}, {d}) = {total} exceeds the cap {cap}")
    scale = 1.0 + float(np.max(np.abs(b)))
    feas_tol = 10 * tol.eps_rel * scale
    found = []
    for combos in _combination_chunks(n, d):
        M = A[combos]
        det = np.linalg.det(M)
        ok = np.abs(det) > 1e-12
        if not np.any(ok):
            continue
        combos, M = combos[ok], M[ok]
        x = np.linalg.solve(M, b[combos][..., None])[..., 0]
        viol = (x @ A.T - b).max(axis=1)
        found.append(x[viol <= feas_tol])
    pts = np.vstack(found) if found else np.zeros((0, d))
    if len(pts) == 0:
        raise DegenerateInputError("no vertices found; the body is degenerate")
    pts = pts[dedupe_points(pts, tol.eps_rel)]
    pts = pts[np.lexsort(pts.T[::-1])]
    if len(pts) < d + 1:
        raise DegenerateInputError(f"only {len(pts)} vertices found in dimension {d}")
    return VPolytope(pts)

