"""Dense two-phase simplex for small linear programs.

The problems solved here are tiny (a handful of rows, at most a few hundred
columns), so a plain tableau with explicit pivoting is both fast enough and
easy to audit.  Pricing is Dantzig's rule; after a run of degenerate pivots
the solver switches permanently to Bland's rule, which cannot cycle.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import NumericalFailure

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_SENSES = ("<=", ">=", "==")
_PIVOT_TOL = 1e-11
_COST_TOL = 1e-10
_FEAS_TOL = 1e-9
_STALL_LIMIT = 8


@dataclass
class LPProblem:
    """``min`` (or ``max``) ``c @ x`` subject to ``A x (senses) b`` and bounds.

    ``lower`` defaults to zero for every variable; use ``-inf`` for a free
    variable.  ``upper`` defaults to ``+inf``.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: Optional[tuple] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    maximize: bool = False

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).ravel()
        if self.b.size != self.A.shape[0]:
            raise ValueError("A and b disagree on the number of constraints")
        if self.senses is None:
            self.senses = ("<=",) * self.b.size
        self.senses = tuple(self.senses)
        if len(self.senses) != self.b.size or any(s not in _SENSES for s in self.senses):
            raise ValueError(f"senses must be {len(self.b)} entries from {_SENSES}")
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        if self.lower.size != n or self.upper.size != n:
            raise ValueError("bounds must have one entry per variable")
        data = [self.c, self.A, self.b]
        if not all(np.all(np.isfinite(a)) for a in data):
            raise ValueError("LP data must be finite")
        if np.any(self.lower > self.upper) or np.any(np.isposinf(self.lower)) or np.any(np.isneginf(self.upper)):
            raise ValueError("inconsistent variable bounds")


@dataclass
class LPSolution:
    status: str
    x: Optional[np.ndarray] = None
    value: float = np.nan
    active: tuple = ()
    basic: tuple = ()
    iterations: int = 0
    used_bland: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _standard_form(p):
    """Rewrite ``p`` as ``min cost @ y, M y (senses) r, y >= 0`` with ``x = x0 + T y``."""
    n = p.c.size
    cols = []
    x0 = np.zeros(n)
    owner = []
    bound_rows = []
    for j in range(n):
        lo, hi = p.lower[j], p.upper[j]
        if np.isfinite(lo):
            x0[j] = lo
            cols.append((j, 1.0))
            owner.append(j)
            if np.isfinite(hi):
                bound_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            x0[j] = hi
            cols.append((j, -1.0))
            owner.append(j)
        else:
            cols.append((j, 1.0))
            owner.append(j)
            cols.append((j, -1.0))
            owner.append(j)
    T = np.zeros((n, len(cols)))
    for k, (j, s) in enumerate(cols):
        T[j, k] = s
    M = p.A @ T
    r = p.b - p.A @ x0
    senses = list(p.senses)
    if bound_rows:
        extra = np.zeros((len(bound_rows), len(cols)))
        for i, (k, width) in enumerate(bound_rows):
            extra[i, k] = 1.0
        M = np.vstack([M, extra])
        r = np.concatenate([r, [w for _, w in bound_rows]])
        senses += ["<="] * len(bound_rows)
    sign = -1.0 if p.maximize else 1.0
    cost = sign * (p.c @ T)
    return M, r, senses, cost, x0, T, np.array(owner)


class _Tableau:
    def __init__(self, M, r, senses):
        m, ny = M.shape
        slack_sign = [1.0 if s == "<=" else -1.0 if s == ">=" else 0.0 for s in senses]
        n_slack = sum(1 for s in senses if s != "==")
        body = np.zeros((m, ny + n_slack))
        body[:, :ny] = M
        k = ny
        slack_col = [-1] * m
        for i, s in enumerate(slack_sign):
            if s != 0.0:
                body[i, k] = s
                slack_col[i] = k
                k += 1
        rhs = r.copy()
        flip = rhs < 0
        body[flip] *= -1.0
        rhs[flip] *= -1.0

        basis = [-1] * m
        need_art = []
        for i in range(m):
            j = slack_col[i]
            if j >= 0 and body[i, j] > 0:
                basis[i] = j
            else:
                need_art.append(i)
        self.n_struct = ny
        self.n_real = body.shape[1]
        art = np.zeros((m, len(need_art)))
        for a, i in enumerate(need_art):
            art[i, a] = 1.0
            basis[i] = self.n_real + a
        self.T = np.hstack([body, art, rhs[:, None]])
        self.basis = basis
        self.n_art = len(need_art)
        self.iterations = 0
        self.used_bland = False

    @property
    def ncols(self):
        return self.T.shape[1] - 1

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        colv = T[:, col].copy()
        colv[row] = 0.0
        T -= np.outer(colv, T[row])
        self.basis[row] = col
        self.iterations += 1

    def run(self, cost, allowed, max_iter):
        """Minimise ``cost`` over the current basis; return True if unbounded."""
        T = self.T
        m = T.shape[0]
        stall = 0
        bland = False
        cb = cost[self.basis]
        red = cost - cb @ T[:, :-1]
        red[~allowed] = 0.0
        obj = cb @ T[:, -1]
        for _ in range(max_iter):
            candidates = np.flatnonzero(red < -_COST_TOL)
            if candidates.size == 0:
                return False
            if bland:
                col = int(candidates[0])
            else:
                col = int(candidates[np.argmin(red[candidates])])
            colv = T[:, col]
            rows = np.flatnonzero(colv > _PIVOT_TOL)
            if rows.size == 0:
                return True
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
            row = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(row, col)
            red = red - red[col] * T[row, :-1]
            red[~allowed] = 0.0
            new_obj = cost[self.basis] @ T[:, -1]
            if new_obj < obj - 1e-12 * (1.0 + abs(obj)):
                stall = 0
            else:
                stall += 1
                if stall >= _STALL_LIMIT and not bland:
                    bland = True
                    self.used_bland = True
            obj = new_obj
        raise NumericalFailure(f"simplex did not terminate within {max_iter} pivots (m={m})")

    def evict_artificials(self):
        """Pivot artificials out of the basis; drop rows that turn out redundant."""
        keep = []
        for i in range(self.T.shape[0]):
            if self.basis[i] < self.n_real:
                keep.append(i)
                continue
            row = self.T[i, : self.n_real]
            nz = np.flatnonzero(np.abs(row) > 1e-9)
            if nz.size:
                self.pivot(i, int(nz[np.argmax(np.abs(row[nz]))]))
                keep.append(i)
        if len(keep) < self.T.shape[0]:
            self.T = self.T[keep]
            self.basis = [self.basis[i] for i in keep]
        self.T = np.hstack([self.T[:, : self.n_real], self.T[:, -1:]])


def _constraint_rows(p):
    """All constraints of ``p`` (bounds included) as ``G x <= h`` plus equality rows."""
    n = p.c.size
    senses = np.array(p.senses)
    G = [p.A[senses == "<="], -p.A[senses == ">="]]
    h = [p.b[senses == "<="], -p.b[senses == ">="]]
    eye = np.eye(n)
    lo, hi = np.isfinite(p.lower), np.isfinite(p.upper)
    G += [-eye[lo], eye[hi]]
    h += [-p.lower[lo], p.upper[hi]]
    return np.vstack(G), np.concatenate(h), p.A[senses == "=="]


def _purify(p, x):
    """Slide an optimal point along optimal faces until it is a vertex.

    Splitting free variables gives basic solutions of the standard form that
    need not be vertices of the original polyhedron; moving inside the null
    space of the active rows keeps the objective (by optimality) and stops
    when a new constraint becomes tight.
    """
    G, h, E = _constraint_rows(p)
    n = x.size
    for _ in range(n):
        slack = h - G @ x
        tight = slack <= 1e-9 * (1.0 + np.abs(h))
        act = np.vstack([E, G[tight]])
        if act.shape[0]:
            _, sv, vt = np.linalg.svd(act)
            rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
            null = vt[rank:]
        else:
            null = np.eye(n)
        if null.shape[0] == 0:
            break
        d = null[0]
        if p.c @ d * (-1.0 if p.maximize else 1.0) > 0:
            d = -d
        step = None
        for direction in (d, -d):
            rate = G @ direction
            moving = rate > 1e-12
            if np.any(moving):
                step = direction * np.min(np.maximum(slack[moving], 0.0) / rate[moving])
                break
        if step is None:
            break
        x = x + step
    return x


def solve_lp(p: LPProblem, max_iter=None) -> LPSolution:
    """Solve ``p`` and return a basic optimal solution when one exists.

    Raises :class:`NumericalFailure` when pivoting fails to terminate.
    """
    M, r, senses, cost, x0, Tmap, owner = _standard_form(p)
    m, ny = M.shape
    if max_iter is None:
        max_iter = 50 * (m + ny) + 1000
    tab = _Tableau(M, r, senses)
    scale = 1.0 + (np.abs(tab.T[:, -1]).max() if m else 0.0)

    if tab.n_art:
        c1 = np.zeros(tab.ncols)
        c1[tab.n_real:] = 1.0
        tab.run(c1, np.ones(tab.ncols, dtype=bool), max_iter)
        infeas = c1[tab.basis] @ tab.T[:, -1]
        if infeas > _FEAS_TOL * scale:
            return LPSolution(INFEASIBLE, iterations=tab.iterations, used_bland=tab.used_bland,
                              extra={"infeasibility": float(infeas)})
        tab.evict_artificials()
    elif m == 0:
        tab.T = np.zeros((0, ny + 1))

    c2 = np.zeros(tab.n_real)
    c2[:ny] = cost
    allowed = np.ones(tab.n_real, dtype=bool)
    if tab.run(c2, allowed, max_iter):
        value = np.inf if p.maximize else -np.inf
        return LPSolution(UNBOUNDED, value=value, iterations=tab.iterations, used_bland=tab.used_bland)

    y = np.zeros(tab.n_real)
    y[tab.basis] = tab.T[:, -1]
    y = np.maximum(y[:ny], 0.0)
    x = x0 + Tmap @ y
    if np.any(np.isneginf(p.lower) & np.isposinf(p.upper)):
        x = _purify(p, x)
    value = float(p.c @ x)
    resid = p.A @ x - p.b
    tight = np.abs(resid) <= 1e-9 * (1.0 + np.abs(p.b))
    active = tuple(int(i) for i in np.flatnonzero(tight | (np.array(p.senses) == "==")))
    basic = tuple(sorted({int(owner[j]) for j in tab.basis if j < ny and y[j] > 0.0}))
    return LPSolution(OPTIMAL, x=x, value=value, active=active, basic=basic,
                      iterations=tab.iterations, used_bland=tab.used_bland)
