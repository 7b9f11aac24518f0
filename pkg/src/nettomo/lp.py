"""Linear and binary integer programming.

``solve_lp`` is a bounded-variable revised primal simplex (two phases,
Dantzig pricing with a Bland fallback on degenerate stalls) preceded by a
light presolve. ``solve_binary_ilp`` is depth-first branch-and-bound on top
of it with bound propagation at every node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ValidationError

LE, EQ, GE = "<=", "==", ">="
_SENSES = (LE, EQ, GE)

FEAS_TOL = 1e-9
COST_TOL = 1e-9
PIVOT_TOL = 1e-9
INT_TOL = 1e-6
BOUND_GAP = 1e-6
_REFACTOR_EVERY = 64
_STALL_LIMIT = 40


@dataclass
class LpProblem:
    """``min c.x`` subject to ``A x (<=|==|>=) b`` and ``lower <= x <= upper``."""

    objective: np.ndarray
    A: np.ndarray
    senses: list
    rhs: np.ndarray
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        n = c.shape[0]
        a = np.asarray(self.A, dtype=float)
        if a.size == 0:
            a = a.reshape(0, n)
        if a.ndim != 2 or a.shape[1] != n:
            raise ValidationError("constraint rows must match the objective length")
        b = np.asarray(self.rhs, dtype=float).ravel()
        senses = list(self.senses)
        if len(senses) != a.shape[0] or b.shape[0] != a.shape[0]:
            raise ValidationError("one sense and one right-hand side per row")
        bad = [s for s in senses if s not in _SENSES]
        if bad:
            raise ValidationError(f"unknown relation {bad[0]!r}")
        lo = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).ravel().copy()
        up = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel().copy()
        if lo.shape[0] != n or up.shape[0] != n:
            raise ValidationError("one bound per variable")
        if (lo > up).any() or np.isposinf(lo).any() or np.isneginf(up).any():
            raise ValidationError("inconsistent variable bounds")
        if not (np.isfinite(c).all() and np.isfinite(a).all() and np.isfinite(b).all()):
            raise ValidationError("non-finite problem data")
        self.objective, self.A, self.senses, self.rhs = c, a, senses, b
        self.lower, self.upper = lo, up

    @classmethod
    def from_constraints(cls, objective, constraints, bounds=None) -> "LpProblem":
        """Build from ``[(coeffs, relation, rhs), ...]`` and ``[(lo, hi), ...]``."""
        n = len(objective)
        rows = [np.asarray(c, dtype=float) for c, _, _ in constraints]
        a = np.vstack(rows) if rows else np.zeros((0, n))
        lo = up = None
        if bounds is not None:
            lo = [(-np.inf if b[0] is None else b[0]) for b in bounds]
            up = [(np.inf if b[1] is None else b[1]) for b in bounds]
        return cls(objective, a, [s for _, s, _ in constraints],
                   [r for _, _, r in constraints], lo, up)

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def with_bounds(self, lower, upper) -> "LpProblem":
        return replace(self, lower=np.asarray(lower, float), upper=np.asarray(upper, float))

    def violation(self, x) -> float:
        """Largest scaled constraint or bound violation at ``x``."""
        x = np.asarray(x, dtype=float)
        worst = max(0.0, float(np.max(self.lower - x, initial=0.0)),
                    float(np.max(x - self.upper, initial=0.0)))
        if self.n_rows:
            act = self.A @ x
            scale = np.maximum(1.0, np.maximum(np.abs(self.rhs), np.abs(self.A) @ np.abs(x)))
            gap = act - self.rhs
            for i, s in enumerate(self.senses):
                g = gap[i] if s == LE else (-gap[i] if s == GE else abs(gap[i]))
                worst = max(worst, g / scale[i])
        return worst

    def to_text(self) -> str:
        """Plain-text listing for debugging; not a stable format."""
        fmt = lambda row: " ".join(f"{v:+g}*x{j}" for j, v in enumerate(row) if v)
        lines = ["minimize " + (fmt(self.objective) or "0"), "subject to"]
        for row, s, b in zip(self.A, self.senses, self.rhs):
            lines.append(f"  {fmt(row) or '0'} {s} {b:g}")
        lines.append("bounds")
        for j, (lo, up) in enumerate(zip(self.lower, self.upper)):
            lines.append(f"  {lo:g} <= x{j} <= {up:g}")
        return "\n".join(lines)


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded | numerical_error
    values: np.ndarray | None = None
    objective_value: float = math.nan
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass
class IlpSolution:
    status: str  # optimal | infeasible | unbounded | unknown
    values: np.ndarray | None = None
    objective_value: float = math.nan
    nodes_explored: int = 0
    message: str = ""

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


# ---------------------------------------------------------------------------
# simplex core


def _simplex(A, b, c, lo, up, max_iter, slack_of_row=None):
    """Bounded primal simplex on ``A x = b``; returns (status, x, iterations).

    ``slack_of_row[i]`` is the column of a unit slack for row ``i`` (or -1).
    Rows whose slack can absorb the starting residual begin with that slack
    basic; the others get an artificial column.
    """
    m, n = A.shape
    x = np.where(np.isfinite(lo), lo, np.where(np.isfinite(up), up, 0.0))
    resid = b - A @ x
    basis = np.empty(m, dtype=np.int64)
    need_art = np.ones(m, dtype=bool)
    if slack_of_row is not None:
        for i, k in enumerate(slack_of_row):
            if k < 0:
                continue
            val = x[k] + resid[i]
            if lo[k] - FEAS_TOL <= val <= up[k] + FEAS_TOL:
                x[k] = val
                basis[i] = k
                need_art[i] = False
    resid = b - A @ x
    art_rows = np.flatnonzero(need_art)
    na = art_rows.size
    sign = np.where(resid[art_rows] >= 0, 1.0, -1.0)
    art_cols = np.zeros((m, na))
    art_cols[art_rows, np.arange(na)] = sign
    Afull = np.hstack([A, art_cols])
    lo_f = np.concatenate([lo, np.zeros(na)])
    up_f = np.concatenate([up, np.full(na, np.inf)])
    xf = np.concatenate([x, np.abs(resid[art_rows])])
    basis[art_rows] = n + np.arange(na)
    # every basic column is a signed unit vector, so the inverse is its transpose
    binv = Afull[:, basis].T.copy()

    if na == 0:
        c2 = np.concatenate([c, np.zeros(na)])
        status, it2 = _iterate(Afull, b, c2, lo_f, up_f, xf, basis, binv, max_iter)
        return status, xf[:n], it2
    c1 = np.concatenate([np.zeros(n), np.ones(na)])
    status, it1 = _iterate(Afull, b, c1, lo_f, up_f, xf, basis, binv, max_iter)
    if status != "optimal":
        return "numerical_error", None, it1
    art = xf[n:]
    if art.sum() > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
        return "infeasible", None, it1
    # phase 2: artificials pinned to zero
    up_f[n:] = 0.0
    xf[n:] = np.clip(xf[n:], 0.0, 0.0)
    c2 = np.concatenate([c, np.zeros(na)])
    binv = _refactor(Afull, basis)
    if binv is None:
        return "numerical_error", None, it1
    status, it2 = _iterate(Afull, b, c2, lo_f, up_f, xf, basis, binv, max_iter)
    return status, xf[:n], it1 + it2


def _refactor(Afull, basis):
    try:
        return np.linalg.inv(Afull[:, basis])
    except np.linalg.LinAlgError:
        return None


def _iterate(A, b, c, lo, up, x, basis, binv, max_iter):
    m, ntot = A.shape
    is_basic = np.zeros(ntot, dtype=bool)
    is_basic[basis] = True
    stall = 0
    since_refactor = 0
    for it in range(max_iter):
        if since_refactor >= _REFACTOR_EVERY:
            binv = _refactor(A, basis)
            if binv is None:
                return "numerical_error", it
            nb = ~is_basic
            x[basis] = binv @ (b - A[:, nb] @ x[nb])
            since_refactor = 0
        y = c[basis] @ binv
        d = c - y @ A
        can_up = (d < -COST_TOL) & (x < up - FEAS_TOL)
        can_down = (d > COST_TOL) & (x > lo + FEAS_TOL)
        elig = (can_up | can_down) & ~is_basic
        cand = np.flatnonzero(elig)
        if cand.size == 0:
            binv = _refactor(A, basis)
            if binv is not None:
                nb = ~is_basic
                x[basis] = binv @ (b - A[:, nb] @ x[nb])
            return "optimal", it
        bland = stall >= _STALL_LIMIT
        j = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
        sigma = 1.0 if can_up[j] else -1.0
        alpha = binv @ A[:, j]
        rate = -sigma * alpha  # d x_B / dt
        xb = x[basis]
        lb, ub = lo[basis], up[basis]
        with np.errstate(divide="ignore", invalid="ignore"):
            t_dec = np.where(rate < -PIVOT_TOL, (xb - lb) / -rate, np.inf)
            t_inc = np.where(rate > PIVOT_TOL, (ub - xb) / rate, np.inf)
        t_rows = np.maximum(np.minimum(t_dec, t_inc), 0.0)
        t_flip = up[j] - lo[j]
        t_best = float(t_rows.min()) if m else np.inf
        if not np.isfinite(t_best) and not np.isfinite(t_flip):
            return "unbounded", it
        if t_flip <= t_best:
            t = t_flip
            x[j] = up[j] if sigma > 0 else lo[j]
            x[basis] = xb + rate * t
            stall = 0 if t > FEAS_TOL else stall + 1
            continue
        t = t_best
        ties = np.flatnonzero(t_rows <= t_best + 1e-12)
        if bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(np.abs(alpha[ties]))])
        x[j] += sigma * t
        x[basis] = xb + rate * t
        leaving = basis[r]
        x[leaving] = lo[leaving] if t_dec[r] <= t_inc[r] else up[leaving]
        # eta update of the basis inverse
        piv = alpha[r]
        row = binv[r] / piv
        binv -= np.outer(alpha, row)
        binv[r] = row
        is_basic[leaving] = False
        is_basic[j] = True
        basis[r] = j
        since_refactor += 1
        stall = 0 if t > FEAS_TOL else stall + 1
    return "numerical_error", max_iter


# ---------------------------------------------------------------------------
# presolve + driver


def _row_activity_bounds(A, lo, up):
    pos = np.maximum(A, 0.0)
    neg = np.minimum(A, 0.0)
    with np.errstate(invalid="ignore"):
        lo_f = np.where(np.isfinite(lo), lo, 0.0)
        up_f = np.where(np.isfinite(up), up, 0.0)
        min_inf = ((pos != 0) & ~np.isfinite(lo)) | ((neg != 0) & ~np.isfinite(up))
        max_inf = ((pos != 0) & ~np.isfinite(up)) | ((neg != 0) & ~np.isfinite(lo))
    amin = np.where(min_inf.any(axis=1), -np.inf, pos @ lo_f + neg @ up_f)
    amax = np.where(max_inf.any(axis=1), np.inf, pos @ up_f + neg @ lo_f)
    return amin, amax


def solve_lp(problem: LpProblem, max_iter: int | None = None) -> LpSolution:
    """Solve ``problem`` to optimality or report why not.

    The returned status is never ``optimal`` unless the assignment passes an
    independent feasibility re-check at ``FEAS_TOL`` (scaled by row size).
    """
    c, A, b = problem.objective, problem.A, problem.rhs
    lo, up = problem.lower, problem.upper
    n = problem.n_vars
    fixed = np.isfinite(lo) & np.isfinite(up) & (up - lo <= 1e-12)
    free_idx = np.flatnonzero(~fixed)
    x = np.zeros(n)
    x[fixed] = lo[fixed]
    b_red = b - A[:, fixed] @ lo[fixed]
    A_red = A[:, free_idx]
    lo_r, up_r, c_r = lo[free_idx], up[free_idx], c[free_idx]
    senses = np.array(problem.senses, dtype=object)

    amin, amax = _row_activity_bounds(A_red, lo_r, up_r)
    scale = np.maximum(1.0, np.abs(b_red))
    tol = FEAS_TOL * scale
    is_le, is_ge, is_eq = senses == LE, senses == GE, senses == EQ
    infeasible = ((is_le | is_eq) & (amin > b_red + tol)) | ((is_ge | is_eq) & (amax < b_red - tol))
    if infeasible.any():
        return LpSolution("infeasible")
    redundant = (is_le & (amax <= b_red)) | (is_ge & (amin >= b_red)) \
        | (is_eq & (amin == amax) & (np.abs(amin - b_red) <= tol))
    keep = ~redundant
    A_red, b_red, senses = A_red[keep], b_red[keep], senses[keep]

    m = A_red.shape[0]
    if free_idx.size == 0 or m == 0:
        xr = np.empty(free_idx.size)
        for k, cj in enumerate(c_r):
            if cj > 0:
                xr[k] = lo_r[k]
            elif cj < 0:
                xr[k] = up_r[k]
            else:
                xr[k] = lo_r[k] if np.isfinite(lo_r[k]) else (up_r[k] if np.isfinite(up_r[k]) else 0.0)
        if not np.isfinite(xr).all():
            return LpSolution("unbounded")
        x[free_idx] = xr
        return _finish(problem, x, 0)

    # slack per row; its bounds encode the sense
    s_lo = np.where(senses == GE, -np.inf, 0.0).astype(float)
    s_up = np.where(senses == LE, np.inf, 0.0).astype(float)
    keep_slack = senses != EQ
    S = np.eye(m)[:, keep_slack]
    A_std = np.hstack([A_red, S])
    lo_std = np.concatenate([lo_r, s_lo[keep_slack]])
    up_std = np.concatenate([up_r, s_up[keep_slack]])
    c_std = np.concatenate([c_r, np.zeros(int(keep_slack.sum()))])
    if max_iter is None:
        max_iter = 50 * (A_std.shape[0] + A_std.shape[1]) + 1000
    slack_of_row = np.full(m, -1, dtype=np.int64)
    slack_of_row[keep_slack] = free_idx.size + np.arange(int(keep_slack.sum()))
    status, xs, iters = _simplex(A_std, b_red, c_std, lo_std, up_std, max_iter, slack_of_row)
    if status != "optimal":
        return LpSolution(status, iterations=iters)
    x[free_idx] = xs[: free_idx.size]
    return _finish(problem, x, iters)


def _finish(problem, x, iters):
    lo, up = problem.lower, problem.upper
    # snap values that sit within tolerance of a finite bound
    near_lo = np.isfinite(lo) & (np.abs(x - lo) <= FEAS_TOL * np.maximum(1.0, np.abs(lo)))
    near_up = np.isfinite(up) & (np.abs(x - up) <= FEAS_TOL * np.maximum(1.0, np.abs(up)))
    x = np.where(near_lo, lo, np.where(near_up, up, x))
    if problem.violation(x) > FEAS_TOL:
        return LpSolution("numerical_error", x, float(problem.objective @ x), iters)
    return LpSolution("optimal", x, float(problem.objective @ x), iters)


# ---------------------------------------------------------------------------
# branch and bound


def _as_le_system(problem):
    rows, rhs = [], []
    for a, s, b in zip(problem.A, problem.senses, problem.rhs):
        if s in (LE, EQ):
            rows.append(a)
            rhs.append(b)
        if s in (GE, EQ):
            rows.append(-a)
            rhs.append(-b)
    if not rows:
        return np.zeros((0, problem.n_vars)), np.zeros(0)
    return np.vstack(rows), np.asarray(rhs)


def propagate_bounds(G, h, lo, up, binary, max_passes=50):
    """Tighten binary bounds implied by ``G x <= h``.

    Returns ``(feasible, lo, up)``; continuous variables keep their bounds.
    """
    lo, up = lo.copy(), up.copy()
    if G.shape[0] == 0:
        return True, lo, up
    pos, neg = G > 0, G < 0
    for _ in range(max_passes):
        lo_f = np.where(np.isfinite(lo), lo, 0.0)
        up_f = np.where(np.isfinite(up), up, 0.0)
        contrib = np.where(pos, G * lo_f, np.where(neg, G * up_f, 0.0))
        inf_terms = (pos & ~np.isfinite(lo)) | (neg & ~np.isfinite(up))
        n_inf = inf_terms.sum(axis=1)
        finite = n_inf == 0
        amin = contrib.sum(axis=1)
        if (finite & (amin > h + FEAS_TOL * np.maximum(1.0, np.abs(h)))).any():
            return False, lo, up
        rows = np.flatnonzero(finite)
        if rows.size == 0:
            break
        # slack available to each variable: h - (amin - own contribution)
        room = (h[rows] - amin[rows])[:, None] + contrib[rows]
        Gr = G[rows]
        with np.errstate(divide="ignore", invalid="ignore"):
            limit = room / Gr
        changed = False
        cols = np.flatnonzero(binary & (up > lo))
        if cols.size == 0:
            break
        sub_limit, sub_g = limit[:, cols], Gr[:, cols]
        # positive coefficient: x <= limit; forces 0 when limit < 1
        force0 = ((sub_g > 0) & (sub_limit < 1.0 - INT_TOL)).any(axis=0)
        force1 = ((sub_g < 0) & (sub_limit > INT_TOL)).any(axis=0)
        if force0.any():
            up[cols[force0]] = 0.0
            changed = True
        if force1.any():
            lo[cols[force1]] = 1.0
            changed = True
        if (lo > up).any():
            return False, lo, up
        if not changed:
            break
    return True, lo, up


def solve_binary_ilp(problem: LpProblem, binary_vars, node_limit: int = 200_000,
                     branch_first=None, incumbent=None, completion=None) -> IlpSolution:
    """Exact minimisation with the variables in ``binary_vars`` restricted to {0, 1}.

    Depth-first branch-and-bound on LP relaxations; branches on the most
    fractional binary (ties -> lowest index), exploring the nearer rounding
    first. Variables listed in ``branch_first`` are all fixed, fractional
    ones first, before any other variable is branched on. Nodes are pruned by bound (integral objectives use
    ceiling bounds) and by bound propagation. A feasible ``incumbent``
    seeds the search.

    ``completion`` lets a caller impose constraints that ``problem`` omits.
    It receives a point whose ``branch_first`` entries are integral and
    returns the best point agreeing with them that satisfies everything, or
    None. Incumbents then come only from completed points: a node closes
    once its bound cannot beat the incumbent or all priority variables are
    fixed, and otherwise branches on the first free priority variable.
    Exceeding ``node_limit`` returns status ``unknown`` together with the
    incumbent, if any.
    """
    n = problem.n_vars
    binary = np.zeros(n, dtype=bool)
    idx = np.asarray(list(binary_vars), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValidationError("binary variable index out of range")
    binary[idx] = True
    lo = problem.lower.copy()
    up = problem.upper.copy()
    lo[binary] = np.ceil(np.maximum(lo[binary], 0.0) - INT_TOL)
    up[binary] = np.floor(np.minimum(up[binary], 1.0) + INT_TOL)
    c = problem.objective
    integral_obj = bool(np.all(c[~binary] == 0) and np.all(np.abs(c[binary] - np.round(c[binary])) < 1e-12))
    G, h = _as_le_system(problem)
    first = np.zeros(n, dtype=bool)
    if branch_first is not None:
        first[np.asarray(list(branch_first), dtype=int)] = True
    first &= binary
    if completion is not None and not first.any():
        raise ValidationError("completion needs a non-empty branch_first")

    best_x, best_val = None, math.inf
    if incumbent is not None:
        inc = np.asarray(incumbent, dtype=float)
        if inc.shape != (n,):
            raise ValidationError("incumbent has the wrong length")
        ok_int = np.all(np.abs(inc[binary] - np.round(inc[binary])) <= INT_TOL)
        if ok_int and problem.violation(inc) <= FEAS_TOL:
            best_x, best_val = inc.copy(), float(c @ inc)
    stack = [(lo, up)]
    nodes = 0
    saw_unbounded = False
    saw_numerical = False
    while stack:
        if nodes >= node_limit:
            return _ilp_result("unknown", best_x, best_val, nodes, problem, binary,
                               message=f"node limit {node_limit} reached")
        nodes += 1
        nlo, nup = stack.pop()
        ok, nlo, nup = propagate_bounds(G, h, nlo, nup, binary)
        if not ok:
            continue
        if completion is not None and np.array_equal(nlo[first], nup[first]):
            best_x, best_val = _complete(completion, nlo, problem, best_x, best_val)
            continue
        sol = solve_lp(problem.with_bounds(nlo, nup))
        if sol.status == "infeasible":
            continue
        if sol.status == "unbounded":
            saw_unbounded = True
            continue
        if sol.status != "optimal":
            saw_numerical = True
            continue
        bound = sol.objective_value
        if _prune(bound, best_val, integral_obj):
            continue
        xb = sol.values[binary]
        frac = np.minimum(xb - np.floor(xb), np.ceil(xb) - xb)
        loose = np.flatnonzero(first & (nup > nlo))
        if completion is not None and frac[first[binary]].max(initial=0.0) <= INT_TOL:
            point = sol.values.copy()
            point[first] = np.round(point[first])
            best_x, best_val = _complete(completion, point, problem, best_x, best_val)
            if _prune(bound, best_val, integral_obj):
                continue
            k = int(loose[0])  # not prunable, so some priority variable is still free
            values = point
        elif completion is None and frac.max(initial=0.0) <= INT_TOL:
            cand = sol.values.copy()
            cand[binary] = np.round(cand[binary])
            if not binary.all():
                fixed = problem.with_bounds(np.where(binary, cand, nlo), np.where(binary, cand, nup))
                resolved = solve_lp(fixed)
                if not resolved.optimal:
                    continue
                cand = resolved.values
                cand[binary] = np.round(cand[binary])
            if problem.violation(cand) > FEAS_TOL:
                continue
            val = float(c @ cand)
            if val < best_val - 1e-12:
                best_x, best_val = cand, val
            continue
        else:
            bidx = np.flatnonzero(binary)
            frac = np.where(frac > INT_TOL, frac + first[bidx], 0.0)
            k = int(bidx[int(np.argmax(frac))])  # argmax returns the first (lowest index) tie
            if not first[k] and loose.size:
                k = int(loose[0])  # fix every priority variable before touching the rest
            values = sol.values
        down_lo, down_up = nlo.copy(), nup.copy()
        down_up[k] = 0.0
        up_lo, up_up = nlo.copy(), nup.copy()
        up_lo[k] = 1.0
        if values[k] >= 0.5:
            stack.append((down_lo, down_up))
            stack.append((up_lo, up_up))
        else:
            stack.append((up_lo, up_up))
            stack.append((down_lo, down_up))
    if best_x is not None:
        status = "unknown" if saw_numerical else "optimal"
        return _ilp_result(status, best_x, best_val, nodes, problem, binary,
                           message="numerical trouble in some nodes" if saw_numerical else "")
    if saw_unbounded:
        return IlpSolution("unbounded", nodes_explored=nodes)
    if saw_numerical:
        return IlpSolution("unknown", nodes_explored=nodes, message="numerical trouble; no incumbent")
    return IlpSolution("infeasible", nodes_explored=nodes)


def _complete(completion, point, problem, best_x, best_val):
    cand = completion(point.copy())
    if cand is None:
        return best_x, best_val
    cand = np.asarray(cand, dtype=float)
    if cand.shape != point.shape or problem.violation(cand) > FEAS_TOL:
        raise ArithmeticError("completion returned an infeasible point")
    val = float(problem.objective @ cand)
    if val < best_val - 1e-12:
        return cand, val
    return best_x, best_val


def _prune(bound, best, integral_obj):
    if not math.isfinite(best):
        return False
    if integral_obj:
        return math.ceil(bound - BOUND_GAP) >= best
    return bound >= best - BOUND_GAP


def _ilp_result(status, x, val, nodes, problem, binary, message=""):
    if x is None:
        return IlpSolution(status, nodes_explored=nodes, message=message)
    x = x.copy()
    x[binary] = np.round(x[binary])
    if binary.all() and _integral(problem):
        _check_exact(problem, x.astype(np.int64))
        val = int(round(val))
    return IlpSolution(status, x, val, nodes, message)


def _integral(problem):
    data = np.concatenate([problem.A.ravel(), problem.rhs, problem.objective])
    return bool(np.all(data == np.round(data)))


def _check_exact(problem, x):
    act = problem.A.astype(np.int64) @ x
    b = problem.rhs.astype(np.int64)
    for a, s, r in zip(act, problem.senses, b):
        ok = a <= r if s == LE else (a >= r if s == GE else a == r)
        if not ok:
            raise ArithmeticError("branch-and-bound incumbent violates a constraint")
