"""Link-delay recovery by l1 minimisation and the associated error bounds."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_random_state, check_routing, check_vector
from .exceptions import InfeasibleError, ValidationError
from .expander import EPSILON_MAX, certify_1_identifiable
from .lp import EQ, LpProblem, solve_lp

RESIDUAL_TOL = 1e-9


@dataclass
class DelayEstimate:
    estimate: np.ndarray
    objective: float
    residual: float
    bound: float | None = None

    def to_dict(self) -> dict:
        return {"x_star": [float(v) for v in self.estimate], "objective": float(self.objective),
                "residual": float(self.residual), "bound": self.bound}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def estimate_delays(routing, y, *, nonnegative: bool = True, x_true=None) -> DelayEstimate:
    """Minimum-l1 link delays consistent with path measurements ``y``.

    With ``nonnegative`` (the default, delays are physical) the objective is
    the plain sum of delays. ``nonnegative=False`` solves the signed problem
    by splitting ``x = p - q``. When ``x_true`` is given and the matrix
    certifies, ``bound`` holds ``f(eps) * ||x_true off its largest entry||_1``.
    """
    rm = check_routing(routing)
    y = check_vector(y, rm.r, "measurement")
    R = rm.entries.astype(float)
    n = rm.n
    if nonnegative:
        prob = LpProblem(np.ones(n), R, [EQ] * rm.r, y)
    else:
        prob = LpProblem(np.ones(2 * n), np.hstack([R, -R]), [EQ] * rm.r, y)
    sol = solve_lp(prob)
    if sol.status == "infeasible":
        raise InfeasibleError("measurements are inconsistent with the routing matrix")
    if not sol.optimal:
        raise ArithmeticError(f"LP solver reported {sol.status}")
    x = sol.values[:n] - (0 if nonnegative else sol.values[n:])
    residual = float(np.max(np.abs(R @ x - y), initial=0.0))
    if residual > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(y), initial=0.0))):
        raise ArithmeticError(f"residual {residual:g} exceeds tolerance")
    bound = None
    if x_true is not None:
        x_true = check_vector(x_true, n, "true delay vector")
        cert = certify_1_identifiable(rm)
        if cert.verdict:
            bound = error_bound(x_true, cert.epsilon)
    return DelayEstimate(x, float(np.abs(x).sum()), residual, bound)


def f_epsilon(epsilon) -> float:
    """Recovery-error factor ``2 (1 + 2 eps) / (1 - 2 eps)`` for eps in [0, 1/4]."""
    eps = Fraction(epsilon)
    if eps < 0 or eps > EPSILON_MAX:
        raise ValidationError("epsilon must lie in [0, 1/4]")
    return float(2 * (1 + 2 * eps) / (1 - 2 * eps))


def largest_support(x) -> int:
    """Index of the largest-magnitude entry, lowest index on ties."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValidationError("empty vector")
    return int(np.argmax(np.abs(x)))


def tail_norm(x) -> float:
    """``||x_{S^c}||_1`` with ``S`` the single largest entry."""
    x = np.asarray(x, dtype=float)
    s = largest_support(x)
    return float(np.abs(x).sum() - abs(x[s]))


def error_bound(x, epsilon, *, factor: float | None = None) -> float:
    """``factor * ||x_{S^c}||_1``; ``factor`` defaults to ``f_epsilon(epsilon)``."""
    f = f_epsilon(epsilon) if factor is None else float(factor)
    return f * tail_norm(x)


def decomposed_error_bound(x, epsilon) -> float:
    """Weaker bound for matrices with several degree classes:
    ``((3 + 2 eps) / (1 - 2 eps) + n) * ||x_{S^c}||_1``."""
    eps = Fraction(epsilon)
    if eps < 0 or eps > EPSILON_MAX:
        raise ValidationError("epsilon must lie in [0, 1/4]")
    n = np.asarray(x).shape[0]
    return float((3 + 2 * eps) / (1 - 2 * eps) + n) * tail_norm(x)


def _rref_nullspace(a):
    rows = [[Fraction(int(v)) for v in row] for row in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def null_space_basis(routing) -> np.ndarray:
    """Orthonormal basis of ``{w : R w = 0}``, one basis vector per row.

    The basis is found by exact rational elimination and then
    orthonormalised, so its size is exactly ``n - rank(R)``.
    """
    rm = check_routing(routing)
    exact = _rref_nullspace(rm.entries)
    if not exact:
        return np.zeros((0, rm.n))
    b = np.array([[float(v) for v in vec] for vec in exact]).T
    q, _ = np.linalg.qr(b)
    return q.T


@dataclass
class NullSpaceReport:
    applicable: bool
    passed: bool
    epsilon: Fraction | None
    trials: int
    worst_ratio: float
    min_slack: float
    reason: str = ""


def null_space_slack(w, epsilon) -> np.ndarray:
    """``2 eps ||w_{S^c}||_1 - ||w_S||_1`` for every singleton ``S``."""
    w = np.abs(np.asarray(w, dtype=float))
    total = w.sum()
    return 2 * float(epsilon) * (total - w) - w


def check_null_space_property(routing, trials: int = 100, seed=0) -> NullSpaceReport:
    """Sample null-space vectors and test ``||w_S|| <= 2 eps ||w_{S^c}||``.

    Only meaningful for a certified matrix with a single degree class;
    otherwise the report is returned with ``applicable=False``.
    """
    rm = check_routing(routing)
    cert = certify_1_identifiable(rm)
    if not cert.verdict or len(cert.classes) != 1:
        why = "not certified" if not cert.verdict else "more than one degree class"
        return NullSpaceReport(False, False, None, 0, float("nan"), float("nan"), why)
    eps = cert.classes[0].epsilon
    basis = null_space_basis(rm)
    if basis.shape[0] == 0:
        return NullSpaceReport(True, True, eps, 0, 0.0, 0.0, "trivial null space")
    rng = check_random_state(seed)
    worst_ratio, min_slack = 0.0, np.inf
    for _ in range(trials):
        w = rng.standard_normal(basis.shape[0]) @ basis
        aw = np.abs(w)
        rest = aw.sum() - aw
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rest > 0, aw / rest, np.where(aw > 0, np.inf, 0.0))
        worst_ratio = max(worst_ratio, float(ratio.max()))
        min_slack = min(min_slack, float(null_space_slack(w, eps).min()))
    return NullSpaceReport(True, min_slack >= -1e-9, eps, trials, worst_ratio, min_slack)
