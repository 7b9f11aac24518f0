"""Minimum probe-path selection.

Variables of the identifiability programs are laid out as the ``r`` path
indicators followed by three alternative selectors per unordered link pair
``(i, j)``, ``i < j``, in lexicographic pair order.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from ._validation import check_indicators, check_routing
from .exceptions import ValidationError
from .expander import ExpanderCertificate, certify_1_identifiable
from .lp import EQ, GE, LpProblem, solve_binary_ilp, solve_lp

METHODS = ("cover-ilp", "ident-ilp", "heuristic")


@dataclass
class PathSelection:
    indicators: np.ndarray
    method: str
    feasible: bool
    status: str = "optimal"
    nodes_explored: int = 0
    rounds: int = 0
    uncovered: tuple = ()
    message: str = ""

    @property
    def objective(self) -> int:
        return int(np.asarray(self.indicators).sum())

    @property
    def selected(self) -> list:
        return np.flatnonzero(self.indicators).tolist()

    def to_dict(self, certificate: ExpanderCertificate | None = None) -> dict:
        out = {"selected": self.selected, "objective": self.objective, "method": self.method}
        if certificate is not None:
            out["certificate"] = certificate.to_dict()
        return out

    def to_json(self, certificate=None, **kw) -> str:
        return json.dumps(self.to_dict(certificate), **kw)


def _empty(r, method, status, **kw):
    return PathSelection(np.zeros(r, dtype=np.int64), method, False, status, **kw)


def _uncovered(a):
    return tuple(np.flatnonzero(a.sum(axis=0) == 0).tolist())


def link_pairs(n: int) -> list:
    return list(itertools.combinations(range(n), 2))


def coupled_pairs(routing, big_m: float | None = None) -> list:
    """Link pairs whose alternatives can bind for some selection.

    A pair sharing no candidate path always meets the third alternative,
    and the relaxed degree rows stay slack while both full degrees are
    below ``big_m``; such pairs can be dropped without changing the
    feasible selections.
    """
    rm = check_routing(routing)
    a = rm.entries
    m = rm.n if big_m is None else big_m
    deg = a.sum(axis=0)
    shared = a.T @ a
    return [(i, j) for i, j in link_pairs(rm.n)
            if shared[i, j] > 0 or max(deg[i], deg[j]) > m - 1]


def cover_ilp(routing, node_limit: int = 200_000) -> PathSelection:
    """Fewest paths such that every link lies on at least one of them."""
    rm = check_routing(routing)
    a = rm.entries
    unc = _uncovered(a)
    if unc:
        return _empty(rm.r, "cover-ilp", "infeasible", uncovered=unc,
                      message=f"links {list(unc)} lie on no candidate path")
    sol = solve_binary_ilp(_cover_problem(rm), range(rm.r), node_limit=node_limit)
    if sol.values is None:
        return _empty(rm.r, "cover-ilp", sol.status, nodes_explored=sol.nodes_explored,
                      message=sol.message)
    ind = np.round(sol.values).astype(np.int64)
    return PathSelection(ind, "cover-ilp", True, sol.status, sol.nodes_explored, message=sol.message)


def identifiability_problem(routing, big_m: float | None = None, pairs=None) -> LpProblem:
    """Binary program whose feasible indicators give 1-identifiable selections.

    Per pair one of three alternatives must hold (degree of ``i`` exceeds
    that of ``j``, the reverse, or ``deg_i + deg_j - 4 deg_ij >= 0``),
    each relaxed by ``big_m * (1 - y)``; ``big_m`` defaults to the link count.
    ``pairs`` restricts the pair blocks (all unordered pairs by default).
    """
    rm = check_routing(routing)
    a = rm.entries.astype(float)
    r, n = a.shape
    m = float(n if big_m is None else big_m)
    pairs = link_pairs(n) if pairs is None else list(pairs)
    nv = r + 3 * len(pairs)
    rows, senses, rhs = [], [], []
    for l in range(n):
        row = np.zeros(nv)
        row[:r] = a[:, l]
        rows.append(row)
        senses.append(GE)
        rhs.append(1.0)
    for p, (i, j) in enumerate(pairs):
        ci, cj = a[:, i], a[:, j]
        y = r + 3 * p
        for k, (coef, b) in enumerate(((ci - cj, 1.0), (cj - ci, 1.0),
                                       (ci + cj - 4 * ci * cj, 0.0))):
            row = np.zeros(nv)
            row[:r] = coef
            row[y + k] = -m
            rows.append(row)
            senses.append(GE)
            rhs.append(b - m)
        row = np.zeros(nv)
        row[y:y + 3] = 1.0
        rows.append(row)
        senses.append(EQ)
        rhs.append(1.0)
    obj = np.zeros(nv)
    obj[:r] = 1.0
    return LpProblem(obj, np.vstack(rows), senses, np.asarray(rhs), np.zeros(nv), np.ones(nv))


def _alternative_table(rm, ind, big_m, pairs=None):
    a = rm.entries[ind.astype(bool)]
    n = rm.n
    m = n if big_m is None else big_m
    deg = a.sum(axis=0)
    shared = a.T @ a
    if pairs is None:
        i, j = np.triu_indices(n, 1)
    else:
        i, j = (np.asarray([p[q] for p in pairs], dtype=int) for q in (0, 1))
    lhs = np.stack([deg[i] - deg[j], deg[j] - deg[i], deg[i] + deg[j] - 4 * shared[i, j]])
    need = np.array([1, 1, 0])[:, None]
    on = lhs >= need
    off = lhs + m >= need
    usable = np.zeros((3, i.shape[0]), dtype=bool)
    for k in range(3):
        others = [q for q in range(3) if q != k]
        usable[k] = on[k] & off[others].all(axis=0)
    return deg, usable


def _full_assignment(rm, ind, big_m, pairs):
    """Path indicators extended with one usable selector per link pair."""
    deg, usable = _alternative_table(rm, np.asarray(ind), big_m, pairs)
    x = np.zeros(rm.r + 3 * usable.shape[1])
    x[: rm.r] = ind
    if usable.shape[1]:
        pick = np.argmax(usable, axis=0)
        x[rm.r + 3 * np.arange(usable.shape[1]) + pick] = 1.0
    return x


def alternatives_satisfied(routing, indicators, big_m: float | None = None) -> bool:
    """Integral feasibility of ``indicators`` in the identifiability program.

    Checks coverage and that, for every link pair, some single selector can
    be switched on with all three relaxed rows satisfied.
    """
    rm = check_routing(routing)
    ind = check_indicators(indicators, rm.r)
    deg, usable = _alternative_table(rm, ind, big_m)
    if (deg == 0).any():
        return False
    return bool(usable.any(axis=0).all())


def _cover_problem(rm):
    return LpProblem(np.ones(rm.r), rm.entries.T.astype(float), [GE] * rm.n, np.ones(rm.n),
                     np.zeros(rm.r), np.ones(rm.r))


def identifiability_ilp(routing, big_m: float | None = None, node_limit: int = 200_000,
                        formulation: str = "lazy") -> PathSelection:
    """Exact minimum selection meeting coverage plus the pairwise alternatives.

    ``formulation="bigm"`` solves the explicit program of
    ``identifiability_problem``. The default ``"lazy"`` branches on the
    path indicators over the covering relaxation and checks the pair
    alternatives on every integral candidate; both have the same feasible
    selections and optimum, the lazy one with far smaller relaxations.

    An infeasible program does not show that no identifiable selection
    exists; it only means none satisfies these sufficient conditions.
    """
    if formulation not in ("lazy", "bigm"):
        raise ValidationError(f"unknown formulation {formulation!r}")
    rm = check_routing(routing)
    unc = _uncovered(rm.entries)
    if unc:
        return _empty(rm.r, "ident-ilp", "infeasible", uncovered=unc,
                      message=f"links {list(unc)} lie on no candidate path")
    start = identifiability_heuristic(rm, big_m=big_m)
    if formulation == "lazy":
        prob = _cover_problem(rm)
        seed = start.indicators.astype(float) if start.feasible else None

        def complete(point):
            ind = np.round(point).astype(np.int64)
            return point if alternatives_satisfied(rm, ind, big_m) else None
    else:
        pairs = coupled_pairs(rm, big_m)
        prob = identifiability_problem(rm, big_m, pairs)
        seed = _full_assignment(rm, start.indicators, big_m, pairs) if start.feasible else None

        # the objective only counts paths, so fixed paths plus any usable
        # selector per pair is the best point of a node
        def complete(point):
            ind = np.round(point[: rm.r]).astype(np.int64)
            if not alternatives_satisfied(rm, ind, big_m):
                return None
            return _full_assignment(rm, ind, big_m, pairs)

    sol = solve_binary_ilp(prob, range(prob.n_vars), node_limit=node_limit,
                           branch_first=range(rm.r), incumbent=seed, completion=complete)
    if sol.values is None:
        return _empty(rm.r, "ident-ilp", sol.status, nodes_explored=sol.nodes_explored,
                      message=sol.message or "no selection satisfies the alternatives")
    ind = np.round(sol.values[: rm.r]).astype(np.int64)
    if not certify_1_identifiable(rm.select_rows(np.flatnonzero(ind))).verdict:
        raise ArithmeticError("ILP selection failed re-certification")
    return PathSelection(ind, "ident-ilp", True, sol.status, sol.nodes_explored, message=sol.message)


def identifiability_heuristic(routing, max_rounds: int | None = None,
                              big_m: float | None = None) -> PathSelection:
    """LP-relaxation rounding.

    Each round solves the relaxed program with the already chosen paths
    pinned to 1 and pins the largest remaining indicator (lowest index on
    ties). Stops as soon as the pinned set is integrally feasible; any
    infeasible round is reported as a heuristic failure.
    """
    rm = check_routing(routing)
    r = rm.r
    unc = _uncovered(rm.entries)
    if unc:
        return _empty(r, "heuristic", "infeasible", uncovered=unc,
                      message=f"links {list(unc)} lie on no candidate path")
    rounds_cap = r if max_rounds is None else min(int(max_rounds), r)
    prob = identifiability_problem(rm, big_m, coupled_pairs(rm, big_m))
    lo, up = prob.lower.copy(), prob.upper.copy()
    chosen = np.zeros(r, dtype=np.int64)
    values, pick = None, None
    for rnd in range(1, rounds_cap + 1):
        # pinning a variable the last optimum already had at 1 leaves that
        # optimum optimal, so only re-solve when it is no longer feasible
        if pick is None or values[pick] < 1.0 - 1e-9:
            sol = solve_lp(prob.with_bounds(lo, up))
            if not sol.optimal:
                return _empty(r, "heuristic", "failed", rounds=rnd,
                              message=f"relaxation {sol.status} in round {rnd}")
            values = sol.values
        vals = np.where(chosen == 1, -np.inf, values[:r])
        pick = int(np.argmax(vals))
        chosen[pick] = 1
        lo[pick] = 1.0
        if alternatives_satisfied(rm, chosen, big_m):
            sel = PathSelection(chosen.copy(), "heuristic", True, "feasible", rounds=rnd)
            if not verify_selection(rm, sel).verdict:
                raise ArithmeticError("heuristic selection failed re-certification")
            return sel
    return _empty(r, "heuristic", "failed", rounds=rounds_cap,
                  message="pinned set never became integrally feasible")


def verify_selection(routing, selection) -> ExpanderCertificate:
    """Certificate of the rows picked by ``selection``.

    Links that no selected path covers make the verdict false and are
    reported in ``uncovered``.
    """
    rm = check_routing(routing)
    ind = selection.indicators if isinstance(selection, PathSelection) else selection
    ind = check_indicators(ind, rm.r)
    rows = np.flatnonzero(ind)
    if rows.size == 0:
        raise ValidationError("selection is empty")
    sub = rm.select_rows(rows)
    unc = _uncovered(sub.entries)
    if unc:
        covered = [l for l in range(rm.n) if l not in unc]
        partial = certify_1_identifiable(sub.entries[:, covered])
        remap = lambda p: tuple(covered[q] for q in p)
        classes = tuple(type(c)(c.degree, c.lam, c.epsilon, c.passes, remap(c.links))
                        for c in partial.classes)
        return ExpanderCertificate(classes, False,
                                   tuple(remap(p) for p in partial.failing_pairs), unc)
    cert = certify_1_identifiable(sub)
    consistent = alternatives_satisfied(rm, ind)
    if consistent and not cert.verdict:
        raise ArithmeticError("pairwise alternatives hold but certification fails")
    return cert
