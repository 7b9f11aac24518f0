"""Expansion certificates for routing matrices.

A routing matrix is split into column-degree classes; each class is scored
with ``epsilon = lambda / (2 d)`` where ``lambda`` is the largest number of
paths shared by two links of the class. All comparisons use ``Fraction``.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_routing
from .exceptions import SizeGuardError, UncoveredLinkError, ValidationError
from .netgraph import BipartiteGraph, common_neighbor_matrix

EPSILON_MAX = Fraction(1, 4)
MAX_EXHAUSTIVE_LEFT = 40


@dataclass(frozen=True, eq=False)
class DegreeClass:
    degree: int
    links: tuple
    submatrix: np.ndarray


@dataclass(frozen=True)
class ExpansionReport:
    degree: int
    lam: int
    epsilon: Fraction
    passes: bool
    links: tuple = ()

    def to_dict(self) -> dict:
        return {"d": self.degree, "lambda": self.lam, "epsilon": _frac_str(self.epsilon),
                "passes": self.passes, "links": list(self.links)}


@dataclass(frozen=True)
class ExpanderCertificate:
    """Per-class reports plus the overall 1-identifiability verdict.

    ``failing_pairs`` lists every pair of links attaining lambda inside a
    failing class. ``uncovered`` is only populated by ``verify_selection``,
    where a selection may leave links without any path.
    """

    classes: tuple
    verdict: bool
    failing_pairs: tuple = ()
    uncovered: tuple = ()

    @property
    def epsilon(self) -> Fraction:
        return max((c.epsilon for c in self.classes), default=Fraction(0))

    def to_dict(self) -> dict:
        out = {"classes": [c.to_dict() for c in self.classes], "verdict": self.verdict,
               "failing_pairs": [list(p) for p in self.failing_pairs]}
        if self.uncovered:
            out["uncovered"] = list(self.uncovered)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "ExpanderCertificate":
        classes = tuple(
            ExpansionReport(int(c["d"]), int(c["lambda"]), Fraction(c["epsilon"]),
                            bool(c["passes"]), tuple(c.get("links", ())))
            for c in data["classes"])
        return cls(classes, bool(data["verdict"]),
                   tuple(tuple(p) for p in data.get("failing_pairs", ())),
                   tuple(data.get("uncovered", ())))


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


class Condition(enum.Enum):
    """Which pairwise link condition holds for a link pair."""

    GREATER = "deg_i>deg_j"
    LESS = "deg_i<deg_j"
    BALANCED = "deg_i+deg_j-4deg_ij>=0"
    VIOLATION = "violation"


def degree_decompose(routing) -> list:
    """Split the columns of ``routing`` by column sum, ascending degree."""
    rm = check_routing(routing)
    a = rm.entries
    deg = a.sum(axis=0)
    zero = np.flatnonzero(deg == 0)
    if zero.size:
        raise UncoveredLinkError(zero.tolist())
    classes = []
    for d in np.unique(deg):
        links = tuple(np.flatnonzero(deg == d).tolist())
        classes.append(DegreeClass(int(d), links, a[:, list(links)]))
    return classes


def epsilon_of(cls: DegreeClass) -> ExpansionReport:
    sub = np.asarray(cls.submatrix, dtype=np.int64)
    if sub.shape[1] == 0:
        raise ValidationError("degree class has no links")
    if sub.shape[1] == 1:
        lam = 0
    else:
        g = common_neighbor_matrix(sub)
        np.fill_diagonal(g, 0)
        lam = int(g.max())
    eps = Fraction(lam, 2 * cls.degree)
    return ExpansionReport(cls.degree, lam, eps, eps <= EPSILON_MAX, tuple(cls.links))


def _failing_pairs(cls: DegreeClass, lam: int) -> list:
    g = common_neighbor_matrix(cls.submatrix)
    pairs = []
    for a, b in itertools.combinations(range(len(cls.links)), 2):
        if g[a, b] == lam:
            pairs.append((cls.links[a], cls.links[b]))
    return pairs


def certify_1_identifiable(routing) -> ExpanderCertificate:
    """Check every degree class for ``epsilon <= 1/4``.

    A true verdict is a sufficient certificate only; a false verdict does
    not show that single-link delays are unidentifiable.
    """
    classes = degree_decompose(routing)
    reports, failing = [], []
    for cls in classes:
        rep = epsilon_of(cls)
        reports.append(rep)
        if not rep.passes:
            failing.extend(_failing_pairs(cls, rep.lam))
    verdict = all(r.passes for r in reports)
    return ExpanderCertificate(tuple(reports), verdict, tuple(sorted(failing)))


def validate_certificate(cert: ExpanderCertificate, routing) -> bool:
    """True iff ``cert`` is exactly what certification of ``routing`` yields."""
    return certify_1_identifiable(routing).to_dict() == cert.to_dict()


def pairwise_conditions(routing, i: int, j: int) -> Condition:
    a = check_routing(routing).entries
    n = a.shape[1]
    if i == j:
        raise ValidationError("links must differ")
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError("link index out of range")
    di, dj = int(a[:, i].sum()), int(a[:, j].sum())
    if di == 0 or dj == 0:
        raise UncoveredLinkError([k for k, d in ((i, di), (j, dj)) if d == 0])
    if di > dj:
        return Condition.GREATER
    if di < dj:
        return Condition.LESS
    dij = int(a[:, i] @ a[:, j])
    return Condition.BALANCED if di + dj - 4 * dij >= 0 else Condition.VIOLATION


def exhaustive_expander_check(bg: BipartiteGraph, phi: int, epsilon,
                              max_left: int = MAX_EXHAUSTIVE_LEFT) -> bool:
    """Definition-level expansion test over every left subset of size <= phi."""
    return find_expansion_violation(bg, phi, epsilon, max_left) is None


def find_expansion_violation(bg: BipartiteGraph, phi: int, epsilon,
                             max_left: int = MAX_EXHAUSTIVE_LEFT):
    """Return a left subset violating ``|N(S)| >= (1-eps) d |S|``, or None.

    Only subsets that are connected through shared neighbours are
    enumerated: if ``S`` splits into two parts with disjoint neighbourhoods,
    its slack is the sum of theirs, so a minimal violator is connected.
    """
    a = bg.biadjacency
    nl = a.shape[1]
    if nl > max_left:
        raise SizeGuardError(f"{nl} left nodes exceeds the exhaustive limit of {max_left}")
    if phi < 1:
        raise ValidationError("phi must be >= 1")
    if nl == 0:
        return None
    deg = a.sum(axis=0)
    if not (deg == deg[0]).all():
        raise ValidationError("bipartite graph is not left-regular")
    d = int(deg[0])
    need = (1 - Fraction(epsilon)) * d
    masks = [sum(1 << int(r) for r in np.flatnonzero(a[:, j])) for j in range(nl)]
    overlap = common_neighbor_matrix(a) > 0
    nbrs = [set(np.flatnonzero(overlap[j]).tolist()) - {j} for j in range(nl)]

    def violates(mask, size):
        return bin(mask).count("1") < need * size

    # ESU enumeration of connected subsets, rooted at their smallest element
    for root in range(nl):
        found = _extend([root], masks[root], {w for w in nbrs[root] if w > root},
                        set(nbrs[root]) | {root}, root, phi, masks, nbrs, violates)
        if found is not None:
            return tuple(found)
    return None


def _extend(sub, mask, ext, closed, root, phi, masks, nbrs, violates):
    if violates(mask, len(sub)):
        return sub
    if len(sub) == phi:
        return None
    ext = set(ext)
    while ext:
        w = min(ext)
        ext.discard(w)
        new_ext = ext | {u for u in nbrs[w] if u > root and u not in closed}
        found = _extend(sub + [w], mask | masks[w], new_ext, closed | nbrs[w],
                        root, phi, masks, nbrs, violates)
        if found is not None:
            return found
    return None
