"""Networks, probe paths, routing matrices and their bipartite views.

Orientation convention used everywhere in the package: routing matrices have
one row per probe path and one column per link, and the bi-adjacency matrix
of the derived bipartite graph uses the same layout (rows = paths = right
side, columns = links = left side).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .exceptions import ValidationError

Node = Hashable

MAX_WALK_NODES = 10_000


@dataclass(frozen=True)
class Network:
    """Undirected multigraph whose edges carry contiguous link ids.

    ``edges`` holds ``(u, v, link_id)`` triples; parallel edges are allowed as
    long as their link ids differ. ``boundary`` is the set of nodes where
    probes can be injected and collected.
    """

    nodes: tuple
    edges: tuple
    boundary: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValidationError("duplicate node ids")
        ids = sorted(e[2] for e in self.edges)
        if ids != list(range(len(self.edges))):
            raise ValidationError("link ids must be unique and contiguous 0..n-1")
        for u, v, lid in self.edges:
            if u not in node_set or v not in node_set:
                raise ValidationError(f"link {lid} references an unknown node")
            if u == v:
                raise ValidationError(f"link {lid} is a self-loop on {u!r}")
        missing = self.boundary - node_set
        if missing:
            raise ValidationError(f"boundary nodes not in graph: {sorted(map(str, missing))}")
        deg = self.degrees
        for b in self.boundary:
            if deg[b] < 1:
                raise ValidationError(f"boundary node {b!r} has no incident link")

    @property
    def n_links(self) -> int:
        return len(self.edges)

    @cached_property
    def link_endpoints(self) -> dict:
        return {lid: (u, v) for u, v, lid in self.edges}

    @cached_property
    def incident(self) -> dict:
        """node -> sorted list of (link_id, neighbour)."""
        inc = defaultdict(list)
        for u, v, lid in self.edges:
            inc[u].append((lid, v))
            inc[v].append((lid, u))
        return {k: sorted(vals) for k, vals in inc.items()}

    @cached_property
    def degrees(self) -> dict:
        return {v: len(self.incident.get(v, ())) for v in self.nodes}

    def interior(self) -> list:
        return [v for v in self.nodes if v not in self.boundary]


@dataclass(frozen=True)
class Path:
    """Ordered link sequence of one probe; endpoints are optional when the
    path was reconstructed from a bare 0/1 matrix."""

    links: tuple
    endpoints: tuple | None = None

    def __post_init__(self):
        links = tuple(int(l) for l in self.links)
        object.__setattr__(self, "links", links)
        if self.endpoints is not None:
            object.__setattr__(self, "endpoints", tuple(self.endpoints))
        if not links:
            raise ValidationError("a path needs at least one link")
        if len(set(links)) != len(links):
            raise ValidationError(f"path repeats a link: {links}")

    def __len__(self):
        return len(self.links)

    def node_sequence(self, network: Network) -> list:
        """Walk the links through ``network`` and return the visited nodes.

        Raises ValidationError if consecutive links do not share a node or if
        the walk disagrees with the stored endpoints.
        """
        ends = network.link_endpoints
        for lid in self.links:
            if lid not in ends:
                raise ValidationError(f"unknown link id {lid}")
        starts = [self.endpoints[0]] if self.endpoints else list(ends[self.links[0]])
        for start in starts:
            seq = _walk(start, self.links, ends)
            if seq is not None:
                if self.endpoints and seq[-1] != self.endpoints[1]:
                    continue
                return seq
        raise ValidationError(f"links {self.links} do not form a connected walk"
                              + (f" from {self.endpoints[0]!r} to {self.endpoints[1]!r}"
                                 if self.endpoints else ""))


def _walk(start, links, ends):
    seq = [start]
    cur = start
    for lid in links:
        u, v = ends[lid]
        if cur == u:
            cur = v
        elif cur == v:
            cur = u
        else:
            return None
        seq.append(cur)
    return seq


@dataclass(frozen=True, eq=False)
class RoutingMatrix:
    """Binary r x n matrix together with the probe paths it encodes."""

    entries: np.ndarray
    paths: tuple = field(default=())

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise ValidationError("routing matrix must be two-dimensional")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValidationError("routing matrix entries must be 0 or 1")
        a = a.astype(np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        if a.shape[0] == 0:
            raise ValidationError("routing matrix needs at least one path")
        empty = np.flatnonzero(a.sum(axis=1) == 0)
        if empty.size:
            raise ValidationError(f"paths {empty.tolist()} traverse no link")
        if not self.paths:
            paths = tuple(Path(tuple(np.flatnonzero(row))) for row in a)
            object.__setattr__(self, "paths", paths)
        else:
            object.__setattr__(self, "paths", tuple(self.paths))
            if len(self.paths) != a.shape[0]:
                raise ValidationError("one path per row is required")
            for i, p in enumerate(self.paths):
                if sorted(p.links) != np.flatnonzero(a[i]).tolist():
                    raise ValidationError(f"row {i} disagrees with its path")

    @classmethod
    def from_paths(cls, paths: Sequence, n_links: int) -> "RoutingMatrix":
        paths = [p if isinstance(p, Path) else Path(tuple(p)) for p in paths]
        if not paths:
            raise ValidationError("at least one path is required")
        m = np.zeros((len(paths), n_links), dtype=np.int64)
        for i, p in enumerate(paths):
            for lid in p.links:
                if not 0 <= lid < n_links:
                    raise ValidationError(f"unknown link id {lid}")
                m[i, lid] = 1
        return cls(m, tuple(paths))

    @property
    def r(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, RoutingMatrix):
            return NotImplemented
        return self.shape == other.shape and bool((self.entries == other.entries).all())

    def __repr__(self):
        return f"RoutingMatrix(r={self.r}, n={self.n})"

    def link_degrees(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def select_rows(self, rows: Iterable[int]) -> "RoutingMatrix":
        rows = list(rows)
        if not rows:
            raise ValidationError("selection is empty")
        return RoutingMatrix(self.entries[rows], tuple(self.paths[i] for i in rows))


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Links on the left, paths on the right; ``biadjacency`` is paths x links."""

    left: tuple
    right: tuple
    biadjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.biadjacency, dtype=np.int64)
        if a.shape != (len(self.right), len(self.left)):
            raise ValidationError("biadjacency must have shape (|right|, |left|)")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValidationError("biadjacency entries must be 0 or 1")
        a.setflags(write=False)
        object.__setattr__(self, "biadjacency", a)
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    @property
    def edges(self) -> list:
        rows, cols = np.nonzero(self.biadjacency)
        return sorted((self.left[c], self.right[r]) for r, c in zip(rows, cols))

    def left_degrees(self) -> np.ndarray:
        return self.biadjacency.sum(axis=0)

    def neighbours(self, left_index: int) -> set:
        return set(np.flatnonzero(self.biadjacency[:, left_index]).tolist())


def build_routing_matrix(network: Network, paths: Sequence) -> RoutingMatrix:
    """Encode ``paths`` over ``network`` as a routing matrix.

    Every path is walked through the graph so that non-adjacent consecutive
    links or unknown link ids are rejected.
    """
    if not paths:
        raise ValidationError("at least one path is required")
    checked = []
    for p in paths:
        p = p if isinstance(p, Path) else Path(tuple(p))
        p.node_sequence(network)
        checked.append(p)
    return RoutingMatrix.from_paths(checked, network.n_links)


def to_bipartite(routing: RoutingMatrix) -> BipartiteGraph:
    return BipartiteGraph(
        left=tuple(range(routing.n)),
        right=tuple(range(routing.r)),
        biadjacency=routing.entries.copy(),
    )


def adjacency_from_biadjacency(bg: BipartiteGraph) -> np.ndarray:
    """Adjacency of the full bipartite graph, links first then paths.

    Returns ``[[0, A^t], [A, 0]]`` for the paths x links biadjacency ``A``,
    which is the ``[[0, B], [B^t, 0]]`` layout with ``B`` the links x paths
    bi-adjacency.
    """
    a = bg.biadjacency
    nl, nr = len(bg.left), len(bg.right)
    t = np.zeros((nl + nr, nl + nr), dtype=np.int64)
    t[:nl, nl:] = a.T
    t[nl:, :nl] = a
    return t


def count_walks(adjacency, k: int) -> np.ndarray:
    """Number of walks of length ``k`` between every pair of nodes.

    ``k == 0`` returns the identity (every node has one empty walk to
    itself). Counts switch to Python integers when they could exceed int64.
    """
    t = np.asarray(adjacency)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValidationError("adjacency must be square")
    if t.shape[0] > MAX_WALK_NODES:
        raise ValidationError(f"adjacency larger than {MAX_WALK_NODES} nodes")
    if t.size and not np.isin(t, (0, 1)).all():
        raise ValidationError("adjacency must be 0/1")
    if not (t == t.T).all():
        raise ValidationError("adjacency must be symmetric")
    if k < 0 or int(k) != k:
        raise ValidationError("k must be a non-negative integer")
    n = t.shape[0]
    if k == 0:
        return np.eye(n, dtype=np.int64)
    max_deg = int(t.sum(axis=1).max()) if n else 0
    if max_deg > 1 and k * np.log2(max_deg) >= 62:
        t = t.astype(object)
        out = t.copy()
        for _ in range(k - 1):
            out = out.dot(t)
        return out
    return np.linalg.matrix_power(t.astype(np.int64), int(k))


def common_neighbor_matrix(routing) -> np.ndarray:
    """``R^t R``: shared-path counts off the diagonal, link degrees on it."""
    r = np.asarray(routing, dtype=np.int64)
    return r.T @ r
