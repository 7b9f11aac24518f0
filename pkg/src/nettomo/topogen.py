"""Internet-like random topologies, boundary shortest-path routing and pruning.

The generator is linear preferential attachment with initial attractiveness:
every new core node attaches ``m`` links to distinct existing nodes chosen
with probability proportional to ``degree + A``, where ``A = m (gamma - 3)``
gives an asymptotic degree exponent ``gamma``. Boundary nodes are degree-1
stubs hung on distinct core nodes. Randomness comes from numpy's PCG64
generator seeded with ``seed``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ValidationError
from .netgraph import Network, Path, RoutingMatrix, build_routing_matrix

MAX_RETRIES = 20


@dataclass(frozen=True)
class TopoConfig:
    node_count: int = 200
    exponent: float = 2.1
    boundary_count: int = 5
    seed: int = 0
    edges_per_node: int = 2

    def __post_init__(self):
        if self.boundary_count < 2:
            raise ValidationError("need at least two boundary nodes")
        if self.node_count <= self.boundary_count:
            raise ValidationError("node_count must exceed boundary_count (at least one core node)")
        if self.exponent <= 2:
            raise ValidationError("the attachment model needs exponent > 2")
        if self.edges_per_node < 1:
            raise ValidationError("edges_per_node must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class GeneratedInstance:
    network: Network
    routing: RoutingMatrix
    config: TopoConfig | None = None
    log: tuple = ()


def generate_topology(config: TopoConfig) -> Network:
    rng = np.random.default_rng(config.seed)
    for _ in range(MAX_RETRIES):
        net = _draw(config, rng)
        if _connected(net):
            return net
    raise ValidationError(f"no connected draw after {MAX_RETRIES} attempts")


def _draw(cfg: TopoConfig, rng) -> Network:
    core = cfg.node_count - cfg.boundary_count
    m = cfg.edges_per_node
    attract = m * (cfg.exponent - 3.0)
    seed_size = min(core, m + 1)
    edges = [(u, v) for u in range(seed_size) for v in range(u + 1, seed_size)]
    deg = np.zeros(core)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for new in range(seed_size, core):
        k = min(m, new)
        w = np.maximum(deg[:new] + attract, 1e-9)
        targets = rng.choice(new, size=k, replace=False, p=w / w.sum())
        for t in sorted(int(t) for t in targets):
            edges.append((t, new))
            deg[t] += 1
            deg[new] += 1
    hosts = rng.choice(core, size=cfg.boundary_count, replace=core < cfg.boundary_count)
    boundary = []
    for i, h in enumerate(hosts):
        b = core + i
        edges.append((int(h), b))
        boundary.append(b)
    triples = [(u, v, lid) for lid, (u, v) in enumerate(edges)]
    return Network(tuple(range(cfg.node_count)), tuple(triples), frozenset(boundary))


def _connected(net: Network) -> bool:
    if not net.nodes:
        return True
    inc = net.incident
    seen = {net.nodes[0]}
    todo = [net.nodes[0]]
    while todo:
        v = todo.pop()
        for _, w in inc.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(net.nodes)


def _bfs_dist(net: Network, target) -> dict:
    inc = net.incident
    dist = {target: 0}
    q = deque([target])
    while q:
        v = q.popleft()
        for _, w in inc.get(v, ()):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def shortest_path_routing(network: Network) -> list:
    """One hop-count shortest path per unordered boundary pair.

    Pairs are taken in sorted order; among equally short paths the one with
    the lexicographically smallest node sequence wins (then the smallest
    link id between the same two nodes).
    """
    bnd = sorted(network.boundary)
    inc = network.incident
    paths = []
    for a_idx, src in enumerate(bnd):
        for dst in bnd[a_idx + 1:]:
            dist = _bfs_dist(network, dst)
            if src not in dist:
                raise ValidationError(f"boundary nodes {src!r} and {dst!r} are disconnected")
            cur, links = src, []
            while cur != dst:
                step = min((w, lid) for lid, w in inc[cur] if dist.get(w) == dist[cur] - 1)
                links.append(step[1])
                cur = step[0]
            paths.append(Path(tuple(links), (src, dst)))
    return paths


def prune(network: Network, paths, config: TopoConfig | None = None) -> GeneratedInstance:
    """Drop links no path uses, contract interior degree-2 nodes, relabel.

    Link ids of the result are contiguous; links keep their relative order
    and merged links are numbered after the originals in merge order.
    Applying ``prune`` to its own output changes nothing.
    """
    paths = [p if isinstance(p, Path) else Path(tuple(p)) for p in paths]
    for p in paths:
        p.node_sequence(network)
    log = []
    used = {l for p in paths for l in p.links}
    ends = dict(network.link_endpoints)
    for lid in sorted(ends):
        if lid not in used:
            log.append({"event": "remove_link", "link": lid, "nodes": list(map(_jsonable, ends[lid]))})
            del ends[lid]
    path_links = [list(p.links) for p in paths]
    next_id = network.n_links
    merged_order = {}
    while True:
        inc = {}
        for lid, (u, v) in ends.items():
            inc.setdefault(u, []).append(lid)
            inc.setdefault(v, []).append(lid)
        cand = sorted((v for v, ls in inc.items()
                       if len(ls) == 2 and v not in network.boundary), key=_sort_key)
        target = None
        for v in cand:
            a, b = sorted(inc[v])
            u = _other(ends[a], v)
            w = _other(ends[b], v)
            if u != w:
                target = (v, a, b, u, w)
                break
        if target is None:
            break
        v, a, b, u, w = target
        new = next_id
        next_id += 1
        del ends[a], ends[b]
        ends[new] = (u, w)
        merged_order[new] = len(merged_order)
        for pl in path_links:
            for k in range(len(pl) - 1):
                if {pl[k], pl[k + 1]} == {a, b}:
                    pl[k:k + 2] = [new]
                    break
        log.append({"event": "contract", "node": _jsonable(v), "links": [a, b], "new_link": new,
                    "nodes": [_jsonable(u), _jsonable(w)]})
    kept_nodes = {x for uv in ends.values() for x in uv}
    for v in network.nodes:
        if v not in kept_nodes:
            log.append({"event": "remove_node", "node": _jsonable(v)})
    old_ids = sorted(ends)
    relabel = {old: new for new, old in enumerate(old_ids)}
    if any(o != n for o, n in relabel.items()):
        log.append({"event": "relabel", "mapping": [[o, n] for o, n in relabel.items() if o != n]})
    nodes = tuple(v for v in network.nodes if v in kept_nodes)
    edges = tuple((ends[o][0], ends[o][1], relabel[o]) for o in old_ids)
    boundary = frozenset(b for b in network.boundary if b in kept_nodes)
    net = Network(nodes, edges, boundary)
    new_paths = [Path(tuple(relabel[l] for l in pl), p.endpoints) for pl, p in zip(path_links, paths)]
    routing = build_routing_matrix(net, new_paths)
    return GeneratedInstance(net, routing, config, tuple(log))


def _other(uv, v):
    return uv[1] if uv[0] == v else uv[0]


def _sort_key(v):
    return (str(type(v)), v)


def _jsonable(v):
    return v.item() if isinstance(v, np.generic) else v


def make_instance(config: TopoConfig) -> GeneratedInstance:
    """generate -> shortest-path routing -> prune."""
    net = generate_topology(config)
    return prune(net, shortest_path_routing(net), config)
