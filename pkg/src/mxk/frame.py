"""Biased graphs, gain graphs and their frame matroids."""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import GroupTable, cyclic_group
from .config import check_cap
from .matroid import Backend, GraphicBackend, MatroidHandle, bits, popcount


@dataclass(frozen=True)
class Multigraph:
    """Vertices plus ``(edge_id, u, v)`` triples sorted by id; ``u == v`` is a loop."""

    vertices: frozenset[int]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        edges = tuple(sorted((int(i), int(u), int(v)) for i, u, v in self.edges))
        object.__setattr__(self, "edges", edges)
        ids = [e[0] for e in edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")
        for i, u, v in edges:
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge {i} references a missing vertex")

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e[0] for e in self.edges)

    def ends(self) -> dict[int, tuple[int, int]]:
        return {i: (u, v) for i, u, v in self.edges}

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = defaultdict(set)
        for _, u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        start = min(self.vertices)
        seen = {start}
        todo = [start]
        while todo:
            x = todo.pop()
            for y in adj[x] - seen:
                seen.add(y)
                todo.append(y)
        return seen == set(self.vertices)

    def handle(self) -> MatroidHandle:
        """Cycle matroid; element ``k`` is the ``k``-th edge in id order."""
        index = {v: k for k, v in enumerate(sorted(self.vertices))}
        backend = GraphicBackend(len(index), [(index[u], index[v]) for _, u, v in self.edges])
        backend.labels = self.edge_ids
        return MatroidHandle(backend)


@dataclass(frozen=True)
class GainGraph:
    """Each edge ``(i, u, v)`` of ``graph`` is directed ``u -> v`` with gain ``gains[i]``."""

    graph: Multigraph
    group: GroupTable
    gains: tuple[tuple[int, int], ...]  # (edge id, group element), sorted by id

    def __post_init__(self) -> None:
        gains = tuple(sorted((int(i), int(g)) for i, g in self.gains))
        object.__setattr__(self, "gains", gains)
        if [i for i, _ in gains] != list(self.graph.edge_ids):
            raise ValueError("every edge needs exactly one gain")
        for i, g in gains:
            if not 0 <= g < self.group.order:
                raise ValueError(f"gain {g} of edge {i} is not a group element")

    def gain(self) -> dict[int, int]:
        return dict(self.gains)


@dataclass(frozen=True)
class BiasedGraph:
    """A multigraph with balance given by gains or by an explicit set of balanced cycles."""

    graph: Multigraph
    gain: GainGraph | None = None
    explicit: frozenset[frozenset[int]] | None = None

    def __post_init__(self) -> None:
        if (self.gain is None) == (self.explicit is None):
            raise ValueError("give exactly one of gains or an explicit balanced-cycle set")
        if self.gain is not None and self.gain.graph != self.graph:
            raise ValueError("gain graph is over a different multigraph")
        if self.explicit is not None:
            object.__setattr__(self, "explicit", frozenset(frozenset(c) for c in self.explicit))

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return self.graph.edge_ids

    def handle(self) -> MatroidHandle:
        return frame_matroid(self)


def gain_biased_graph(vertices: Iterable[int], edges: Sequence[tuple[int, int, int, int]], group: GroupTable) -> BiasedGraph:
    """Build from ``(edge_id, tail, head, gain)`` tuples."""
    G = Multigraph(frozenset(vertices), tuple((i, u, v) for i, u, v, _ in edges))
    return BiasedGraph(G, gain=GainGraph(G, group, tuple((i, g) for i, _, _, g in edges)))


def explicit_biased_graph(vertices: Iterable[int], edges: Sequence[tuple[int, int, int]], balanced: Iterable[Iterable[int]]) -> BiasedGraph:
    G = Multigraph(frozenset(vertices), tuple(edges))
    return BiasedGraph(G, explicit=frozenset(frozenset(c) for c in balanced))


# ---------------------------------------------------------------- cycles


def _cycle_walk(G: Multigraph, C: Iterable[int]) -> list[tuple[int, int, int]] | None:
    """Order the edges of ``C`` as a closed walk ``[(edge, from, to), ...]``, or None if not a cycle."""
    ends = G.ends()
    C = list(C)
    if not C or any(c not in ends for c in C):
        return None
    if len(C) == 1:
        u, v = ends[C[0]]
        return [(C[0], u, v)] if u == v else None
    deg = defaultdict(list)
    for c in C:
        u, v = ends[c]
        if u == v:
            return None
        deg[u].append(c)
        deg[v].append(c)
    if any(len(es) != 2 for es in deg.values()):
        return None
    start = min(deg)
    walk = []
    here, prev = start, None
    while True:
        nxt = next(c for c in deg[here] if c != prev) if prev is not None else deg[here][0]
        u, v = ends[nxt]
        there = v if u == here else u
        walk.append((nxt, here, there))
        here, prev = there, nxt
        if here == start:
            break
        if len(walk) > len(C):
            return None
    return walk if len(walk) == len(C) else None


def is_cycle(G: Multigraph, C: Iterable[int]) -> bool:
    return _cycle_walk(G, C) is not None


def cycle_is_balanced(Omega: BiasedGraph, C: Iterable[int]) -> bool:
    C = frozenset(C)
    walk = _cycle_walk(Omega.graph, C)
    if walk is None:
        raise ValueError(f"{sorted(C)} is not a cycle")
    if Omega.explicit is not None:
        return C in Omega.explicit
    gg = Omega.gain
    grp = gg.group
    gain = gg.gain()
    ends = Omega.graph.ends()
    prod = grp.id
    for e, a, _ in walk:
        g = gain[e]
        tail, head = ends[e]
        if tail == head or a == tail:
            prod = grp.mul(prod, g)
        else:
            prod = grp.mul(prod, grp.inverse(g))
    return prod == grp.id


def all_cycles(G: Multigraph, edge_subset: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Every cycle (as an edge-id set) of the subgraph on ``edge_subset``, by DFS."""
    allowed = set(G.edge_ids if edge_subset is None else edge_subset)
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    found: set[frozenset[int]] = set()
    for i, u, v in G.edges:
        if i not in allowed:
            continue
        if u == v:
            found.add(frozenset([i]))
        else:
            adj[u].append((v, i))
            adj[v].append((u, i))
    for s in sorted(adj):
        # cycles whose least vertex is s
        stack = [(s, (), frozenset([s]))]
        while stack:
            here, path, seen = stack.pop()
            for there, e in adj[here]:
                if path and e == path[-1]:
                    continue
                if there == s and path:
                    if e not in path:
                        found.add(frozenset(path + (e,)))
                elif there > s and there not in seen:
                    stack.append((there, path + (e,), seen | {there}))
    return sorted(found, key=lambda c: (len(c), sorted(c)))


# ---------------------------------------------------------------- frame rank


def _component_balanced(Omega: BiasedGraph, comp_edges: list[tuple[int, int, int]], root: int) -> bool:
    if Omega.gain is not None:
        grp = Omega.gain.group
        gain = Omega.gain.gain()
        adj = defaultdict(list)
        for i, u, v in comp_edges:
            if u == v:
                if gain[i] != grp.id:
                    return False
                continue
            adj[u].append((v, gain[i]))
            adj[v].append((u, grp.inverse(gain[i])))
        eta = {root: grp.id}
        todo = deque([root])
        while todo:
            a = todo.popleft()
            for b, g in adj[a]:
                want = grp.mul(eta[a], g)
                if b not in eta:
                    eta[b] = want
                    todo.append(b)
                elif eta[b] != want:
                    return False
        return True
    # explicit: every fundamental cycle of a spanning tree must be balanced
    balanced = Omega.explicit
    adj = defaultdict(list)
    for i, u, v in comp_edges:
        if u == v:
            if frozenset([i]) not in balanced:
                return False
            continue
        adj[u].append((v, i))
        adj[v].append((u, i))
    parent: dict[int, tuple[int, int] | None] = {root: None}
    depth = {root: 0}
    tree: set[int] = set()
    todo = deque([root])
    while todo:
        a = todo.popleft()
        for b, i in adj[a]:
            if b not in parent:
                parent[b] = (a, i)
                depth[b] = depth[a] + 1
                tree.add(i)
                todo.append(b)
    for i, u, v in comp_edges:
        if u == v or i in tree:
            continue
        cyc = {i}
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            pa, e = parent[a]
            cyc.add(e)
            a = pa
        if frozenset(cyc) not in balanced:
            return False
    return True


def frame_rank(Omega: BiasedGraph, S: Iterable[int]) -> int:
    """Sum over components of (|V| - 1) if balanced, else |V|."""
    S = set(S)
    ends = Omega.graph.ends()
    chosen = [(i, *ends[i]) for i in sorted(S)]
    if len(chosen) != len(S):
        raise ValueError("unknown edge id")
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v in chosen:
        parent[find(u)] = find(v)
    comps: dict[int, list] = defaultdict(list)
    for e in chosen:
        comps[find(e[1])].append(e)
    total = 0
    for root, comp in comps.items():
        nv = len({x for _, u, v in comp for x in (u, v)})
        total += nv - 1 if _component_balanced(Omega, comp, comp[0][1]) else nv
    return total


class FrameBackend(Backend):
    """FM(Omega); element ``k`` is the ``k``-th edge in id order."""

    def __init__(self, Omega: BiasedGraph) -> None:
        super().__init__()
        self.biased = Omega
        self.labels = Omega.edge_ids
        self.size = len(self.labels)

    def _rank(self, mask: int) -> int:
        return frame_rank(self.biased, (self.labels[i] for i in bits(mask)))


def frame_matroid(Omega: BiasedGraph) -> MatroidHandle:
    return MatroidHandle(FrameBackend(Omega))


# ---------------------------------------------------------------- circuit oracle


def _is_bicycle_union(G: Multigraph, edges: frozenset[int]) -> bool:
    ends = G.ends()
    verts = {x for e in edges for x in ends[e]}
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        u, v = ends[e]
        parent[find(u)] = find(v)
    comps = len({find(v) for v in verts})
    return comps == 1 and len(edges) - len(verts) + 1 == 2


def _connecting_paths(G: Multigraph, A: set[int], B: set[int], avoid_vertices: set[int]) -> list[frozenset[int]]:
    """Simple paths from a vertex of A to a vertex of B with interior outside A, B and avoid_vertices."""
    adj = defaultdict(list)
    for i, u, v in G.edges:
        if u != v:
            adj[u].append((v, i))
            adj[v].append((u, i))
    out = []
    for a in A:
        stack = [(a, (), {a})]
        while stack:
            here, path, seen = stack.pop()
            for there, e in adj[here]:
                if there in seen:
                    continue
                if there in B:
                    out.append(frozenset(path + (e,)))
                elif there not in A and there not in avoid_vertices:
                    stack.append((there, path + (e,), seen | {there}))
    return out


def frame_circuits(Omega: BiasedGraph, cap: int | None = None) -> list[frozenset[int]]:
    """Balanced cycles, plus thetas and handcuffs that contain no balanced cycle."""
    G = Omega.graph
    check_cap("edges", len(G.edges), "edge count", cap)
    ends = G.ends()
    cycles = all_cycles(G)
    balanced = {c for c in cycles if cycle_is_balanced(Omega, c)}
    vsets = {c: {x for e in c for x in ends[e]} for c in cycles}
    bicycles: set[frozenset[int]] = set()
    for c1, c2 in itertools.combinations(cycles, 2):
        if c1 & c2:
            u = c1 | c2
            if _is_bicycle_union(G, u):
                bicycles.add(u)
            continue
        shared = vsets[c1] & vsets[c2]
        if len(shared) == 1:
            bicycles.add(c1 | c2)
        elif not shared:
            for p in _connecting_paths(G, vsets[c1], vsets[c2], set()):
                bicycles.add(c1 | c2 | p)
    circuits = set(balanced)
    for b in bicycles:
        if not any(c <= b for c in balanced):
            circuits.add(b)
    return sorted(circuits, key=lambda c: (len(c), sorted(c)))


def rank_from_circuits(edge_ids: Sequence[int], circuits: Iterable[frozenset[int]]) -> list[int]:
    """Rank of every subset (indexed by bitmask over ``edge_ids``) from the circuit list."""
    index = {e: k for k, e in enumerate(edge_ids)}
    m = len(edge_ids)
    is_circ = bytearray(1 << m)
    for c in circuits:
        is_circ[sum(1 << index[e] for e in c)] = 1
    dep = bytearray(1 << m)
    rank = [0] * (1 << m)
    for mask in range(1, 1 << m):
        d = is_circ[mask]
        best = 0
        for i in bits(mask):
            sub = mask ^ (1 << i)
            if dep[sub]:
                d = 1
            if rank[sub] > best:
                best = rank[sub]
        dep[mask] = d
        rank[mask] = best if d else popcount(mask)
    return rank


def theta_violations(Omega: BiasedGraph, cap: int | None = None) -> list[frozenset[int]]:
    """Thetas containing exactly two balanced cycles (empty for a valid biased graph)."""
    G = Omega.graph
    check_cap("theta", len(G.edges), "edge count", cap)
    cycles = all_cycles(G)
    bal = {c for c in cycles if cycle_is_balanced(Omega, c)}
    bad = set()
    for c1, c2 in itertools.combinations(cycles, 2):
        if c1 & c2:
            u = c1 | c2
            if _is_bicycle_union(G, u):
                inside = [c for c in cycles if c <= u]
                if sum(c in bal for c in inside) == 2:
                    bad.add(u)
    return sorted(bad, key=sorted)


# ---------------------------------------------------------------- minors


def _rebuild(Omega: BiasedGraph, vertices, edges, gains=None, explicit=None) -> BiasedGraph:
    G = Multigraph(frozenset(vertices), tuple(edges))
    if Omega.gain is not None:
        return BiasedGraph(G, gain=GainGraph(G, Omega.gain.group, tuple(gains.items())))
    return BiasedGraph(G, explicit=frozenset(explicit))


def biased_minor(Omega: BiasedGraph, kind: str, target: int) -> BiasedGraph:
    """``kind`` is one of ``delete-edge``, ``contract-edge`` or ``delete-vertex``."""
    G = Omega.graph
    ends = G.ends()
    gains = Omega.gain.gain() if Omega.gain is not None else None
    expl = Omega.explicit
    if kind == "delete-vertex":
        if target not in G.vertices:
            raise ValueError(f"unknown vertex {target}")
        out = Omega
        for i, u, v in G.edges:
            if target in (u, v):
                out = biased_minor(out, "delete-edge", i)
        return _rebuild(
            out, G.vertices - {target}, out.graph.edges,
            out.gain.gain() if out.gain else None, out.explicit,
        )
    if target not in ends:
        raise ValueError(f"unknown edge {target}")
    u, v = ends[target]
    rest = [e for e in G.edges if e[0] != target]
    if kind == "delete-edge":
        g2 = {i: g for i, g in gains.items() if i != target} if gains is not None else None
        e2 = {c for c in expl if target not in c} if expl is not None else None
        return _rebuild(Omega, G.vertices, rest, g2, e2)
    if kind != "contract-edge":
        raise ValueError(f"unknown minor kind {kind!r}")

    if u == v:
        if cycle_is_balanced(Omega, [target]):
            return biased_minor(Omega, "delete-edge", target)
        return _contract_unbalanced_loop(Omega, target, u, rest)

    # nonloop: merge v into u
    merged = [(i, u if a == v else a, u if b == v else b) for i, a, b in rest]
    if gains is not None:
        grp = Omega.gain.group
        # switch so that the contracted edge has identity gain: eta(v) = gain(e)
        eta_v = gains[target]
        g2 = {}
        for i, a, b in rest:
            g = gains[i]
            if a == v:
                g = grp.mul(eta_v, g)
            if b == v:
                g = grp.mul(g, grp.inverse(eta_v))
            g2[i] = g
        return _rebuild(Omega, G.vertices - {v}, merged, g2)
    newG = Multigraph(frozenset(G.vertices - {v}), tuple(merged))
    e2 = set()
    for c in expl:
        cand = c - {target}
        if cand and is_cycle(newG, cand):
            e2.add(cand)
    return _rebuild(Omega, newG.vertices, merged, explicit=e2)


def _contract_unbalanced_loop(Omega: BiasedGraph, target: int, v: int, rest) -> BiasedGraph:
    """Other unbalanced loops at v become balanced; each edge v-w becomes an unbalanced loop at w."""
    ends = Omega.graph.ends()
    incident_nonloops = {i for i, a, b in rest if a != b and v in (a, b)}
    unbalanced_loops = {
        i for i, a, b in rest if a == b == v and not cycle_is_balanced(Omega, [i])
    }
    edges = []
    for i, a, b in rest:
        if i in incident_nonloops:
            w = b if a == v else a
            edges.append((i, w, w))
        else:
            edges.append((i, a, b))
    if Omega.gain is not None:
        grp = Omega.gain.group
        gains = Omega.gain.gain()
        off = grp.non_identity
        g2 = {}
        for i, _, _ in rest:
            if i in incident_nonloops:
                g2[i] = off
            elif i in unbalanced_loops:
                g2[i] = grp.id
            else:
                g2[i] = gains[i]
        return _rebuild(Omega, Omega.graph.vertices, edges, g2)
    e2 = {c for c in Omega.explicit if target not in c and not (c & incident_nonloops)}
    e2 |= {frozenset([i]) for i in unbalanced_loops}
    del ends
    return _rebuild(Omega, Omega.graph.vertices, edges, explicit=e2)


# ---------------------------------------------------------------- constructions


def blow_up(G, group: GroupTable) -> BiasedGraph:
    """G^Gamma: an unbalanced loop per vertex and |Gamma| parallel copies of each edge.

    ``G`` is anything with ``n`` (vertex count) and ``edges`` (pairs), or a tuple
    ``(n, edges)``.  Loops get ids ``0..n-1``; edge copies follow in order.
    Parallel copies are directed from the lower vertex id.
    """
    n, pairs = (G if isinstance(G, tuple) else (G.n, G.edges))
    pairs = [tuple(sorted(p)) for p in pairs]
    if len(set(pairs)) != len(pairs) or any(a == b for a, b in pairs):
        raise ValueError("blow_up needs a simple graph")
    edges = [(v, v, v) for v in range(n)]
    nid = n
    if group.order == 1:
        for a, b in pairs:
            edges.append((nid, a, b))
            nid += 1
        M = Multigraph(frozenset(range(n)), tuple(edges))
        # trivial group: the unbalanced cycles are exactly the loops
        bal = [c for c in all_cycles(M) if ends_loop_free(M, c)]
        return BiasedGraph(M, explicit=frozenset(bal))
    gains = {v: group.non_identity for v in range(n)}
    for a, b in pairs:
        for g in range(group.order):
            edges.append((nid, a, b))
            gains[nid] = g
            nid += 1
    M = Multigraph(frozenset(range(n)), tuple(edges))
    return BiasedGraph(M, gain=GainGraph(M, group, tuple(gains.items())))


def ends_loop_free(G: Multigraph, c: frozenset[int]) -> bool:
    ends = G.ends()
    return all(ends[e][0] != ends[e][1] for e in c)


def dowling(n: int, group: GroupTable | int) -> MatroidHandle:
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(group, int):
        group = cyclic_group(group)
    pairs = list(itertools.combinations(range(n), 2))
    return frame_matroid(blow_up((n, pairs), group))


@dataclass(frozen=True)
class GraphicForm:
    graph: Multigraph | None
    reason: str

    @property
    def graphic(self) -> bool:
        return self.graph is not None


def frame_graphic_form(Omega: BiasedGraph) -> GraphicForm:
    G = Omega.graph
    if not G.is_connected():
        raise ValueError("frame_graphic_form needs a connected biased graph")
    nv = len(G.vertices)
    all_ids = G.edge_ids
    if frame_rank(Omega, all_ids) == nv - 1:
        return GraphicForm(G, "balanced")
    loops = [i for i, u, v in G.edges if u == v and not cycle_is_balanced(Omega, [i])]
    if loops and frame_rank(Omega, set(all_ids) - set(loops)) == nv - 1:
        w = max(G.vertices) + 1
        loopset = set(loops)
        edges = [(i, w, u) if i in loopset else (i, u, v) for i, u, v in G.edges]
        return GraphicForm(Multigraph(G.vertices | {w}, tuple(edges)), "unbalanced loops joined to a new vertex")
    return GraphicForm(None, "not graphic by this test")


def to_explicit(Omega: BiasedGraph) -> BiasedGraph:
    """The same biased graph with its balanced cycles listed explicitly."""
    bal = [c for c in all_cycles(Omega.graph) if cycle_is_balanced(Omega, c)]
    return BiasedGraph(Omega.graph, explicit=frozenset(bal))
