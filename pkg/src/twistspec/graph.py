"""Finite connected multigraphs with loops, oriented edges and spanning trees.

Oriented edges are indexed ``0..2m-1``. Index ``i < m`` is edge ``i`` traversed
in its listed direction (tail -> head); index ``i + m`` is its inverse. Every
matrix indexed by oriented edges in this package uses this convention.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Sequence

import numpy as np

from .errors import DisconnectedGraph, EmptyGraph, GenusZero, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        if self.n < 1:
            raise EmptyGraph("graph has no vertices")
        for t, h in self.edges:
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ParseError(f"edge ({t}, {h}) out of range for {self.n} vertices")
        if not _connected(self.n, self.edges):
            raise DisconnectedGraph("graph is not connected")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def genus(self) -> int:
        return self.m - self.n + 1

    def tail(self, a: int) -> int:
        """Initial vertex a(0) of oriented edge ``a``."""
        m = self.m
        return self.edges[a][0] if a < m else self.edges[a - m][1]

    def head(self, a: int) -> int:
        """Terminal vertex a(1) of oriented edge ``a``."""
        m = self.m
        return self.edges[a][1] if a < m else self.edges[a - m][0]

    def inverse(self, a: int) -> int:
        return (a + self.m) % (2 * self.m)

    def is_loop(self, i: int) -> bool:
        t, h = self.edges[i % self.m]
        return t == h

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for t, h in self.edges:
            deg[t] += 1
            deg[h] += 1
        return deg

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Oriented edges leaving each vertex, ascending index."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for a in range(2 * self.m):
            out[self.tail(a)].append(a)
        return tuple(tuple(x) for x in out)

    def successors(self, a: int) -> tuple[int, ...]:
        """All ``b`` with ``a -> b`` (a feeds into b)."""
        inv = self.inverse(a)
        return tuple(b for b in self.out_edges[self.head(a)] if b != inv)

    def to_json(self) -> str:
        return json.dumps({"vertices": self.n, "edges": [list(e) for e in self.edges]})


def _connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for t, h in edges:
        adj[t].append(h)
        adj[h].append(t)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def load_graph(source: IO | str | bytes) -> Graph:
    """Parse ``{"vertices": n, "edges": [[tail, head], ...]}``."""
    if hasattr(source, "read"):
        source = source.read()
    try:
        data = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise ParseError("expected an object with 'vertices' and 'edges'")
    n = data["vertices"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("'vertices' must be an integer")
    if n == 0:
        raise EmptyGraph("graph has no vertices")
    edges = []
    for e in data["edges"]:
        if (
            not isinstance(e, (list, tuple))
            or len(e) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        ):
            raise ParseError(f"malformed edge {e!r}")
        edges.append((e[0], e[1]))
    return Graph(n, tuple(edges))


@dataclass(frozen=True)
class SpanningTree:
    tree_edges: frozenset[int]
    non_tree_edges: tuple[int, ...]
    parent: tuple[int, ...]
    """Parent vertex in the BFS tree (-1 at the root)."""
    parent_edge: tuple[int, ...]
    """Oriented edge from the parent into this vertex (-1 at the root)."""
    depth: tuple[int, ...]

    def path(self, v: int, w: int) -> list[int]:
        """Oriented edges of the unique tree path from ``v`` to ``w``."""
        up_v: list[int] = []
        down_w: list[int] = []
        while self.depth[v] > self.depth[w]:
            up_v.append(self.parent_edge[v])
            v = self.parent[v]
        while self.depth[w] > self.depth[v]:
            down_w.append(self.parent_edge[w])
            w = self.parent[w]
        while v != w:
            up_v.append(self.parent_edge[v])
            down_w.append(self.parent_edge[w])
            v, w = self.parent[v], self.parent[w]
        m = self.m
        return [(a + m) % (2 * m) for a in up_v] + down_w[::-1]

    m: int = field(default=0, repr=False)


def spanning_tree(G: Graph) -> SpanningTree:
    """BFS tree from vertex 0, incident edges scanned in input order."""
    m = G.m
    parent = [-1] * G.n
    parent_edge = [-1] * G.n
    depth = [-1] * G.n
    depth[0] = 0
    tree: set[int] = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for a in _incident_in_order(G, v):
            w = G.head(a)
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                parent[w] = v
                parent_edge[w] = a
                tree.add(a % m)
                queue.append(w)
    non_tree = tuple(i for i in range(m) if i not in tree)
    return SpanningTree(
        frozenset(tree), non_tree, tuple(parent), tuple(parent_edge), tuple(depth), m
    )


def _incident_in_order(G: Graph, v: int) -> list[int]:
    # oriented edges leaving v, ordered by the underlying edge index
    return sorted(G.out_edges[v], key=lambda a: (a % G.m, a))


def tree_bipartition(G: Graph, T: SpanningTree) -> tuple[frozenset[int], frozenset[int]]:
    """Two-colouring of the tree by depth parity; vertex 0 lies in the first class."""
    v1 = frozenset(v for v in range(G.n) if T.depth[v] % 2 == 0)
    v2 = frozenset(range(G.n)) - v1
    return v1, v2


def is_bipartite(G: Graph) -> bool:
    colour = [-1] * G.n
    colour[0] = 0
    stack = [0]
    while stack:
        v = stack.pop()
        for a in G.out_edges[v]:
            w = G.head(a)
            if colour[w] < 0:
                colour[w] = 1 - colour[v]
                stack.append(w)
            elif colour[w] == colour[v]:
                return False
    return True


def two_core(G: Graph) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Strip degree-1 vertices until none remain.

    Returns ``(core, edge_map, vertex_map)`` where ``edge_map[j]`` is the original
    index of core edge ``j`` and ``vertex_map[k]`` the original index of core
    vertex ``k``. Surviving edges keep their relative order and direction.
    """
    if G.genus < 1:
        raise GenusZero("a tree trims down to nothing")
    deg = G.degrees.copy()
    alive_v = np.ones(G.n, dtype=bool)
    alive_e = np.ones(G.m, dtype=bool)
    inc: list[list[int]] = [[] for _ in range(G.n)]
    for i, (t, h) in enumerate(G.edges):
        inc[t].append(i)
        if h != t:
            inc[h].append(i)
    stack = [v for v in range(G.n) if deg[v] == 1]
    while stack:
        v = stack.pop()
        if not alive_v[v] or deg[v] != 1:
            continue
        alive_v[v] = False
        for i in inc[v]:
            if alive_e[i]:
                alive_e[i] = False
                t, h = G.edges[i]
                w = h if t == v else t
                deg[v] -= 1
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    vertex_map = tuple(int(v) for v in np.flatnonzero(alive_v))
    relabel = {v: k for k, v in enumerate(vertex_map)}
    edge_map = tuple(int(i) for i in np.flatnonzero(alive_e))
    core = Graph(len(vertex_map), tuple((relabel[G.edges[i][0]], relabel[G.edges[i][1]]) for i in edge_map))
    return core, edge_map, vertex_map


def feeds_into(G: Graph, a: int, b: int) -> bool:
    return G.head(a) == G.tail(b) and b != G.inverse(a)


def edge_adjacency(G: Graph) -> np.ndarray:
    """The 0/1 non-backtracking (Hashimoto) matrix W1 on oriented edges."""
    W = np.zeros((2 * G.m, 2 * G.m))
    for a in range(2 * G.m):
        W[a, list(G.successors(a))] = 1.0
    return W


# built-in generators ---------------------------------------------------------

def complete_graph(k: int) -> Graph:
    return Graph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def k4() -> Graph:
    """K4 with edges 12, 23, 34, 41, 13, 24 (vertices v1..v4 -> 0..3)."""
    return Graph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)))


def cycle_graph(k: int) -> Graph:
    if k == 1:
        return Graph(1, ((0, 0),))
    return Graph(k, tuple((i, (i + 1) % k) for i in range(k)))


def theta_graph(l0: int, l1: int, l2: int) -> Graph:
    """Three paths of lengths l0, l1, l2 joining v=0 to w=1, all oriented v -> w.

    Edges of path 0 come first, then path 1, then path 2. With ``l0`` the
    shortest length, the BFS tree contains all of path 0, so the two non-tree
    edges lie on paths 1 and 2 (in that order) and the character coordinates
    are taken along the cycles path1 * path0^-1 and path2 * path0^-1.
    """
    if min(l0, l1, l2) < 1:
        raise ValueError("path lengths must be positive")
    n = 2
    edges: list[tuple[int, int]] = []
    for length in (l0, l1, l2):
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, 1))
    return Graph(n, tuple(edges))


def random_graph(
    rng, n_max: int = 6, m_max: int = 9, min_genus: int = 1, max_genus: int | None = None
) -> Graph:
    """A random connected multigraph (loops and multi-edges allowed).

    ``rng`` is a ``numpy.random.Generator``. A random spanning tree is laid
    down first so the result is always connected; the remaining edges are
    uniform vertex pairs.
    """
    if m_max < min_genus or n_max < 1:
        raise ValueError("no graph fits these bounds")
    while True:
        n = int(rng.integers(1, n_max + 1))
        lo = n - 1 + min_genus
        hi = m_max if max_genus is None else min(m_max, n - 1 + max_genus)
        if lo > hi:
            continue
        m = int(rng.integers(lo, hi + 1))
        edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
        edges += [(int(rng.integers(0, n)), int(rng.integers(0, n))) for _ in range(m - (n - 1))]
        order = rng.permutation(len(edges))
        edges = [edges[i] for i in order]
        edges = [(h, t) if rng.random() < 0.5 else (t, h) for t, h in edges]
        return Graph(n, tuple(edges))
