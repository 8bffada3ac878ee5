"""
src/graphs/graphsym.py
Finite simple graphs: construction, s-arc counts, girth, bipartiteness,
connectivity, the edge-list file format and the standard fixture graphs.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.utils.errors import GraphFormatError


@dataclass(eq=False)
class SymGraph:
    """
    Undirected simple graph on 0..n-1 in compressed adjacency form:
    the neighbours of v are indices[indptr[v]:indptr[v+1]], sorted.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    name: str = ""
    _edge_keys: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    # ── Construction ──────────────────────────────────────────────────────

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "") -> "SymGraph":
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        edges = edges.reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise GraphFormatError(f"edge endpoint outside 0..{n - 1}")
        if np.any(edges[:, 0] == edges[:, 1]):
            v = int(edges[edges[:, 0] == edges[:, 1]][0, 0])
            raise GraphFormatError(f"loop at vertex {v}")
        lo, hi = np.minimum(edges[:, 0], edges[:, 1]), np.maximum(edges[:, 0], edges[:, 1])
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            raise GraphFormatError("repeated edge")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst[order], name)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]], name: str = "") -> "SymGraph":
        """Build from per-vertex neighbour lists; each edge may be listed from either end or both."""
        pairs = {(min(u, int(v)), max(u, int(v))) for u, nbrs in enumerate(adjacency) for v in nbrs}
        return cls.from_edges(len(adjacency), sorted(pairs), name)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, name: str = "") -> "SymGraph":
        nodes = sorted(graph.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(index[u], index[v]) for u, v in graph.edges()], name)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges().tolist())
        return graph

    # ── Queries ───────────────────────────────────────────────────────────

    def neighbours(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    @property
    def owners(self) -> np.ndarray:
        """Source vertex of every entry of `indices`."""
        return np.repeat(np.arange(self.n), self.degrees)

    def valency(self) -> Optional[int]:
        """Common degree, or None when the graph is not regular."""
        d = self.degrees
        return int(d[0]) if d.size and np.all(d == d[0]) else None

    def edges(self) -> np.ndarray:
        src = self.owners
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    @property
    def edge_keys(self) -> np.ndarray:
        if self._edge_keys is None:
            e = self.edges()
            self._edge_keys = np.sort(e[:, 0] * self.n + e[:, 1])
        return self._edge_keys

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbours(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < nbrs.size and nbrs[i] == v)

    def preserves_edges(self, perm: np.ndarray, target: "SymGraph" = None) -> bool:
        """Whether the vertex map `perm` carries this graph's edges onto `target`'s (default: itself)."""
        target = self if target is None else target
        if self.edge_count != target.edge_count:
            return False
        e = perm[self.edges()]
        keys = np.minimum(e[:, 0], e[:, 1]) * target.n + np.maximum(e[:, 0], e[:, 1])
        return bool(np.array_equal(np.sort(keys), target.edge_keys))

    def relabel(self, perm: np.ndarray, name: str = None) -> "SymGraph":
        """The graph with vertex v renamed perm[v]."""
        perm = np.asarray(perm, dtype=np.int64)
        return SymGraph.from_edges(self.n, perm[self.edges()], self.name if name is None else name)

    def distance_partition(self, v: int) -> np.ndarray:
        """Distance from v to every vertex; -1 where unreachable."""
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[v] = 0
        frontier = np.array([v], dtype=np.int64)
        d = 0
        while frontier.size:
            d += 1
            starts, ends = self.indptr[frontier], self.indptr[frontier + 1]
            nbrs = np.concatenate([self.indices[a:b] for a, b in zip(starts, ends)])
            nbrs = np.unique(nbrs)
            nbrs = nbrs[dist[nbrs] == -1]
            dist[nbrs] = d
            frontier = nbrs
        return dist

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"SymGraph{label}(n={self.n}, m={self.edge_count})"


# ── Invariants ────────────────────────────────────────────────────────────────

def is_connected(g: SymGraph) -> bool:
    if g.n == 0:
        return True
    return bool(np.all(g.distance_partition(0) >= 0))


def bipartition(g: SymGraph) -> Optional[np.ndarray]:
    """Part (0 or 1) of every vertex, or None when the graph has an odd cycle."""
    part = np.full(g.n, -1, dtype=np.int64)
    for root in range(g.n):
        if part[root] >= 0:
            continue
        dist = g.distance_partition(root)
        reached = dist >= 0
        part[reached] = dist[reached] % 2
    src = g.owners
    if np.any(part[src] == part[g.indices]):
        return None
    return part


def is_bipartite(g: SymGraph) -> bool:
    return bipartition(g) is not None


def girth(g: SymGraph, roots: Iterable[int] = None) -> Optional[int]:
    """
    Length of a shortest cycle; None for forests. For a vertex-transitive
    graph a single root gives the exact value.
    """
    best = None
    for root in (range(g.n) if roots is None else roots):
        parent = np.full(g.n, -1, dtype=np.int64)
        dist = np.full(g.n, -1, dtype=np.int64)
        dist[root] = 0
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in g.neighbours(u).tolist():
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cycle = int(dist[u] + dist[w] + 1)
                    if best is None or cycle < best:
                        best = cycle
        if best == 3:
            break
    return best


# ── s-arcs ────────────────────────────────────────────────────────────────────

def enumerate_s_arcs(g: SymGraph, s: int) -> int:
    """Number of s-arcs, by propagating counts along directed edges."""
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return g.n
    src, dst = g.owners, g.indices
    # reverse[k] is the index of the directed edge dst[k] -> src[k]
    keys = src * g.n + dst
    reverse = np.searchsorted(keys, dst * g.n + src)
    counts = np.ones(src.size, dtype=np.int64)
    for _ in range(s - 1):
        incoming = np.zeros(g.n, dtype=counts.dtype)
        np.add.at(incoming, dst, counts)
        counts = incoming[src] - counts[reverse]
    return int(counts.sum())


def iter_s_arcs(g: SymGraph, s: int, start: int = None) -> Iterator[Tuple[int, ...]]:
    """Every s-arc (from `start` only, when given) in lexicographic order."""
    roots = range(g.n) if start is None else [start]
    for root in roots:
        stack = [(root,)]
        while stack:
            arc = stack.pop()
            if len(arc) == s + 1:
                yield arc
                continue
            prev = arc[-2] if len(arc) > 1 else -1
            for w in reversed(g.neighbours(arc[-1]).tolist()):
                if w != prev:
                    stack.append(arc + (w,))


def first_s_arc(g: SymGraph, s: int, start: int = 0) -> Tuple[int, ...]:
    arc = [start]
    for _ in range(s):
        prev = arc[-2] if len(arc) > 1 else -1
        nbrs = [w for w in g.neighbours(arc[-1]).tolist() if w != prev]
        if not nbrs:
            raise GraphFormatError(f"no {s}-arc starts at vertex {start}")
        arc.append(nbrs[0])
    return tuple(arc)


# ── File format ───────────────────────────────────────────────────────────────

def read_graph_file(path) -> SymGraph:
    """First line `n m`, then m lines `u v` with 0-based vertices."""
    path = Path(path)
    rows = [ln.split("#", 1)[0].split() for ln in path.read_text().splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise GraphFormatError(f"{path}: header must be 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as e:
        raise GraphFormatError(f"{path}: {e}") from e
    if len(edges) != m:
        raise GraphFormatError(f"{path}: header says {m} edges, found {len(edges)}")
    return SymGraph.from_edges(n, edges, name=path.stem)


def graph_lines(g: SymGraph, labels: Sequence[str] = None) -> List[str]:
    """Edge-list lines; `labels` adds one `# v label` comment per vertex."""
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    if labels is not None:
        lines.extend(f"# {v} {label}" for v, label in enumerate(labels))
    return lines


def write_graph_file(g: SymGraph, path, labels: Sequence[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(graph_lines(g, labels)) + "\n")
    return path


# ── Fixture graphs ────────────────────────────────────────────────────────────

def complete_graph(n: int) -> SymGraph:
    return SymGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)], f"K{n}")


def complete_bipartite(a: int, b: int) -> SymGraph:
    return SymGraph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)], f"K{a},{b}")


def cycle_graph(n: int) -> SymGraph:
    return SymGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def cube_graph() -> SymGraph:
    return SymGraph.from_edges(8, [(u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)],
                               "Q3")


def generalized_petersen(n: int, k: int, name: str = "") -> SymGraph:
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    pairs = sorted({(min(a, b), max(a, b)) for a, b in edges})
    return SymGraph.from_edges(2 * n, pairs, name or f"GP({n},{k})")


def petersen_graph() -> SymGraph:
    return generalized_petersen(5, 2, "Petersen")


def desargues_graph() -> SymGraph:
    return generalized_petersen(10, 3, "Desargues")


def heawood_graph() -> SymGraph:
    """Point-line incidence graph of the Fano plane."""
    lines = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    return SymGraph.from_edges(14, [(p, 7 + j) for j, line in enumerate(lines) for p in line], "Heawood")


FIXTURES = {
    "K4": lambda: complete_graph(4),
    "K3,3": lambda: complete_bipartite(3, 3),
    "C6": lambda: cycle_graph(6),
    "cube": cube_graph,
    "petersen": petersen_graph,
    "desargues": desargues_graph,
    "heawood": heawood_graph,
}
