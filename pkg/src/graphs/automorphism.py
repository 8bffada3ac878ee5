"""
src/graphs/automorphism.py
Automorphism groups and isomorphisms of simple graphs by individualisation
and refinement.

Colourings are int arrays of cell indices. Refinement is canonical: cells are
split by (old cell, multiset of neighbour cells) and renumbered in sorted
order, so two graphs related by an isomorphism get corresponding colourings
and identical traces. Automorphisms come from comparing discrete leaves with
the first leaf of the search tree; one generator is kept per new orbit
point, which makes the generators strong relative to the base of the first
path and gives |Aut| as a product of orbit sizes.
"""

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.graphs.graphsym import SymGraph, is_connected
from src.groups.permgroup import PermGroup, orbit_of
from src.utils.errors import GraphFormatError
from src.utils.log import debug, log

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finaliser, elementwise; uint64 arithmetic wraps."""
    z = x.astype(np.uint64) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class _Timeout(Exception):
    pass


@dataclass
class AutomorphismGroup:
    """Result of the search. When `complete` is False the order is only a lower bound."""

    group: PermGroup
    order: int
    base: List[int]
    orbit_sizes: List[int]
    complete: bool = True
    generators: List[np.ndarray] = field(default_factory=list)

    @property
    def vertex_stabiliser_order(self) -> int:
        return self.order // self.orbit_sizes[0] if self.orbit_sizes else 1


class _Refiner:
    """Canonical colour refinement on one graph."""

    def __init__(self, g: SymGraph, deadline: Optional[float]):
        self.g = g
        self.owners = g.owners
        self.starts = g.indptr[:-1]
        self.has_nbrs = g.degrees > 0
        self.deadline = deadline
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 16 == 0 and time.monotonic() > self.deadline:
            raise _Timeout()

    def refine(self, colors: np.ndarray) -> Tuple[np.ndarray, Tuple]:
        g = self.g
        trace = []
        k = int(colors.max()) + 1 if colors.size else 0
        while True:
            h = _mix(colors[g.indices])
            sig = np.zeros(g.n, dtype=np.uint64)
            if h.size:
                sums = np.add.reduceat(h, self.starts[self.has_nbrs])
                sig[self.has_nbrs] = sums
            order = np.lexsort((sig, colors))
            sc, ss = colors[order], sig[order]
            change = np.empty(g.n, dtype=bool)
            change[0] = True
            change[1:] = (sc[1:] != sc[:-1]) | (ss[1:] != ss[:-1])
            new = np.empty(g.n, dtype=np.int64)
            new[order] = np.cumsum(change) - 1
            knew = int(new.max()) + 1
            firsts = np.flatnonzero(change)
            sizes = np.diff(np.append(firsts, g.n)).astype(np.uint64)
            digest = _mix(ss[firsts] ^ _mix(sizes ^ _mix(sc[firsts]))) ^ _mix(np.arange(knew, dtype=np.uint64))
            trace.append((knew, int(np.bitwise_xor.reduce(digest))))
            if knew == k:
                return new, tuple(trace)
            colors, k = new, knew

    @staticmethod
    def individualise(colors: np.ndarray, v: int) -> np.ndarray:
        new = 2 * colors + 1
        new[v] = 2 * colors[v]
        return np.unique(new, return_inverse=True)[1].ravel()

    @staticmethod
    def target_cell(colors: np.ndarray) -> Optional[np.ndarray]:
        """First smallest non-singleton cell, or None on a discrete colouring."""
        sizes = np.bincount(colors)
        multi = np.flatnonzero(sizes > 1)
        if multi.size == 0:
            return None
        c = int(multi[np.argmin(sizes[multi])])
        return np.flatnonzero(colors == c)


@dataclass
class _Path:
    colors: List[np.ndarray]
    cells: List[np.ndarray]
    base: List[int]
    traces: List[Tuple]
    leaf: np.ndarray


def _first_path(ref: _Refiner, initial: np.ndarray) -> _Path:
    colors, trace = ref.refine(initial)
    path = _Path([], [], [], [trace], colors)
    while True:
        cell = ref.target_cell(colors)
        if cell is None:
            path.leaf = colors
            return path
        v = int(cell[0])
        path.colors.append(colors)
        path.cells.append(cell)
        path.base.append(v)
        colors, trace = ref.refine(ref.individualise(colors, v))
        path.traces.append(trace)


def _leaf_search(ref: _Refiner, colors: np.ndarray, depth: int, first: _Path,
                 target: SymGraph, source: SymGraph, required=()) -> Optional[np.ndarray]:
    """
    A leaf below `colors` equivalent to the first leaf; returns the vertex map
    first -> this, which must send each (u, v) of `required` u to v.
    """
    ref.tick()
    cell = ref.target_cell(colors)
    if cell is None:
        gamma = np.argsort(colors)[first.leaf]
        if any(gamma[u] != v for u, v in required):
            return None
        return gamma if source.preserves_edges(gamma, target) else None
    if depth >= len(first.traces) - 1:
        return None
    for x in cell.tolist():
        child, trace = ref.refine(ref.individualise(colors, x))
        if trace != first.traces[depth + 1]:
            continue
        found = _leaf_search(ref, child, depth + 1, first, target, source, required)
        if found is not None:
            return found
    return None


def _initial_colors(g: SymGraph, colors: np.ndarray = None) -> np.ndarray:
    if colors is None:
        return np.zeros(g.n, dtype=np.int64)
    return np.unique(np.asarray(colors), return_inverse=True)[1].ravel()


def automorphism_group(g: SymGraph, timeout: float = 60.0, colors: np.ndarray = None) -> AutomorphismGroup:
    """
    Automorphisms of a connected graph (preserving `colors` when given).
    Orbits of the base-point stabilisers are completed deepest level first,
    so generators found at deeper levels prune the shallower searches.
    """
    if g.n == 0 or not is_connected(g):
        raise GraphFormatError("automorphism search needs a connected, non-empty graph")
    deadline = time.monotonic() + timeout if timeout else None
    ref = _Refiner(g, deadline)
    start = time.monotonic()
    first = _first_path(ref, _initial_colors(g, colors))
    base = first.base
    gens: List[np.ndarray] = []
    sizes = [1] * len(base)
    complete = True
    try:
        for i in range(len(base) - 1, -1, -1):
            fixing = [p for p in gens if all(p[b] == b for b in base[:i])]
            orbit = set(orbit_of(base[i], fixing, g.n).tolist()) if fixing else {base[i]}
            for w in first.cells[i].tolist():
                if w in orbit:
                    continue
                child, trace = ref.refine(ref.individualise(first.colors[i], w))
                if trace != first.traces[i + 1]:
                    continue
                required = [(b, b) for b in base[:i]] + [(base[i], w)]
                gamma = _leaf_search(ref, child, i + 1, first, g, g, required)
                if gamma is not None:
                    gens.append(gamma)
                    fixing.append(gamma)
                    orbit = set(orbit_of(base[i], fixing, g.n).tolist())
            sizes[i] = len(orbit)
            debug("Automorphism", f"level {i}: base point {base[i]}, orbit {sizes[i]}")
    except _Timeout:
        complete = False
        log("Automorphism", f"timed out after {timeout}s; reporting a lower bound")

    if complete:
        group = PermGroup.from_strong_generators(gens, base, g.n)
        order = group.order()
    else:
        group = PermGroup(gens, degree=g.n)
        order = group.order()
    log("Automorphism", f"{g!r}: order {order}, base length {len(base)}, "
                        f"{ref.nodes} nodes in {time.monotonic() - start:.1f}s")
    return AutomorphismGroup(group, order, list(base), sizes, complete, gens)


def isomorphic(g1: SymGraph, g2: SymGraph, timeout: float = 60.0) -> Optional[np.ndarray]:
    """A vertex bijection carrying g1 onto g2, or None. Raises TimeoutError when the budget runs out."""
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return None
    if not np.array_equal(np.sort(g1.degrees), np.sort(g2.degrees)):
        return None
    deadline = time.monotonic() + timeout if timeout else None
    ref1 = _Refiner(g1, deadline)
    first = _first_path(ref1, _initial_colors(g1))
    ref2 = _Refiner(g2, deadline)
    colors, trace = ref2.refine(_initial_colors(g2))
    if trace != first.traces[0]:
        return None
    try:
        gamma = _leaf_search(ref2, colors, 0, first, g2, g1)
    except _Timeout:
        raise TimeoutError(f"isomorphism search exceeded {timeout}s")
    return gamma
