"""
src/graphs/arcs.py
Transitivity of a group on the s-arcs of a graph, Djokovic-Miller classes of
arc-transitive cubic graphs, and the test whether a 2-arc-regular group
extends to a 3-arc-regular one.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.graphs.automorphism import AutomorphismGroup, automorphism_group
from src.graphs.graphsym import SymGraph, enumerate_s_arcs, first_s_arc, girth, is_bipartite
from src.groups.permgroup import (GenMap, PermGroup, compose, element_order, extend_generator_map,
                                  inverse, is_identity)
from src.utils.errors import GraphFormatError, InvariantError, NotGeneratingError
from src.utils.log import log


@dataclass
class ArcReport:
    n: int
    s_transitive: int
    s_regular: Optional[int]
    group_order: int
    arc_counts: Dict[int, int] = field(default_factory=dict)
    dm_class: Optional[str] = None
    aut_complete: bool = True
    girth: Optional[int] = None
    bipartite: Optional[bool] = None
    vertex_transitive: bool = False

    def to_lines(self) -> List[str]:
        lines = [f"order={self.n}"]
        if self.girth is not None:
            lines.append(f"girth={self.girth}")
        if self.bipartite is not None:
            lines.append(f"bipartite={str(self.bipartite).lower()}")
        lines += [f"s_transitive={self.s_transitive}",
                 f"s_regular={self.s_regular if self.s_regular is not None else 'none'}",
                 f"aut_order={self.group_order}"]
        if not self.aut_complete:
            lines.append("aut_order_lower_bound=true")
        if self.dm_class is not None:
            lines.append(f"dm_class={self.dm_class}")
        return lines


def _require_automorphisms(g: SymGraph, group: PermGroup) -> None:
    for k, p in enumerate(group.gens):
        if not g.preserves_edges(p):
            raise InvariantError(f"generator {k} does not preserve adjacency of {g!r}")


def arc_transitivity(g: SymGraph, group: PermGroup, s_cap: int = 16) -> ArcReport:
    """
    Largest s for which `group` is transitive on s-arcs, tested through the
    orbit of one s-arc: its size is |group| over the pointwise stabiliser of
    the arc's vertices, read off a chain whose base starts with those vertices.
    Cycles get the cap n since every s works for them.
    """
    _require_automorphisms(g, group)
    order = group.order()
    cap = g.n if g.valency() == 2 else s_cap
    walk = first_s_arc(g, cap)
    prefix = list(dict.fromkeys(walk))
    chain = PermGroup(group.gens, degree=g.n, known_order=order, base=prefix)
    chain.levels

    # stabiliser of the first k distinct walk vertices
    stab = [order]
    running = order
    for lv in chain.levels[:len(prefix)]:
        running //= lv.orbit_size
        stab.append(running)

    counts: Dict[int, int] = {}
    s_transitive, s_regular = -1, None
    for s in range(cap + 1):
        count = enumerate_s_arcs(g, s)
        counts[s] = count
        distinct = len(dict.fromkeys(walk[:s + 1]))
        stabiliser = stab[distinct]
        if order // stabiliser != count:
            break
        s_transitive = s
        if s_regular is None and stabiliser == 1:
            s_regular = s
    log("Arcs", f"{g!r}: {s_transitive}-arc-transitive, regular at s={s_regular}")
    report = ArcReport(g.n, s_transitive, s_regular, order, counts)
    report.vertex_transitive = chain.levels[0].orbit_size == g.n if chain.levels else g.n == 1
    return report


def _arc_chain(group: PermGroup, v: int, w: int, g: SymGraph) -> PermGroup:
    return PermGroup(group.gens, degree=g.n, known_order=group.order(), base=[v, w])


def arc_reverser(group: PermGroup, g: SymGraph, v: int, w: int,
                 chain: PermGroup = None) -> Optional[np.ndarray]:
    """An element swapping v and w, from the transversals of a chain with base (v, w)."""
    chain = chain or _arc_chain(group, v, w, g)
    t = chain.transversal_element(0, w)
    if t is None:
        return None
    y = int(inverse(t)[v])
    u = chain.transversal_element(1, y)
    if u is None:
        return None
    return compose(u, t)


def involutory_arc_reversers(group: PermGroup, g: SymGraph, v: int, w: int,
                             budget: int = 100_000) -> Tuple[Optional[np.ndarray], List[np.ndarray]]:
    """One reverser of the arc (v, w) plus every involution among all reversers."""
    chain = _arc_chain(group, v, w, g)
    r = arc_reverser(group, g, v, w, chain)
    if r is None:
        return None, []
    involutions = []
    for h in chain.level(2).elements(budget):
        x = compose(h, r)
        if element_order(x) == 2:
            involutions.append(x)
    return r, involutions


_DM_NAMES = {1: "1", 3: "3", 5: "5"}


def dm_class(g: SymGraph, aut: AutomorphismGroup = None, timeout: float = 60.0) -> str:
    """Djokovic-Miller class of a connected arc-transitive cubic graph."""
    if g.valency() != 3:
        raise GraphFormatError(f"{g!r} is not cubic")
    aut = aut or automorphism_group(g, timeout=timeout)
    report = arc_transitivity(g, aut.group, s_cap=6)
    s = report.s_regular
    if report.s_transitive < 1 or s is None or s != report.s_transitive:
        raise GraphFormatError(f"{g!r} is not arc-transitive")
    v = 0
    w = int(g.neighbours(v)[0])
    _, involutions = involutory_arc_reversers(aut.group, g, v, w)
    if s in _DM_NAMES:
        if not involutions:
            raise InvariantError(f"class {s} graph without an involutory arc reverser")
        return _DM_NAMES[s]
    return f"{s}^{1 if involutions else 2}"


def analyze_graph(g: SymGraph, group: PermGroup = None, timeout: float = 60.0,
                  s_cap: int = 16) -> ArcReport:
    """Certificate for a connected graph: full Aut unless `group` is supplied."""
    complete = True
    if group is None:
        aut = automorphism_group(g, timeout=timeout)
        group, complete = aut.group, aut.complete
    else:
        aut = None
    report = arc_transitivity(g, group, s_cap)
    report.aut_complete = complete
    report.bipartite = is_bipartite(g)
    report.girth = girth(g, roots=[0] if report.vertex_transitive else None)
    if g.valency() == 3 and report.s_transitive >= 1 and aut is not None and complete:
        report.dm_class = dm_class(g, aut)
        order = report.group_order
        s = report.s_regular
        if s is None or s > 5 or order != g.n * 3 * 2 ** (s - 1):
            raise InvariantError(f"{g!r}: |Aut| = {order} breaks the cubic s-arc bound for s = {s}")
    return report


# ── 2-arc-regular groups and their extensions ─────────────────────────────────

@dataclass
class TwoArcGenerators:
    h: np.ndarray
    p: np.ndarray
    a: np.ndarray


def two_arc_regular_generators(group: PermGroup, g: SymGraph) -> TwoArcGenerators:
    """
    h of order 3 and p of order 2 fixing a vertex v and its neighbour w, and
    an element a reversing the arc (v, w), preferring an involution that
    commutes with p.
    """
    if g.valency() != 3:
        raise GraphFormatError(f"{g!r} is not cubic")
    v = 0
    w = int(g.neighbours(v)[0])
    chain = _arc_chain(group, v, w, g)
    if chain.order() != 6 * g.n or chain.levels[0].orbit_size != g.n:
        raise InvariantError(f"group of order {chain.order()} is not 2-arc-regular on {g!r}")
    stab_v = chain.level(1)
    h = next((x for x in stab_v.elements() if element_order(x) == 3), None)
    p = next((x for x in chain.level(2).elements() if not is_identity(x)), None)
    if h is None or p is None:
        raise InvariantError("vertex stabiliser is not S3")
    r = arc_reverser(group, g, v, w, chain)
    candidates = [compose(x, r) for x in chain.level(2).elements()]
    commuting = [a for a in candidates if np.array_equal(compose(a, p), compose(p, a))]
    involutory = [a for a in commuting if element_order(a) == 2]
    a = (involutory or commuting or candidates)[0]
    return TwoArcGenerators(h, p, a)


def check_3ar_extension(T: PermGroup, h: np.ndarray, p: np.ndarray, a: np.ndarray) -> bool:
    """Whether h -> h, p -> p, a -> ap extends to an automorphism of T = <h, p, a>."""
    gens = [np.asarray(x, dtype=np.int64) for x in (h, p, a)]
    sub = PermGroup(gens, degree=T.degree)
    if sub.order() != T.order():
        raise NotGeneratingError(f"<h, p, a> has order {sub.order()}, not {T.order()}")
    witness: Optional[GenMap] = extend_generator_map(sub, [gens[0], gens[1], compose(gens[2], gens[1])])
    ok = witness is not None and witness.is_automorphism()
    log("Arcs", f"a -> ap {'extends' if ok else 'does not extend'}")
    return ok
