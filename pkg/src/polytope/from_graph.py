"""
src/polytope/from_graph.py
A regular polytope of type {3,q,3} read off a 3-arc-regular cubic graph.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.graphs.arcs import arc_transitivity
from src.graphs.automorphism import AutomorphismGroup, automorphism_group
from src.graphs.graphsym import SymGraph, first_s_arc
from src.groups.fpgroup import RegularRep
from src.groups.permgroup import PermGroup, compose, element_order, inverse, is_identity
from src.polytope.systems import ReflectionSystem, build_reflection_system, require_intersection_conditions
from src.utils.errors import GraphFormatError, InvariantError
from src.utils.log import log


@dataclass
class GraphPolytope:
    system: ReflectionSystem
    delta: np.ndarray
    rho: list
    arc: tuple
    delta_swaps_generators: bool


def _neighbour_fixer(aut: AutomorphismGroup, g: SymGraph, v: int) -> np.ndarray:
    """The non-trivial automorphism fixing v and each of its neighbours."""
    nbrs = g.neighbours(v).tolist()
    chain = PermGroup(aut.group.gens, degree=g.n, known_order=aut.order, base=[v] + nbrs)
    fixers = [x for x in chain.level(1 + len(nbrs)).elements() if not is_identity(x)]
    if len(fixers) != 1:
        raise InvariantError(f"{len(fixers)} non-trivial automorphisms fix vertex {v} and its neighbours")
    return fixers[0]


def _element_mapping(chain: PermGroup, images: Sequence[int]) -> Optional[np.ndarray]:
    """The element taking the i-th base point to images[i], built level by level."""
    x = np.arange(chain.degree, dtype=np.int64)
    for k, t in enumerate(images):
        y = int(inverse(x)[t])
        u = chain.transversal_element(k, y)
        if u is None:
            return None
        x = compose(u, x)
    return x


def polytope_from_3ar_cubic_graph(g: SymGraph, arc3: Sequence[int] = None,
                                  aut: AutomorphismGroup = None, timeout: float = 60.0) -> GraphPolytope:
    """
    rho_2, rho_0, rho_3, rho_1 fix the neighbourhoods of v0, v1, v2, v3 of a
    3-arc; the involution reversing that 3-arc is the polarity delta.
    """
    if g.valency() != 3:
        raise GraphFormatError(f"{g!r} is not cubic")
    aut = aut or automorphism_group(g, timeout=timeout)
    report = arc_transitivity(g, aut.group, s_cap=5)
    if report.s_regular != 3 or report.s_transitive != 3:
        raise GraphFormatError(f"{g!r} is not 3-arc-regular (s = {report.s_transitive})")
    arc = tuple(int(v) for v in (arc3 if arc3 is not None else first_s_arc(g, 3)))
    if len(arc) != 4 or any(not g.has_edge(arc[i], arc[i + 1]) for i in range(3)) or arc[0] == arc[2] \
            or arc[1] == arc[3]:
        raise GraphFormatError(f"{arc} is not a 3-arc")

    fix = [_neighbour_fixer(aut, g, v) for v in arc]
    rho = [fix[1], fix[3], fix[0], fix[2]]
    chain = PermGroup(aut.group.gens, degree=g.n, known_order=aut.order, base=list(arc))
    delta = _element_mapping(chain, arc[::-1])
    if delta is None or element_order(delta) != 2:
        raise InvariantError(f"no involution reverses the 3-arc {arc}")
    swaps = all(np.array_equal(compose(compose(delta, rho[j]), delta), rho[3 - j]) for j in range(4))

    rep = RegularRep.from_permutations(["r0", "r1", "r2", "r3"], rho)
    words = [(i + 1,) for i in range(4)]
    schlafli = [element_order(compose(rho[i], rho[i + 1])) for i in range(3)]
    system = build_reflection_system(rep.presentation, schlafli, rep=rep, words=words)
    require_intersection_conditions(system)
    log("Polytope", f"{g!r} gives a regular polytope of type {{{','.join(map(str, schlafli))}}}, "
                    f"group order {system.order}")
    return GraphPolytope(system, delta, rho, arc, swaps)
