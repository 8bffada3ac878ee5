"""
src/medial/medial.py
Medial layer graph of an even-rank polytope, the extended rotation group
with a base-flag reversing polarity, the Cayley graph on the polarities and
its covering map onto the medial layer graph.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.graphs.arcs import ArcReport, arc_transitivity, check_3ar_extension, two_arc_regular_generators
from src.graphs.graphsym import SymGraph
from src.groups.fpgroup import RegularRep, Word, free_reduce, invert_word, power_word
from src.groups.permgroup import PermGroup, bfs_tree, orbit_of
from src.polytope.lattice import FaceLattice, face_image_map
from src.polytope.systems import (Orientation, ReflectionSystem, RotationSystem, SelfDuality,
                                  SelfDualityReport, _System)
from src.utils.errors import DualityError, InvariantError, PolymedialError
from src.utils.log import log


# ── Medial layer graph ────────────────────────────────────────────────────────

@dataclass(eq=False)
class MedialGraph:
    """Faces of ranks (n-2)/2 and n/2 with their incidences; vertices of the lower rank come first."""

    graph: SymGraph
    ranks: Tuple[int, int]
    sizes: Tuple[int, int]

    @property
    def parts(self) -> np.ndarray:
        return np.repeat([1, 2], self.sizes)

    def vertex(self, rank: int, face: int) -> int:
        return face if rank == self.ranks[0] else self.sizes[0] + face

    def labels(self) -> List[str]:
        return [f"part={p}" for p in self.parts.tolist()]


def medial_layer_graph(lat: FaceLattice) -> MedialGraph:
    if lat.rank % 2:
        raise PolymedialError(f"medial layer graphs need even rank, got {lat.rank}")
    a = (lat.rank - 2) // 2
    pairs = lat.incidence[a]
    lower = lat.f_vector[a]
    edges = np.column_stack([pairs[:, 0], lower + pairs[:, 1]])
    graph = SymGraph.from_edges(lower + lat.f_vector[a + 1], edges, name="medial")
    log("Medial", f"medial layer graph on ranks {a},{a + 1}: {graph.n} vertices, {graph.edge_count} edges")
    return MedialGraph(graph, (a, a + 1), (lower, lat.f_vector[a + 1]))


def extended_group_on_medial_graph(lat: FaceLattice, duality: np.ndarray, mg: MedialGraph) -> PermGroup:
    """
    Automorphisms and the base duality acting on the medial layer graph;
    its order is twice that of the polytope's group when the action is faithful.
    """
    a, b = mg.ranks
    offsets = lat.offsets
    gens = []
    for g in lat.system.gens:
        gens.append(np.concatenate([face_image_map(lat, a, g), mg.sizes[0] + face_image_map(lat, b, g)]))
    d_low = duality[offsets[a]:offsets[a] + mg.sizes[0]] - offsets[b]
    d_high = duality[offsets[b]:offsets[b] + mg.sizes[1]] - offsets[a]
    gens.append(np.concatenate([mg.sizes[0] + d_low, d_high]))
    try:
        group = PermGroup(gens, degree=mg.graph.n, known_order=2 * lat.system.order)
        group.levels
    except InvariantError:
        group = PermGroup(gens, degree=mg.graph.n)
    log("Medial", f"automorphisms and dualities act on the medial graph as a group of order {group.order()}")
    return group


# ── Extended rotation group ───────────────────────────────────────────────────

@dataclass(eq=False)
class ExtendedRotationGroup:
    """
    The polytope's group extended by a polarity delta reversing the base flag,
    all read inside one regular representation. `inner` is the original
    system rebuilt there.
    """

    rep: RegularRep
    inner: _System
    sigma_words: List[Word]
    delta_word: Word
    p: int
    group: PermGroup = field(init=False, repr=False)

    def __post_init__(self):
        gens = [self.rep.perm(w) for w in self.inner.words] + [self.rep.perm(self.delta_word)]
        self.group = PermGroup(gens, degree=self.rep.degree, known_order=self.rep.order)

    @property
    def order(self) -> int:
        return self.rep.order

    def sigma(self, i: int, k: int = 1) -> Word:
        """sigma_i^k as a word."""
        return power_word(self.sigma_words[i - 1], k)

    def delta_j(self, j: int) -> Word:
        """sigma_1^(1-j) delta sigma_1^(j-1), subscripts taken mod p in 1..p."""
        j = (j - 1) % self.p + 1
        return free_reduce(self.sigma(1, 1 - j) + self.delta_word + self.sigma(1, j - 1))

    def point(self, *words: Word) -> int:
        x = 0
        for w in words:
            x = self.rep.point(w, start=x)
        return x


def build_extended_rotation_group(sys: _System, duality: SelfDualityReport,
                                  limit: int = 2_000_000) -> ExtendedRotationGroup:
    """
    Extend the presentation by d with d^2 and the conjugation relations of a
    base-flag reversing polarity, enumerate again, and check the order doubles.
    """
    if duality.kind != SelfDuality.PROPERLY:
        raise DualityError(f"{duality.kind.value} polytopes admit no polarity reversing the base flag")
    pres = sys.source
    d = pres.rank + 1
    n = sys.rank
    if isinstance(sys, ReflectionSystem):
        relators = [(d, d)] + [(d,) + sys.words[j] + (d,) + sys.words[n - 1 - j] for j in range(n)]
    else:
        relators = [(d, d)] + [(-d,) + sys.words[i - 1] + (d,) + sys.words[n - i - 1] for i in range(1, n)]
    name = "d" if "d" not in pres.generators else "delta"
    ext_pres = pres.extend([name], [free_reduce(r) for r in relators])
    rep = RegularRep.from_presentation(ext_pres, limit=limit)
    if rep.order != 2 * sys.order:
        raise InvariantError(f"extended group has order {rep.order}, expected {2 * sys.order}")
    if isinstance(sys, ReflectionSystem):
        inner = ReflectionSystem(rep, list(sys.words), sys.schlafli, ext_pres)
        sigma_words = inner.rotation_words()
    else:
        inner = RotationSystem(rep, list(sys.words), sys.schlafli, ext_pres)
        sigma_words = list(sys.words)
    ext = ExtendedRotationGroup(rep, inner, sigma_words, (d,), sys.schlafli[0])
    log("Medial", f"extended group of order {rep.order}")
    return ext


# ── Polarities and the Cayley graph ───────────────────────────────────────────

@dataclass(eq=False)
class PolaritySet:
    ext: ExtendedRotationGroup
    words: List[Word]
    points: np.ndarray
    group: PermGroup = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.points.size)


def polarity_set(ext: ExtendedRotationGroup) -> PolaritySet:
    rep = ext.rep
    words = [ext.delta_j(j) for j in range(1, ext.p + 1)]
    pts = [rep.point(w) for w in words]
    if len(set(pts)) != len(pts):
        raise InvariantError("two of the polarities delta_j coincide")
    if any(rep.point(w + w) != 0 for w in words) or 0 in pts:
        raise InvariantError("some delta_j is not an involution")
    perms = [rep.perm(w) for w in words]
    points = np.sort(orbit_of(0, perms, rep.degree))
    member = np.zeros(rep.degree, dtype=bool)
    member[points] = True
    for gen in list(ext.inner.words) + [ext.delta_word]:
        for w in words:
            if not member[rep.point(invert_word(gen) + w + gen)]:
                raise InvariantError("the polarities do not generate a normal subgroup")
    group = PermGroup(perms, degree=rep.degree, known_order=int(points.size))
    log("Medial", f"{len(words)} polarities generate a normal subgroup of order {points.size}")
    return PolaritySet(ext, words, points, group)


@dataclass(eq=False)
class CayleyGraph:
    graph: SymGraph
    points: np.ndarray
    index: np.ndarray

    def vertex_of(self, point: int) -> int:
        return int(self.index[point])


def cayley_graph(ps: PolaritySet) -> CayleyGraph:
    """g ~ h iff g h^-1 is some delta_j; vertices listed breadth-first from the identity."""
    rep = ps.ext.rep
    perms = [rep.perm(w) for w in ps.words]
    order, _, _ = bfs_tree(0, perms, rep.degree)
    index = np.full(rep.degree, -1, dtype=np.int64)
    index[order] = np.arange(order.size)
    edges = []
    for w in ps.words:
        left = rep.left_perm(w)
        edges.append(np.column_stack([index[order], index[left[order]]]))
    e = np.concatenate(edges)
    e = np.unique(np.sort(e, axis=1), axis=0)
    graph = SymGraph.from_edges(order.size, e, name="cayley")
    log("Medial", f"Cayley graph on {graph.n} vertices, valency {graph.valency()}")
    return CayleyGraph(graph, order, index)


# ── Covering map ──────────────────────────────────────────────────────────────

@dataclass
class CoveringData:
    nu: np.ndarray
    multiplicity: int
    m_value: int
    locally_injective: bool
    homomorphism: bool
    m_matches: bool
    twice_m_matches: bool

    def to_lines(self) -> List[str]:
        return [f"multiplicity={self.multiplicity}", f"m={self.m_value}",
                f"multiplicity_equals_m={str(self.m_matches).lower()}",
                f"multiplicity_equals_2m={str(self.twice_m_matches).lower()}"]


def _face_two_stabiliser(inner: _System, orientation: Orientation) -> List[Word]:
    if isinstance(inner, ReflectionSystem) and orientation == Orientation.NON_ORIENTABLY_REGULAR:
        return [inner.words[0], inner.words[1], inner.words[3]]
    sigma = inner.rotation_words() if isinstance(inner, ReflectionSystem) else inner.words
    return [sigma[0], free_reduce(sigma[1] + sigma[2])]


def check_covering_multiplicity(multiplicity: int, m_value: int, p: int, orientation: Orientation) -> None:
    """
    1 <= m <= 2p always. Directly-regular and chiral polytopes cover with
    multiplicity exactly m; non-orientably regular ones only get a warning
    when the multiplicity is neither m nor 2m.
    """
    if not 1 <= m_value <= 2 * p:
        raise InvariantError(f"|G meet Stab(F_2)| = {m_value} is outside 1..{2 * p}")
    if orientation == Orientation.NON_ORIENTABLY_REGULAR:
        if multiplicity not in (m_value, 2 * m_value):
            log("Medial", f"warning: covering multiplicity {multiplicity} differs from m = {m_value} and 2m")
        return
    if multiplicity != m_value:
        raise InvariantError(f"{orientation.value} polytope covers with multiplicity {multiplicity}, "
                             f"but m = {m_value}")


def covering_map(ps: PolaritySet, cg: CayleyGraph, lat: FaceLattice, mg: MedialGraph,
                 orientation: Orientation) -> CoveringData:
    """
    nu(g) = F_2 g. For g outside the polytope's group, g = delta x with x inside,
    and F_2 delta = F_1, so nu(g) is the 1-face through delta g.
    """
    ext = ps.ext
    inner = ext.inner
    if lat.system is not inner:
        raise PolymedialError("the lattice must be built from the extended group's inner system")
    rep = ext.rep
    a, b = mg.ranks
    pts = cg.points
    inside = np.zeros(rep.degree, dtype=bool)
    inside[inner.points] = True
    left_delta = rep.left_perm(ext.delta_word)
    nu = np.where(inside[pts],
                  mg.sizes[0] + lat.face_of[b][pts],
                  lat.face_of[a][left_delta[pts]])
    if np.any(nu < 0):
        raise InvariantError("covering map left the face lattice")

    edges = cg.graph.edges()
    images = nu[edges]
    keys = np.minimum(images[:, 0], images[:, 1]) * mg.graph.n + np.maximum(images[:, 0], images[:, 1])
    homomorphism = bool(np.all(np.isin(keys, mg.graph.edge_keys)))
    nbr_images = nu[cg.graph.indices].reshape(cg.graph.n, -1)
    sorted_images = np.sort(nbr_images, axis=1)
    locally_injective = bool(np.all(sorted_images[:, 1:] != sorted_images[:, :-1]))
    if not homomorphism:
        raise InvariantError("covering map sends a Cayley edge to a non-edge")
    fibres = np.bincount(nu, minlength=mg.graph.n)
    if np.any(fibres != fibres[0]):
        raise InvariantError(f"fibres of the covering map have sizes {sorted(set(fibres.tolist()))}")
    if not locally_injective:
        raise InvariantError("covering map is not injective on a neighbourhood")
    multiplicity = int(fibres[0])

    stab_pts = inner.subgroup_points(_face_two_stabiliser(inner, orientation))
    m_value = int(np.intersect1d(ps.points, stab_pts).size)
    check_covering_multiplicity(multiplicity, m_value, ext.p, orientation)
    data = CoveringData(nu, multiplicity, m_value, locally_injective, homomorphism,
                        multiplicity == m_value, multiplicity == 2 * m_value)
    log("Medial", f"covering of multiplicity {multiplicity}, m = {m_value}")
    return data


# ── Identities among the polarities ───────────────────────────────────────────

@dataclass
class IdentityReport:
    results: Dict[str, bool]
    d_reading: str

    @property
    def ok(self) -> bool:
        return all(v for k, v in self.results.items() if not k.startswith("d")) and self.d_reading != "neither"

    def to_lines(self) -> List[str]:
        lines = [f"identity.{k}={str(v).lower()}" for k, v in sorted(self.results.items())]
        lines.append(f"identity.d_reading={self.d_reading}")
        return lines


def verify_delta_identities(ext: ExtendedRotationGroup) -> IdentityReport:
    """
    Relations between the delta_j and the rotations, checked as equalities of
    group elements for every subscript mod p. The identity labelled d is
    tested both with a trailing delta_3^-1 and as conjugation by sigma_3.
    """
    if ext.p < 3:
        raise PolymedialError("the delta identities need p >= 3")
    p = ext.p
    s, dj, pt = ext.sigma, ext.delta_j, ext.point
    js = range(1, p + 1)

    def eq(lhs, rhs) -> bool:
        return pt(*lhs) == pt(*rhs)

    results = {
        "a": all(eq([dj(j + k)], [s(1, -k), dj(j), s(1, k)]) for j in js for k in range(p)),
        "b": all(eq([dj(j), dj(k)], [s(1, 1 - j), s(3, k - j), s(1, k - 1)]) for j in js for k in js),
        "c": eq([s(2, 2)], [dj(2), dj(3), dj(2), dj(1)]),
        "e": all(eq([s(3, -1), s(2, -1), dj(j), s(2), s(3)], [dj(3 - j)]) for j in js),
        "f": all(eq([s(2, -1), dj(j), s(2)], [dj(1), dj(2), dj(4 - j), dj(2), dj(1)]) and
                 eq([s(2), dj(j), s(2, -1)], [dj(2), dj(3), dj(4 - j), dj(3), dj(2)]) for j in js),
    }
    printed = all(eq([s(3), dj(j), invert_word(dj(3))], [dj(1), dj(2), dj(j + 1), dj(2), dj(1)]) for j in js)
    conjugation = all(eq([s(3), dj(j), s(3, -1)], [dj(1), dj(2), dj(j + 1), dj(2), dj(1)]) for j in js)
    results["d_printed"] = printed
    results["d_conjugation"] = conjugation
    reading = "both" if printed and conjugation else "printed" if printed else \
        "conjugation" if conjugation else "neither"
    report = IdentityReport(results, reading)
    log("Medial", f"delta identities: {report.results}, d holds as {reading}")
    return report


# ── Arc-transitivity consequences ─────────────────────────────────────────────

def cayley_two_arc_group(ps: PolaritySet, cg: CayleyGraph) -> Tuple[PermGroup, np.ndarray, np.ndarray, np.ndarray]:
    """
    h, p, a on the Cayley graph: conjugation by sigma_1, conjugation by
    sigma_1 sigma_2 sigma_3, right multiplication by delta.
    """
    ext = ps.ext
    rep = ext.rep
    pts = cg.points

    def conjugation(word: Word) -> np.ndarray:
        right = rep.perm(word)
        left_inv = rep.left_perm(invert_word(word))
        return cg.index[right[left_inv[pts]]]

    h = conjugation(ext.sigma(1))
    p = conjugation(free_reduce(ext.sigma(1) + ext.sigma(2) + ext.sigma(3)))
    a = cg.index[rep.perm(ext.delta_word)[pts]]
    if np.any(h < 0) or np.any(p < 0) or np.any(a < 0):
        raise InvariantError("conjugation left the polarity group")
    T = PermGroup([h, p, a], degree=cg.graph.n)
    return T, h, p, a


@dataclass
class TheoremChecks:
    medial: Optional[ArcReport] = None
    cayley: Optional[ArcReport] = None
    medial_matches_orientation: Optional[bool] = None
    medial_aut_is_extended_group: Optional[bool] = None
    cayley_not_above_medial: Optional[bool] = None
    cayley_two_arc_group_order: Optional[int] = None
    cayley_extends_to_3ar: Optional[bool] = None
    medial_group_order: Optional[int] = None
    medial_extends_to_3ar: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    def to_lines(self) -> List[str]:
        out = []
        for key in ("medial_matches_orientation", "medial_aut_is_extended_group", "cayley_not_above_medial",
                    "cayley_two_arc_group_order", "cayley_extends_to_3ar", "medial_group_order",
                    "medial_extends_to_3ar"):
            value = getattr(self, key)
            if value is not None:
                out.append(f"{key}={str(value).lower() if isinstance(value, bool) else value}")
        out.extend(f"note={n}" for n in self.notes)
        return out


def theorem_checks(sys: _System, orientation: Orientation, medial: ArcReport = None,
                   cayley: ArcReport = None, T: PermGroup = None, hpa=None) -> TheoremChecks:
    """
    For type {3,q,3}: the medial graph is 3-arc-regular for regular and
    2-arc-regular for chiral polytopes with |Aut| twice the group order;
    the Cayley graph is never more arc-regular than the medial graph; and a
    chiral polytope's Cayley graph has no 3-arc-regular extension.
    """
    checks = TheoremChecks(medial, cayley)
    full_order = sys.order * (2 if isinstance(sys, RotationSystem) and orientation != Orientation.CHIRAL else 1)
    if medial is not None and medial.s_regular is not None:
        want = 2 if orientation == Orientation.CHIRAL else 3
        checks.medial_matches_orientation = medial.s_regular == want
        if medial.aut_complete:
            checks.medial_aut_is_extended_group = medial.group_order == 2 * full_order
    if medial is not None and cayley is not None and medial.s_regular and cayley.s_regular:
        checks.cayley_not_above_medial = cayley.s_regular <= medial.s_regular
    if T is not None and hpa is not None:
        checks.cayley_two_arc_group_order = T.order()
        checks.cayley_extends_to_3ar = check_3ar_extension(T, *hpa)
        if orientation == Orientation.CHIRAL and checks.cayley_extends_to_3ar:
            checks.notes.append("chiral polytope with a 3-arc-regular extension on its Cayley graph")
    return checks


def medial_two_arc_substitute(lat: FaceLattice, duality: np.ndarray, mg: MedialGraph) -> TheoremChecks:
    """
    For medial graphs too large for a full automorphism search: the group of
    automorphisms and dualities must be 2-arc-regular on the graph, and the
    a -> ap extension must fail when the polytope is chiral.
    """
    group = extended_group_on_medial_graph(lat, duality, mg)
    report = arc_transitivity(mg.graph, group, s_cap=4)
    checks = TheoremChecks(medial=report)
    checks.medial_matches_orientation = report.s_regular == 2 and report.s_transitive == 2
    gens = two_arc_regular_generators(group, mg.graph)
    checks.medial_group_order = group.order()
    checks.medial_extends_to_3ar = check_3ar_extension(group, gens.h, gens.p, gens.a)
    return checks
