"""
src/families/families.py
Infinite families: self-dual regular polytopes of types {6,q,6} and
{4,6t,4}, the Praeger-Xu graphs C(p,r,s), and the checks that compare the
medial layer and Cayley graphs of the {6,q,6} family with them.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from src.graphs.automorphism import automorphism_group, isomorphic
from src.graphs.graphsym import SymGraph
from src.groups.fpgroup import parse_presentation
from src.medial.medial import build_extended_rotation_group, cayley_graph, medial_layer_graph, polarity_set
from src.polytope.lattice import build_face_lattice
from src.polytope.systems import (Orientation, ReflectionSystem, SelfDuality, build_reflection_system,
                                  classify_orientation, classify_self_duality,
                                  require_intersection_conditions)
from src.utils.errors import InvariantError
from src.utils.log import log


FAMILIES = ("six_q_six", "four_q_four", "praeger_xu")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: Tuple[int, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.family == "six_q_six":
            (q,) = self.params
            if q < 3 or q % 3:
                raise ValueError(f"{{6,q,6}} needs q a positive multiple of 3, got {q}")
        elif self.family == "four_q_four":
            (t,) = self.params
            if t < 1:
                raise ValueError(f"{{4,6t,4}} needs t >= 1, got {t}")
        else:
            p, r, s = self.params
            if p < 2 or r < 3 or not 1 <= s < r:
                raise ValueError(f"C(p,r,s) needs p >= 2, r >= 3 and 1 <= s < r, got ({p},{r},{s})")

    @property
    def label(self) -> str:
        return f"{self.family}({','.join(map(str, self.params))})"


# ── Polytope families ─────────────────────────────────────────────────────────

def six_q_six_presentation(q: int) -> str:
    """[6,inf,6] with two extra relations; (x2 x3)^q cuts it down to order 72q."""
    return ("gens x1 x2 x3 x4\n"
            "coxeter 6 inf 6\n"
            "rel ((x1*x2)^2*x3)^2\n"
            "rel ((x3*x4)^2*x2)^2\n"
            f"rel (x2*x3)^{q}\n")


def four_q_four_presentation(t: int) -> str:
    tail = f"*(x2*x3)^{3 * t - 3}" if t > 1 else ""
    return ("gens x1 x2 x3 x4\n"
            f"coxeter 4 {6 * t} 4\n"
            "rel [x1, x2*x3*x2*x3*x2]\n"
            "rel [x4, x3*x2*x3*x2*x3]\n"
            "rel (x2*x1*x2*x3*x4*x3)^2\n"
            "rel x1*x2*x3*(x1*x2)^2*x4*x3*x2*(x3*x4)^2\n"
            f"rel (x1*x2*x3)^3{tail}\n")


def build_six_q_six(q: int, limit: int = 2_000_000) -> ReflectionSystem:
    FamilySpec("six_q_six", (q,))
    pres = parse_presentation(six_q_six_presentation(q))
    sys = build_reflection_system(pres, (6, q, 6), limit=limit)
    if sys.order != 72 * q:
        raise InvariantError(f"{{6,{q},6}} group has order {sys.order}, expected {72 * q}")
    require_intersection_conditions(sys)
    return sys


def build_four_q_four(t: int, limit: int = 2_000_000) -> ReflectionSystem:
    FamilySpec("four_q_four", (t,))
    pres = parse_presentation(four_q_four_presentation(t))
    sys = build_reflection_system(pres, (4, 6 * t, 4), limit=limit)
    require_intersection_conditions(sys)
    log("Families", f"{{4,{6 * t},4}}: group order {sys.order}")
    return sys


# ── Praeger-Xu graphs ─────────────────────────────────────────────────────────

def _strings(p: int, s: int) -> np.ndarray:
    return np.array(list(itertools.product(range(p), repeat=s)), dtype=np.int64).reshape(-1, s)


def praeger_xu(p: int, r: int, s: int) -> SymGraph:
    """
    Vertices (i, v) with i in Z_r and v a word of length s over Z_p, numbered
    i * p^s + (v read in base p); (i, v_1..v_s) ~ (i+1, v_2..v_s u).
    """
    FamilySpec("praeger_xu", (p, r, s))
    width = p ** s
    codes = np.arange(width, dtype=np.int64)
    shifted = (codes * p) % width
    edges = []
    for i in range(r):
        for u in range(p):
            edges.append(np.column_stack([i * width + codes, ((i + 1) % r) * width + shifted + u]))
    graph = SymGraph.from_edges(r * width, np.concatenate(edges), name=f"C({p},{r},{s})")
    if graph.valency() != 2 * p:
        raise InvariantError(f"C({p},{r},{s}) has valency {graph.valency()}, expected {2 * p}")
    return graph


def _fibre_map(p: int, r: int, s: int, j: int, pi: np.ndarray) -> np.ndarray:
    """Apply pi to every letter sitting at cycle position j; letter k of (i, v) sits at i + k."""
    width = p ** s
    words = _strings(p, s)
    weights = p ** np.arange(s - 1, -1, -1, dtype=np.int64)
    out = np.empty(r * width, dtype=np.int64)
    for i in range(r):
        w = words.copy()
        for k in range(s):
            if (i + k) % r == j:
                w[:, k] = pi[w[:, k]]
        out[i * width:(i + 1) * width] = i * width + w @ weights
    return out


def praeger_xu_symmetries(p: int, r: int, s: int) -> List[np.ndarray]:
    """
    The rotation (i, v) -> (i+1, v), the reflection (i, v) -> (-i, v reversed)
    and permutations of the letters at cycle position 0. Together they
    generate S_p wr D_r, of order 2r(p!)^r, which is transitive on vertices.
    """
    width = p ** s
    words = _strings(p, s)
    weights = p ** np.arange(s - 1, -1, -1, dtype=np.int64)
    reversed_codes = words[:, ::-1] @ weights
    layers = np.repeat(np.arange(r, dtype=np.int64), width)
    codes = np.tile(np.arange(width, dtype=np.int64), r)
    rotation = ((layers + 1) % r) * width + codes
    # (i, v_1..v_s) -> (-(i + s - 1), v_s..v_1) keeps every letter's position up to sign
    reflection = ((-(layers + s - 1)) % r) * width + reversed_codes[codes]
    cycle = np.roll(np.arange(p, dtype=np.int64), -1)
    gens = [rotation, reflection, _fibre_map(p, r, s, 0, cycle)]
    if p > 2:
        swap = np.arange(p, dtype=np.int64)
        swap[[0, 1]] = [1, 0]
        gens.append(_fibre_map(p, r, s, 0, swap))
    return gens


def praeger_xu_symmetry_order(p: int, r: int) -> int:
    return 2 * r * math.factorial(p) ** r


# ── Claims about the {6,q,6} family ───────────────────────────────────────────

@dataclass
class Claim:
    key: str
    observed: object
    expected: object
    asserted: bool = True

    @property
    def holds(self) -> bool:
        return self.observed == self.expected


@dataclass
class FamilyClaims:
    spec: FamilySpec
    claims: List[Claim] = field(default_factory=list)

    def add(self, key: str, observed, expected, asserted: bool = True) -> None:
        self.claims.append(Claim(key, observed, expected, asserted))

    @property
    def mismatches(self) -> List[Claim]:
        return [c for c in self.claims if c.asserted and not c.holds]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_lines(self) -> List[str]:
        lines = [f"family={self.spec.label}"]
        for c in self.claims:
            lines.append(f"{c.key}={_fmt(c.observed)}")
            if c.asserted and not c.holds:
                lines.append(f"{c.key}.expected={_fmt(c.expected)}")
        return lines


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    return "none" if value is None else str(value)


def six_q_six_expectations(q: int) -> dict:
    return {
        "medial_order": 6 * q,
        "cayley_order": 36 * q,
        "medial_aut_order": 2 ** (2 * q + 2) * 3 ** (2 * q) * q,
        "cayley_aut_order": 2 ** (4 * q + 3) * 3 ** (4 * q) * q,
        "medial_stabiliser_order": 2 ** (2 * q + 1) * 3 ** (2 * q - 1),
        "cayley_stabiliser_order": 2 ** (4 * q + 1) * 3 ** (4 * q - 2),
    }


def _graphs_of(sys: ReflectionSystem, limit: int):
    duality = classify_self_duality(sys)
    if duality.kind != SelfDuality.PROPERLY:
        raise InvariantError(f"{sys.schlafli} polytope is {duality.kind.value}")
    ext = build_extended_rotation_group(sys, duality, limit=limit)
    lat = build_face_lattice(ext.inner)
    mg = medial_layer_graph(lat)
    cg = cayley_graph(polarity_set(ext))
    return lat, mg, cg


def six_q_six_graph_claims(report: FamilyClaims, q: int, medial: SymGraph, cayley: SymGraph,
                           medial_aut: int = None, cayley_aut: int = None, timeout: float = 600.0) -> None:
    """
    Claims about the two graphs of the {6,q,6} polytope. Automorphism orders
    come from the caller (None skips them); both graphs are vertex-transitive,
    so a stabiliser has order |Aut| / |V|.
    """
    want = six_q_six_expectations(q)
    asserted = q % 2 == 1
    report.add("medial_order", medial.n, want["medial_order"], asserted)
    report.add("cayley_order", cayley.n, want["cayley_order"], asserted)
    report.add("medial_is_C(3,2q,1)", isomorphic(medial, praeger_xu(3, 2 * q, 1), timeout=timeout) is not None,
               True, asserted)
    report.add("cayley_is_C(3,4q,2)", isomorphic(cayley, praeger_xu(3, 4 * q, 2), timeout=timeout) is not None,
               True, asserted)
    if medial_aut is None or cayley_aut is None:
        return
    medial_stab, cayley_stab = medial_aut // medial.n, cayley_aut // cayley.n
    report.add("medial_aut_order", medial_aut, want["medial_aut_order"], asserted)
    report.add("cayley_aut_order", cayley_aut, want["cayley_aut_order"], asserted)
    report.add("medial_stabiliser_order", medial_stab, want["medial_stabiliser_order"], asserted)
    report.add("cayley_stabiliser_order", cayley_stab, want["cayley_stabiliser_order"], asserted)
    report.add("cayley_stabiliser_larger", cayley_stab > medial_stab, True)


def verify_family_claims(q: int, with_aut: bool = True, limit: int = 2_000_000,
                         timeout: float = 600.0) -> FamilyClaims:
    """
    Orders of the medial layer and Cayley graphs of the {6,q,6} polytope,
    their isomorphism types among the Praeger-Xu graphs and, with `with_aut`,
    the orders of their automorphism groups and vertex stabilisers. The
    formulas are asserted for odd q and only recorded for even q.
    """
    spec = FamilySpec("six_q_six", (q,))
    report = FamilyClaims(spec)

    sys = build_six_q_six(q, limit=limit)
    report.add("group_order", sys.order, 72 * q)
    report.add("orientation", classify_orientation(sys).orientation.value, Orientation.DIRECTLY_REGULAR.value)
    lat, mg, cg = _graphs_of(sys, limit)
    report.add("f_vector_palindromic", lat.f_vector == lat.f_vector[::-1], True)

    medial_aut = cayley_aut = None
    if with_aut:
        aut_g = automorphism_group(mg.graph, timeout=timeout)
        aut_c = automorphism_group(cg.graph, timeout=timeout)
        report.add("aut_complete", aut_g.complete and aut_c.complete, True)
        if aut_g.complete and aut_c.complete:
            medial_aut, cayley_aut = aut_g.order, aut_c.order
    six_q_six_graph_claims(report, q, mg.graph, cg.graph, medial_aut, cayley_aut, timeout)

    log("Families", f"{spec.label}: {len(report.claims)} claims, {len(report.mismatches)} mismatches")
    return report


def verify_four_q_four_claims(t: int, limit: int = 2_000_000, timeout: float = 600.0) -> FamilyClaims:
    """The {4,6t,4} medial layer and Cayley graphs against C(2,q,2) and C(2,2q,4), q = 6t."""
    spec = FamilySpec("four_q_four", (t,))
    q = 6 * t
    report = FamilyClaims(spec)
    sys = build_four_q_four(t, limit=limit)
    report.add("group_order", sys.order, 32 * q)
    report.add("orientation", classify_orientation(sys).orientation.value,
               Orientation.NON_ORIENTABLY_REGULAR.value)
    _, mg, cg = _graphs_of(sys, limit)
    report.add("medial_order", mg.graph.n, 4 * q)
    report.add("cayley_order", cg.graph.n, 32 * q)
    report.add("medial_is_C(2,q,2)", isomorphic(mg.graph, praeger_xu(2, q, 2), timeout=timeout) is not None, True)
    report.add("cayley_is_C(2,2q,4)", isomorphic(cg.graph, praeger_xu(2, 2 * q, 4), timeout=timeout) is not None,
               True)
    log("Families", f"{spec.label}: {len(report.mismatches)} mismatches")
    return report

