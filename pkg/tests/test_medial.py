"""
tests/test_medial.py
Medial layer graphs, the extended group, the polarity Cayley graph and its
covering of the medial layer graph, on the 4-simplex and the 24-cell.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.graphs.arcs import analyze_graph
from src.graphs.automorphism import isomorphic
from src.graphs.graphsym import desargues_graph, girth, is_bipartite
from src.groups.fpgroup import parse_presentation
from src.medial.medial import (build_extended_rotation_group, cayley_graph, cayley_two_arc_group,
                               check_covering_multiplicity, covering_map, extended_group_on_medial_graph,
                               medial_layer_graph, medial_two_arc_substitute, polarity_set, theorem_checks,
                               verify_delta_identities)
from src.polytope.lattice import base_duality, build_face_lattice
from src.polytope.systems import (Orientation, build_rotation_system, classify_orientation,
                                  classify_self_duality)
from src.utils.errors import DualityError, InvariantError, PolymedialError


def _pipeline(text, schlafli):
    sys_ = build_rotation_system(parse_presentation(text), schlafli)
    witness = classify_self_duality(sys_)
    ext = build_extended_rotation_group(sys_, witness)
    ps = polarity_set(ext)
    cg = cayley_graph(ps)
    lat = build_face_lattice(ext.inner)
    mg = medial_layer_graph(lat)
    return sys_, witness, ext, ps, cg, lat, mg


def test_simplex_medial_graph_is_desargues():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 3 3 3"), (3, 3, 3))
    lat = build_face_lattice(sys_)
    mg = medial_layer_graph(lat)
    assert mg.ranks == (1, 2)
    assert mg.sizes == (10, 10)
    assert mg.graph.valency() == 3
    assert girth(mg.graph) == 6 and is_bipartite(mg.graph)
    assert isomorphic(mg.graph, desargues_graph()) is not None
    assert mg.labels()[0] == "part=1" and mg.labels()[-1] == "part=2"

def test_simplex_medial_certificate():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 3 3 3"), (3, 3, 3))
    lat = build_face_lattice(sys_)
    report = analyze_graph(medial_layer_graph(lat).graph)
    assert report.s_regular == 3
    assert report.group_order == 240
    assert report.dm_class == "3"

def test_extended_group_acts_on_medial_graph():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 3 3 3"), (3, 3, 3))
    lat = build_face_lattice(sys_)
    mg = medial_layer_graph(lat)
    D = base_duality(lat, classify_self_duality(sys_))
    group = extended_group_on_medial_graph(lat, D, mg)
    assert group.order() == 120
    assert all(mg.graph.preserves_edges(g) for g in group.gens)
    checks = medial_two_arc_substitute(lat, D, mg)
    assert checks.medial_group_order == 120
    assert checks.medial.s_regular == 2

def test_simplex_extended_group_and_cayley_graph():
    sys_, _, ext, ps, cg, lat, mg = _pipeline("gens s1 s2 s3\nrotation 3 3 3", (3, 3, 3))
    assert ext.order == 120
    assert ext.p == 3
    assert len(ps.words) == 3
    assert ps.order == 120
    assert cg.graph.n == 120 and cg.graph.valency() == 3
    assert cg.vertex_of(0) == 0
    report = analyze_graph(cg.graph)
    assert report.s_regular == 2
    assert report.group_order == 720

def test_simplex_covering_map():
    sys_, _, ext, ps, cg, lat, mg = _pipeline("gens s1 s2 s3\nrotation 3 3 3", (3, 3, 3))
    data = covering_map(ps, cg, lat, mg, Orientation.DIRECTLY_REGULAR)
    assert data.homomorphism and data.locally_injective
    assert data.multiplicity == 6
    assert data.m_value == 6 and data.m_matches
    assert data.to_lines()[0] == "multiplicity=6"

def test_covering_needs_the_inner_lattice():
    sys_, _, ext, ps, cg, _, _ = _pipeline("gens s1 s2 s3\nrotation 3 3 3", (3, 3, 3))
    lat = build_face_lattice(sys_)
    try:
        covering_map(ps, cg, lat, medial_layer_graph(lat), Orientation.DIRECTLY_REGULAR)
    except PolymedialError:
        return
    raise AssertionError("expected PolymedialError")

def test_covering_multiplicity_must_equal_m():
    check_covering_multiplicity(6, 6, 3, Orientation.DIRECTLY_REGULAR)
    check_covering_multiplicity(8, 4, 4, Orientation.NON_ORIENTABLY_REGULAR)
    check_covering_multiplicity(5, 4, 4, Orientation.NON_ORIENTABLY_REGULAR)
    bad = [(12, 6, 3, Orientation.DIRECTLY_REGULAR), (6, 3, 3, Orientation.CHIRAL),
           (7, 7, 3, Orientation.DIRECTLY_REGULAR), (12, 12, 4, Orientation.NON_ORIENTABLY_REGULAR),
           (1, 0, 3, Orientation.CHIRAL)]
    for multiplicity, m, p, orientation in bad:
        try:
            check_covering_multiplicity(multiplicity, m, p, orientation)
        except InvariantError:
            continue
        raise AssertionError(f"accepted multiplicity {multiplicity} with m = {m}, p = {p}")

def test_delta_identities_hold():
    _, _, ext, _, _, _, _ = _pipeline("gens s1 s2 s3\nrotation 3 3 3", (3, 3, 3))
    report = verify_delta_identities(ext)
    assert report.ok
    assert all(report.results[k] for k in "abcef")
    assert report.d_reading in ("printed", "conjugation", "both")

def test_24_cell_medial_and_cayley_graphs_agree():
    sys_, witness, ext, ps, cg, lat, mg = _pipeline("gens s1 s2 s3\nrotation 3 4 3", (3, 4, 3))
    assert ext.order == 1152
    assert mg.graph.n == 192 and cg.graph.n == 192
    assert isomorphic(mg.graph, cg.graph) is not None
    medial = analyze_graph(mg.graph)
    assert medial.s_regular == 3 and medial.group_order == 2304
    data = covering_map(ps, cg, lat, mg, Orientation.DIRECTLY_REGULAR)
    assert data.multiplicity == 1
    cayley = analyze_graph(cg.graph)
    T, h, p, a = cayley_two_arc_group(ps, cg)
    orientation = classify_orientation(sys_).orientation
    checks = theorem_checks(sys_, orientation, medial, cayley, T, (h, p, a))
    assert checks.medial_matches_orientation
    assert checks.medial_aut_is_extended_group
    assert checks.cayley_not_above_medial
    assert checks.cayley_extends_to_3ar

def test_odd_rank_has_no_medial_graph():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2\nrotation 4 3"), (4, 3))
    try:
        medial_layer_graph(build_face_lattice(sys_))
    except PolymedialError as e:
        assert "even rank" in str(e)
    else:
        raise AssertionError("expected PolymedialError")

def test_no_extension_without_polarity():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 4 3 3"), (4, 3, 3))
    try:
        build_extended_rotation_group(sys_, classify_self_duality(sys_))
    except DualityError:
        return
    raise AssertionError("expected DualityError")


if __name__ == "__main__":
    tests = [test_simplex_medial_graph_is_desargues, test_simplex_medial_certificate,
             test_extended_group_acts_on_medial_graph, test_simplex_extended_group_and_cayley_graph,
             test_simplex_covering_map, test_covering_needs_the_inner_lattice,
             test_covering_multiplicity_must_equal_m, test_delta_identities_hold,
             test_24_cell_medial_and_cayley_graphs_agree, test_odd_rank_has_no_medial_graph,
             test_no_extension_without_polarity]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
