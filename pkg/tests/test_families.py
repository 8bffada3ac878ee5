"""
tests/test_families.py
The {6,q,6} and {4,6t,4} polytopes, Praeger-Xu graphs and the family claims.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import networkx as nx

from src.families.families import (FamilyClaims, FamilySpec, build_four_q_four, build_six_q_six, praeger_xu,
                                   praeger_xu_symmetries, praeger_xu_symmetry_order, six_q_six_expectations,
                                   verify_family_claims, verify_four_q_four_claims)
from src.graphs.graphsym import is_connected
from src.groups.permgroup import PermGroup
from src.polytope.lattice import build_face_lattice
from src.polytope.systems import Orientation, SelfDuality, classify_orientation, classify_self_duality


def test_family_spec_validation():
    assert FamilySpec("praeger_xu", (3, 6, 1)).label == "praeger_xu(3,6,1)"
    for family, params in [("six_q_six", (4,)), ("four_q_four", (0,)), ("praeger_xu", (2, 2, 1)),
                           ("praeger_xu", (3, 4, 4)), ("hexagons", (3,))]:
        try:
            FamilySpec(family, params)
        except ValueError:
            continue
        raise AssertionError(f"accepted {family}{params}")

def test_praeger_xu_small_cases():
    g = praeger_xu(2, 4, 1)
    assert g.n == 8 and g.valency() == 4
    assert nx.is_isomorphic(g.to_networkx(), nx.complete_bipartite_graph(4, 4))
    h = praeger_xu(3, 12, 2)
    assert h.n == 108 and h.valency() == 6
    assert is_connected(h)

def test_praeger_xu_symmetries_preserve_edges():
    for p, r, s in [(2, 4, 1), (2, 6, 2), (3, 6, 1), (3, 5, 3), (2, 12, 4)]:
        g = praeger_xu(p, r, s)
        assert all(g.preserves_edges(x) for x in praeger_xu_symmetries(p, r, s)), (p, r, s)

def test_praeger_xu_symmetry_group():
    p, r, s = 2, 4, 1
    group = PermGroup(praeger_xu_symmetries(p, r, s))
    assert group.order() == praeger_xu_symmetry_order(p, r) == 128
    assert group.is_transitive()
    assert praeger_xu_symmetry_order(3, 6) == 559872
    big = PermGroup(praeger_xu_symmetries(3, 6, 2), known_order=praeger_xu_symmetry_order(3, 6))
    assert big.is_transitive()

def test_six_q_six_polytope():
    sys_ = build_six_q_six(3)
    assert sys_.order == 216
    assert classify_orientation(sys_).orientation == Orientation.DIRECTLY_REGULAR
    assert classify_self_duality(sys_).kind == SelfDuality.PROPERLY
    assert build_face_lattice(sys_).f_vector == (6, 9, 9, 6)

def test_four_q_four_polytope():
    sys_ = build_four_q_four(1)
    assert sys_.order == 192
    assert tuple(sys_.schlafli) == (4, 6, 4)
    assert classify_orientation(sys_).orientation == Orientation.NON_ORIENTABLY_REGULAR

def test_expectation_formulas():
    want = six_q_six_expectations(3)
    assert want["medial_order"] == 18 and want["cayley_order"] == 108
    assert want["medial_aut_order"] == 559872
    assert want["medial_stabiliser_order"] == 31104
    assert want["cayley_aut_order"] == 52242776064
    assert want["cayley_stabiliser_order"] == 483729408
    assert six_q_six_expectations(9)["medial_aut_order"] == 3656158440062976

def test_six_q_six_graph_claims():
    claims = verify_family_claims(3, with_aut=False)
    assert claims.ok, claims.to_lines()
    keys = [c.key for c in claims.claims]
    assert "medial_is_C(3,2q,1)" in keys and "cayley_is_C(3,4q,2)" in keys
    assert "medial_aut_order" not in keys

def test_four_q_four_graph_claims():
    claims = verify_four_q_four_claims(1)
    assert claims.ok, claims.to_lines()
    lines = claims.to_lines()
    assert lines[0] == "family=four_q_four(1)"
    assert "medial_order=24" in lines and "cayley_order=192" in lines

def test_claim_lines_show_expected_on_mismatch():
    report = FamilyClaims(FamilySpec("six_q_six", (3,)))
    report.add("medial_order", 17, 18)
    report.add("cayley_order", 107, 108, asserted=False)
    assert not report.ok
    assert [c.key for c in report.mismatches] == ["medial_order"]
    assert report.to_lines() == ["family=six_q_six(3)", "medial_order=17", "medial_order.expected=18",
                                 "cayley_order=107"]

def test_six_q_six_automorphism_claims():
    claims = verify_family_claims(3, with_aut=True)
    assert claims.ok, claims.to_lines()
    values = {c.key: c.observed for c in claims.claims}
    assert values["medial_aut_order"] == 559872
    assert values["cayley_stabiliser_order"] == 483729408
    assert values["cayley_stabiliser_larger"] is True


if __name__ == "__main__":
    tests = [test_family_spec_validation, test_praeger_xu_small_cases, test_praeger_xu_symmetries_preserve_edges,
             test_praeger_xu_symmetry_group, test_six_q_six_polytope, test_four_q_four_polytope,
             test_expectation_formulas, test_six_q_six_graph_claims, test_four_q_four_graph_claims,
             test_claim_lines_show_expected_on_mismatch, test_six_q_six_automorphism_claims]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
