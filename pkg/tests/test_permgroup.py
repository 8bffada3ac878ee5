"""
tests/test_permgroup.py
Stabiliser chains, membership, intersection and generator-map extension.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.groups.fpgroup import RegularRep, parse_presentation
from src.groups.permgroup import (PermGroup, build_chain, compose, element_order, extend_generator_map, format_perm,
                                  intersect, inverse, membership, orbit, order, parse_perm, power)
from src.utils.errors import BudgetExceededError, InvariantError


def _s5():
    return PermGroup([parse_perm("(0 1 2 3 4)", 5), parse_perm("(0 1)", 5)])


def _d5():
    return PermGroup([parse_perm("(0 1 2 3 4)", 5), parse_perm("(1 4)(2 3)", 5)])


def test_perm_helpers():
    p = parse_perm("(0 1 2)(3 4)", 6)
    assert format_perm(p) == "(0 1 2)(3 4)"
    assert np.array_equal(parse_perm("[1, 2, 0, 4, 3, 5]", 6), p)
    assert element_order(p) == 6
    assert np.array_equal(compose(p, inverse(p)), np.arange(6))
    assert np.array_equal(power(p, 6), np.arange(6))
    assert np.array_equal(power(p, -1), inverse(p))

def test_compose_applies_left_first():
    p = parse_perm("(0 1)", 3)
    q = parse_perm("(1 2)", 3)
    assert compose(p, q)[0] == 2

def test_bad_perm_rejected():
    for text in ("[0, 0, 1]", "(0 1)(1 2)"):
        try:
            parse_perm(text, 3)
        except ValueError:
            continue
        raise AssertionError(f"accepted {text}")

def test_symmetric_and_alternating_orders():
    assert _s5().order() == 120
    a5 = PermGroup([parse_perm("(0 1 2)", 5), parse_perm("(2 3 4)", 5)])
    assert a5.order() == 60
    assert a5.is_transitive()

def test_membership():
    a5 = PermGroup([parse_perm("(0 1 2)", 5), parse_perm("(2 3 4)", 5)])
    assert a5.contains(parse_perm("(0 1)(2 3)", 5))
    assert not a5.contains(parse_perm("(0 1)", 5))

def test_known_order_randomised_chain():
    g = PermGroup([parse_perm("(0 1 2 3 4)", 5), parse_perm("(0 1)", 5)], known_order=120)
    assert g.order() == 120
    assert g.contains(parse_perm("(3 4)", 5))

def test_wrong_known_order_raises():
    g = PermGroup([parse_perm("(0 1 2 3 4)", 5)], known_order=10)
    try:
        g.order()
        g.levels
    except InvariantError:
        return
    raise AssertionError("expected InvariantError")

def test_elements_and_budget():
    d5 = _d5()
    elems = d5.elements()
    assert len({e.tobytes() for e in elems}) == 10
    try:
        _s5().elements(budget=50)
    except BudgetExceededError:
        return
    raise AssertionError("expected BudgetExceededError")

def test_stabiliser_levels():
    s5 = _s5()
    assert s5.level(1).order() == 24
    assert len(s5.transversal(0)) == 5

def test_chain_with_base_prefix():
    s4 = build_chain([parse_perm("(0 1 2 3)", 4), parse_perm("(0 1)", 4)], base=(3,))
    assert order(s4) == 24
    assert s4.base[0] == 3
    stab = s4.level(1)
    assert stab.order() == 6
    assert all(int(g[3]) == 3 for g in stab.gens)
    assert membership(parse_perm("(1 2)", 4), s4)
    assert sorted(orbit(2, s4).tolist()) == [0, 1, 2, 3]

def test_intersection_in_regular_action():
    rep = RegularRep.from_presentation(parse_presentation("gens a b c\ncoxeter 3 3"))
    assert rep.order == 24
    ab = PermGroup([rep.right(1), rep.right(2)])
    bc = PermGroup([rep.right(2), rep.right(3)])
    assert ab.order() == 6 and bc.order() == 6
    assert intersect(ab, bc).order() == 2

def test_extension_through_fiber_product():
    d5 = _d5()
    c, f = d5.generators
    witness = extend_generator_map(d5, [power(c, 2), f])
    assert witness is not None
    assert witness.is_automorphism()
    assert np.array_equal(witness.apply(power(c, 3)), power(c, 6))
    assert extend_generator_map(d5, [f, c]) is None

def test_extension_by_point_labels():
    rep = RegularRep.from_presentation(parse_presentation("gens c f\nrel c^5; rel f^2; rel (c f)^2"))
    group = PermGroup([rep.right(1), rep.right(2)])
    c, f = group.generators
    witness = extend_generator_map(group, [power(c, 2), compose(f, c)])
    assert witness is not None and witness.labels is not None
    assert witness.is_automorphism()
    assert not witness.is_involution()
    assert extend_generator_map(group, [f, c]) is None


if __name__ == "__main__":
    tests = [test_perm_helpers, test_compose_applies_left_first, test_bad_perm_rejected,
             test_symmetric_and_alternating_orders, test_membership, test_known_order_randomised_chain,
             test_wrong_known_order_raises, test_elements_and_budget, test_stabiliser_levels,
             test_chain_with_base_prefix,
             test_intersection_in_regular_action, test_extension_through_fiber_product,
             test_extension_by_point_labels]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
