"""
tests/test_fpgroup.py
Presentation parsing, coset enumeration and the regular representation.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.groups.fpgroup import (RegularRep, coset_enumerate, cyclic_reduce, evaluate_word, free_reduce,
                                invert_word, parse_presentation, perm_rep)
from src.groups.permgroup import element_order
from src.utils.errors import EnumerationLimitError, PresentationSyntaxError


SIMPLEX = """
# string Coxeter group of the 4-simplex
gens r0 r1 r2 r3
coxeter 3 3 3
"""

CELL24 = "gens r0 r1 r2 r3; coxeter 3 4 3"


def _syntax_error(text):
    try:
        parse_presentation(text)
    except PresentationSyntaxError as e:
        return e
    raise AssertionError("expected PresentationSyntaxError")


def test_word_reduction():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert invert_word((1, -2, 3)) == (-3, 2, -1)

def test_coxeter_statement():
    pres = parse_presentation(SIMPLEX)
    assert pres.generators == ("r0", "r1", "r2", "r3")
    assert (1, 1) in pres.relators
    assert (1, 2) * 3 in pres.relators
    assert (1, 3) * 2 in pres.relators

def test_simplex_order():
    rep = RegularRep.from_presentation(parse_presentation(SIMPLEX))
    assert rep.order == 120

def test_24_cell_order():
    rep = RegularRep.from_presentation(parse_presentation(CELL24))
    assert rep.order == 1152

def test_rotation_statement_and_relation_forms():
    a = parse_presentation("gens s1 s2 s3\nrotation 3 3 3")
    b = parse_presentation("""
gens s1 s2 s3
rel s1^3; rel s2^3; rel s3^3
rel (s1*s2)^2
rel (s2 s3)^2
rel s1 s2 s3 = (s1 s2 s3)^-1
""")
    assert RegularRep.from_presentation(a).order == 60
    assert RegularRep.from_presentation(b).order == 60

def test_commutator_and_identity_atom():
    pres = parse_presentation("gens a b\nrel a^4; rel b^2; rel [a, b] = 1")
    assert RegularRep.from_presentation(pres).order == 8

def test_generator_orders():
    rep = RegularRep.from_presentation(parse_presentation(CELL24))
    assert [element_order(rep.right(i)) for i in range(1, 5)] == [2, 2, 2, 2]
    assert element_order(rep.perm((2, 3))) == 4

def test_syntax_error_positions():
    e = _syntax_error("gens a b\nrel a^0")
    assert (e.line, e.column) == (2, 7)
    e = _syntax_error("gens a\nrel a*b")
    assert (e.line, e.column) == (2, 7)
    assert "unknown generator" in str(e)

def test_syntax_errors():
    assert "'gens' must come first" in str(_syntax_error("rel a"))
    assert "missing 'gens'" in str(_syntax_error("# nothing here"))
    assert "periods" in str(_syntax_error("gens a b c\ncoxeter 3"))
    assert _syntax_error("gens a\nrel (a").line == 2
    assert _syntax_error("gens a\nfrobnicate a").column == 1

def test_enumeration_limit():
    try:
        RegularRep.from_presentation(parse_presentation(CELL24), limit=100)
    except EnumerationLimitError as e:
        assert e.limit == 100
    else:
        raise AssertionError("expected EnumerationLimitError")

def test_subgroup_cosets():
    pres = parse_presentation(SIMPLEX)
    table = coset_enumerate(pres, subgroup=[(1,), (2,), (3,)])
    assert table.shape == (5, 8)
    gens = perm_rep(table)
    assert all(sorted(p.tolist()) == list(range(5)) for p in gens)

def test_relators_act_trivially_on_cosets():
    pres = parse_presentation(SIMPLEX)
    perms = perm_rep(coset_enumerate(pres, subgroup=[(1,), (2,)]))
    assert len(perms[0]) == 20
    ident = np.arange(20)
    for rel in pres.relators:
        assert np.array_equal(evaluate_word(perms, rel), ident), rel
    assert np.array_equal(evaluate_word(perms, (4, -4)), ident)
    assert evaluate_word(perms, (4,))[0] != 0

def test_regular_rep_words_and_left_action():
    rep = RegularRep.from_presentation(parse_presentation(SIMPLEX))
    for x in (0, 7, 63, 119):
        assert rep.point(rep.word_of(x)) == x
    w = (1, 2, 4)
    x = rep.point((3, 2))
    left = rep.left_perm(w)
    assert left[x] == rep.point(w + (3, 2))
    right = rep.perm(w)
    assert right[0] == rep.point(w)
    assert np.array_equal(left[right], right[left])

def test_from_permutations():
    cycle = np.array([1, 2, 3, 4, 0])
    flip = np.array([0, 4, 3, 2, 1])
    rep = RegularRep.from_permutations(["c", "f"], [cycle, flip])
    assert rep.order == 10


if __name__ == "__main__":
    tests = [test_word_reduction, test_coxeter_statement, test_simplex_order, test_24_cell_order,
             test_rotation_statement_and_relation_forms, test_commutator_and_identity_atom,
             test_generator_orders, test_syntax_error_positions, test_syntax_errors,
             test_enumeration_limit, test_subgroup_cosets, test_relators_act_trivially_on_cosets,
             test_regular_rep_words_and_left_action,
             test_from_permutations]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
