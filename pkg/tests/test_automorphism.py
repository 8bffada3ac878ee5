"""
tests/test_automorphism.py
Automorphism group orders against brute force and known values, and the
isomorphism search.
"""

import sys, os, itertools
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.graphs.automorphism import automorphism_group, isomorphic
from src.graphs.graphsym import (FIXTURES, SymGraph, complete_bipartite, complete_graph, cube_graph, cycle_graph,
                                 desargues_graph, generalized_petersen, heawood_graph, petersen_graph)
from src.utils.errors import GraphFormatError


def _brute_force_order(g):
    return sum(1 for p in itertools.permutations(range(g.n)) if g.preserves_edges(np.array(p)))


def test_small_graphs_against_brute_force():
    for g in (complete_graph(4), complete_bipartite(3, 3), cycle_graph(6), cube_graph()):
        aut = automorphism_group(g)
        assert aut.complete
        assert aut.order == _brute_force_order(g), g

def test_known_orders():
    expected = {"K4": 24, "K3,3": 72, "C6": 12, "cube": 48, "petersen": 120, "desargues": 240, "heawood": 336}
    for name, make in FIXTURES.items():
        assert automorphism_group(make()).order == expected[name], name

def test_generators_are_automorphisms():
    g = desargues_graph()
    aut = automorphism_group(g)
    assert aut.generators
    assert all(g.preserves_edges(p) for p in aut.generators)
    assert aut.orbit_sizes[0] == 20
    assert aut.vertex_stabiliser_order == 12

def test_colours_restrict_the_group():
    g = cycle_graph(6)
    colors = np.array([1, 0, 0, 0, 0, 0])
    assert automorphism_group(g, colors=colors).order == 2

def test_disconnected_graph_rejected():
    try:
        automorphism_group(SymGraph.from_edges(4, [(0, 1), (2, 3)]))
    except GraphFormatError:
        return
    raise AssertionError("expected GraphFormatError")

def test_isomorphic_relabelled_graph():
    g = heawood_graph()
    perm = np.random.default_rng(11).permutation(g.n)
    h = g.relabel(perm)
    gamma = isomorphic(g, h)
    assert gamma is not None
    assert g.preserves_edges(gamma, h)

def test_non_isomorphic_cubic_graphs():
    # the pentagonal prism has the Petersen graph's size and valency
    assert isomorphic(petersen_graph(), generalized_petersen(5, 1)) is None
    assert isomorphic(desargues_graph(), generalized_petersen(10, 1)) is None
    assert isomorphic(complete_graph(4), cycle_graph(4)) is None


if __name__ == "__main__":
    tests = [test_small_graphs_against_brute_force, test_known_orders, test_generators_are_automorphisms,
             test_colours_restrict_the_group, test_disconnected_graph_rejected, test_isomorphic_relabelled_graph,
             test_non_isomorphic_cubic_graphs]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
