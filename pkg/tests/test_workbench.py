"""
tests/test_workbench.py
The MedialWorkbench facade.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from polymedial import MedialWorkbench
from src.graphs.graphsym import petersen_graph

SIMPLEX_TEXT = "gens s1 s2 s3\nrotation 3 3 3\n"


def test_workbench_reads_project_config():
    bench = MedialWorkbench()
    assert bench.run.coset_limit == 2000000
    assert not bench.run.deep
    assert MedialWorkbench(deep=True).run.deep

def test_group_and_polytope():
    bench = MedialWorkbench()
    assert bench.group(SIMPLEX_TEXT).order == 60
    assert bench.polytope(SIMPLEX_TEXT, (3, 3, 3)).order == 60
    assert bench.polytope("gens r0 r1 r2 r3\ncoxeter 3 3 3\n", (3, 3, 3), kind="reflection").order == 120

def test_pipeline_and_graphs():
    bench = MedialWorkbench()
    report = bench.pipeline(SIMPLEX_TEXT, (3, 3, 3), upto="polytope")
    assert report.status == "ok"
    assert report.values["lattice.f_vector"] == "5,10,10,5"
    assert bench.analyze_graph(petersen_graph()).group_order == 120
    assert bench.praeger_xu(2, 4, 1).n == 8

def test_catalog_access():
    bench = MedialWorkbench()
    assert "simplex-4" in bench.presets()
    try:
        bench.run_preset("no-such-preset")
    except KeyError:
        return
    raise AssertionError("expected KeyError")


if __name__ == "__main__":
    tests = [test_workbench_reads_project_config, test_group_and_polytope, test_pipeline_and_graphs,
             test_catalog_access]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
