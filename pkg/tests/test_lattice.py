"""
tests/test_lattice.py
Face lattices built from coset geometry, their validation, and duality
enumeration.
"""

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.groups.fpgroup import parse_presentation
from src.polytope.lattice import (base_duality, build_face_lattice, enumerate_dualities, normal_closure_scan,
                                  validate_polytope)
from src.polytope.systems import build_reflection_system, build_rotation_system, classify_self_duality

EXAMPLE_B = """
gens s1 s2 s3
rotation 3 18 3
rel s2^5*s1*s2^-2*s1*s2^-1*s1*s2^-4*s1
rel (s2^-1*s3*s1*s2^-1*s3^-1*s1*s2^-1*s1)^2
rel s2^2*s1^-1*s3*s2*s1*s2^-1*s3*s2^2*s1^-1*s3*s2*s1^-1*s2*s1^-1
"""


def _simplex():
    return build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 3 3 3"), (3, 3, 3))


def test_simplex_face_lattice():
    lat = build_face_lattice(_simplex())
    assert lat.f_vector == (5, 10, 10, 5)
    assert lat.count_flags() == 120
    assert len(lat.flags()) == 120
    report = validate_polytope(lat)
    assert report.ok
    assert not report.sampled

def test_reflection_and_rotation_lattices_agree():
    refl = build_reflection_system(parse_presentation("gens r0 r1 r2 r3\ncoxeter 3 3 3"), (3, 3, 3))
    a = build_face_lattice(refl)
    b = build_face_lattice(_simplex())
    assert a.f_vector == b.f_vector
    assert [len(p) for p in a.incidence] == [len(p) for p in b.incidence]

def test_24_cell_face_lattice():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 3 4 3"), (3, 4, 3))
    lat = build_face_lattice(sys_)
    assert lat.f_vector == (24, 96, 96, 24)
    report = validate_polytope(lat)
    assert report.ok and report.flag_count == 1152

def test_missing_incidence_breaks_diamond():
    lat = build_face_lattice(_simplex())
    a, b = lat.incidence[0][0].tolist()
    broken = lat.remove_incidence(0, a, b)
    report = validate_polytope(broken)
    assert not report.diamond
    assert not report.ok
    assert f"edge {b}" in report.violation

def test_sampled_sections_still_pass():
    lat = build_face_lattice(_simplex())
    report = validate_polytope(lat, exhaustive_flag_limit=10, flag_samples=30)
    assert report.sampled
    assert report.ok

def test_export_lines():
    lat = build_face_lattice(_simplex())
    lines = lat.export_lines()
    assert lines[0] == "rank 4"
    assert lines[1] == "f_vector 5 10 10 5"
    assert "incidence 0 1 20" in lines

def test_simplex_dualities():
    sys_ = _simplex()
    lat = build_face_lattice(sys_)
    witness = classify_self_duality(sys_)
    D = base_duality(lat, witness)
    offsets = lat.offsets
    assert sorted(D.tolist()) == list(range(lat.face_count))
    assert set(D[:5].tolist()) == set(range(offsets[3], offsets[3] + 5))
    report = enumerate_dualities(lat, witness)
    assert report.total == 60
    assert report.polarity_exists
    assert report.square_preserves_order
    assert all(k % 2 == 0 for k in report.order_histogram)

def test_not_self_dual_has_no_dualities():
    sys_ = build_rotation_system(parse_presentation("gens s1 s2 s3\nrotation 4 3 3"), (4, 3, 3))
    report = enumerate_dualities(build_face_lattice(sys_), classify_self_duality(sys_))
    assert report.total == 0
    assert not report.polarity_exists

def test_normal_closure_scan_on_simplex():
    # A5 is simple
    assert normal_closure_scan(_simplex(), max_order=27) is None

def test_chiral_3_18_3_lattice_and_dualities():
    sys_ = build_rotation_system(parse_presentation(EXAMPLE_B), (3, 18, 3))
    assert sys_.order == 39366
    lat = build_face_lattice(sys_)
    assert lat.f_vector == (81, 6561, 6561, 81)
    report = enumerate_dualities(lat, classify_self_duality(sys_))
    assert report.order_histogram == {4: 4374, 12: 8748, 36: 26244}
    assert not report.polarity_exists
    scan = normal_closure_scan(sys_, max_order=27)
    assert scan is not None and scan.quotient_order * scan.order == 39366


if __name__ == "__main__":
    tests = [test_simplex_face_lattice, test_reflection_and_rotation_lattices_agree, test_24_cell_face_lattice,
             test_missing_incidence_breaks_diamond, test_sampled_sections_still_pass, test_export_lines,
             test_simplex_dualities, test_not_self_dual_has_no_dualities, test_normal_closure_scan_on_simplex,
             test_chiral_3_18_3_lattice_and_dualities]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
