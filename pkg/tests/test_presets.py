"""
tests/test_presets.py
Preset file parsing, the shipped catalog and the recompute-and-compare
pipeline.
"""

import sys, os, tempfile
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import pytest

from src.presets.catalog import (Expectation, Preset, PresetReport, deviation_count, load_catalog, parse_preset,
                                 run_preset)
from src.utils.config import ROOT_DIR, RunConfig
from src.utils.errors import CatalogFormatError

SLOW = os.environ.get("POLYMEDIAL_SLOW") == "1"

SIMPLEX_TEXT = "gens s1 s2 s3\nrotation 3 3 3\n"

SAMPLE = """
# a comment line
name tiny
description the 4-simplex
kind rotation
schlafli 3 3 3
presentation
  gens s1 s2 s3
  rotation 3 3 3   # rotation relators
end
expect group.order 60 derived
"""


def _catalog():
    return load_catalog(ROOT_DIR / "presets")


def _format_error(text):
    try:
        parse_preset(text, "x.preset")
    except CatalogFormatError as e:
        return e
    raise AssertionError("expected CatalogFormatError")


def test_parse_preset():
    preset = parse_preset(SAMPLE)
    assert preset.name == "tiny"
    assert preset.kind == "rotation"
    assert preset.schlafli == (3, 3, 3)
    assert preset.presentation.startswith("gens s1 s2 s3\n")
    assert "# rotation relators" in preset.presentation
    assert [(e.key, e.value, e.provenance) for e in preset.expectations] == [("group.order", "60", "derived")]
    assert preset.path is None

def test_parse_errors_carry_line_numbers():
    e = _format_error("name x\nexternal\nexpect group.order 60 folklore\n")
    assert e.line == 3 and "provenance" in str(e)
    e = _format_error("name x\nexternal\nkind spiral\n")
    assert e.line == 3
    assert _format_error("name x\nfrobnicate\n").line == 2
    assert "not closed" in str(_format_error("name x\npresentation\n  gens a\n"))
    assert "missing 'name'" in str(_format_error("external\n"))
    assert "needs a presentation" in str(_format_error("name x\n"))
    assert _format_error("name x\nfamily six_q_six 4\n").line == 2

def test_shipped_catalog():
    catalog = _catalog()
    assert list(catalog)[:2] == ["simplex-4", "cell-24"]
    assert len(catalog) == 8
    assert catalog["six-q-six-9"].deep
    assert catalog["chiral-3-8-3"].external
    assert catalog["chiral-3-18-3"].scan_normal == 27
    assert catalog["six-q-six"].family.params == (3,)
    for preset in catalog.values():
        assert preset.expectations, preset.name

def test_duplicate_names_rejected():
    d = tempfile.mkdtemp()
    for name in ("a.preset", "b.preset"):
        with open(os.path.join(d, name), "w") as f:
            f.write("name same\nexternal\n")
    try:
        load_catalog(d)
    except CatalogFormatError as e:
        assert "duplicate" in str(e)
    else:
        raise AssertionError("expected CatalogFormatError")

def test_simplex_preset_matches():
    report = run_preset(_catalog()["simplex-4"], RunConfig())
    assert report.status == "ok", report.to_lines()
    assert report.deviations == []
    assert report.values["group.order"] == "60"
    assert report.values["medial.aut_order"] == "240"
    assert report.values["cayley.aut_order"] == "720"
    assert report.values["covering.multiplicity"] == "6"
    assert report.to_lines()[:2] == ["preset=simplex-4", "status=ok"]

def test_skipped_presets():
    catalog = _catalog()
    report = run_preset(catalog["chiral-3-8-3"], RunConfig())
    assert report.status == "skipped" and "input" in report.values["reason"]
    report = run_preset(catalog["six-q-six-9"], RunConfig())
    assert report.status == "skipped" and "deep" in report.values["reason"]

def test_mismatch_and_missing_values_are_deviations():
    preset = parse_preset(SAMPLE)
    preset.expectations[0].value = "61"
    preset.expectations.append(Expectation("cayley.order", "120", "published"))
    report = run_preset(preset, RunConfig(), upto="polytope")
    assert report.status == "mismatch"
    assert "group.order expected 61 (derived), got 60" in report.deviations
    assert any("cayley.order" in d and "not computed" in d for d in report.deviations)
    assert "medial.order" not in report.values

def test_stage_failure_is_reported():
    preset = Preset(name="bad", schlafli=(3, 4, 3), presentation=SIMPLEX_TEXT)
    report = run_preset(preset, RunConfig())
    assert report.status == "error"
    assert report.failed_stage == "group"
    assert "order" in report.error

def test_rank_3_preset_skips_self_duality():
    preset = Preset(name="cube", schlafli=(4, 3), presentation="gens s1 s2\nrotation 4 3\n")
    report = run_preset(preset, RunConfig(), upto="polytope")
    assert report.status == "ok", report.to_lines()
    assert report.values["self_duality"] == "unsupported"
    assert report.values["group.order"] == "24"

def test_external_presentation_is_used():
    preset = Preset(name="ext", schlafli=(3, 3, 3), external=True)
    report = run_preset(preset, RunConfig(), input_text=SIMPLEX_TEXT, upto="polytope")
    assert report.status == "ok"
    assert report.values["lattice.f_vector"] == "5,10,10,5"

def test_graph_files_written_with_out():
    out = tempfile.mkdtemp()
    preset = Preset(name="simplex", schlafli=(3, 3, 3), presentation=SIMPLEX_TEXT)
    run_preset(preset, RunConfig(out=out), upto="cayley")
    assert os.path.exists(os.path.join(out, "simplex.medial.edges"))
    assert os.path.exists(os.path.join(out, "simplex.cayley.edges"))
    with open(os.path.join(out, "simplex.medial.edges")) as f:
        assert f.readline().strip() == "20 30"

def test_deviation_count():
    reports = [PresetReport("a"), PresetReport("b", status="mismatch"), PresetReport("c", status="error"),
               PresetReport("d", status="mismatch")]
    assert deviation_count(reports) == (2, 1)

@pytest.mark.skipif(not SLOW, reason="set POLYMEDIAL_SLOW=1")
def test_default_catalog_matches():
    run = RunConfig()
    for name, preset in _catalog().items():
        report = run_preset(preset, run)
        assert report.status in ("ok", "skipped"), report.to_lines()


if __name__ == "__main__":
    tests = [test_parse_preset, test_parse_errors_carry_line_numbers, test_shipped_catalog,
             test_duplicate_names_rejected, test_simplex_preset_matches, test_skipped_presets,
             test_mismatch_and_missing_values_are_deviations, test_stage_failure_is_reported,
             test_rank_3_preset_skips_self_duality, test_external_presentation_is_used,
             test_graph_files_written_with_out, test_deviation_count]
    if SLOW:
        tests.append(test_default_catalog_matches)
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
