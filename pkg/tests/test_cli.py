"""
tests/test_cli.py
The command line end to end: subcommands, report text and exit codes.
"""

import sys, os, io, tempfile
from contextlib import redirect_stderr, redirect_stdout
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from main import main
from src.graphs.graphsym import desargues_graph, petersen_graph, write_graph_file


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue().splitlines(), err.getvalue()


def _file(text, suffix=".pres"):
    f = tempfile.NamedTemporaryFile(mode="w", suffix=suffix, delete=False)
    f.write(text)
    f.close()
    return f.name


def test_group_command():
    path = _file("gens r0 r1 r2 r3\ncoxeter 3 3 3\n")
    code, lines, _ = _run("group", path)
    assert code == 0
    assert "group.order=120" in lines
    assert "order.r0=2" in lines

def test_polytope_command():
    path = _file("gens s1 s2 s3\nrotation 3 3 3\n")
    code, lines, _ = _run("polytope", path, "--schlafli", "3", "3", "3")
    assert code == 0
    assert "group.order=60" in lines
    assert "orientation=directly-regular" in lines
    assert "lattice.f_vector=5,10,10,5" in lines
    assert not any(line.startswith("medial.") for line in lines)

def test_medial_command():
    path = _file("gens s1 s2 s3\nrotation 3 3 3\n")
    code, lines, _ = _run("medial", path, "--schlafli", "3", "3", "3")
    assert code == 0
    assert "medial.order=20" in lines
    assert "medial.aut_order=240" in lines

def test_reflection_kind():
    path = _file("gens r0 r1 r2 r3\ncoxeter 3 3 3\n")
    code, lines, _ = _run("polytope", path, "--kind", "reflection", "--schlafli", "3", "3", "3")
    assert code == 0
    assert "group.order=120" in lines

def test_graph_command():
    path = os.path.join(tempfile.mkdtemp(), "petersen.edges")
    write_graph_file(petersen_graph(), path)
    code, lines, _ = _run("graph", path)
    assert code == 0
    assert "aut_order=120" in lines and "s_transitive=3" in lines and "girth=5" in lines

def test_graph_command_builds_polytope():
    path = os.path.join(tempfile.mkdtemp(), "desargues.edges")
    write_graph_file(desargues_graph(), path)
    code, lines, _ = _run("graph", path, "--polytope")
    assert code == 0
    assert "polytope.schlafli=3,3,3" in lines
    assert "polytope.group_order=120" in lines

def test_praeger_xu_family():
    code, lines, _ = _run("family", "px", "3", "6", "1")
    assert code == 0
    assert "order=18" in lines
    assert "symmetries_preserve_edges=true" in lines
    assert "symmetry_group_order=559872" in lines
    assert "aut_order=559872" in lines

def test_bad_family_arguments():
    assert _run("family", "hexagons", "3")[0] == 1
    code, _, err = _run("family", "six_q_six", "4")
    assert code == 1 and "multiple of 3" in err

def test_usage_errors_exit_1():
    assert _run()[0] == 1
    assert _run("polytope")[0] == 1
    assert _run("frobnicate")[0] == 1

def test_syntax_error_exit_1():
    path = _file("gens a b\nrel a^0\n")
    code, lines, err = _run("group", path)
    assert code == 1
    assert "line 2, column 7" in err
    assert lines == []

def test_missing_file_exit_1():
    assert _run("group", "/nonexistent/file.pres")[0] == 1

def test_preset_command():
    code, lines, _ = _run("preset", "simplex-4")
    assert code == 0
    assert lines[:2] == ["preset=simplex-4", "status=ok"]
    assert _run("preset", "no-such-preset")[0] == 1

def test_mismatch_exit_2_and_report_file():
    root = tempfile.mkdtemp()
    presets = os.path.join(root, "presets")
    os.mkdir(presets)
    with open(os.path.join(presets, "01-wrong.preset"), "w") as f:
        f.write("name wrong\nkind rotation\nschlafli 3 3 3\npresentation\n  gens s1 s2 s3\n"
                "  rotation 3 3 3\nend\nexpect group.order 61 derived\n")
    config = os.path.join(root, "config.yaml")
    with open(config, "w") as f:
        f.write(f"presets:\n  directory: {presets}\nrunner:\n  workers: 1\n")
    out = os.path.join(root, "out")
    code, lines, _ = _run("preset-all", "--config", config, "--out", out)
    assert code == 2
    assert "status=mismatch" in lines
    assert "summary.mismatched=1" in lines
    with open(os.path.join(out, "preset-all.report")) as f:
        assert "summary.presets=1" in f.read()

def test_out_writes_report():
    out = tempfile.mkdtemp()
    path = _file("gens r0 r1 r2 r3\ncoxeter 3 4 3\n")
    code, _, _ = _run("group", path, "--out", out)
    assert code == 0
    stem = os.path.splitext(os.path.basename(path))[0]
    with open(os.path.join(out, f"{stem}.group.report")) as f:
        assert "group.order=1152" in f.read()


if __name__ == "__main__":
    tests = [test_group_command, test_polytope_command, test_medial_command, test_reflection_kind,
             test_graph_command, test_graph_command_builds_polytope, test_praeger_xu_family,
             test_bad_family_arguments, test_usage_errors_exit_1, test_syntax_error_exit_1,
             test_missing_file_exit_1, test_preset_command, test_mismatch_exit_2_and_report_file,
             test_out_writes_report]
    passed = 0
    for t in tests:
        try:
            t()
            print(f"  PASS  {t.__name__}")
            passed += 1
        except Exception as e:
            print(f"  FAIL  {t.__name__}: {e}")
    print(f"\n{passed}/{len(tests)} tests passed.")
