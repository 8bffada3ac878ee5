"""
src/presets/catalog.py
The preset catalog: named polytopes with expected certificate values, read
from presets/*.preset, and the pipeline that recomputes and compares them.

A preset file is line based:

    name simplex-4
    description the 4-simplex through its rotation group
    kind rotation                 # or reflection
    schlafli 3 3 3
    presentation
      gens s1 s2 s3
      rotation 3 3 3
    end
    expect group.order 60 derived

`family six_q_six 3` replaces the presentation block, `external` takes the
presentation from the --input file, `deep` keeps the preset out of default
runs and `scan_normal 27` adds a search for a small normal subgroup.
"""

from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.commands.reports import write_graph_report
from src.families.families import (FamilyClaims, FamilySpec, build_four_q_four, build_six_q_six, praeger_xu,
                                   six_q_six_graph_claims)
from src.graphs.arcs import ArcReport, analyze_graph
from src.graphs.automorphism import isomorphic
from src.graphs.graphsym import is_bipartite
from src.groups.fpgroup import RegularRep, parse_presentation
from src.medial.medial import (build_extended_rotation_group, cayley_graph, cayley_two_arc_group, covering_map,
                               medial_layer_graph, medial_two_arc_substitute, polarity_set, theorem_checks,
                               verify_delta_identities)
from src.polytope.lattice import base_duality, build_face_lattice, enumerate_dualities, normal_closure_scan, \
    validate_polytope
from src.polytope.systems import (Orientation, RotationSystem, SelfDuality, SelfDualityReport,
                                  build_reflection_system, build_rotation_system, classify_orientation,
                                  classify_self_duality, require_intersection_conditions)
from src.utils.config import RunConfig
from src.utils.errors import CatalogFormatError, PolymedialError, StageError
from src.utils.log import log

PROVENANCE = ("published", "derived", "trivial")
DEPTHS = ("polytope", "medial", "cayley", "all")


@dataclass
class Expectation:
    key: str
    value: str
    provenance: str


@dataclass
class Preset:
    name: str
    description: str = ""
    kind: str = "rotation"
    schlafli: Tuple[int, ...] = ()
    presentation: Optional[str] = None
    family: Optional[FamilySpec] = None
    external: bool = False
    deep: bool = False
    scan_normal: Optional[int] = None
    expectations: List[Expectation] = field(default_factory=list)
    path: Optional[Path] = None


# ── Catalog files ─────────────────────────────────────────────────────────────

def parse_preset(text: str, path="<preset>") -> Preset:
    preset = Preset(name="")
    block: Optional[List[str]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if block is not None:
            if raw.strip() == "end":
                preset.presentation = "\n".join(block) + "\n"
                block = None
            else:
                block.append(raw.strip())
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "name":
                preset.name = rest
            elif key == "description":
                preset.description = rest
            elif key == "kind":
                if rest not in ("rotation", "reflection"):
                    raise ValueError(f"kind must be rotation or reflection, got {rest!r}")
                preset.kind = rest
            elif key == "schlafli":
                preset.schlafli = tuple(int(x) for x in rest.split())
            elif key == "presentation":
                block = []
            elif key == "family":
                family, *params = rest.split()
                preset.family = FamilySpec(family, tuple(int(p) for p in params))
            elif key == "external":
                preset.external = True
            elif key == "deep":
                preset.deep = True
            elif key == "scan_normal":
                preset.scan_normal = int(rest)
            elif key == "expect":
                parts = rest.split()
                if len(parts) != 3 or parts[2] not in PROVENANCE:
                    raise ValueError("expect needs <key> <value> <provenance>, provenance one of "
                                     + ", ".join(PROVENANCE))
                preset.expectations.append(Expectation(*parts))
            else:
                raise ValueError(f"unknown statement {key!r}")
        except ValueError as e:
            raise CatalogFormatError(path, lineno, str(e)) from e
    if block is not None:
        raise CatalogFormatError(path, len(text.splitlines()), "presentation block is not closed by 'end'")
    if not preset.name:
        raise CatalogFormatError(path, 1, "missing 'name'")
    if preset.presentation is None and preset.family is None and not preset.external:
        raise CatalogFormatError(path, 1, "a preset needs a presentation, a family or 'external'")
    preset.path = Path(path) if path != "<preset>" else None
    return preset


def load_catalog(directory) -> Dict[str, Preset]:
    """Presets by name, in file-name order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"preset directory {directory} does not exist")
    catalog: Dict[str, Preset] = {}
    for path in sorted(directory.glob("*.preset")):
        preset = parse_preset(path.read_text(), path)
        if preset.name in catalog:
            raise CatalogFormatError(path, 1, f"duplicate preset name {preset.name!r}")
        catalog[preset.name] = preset
    return catalog


# ── Reports ───────────────────────────────────────────────────────────────────

@dataclass
class PresetReport:
    name: str
    status: str = "ok"
    values: Dict[str, str] = field(default_factory=dict)
    deviations: List[str] = field(default_factory=list)
    failed_stage: Optional[str] = None
    error: Optional[str] = None

    def put(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = str(value).lower()
        elif isinstance(value, (tuple, list)):
            value = ",".join(str(v) for v in value)
        self.values[key] = str(value)

    def put_lines(self, prefix: str, lines: List[str]) -> None:
        for line in lines:
            key, _, value = line.partition("=")
            self.values[f"{prefix}.{key}"] = value

    def to_lines(self) -> List[str]:
        lines = [f"preset={self.name}", f"status={self.status}"]
        if self.failed_stage:
            lines += [f"failed_stage={self.failed_stage}", f"error={self.error}"]
        lines += [f"{k}={v}" for k, v in self.values.items()]
        lines += [f"deviation={d}" for d in self.deviations]
        return lines


def compare_expectations(report: PresetReport, expectations: List[Expectation]) -> None:
    for exp in expectations:
        got = report.values.get(exp.key)
        if got is None:
            report.deviations.append(f"{exp.key} expected {exp.value} ({exp.provenance}), not computed")
        elif got != exp.value:
            report.deviations.append(f"{exp.key} expected {exp.value} ({exp.provenance}), got {got}")
    if report.deviations and report.status == "ok":
        report.status = "mismatch"


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except (PolymedialError, TimeoutError, ValueError) as e:
        raise StageError(name, e) from e


# ── Pipeline ──────────────────────────────────────────────────────────────────

class PresetRun:
    """
    One pass over a preset: group, intersection conditions, orientation,
    self-duality, lattice, dualities, medial layer graph, extended group,
    Cayley graph, covering map and the graph analyses. Each stage records
    key-value results on the report; a failing stage raises StageError.
    """

    def __init__(self, preset: Preset, run: RunConfig, presentation_text: str = None, upto: str = "all"):
        if upto not in DEPTHS:
            raise ValueError(f"unknown pipeline depth {upto!r}")
        self.preset = preset
        self.depth = DEPTHS.index(upto)
        self.run = run
        self.text = presentation_text if presentation_text is not None else preset.presentation
        self.report = PresetReport(preset.name)
        self.sys = None
        self.orientation = None
        self.duality = None
        self.lattice = None
        self.medial = None
        self.medial_report: Optional[ArcReport] = None
        self.ext = None
        self.polarities = None
        self.cayley = None
        self.cayley_report: Optional[ArcReport] = None

    def execute(self) -> PresetReport:
        r = self.report
        with _stage("group"):
            self._group()
        with _stage("intersection"):
            require_intersection_conditions(self.sys)
            r.put("intersection", True)
        with _stage("orientation"):
            self.orientation = classify_orientation(self.sys).orientation
            r.put("orientation", self.orientation.value)
            full = self.sys.order * (2 if isinstance(self.sys, RotationSystem)
                                     and self.orientation == Orientation.DIRECTLY_REGULAR else 1)
            r.put("group.full_order", full)
        with _stage("self_duality"):
            if self.sys.rank == 4:
                self.duality = classify_self_duality(self.sys)
                r.put("self_duality", self.duality.kind.value)
            else:
                self.duality = SelfDualityReport(SelfDuality.NOT_SELF_DUAL)
                r.put("self_duality", "unsupported")
        with _stage("lattice"):
            self._lattice()
        if self.duality.kind != SelfDuality.NOT_SELF_DUAL:
            with _stage("dualities"):
                dualities = enumerate_dualities(self.lattice, self.duality)
                r.put("duality.total", dualities.total)
                r.put_lines("duality", dualities.to_lines()[1:])
        if self.preset.scan_normal:
            with _stage("normal_subgroup"):
                found = normal_closure_scan(self.sys, self.preset.scan_normal)
                r.put("normal.order", found.order if found else "none")
                if found:
                    r.put("normal.quotient_order", found.quotient_order)
        if self.sys.rank % 2 == 0 and self.depth >= DEPTHS.index("medial"):
            with _stage("medial"):
                self._medial()
            if self.duality.kind == SelfDuality.PROPERLY and self.depth >= DEPTHS.index("cayley"):
                with _stage("extended"):
                    self._extended()
                with _stage("cayley"):
                    self._cayley()
                with _stage("covering"):
                    self._covering()
                if self.ext.p >= 3:
                    with _stage("identities"):
                        ids = verify_delta_identities(self.ext)
                        r.put("identities.ok", ids.ok)
                        r.put("identities.d_reading", ids.d_reading)
            with _stage("theorems"):
                self._theorems()
        if self.preset.family is not None and self.depth == DEPTHS.index("all"):
            with _stage("family"):
                self._family()
        compare_expectations(r, self.preset.expectations)
        log("Preset", f"{self.preset.name}: {r.status}, {len(r.deviations)} deviations")
        return r

    # -- stages --

    def _group(self) -> None:
        p, run = self.preset, self.run
        if p.family is not None:
            if p.family.family == "six_q_six":
                self.sys = build_six_q_six(p.family.params[0], limit=run.coset_limit)
            elif p.family.family == "four_q_four":
                self.sys = build_four_q_four(p.family.params[0], limit=run.coset_limit)
            else:
                raise PolymedialError(f"family {p.family.family} has no polytope")
        else:
            pres = parse_presentation(self.text)
            rep = RegularRep.from_presentation(pres, limit=run.coset_limit, margin=run.lookahead_margin)
            build = build_rotation_system if p.kind == "rotation" else build_reflection_system
            self.sys = build(pres, p.schlafli, rep=rep)
        self.report.put("group.order", self.sys.order)
        self.report.put("group.schlafli", self.sys.schlafli)

    def _lattice(self) -> None:
        run = self.run
        self.lattice = build_face_lattice(self.sys, face_budget=run.face_budget)
        check = validate_polytope(self.lattice, run.exhaustive_flag_limit, run.flag_samples, run.seed)
        self.report.put("lattice.f_vector", self.lattice.f_vector)
        self.report.put("lattice.valid", check.ok)
        self.report.put("lattice.flags", check.flag_count)
        if not check.ok:
            raise PolymedialError(f"face lattice is not a polytope: {check.violation}")

    def _analysis_allowed(self, n: int) -> bool:
        return self.run.deep or n <= self.run.aut_vertex_limit

    def _medial(self) -> None:
        r, run = self.report, self.run
        self.medial = medial_layer_graph(self.lattice)
        g = self.medial.graph
        r.put("medial.order", g.n)
        r.put("medial.valency", g.valency() if g.valency() is not None else "irregular")
        self._write_graph("medial", g, self.medial.labels())
        if self._analysis_allowed(g.n):
            self.medial_report = analyze_graph(g, timeout=run.aut_timeout, s_cap=run.s_cap)
            r.put_lines("medial", self.medial_report.to_lines()[1:])
            if self.medial_report.vertex_transitive:
                r.put("medial.stabiliser_order", self.medial_report.group_order // g.n)
        elif self.duality.kind != SelfDuality.NOT_SELF_DUAL:
            D = base_duality(self.lattice, self.duality)
            checks = medial_two_arc_substitute(self.lattice, D, self.medial)
            self.medial_report = checks.medial
            r.put("medial.bipartite", is_bipartite(g))
            r.put("medial.s_transitive", checks.medial.s_transitive)
            r.put("medial.s_regular", checks.medial.s_regular)
            r.put("medial.group_order", checks.medial_group_order)
            r.put("medial.extends_to_3ar", checks.medial_extends_to_3ar)
            r.put("medial.matches_orientation", checks.medial_matches_orientation)

    def _extended(self) -> None:
        self.ext = build_extended_rotation_group(self.sys, self.duality, limit=self.run.coset_limit)
        self.report.put("extended.order", self.ext.order)

    def _cayley(self) -> None:
        r, run = self.report, self.run
        self.polarities = polarity_set(self.ext)
        self.cayley = cayley_graph(self.polarities)
        g = self.cayley.graph
        r.put("cayley.order", g.n)
        r.put("cayley.valency", g.valency())
        self._write_graph("cayley", g)
        if self._analysis_allowed(g.n):
            self.cayley_report = analyze_graph(g, timeout=run.aut_timeout, s_cap=run.s_cap)
            r.put_lines("cayley", self.cayley_report.to_lines()[1:])
            if self.cayley_report.vertex_transitive:
                r.put("cayley.stabiliser_order", self.cayley_report.group_order // g.n)
        if self.medial.graph.n == g.n:
            r.put("medial_cayley_isomorphic",
                  isomorphic(self.medial.graph, g, timeout=run.iso_timeout) is not None)

    def _covering(self) -> None:
        lat = build_face_lattice(self.ext.inner, face_budget=self.run.face_budget)
        mg = medial_layer_graph(lat)
        data = covering_map(self.polarities, self.cayley, lat, mg, self.orientation)
        self.report.put_lines("covering", data.to_lines())

    def _theorems(self) -> None:
        hpa = T = None
        if self.cayley is not None and self.cayley.graph.valency() == 3:
            T, *gens = cayley_two_arc_group(self.polarities, self.cayley)
            hpa = tuple(gens)
        checks = theorem_checks(self.sys, self.orientation, self.medial_report, self.cayley_report, T, hpa)
        self.report.put_lines("theorem", checks.to_lines())

    def _family(self) -> None:
        spec = self.preset.family
        if self.cayley is None:
            raise PolymedialError(f"{spec.label}: family checks need the polarity Cayley graph")
        claims = FamilyClaims(spec)
        if spec.family == "six_q_six":
            medial_aut = cayley_aut = None
            if self.medial_report is not None and self.cayley_report is not None \
                    and self.medial_report.aut_complete and self.cayley_report.aut_complete:
                medial_aut, cayley_aut = self.medial_report.group_order, self.cayley_report.group_order
            six_q_six_graph_claims(claims, spec.params[0], self.medial.graph, self.cayley.graph,
                                   medial_aut, cayley_aut, timeout=self.run.iso_timeout)
        elif spec.family == "four_q_four":
            q = 6 * spec.params[0]
            claims.add("medial_is_C(2,q,2)", isomorphic(self.medial.graph, praeger_xu(2, q, 2),
                                                       timeout=self.run.iso_timeout) is not None, True)
            claims.add("cayley_is_C(2,2q,4)", isomorphic(self.cayley.graph, praeger_xu(2, 2 * q, 4),
                                                        timeout=self.run.iso_timeout) is not None, True)
        self.report.put_lines("family", claims.to_lines()[1:])
        self.report.put("family.mismatches", len(claims.mismatches))

    def _write_graph(self, label: str, g, labels=None) -> None:
        if not self.run.out:
            return
        write_graph_report(Path(self.run.out) / f"{self.preset.name}.{label}.edges", g, labels)


def run_preset(preset: Preset, run: RunConfig, input_text: str = None, upto: str = "all") -> PresetReport:
    """Recompute a preset; external presets without input and deep presets outside --deep are skipped."""
    if preset.external and input_text is None:
        return PresetReport(preset.name, status="skipped", values={"reason": "no --input presentation"})
    if preset.deep and not run.deep:
        return PresetReport(preset.name, status="skipped", values={"reason": "needs --deep"})
    log("Preset", f"running {preset.name}")
    try:
        return PresetRun(preset, run, input_text, upto).execute()
    except StageError as e:
        report = PresetReport(preset.name, status="error", failed_stage=e.stage, error=str(e.cause))
        log("Preset", f"{preset.name}: {e}")
        return report


def deviation_count(reports: List[PresetReport]) -> Tuple[int, int]:
    """(presets with mismatches, presets that failed a stage)."""
    return (sum(r.status == "mismatch" for r in reports), sum(r.status == "error" for r in reports))

