"""
polymedial/__init__.py
Public API for polymedial: the MedialWorkbench facade over presentations,
polytopes, graphs, families and the preset catalog.

Usage:
    from polymedial import MedialWorkbench
    bench = MedialWorkbench()
    report = bench.run_preset("simplex-4")
    print("\n".join(report.to_lines()))
"""

import os
import sys

# Add project root to path so relative imports work when used as a package
_ROOT = os.path.dirname(os.path.dirname(__file__))
if _ROOT not in sys.path:
    sys.path.insert(0, _ROOT)

from src.families.families import FamilyClaims, praeger_xu, verify_family_claims
from src.graphs.arcs import ArcReport, analyze_graph
from src.graphs.graphsym import SymGraph, read_graph_file
from src.groups.fpgroup import RegularRep, parse_presentation
from src.polytope.systems import build_reflection_system, build_rotation_system
from src.presets.catalog import Preset, PresetReport, load_catalog, run_preset
from src.utils.config import Config, RunConfig
from src.utils.log import configure


class MedialWorkbench:
    """
    High-level entry point. Budgets come from config.yaml (or `config_path`)
    and can be adjusted on `bench.run` before calling anything.
    """

    def __init__(self, config_path: str = None, deep: bool = False):
        self.config = Config.from_file(config_path)
        configure(self.config)
        self.run = RunConfig.from_config(self.config)
        self.run.deep = deep or self.run.deep

    # ── Groups and polytopes ──────────────────────────────────────────────────

    def group(self, text: str) -> RegularRep:
        return RegularRep.from_presentation(parse_presentation(text), limit=self.run.coset_limit,
                                            margin=self.run.lookahead_margin)

    def polytope(self, text: str, schlafli, kind: str = "rotation"):
        pres = parse_presentation(text)
        build = build_rotation_system if kind == "rotation" else build_reflection_system
        return build(pres, schlafli, rep=self.group(text))

    def pipeline(self, text: str, schlafli, kind: str = "rotation", upto: str = "all") -> PresetReport:
        """The preset pipeline on an ad-hoc presentation, without expectations."""
        preset = Preset(name="adhoc", kind=kind, schlafli=tuple(schlafli), presentation=text)
        return run_preset(preset, self.run, upto=upto)

    # ── Graphs and families ───────────────────────────────────────────────────

    def analyze_graph(self, graph) -> ArcReport:
        g = graph if isinstance(graph, SymGraph) else read_graph_file(graph)
        return analyze_graph(g, timeout=self.run.aut_timeout, s_cap=self.run.s_cap)

    def praeger_xu(self, p: int, r: int, s: int) -> SymGraph:
        return praeger_xu(p, r, s)

    def family_claims(self, q: int, with_aut: bool = True) -> FamilyClaims:
        return verify_family_claims(q, with_aut=with_aut, limit=self.run.coset_limit, timeout=self.run.aut_timeout)

    # ── Catalog ───────────────────────────────────────────────────────────────

    def presets(self):
        return list(load_catalog(self.run.preset_dir))

    def run_preset(self, name: str, input_text: str = None) -> PresetReport:
        catalog = load_catalog(self.run.preset_dir)
        if name not in catalog:
            raise KeyError(f"unknown preset {name!r}")
        return run_preset(catalog[name], self.run, input_text)
