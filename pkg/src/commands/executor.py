"""
src/commands/executor.py
Runs one command-line subcommand and turns its outcome into an exit code:
0 when everything computed and every expectation held, 2 on an expectation
mismatch, 1 on usage, input or computation errors.
"""

import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, TextIO

from src.commands.reports import emit, write_graph_report
from src.families.families import (FamilySpec, praeger_xu, praeger_xu_symmetries, praeger_xu_symmetry_order,
                                   verify_family_claims, verify_four_q_four_claims)
from src.graphs.arcs import analyze_graph, arc_transitivity
from src.graphs.graphsym import SymGraph, read_graph_file
from src.groups.fpgroup import RegularRep, parse_presentation
from src.groups.permgroup import PermGroup, element_order
from src.polytope.from_graph import polytope_from_3ar_cubic_graph
from src.presets.catalog import Preset, PresetReport, deviation_count, load_catalog, run_preset
from src.utils.config import Config, RunConfig
from src.utils.errors import PolymedialError
from src.utils.log import log

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2

FAMILY_ALIASES = {"px": "praeger_xu", "praeger_xu": "praeger_xu", "6q6": "six_q_six",
                  "six_q_six": "six_q_six", "4q4": "four_q_four", "four_q_four": "four_q_four"}


def _preset_task(preset: Preset, run: RunConfig, input_text: Optional[str]) -> PresetReport:
    return run_preset(preset, run, input_text)


class CommandExecutor:
    """
    Maps subcommands to handlers. Each handler returns report lines and an
    exit code; the lines go to stdout and, with --out, to a report file.
    """

    def __init__(self, config: Config, run: RunConfig, stdout: TextIO = None):
        self.config = config
        self.run = run
        self.stdout = stdout or sys.stdout
        self.action_callback: Optional[Callable[[str], None]] = None

    def execute(self, command: str, args) -> int:
        handlers = {
            "group": self._handle_group,
            "polytope": self._handle_polytope,
            "medial": self._handle_medial,
            "cayley": self._handle_cayley,
            "graph": self._handle_graph,
            "family": self._handle_family,
            "preset": self._handle_preset,
            "preset-all": self._handle_preset_all,
        }
        handler = handlers.get(command)
        if handler is None:
            print(f"unknown command {command!r}", file=sys.stderr)
            return EXIT_ERROR
        try:
            lines, code = handler(args)
        except (PolymedialError, OSError, ValueError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_ERROR
        text = emit(lines, self.run.out, self._report_name(command, args))
        self.stdout.write(text)
        if self.action_callback:
            self.action_callback(text)
        return code

    @staticmethod
    def _report_name(command: str, args) -> str:
        if command == "preset":
            return args.name
        if command in ("group", "polytope", "medial", "cayley", "graph"):
            return f"{Path(args.file).stem}.{command}"
        if command == "family":
            return "family-" + "-".join([args.family] + [str(p) for p in args.params])
        return command

    # ── Individual Handlers ───────────────────────────────────────────────────

    def _handle_group(self, args):
        pres = parse_presentation(Path(args.file).read_text())
        rep = RegularRep.from_presentation(pres, limit=self.run.coset_limit, margin=self.run.lookahead_margin)
        lines = [f"group.order={rep.order}", f"group.generators={pres.rank}",
                 f"group.relators={len(pres.relators)}"]
        for i, name in enumerate(pres.generators):
            lines.append(f"order.{name}={element_order(rep.right(i + 1))}")
        return lines, EXIT_OK

    def _pipeline(self, args, upto: str):
        preset = Preset(name=Path(args.file).stem, kind=args.kind, schlafli=tuple(args.schlafli),
                        presentation=Path(args.file).read_text())
        report = run_preset(preset, self.run, upto=upto)
        if report.status == "error":
            raise PolymedialError(f"stage '{report.failed_stage}' failed: {report.error}")
        return report.to_lines()[2:], EXIT_OK

    def _handle_polytope(self, args):
        return self._pipeline(args, "polytope")

    def _handle_medial(self, args):
        return self._pipeline(args, "medial")

    def _handle_cayley(self, args):
        return self._pipeline(args, "cayley")

    def _handle_graph(self, args):
        g = read_graph_file(args.file)
        report = analyze_graph(g, timeout=self.run.aut_timeout, s_cap=self.run.s_cap)
        lines = report.to_lines()
        if args.polytope:
            gp = polytope_from_3ar_cubic_graph(g, timeout=self.run.aut_timeout)
            lines += [f"polytope.schlafli={','.join(map(str, gp.system.schlafli))}",
                      f"polytope.group_order={gp.system.order}",
                      f"polytope.delta_swaps_generators={str(gp.delta_swaps_generators).lower()}"]
        return lines, EXIT_OK

    def _handle_family(self, args):
        family = FAMILY_ALIASES.get(args.family)
        if family is None:
            raise ValueError(f"unknown family {args.family!r}; use px, six_q_six or four_q_four")
        spec = FamilySpec(family, tuple(args.params))
        if family == "praeger_xu":
            return self._praeger_xu(spec), EXIT_OK
        if family == "six_q_six":
            q = spec.params[0]
            claims = verify_family_claims(q, with_aut=q <= 3 or self.run.deep, limit=self.run.coset_limit,
                                          timeout=self.run.aut_timeout)
        else:
            claims = verify_four_q_four_claims(spec.params[0], limit=self.run.coset_limit,
                                               timeout=self.run.iso_timeout)
        return claims.to_lines(), EXIT_OK if claims.ok else EXIT_MISMATCH

    def _praeger_xu(self, spec: FamilySpec) -> List[str]:
        g: SymGraph = praeger_xu(*spec.params)
        lines = [f"family={spec.label}", f"order={g.n}", f"valency={g.valency()}"]
        symmetries = praeger_xu_symmetries(*spec.params)
        lines.append(f"symmetries_preserve_edges={str(all(g.preserves_edges(s) for s in symmetries)).lower()}")
        p, r, _ = spec.params
        shifts = PermGroup(symmetries, degree=g.n, known_order=praeger_xu_symmetry_order(p, r))
        lines.append(f"symmetry_group_order={shifts.order()}")
        lines.append(f"symmetry_group_transitive={str(shifts.is_transitive()).lower()}")
        if self.run.deep or g.n <= self.run.aut_vertex_limit:
            report = analyze_graph(g, timeout=self.run.aut_timeout, s_cap=self.run.s_cap)
            lines += report.to_lines()[1:]
            lines.append(f"stabiliser_order={report.group_order // g.n}")
        else:
            lines += arc_transitivity(g, shifts, s_cap=2).to_lines()[1:]
        if self.run.out:
            write_graph_report(Path(self.run.out) / f"{spec.label}.edges", g)
        return lines

    def _handle_preset(self, args):
        catalog = load_catalog(self.run.preset_dir)
        if args.name not in catalog:
            raise ValueError(f"unknown preset {args.name!r}; known: {', '.join(catalog)}")
        input_text = Path(args.input).read_text() if getattr(args, "input", None) else None
        report = run_preset(catalog[args.name], self.run, input_text)
        return report.to_lines(), self._exit_for([report])

    def _handle_preset_all(self, args):
        catalog = load_catalog(self.run.preset_dir)
        input_text = Path(args.input).read_text() if getattr(args, "input", None) else None
        presets = list(catalog.values())
        if self.run.workers > 1 and len(presets) > 1:
            with ProcessPoolExecutor(max_workers=self.run.workers) as pool:
                futures = [pool.submit(_preset_task, p, self.run, input_text) for p in presets]
                reports = [f.result() for f in futures]
        else:
            reports = [_preset_task(p, self.run, input_text) for p in presets]
        lines: List[str] = []
        for report in reports:
            lines += report.to_lines()
            lines.append("")
        mismatched, failed = deviation_count(reports)
        lines.append(f"summary.presets={len(reports)}")
        lines.append(f"summary.mismatched={mismatched}")
        lines.append(f"summary.failed={failed}")
        log("Runner", f"{len(reports)} presets, {mismatched} mismatched, {failed} failed")
        return lines, self._exit_for(reports)

    @staticmethod
    def _exit_for(reports: List[PresetReport]) -> int:
        mismatched, failed = deviation_count(reports)
        if failed:
            return EXIT_ERROR
        return EXIT_MISMATCH if mismatched else EXIT_OK
