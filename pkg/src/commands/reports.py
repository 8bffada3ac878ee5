"""
src/commands/reports.py
Key-value report text and graph files written by the command line.
"""

from pathlib import Path
from typing import Iterable, List, Sequence

from src.graphs.graphsym import SymGraph, write_graph_file


def report_text(lines: Iterable[str]) -> str:
    return "\n".join(lines) + "\n"


def write_report(lines: List[str], out_dir, name: str) -> Path:
    """`name`.report under out_dir; the text is the same that goes to stdout."""
    path = Path(out_dir) / f"{name}.report"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_text(lines))
    return path


def write_graph_report(path, g: SymGraph, labels: Sequence[str] = None) -> Path:
    return write_graph_file(g, path, labels)


def emit(lines: List[str], out_dir=None, name: str = "report") -> str:
    text = report_text(lines)
    if out_dir:
        write_report(lines, out_dir, name)
    return text
