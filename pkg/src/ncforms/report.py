"""Deterministic report rendering (text and the machine line protocol)."""

from __future__ import annotations

from typing import Iterable

from . import __version__
from .checks import FAIL, INFEASIBLE, PASS, Entry

TOOL = f"ncforms {__version__}"


def _one_line(s: str) -> str:
    return " ".join(s.split())


def exit_code(entries: Iterable[Entry]) -> int:
    return 1 if any(e.verdict == FAIL for e in entries) else 0


def summary(entries: list[Entry]) -> str:
    counts = {v: sum(e.verdict == v for e in entries) for v in (PASS, FAIL, INFEASIBLE)}
    return f"{counts[PASS]} PASS, {counts[FAIL]} FAIL, {counts[INFEASIBLE]} INFEASIBLE"


def render_machine(entries: list[Entry]) -> str:
    lines = []
    for e in entries:
        parts = ["CHECK", e.id, e.verdict]
        if e.witness:
            parts.append(_one_line(e.witness))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def render_text(entries: list[Entry], header: dict) -> str:
    lines = [f"tool: {TOOL}"]
    lines += [f"{k}: {v}" for k, v in header.items()]
    lines.append("")
    width = max((len(e.id) for e in entries), default=0)
    for e in entries:
        line = f"{e.verdict:<10} {e.id:<{width}}"
        if e.inputs:
            line += f"  [{_one_line(e.inputs)}]"
        if e.witness:
            line += f"  {_one_line(e.witness)}"
        lines.append(line.rstrip())
    lines.append("")
    lines.append(f"summary: {summary(entries)}")
    lines.append(f"result: {'FAIL' if exit_code(entries) else 'PASS'}")
    return "\n".join(lines) + "\n"
