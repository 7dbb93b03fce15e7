"""JSON and CSV renderings of a run.

Field order is fixed and nothing time- or host-dependent is written, so
identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .. import __version__
from ..quaternion import render
from .runner import FunctionResult, RunResult

CSV_FIELDS = ("function", "index", "point", "check", "status", "residual", "tolerance", "reason")


def _function_dict(fr: FunctionResult) -> dict:
    return {
        "name": fr.entry.name,
        "expectation": fr.entry.describe_expectation(),
        "notes": fr.entry.notes,
        "summary": fr.summary(),
        "diagnostics": fr.diagnostics,
        "rows": [
            {
                "index": r.index,
                "point": render(r.point),
                "check": r.check,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "passed": r.passed,
                "detail": r.detail,
            }
            for r in fr.rows
        ],
        "skipped": [
            {"index": s.index, "point": render(s.point), "check": s.check, "reason": s.reason}
            for s in fr.skipped
        ],
    }


def to_dict(result: RunResult) -> dict:
    functions = [_function_dict(fr) for fr in result.functions]
    return {
        "tool": "slicecalc",
        "version": __version__,
        "config": {**result.config.as_dict(), "grid": result.grid.text,
                   "r_band": result.grid.r_band},
        "summary": {
            "functions": len(functions),
            "rows": sum(len(f["rows"]) for f in functions),
            "skipped": sum(len(f["skipped"]) for f in functions),
            "violations": result.violations,
            "violating": [f["name"] for f in functions if f["summary"]["violation"]],
        },
        "functions": functions,
    }


def dumps_json(result: RunResult) -> str:
    return json.dumps(to_dict(result), indent=2) + "\n"


def dumps_csv(result: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for fr in result.functions:
        records = [(r.index, 0, r) for r in fr.rows] + [(s.index, 1, s) for s in fr.skipped]
        for _, _, rec in sorted(records, key=lambda x: (x[0], x[1])):
            if hasattr(rec, "residual"):
                w.writerow([fr.entry.name, rec.index, render(rec.point), rec.check,
                            "pass" if rec.passed else "fail",
                            repr(rec.residual), repr(rec.tolerance), ""])
            else:
                w.writerow([fr.entry.name, rec.index, render(rec.point), rec.check,
                            "skip", "", "", rec.reason])
    return buf.getvalue()


def write_json(result: RunResult, path: str | Path) -> None:
    Path(path).write_text(dumps_json(result))


def write_csv(result: RunResult, path: str | Path) -> None:
    Path(path).write_text(dumps_csv(result))
