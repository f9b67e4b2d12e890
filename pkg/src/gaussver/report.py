"""Serialization of certificates and reports (JSON, CSV, text).

Timing values live under keys named ``wall_ms`` and the worker count under
``threads``; :func:`payload` drops both so that reports from different runs
can be compared byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .core import Monomial
from .gauss import EqualityReport, SearchStatus, Witness

SCHEMA_VERSION = 1
TIMING_KEYS = frozenset({"wall_ms", "threads"})


def witness_record(w: Witness, timing: bool = True) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "dimension": w.dimension,
        "target": list(w.target.exps),
        "generators": [list(g.exps) for g in w.generators],
        "det": w.det,
        "source": w.source,
        "stats": {"nodes": w.nodes},
    }
    if timing:
        rec["stats"]["wall_ms"] = round(w.wall_ms, 3)
    return rec


def equality_results(rep: EqualityReport) -> list[dict[str, Any]]:
    """One record per orbit of the target set, plus one per extra orbit."""
    out: list[dict[str, Any]] = []
    for p, w in rep.confirmed:
        rec = {"kind": "certificate", "partition": list(p)}
        rec.update(witness_record(w))
        out.append(rec)
    for p, status in rep.missing:
        out.append({"kind": "missing", "partition": list(p), "status": status.value})
    for p, count in rep.extra:
        out.append({"kind": "extra", "partition": list(p), "count": count})
    return out


def equality_summary(rep: EqualityReport) -> dict[str, Any]:
    return {
        "dimension": rep.dimension,
        "mode": rep.mode,
        "target_size": rep.target_size,
        "orbits": len(rep.confirmed) + len(rep.missing),
        "confirmed": len(rep.confirmed),
        "missing": len(rep.missing),
        "extra": len(rep.extra),
        "budget_exhausted": sum(1 for _, s in rep.missing if s is SearchStatus.BUDGET_EXHAUSTED),
        "holds": rep.holds,
    }


def make_report(command: str, config: dict[str, Any], results: list, stats: dict[str, Any]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "stats": stats,
    }


def payload(obj: Any) -> Any:
    """Copy of a report with timing and worker-count fields removed."""
    if isinstance(obj, dict):
        return {k: payload(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [payload(v) for v in obj]
    return obj


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def to_csv(report: dict[str, Any]) -> str:
    """Flat projection: one row per result record, nested values as JSON."""
    rows = report["results"]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([json.dumps(r[c], sort_keys=True) if isinstance(r.get(c), (list, dict)) else r.get(c, "") for c in cols])
    return buf.getvalue()


def _mono(exps) -> str:
    return str(Monomial(tuple(exps)))


def to_text(report: dict[str, Any]) -> str:
    lines = [f"{report['command']} (schema {report['schema_version']})"]
    for k, v in sorted(report["config"].items()):
        lines.append(f"  {k} = {v}")
    for r in report["results"]:
        kind = r.get("kind", "record")
        if "generators" in r:
            gens = ", ".join(_mono(g) for g in r["generators"])
            lines.append(f"{kind}: {_mono(r['target'])} <- [{gens}] det={r['det']}")
        elif kind == "violation":
            lines.append(
                f"violation: u={_mono(r['u'])} v={_mono(r['v'])} i=x{r['i'] + 1}; rejected "
                + ", ".join(f"x{t['j'] + 1}:{_mono(t['monomial'])}" for t in r["tried"])
            )
        else:
            lines.append(f"{kind}: " + json.dumps({k: v for k, v in r.items() if k != "kind"}, sort_keys=True))
    lines.append("stats: " + json.dumps(report["stats"], sort_keys=True))
    return "\n".join(lines) + "\n"


def render(report: dict[str, Any], fmt: str = "json") -> str:
    if fmt == "json":
        return dumps(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}")
