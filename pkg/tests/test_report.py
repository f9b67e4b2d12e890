import csv
import io
import json

import pytest

from gaussver import report
from gaussver.gauss import verify_equality
from gaussver.known_witnesses import fixture_witnesses


def _rep(threads=1):
    r = verify_equality(5, "witness", threads=threads)
    return report.make_report("verify", {"d": 5, "threads": threads}, report.equality_results(r),
                              {**r.stats, "summary": report.equality_summary(r)})


def test_schema_fields():
    rep = _rep()
    assert set(rep) == {"schema_version", "command", "config", "results", "stats"}
    assert rep["schema_version"] == report.SCHEMA_VERSION
    assert "nodes" in rep["stats"] and "wall_ms" in rep["stats"]
    kinds = {r["kind"] for r in rep["results"]}
    assert kinds == {"certificate"}
    rec = rep["results"][0]
    assert {"dimension", "target", "generators", "det", "stats", "partition"} <= set(rec)


def test_payload_strips_timing_and_threads():
    a, b = _rep(1), _rep(4)
    assert a != b
    assert report.dumps(report.payload(a)) == report.dumps(report.payload(b))
    assert "wall_ms" not in report.dumps(report.payload(a))


def test_witness_record_timing_flag():
    w = fixture_witnesses()[0]
    assert "wall_ms" in report.witness_record(w)["stats"]
    assert "wall_ms" not in report.witness_record(w, timing=False)["stats"]


def test_render_formats():
    rep = _rep()
    assert json.loads(report.render(rep, "json")) == rep
    rows = list(csv.reader(io.StringIO(report.render(rep, "csv"))))
    assert rows[0][0] == "kind" and len(rows) == len(rep["results"]) + 1
    text = report.render(rep, "text")
    assert text.startswith("verify (schema 1)") and "det=" in text
    with pytest.raises(ValueError):
        report.render(rep, "xml")
