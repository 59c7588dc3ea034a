"""CSV and JSON serialization of scan, errata and classification reports.

Floats are written with 17 significant digits, so every number survives
a round trip through text unchanged.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from .characterize import (
    ClassifyResult,
    ErrataReport,
    IdentityId,
    Method,
    Ordering,
    PointRecord,
    ScanReport,
    Verdict,
)
from .errors import UsageError

SCHEMA_VERSION = 1
SCAN_COLUMNS = ("identity", "dist", "k", "r", "m", "n", "p", "u", "s", "t", "v",
                "lhs", "rhs", "rel_residual")
ERRATA_COLUMNS = ("dist", "check", "k", "r", "m", "n", "printed",
                  "computed_min", "computed_max", "status")


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return f"{x:.17g}"


def dumps_json(obj: Any) -> str:
    """JSON with sorted keys, two-space indent and 17-digit floats."""

    def enc(value, depth):
        pad = "  " * (depth + 1)
        end = "  " * depth
        if isinstance(value, bool) or value is None:
            return json.dumps(value)
        if isinstance(value, float):
            return fmt_float(value)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, str):
            return json.dumps(value)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, depth + 1)}" for k, v in sorted(value.items())]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            items = [pad + enc(v, depth + 1) for v in value]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(value).__name__}")

    return enc(obj, 0) + "\n"


def scan_to_dict(report: ScanReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "identity": report.identity.value,
        "dist": report.dist,
        "params": dict(report.params),
        "grid": report.grid,
        "ordering": report.ordering.value if report.ordering else None,
        "method": report.method.value,
        "seed": report.seed,
        "samples": report.samples,
        "tol": report.tol,
        "max_rel_residual": report.max_rel_residual,
        "max_zscore": report.max_zscore,
        "verdict": report.verdict.value,
        "records": [
            {
                "point": rec.named_point,
                "lhs": rec.lhs,
                "rhs": rec.rhs,
                "residual": rec.residual,
                "rel_residual": rec.rel_residual,
                "stderr": rec.stderr,
            }
            for rec in report.records
        ],
    }


def scan_from_dict(data: dict) -> ScanReport:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"unsupported schema_version {data.get('schema_version')!r}")
    records = []
    for rec in data["records"]:
        pt = rec["point"]
        point = tuple(float(pt[key]) for key in "ustv" if key in pt)
        records.append(PointRecord(point, float(rec["lhs"]), float(rec["rhs"]),
                                   float(rec["residual"]), float(rec["rel_residual"]),
                                   float(rec["stderr"])))
    return ScanReport(
        identity=IdentityId(data["identity"]),
        dist=data["dist"],
        params={k: int(v) for k, v in data["params"].items()},
        grid=data["grid"],
        records=tuple(records),
        max_rel_residual=float(data["max_rel_residual"]),
        verdict=Verdict(data["verdict"]),
        tol=float(data["tol"]),
        method=Method(data["method"]),
        seed=int(data["seed"]),
        ordering=Ordering(data["ordering"]) if data["ordering"] else None,
        samples=data["samples"],
        max_zscore=None if data["max_zscore"] is None else float(data["max_zscore"]),
    )


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def scan_to_csv(report: ScanReport) -> str:
    params = report.params
    rows = []
    for rec in report.records:
        pt = rec.named_point
        rows.append([
            report.identity.value, report.dist,
            params.get("k", ""), params.get("r", ""), params.get("m", ""), params.get("n", ""),
            params.get("p", ""),
            *(fmt_float(pt[key]) if key in pt else "" for key in "ustv"),
            fmt_float(rec.lhs), fmt_float(rec.rhs), fmt_float(rec.rel_residual),
        ])
    return _csv_text(SCAN_COLUMNS, rows)


def serialize_report(report: ScanReport, fmt: str = "csv") -> bytes:
    """CSV with the fixed column set, or JSON mirroring the report."""
    if fmt == "csv":
        return scan_to_csv(report).encode()
    if fmt == "json":
        return dumps_json(scan_to_dict(report)).encode()
    raise UsageError(f"format must be csv or json, got {fmt!r}")


def parse_report(data: bytes | str) -> ScanReport:
    """Inverse of ``serialize_report(..., "json")``."""
    text = data.decode() if isinstance(data, bytes) else data
    return scan_from_dict(json.loads(text))


def errata_to_dict(report: ErrataReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dist": report.dist,
        "grid": report.grid,
        "tol": report.tol,
        "rows": [
            {
                "check": row.check, "k": row.k, "r": row.r, "m": row.m, "n": row.n,
                "printed": row.printed,
                "computed_min": row.computed_min,
                "computed_max": row.computed_max,
                "status": row.status.value,
                "values": [{"u": a, "v": b, "value": val} for a, b, val in row.values],
            }
            for row in report.rows
        ],
    }


def serialize_errata(report: ErrataReport, fmt: str = "csv") -> bytes:
    if fmt == "json":
        return dumps_json(errata_to_dict(report)).encode()
    if fmt != "csv":
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    rows = [
        [report.dist, row.check, row.k, row.r, row.m, row.n, fmt_float(row.printed),
         fmt_float(row.computed_min), fmt_float(row.computed_max), row.status.value]
        for row in report.rows
    ]
    return _csv_text(ERRATA_COLUMNS, rows).encode()


def classify_to_dict(result: ClassifyResult, dist: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dist": dist,
        "classification": result.label.value,
        "checks": [
            {
                "identity": rep.identity.value,
                "params": dict(rep.params),
                "ordering": rep.ordering.value if rep.ordering else None,
                "verdict": rep.verdict.value,
                "max_rel_residual": rep.max_rel_residual,
                "tol": rep.tol,
            }
            for rep in result.reports
        ],
    }
