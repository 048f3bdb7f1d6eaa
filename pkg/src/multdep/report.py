"""Deterministic report emission (JSON lines, CSV) and checkpoint files."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from typing import IO, Any

from .arith import parse_rational
from .dependence import Relation
from .dynamics import Hit, SearchReport

CSV_COLUMNS = ("alpha", "m", "n", "exponents", "witness_order")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def params_hash(params: dict) -> str:
    return hashlib.sha256(canonical_json(params).encode()).hexdigest()


def footer(report: SearchReport) -> dict:
    return {
        "summary": True,
        "parameters": report.parameters,
        "scanned_count": report.scanned_count,
        "complete": report.complete,
        "next_cursor": report.next_cursor,
        "hit_count": len(report.hits),
        "hypotheses": report.hypotheses,
    }


def write_jsonl(report: SearchReport, fh: IO[str]) -> None:
    for h in report.hits:
        fh.write(canonical_json(h.to_json()) + "\n")
    fh.write(canonical_json(footer(report)) + "\n")


def write_csv(report: SearchReport, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for h in report.hits:
        rec = h.to_json()
        alpha = rec["alpha"] if isinstance(rec["alpha"], str) else json.dumps(rec["alpha"])
        w.writerow([alpha, rec["m"], rec["n"], ";".join(str(k) for k in rec["exponents"]), rec["witness_order"]])


def render(report: SearchReport, fmt: str = "jsonl") -> str:
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(report, buf)
    elif fmt == "jsonl":
        write_jsonl(report, buf)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return buf.getvalue()


def emit_report(report: SearchReport, path: str | None, fmt: str = "jsonl") -> str:
    """Write the report (stdout when path is None); wall time goes to a sidecar file."""
    text = render(report, fmt)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(path + ".meta.json", "w", encoding="utf-8") as fh:
            fh.write(canonical_json({"wall_time": round(report.wall_time, 6)}) + "\n")
    return text


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def save_checkpoint(path: str, cursor: int, phash: str, hits: list[Hit]) -> None:
    data = {"grid_cursor": cursor, "params_hash": phash, "hits": [h.to_json() for h in hits]}
    _atomic_write(path, canonical_json(data) + "\n")


def load_checkpoint(path: str) -> dict | None:
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "grid_cursor" not in data or "params_hash" not in data:
        raise ValueError(f"{path} is not a checkpoint file")
    data["hits"] = [hit_from_json(h) for h in data.get("hits", [])]
    return data


def hit_from_json(rec: dict) -> Hit:
    alpha = parse_rational(rec["alpha"]) if isinstance(rec["alpha"], str) else rec["alpha"]
    return Hit(alpha, rec["m"], rec["n"], Relation(tuple(rec["exponents"]), rec["witness_order"]))


def read_jsonl(path: str) -> tuple[list[dict], dict | None]:
    hits, summary = [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            if rec.get("summary"):
                summary = rec
            else:
                hits.append(rec)
    return hits, summary
