"""Deterministic serialization of simulation results to CSV and JSON.

Identical inputs serialize byte-for-byte identically: no timestamps, sorted
metadata, fixed column order, dot decimal separator, LF line endings, and
floats rendered with 9 significant digits in CSV (full precision in JSON so
round-trips are lossless).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .version import __version__

SIGNIFICANT_DIGITS = 9


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple
    rows: tuple  # of equally-long tuples


@dataclass(frozen=True)
class HistogramTable:
    """Per-bin counts of one observable, one count column per series."""

    name: str
    bin_edges: tuple
    series: tuple  # of (label, tuple-of-counts)


@dataclass(frozen=True)
class ReportBundle:
    meta: dict
    tables: tuple = ()
    histograms: tuple = ()


def config_digest(config) -> str:
    """Stable hash of a fully resolved configuration mapping."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"),
                           default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def make_bundle(meta: dict, tables=(), histograms=()) -> ReportBundle:
    full_meta = {"tool": "sotlogic", "version": __version__}
    full_meta.update(meta)
    return ReportBundle(meta=full_meta, tables=tuple(tables),
                        histograms=tuple(histograms))


def render_number(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def _meta_lines(meta: dict):
    return [f"# {key}={meta[key]}" for key in sorted(meta)]


def _table_csv(table: Table, meta: dict) -> str:
    lines = _meta_lines(meta)
    lines.append(",".join(table.columns))
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError(f"table {table.name!r}: row width mismatch")
        lines.append(",".join(render_number(v) for v in row))
    return "\n".join(lines) + "\n"


def _histogram_csv(hist: HistogramTable, meta: dict) -> str:
    labels = [label for label, _ in hist.series]
    lines = _meta_lines(meta)
    lines.append(",".join(["bin_lo", "bin_hi"] + [f"count_{l}" for l in labels]))
    for b in range(len(hist.bin_edges) - 1):
        row = [hist.bin_edges[b], hist.bin_edges[b + 1]]
        row += [counts[b] for _, counts in hist.series]
        lines.append(",".join(render_number(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_csv(bundle: ReportBundle, out_dir, prefix: str):
    """Write one CSV per table/histogram (metadata-only file if none).

    File naming: ``<prefix>_<table>.csv``. Returns the written paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for table in bundle.tables:
        path = out / f"{prefix}_{table.name}.csv"
        path.write_text(_table_csv(table, bundle.meta))
        written.append(path)
    for hist in bundle.histograms:
        path = out / f"{prefix}_{hist.name}.csv"
        path.write_text(_histogram_csv(hist, bundle.meta))
        written.append(path)
    if not written:
        path = out / f"{prefix}_meta.csv"
        lines = _meta_lines(bundle.meta) + ["key,value"]
        lines += [f"{k},{bundle.meta[k]}" for k in sorted(bundle.meta)]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def emit_json(bundle: ReportBundle, path) -> Path:
    """Write the whole bundle as one hierarchical document, keys sorted."""
    doc = {
        "meta": dict(bundle.meta),
        "tables": {
            t.name: {"columns": list(t.columns),
                     "rows": [list(r) for r in t.rows]}
            for t in bundle.tables
        },
        "histograms": {
            h.name: {"bin_edges": list(h.bin_edges),
                     "series": {label: list(counts)
                                for label, counts in h.series}}
            for h in bundle.histograms
        },
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())
