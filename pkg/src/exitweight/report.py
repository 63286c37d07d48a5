"""Table output in CSV and JSON with identical numeric content."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

SCHEMA_VERSION = 1


@dataclass
class Table:
    name: str
    columns: Sequence[str]
    rows: list[Sequence[Any]]


def _plain(v: Any) -> Any:
    if hasattr(v, "item"):  # numpy scalar
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def csv_cell(v: Any) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _meta_lines(meta: dict) -> list[str]:
    return [f"# {k}={csv_cell(v) if not isinstance(v, (list, dict)) else json.dumps(v)}"
            for k, v in meta.items()]


def to_csv(table: Table, meta: dict | None = None) -> str:
    buf = io.StringIO()
    for line in _meta_lines(meta or {}):
        buf.write(line + "\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(csv_cell(v) for v in row) + "\n")
    return buf.getvalue()


def to_json(tables: Sequence[Table], meta: dict) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "meta": {k: _plain(v) for k, v in meta.items()},
        "tables": {
            t.name: {
                "columns": list(t.columns),
                "rows": [[_plain(v) for v in row] for row in t.rows],
            }
            for t in tables
        },
    }
    return json.dumps(doc, indent=1) + "\n"


def to_pretty(table: Table) -> str:
    cells = [list(table.columns)] + [[csv_cell(v) for v in r] for r in table.rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(table.columns))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


def emit(command: str, tables: Sequence[Table], meta: dict, fmt: str = "csv",
         out: str | Path | None = None, pretty: bool = False, stream=None) -> list[Path]:
    """Write tables to ``out`` (a directory) or to ``stream``; returns written paths."""
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            path = out / f"{command}.json"
            path.write_text(to_json(tables, meta))
            return [path]
        paths = []
        for t in tables:
            path = out / f"{t.name}.csv"
            path.write_text(to_csv(t, meta))
            paths.append(path)
        return paths
    if fmt == "json":
        stream.write(to_json(tables, meta))
    elif pretty:
        for k, v in meta.items():
            stream.write(f"{k}: {csv_cell(v) if not isinstance(v, (list, dict)) else v}\n")
        for t in tables:
            stream.write(f"\n[{t.name}]\n" + to_pretty(t))
    else:
        stream.write("\n".join(_meta_lines(meta)) + "\n" if meta else "")
        for t in tables:
            stream.write(f"# table={t.name}\n")
            stream.write(to_csv(t))
    return []


def read_csv_tables(text: str) -> dict[str, list[dict[str, str]]]:
    """Parse stdout CSV (``# table=`` separated) back into row dicts."""
    tables: dict[str, list[dict[str, str]]] = {}
    name, header = None, None
    for line in text.splitlines():
        if line.startswith("# table="):
            name, header = line.split("=", 1)[1], None
            tables[name] = []
        elif line.startswith("#") or not line.strip():
            continue
        elif name is not None and header is None:
            header = line.split(",")
        elif name is not None:
            tables[name].append(dict(zip(header, line.split(","))))
    return tables
