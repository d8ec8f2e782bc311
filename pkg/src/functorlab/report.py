"""Report documents: canonical JSON plus a markdown rendering pass.

Reports are machine-first dictionaries with a fixed schema version; the JSON
encoding is canonical (sorted keys, fixed separators) so equal seeds give
byte-identical files.
"""

from __future__ import annotations

import json

SCHEMA = 1


def make_report(command: str, config: dict, body: dict, ok: bool) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "ok": ok,
        **body,
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def to_markdown(doc: dict) -> str:
    lines = [f"# {doc.get('command', 'report')}", ""]
    lines.append(f"- schema: {doc.get('schema')}")
    lines.append(f"- ok: {doc.get('ok')}")
    rest = {k: v for k, v in doc.items() if k not in ("schema", "command", "ok")}
    for key in sorted(rest):
        if not isinstance(rest[key], (dict, list)):
            lines.append(f"- {key}: {rest[key]}")
    for key in sorted(rest):
        if isinstance(rest[key], (dict, list)):
            lines.extend(_render_value(key, rest[key], level=2))
    return "\n".join(lines) + "\n"


def _render_value(key, value, level: int) -> list[str]:
    head = "#" * min(level, 6)
    if isinstance(value, dict):
        out = ["", f"{head} {key}", ""]
        simple = {k: v for k, v in value.items() if not isinstance(v, (dict, list))}
        for k in sorted(simple):
            out.append(f"- {k}: {simple[k]}")
        for k in sorted(value):
            if isinstance(value[k], (dict, list)):
                out.extend(_render_value(k, value[k], level + 1))
        return out
    if isinstance(value, list):
        out = ["", f"{head} {key}", ""]
        if value and all(isinstance(row, dict) for row in value):
            cols = sorted({c for row in value for c in row if not isinstance(row[c], (dict, list))})
            out.append("| " + " | ".join(cols) + " |")
            out.append("|" + "---|" * len(cols))
            for row in value:
                out.append("| " + " | ".join(str(row.get(c, "")) for c in cols) + " |")
        else:
            for item in value:
                out.append(f"- {item}")
        return out
    return [f"- {key}: {value}"]


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "markdown":
        return to_markdown(doc)
    raise ValueError(f"unknown format {fmt!r}")
