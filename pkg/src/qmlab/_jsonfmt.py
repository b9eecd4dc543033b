"""Byte-stable JSON rendering: fixed key order, one top-level key per line,
row arrays kept compact. Floats render via repr (shortest round-trip)."""
import json


def dumps(obj: dict) -> str:
    lines = ["{"]
    items = list(obj.items())
    for idx, (key, value) in enumerate(items):
        comma = "," if idx < len(items) - 1 else ""
        if isinstance(value, list) and value and all(isinstance(v, list) for v in value):
            lines.append(f'  "{key}": [')
            for j, row in enumerate(value):
                rc = "," if j < len(value) - 1 else ""
                lines.append(f"    {json.dumps(row)}{rc}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f'  "{key}": {json.dumps(value)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"
