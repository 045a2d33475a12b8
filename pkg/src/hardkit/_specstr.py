"""Parsing of ``name:key=value,key=value`` option strings used on the CLI."""
from __future__ import annotations


def _coerce(value: str):
    low = value.lower()
    if low in ("none", "null"):
        return None
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def parse_spec_string(text: str) -> tuple[str, dict]:
    """``"smote_enn:k=5"`` -> ``("smote_enn", {"k": 5})``."""
    name, _, rest = text.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key.strip():
                raise ValueError(f"malformed option {item!r} in {text!r}")
            params[key.strip()] = _coerce(value.strip())
    return name.strip(), params
