"""Loading map specs and function literals from JSON or text."""

from __future__ import annotations

import json
from pathlib import Path

from .functions import TreeFunction
from .symbols import Symbol, SymbolError, builtin
from .tree import TreeError, format_vertex, iter_ball, parse_vertex


class InputError(ValueError):
    """A malformed or inconsistent input file."""


def _read_json(source):
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _int_field(spec: dict, key: str, minimum: int) -> int:
    value = spec.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InputError(f"map spec: {key!r} must be an integer >= {minimum}, got {value!r}")
    return value


def load_map_spec(source, q: int | None = None) -> Symbol:
    """Build a symbol from a map-spec file (or an already parsed dict).

    Table entries are validated in file order; the first bad entry is named.
    """
    spec = _read_json(source)
    if not isinstance(spec, dict):
        raise InputError("map spec must be a JSON object")
    spec_q = _int_field(spec, "q", 1)
    if q is not None and q != spec_q:
        raise InputError(f"map spec has q = {spec_q} but q = {q} was requested")
    kind = spec.get("kind")
    if kind == "builtin":
        body = spec.get("builtin")
        if not isinstance(body, dict) or not isinstance(body.get("name"), str):
            raise InputError("map spec: 'builtin' must be an object with a 'name'")
        params = body.get("params")
        params = {} if params is None else params
        if not isinstance(params, dict):
            raise InputError("map spec: builtin 'params' must be an object")
        try:
            phi = builtin(body["name"], spec_q, **params)
        except (SymbolError, TreeError) as exc:
            raise InputError(f"map spec: {exc}") from None
        if "depth" in spec and phi.depth is None:
            phi.depth = _int_field(spec, "depth", 0)
        return phi
    if kind != "table":
        raise InputError(f"map spec: 'kind' must be 'table' or 'builtin', got {kind!r}")
    depth = _int_field(spec, "depth", 0)
    entries = spec.get("entries")
    if not isinstance(entries, list):
        raise InputError("map spec: 'entries' must be a list of [source, image] pairs")
    table = {}
    for i, entry in enumerate(entries):
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, str) for x in entry)):
            raise InputError(f"map spec entry {i}: expected [source, image] address strings, got {entry!r}")
        try:
            v = parse_vertex(entry[0], spec_q)
            w = parse_vertex(entry[1], spec_q)
        except TreeError as exc:
            raise InputError(f"map spec entry {i} {entry!r}: {exc}") from None
        if len(v) > depth:
            raise InputError(f"map spec entry {i}: source {entry[0]!r} lies beyond depth {depth}")
        if v in table:
            raise InputError(f"map spec entry {i}: duplicate source {entry[0]!r}")
        table[v] = w
    for v in iter_ball(spec_q, depth):
        if v not in table:
            raise InputError(f"map spec: table is not total, {format_vertex(v)} has no image")
    return Symbol(spec_q, table=table, depth=depth, name=spec.get("name", "table"))


def dump_map_spec(phi: Symbol, depth: int | None = None) -> dict:
    """A table map spec for ``phi`` on the ball of radius ``depth``."""
    t = phi.to_table(phi.depth if depth is None else depth)
    return {
        "q": t.q,
        "kind": "table",
        "depth": t.depth,
        "entries": [[format_vertex(v), format_vertex(w)] for v, w in t.table_items()],
    }


def check_depth(phi: Symbol, depth: int) -> int:
    if depth < 1:
        raise InputError(f"depth must be >= 1, got {depth}")
    if phi.depth is not None and depth > phi.depth:
        raise InputError(f"depth {depth} exceeds the table domain depth {phi.depth}")
    return depth


def parse_function(text: str, q: int) -> TreeFunction:
    """A JSON array of ``[address, real, imag]`` rows, or one ``address real [imag]`` per line."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            rows = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"function literal: invalid JSON ({exc.msg})") from None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InputError("function literal: expected a list of [address, real, imag] rows")
    else:
        rows = [line.split() for line in stripped.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    rows = [[str(r[0]), *r[1:]] if r else r for r in rows]
    try:
        return TreeFunction.from_triples(q, rows)
    except (ValueError, IndexError) as exc:
        raise InputError(f"function literal: {exc}") from None


def load_function(path, q: int) -> TreeFunction:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_function(text, q)
