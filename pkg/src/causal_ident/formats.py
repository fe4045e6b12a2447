"""Reading graph, query and input-menu JSON documents."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import InputError
from .graph import MixedGraph, graph_from_json
from .identify import InputDist, Query
from .swig import check_token


def load_json(path: str | Path) -> Any:
    """Parse a JSON file, reporting syntax errors with line and column."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_graph(path: str | Path) -> MixedGraph:
    try:
        return graph_from_json(load_json(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _assignment(doc, what: str) -> dict:
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise InputError(f"{what} must be an object mapping variables to values")
    return {str(k): check_token(v) for k, v in doc.items()}


def _names(doc, what: str) -> list[str]:
    if doc is None:
        return []
    if not isinstance(doc, list) or not all(isinstance(v, str) for v in doc):
        raise InputError(f"{what} must be a list of variable names")
    if len(set(doc)) != len(doc):
        raise InputError(f"{what} lists a variable twice")
    return doc


def query_from_json(doc) -> Query:
    if not isinstance(doc, dict):
        raise InputError("query must be a JSON object")
    unknown = set(doc) - {"y", "do"}
    if unknown:
        raise InputError(f"unknown query field {sorted(unknown)[0]!r}")
    return Query(frozenset(_names(doc.get("y"), "query 'y'")), _assignment(doc.get("do"), "query 'do'"))


def inputs_from_json(doc) -> list[InputDist]:
    if not isinstance(doc, list):
        raise InputError("inputs must be a JSON list")
    out = []
    for i, item in enumerate(doc):
        if not isinstance(item, dict):
            raise InputError(f"input {i} must be a JSON object")
        unknown = set(item) - {"outcomes", "do", "given", "pinned"}
        if unknown:
            raise InputError(f"input {i} has unknown field {sorted(unknown)[0]!r}")
        out.append(InputDist(
            frozenset(_names(item.get("outcomes"), f"input {i} 'outcomes'")),
            _assignment(item.get("do"), f"input {i} 'do'"),
            frozenset(_names(item.get("given"), f"input {i} 'given'")),
            _assignment(item.get("pinned"), f"input {i} 'pinned'"),
            i,
        ))
    return out


def check_against_graph(g: MixedGraph, q: Query | None = None, z: list[InputDist] | None = None):
    """Cross-check that every referenced variable exists in the graph."""
    names = set(g.vertices)
    refs = []
    if q is not None:
        refs += [("query", v) for v in q.y | set(q.a_map)]
    for inp in z or []:
        refs += [(f"input {inp.id}", v)
                 for v in inp.outcomes | inp.given | set(inp.do_map) | set(inp.pinned_map)]
    for where, v in sorted(refs):
        if v not in names:
            raise InputError(f"{where} references unknown variable {v!r}")
