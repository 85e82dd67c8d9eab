"""JSON interchange format for k-graphs.

::

    {"rank": 2,
     "vertices": ["u", "v", "w"],
     "edges": [{"id": "a0", "color": 1, "source": "v", "range": "u"}, ...],
     "squares": [{"first_color": 1, "second_color": 2,
                  "ef": ["a0", "b0"], "fe": ["d0", "c0"]}, ...]}

``ef`` is the composite listed range side first; ``fe`` is the same morphism
with the two colours in the other order.  Entries may be given for either
ordering of the colour pair.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path as FsPath
from typing import Any

from .errors import ParseError
from .graph import Edge, FactorisationRules, KGraph, Skeleton, validate


def _need(obj: dict, key: str, kind, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(where, f"missing field {key!r}")
    val = obj[key]
    if kind is int and isinstance(val, bool):
        raise ParseError(f"{where}.{key}", "expected an integer")
    if not isinstance(val, kind):
        raise ParseError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return val


def kgraph_from_dict(data: Any) -> KGraph:
    if not isinstance(data, dict):
        raise ParseError("$", "top level must be an object")
    rank = _need(data, "rank", int, "$")
    vertices = _need(data, "vertices", list, "$")
    for t, v in enumerate(vertices):
        if not isinstance(v, str):
            raise ParseError(f"$.vertices[{t}]", "vertex ids must be strings")
    vset = set(vertices)
    edges = []
    for t, e in enumerate(_need(data, "edges", list, "$")):
        where = f"$.edges[{t}]"
        eid = _need(e, "id", str, where)
        color = _need(e, "color", int, where)
        src = _need(e, "source", str, where)
        rng = _need(e, "range", str, where)
        for key, end in (("source", src), ("range", rng)):
            if end not in vset:
                raise ParseError(f"{where}.{key}", f"unknown vertex {end!r}")
        if not 1 <= color <= rank:
            raise ParseError(f"{where}.color", f"color {color} outside 1..{rank}")
        edges.append(Edge(eid, color, src, rng))
    colors = {e.id: e.color for e in edges}
    squares = {}
    for t, sq in enumerate(data.get("squares", [])):
        where = f"$.squares[{t}]"
        c1 = _need(sq, "first_color", int, where)
        c2 = _need(sq, "second_color", int, where)
        ef = _need(sq, "ef", list, where)
        fe = _need(sq, "fe", list, where)
        for key, pair in (("ef", ef), ("fe", fe)):
            if len(pair) != 2 or not all(isinstance(x, str) for x in pair):
                raise ParseError(f"{where}.{key}", "expected two edge ids")
            for x in pair:
                if x not in colors:
                    raise ParseError(f"{where}.{key}", f"unknown edge {x!r}")
        if c1 == c2:
            raise ParseError(where, "a square needs two distinct colors")
        if (colors[ef[0]], colors[ef[1]], colors[fe[0]], colors[fe[1]]) != (c1, c2, c2, c1):
            raise ParseError(where, "edge colors do not match first_color/second_color")
        key, img = (tuple(ef), tuple(fe)) if c1 < c2 else (tuple(fe), tuple(ef))
        if key in squares and squares[key] != img:
            raise ParseError(where, f"conflicting square for {key}")
        squares[key] = img
    return validate(Skeleton(rank, tuple(vertices), tuple(edges)), FactorisationRules(squares))


def kgraph_to_dict(g: KGraph) -> dict:
    edge = g.edge
    return {
        "rank": g.rank,
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "color": e.color, "source": e.source, "range": e.range} for e in g.edges
        ],
        "squares": [
            {
                "first_color": edge[e].color,
                "second_color": edge[f].color,
                "ef": [e, f],
                "fe": [f2, e2],
            }
            for (e, f), (f2, e2) in sorted(g.rules.squares.items())
        ],
    }


def parse_kgraph(source: str | os.PathLike) -> KGraph:
    """Read a k-graph from a file path, JSON text, or a shipped fixture name."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        p = FsPath(source)
        if p.exists():
            text = p.read_text(encoding="utf-8")
        elif isinstance(source, str) and source in fixture_names():
            text = fixture_text(source)
        else:
            raise ParseError(str(source), "no such file or fixture")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return kgraph_from_dict(data)


def dump_kgraph(g: KGraph) -> str:
    return json.dumps(kgraph_to_dict(g), indent=2) + "\n"


def fixture_names() -> list[str]:
    root = resources.files("kgraph") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    return (resources.files("kgraph") / "fixtures" / f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> KGraph:
    return parse_kgraph(fixture_text(name))
