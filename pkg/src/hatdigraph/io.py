"""DOT and JSON serialisation for digraphs and templates."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .graph import FiniteDigraph

__all__ = [
    "to_dot",
    "to_json",
    "from_json",
    "export",
    "load_graph",
    "template_to_json",
    "template_from_json",
    "load_template",
]


def _jsonable(x: Any) -> Any:
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    return x


def _tupled(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_tupled(y) for y in x)
    return x


def _label_text(lab: Any) -> str:
    if isinstance(lab, tuple):
        return "(" + ",".join(_label_text(y) for y in lab) + ")"
    return str(lab)


def _node_name(G: FiniteDigraph, v: int) -> str:
    if G.level is None:
        return f"v{v}"
    return f"v{int(G.level[v])}_{v}"


def to_dot(G: FiniteDigraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(G.n):
        lab = _label_text(G.labels[v]) if G.labels is not None else str(v)
        lab = lab.replace('"', '\\"')
        lines.append(f'  "{_node_name(G, v)}" [label="{lab}"];')
    for u, v in G.arcs.tolist():
        lines.append(f'  "{_node_name(G, u)}" -> "{_node_name(G, v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(G: FiniteDigraph) -> str:
    doc = {
        "n": G.n,
        "levels": None if G.level is None else G.level.tolist(),
        "arcs": G.arcs.tolist(),
        "labels": None if G.labels is None else _jsonable(G.labels),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> FiniteDigraph:
    doc = json.loads(text)
    labels = doc.get("labels")
    if labels is not None:
        labels = [_tupled(x) for x in labels]
    return FiniteDigraph(doc["n"], doc["arcs"], level=doc.get("levels"), labels=labels)


def export(G: FiniteDigraph, fmt: str, path: str | Path) -> Path:
    """Write ``G`` as ``dot`` or ``json``; output is byte-stable for equal graphs."""
    if fmt == "dot":
        text = to_dot(G)
    elif fmt == "json":
        text = to_json(G)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def load_graph(path: str | Path) -> FiniteDigraph:
    return from_json(Path(path).read_text())


def template_to_json(T) -> str:
    doc: dict[str, Any] = {"levels": list(T.levels), "arcs": [list(a) for a in T.arcs]}
    if T.colours is not None:
        doc["colours"] = list(T.colours)
    return json.dumps(doc, separators=(",", ":")) + "\n"


def template_from_json(text: str):
    from .constructions import LeveledTemplate

    doc = json.loads(text)
    return LeveledTemplate(
        levels=doc["levels"],
        arcs=[tuple(a) for a in doc["arcs"]],
        colours=doc.get("colours"),
    )


def load_template(path: str | Path):
    return template_from_json(Path(path).read_text())
