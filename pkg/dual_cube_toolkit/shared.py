"""
Shared utilities for the dual cube toolkit.

Payload builders turn the package's values into JSON-ready dictionaries, and
the DOT renderers produce text for standard graph viewers. Every vertex is
rendered as its bit string so outputs are stable across runs.
"""
import json
from typing import Any, Dict, Iterable, List

from .topology import Edge, Graph, Label

TREE_COLOURS = (
    "red", "blue", "darkgreen", "orange", "purple",
    "brown", "magenta", "cyan", "gold", "gray40",
)


def label_list(vertices: Iterable[Label]) -> List[str]:
    return [str(v) for v in sorted(vertices)]


def edge_list(edges: Iterable[Edge]) -> List[List[str]]:
    """Edges as sorted pairs of bit strings, in sorted order."""
    pairs = sorted(tuple(sorted(edge)) for edge in edges)
    return [[str(u), str(v)] for u, v in pairs]


def build_graph_payload(graph: Graph) -> Dict[str, Any]:
    """
    Build the JSON document for a graph.

    Args:
        graph: Any graph of this package (a dual cube carries its order ``n``)

    Returns:
        Dictionary with ``n``, ``vertices`` and ``edges`` keys
    """
    return {
        "n": getattr(graph, "n", None),
        "vertices": label_list(graph.vertices()),
        "edges": edge_list(graph.edges()),
    }


def build_tree_set_payload(tree_set) -> Dict[str, Any]:
    """
    Build the JSON document for a tree set.

    Args:
        tree_set: A TreeSet produced by one of the tree constructors

    Returns:
        Dictionary with ``n``, ``terminals``, ``trees`` and ``case`` keys
    """
    return {
        "n": tree_set.order,
        "terminals": label_list(tree_set.terminals.vertices),
        "trees": [edge_list(tree) for tree in tree_set.trees],
        "case": tree_set.case,
    }


def build_cut_set_payload(cut_set) -> Dict[str, Any]:
    return {
        "n": cut_set.order,
        "r": cut_set.r,
        "removed": label_list(cut_set.removed),
        "census": list(cut_set.census),
    }


def _witness_value(witness: Any) -> Any:
    if witness is None:
        return None
    if isinstance(witness, Label):
        return str(witness)
    if isinstance(witness, (set, frozenset)):
        return sorted(_witness_value(item) for item in witness)
    if isinstance(witness, (list, tuple)):
        return [_witness_value(item) for item in witness]
    return witness


def build_report_payload(report) -> Dict[str, Any]:
    """
    Build the JSON document for a verification report.

    Failed checks keep their witness; vertices inside witnesses are rendered
    as bit strings.
    """
    return {
        "subject": report.subject,
        "overall": report.overall,
        "checks": [
            {
                "name": check.name,
                "scope": check.scope,
                "passed": check.passed,
                "witness": _witness_value(check.witness),
            }
            for check in report.checks
        ],
    }


def dumps(payload: Any) -> str:
    """Serialize a payload; key order is the builder's insertion order."""
    return json.dumps(payload, indent=2) + "\n"


def _quote(v: Label) -> str:
    return f'"{v}"'


def render_graph_dot(graph: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in graph.vertices():
        lines.append(f"  {_quote(v)};")
    for u, v in graph.edges():
        lines.append(f"  {_quote(u)} -- {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_tree_set_dot(tree_set) -> str:
    """
    Render a tree set with one colour per tree.

    Terminals are drawn as filled boxes; only vertices on some tree appear.
    """
    terminals = set(tree_set.terminals.vertices)
    vertices = set(terminals)
    for tree in tree_set.trees:
        for u, v in tree:
            vertices.update((u, v))

    lines = [f"graph D{tree_set.order} {{"]
    for v in sorted(vertices):
        if v in terminals:
            lines.append(f"  {_quote(v)} [shape=box, style=filled];")
        else:
            lines.append(f"  {_quote(v)};")
    for index, tree in enumerate(tree_set.trees):
        colour = TREE_COLOURS[index % len(TREE_COLOURS)]
        for u, v in sorted(tree):
            lines.append(
                f'  {_quote(u)} -- {_quote(v)} [color={colour}, label="T{index + 1}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_cut_set_dot(graph: Graph, cut_set) -> str:
    removed = set(cut_set.removed)
    lines = [f"graph D{cut_set.order} {{"]
    for v in graph.vertices():
        if v in removed:
            lines.append(f"  {_quote(v)} [style=filled, fillcolor=gray];")
        else:
            lines.append(f"  {_quote(v)};")
    for u, v in graph.edges():
        if u in removed or v in removed:
            lines.append(f"  {_quote(u)} -- {_quote(v)} [style=dashed];")
        else:
            lines.append(f"  {_quote(u)} -- {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
