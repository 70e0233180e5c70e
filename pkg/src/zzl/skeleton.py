"""Combinatorial skeleton of a finite-node datum: a star graph with one
bulk vertex, one vertex per node, and a Phi/Psi edge pair per node.

No relations, potential, stability condition, or mutation rule is
attached; the skeleton records only the coupling pattern.  The DOT and
JSON exports are byte-deterministic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .assembly import FiniteNodeDatum
from .linalg import format_rational


class Edge(NamedTuple):
    source: str
    target: str
    tag: str  # "Phi" or "Psi"


class NodeAnnotation(NamedTuple):
    label: str
    normalized_class: Fraction
    quotient_rank: int


@dataclass(frozen=True)
class Skeleton:
    bulk_vertex: str
    node_vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    annotations: tuple[NodeAnnotation, ...]

    def __post_init__(self) -> None:
        if len(set(self.node_vertices)) != len(self.node_vertices):
            raise ValueError("node vertices must be distinct")
        if self.bulk_vertex in self.node_vertices:
            raise ValueError("bulk vertex collides with a node vertex")
        expected = []
        for label in self.node_vertices:
            expected.append(Edge(label, self.bulk_vertex, "Phi"))
            expected.append(Edge(self.bulk_vertex, label, "Psi"))
        if list(self.edges) != expected:
            raise ValueError("each node needs exactly a Phi edge in and a Psi edge out")
        if tuple(a.label for a in self.annotations) != self.node_vertices:
            raise ValueError("annotations must cover every node, in order")


def skeleton_of(datum: FiniteNodeDatum) -> Skeleton:
    """Star graph centered at the bulk, in node order, with class annotations."""
    labels = datum.node_labels
    edges: list[Edge] = []
    annotations: list[NodeAnnotation] = []
    for k, node in enumerate(datum.nodes):
        edges.append(Edge(node.label, datum.bulk_label, "Phi"))
        edges.append(Edge(datum.bulk_label, node.label, "Psi"))
        annotations.append(
            NodeAnnotation(
                node.label,
                datum.shadow.class_vector[k],
                datum.shadow_quotient.nodes[k].a_dim,
            )
        )
    return Skeleton(datum.bulk_label, labels, tuple(edges), tuple(annotations))


_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _dot_id(name: str) -> str:
    if _DOT_ID.match(name):
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def to_dot(k: Skeleton) -> str:
    """Deterministic directed-graph text: vertices bulk-first, then the
    Phi/Psi edge pair of each node in node order."""
    lines = ["digraph skeleton {"]
    lines.append(f'  {_dot_id(k.bulk_vertex)} [kind="bulk"];')
    for ann in k.annotations:
        lines.append(
            f'  {_dot_id(ann.label)} [kind="node", '
            f'class="{format_rational(ann.normalized_class)}", '
            f'rank="{ann.quotient_rank}"];'
        )
    for index, label in enumerate(k.node_vertices, start=1):
        lines.append(
            f'  {_dot_id(label)} -> {_dot_id(k.bulk_vertex)} [label="Phi_{index}"];'
        )
        lines.append(
            f'  {_dot_id(k.bulk_vertex)} -> {_dot_id(label)} [label="Psi_{index}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(k: Skeleton) -> str:
    payload = {
        "bulk": k.bulk_vertex,
        "vertices": [k.bulk_vertex, *k.node_vertices],
        "edges": [
            {"from": e.source, "to": e.target, "tag": e.tag} for e in k.edges
        ],
        "annotations": {
            a.label: {
                "class": format_rational(a.normalized_class),
                "rank": a.quotient_rank,
            }
            for a in k.annotations
        },
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
