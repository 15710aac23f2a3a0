"""Colored graph of a modal CNF formula.

Literal nodes come in complementary pairs joined by a consistency edge.
Every clause occurrence gets its own node: top clauses have color 1, the
body of a modal literal gets a color determined by the modality family and
the literal's polarity. Membership and nesting edges form ``e1``; edges
from the body of an ``@i`` literal to the node of ``i`` form ``e2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..formula import AT, Clause, Literal, ModalCnf, atoms_of, canonicalize, is_aux_atom, modalities_of

__all__ = [
    "ClauseId", "LabeledClause", "ColoredGraph", "assign_ids", "type_colors",
    "build_graph", "build_graph_layered", "export_graph", "LITERAL_COLOR", "TOP_COLOR",
]

LITERAL_COLOR = 0
TOP_COLOR = 1


@dataclass(frozen=True)
class ClauseId:
    depth: int
    kind: int
    index: int

    def __iter__(self):
        return iter((self.depth, self.kind, self.index))


@dataclass(frozen=True)
class LabeledClause:
    """One clause occurrence; ``path`` indexes top clause then modal literals."""

    path: tuple
    clause: Clause
    id: ClauseId
    parent: Optional[tuple] = None
    index_atom: Optional[str] = None


def type_colors(phi: ModalCnf) -> dict:
    """The encoder ``s``: ``(family, polarity) -> color``, polarity 1 for ``~[m]``.

    Families are indexed in first-occurrence order; all ``@`` modalities share
    one family so that maps between nominals keep clause colors.
    """
    families = []
    for m in modalities_of(phi):
        if m.family not in families:
            families.append(m.family)
    return {(f, pol): 2 + 2 * i + pol for i, f in enumerate(families) for pol in (0, 1)}


def assign_ids(phi: ModalCnf) -> list:
    """Label every clause occurrence with ``(depth, type, index)`` in DFS order."""
    s = type_colors(phi)
    out = []

    def visit(clause, path, depth, kind, parent, index_atom):
        out.append(LabeledClause(path, clause, ClauseId(depth, kind, len(out)), parent, index_atom))
        for j, ml in enumerate(clause.modal_literals):
            visit(ml.body, path + (j,), depth + 1, s[(ml.modality.family, 0 if ml.positive else 1)],
                  path, ml.modality.index)

    for i, c in enumerate(canonicalize(phi).clauses):
        visit(c, (i,), 0, TOP_COLOR, None, None)
    return out


@dataclass
class ColoredGraph:
    colors: list
    e1: frozenset
    e2: frozenset
    labels: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.colors)

    def color_count(self) -> int:
        return len(set(self.colors))

    def __post_init__(self):
        for u, v in self.e1 | self.e2:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
        if self.labels and len(self.labels) != self.n:
            raise ValueError("one label per node expected")


def _edge(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


def _build(phi: ModalCnf, layered: bool, pin_aux: bool):
    phi = canonicalize(phi)
    labeled = assign_ids(phi)
    colors, labels, node_map = [], [], {}
    e1, e2 = set(), set()

    if layered:
        keys = set()
        for lc in labeled:
            keys.update((l.atom, lc.id.depth) for l in lc.clause.atom_literals)
            if lc.index_atom is not None:
                keys.add((lc.index_atom, lc.id.depth - 1))
        literal_keys = sorted(keys, key=lambda k: (k[1], k[0]))
    else:
        literal_keys = [(a, None) for a in sorted(atoms_of(phi))]

    base = 2 + len(type_colors(phi))
    pinned = 0
    for atom, depth in literal_keys:
        pair = []
        for positive in (True, False):
            lit = Literal(atom, positive)
            node_map[lit if depth is None else (lit, depth)] = len(colors)
            pair.append(len(colors))
            if pin_aux and is_aux_atom(atom):
                colors.append(base + pinned)
                pinned += 1
            else:
                colors.append(LITERAL_COLOR)
            labels.append(str(lit) if depth is None else f"{lit}@{depth}")
        e1.add(_edge(*pair))

    def lit_node(lit, depth):
        return node_map[lit if not layered else (lit, depth)]

    for lc in labeled:
        node = len(colors)
        node_map[lc.path] = node
        colors.append(lc.id.kind)
        labels.append("C" + ".".join(map(str, lc.path)))
        for lit in lc.clause.atom_literals:
            e1.add(_edge(node, lit_node(lit, lc.id.depth)))
        if lc.parent is not None:
            e1.add(_edge(node, node_map[lc.parent]))
            if lc.index_atom is not None:
                e2.add(_edge(node, lit_node(Literal(lc.index_atom), lc.id.depth - 1)))
    graph = ColoredGraph(colors, frozenset(e1), frozenset(e2), labels)
    return graph, node_map


def build_graph(phi: ModalCnf, pin_aux: bool = True):
    """Graph and node map; literal nodes are shared across depths."""
    return _build(phi, layered=False, pin_aux=pin_aux)


def build_graph_layered(phi: ModalCnf, pin_aux: bool = True):
    """Like :func:`build_graph` but with one literal-node pair per (atom, depth).

    Node map keys for literals are ``(Literal, depth)``.
    """
    return _build(phi, layered=True, pin_aux=pin_aux)


_SHAPES = ["circle", "box", "diamond", "hexagon", "triangle", "octagon", "invtriangle", "house"]


def export_graph(graph: ColoredGraph, fmt: str = "dot") -> str:
    """Render as Graphviz ``dot`` or as a colored edge list (``cel``).

    In the edge list each ``e2`` edge is replaced by a subdivision node of a
    reserved color, so tools that know a single edge sort still see the two
    sorts apart. Nodes are numbered from 1.
    """
    if fmt == "dot":
        lines = ["graph G {"]
        for v, (c, lab) in enumerate(zip(graph.colors, graph.labels or [str(v) for v in range(graph.n)])):
            shape = _SHAPES[c % len(_SHAPES)]
            lines.append(f'  n{v} [label="{lab}", shape={shape}, xlabel="{c}"];')
        for u, v in sorted(graph.e1):
            lines.append(f"  n{u} -- n{v};")
        for u, v in sorted(graph.e2):
            lines.append(f"  n{u} -- n{v} [style=dashed];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt in ("cel", "colored-edge-list"):
        colors = list(graph.colors)
        edges = sorted(graph.e1)
        reserved = max(colors, default=-1) + 1
        for u, v in sorted(graph.e2):
            x = len(colors)
            colors.append(reserved)
            edges += [(u, x), (x, v)]
        lines = [f"p edge {len(colors)} {len(edges)}"]
        lines += [f"n {v + 1} {c}" for v, c in enumerate(colors)]
        lines += [f"e {u + 1} {v + 1}" for u, v in edges]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")
