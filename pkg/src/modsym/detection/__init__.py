"""Symmetry detection through colored-graph automorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..formula import Literal, ModalCnf, canonicalize
from ..permutation import (Permutation, PermutationSequence, is_layered_symmetry,
                           is_symmetry)
from .automorphism import ORDER_CAP, GeneratorSet, GraphError, find_automorphisms, is_automorphism
from .graph import (ClauseId, ColoredGraph, LabeledClause, assign_ids, build_graph,
                    build_graph_layered, export_graph, type_colors)

__all__ = [
    "ClauseId", "ColoredGraph", "LabeledClause", "GeneratorSet", "GraphError",
    "SymmetryReport", "VerificationError", "assign_ids", "type_colors", "build_graph",
    "build_graph_layered", "export_graph", "find_automorphisms", "is_automorphism",
    "automorphism_to_symmetry", "automorphism_to_sequence", "detect_symmetries",
    "detect_layered_symmetries", "ORDER_CAP",
]


class VerificationError(RuntimeError):
    """A generator failed its symmetry check; always a bug."""


@dataclass
class SymmetryReport:
    formula: ModalCnf
    generators: list
    group_order: Optional[int]
    verified: list
    layered: bool = False
    nodes: int = 0
    colors: int = 0
    e1: int = 0
    e2: int = 0
    orbit_sizes: list = field(default_factory=list)

    @property
    def all_verified(self) -> bool:
        return all(self.verified)

    def to_text(self, machine: bool = False) -> str:
        order = "unknown" if self.group_order is None else str(self.group_order)
        if machine:
            lines = [
                f"layered: {str(self.layered).lower()}",
                f"nodes: {self.nodes}",
                f"colors: {self.colors}",
                f"e1: {self.e1}",
                f"e2: {self.e2}",
                f"group_order: {order}",
                f"generators: {len(self.generators)}",
            ]
            lines += [f"generator: {g}" for g in self.generators]
            lines.append(f"verified: {str(self.all_verified).lower()}")
            return "\n".join(lines) + "\n"
        kind = "layered symmetries" if self.layered else "symmetries"
        if not self.generators:
            return f"no non-trivial {kind} (graph: {self.nodes} nodes, {self.colors} colors)\n"
        lines = [f"{len(self.generators)} generator(s) of the {kind} group, order {order}:"]
        lines += [f"  {g}" for g in self.generators]
        lines.append("all generators verified" if self.all_verified else "VERIFICATION FAILED")
        return "\n".join(lines) + "\n"


def _literal_image(perm, node_map) -> dict:
    back = {node: key for key, node in node_map.items()}
    out = {}
    for key, node in node_map.items():
        if isinstance(key, tuple) and key and isinstance(key[0], int):
            continue  # clause node
        img = back[perm[node]]
        if isinstance(img, tuple) and img and isinstance(img[0], int):
            raise GraphError(f"literal node {key} mapped to clause node {img}")
        out[key] = img
    return out


def automorphism_to_symmetry(perm, node_map) -> Permutation:
    """Restrict a node permutation to literal nodes, read back as literals."""
    return Permutation(_literal_image(perm, node_map))


def automorphism_to_sequence(perm, node_map) -> PermutationSequence:
    """Layered counterpart: one literal permutation per depth."""
    per_depth = {}
    for (lit, d), (img, d2) in _literal_image(perm, node_map).items():
        if d != d2:
            raise GraphError(f"automorphism moves {lit} from depth {d} to depth {d2}")
        per_depth.setdefault(d, {})[lit] = img
    depth = max(per_depth, default=-1) + 1
    return PermutationSequence(Permutation(per_depth.get(d, {})) for d in range(depth))


def _report(phi, graph, gens: GeneratorSet, convert, verify, layered) -> SymmetryReport:
    out, flags = [], []
    for perm in gens.generators:
        if not is_automorphism(graph, perm):
            raise VerificationError("generator does not preserve the graph")
        sym = convert(perm)
        ok = verify(sym, phi)
        if not ok:
            raise VerificationError(f"generator {sym} is not a symmetry of the formula")
        out.append(sym)
        flags.append(ok)
    return SymmetryReport(phi, out, gens.order, flags, layered, graph.n, graph.color_count(),
                          len(graph.e1), len(graph.e2), gens.orbit_sizes)


def detect_symmetries(phi: ModalCnf, include_aux: bool = False) -> SymmetryReport:
    """Generators of the symmetry group of ``phi``, each verified.

    Fresh atoms from the CNF transform are pinned unless ``include_aux``.
    """
    phi = canonicalize(phi)
    graph, node_map = build_graph(phi, pin_aux=not include_aux)
    gens = find_automorphisms(graph)
    return _report(phi, graph, gens, lambda p: automorphism_to_symmetry(p, node_map),
                   is_symmetry, layered=False)


def detect_layered_symmetries(phi: ModalCnf, include_aux: bool = False) -> SymmetryReport:
    phi = canonicalize(phi)
    graph, node_map = build_graph_layered(phi, pin_aux=not include_aux)
    gens = find_automorphisms(graph)
    return _report(phi, graph, gens, lambda p: automorphism_to_sequence(p, node_map),
                   is_layered_symmetry, layered=True)
