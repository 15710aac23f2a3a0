"""Automorphism group generators of a two-sorted colored graph.

Equitable refinement plus individualization, in the style of nauty but
kept deliberately small: the leftmost path of the search tree is the
reference leaf, and for each level (deepest first) every vertex of the
target cell that is not yet known to share an orbit with the reference
choice is tried once, looking for any leaf equivalent to the reference.
The generators found this way generate the whole group, and the group
order is the product of the orbit sizes along the reference path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import ColoredGraph

__all__ = ["GeneratorSet", "find_automorphisms", "is_automorphism", "GraphError", "ORDER_CAP"]

ORDER_CAP = 10 ** 6


class GraphError(ValueError):
    pass


@dataclass
class GeneratorSet:
    generators: list           # each a list p with p[v] the image of node v
    order: Optional[int]       # None above ORDER_CAP
    orbit_sizes: list

    def __len__(self):
        return len(self.generators)


def is_automorphism(graph: ColoredGraph, perm) -> bool:
    n = graph.n
    if sorted(perm) != list(range(n)):
        return False
    if any(graph.colors[v] != graph.colors[perm[v]] for v in range(n)):
        return False
    for edges in (graph.e1, graph.e2):
        for u, v in edges:
            a, b = perm[u], perm[v]
            if (a, b) not in edges and (b, a) not in edges:
                return False
    return True


class _Search:
    def __init__(self, graph: ColoredGraph):
        n = graph.n
        self.graph = graph
        self.adj1 = [[] for _ in range(n)]
        self.adj2 = [[] for _ in range(n)]
        for adj, edges in ((self.adj1, graph.e1), (self.adj2, graph.e2)):
            for u, v in edges:
                adj[u].append(v)
                adj[v].append(u)

    def refine(self, cells: list) -> list:
        """Coarsest equitable refinement; sub-cells ordered by signature."""
        while True:
            cell_of = {}
            for i, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = i
            new = []
            for cell in cells:
                if len(cell) == 1:
                    new.append(cell)
                    continue
                groups = {}
                for v in cell:
                    sig = (tuple(sorted(cell_of[u] for u in self.adj1[v])),
                           tuple(sorted(cell_of[u] for u in self.adj2[v])))
                    groups.setdefault(sig, []).append(v)
                new.extend(groups[k] for k in sorted(groups))
            if len(new) == len(cells):
                return new
            cells = new

    def certificate(self, cells: list) -> tuple:
        cell_of = {v: i for i, c in enumerate(cells) for v in c}
        return tuple(
            (len(c), tuple(sorted(cell_of[u] for u in self.adj1[c[0]])),
             tuple(sorted(cell_of[u] for u in self.adj2[c[0]])))
            for c in cells)

    @staticmethod
    def target(cells: list) -> Optional[int]:
        best = None
        for i, c in enumerate(cells):
            if len(c) > 1 and (best is None or len(c) < len(cells[best])):
                best = i
        return best

    def individualize(self, cells: list, i: int, v: int) -> list:
        rest = [u for u in cells[i] if u != v]
        return self.refine(cells[:i] + [[v], rest] + cells[i + 1:])


def _orbit(start: int, gens: list) -> set:
    orbit, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for g in gens:
            y = g[x]
            if y not in orbit:
                orbit.add(y)
                todo.append(y)
    return orbit


def find_automorphisms(graph: ColoredGraph) -> GeneratorSet:
    """Generators of the color-, e1- and e2-preserving automorphism group."""
    n = graph.n
    if len(graph.colors) != n or any(not isinstance(c, int) for c in graph.colors):
        raise GraphError("every node needs an integer color")
    if n == 0:
        return GeneratorSet([], 1, [])
    search = _Search(graph)
    by_color = {}
    for v, c in enumerate(graph.colors):
        by_color.setdefault(c, []).append(v)
    cells = search.refine([by_color[c] for c in sorted(by_color)])

    # reference (leftmost) path
    path = []            # (cells before individualizing, target index, chosen vertex)
    certs = [search.certificate(cells)]
    while (t := search.target(cells)) is not None:
        v = cells[t][0]
        path.append((cells, t, v))
        cells = search.individualize(cells, t, v)
        certs.append(search.certificate(cells))
    reference = [c[0] for c in cells]

    def leaf_map(leaf_cells) -> list:
        perm = [0] * n
        for a, c in zip(reference, leaf_cells):
            perm[a] = c[0]
        return perm

    def explore(cells, level) -> Optional[list]:
        if search.certificate(cells) != certs[level]:
            return None
        t = search.target(cells)
        if t is None:
            perm = leaf_map(cells)
            return perm if is_automorphism(graph, perm) else None
        for w in cells[t]:
            found = explore(search.individualize(cells, t, w), level + 1)
            if found is not None:
                return found
        return None

    generators, orbit_sizes = [], []
    for level in range(len(path) - 1, -1, -1):
        cells_k, t, v = path[level]
        orbit = _orbit(v, generators)
        for u in cells_k[t]:
            if u in orbit:
                continue
            perm = explore(search.individualize(cells_k, t, u), level + 1)
            if perm is not None:
                if not is_automorphism(graph, perm) or perm[v] != u:
                    raise GraphError("search produced a map that is not an automorphism")
                generators.append(perm)
                orbit = _orbit(v, generators)
        orbit_sizes.append(len(orbit))
    orbit_sizes.reverse()

    order = 1
    for s in orbit_sizes:
        order *= s
    return GeneratorSet(generators, order if order <= ORDER_CAP else None, orbit_sizes)
