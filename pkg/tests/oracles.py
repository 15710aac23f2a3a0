"""Independent reference implementations used only by the tests.

Nothing here calls the library's evaluation, permutation application or
automorphism code; formulas are converted to plain nested tuples first.
"""

from __future__ import annotations

import itertools
from math import factorial

from modsym.formula import Clause, ModalCnf


# ---------------------------------------------------------------- formulas as plain data
# clause  -> frozenset of items
# item    -> ("lit", atom, positive) | ("box", kind, name, positive, clause)


def plain_clause(c: Clause) -> frozenset:
    items = [("lit", l.atom, l.positive) for l in c.atom_literals]
    items += [("box", ml.modality.kind, ml.modality.name, ml.positive, plain_clause(ml.body))
              for ml in c.modal_literals]
    return frozenset(items)


def plain(phi: ModalCnf) -> frozenset:
    return frozenset(plain_clause(c) for c in phi.clauses)


def literal_map_from_atoms(assign: dict) -> dict:
    """``{atom: (atom', positive')}`` -> full literal map on (atom, sign) pairs."""
    out = {}
    for a, (b, pos) in assign.items():
        out[(a, True)] = (b, pos)
        out[(a, False)] = (b, not pos)
    return out


def apply_plain_clause(maps: list, clause: frozenset, depth: int = 0) -> frozenset:
    """Apply ``maps[depth]`` at each depth; identity below the last map."""
    if depth < len(maps):
        mp = maps[depth]
    else:
        mp = {}
    out = []
    for item in clause:
        if item[0] == "lit":
            b, pos = mp.get((item[1], item[2]), (item[1], item[2]))
            out.append(("lit", b, pos))
        else:
            _, kind, name, pol, body = item
            if kind == "at":
                b, pos = mp.get((name, True), (name, True))
                assert pos, "index atom sent to a negative literal"
                name = b
            out.append(("box", kind, name, pol, apply_plain_clause(maps, body, depth + 1)))
    return frozenset(out)


def apply_plain(maps: list, phi: frozenset) -> frozenset:
    return frozenset(apply_plain_clause(maps, c) for c in phi)


def plain_depth(phi: frozenset) -> int:
    def d(c):
        return max((1 + d(i[4]) for i in c if i[0] == "box"), default=0)
    return max((d(c) for c in phi), default=0)


def plain_atoms(phi: frozenset) -> set:
    out = set()

    def walk(c):
        for i in c:
            if i[0] == "lit":
                out.add(i[1])
            else:
                if i[1] == "at":
                    out.add(i[2])
                walk(i[4])
    for c in phi:
        walk(c)
    return out


def consistent_maps(atoms) -> list:
    """Every consistent literal permutation over ``atoms`` (n! * 2^n of them)."""
    atoms = sorted(atoms)
    out = []
    for perm in itertools.permutations(atoms):
        for signs in itertools.product((True, False), repeat=len(atoms)):
            out.append(literal_map_from_atoms(dict(zip(atoms, zip(perm, signs)))))
    assert len(out) == factorial(len(atoms)) * 2 ** len(atoms)
    return out


def freeze(mp: dict, atoms) -> tuple:
    return tuple(mp.get((a, s), (a, s)) for a in sorted(atoms) for s in (True, False))


def brute_force_group(phi: ModalCnf) -> set:
    """All consistent symmetries of ``phi`` as frozen literal maps."""
    p = plain(phi)
    atoms = plain_atoms(p)
    depth = plain_depth(p) + 1
    found = set()
    for mp in consistent_maps(atoms):
        try:
            if apply_plain([mp] * depth, p) == p:
                found.add(freeze(mp, atoms))
        except AssertionError:
            continue
    return found


def depth_atoms(phi: frozenset) -> list:
    """Atoms with a literal at each depth; an ``@i`` index counts at its parent's depth."""
    out = []

    def walk(c, d):
        while len(out) <= d:
            out.append(set())
        for i in c:
            if i[0] == "lit":
                out[d].add(i[1])
            else:
                if i[1] == "at":
                    out[d].add(i[2])
                walk(i[4], d + 1)
    for c in phi:
        walk(c, 0)
    return [sorted(a) for a in out]


def brute_force_layered_group(phi: ModalCnf) -> set:
    """Layered symmetries, each depth restricted to the atoms occurring there."""
    p = plain(phi)
    per_depth = depth_atoms(p)
    found = set()
    for combo in itertools.product(*(consistent_maps(a) for a in per_depth)):
        try:
            if apply_plain(list(combo), p) == p:
                found.add(tuple(freeze(mp, a) for mp, a in zip(combo, per_depth)))
        except AssertionError:
            continue
    return found


def close_group(gens: list, atoms) -> set:
    """Group generated by frozen literal maps (tuples per ``freeze``)."""
    atoms = sorted(atoms)
    keys = [(a, s) for a in atoms for s in (True, False)]
    ident = tuple(keys)
    as_dict = [dict(zip(keys, g)) for g in gens]
    group, todo = {ident}, [ident]
    while todo:
        cur = dict(zip(keys, todo.pop()))
        for g in as_dict:
            nxt = tuple(g[cur[k]] for k in keys)
            if nxt not in group:
                group.add(nxt)
                todo.append(nxt)
    return group


def close_layered_group(gens: list, per_depth: list) -> set:
    """Group generated by tuples of per-depth frozen maps (atoms per depth given)."""
    keys = [[(a, v) for a in atoms for v in (True, False)] for atoms in per_depth]
    ident = tuple(tuple(k) for k in keys)
    as_dicts = [[dict(zip(k, d)) for k, d in zip(keys, g)] for g in gens]
    group, todo = {ident}, [ident]
    while todo:
        cur = todo.pop()
        for g in as_dicts:
            nxt = tuple(tuple(g[d][x] for x in cur[d]) for d in range(len(keys)))
            if nxt not in group:
                group.add(nxt)
                todo.append(nxt)
    return group


def freeze_sequence(seq, per_depth: list) -> tuple:
    return tuple(freeze_perm(seq.at_depth(d), atoms) for d, atoms in enumerate(per_depth))


def freeze_perm(sigma, atoms) -> tuple:
    """Library permutation -> frozen map in the oracle's key order."""
    from modsym.formula import Literal
    out = []
    for a in sorted(atoms):
        for s in (True, False):
            img = sigma(Literal(a, s))
            out.append((img.atom, img.positive))
    return tuple(out)


# ---------------------------------------------------------------- semantics


def eval_clause_set(model, clause: frozenset) -> set:
    """Worlds of ``model`` where the plain clause holds (extension-set style)."""
    worlds = set(model.worlds)
    rel = {}
    for m, pairs in model.relations.items():
        for a, b in pairs:
            rel.setdefault((m, a), set()).add(b)

    def succ(kind, name, w):
        if kind == "rel":
            return rel.get((name, w), set())
        if kind == "universal":
            return worlds
        return {v for v in worlds if name in model.valuation[v]}

    out = set()
    for item in clause:
        if item[0] == "lit":
            _, a, pos = item
            out |= {w for w in worlds if (a in model.valuation[w]) == pos}
        else:
            _, kind, name, pos, body = item
            inner = eval_clause_set(model, body)
            boxed = {w for w in worlds if succ(kind, name, w) <= inner}
            out |= boxed if pos else worlds - boxed
    return out


def naive_satisfies(model, phi: ModalCnf) -> bool:
    return all(model.point in eval_clause_set(model, c) for c in plain(phi))


def naive_permute_model(model, mp: dict):
    """Per-world valuation image under a consistent literal map."""
    from modsym.models import FiniteModel
    val = {}
    for w in model.worlds:
        v = set(model.valuation[w])
        touched = {a for (a, _) in mp}
        new = {a for a in v if a not in touched}
        for a in touched:
            b, pos = mp[(a, a in v)]
            if pos:
                new.add(b)
        val[w] = new
    return FiniteModel(model.worlds, model.point, val, model.relations)


# ---------------------------------------------------------------- graphs


def brute_force_automorphisms(graph) -> list:
    """Every color-preserving node bijection that preserves E1 and E2."""
    classes = {}
    for v, c in enumerate(graph.colors):
        classes.setdefault(c, []).append(v)
    groups = list(classes.values())
    e1 = {frozenset(e) for e in graph.e1}
    e2 = {frozenset(e) for e in graph.e2}
    out = []
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [0] * graph.n
        for g, img in zip(groups, choice):
            for a, b in zip(g, img):
                perm[a] = b
        if all(frozenset((perm[u], perm[v])) in e1 for u, v in graph.e1) and \
           all(frozenset((perm[u], perm[v])) in e2 for u, v in graph.e2):
            out.append(tuple(perm))
    return out


def close_node_group(gens: list, n: int) -> set:
    ident = tuple(range(n))
    group, todo = {ident}, [ident]
    while todo:
        cur = todo.pop()
        for g in gens:
            nxt = tuple(g[cur[i]] for i in range(n))
            if nxt not in group:
                group.add(nxt)
                todo.append(nxt)
    return group
