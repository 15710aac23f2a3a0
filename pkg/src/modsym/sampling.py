"""Seeded random generators for formulas, models and permutations.

Everything takes an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from .formula import Clause, Literal, ModalCnf, ModalLiteral, Modality, modal_depth
from .models import FiniteModel
from .permutation import Permutation, PermutationSequence, apply_formula, apply_layered

__all__ = [
    "CnfShape", "random_clause", "random_cnf", "random_model", "random_tree",
    "random_consistent_permutation", "random_sequence", "bisimilar_copy", "orbit_closure",
    "layered_orbit_closure", "symmetric_cnf", "layered_symmetric_cnf",
]


@dataclass(frozen=True)
class CnfShape:
    atoms: tuple = ("p", "q", "r")
    modalities: tuple = ("m",)
    max_depth: int = 2
    max_clauses: int = 6
    max_items: int = 3
    modal_rate: float = 0.35


def random_clause(rng: random.Random, shape: CnfShape, depth: int = 0) -> Clause:
    items = []
    for _ in range(rng.randint(1, shape.max_items)):
        if depth < shape.max_depth and shape.modalities and rng.random() < shape.modal_rate:
            mod = Modality.from_text(rng.choice(shape.modalities))
            items.append(ModalLiteral(mod, rng.random() < 0.5, random_clause(rng, shape, depth + 1)))
        else:
            items.append(Literal(rng.choice(shape.atoms), rng.random() < 0.5))
    return Clause.of(items)


def random_cnf(rng: random.Random, shape: Optional[CnfShape] = None) -> ModalCnf:
    shape = shape or CnfShape()
    n = rng.randint(1, shape.max_clauses)
    return ModalCnf.of(random_clause(rng, shape) for _ in range(n))


def random_model(rng: random.Random, atoms=("p", "q", "r"), max_worlds: int = 3,
                 modalities=("m",), edge_rate: float = 0.4, nominals=()) -> FiniteModel:
    n = rng.randint(1, max_worlds)
    worlds = tuple(f"w{i}" for i in range(n))
    val = {w: {a for a in atoms if a not in nominals and rng.random() < 0.5} for w in worlds}
    for i in nominals:
        val[rng.choice(worlds)].add(i)
    rels = {m: {(a, b) for a in worlds for b in worlds if rng.random() < edge_rate}
            for m in modalities}
    return FiniteModel(worlds, rng.choice(worlds), val, rels)


def random_tree(rng: random.Random, atoms=("p", "q", "r"), depth: int = 2,
                branching: int = 2, modalities=("m",)) -> FiniteModel:
    """A random finite tree rooted at ``t`` with paths as world names."""
    worlds, val, rels = ["t"], {}, {}
    frontier = ["t"]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for m in modalities:
                for k in range(rng.randint(0, branching)):
                    child = f"{w}.{m}{k}"
                    worlds.append(child)
                    rels.setdefault(m, set()).add((w, child))
                    nxt.append(child)
        frontier = nxt
    for w in worlds:
        val[w] = {a for a in atoms if rng.random() < 0.5}
    return FiniteModel(tuple(worlds), "t", val, rels)


def bisimilar_copy(rng: random.Random, model: FiniteModel) -> FiniteModel:
    """Clone one world, valuation and edges included; the result is bisimilar."""
    w = rng.choice(model.worlds)
    c = f"c{len(model.worlds)}"
    rels = {}
    for m, pairs in model.relations.items():
        new = set(pairs)
        for a, b in pairs:
            if a == w:
                new.add((c, b))
            if b == w:
                new.add((a, c))
                if a == w:
                    new.add((c, c))
        rels[m] = new
    val = dict(model.valuation)
    val[c] = model.valuation[w]
    return FiniteModel(model.worlds + (c,), model.point, val, rels)


def random_consistent_permutation(rng: random.Random, atoms, phase_rate: float = 0.5) -> Permutation:
    """Random atom bijection with random sign flips; consistent by construction."""
    atoms = sorted(atoms)
    targets = atoms[:]
    rng.shuffle(targets)
    mapping = {}
    for a, b in zip(atoms, targets):
        pos = rng.random() >= phase_rate
        mapping[Literal(a)] = Literal(b, pos)
        mapping[Literal(a, False)] = Literal(b, not pos)
    return Permutation(mapping)


def random_sequence(rng: random.Random, atoms, length: int, phase_rate: float = 0.5) -> PermutationSequence:
    return PermutationSequence(random_consistent_permutation(rng, atoms, phase_rate) for _ in range(length))


def _closure(phi: ModalCnf, step, limit: int) -> Optional[ModalCnf]:
    clauses = set(phi.clauses)
    todo = list(clauses)
    while todo:
        c = todo.pop()
        for img in step(ModalCnf.of([c])).clauses:
            if img not in clauses:
                clauses.add(img)
                todo.append(img)
                if len(clauses) > limit:
                    return None
    return ModalCnf.of(clauses)


def orbit_closure(phi: ModalCnf, sigma: Permutation, limit: int = 64) -> Optional[ModalCnf]:
    """Smallest superset of ``phi`` fixed by ``sigma``; None past ``limit`` clauses."""
    return _closure(phi, lambda f: apply_formula(sigma, f), limit)


def layered_orbit_closure(phi: ModalCnf, seq: PermutationSequence, limit: int = 64) -> Optional[ModalCnf]:
    return _closure(phi, lambda f: apply_layered(seq, f), limit)


def symmetric_cnf(rng: random.Random, shape: Optional[CnfShape] = None, tries: int = 200):
    """A random formula with a non-identity symmetry, as ``(phi, sigma)``."""
    shape = shape or CnfShape()
    for _ in range(tries):
        sigma = random_consistent_permutation(rng, shape.atoms)
        if sigma.is_identity():
            continue
        seed = random_cnf(rng, replace(shape, max_clauses=max(1, shape.max_clauses // 2)))
        phi = orbit_closure(seed, sigma, limit=shape.max_clauses)
        if phi is not None:
            return phi, sigma
    raise RuntimeError("could not build a symmetric formula within the try budget")


def layered_symmetric_cnf(rng: random.Random, shape: Optional[CnfShape] = None, tries: int = 200):
    """A random formula with a non-trivial layered symmetry, as ``(phi, seq)``."""
    shape = shape or CnfShape()
    for _ in range(tries):
        seq = random_sequence(rng, shape.atoms, shape.max_depth + 1)
        if all(s.is_identity() for s in seq.elements):
            continue
        seed = random_cnf(rng, replace(shape, max_clauses=max(1, shape.max_clauses // 2)))
        phi = layered_orbit_closure(seed, seq, limit=shape.max_clauses)
        if phi is not None and modal_depth(phi) < len(seq.elements):
            return phi, seq
    raise RuntimeError("could not build a layered-symmetric formula within the try budget")
