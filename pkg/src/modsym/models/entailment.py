"""Bounded entailment ``phi ⊨_C psi`` by searching for countermodels.

For the class of all models (logic K) the search runs over tree models of
height up to the modal depth, which is exhaustive: a K formula of depth
``d`` that has a model has one that is a tree of height ``d``. Tree models
are enumerated up to modal equivalence by building, level by level, every
achievable truth vector over the clauses in play. Other classes are handled
by brute-force enumeration of all models up to a world bound, and such
answers are flagged as bounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from ..formula import RELATIONAL, ModalCnf, atoms_of, iter_clauses, modal_depth
from .core import (ClassSpec, EnumerationBoundError, FiniteModel, MAX_ENUMERATION,
                   enumerate_frames, satisfies, truth_set)

__all__ = ["EntailmentResult", "entails", "k_tree_bound", "MAX_TYPE_COMBINATIONS"]

MAX_TYPE_COMBINATIONS = 2_000_000


class InternalError(RuntimeError):
    pass


@dataclass(frozen=True)
class EntailmentResult:
    entailed: bool
    countermodel: Optional[FiniteModel] = None
    exact: bool = True
    method: str = "k-trees"

    def __bool__(self):
        return self.entailed


def k_tree_bound(*formulas: ModalCnf, cap: int = 10_000) -> int:
    """World count that always suffices for a K countermodel.

    ``1 + sum_d n_d`` where ``n_d`` is the product of the number of negative
    modal literals over depths ``0..d-1``, capped at ``cap``.
    """
    per_depth = {}
    for phi in formulas:
        for clause, depth in iter_clauses(phi):
            per_depth[depth] = per_depth.get(depth, 0) + sum(not m.positive for m in clause.modal_literals)
    total, width = 1, 1
    for d in range(max(per_depth, default=-1) + 1):
        width *= per_depth.get(d, 0)
        total += width
        if total >= cap:
            return cap
    return total


def _relational_only(*formulas: ModalCnf) -> bool:
    return all(m.modality.kind == RELATIONAL
               for phi in formulas for c, _ in iter_clauses(phi) for m in c.modal_literals)


class _TypeSearch:
    """Achievable clause-truth vectors of worlds in tree models."""

    def __init__(self, formulas, atoms):
        universe = {}
        for phi in formulas:
            for clause, _ in iter_clauses(phi):
                universe.setdefault(clause, len(universe))
        self.index = universe
        self.clauses = list(universe)
        self.full = (1 << len(self.clauses)) - 1
        self.mods = sorted({m.modality.name for c in self.clauses for m in c.modal_literals})
        self.atoms = sorted(atoms)
        self.vals = [frozenset(c) for r in range(len(self.atoms) + 1)
                     for c in itertools.combinations(self.atoms, r)]
        self.compiled = [
            ([(l.atom, l.positive) for l in c.atom_literals],
             [(m.modality.name, m.positive, 1 << universe[m.body]) for m in c.modal_literals])
            for c in self.clauses
        ]
        self.witness = {}

    def evaluate(self, val, box_masks) -> int:
        out = 0
        for bit, (lits, mods) in enumerate(self.compiled):
            if any((a in val) == pos for a, pos in lits) or \
                    any(bool(box_masks[m] & body) == pos for m, pos, body in mods):
                out |= 1 << bit
        return out

    def level(self, below) -> set:
        """Types of worlds whose successors have types in ``below``."""
        # every successor set yields the AND of its members' vectors
        closure = {self.full: ()}
        for t in sorted(below):
            for mask, members in list(closure.items()):
                closure.setdefault(mask & t, members + (t,))
        choices = sorted(closure)
        if len(self.vals) * len(choices) ** len(self.mods) > MAX_TYPE_COMBINATIONS:
            raise EnumerationBoundError("too many world types to enumerate")
        types = set()
        for val in self.vals:
            for combo in itertools.product(choices, repeat=len(self.mods)):
                t = self.evaluate(val, dict(zip(self.mods, combo)))
                types.add(t)
                if t not in self.witness:
                    self.witness[t] = (val, {m: closure[c] for m, c in zip(self.mods, combo)})
        return types

    def build(self, root_type) -> FiniteModel:
        worlds, val, rels = [], {}, {}

        def grow(t) -> str:
            name = f"w{len(worlds)}"
            worlds.append(name)
            v, succ = self.witness[t]
            val[name] = v
            for m in self.mods:
                for child in succ[m]:
                    rels.setdefault(m, set()).add((name, grow(child)))
            return name

        grow(root_type)
        return FiniteModel(tuple(worlds), worlds[0], val, rels)


def _entails_k(phi, psi, max_depth) -> EntailmentResult:
    needed = max(modal_depth(phi), modal_depth(psi))
    height = needed if max_depth is None else min(max_depth, needed)
    search = _TypeSearch([phi, psi], atoms_of(phi) | atoms_of(psi))
    phi_mask = sum(1 << search.index[c] for c in phi.clauses)
    psi_mask = sum(1 << search.index[c] for c in psi.clauses)
    types = set()
    for _ in range(height + 1):
        types = search.level(types)
    for t in sorted(types):
        if t & phi_mask == phi_mask and t & psi_mask != psi_mask:
            model = search.build(t)
            if not satisfies(model, phi) or satisfies(model, psi):
                raise InternalError("reconstructed countermodel does not refute the entailment")
            return EntailmentResult(False, model, exact=True, method="k-trees")
    return EntailmentResult(True, None, exact=height >= needed, method="k-trees")


def _entails_enum(phi, psi, spec, max_worlds) -> EntailmentResult:
    atoms = sorted(atoms_of(phi) | atoms_of(psi) | spec.nominals)
    mods = sorted({m.modality.name for f in (phi, psi) for c, _ in iter_clauses(f)
                   for m in c.modal_literals if m.modality.kind == RELATIONAL})
    total = sum(2 ** (len(atoms) * n + len(mods) * n * n) for n in range(1, max_worlds + 1))
    if total > MAX_ENUMERATION:
        raise EnumerationBoundError(f"{total} frames exceed the enumeration bound {MAX_ENUMERATION}")
    for n in range(1, max_worlds + 1):
        for frame in enumerate_frames(atoms, n, spec, mods):
            bad = truth_set(frame, phi) - truth_set(frame, psi)
            if bad:
                w = min(bad, key=frame.worlds.index)
                # a countermodel settles the question whatever the bound
                return EntailmentResult(False, frame.at_point(w), exact=True, method="enumeration")
    return EntailmentResult(True, None, exact=False, method="enumeration")


def entails(phi: ModalCnf, psi: ModalCnf, spec: Optional[ClassSpec] = None,
            max_worlds: int = 2, max_depth: Optional[int] = None) -> EntailmentResult:
    """Search for a model of ``phi`` in the class that falsifies ``psi``.

    ``max_depth`` bounds the tree height in the K search (default: the
    larger modal depth, which makes the answer exact). ``max_worlds``
    bounds the brute-force enumeration used for every other class.
    """
    spec = spec or ClassSpec()
    if max_worlds < 1 or (max_depth is not None and max_depth < 0):
        raise ValueError("bounds must be positive")
    if spec.is_basic and _relational_only(phi, psi):
        return _entails_k(phi, psi, max_depth)
    return _entails_enum(phi, psi, spec, max_worlds)
