"""σ-simulations and bisimulations between finite models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ..formula import AT, Literal, Modality
from ..permutation import InconsistentPermutationError, Permutation, inverse, is_consistent
from .core import FiniteModel

__all__ = ["SimulationRelation", "find_sigma_simulation", "is_bisimilar"]


@dataclass(frozen=True)
class SimulationRelation:
    pairs: frozenset

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)


def _image(sigma: Permutation, m: Modality) -> Modality:
    if m.kind != AT:
        return m
    img = sigma(Literal(m.name))
    return Modality.at(img.atom) if img.positive else None


def find_sigma_simulation(sigma: Permutation, model: FiniteModel, other: FiniteModel,
                          derived: Iterable[Modality] = ()) -> Optional[SimulationRelation]:
    """The greatest σ-simulation between the reachable parts, if it relates the points.

    Relational modalities of both models are always checked; ``derived``
    adds ``A`` / ``@i`` modalities to the zig and zag conditions.
    """
    if not is_consistent(sigma):
        raise InconsistentPermutationError(f"{sigma} is not consistent")
    sigma_inv = inverse(sigma)
    derived = list(derived)
    mods = [Modality.relational(m) for m in sorted(set(model.relations) | set(other.relations))] + derived
    left, right = model.reachable(derived), other.reachable(derived)
    atoms = sorted(model.atoms() | other.atoms() | sigma.support_atoms())

    def harmony(w, v) -> bool:
        vw, vv = model.val(w), other.val(v)
        for a in atoms:
            img = sigma(Literal(a, a in vw))
            if (img.atom in vv) != img.positive:
                return False
        return True

    z = {(w, v) for w in left for v in right if harmony(w, v)}
    zig_targets = [(m, _image(sigma, m)) for m in mods]
    zag_sources = [(m, _image(sigma_inv, m)) for m in mods]
    changed = True
    while changed:
        changed = False
        for w, v in list(z):
            ok = True
            for m, m_img in zig_targets:
                targets = other.successors(m_img, v) if m_img is not None else []
                if any(not any((n, n2) in z for n2 in targets) for n in model.successors(m, w)):
                    ok = False
                    break
            if ok:
                for m, m_pre in zag_sources:
                    sources = model.successors(m_pre, w) if m_pre is not None else []
                    if any(not any((n, n2) in z for n in sources) for n2 in other.successors(m, v)):
                        ok = False
                        break
            if not ok:
                z.discard((w, v))
                changed = True
    if (model.point, other.point) not in z:
        return None
    return SimulationRelation(frozenset(z))


def is_bisimilar(model: FiniteModel, other: FiniteModel) -> bool:
    """Partition refinement over the disjoint union of the reachable parts."""
    nodes = [(0, w) for w in model.reachable()] + [(1, w) for w in other.reachable()]
    side = (model, other)
    mods = sorted(set(model.relations) | set(other.relations))
    block = {n: side[n[0]].val(n[1]) for n in nodes}
    n_blocks = len(set(block.values()))
    while True:
        ids = {b: i for i, b in enumerate(sorted(set(block.values()), key=repr))}
        block = {
            n: (ids[block[n]],) + tuple(
                frozenset(ids[block[(n[0], v)]] for v in side[n[0]].successors(m, n[1])) for m in mods)
            for n in nodes
        }
        count = len(set(block.values()))
        if count == n_blocks:
            break
        n_blocks = count
    return block[(0, model.point)] == block[(1, other.point)]
