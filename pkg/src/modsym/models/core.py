"""Finite pointed models, model classes and the satisfaction relation.

Relational modalities are stored as edge sets. The universal modality
``A`` and the ``@i`` modalities are never stored: ``A`` reaches every
world and ``@i`` reaches exactly the worlds where ``i`` holds.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional

from ..formula import AT, RELATIONAL, UNIVERSAL, Clause, Literal, ModalCnf, Modality
from ..permutation import (InconsistentPermutationError, Permutation,
                           PermutationSequence, is_consistent)

__all__ = [
    "FiniteModel", "ClassSpec", "TreeModel", "Path", "ModelError",
    "ModelClassError", "NotATreeError", "EnumerationBoundError",
    "satisfies", "truth_set", "check_class", "permute_model", "unravel",
    "tree_depths", "permute_tree_layered", "enumerate_models",
    "is_closed_under", "parse_model", "format_model", "MAX_ENUMERATION",
]

MAX_ENUMERATION = 5_000_000


class ModelError(ValueError):
    pass


class ModelClassError(ModelError):
    """A model does not meet the defining conditions of its class."""


class NotATreeError(ModelError):
    pass


class EnumerationBoundError(ModelError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    """Defining conditions selecting a model class.

    Relational modalities are always interpreted over the stored edges;
    ``universal`` and ``at`` record that ``A`` / ``@i`` are in the language
    (their accessibility is derived), and ``nominals`` lists the atoms that
    must hold at exactly one world.
    """

    nominals: frozenset = frozenset()
    universal: bool = False
    at: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nominals", frozenset(self.nominals))

    @property
    def is_basic(self) -> bool:
        """True for the class of all models (logic K)."""
        return not (self.nominals or self.universal or self.at)

    def __str__(self):
        parts = [f"nominal {n}" for n in sorted(self.nominals)]
        if self.universal:
            parts.append("universal")
        if self.at:
            parts.append("at")
        return ", ".join(parts)


@dataclass(frozen=True, eq=True)
class FiniteModel:
    worlds: tuple
    point: str
    valuation: Mapping = field(default_factory=dict)
    relations: Mapping = field(default_factory=dict)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        ws = set(worlds)
        if len(ws) != len(worlds):
            raise ModelError("duplicate world names")
        if self.point not in ws:
            raise ModelError(f"point {self.point!r} is not a world")
        val = {w: frozenset(self.valuation.get(w, ())) for w in worlds}
        extra = set(self.valuation) - ws
        if extra:
            raise ModelError(f"valuation mentions unknown worlds {sorted(extra)}")
        rels = {}
        for m, pairs in self.relations.items():
            pairs = frozenset((a, b) for a, b in pairs)
            bad = {x for p in pairs for x in p} - ws
            if bad:
                raise ModelError(f"relation {m} mentions unknown worlds {sorted(bad)}")
            if pairs:
                rels[m] = pairs
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "valuation", val)
        object.__setattr__(self, "relations", rels)
        succ = {}
        for m, pairs in rels.items():
            for a, b in sorted(pairs):
                succ.setdefault((m, a), []).append(b)
        object.__setattr__(self, "_succ", succ)

    def val(self, w) -> frozenset:
        return self.valuation[w]

    def at_point(self, w) -> "FiniteModel":
        return FiniteModel(self.worlds, w, self.valuation, self.relations)

    def successors(self, modality, w) -> list:
        if isinstance(modality, str):
            modality = Modality.relational(modality)
        if modality.kind == RELATIONAL:
            return self._succ.get((modality.name, w), [])
        if modality.kind == UNIVERSAL:
            return list(self.worlds)
        return [v for v in self.worlds if modality.name in self.valuation[v]]

    def atoms(self) -> frozenset:
        return frozenset().union(*self.valuation.values()) if self.worlds else frozenset()

    def reachable(self, modalities: Iterable[Modality] = ()) -> list:
        """Worlds reachable from the point (the finite counterpart of Ext)."""
        mods = [Modality.relational(m) for m in sorted(self.relations)] + list(modalities)
        seen, todo = {self.point: None}, deque([self.point])
        while todo:
            w = todo.popleft()
            for m in mods:
                for v in self.successors(m, w):
                    if v not in seen:
                        seen[v] = None
                        todo.append(v)
        return list(seen)

    def __str__(self):
        return format_model(self)


@dataclass(frozen=True)
class Path:
    """A path ``(w0, m1, w1, ..., mk, wk)`` through a model."""

    start: str
    steps: tuple = ()

    def first(self) -> str:
        return self.start

    def last(self) -> str:
        return self.steps[-1][1] if self.steps else self.start

    def length(self) -> int:
        return len(self.steps)

    def extend(self, modality: str, world: str) -> "Path":
        return Path(self.start, self.steps + ((modality, world),))

    @property
    def name(self) -> str:
        return self.start + "".join(f"/{m}:{w}" for m, w in self.steps)


@dataclass(frozen=True, eq=True)
class TreeModel(FiniteModel):
    """A finite model whose worlds are the paths of another model."""

    paths: Mapping = field(default_factory=dict)
    depth: int = 0


# --------------------------------------------------------------------------
# semantics


def check_class(model: FiniteModel, spec: Optional[ClassSpec]) -> bool:
    if spec is None:
        return True
    for i in spec.nominals:
        if sum(1 for w in model.worlds if i in model.valuation[w]) != 1:
            return False
    # A and @i accessibility are derived, so their conditions hold by construction
    return True


def _holds(model: FiniteModel, w, clause: Clause, memo: dict) -> bool:
    key = (w, id(clause))
    hit = memo.get(key)
    if hit is not None:
        return hit
    val = model.valuation[w]
    result = any((l.atom in val) == l.positive for l in clause.atom_literals)
    if not result:
        for ml in clause.modal_literals:
            boxed = all(_holds(model, v, ml.body, memo) for v in model.successors(ml.modality, w))
            if boxed == ml.positive:
                result = True
                break
    memo[key] = result
    return result


def satisfies(model: FiniteModel, phi: ModalCnf, spec: Optional[ClassSpec] = None) -> bool:
    """``model ⊨ phi`` at the model's point."""
    if not check_class(model, spec):
        raise ModelClassError(f"model violates class conditions: {spec}")
    memo = {}
    return all(_holds(model, model.point, c, memo) for c in phi.clauses)


def truth_set(model: FiniteModel, phi: ModalCnf) -> frozenset:
    """Worlds of ``model`` at which ``phi`` holds."""
    memo = {}
    return frozenset(w for w in model.worlds if all(_holds(model, w, c, memo) for c in phi.clauses))


# --------------------------------------------------------------------------
# permutations of models


def _permute_valuation(sigma: Permutation, val: frozenset, moved: frozenset) -> frozenset:
    out = set(val - moved)
    for a in moved:
        img = sigma(Literal(a, a in val))
        if img.positive:
            out.add(img.atom)
    return frozenset(out)


def permute_model(sigma: Permutation, model: FiniteModel) -> FiniteModel:
    """Apply ``sigma`` to every world's generated complete literal set.

    Relational modality names are fixed by every permutation, so the
    relations carry over unchanged; ``@`` accessibility follows the new
    valuation automatically.
    """
    if not is_consistent(sigma):
        raise InconsistentPermutationError(f"{sigma} is not consistent")
    moved = sigma.support_atoms()
    val = {w: _permute_valuation(sigma, model.valuation[w], moved) for w in model.worlds}
    return replace(model, valuation=val)


def tree_depths(model: FiniteModel) -> Optional[dict]:
    """Depth of every world if ``model`` is a tree rooted at its point, else None."""
    indeg = {w: 0 for w in model.worlds}
    for pairs in model.relations.values():
        for _, b in pairs:
            indeg[b] += 1
    if indeg[model.point] != 0 or any(d != 1 for w, d in indeg.items() if w != model.point):
        return None
    depth, todo = {model.point: 0}, deque([model.point])
    while todo:
        w = todo.popleft()
        for m in model.relations:
            for v in model.successors(m, w):
                if v in depth:
                    return None
                depth[v] = depth[w] + 1
                todo.append(v)
    return depth if len(depth) == len(model.worlds) else None


def permute_tree_layered(seq: PermutationSequence, tree: FiniteModel) -> FiniteModel:
    """Apply element ``i`` of ``seq`` to the valuations at tree depth ``i-1``."""
    depths = tree_depths(tree)
    if depths is None:
        raise NotATreeError("layered permutation needs a tree model")
    for s in seq.elements:
        if not is_consistent(s):
            raise InconsistentPermutationError(f"{s} is not consistent")
    val = {}
    for w in tree.worlds:
        sigma = seq.at_depth(depths[w])
        val[w] = _permute_valuation(sigma, tree.valuation[w], sigma.support_atoms())
    return replace(tree, valuation=val)


def unravel(model: FiniteModel, depth: int) -> TreeModel:
    """All relational paths from the point of length at most ``depth``."""
    root = Path(model.point)
    paths, rels, todo = {root.name: root}, {}, deque([root])
    while todo:
        p = todo.popleft()
        if p.length() >= depth:
            continue
        for m in sorted(model.relations):
            for v in model.successors(m, p.last()):
                q = p.extend(m, v)
                paths[q.name] = q
                rels.setdefault(m, set()).add((p.name, q.name))
                todo.append(q)
    val = {name: model.valuation[p.last()] for name, p in paths.items()}
    return TreeModel(tuple(paths), root.name, val, rels, paths=paths, depth=depth)


# --------------------------------------------------------------------------
# enumeration


def _count(n_atoms: int, max_worlds: int, n_mods: int) -> int:
    return sum(2 ** (n_atoms * n + n_mods * n * n) * n for n in range(1, max_worlds + 1))


def enumerate_frames(atoms: Iterable[str], n: int, spec: Optional[ClassSpec] = None,
                     modalities: Iterable[str] = ()) -> Iterator[FiniteModel]:
    """Every valuation/relation choice on worlds ``w0..w{n-1}``, pointed at ``w0``."""
    atoms, modalities = sorted(atoms), sorted(modalities)
    worlds = tuple(f"w{i}" for i in range(n))
    subsets = [frozenset(c) for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]
    pairs = [(a, b) for a in worlds for b in worlds]
    edge_sets = [frozenset(p for p, bit in zip(pairs, bits) if bit)
                 for bits in itertools.product((0, 1), repeat=len(pairs))]
    nominals = sorted(spec.nominals) if spec else []
    for vals in itertools.product(subsets, repeat=n):
        if any(sum(i in v for v in vals) != 1 for i in nominals):
            continue
        valuation = dict(zip(worlds, vals))
        for rel_choice in itertools.product(edge_sets, repeat=len(modalities)):
            yield FiniteModel(worlds, worlds[0], valuation, dict(zip(modalities, rel_choice)))


def enumerate_models(atoms: Iterable[str], max_worlds: int, spec: Optional[ClassSpec] = None,
                     modalities: Iterable[str] = ("m",)) -> Iterator[FiniteModel]:
    """All class-conforming models with 1..max_worlds worlds over ``atoms``.

    Every valuation, every subset of edges per relational modality and
    every choice of point is produced.
    """
    atoms, modalities = sorted(set(atoms) | set(spec.nominals if spec else ())), sorted(modalities)
    total = _count(len(atoms), max_worlds, len(modalities))
    if total > MAX_ENUMERATION:
        raise EnumerationBoundError(f"{total} models exceed the enumeration bound {MAX_ENUMERATION}")
    for n in range(1, max_worlds + 1):
        for frame in enumerate_frames(atoms, n, spec, modalities):
            for w in frame.worlds:
                yield frame.at_point(w)


def is_closed_under(sigma: Permutation, spec: Optional[ClassSpec], max_worlds: int = 3) -> bool:
    """Does ``sigma`` keep every model of ``spec`` inside the class?

    Nominal-to-nominal maps are accepted outright; anything else is decided
    by checking every valuation on up to ``max_worlds`` worlds.
    """
    if not is_consistent(sigma):
        raise InconsistentPermutationError(f"{sigma} is not consistent")
    if spec is None or not spec.nominals:
        return True
    if all((img := sigma(Literal(i))).positive and img.atom in spec.nominals for i in spec.nominals):
        return True
    atoms = sigma.support_atoms() | spec.nominals
    while max_worlds > 1 and 2 ** (len(atoms) * max_worlds) > MAX_ENUMERATION:
        max_worlds -= 1
    for n in range(1, max_worlds + 1):
        for frame in enumerate_frames(atoms, n, spec):
            if not check_class(permute_model(sigma, frame), spec):
                return False
    return True


# --------------------------------------------------------------------------
# text format


def format_model(model: FiniteModel, spec: Optional[ClassSpec] = None) -> str:
    lines = ["worlds: " + " ".join(model.worlds), f"point: {model.point}"]
    for w in model.worlds:
        atoms = " ".join(sorted(model.valuation[w]))
        lines.append(f"val {w}: {atoms}".rstrip())
    for m in sorted(model.relations):
        order = {w: i for i, w in enumerate(model.worlds)}
        for a, b in sorted(model.relations[m], key=lambda p: (order[p[0]], order[p[1]])):
            lines.append(f"rel {m}: {a} {b}")
    if spec is not None and str(spec):
        lines.append(f"class: {spec}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> tuple:
    """Read the line format back into ``(FiniteModel, ClassSpec)``."""
    worlds, point, val, rels = None, None, {}, {}
    nominals, universal, at = set(), False, False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelError(f"line {lineno}: expected 'key: value'")
        key, words = head.split(), rest.split()
        if key == ["worlds"]:
            worlds = tuple(words)
        elif key == ["point"] and len(words) == 1:
            point = words[0]
        elif len(key) == 2 and key[0] == "val":
            val[key[1]] = frozenset(words)
        elif len(key) == 2 and key[0] == "rel":
            if len(words) != 2:
                raise ModelError(f"line {lineno}: a relation line needs exactly two worlds")
            rels.setdefault(key[1], set()).add(tuple(words))
        elif key == ["class"]:
            for part in filter(None, (p.strip() for p in rest.split(","))):
                bits = part.split()
                if bits[0] == "nominal" and len(bits) >= 2:
                    nominals.update(bits[1:])
                elif bits == ["universal"]:
                    universal = True
                elif bits == ["at"]:
                    at = True
                else:
                    raise ModelError(f"line {lineno}: unknown class condition {part!r}")
        else:
            raise ModelError(f"line {lineno}: cannot read {raw.strip()!r}")
    if worlds is None:
        raise ModelError("missing 'worlds:' line")
    model = FiniteModel(worlds, point if point is not None else worlds[0], val, rels)
    return model, ClassSpec(frozenset(nominals), universal, at)
