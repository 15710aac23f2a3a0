"""Literal permutations, permutation sequences and their action on modal CNF."""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Optional, Sequence

from .formula import AT, Clause, Literal, ModalCnf, ModalLiteral, Modality

__all__ = [
    "Permutation", "PermutationSequence", "PermutationError",
    "InconsistentPermutationError", "IndexMappingError", "CycleSyntaxError",
    "parse_cycles", "parse_sequence", "is_consistent", "compose", "inverse",
    "power", "order", "apply_formula", "is_symmetry", "apply_layered",
    "is_layered_symmetry", "symmetric_images", "MAX_SUPPORT",
]

MAX_SUPPORT = 10_000


class PermutationError(ValueError):
    pass


class InconsistentPermutationError(PermutationError):
    pass


class IndexMappingError(PermutationError):
    """An atom indexing an ``@`` modality is sent to a negative literal."""


class CycleSyntaxError(PermutationError):
    pass


def _print_key(lit: Literal):
    return (lit.atom, not lit.positive)


class Permutation:
    """A bijection on literals with finite support.

    Only moved literals are stored; every other literal is fixed.
    Consistency (commuting with negation) is *not* enforced here so that
    inconsistent maps stay representable and can be rejected by callers.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Optional[Mapping[Literal, Literal]] = None):
        m = {k: v for k, v in (mapping or {}).items() if k != v}
        if len(m) > MAX_SUPPORT:
            raise PermutationError(f"support larger than {MAX_SUPPORT} literals")
        if set(m.values()) != set(m):
            raise PermutationError("mapping is not a bijection on its support")
        self._map = m
        self._hash = None

    @classmethod
    def identity(cls) -> "Permutation":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[Literal]]) -> "Permutation":
        m = {}
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if a in m:
                    raise CycleSyntaxError(f"literal {a} repeated across cycles")
                m[a] = b
        return cls(m)

    @classmethod
    def swap(cls, a: str, b: str) -> "Permutation":
        """The consistent transposition ``(a b)(~a ~b)``."""
        return cls({Literal(a): Literal(b), Literal(b): Literal(a),
                    Literal(a, False): Literal(b, False), Literal(b, False): Literal(a, False)})

    def __call__(self, lit: Literal) -> Literal:
        return self._map.get(lit, lit)

    @property
    def mapping(self) -> dict:
        return dict(self._map)

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def support_atoms(self) -> frozenset:
        return frozenset(l.atom for l in self._map)

    def is_identity(self) -> bool:
        return not self._map

    def cycles(self) -> list:
        seen, out = set(), []
        for start in sorted(self._map, key=_print_key):
            if start in seen:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self._map[x]
            out.append(tuple(cyc))
        return out

    def restrict(self, atoms: Iterable[str]) -> "Permutation":
        """Drop the part of the map acting on literals outside ``atoms``.

        Only meaningful when ``atoms`` is a union of orbits.
        """
        atoms = set(atoms)
        return Permutation({k: v for k, v in self._map.items() if k.atom in atoms})

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __str__(self):
        return "".join("(" + " ".join(str(l) for l in c) + ")" for c in self.cycles()) or "()"

    def __repr__(self):
        return f"Permutation({self})"


class PermutationSequence:
    """A finite list of permutations, one per modal depth (depth 0 first)."""

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[Permutation] = ()):
        self.elements = tuple(elements)

    def __len__(self):
        return len(self.elements)

    def head(self) -> Permutation:
        return self.elements[0] if self.elements else Permutation.identity()

    def tail(self, i: int = 2) -> "PermutationSequence":
        """The subsequence starting at the ``i``-th element (1-based)."""
        return PermutationSequence(self.elements[i - 1:])

    def at_depth(self, depth: int) -> Permutation:
        return self.elements[depth] if depth < len(self.elements) else Permutation.identity()

    def is_consistent(self) -> bool:
        return all(is_consistent(s) for s in self.elements)

    def __eq__(self, other):
        if not isinstance(other, PermutationSequence):
            return NotImplemented
        n = max(len(self), len(other))
        return all(self.at_depth(i) == other.at_depth(i) for i in range(n))

    def __hash__(self):
        els = list(self.elements)
        while els and els[-1].is_identity():
            els.pop()
        return hash(tuple(els))

    def __str__(self):
        return "[ " + " ; ".join(str(s) for s in self.elements) + " ]"

    def __repr__(self):
        return f"PermutationSequence({self})"


# --------------------------------------------------------------------------
# text formats

_LIT = re.compile(r"\s*(~|¬)?\s*([a-z_][a-zA-Z0-9_]*)\s*")


def parse_cycles(text: str) -> Permutation:
    """Parse a product of disjoint cycles such as ``(p ~q)(~p q)``."""
    cycles, pos, text = [], 0, text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "(":
            raise CycleSyntaxError(f"expected '(' at offset {pos} in {text!r}")
        end = text.find(")", pos)
        if end < 0:
            raise CycleSyntaxError(f"unclosed cycle at offset {pos} in {text!r}")
        body, lits = text[pos + 1:end].replace(",", " "), []
        i = 0
        while i < len(body):
            m = _LIT.match(body, i)
            if not m or m.end() == i:
                raise CycleSyntaxError(f"malformed cycle {text[pos:end + 1]!r}")
            lits.append(Literal(m.group(2), m.group(1) is None))
            i = m.end()
        if len(set(lits)) != len(lits):
            raise CycleSyntaxError(f"literal repeated inside cycle {text[pos:end + 1]!r}")
        if lits:
            cycles.append(lits)
        pos = end + 1
    return Permutation.from_cycles(cycles)


def parse_sequence(text: str) -> PermutationSequence:
    """``[ cyc ; cyc ; ... ]`` or one permutation per line."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise CycleSyntaxError("unterminated permutation sequence")
        parts = text[1:-1].split(";")
        if len(parts) == 1 and not parts[0].strip():
            return PermutationSequence()
    else:
        parts = text.splitlines()
    return PermutationSequence(parse_cycles(p) for p in parts)


# --------------------------------------------------------------------------
# group operations


def is_consistent(sigma: Permutation) -> bool:
    lits = sigma.support | {l.neg() for l in sigma.support}
    return all(sigma(l.neg()) == sigma(l).neg() for l in lits)


def compose(s1: Permutation, s2: Permutation) -> Permutation:
    """``s1 ∘ s2``: apply ``s2`` first."""
    return Permutation({l: s1(s2(l)) for l in s1.support | s2.support})


def inverse(sigma: Permutation) -> Permutation:
    return Permutation({v: k for k, v in sigma.mapping.items()})


def power(sigma: Permutation, k: int) -> Permutation:
    base = sigma if k >= 0 else inverse(sigma)
    k = abs(k)
    n = order(sigma)
    k %= n
    result = Permutation.identity()
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def order(sigma: Permutation) -> int:
    return math.lcm(*(len(c) for c in sigma.cycles())) if not sigma.is_identity() else 1


# --------------------------------------------------------------------------
# action on formulas


def _image_modality(sigma: Permutation, m: Modality) -> Modality:
    if m.kind != AT:
        return m
    img = sigma(Literal(m.name))
    if not img.positive:
        raise IndexMappingError(f"index atom {m.name} of [{m}] mapped to {img}")
    return Modality.at(img.atom)


def _check(sigma: Permutation):
    if not is_consistent(sigma):
        raise InconsistentPermutationError(f"{sigma} is not consistent")


def _apply_clause(seq: PermutationSequence, clause: Clause) -> Clause:
    head, rest = seq.head(), seq.tail()
    items = [head(l) for l in clause.atom_literals]
    items += [ModalLiteral(_image_modality(head, ml.modality), ml.positive, _apply_clause(rest, ml.body))
              for ml in clause.modal_literals]
    return Clause.of(items)


def apply_layered(seq: PermutationSequence, phi: ModalCnf) -> ModalCnf:
    """Element ``i`` of ``seq`` acts on literals and indices at depth ``i-1``."""
    for s in seq.elements:
        _check(s)
    if not len(seq):
        return ModalCnf.of(phi.clauses)
    return ModalCnf.of(_apply_clause(seq, c) for c in phi.clauses)


class _Repeat(PermutationSequence):
    """Infinite constant sequence; lets apply_formula reuse the layered walk."""

    def __init__(self, sigma: Permutation):
        super().__init__((sigma,))

    def tail(self, i: int = 2):
        return self


def apply_formula(sigma: Permutation, phi: ModalCnf) -> ModalCnf:
    _check(sigma)
    return ModalCnf.of(_apply_clause(_Repeat(sigma), c) for c in phi.clauses)


def is_symmetry(sigma: Permutation, phi: ModalCnf) -> bool:
    return apply_formula(sigma, phi) == ModalCnf.of(phi.clauses)


def is_layered_symmetry(seq: PermutationSequence, phi: ModalCnf) -> bool:
    return apply_layered(seq, phi) == ModalCnf.of(phi.clauses)


def symmetric_images(sigma: Permutation, psi: ModalCnf) -> list:
    """``[σ(ψ), σ²(ψ), ...]`` up to ``σ^(order-1)``, without repeats."""
    _check(sigma)
    out, seen, cur = [], set(), psi
    for _ in range(order(sigma) - 1):
        cur = apply_formula(sigma, cur)
        if cur not in seen:
            seen.add(cur)
            out.append(cur)
    return out
