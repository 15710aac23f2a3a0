"""Modal formulas: AST, parsers, modal CNF and its canonical set-of-sets form.

Two textual front-ends are supported:

* the connective grammar ``<m>(p & q) -> [A]~r`` which is parsed into a
  :class:`Formula` tree and normalized with :func:`to_cnf`;
* explicit set notation ``{ { ~p, [m]{ q } }, { r } }`` which is read
  directly into a :class:`ModalCnf`.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Modality", "Signature",
    "Formula", "Atom", "Not", "Or", "And", "Box", "Diamond",
    "Literal", "ModalLiteral", "Clause", "ModalCnf", "Item",
    "FormulaSyntaxError", "SignatureError",
    "parse_formula", "parse_cnf", "read_cnf", "to_cnf", "canonicalize",
    "modal_depth", "atoms_of", "modalities_of", "format_cnf",
    "AUX_PREFIX", "DEFAULT_DISTRIBUTION_BUDGET",
]

AUX_PREFIX = "_d"
DEFAULT_DISTRIBUTION_BUDGET = 16

RELATIONAL = "rel"
UNIVERSAL = "universal"
AT = "at"


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Modality:
    """A box-type operator: relational ``m``, universal ``A`` or ``@i``."""

    kind: str
    name: str

    @classmethod
    def relational(cls, name: str) -> "Modality":
        return cls(RELATIONAL, name)

    @classmethod
    def universal(cls) -> "Modality":
        return cls(UNIVERSAL, "A")

    @classmethod
    def at(cls, atom: str) -> "Modality":
        return cls(AT, atom)

    @classmethod
    def from_text(cls, text: str) -> "Modality":
        if text == "A":
            return cls.universal()
        if text.startswith("@"):
            return cls.at(text[1:])
        return cls.relational(text)

    @property
    def index(self) -> Optional[str]:
        """The indexing atom of an ``@`` modality, else ``None``."""
        return self.name if self.kind == AT else None

    @property
    def family(self) -> str:
        # all @-modalities share one family; the index is carried separately
        return "@" if self.kind == AT else self.name

    def __str__(self) -> str:
        return "@" + self.name if self.kind == AT else self.name


@dataclass(frozen=True)
class Signature:
    atoms: tuple = ()
    modalities: tuple = ()

    def __post_init__(self):
        rel = {m.name for m in self.modalities if m.kind == RELATIONAL}
        clash = rel & set(self.atoms)
        if clash:
            raise SignatureError(f"names used both as atom and modality: {sorted(clash)}")

    def knows(self, modality: Modality) -> bool:
        if modality.kind == AT:
            return any(m.kind == AT for m in self.modalities)
        return modality in self.modalities


# --------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"~{_wrap(self.arg)}"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Box:
    modality: Modality
    arg: "Formula"

    def __str__(self):
        return f"[{self.modality}]{_wrap(self.arg)}"


@dataclass(frozen=True)
class Diamond:
    modality: Modality
    arg: "Formula"

    def __str__(self):
        return f"<{self.modality}>{_wrap(self.arg)}"


Formula = Union[Atom, Not, Or, And, Box, Diamond]


def _wrap(f) -> str:
    s = str(f)
    return s if isinstance(f, (Atom, Not, Box, Diamond)) or s.startswith("(") else f"({s})"


# --------------------------------------------------------------------------
# Modal CNF


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def neg(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return self.atom if self.positive else "~" + self.atom


@dataclass(frozen=True)
class ModalLiteral:
    modality: Modality
    positive: bool
    body: "Clause"

    def neg(self) -> "ModalLiteral":
        return ModalLiteral(self.modality, not self.positive, self.body)

    def __str__(self):
        sign = "" if self.positive else "~"
        return f"{sign}[{self.modality}]{_format_set(self.body.items())}"


Item = Union[Literal, ModalLiteral]


@functools.lru_cache(maxsize=1 << 16)
def _item_key(item: Item) -> tuple:
    # negative before positive: the order the golden outputs are written in
    if isinstance(item, Literal):
        return (0, item.atom, item.positive)
    return (1, str(item.modality), item.positive, _clause_key(item.body))


@functools.lru_cache(maxsize=1 << 16)
def _clause_key(clause: "Clause") -> tuple:
    return tuple(_item_key(i) for i in clause.items())


@dataclass(frozen=True)
class Clause:
    """A disjunction of atom literals and modal literals.

    Built through :meth:`of`, the tuples are duplicate-free and sorted, so
    two clauses are equal exactly when they are equal as sets.
    """

    atom_literals: tuple = ()
    modal_literals: tuple = ()

    @classmethod
    def of(cls, items: Iterable[Item]) -> "Clause":
        lits, mods = set(), set()
        for it in items:
            if isinstance(it, Literal):
                lits.add(it)
            elif isinstance(it, ModalLiteral):
                mods.add(ModalLiteral(it.modality, it.positive, it.body.canonical()))
            else:
                raise TypeError(f"not a clause item: {it!r}")
        return cls(tuple(sorted(lits, key=_item_key)), tuple(sorted(mods, key=_item_key)))

    def canonical(self) -> "Clause":
        return Clause.of(self.items())

    def items(self) -> tuple:
        return self.atom_literals + self.modal_literals

    def __iter__(self) -> Iterator[Item]:
        return iter(self.items())

    def __len__(self):
        return len(self.atom_literals) + len(self.modal_literals)

    def __str__(self):
        return _format_set(self.items())


@dataclass(frozen=True)
class ModalCnf:
    """A conjunction of clauses; canonical when built with :meth:`of`."""

    clauses: tuple = ()

    @classmethod
    def of(cls, clauses: Iterable[Union[Clause, Iterable[Item]]]) -> "ModalCnf":
        out = {c.canonical() if isinstance(c, Clause) else Clause.of(c) for c in clauses}
        return cls(tuple(sorted(out, key=_clause_key)))

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self):
        return len(self.clauses)

    def __str__(self):
        return format_cnf(self)


def _format_set(items) -> str:
    if not items:
        return "{ }"
    return "{ " + ", ".join(str(i) for i in items) + " }"


def format_cnf(phi: ModalCnf) -> str:
    """Set notation, e.g. ``{ { ~[m]{ ~p, ~q } }, { [m]{ ~r } } }``."""
    return _format_set([str(c) for c in phi.clauses])


def canonicalize(phi: ModalCnf) -> ModalCnf:
    return ModalCnf.of(phi.clauses)


def _walk(clause: Clause, depth: int = 0):
    yield clause, depth
    for ml in clause.modal_literals:
        yield from _walk(ml.body, depth + 1)


def iter_clauses(phi: ModalCnf):
    """Yield ``(clause, depth)`` for every clause occurrence, top-down."""
    for c in phi.clauses:
        yield from _walk(c)


def modal_depth(phi: ModalCnf) -> int:
    return max((d for _, d in iter_clauses(phi)), default=0)


def atoms_of(phi: ModalCnf) -> frozenset:
    """Atoms at every depth, including atoms indexing ``@`` modalities."""
    out = set()
    for c, _ in iter_clauses(phi):
        out.update(l.atom for l in c.atom_literals)
        out.update(m.modality.index for m in c.modal_literals if m.modality.kind == AT)
    return frozenset(out)


def modalities_of(phi: ModalCnf) -> tuple:
    """Modalities in first-occurrence order of the canonical traversal."""
    seen = {}
    for c, _ in iter_clauses(phi):
        for m in c.modal_literals:
            seen.setdefault(m.modality, None)
    return tuple(seen)


# --------------------------------------------------------------------------
# Lexing and parsing

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<arrow>->)
      | (?P<punct>[~&|()\[\]<>{},@])
      | (?P<neg>¬)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)
_ATOM = re.compile(r"[a-z_][a-zA-Z0-9_]*\Z")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = m.start() + m.group().rfind("\n") + 1
        else:
            tok_text = "~" if kind == "neg" else m.group()
            toks.append(_Tok("punct" if kind == "neg" else kind, tok_text, line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.atoms: set = set()
        self.rel_names: set = set()

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        raise FormulaSyntaxError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "name":
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def atom_name(self) -> str:
        tok = self.tok
        if tok.kind != "name" or not _ATOM.match(tok.text):
            self.error(f"expected an atom, found {tok.text or 'end of input'!r}")
        self.i += 1
        self.atoms.add(tok.text)
        return tok.text

    def modality(self, close: str) -> Modality:
        start = self.tok
        if self.accept("@"):
            mod = Modality.at(self.atom_name())
        elif self.tok.kind == "name":
            mod = Modality.from_text(self.tok.text)
            if mod.kind == RELATIONAL:
                self.rel_names.add(mod.name)
            self.i += 1
        else:
            self.error("expected a modality")
        self.expect(close)
        if self.sig is not None and not self.sig.knows(mod):
            raise SignatureError(f"unknown modality {mod} (line {start.line}, column {start.col})")
        return mod

    def finish(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        clash = self.rel_names & (self.atoms | set(self.sig.atoms if self.sig else ()))
        if clash:
            raise SignatureError(f"names used both as atom and modality: {sorted(clash)}")

    # connective grammar, loosest first: -> | & unary
    def implication(self):
        left = self.disjunction()
        if self.tok.kind == "arrow":
            self.i += 1
            return Or(Not(left), self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("["):
            m = self.modality("]")
            return Box(m, self.unary())
        if self.accept("<"):
            m = self.modality(">")
            return Diamond(m, self.unary())
        if self.accept("("):
            f = self.implication()
            self.expect(")")
            return f
        return Atom(self.atom_name())

    # set notation
    def cnf(self) -> ModalCnf:
        return ModalCnf.of(self.braced(self.clause))

    def braced(self, element):
        self.expect("{")
        out = []
        if not self.accept("}"):
            out.append(element())
            while self.accept(","):
                out.append(element())
            self.expect("}")
        return out

    def clause(self) -> Clause:
        return Clause.of(self.braced(self.item))

    def item(self) -> Item:
        positive = not self.accept("~")
        if self.accept("["):
            m = self.modality("]")
            return ModalLiteral(m, positive, self.clause())
        return Literal(self.atom_name(), positive)


def parse_formula(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse the connective grammar; ``&``, ``->`` and ``<m>`` are kept as nodes
    except ``->`` which is desugared to ``~a | b``."""
    p = _Parser(text, sig)
    if p.tok.kind == "eof":
        p.error("empty formula")
    f = p.implication()
    p.finish()
    return f


def parse_cnf(text: str, sig: Optional[Signature] = None) -> ModalCnf:
    """Parse explicit set notation into a canonical :class:`ModalCnf`."""
    p = _Parser(text, sig)
    phi = p.cnf()
    p.finish()
    return phi


def read_cnf(text: str, sig: Optional[Signature] = None, **cnf_options) -> ModalCnf:
    """Accept either input form and return a canonical modal CNF."""
    if text.lstrip().startswith("{"):
        return parse_cnf(text, sig)
    return to_cnf(parse_formula(text, sig), **cnf_options)


# --------------------------------------------------------------------------
# CNF transformation


def _nnf(f: Formula, positive: bool = True) -> Formula:
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.arg, not positive)
    if isinstance(f, (And, Or)):
        left, right = _nnf(f.left, positive), _nnf(f.right, positive)
        flip = isinstance(f, And) != positive
        return Or(left, right) if flip else And(left, right)
    if isinstance(f, (Box, Diamond)):
        arg = _nnf(f.arg, positive)
        boxy = isinstance(f, Box) == positive
        return Box(f.modality, arg) if boxy else Diamond(f.modality, arg)
    raise TypeError(f"not a formula: {f!r}")


class _Cnf:
    def __init__(self, taken: set, budget: int):
        self.taken = taken
        self.budget = budget
        self.counter = 0

    def fresh(self) -> Literal:
        while f"{AUX_PREFIX}{self.counter}" in self.taken:
            self.counter += 1
        name = f"{AUX_PREFIX}{self.counter}"
        self.taken.add(name)
        return Literal(name)

    def clauses(self, f: Formula) -> list:
        if isinstance(f, Atom):
            return [frozenset([Literal(f.name)])]
        if isinstance(f, Not):
            return [frozenset([Literal(f.arg.name, False)])]
        if isinstance(f, And):
            return self.clauses(f.left) + self.clauses(f.right)
        if isinstance(f, Or):
            return self.disjoin(self.clauses(f.left), self.clauses(f.right))
        if isinstance(f, Box):
            return [frozenset([ModalLiteral(f.modality, True, Clause.of(c))]) for c in self.clauses(f.arg)]
        if isinstance(f, Diamond):
            return self.diamond(f.modality, self.clauses(f.arg))
        raise TypeError(f"not in NNF: {f!r}")

    def disjoin(self, left: list, right: list) -> list:
        if not left or not right:
            return []
        produced = sum(len(a) + len(b) for a in left for b in right)
        if len(left) > 1 and len(right) > 1 and produced > self.budget:
            # (d | right) & (~d | left)
            big, small = (left, right) if len(left) >= len(right) else (right, left)
            d = self.fresh()
            return [c | {d.neg()} for c in big] + [c | {d} for c in small]
        return [a | b for a in left for b in right]

    def diamond(self, modality: Modality, body: list) -> list:
        if all(len(c) == 1 for c in body):
            negated = Clause.of(next(iter(c)).neg() for c in body)
            return [frozenset([ModalLiteral(modality, False, negated)])]
        # <m>body  ~~>  ~[m]{d} & [m](d | C) for each C in body
        d = self.fresh()
        out = [frozenset([ModalLiteral(modality, False, Clause.of([d]))])]
        out += [frozenset([ModalLiteral(modality, True, Clause.of(c | {d}))]) for c in body]
        return out


def _formula_atoms(f: Formula, acc: set) -> set:
    if isinstance(f, Atom):
        acc.add(f.name)
    elif isinstance(f, (Not, Box, Diamond)):
        if isinstance(f, (Box, Diamond)) and f.modality.kind == AT:
            acc.add(f.modality.name)
        _formula_atoms(f.arg, acc)
    else:
        _formula_atoms(f.left, acc)
        _formula_atoms(f.right, acc)
    return acc


def to_cnf(f: Formula, budget: int = DEFAULT_DISTRIBUTION_BUDGET) -> ModalCnf:
    """Equisatisfiable modal CNF of ``f``.

    Disjunctions are distributed while a step produces at most ``budget``
    literals; larger steps, and diamonds whose body is not a conjunction of
    literals, introduce fresh atoms ``_d0, _d1, ...``.
    """
    conv = _Cnf(_formula_atoms(f, set()), budget)
    return ModalCnf.of(conv.clauses(_nnf(f)))


def is_aux_atom(name: str) -> bool:
    return name.startswith(AUX_PREFIX)
