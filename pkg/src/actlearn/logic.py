"""Atoms, propositional states, literal-conjunction terms and formulas.

States and terms are stored as integer bitmasks over the vocabulary
ordering (atom ``i`` is bit ``i``), so equality, entailment and
satisfaction are single bitwise operations.

Textual forms used throughout the package:

* state: ``{p,q}`` (atoms in vocabulary order), ``{}`` when empty
* term: ``p&-q``, ``T`` for the empty conjunction
* formula: terms plus ``|``, parentheses and ``F``; ``-`` binds tightest,
  then ``&``, then ``|``
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from . import _kernels
from .config import MAX_ATOMS, CapacityError, ParseError, VocabularyMismatch

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*\Z")
_RESERVED = {"T", "F"}


@dataclass(frozen=True)
class Vocabulary:
    """An ordered, duplicate-free sequence of atom names."""

    atoms: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atoms in vocabulary: {atoms}")
        if len(atoms) > MAX_ATOMS:
            raise CapacityError(
                f"vocabulary has {len(atoms)} atoms; the maximum is {MAX_ATOMS}")
        for a in atoms:
            if not isinstance(a, str) or not _ATOM_RE.match(a) or a in _RESERVED:
                raise ValueError(f"invalid atom name: {a!r}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(atoms)})

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __contains__(self, atom) -> bool:
        return atom in self._index

    @property
    def mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    @property
    def n_states(self) -> int:
        return 1 << len(self.atoms)

    def bit(self, atom: str) -> int:
        try:
            return 1 << self._index[atom]
        except KeyError:
            raise VocabularyMismatch(f"atom {atom!r} not in vocabulary {self.atoms}") from None

    def bits(self, atoms: Iterable[str]) -> int:
        out = 0
        for a in atoms:
            out |= self.bit(a)
        return out

    def names(self, bits: int) -> list[str]:
        return [a for i, a in enumerate(self.atoms) if bits >> i & 1]

    def state(self, members: Iterable[str] = ()) -> "State":
        return State(self, self.bits(members))

    def states(self) -> Iterator["State"]:
        """All states in canonical order (increasing bitmask)."""
        for bits in range(self.n_states):
            yield State(self, bits)

    def term(self, pos: Iterable[str] = (), neg: Iterable[str] = ()) -> "Term":
        return Term(self, self.bits(pos), self.bits(neg))

    def parse_state(self, text: str) -> "State":
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise ParseError(f"state must be written in braces: {text!r}")
        inner = text[1:-1].strip()
        names = [x.strip() for x in inner.split(",")] if inner else []
        try:
            return self.state(names)
        except VocabularyMismatch as exc:
            raise ParseError(str(exc)) from None

    def parse_term(self, text: str) -> "Term":
        return self.term_from_literals(
            [] if text.strip() == "T" else [x.strip() for x in text.split("&")])

    def term_from_literals(self, literals: Iterable[str]) -> "Term":
        pos = neg = 0
        try:
            for lit in literals:
                if lit.startswith("-"):
                    neg |= self.bit(lit[1:])
                else:
                    pos |= self.bit(lit)
        except VocabularyMismatch as exc:
            raise ParseError(str(exc)) from None
        if pos & neg:
            raise ParseError(f"inconsistent term: {list(literals)}")
        return Term(self, pos, neg)


def check_same(v1: Vocabulary, v2: Vocabulary) -> None:
    if v1 is not v2 and v1.atoms != v2.atoms:
        raise VocabularyMismatch(f"vocabularies differ: {v1.atoms} vs {v2.atoms}")


@dataclass(frozen=True, order=True)
class State:
    vocab: Vocabulary = field(compare=False)
    bits: int

    def __post_init__(self):
        if self.bits & ~self.vocab.mask:
            raise VocabularyMismatch(f"state bits {self.bits:#x} outside vocabulary")

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.bits == other.bits and self.vocab.atoms == other.vocab.atoms

    def __hash__(self):
        return hash(("State", self.bits, self.vocab.atoms))

    @property
    def members(self) -> frozenset[str]:
        return frozenset(self.vocab.names(self.bits))

    def __str__(self) -> str:
        return "{" + ",".join(self.vocab.names(self.bits)) + "}"

    def __repr__(self) -> str:
        return f"State({self})"


@dataclass(frozen=True)
class Term:
    """A consistent conjunction of literals."""

    vocab: Vocabulary = field(compare=False)
    pos: int = 0
    neg: int = 0

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("inconsistent term: an atom occurs both positively and negatively")
        if (self.pos | self.neg) & ~self.vocab.mask:
            raise VocabularyMismatch("term mentions atoms outside its vocabulary")

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return (self.pos == other.pos and self.neg == other.neg
                and self.vocab.atoms == other.vocab.atoms)

    def __hash__(self):
        return hash(("Term", self.pos, self.neg, self.vocab.atoms))

    @property
    def is_top(self) -> bool:
        return self.pos == 0 and self.neg == 0

    @property
    def is_maximal(self) -> bool:
        return (self.pos | self.neg) == self.vocab.mask

    @property
    def key(self) -> int:
        """Canonical sort key: per-atom code absent < positive < negative."""
        key = 0
        for i in range(len(self.vocab)):
            key = key * 3 + (1 if self.pos >> i & 1 else 2 if self.neg >> i & 1 else 0)
        return key

    def literals(self) -> list[str]:
        out = []
        for i, a in enumerate(self.vocab.atoms):
            if self.pos >> i & 1:
                out.append(a)
            elif self.neg >> i & 1:
                out.append("-" + a)
        return out

    def conjoin(self, other: "Term") -> "Term | None":
        """Conjunction of two terms, or None when it is inconsistent."""
        pos, neg = self.pos | other.pos, self.neg | other.neg
        if pos & neg:
            return None
        return Term(self.vocab, pos, neg)

    def __str__(self) -> str:
        return "&".join(self.literals()) or "T"

    def __repr__(self) -> str:
        return f"Term({self})"


def satisfies(s: State, t: Term) -> bool:
    check_same(s.vocab, t.vocab)
    return (t.pos & ~s.bits) == 0 and (t.neg & s.bits) == 0


def entails(t1: Term, t2: Term) -> bool:
    """Whether every state satisfying ``t1`` satisfies ``t2``."""
    check_same(t1.vocab, t2.vocab)
    return (t2.pos & ~t1.pos) == 0 and (t2.neg & ~t1.neg) == 0


def term_for_state(s: State) -> Term:
    """The maximal term satisfied by exactly ``s``."""
    return Term(s.vocab, s.bits, s.vocab.mask & ~s.bits)


def enumerate_terms(vocab: Vocabulary) -> list[Term]:
    """All 3^|P| consistent terms in canonical order."""
    n = len(vocab)
    if n > 12:
        raise CapacityError(f"3^{n} terms is too many to enumerate")
    choices = np.array([[0, 0], [0, 1], [0, 2]], dtype=np.int64)
    _, _, pos, neg = _kernels.enumerate_events(choices, n)
    order = np.argsort(_kernels.term_keys(pos, neg, n), kind="stable")
    return [Term(vocab, int(pos[i]), int(neg[i])) for i in order]


# --- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "T" if self.value else "F"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"-{_wrap(self.arg)}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left)}&{_wrap(self.right)}"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left}|{self.right})"


Formula = Union[Atom, Const, Not, And, Or]
TRUE = Const(True)
FALSE = Const(False)


def _wrap(f: Formula) -> str:
    return f"({f})" if isinstance(f, And) else str(f)


def formula_of_term(t: Term) -> Formula:
    parts = [Atom(a) for a in t.vocab.names(t.pos)] + [Not(Atom(a)) for a in t.vocab.names(t.neg)]
    out: Formula = TRUE
    for i, p in enumerate(parts):
        out = p if i == 0 else And(out, p)
    return out


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return atoms_of(f.arg)
    return atoms_of(f.left) | atoms_of(f.right)


def check_formula(vocab: Vocabulary, f: Formula) -> None:
    missing = atoms_of(f) - set(vocab.atoms)
    if missing:
        raise VocabularyMismatch(f"formula mentions atoms {sorted(missing)} outside {vocab.atoms}")


def _eval(bits: int, vocab: Vocabulary, f: Formula) -> bool:
    if isinstance(f, Atom):
        return bool(bits & vocab.bit(f.name))
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _eval(bits, vocab, f.arg)
    if isinstance(f, And):
        return _eval(bits, vocab, f.left) and _eval(bits, vocab, f.right)
    if isinstance(f, Or):
        return _eval(bits, vocab, f.left) or _eval(bits, vocab, f.right)
    raise TypeError(f"not a formula: {f!r}")


def eval_formula(s: State, f: Formula) -> bool:
    check_formula(s.vocab, f)
    return _eval(s.bits, s.vocab, f)


def dnf(f: Formula, vocab: Vocabulary) -> frozenset[Term]:
    """Disjuncts of a DNF of ``f``; contradictory disjuncts are dropped.

    Naive distribution with on-the-fly pruning; no minimisation.
    """
    check_formula(vocab, f)
    return frozenset(_dnf(f, vocab, positive=True))


def _dnf(f: Formula, vocab: Vocabulary, positive: bool) -> set[Term]:
    # ``positive=False`` computes the DNF of the negation (negation pushed inward).
    if isinstance(f, Const):
        return {Term(vocab)} if f.value == positive else set()
    if isinstance(f, Atom):
        b = vocab.bit(f.name)
        return {Term(vocab, b, 0) if positive else Term(vocab, 0, b)}
    if isinstance(f, Not):
        return _dnf(f.arg, vocab, not positive)
    conj = isinstance(f, And) == positive
    left = _dnf(f.left, vocab, positive)
    right = _dnf(f.right, vocab, positive)
    if not conj:
        return left | right
    out = set()
    for a in left:
        for b in right:
            c = a.conjoin(b)
            if c is not None:
                out.add(c)
    return out


_TOKEN_RE = re.compile(r"\s*(?:(\()|(\))|(&)|(\|)|(-)|([A-Za-z_][A-Za-z0-9_.']*))")


def parse_formula(text: str) -> Formula:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        tokens.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    parser = _FormulaParser(tokens, text)
    f = parser.disjunction()
    if parser.i != len(tokens):
        raise ParseError(f"trailing input in formula {text!r}")
    return f


class _FormulaParser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self):
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of formula {self.text!r}")
        self.i += 1
        return tok

    def disjunction(self):
        f = self.conjunction()
        while self._peek() == "|":
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self._peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self._take()
        if tok == "-":
            return Not(self.unary())
        if tok == "(":
            f = self.disjunction()
            if self._take() != ")":
                raise ParseError(f"missing ')' in {self.text!r}")
            return f
        if tok in ("T", "F"):
            return Const(tok == "T")
        if tok in (")", "&", "|"):
            raise ParseError(f"unexpected {tok!r} in {self.text!r}")
        return Atom(tok)
