"""Events, fully observable propositional action models and the product update.

An :class:`ActionModel` keeps its events as four ``int64`` bitmask columns
in canonical order (by precondition, then postcondition, using the term
order of :attr:`actlearn.logic.Term.key`), with duplicates removed.  The
columns are what the kernels consume; :class:`Event` objects are built
lazily for inspection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np

from . import _kernels
from .config import MAX_ATOMS, CapacityError, ContractError, InapplicableEvent, ParseError
from .logic import (FALSE, Formula, Not, Or, State, Term, Vocabulary, check_formula,
                    check_same, dnf, eval_formula, formula_of_term, parse_formula,
                    satisfies)


@dataclass(frozen=True)
class Event:
    pre: Term
    post: Term

    def __post_init__(self):
        check_same(self.pre.vocab, self.post.vocab)

    @property
    def vocab(self) -> Vocabulary:
        return self.pre.vocab

    @property
    def is_normal(self) -> bool:
        return not (self.pre.pos & self.post.pos or self.pre.neg & self.post.neg)

    def __str__(self):
        return f"<{self.pre}, {self.post}>"

    def __repr__(self):
        return f"Event{self}"


@dataclass(frozen=True)
class Observation:
    before: State
    after: State

    def __post_init__(self):
        check_same(self.before.vocab, self.after.vocab)

    @property
    def vocab(self) -> Vocabulary:
        return self.before.vocab

    def __str__(self):
        return f"{self.before} -> {self.after}"

    def __repr__(self):
        return f"Observation({self})"


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class ActionModel:
    """A finite set of events over a vocabulary; indistinguishability is identity."""

    def __init__(self, vocab: Vocabulary, events: Iterable[Event] = ()):
        events = list(events)
        for e in events:
            check_same(vocab, e.vocab)
        cols = [np.array([getattr(getattr(e, side), part) for e in events], dtype=np.int64)
                for side in ("pre", "post") for part in ("pos", "neg")]
        self._set(vocab, *_canonical(len(vocab), *cols))

    def _set(self, vocab, pp, pn, qp, qn):
        self.vocab = vocab
        self.pre_pos, self.pre_neg = _readonly(pp), _readonly(pn)
        self.post_pos, self.post_neg = _readonly(qp), _readonly(qn)

    @classmethod
    def from_arrays(cls, vocab: Vocabulary, pre_pos, pre_neg, post_pos, post_neg,
                    canonical: bool = False) -> "ActionModel":
        cols = (pre_pos, pre_neg, post_pos, post_neg)
        if not canonical:
            cols = _canonical(len(vocab), *(np.asarray(c, dtype=np.int64) for c in cols))
        self = cls.__new__(cls)
        self._set(vocab, *cols)
        return self

    @property
    def columns(self):
        return self.pre_pos, self.pre_neg, self.post_pos, self.post_neg

    def subset(self, mask) -> "ActionModel":
        """Restriction to the events selected by a boolean mask (order kept)."""
        mask = np.asarray(mask, dtype=np.bool_)
        return ActionModel.from_arrays(self.vocab, *(c[mask] for c in self.columns),
                                       canonical=True)

    @cached_property
    def events(self) -> tuple[Event, ...]:
        v = self.vocab
        return tuple(Event(Term(v, int(a), int(b)), Term(v, int(c), int(d)))
                     for a, b, c, d in zip(*self.columns))

    def __len__(self) -> int:
        return len(self.pre_pos)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __contains__(self, e) -> bool:
        return e in self.events

    def __eq__(self, other):
        if not isinstance(other, ActionModel):
            return NotImplemented
        return (self.vocab.atoms == other.vocab.atoms and len(self) == len(other)
                and all(np.array_equal(a, b) for a, b in zip(self.columns, other.columns)))

    def __hash__(self):
        return hash((self.vocab.atoms, *(c.tobytes() for c in self.columns)))

    def __str__(self):
        return "{" + ", ".join(map(str, self.events)) + "}"

    def __repr__(self):
        return f"ActionModel({self})"


def _canonical(n, pp, pn, qp, qn):
    if len(pp) == 0:
        return pp, pn, qp, qn
    key = _kernels.term_keys(pp, pn, n) * (3 ** n) + _kernels.term_keys(qp, qn, n)
    _, idx = np.unique(key, return_index=True)
    return pp[idx], pn[idx], qp[idx], qn[idx]


@dataclass(frozen=True)
class TypeFlags:
    atomic: bool
    deterministic: bool
    precondition_free: bool
    universally_applicable: bool
    normal: bool
    basic_preconditions: bool
    maximal_preconditions: bool


# --- product update ---------------------------------------------------------

def apply_event(s: State, e: Event) -> State:
    if not satisfies(s, e.pre):
        raise InapplicableEvent(f"{s} does not satisfy the precondition of {e}")
    return State(s.vocab, (s.bits | e.post.pos) & ~e.post.neg)


def outcomes(s: State, A: ActionModel) -> frozenset[State]:
    check_same(s.vocab, A.vocab)
    app = _kernels.applicable(A.pre_pos, A.pre_neg, s.bits)
    res = (s.bits | A.post_pos[app]) & ~A.post_neg[app]
    return frozenset(State(s.vocab, int(b)) for b in np.unique(res))


def _check_capacity(vocab: Vocabulary):
    if len(vocab) > MAX_ATOMS:
        raise CapacityError(f"{len(vocab)} atoms exceeds the maximum of {MAX_ATOMS}")


def graph_bits(A: ActionModel) -> tuple[np.ndarray, np.ndarray]:
    """All (before, after) bitmask pairs, sorted by before then after."""
    _check_capacity(A.vocab)
    return _kernels.outcome_pairs(*A.columns, len(A.vocab))


def graph(A: ActionModel) -> list[Observation]:
    v = A.vocab
    befores, afters = graph_bits(A)
    return [Observation(State(v, int(b)), State(v, int(a))) for b, a in zip(befores, afters)]


def restrict(A: ActionModel, keep: Callable[[Event], bool]) -> ActionModel:
    return A.subset([bool(keep(e)) for e in A.events])


def applicable_counts(A: ActionModel) -> np.ndarray:
    _check_capacity(A.vocab)
    return _kernels.applicable_counts(A.pre_pos, A.pre_neg, len(A.vocab))


def classify(A: ActionModel) -> TypeFlags:
    counts = applicable_counts(A)
    full = A.vocab.mask
    return TypeFlags(
        atomic=len(A) == 1,
        deterministic=bool(np.all(counts <= 1)),
        precondition_free=bool(np.all((A.pre_pos | A.pre_neg) == 0)),
        universally_applicable=bool(np.all(counts >= 1)),
        normal=not bool(np.any((A.pre_pos & A.post_pos) | (A.pre_neg & A.post_neg))),
        basic_preconditions=True,
        maximal_preconditions=bool(np.all((A.pre_pos | A.pre_neg) == full)),
    )


def is_universally_applicable(A: ActionModel) -> bool:
    return bool(np.all(applicable_counts(A) >= 1))


def is_deterministic(A: ActionModel) -> bool:
    return bool(np.all(applicable_counts(A) <= 1))


def has_singleton_outcomes(A: ActionModel) -> bool:
    """Semantic determinism: every state has exactly one outcome.

    Weaker than :func:`is_deterministic`, which also forbids two applicable
    events that happen to produce the same successor.
    """
    b, _ = graph_bits(A)
    return len(b) == A.vocab.n_states and len(np.unique(b)) == len(b)


def equivalent(A1: ActionModel, A2: ActionModel) -> bool:
    """Outcome-set equality on every state."""
    return inequivalence_witness(A1, A2) is None


def inequivalence_witness(A1: ActionModel, A2: ActionModel) -> State | None:
    """The first state (canonical order) whose outcome sets differ, if any."""
    check_same(A1.vocab, A2.vocab)
    b1, a1 = graph_bits(A1)
    b2, a2 = graph_bits(A2)
    if len(b1) == len(b2) and np.array_equal(b1, b2) and np.array_equal(a1, a2):
        return None
    n = len(A1.vocab)
    k1 = set(((b1 << n) | a1).tolist())
    k2 = set(((b2 << n) | a2).tolist())
    return State(A1.vocab, min(k1 ^ k2) >> n)


# --- raw (formula-precondition) models --------------------------------------

@dataclass(frozen=True)
class RawEvent:
    pre: Formula
    post: Term


@dataclass(frozen=True)
class RawActionModel:
    vocab: Vocabulary
    events: tuple[RawEvent, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        for e in self.events:
            check_same(self.vocab, e.post.vocab)


def raw_outcomes(s: State, A: RawActionModel) -> frozenset[State]:
    out = set()
    for e in A.events:
        if eval_formula(s, e.pre):
            out.add(State(s.vocab, (s.bits | e.post.pos) & ~e.post.neg))
    return frozenset(out)


def normalize(A: RawActionModel) -> ActionModel:
    """Equivalent normal model with basic preconditions.

    Each raw event is split along the disjuncts of its precondition's DNF;
    postcondition conjuncts repeated in the precondition are dropped.
    """
    events = []
    for e in A.events:
        for d in dnf(e.pre, A.vocab):
            post = Term(A.vocab, e.post.pos & ~d.pos, e.post.neg & ~d.neg)
            events.append(Event(d, post))
    return ActionModel(A.vocab, events)


def make_universal(A: ActionModel) -> ActionModel:
    """Add ``<d, T>`` for each DNF disjunct ``d`` of the negated precondition disjunction."""
    if is_universally_applicable(A):
        return A
    v = A.vocab
    uncovered = {Term(v)}
    for pp, pn in zip(A.pre_pos.tolist(), A.pre_neg.tolist()):
        # c & -(l1 & ... & lk) == (c & -l1) | ... | (c & -lk)
        nxt = set()
        for c in uncovered:
            for i in range(len(v)):
                bit = 1 << i
                if pp & bit and not c.pos & bit:
                    nxt.add(Term(v, c.pos, c.neg | bit))
                elif pn & bit and not c.neg & bit:
                    nxt.add(Term(v, c.pos | bit, c.neg))
        uncovered = nxt
    top = Term(v)
    return ActionModel(v, list(A.events) + [Event(d, top) for d in uncovered])


def negated_cover_formula(A: ActionModel) -> Formula:
    """``-(pre1 | pre2 | ...)`` as a formula (``-F`` for the empty model)."""
    f = FALSE
    for i, e in enumerate(A.events):
        p = formula_of_term(e.pre)
        f = p if i == 0 else Or(f, p)
    return Not(f)


# --- JSON -------------------------------------------------------------------

def model_to_dict(A: ActionModel) -> dict:
    return {"atoms": list(A.vocab.atoms),
            "events": [{"pre": e.pre.literals(), "post": e.post.literals()} for e in A.events]}


def events_from_dicts(vocab: Vocabulary, items) -> list[Event]:
    out = []
    for item in items:
        try:
            pre, post = item["pre"], item["post"]
        except (KeyError, TypeError):
            raise ParseError(f"event needs 'pre' and 'post': {item!r}") from None
        if not isinstance(pre, list) or not isinstance(post, list):
            raise ParseError(f"'pre' and 'post' must be literal lists: {item!r}")
        out.append(Event(vocab.term_from_literals(pre), vocab.term_from_literals(post)))
    return out


def vocab_from_dict(data) -> Vocabulary:
    if not isinstance(data, dict) or not isinstance(data.get("atoms"), list):
        raise ParseError("model JSON needs an 'atoms' list")
    try:
        return Vocabulary(data["atoms"])
    except CapacityError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def model_from_dict(data: dict, vocab: Vocabulary | None = None) -> ActionModel:
    vocab = vocab or vocab_from_dict(data)
    events = data.get("events")
    if not isinstance(events, list):
        raise ParseError("model JSON needs an 'events' list")
    return ActionModel(vocab, events_from_dicts(vocab, events))


def dumps_model(A: ActionModel) -> str:
    d = model_to_dict(A)
    lines = ["{", f'  "atoms": {json.dumps(d["atoms"])},']
    if d["events"]:
        lines.append('  "events": [')
        lines.append(",\n".join("    " + json.dumps(e) for e in d["events"]))
        lines.append("  ]")
    else:
        lines.append('  "events": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> ActionModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return model_from_dict(data)


def raw_model_from_dict(data: dict) -> RawActionModel:
    """Like :func:`model_from_dict`, but ``pre`` may be a formula string."""
    vocab = vocab_from_dict(data)
    events = []
    for item in data.get("events", []):
        pre = item.get("pre") if isinstance(item, dict) else None
        if isinstance(pre, str):
            f = parse_formula(pre)
        elif isinstance(pre, list):
            f = formula_of_term(vocab.term_from_literals(pre))
        else:
            raise ParseError(f"bad precondition in {item!r}")
        post = item.get("post")
        if not isinstance(post, list):
            raise ParseError(f"'post' must be a literal list: {item!r}")
        events.append(RawEvent(f, vocab.term_from_literals(post)))
        try:
            check_formula(vocab, f)
        except ContractError as exc:
            raise ParseError(str(exc)) from None
    return RawActionModel(vocab, tuple(events))
