"""Seeded generators of targets for tests, benchmarks and the suite command."""

from __future__ import annotations

import numpy as np

from .learners import model_from_function
from .logic import And, Atom, Const, Formula, Not, Or, Term, Vocabulary, enumerate_terms
from .models import (ActionModel, Event, RawActionModel, RawEvent, make_universal)


def random_post(pre: Term, rng: np.random.Generator) -> Term:
    """Random postcondition that shares no literal with ``pre``."""
    pos = neg = 0
    for i in range(len(pre.vocab)):
        bit = 1 << i
        r = int(rng.integers(0, 3))
        if r == 1 and not pre.pos & bit:
            pos |= bit
        elif r == 2 and not pre.neg & bit:
            neg |= bit
    return Term(pre.vocab, pos, neg)


def random_function_model(vocab: Vocabulary, rng: np.random.Generator) -> ActionModel:
    succ = rng.integers(0, vocab.n_states, size=vocab.n_states)
    return model_from_function(vocab, succ.tolist())


def random_partition_model(vocab: Vocabulary, rng: np.random.Generator,
                           split: float = 0.6) -> ActionModel:
    """Deterministic, universally applicable model with non-maximal preconditions.

    The state space is split recursively on random atoms; each leaf term is
    the precondition of one event with a random postcondition.
    """
    n = len(vocab)
    events = []

    def grow(t: Term, free: list[int]):
        if free and rng.random() < split:
            k = int(rng.integers(0, len(free)))
            i, rest = free[k], free[:k] + free[k + 1:]
            grow(Term(vocab, t.pos | 1 << i, t.neg), rest)
            grow(Term(vocab, t.pos, t.neg | 1 << i), rest)
        else:
            events.append(Event(t, random_post(t, rng)))

    grow(Term(vocab), list(range(n)))
    return ActionModel(vocab, events)


def random_term(vocab: Vocabulary, rng: np.random.Generator) -> Term:
    codes = rng.integers(0, 3, size=len(vocab))
    pos = sum(1 << i for i, c in enumerate(codes) if c == 1)
    neg = sum(1 << i for i, c in enumerate(codes) if c == 2)
    return Term(vocab, pos, neg)


def random_universal_model(vocab: Vocabulary, rng: np.random.Generator,
                           max_events: int = 4) -> ActionModel:
    """Random normal model closed under :func:`make_universal`; often non-deterministic."""
    k = int(rng.integers(1, max_events + 1))
    events = []
    for _ in range(k):
        pre = random_term(vocab, rng)
        events.append(Event(pre, random_post(pre, rng)))
    return make_universal(ActionModel(vocab, events))


def random_formula(vocab: Vocabulary, rng: np.random.Generator, depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return Const(bool(rng.integers(0, 2)))
        return Atom(vocab.atoms[int(rng.integers(0, len(vocab)))])
    r = int(rng.integers(0, 3))
    if r == 0:
        return Not(random_formula(vocab, rng, depth - 1))
    cls = And if r == 1 else Or
    return cls(random_formula(vocab, rng, depth - 1), random_formula(vocab, rng, depth - 1))


def random_raw_model(vocab: Vocabulary, rng: np.random.Generator, depth: int = 4,
                     max_events: int = 3) -> RawActionModel:
    k = int(rng.integers(1, max_events + 1))
    return RawActionModel(vocab, tuple(RawEvent(random_formula(vocab, rng, depth),
                                                random_term(vocab, rng)) for _ in range(k)))


def precondition_free_atomic_models(vocab: Vocabulary) -> list[ActionModel]:
    """``{<T, psi>}`` for every consistent term ``psi``."""
    top = Term(vocab)
    return [ActionModel(vocab, [Event(top, t)]) for t in enumerate_terms(vocab)]
