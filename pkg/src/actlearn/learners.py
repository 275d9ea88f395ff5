"""Update learners, the limit learner and the generic tell-tale learner.

The update learners start from a large hypothesis model and delete every
event contradicted by an observation.  They differ in the initial
hypothesis and in when they commit to an answer:

* ``L1``: events ``<T, psi>`` for every consistent term ``psi``; commits
  when a single event survives.
* ``L2``: events ``<phi, psi>`` with ``phi`` maximal and ``psi`` sharing no
  literal with ``phi``; commits when surviving preconditions are pairwise
  distinct.
* ``L3``: as ``L2`` with ``phi`` any consistent term; commits once every
  state has been seen as an input, answering with the events whose
  preconditions are weakest among the survivors.

Each learner answers at most once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .config import HYPOTHESIS_MAX_ATOMS, CapacityError, ContractError
from .logic import Vocabulary, check_same
from .models import ActionModel, Observation, graph_bits
from .streams import dftt, observation_set


class Kind(str, enum.Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"


# Per-atom (precondition code, postcondition code); 0 absent, 1 p, 2 -p.
_CHOICES = {
    Kind.L1: [(0, 0), (0, 1), (0, 2)],
    Kind.L2: [(1, 0), (1, 2), (2, 0), (2, 1)],
    Kind.L3: [(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)],
}


def hypothesis_size(n_atoms: int, kind: Kind | str) -> int:
    return len(_CHOICES[Kind(kind)]) ** n_atoms


def init_hypothesis(vocab: Vocabulary, kind: Kind | str) -> ActionModel:
    kind = Kind(kind)
    n = len(vocab)
    limit = HYPOTHESIS_MAX_ATOMS[kind.value]
    if n > limit:
        raise CapacityError(
            f"{kind.value} hypothesis over {n} atoms has {hypothesis_size(n, kind)} events; "
            f"the limit is {limit} atoms")
    choices = np.array(_CHOICES[kind], dtype=np.int64)
    return ActionModel.from_arrays(vocab, *_kernels.enumerate_events(choices, n))


def update_model(A: ActionModel, obs: Observation) -> ActionModel:
    """Drop every event applicable at ``obs.before`` that does not yield ``obs.after``."""
    check_same(A.vocab, obs.vocab)
    keep = _kernels.update_mask(*A.columns, obs.before.bits, obs.after.bits)
    return A.subset(keep)


def update_all(A: ActionModel, observations: Iterable[Observation]) -> ActionModel:
    for o in observations:
        A = update_model(A, o)
    return A


def minimize(A: ActionModel) -> ActionModel:
    """Keep the events whose precondition strictly entails no other precondition.

    Events sharing an identical precondition never remove each other.
    """
    return A.subset(~_kernels.has_strictly_weaker(A.pre_pos, A.pre_neg))


def covers_all_states(A: ActionModel) -> bool:
    return bool(np.all(_kernels.applicable_counts(A.pre_pos, A.pre_neg, len(A.vocab)) >= 1))


@dataclass(frozen=True)
class Verdict:
    """Either undecided (``model is None``) or an identified model."""

    model: ActionModel | None = None

    @property
    def identified(self) -> bool:
        return self.model is not None

    def __str__(self):
        return "undecided" if self.model is None else f"identified {self.model}"


UNDECIDED = Verdict()


class LearnerState:
    """A once-defined update learner fed one observation at a time.

    With ``guard`` enabled (the default) a learner also refuses to commit
    to a hypothesis that leaves some state without an applicable event.
    For streams of models inside the learner's class this never delays
    the answer; it keeps the learners quiet on streams that have already
    exposed non-determinism.
    """

    def __init__(self, vocab: Vocabulary, kind: Kind | str, guard: bool = True):
        self.kind = Kind(kind)
        self.vocab = vocab
        self.guard = guard
        self.hypothesis = init_hypothesis(vocab, self.kind)
        self.observed_inputs: set[int] = set()
        self.fired = False
        self.steps = 0
        self.answer: ActionModel | None = None

    def step(self, obs: Observation) -> Verdict:
        self.hypothesis = update_model(self.hypothesis, obs)
        self.observed_inputs.add(obs.before.bits)
        self.steps += 1
        if self.fired:
            return UNDECIDED
        model = self._trigger()
        if model is None:
            return UNDECIDED
        self.fired = True
        self.answer = model
        return Verdict(model)

    def _trigger(self) -> ActionModel | None:
        H = self.hypothesis
        if self.kind is Kind.L1:
            return H if len(H) == 1 else None
        if self.kind is Kind.L2:
            pres = np.unique(H.pre_pos)  # maximal preconditions: pos part determines pre
            if len(pres) != len(H):
                return None
            if self.guard and len(H) != self.vocab.n_states:
                return None
            return H
        if len(self.observed_inputs) < self.vocab.n_states:
            return None
        out = minimize(H)
        if self.guard and not covers_all_states(out):
            return None
        return out


def learner_step(state: LearnerState, obs: Observation) -> tuple[LearnerState, Verdict]:
    return state, state.step(obs)


def run_learner(vocab: Vocabulary, kind: Kind | str, observations: Iterable[Observation],
                max_steps: int | None = None, guard: bool = True) -> tuple[int | None, Verdict]:
    """Feed observations until the learner answers; returns (step, verdict)."""
    learner = LearnerState(vocab, kind, guard=guard)
    for i, obs in enumerate(observations, start=1):
        if max_steps is not None and i > max_steps:
            break
        verdict = learner.step(obs)
        if verdict.identified:
            return i, verdict
    return None, UNDECIDED


# --- identification in the limit --------------------------------------------

def limit_conjecture(prefix: Sequence[Observation], vocab: Vocabulary) -> ActionModel:
    """Maximal-precondition model of exactly the observed transitions.

    States never seen as inputs get the placeholder ``<chi_s, T>`` so the
    conjecture stays universally applicable.
    """
    for o in prefix:
        check_same(o.vocab, vocab)
    pairs = observation_set(prefix)
    return _conjecture(pairs, vocab)


def _conjecture(pairs: set[tuple[int, int]], vocab: Vocabulary) -> ActionModel:
    full = vocab.mask
    if pairs:
        arr = np.array(sorted(pairs), dtype=np.int64)
        b, a = arr[:, 0], arr[:, 1]
    else:
        b = a = np.zeros(0, dtype=np.int64)
    unseen = np.setdiff1d(np.arange(vocab.n_states, dtype=np.int64), b)
    pre_pos = np.concatenate([b, unseen])
    pre_neg = full & ~pre_pos
    post_pos = np.concatenate([a & ~b, np.zeros_like(unseen)])
    post_neg = np.concatenate([b & ~a, np.zeros_like(unseen)])
    return ActionModel.from_arrays(vocab, pre_pos, pre_neg, post_pos, post_neg)


class LimitLearner:
    """Stepwise form of :func:`limit_conjecture`; conjectures at every step."""

    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab
        self.pairs: set[tuple[int, int]] = set()
        self.steps = 0

    def step(self, obs: Observation) -> ActionModel:
        check_same(obs.vocab, self.vocab)
        self.pairs.add((obs.before.bits, obs.after.bits))
        self.steps += 1
        return self.conjecture()

    def conjecture(self) -> ActionModel:
        return _conjecture(self.pairs, self.vocab)


# --- tell-tale learner ------------------------------------------------------

def _graph_set(A: ActionModel) -> frozenset[tuple[int, int]]:
    b, a = graph_bits(A)
    return frozenset(zip(b.tolist(), a.tolist()))


@dataclass
class ModelClass:
    """An enumerated class of models, each with a finite tell-tale set.

    Members are kept up to equivalence: a model whose graph repeats an
    earlier member's is dropped.
    """

    vocab: Vocabulary
    members: list[ActionModel] = field(default_factory=list)
    graphs: list[frozenset[tuple[int, int]]] = field(default_factory=list)
    tell_tales: list[frozenset[tuple[int, int]]] = field(default_factory=list)

    @classmethod
    def build(cls, members: Iterable[ActionModel],
              tell_tale: Callable[[ActionModel], Iterable[Observation]] = dftt) -> "ModelClass":
        members = list(members)
        if not members:
            raise ContractError("a model class needs at least one member")
        out = cls(members[0].vocab)
        seen = set()
        for A in members:
            check_same(A.vocab, out.vocab)
            g = _graph_set(A)
            if g in seen:
                continue
            seen.add(g)
            out.members.append(A)
            out.graphs.append(g)
            out.tell_tales.append(frozenset((o.before.bits, o.after.bits) for o in tell_tale(A)))
        return out

    def __len__(self):
        return len(self.members)

    def consistent(self, seen: set[tuple[int, int]]) -> list[int]:
        """Indices of members whose graph contains every observed pair."""
        return [i for i, g in enumerate(self.graphs) if seen <= g]

    def identify(self, seen: set[tuple[int, int]]) -> Verdict:
        for A, g, tt in zip(self.members, self.graphs, self.tell_tales):
            if tt <= seen and seen <= g:
                return Verdict(A)
        return UNDECIDED


def tell_tale_step(cls: ModelClass, prefix: Sequence[Observation]) -> Verdict:
    """First member whose tell-tale occurs in the prefix and whose graph contains the prefix."""
    return cls.identify(observation_set(prefix))


class TellTaleLearner:
    def __init__(self, cls: ModelClass):
        self.cls = cls
        self.seen: set[tuple[int, int]] = set()
        self.fired = False
        self.steps = 0

    def step(self, obs: Observation) -> Verdict:
        check_same(obs.vocab, self.cls.vocab)
        self.seen.add((obs.before.bits, obs.after.bits))
        self.steps += 1
        if self.fired:
            return UNDECIDED
        verdict = self.cls.identify(self.seen)
        self.fired = verdict.identified
        return verdict


def deterministic_maximal_models(vocab: Vocabulary) -> Iterator[ActionModel]:
    """Every deterministic, universally applicable model with maximal preconditions.

    One model per function from states to states, ``(2^n)^(2^n)`` in all.
    """
    n_states = vocab.n_states
    if n_states ** n_states > 1 << 20:
        raise CapacityError(f"{n_states}^{n_states} deterministic models is too many")
    full = vocab.mask
    befores = np.arange(n_states, dtype=np.int64)
    for flat in range(n_states ** n_states):
        afters = np.empty(n_states, dtype=np.int64)
        for s in range(n_states):
            flat, afters[s] = divmod(flat, n_states)
        yield ActionModel.from_arrays(vocab, befores, full & ~befores,
                                      afters & ~befores, befores & ~afters)


def model_from_function(vocab: Vocabulary, successor: Sequence[int]) -> ActionModel:
    """Maximal-precondition model mapping state ``s`` to ``successor[s]``."""
    b = np.arange(vocab.n_states, dtype=np.int64)
    a = np.asarray(successor, dtype=np.int64)
    return ActionModel.from_arrays(vocab, b, vocab.mask & ~b, a & ~b, b & ~a)
