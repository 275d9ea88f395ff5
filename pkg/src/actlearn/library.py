"""Named action libraries and the library learner built from per-name learners."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import ContractError, ParseError
from .learners import Kind, LearnerState
from .logic import State, Vocabulary, check_same
from .models import (ActionModel, Observation, events_from_dicts, vocab_from_dict, equivalent,
                     graph_bits, is_universally_applicable, model_to_dict)

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class ActionLibrary:
    vocab: Vocabulary
    models: Mapping[str, ActionModel]

    def __post_init__(self):
        models = dict(sorted(self.models.items()))
        for name, A in models.items():
            if not _NAME.match(name):
                raise ContractError(f"bad action name {name!r}")
            check_same(self.vocab, A.vocab)
            if not is_universally_applicable(A):
                raise ContractError(f"action {name!r} is not universally applicable")
        object.__setattr__(self, "models", models)

    @property
    def names(self) -> list[str]:
        return list(self.models)

    def __getitem__(self, name: str) -> ActionModel:
        return self.models[name]

    def __len__(self):
        return len(self.models)

    def __str__(self):
        return "\n".join(f"{a}: {A}" for a, A in self.models.items())


def libraries_equivalent(l1: ActionLibrary, l2: ActionLibrary) -> bool:
    check_same(l1.vocab, l2.vocab)
    return l1.names == l2.names and all(equivalent(l1[a], l2[a]) for a in l1.names)


@dataclass(frozen=True)
class TripleObservation:
    before: State
    name: str
    after: State

    def __post_init__(self):
        check_same(self.before.vocab, self.after.vocab)

    @property
    def pair(self) -> Observation:
        return Observation(self.before, self.after)

    def __str__(self):
        return f"{self.before} {self.name} -> {self.after}"


def substream(prefix: Iterable[TripleObservation], name: str) -> list[Observation]:
    return [t.pair for t in prefix if t.name == name]


def _library_graph(lib: ActionLibrary) -> list[TripleObservation]:
    out = []
    for name, A in lib.models.items():
        b, a = graph_bits(A)
        out.extend(TripleObservation(State(lib.vocab, x), name, State(lib.vocab, y))
                   for x, y in zip(b.tolist(), a.tolist()))
    return out


def generate_library_prefix(lib: ActionLibrary, seed: int, length: int) -> list[TripleObservation]:
    """Seeded interleaving; each cycle is a fresh shuffle of every named transition."""
    if length < 0:
        raise ValueError("length must be non-negative")
    triples = _library_graph(lib)
    if not triples:
        return []
    rng = np.random.default_rng(seed)
    out: list[TripleObservation] = []
    while len(out) < length:
        out.extend(triples[i] for i in rng.permutation(len(triples)).tolist())
    return out[:length]


@dataclass(frozen=True)
class LibraryVerdict:
    library: ActionLibrary | None = None

    @property
    def identified(self) -> bool:
        return self.library is not None


LIBRARY_UNDECIDED = LibraryVerdict()


@dataclass
class LibraryLearnerState:
    """Per-name update learners whose first answers are latched.

    The library is reported once, when every configured name has latched.
    Triples with other names still get their own learner but never block
    or join the verdict.
    """

    vocab: Vocabulary
    names: tuple[str, ...]
    kind: Kind = Kind.L3
    guard: bool = True
    per_name: dict[str, LearnerState] = field(default_factory=dict)
    latched: dict[str, ActionModel] = field(default_factory=dict)
    fired: bool = False
    steps: int = 0

    def __post_init__(self):
        self.kind = Kind(self.kind)
        self.names = tuple(sorted(set(self.names)))
        for a in self.names:
            self._learner(a)

    def _learner(self, name: str) -> LearnerState:
        if name not in self.per_name:
            self.per_name[name] = LearnerState(self.vocab, self.kind, guard=self.guard)
        return self.per_name[name]

    def step(self, t: TripleObservation) -> LibraryVerdict:
        check_same(t.before.vocab, self.vocab)
        self.steps += 1
        verdict = self._learner(t.name).step(t.pair)
        if verdict.identified:
            self.latched[t.name] = verdict.model
        if self.fired or not self.names or any(a not in self.latched for a in self.names):
            return LIBRARY_UNDECIDED
        self.fired = True
        return LibraryVerdict(ActionLibrary(self.vocab, {a: self.latched[a] for a in self.names}))


def library_learner_step(state: LibraryLearnerState,
                         t: TripleObservation) -> tuple[LibraryLearnerState, LibraryVerdict]:
    return state, state.step(t)


# --- formats ----------------------------------------------------------------

def library_to_dict(lib: ActionLibrary) -> dict:
    return {"atoms": list(lib.vocab.atoms),
            "actions": {a: {"events": model_to_dict(A)["events"]} for a, A in lib.models.items()}}


def library_from_dict(data: dict) -> ActionLibrary:
    vocab = vocab_from_dict(data)
    actions = data.get("actions")
    if not isinstance(actions, dict):
        raise ParseError("library JSON needs an 'actions' object")
    models = {}
    for name, body in actions.items():
        if not isinstance(body, dict) or not isinstance(body.get("events"), list):
            raise ParseError(f"action {name!r} needs an 'events' list")
        models[name] = ActionModel(vocab, events_from_dicts(vocab, body["events"]))
    return ActionLibrary(vocab, models)


def dumps_library(lib: ActionLibrary) -> str:
    lines = ["{", f'  "atoms": {json.dumps(list(lib.vocab.atoms))},', '  "actions": {']
    blocks = []
    for a, A in lib.models.items():
        events = model_to_dict(A)["events"]
        body = ",\n".join("      " + json.dumps(e) for e in events)
        blocks.append(f'    {json.dumps(a)}: {{"events": [\n{body}\n    ]}}' if events
                      else f'    {json.dumps(a)}: {{"events": []}}')
    lines.append(",\n".join(blocks))
    lines += ["  }", "}"]
    return "\n".join(x for x in lines if x) + "\n"


def loads_library(text: str) -> ActionLibrary:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return library_from_dict(data)


def parse_triple(line: str, vocab: Vocabulary) -> TripleObservation:
    m = re.fullmatch(r"\s*(\{[^}]*\})\s+(\S+)\s*->\s*(\{[^}]*\})\s*", line)
    if not m:
        raise ParseError(f"expected '{{...}} name -> {{...}}': {line!r}")
    if not _NAME.match(m.group(2)):
        raise ParseError(f"bad action name {m.group(2)!r}")
    return TripleObservation(vocab.parse_state(m.group(1)), m.group(2), vocab.parse_state(m.group(3)))


def read_triples(lines: Iterable[str], vocab: Vocabulary) -> list[TripleObservation]:
    return [parse_triple(x, vocab) for x in lines if x.strip() and not x.strip().startswith("#")]


def format_triples(triples: Sequence[TripleObservation]) -> str:
    return "".join(f"{t}\n" for t in triples)
