"""Observation streams generated from a hidden target model.

Infinite streams are represented by seeded generators; every consumer
works with finite prefixes.  Three policies are available:

``cyclic-canonical``
    the target's graph in canonical order, repeated forever
``cyclic-shuffled``
    the graph repeated, each cycle a fresh seeded permutation
``iid-uniform``
    independent uniform draws from the graph
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import ContractError, ParseError
from .logic import Vocabulary, check_same
from .models import (ActionModel, Observation, graph, graph_bits, is_deterministic,
                     is_universally_applicable)

# Finite stream prefix; duplicates are kept (learners dedup internally).
StreamPrefix = list[Observation]


class Policy(str, enum.Enum):
    CYCLIC_CANONICAL = "cyclic-canonical"
    CYCLIC_SHUFFLED = "cyclic-shuffled"
    IID_UNIFORM = "iid-uniform"


@dataclass(frozen=True)
class StreamSpec:
    target: ActionModel
    seed: int = 0
    policy: Policy = Policy.CYCLIC_SHUFFLED

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        if not is_universally_applicable(self.target):
            raise ContractError("stream targets must be universally applicable")


def cyclic_indices(size: int, policy: Policy, seed: int) -> Iterator[int]:
    """Indices into a graph of ``size`` elements under ``policy``."""
    policy = Policy(policy)
    if size == 0:
        return
    rng = np.random.default_rng(seed)
    if policy is Policy.IID_UNIFORM:
        while True:
            yield from rng.integers(0, size, size=size).tolist()
    while True:
        if policy is Policy.CYCLIC_SHUFFLED:
            yield from rng.permutation(size).tolist()
        else:
            yield from range(size)


def iter_stream(spec: StreamSpec) -> Iterator[Observation]:
    pairs = graph(spec.target)
    for i in cyclic_indices(len(pairs), spec.policy, spec.seed):
        yield pairs[i]


def generate_prefix(spec: StreamSpec, length: int) -> list[Observation]:
    if length < 0:
        raise ValueError("length must be non-negative")
    out = []
    for obs in iter_stream(spec):
        if len(out) >= length:
            break
        out.append(obs)
    return out


def is_sound_prefix(prefix: Iterable[Observation], A: ActionModel) -> bool:
    """Whether every observation is a possible transition of ``A``."""
    prefix = list(prefix)
    for o in prefix:
        check_same(o.vocab, A.vocab)
    if not prefix:
        return True
    n = len(A.vocab)
    b, a = graph_bits(A)
    allowed = set(((b << n) | a).tolist())
    return all((o.before.bits << n | o.after.bits) in allowed for o in prefix)


def covers_graph(prefix: Iterable[Observation], A: ActionModel) -> bool:
    """Whether every transition of ``A`` occurs in the prefix."""
    seen = set()
    for o in prefix:
        check_same(o.vocab, A.vocab)
        seen.add((o.before.bits, o.after.bits))
    b, a = graph_bits(A)
    return all(pair in seen for pair in zip(b.tolist(), a.tolist()))


def dftt(A: ActionModel) -> list[Observation]:
    """The graph of a deterministic, universally applicable model."""
    if not is_deterministic(A):
        raise ContractError("definite tell-tales are only defined for deterministic models")
    if not is_universally_applicable(A):
        raise ContractError("definite tell-tales require a universally applicable model")
    return graph(A)


# --- text format ------------------------------------------------------------

def format_observation(o: Observation) -> str:
    return str(o)


def parse_observation(line: str, vocab: Vocabulary) -> Observation:
    parts = line.split("->")
    if len(parts) != 2:
        raise ParseError(f"observation needs exactly one '->': {line!r}")
    return Observation(vocab.parse_state(parts[0]), vocab.parse_state(parts[1]))


def read_observations(lines: Iterable[str], vocab: Vocabulary) -> list[Observation]:
    out = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_observation(line, vocab))
    return out


def observation_set(prefix: Sequence[Observation]) -> set[tuple[int, int]]:
    return {(o.before.bits, o.after.bits) for o in prefix}
