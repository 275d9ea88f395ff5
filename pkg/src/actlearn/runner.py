"""Single learning runs and run reports, shared by the CLI and the suite."""

from __future__ import annotations

import time
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .config import ContractError
from .learners import (Kind, LearnerState, LimitLearner, ModelClass, TellTaleLearner,
                       deterministic_maximal_models)
from .library import (ActionLibrary, LibraryLearnerState, TripleObservation,
                      generate_library_prefix, libraries_equivalent, library_to_dict)
from .logic import State, Term, Vocabulary
from .models import (ActionModel, Event, Observation, equivalent, has_singleton_outcomes,
                     is_universally_applicable, model_to_dict, outcomes)
from .streams import Policy, StreamSpec, iter_stream

LEARNERS = ("l1", "l2", "l3", "limit", "telltale")
LIBRARY_LEARNERS = ("l1", "l2", "l3")
TELLTALE_MAX_ATOMS = 2

Emit = Callable[[dict], None]


def class_mismatch(target: ActionModel, learner: str) -> str | None:
    """Why ``target`` lies outside the class ``learner`` is built for, or None."""
    if not is_universally_applicable(target):
        return "target is not universally applicable"
    if learner == "limit":
        return None
    if not has_singleton_outcomes(target):
        return "target is not deterministic"
    if learner == "l1":
        # the only candidate: what the target does to the empty and the full state
        v = target.vocab
        (low,) = outcomes(State(v, 0), target)
        (high,) = outcomes(State(v, v.mask), target)
        pos, neg = low.bits, v.mask & ~high.bits
        if pos & neg or not equivalent(
                ActionModel(v, [Event(Term(v), Term(v, pos, neg))]), target):
            return "target is not equivalent to a single precondition-free event"
    if learner == "telltale" and len(target.vocab) > TELLTALE_MAX_ATOMS:
        return f"tell-tale class is only enumerated up to {TELLTALE_MAX_ATOMS} atoms"
    return None


@lru_cache(maxsize=4)
def deterministic_class(vocab: Vocabulary) -> ModelClass:
    return ModelClass.build(deterministic_maximal_models(vocab))


def _verdict_json(model) -> dict | str:
    return "undecided" if model is None else {"model": model_to_dict(model)}


def run_learn(target: ActionModel, *, scenario: str, learner: str, seed: int | None = 0,
              policy: Policy | str = Policy.CYCLIC_CANONICAL, max_steps: int = 1000,
              observations: Sequence[Observation] | None = None, emit: Emit | None = None,
              guard: bool = True, timing: bool = False) -> dict:
    """Stream observations into one learner; returns the run report.

    ``observations`` replays a fixed prefix instead of generating a stream.
    Finite learners stop at their verdict.  The limit learner runs all
    ``max_steps`` and reports the step from which its conjecture stayed
    equivalent to the target.
    """
    if learner not in LEARNERS:
        raise ContractError(f"unknown learner {learner!r}; choose from {', '.join(LEARNERS)}")
    t0 = time.perf_counter()
    mismatch = class_mismatch(target, learner)
    if observations is not None:
        source: Iterable[Observation] = observations
        seed = policy = None
    else:
        spec = StreamSpec(target, seed=seed, policy=policy)
        source = iter_stream(spec)
        policy = spec.policy.value

    v = target.vocab
    if learner == "limit":
        agent = LimitLearner(v)
    elif learner == "telltale":
        if len(v) > TELLTALE_MAX_ATOMS:
            raise ContractError(f"tell-tale learning needs at most {TELLTALE_MAX_ATOMS} atoms, got {len(v)}")
        cls = deterministic_class(v)
        agent = TellTaleLearner(cls)
    else:
        agent = LearnerState(v, Kind(learner.upper()), guard=guard)

    steps_to_verdict = None
    answer = None
    n_obs = 0
    for obs in source:
        if n_obs >= max_steps:
            break
        n_obs += 1
        if learner == "limit":
            answer = agent.step(obs)
            ok = equivalent(answer, target)
            if not ok:
                steps_to_verdict = None
            elif steps_to_verdict is None:
                steps_to_verdict = n_obs
            if emit:
                emit({"step": n_obs, "obs": str(obs), "survivors": len(answer),
                      "verdict": "undecided"})
            continue
        verdict = agent.step(obs)
        if emit:
            survivors = (len(cls.consistent(agent.seen)) if learner == "telltale"
                         else len(agent.hypothesis))
            emit({"step": n_obs, "obs": str(obs), "survivors": survivors,
                  "verdict": _verdict_json(verdict.model)})
        if verdict.identified:
            steps_to_verdict = n_obs
            answer = verdict.model
            break

    report = {
        "scenario": scenario,
        "learner": learner,
        "seed": seed,
        "policy": policy,
        "max_steps": max_steps,
        "observations": n_obs,
        "steps_to_verdict": steps_to_verdict,
        "verdict": None if answer is None else model_to_dict(answer),
        "equivalent_to_target": None if answer is None else equivalent(answer, target),
        "class_mismatch": mismatch,
    }
    if timing:
        report["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return report


def run_library_learn(target: ActionLibrary, *, scenario: str, learner: str = "l3",
                      seed: int | None = 0, max_steps: int = 1000,
                      triples: Sequence[TripleObservation] | None = None,
                      emit: Emit | None = None, guard: bool = True,
                      timing: bool = False) -> dict:
    if learner not in LIBRARY_LEARNERS:
        raise ContractError(f"library learning supports {', '.join(LIBRARY_LEARNERS)}, not {learner!r}")
    t0 = time.perf_counter()
    mismatch = None
    for name in target.names:
        why = class_mismatch(target[name], learner)
        if why:
            mismatch = f"{name}: {why}"
            break
    if triples is None:
        source = generate_library_prefix(target, seed, max_steps)
    else:
        source = list(triples)[:max_steps]
        seed = None
    state = LibraryLearnerState(target.vocab, tuple(target.names), Kind(learner.upper()), guard=guard)
    steps_to_verdict = None
    answer = None
    n_obs = 0
    for t in source:
        n_obs += 1
        verdict = state.step(t)
        if emit:
            emit({"step": n_obs, "obs": str(t),
                  "survivors": {a: len(s.hypothesis) for a, s in sorted(state.per_name.items())},
                  "verdict": "undecided" if verdict.library is None
                  else {"library": library_to_dict(verdict.library)}})
        if verdict.identified:
            steps_to_verdict = n_obs
            answer = verdict.library
            break
    report = {
        "scenario": scenario,
        "learner": learner,
        "seed": seed,
        "max_steps": max_steps,
        "observations": n_obs,
        "steps_to_verdict": steps_to_verdict,
        "verdict": None if answer is None else library_to_dict(answer),
        "equivalent_to_target": None if answer is None else libraries_equivalent(answer, target),
        "latched": sorted(state.latched),
        "class_mismatch": mismatch,
    }
    if timing:
        report["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return report


def summarize(report: dict) -> str:
    """Short human-readable form of a report."""
    lines = [f"scenario {report['scenario']}, learner {report['learner']}, seed {report['seed']}"]
    if report["steps_to_verdict"] is None:
        lines.append(f"no verdict after {report['observations']} observations")
    else:
        lines.append(f"verdict at step {report['steps_to_verdict']}, "
                     f"equivalent to target: {report['equivalent_to_target']}")
    if report.get("class_mismatch"):
        lines.append(f"warning: {report['class_mismatch']}")
    if "elapsed_ms" in report:
        lines.append(f"elapsed {report['elapsed_ms']} ms")
    return "\n".join(lines)
