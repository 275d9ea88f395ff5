import itertools

import numpy as np
import pytest

from actlearn import oracle
from actlearn.config import CapacityError, ContractError, VocabularyMismatch
from actlearn.learners import (UNDECIDED, Kind, LearnerState, LimitLearner, ModelClass,
                               TellTaleLearner, covers_all_states, deterministic_maximal_models,
                               init_hypothesis, learner_step, limit_conjecture, minimize,
                               model_from_function, run_learner, tell_tale_step, update_all,
                               update_model)
from actlearn.logic import Vocabulary
from actlearn.models import ActionModel, Event, equivalent, graph, has_singleton_outcomes
from actlearn.scenarios import coin, counter, pushbutton
from actlearn.streams import StreamSpec, generate_prefix, iter_stream, parse_observation


def events_of(A):
    return set(zip(*(c.tolist() for c in A.columns)))


def model(v, *pairs):
    return ActionModel(v, [Event(v.parse_term(a), v.parse_term(b)) for a, b in pairs])


def obs(v, *lines):
    return [parse_observation(x, v) for x in lines]


@pytest.mark.parametrize("kind, base", [("L1", 3), ("L2", 4), ("L3", 7)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_init_hypothesis_matches_definition(kind, base, n):
    v = Vocabulary(["p", "q", "r"][:n])
    H = init_hypothesis(v, kind)
    assert len(H) == base ** n
    assert events_of(H) == oracle.init_events(n, kind)


def test_init_hypothesis_examples(P, PQ):
    assert len(init_hypothesis(PQ, "L1")) == 9
    assert events_of(init_hypothesis(P, "L2")) == events_of(
        model(P, ("p", "T"), ("-p", "T"), ("p", "-p"), ("-p", "p")))
    assert len(init_hypothesis(P, "L3")) == 7


def test_init_hypothesis_is_canonical(PQ):
    H = init_hypothesis(PQ, "L3")
    keys = [(e.pre.key, e.post.key) for e in H]
    assert keys == sorted(keys)


def test_init_hypothesis_capacity():
    with pytest.raises(CapacityError, match="L3"):
        init_hypothesis(Vocabulary([f"a{i}" for i in range(7)]), "L3")
    with pytest.raises(ValueError):
        init_hypothesis(Vocabulary(["p"]), "L4")


def test_update_example(P):
    H = init_hypothesis(P, "L2")
    H1 = update_model(H, parse_observation("{} -> {p}", P))
    assert events_of(H) - events_of(H1) == events_of(model(P, ("-p", "T")))
    H2 = update_model(H1, parse_observation("{p} -> {}", P))
    assert events_of(H2) == events_of(model(P, ("p", "-p"), ("-p", "p")))


def test_update_vacuous_when_nothing_applies(PQ):
    A = model(PQ, ("p", "q"))
    assert update_model(A, parse_observation("{} -> {q}", PQ)) == A


def test_update_vocabulary_mismatch(P, PQ):
    with pytest.raises(VocabularyMismatch):
        update_model(init_hypothesis(P, "L1"), parse_observation("{} -> {}", PQ))


def test_update_matches_oracle_and_is_order_independent(PQ):
    states = range(4)
    pairs = list(itertools.product(states, states))
    rng = np.random.default_rng(0)
    for kind in ("L1", "L2", "L3"):
        H = init_hypothesis(PQ, kind)
        ref = oracle.init_events(2, kind)
        for _ in range(20):
            picks = [pairs[i] for i in rng.choice(len(pairs), size=3, replace=False)]
            os_ = [parse_observation(f"{PQ.state(PQ.names(a))} -> {PQ.state(PQ.names(b))}", PQ)
                   for a, b in picks]
            expect = ref
            for a, b in picks:
                expect = oracle.update(expect, a, b)
            for perm in itertools.permutations(os_):
                assert events_of(update_all(H, perm)) == expect


def test_minimize_examples(P):
    A = model(P, ("T", "p"), ("-p", "p"), ("p", "T"))
    assert str(minimize(A)) == "{<T, p>}"
    single = model(P, ("p", "T"))
    assert minimize(single) == single
    flip = model(P, ("p", "-p"), ("-p", "p"))
    assert minimize(flip) == flip


def test_minimize_keeps_equal_preconditions(PQ):
    A = model(PQ, ("p", "q"), ("p", "-q"), ("p&q", "T"))
    assert events_of(minimize(A)) == events_of(model(PQ, ("p", "q"), ("p", "-q")))


def test_minimize_matches_oracle(PQR):
    rng = np.random.default_rng(1)
    H = init_hypothesis(PQR, "L3")
    for _ in range(30):
        A = H.subset(rng.random(len(H)) < 0.02)
        assert events_of(minimize(A)) == oracle.minimize(events_of(A), 3)


def test_learner_pushbutton_streams(P):
    learner = LearnerState(P, "L2")
    first, second = obs(P, "{} -> {p}", "{p} -> {}")
    assert learner.step(first) is UNDECIDED
    v = learner.step(second)
    assert v.identified and events_of(v.model) == events_of(model(P, ("p", "-p"), ("-p", "p")))

    learner = LearnerState(P, "L2")
    verdicts = [learner.step(o) for o in obs(P, "{} -> {p}", "{p} -> {p}")]
    assert not verdicts[0].identified
    assert events_of(verdicts[1].model) == events_of(model(P, ("p", "T"), ("-p", "p")))


def test_l1_fires_on_first_observation():
    h = coin().vocab
    learner = LearnerState(h, "L1")
    _, v = learner_step(learner, parse_observation("{} -> {h}", h))
    assert str(v.model) == "{<T, h>}"
    assert learner.steps == 1 and learner.fired


def test_once_defined(P):
    learner = LearnerState(P, "L2")
    out = [learner.step(o) for o in obs(P, "{} -> {p}", "{p} -> {}", "{} -> {p}", "{p} -> {}")]
    assert [v.identified for v in out] == [False, True, False, False]
    assert learner.steps == 4


def test_hypothesis_only_shrinks():
    c = counter(2)
    for kind in ("L1", "L2", "L3"):
        learner = LearnerState(c.vocab, kind)
        prev = events_of(learner.hypothesis)
        for o in generate_prefix(StreamSpec(c.target, seed=3), 12):
            learner.step(o)
            cur = events_of(learner.hypothesis)
            assert cur <= prev
            prev = cur


def test_target_events_survive():
    # every event of an in-class target stays in the hypothesis
    v = Vocabulary(["a", "b"])
    rng = np.random.default_rng(4)
    for _ in range(20):
        succ = rng.integers(0, 4, size=4)
        T = model_from_function(v, succ.tolist())
        for kind in ("L2", "L3"):
            learner = LearnerState(v, kind)
            for o in generate_prefix(StreamSpec(T, seed=1), 8):
                learner.step(o)
            assert events_of(T) <= events_of(learner.hypothesis)


def test_l3_counter_compact():
    for n in (2, 3):
        c = counter(n)
        step, v = run_learner(c.vocab, "L3", iter_stream(StreamSpec(c.target, policy="cyclic-canonical")))
        assert step == 1 << n
        assert len(v.model) == n + 1
        assert equivalent(v.model, c.target)
        assert events_of(v.model) == events_of(c.target)


def test_l2_counter_at_step_four():
    c = counter(2)
    step, v = run_learner(c.vocab, "L2", iter_stream(StreamSpec(c.target, policy="cyclic-canonical")))
    assert step == 4 and len(v.model) == 4 and equivalent(v.model, c.target)


def test_l3_output_semantically_deterministic():
    v = Vocabulary(["a", "b", "c"])
    from actlearn.sampling import random_partition_model
    rng = np.random.default_rng(5)
    for seed in range(30):
        T = random_partition_model(v, rng)
        step, verdict = run_learner(v, "L3", iter_stream(StreamSpec(T, seed=seed)))
        assert has_singleton_outcomes(verdict.model)
        assert equivalent(verdict.model, T)


def test_coin_never_identified_on_canonical_stream():
    c = coin()
    for kind in Kind:
        step, v = run_learner(c.vocab, kind, iter_stream(StreamSpec(c.target, policy="cyclic-canonical")),
                              max_steps=100)
        assert step is None and v is UNDECIDED


def test_coin_without_guard_fires_once_contradiction_is_hidden():
    # the bare triggers: L2 and L3 commit at step 3 of the canonical coin stream
    c = coin()
    for kind in ("L2", "L3"):
        step, v = run_learner(c.vocab, kind, iter_stream(StreamSpec(c.target, policy="cyclic-canonical")),
                              max_steps=100, guard=False)
        assert step == 3 and not equivalent(v.model, c.target)


def test_coin_verdicts_only_on_deterministic_looking_prefixes():
    # on shuffled streams a learner may fire, but only while the prefix is
    # still consistent with some deterministic model
    c = coin()
    for kind in Kind:
        for seed in range(20):
            prefix = generate_prefix(StreamSpec(c.target, seed=seed), 100)
            step, v = run_learner(c.vocab, kind, prefix)
            if step is None:
                continue
            seen = {(o.before.bits, o.after.bits) for o in prefix[:step]}
            befores = [b for b, _ in seen]
            assert len(befores) == len(set(befores))
            assert all(o in {(x.before.bits, x.after.bits) for x in graph(v.model)}
                       for o in [(x.before.bits, x.after.bits) for x in prefix[:step]])


def test_limit_conjecture_examples():
    h = coin().vocab
    A = limit_conjecture(obs(h, "{} -> {h}", "{h} -> {h}"), h)
    assert events_of(A) == events_of(model(h, ("-h", "h"), ("h", "T")))
    assert equivalent(A, model(h, ("T", "h")))
    P = pushbutton("noop").vocab
    assert events_of(limit_conjecture([], P)) == events_of(model(P, ("p", "T"), ("-p", "T")))
    C = limit_conjecture(graph(coin().target), h)
    assert len(C) == 4 and equivalent(C, coin().target)


def test_limit_learner_matches_function():
    c = coin()
    learner = LimitLearner(c.vocab)
    prefix = generate_prefix(StreamSpec(c.target, seed=2, policy="iid-uniform"), 30)
    for i, o in enumerate(prefix, start=1):
        assert learner.step(o) == limit_conjecture(prefix[:i], c.vocab)


def _one_atom_class(P):
    return ModelClass.build(deterministic_maximal_models(P))


def test_tell_tale_examples(P):
    cls = _one_atom_class(P)
    assert len(cls) == 4
    flip = pushbutton("flip").target
    v = tell_tale_step(cls, graph(flip))
    assert equivalent(v.model, flip)
    assert tell_tale_step(cls, []) is UNDECIDED
    assert tell_tale_step(cls, obs(P, "{} -> {}")) is UNDECIDED


def test_tell_tale_soundness_guard(P):
    # a class whose tell-tales do not separate: containment alone would misfire
    noop, on = pushbutton("noop").target, pushbutton("on").target
    cls = ModelClass.build([noop, on], tell_tale=lambda A: graph(A)[:1])
    prefix = obs(P, "{} -> {p}", "{} -> {}")
    # noop's tell-tale {} -> {} is contained, but {} -> {p} is not sound for it
    assert tell_tale_step(cls, prefix[1:]).model == noop
    assert tell_tale_step(cls, prefix) is UNDECIDED


def test_model_class_dedups_equivalent_members(P):
    a = model(P, ("T", "T"))
    b = model(P, ("p", "T"), ("-p", "T"))
    assert len(ModelClass.build([a, b])) == 1
    with pytest.raises(ContractError):
        ModelClass.build([])


def test_tell_tale_learner_identifies_every_member():
    v = Vocabulary(["a", "b"])
    cls = ModelClass.build(deterministic_maximal_models(v))
    assert len(cls) == 256
    for i, A in enumerate(cls.members[::17]):
        learner = TellTaleLearner(cls)
        for o in iter_stream(StreamSpec(A, seed=i)):
            verdict = learner.step(o)
            if verdict.identified:
                assert equivalent(verdict.model, A)
                break
        assert learner.steps <= 4


def test_deterministic_models_enumeration_matches_oracle(P):
    got = {frozenset(events_of(A)) for A in deterministic_maximal_models(P)}
    want = {frozenset(oracle.function_events(f)) for f in oracle.all_functions(1)}
    assert got == want
    with pytest.raises(CapacityError):
        next(deterministic_maximal_models(Vocabulary(list("abc"))))


def test_covers_all_states(P):
    assert covers_all_states(model(P, ("T", "p")))
    assert not covers_all_states(model(P, ("p", "T")))
