import itertools

import numpy as np
import pytest

from actlearn import oracle
from actlearn.config import ContractError, ParseError, VocabularyMismatch
from actlearn.logic import Vocabulary
from actlearn.models import ActionModel, Event, Observation, equivalent, graph
from actlearn.sampling import random_universal_model
from actlearn.scenarios import coin, counter, pushbutton
from actlearn.streams import (Policy, StreamSpec, covers_graph, dftt, generate_prefix,
                              is_sound_prefix, parse_observation, read_observations)


def strs(prefix):
    return [str(o) for o in prefix]


def test_generate_prefix_examples():
    flip = pushbutton("flip").target
    assert strs(generate_prefix(StreamSpec(flip, policy="cyclic-canonical"), 2)) == ["{} -> {p}", "{p} -> {}"]
    noop = pushbutton("noop").target
    assert strs(generate_prefix(StreamSpec(noop, policy="cyclic-canonical"), 3)) == [
        "{} -> {}", "{p} -> {p}", "{} -> {}"]
    c2 = counter(2).target
    assert strs(generate_prefix(StreamSpec(c2, policy="cyclic-canonical"), 4)) == [
        "{} -> {c1}", "{c1} -> {c2}", "{c2} -> {c1,c2}", "{c1,c2} -> {}"]


def test_stream_requires_universal_target(P):
    with pytest.raises(ContractError):
        StreamSpec(ActionModel(P, [Event(P.parse_term("p"), P.parse_term("T"))]))


@pytest.mark.parametrize("policy", list(Policy))
def test_streams_are_sound_and_deterministic(policy):
    rng = np.random.default_rng(0)
    v = Vocabulary(["a", "b"])
    for seed in range(10):
        A = random_universal_model(v, rng)
        spec = StreamSpec(A, seed=seed, policy=policy)
        prefix = generate_prefix(spec, 40)
        assert is_sound_prefix(prefix, A)
        assert prefix == generate_prefix(StreamSpec(A, seed=seed, policy=policy), 40)
        assert prefix[:7] == generate_prefix(spec, 7)


@pytest.mark.parametrize("policy", [Policy.CYCLIC_CANONICAL, Policy.CYCLIC_SHUFFLED])
def test_cyclic_streams_cover_each_cycle(policy):
    rng = np.random.default_rng(1)
    v = Vocabulary(["a", "b", "c"])
    for seed in range(10):
        A = random_universal_model(v, rng)
        g = len(graph(A))
        prefix = generate_prefix(StreamSpec(A, seed=seed, policy=policy), 3 * g)
        for k in range(3):
            assert covers_graph(prefix[k * g:(k + 1) * g], A)


def test_iid_stream_covers_eventually():
    A = coin().target
    prefix = generate_prefix(StreamSpec(A, seed=5, policy=Policy.IID_UNIFORM), 200)
    assert covers_graph(prefix, A)


def test_shuffled_seeds_differ():
    A = counter(3).target
    a = generate_prefix(StreamSpec(A, seed=1), 8)
    b = generate_prefix(StreamSpec(A, seed=2), 8)
    assert set(a) == set(b) and a != b


def test_sound_prefix_examples():
    c = coin()
    h = c.vocab
    fake = ActionModel(h, [Event(h.parse_term("T"), h.parse_term("-h"))])
    obs = [parse_observation("{} -> {h}", h)]
    assert is_sound_prefix(obs, c.target)
    assert not is_sound_prefix(obs, fake)
    assert is_sound_prefix([], fake)
    with pytest.raises(VocabularyMismatch):
        is_sound_prefix([parse_observation("{} -> {p}", Vocabulary(["p"]))], fake)


def test_covers_graph_examples():
    flip = pushbutton("flip").target
    g = graph(flip)
    for perm in itertools.permutations(g):
        assert covers_graph(list(perm), flip)
    assert not covers_graph(g[:1], flip)
    assert covers_graph(graph(coin().target), coin().target)


def test_dftt_examples(P):
    assert strs(dftt(pushbutton("flip").target)) == ["{} -> {p}", "{p} -> {}"]
    assert strs(dftt(pushbutton("noop").target)) == ["{} -> {}", "{p} -> {p}"]
    assert strs(dftt(pushbutton("on").target)) == ["{} -> {p}", "{p} -> {p}"]
    with pytest.raises(ContractError):
        dftt(coin().target)
    with pytest.raises(ContractError):
        dftt(ActionModel(P, [Event(P.parse_term("p"), P.parse_term("T"))]))


def test_dftt_separates_deterministic_models_over_one_atom(P):
    models = []
    for succ in oracle.all_functions(1):
        evs = sorted(oracle.function_events(succ))
        models.append(ActionModel.from_arrays(P, *(np.array(c) for c in zip(*evs))))
    for A in models:
        for B in models:
            assert is_sound_prefix(dftt(A), B) == equivalent(A, B)


def test_observation_text_format(PQ):
    o = parse_observation("{p} -> {p,q}", PQ)
    assert o == Observation(PQ.parse_state("{p}"), PQ.parse_state("{q,p}"))
    assert str(o) == "{p} -> {p,q}"
    lines = ["# comment", "", "{} -> {q}", "  {q} -> {}  "]
    assert strs(read_observations(lines, PQ)) == ["{} -> {q}", "{q} -> {}"]
    for bad in ["{p}", "{p} -> {z}", "{p} -> {q} -> {}", "p -> q"]:
        with pytest.raises(ParseError):
            parse_observation(bad, PQ)


def test_negative_length_rejected():
    with pytest.raises(ValueError):
        generate_prefix(StreamSpec(coin().target), -1)
