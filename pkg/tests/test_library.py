import itertools

import numpy as np
import pytest

from actlearn.config import ContractError, ParseError
from actlearn.learners import model_from_function
from actlearn.library import (LIBRARY_UNDECIDED, ActionLibrary, LibraryLearnerState,
                              TripleObservation, dumps_library, format_triples,
                              generate_library_prefix, libraries_equivalent, library_from_dict,
                              library_learner_step, library_to_dict, loads_library, parse_triple,
                              read_triples, substream)
from actlearn.logic import Vocabulary
from actlearn.models import ActionModel, Event, equivalent, graph
from actlearn.scenarios import circuit, pushbutton
from actlearn.streams import covers_graph, is_sound_prefix


def triples(v, *lines):
    return [parse_triple(x, v) for x in lines]


def run(state, prefix):
    for i, t in enumerate(prefix, start=1):
        _, verdict = library_learner_step(state, t)
        if verdict.identified:
            return i, verdict.library
    return None, None


def test_substream_examples(P):
    prefix = triples(P, "{} f -> {p}", "{p} g -> {}")
    assert [str(o) for o in substream(prefix, "f")] == ["{} -> {p}"]
    assert substream(prefix, "h") == []
    assert substream([], "f") == []


def test_circuit_substream_contains_flip1_from_empty():
    lib = circuit().target
    prefix = generate_library_prefix(lib, 0, 16)
    sub = substream(prefix, "flip1")
    assert "{} -> {s1}" in [str(o) for o in sub]
    assert is_sound_prefix(sub, lib["flip1"])


def test_one_cycle_is_a_permutation(P):
    lib = ActionLibrary(P, {"f": pushbutton("flip").target})
    assert sorted(map(str, generate_library_prefix(lib, 3, 2))) == ["{p} f -> {}", "{} f -> {p}"]
    assert generate_library_prefix(ActionLibrary(P, {}), 0, 5) == []


def test_circuit_cycle_has_sixteen_triples():
    lib = circuit().target
    cycle = generate_library_prefix(lib, 7, 16)
    assert len(set(map(str, cycle))) == 16
    assert generate_library_prefix(lib, 7, 40) == generate_library_prefix(lib, 7, 40)
    for name in lib.names:
        assert covers_graph(substream(cycle, name), lib[name])


def test_library_contract(P):
    bad = ActionModel(P, [Event(P.parse_term("p"), P.parse_term("T"))])
    with pytest.raises(ContractError):
        ActionLibrary(P, {"f": bad})
    with pytest.raises(ContractError):
        ActionLibrary(P, {"two-words": pushbutton("on").target})
    with pytest.raises(ValueError):
        generate_library_prefix(ActionLibrary(P, {}), 0, -1)


def test_circuit_identified_within_two_cycles():
    lib = circuit().target
    for seed in range(10):
        step, got = run(LibraryLearnerState(lib.vocab, tuple(lib.names)),
                        generate_library_prefix(lib, seed, 32))
        assert step is not None and step <= 32
        assert libraries_equivalent(got, lib)
        # L3 may merge preconditions, so never more than one event per state pair
        for name in lib.names:
            assert len(got[name]) <= 4


def test_single_name_l2_on_button(P):
    lib = ActionLibrary(P, {"f": pushbutton("on").target})
    state = LibraryLearnerState(P, ("f",), kind="L2")
    step, got = run(state, triples(P, "{} f -> {p}", "{p} f -> {p}"))
    assert step == 2
    assert str(got["f"]) == "{<p, T>, <-p, p>}"
    assert libraries_equivalent(got, lib)


def test_no_observations_is_undecided(P):
    state = LibraryLearnerState(P, ("f",))
    assert run(state, []) == (None, None)
    assert not state.fired and state.latched == {}


def test_fires_once_and_latches(P):
    state = LibraryLearnerState(P, ("f", "g"), kind="L2")
    prefix = triples(P, "{} f -> {p}", "{p} f -> {}", "{} g -> {}", "{p} g -> {p}",
                     "{} f -> {p}", "{} g -> {}")
    verdicts = [state.step(t) for t in prefix]
    assert [v.identified for v in verdicts] == [False, False, False, True, False, False]
    assert set(state.latched) == {"f", "g"}
    assert verdicts[-1] is LIBRARY_UNDECIDED


def test_unknown_names_do_not_block(P):
    state = LibraryLearnerState(P, ("f",), kind="L2")
    prefix = triples(P, "{} stray -> {}", "{} f -> {p}", "{p} f -> {p}")
    step, got = run(state, prefix)
    assert step == 3 and got.names == ["f"]
    assert "stray" in state.per_name and "stray" not in got.names


def test_exhaustive_two_name_libraries_one_atom(P):
    funcs = list(itertools.product(range(2), repeat=2))
    for f, g in itertools.product(funcs, funcs):
        lib = ActionLibrary(P, {"a": model_from_function(P, list(f)),
                                "b": model_from_function(P, list(g))})
        for seed in range(3):
            state = LibraryLearnerState(P, ("a", "b"))
            step, got = run(state, generate_library_prefix(lib, seed, 8))
            assert step is not None and step <= 4
            assert libraries_equivalent(got, lib)


@pytest.mark.parametrize("atoms", [["p", "q"], ["p", "q", "r"]])
def test_sampled_libraries(atoms):
    v = Vocabulary(atoms)
    rng = np.random.default_rng(len(atoms))
    size = 1 << len(atoms)
    for seed in range(8):
        lib = ActionLibrary(v, {name: model_from_function(v, rng.integers(0, size, size).tolist())
                                for name in ("a", "b", "c")})
        state = LibraryLearnerState(v, tuple(lib.names))
        step, got = run(state, generate_library_prefix(lib, seed, 3 * size))
        assert step is not None
        assert all(equivalent(got[n], lib[n]) for n in lib.names)


def test_routing_matches_per_name_streams():
    lib = circuit().target
    prefix = generate_library_prefix(lib, 5, 64)
    for name in lib.names:
        sub = substream(prefix, name)
        assert is_sound_prefix(sub, lib[name])
        assert covers_graph(sub, lib[name])
        assert len(sub) == 32


def test_json_round_trip():
    lib = circuit().target
    again = loads_library(dumps_library(lib))
    assert again == lib
    assert library_from_dict(library_to_dict(lib)) == lib
    with pytest.raises(ParseError):
        loads_library("{")
    with pytest.raises(ParseError):
        library_from_dict({"atoms": ["p"], "actions": {"f": {}}})
    with pytest.raises(ParseError):
        library_from_dict({"atoms": ["p"]})


def test_triple_text_round_trip():
    lib = circuit().target
    prefix = generate_library_prefix(lib, 1, 20)
    text = format_triples(prefix)
    assert read_triples(("# header\n\n" + text).splitlines(), lib.vocab) == prefix
    assert str(parse_triple("{s1} flip1 -> {s1,l}", lib.vocab)) == "{s1} flip1 -> {s1,l}"
    with pytest.raises(ParseError):
        parse_triple("{} -> {}", lib.vocab)
    with pytest.raises(ParseError):
        parse_triple("{} a-b -> {}", lib.vocab)


def test_triple_pair(P):
    t = TripleObservation(P.state(["p"]), "f", P.state([]))
    assert str(t.pair) == "{p} -> {}"
    assert t.pair in graph(pushbutton("off").target)
