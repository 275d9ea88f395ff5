import pytest

from actlearn import oracle
from actlearn.config import CapacityError, ParseError, VocabularyMismatch
from actlearn.logic import (FALSE, TRUE, And, Atom, Not, Or, State, Term, Vocabulary, check_same,
                            dnf, entails, enumerate_terms, eval_formula, parse_formula,
                            satisfies, term_for_state)


def test_vocabulary_rejects_duplicates_and_reserved_names():
    with pytest.raises(ValueError):
        Vocabulary(["p", "p"])
    with pytest.raises(ValueError):
        Vocabulary(["T"])
    with pytest.raises(ValueError):
        Vocabulary(["1bad"])


def test_vocabulary_capacity():
    with pytest.raises(CapacityError):
        Vocabulary([f"a{i}" for i in range(40)])


def test_states_in_canonical_order(PQ):
    assert [str(s) for s in PQ.states()] == ["{}", "{p}", "{q}", "{p,q}"]


def test_parse_state_roundtrip(PQ):
    s = PQ.parse_state("{ q , p }")
    assert s.bits == 3 and str(s) == "{p,q}"
    assert PQ.parse_state(str(s)) == s
    with pytest.raises(ParseError):
        PQ.parse_state("{x}")
    with pytest.raises(ParseError):
        PQ.parse_state("p")


def test_parse_term(PQ):
    t = PQ.parse_term("p&-q")
    assert (t.pos, t.neg) == (1, 2)
    assert PQ.parse_term("T").is_top
    with pytest.raises(ParseError):
        PQ.parse_term("p&-p")
    with pytest.raises(ParseError):
        PQ.parse_term("z")


def test_states_from_other_vocabulary_are_unequal():
    a, b = Vocabulary(["p"]), Vocabulary(["q"])
    assert State(a, 1) != State(b, 1)
    with pytest.raises(VocabularyMismatch):
        check_same(a, b)


def test_satisfies_brute_force(PQR):
    for t in enumerate_terms(PQR):
        models = {s.bits for s in PQR.states() if satisfies(s, t)}
        assert models == oracle.sat_set(t.pos, t.neg, 3)


def test_entails_matches_model_inclusion(PQ):
    terms = enumerate_terms(PQ)
    for a in terms:
        for b in terms:
            assert entails(a, b) == (oracle.sat_set(a.pos, a.neg, 2) <= oracle.sat_set(b.pos, b.neg, 2))


def test_enumerate_terms_order(PQ):
    assert [str(t) for t in enumerate_terms(PQ)] == [
        "T", "q", "-q", "p", "p&q", "p&-q", "-p", "-p&q", "-p&-q"]
    keys = [t.key for t in enumerate_terms(PQ)]
    assert keys == sorted(keys) == list(range(9))


def test_term_for_state_is_maximal_and_unique(PQR):
    for s in PQR.states():
        t = term_for_state(s)
        assert t.is_maximal
        assert oracle.sat_set(t.pos, t.neg, 3) == {s.bits}


def test_term_rejects_inconsistency(P):
    with pytest.raises(ValueError):
        Term(P, 1, 1)


@pytest.mark.parametrize("text, expected", [
    ("p", Atom("p")),
    ("-p", Not(Atom("p"))),
    ("p & q | r", Or(And(Atom("p"), Atom("q")), Atom("r"))),
    ("p & (q | r)", And(Atom("p"), Or(Atom("q"), Atom("r")))),
    ("--p", Not(Not(Atom("p")))),
    ("T | F", Or(TRUE, FALSE)),
])
def test_parse_formula(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("bad", ["", "p &", "(p", "p q", "p | | q", "p $ q", ")"])
def test_parse_formula_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def test_dnf_examples(PQ):
    assert {str(t) for t in dnf(parse_formula("-(-p & -q)"), PQ)} == {"p", "q"}
    assert dnf(parse_formula("p & -p"), PQ) == frozenset()
    assert dnf(TRUE, PQ) == frozenset({Term(PQ)})
    assert dnf(FALSE, PQ) == frozenset()


def test_dnf_unknown_atom(PQ):
    with pytest.raises(VocabularyMismatch):
        dnf(Atom("z"), PQ)


@pytest.mark.parametrize("text", ["p | q", "-(p & q) | r", "(p | -q) & (q | r) & -(p & r)",
                                  "-(-(p | q) | -r)", "p & T | F"])
def test_dnf_preserves_truth_table(PQR, text):
    f = parse_formula(text)
    terms = dnf(f, PQR)
    for s in PQR.states():
        assert eval_formula(s, f) == oracle.eval_formula(f, s.bits, PQR.atoms)
        assert any(satisfies(s, t) for t in terms) == eval_formula(s, f)
