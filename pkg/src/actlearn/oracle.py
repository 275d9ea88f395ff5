"""Brute-force reference semantics in plain Python.

Nothing here touches the kernels or :mod:`actlearn.models`: events are
``(pre_pos, pre_neg, post_pos, post_neg)`` integer tuples, states are
integers, and every question is answered by enumerating states.  Tests
and the acceptance checks compare the optimised code against this module.
"""

from __future__ import annotations

from itertools import product

from .logic import And, Atom, Const, Not, Or


def sat_set(pos: int, neg: int, n: int) -> frozenset[int]:
    return frozenset(s for s in range(1 << n) if s & pos == pos and s & neg == 0)


def all_terms(n: int) -> list[tuple[int, int]]:
    out = []
    for codes in product((0, 1, 2), repeat=n):
        pos = sum(1 << i for i, c in enumerate(codes) if c == 1)
        neg = sum(1 << i for i, c in enumerate(codes) if c == 2)
        out.append((pos, neg))
    return out


def is_normal(e) -> bool:
    pp, pn, qp, qn = e
    return not (pp & qp or pn & qn)


def init_events(n: int, kind: str) -> set[tuple[int, int, int, int]]:
    """Initial hypotheses straight from their set-builder definitions."""
    full = (1 << n) - 1
    terms = all_terms(n)
    if kind == "L1":
        return {(0, 0, qp, qn) for qp, qn in terms}
    if kind == "L2":
        pres = [(p, q) for p, q in terms if p | q == full]
    elif kind == "L3":
        pres = terms
    else:
        raise ValueError(kind)
    return {(pp, pn, qp, qn) for pp, pn in pres for qp, qn in terms if is_normal((pp, pn, qp, qn))}


def apply(e, s: int) -> int:
    return (s | e[2]) & ~e[3]


def applicable(e, s: int) -> bool:
    return s & e[0] == e[0] and s & e[1] == 0


def outcomes(events, s: int) -> frozenset[int]:
    return frozenset(apply(e, s) for e in events if applicable(e, s))


def graph(events, n: int) -> frozenset[tuple[int, int]]:
    return frozenset((s, t) for s in range(1 << n) for t in outcomes(events, s))


def equivalent(e1, e2, n: int) -> bool:
    return all(outcomes(e1, s) == outcomes(e2, s) for s in range(1 << n))


def universally_applicable(events, n: int) -> bool:
    return all(any(applicable(e, s) for e in events) for s in range(1 << n))


def deterministic(events, n: int) -> bool:
    """At most one applicable event per state."""
    return all(sum(applicable(e, s) for e in events) <= 1 for s in range(1 << n))


def update(events, before: int, after: int) -> set:
    return {e for e in events if not applicable(e, before) or apply(e, before) == after}


def minimize(events, n: int) -> set:
    """Drop events whose satisfying set is strictly contained in another's."""
    sets = {e: sat_set(e[0], e[1], n) for e in events}
    return {e for e in events if not any(sets[e] < sets[f] for f in events)}


def eval_formula(f, s: int, atoms) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return bool(s >> atoms.index(f.name) & 1)
    if isinstance(f, Not):
        return not eval_formula(f.arg, s, atoms)
    if isinstance(f, And):
        return eval_formula(f.left, s, atoms) and eval_formula(f.right, s, atoms)
    if isinstance(f, Or):
        return eval_formula(f.left, s, atoms) or eval_formula(f.right, s, atoms)
    raise TypeError(f)


def raw_outcomes(raw_events, s: int, atoms) -> frozenset[int]:
    """``raw_events``: (formula, post_pos, post_neg) triples."""
    return frozenset((s | qp) & ~qn for f, qp, qn in raw_events if eval_formula(f, s, atoms))


def all_functions(n: int):
    """Every map from states to states, as a tuple of successors."""
    return product(range(1 << n), repeat=1 << n)


def function_events(succ) -> set:
    n = (len(succ) - 1).bit_length()
    full = (1 << n) - 1
    return {(s, full & ~s, t & ~s, s & ~t) for s, t in enumerate(succ)}
