"""The eleven acceptance criteria, each checked against :mod:`actlearn.oracle`.

Each check times only the implementation under test (after a warm-up
that triggers kernel compilation), then verifies the results by brute
force.  A criterion passes when every verification holds and the timed
part stays inside its budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle
from .learners import (LearnerState, LimitLearner, ModelClass, TellTaleLearner,
                       deterministic_maximal_models, init_hypothesis)
from .library import ActionLibrary, LibraryLearnerState, generate_library_prefix
from .logic import Term, Vocabulary
from .models import ActionModel, Observation, classify, normalize
from .sampling import (precondition_free_atomic_models, random_function_model,
                       random_partition_model, random_raw_model, random_universal_model)
from .scenarios import circuit, coin, counter
from .streams import Policy, StreamSpec, dftt, generate_prefix, is_sound_prefix, iter_stream

SEEDS = range(20)


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    elapsed_s: float
    budget_s: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.title}: {self.detail} "
                f"({self.elapsed_s * 1000:.1f} ms, budget {self.budget_s * 1000:g} ms)")


class _Clock:
    def __init__(self):
        self.total = 0.0

    def __enter__(self):
        self._t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.total += time.perf_counter() - self._t


def _events(A: ActionModel) -> set[tuple[int, int, int, int]]:
    return set(zip(*(c.tolist() for c in A.columns)))


def _tuple(v: Vocabulary, pre: str, post: str) -> tuple[int, int, int, int]:
    p, q = v.parse_term(pre), v.parse_term(post)
    return (p.pos, p.neg, q.pos, q.neg)


def _observations(v: Vocabulary, pairs) -> list:
    return [Observation(v.parse_state(a), v.parse_state(b)) for a, b in pairs]


def _run_until_fire(learner, stream, max_steps):
    for i, obs in enumerate(stream, start=1):
        if i > max_steps:
            return None, None
        verdict = learner.step(obs)
        if verdict.identified:
            return i, verdict.model
    return None, None


def warm_up() -> None:
    """Compile and exercise every kernel once so timings exclude JIT cost."""
    v = Vocabulary(["a", "b"])
    c = counter(2)
    for kind in ("L1", "L2", "L3"):
        learner = LearnerState(c.vocab, kind)
        for obs in generate_prefix(StreamSpec(c.target), 4):
            learner.step(obs)
    dftt(c.target)
    normalize(random_raw_model(v, np.random.default_rng(0)))


# --- criteria ---------------------------------------------------------------

def criterion_1() -> Result:
    v = Vocabulary(["p"])
    cases = [
        ([("{}", "{p}"), ("{p}", "{}")], {_tuple(v, "p", "-p"), _tuple(v, "-p", "p")}),
        ([("{}", "{p}"), ("{p}", "{p}")], {_tuple(v, "p", "T"), _tuple(v, "-p", "p")}),
    ]
    problems = []
    worst = 0.0
    for pairs, expected in cases:
        prefix = _observations(v, pairs)
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            step, model = _run_until_fire(LearnerState(v, "L2"), prefix, 2)
            times.append(time.perf_counter() - t0)
        worst = max(worst, float(np.median(times)))
        if step != 2 or model is None or _events(model) != expected:
            problems.append(f"stream {pairs}: step {step}, model {model}")
    budget = 1e-3
    ok = not problems and worst < budget
    return Result(1, "pushbutton replay (L2)", ok,
                  "; ".join(problems) or "both streams fire at step 2 with the exact event sets",
                  worst, budget)


def criterion_2() -> Result:
    c2 = counter(2)
    v = c2.vocab
    prefix = _observations(v, [("{}", "{c1}"), ("{c1}", "{c2}"), ("{c2}", "{c1,c2}"), ("{c1,c2}", "{}")])
    expected = {_tuple(v, "-c2&-c1", "c1"), _tuple(v, "-c2&c1", "c2&-c1"),
                _tuple(v, "c2&-c1", "c1"), _tuple(v, "c2&c1", "-c2&-c1")}
    problems = []
    clock = _Clock()
    with clock:
        step, model = _run_until_fire(LearnerState(v, "L2"), prefix, 4)
    if step != 4 or model is None or _events(model) != expected:
        problems.append(f"L2 counter-2: step {step}, model {model}")
    for n in (2, 3):
        cn = counter(n)
        spec = StreamSpec(cn.target, policy=Policy.CYCLIC_CANONICAL)
        with clock:
            step, model = _run_until_fire(LearnerState(cn.vocab, "L3"), iter_stream(spec), 4 << n)
        target = _events(cn.target)
        if model is None or len(model) != n + 1 or not oracle.equivalent(_events(model), target, n):
            problems.append(f"L3 counter-{n}: step {step}, model {model}")
    budget = 0.1
    ok = not problems and clock.total < budget
    return Result(2, "counter replay (L2 exact, L3 n+1 events)", ok,
                  "; ".join(problems) or "L2 fires at step 4 exactly; L3 gives n+1 events for n=2,3",
                  clock.total, budget)


def _reference_circuit() -> dict[str, set]:
    v = Vocabulary(["s1", "s2", "l"])
    return {
        "flip1": {_tuple(v, "-s1&-s2", "s1&-l"), _tuple(v, "-s1&s2", "s1&l"),
                  _tuple(v, "s1&-s2", "-s1&-l"), _tuple(v, "s1&s2", "-s1&-l")},
        "flip2": {_tuple(v, "-s1&-s2", "s2&-l"), _tuple(v, "-s1&s2", "-s2&-l"),
                  _tuple(v, "s1&-s2", "s2&l"), _tuple(v, "s1&s2", "-s2&-l")},
    }


def criterion_3() -> Result:
    sc = circuit()
    lib: ActionLibrary = sc.target
    expected = _reference_circuit()
    cycle = sum(len(oracle.graph(expected[a], 3)) for a in expected)
    problems = []
    latest = 0
    clock = _Clock()
    for seed in SEEDS:
        with clock:
            state = LibraryLearnerState(sc.vocab, tuple(lib.names), "L3")
            found, step = None, None
            for i, t in enumerate(generate_library_prefix(lib, seed, 2 * cycle), start=1):
                verdict = state.step(t)
                if verdict.identified:
                    found, step = verdict.library, i
                    break
        if found is None:
            problems.append(f"seed {seed}: no verdict within two cycles")
            continue
        latest = max(latest, step)
        for a, events in expected.items():
            if not oracle.equivalent(_events(found[a]), events, 3):
                problems.append(f"seed {seed}: {a} differs")
    budget = 1.0
    ok = not problems and clock.total < budget
    return Result(3, "two-switch circuit library (L3)", ok,
                  "; ".join(problems[:3]) or f"{len(SEEDS)} seeds converge by step {latest} (cycle length {cycle})",
                  clock.total, budget)


def _first_cover(prefix_pairs, graph) -> int | None:
    seen = set()
    for i, pair in enumerate(prefix_pairs, start=1):
        seen.add(pair)
        if graph <= seen:
            return i
    return None


def criterion_4() -> Result:
    v = Vocabulary(["p", "q"])
    problems = []
    clock = _Clock()
    n_models = 0
    for succ in oracle.all_functions(2):
        target_events = oracle.function_events(succ)
        target = ActionModel.from_arrays(v, *map(np.array, zip(*sorted(target_events))))
        flags = classify(target)
        if not (flags.deterministic and flags.normal and flags.universally_applicable
                and flags.maximal_preconditions):
            problems.append(f"{succ}: not in the class")
        n_models += 1
        graph = oracle.graph(target_events, 2)
        for seed in SEEDS:
            prefix = generate_prefix(StreamSpec(target, seed=seed), 12)
            learner = LearnerState(v, "L2")
            fired_at, model, extra = None, None, 0
            with clock:
                for i, obs in enumerate(prefix, start=1):
                    verdict = learner.step(obs)
                    if verdict.identified:
                        if fired_at is None:
                            fired_at, model = i, verdict.model
                        else:
                            extra += 1
            pairs = [(o.before.bits, o.after.bits) for o in prefix]
            cover = _first_cover(pairs, graph)
            distinct = len(set(pairs[:fired_at])) if fired_at else None
            if fired_at is None or fired_at > cover or distinct > 4:
                problems.append(f"{succ} seed {seed}: fired {fired_at}, covered {cover}")
            elif not oracle.equivalent(_events(model), target_events, 2):
                problems.append(f"{succ} seed {seed}: wrong model")
            if extra:
                problems.append(f"{succ} seed {seed}: answered twice")
    budget = 5.0
    ok = not problems and n_models == 256 and clock.total < budget
    return Result(4, "deterministic maximal models, |P|=2 (L2)", ok,
                  "; ".join(problems[:3]) or f"{n_models} models x {len(SEEDS)} seeds identified",
                  clock.total, budget)


def criterion_5() -> Result:
    v = Vocabulary(["p", "q"])
    targets = precondition_free_atomic_models(v)
    problems = []
    clock = _Clock()
    for A in targets:
        for seed in SEEDS:
            with clock:
                step, model = _run_until_fire(LearnerState(v, "L1"), iter_stream(StreamSpec(A, seed=seed)), 100)
            if model is None or not oracle.equivalent(_events(model), _events(A), 2):
                problems.append(f"{A} seed {seed}: {model}")
    budget = 1.0
    ok = not problems and len(targets) == 9 and clock.total < budget
    return Result(5, "precondition-free atomic models, |P|=2 (L1)", ok,
                  "; ".join(problems[:3]) or f"{len(targets)} targets x {len(SEEDS)} seeds identified",
                  clock.total, budget)


def criterion_6() -> Result:
    v = Vocabulary(["a", "b", "c"])
    rng = np.random.default_rng(6)
    problems = []
    clock = _Clock()
    for k in range(200):
        target = random_partition_model(v, rng) if k % 2 else random_function_model(v, rng)
        t_events = _events(target)
        if not (oracle.deterministic(t_events, 3) and oracle.universally_applicable(t_events, 3)):
            problems.append(f"target {k} outside the class")
            continue
        prefix = generate_prefix(StreamSpec(target, seed=k), 64)
        with clock:
            step, model = _run_until_fire(LearnerState(v, "L3"), prefix, 64)
        inputs, all_seen = set(), None
        for i, o in enumerate(prefix, start=1):
            inputs.add(o.before.bits)
            if len(inputs) == 8:
                all_seen = i
                break
        if model is None or step != all_seen:
            problems.append(f"target {k}: fired {step}, inputs complete at {all_seen}")
            continue
        m_events = _events(model)
        if not oracle.equivalent(m_events, t_events, 3):
            problems.append(f"target {k}: wrong model")
        if oracle.minimize(m_events, 3) != m_events:
            problems.append(f"target {k}: a precondition strictly entails another")
    budget = 30.0
    ok = not problems and clock.total < budget
    return Result(6, "random deterministic targets, |P|=3 (L3)", ok,
                  "; ".join(problems[:3]) or "200 targets identified with weakest preconditions",
                  clock.total, budget)


def criterion_7() -> Result:
    sc = coin()
    fired = []
    clock = _Clock()
    for kind in ("L1", "L2", "L3"):
        for seed in SEEDS:
            with clock:
                step, model = _run_until_fire(LearnerState(sc.vocab, kind),
                                              iter_stream(StreamSpec(sc.target, seed=seed)), 100)
            if model is not None:
                fired.append(f"{kind}/seed {seed} at step {step}")
    budget = 1.0
    ok = not fired and clock.total < budget
    detail = (f"{len(fired)} of {3 * len(SEEDS)} runs fired, e.g. {', '.join(fired[:3])}"
              if fired else "no verdicts in 60 runs")
    return Result(7, "coin never identified (L1/L2/L3)", ok, detail, clock.total, budget)


def criterion_8() -> Result:
    v = Vocabulary(["p", "q"])
    rng = np.random.default_rng(8)
    problems = []
    clock = _Clock()
    for k in range(50):
        target = random_universal_model(v, rng)
        t_events = _events(target)
        graph = oracle.graph(t_events, 2)
        prefix = generate_prefix(StreamSpec(target, seed=k), 4 * len(graph) + 60)
        pairs = [(o.before.bits, o.after.bits) for o in prefix]
        cover = _first_cover(pairs, graph)
        learner = LimitLearner(v)
        with clock:
            conjectures = [learner.step(o) for o in prefix[:cover + 50]]
        for i in range(cover - 1, cover + 50):
            if not oracle.equivalent(_events(conjectures[i]), t_events, 2):
                problems.append(f"target {k}: wrong at step {i + 1} (covered at {cover})")
                break
    budget = 5.0
    ok = not problems and clock.total < budget
    return Result(8, "limit learner, |P|=2", ok,
                  "; ".join(problems[:3]) or "50 targets correct from coverage on for 50 steps",
                  clock.total, budget)


def criterion_9() -> Result:
    rng = np.random.default_rng(9)
    problems = []
    clock = _Clock()
    for k in range(100):
        n = 1 + k % 3
        v = Vocabulary(["p", "q", "r"][:n])
        raw = random_raw_model(v, rng, depth=4)
        with clock:
            A = normalize(raw)
        events = _events(A)
        raw_events = [(e.pre, e.post.pos, e.post.neg) for e in raw.events]
        if not all(oracle.is_normal(e) for e in events):
            problems.append(f"model {k}: not normal")
        if not all(isinstance(e.pre, Term) for e in A.events):
            problems.append(f"model {k}: non-basic precondition")
        for s in range(1 << n):
            if oracle.outcomes(events, s) != oracle.raw_outcomes(raw_events, s, v.atoms):
                problems.append(f"model {k}: outcomes differ at state {s}")
                break
    budget = 2.0
    ok = not problems and clock.total < budget
    return Result(9, "normalization of formula preconditions", ok,
                  "; ".join(problems[:3]) or "100 raw models normalized with equal outcomes",
                  clock.total, budget)


def _deterministic_universal_subsets(v: Vocabulary) -> list[ActionModel]:
    n = len(v)
    events = sorted(oracle.init_events(n, "L3"))
    out = []
    for mask in range(1, 1 << len(events)):
        chosen = {e for i, e in enumerate(events) if mask >> i & 1}
        if oracle.deterministic(chosen, n) and oracle.universally_applicable(chosen, n):
            out.append(ActionModel.from_arrays(v, *map(np.array, zip(*sorted(chosen)))))
    return out


def criterion_10() -> Result:
    problems = []
    clock = _Clock()
    checks = 0

    def check_pair(A, B, n):
        nonlocal checks
        with clock:
            tt = dftt(A)
            sound = is_sound_prefix(tt, B)
        checks += 1
        same = oracle.equivalent(_events(A), _events(B), n)
        if sound != same:
            problems.append(f"dftt({A}) vs {B}: sound={sound}, equivalent={same}")

    v1 = Vocabulary(["p"])
    models1 = _deterministic_universal_subsets(v1)
    for A in models1:
        for B in models1:
            check_pair(A, B, 1)
    v2 = Vocabulary(["p", "q"])
    rng = np.random.default_rng(10)
    for k in range(200):
        A = random_partition_model(v2, rng)
        B = random_partition_model(v2, rng) if k % 2 else random_function_model(v2, rng)
        check_pair(A, B, 2)
        check_pair(A, A, 2)

    identified = 0
    for v in (v1, v2):
        with clock:
            cls = ModelClass.build(deterministic_maximal_models(v))
        for i, A in enumerate(cls.members):
            with clock:
                step, model = _run_until_fire(TellTaleLearner(cls),
                                              iter_stream(StreamSpec(A, seed=i)), 64)
            if model is None or not oracle.equivalent(_events(model), _events(A), len(v)):
                problems.append(f"tell-tale learner missed {A}")
            else:
                identified += 1
    budget = 5.0
    ok = not problems and clock.total < budget
    return Result(10, "definite tell-tales and the tell-tale learner", ok,
                  "; ".join(problems[:3]) or
                  f"{checks} soundness checks ({len(models1)} models at |P|=1), "
                  f"{identified} class members identified", clock.total, budget)


def criterion_11() -> Result:
    problems = []
    clock = _Clock()
    sizes = {"L1": 3, "L2": 4, "L3": 7}
    for n in (1, 2, 3):
        v = Vocabulary(["p", "q", "r"][:n])
        for kind, base in sizes.items():
            with clock:
                H = init_hypothesis(v, kind)
            ref = oracle.init_events(n, kind)
            if len(H) != base ** n or len(ref) != base ** n or _events(H) != ref:
                problems.append(f"{kind} n={n}: {len(H)} events, reference {len(ref)}")
    v = Vocabulary(["p", "q"])
    layout = {_tuple(v, "T", post) for post in
              ("T", "p", "q", "-p", "-q", "p&q", "p&-q", "-p&q", "-p&-q")}
    if _events(init_hypothesis(v, "L1")) != layout:
        problems.append("L1 over {p,q} differs from the nine-event layout")
    budget = 1.0
    ok = not problems and clock.total < budget
    return Result(11, "initial hypothesis sizes 3^n, 4^n, 7^n", ok,
                  "; ".join(problems) or "sizes and event sets match for n=1,2,3",
                  clock.total, budget)


CRITERIA: list[Callable[[], Result]] = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11,
]


def run_all(echo: Callable[[str], None] | None = print) -> list[Result]:
    warm_up()
    results = []
    for check in CRITERIA:
        r = check()
        results.append(r)
        if echo:
            echo(r.line())
    return results
