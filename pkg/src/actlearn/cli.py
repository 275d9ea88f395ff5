"""``actlearn`` command-line driver.

Exit status: 0 on success, 1 when ``equiv`` finds the models inequivalent,
2 on parse, contract or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from pathlib import Path

from .config import CapacityError, ContractError, ParseError
from .library import ActionLibrary, format_triples, generate_library_prefix, loads_library, read_triples
from .models import (ActionModel, dumps_model, graph, inequivalence_witness, loads_model,
                     normalize, raw_model_from_dict)
from .runner import LEARNERS, LIBRARY_LEARNERS, run_learn, run_library_learn, summarize
from .scenarios import Scenario, get_scenario, scenario_names
from .streams import Policy, StreamSpec, dftt, generate_prefix, read_observations


class UsageError(ContractError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_target(args) -> Scenario:
    if getattr(args, "scenario", None) and (getattr(args, "model", None) or getattr(args, "library", None)):
        raise UsageError("give either --scenario or a model/library file, not both")
    if getattr(args, "scenario", None):
        return get_scenario(args.scenario)
    if getattr(args, "model", None):
        A = loads_model(_read(args.model))
        return Scenario(Path(args.model).name, A.vocab, A)
    if getattr(args, "library", None):
        lib = loads_library(_read(args.library))
        return Scenario(Path(args.library).name, lib.vocab, lib)
    raise UsageError("a target is required: --scenario, --model or --library")


def _model_arg(ref: str) -> ActionModel:
    """A model file path, or the name of a single-model scenario."""
    if os.path.exists(ref):
        return loads_model(_read(ref))
    target = get_scenario(ref).target
    if not isinstance(target, ActionModel):
        raise UsageError(f"scenario {ref!r} is a library, not a single model")
    return target


def _dump_line(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit_report(report: dict, args):
    print(_dump_line(report))
    if getattr(args, "pretty", False):
        print(summarize(report))


def cmd_learn(args) -> int:
    sc = _load_target(args)
    if sc.is_library:
        raise UsageError(f"{sc.name} is an action library; use library-learn")
    observations = None
    if args.obs_file:
        observations = read_observations(_read(args.obs_file).splitlines(), sc.vocab)
    with ExitStack() as stack:
        emit = None
        if args.trace:
            fh = stack.enter_context(open(args.trace, "w"))
            emit = lambda rec: fh.write(_dump_line(rec) + "\n")  # noqa: E731
        report = run_learn(sc.target, scenario=sc.name, learner=args.learner, seed=args.seed,
                           policy=args.policy, max_steps=args.max_steps,
                           observations=observations, emit=emit, guard=not args.no_guard,
                           timing=args.timing or args.pretty)
    if report["class_mismatch"]:
        print(f"warning: {report['class_mismatch']}", file=sys.stderr)
    _emit_report(report, args)
    return 0


def cmd_library_learn(args) -> int:
    sc = _load_target(args)
    if not sc.is_library:
        raise UsageError(f"{sc.name} is a single model; use learn")
    triples = None
    if args.obs_file:
        triples = read_triples(_read(args.obs_file).splitlines(), sc.vocab)
    with ExitStack() as stack:
        emit = None
        if args.trace:
            fh = stack.enter_context(open(args.trace, "w"))
            emit = lambda rec: fh.write(_dump_line(rec) + "\n")  # noqa: E731
        report = run_library_learn(sc.target, scenario=sc.name, learner=args.learner,
                                   seed=args.seed, max_steps=args.max_steps, triples=triples,
                                   emit=emit, guard=not args.no_guard,
                                   timing=args.timing or args.pretty)
    if report["class_mismatch"]:
        print(f"warning: {report['class_mismatch']}", file=sys.stderr)
    _emit_report(report, args)
    return 0


def _print_pairs(target, per_model) -> None:
    if isinstance(target, ActionLibrary):
        for name in target.names:
            for o in per_model(target[name]):
                print(f"{o.before} {name} -> {o.after}")
    else:
        for o in per_model(target):
            print(o)


def cmd_graph(args) -> int:
    _print_pairs(_load_target(args).target, graph)
    return 0


def cmd_dftt(args) -> int:
    _print_pairs(_load_target(args).target, dftt)
    return 0


def cmd_equiv(args) -> int:
    w = inequivalence_witness(_model_arg(args.first), _model_arg(args.second))
    if w is None:
        print("equivalent")
        return 0
    print(f"inequivalent {w}")
    return 1


def cmd_normalize(args) -> int:
    try:
        data = json.loads(_read(args.file))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    sys.stdout.write(dumps_model(normalize(raw_model_from_dict(data))))
    return 0


def cmd_stream(args) -> int:
    """Print a generated prefix in the observation (or triple) text format."""
    sc = _load_target(args)
    if sc.is_library:
        sys.stdout.write(format_triples(generate_library_prefix(sc.target, args.seed, args.length)))
        return 0
    for o in generate_prefix(StreamSpec(sc.target, args.seed, args.policy), args.length):
        print(o)
    return 0


DEFAULT_SUITE = ["coin", "pushbutton-noop", "pushbutton-on", "pushbutton-off",
                 "pushbutton-flip", "counter-2", "counter-3", "circuit"]


def _suite_cell(cell) -> dict:
    scenario, learner, seed, max_steps, policy = cell
    sc = get_scenario(scenario)
    try:
        if sc.is_library:
            if learner not in LIBRARY_LEARNERS:
                return {"scenario": scenario, "learner": learner, "seed": seed,
                        "skipped": "not a library learner"}
            return run_library_learn(sc.target, scenario=scenario, learner=learner, seed=seed,
                                     max_steps=max_steps)
        return run_learn(sc.target, scenario=scenario, learner=learner, seed=seed,
                         policy=policy, max_steps=max_steps)
    except (ContractError, CapacityError) as exc:
        return {"scenario": scenario, "learner": learner, "seed": seed, "skipped": str(exc)}


def cmd_suite(args) -> int:
    scenarios = args.scenarios or DEFAULT_SUITE
    for s in scenarios:
        get_scenario(s)
    learners = args.learners or list(LEARNERS)
    for name in learners:
        if name not in LEARNERS:
            raise UsageError(f"unknown learner {name!r}")
    cells = [(s, name, seed, args.max_steps, args.policy)
             for s in scenarios for name in learners for seed in range(args.seeds)]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs == 1:
        results = map(_suite_cell, cells)
        for r in results:
            print(_dump_line(r))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for r in pool.map(_suite_cell, cells, chunksize=4):
                print(_dump_line(r))
    return 0


def cmd_acceptance(args) -> int:
    from .acceptance import run_all  # imports the brute-force oracle only when asked
    results = run_all()
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def _add_target(p, library=False):
    p.add_argument("--scenario", help=f"built-in scenario: {', '.join(scenario_names())}")
    p.add_argument("--model", metavar="FILE", help="action model JSON")
    if library:
        p.add_argument("--library", metavar="FILE", help="action library JSON")


def _add_run(p, learners, default):
    p.add_argument("--learner", choices=learners, default=default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--obs-file", metavar="FILE", help="replay observations instead of a stream")
    p.add_argument("--trace", metavar="FILE", help="write one JSON record per step")
    p.add_argument("--pretty", action="store_true", help="append a human-readable summary")
    p.add_argument("--timing", action="store_true", help="add elapsed_ms to the report")
    p.add_argument("--no-guard", action="store_true",
                   help="commit on the bare trigger, without the coverage check")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="actlearn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="run a learner on a single-model scenario")
    _add_target(p)
    _add_run(p, LEARNERS, "l3")
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.CYCLIC_CANONICAL.value)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("library-learn", help="run the library learner")
    _add_target(p, library=True)
    _add_run(p, LIBRARY_LEARNERS, "l3")
    p.set_defaults(func=cmd_library_learn)

    for name, func, what in [("graph", cmd_graph, "print all transitions"),
                             ("dftt", cmd_dftt, "print the definite tell-tale")]:
        p = sub.add_parser(name, help=what)
        _add_target(p, library=True)
        p.set_defaults(func=func)

    p = sub.add_parser("stream", help="print a generated stream prefix")
    _add_target(p, library=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.CYCLIC_CANONICAL.value)
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("equiv", help="compare two models (files or scenario names)")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("normalize", help="normalize a model whose preconditions may be formulas")
    p.add_argument("file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("suite", help="run scenario x learner x seed cells")
    p.add_argument("--scenarios", nargs="+", metavar="NAME")
    p.add_argument("--learners", nargs="+", metavar="NAME")
    p.add_argument("--seeds", type=int, default=3, help="seeds 0..N-1 per cell")
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.CYCLIC_SHUFFLED.value)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0: one per CPU)")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("acceptance", help="check every acceptance criterion; exit 1 on any failure")
    p.set_defaults(func=cmd_acceptance)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_steps", 1) < 0 or getattr(args, "length", 1) < 0:
        print("error: step counts must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ValueError as exc:  # parse, contract and capacity errors alike
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:  # pragma: no cover
        return 0


if __name__ == "__main__":
    sys.exit(main())
