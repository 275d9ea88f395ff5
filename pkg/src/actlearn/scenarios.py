"""Built-in scenarios: the coin, four pushbuttons, n-bit counters and the two-switch circuit."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .config import ContractError
from .library import ActionLibrary
from .logic import Vocabulary
from .models import ActionModel, Event


@dataclass(frozen=True)
class Scenario:
    name: str
    vocab: Vocabulary
    target: ActionModel | ActionLibrary
    notes: str = ""

    @property
    def is_library(self) -> bool:
        return isinstance(self.target, ActionLibrary)


def _model(vocab: Vocabulary, *pairs: tuple[str, str]) -> ActionModel:
    return ActionModel(vocab, [Event(vocab.parse_term(p), vocab.parse_term(q)) for p, q in pairs])


def coin() -> Scenario:
    v = Vocabulary(["h"])
    return Scenario("coin", v, _model(v, ("T", "h"), ("T", "-h")),
                    "tossing a coin: heads or tails regardless of the current side")


_BUTTONS = {
    "noop": (("T", "T"),),
    "on": (("T", "p"),),
    "off": (("T", "-p"),),
    "flip": (("p", "-p"), ("-p", "p")),
}


def pushbutton(kind: str) -> Scenario:
    if kind not in _BUTTONS:
        raise ContractError(f"unknown pushbutton {kind!r}; choose from {sorted(_BUTTONS)}")
    v = Vocabulary(["p"])
    return Scenario(f"pushbutton-{kind}", v, _model(v, *_BUTTONS[kind]),
                    "p: the light is on; one action, pushing the button")


def counter(n: int) -> Scenario:
    """Binary counter over ``c1..cn`` (``c1`` least significant), wrapping to zero."""
    if n < 1:
        raise ContractError("a counter needs at least one bit")
    atoms = [f"c{i}" for i in range(1, n + 1)]
    v = Vocabulary(atoms)
    # increment: the lowest clear bit is set and every bit below it cleared
    events = []
    for i in range(n):
        pre = v.term(pos=atoms[:i], neg=[atoms[i]])
        post = v.term(pos=[atoms[i]], neg=atoms[:i])
        events.append(Event(pre, post))
    events.append(Event(v.term(pos=atoms), v.term(neg=atoms)))
    return Scenario(f"counter-{n}", v, ActionModel(v, events), f"{n}-bit counter, increment wraps")


def circuit() -> Scenario:
    """Two switches in series with a lamp; each action flips one switch."""
    v = Vocabulary(["s1", "s2", "l"])
    lib = ActionLibrary(v, {
        "flip1": _model(v, ("-s1&-s2", "s1&-l"), ("-s1&s2", "s1&l"),
                        ("s1&-s2", "-s1&-l"), ("s1&s2", "-s1&-l")),
        "flip2": _model(v, ("-s1&-s2", "s2&-l"), ("-s1&s2", "-s2&-l"),
                        ("s1&-s2", "s2&l"), ("s1&s2", "-s2&-l")),
    })
    return Scenario("circuit", v, lib, "s1, s2: switch closed; l: light on")


def scenario_names() -> list[str]:
    return ["coin", *(f"pushbutton-{k}" for k in _BUTTONS), "counter-<n>", "circuit"]


def get_scenario(name: str) -> Scenario:
    if name == "coin":
        return coin()
    if name == "circuit":
        return circuit()
    if name.startswith("pushbutton-"):
        return pushbutton(name[len("pushbutton-"):])
    m = re.fullmatch(r"counter-(\d+)", name)
    if m:
        return counter(int(m.group(1)))
    raise ContractError(f"unknown scenario {name!r}; choose from {', '.join(scenario_names())}")
