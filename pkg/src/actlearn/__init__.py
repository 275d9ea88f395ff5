"""Learning propositional action models from observed state transitions."""

from ._kernels import BACKEND
from .config import (CapacityError, ContractError, InapplicableEvent, ParseError,
                     VocabularyMismatch)
from .learners import (UNDECIDED, Kind, LearnerState, LimitLearner, ModelClass,
                       TellTaleLearner, Verdict, init_hypothesis, learner_step,
                       limit_conjecture, minimize, run_learner, tell_tale_step, update_model)
from .library import (ActionLibrary, LibraryLearnerState, TripleObservation,
                      generate_library_prefix, library_learner_step, substream)
from .logic import State, Term, Vocabulary, dnf, entails, parse_formula, satisfies
from .models import (ActionModel, Event, Observation, RawActionModel, RawEvent, apply_event,
                     classify, equivalent, graph, make_universal, normalize, outcomes)
from .scenarios import Scenario, get_scenario
from .streams import (Policy, StreamSpec, covers_graph, dftt, generate_prefix,
                      is_sound_prefix)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapacityError", "ContractError", "InapplicableEvent", "ParseError",
    "VocabularyMismatch", "UNDECIDED", "Kind", "LearnerState", "LimitLearner", "ModelClass",
    "TellTaleLearner", "Verdict", "init_hypothesis", "learner_step", "limit_conjecture",
    "minimize", "run_learner", "tell_tale_step", "update_model", "ActionLibrary",
    "LibraryLearnerState", "TripleObservation", "generate_library_prefix",
    "library_learner_step", "substream", "State", "Term", "Vocabulary", "dnf", "entails",
    "parse_formula", "satisfies", "ActionModel", "Event", "Observation", "RawActionModel",
    "RawEvent", "apply_event", "classify", "equivalent", "graph", "make_universal",
    "normalize", "outcomes", "Scenario", "get_scenario", "Policy", "StreamSpec",
    "covers_graph", "dftt", "generate_prefix", "is_sound_prefix",
]
