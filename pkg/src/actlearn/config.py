"""Runtime limits and backend selection.

All knobs are read once from the environment at import time:

``ACTLEARN_DISABLE_NUMBA``
    Any non-empty value other than ``0`` forces the pure-numpy kernels.
``ACTLEARN_MAX_ATOMS``
    Largest vocabulary accepted anywhere (default 16, capped at 19 so that
    the base-3 key of a whole event still fits in an ``int64``).
"""

import os


class ContractError(ValueError):
    """An operation was called outside its precondition."""


class VocabularyMismatch(ContractError):
    pass


class InapplicableEvent(ContractError):
    pass


class CapacityError(ValueError):
    """An enumeration would exceed the configured size limits."""


class ParseError(ValueError):
    pass


def _env_flag(name: str) -> bool:
    value = os.environ.get(name, "").strip()
    return value not in ("", "0", "false", "False")


DISABLE_NUMBA = _env_flag("ACTLEARN_DISABLE_NUMBA")
MAX_ATOMS = min(19, int(os.environ.get("ACTLEARN_MAX_ATOMS", "16")))

# Largest vocabulary for each initial hypothesis (3^n, 4^n and 7^n events).
HYPOTHESIS_MAX_ATOMS = {"L1": 12, "L2": 10, "L3": 6}
