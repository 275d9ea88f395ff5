"""Kernel dispatch: numba when available and not disabled, else numpy."""

from . import _kernels_numpy
from .config import DISABLE_NUMBA

impl = _kernels_numpy
BACKEND = "numpy"

if not DISABLE_NUMBA:
    try:
        from . import _kernels_numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        impl = _kernels_numba
        BACKEND = "numba"

applicable = impl.applicable
update_mask = impl.update_mask
applicable_counts = impl.applicable_counts
outcome_pairs = impl.outcome_pairs
has_strictly_weaker = impl.has_strictly_weaker
term_keys = impl.term_keys
enumerate_events = impl.enumerate_events
