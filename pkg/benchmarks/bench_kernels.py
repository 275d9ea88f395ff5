"""Time the numba kernels against the numpy fallback on full hypothesis tables.

    python3 benchmarks/bench_kernels.py [--atoms 6] [--repeat 5]

Both backends are imported directly, so the ACTLEARN_DISABLE_NUMBA flag
does not matter here.  Every timed call is also checked for agreement.
"""

import argparse
import time

import numpy as np

from actlearn import _kernels_numba as nb
from actlearn import _kernels_numpy as npk

CHOICES = {
    "L1": [(0, 0), (0, 1), (0, 2)],
    "L2": [(1, 0), (1, 2), (2, 0), (2, 1)],
    "L3": [(0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)],
}


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    n = args.atoms
    rng = np.random.default_rng(0)

    print(f"{'kernel':<22}{'table':>6}{'rows':>10}{'numpy ms':>12}{'numba ms':>12}{'speedup':>9}")
    for kind, choices in CHOICES.items():
        table = npk.enumerate_events(np.array(choices, dtype=np.int64), n)
        pp, pn, qp, qn = table
        before = int(rng.integers(0, 1 << n))
        after = int(rng.integers(0, 1 << n))
        # survivors after a handful of updates, the size min() actually sees
        keep = np.ones(len(pp), dtype=bool)
        for s in rng.integers(0, 1 << n, size=2 * n):
            keep &= npk.update_mask(pp, pn, qp, qn, int(s), int(s))
        small = (pp[keep], pn[keep])
        cases = [
            ("enumerate_events", lambda m: m.enumerate_events(np.array(choices, dtype=np.int64), n)),
            ("update_mask", lambda m: m.update_mask(pp, pn, qp, qn, before, after)),
            ("applicable_counts", lambda m: m.applicable_counts(pp, pn, n)),
            ("outcome_pairs", lambda m: m.outcome_pairs(pp, pn, qp, qn, n)),
            ("term_keys", lambda m: m.term_keys(qp, qn, n)),
            ("has_strictly_weaker", lambda m: m.has_strictly_weaker(*small)),
        ]
        for name, call in cases:
            call(nb)  # compile outside the clock
            ref, t_np = best_of(lambda: call(npk), args.repeat)
            got, t_nb = best_of(lambda: call(nb), args.repeat)
            if not same(ref, got):
                raise SystemExit(f"{name} on {kind}: backends disagree")
            rows = len(small[0]) if name == "has_strictly_weaker" else len(pp)
            print(f"{name:<22}{kind:>6}{rows:>10}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}"
                  f"{t_np / max(t_nb, 1e-9):>8.1f}x")


if __name__ == "__main__":
    main()
