"""Pure-numpy implementations of the bit-vector kernels.

Every kernel works on event tables split into four ``int64`` columns
(precondition positives/negatives, postcondition positives/negatives),
each a bitmask over the vocabulary with atom ``i`` at bit ``i``.
"""

import numpy as np

# Upper bound on the number of cells materialised by one broadcast.
_BLOCK_CELLS = 1 << 22


def applicable(pre_pos, pre_neg, state):
    s = np.int64(state)
    return ((pre_pos & ~s) == 0) & ((pre_neg & s) == 0)


def update_mask(pre_pos, pre_neg, post_pos, post_neg, before, after):
    s = np.int64(before)
    result = (s | post_pos) & ~post_neg
    return ~applicable(pre_pos, pre_neg, before) | (result == after)


def _state_blocks(n_states, m):
    rows = max(1, _BLOCK_CELLS // max(m, 1))
    for start in range(0, n_states, rows):
        yield np.arange(start, min(n_states, start + rows), dtype=np.int64)


def applicable_counts(pre_pos, pre_neg, n):
    n_states = 1 << n
    out = np.zeros(n_states, dtype=np.int64)
    for states in _state_blocks(n_states, len(pre_pos)):
        s = states[:, None]
        app = ((pre_pos[None, :] & ~s) == 0) & ((pre_neg[None, :] & s) == 0)
        out[states] = app.sum(axis=1)
    return out


def outcome_pairs(pre_pos, pre_neg, post_pos, post_neg, n):
    """Sorted unique ``(before, after)`` pairs over all states."""
    keys = []
    for states in _state_blocks(1 << n, len(pre_pos)):
        s = states[:, None]
        app = ((pre_pos[None, :] & ~s) == 0) & ((pre_neg[None, :] & s) == 0)
        res = (s | post_pos[None, :]) & ~post_neg[None, :]
        rows, cols = np.nonzero(app)
        keys.append((states[rows] << n) | res[rows, cols])
    if not keys:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    key = np.unique(np.concatenate(keys))
    mask = np.int64((1 << n) - 1)
    return key >> n, key & mask


def has_strictly_weaker(pre_pos, pre_neg):
    """For each event, whether another precondition is strictly entailed by it."""
    if len(pre_pos) == 0:
        return np.zeros(0, dtype=np.bool_)
    # at most 3^n distinct preconditions, however many events share them
    uniq, inverse = np.unique((pre_pos << 32) | pre_neg, return_inverse=True)
    up, un = uniq >> 32, uniq & 0xFFFFFFFF
    m = len(up)
    weaker = np.zeros(m, dtype=np.bool_)
    rows = max(1, _BLOCK_CELLS // m)
    for start in range(0, m, rows):
        sl = slice(start, min(m, start + rows))
        p_i = up[sl, None]
        n_i = un[sl, None]
        subset = ((up[None, :] & ~p_i) == 0) & ((un[None, :] & ~n_i) == 0)
        idx = np.arange(sl.start, sl.stop)[:, None]
        weaker[sl] = (subset & (np.arange(m)[None, :] != idx)).any(axis=1)
    return weaker[inverse.reshape(-1)]


def term_keys(pos, neg, n):
    key = np.zeros(len(pos), dtype=np.int64)
    for i in range(n):
        bit = np.int64(1 << i)
        code = np.where(pos & bit, 1, np.where(neg & bit, 2, 0))
        key = key * 3 + code
    return key


def enumerate_events(choices, n):
    """Expand per-atom (pre code, post code) choices into an event table.

    Codes: 0 absent, 1 positive, 2 negative.
    """
    k = len(choices)
    idx = np.arange(k**n, dtype=np.int64)
    cols = [np.zeros(len(idx), dtype=np.int64) for _ in range(4)]
    for i in range(n):
        digit = idx % k
        idx = idx // k
        bit = np.int64(1 << i)
        pre_code = choices[digit, 0]
        post_code = choices[digit, 1]
        cols[0] |= np.where(pre_code == 1, bit, 0)
        cols[1] |= np.where(pre_code == 2, bit, 0)
        cols[2] |= np.where(post_code == 1, bit, 0)
        cols[3] |= np.where(post_code == 2, bit, 0)
    return tuple(cols)
