"""numba-compiled kernels; same contracts as ``_kernels_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def applicable(pre_pos, pre_neg, state):
    m = pre_pos.shape[0]
    out = np.empty(m, dtype=np.bool_)
    for i in range(m):
        out[i] = (pre_pos[i] & ~state) == 0 and (pre_neg[i] & state) == 0
    return out


@njit(cache=True)
def update_mask(pre_pos, pre_neg, post_pos, post_neg, before, after):
    m = pre_pos.shape[0]
    out = np.empty(m, dtype=np.bool_)
    for i in range(m):
        if (pre_pos[i] & ~before) == 0 and (pre_neg[i] & before) == 0:
            out[i] = ((before | post_pos[i]) & ~post_neg[i]) == after
        else:
            out[i] = True
    return out


@njit(cache=True)
def applicable_counts(pre_pos, pre_neg, n):
    n_states = 1 << n
    m = pre_pos.shape[0]
    out = np.zeros(n_states, dtype=np.int64)
    for s in range(n_states):
        c = 0
        for i in range(m):
            if (pre_pos[i] & ~s) == 0 and (pre_neg[i] & s) == 0:
                c += 1
        out[s] = c
    return out


@njit(cache=True)
def outcome_pairs(pre_pos, pre_neg, post_pos, post_neg, n):
    n_states = 1 << n
    m = pre_pos.shape[0]
    buf = np.empty(m, dtype=np.int64)
    befores = []
    afters = []
    for s in range(n_states):
        k = 0
        for i in range(m):
            if (pre_pos[i] & ~s) == 0 and (pre_neg[i] & s) == 0:
                buf[k] = (s | post_pos[i]) & ~post_neg[i]
                k += 1
        if k == 0:
            continue
        row = np.sort(buf[:k])
        befores.append(np.int64(s))
        afters.append(row[0])
        for j in range(1, k):
            if row[j] != row[j - 1]:
                befores.append(np.int64(s))
                afters.append(row[j])
    out_b = np.empty(len(befores), dtype=np.int64)
    out_a = np.empty(len(afters), dtype=np.int64)
    for j in range(len(befores)):
        out_b[j] = befores[j]
        out_a[j] = afters[j]
    return out_b, out_a


@njit(cache=True)
def _strictly_weaker_unique(pre_pos, pre_neg):
    # rows are pairwise distinct, so subset-of-another means strictly weaker
    m = pre_pos.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            if j != i and (pre_pos[j] & ~pre_pos[i]) == 0 and (pre_neg[j] & ~pre_neg[i]) == 0:
                out[i] = True
                break
    return out


def has_strictly_weaker(pre_pos, pre_neg):
    if len(pre_pos) == 0:
        return np.zeros(0, dtype=np.bool_)
    uniq, inverse = np.unique((pre_pos << 32) | pre_neg, return_inverse=True)
    weaker = _strictly_weaker_unique(uniq >> 32, uniq & 0xFFFFFFFF)
    return weaker[inverse.reshape(-1)]


@njit(cache=True)
def term_keys(pos, neg, n):
    m = pos.shape[0]
    out = np.zeros(m, dtype=np.int64)
    for j in range(m):
        key = 0
        for i in range(n):
            bit = 1 << i
            key *= 3
            if pos[j] & bit:
                key += 1
            elif neg[j] & bit:
                key += 2
        out[j] = key
    return out


@njit(cache=True)
def enumerate_events(choices, n):
    k = choices.shape[0]
    total = k**n
    pre_pos = np.zeros(total, dtype=np.int64)
    pre_neg = np.zeros(total, dtype=np.int64)
    post_pos = np.zeros(total, dtype=np.int64)
    post_neg = np.zeros(total, dtype=np.int64)
    for idx in range(total):
        rest = idx
        for i in range(n):
            d = rest % k
            rest //= k
            bit = np.int64(1) << i
            if choices[d, 0] == 1:
                pre_pos[idx] |= bit
            elif choices[d, 0] == 2:
                pre_neg[idx] |= bit
            if choices[d, 1] == 1:
                post_pos[idx] |= bit
            elif choices[d, 1] == 2:
                post_neg[idx] |= bit
    return pre_pos, pre_neg, post_pos, post_neg
