"""Numba kernels: loop-erased random walks and forest-to-matching completion.

The RNG is a counter-based scheme: per-sample streams are derived from
(seed, sample index) through splitmix64, then advanced with xorshift128+.
"""

import numpy as np
from numba import njit

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, nogil=True)
def _splitmix64(x):
    z = (x + np.uint64(0x9E3779B97F4A7C15)) & _MASK
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & _MASK
    return (z ^ (z >> np.uint64(31))) & _MASK


@njit(cache=True, nogil=True)
def seed_state(seed, index):
    s = _splitmix64(np.uint64(seed) ^ (np.uint64(index) * np.uint64(0xDA942042E4DD58B5)))
    a = _splitmix64(s)
    b = _splitmix64(s + np.uint64(1))
    if a == np.uint64(0) and b == np.uint64(0):
        a = np.uint64(1)
    st = np.empty(2, dtype=np.uint64)
    st[0] = a
    st[1] = b
    return st


@njit(cache=True, nogil=True)
def _next_u64(state):
    s1 = state[0]
    s0 = state[1]
    state[0] = s0
    s1 ^= (s1 << np.uint64(23)) & _MASK
    state[1] = s1 ^ s0 ^ (s1 >> np.uint64(18)) ^ (s0 >> np.uint64(5))
    return (state[1] + s0) & _MASK


@njit(cache=True, nogil=True)
def _rand_below(state, n):
    n64 = np.uint64(n)
    lim = (_MASK // n64) * n64
    x = _next_u64(state)
    while x >= lim:
        x = _next_u64(state)
    return np.int64(x % n64)


@njit(cache=True, nogil=True)
def wilson(indptr, indices, is_root, order, seed, index):
    """Uniform directed essential spanning forest by loop-erased random walks.

    Returns outgoing[v] = chosen neighbor, or -1 for roots.  Vertices are
    walked in the given order; the result distribution does not depend on it.
    """
    state = seed_state(seed, index)
    n = len(is_root)
    outgoing = np.full(n, -1, dtype=np.int64)
    in_tree = is_root.copy()
    for k in range(len(order)):
        start = order[k]
        v = start
        while not in_tree[v]:
            lo = indptr[v]
            deg = indptr[v + 1] - lo
            outgoing[v] = indices[lo + _rand_below(state, deg)]
            v = outgoing[v]
        v = start
        while not in_tree[v]:
            in_tree[v] = True
            v = outgoing[v]
    return outgoing


@njit(cache=True, nogil=True)
def forest_to_partner(
    outgoing, b0_m_index, indptr, indices, white_of_edge, m_indptr, m_indices, n_m
):
    """Temperley bijection: match each B0 square across its outgoing edge,
    then complete the unique matching of the rest by degree-1 elimination."""
    partner = np.full(n_m, -1, dtype=np.int64)
    for v in range(len(outgoing)):
        u = outgoing[v]
        if u < 0:
            continue
        w = np.int64(-1)
        for slot in range(indptr[v], indptr[v + 1]):
            if indices[slot] == u:
                w = white_of_edge[slot]
                break
        mv = b0_m_index[v]
        partner[mv] = w
        partner[w] = mv
    # degree-1 elimination on the remaining squares
    deg = np.zeros(n_m, dtype=np.int64)
    for i in range(n_m):
        if partner[i] >= 0:
            continue
        for slot in range(m_indptr[i], m_indptr[i + 1]):
            if partner[m_indices[slot]] < 0:
                deg[i] += 1
    queue = np.empty(n_m, dtype=np.int64)
    qn = 0
    for i in range(n_m):
        if partner[i] < 0 and deg[i] == 1:
            queue[qn] = i
            qn += 1
    head = 0
    while head < qn:
        i = queue[head]
        head += 1
        if partner[i] >= 0:
            continue
        mate = np.int64(-1)
        for slot in range(m_indptr[i], m_indptr[i + 1]):
            j = m_indices[slot]
            if partner[j] < 0:
                mate = j
                break
        if mate < 0:
            return partner, np.int64(1)
        partner[i] = mate
        partner[mate] = i
        for node in (i, mate):
            for slot in range(m_indptr[node], m_indptr[node + 1]):
                j = m_indices[slot]
                if partner[j] < 0:
                    deg[j] -= 1
                    if deg[j] == 1:
                        queue[qn] = j
                        qn += 1
    for i in range(n_m):
        if partner[i] < 0:
            return partner, np.int64(2)
    return partner, np.int64(0)


@njit(cache=True, nogil=True)
def crossing_sum(partner, left_ids, right_ids):
    """Count path edges whose flanking squares are matched to each other."""
    total = np.int64(0)
    for k in range(len(left_ids)):
        a = left_ids[k]
        if a >= 0 and partner[a] == right_ids[k]:
            total += 1
    return total


@njit(cache=True, nogil=True)
def signed_crossing_sum(partner, left_ids, right_ids, signs):
    total = np.int64(0)
    for k in range(len(left_ids)):
        a = left_ids[k]
        if a >= 0 and partner[a] == right_ids[k]:
            total += signs[k]
    return total
