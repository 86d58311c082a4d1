import os

import numpy as np


def popcount(x):
    return bin(x).count("1")


def parity(x):
    return bin(x).count("1") & 1


def dot(a, b):
    return parity(a & b)


def parity_array(a):
    """Bitwise parity of every entry of a non-negative integer array."""
    a = np.asarray(a, dtype=np.uint64).copy()
    shift = 32
    while shift:
        a ^= a >> np.uint64(shift)
        shift >>= 1
    return (a & np.uint64(1)).astype(np.uint8)


def popcount_array(a):
    a = np.asarray(a, dtype=np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    for i in range(64):
        out += ((a >> np.uint64(i)) & np.uint64(1)).astype(np.int64)
    return out


def word_dtype(bits):
    if bits <= 8:
        return np.uint8
    if bits <= 16:
        return np.uint16
    if bits <= 32:
        return np.uint32
    return np.uint64


def rank_gf2(vectors):
    """Rank over F_2 of a collection of integer bit-vectors."""
    pivots = {}
    for v in vectors:
        v = int(v)
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def span_array(vectors, dtype=np.uint64):
    """All XOR-combinations; entry y is the XOR of vectors[i] over set bits i of y."""
    out = np.zeros(1, dtype=dtype)
    for v in vectors:
        out = np.concatenate([out, out ^ dtype(v)])
    return out


def max_bits(default):
    """Size guard in bits, overridable through DILLONLAB_MAX_BITS (expert mode)."""
    env = os.environ.get("DILLONLAB_MAX_BITS")
    if env:
        return int(env)
    return default
