"""Depth lower bounds and an exact small-instance optimum.

Counting bound: a depth-d circuit on N wires is a product of d parallel
row-elimination matrices, so layer_count(N)^d must reach #GL(n,2) before
depth d can cover the worst case.  Light-cone bound: one layer at most
doubles the number of inputs an output depends on, so a row (or column) of
Hamming weight w forces depth >= ceil(log2 w).  The BFS oracle walks
GL(n,2) for n <= 4, one parallel layer per step, and is the reference the
synthesisers are sandwiched against in tests.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import SingularMatrix, TooLarge
from .f2 import F2Matrix, rank

_BFS_LIMIT = 4


def gl_count(n: int) -> int:
    """#GL(n,2) = prod_{i<n} (2^n - 2^i), exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = 1
    for i in range(n):
        out *= (1 << n) - (1 << i)
    return out


def layer_count(wires: int) -> int:
    """Number of distinct parallel row-elimination matrices on the given
    wires: choose 2t of them, then pair and orient (2t)!/t! ways."""
    if wires < 1:
        raise ValueError("wires must be >= 1")
    return sum(
        comb(wires, 2 * t) * factorial(2 * t) // factorial(t)
        for t in range(wires // 2 + 1)
    )


def counting_depth_bound(n: int, m: int) -> int:
    """Smallest d with layer_count(n+m)^d >= gl_count(n): a lower bound on
    the worst-case depth of exact CNOT circuits with m ancillae."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1, m >= 0")
    target = gl_count(n)
    per_layer = layer_count(n + m)
    d = 0
    acc = 1
    while acc < target:
        acc *= per_layer
        d += 1
    return d


def fanin_depth_bound(m: F2Matrix) -> int:
    """Light-cone bound: max over rows and columns of ceil(log2 weight).

    Any exact circuit for m, with any number of ancillae, has at least
    this depth.
    """
    if m.rows != m.cols:
        raise ValueError("square matrix expected")
    w = max(int(m.row_weights().max()), int(m.col_weights().max()))
    return (max(w, 1) - 1).bit_length()


# ----------------------------------------------------------------------
# exact oracle
# ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _all_layers(wires: int) -> tuple:
    """Every nonempty parallel row-elimination layer on the given wires,
    as tuples of (control, target) pairs."""
    out = []

    def rec(avail: tuple, acc: tuple):
        if len(avail) < 2:
            if acc:
                out.append(acc)
            return
        a = avail[0]
        rest = avail[1:]
        rec(rest, acc)  # leave wire a idle
        for i, b in enumerate(rest):
            nxt = rest[:i] + rest[i + 1 :]
            rec(nxt, acc + ((a, b),))
            rec(nxt, acc + ((b, a),))

    rec(tuple(range(wires)), ())
    return tuple(out)


@lru_cache(maxsize=None)
def _depth_table(n: int) -> dict:
    """Exact minimum ancilla-free depth for every member of GL(n,2), by
    breadth-first search from I, one parallel layer per step."""
    layers = _all_layers(n)
    ident = tuple(1 << i for i in range(n))
    table = {ident: 0}
    frontier = [ident]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for state in frontier:
            for layer in layers:
                new = list(state)
                for c, t in layer:
                    new[t] ^= state[c]
                key = tuple(new)
                if key not in table:
                    table[key] = d
                    nxt.append(key)
        frontier = nxt
    return table


def bfs_optimal_depth(m: F2Matrix) -> int:
    """Exact minimum ancilla-free depth of m in GL(n,2), n <= 4.

    Raises:
        TooLarge: for n > 4 (the state space stops being a toy).
        SingularMatrix: if m is not invertible.
    """
    n = m.rows
    if m.cols != n:
        raise ValueError("square matrix expected")
    if n > _BFS_LIMIT:
        raise TooLarge(f"exact oracle limited to n <= {_BFS_LIMIT}")
    if rank(m) != n:
        raise SingularMatrix("oracle defined on GL(n,2) only")
    d = m.to_dense().astype(np.int64)
    key = tuple(int(x) for x in (d << np.arange(n)).sum(axis=1))
    return _depth_table(n)[key]
