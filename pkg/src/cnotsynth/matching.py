"""Decompose a bounded-degree bipartite multigraph into at most max-degree
matchings (a proper edge colouring, constructive Koenig).

Each edge carries an opaque tag so callers can map matchings back to the
row/column bookkeeping they encode.  The colouring core works on plain
index arrays; the synthesisers call it directly on their (row, column)
edge lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite multigraph; edges are (left vertex, right vertex, tag)."""

    left_count: int
    right_count: int
    edges: tuple

    def __init__(self, left_count: int, right_count: int, edges: Sequence):
        norm = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            tag: Any = e[2] if len(e) > 2 else None
            if not (0 <= u < left_count and 0 <= v < right_count):
                raise ValueError(f"edge ({u},{v}) out of range")
            norm.append((u, v, tag))
        object.__setattr__(self, "left_count", left_count)
        object.__setattr__(self, "right_count", right_count)
        object.__setattr__(self, "edges", tuple(norm))


def max_degree(g: BipartiteGraph) -> int:
    degl = [0] * g.left_count
    degr = [0] * g.right_count
    for u, v, _ in g.edges:
        degl[u] += 1
        degr[v] += 1
    return max(max(degl, default=0), max(degr, default=0))


def color_edges(us: Sequence[int], vs: Sequence[int], left_count: int, right_count: int) -> list:
    """Proper edge colouring of a bipartite multigraph with max-degree
    colours, one colour index per edge.

    Edges are coloured in order; when the two endpoints share no free
    colour, the alternating Kempe path starting at the right endpoint is
    flipped first, which frees one (Koenig's edge-colouring proof; the
    path can never reach the left endpoint, by the parity of its length).
    """
    degl = [0] * left_count
    degr = [0] * right_count
    for u in us:
        degl[u] += 1
    for v in vs:
        degr[v] += 1
    delta = max(max(degl, default=0), max(degr, default=0))
    full = (1 << delta) - 1
    used_l = [0] * left_count
    used_r = [0] * right_count
    color_of = [0] * len(us)
    # per (vertex, colour) incident edge id, for alternating-path walks
    at_l: list = [dict() for _ in range(left_count)]
    at_r: list = [dict() for _ in range(right_count)]

    for eid in range(len(us)):
        u, v = us[eid], vs[eid]
        both = ~(used_l[u] | used_r[v]) & full
        if both:
            c = (both & -both).bit_length() - 1
        else:
            free_u = ~used_l[u] & full
            free_v = ~used_r[v] & full
            alpha = (free_u & -free_u).bit_length() - 1
            beta = (free_v & -free_v).bit_length() - 1
            path = []
            side_r, vert, want = True, v, alpha
            while True:
                e2 = (at_r[vert] if side_r else at_l[vert]).get(want)
                if e2 is None:
                    break
                path.append(e2)
                vert = us[e2] if side_r else vs[e2]
                side_r = not side_r
                want = beta if want == alpha else alpha
            for e2 in path:
                color_of[e2] = beta if color_of[e2] == alpha else alpha
            touched_l = {us[e2] for e2 in path}
            touched_r = {vs[e2] for e2 in path}
            clear = ~((1 << alpha) | (1 << beta))
            for tab, used, touched in (
                (at_l, used_l, touched_l),
                (at_r, used_r, touched_r),
            ):
                for x in touched:
                    ea = tab[x].pop(alpha, None)
                    eb = tab[x].pop(beta, None)
                    mask = used[x] & clear
                    for e2 in (ea, eb):
                        if e2 is not None:
                            c2 = color_of[e2]
                            tab[x][c2] = e2
                            mask |= 1 << c2
                    used[x] = mask
            c = alpha
        color_of[eid] = c
        used_l[u] |= 1 << c
        used_r[v] |= 1 << c
        at_l[u][c] = eid
        at_r[v][c] = eid
    return color_of


def decompose_matchings(g: BipartiteGraph) -> list:
    """Partition the edges into at most max_degree(g) matchings.

    Returns:
        List of matchings, each a list of (u, v, tag) edges; their multiset
        union is exactly the input edge multiset.
    """
    if not g.edges:
        return []
    us = [u for u, _, _ in g.edges]
    vs = [v for _, v, _ in g.edges]
    colors = color_edges(us, vs, g.left_count, g.right_count)
    out = [[] for _ in range(max(colors) + 1)]
    for eid, c in enumerate(colors):
        out[c].append(g.edges[eid])
    return [m for m in out if m]
