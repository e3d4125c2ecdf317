"""Ancilla-free synthesis.

Two pipelines over the PLU factorisation M = P L U:

  * synth_simple: permutation block (depth <= 6) plus one staircase sweep
    per triangular factor (depth <= 2n-3 each), total depth <= 4n;
  * synth_dnc: same skeleton but the triangular factors are cleared by a
    divide-and-conquer parallel elimination whose depth is O(n / log n).

The divide-and-conquer step works on the top-right block X = M1^-1 A of a
unit upper triangular matrix.  X is cut into k row strips of k-bit
super-entries; the identity block below is cut into J = h2/k small blocks
that are walked in lock-step through a sequence of invertible k x k states
whose rows visit every nonzero vector.  Whenever the walk state's row i
equals a super-entry of strip i, one CNOT clears that entry; the entries
equal per stamp form a bounded-degree bipartite graph that is peeled into
matchings, one parallel layer each.  A precomputed "layby" matrix B keeps
every value's occurrence count per row and column small so the peeling
stays shallow; the block is moved A -> B -> 0 in two traverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import Circuit, Layer, trusted_layer
from .errors import (
    DimensionMismatch,
    LaybyFailure,
    NotLowerTriangular,
    NotUpperTriangular,
)
from .f2 import F2Matrix, _solve_unit_upper, plu_decompose
from .matching import color_edges

_BASE_SIZE = 64  # below this the recursion falls back to the staircase


# ----------------------------------------------------------------------
# permutations: two involutions, three layers each
# ----------------------------------------------------------------------


def permutation_layers(perm: Sequence[int]) -> Circuit:
    """Circuit of depth <= 6 simulating the permutation matrix of ``perm``.

    ``perm`` maps source wire i to destination perm[i].  Every permutation
    is the product of two involutions; an involution is a set of disjoint
    transpositions, and disjoint 3-CNOT swaps share their three layers.
    """
    p = np.asarray(list(perm), dtype=np.int64)
    n = p.size
    if sorted(p.tolist()) != list(range(n)):
        raise DimensionMismatch("not a permutation")
    tau = np.arange(n)
    rho = np.arange(n)
    seen = np.zeros(n, dtype=bool)
    for s in range(n):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        nxt = int(p[s])
        while nxt != s:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = int(p[nxt])
        length = len(cyc)
        for j in range(length):
            tau[cyc[j]] = cyc[(-j) % length]
            rho[cyc[j]] = cyc[(1 - j) % length]
    layers = []
    for inv in (tau, rho):
        pairs = [(a, int(inv[a])) for a in range(n) if a < inv[a]]
        if pairs:
            arr = np.asarray(pairs, dtype=np.int64)
            layers.append(arr)  # a -> b
            layers.append(arr[:, ::-1])  # b -> a
            layers.append(arr)  # a -> b
    return Circuit(max(n, 1), max(n, 1), [trusted_layer(a) for a in layers])


def _invert_perm(perm: Sequence[int]) -> np.ndarray:
    p = np.asarray(list(perm), dtype=np.int64)
    out = np.empty_like(p)
    out[p] = np.arange(p.size)
    return out


# ----------------------------------------------------------------------
# staircase elimination of triangular factors
# ----------------------------------------------------------------------


def _gather_bits(words: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    return (words[rows, cols >> 6] >> (cols & 63).astype(np.uint64)) & np.uint64(1)


def _staircase_lower_layers(l: F2Matrix, base: int) -> list:
    """Layer arrays clearing a unit lower triangular matrix to I.

    Subdiagonal d is cleared in phase d with gates (c -> c+d) wherever the
    working entry (c+d, c) is 1; two such gates conflict exactly when their
    controls are d apart, so splitting each phase by the parity of c // d
    gives at most two valid layers.  A phase pollutes only subdiagonals
    deeper than the one it clears, and the last two phases are single
    layers, hence at most 2n-3 layers in total.
    """
    n = l.rows
    w = l.words.copy()
    layers = []
    for d in range(1, n):
        ctrl = np.arange(0, n - d, dtype=np.int64)
        bits = _gather_bits(w, ctrl + d, ctrl)
        cand = ctrl[bits == 1]
        if cand.size == 0:
            continue
        parity = (cand // d) & 1
        for par in (0, 1):
            sel = cand[parity == par]
            if sel.size:
                w[sel + d] ^= w[sel]
                layers.append(np.stack([sel + base, sel + d + base], axis=1))
    return layers


def _flip_reverse(layers: list) -> list:
    """Transpose a reduction: flip every gate and reverse the layer order."""
    return [arr[:, ::-1] for arr in reversed(layers)]


def staircase_lower(l: F2Matrix) -> Circuit:
    """Reduction circuit for a unit lower triangular matrix.

    The returned circuit simulates l^-1 (it maps l to I when applied after
    it) and has depth at most 2n-3.
    """
    if l.rows != l.cols:
        raise DimensionMismatch("staircase needs a square matrix")
    if not l.is_unit_lower_triangular():
        raise NotLowerTriangular("expected unit lower triangular input")
    return Circuit(l.rows, l.rows, [trusted_layer(a) for a in _staircase_lower_layers(l, 0)])


def _staircase_upper_layers(u: F2Matrix, base: int) -> list:
    return _flip_reverse(_staircase_lower_layers(u.transpose(), base))


# ----------------------------------------------------------------------
# row-traversal sequences
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TraversalSequence:
    """Invertible k x k matrices ending at I whose rows, at every row
    position, visit all 2^k - 1 nonzero vectors."""

    k: int
    mats: tuple


def _rows_rank(rows: list, k: int) -> int:
    w = list(rows)
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, k) if (w[i] >> c) & 1), None)
        if piv is None:
            continue
        w[r], w[piv] = w[piv], w[r]
        for i in range(k):
            if i != r and (w[i] >> c) & 1:
                w[i] ^= w[r]
        r += 1
    return r


def row_traversal_sequence(k: int) -> TraversalSequence:
    """Generate a row-traversal sequence of length 3*2^(k-1) - k + 1.

    For each vector v the matrix I + 1 v^T is emitted; when v has odd
    weight that matrix is singular, so row i (the lowest i with v_i = 1)
    is replaced by e_i, and the displaced row value u, when nonzero, is
    re-supplied first through an auxiliary invertible matrix whose row i
    equals u.
    """
    if not (1 <= k <= 16):
        raise DimensionMismatch("k out of range")
    out = []
    for v in range(1 << k):
        rows = [(1 << r) ^ v for r in range(k)]
        if bin(v).count("1") & 1:
            i = (v & -v).bit_length() - 1
            u = rows[i]
            rows[i] = 1 << i
            if _rows_rank(rows, k) < k:  # e_i provably suffices; stay safe
                for j in range(k):
                    rows[i] = (1 << i) ^ (1 << j)
                    if _rows_rank(rows, k) == k:
                        break
            if u != 0:
                aux = [1 << r for r in range(k)]
                aux[i] = u
                if not (u >> i) & 1:
                    j = (u & -u).bit_length() - 1
                    aux[j] = 1 << i
                assert _rows_rank(aux, k) == k
                out.append(aux)
        out.append(rows)
    out.append([1 << r for r in range(k)])
    mats = tuple(F2Matrix.from_rows(rows, k) for rows in out)
    return TraversalSequence(k, mats)


# ----------------------------------------------------------------------
# layby construction
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class LaybyPair:
    """Layby b and c_mat = strip XOR b, both with bounded value counts."""

    b: F2Matrix
    c_mat: F2Matrix
    k: int
    bound: int


def layby_bound(n_ctx: int) -> int:
    """floor(sqrt(e * n_ctx) / log2(n_ctx)), the per-line occurrence cap."""
    return int(math.sqrt(math.e * n_ctx) / math.log2(n_ctx))


def _bincount_lines(vals: np.ndarray, nvals: int) -> tuple:
    r, c = vals.shape
    rows = np.zeros((r, nvals), dtype=np.int32)
    cols = np.zeros((c, nvals), dtype=np.int32)
    np.add.at(rows, (np.arange(r)[:, None], vals), 1)
    np.add.at(cols, (np.arange(c)[None, :], vals), 1)
    return rows, cols


def _layby_attempt(avals, nvals, cap, seed, bound_zero, pin_zeros):
    """One seeded greedy pass: entries are assigned in anti-diagonal waves
    (wave entries share no row or column, so decisions are independent)
    choosing the value with the least crowded row/column counters on both
    the B side and the C = A xor B side."""
    rng = np.random.default_rng(seed)
    r, c = avals.shape
    maxline = max(r, c) + 2
    counts = np.arange(maxline + 1, dtype=np.int64)
    pen = np.where(counts >= cap, np.int64(1) << 40, (counts + 1) ** 3)
    cnt_br = np.zeros((r, nvals), dtype=np.int32)
    cnt_bc = np.zeros((c, nvals), dtype=np.int32)
    cnt_cr = np.zeros((r, nvals), dtype=np.int32)
    cnt_cc = np.zeros((c, nvals), dtype=np.int32)
    bvals = np.zeros((r, c), dtype=np.int64)
    cands = np.arange(nvals)
    salt = rng.integers(0, nvals, size=(r, c))
    free = avals != 0 if pin_zeros else np.ones((r, c), dtype=bool)
    for d in range(r + c - 1):
        ii = np.arange(max(0, d - c + 1), min(r, d + 1))
        jj = d - ii
        keep = free[ii, jj]
        ii, jj = ii[keep], jj[keep]
        if ii.size == 0:
            continue
        a = avals[ii, jj]
        xor_idx = cands[None, :] ^ a[:, None]
        s_b = pen[cnt_br[ii]] + pen[cnt_bc[jj]]
        s_c = np.take_along_axis(pen[cnt_cr[ii]], xor_idx, 1)
        s_c += np.take_along_axis(pen[cnt_cc[jj]], xor_idx, 1)
        if not bound_zero:
            s_b[:, 0] = 0  # value 0 emits no gate, never penalise it
            np.put_along_axis(s_c, a[:, None], 0, 1)
        tie = (cands[None, :] ^ salt[ii, jj][:, None]) & 0x7
        v = np.argmin((s_b + s_c) * 16 + tie, axis=1)
        bvals[ii, jj] = v
        cv = v ^ a
        np.add.at(cnt_br, (ii, v), 1)
        np.add.at(cnt_bc, (jj, v), 1)
        np.add.at(cnt_cr, (ii, cv), 1)
        np.add.at(cnt_cc, (jj, cv), 1)
    lo = 0 if bound_zero else 1
    tables = (cnt_br, cnt_bc, cnt_cr, cnt_cc)
    if all(t[:, lo:].max(initial=0) <= cap for t in tables):
        return bvals
    return _layby_repair(avals, bvals, tables, cap, lo, free)


def _layby_repair(avals, bvals, tables, cap, lo, free):
    """Move single entries of over-full (line, value) cells to values that
    create no new overflow; give up (returns None) when stuck."""
    cnt_br, cnt_bc, cnt_cr, cnt_cc = tables
    nvals = cnt_br.shape[1]
    for _ in range(2 * avals.size + 16):
        viol = None
        for axis, table in enumerate(tables):
            bad = np.argwhere(table[:, lo:] > cap)
            if bad.size:
                viol = (axis, int(bad[0, 0]), int(bad[0, 1]) + lo)
                break
        if viol is None:
            return bvals
        axis, line, val = viol
        if axis in (0, 2):
            i_idx = np.full(avals.shape[1], line)
            j_idx = np.arange(avals.shape[1])
        else:
            i_idx = np.arange(avals.shape[0])
            j_idx = np.full(avals.shape[0], line)
        cur = bvals[i_idx, j_idx] if axis < 2 else bvals[i_idx, j_idx] ^ avals[i_idx, j_idx]
        hit = (cur == val) & free[i_idx, j_idx]
        moved = False
        for i, j in zip(i_idx[hit], j_idx[hit]):
            a, old = int(avals[i, j]), int(bvals[i, j])
            cnt_br[i, old] -= 1
            cnt_bc[j, old] -= 1
            cnt_cr[i, old ^ a] -= 1
            cnt_cc[j, old ^ a] -= 1
            choice = None
            for v in range(nvals):
                if v == old:
                    continue
                over = 0
                if v >= lo:
                    over += max(0, cnt_br[i, v] + 1 - cap) + max(0, cnt_bc[j, v] + 1 - cap)
                if (v ^ a) >= lo:
                    over += max(0, cnt_cr[i, v ^ a] + 1 - cap)
                    over += max(0, cnt_cc[j, v ^ a] + 1 - cap)
                if over == 0:
                    choice = v
                    break
            if choice is None:
                choice = old
            bvals[i, j] = choice
            cnt_br[i, choice] += 1
            cnt_bc[j, choice] += 1
            cnt_cr[i, choice ^ a] += 1
            cnt_cc[j, choice ^ a] += 1
            if choice != old:
                moved = True
                break
        if not moved:
            return None
    return None


def _layby_values(avals, nvals, cap, seed, bound_zero=True, pin_zeros=False, tries=6):
    for t in range(tries):
        b = _layby_attempt(avals, nvals, cap, seed + 7919 * t, bound_zero, pin_zeros)
        if b is not None:
            return b
    raise LaybyFailure(f"occurrence bound {cap} not met after {tries} attempts")


def _pack_values(vals: np.ndarray, k: int) -> F2Matrix:
    r, c = vals.shape
    bits = ((vals[:, :, None] >> np.arange(k)) & 1).astype(np.uint8)
    return F2Matrix.from_dense(bits.reshape(r, c * k))


def _unpack_values(m: F2Matrix, k: int) -> np.ndarray:
    d = m.to_dense()
    r = d.shape[0]
    c = d.shape[1] // k
    return (d.reshape(r, c, k).astype(np.int64) << np.arange(k)).sum(axis=2)


def find_layby(strip: F2Matrix, n_ctx: int, seed: int = 0) -> LaybyPair:
    """Choose a layby B for a strip of k-bit super-entries.

    Every k-bit vector occurs at most floor(sqrt(e*n_ctx)/log2(n_ctx))
    times in any row or column of B and of strip XOR B, where
    k = floor(log2(n_ctx)/2).  The choice is a seeded greedy balance over
    entry waves with a local repair pass; persistent failure raises
    LaybyFailure after several reseeded retries.
    """
    k = max(1, (n_ctx.bit_length() - 1) // 2)
    if strip.cols % k:
        raise DimensionMismatch(f"strip width must be a multiple of k={k}")
    cols = strip.cols // k
    limit = int(math.ceil(n_ctx / math.log2(n_ctx)))
    if strip.rows > limit or cols > limit:
        raise DimensionMismatch("strip larger than n_ctx / log2(n_ctx)")
    cap = layby_bound(n_ctx)
    avals = _unpack_values(strip, k)
    bvals = _layby_values(avals, 1 << k, cap, seed, bound_zero=True)
    b = _pack_values(bvals, k)
    c_mat = F2Matrix(strip.rows, strip.cols, b.words ^ strip.words)
    return LaybyPair(b=b, c_mat=c_mat, k=k, bound=cap)


# ----------------------------------------------------------------------
# lock-step walk machinery for the divide-and-conquer elimination
# ----------------------------------------------------------------------

# primitive polynomials over GF(2); bit i is the coefficient of x^i in
# the remainder of x^k
_PRIMITIVE = {
    1: 0b1,
    2: 0b11,
    3: 0b011,
    4: 0b0011,
    5: 0b00101,
    6: 0b000011,
    7: 0b0000011,
    8: 0b00011101,
    9: 0b000010001,
    10: 0b0000001001,
    11: 0b00000000101,
    12: 0b000001010011,
    13: 0b0000000011011,
    14: 0b10001000011,
    15: 0b011,
    16: 0b0001000000001011,
}


def _mat_mul_rows(a: list, b: list, k: int) -> list:
    out = []
    for i in range(k):
        acc = 0
        x = a[i]
        j = 0
        while x:
            if x & 1:
                acc ^= b[j]
            x >>= 1
            j += 1
        out.append(acc)
    return out


def _factor_transvections(rows: list, k: int) -> list:
    """(src, dst) ops whose in-order application as "row dst ^= row src"
    left-multiplies a state by the given invertible matrix."""
    w = list(rows)
    ops = []
    for c in range(k):
        if not (w[c] >> c) & 1:
            r = next(r for r in range(c + 1, k) if (w[r] >> c) & 1)
            w[c] ^= w[r]
            ops.append((r, c))
        for r in range(k):
            if r != c and (w[r] >> c) & 1:
                w[r] ^= w[c]
                ops.append((c, r))
    assert w == [1 << i for i in range(k)]
    return list(reversed(ops))


@lru_cache(maxsize=None)
def _singer_walk(k: int):
    """Walk X_t = G^t for a generator G of the Singer cycle.

    Row p of G^t runs through every nonzero vector as t covers the full
    period 2^k - 1, and consecutive states differ by the constant factor
    G, so one fixed transvection list advances all blocks per stamp.  G is
    picked among the powers of the companion matrix of a primitive
    polynomial to minimise that list (it can never beat k ops, since
    G - I is invertible).
    """
    poly = _PRIMITIVE[k]
    comp = [(1 << (i + 1)) if i + 1 < k else poly for i in range(k)]
    ident = [1 << i for i in range(k)]
    period = (1 << k) - 1
    if k == 1:
        return [ident], []
    powers = []
    cur = comp
    for _ in range(period):
        powers.append(cur)
        cur = _mat_mul_rows(comp, cur, k)
    assert powers[-1] == ident, "companion order mismatch"
    best_ops = None
    for j in range(1, period):
        if math.gcd(j, period) != 1:
            continue
        ops = _factor_transvections(powers[j - 1], k)
        if best_ops is None or len(ops) < len(best_ops):
            best_ops = ops
    # short products of transvections with full order usually exist (k is
    # the optimum possible: G - I is invertible), so sample for one
    rng = np.random.default_rng(k)
    for length in range(k, k + 3):
        for _ in range(4000):
            if len(best_ops) <= length:
                break
            ops = []
            rows = list(ident)
            for _ in range(length):
                a = int(rng.integers(k))
                b = (a + 1 + int(rng.integers(k - 1))) % k
                ops.append((a, b))
                rows[b] ^= rows[a]
            if _order_is_full(rows, ident, period, k):
                best_ops = ops
        if len(best_ops) <= length:
            break
    gen = list(ident)
    for src, dst in best_ops:
        gen[dst] ^= gen[src]
    states = []
    cur = gen
    for _ in range(period):
        states.append(cur)
        cur = _mat_mul_rows(gen, cur, k)
    assert states[-1] == ident, "generator order mismatch"
    for p in range(k):
        assert len({st[p] for st in states}) == period
    return states, best_ops


def _order_is_full(rows: list, ident: list, period: int, k: int) -> bool:
    cur = rows
    for t in range(1, period):
        if cur == ident:
            return False
        cur = _mat_mul_rows(rows, cur, k)
    return cur == ident


def _class_matchings(rr: np.ndarray, cc: np.ndarray, n_rows: int, n_cols: int) -> list:
    """Colour one stamp's equal-value entries into matchings (at most the
    bipartite degree of the class, by the matching module's colouring)."""
    if rr.size == 1:
        return [(rr, cc)]
    rs = np.sort(rr)
    if not (rs[1:] == rs[:-1]).any():
        cs = np.sort(cc)
        if not (cs[1:] == cs[:-1]).any():
            return [(rr, cc)]  # already a matching
    colors = np.asarray(color_edges(rr.tolist(), cc.tolist(), n_rows, n_cols))
    out = []
    for c in range(colors.max(initial=-1) + 1):
        sel = colors == c
        out.append((rr[sel], cc[sel]))
    return out


def _traverse_block(x: F2Matrix, top_base: int, bot_base: int, k: int, n_ctx: int, seed: int) -> list:
    """Clear the h1 x h2 block ``x`` using the identity block below it.

    Emits transition layers walking the J = h2/k bottom blocks through the
    Singer cycle and, per stamp, one layer per matching of super-entries
    whose value equals the walk state's row for their strip.  Strips whose
    value counts are already within the cap skip the layby and run a
    single traverse.
    """
    h1, h2 = x.rows, x.cols
    j_blocks = h2 // k
    vals = _unpack_values(x, k)
    strip_rows = np.array_split(np.arange(h1), k)
    nvals = 1 << k
    strip_h = math.ceil(h1 / k)
    cap = max(
        layby_bound(n_ctx),
        int(math.ceil(math.sqrt(math.e) * max(strip_h, j_blocks) / nvals)),
        2,
    )

    naturals = []
    for rows_i in strip_rows:
        rcnt, ccnt = _bincount_lines(vals[rows_i], nvals)
        naturals.append(max(rcnt[:, 1:].max(initial=0), ccnt[:, 1:].max(initial=0)))
    # one traverse A -> 0 beats the layby detour unless some strip is so
    # unbalanced that its matchings would outweigh a second walk
    direct = max(naturals) <= 2 * cap

    stage_targets = []  # per strip: (traverse-1 targets, traverse-2 targets)
    for i, rows_i in enumerate(strip_rows):
        a_i = vals[rows_i]
        if direct or naturals[i] == 0:
            b_i = a_i
        else:
            b_i = _layby_values(a_i, nvals, cap, seed + 31 * i, bound_zero=False, pin_zeros=True)
        stage_targets.append((a_i ^ b_i, b_i))

    states, trans_ops = _singer_walk(k)
    block_idx = np.arange(j_blocks, dtype=np.int64)
    trans_layers = [
        np.stack([bot_base + block_idx * k + src, bot_base + block_idx * k + dst], axis=1)
        for src, dst in trans_ops
    ]

    layers = []
    for stage in range(2):
        targets = [stage_targets[i][stage] for i in range(k)]
        if not any(t.any() for t in targets):
            continue
        consumed = [t == 0 for t in targets]
        for state in states:
            layers.extend(trans_layers)
            buckets: dict = {}
            for i in range(k):
                mask = (targets[i] == state[i]) & ~consumed[i]
                if not mask.any():
                    continue
                consumed[i] |= mask
                rr, cc = np.nonzero(mask)
                classes = _class_matchings(rr, cc, targets[i].shape[0], j_blocks)
                for rnd, (mr, mc) in enumerate(classes):
                    ctrl = bot_base + mc * k + i
                    tgt = top_base + strip_rows[i][mr]
                    buckets.setdefault(rnd, ([], []))
                    buckets[rnd][0].append(ctrl)
                    buckets[rnd][1].append(tgt)
            for rnd in sorted(buckets):
                srcs, tgts = buckets[rnd]
                layers.append(
                    np.stack([np.concatenate(srcs), np.concatenate(tgts)], axis=1)
                )
        assert all(c.all() for c in consumed), "walk left entries unconsumed"
    return layers


def _elim_upper_layers(u: F2Matrix, base: int, seed: int) -> list:
    m = u.rows
    if m <= _BASE_SIZE:
        return _staircase_upper_layers(u, base)
    k = max(1, (m.bit_length() - 1) // 2)
    h2 = k * ((m // 2) // k)
    h1 = m - h2
    m1 = u.submatrix(0, h1, 0, h1)
    m2 = u.submatrix(h1, m, h1, m)
    a = u.submatrix(0, h1, h1, m)
    left = _elim_upper_layers(m1, base, 2 * seed + 1)
    right = _elim_upper_layers(m2, base + h1, 2 * seed + 2)
    merged = [
        np.concatenate([part for part in pair if part is not None])
        for pair in _zip_pairs(left, right)
    ]
    x = _solve_unit_upper(m1, a)
    merged.extend(_traverse_block(x, base, base + h1, k, m, seed))
    return merged


def _zip_pairs(a: list, b: list):
    for i in range(max(len(a), len(b))):
        yield (a[i] if i < len(a) else None, b[i] if i < len(b) else None)


def eliminate_upper_dnc(u: F2Matrix, seed: int = 0) -> Circuit:
    """Reduction circuit mapping a unit upper triangular matrix to I.

    Recurses on the two diagonal halves (their schedules run merged on
    disjoint wires), then clears the off-diagonal block via the layby /
    lock-step walk / matching pipeline.  The simulated matrix is u^-1.
    """
    if u.rows != u.cols:
        raise DimensionMismatch("square matrix required")
    if not u.is_unit_upper_triangular():
        raise NotUpperTriangular("expected unit upper triangular input")
    return Circuit(u.rows, u.rows, [trusted_layer(a) for a in _elim_upper_layers(u, 0, seed)])


# ----------------------------------------------------------------------
# full synthesis pipelines
# ----------------------------------------------------------------------


def synth_simple(m: F2Matrix) -> Circuit:
    """Ancilla-free synthesis with depth at most 4n.

    PLU-factors the input, clears each triangular factor with a staircase
    sweep (depth <= 2n-3 each) and the permutation with <= 6 layers, then
    reverses the whole reduction so the result simulates ``m`` itself.
    """
    plu = plu_decompose(m)
    layers = [l.pairs for l in permutation_layers(_invert_perm(plu.perm)).layers]
    layers.extend(_staircase_lower_layers(plu.lower, 0))
    layers.extend(_staircase_upper_layers(plu.upper, 0))
    return Circuit(m.rows, m.rows, [trusted_layer(a) for a in reversed(layers)])


def synth_dnc(m: F2Matrix, seed: int = 0) -> Circuit:
    """Ancilla-free synthesis with depth O(n / log n).

    Same PLU skeleton as synth_simple, but both triangular factors are
    cleared by the divide-and-conquer parallel elimination (the lower one
    through its transpose).
    """
    plu = plu_decompose(m)
    layers = [l.pairs for l in permutation_layers(_invert_perm(plu.perm)).layers]
    layers.extend(_flip_reverse(_elim_upper_layers(plu.lower.transpose(), 0, seed)))
    layers.extend(_elim_upper_layers(plu.upper, 0, seed + 1))
    return Circuit(m.rows, m.rows, [trusted_layer(a) for a in reversed(layers)])
