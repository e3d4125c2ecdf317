"""Ancilla-based synthesis: depth O(n / (s log n)) with (3s+1)n ancillae.

The n-wire map M is realised on data + mirror + work regions as two
embeddings and a block swap:

    |x, 0, 0>  --embed(M)-->  |x, Mx, 0>  --embed(M^-1), roles swapped-->
    |0, Mx, 0>  --swap data/mirror-->  |Mx, 0, 0>.

One embedding writes M's columns into its target rows group by group.  A
group of s*2k^2 columns is handled by s parallel stacks of the
four-Russians construction: each stack builds, for every k-bit column
slice, the block of all nonzero sums of its control rows (a "P block"),
copies the popular sums a few times, and adds one copy per slice into
every target row under a schedule that never reuses a copy within a
layer.  Everything except the written block is then restored by reversing
the build layers, so pollution survives only in columns the ancilla
contract leaves unconstrained.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .circuit import Circuit, Layer, trusted_layer
from .errors import BudgetExceeded, DimensionMismatch, LayoutError
from .f2 import F2Matrix, invert
from .synth_free import permutation_layers

_PLAIN_LIMIT = 3  # below this the four-Russians machinery cannot pay rent


# ----------------------------------------------------------------------
# layout
# ----------------------------------------------------------------------


def max_scale(n: int) -> int:
    """Largest admissible s, floor(n / log2(n)^2)."""
    if n < 2:
        return 1
    return max(1, int(n / (math.log2(n) ** 2)))


def copy_cap(n: int) -> int:
    """Each copy row is reused at most 2*ceil(log2 n) times."""
    return 2 * max(1, math.ceil(math.log2(max(n, 2))))


@dataclass(frozen=True)
class AncillaLayout:
    """Wire regions for one embedding: n data wires, an n-wire mirror block
    and a 3sn-wire work block."""

    n: int
    s: int

    @classmethod
    def create(cls, n: int, s: int) -> "AncillaLayout":
        if n < 1 or s < 1:
            raise DimensionMismatch("need n >= 1 and s >= 1")
        cap = max_scale(n)
        if s > cap:
            warnings.warn(f"ancilla scale {s} clamped to {cap} (= n/log2(n)^2)")
            s = cap
        return cls(n, s)

    @property
    def data_region(self) -> range:
        return range(0, self.n)

    @property
    def mirror_region(self) -> range:
        return range(self.n, 2 * self.n)

    @property
    def work_region(self) -> range:
        return range(2 * self.n, (3 * self.s + 2) * self.n)

    @property
    def total_wires(self) -> int:
        return (3 * self.s + 2) * self.n

    @property
    def ancillae(self) -> int:
        return (3 * self.s + 1) * self.n


# ----------------------------------------------------------------------
# sparse block construction (doubling copies of control rows)
# ----------------------------------------------------------------------


@lru_cache(maxsize=64)
def _sparse_schedule(vals: tuple, kb: int):
    """Paste schedule: target t receives its set bits in weight order, one
    per paste layer p; the rank within (bit, layer) selects which copy of
    the control row feeds it (rank 0 is the control wire itself)."""
    uses: dict = {}
    ti, bs, ps, rs = [], [], [], []
    for t, v in enumerate(vals):
        p = 0
        x = int(v)
        while x:
            b = (x & -x).bit_length() - 1
            r = uses.get((b, p), 0)
            uses[(b, p)] = r + 1
            ti.append(t)
            bs.append(b)
            ps.append(p)
            rs.append(r)
            x &= x - 1
            p += 1
    copies = [0] * kb
    for (b, _p), cnt in uses.items():
        copies[b] = max(copies[b], cnt - 1)
    return (
        np.array(ti, dtype=np.int64),
        np.array(bs, dtype=np.int64),
        np.array(ps, dtype=np.int64),
        np.array(rs, dtype=np.int64),
        tuple(copies),
    )


def _doubling_rounds(groups: list) -> list:
    """Copy fan-out layers.  Each group is (root wire, list of copy wires);
    per round every available source (root plus finished copies) feeds one
    new copy, so the round count is logarithmic in the copy count."""
    layers = []
    made = [0] * len(groups)
    while True:
        gates = []
        for gi, (root, dests) in enumerate(groups):
            rem = len(dests) - made[gi]
            if rem <= 0:
                continue
            new = min(made[gi] + 1, rem)
            for j in range(new):
                src = root if j == 0 else dests[j - 1]
                gates.append((src, dests[made[gi] + j]))
            made[gi] += new
        if not gates:
            return layers
        layers.append(np.asarray(gates, dtype=np.int64))


def _sparse_layers(vals, kb, ctrl_wires, tgt_wires, scratch_wires) -> list:
    """Layers adding, to each target wire, the subset-sum of the control
    wires given by its value's bit mask; scratch holds temporary copies of
    the control rows and is built and restored around the pastes."""
    keep = [i for i, v in enumerate(vals) if v]
    sched_ti, sched_b, sched_p, sched_r, copies = _sparse_schedule(
        tuple(int(vals[i]) for i in keep), kb
    )
    bases = np.cumsum([0] + list(copies))
    if bases[-1] > len(scratch_wires):
        raise LayoutError("not enough scratch for sparse construction")
    scr = np.asarray(scratch_wires[: bases[-1]], dtype=np.int64)
    build = _doubling_rounds(
        [(ctrl_wires[b], scr[bases[b] : bases[b + 1]].tolist()) for b in range(kb)]
    )
    ctrl_arr = np.asarray(ctrl_wires, dtype=np.int64)
    tgt_arr = np.asarray([tgt_wires[i] for i in keep], dtype=np.int64)
    paste = []
    for p in range(int(sched_p.max(initial=-1)) + 1):
        sel = sched_p == p
        b_sel, r_sel = sched_b[sel], sched_r[sel]
        src = np.empty(b_sel.size, dtype=np.int64)
        first = r_sel == 0
        src[first] = ctrl_arr[b_sel[first]]
        src[~first] = scr[bases[b_sel[~first]] + r_sel[~first] - 1]
        paste.append(np.stack([src, tgt_arr[sched_ti[sel]]], axis=1))
    return build + paste + list(reversed(build))


def gen_sparse(
    y: F2Matrix,
    t: int,
    controls: Sequence[int],
    targets: Sequence[int],
    scratch: Sequence[int],
    wires: int,
) -> Circuit:
    """Fragment adding y's rows (bit masks over the control wires) to the
    target wires with all scratch wires restored; depth O(log t + y.cols).

    Raises:
        BudgetExceeded: if y has more than ``t`` ones or the scratch region
            is smaller than the budget.
    """
    ones = int(y.row_weights().sum())
    if ones > t or t > len(scratch):
        raise BudgetExceeded(f"{ones} ones exceed budget {t} (scratch {len(scratch)})")
    d = y.to_dense().astype(np.int64)
    vals = (d << np.arange(y.cols)).sum(axis=1)
    layers = _sparse_layers(vals, y.cols, list(controls), list(targets), list(scratch))
    return Circuit(wires, wires, [trusted_layer(a) for a in layers])


# ----------------------------------------------------------------------
# one column-group stack (the log^2-column four-Russians step)
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CopyPlan:
    """Copy bookkeeping for one stack: per (column slice, value) the
    demand, the copy-row count and the wires serving it (the first being
    the P-block row itself); ``total_rows`` counts the extra rows used."""

    entries: tuple
    total_rows: int


def _slice_widths(total: int, k: int) -> list:
    widths = [k] * (total // k)
    if total % k:
        widths.append(total % k)
    return widths


def _slice_wires(wires: list, widths: list) -> list:
    out, pos = [], 0
    for w in widths:
        out.append(wires[pos : pos + w])
        pos += w
    return out


def _stack_layers(y_dense, widths, ctrl_groups, tgt_wires, mach, c_cap, rng,
                  with_undo=True, want_plan=False):
    """Layers writing y (rows = targets, columns = sum(widths) controls)
    into the target rows; machinery is restored when ``with_undo`` (a
    caller reversing the whole stack skips it).  Returns (layers, plan).

    Schedule: target i takes colour (g + salt[i]) mod c_cap in slice g, so
    its colours are distinct across slices; within a (slice, value,
    colour) class the rank-r demander reads copy r of that value.
    """
    n_t = y_dense.shape[0]
    ngroups = len(widths)
    if ngroups > c_cap:
        raise LayoutError("more column slices than schedule colours")
    cursor = 0

    def take(count):
        nonlocal cursor
        if cursor + count > len(mach):
            raise LayoutError("machinery region exhausted")
        out = mach[cursor : cursor + count]
        cursor += count
        return out

    offs = np.cumsum([0] + list(widths))
    gvals = [
        (y_dense[:, offs[g] : offs[g + 1]].astype(np.int64) << np.arange(kb)).sum(axis=1)
        for g, kb in enumerate(widths)
    ]

    # step 1: P blocks of all nonzero kb-bit sums, all slices in parallel
    step1: list = []
    p_base = []
    for g, kb in enumerate(widths):
        tmpl, nz, s_len = _p_template(kb)
        prow = take(nz)
        scr = take(s_len)
        p_base.append(prow)
        wire_map = np.concatenate(
            [
                np.asarray(ctrl_groups[g], dtype=np.int64),
                np.asarray(prow, dtype=np.int64),
                np.asarray(scr, dtype=np.int64),
            ]
        )
        for i, arr in enumerate(tmpl):
            out = wire_map[arr]
            if i < len(step1):
                step1[i] = np.concatenate([step1[i], out])
            else:
                step1.append(out)

    salt = rng.integers(0, c_cap, size=n_t)

    # steps 2 and 3 jointly: per slice, rank targets within their (value,
    # colour) class; rank r reads copy r of the value, so the copy count
    # per value is the largest class over its colours
    plan_entries = []
    copy_groups = []
    total_extra = 0
    gate_src = [[] for _ in range(c_cap)]
    gate_tgt = [[] for _ in range(c_cap)]
    for g, kb in enumerate(widths):
        v = gvals[g]
        color = (g + salt) % c_cap
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        cell = v[nz] * c_cap + color[nz]
        order = nz[np.argsort(cell, kind="stable")]
        sc = v[order] * c_cap + color[order]
        new_run = np.r_[True, sc[1:] != sc[:-1]]
        ranks = np.arange(sc.size) - np.maximum.accumulate(np.where(new_run, np.arange(sc.size), 0))
        need_per_val = np.zeros(1 << kb, dtype=np.int64)
        np.maximum.at(need_per_val, v[order], ranks + 1)
        # copy wires: contiguous block per value; index 0 is the P row
        extra = np.maximum(need_per_val - 1, 0)
        starts = np.concatenate([[0], np.cumsum(extra)])
        block = np.asarray(take(int(starts[-1])), dtype=np.int64)
        total_extra += int(starts[-1])
        width_w = int(need_per_val.max(initial=1))
        wire_of = np.zeros(((1 << kb), width_w), dtype=np.int64)
        p_arr = np.asarray(p_base[g], dtype=np.int64)
        present = np.flatnonzero(need_per_val)
        wire_of[present, 0] = p_arr[present - 1]
        if block.size:
            val_of_extra = np.repeat(np.arange(1 << kb), extra)
            slot_of_extra = np.concatenate([np.arange(1, e + 1) for e in extra if e]) \
                if extra.any() else np.empty(0, dtype=np.int64)
            wire_of[val_of_extra, slot_of_extra] = block
            for val in np.flatnonzero(extra):
                copy_groups.append(
                    (int(p_arr[val - 1]),
                     [int(w) for w in block[starts[val] : starts[val + 1]]])
                )
        if want_plan:
            mult_per_val = np.bincount(v, minlength=1 << kb)
            for val in present:
                plan_entries.append(
                    (g, int(val), int(mult_per_val[val]), int(need_per_val[val]),
                     tuple(int(w) for w in wire_of[val, : need_per_val[val]]))
                )
        src = wire_of[v[order], ranks]
        tgt = np.asarray(tgt_wires, dtype=np.int64)[order]
        col = color[order]
        for c in np.unique(col):
            sel = col == c
            gate_src[c].append(src[sel])
            gate_tgt[c].append(tgt[sel])
    step2 = _doubling_rounds(copy_groups)
    plan = CopyPlan(tuple(plan_entries), total_extra)
    step3 = []
    for c in range(c_cap):
        if gate_src[c]:
            step3.append(
                np.stack([np.concatenate(gate_src[c]), np.concatenate(gate_tgt[c])], axis=1)
            )

    if not with_undo:
        return step1 + step2 + step3, plan
    undo = list(reversed(step1 + step2))
    return step1 + step2 + step3 + undo, plan


def _pick_k(n: int, mach_len: int) -> int:
    k = max(1, (max(n, 2).bit_length() - 1) // 2)
    while k > 1:
        nz = (1 << k) - 1
        _, _, _, _, copies = _sparse_schedule(tuple(range(1, nz + 1)), k)
        if 2 * k * (nz + sum(copies)) <= mach_len // 2:
            break
        k -= 1
    return k


@lru_cache(maxsize=None)
def _p_template(kb: int):
    """P-block build layers on virtual wires [ctrl | P rows | scratch],
    translated per slice with one gather."""
    nz = (1 << kb) - 1
    _, _, _, _, copies = _sparse_schedule(tuple(range(1, nz + 1)), kb)
    s_len = sum(copies)
    layers = _sparse_layers(
        list(range(1, nz + 1)), kb,
        list(range(kb)), list(range(kb, kb + nz)),
        list(range(kb + nz, kb + nz + s_len)),
    )
    return tuple(layers), nz, s_len


def gen_ycol_with_plan(
    y: F2Matrix,
    controls: Sequence[int],
    targets: Sequence[int],
    machinery: Sequence[int],
    n_ctx: int,
    seed: int = 0,
):
    """As gen_ycol but also returns the CopyPlan of the schedule."""
    if y.rows != len(targets) or y.cols != len(controls):
        raise DimensionMismatch("y shape does not match wire lists")
    rng = np.random.default_rng(seed)
    wires = 1 + max(max(controls), max(targets), max(machinery))
    k = _pick_k(n_ctx, len(machinery))
    while True:
        widths = _slice_widths(y.cols, k)
        try:
            layers, plan = _stack_layers(
                y.to_dense(), widths, _slice_wires(list(controls), widths),
                list(targets), list(machinery), copy_cap(n_ctx), rng,
                want_plan=True,
            )
            return Circuit(wires, wires, [trusted_layer(a) for a in layers]), plan
        except LayoutError:
            if k == 1:
                raise
            k -= 1


def gen_ycol(
    y: F2Matrix,
    controls: Sequence[int],
    targets: Sequence[int],
    machinery: Sequence[int],
    n_ctx: int,
    seed: int = 0,
) -> Circuit:
    """Fragment writing ``y`` (rows over the target wires, columns over the
    control wires) into the target rows, machinery restored; the schedule
    uses at most 2*ceil(log2 n_ctx) paste layers and O(log n_ctx) depth."""
    circuit, _ = gen_ycol_with_plan(y, controls, targets, machinery, n_ctx, seed)
    return circuit


# ----------------------------------------------------------------------
# s-way parallelisation, sequential embedding, full synthesis
# ----------------------------------------------------------------------


def _fanin_layers(partial_bases: list, tgt_base: int, n_t: int) -> list:
    """Tree-add the s partial blocks into the target rows, then restore the
    partials by reversing the tree."""
    rows = np.arange(n_t, dtype=np.int64)
    combine = []
    stride = 1
    while stride < len(partial_bases):
        gates = []
        for i in range(0, len(partial_bases) - stride, 2 * stride):
            gates.append(
                np.stack([partial_bases[i + stride] + rows, partial_bases[i] + rows], axis=1)
            )
        if gates:
            combine.append(np.concatenate(gates))
        stride *= 2
    emit = [np.stack([partial_bases[0] + rows, tgt_base + rows], axis=1)]
    return combine + emit + list(reversed(combine))


def _group_layers(dense_group, layout, ctrl_wires, tgt_base, k, rng):
    """One group of <= s*2k^2 columns: s parallel stacks, then a fan-in."""
    n, s = layout.n, layout.s
    work0 = 2 * n
    w1 = 2 * k * k
    cap = copy_cap(n)
    pieces = _slice_widths(dense_group.shape[1], w1)
    stacks = []
    for i, width in enumerate(pieces):
        c0 = i * w1
        ctrls = _slice_wires(ctrl_wires[c0 : c0 + width], _slice_widths(width, k))
        if len(pieces) == 1:
            tgts = np.arange(tgt_base, tgt_base + n)
            mach = list(range(work0, work0 + 3 * n))
        else:
            region = work0 + 3 * n * i
            tgts = np.arange(region, region + n)
            mach = list(range(region + n, region + 3 * n))
        sub, _ = _stack_layers(
            dense_group[:, c0 : c0 + width], _slice_widths(width, k),
            ctrls, tgts, mach, cap, rng, with_undo=len(pieces) == 1,
        )
        stacks.append((sub, int(tgts[0])))
    if len(stacks) == 1:
        return stacks[0][0]
    merged = []
    for li in range(max(len(sub) for sub, _ in stacks)):
        merged.append(np.concatenate([sub[li] for sub, _ in stacks if li < len(sub)]))
    fan = _fanin_layers([b for _, b in stacks], tgt_base, n)
    return merged + fan + list(reversed(merged))


def _plain_layers(m_dense, ctrl_base, tgt_base) -> list:
    layers = []
    for c in range(m_dense.shape[1]):
        for r in np.flatnonzero(m_dense[:, c]):
            layers.append(np.array([[ctrl_base + c, tgt_base + int(r)]], dtype=np.int64))
    return layers


def _embed_layers(m_dense, layout: AncillaLayout, ctrl_base: int, tgt_base: int, seed: int) -> list:
    """Layers adding M (columns read from ctrl wires) into the target rows,
    work region restored; column groups of s*2k^2 run sequentially."""
    n, s = layout.n, layout.s
    if n <= _PLAIN_LIMIT:
        return _plain_layers(m_dense, ctrl_base, tgt_base)
    k0 = _pick_k(n, 2 * n)
    for k in range(k0, 0, -1):
        rng = np.random.default_rng(seed)
        t_w = s * 2 * k * k
        try:
            layers = []
            for g0 in range(0, n, t_w):
                width = min(t_w, n - g0)
                layers.extend(
                    _group_layers(
                        m_dense[:, g0 : g0 + width], layout,
                        list(range(ctrl_base + g0, ctrl_base + g0 + width)),
                        tgt_base, k, rng,
                    )
                )
            return layers
        except LayoutError:
            continue
    return _plain_layers(m_dense, ctrl_base, tgt_base)


def gen_scols(y: F2Matrix, layout: AncillaLayout, seed: int = 0) -> Circuit:
    """Fragment writing one column group ``y`` (n rows, <= s*2k^2 columns
    against the first data wires) into the mirror rows via s parallel
    stacks and an O(log s) fan-in."""
    n = layout.n
    if y.rows != n:
        raise DimensionMismatch("y must have n rows")
    k = _pick_k(n, 2 * n)
    if y.cols > layout.s * 2 * k * k:
        raise LayoutError("more columns than one group can hold")
    rng = np.random.default_rng(seed)
    layers = _group_layers(y.to_dense(), layout, list(range(y.cols)), n, k, rng)
    return Circuit(layout.total_wires, layout.total_wires, [trusted_layer(a) for a in layers])


def embed_m(m: F2Matrix, layout: AncillaLayout, seed: int = 0) -> Circuit:
    """Fragment mapping |x, j, 0> to |x, j xor Mx, 0> on the layout wires;
    depth O(n / (s log n))."""
    if m.rows != layout.n or m.cols != layout.n:
        raise DimensionMismatch("matrix must be n x n")
    layers = _embed_layers(m.to_dense(), layout, 0, layout.n, seed)
    return Circuit(layout.total_wires, layout.total_wires, [trusted_layer(a) for a in layers])


def synth_with_ancillae(m: F2Matrix, s: int, seed: int = 0) -> Circuit:
    """Synthesise ``m`` on n data wires plus (3s+1)n ancillae.

    Composition: embed M into the mirror block, embed M^-1 back onto the
    data block (mirror wires as controls), then swap the two n-wire blocks
    with one transposition layer triple.
    """
    if m.rows != m.cols:
        raise DimensionMismatch("square matrix required")
    n = m.rows
    layout = AncillaLayout.create(n, s)
    minv = invert(m)
    layers = _embed_layers(m.to_dense(), layout, 0, n, seed)
    layers += _embed_layers(minv.to_dense(), layout, n, 0, seed + 1)
    swap = np.arange(layout.total_wires)
    swap[:n] = np.arange(n, 2 * n)
    swap[n : 2 * n] = np.arange(n)
    layers += [l.pairs for l in permutation_layers(swap).layers]
    return Circuit(layout.total_wires, n, [trusted_layer(a) for a in layers])
