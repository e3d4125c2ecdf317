import numpy as np
import pytest

from cnotsynth import (
    AncillaLayout,
    BudgetExceeded,
    F2Matrix,
    apply_to_bits,
    embed_m,
    gen_scols,
    gen_sparse,
    gen_ycol,
    gen_ycol_with_plan,
    invert,
    mat_mul,
    max_scale,
    random_gl,
    simulate_to_matrix,
    synth_with_ancillae,
    verify_implements,
)
from cnotsynth.synth_ancilla import copy_cap


def block(sim, rows, cols):
    d = sim.to_dense()
    return d[np.ix_(list(rows), list(cols))]


class TestLayout:
    def test_regions_partition_wires(self):
        lay = AncillaLayout.create(128, 2)  # max_scale(128) = 2, no clamping
        assert lay.total_wires == (3 * 2 + 2) * 128
        assert lay.ancillae == (3 * 2 + 1) * 128
        spans = list(lay.data_region) + list(lay.mirror_region) + list(lay.work_region)
        assert spans == list(range(lay.total_wires))

    def test_scale_clamped_with_warning(self):
        with pytest.warns(UserWarning):
            lay = AncillaLayout.create(16, 5)
        assert lay.s == max_scale(16) == 1


class TestGenSparse:
    def test_zero_matrix_empty(self):
        y = F2Matrix.zeros(4, 3)
        c = gen_sparse(y, 6, [0, 1, 2], [3, 4, 5, 6], [7, 8, 9, 10, 11, 12], 13)
        assert c.size == 0

    def test_single_one_depth_le_3(self):
        y = F2Matrix.from_dense([[0, 1, 0], [0, 0, 0]])
        c = gen_sparse(y, 4, [0, 1, 2], [3, 4], [5, 6, 7, 8], 9)
        assert c.depth <= 3
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, [3, 4], [0, 1, 2]), y.to_dense())
        # scratch restored
        assert np.array_equal(block(sim, range(5, 9), range(9)),
                              np.eye(9, dtype=np.uint8)[5:])

    def test_all_vectors_block(self):
        # the full P stack: every nonzero 4-bit sum lands in its target row
        k = 4
        y = F2Matrix.from_dense(
            [[(v >> b) & 1 for b in range(k)] for v in range(1 << k)]
        )
        ctrl = list(range(k))
        tgt = list(range(k, k + (1 << k)))
        scr = list(range(k + (1 << k), k + (1 << k) + 40))
        c = gen_sparse(y, 40, ctrl, tgt, scr, scr[-1] + 1)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, tgt, ctrl), y.to_dense())
        assert c.depth <= 3 * k + 4
        for w in scr:
            row = sim.to_dense()[w]
            assert row[w] == 1 and row.sum() == 1

    def test_budget_enforced(self):
        y = F2Matrix.from_dense(np.ones((4, 3), dtype=np.uint8))
        with pytest.raises(BudgetExceeded):
            gen_sparse(y, 2, [0, 1, 2], [3, 4, 5, 6], [7, 8], 9)


class TestGenYcol:
    def test_zero_is_net_identity(self):
        n = 64
        y = F2Matrix.zeros(n, 8)
        lay = AncillaLayout.create(n, 1)
        ctrl = list(range(8))
        tgt = list(range(n, 2 * n))
        mach = list(range(2 * n, 4 * n))
        c = gen_ycol(y, ctrl, tgt, mach, n)
        assert simulate_to_matrix(c) == F2Matrix.identity(c.wires)

    @pytest.mark.parametrize("n,w", [(64, 8), (128, 18), (256, 32)])
    def test_block_exact_and_machinery_restored(self, n, w):
        rng = np.random.default_rng(n + w)
        y = F2Matrix.from_dense(rng.integers(0, 2, (n, w)))
        ctrl = list(range(w))
        tgt = list(range(n, 2 * n))
        mach = list(range(2 * n, 4 * n))
        c, plan = gen_ycol_with_plan(y, ctrl, tgt, mach, n, seed=1)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, tgt, ctrl), y.to_dense())
        d = sim.to_dense()
        for wv in mach:
            assert d[wv, wv] == 1 and d[wv].sum() == 1
        # data rows untouched
        for cw in ctrl:
            assert d[cw, cw] == 1 and d[cw].sum() == 1
        assert plan.total_rows <= n

    def test_identity_rows_embedded(self):
        n = 128
        w = 18
        y = F2Matrix.from_dense(np.eye(n, w, dtype=np.uint8))
        c = gen_ycol(y, list(range(w)), list(range(n, 2 * n)),
                     list(range(2 * n, 4 * n)), n)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, range(n, 2 * n), range(w)), y.to_dense())

    def test_schedule_cap_respected(self):
        # no more paste layers than 2*ceil(log2 n), per the copy reuse cap
        n = 256
        rng = np.random.default_rng(0)
        y = F2Matrix.from_dense(rng.integers(0, 2, (n, 32)))
        c, plan = gen_ycol_with_plan(y, list(range(32)), list(range(n, 2 * n)),
                                     list(range(2 * n, 4 * n)), n, seed=3)
        for g, val, mult, copies, rows in plan.entries:
            assert copies >= -(-mult // copy_cap(n))
            assert len(rows) == copies


class TestGenScols:
    def test_s1_degenerates_to_ycol(self):
        n = 64
        lay = AncillaLayout.create(n, 1)
        rng = np.random.default_rng(1)
        y = F2Matrix.from_dense(rng.integers(0, 2, (n, 8)))
        c = gen_scols(y, lay, seed=0)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, lay.mirror_region, range(8)), y.to_dense())

    @pytest.mark.parametrize("s", [2, 4])
    def test_parallel_stacks_block_exact(self, s):
        n = 256
        lay = AncillaLayout.create(n, s)
        k = 3  # _pick_k(256) = 3 slices of the column budget
        width = min(n, s * 2 * k * k)
        rng = np.random.default_rng(s)
        y = F2Matrix.from_dense(rng.integers(0, 2, (n, width)))
        c = gen_scols(y, lay, seed=s)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, lay.mirror_region, range(width)), y.to_dense())
        d = sim.to_dense()
        for wv in lay.work_region:
            assert d[wv, wv] == 1 and d[wv].sum() == 1


class TestEmbed:
    def test_identity_block(self):
        n = 64
        lay = AncillaLayout.create(n, 1)
        c = embed_m(F2Matrix.identity(n), lay)
        sim = simulate_to_matrix(c)
        assert np.array_equal(block(sim, lay.mirror_region, lay.data_region),
                              np.eye(n, dtype=np.uint8))

    def test_mirror_holds_mx_under_vector_sim(self):
        n = 256
        lay = AncillaLayout.create(n, 1)
        m = random_gl(n, 3)
        c = embed_m(m, lay)
        rng = np.random.default_rng(0)
        md = m.to_dense().astype(int)
        for _ in range(100):
            x = rng.integers(0, 2, n, dtype=np.uint8)
            v = np.zeros(c.wires, dtype=np.uint8)
            v[:n] = x
            out = apply_to_bits(c, v)
            assert np.array_equal(out[:n], x)
            assert np.array_equal(out[n : 2 * n], (md @ x) % 2)
            assert not out[2 * n :].any()

    def test_depth_non_increasing_in_s(self):
        m = random_gl(256, 9)
        depths = []
        for s in (1, 2):
            lay = AncillaLayout.create(256, s)
            depths.append(embed_m(m, lay, seed=1).depth)
        assert depths[1] <= depths[0]


class TestSynthWithAncillae:
    def test_identity(self):
        c = synth_with_ancillae(F2Matrix.identity(16), 1)
        assert verify_implements(c, F2Matrix.identity(16)).ok

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 16, 64])
    def test_tiny_and_small_sizes(self, n):
        for s in (1, 2):
            m = random_gl(n, n + s)
            c = synth_with_ancillae(m, s)
            rep = verify_implements(c, m)
            assert rep.ok, (n, s)
            s_eff = min(s, max_scale(n))
            assert c.ancillae == (3 * s_eff + 1) * n

    def test_block_contract_and_scaling(self):
        n = 256
        m = random_gl(n, 17)
        prev = None
        for s in (1, 2, 4):
            c = synth_with_ancillae(m, s)
            rep = verify_implements(c, m)
            assert rep.ok and c.ancillae == (3 * s + 1) * n
            if prev is not None:
                assert c.depth <= prev
            prev = c.depth

    def test_ancilla_restoration_vector_sim(self):
        n = 64
        m = random_gl(n, 2)
        c = synth_with_ancillae(m, 2)
        md = m.to_dense().astype(int)
        rng = np.random.default_rng(5)
        for _ in range(100):
            x = rng.integers(0, 2, n, dtype=np.uint8)
            v = np.zeros(c.wires, dtype=np.uint8)
            v[:n] = x
            out = apply_to_bits(c, v)
            assert np.array_equal(out[:n], (md @ x) % 2)
            assert not out[n:].any()

    def test_fragments_restore_inverse_composition(self):
        # the M and M^-1 embeddings cancel on the data block
        n = 64
        m = random_gl(n, 8)
        lay = AncillaLayout.create(n, 1)
        forward = embed_m(m, lay)
        sim_f = simulate_to_matrix(forward)
        c_full = synth_with_ancillae(m, 1)
        sim = simulate_to_matrix(c_full)
        # top-left block of the full circuit is m, bottom-left zero
        assert np.array_equal(block(sim, range(n), range(n)), m.to_dense())
        assert not block(sim, range(n, c_full.wires), range(n)).any()
        assert np.array_equal(block(sim_f, lay.mirror_region, range(n)), m.to_dense())
