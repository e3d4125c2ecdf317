import itertools

import numpy as np
import pytest

from cnotsynth import (
    F2Matrix,
    SingularMatrix,
    TooLarge,
    bfs_optimal_depth,
    counting_depth_bound,
    fanin_depth_bound,
    gl_count,
    layer_count,
    prefix_circuit,
    random_gl,
    rank,
    synth_simple,
)
from conftest import all_ones_lower


class TestGlCount:
    def test_small_values(self):
        assert [gl_count(n) for n in (1, 2, 3)] == [1, 6, 168]

    def test_product_formula_vs_enumeration(self):
        for n in (1, 2, 3):
            cnt = 0
            for bits in itertools.product((0, 1), repeat=n * n):
                m = F2Matrix.from_dense(np.asarray(bits, dtype=np.uint8).reshape(n, n))
                cnt += rank(m) == n
            assert cnt == gl_count(n)

    def test_lower_bound_inequality(self):
        # gl_count(n) >= 2^((n-1)^2 / 2), squared to stay in exact integers
        for n in range(1, 65):
            assert gl_count(n) ** 2 >= 2 ** ((n - 1) ** 2)


class TestLayerCount:
    def test_small_wires(self):
        assert layer_count(1) == 1
        assert layer_count(2) == 3  # identity, 0->1, 1->0

    @pytest.mark.parametrize("wires", [1, 2, 3, 4])
    def test_matches_exhaustive_enumeration(self, wires):
        from cnotsynth.bounds import _all_layers

        assert layer_count(wires) == len(_all_layers(wires)) + 1


class TestCountingBound:
    def test_n1_zero(self):
        assert counting_depth_bound(1, 0) == 0

    def test_monotone_in_ancillae(self):
        for n in (3, 8, 16):
            vals = [counting_depth_bound(n, m) for m in (0, n, 4 * n)]
            assert vals == sorted(vals, reverse=True)

    def test_n64_scale(self):
        d = counting_depth_bound(64, 0)
        assert 5 <= d <= 64  # grows like n / log n


class TestFaninBound:
    def test_identity_zero(self):
        assert fanin_depth_bound(F2Matrix.identity(5)) == 0

    def test_all_ones_lower_triangular(self):
        m = all_ones_lower(8)
        assert fanin_depth_bound(m) == 3
        assert prefix_circuit(8).depth >= 3

    def test_every_synthesised_circuit_obeys_it(self):
        for seed in range(10):
            m = random_gl(24, seed)
            assert synth_simple(m).depth >= fanin_depth_bound(m)


class TestBfsOracle:
    def test_identity(self):
        assert bfs_optimal_depth(F2Matrix.identity(3)) == 0

    def test_single_gate(self):
        assert bfs_optimal_depth(F2Matrix.from_dense([[1, 0], [1, 1]])) == 1

    def test_all_ones_lower_3(self):
        d = bfs_optimal_depth(all_ones_lower(3))
        assert d == 2
        assert synth_simple(all_ones_lower(3)).depth >= d

    def test_too_large(self):
        with pytest.raises(TooLarge):
            bfs_optimal_depth(F2Matrix.identity(5))

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            bfs_optimal_depth(F2Matrix.zeros(3, 3))

    def test_sandwich_on_gl3(self, gl3_members):
        for m in gl3_members[:40]:
            lo = fanin_depth_bound(m)
            mid = bfs_optimal_depth(m)
            hi = synth_simple(m).depth
            assert lo <= mid <= hi
