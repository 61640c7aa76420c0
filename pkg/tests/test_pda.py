import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhsdp import (
    Nhsdp,
    Pda,
    STAR,
    binomial,
    conjugate_pda,
    construct_nhsdp,
    drop_columns,
    group_pda_divisible,
    mn_pda,
    pda_from_nhsdp,
    pda_stats,
    verify_pda,
)
from conftest import naive_verify_pda


def make_pda(rows, Z=None, S=None):
    grid = np.array(rows, dtype=np.int64)
    if Z is None or S is None:
        return Pda.from_grid(grid)
    return Pda(grid, Z=Z, S=S)


class TestVerify:
    def test_worked_4x4(self, ex4_pda):
        verdict = verify_pda(ex4_pda)
        assert verdict.ok
        assert pda_stats(ex4_pda).regular_g == 2
        assert naive_verify_pda(ex4_pda)

    def test_star_to_symbol_mutation(self, ex4_pda):
        grid = np.array(ex4_pda.grid)
        grid[0, 0] = 1  # symbol 1 now repeats in row 0
        verdict = verify_pda(make_pda(grid, Z=2, S=4))
        assert not verdict.ok and verdict.code in ("C3a", "C3b")
        assert not naive_verify_pda(make_pda(grid, Z=2, S=4))

    def test_cross_cell_mutation_reports_c3b(self, ex4_pda):
        grid = np.array(ex4_pda.grid)
        grid[1, 1] = 3  # breaks the cross star of symbol 1
        verdict = verify_pda(make_pda(grid, Z=2, S=4))
        assert verdict.code == "C3b"
        assert verdict.info["cells"] == ((0, 1), (1, 0))

    def test_c1_and_c2(self, ex4_pda):
        short = np.array(ex4_pda.grid)
        short[0, 1] = STAR  # column 1 gains a star
        assert verify_pda(make_pda(short, Z=2, S=4)).code == "C1"
        assert verify_pda(Pda(ex4_pda.grid, Z=2, S=5)).code == "C2"

    def test_all_star_degenerate(self):
        arr = make_pda(np.zeros((3, 5), dtype=np.int64), Z=3, S=0)
        assert verify_pda(arr).ok
        stats = pda_stats(arr)
        assert stats.memory_ratio == 1 and stats.load == 0 and stats.gain is None

    def test_singleton_symbols_accepted(self):
        arr = make_pda([[1, STAR], [STAR, 2]], Z=1, S=2)
        assert verify_pda(arr).ok

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10**9))
    def test_matches_naive_checker_on_random_grids(self, seed):
        rng = np.random.default_rng(seed)
        F, K, S = int(rng.integers(1, 6)), int(rng.integers(1, 6)), int(rng.integers(1, 5))
        grid = rng.integers(0, S + 1, size=(F, K))
        arr = Pda(grid, Z=int((grid[:, 0] == STAR).sum()), S=S)
        assert verify_pda(arr).ok == naive_verify_pda(arr)


class TestLift:
    def test_worked_example_cells(self, ex15_packing):
        arr = pda_from_nhsdp(ex15_packing)
        assert arr.params() == (15, 15, 7, 30)
        assert verify_pda(arr).ok
        sym_1_1 = 0 * 15 + 1 + 1  # pair (c=1, block 1)
        assert arr.grid[1, 0] == sym_1_1 and arr.grid[0, 1] == sym_1_1
        assert arr.grid[0, 0] == STAR and arr.grid[1, 1] == STAR
        assert pda_stats(arr).regular_g == 4

    def test_star_positions_are_shift_classes(self, ex15_packing):
        arr = pda_from_nhsdp(ex15_packing)
        outside = set(range(15)) - ex15_packing.element_set()
        expected = {(i, (i + h) % 15) for i in range(15) for h in outside}
        stars = {
            (j, k) for j in range(15) for k in range(15) if arr.grid[j, k] == STAR
        }
        assert stars == expected

    def test_tiny_lift(self):
        arr = pda_from_nhsdp(construct_nhsdp(3, (1,)))
        assert arr.params() == (3, 3, 1, 3)
        assert pda_stats(arr).regular_g == 2
        assert naive_verify_pda(arr)

    def test_rejects_invalid_packing(self):
        with pytest.raises(ValueError):
            pda_from_nhsdp(Nhsdp.from_blocks(15, [(1, 2, 3)]))

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.integers(min_value=1, max_value=2), min_size=1, max_size=3),
        st.integers(min_value=0, max_value=10),
    )
    def test_lift_parameters_property(self, m, offset):
        import math

        from nhsdp import block_params

        v = block_params(m).min_modulus + 2 * offset
        packing = construct_nhsdp(v, m)
        arr = pda_from_nhsdp(packing)
        b, g = math.prod(m), 2 ** len(m)
        assert arr.params() == (v, v, v - b * g, b * v)
        assert verify_pda(arr).ok
        assert pda_stats(arr).regular_g == g


class TestConjugate:
    def test_worked_4x4(self, ex4_pda):
        conj = conjugate_pda(ex4_pda)
        assert conj.params() == (4, 4, 2, 4)
        assert verify_pda(conj).ok

    def test_conjugate_of_lifted_array(self, ex15_packing):
        arr = pda_from_nhsdp(ex15_packing)
        conj = conjugate_pda(arr)
        assert conj.params() == (15, 30, 22, 15)
        assert verify_pda(conj).ok

    def test_parameter_identity_and_duality(self, ex15_packing):
        for arr in (pda_from_nhsdp(ex15_packing), mn_pda(5, 2), mn_pda(4, 2)):
            K, F, Z, S = arr.params()
            conj = conjugate_pda(arr)
            assert conj.params() == (K, S, S - (F - Z), F)
            stats = pda_stats(conj)
            assert stats.memory_ratio == 1 - Fraction(F - Z, S)
            assert stats.load == Fraction(F, S)

    def test_rejects_all_star_row(self):
        arr = make_pda([[STAR, STAR], [1, 2]], Z=1, S=2)
        assert verify_pda(arr).ok
        with pytest.raises(ValueError, match="all stars"):
            conjugate_pda(arr)

    def test_rejects_degenerate_z(self):
        arr = make_pda([[1, 2]], Z=0, S=2)
        with pytest.raises(ValueError, match="0 < Z < F"):
            conjugate_pda(arr)


class TestGrouping:
    def test_doubling_smallest(self):
        base = make_pda([[STAR, 1], [1, STAR]], Z=1, S=1)
        grouped = group_pda_divisible(base, 4)
        assert grouped.params() == (4, 2, 1, 2)
        assert verify_pda(grouped).ok and naive_verify_pda(grouped)

    def test_identity(self, ex4_pda):
        grouped = group_pda_divisible(ex4_pda, 4)
        assert grouped.same_as(ex4_pda)

    def test_triple(self, ex4_pda):
        grouped = group_pda_divisible(ex4_pda, 12)
        assert grouped.params() == (12, 4, 2, 12)
        assert verify_pda(grouped).ok

    def test_rejects_non_multiple(self, ex4_pda):
        with pytest.raises(ValueError):
            group_pda_divisible(ex4_pda, 6)


class TestMnPda:
    def test_small(self):
        arr = mn_pda(4, 2)
        assert arr.params() == (4, 6, 3, 4)
        assert verify_pda(arr).ok and naive_verify_pda(arr)
        assert pda_stats(arr).regular_g == 3

    def test_smallest(self):
        arr = mn_pda(2, 1)
        assert arr.params() == (2, 2, 1, 1)
        assert verify_pda(arr).ok

    def test_subpacketization_at_k10(self):
        arr = mn_pda(10, 5)
        assert arr.F == 252
        assert arr.params() == (10, 252, binomial(9, 4), binomial(10, 6))
        assert verify_pda(arr).ok

    def test_rejects_bad_t(self):
        for K, t in [(4, 0), (4, 4), (4, 5)]:
            with pytest.raises(ValueError):
                mn_pda(K, t)

    def test_stats_follow_counting_identities(self):
        for K, t in [(4, 2), (5, 1), (5, 3), (6, 2)]:
            stats = pda_stats(mn_pda(K, t))
            assert stats.memory_ratio == Fraction(t, K)
            assert stats.load == Fraction(K - t, t + 1)
            assert stats.regular_g == t + 1


class TestDropColumns:
    def test_virtual_user_removal(self, ex15_packing):
        arr = pda_from_nhsdp(ex15_packing)
        # Independent count: symbols surviving in the kept columns.
        survivors = {int(s) for s in arr.grid[:, :14].ravel() if s != STAR}
        dropped = drop_columns(arr, range(14))
        assert dropped.params() == (14, 15, 7, len(survivors))
        assert dropped.S == 30
        assert verify_pda(dropped).ok

    def test_keep_everything(self, ex4_pda):
        assert drop_columns(ex4_pda, range(4)).same_as(ex4_pda)

    def test_single_column(self):
        arr = pda_from_nhsdp(construct_nhsdp(3, (1,)))
        single = drop_columns(arr, {0})
        assert single.params() == (1, 3, 1, 2)
        assert verify_pda(single).ok

    def test_every_subset_of_4x4(self, ex4_pda):
        for r in range(1, 5):
            for keep in itertools.combinations(range(4), r):
                sub = drop_columns(ex4_pda, keep)
                assert verify_pda(sub).ok, keep
                assert naive_verify_pda(sub)

    def test_rejects_empty(self, ex4_pda):
        with pytest.raises(ValueError):
            drop_columns(ex4_pda, ())


class TestStats:
    def test_worked_values(self, ex15_packing, ex4_pda):
        stats = pda_stats(pda_from_nhsdp(ex15_packing))
        assert stats.memory_ratio == Fraction(7, 15)
        assert stats.load == 2
        assert stats.regular_g == 4
        stats4 = pda_stats(ex4_pda)
        assert stats4.memory_ratio == Fraction(1, 2) and stats4.load == 1

    def test_gain_identity(self, ex4_pda, ex15_packing):
        for arr in (ex4_pda, pda_from_nhsdp(ex15_packing), mn_pda(5, 2)):
            stats = pda_stats(arr)
            assert stats.gain * stats.load == arr.K * (1 - stats.memory_ratio)
