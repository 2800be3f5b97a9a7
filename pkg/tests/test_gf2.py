import numpy as np
import pytest

from lindht import gf2
from lindht.errors import BudgetExceededError, DomainError, ZeroMatrixError


def row_space(words):
    """All XOR combinations of the given rows (brute-force oracle)."""
    space = {0}
    for w in words:
        space |= {s ^ w for s in space}
    return space


class TestRank:
    def test_identity(self):
        assert gf2.rank(gf2.identity(3)) == 3

    def test_zero_matrix(self):
        assert gf2.rank(gf2.Gf2Matrix.from_rows([[0, 0, 0, 0]] * 2)) == 0

    def test_duplicate_rows(self):
        assert gf2.rank(gf2.Gf2Matrix.from_rows([[1, 1], [1, 1]])) == 1

    def test_matches_numpy_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            k = rng.integers(1, 7)
            n = rng.integers(1, 9)
            arr = rng.integers(0, 2, size=(k, n))
            m = gf2.Gf2Matrix.from_rows(arr.tolist())
            # oracle: size of the row space is 2^rank
            assert 1 << gf2.rank(m) == len(row_space(m.row_words))


class TestCanonicalize:
    def test_already_systematic(self):
        m = gf2.Gf2Matrix.from_string("101;011")
        code = gf2.canonicalize(m)
        assert code.k == 2
        assert code.col_perm == (0, 1, 2)
        assert code.a_part.row_words == (1, 1)

    def test_row_space_preserved(self):
        m = gf2.Gf2Matrix.from_string("110;111")
        code = gf2.canonicalize(m)
        assert code.k == 2
        rebuilt = code.generator_original_order()
        assert row_space(rebuilt.row_words) == row_space(m.row_words)
        assert row_space(m.row_words) == {0b000, 0b011, 0b100, 0b111}

    def test_rank_one_collapse(self):
        code = gf2.canonicalize(gf2.Gf2Matrix.from_rows([[1, 1], [1, 1]]))
        assert code.k == 1
        assert code.a_part.row_words == (1,)

    def test_zero_matrix_raises(self):
        with pytest.raises(ZeroMatrixError):
            gf2.canonicalize(gf2.Gf2Matrix.from_rows([[0, 0], [0, 0]]))

    def test_idempotent_on_own_output(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            arr = rng.integers(0, 2, size=(rng.integers(1, 5), rng.integers(2, 8)))
            m = gf2.Gf2Matrix.from_rows(arr.tolist())
            if gf2.rank(m) == 0:
                continue
            code = gf2.canonicalize(m)
            again = gf2.canonicalize(code.generator())
            assert again.k == code.k
            assert again.col_perm == tuple(range(code.n))
            assert again.a_part.row_words == code.a_part.row_words

    def test_rank_of_reconstruction(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            arr = rng.integers(0, 2, size=(rng.integers(1, 5), rng.integers(2, 8)))
            m = gf2.Gf2Matrix.from_rows(arr.tolist())
            if gf2.rank(m) == 0:
                continue
            code = gf2.canonicalize(m)
            assert gf2.rank(code.generator()) == code.k
            assert gf2.rank(code.generator_original_order()) == gf2.rank(m)


class TestSplitEvenOdd:
    def test_mixed(self):
        split = gf2.split_even_odd(gf2.Gf2Matrix.from_rows([[1, 1], [1, 0]]))
        assert split.k_even == 1 and split.k_odd == 1
        assert split.even.row_words == (0b11,)
        assert split.odd.row_words == (0b01,)
        assert split.even_indices == (0,) and split.odd_indices == (1,)

    def test_zero_rows_are_even(self):
        split = gf2.split_even_odd(gf2.Gf2Matrix.from_rows([[0, 0, 0], [0, 0, 0]]))
        assert split.k_even == 2 and split.k_odd == 0

    def test_all_odd(self):
        split = gf2.split_even_odd(gf2.Gf2Matrix.from_rows([[1], [1]]))
        assert split.k_even == 0 and split.k_odd == 2

    def test_order_preserved(self):
        split = gf2.split_even_odd(
            gf2.Gf2Matrix.from_rows([[1, 0], [1, 1], [0, 1], [0, 0]])
        )
        assert split.even_indices == (1, 3)
        assert split.odd_indices == (0, 2)


class TestEnumerateCodes:
    @pytest.mark.parametrize("k,n,count", [(1, 2, 2), (2, 3, 4), (3, 5, 64)])
    def test_counts_without_dedupe(self, k, n, count):
        assert len(gf2.enumerate_codes(k, n)) == count

    def test_dedupe_classes_2_3(self):
        # A in {0,1}^{2x1}: classes {00}, {01,10}, {11}
        codes = gf2.enumerate_codes(2, 3, dedupe=True)
        assert sorted(c.a_part.row_words for c in codes) == [(0, 0), (0, 1), (1, 1)]

    def test_dedupe_keeps_class_minimum(self):
        full = {c.a_part.row_words for c in gf2.enumerate_codes(3, 5)}
        deduped = gf2.enumerate_codes(3, 5, dedupe=True)
        for code in deduped:
            rows = code.a_part.row_words
            assert rows == gf2._class_key(rows, 2)
            assert rows in full

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            gf2.enumerate_codes(3, 5, max_codes=63)

    def test_k_equals_n(self):
        codes = gf2.enumerate_codes(2, 2)
        assert len(codes) == 1
        assert codes[0].a_part.cols == 0


class TestSyndromeMap:
    def test_xor_row(self):
        smap = gf2.syndrome_map(gf2.Gf2Matrix.from_string("11"))
        assert smap[0b11] == 0
        assert smap[0b01] == 1

    def test_identity_is_identity(self):
        smap = gf2.syndrome_map(gf2.identity(2))
        assert np.array_equal(smap, np.arange(4))

    def test_direct_example(self):
        smap = gf2.syndrome_map(gf2.Gf2Matrix.from_string("101;011"))
        assert smap[0b111] == 0

    @pytest.mark.parametrize("n", [4, 8, 12])
    def test_linearity_exhaustive(self, n):
        rng = np.random.default_rng(n)
        m = gf2.Gf2Matrix.from_rows(rng.integers(0, 2, size=(3, n)).tolist())
        smap = gf2.syndrome_map(m)
        # linear iff every word's image is the XOR of its unit-vector images
        units = np.array([smap[1 << j] for j in range(n)], dtype=np.uint32)
        expected = np.zeros(1 << n, dtype=np.uint32)
        for j in range(n):
            block = 1 << j
            idx = (np.arange(1 << n) >> j) & 1
            expected ^= np.where(idx == 1, units[j], 0).astype(np.uint32)
        assert np.array_equal(smap, expected)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            gf2.syndrome_map(gf2.identity(8), max_words=255)


class TestGf2Matrix:
    def test_width_cap(self):
        with pytest.raises(DomainError):
            gf2.Gf2Matrix((0,), 25)

    def test_entry_validation(self):
        with pytest.raises(DomainError):
            gf2.Gf2Matrix.from_rows([[2, 0]])

    def test_string_roundtrip(self):
        m = gf2.Gf2Matrix.from_string("101;011")
        assert str(m) == "101;011"
        assert np.array_equal(m.to_array(), [[1, 0, 1], [0, 1, 1]])
