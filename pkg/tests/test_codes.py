from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exitweight import gf2
from exitweight.codes import (
    BinaryCode,
    corank,
    dual,
    dump_gm,
    from_matrix,
    load_gm,
    mask_of,
    min_distance,
    random_code,
    rank_of_subset,
    repetition_code,
    rm_code,
    rm_dimension,
    rm_min_distance,
    same_codewords,
)
from exitweight.errors import DimensionTooLargeError, FormatError, ParameterRangeError
from oracles import codeword_set, column_rank, gf2_rank_dense


def test_rm_trivial_cases():
    c = rm_code(0, 3)
    assert (c.n, c.k) == (8, 1)
    assert c.rows == (0xFF,)
    full = rm_code(3, 3)
    assert (full.n, full.k) == (8, 8)
    assert len(codeword_set(full.matrix())) == 256


def test_rm13_distance_by_enumeration(rm13):
    words = codeword_set(rm13.matrix())
    assert len(words) == 16
    assert min(sum(w) for w in words if any(w)) == 4
    assert min_distance(rm13) == 4


@pytest.mark.parametrize("r,m", [(0, 1), (1, 2), (1, 4), (2, 4), (2, 5), (3, 7), (4, 8)])
def test_rm_dimension_and_rank(r, m):
    c = rm_code(r, m)
    assert c.n == 2**m
    assert c.k == rm_dimension(r, m)
    assert gf2_rank_dense(c.matrix()) == c.k


def test_rm_layout_is_degree_then_lex():
    c = rm_code(2, 3)
    # rows: 1, x0, x1, x2, x0x1, x0x2, x1x2 over points in binary-counter order
    m = c.matrix()
    pts = np.arange(8)
    x = [(pts >> j) & 1 for j in range(3)]
    expected = [np.ones(8, int), x[0], x[1], x[2], x[0] & x[1], x[0] & x[2], x[1] & x[2]]
    assert np.array_equal(m, np.array(expected, dtype=np.uint8))


@pytest.mark.parametrize("r,m", [(4, 3), (-1, 3), (1, 0), (1, 21)])
def test_rm_rejects_bad_parameters(r, m):
    with pytest.raises(ParameterRangeError):
        rm_code(r, m)


def test_generator_must_be_full_rank():
    with pytest.raises(ParameterRangeError):
        BinaryCode(n=4, rows=(0b0011, 0b0011))


def test_dual_rm13_is_self_dual(rm13):
    d = dual(rm13)
    assert d.k == 4
    assert not (rm13.matrix().astype(int) @ d.matrix().T.astype(int) % 2).any()
    assert codeword_set(d.matrix()) == codeword_set(rm13.matrix())


def test_dual_of_repetition_is_even_weight():
    d = dual(repetition_code(6))
    assert d.k == 5
    words = codeword_set(d.matrix())
    assert len(words) == 32 and all(sum(w) % 2 == 0 for w in words)


def test_dual_rm14_is_rm24():
    d = dual(rm_code(1, 4))
    assert d.k == 11
    assert codeword_set(d.matrix()) == codeword_set(rm_code(2, 4).matrix())
    assert d.family == ("RM", 2, 4)


def test_dual_of_full_space_is_degenerate():
    d = dual(rm_code(3, 3))
    assert d.degenerate and d.k == 0
    back = dual(d)
    assert back.k == 8


codes = st.tuples(st.integers(2, 12), st.integers(0, 2**31)).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.integers(1, t[0]), st.just(t[1]))
).map(lambda t: random_code(*t))


@settings(max_examples=60, deadline=None)
@given(codes)
def test_dual_properties(code):
    d = dual(code)
    assert d.k == code.n - code.k
    for r in code.rows:
        for h in d.rows:
            assert (r & h).bit_count() % 2 == 0
    dd = dual(d)
    assert codeword_set(dd.matrix()) == codeword_set(code.matrix())


def test_rank_examples(rm13):
    assert rank_of_subset(rm13, 0) == 0
    assert rank_of_subset(rm13, rm13.full_mask) == 4
    for pts in [(0, 1, 2), (3, 5, 6), (1, 4, 7)]:
        m = mask_of(pts, 8)
        assert rank_of_subset(rm13, m) == column_rank(rm13.matrix(), pts) == 3


def test_corank_examples(rm13):
    assert corank(rm13, 0) == 0
    assert corank(rm13, rm13.full_mask) == 4
    # support of the weight-4 codeword x0: an affine plane, columns dependent
    x0 = rm13.rows[1]
    support = [j for j in range(8) if (x0 >> j) & 1]
    assert corank(rm13, x0) == 4 - column_rank(rm13.matrix(), support) == 1
    for word in codeword_set(rm13.matrix()):
        if any(word):
            assert corank(rm13, gf2.from_bits(word)) >= 1


def test_rank_rejects_out_of_range_mask(rm13):
    with pytest.raises(ParameterRangeError):
        rank_of_subset(rm13, 1 << 8)
    with pytest.raises(ParameterRangeError):
        mask_of([8], 8)


def test_rank_matches_dense_oracle_exhaustively(small_codes):
    for code in small_codes:
        G = code.matrix()
        for mask in range(1 << code.n):
            subset = [j for j in range(code.n) if (mask >> j) & 1]
            assert rank_of_subset(code, mask) == column_rank(G, subset)


def test_rank_monotone_submodular_and_unit_increase(small_codes):
    for code in small_codes:
        n = code.n
        r = [rank_of_subset(code, m) for m in range(1 << n)]
        f = [bin(m).count("1") - r[m] for m in range(1 << n)]
        for m in range(1 << n):
            assert 0 <= r[m] <= min(bin(m).count("1"), code.k)
            for i in range(n):
                if not (m >> i) & 1:
                    assert r[m | 1 << i] - r[m] in (0, 1)
                    assert f[m | 1 << i] - f[m] in (0, 1)
        # submodularity on a deterministic sample of pairs
        rng = np.random.default_rng(0)
        for a, b in rng.integers(0, 1 << n, size=(2000, 2)):
            a, b = int(a), int(b)
            assert r[a | b] + r[a & b] <= r[a] + r[b]


def test_min_distance_examples():
    assert min_distance(repetition_code(7)) == 7
    assert min_distance(rm_code(2, 5)) == 8


def test_min_distance_cutoff():
    with pytest.raises(DimensionTooLargeError):
        min_distance(rm_code(3, 7))
    assert rm_min_distance(3, 7) == 16


def test_gm_roundtrip(tmp_path, rm13):
    path = tmp_path / "rm13.gm"
    dump_gm(rm13, path)
    loaded = load_gm(path)
    assert loaded.rows == rm13.rows and loaded.n == 8


@pytest.mark.parametrize(
    "text",
    [
        "4 2\n1100\n1100\n",  # rank deficient
        "4 2\n1100\n",  # missing row
        "4 1\n11001\n",  # wrong length
        "4 1\n11a0\n",  # bad character
        "four two\n",
        "",
    ],
)
def test_gm_rejects_malformed(tmp_path, text):
    path = tmp_path / "bad.gm"
    path.write_text(text)
    with pytest.raises(FormatError):
        load_gm(path)


def test_from_matrix_and_same_codewords(rm13):
    m = rm13.matrix()
    shuffled = from_matrix(m[[3, 0, 2, 1]] ^ m[[0, 0, 0, 0]] * 0)
    assert same_codewords(shuffled, rm13)
    assert not same_codewords(rm_code(0, 3), rm13)


def test_codewords_enumeration_combinations():
    c = rm_code(1, 3)
    words = c.codewords()
    assert len(set(words)) == 16
    for a, b in combinations(words[:6], 2):
        assert c.contains(a ^ b)
