"""Hall bases, brackets, and conversions between words, series, and
Lie elements."""

import pytest
from hypothesis import given, settings, strategies as st

from freenil.words import Signature, Word
from freenil.magnus import equal_mod, expand, leading_part
from freenil.lie import (
    LieVector,
    NotLie,
    bracket,
    hall_basis,
    lie_to_series,
    lie_to_word,
    series_to_lie,
    tree_str,
    witt_rank,
    word_normal_form,
)

S03 = Signature(0, 3)
S12 = Signature(1, 2)

# Witt numbers for small ranks, from the necklace-counting formula
WITT = {
    (1, 1): 1, (1, 2): 0, (1, 3): 0,
    (2, 1): 2, (2, 2): 1, (2, 3): 2, (2, 4): 3, (2, 5): 6, (2, 6): 9,
    (3, 1): 3, (3, 2): 3, (3, 3): 8, (3, 4): 18, (3, 5): 48,
    (4, 1): 4, (4, 2): 6, (4, 3): 20, (4, 4): 60, (4, 5): 204,
}


def vectors(sig, k):
    n = witt_rank(sig.rank, k)
    return st.lists(
        st.integers(-3, 3), min_size=n, max_size=n
    ).map(lambda cs: LieVector(sig, k, tuple(cs)))


class TestHallBasis:
    @pytest.mark.parametrize("r,k", sorted(WITT))
    def test_witt_table(self, r, k):
        assert witt_rank(r, k) == WITT[(r, k)]

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_basis_size_matches_witt(self, r, k):
        sig = Signature(0, r + 1)
        assert len(hall_basis(sig, k)) == witt_rank(r, k)

    def test_degree_two_is_ordered_pairs(self):
        basis = hall_basis(Signature(0, 4), 2)
        assert basis == [(0, 1), (0, 2), (1, 2)]

    def test_tree_str(self):
        assert [tree_str(S03, t) for t in hall_basis(S03, 3)] == [
            "[x1,[x1,x2]]",
            "[x2,[x1,x2]]",
        ]


class TestBracket:
    @settings(max_examples=25, deadline=None)
    @given(vectors(S12, 1), vectors(S12, 1))
    def test_antisymmetry(self, a, b):
        assert bracket(a, b).coords == (-bracket(b, a)).coords

    @settings(max_examples=15, deadline=None)
    @given(vectors(S03, 1), vectors(S03, 1), vectors(S03, 2))
    def test_jacobi(self, a, b, c):
        lhs = bracket(a, bracket(b, c)) - bracket(b, bracket(a, c))
        rhs = bracket(bracket(a, b), c)
        assert lhs.coords == rhs.coords

    @settings(max_examples=25, deadline=None)
    @given(vectors(S12, 1), vectors(S12, 2))
    def test_bilinearity(self, a, b):
        assert bracket(a.scale(3), b).coords == bracket(a, b).scale(3).coords


class TestConversions:
    @settings(max_examples=25, deadline=None)
    @given(vectors(S12, 2))
    def test_series_round_trip(self, v):
        assert series_to_lie(S12, lie_to_series(v), 2).coords == v.coords

    @settings(max_examples=15, deadline=None)
    @given(vectors(S03, 3))
    def test_series_round_trip_deg3(self, v):
        assert series_to_lie(S03, lie_to_series(v), 3).coords == v.coords

    def test_not_lie_rejected(self):
        from freenil.magnus import TruncatedSeries

        # X1X2 alone is not the expansion of any Lie element
        s = TruncatedSeries(S03, 2, {(0, 1): 1})
        with pytest.raises(NotLie):
            series_to_lie(S03, s, 2)

    @settings(max_examples=20, deadline=None)
    @given(vectors(S12, 2))
    def test_lie_to_word_leading(self, v):
        w = lie_to_word(v)
        if v.is_zero():
            assert not w
        else:
            got = series_to_lie(S12, leading_part(w, 2), 2)
            assert got.coords == v.coords


class TestNormalForm:
    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(0, 2), st.integers(-2, 2).filter(bool)),
            max_size=7,
        )
    )
    def test_represents_same_class(self, pairs):
        w = Word.from_pairs(S12, pairs)
        for level in (2, 3, 4):
            u = word_normal_form(w, level)
            assert equal_mod(u, w, level)
            # canonical: normal form of the normal form is itself
            assert word_normal_form(u, level) == u

    def test_equal_words_get_equal_forms(self):
        a, b = Word.gen(S12, 0), Word.gen(S12, 1)
        w1 = a * b
        w2 = b * a * (a.inverse() * b.inverse() * a * b)
        assert word_normal_form(w1, 4) == word_normal_form(w2, 4)

    def test_level_below_two(self):
        assert not word_normal_form(Word.gen(S12, 0), 1)
