"""Graded bracket maps, kernel ranks, and the rank table."""

import json

import pytest

from freenil import zlinalg
from freenil.words import Signature
from freenil.lie import LieVector, witt_rank
from freenil.filtration import (
    GradedTuple,
    ad_matrix,
    dk_basis,
    dk_prime_rank,
    dk_rank,
    h3_rank,
    identify_tensor,
    pk_apply,
    pk_matrix,
    rank_table,
)

S03 = Signature(0, 3)
S04 = Signature(0, 4)
S12 = Signature(1, 2)
S11 = Signature(1, 1)


class TestKernelRanks:
    # rank of Ker p_k must match r*N_k - N_{k+1}
    @pytest.mark.parametrize(
        "g,n,k",
        [(0, 3, 2), (0, 3, 3), (0, 4, 2), (0, 4, 3), (1, 1, 2), (1, 1, 3),
         (1, 2, 2), (1, 2, 3), (2, 1, 2)],
    )
    def test_dk_rank_formula(self, g, n, k):
        sig = Signature(g, n)
        r = sig.rank
        assert dk_rank(sig, k) == r * witt_rank(r, k) - witt_rank(r, k + 1)

    def test_dk_rank_frozen_values(self):
        # independently derivable: r*N_k - N_{k+1}
        assert dk_rank(S03, 2) == 2 * 1 - 2
        assert dk_rank(S04, 2) == 3 * 3 - 8
        assert dk_rank(S12, 3) == 3 * 8 - 18
        assert dk_rank(S11, 2) == 2 * 1 - 2

    def test_basis_lies_in_kernel(self):
        for sig in (S04, S12):
            for t in dk_basis(sig, 2):
                assert pk_apply(t).is_zero()

    def test_basis_is_independent(self):
        basis = dk_basis(S04, 2)
        rows = [t.coords() for t in basis]
        assert zlinalg.rank(rows, len(rows[0])) == len(basis)

    def test_prime_first_quotient(self):
        for n in range(2, 7):
            sig = Signature(0, n)
            assert dk_prime_rank(sig, 1) - (n - 1) == (n - 1) * (n - 2) // 2


class TestTensorStructure:
    def test_identify_tensor_shape(self):
        t = dk_basis(S12, 2)[0]
        m = identify_tensor(t)
        assert len(m) == S12.rank
        assert len(m[0]) == witt_rank(S12.rank, 2)

    def test_pk_matrix_dimensions(self):
        r = S12.rank
        m = pk_matrix(S12, 2)
        assert len(m) == witt_rank(r, 3)
        assert all(len(row) == r * witt_rank(r, 2) for row in m)

    def test_graded_tuple_coords_round_trip(self):
        t = dk_basis(S12, 2)[0]
        again = GradedTuple.from_coords(S12, 2, t.coords())
        assert again.coords() == t.coords()


class TestAdMatrix:
    def test_injective_above_degree_one(self):
        for k in (2, 3):
            m = ad_matrix(S03, S03.x(1), k)
            assert zlinalg.rank(m, witt_rank(2, k)) == witt_rank(2, k)

    def test_degree_one_kernel_is_the_generator(self):
        m = ad_matrix(S03, S03.x(1), 1)
        ker = zlinalg.kernel_basis(m, 2)
        assert len(ker) == 1
        assert [abs(c) for c in ker[0]] == [1, 0]


class TestH3Rank:
    @pytest.mark.parametrize("g,n,k", [(0, 3, 2), (0, 3, 3), (1, 1, 2), (0, 4, 2)])
    def test_telescoping_identity(self, g, n, k):
        sig = Signature(g, n)
        tail = sum(dk_rank(sig, i) for i in range(k + 1, 2 * k - 1))
        assert dk_rank(sig, k) == h3_rank(sig, k) - tail

    def test_h3_frozen_value(self):
        # r=3, k=3: sum over i=3,4 of (3*N_i - N_{i+1})
        assert h3_rank(S04, 3) == (3 * 8 - 18) + (3 * 18 - 48)


class TestRankTable:
    def test_tsv_frozen(self):
        got = rank_table(S04, 3).to_tsv()
        want = (
            "k\twitt\tdkH\tdkHprime\th3\tq_milnor\tq_johnson0\tq_mid_a\tq_mid_k\n"
            "1\t3\t6\t6\t\t\t3\t\t\n"
            "2\t3\t1\t1\t1\t1\t1\t0\t3\n"
            "3\t8\t6\t6\t12\t6\t6\t0\t1\n"
        )
        assert got == want

    def test_json_nulls_at_k1(self):
        data = json.loads(rank_table(S04, 2).to_json())
        assert data["g"] == 0 and data["n"] == 4
        row1 = data["rows"][0]
        assert row1["k"] == 1
        assert row1["h3"] is None
        assert row1["q_johnson0"] == 3

    def test_no_strands_degenerate(self):
        # n=2 has a single strand: primed kernels vanish beyond degree 1
        table = rank_table(Signature(0, 2), 5)
        for row in table.rows:
            if row["k"] >= 2:
                assert row["dkHprime"] == 0
        assert table.rows[0]["q_johnson0"] == 0

    def test_kmax_guard(self):
        with pytest.raises(ValueError):
            rank_table(S04, 1)
