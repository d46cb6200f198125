import itertools
import math

import pytest

from starwick import (
    AdjacencyMatrix,
    TwoRowSSYT,
    admissible_witness,
    enumerate_adjacency_by_degree,
    enumerate_adjacency_by_rowsums,
    is_admissible,
    matching_to_involution,
    multinomial,
    ssyt_two_row,
)


def positive_sequences(max_total, max_len):
    for d in range(1, max_len + 1):
        for total in range(d, max_total + 1):
            for cuts in itertools.combinations(range(1, total), d - 1):
                bounds = (0,) + cuts + (total,)
                yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


class TestAdjacencyMatrix:
    def test_validation(self):
        with pytest.raises(ValueError):
            AdjacencyMatrix.from_rows([[1, 0], [0, 0]])  # nonzero diagonal
        with pytest.raises(ValueError):
            AdjacencyMatrix.from_rows([[0, 1], [2, 0]])  # asymmetric
        with pytest.raises(ValueError):
            AdjacencyMatrix.from_rows([[0, -1], [-1, 0]])

    def test_degree_and_row_sums(self):
        m = AdjacencyMatrix.from_rows([[0, 2, 1], [2, 0, 0], [1, 0, 0]])
        assert m.degree() == 6
        assert m.row_sums() == (3, 2, 1)
        assert list(m.upper_items()) == [(1, 2, 2), (1, 3, 1)]
        assert m.upper_values() == [2, 1, 0]


class TestMultinomial:
    def test_examples(self):
        assert multinomial(2, [1, 1]) == 2
        assert multinomial(3, [3]) == 1
        assert multinomial(4, [2, 1, 1]) == 12

    def test_rejects_bad_parts(self):
        with pytest.raises(ValueError):
            multinomial(3, [1, 1])
        with pytest.raises(ValueError):
            multinomial(2, [3, -1])


class TestEnumerateByDegree:
    def test_two_vertices_single_slot(self):
        for k in range(4):
            mats = enumerate_adjacency_by_degree(2, 2 * k)
            assert len(mats) == 1
            assert mats[0].rows[0][1] == k

    def test_three_vertices_degree_two(self):
        mats = enumerate_adjacency_by_degree(3, 2)
        assert len(mats) == 3
        # ascending row-major lexicographic order on the upper triangle
        assert [m.upper_values() for m in mats] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]

    def test_zero_degree(self):
        assert enumerate_adjacency_by_degree(2, 0) == [AdjacencyMatrix.zero(2)]

    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError):
            enumerate_adjacency_by_degree(3, 3)

    def test_row_caps_filter(self):
        capped = enumerate_adjacency_by_degree(4, 4, row_caps=[1, 1, 1, 1])
        assert len(capped) == 3  # the perfect matchings
        assert all(m.row_sums() == (1, 1, 1, 1) for m in capped)


class TestEnumerateByRowsums:
    def test_examples(self):
        assert len(enumerate_adjacency_by_rowsums((1, 1, 1, 1))) == 3
        assert enumerate_adjacency_by_rowsums((1, 1, 1)) == []
        only = enumerate_adjacency_by_rowsums((2, 2))
        assert len(only) == 1 and only[0].rows[0][1] == 2

    def test_matching_counts_follow_double_factorial(self):
        for m in range(1, 6):
            count = len(enumerate_adjacency_by_rowsums((1,) * (2 * m)))
            expected = math.prod(range(1, 2 * m, 2))
            assert count == expected

    def test_canonical_order(self):
        mats = enumerate_adjacency_by_rowsums((1, 1, 1, 1))
        uppers = [m.upper_values() for m in mats]
        assert uppers == sorted(uppers)


class TestAdmissibility:
    def test_examples(self):
        assert is_admissible((1, 1, 1)) is False
        assert is_admissible((3, 1)) is False
        assert is_admissible((2, 1, 1)) is True

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            is_admissible((2, 0))

    def test_matches_enumeration_exhaustively(self):
        for n in positive_sequences(10, 5):
            closed = is_admissible(n)
            assert closed == bool(enumerate_adjacency_by_rowsums(n)), n


class TestWitness:
    def test_examples(self):
        assert admissible_witness((2, 2)).rows == ((0, 2), (2, 0))
        w = admissible_witness((2, 1, 1))
        assert w.rows == ((0, 1, 1), (1, 0, 0), (1, 0, 0))
        for p in range(1, 5):
            assert admissible_witness((p, p)).rows[0][1] == p

    def test_tight_sequence(self):
        # the reduction must not strand mass on one neighbor
        w = admissible_witness((3, 3, 2))
        assert w.row_sums() == (3, 3, 2)

    def test_witness_in_enumeration_exhaustively(self):
        for n in positive_sequences(10, 5):
            if not is_admissible(n):
                with pytest.raises(ValueError):
                    admissible_witness(n)
                continue
            w = admissible_witness(n)
            assert w in enumerate_adjacency_by_rowsums(n), n

    def test_unsorted_input_keeps_positions(self):
        w = admissible_witness((1, 3, 2, 2))
        assert w.row_sums() == (1, 3, 2, 2)


class TestSSYT:
    def test_examples(self):
        t = ssyt_two_row((2, 1, 1))
        assert (t.row1, t.row2) == ((1, 1), (2, 3))
        t = ssyt_two_row((1, 1))
        assert (t.row1, t.row2) == ((1,), (2,))
        t = ssyt_two_row((2, 2, 1, 1))
        assert (t.row1, t.row2) == ((1, 1, 2), (2, 3, 4))

    def test_rejects_unsorted_or_inadmissible(self):
        with pytest.raises(ValueError):
            ssyt_two_row((1, 2, 1))
        with pytest.raises(ValueError):
            ssyt_two_row((3, 1))

    def test_invariants_hold_up_to_total_twelve(self):
        for n in positive_sequences(12, 6):
            if tuple(sorted(n, reverse=True)) != n:
                continue
            if not is_admissible(n):
                continue
            tableau = ssyt_two_row(n)  # constructor validates shape
            # column reading encodes a matrix realizing the row sums
            upper = {}
            for a, b in tableau.columns():
                key = (a - 1, b - 1)
                upper[key] = upper.get(key, 0) + 1
            matrix = AdjacencyMatrix.from_upper(len(n), upper)
            assert matrix.row_sums() == n
            assert matrix in enumerate_adjacency_by_rowsums(n)

    def test_direct_construction_validates(self):
        with pytest.raises(ValueError):
            TwoRowSSYT((1, 2), (2, 2))  # column not strict
        with pytest.raises(ValueError):
            TwoRowSSYT((2, 1), (3, 3))  # row not weakly increasing


class TestMatchingInvolution:
    def test_examples(self):
        m = AdjacencyMatrix.from_upper(4, {(0, 1): 1, (2, 3): 1})
        assert matching_to_involution(m) == (2, 1, 4, 3)
        m = AdjacencyMatrix.from_upper(4, {(0, 3): 1, (1, 2): 1})
        assert matching_to_involution(m) == (4, 3, 2, 1)

    def test_rejects_non_matchings(self):
        with pytest.raises(ValueError):
            matching_to_involution(AdjacencyMatrix.from_upper(2, {(0, 1): 2}))

    def test_counts_fixed_point_free_involutions(self):
        perms = {
            matching_to_involution(m)
            for m in enumerate_adjacency_by_rowsums((1,) * 6)
        }
        assert len(perms) == 15
        for perm in perms:
            assert all(perm[perm[i] - 1] == i + 1 for i in range(6))
            assert all(perm[i] != i + 1 for i in range(6))
