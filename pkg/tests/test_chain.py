"""Sparse integer linear algebra and bigraded chain complexes.

The Smith-normal-form oracle used here is the determinantal-divisor
characterization: d_k = gcd(k-minors) / gcd((k-1)-minors).  It shares no
code with the elimination under test.
"""

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khcube import (
    BigradedComplex,
    HomologyGroup,
    NotADifferential,
    SparseIntMatrix,
    assemble,
    corpus,
    rank_over_q,
    smith_normal_form,
)


# -- oracles ----------------------------------------------------------


def _det(rows):
    """Integer determinant by Laplace expansion (small matrices only)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(sub)
    return total


def _divisors_by_minors(dense):
    """Smith divisors via gcds of k x k minors."""
    nr, nc = len(dense), len(dense[0]) if dense else 0
    prev_gcd = 1
    divisors = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for ris in itertools.combinations(range(nr), k):
            for cis in itertools.combinations(range(nc), k):
                sub = [[dense[i][j] for j in cis] for i in ris]
                g = math.gcd(g, _det(sub))
        if g == 0:
            break
        divisors.append(g // prev_gcd)
        prev_gcd = g
    return tuple(divisors)


def _dense_rank_fraction(dense):
    """Rational rank by Gaussian elimination over fractions."""
    from fractions import Fraction

    rows = [[Fraction(v) for v in r] for r in dense if any(r)]
    rank = 0
    col = 0
    ncols = len(dense[0]) if dense else 0
    while rows and col < ncols:
        pivot = next((i for i, r in enumerate(rows) if r[col]), None)
        if pivot is None:
            col += 1
            continue
        prow = rows.pop(pivot)
        rank += 1
        rows = [
            [rv - (r[col] / prow[col]) * pv for rv, pv in zip(r, prow)]
            for r in rows
            if any(rv - (r[col] / prow[col]) * pv
                   for rv, pv in zip(r, prow))
        ]
        col += 1
    return rank


_dense_matrices = st.integers(0, 4).flatmap(
    lambda nr: st.integers(0 if nr == 0 else 1, 4).flatmap(
        lambda nc: st.lists(
            st.lists(st.integers(-6, 6), min_size=nc, max_size=nc),
            min_size=nr, max_size=nr)))


# -- SparseIntMatrix ---------------------------------------------------


class TestSparseIntMatrix:
    def test_round_trip_dense(self):
        dense = [[1, 0, -3], [0, 0, 7]]
        m = SparseIntMatrix.from_dense(dense)
        assert m.nrows == 2 and m.ncols == 3
        assert m.to_dense() == dense
        assert m.nnz() == 3

    def test_zero_entries_dropped(self):
        m = SparseIntMatrix(2, 2, {(0, 0): 0, (1, 1): 5})
        assert m.entries == {(1, 1): 5}

    def test_out_of_range_entry_rejected(self):
        with pytest.raises(ValueError):
            SparseIntMatrix(2, 2, {(2, 0): 1})
        with pytest.raises(ValueError):
            SparseIntMatrix(2, 2, {(0, -1): 1})

    def test_negative_dimensions_rejected(self):
        with pytest.raises(ValueError):
            SparseIntMatrix(-1, 2)

    def test_transpose(self):
        m = SparseIntMatrix.from_dense([[1, 2], [3, 4], [5, 6]])
        t = m.transpose()
        assert t.to_dense() == [[1, 3, 5], [2, 4, 6]]
        assert t.transpose() == m

    def test_matmul_matches_dense_arithmetic(self):
        a = SparseIntMatrix.from_dense([[1, 2, 0], [0, -1, 3]])
        b = SparseIntMatrix.from_dense([[2, 0], [1, 1], [0, 4]])
        prod = (a @ b).to_dense()
        assert prod == [[4, 2], [-1, 11]]

    def test_matmul_dimension_mismatch(self):
        a = SparseIntMatrix(2, 3)
        b = SparseIntMatrix(2, 3)
        with pytest.raises(ValueError):
            a @ b


# -- Smith normal form -------------------------------------------------


class TestSmithNormalForm:
    @settings(max_examples=120, deadline=None)
    @given(_dense_matrices)
    def test_divisors_match_minor_gcd_oracle(self, dense):
        m = SparseIntMatrix.from_dense(dense)
        res = smith_normal_form(m)
        assert res.divisors == _divisors_by_minors(dense)
        assert res.rank == len(res.divisors)

    @settings(max_examples=120, deadline=None)
    @given(_dense_matrices)
    def test_divisor_chain(self, dense):
        res = smith_normal_form(SparseIntMatrix.from_dense(dense))
        assert all(d > 0 for d in res.divisors)
        for a, b in zip(res.divisors, res.divisors[1:]):
            assert b % a == 0

    @settings(max_examples=100, deadline=None)
    @given(_dense_matrices)
    def test_transforms_diagonalize(self, dense):
        m = SparseIntMatrix.from_dense(dense)
        res = smith_normal_form(m, want_transforms=True)
        d = (res.U @ m) @ res.V
        assert d.entries == {(k, k): v for k, v in enumerate(res.divisors)}
        # U and V must be invertible over the integers.
        assert abs(_det(res.U.to_dense())) == 1
        assert abs(_det(res.V.to_dense())) == 1

    @settings(max_examples=100, deadline=None)
    @given(_dense_matrices)
    def test_rank_over_q_agrees(self, dense):
        m = SparseIntMatrix.from_dense(dense)
        assert rank_over_q(m) == smith_normal_form(m).rank
        assert rank_over_q(m) == _dense_rank_fraction(dense)

    def test_known_small_case(self):
        # diag(2, 6) has divisors (2, 6); the gcd/lcm pair survives a
        # change of basis.
        m = SparseIntMatrix.from_dense([[2, 0], [0, 6]])
        assert smith_normal_form(m).divisors == (2, 6)
        mixed = SparseIntMatrix.from_dense([[2, 4], [4, 14]])
        assert smith_normal_form(mixed).divisors == (2, 6)

    def test_empty_and_zero_matrices(self):
        assert smith_normal_form(SparseIntMatrix(0, 0)).divisors == ()
        assert smith_normal_form(SparseIntMatrix(3, 2)).rank == 0
        res = smith_normal_form(SparseIntMatrix(3, 2), want_transforms=True)
        assert abs(_det(res.U.to_dense())) == 1

    def test_nontrivial_divisors_strips_units(self):
        m = SparseIntMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 4]])
        res = smith_normal_form(m)
        assert res.divisors == (1, 1, 4)
        assert res.nontrivial_divisors() == (4,)


# -- HomologyGroup ------------------------------------------------------


class TestHomologyGroup:
    def test_divisor_chain_enforced(self):
        with pytest.raises(ValueError):
            HomologyGroup(0, (4, 6))

    def test_prime_power_decomposition(self):
        g = HomologyGroup(1, (2, 12))
        assert g.prime_power_decomposition() == (2, 3, 4)

    def test_repr_and_is_zero(self):
        assert repr(HomologyGroup(0)) == "0"
        assert HomologyGroup(0).is_zero()
        assert repr(HomologyGroup(1, (2,))) == "Z + Z/2"
        assert repr(HomologyGroup(3)) == "Z^3"
        assert not HomologyGroup(0, (5,)).is_zero()


# -- BigradedComplex ----------------------------------------------------


def _flat(groups):
    return {k: (g.free_rank, g.torsion)
            for k, g in groups.items() if not g.is_zero()}


class TestBigradedComplex:
    def test_multiplication_by_two_gives_torsion(self):
        c = BigradedComplex([(0, 0), (1, 0)], [(0, 1, 2)])
        assert _flat(c.homology()) == {(1, 0): (0, (2,))}

    def test_two_by_two_torsion_block(self):
        # [[1, 1], [1, -1]] has Smith form diag(1, 2).
        c = BigradedComplex(
            [(0, 0), (0, 0), (1, 0), (1, 0)],
            [(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, -1)])
        assert _flat(c.homology()) == {(1, 0): (0, (2,))}

    def test_acyclic_complex(self):
        c = BigradedComplex([(0, 0), (1, 0)], [(0, 1, 1)])
        assert _flat(c.homology()) == {}

    def test_zero_differential(self):
        c = BigradedComplex([(0, 1), (0, -1)])
        assert _flat(c.homology()) == {(0, 1): (1, ()), (0, -1): (1, ())}

    def test_square_nonzero_rejected(self):
        c = BigradedComplex(
            [(0, 0), (1, 0), (2, 0)], [(0, 1, 1), (1, 2, 1)])
        with pytest.raises(NotADifferential):
            c.check_square_zero()
        with pytest.raises(NotADifferential):
            c.homology()

    def test_inhomogeneous_keyed_none(self):
        # d drops two q-levels: not (1, 0)-homogeneous, so the homology
        # is reported as one total group.
        c = BigradedComplex([(0, 2), (1, 0)], [(0, 1, 3)])
        assert not c.is_homogeneous((1, 0))
        assert c.is_homogeneous((1, -2))
        groups = c.homology()
        assert set(groups) == {None}
        assert groups[None].torsion == (3,)

    def test_entry_out_of_range(self):
        with pytest.raises(ValueError):
            BigradedComplex([(0, 0)], [(0, 1, 1)])

    def test_entries_accumulate_and_cancel(self):
        c = BigradedComplex([(0, 0), (1, 0)], [(0, 1, 1), (0, 1, -1)])
        assert list(c.differential_entries()) == []

    def test_graded_ranks(self):
        c = BigradedComplex([(0, 0), (0, 0), (1, 2)])
        assert c.graded_ranks() == {(0, 0): 2, (1, 2): 1}

    def test_rational_ranks_drop_torsion(self):
        c = BigradedComplex([(0, 0), (1, 0)], [(0, 1, 2)])
        assert c.rational_ranks() == {}


class TestReduction:
    """Unit cancellation must never change homology."""

    @pytest.mark.parametrize("name", ["trefoil", "figure8", "hopf"])
    def test_reduced_equals_unreduced_on_real_complexes(self, name):
        c = assemble(corpus.get(name)).bigraded_complex(check=True)
        assert _flat(c.homology(reduce=True)) == _flat(c.homology(reduce=False))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_reduced_equals_unreduced_on_random_complexes(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 10)
        gradings = [(rng.randint(0, 2), rng.randint(-2, 2) * 2) for _ in range(n)]
        # Random (1, 0)-homogeneous differential, then keep it only if
        # d^2 == 0 (drop entries from d^2 support until it is).
        entries = {}
        for s in range(n):
            for t in range(n):
                hs, qs = gradings[s]
                ht, qt = gradings[t]
                if (ht - hs, qt - qs) == (1, 0) and rng.random() < 0.7:
                    entries[(s, t)] = rng.choice([-2, -1, 1, 2])
        # Gradings (0..2, fixed q) give a two-step complex only when some
        # composite exists; zero out one factor of every bad composite.
        while True:
            c = BigradedComplex(gradings,
                                [(s, t, v) for (s, t), v in entries.items()])
            try:
                c.check_square_zero()
                break
            except NotADifferential:
                mids = [m for (s, m) in entries for (m2, t) in entries
                        if m == m2]
                del entries[next((s, t) for (s, t) in entries
                                 if t in mids or s in mids)]
        assert _flat(c.homology(reduce=True)) == _flat(c.homology(reduce=False))
