"""Braid closures: construction, conventions, and agreement with PD codes."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khcube import MalformedPD, PlanarDiagram, assemble, braid_closure

TREFOIL_PD = [(2, 5, 1, 4), (4, 1, 3, 6), (6, 3, 5, 2)]


def _flat(groups):
    return {k: (g.free_rank, g.torsion)
            for k, g in groups.items() if not g.is_zero()}


def _cycle_count(word, k):
    """Components of the closure = cycles of the strand permutation."""
    perm = list(range(k))
    for letter in word:
        i = abs(letter) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen = [False] * k
    cycles = 0
    for s in range(k):
        if seen[s]:
            continue
        cycles += 1
        while not seen[s]:
            seen[s] = True
            s = perm[s]
    return cycles


class TestConstruction:
    def test_zero_letter_rejected(self):
        with pytest.raises(MalformedPD):
            braid_closure([1, 0, 2])

    def test_non_integer_rejected(self):
        with pytest.raises(MalformedPD):
            braid_closure([1.5])

    def test_too_few_strands_rejected(self):
        with pytest.raises(MalformedPD):
            braid_closure([2], strands=2)

    def test_empty_word_is_unknot(self):
        d = braid_closure([])
        assert d.n_crossings == 0
        assert d.free_circles == 1
        assert d.n_components == 1

    def test_unused_strands_close_into_circles(self):
        d = braid_closure([1], strands=4)
        assert d.free_circles == 2
        assert d.n_components == 3  # kink closure + two circles

    def test_basepoint_passthrough(self):
        d = braid_closure([1, 1, 1], basepoint=1)
        assert d.basepoint == 1


class TestConventions:
    def test_positive_letters_give_negative_crossings(self):
        assert braid_closure([1]).signs == (-1,)
        assert braid_closure([-1]).signs == (1,)
        assert braid_closure([1, 1, 1]).writhe() == -3
        assert braid_closure([-1, -1, -1]).writhe() == 3

    def test_hopf_components(self):
        d = braid_closure([1, 1])
        assert d.n_crossings == 2
        assert d.n_components == 2

    def test_trefoil_is_a_knot(self):
        assert braid_closure([1, 1, 1]).n_components == 1

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 6))
    def test_component_count_matches_permutation_cycles(self, seed, length):
        rng = random.Random(seed)
        word = [rng.choice([1, -1]) * rng.randint(1, 3)
                for _ in range(length)]
        k = max(abs(x) + 1 for x in word)
        d = braid_closure(word)
        assert d.n_components == _cycle_count(word, k)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 6))
    def test_writhe_matches_letter_signs_on_knots(self, seed, length):
        # Only single-component closures: for links the engine traces
        # its own component orientations, which need not agree with the
        # braid's strand orientations, and inter-component crossing
        # signs depend on that choice.
        rng = random.Random(seed)
        word = [rng.choice([1, -1]) * rng.randint(1, 3)
                for _ in range(length)]
        d = braid_closure(word)
        if d.n_components != 1:
            return
        # Engine signs flip braid letter signs.
        assert d.writhe() == -sum(1 if x > 0 else -1 for x in word)


class TestAgreementWithPDCodes:
    def test_trefoil_both_ways(self):
        from_braid = assemble(braid_closure([1, 1, 1])).homology()
        from_pd = assemble(PlanarDiagram.build(TREFOIL_PD)).homology()
        assert _flat(from_braid) == _flat(from_pd)

    def test_r2_closure_is_two_component_unlink(self):
        pair = assemble(braid_closure([1, -1])).homology()
        unlink = assemble(
            PlanarDiagram.build([], free_circles=2)).homology()
        assert _flat(pair) == _flat(unlink)
        assert _flat(pair) == {(0, 2): (1, ()), (0, 0): (2, ()),
                               (0, -2): (1, ())}
