import random

import pytest
from hypothesis import given, settings, strategies as st

from patcol.budget import BudgetExceeded, Deadline
from patcol.colouring import (
    Colouring,
    Spectrum,
    classical_chromatic_number,
    exists_k_colouring,
    is_valid,
    is_valid_L,
    pat,
    spectrum,
)
from patcol.hypergraph import SigmaHypergraph, build_complete, build_grid, build_sigma_explicit, make_hypergraph
from patcol.partitions import PatternSet, enumerate_partitions, monochromatic, rainbow

from oracles import naive_exists_k, naive_spectrum


def pset(r, *parts):
    return PatternSet.of(r, parts)


Q31 = pset(4, (3, 1))


def grid_instance():
    return build_grid(4, 2, 2, Q31, Q31, 4)


class TestColouringType:
    def test_surjectivity_enforced(self):
        Colouring.of((0, 1, 0), 2)
        with pytest.raises(ValueError):
            Colouring.of((0, 2, 0), 3)  # colour 1 unused
        with pytest.raises(ValueError):
            Colouring.of((0, 1, 1), 3)

    def test_pat_examples(self):
        c = Colouring.of((0, 0, 0, 1), 2)
        assert pat((0, 1, 2, 3), c) == (3, 1)
        mono = Colouring.of((0, 0, 0, 0), 1)
        assert pat((0, 1, 2, 3), mono) == (4,)
        rb = Colouring.of((0, 1, 2), 3)
        assert pat((0, 1, 2), rb) == (1, 1, 1)


class TestValidity:
    def test_all_one_colour_iff_mono_allowed(self):
        h = build_complete(4, 3)
        mono = Colouring.of((0,) * 4, 1)
        assert is_valid(h, mono, pset(3, (3,))).ok
        assert not is_valid(h, mono, pset(3, (2, 1))).ok

    def test_rainbow_iff_rainbow_allowed(self):
        h = build_complete(4, 3)
        rb = Colouring.of(tuple(range(4)), 4)
        assert is_valid(h, rb, pset(3, (1, 1, 1))).ok
        assert not is_valid(h, rb, pset(3, (3,), (2, 1))).ok

    def test_cdmc_valid_iff_types_subset_of_allowed(self):
        s = SigmaHypergraph(3, 3, 2, pset(3, (2, 1)))
        h = build_sigma_explicit(s)
        cdmc = Colouring.of(tuple(v // 2 for v in range(6)), 3)
        assert is_valid(h, cdmc, pset(3, (2, 1))).ok
        assert not is_valid(h, cdmc, pset(3, (3,))).ok

    def test_witness_is_first_sorted_edge(self):
        h = build_complete(4, 3)
        mono = Colouring.of((0,) * 4, 1)
        report = is_valid(h, mono, pset(3, (2, 1)))
        assert report.violating_edge == (0, 1, 2) and report.violating_pattern == (3,)

    def test_uniformity_mismatch(self):
        with pytest.raises(ValueError):
            is_valid(build_complete(4, 3), Colouring.of((0,) * 4, 1), Q31)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_colour_permutation_preserves_validity(self, data):
        rng = random.Random(data.draw(st.integers(0, 10**6)))
        nv = rng.randint(3, 7)
        r = 3
        edges = set()
        from itertools import combinations

        pool = list(combinations(range(nv), r))
        edges = set(rng.sample(pool, min(len(pool), rng.randint(1, 6))))
        h = make_hypergraph(r, nv, edges)
        universe = sorted(enumerate_partitions(r))
        allowed = PatternSet(r, frozenset(rng.sample(universe, rng.randint(1, 3))))
        k = rng.randint(1, nv)
        cols = [rng.randrange(k) for _ in range(nv)]
        for i in range(k):  # force surjectivity
            cols[i % nv] = i
        c = Colouring.of(tuple(cols), k)
        perm = list(range(k))
        rng.shuffle(perm)
        pc = Colouring.of(tuple(perm[x] for x in c.colours), k)
        assert is_valid(h, c, allowed).ok == is_valid(h, pc, allowed).ok


class TestPerEdgeConstraints:
    def test_same_set_everywhere_reduces_to_plain_validity(self):
        h = build_complete(4, 3)
        q = pset(3, (2, 1))
        c = Colouring.of((0, 0, 1, 1), 2)
        constraint = {e: q for e in h.sorted_edges()}
        assert is_valid_L(h, c, constraint).ok == is_valid(h, c, q).ok

    def test_mixed_edge_kinds(self):
        # One no-monochromatic edge, one no-rainbow edge.
        h = make_hypergraph(3, 5, [(0, 1, 2), (2, 3, 4)])
        no_mono = enumerate_partitions(3).without(monochromatic(3))
        no_rainbow = enumerate_partitions(3).without(rainbow(3))
        constraint = {(0, 1, 2): no_mono, (2, 3, 4): no_rainbow}
        c_bad_mono = Colouring.of((0, 0, 0, 1, 2), 3)
        rep = is_valid_L(h, c_bad_mono, constraint)
        assert not rep.ok and rep.violating_edge == (0, 1, 2)
        c_bad_rainbow = Colouring.of((0, 0, 1, 2, 3), 4)
        rep = is_valid_L(h, c_bad_rainbow, constraint)
        assert not rep.ok and rep.violating_edge == (2, 3, 4)
        c_ok = Colouring.of((0, 0, 1, 1, 0), 2)
        assert is_valid_L(h, c_ok, constraint).ok

    def test_missing_constraint_rejected(self):
        h = build_complete(3, 3)
        with pytest.raises(ValueError):
            is_valid_L(h, Colouring.of((0, 0, 0), 1), {})


class TestSearch:
    def test_grid_membership(self):
        h = grid_instance()
        assert exists_k_colouring(h, 2, Q31) is not None
        assert exists_k_colouring(h, 3, Q31) is None
        assert exists_k_colouring(h, 4, Q31) is not None

    def test_witnesses_are_valid_and_deterministic(self):
        h = grid_instance()
        w1 = exists_k_colouring(h, 2, Q31)
        w2 = exists_k_colouring(h, 2, Q31)
        assert w1 == w2
        assert is_valid(h, w1, Q31).ok

    def test_complete_with_extremes_only(self):
        h = build_complete(9, 3)
        q = pset(3, (3,), (1, 1, 1))
        assert exists_k_colouring(h, 1, q) is not None
        assert exists_k_colouring(h, 3, q) is None
        assert exists_k_colouring(h, 9, q) is not None

    def test_k_bounds_validated(self):
        h = build_complete(4, 3)
        for bad in (0, 5):
            with pytest.raises(ValueError):
                exists_k_colouring(h, bad, enumerate_partitions(3))

    def test_budget_raises(self):
        # No-rainbow colouring of a large complete hypergraph at a mid k:
        # thousands of search nodes, so the deadline fires mid-search.
        no_rainbow = PatternSet.of(3, [(3,), (2, 1)])
        h = build_complete(40, 3)
        with pytest.raises(BudgetExceeded):
            exists_k_colouring(h, 30, no_rainbow, deadline=Deadline(0.0))

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_agrees_with_naive_enumeration(self, data):
        rng = random.Random(data.draw(st.integers(0, 10**6)))
        from itertools import combinations

        nv = rng.randint(3, 7)
        r = rng.choice([2, 3])
        pool = list(combinations(range(nv), r))
        edges = rng.sample(pool, min(len(pool), rng.randint(0, 8)))
        h = make_hypergraph(r, nv, edges)
        universe = sorted(enumerate_partitions(r))
        allowed = PatternSet(r, frozenset(rng.sample(universe, rng.randint(1, len(universe)))))
        for k in range(1, nv + 1):
            assert (exists_k_colouring(h, k, allowed) is not None) == naive_exists_k(h, k, allowed)

    def test_agrees_with_naive_enumeration_nine_vertices(self):
        rng = random.Random(424242)
        from itertools import combinations

        pool = list(combinations(range(9), 3))
        h = make_hypergraph(3, 9, rng.sample(pool, 10))
        allowed = pset(3, (2, 1), (1, 1, 1))
        for k in (1, 2, 3):
            assert (exists_k_colouring(h, k, allowed) is not None) == naive_exists_k(h, k, allowed)

    def test_monotone_in_allowed_set(self):
        h = grid_instance()
        smaller = Q31
        larger = Q31.union(pset(4, (2, 2)))
        feasible_small = set(spectrum(h, smaller, k_max=5).feasible)
        feasible_large = set(spectrum(h, larger, k_max=5).feasible)
        assert feasible_small <= feasible_large


class TestSpectrum:
    def test_grid_gap(self):
        spec = spectrum(grid_instance(), Q31, k_max=4)
        assert 2 in spec.feasible and 4 in spec.feasible and 3 not in spec.feasible
        assert spec.gaps == (3,)
        assert spec.gap_status == "gap" and spec.has_gap is True

    def test_empty_spectrum_is_legal(self):
        s = SigmaHypergraph(3, 4, 2, pset(4, (2, 2)))
        h = build_sigma_explicit(s)
        spec = spectrum(h, Q31)
        assert spec.feasible == ()
        with pytest.raises(ValueError):
            spec.chi

    def test_matches_naive_spectrum(self):
        s = SigmaHypergraph(2, 3, 2, pset(3, (2, 1)))
        h = build_sigma_explicit(s)
        q = pset(3, (2, 1))
        spec = spectrum(h, q)
        assert set(spec.feasible) == naive_spectrum(h, q, h.vertex_count) == {2}

    def test_unknowns_block_gap_call(self):
        spec = Spectrum(feasible=(2, 5), probed_max=5, unknown=(3, 4))
        assert spec.gap_status == "unknown" and spec.has_gap is None
        spec2 = Spectrum(feasible=(2, 5), probed_max=5, unknown=(4,))
        assert spec2.gaps == (3,) and spec2.gap_status == "gap"

    def test_json_shape(self):
        spec = spectrum(grid_instance(), Q31, k_max=4)
        data = spec.to_json_dict()
        assert data == {"feasible": [2, 4], "probed_max": 4, "gaps": [3], "unknown": []}


class TestClassicalChromatic:
    def test_complete_graph_small(self):
        assert classical_chromatic_number(build_complete(4, 3)) == 2

    def test_single_edge(self):
        assert classical_chromatic_number(make_hypergraph(3, 3, [(0, 1, 2)])) == 2

    def test_edgeless_convention(self):
        assert classical_chromatic_number(make_hypergraph(3, 5, [])) == 1

    def test_desk_instance_needs_three(self):
        s = SigmaHypergraph(3, 3, 3, pset(3, (2, 1)))
        h = build_sigma_explicit(s)
        assert classical_chromatic_number(h) == 3

    def test_desk_instance_two_colour_oracle(self):
        # Independent check that every 2-colouring of the desk instance has a
        # monochromatic edge: only per-class counts matter, and a
        # monochromatic (2,1)-type edge exists iff one class has two vertices
        # of a colour that also appears in another class.
        for a0 in range(4):
            for a1 in range(4):
                for a2 in range(4):
                    counts = [(a0, 3 - a0), (a1, 3 - a1), (a2, 3 - a2)]
                    if sum(c[0] for c in counts) == 0 or sum(c[1] for c in counts) == 0:
                        continue  # not a 2-colouring
                    mono_edge = any(
                        counts[i][c] >= 2 and counts[j][c] >= 1
                        for c in (0, 1)
                        for i in range(3)
                        for j in range(3)
                        if i != j
                    )
                    assert mono_edge
