import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hatdigraph import (
    FiniteDigraph,
    PeriodicDigraph,
    degree_profile,
    mckay_praeger,
    template_product,
    tensor_z_kbar,
    tile,
    tree_edge_graph,
    underlying_components,
    window,
)
from hatdigraph.constructions import complete_template, hexagon_template
from hatdigraph.graph import level_shift


def small_digraphs(max_n=7):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
        return FiniteDigraph(n, chosen)

    return build()


PERIODIC = [tensor_z_kbar(2), tensor_z_kbar(3), mckay_praeger(2, 3), template_product(hexagon_template())]


class TestFiniteDigraph:
    def test_rejects_loop(self):
        with pytest.raises(ValueError, match="loop"):
            FiniteDigraph(2, [(1, 1)])

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError, match="duplicate"):
            FiniteDigraph(2, [(0, 1), (0, 1)])

    def test_rejects_level_jump(self):
        with pytest.raises(ValueError, match="climb"):
            FiniteDigraph(3, [(0, 2)], level=[0, 1, 2])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            FiniteDigraph(2, [(0, 2)])

    def test_adjacency_lookups(self):
        G = FiniteDigraph(4, [(2, 3), (0, 1), (0, 2), (3, 0)])
        assert G.out_neighbors(0).tolist() == [1, 2]
        assert G.in_neighbors(0).tolist() == [3]
        assert G.has_arc(2, 3) and not G.has_arc(3, 2)
        assert G.has_arcs(np.array([[0, 1], [1, 0]])).tolist() == [True, False]
        for i, (u, v) in enumerate(G.arc_list()):
            assert G.arc_id(u, v) == i
        with pytest.raises(KeyError):
            G.arc_id(1, 0)

    @given(small_digraphs())
    @settings(max_examples=60, deadline=None)
    def test_arc_ids_match_arc_array(self, G):
        for v in range(G.n):
            assert all(G.arcs[a, 0] == v for a in G.out_arc_ids(v))
            assert all(G.arcs[a, 1] == v for a in G.in_arc_ids(v))
        assert G.out_degree.sum() == G.in_degree.sum() == G.num_arcs

    @given(small_digraphs(), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_relabel_is_isomorphic_copy(self, G, rnd):
        perm = list(range(G.n))
        rnd.shuffle(perm)
        H = G.relabel(perm)
        assert {(perm[u], perm[v]) for u, v in G.arc_list()} == set(H.arc_list())


class TestPeriodic:
    def test_rejects_empty_tile(self):
        with pytest.raises(ValueError):
            PeriodicDigraph(2, [])

    def test_rejects_index_without_out_arc(self):
        with pytest.raises(ValueError):
            PeriodicDigraph(2, [(0, 0), (0, 1)])

    def test_window_tensor_two(self):
        W = window(tensor_z_kbar(2), 0, 1)
        assert (W.n, W.num_arcs) == (4, 4)

    def test_window_mckay_matches_predicate(self):
        P = mckay_praeger(2, 3)
        W = window(P, 0, 1)
        assert (W.n, W.num_arcs) == (16, 16)
        words = list(itertools.product(range(2), repeat=3))
        expected = {
            ((0, a), (1, b)) for a in words for b in words if all(a[j] == b[j + 1] for j in range(2))
        }
        assert {(W.labels[u], W.labels[v]) for u, v in W.arc_list()} == expected

    @pytest.mark.parametrize("P", PERIODIC, ids=lambda P: P.name)
    def test_single_level_window(self, P):
        W = window(P, 3, 3)
        assert (W.n, W.num_arcs) == (P.m, 0)

    @pytest.mark.parametrize("P", PERIODIC, ids=lambda P: P.name)
    @given(lo=st.integers(-5, 5), span=st.integers(0, 4))
    @settings(max_examples=25, deadline=None)
    def test_window_sizes_and_prefix(self, P, lo, span):
        hi = lo + span
        W = window(P, lo, hi)
        assert W.n == (hi - lo + 1) * P.m
        assert W.num_arcs == (hi - lo) * len(P.tile_arcs)
        if span:
            prefix = W.induced_subgraph(np.flatnonzero(W.level < hi))
            assert prefix == window(P, lo, hi - 1)

    @pytest.mark.parametrize("P", PERIODIC, ids=lambda P: P.name)
    def test_tile_is_bipartite_level_zero_to_one(self, P):
        B = tile(P)
        assert np.all(B.level[B.arcs[:, 0]] == 0) and np.all(B.level[B.arcs[:, 1]] == 1)

    def test_lo_above_hi_rejected(self):
        with pytest.raises(ValueError):
            window(tensor_z_kbar(2), 2, 1)

    def test_core_margin(self):
        W = window(tensor_z_kbar(2), 0, 4, margin=1)
        assert sorted(set(W.level[W.core].tolist())) == [1, 2, 3]

    def test_level_shift_on_window_and_damaged_window(self):
        W = window(template_product(complete_template((2, 2))), 0, 3)
        shift = level_shift(W)
        assert shift is not None
        assert np.all(W.level[shift >= 0] + 1 == W.level[shift[shift >= 0]])
        assert level_shift(W.delete_arcs([0])) is None


class TestDegreesAndComponents:
    def test_single_arc_profile(self):
        prof = degree_profile(FiniteDigraph(2, [(0, 1)]))
        assert sorted(prof.pairs) == [(0, 1), (1, 0)]

    def test_tensor_three_tile_profile(self):
        B = tile(tensor_z_kbar(3))
        prof = degree_profile(B)
        assert prof.restricted(np.flatnonzero(B.level == 0)) == {(0, 3): 3}
        assert prof.restricted(np.flatnonzero(B.level == 1)) == {(3, 0): 3}

    def test_tree_interior_degrees(self):
        G = tree_edge_graph(3, 3, 4).graph
        prof = degree_profile(G)
        assert prof.restricted(G.core_vertices) == {(4, 4): len(G.core_vertices)}

    def test_component_examples(self):
        assert len(underlying_components(tile(mckay_praeger(2, 3)))) == 4
        assert len(underlying_components(tile(tensor_z_kbar(2)))) == 1
        assert len(underlying_components(FiniteDigraph(5))) == 5

    @given(small_digraphs())
    @settings(max_examples=80, deadline=None)
    def test_components_match_networkx(self, G):
        H = nx.DiGraph()
        H.add_nodes_from(range(G.n))
        H.add_edges_from(G.arc_list())
        expected = sorted(sorted(c) for c in nx.weakly_connected_components(H))
        assert [c.tolist() for c in underlying_components(G)] == expected
