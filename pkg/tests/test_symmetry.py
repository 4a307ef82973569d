import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hatdigraph import (
    FiniteDigraph,
    clone_classes,
    complete_template,
    enumerate_s_arcs,
    find_automorphism,
    hexagon_template,
    incidence_template,
    mckay_praeger,
    property_z_check,
    quotient_by_partition,
    s_arc_transitivity_report,
    template_product,
    tensor_z_kbar,
    tile,
    tree_edge_graph,
    window,
)
from hatdigraph.symmetry import (
    SearchCapExceeded,
    find_isomorphism,
    is_automorphism,
    isomorphic,
    sample_automorphisms,
    walk_displacement,
)

from test_graph import small_digraphs


def brute_s_arcs(G, s):
    out = set()
    for seq in itertools.product(range(G.n), repeat=s + 1):
        if all(G.has_arc(a, b) for a, b in zip(seq, seq[1:])) and all(
            seq[i + 1] != seq[i - 1] for i in range(1, s)
        ):
            out.add(seq)
    return out


def all_automorphisms(G):
    return [p for p in itertools.permutations(range(G.n)) if is_automorphism(G, p)]


class TestSearch:
    def test_empty_seed_finds_some_automorphism(self):
        G = window(mckay_praeger(2, 2), 0, 2)
        assert is_automorphism(G, find_automorphism(G))

    def test_four_cycle_rotation(self):
        C = FiniteDigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert find_automorphism(C, [(0, 1)]).tolist() == [1, 2, 3, 0]

    def test_non_injective_seed(self):
        C = FiniteDigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert find_automorphism(C, [(0, 1), (2, 1)]) is None

    def test_tree_core_arc_to_core_arc(self):
        # automorphisms of the truncated tree fix the root edge, so pair two
        # arcs whose tail, middle edge and head sit at the same depths
        tg = tree_edge_graph(3, 3, 4)
        G = tg.graph
        profile = {}
        for (e1, e2), c in tg.witness.items():
            if G.core[e1] and G.core[e2]:
                key = (tg.depth[e1], tg.depth[c], tg.depth[e2], G.labels[e1][:1], G.labels[e2][:1])
                profile.setdefault(key, []).append((e1, e2))
        (u, v), (x, y) = next(arcs[:2] for arcs in profile.values() if len(arcs) > 1)
        phi = find_automorphism(G, [(u, x), (v, y)])
        assert phi is not None and is_automorphism(G, phi)

    def test_cap(self):
        with pytest.raises(SearchCapExceeded):
            find_automorphism(window(tensor_z_kbar(3), 0, 4), cap=2)

    @given(small_digraphs(6))
    @settings(max_examples=60, deadline=None)
    def test_isomorphism_of_relabelled_copy(self, G):
        perm = np.random.default_rng(G.num_arcs).permutation(G.n)
        H = G.relabel(perm)
        phi = find_isomorphism(G, H)
        assert phi is not None
        assert set(map(tuple, phi[G.arcs].tolist())) == set(H.arc_list())

    @given(small_digraphs(5))
    @settings(max_examples=60, deadline=None)
    def test_seeded_search_agrees_with_brute_force(self, G):
        autos = all_automorphisms(G)
        for u in range(G.n):
            for w in range(G.n):
                expected = any(p[u] == w for p in autos)
                phi = find_automorphism(G, [(u, w)], respect_levels=False)
                assert (phi is not None) == expected
                if phi is not None:
                    assert phi[u] == w and is_automorphism(G, phi)

    @pytest.mark.parametrize(
        "G",
        [
            tree_edge_graph(3, 3, 5).graph,
            window(tensor_z_kbar(3), 0, 4),
            window(template_product(hexagon_template()), 0, 3),
            window(template_product(incidence_template(2, 2)), 0, 3),
        ],
        ids=["tree", "tensor", "hexagon", "fano"],
    )
    def test_sampled_automorphisms_replay(self, G):
        autos = sample_automorphisms(G, 20, seed=1)
        assert len(autos) == 20
        adj = np.zeros((G.n, G.n), dtype=bool)
        adj[G.arcs[:, 0], G.arcs[:, 1]] = True
        for phi in autos:
            # arcs and non-arcs both preserved
            assert np.array_equal(adj[np.ix_(phi, phi)], adj)
            if G.level is not None:
                assert len(set((G.level[phi] - G.level).tolist())) == 1


class TestSArcs:
    def test_directed_path(self):
        assert len(enumerate_s_arcs(FiniteDigraph(4, [(0, 1), (1, 2), (2, 3)]), 3)) == 1

    def test_tensor_tile_one_arcs(self):
        assert len(enumerate_s_arcs(tile(tensor_z_kbar(2)), 1)) == 4

    def test_tensor_window_two_arcs(self):
        assert len(enumerate_s_arcs(window(tensor_z_kbar(2), 0, 2), 2)) == 8

    @given(small_digraphs(5), st.integers(0, 3))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, G, s):
        assert set(map(tuple, enumerate_s_arcs(G, s).tolist())) == brute_s_arcs(G, s)

    def test_backtracking_excluded(self):
        G = FiniteDigraph(2, [(0, 1), (1, 0)])
        assert enumerate_s_arcs(G, 2).size == 0


class TestTransitivity:
    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_tensor_window(self, s):
        r = s_arc_transitivity_report(window(tensor_z_kbar(2), 0, 4), s)
        assert r.verdict == "Transitive" and r.orbit_count == 1

    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_complete_template_window(self, s):
        r = s_arc_transitivity_report(window(template_product(complete_template((2, 2, 2))), 0, 5), s)
        assert r.verdict == "Transitive" and r.orbit_count == 1

    def test_deleted_arc(self):
        W = window(tensor_z_kbar(2), 0, 4)
        mid = np.flatnonzero(W.core_arc_mask())[0]
        r = s_arc_transitivity_report(W.delete_arcs([mid]), 1)
        assert r.verdict == "NotTransitive" and r.orbit_count > 1

    def test_stable_under_relabelling(self):
        W = window(mckay_praeger(2, 2), 0, 5)
        perm = np.random.default_rng(4).permutation(W.n)
        relabelled = W.relabel(perm)
        for s in (1, 2):
            a = s_arc_transitivity_report(W, s)
            b = s_arc_transitivity_report(relabelled, s)
            assert (a.verdict, a.orbit_count) == (b.verdict, b.orbit_count)

    def test_orbits_against_brute_force_group(self):
        # a small unlevelled digraph: orbits of the full automorphism group
        G = FiniteDigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
        G = G.with_core(np.ones(6, bool))
        autos = all_automorphisms(G)
        arcs = [tuple(a) for a in G.arc_list()]
        orbits = {frozenset((p[u], p[v]) for p in autos) for u, v in arcs}
        r = s_arc_transitivity_report(G, 1, respect_levels=False)
        assert r.orbit_count == len(orbits)

    def test_inconclusive_on_cap(self):
        W = window(tensor_z_kbar(3), 0, 4)
        r = s_arc_transitivity_report(W, 2, cap=1, use_shift=False)
        assert r.verdict == "Inconclusive" and r.cap_hit


class TestClones:
    @pytest.mark.parametrize("k", [2, 3])
    def test_tensor(self, k):
        W = window(tensor_z_kbar(k), 0, 4)
        r = clone_classes(W)
        assert r.c_plus == k and r.c_minus == k

    def test_pg32(self):
        T = incidence_template(3, 2)
        r = clone_classes(window(template_product(T), 0, 2))
        assert (r.c_plus, r.c_minus) == (15, 15) and r.c_plus * r.c_minus < 7875

    def test_hexagon(self):
        r = clone_classes(window(template_product(hexagon_template()), 0, 2))
        assert r.c_plus * r.c_minus >= 9

    @given(small_digraphs(6))
    @settings(max_examples=60, deadline=None)
    def test_classes_by_definition(self, G):
        r = clone_classes(G)
        for classes, nb in ((r.right_classes, G.out_neighbors), (r.left_classes, G.in_neighbors)):
            key = {v: tuple(nb(v).tolist()) for v in range(G.n)}
            assert sorted(sorted(c.tolist()) for c in classes) == sorted(
                sorted(v for v in range(G.n) if key[v] == k) for k in set(key.values())
            )

    @given(small_digraphs(6))
    @settings(max_examples=40, deadline=None)
    def test_quotient_by_clones_is_idempotent(self, G):
        blocks = clone_classes(G).right_classes
        Q = quotient_by_partition(G, blocks)
        again = quotient_by_partition(Q, [[i] for i in range(Q.n)])
        assert again.arc_list() == Q.arc_list()
        Q2 = quotient_by_partition(Q, clone_classes(Q).right_classes)
        assert isomorphic(Q2, quotient_by_partition(Q2, clone_classes(Q2).right_classes))


class TestQuotients:
    def test_singletons(self):
        G = window(mckay_praeger(2, 2), 0, 2)
        Q = quotient_by_partition(G, [[v] for v in range(G.n)])
        assert np.array_equal(Q.arcs, G.arcs)

    def test_complete_tile_clones(self):
        B = tile(tensor_z_kbar(3))
        Q = quotient_by_partition(B, clone_classes(B).right_classes)
        assert Q.n == 2 and Q.arc_list() == [(0, 1)]

    def test_levels_give_a_path(self):
        W = window(template_product(hexagon_template()), 0, 4)
        Q = quotient_by_partition(W, W.level - W.level.min())
        assert Q.arc_list() == [(0, 1), (1, 2), (2, 3), (3, 4)]

    def test_bad_blocks(self):
        with pytest.raises(ValueError):
            quotient_by_partition(FiniteDigraph(3), [[0, 1], [1, 2]])
        with pytest.raises(ValueError):
            quotient_by_partition(FiniteDigraph(3), [[0, 1]])


class TestPropertyZ:
    @pytest.mark.parametrize(
        "P", [tensor_z_kbar(2), mckay_praeger(2, 3), template_product(hexagon_template())], ids=["tensor", "mckay", "hexagon"]
    )
    def test_windows_are_consistent_with_levels(self, P):
        W = window(P, -2, 3)
        r = property_z_check(W)
        assert r.consistent and np.array_equal(r.f, W.level)

    def test_single_arc(self):
        assert property_z_check(FiniteDigraph(2, [(0, 1)])).consistent

    @pytest.mark.parametrize("R", [4, 5])
    def test_tree_conflict_walk_replays(self, R):
        G = tree_edge_graph(3, 3, R).graph
        r = property_z_check(G)
        assert not r.consistent
        assert walk_displacement(G, r.walk) == r.displacement != 0

    def test_conflict_persists_in_extension(self):
        small = tree_edge_graph(3, 3, 4).graph
        big = tree_edge_graph(3, 3, 6).graph
        walk = property_z_check(small).walk
        index = big.label_index()
        lifted = [(index[small.labels[x]], index[small.labels[y]], s) for x, y, s in walk]
        assert walk_displacement(big, lifted) != 0

    @given(small_digraphs(6))
    @settings(max_examples=80, deadline=None)
    def test_verdict_matches_cycle_oracle(self, G):
        r = property_z_check(G)
        if r.consistent:
            assert all(r.f[v] == r.f[u] + 1 for u, v in G.arc_list())
        else:
            assert walk_displacement(G, r.walk) != 0

    def test_subgraphs_of_consistent_graph(self):
        W = window(mckay_praeger(2, 2), 0, 4)
        rng = np.random.default_rng(2)
        for _ in range(20):
            keep = np.flatnonzero(rng.random(W.num_arcs) < 0.6)
            assert property_z_check(W.arc_subgraph(keep)).consistent
