import itertools
import random

import numpy as np
import pytest

from hatdigraph import (
    FiniteDigraph,
    LeveledTemplate,
    coloured_template_product,
    complete_template,
    connecting_path,
    disjoint_paths_template,
    hexagon_template,
    mckay_praeger,
    template_product,
    tensor_z_kbar,
    tile,
    tree_edge_graph,
    underlying_components,
    window,
)
from hatdigraph.constructions import product_index, product_vector, template_product_degrees
from hatdigraph.geometry import incidence_template
from hatdigraph.symmetry import isomorphic


def predicate_tile(T: LeveledTemplate, colour_rule: bool = False) -> set:
    """Tile arcs by brute force over all vector pairs."""
    vecs = list(itertools.product(*(range(s) for s in T.levels)))
    colour = dict(zip(T.arcs, T.colours)) if colour_rule else {}
    arcset = set(T.arcs)
    out = set()
    for a in vecs:
        for b in vecs:
            used = [(j, a[j], b[j + 1]) for j in range(T.t - 1)]
            if not all(u in arcset for u in used):
                continue
            if colour_rule and len({colour[u] for u in used}) != 1:
                continue
            out.add((a, b))
    return out


def tile_pairs(P) -> set:
    return {(P.labels[u], P.labels[v]) for u, v in P.tile_arcs.tolist()}


class TestTemplate:
    def test_rejects_single_level(self):
        with pytest.raises(ValueError):
            LeveledTemplate((2,), ())

    def test_rejects_source_off_first_level(self):
        # vertex 1 on the second level has no in-arc
        with pytest.raises(ValueError):
            LeveledTemplate((1, 2), ((0, 0, 0),))

    def test_rejects_duplicate_arc(self):
        with pytest.raises(ValueError):
            LeveledTemplate((1, 1), ((0, 0, 0), (0, 0, 0)))


class TestTensor:
    def test_k_one_is_a_line(self):
        P = tensor_z_kbar(1)
        assert P.m == 1 and P.tile_arcs.tolist() == [[0, 0]]

    def test_k_three_interior_degrees(self):
        W = window(tensor_z_kbar(3), 0, 4)
        core = W.core_vertices
        assert set(W.out_degree[core]) == {3} and set(W.in_degree[core]) == {3}

    def test_k_two_is_mckay_n_one(self):
        assert isomorphic(tile(tensor_z_kbar(2)), tile(mckay_praeger(2, 1)), respect_levels=True)


class TestTree:
    @pytest.mark.parametrize("a,b,R", [(3, 3, 3), (3, 3, 5), (3, 4, 3), (4, 3, 4)])
    def test_core_degrees(self, a, b, R):
        G = tree_edge_graph(a, b, R).graph
        core = G.core_vertices
        d = (a - 1) * (b - 1)
        assert len(core) and set(G.out_degree[core]) == {d} and set(G.in_degree[core]) == {d}

    def test_radius_zero(self):
        G = tree_edge_graph(3, 3, 0).graph
        assert (G.n, G.num_arcs) == (1, 0)

    def test_rejects_small_degrees(self):
        with pytest.raises(ValueError):
            tree_edge_graph(2, 3, 3)

    @pytest.mark.parametrize("a,b", [(3, 3), (3, 4)])
    def test_tree_shape_and_witnesses(self, a, b):
        tg = tree_edge_graph(a, b, 4)
        # tree degrees: A vertices <= a, B vertices <= b
        deg = {}
        for u, v in tg.tree_edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        for x, d in deg.items():
            assert d <= (a if tg.tree_side[x] == "A" else b)
        for (e1, e2), c in tg.witness.items():
            u, v = tg.tree_edges[c]
            assert u in tg.tree_edges[e1] and v in tg.tree_edges[e2]
            assert e1 != c != e2

    def test_arc_rule_by_brute_force(self):
        tg = tree_edge_graph(3, 3, 3)
        E = tg.tree_edges
        expected = {
            (e1, e2)
            for e1, e2 in itertools.permutations(range(len(E)), 2)
            for c in range(len(E))
            if c not in (e1, e2) and E[c][0] in E[e1] and E[c][1] in E[e2]
        }
        assert set(tg.graph.arc_list()) == expected


class TestMcKay:
    def test_tile_components_are_kss(self):
        B = tile(mckay_praeger(2, 3))
        kss = FiniteDigraph(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
        comps = underlying_components(B)
        assert len(comps) == 4
        assert all(isomorphic(B.induced_subgraph(c), kss) for c in comps)

    @pytest.mark.parametrize("s,n", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
    def test_component_count_and_out_degree(self, s, n):
        B = tile(mckay_praeger(s, n))
        assert len(underlying_components(B)) == s ** (n - 1)
        assert set(B.out_degree[B.level == 0]) == {s}

    def test_n_one_is_complete(self):
        assert isomorphic(tile(mckay_praeger(3, 1)), tile(tensor_z_kbar(3)), respect_levels=True)

    @pytest.mark.parametrize("s,n", [(2, 3), (3, 2)])
    def test_equals_disjoint_paths_product(self, s, n):
        P = mckay_praeger(s, n)
        Q = template_product(disjoint_paths_template(s, n))
        assert tile_pairs(P) == tile_pairs(Q)


TEMPLATES = {
    "hexagon": hexagon_template(),
    "complete222": complete_template((2, 2, 2)),
    "complete23": complete_template((2, 3)),
    "paths33": disjoint_paths_template(3, 3),
    "fano": incidence_template(2, 2),
    "ragged": LeveledTemplate((2, 3, 2), ((0, 0, 0), (0, 0, 1), (0, 1, 2), (1, 0, 0), (1, 1, 1), (1, 2, 1), (1, 2, 0))),
}


class TestTemplateProduct:
    @pytest.mark.parametrize("name", TEMPLATES)
    def test_matches_predicate(self, name):
        T = TEMPLATES[name]
        assert tile_pairs(template_product(T)) == predicate_tile(T)

    def test_hexagon_tile(self):
        P = template_product(hexagon_template())
        B = tile(P)
        assert P.m == 9
        assert set(B.out_degree[B.level == 0]) == {6}
        assert len(underlying_components(B)) == 1

    def test_complete_three_levels(self):
        P = template_product(complete_template((2, 2, 2)))
        assert P.m == 8 and set(P.out_degree) == {8}

    def test_unit_levels_give_a_line(self):
        P = template_product(complete_template((1, 1, 1)))
        assert P.m == 1 and len(P.tile_arcs) == 1

    @pytest.mark.parametrize("name", TEMPLATES)
    def test_closed_form_degrees(self, name):
        T = TEMPLATES[name]
        out, inn = template_product_degrees(T)
        P = template_product(T)
        assert np.array_equal(out, P.out_degree) and np.array_equal(inn, P.in_degree)

    @pytest.mark.parametrize("name", ["hexagon", "ragged"])
    def test_index_vector_round_trip(self, name):
        T = TEMPLATES[name]
        P = template_product(T)
        for i, lab in enumerate(P.labels):
            assert product_vector(T, i) == lab and product_index(T, lab) == i

    def test_disconnected_template_is_built(self):
        T = disjoint_paths_template(2, 2)
        assert not T.is_connected()
        assert len(underlying_components(tile(template_product(T)))) == 2


class TestColoured:
    def test_single_colour_matches_plain_product(self):
        T = complete_template((2, 2, 2))
        K = LeveledTemplate(T.levels, T.arcs, colours=(0,) * len(T.arcs))
        assert np.array_equal(coloured_template_product(K).tile_arcs, template_product(T).tile_arcs)

    def test_two_matchings(self):
        arcs = ((0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1))
        colours = (0, 1, 1, 0)  # {00, 11} and {01, 10} are perfect matchings
        K = LeveledTemplate((2, 2), arcs, colours=colours)
        P = coloured_template_product(K)
        assert set(P.out_degree) == {4}
        assert tile_pairs(P) == predicate_tile(K, colour_rule=True)

    def test_colour_rule_by_brute_force(self):
        T = complete_template((2, 2, 2))
        rng = random.Random(5)
        built = 0
        for _ in range(40):
            colours = tuple(rng.randrange(2) for _ in T.arcs)
            K = LeveledTemplate(T.levels, T.arcs, colours=colours)
            expected = predicate_tile(K, colour_rule=True)
            sources = {a for a, _ in expected}
            targets = {b for _, b in expected}
            if len(sources) == len(targets) == 8:
                assert tile_pairs(coloured_template_product(K)) == expected
                built += 1
            else:
                with pytest.raises(ValueError):
                    coloured_template_product(K)
        assert built > 0

    def test_empty_tile_rejected(self):
        T = complete_template((2, 2, 2))
        colours = tuple(j for j, _, _ in T.arcs)  # each level its own colour
        with pytest.raises(ValueError, match="empty tile"):
            coloured_template_product(LeveledTemplate(T.levels, T.arcs, colours=colours))

    def test_uncoloured_template_rejected(self):
        with pytest.raises(ValueError):
            coloured_template_product(hexagon_template())


def verify_path(T, path):
    arcs = set(T.arcs)
    assert len(path) == T.t + 1
    for c, d in zip(path, path[1:]):
        assert all((j, c[j], d[j + 1]) in arcs for j in range(T.t - 1))


class TestConnectingPath:
    def test_complete_template_zero_vectors(self):
        T = complete_template((2, 2, 2))
        path = connecting_path(T, (0, 0, 0), (0, 0, 0))
        assert path[0] == (0, 0, 0) and path[-1] == (0, 0, 0)
        verify_path(T, path)

    def test_unit_path_template(self):
        T = complete_template((1, 1, 1, 1))
        assert connecting_path(T, (0,) * 4, (0,) * 4) == [(0,) * 4] * 5

    @pytest.mark.parametrize("name", ["fano", "hexagon", "complete222", "ragged"])
    def test_random_pairs(self, name):
        T = TEMPLATES[name]
        rng = random.Random(11)
        for _ in range(25):
            a = tuple(rng.randrange(s) for s in T.levels)
            b = tuple(rng.randrange(s) for s in T.levels)
            path = connecting_path(T, a, b)
            assert path[0] == a and path[-1] == b
            verify_path(T, path)

    def test_path_lies_in_a_window(self):
        T = TEMPLATES["ragged"]
        W = window(template_product(T), 0, T.t)
        index = W.label_index()
        path = connecting_path(T, (1, 2, 0), (0, 0, 1))
        for i, (c, d) in enumerate(zip(path, path[1:])):
            assert W.has_arc(index[(i, c)], index[(i + 1, d)])
