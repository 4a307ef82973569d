"""Builders for the highly arc-transitive digraph families.

Every two-ended family is returned as a :class:`PeriodicDigraph` (one tile
repeated along the integers); the tree-based family with universal
reachability is returned as a finite truncation.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .graph import FiniteDigraph, PeriodicDigraph

__all__ = [
    "LeveledTemplate",
    "TreeEdgeGraph",
    "tensor_z_kbar",
    "tree_edge_graph",
    "mckay_praeger",
    "template_product",
    "coloured_template_product",
    "connecting_path",
    "product_index",
    "product_vector",
    "template_product_degrees",
    "hexagon_template",
    "complete_template",
    "disjoint_paths_template",
]


@dataclass(frozen=True)
class LeveledTemplate:
    """Template digraph with levels ``A_0 .. A_{t-1}`` (0-based here).

    ``arcs`` holds triples ``(j, x, y)`` meaning vertex ``x`` of level ``j``
    points to vertex ``y`` of level ``j + 1``. ``colours`` optionally assigns
    an integer colour to each arc, parallel to ``arcs``.
    """

    levels: tuple[int, ...]
    arcs: tuple[tuple[int, int, int], ...]
    colours: tuple[int, ...] | None = None
    labels: tuple[tuple[Any, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        levels = tuple(int(x) for x in self.levels)
        arcs = tuple((int(j), int(x), int(y)) for j, x, y in self.arcs)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "arcs", arcs)
        if self.colours is not None:
            colours = tuple(int(c) for c in self.colours)
            if len(colours) != len(arcs):
                raise ValueError("every template arc needs a colour")
            object.__setattr__(self, "colours", colours)
        if len(levels) < 2:
            raise ValueError("a template needs at least two levels")
        if any(s < 1 for s in levels):
            raise ValueError("template levels must be nonempty")
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate template arc")
        t = len(levels)
        out: dict[tuple[int, int], list[int]] = {}
        inn: dict[tuple[int, int], list[int]] = {}
        for j, x, y in arcs:
            if not 0 <= j < t - 1:
                raise ValueError(f"arc ({j}, {x}, {y}) leaves the last level")
            if not (0 <= x < levels[j] and 0 <= y < levels[j + 1]):
                raise ValueError(f"arc ({j}, {x}, {y}) has an endpoint out of range")
            out.setdefault((j, x), []).append(y)
            inn.setdefault((j + 1, y), []).append(x)
        object.__setattr__(self, "_out", {k: sorted(v) for k, v in out.items()})
        object.__setattr__(self, "_in", {k: sorted(v) for k, v in inn.items()})
        for j in range(t):
            for x in range(levels[j]):
                if j > 0 and not self.in_neighbors(j, x):
                    raise ValueError(f"vertex {x} of level {j} has in-degree 0")
                if j < t - 1 and not self.out_neighbors(j, x):
                    raise ValueError(f"vertex {x} of level {j} has out-degree 0")

    @property
    def t(self) -> int:
        return len(self.levels)

    @property
    def coloured(self) -> bool:
        return self.colours is not None

    def out_neighbors(self, j: int, x: int) -> list[int]:
        return list(self._out.get((j, x), ()))

    def in_neighbors(self, j: int, y: int) -> list[int]:
        return list(self._in.get((j, y), ()))

    def level_arcs(self, j: int, colour: int | None = None) -> np.ndarray:
        """``(k, 2)`` array of ``(x, y)`` for the arcs from level ``j``."""
        rows = [
            (x, y)
            for i, (jj, x, y) in enumerate(self.arcs)
            if jj == j and (colour is None or self.colours[i] == colour)
        ]
        return np.asarray(rows, dtype=np.int64).reshape(-1, 2)

    def uncoloured(self) -> "LeveledTemplate":
        return LeveledTemplate(self.levels, self.arcs, None, self.labels)

    def as_digraph(self) -> FiniteDigraph:
        """The template itself as a levelled finite digraph."""
        offsets = np.concatenate([[0], np.cumsum(self.levels)])
        arcs = [(offsets[j] + x, offsets[j + 1] + y) for j, x, y in self.arcs]
        level = np.repeat(np.arange(self.t), self.levels)
        labels = [(j, x) for j in range(self.t) for x in range(self.levels[j])]
        return FiniteDigraph(int(offsets[-1]), arcs, level=level, labels=labels)

    def is_connected(self) -> bool:
        from .graph import underlying_components

        return len(underlying_components(self.as_digraph())) == 1


@dataclass(frozen=True)
class TreeEdgeGraph:
    """Truncation of the tree-edge digraph on the biregular tree ``T_{a,b}``.

    ``tree_edges[e] = (u, v)`` with ``u`` on the A side and ``v`` on the B side;
    digraph vertex ``e`` is that tree edge. ``witness[(e1, e2)]`` is the tree
    edge between ``e1`` and ``e2``. ``depth[e]`` is the edge distance from the
    root edge.
    """

    graph: FiniteDigraph
    witness: dict[tuple[int, int], int]
    tree_edges: list[tuple[int, int]]
    tree_side: list[str]
    depth: np.ndarray
    a: int
    b: int
    R: int


def tensor_z_kbar(k: int) -> PeriodicDigraph:
    """``Z`` tensor the complete looped digraph on ``k`` vertices."""
    if k < 1:
        raise ValueError("k must be positive")
    arcs = [(x, y) for x in range(k) for y in range(k)]
    return PeriodicDigraph(k, arcs, name=f"Z x K{k}")


def tree_edge_graph(a: int, b: int, R: int) -> TreeEdgeGraph:
    """Tree edges within edge distance ``R`` of a root edge, arcs by the c(e1, e2) rule.

    For every tree edge ``e = uv`` (``u`` in A, ``v`` in B) there is an arc from
    each other edge at ``u`` to each other edge at ``v``.
    """
    if a < 3 or b < 3:
        raise ValueError("both tree degrees must be at least 3")
    if R < 0:
        raise ValueError("truncation radius must be non-negative")

    side = ["A", "B"]
    incident: list[list[int]] = [[0], [0]]
    edges: list[tuple[int, int]] = [(0, 1)]
    depth = [0]
    labels: list[tuple[int, ...]] = [()]
    queue: deque[tuple[int, int]] = deque()

    def grow(e: int, x: int, label_prefix: tuple[int, ...]) -> None:
        width = (a if side[x] == "A" else b) - 1
        for i in range(width):
            y = len(side)
            side.append("B" if side[x] == "A" else "A")
            incident.append([])
            new = len(edges)
            edges.append((x, y) if side[x] == "A" else (y, x))
            depth.append(depth[e] + 1)
            labels.append(label_prefix + (i,))
            incident[x].append(new)
            incident[y].append(new)
            queue.append((new, y))

    if R >= 1:
        grow(0, 0, (0,))
        grow(0, 1, (1,))
    while queue:
        e, x = queue.popleft()
        if depth[e] < R:
            grow(e, x, labels[e])

    arcs = []
    witness: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(edges):
        for e1 in incident[u]:
            if e1 == e:
                continue
            for e2 in incident[v]:
                if e2 == e:
                    continue
                arcs.append((e1, e2))
                witness[(e1, e2)] = e
    depth_arr = np.asarray(depth, dtype=np.int64)
    G = FiniteDigraph(
        len(edges), arcs, core=depth_arr <= R - 2, labels=labels,
        regrow=lambda: tree_edge_graph(a, b, R + 2).graph,
    )
    return TreeEdgeGraph(G, witness, edges, side, depth_arr, a, b, R)


def mckay_praeger(s: int, n: int) -> PeriodicDigraph:
    """``a -> b`` iff ``a_j = b_{j+1}`` for ``j = 1..n-1`` over tuples in ``S^n``."""
    if s < 2:
        raise ValueError("alphabet size must be at least 2")
    if n < 1:
        raise ValueError("tuple length must be at least 1")
    tuples = list(itertools.product(range(s), repeat=n))
    index = {tup: i for i, tup in enumerate(tuples)}
    arcs = [(i, index[(x,) + tup[:-1]]) for i, tup in enumerate(tuples) for x in range(s)]
    return PeriodicDigraph(len(tuples), arcs, labels=tuples, name=f"McKay-Praeger({s},{n})")


def _strides(levels: Sequence[int]) -> np.ndarray:
    strides = np.ones(len(levels), dtype=np.int64)
    for j in range(len(levels) - 2, -1, -1):
        strides[j] = strides[j + 1] * levels[j + 1]
    return strides


def product_index(T: LeveledTemplate, vec: Sequence[int]) -> int:
    """Index within one level of the product digraph of the vector ``vec``."""
    if len(vec) != T.t:
        raise ValueError("vector length must equal the number of template levels")
    return int(np.dot(_strides(T.levels), np.asarray(vec, dtype=np.int64)))


def product_vector(T: LeveledTemplate, index: int) -> tuple[int, ...]:
    return tuple(int(x) for x in np.unravel_index(int(index), T.levels))


def _product_tile_arcs(levels: Sequence[int], level_arcs: Sequence[np.ndarray]) -> np.ndarray:
    # arc (a, b) is fixed by a free last coordinate of a, a free first
    # coordinate of b, and one template arc (a_j, b_{j+1}) per level j
    t = len(levels)
    strides = _strides(levels)
    dims = 2 + (t - 1)
    src = np.arange(levels[-1], dtype=np.int64).reshape((-1,) + (1,) * (dims - 1)) * strides[-1]
    dst = np.arange(levels[0], dtype=np.int64).reshape((1, -1) + (1,) * (dims - 2)) * strides[0]
    for j, ea in enumerate(level_arcs):
        shape = [1] * dims
        shape[2 + j] = -1
        src = src + ea[:, 0].reshape(shape) * strides[j]
        dst = dst + ea[:, 1].reshape(shape) * strides[j + 1]
    src, dst = np.broadcast_arrays(src, dst)
    return np.stack([src.ravel(), dst.ravel()], axis=1)


def template_product(T: LeveledTemplate) -> PeriodicDigraph:
    """Product digraph ``D(T)``: ``a -> b`` iff ``(a_j, b_{j+1})`` is a template arc for all j."""
    if T.coloured:
        raise ValueError("coloured template: use coloured_template_product")
    level_arcs = [T.level_arcs(j) for j in range(T.t - 1)]
    arcs = _product_tile_arcs(T.levels, level_arcs)
    m = int(np.prod(T.levels))
    labels = list(itertools.product(*(range(s) for s in T.levels)))
    return PeriodicDigraph(m, arcs, labels=labels, name=f"D(T) levels={list(T.levels)}")


def coloured_template_product(K: LeveledTemplate) -> PeriodicDigraph:
    """Coloured product: all the template arcs used by a tile arc share one colour.

    The coloured template's levels ``V_0..V_m`` are the levels of ``K`` in
    order, so the same coordinate convention as :func:`template_product`
    applies with every coordinate index shifted down by one.
    """
    if not K.coloured:
        raise ValueError("template has no colours")
    chunks = []
    for c in sorted(set(K.colours)):
        level_arcs = [K.level_arcs(j, colour=c) for j in range(K.t - 1)]
        if any(len(ea) == 0 for ea in level_arcs):
            continue
        chunks.append(_product_tile_arcs(K.levels, level_arcs))
    m = int(np.prod(K.levels))
    if not chunks:
        raise ValueError("no monochromatic arc combination; the coloured product has an empty tile")
    arcs = np.concatenate(chunks)
    codes = np.unique(arcs[:, 0] * m + arcs[:, 1])
    arcs = np.stack([codes // m, codes % m], axis=1)
    labels = list(itertools.product(*(range(s) for s in K.levels)))
    return PeriodicDigraph(m, arcs, labels=labels, name=f"coloured D(K) levels={list(K.levels)}")


def template_product_degrees(T: LeveledTemplate) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (out, in) degrees of every level index of ``D(T)``."""
    t = T.t
    dplus = [np.asarray([len(T.out_neighbors(j, x)) for x in range(T.levels[j])]) for j in range(t)]
    dminus = [np.asarray([len(T.in_neighbors(j, x)) for x in range(T.levels[j])]) for j in range(t)]
    out = np.full(T.levels, T.levels[0], dtype=np.int64)
    inn = np.full(T.levels, T.levels[-1], dtype=np.int64)
    for j in range(t):
        shape = [1] * t
        shape[j] = -1
        if j < t - 1:
            out = out * dplus[j].reshape(shape)
        if j > 0:
            inn = inn * dminus[j].reshape(shape)
    return out.ravel(), inn.ravel()


def _through_path(T: LeveledTemplate, j: int, x: int) -> list[int]:
    """A directed path with one vertex on every level that passes through ``(j, x)``."""
    path = [0] * T.t
    path[j] = x
    for i in range(j, 0, -1):
        prev = T.in_neighbors(i, path[i])
        if not prev:
            raise ValueError(f"no through-path for coordinate {j + 1} (vertex {x}): stuck at level {i}")
        path[i - 1] = prev[0]
    for i in range(j, T.t - 1):
        nxt = T.out_neighbors(i, path[i])
        if not nxt:
            raise ValueError(f"no through-path for coordinate {j + 1} (vertex {x}): stuck at level {i}")
        path[i + 1] = nxt[0]
    return path


def connecting_path(T: LeveledTemplate, a: Sequence[int], b: Sequence[int]) -> list[tuple[int, ...]]:
    """Directed path ``c_0 = a, ..., c_t = b`` in ``D(T)`` from level 0 to level ``t``.

    With 1-based coordinates, ``c_{i,j}`` is the level-``j`` vertex of the
    through-path of ``a_{j-i}`` when ``i < j`` and of the through-path of
    ``b_{j+t-i}`` otherwise.
    """
    t = T.t
    if len(a) != t or len(b) != t:
        raise ValueError("endpoints must be vectors with one coordinate per template level")
    for j in range(t):
        if not (0 <= a[j] < T.levels[j] and 0 <= b[j] < T.levels[j]):
            raise ValueError(f"coordinate {j + 1} out of range")
    P = {i: _through_path(T, i - 1, a[i - 1]) for i in range(1, t + 1)}
    Q = {i: _through_path(T, i - 1, b[i - 1]) for i in range(1, t + 1)}
    path = []
    for i in range(t + 1):
        c = []
        for j in range(1, t + 1):
            c.append(P[j - i][j - 1] if i < j else Q[j + t - i][j - 1])
        path.append(tuple(c))
    return path


def hexagon_template() -> LeveledTemplate:
    """Directed K_{3,3} minus a perfect matching: the alternately oriented 6-cycle."""
    arcs = [(0, i, i) for i in range(3)] + [(0, i, (i + 1) % 3) for i in range(3)]
    return LeveledTemplate((3, 3), tuple(sorted(arcs)))


def complete_template(sizes: Sequence[int]) -> LeveledTemplate:
    arcs = [
        (j, x, y)
        for j in range(len(sizes) - 1)
        for x in range(sizes[j])
        for y in range(sizes[j + 1])
    ]
    return LeveledTemplate(tuple(sizes), tuple(arcs))


def disjoint_paths_template(s: int, n: int) -> LeveledTemplate:
    """``s`` disjoint directed paths on ``n`` levels; its product is the McKay-Praeger digraph."""
    arcs = [(j, x, x) for j in range(n - 1) for x in range(s)]
    return LeveledTemplate((s,) * n, tuple(arcs))
