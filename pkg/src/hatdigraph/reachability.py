"""Alternating-walk reachability classes of arcs.

Two arcs are equivalent when an alternating walk (arcs used alternately
forwards and backwards, revisits allowed) starts with one and ends with the
other. Consecutive arcs of such a walk share a tail, then a head, then a
tail, and so on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graph import FiniteDigraph

__all__ = [
    "ArcPartition",
    "UniversalityVerdict",
    "RDigraphReport",
    "BipartiteVerdict",
    "alternating_class",
    "alternating_walk",
    "is_alternating_walk",
    "reach_partition",
    "r_digraph",
    "is_complete_bipartite",
    "universality_certificate",
]

TAIL, HEAD = 0, 1


def _arc_index(G: FiniteDigraph, e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= e < G.num_arcs:
            raise KeyError(f"arc id {e} out of range")
        return int(e)
    u, v = e
    return G.arc_id(u, v)


def _neighbours(G: FiniteDigraph, a: int, polarity: int) -> np.ndarray:
    # arcs sharing the tail (polarity TAIL) or the head (polarity HEAD) of a
    if polarity == TAIL:
        return G.out_arc_ids(int(G.arcs[a, 0]))
    return G.in_arc_ids(int(G.arcs[a, 1]))


def _state_bfs(G: FiniteDigraph, e: int, target: int | None = None):
    """BFS over (arc, polarity) states; polarity is the endpoint the next arc must share."""
    parent: dict[tuple[int, int], tuple[int, int] | None] = {(e, TAIL): None, (e, HEAD): None}
    queue = deque(parent)
    seen_arcs = {e}
    while queue:
        a, p = queue.popleft()
        for b in _neighbours(G, a, p).tolist():
            state = (b, 1 - p)
            if state in parent:
                continue
            parent[state] = (a, p)
            seen_arcs.add(b)
            if b == target:
                return seen_arcs, parent, state
            queue.append(state)
    return seen_arcs, parent, None


def alternating_class(G: FiniteDigraph, e) -> set[int]:
    """Ids of all arcs reachable from arc ``e`` (an id or a ``(u, v)`` pair)."""
    e = _arc_index(G, e)
    arcs, _, _ = _state_bfs(G, e)
    return arcs


def alternating_walk(G: FiniteDigraph, e, f) -> list[int] | None:
    """Shortest alternating walk from arc ``e`` to arc ``f`` as a list of arc ids."""
    e, f = _arc_index(G, e), _arc_index(G, f)
    if e == f:
        return [e]
    _, parent, hit = _state_bfs(G, e, target=f)
    if hit is None:
        return None
    walk = []
    state: tuple[int, int] | None = hit
    while state is not None:
        walk.append(state[0])
        state = parent[state]
    return walk[::-1]


def is_alternating_walk(G: FiniteDigraph, walk: Sequence[int]) -> bool:
    """Consecutive arcs share tails and heads alternately (either phase)."""
    if len(walk) == 0:
        return False
    if any(not 0 <= a < G.num_arcs for a in walk):
        return False
    if len(walk) == 1:
        return True
    A = G.arcs
    for first in (TAIL, HEAD):
        p = first
        ok = True
        for a, b in zip(walk, walk[1:]):
            if A[a, p] != A[b, p]:
                ok = False
                break
            p = 1 - p
        if ok:
            return True
    return False


@dataclass
class ArcPartition:
    """Reachability classes of the arcs of one digraph.

    ``class_of[a]`` is the class id of arc ``a``; classes are numbered by
    their least arc id. ``witnesses[(rep, a)]`` is an alternating walk (arc
    ids) from the class representative ``rep`` to ``a``, stored for a sample
    of arcs in every class.
    """

    class_of: np.ndarray
    classes: list[np.ndarray]
    witnesses: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list[int]:
        return [int(c[0]) for c in self.classes]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def equivalent(self, a: int, b: int) -> bool:
        return bool(self.class_of[a] == self.class_of[b])


def reach_partition(G: FiniteDigraph, witnesses_per_class: int = 2) -> ArcPartition:
    """Partition all arcs into alternating-reachability classes.

    Arcs sharing a tail or a head are equivalent, so a class is a connected
    component of the graph joining the tail-copy of ``u`` to the head-copy of
    ``v`` for every arc ``(u, v)``.
    """
    n, E = G.n, G.num_arcs
    if E == 0:
        return ArcPartition(np.zeros(0, dtype=np.int64), [])
    adj = coo_matrix((np.ones(E, dtype=np.int8), (G.arcs[:, 0], n + G.arcs[:, 1])), shape=(2 * n, 2 * n))
    _, comp = connected_components(adj, directed=False)
    _, first, inv = np.unique(comp[G.arcs[:, 0]], return_index=True, return_inverse=True)
    # renumber classes by least arc id
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    class_of = rank[inv]
    members = np.argsort(class_of, kind="stable")
    bounds = np.cumsum(np.bincount(class_of, minlength=len(first)))[:-1]
    classes = np.split(members, bounds)
    part = ArcPartition(class_of, classes)
    if witnesses_per_class > 0:
        for cls in classes:
            rep = int(cls[0])
            picks = np.unique(np.linspace(0, len(cls) - 1, witnesses_per_class + 1).astype(int))[1:]
            for i in picks:
                target = int(cls[i])
                walk = alternating_walk(G, rep, target)
                if walk is not None:
                    part.witnesses[(rep, target)] = walk
    return part


@dataclass
class RDigraphReport:
    graph: FiniteDigraph
    class_id: int
    num_classes: int
    class_sizes: list[int]
    all_isomorphic: bool | None


def r_digraph(G: FiniteDigraph, which: int = 0, check_isomorphism: bool = True, cap: int = 10**6) -> RDigraphReport:
    """Digraph formed by one reachability class, plus an all-classes-isomorphic check."""
    if G.num_arcs == 0:
        raise ValueError("digraph has no arcs")
    part = reach_partition(G, witnesses_per_class=0)
    R = G.arc_subgraph(part.classes[which])
    same: bool | None = None
    if check_isomorphism:
        from .symmetry import isomorphic

        same = all(
            isomorphic(R, G.arc_subgraph(c), respect_levels=False, cap=cap)
            for i, c in enumerate(part.classes)
            if i != which
        )
    return RDigraphReport(R, which, part.num_classes, part.sizes, same)


@dataclass
class BipartiteVerdict:
    complete: bool
    sources: np.ndarray
    sinks: np.ndarray
    missing: tuple[int, int] | None = None


def is_complete_bipartite(G: FiniteDigraph) -> BipartiteVerdict:
    """Is every (source, sink) pair an arc?  Isolated vertices are ignored."""
    sources = np.flatnonzero(G.out_degree > 0)
    sinks = np.flatnonzero(G.in_degree > 0)
    both = np.intersect1d(sources, sinks)
    if len(both):
        raise ValueError(f"vertex {int(both[0])} has both in- and out-arcs; not bipartitely oriented")
    if G.num_arcs == len(sources) * len(sinks):
        return BipartiteVerdict(True, sources, sinks)
    pairs = np.stack(np.meshgrid(sources, sinks, indexing="ij"), axis=-1).reshape(-1, 2)
    absent = pairs[~G.has_arcs(pairs)]
    u, v = absent[0]
    return BipartiteVerdict(False, sources, sinks, (int(u), int(v)))


@dataclass
class UniversalityVerdict:
    """``kind`` is ``UniversalOnCore``, ``Refuted`` or ``Inconclusive``.

    ``arcs`` holds two separated core arcs (ids in the tested graph) when
    refuted. This is always a statement about the window, never about the
    infinite digraph.
    """

    kind: str
    arcs: tuple[int, int] | None = None
    reason: str = ""
    core_arcs: int = 0
    core_classes: int = 0
    core_size: int = 0


def _core_classes(G: FiniteDigraph, part: ArcPartition) -> np.ndarray:
    return np.unique(part.class_of[G.core_arc_mask()])


def universality_certificate(G: FiniteDigraph, grown: FiniteDigraph | None = None) -> UniversalityVerdict:
    """Window-level universality test for the arcs with both ends in the core.

    A separation is only reported as ``Refuted`` if it survives in ``grown``,
    a larger window whose label table contains every label of ``G`` (the
    same construction with a wider margin). ``grown`` defaults to
    ``G.regrow()`` when the builder supplied one. Otherwise a separation is
    ``Inconclusive``.
    """
    if G.core is None or not G.core.any():
        raise ValueError("universality needs a nonempty core")
    core_size = int(G.core.sum())
    mask = G.core_arc_mask()
    core_ids = np.flatnonzero(mask)
    if len(core_ids) < 2:
        return UniversalityVerdict("Inconclusive", reason="fewer than two core arcs", core_arcs=len(core_ids), core_size=core_size)
    part = reach_partition(G, witnesses_per_class=0)
    cls = part.class_of[core_ids]
    if np.all(cls == cls[0]):
        return UniversalityVerdict("UniversalOnCore", core_arcs=len(core_ids), core_classes=1, core_size=core_size)
    e = int(core_ids[0])
    f = int(core_ids[np.flatnonzero(cls != cls[0])[0]])
    ncls = len(np.unique(cls))
    if grown is None and G.regrow is not None:
        grown = G.regrow()
    if grown is None:
        return UniversalityVerdict(
            "Inconclusive", reason="separated on this window; no larger window for the saturation check",
            core_arcs=len(core_ids), core_classes=ncls, core_size=core_size,
        )
    index = grown.label_index()
    emb = np.asarray([index[lab] for lab in G.labels], dtype=np.int64)
    gpart = reach_partition(grown, witnesses_per_class=0)
    gids = np.asarray([grown.arc_id(*emb[G.arcs[a]]) for a in core_ids], dtype=np.int64)
    gcls = gpart.class_of[gids]
    # the separation must persist, and no two core classes may merge
    pairs = set(zip(cls.tolist(), gcls.tolist()))
    if len(np.unique(gcls)) == ncls and len(pairs) == ncls:
        return UniversalityVerdict("Refuted", arcs=(e, f), core_arcs=len(core_ids), core_classes=ncls, core_size=core_size)
    return UniversalityVerdict(
        "Inconclusive", reason="core classes merge in the larger window",
        core_arcs=len(core_ids), core_classes=ncls, core_size=core_size,
    )
