"""Automorphisms, s-arcs, clones, levelings and quotients of finite digraphs.

The automorphism engine is a plain individualise-and-refine backtracker:
colour refinement over out- and in-neighbour colour multisets on the
disjoint union of the two graphs, branching on the smallest non-singleton
cell. No canonical labelling.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .graph import FiniteDigraph, level_shift

__all__ = [
    "SearchCapExceeded",
    "find_isomorphism",
    "find_automorphism",
    "isomorphic",
    "is_automorphism",
    "sample_automorphisms",
    "enumerate_s_arcs",
    "SArcReport",
    "s_arc_transitivity_report",
    "CloneReport",
    "clone_classes",
    "LevelingResult",
    "property_z_check",
    "walk_displacement",
    "quotient_by_partition",
]

DEFAULT_CAP = 10**6


class SearchCapExceeded(RuntimeError):
    """A seeded search visited more backtrack nodes than allowed."""


def _refine(colors: list[int], out_adj: list[list[int]], in_adj: list[list[int]]) -> list[int]:
    ncol = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in out_adj[v])), tuple(sorted(colors[w] for w in in_adj[v])))
            for v in range(len(colors))
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncol:
            return colors
        ncol = len(rank)


def _adjacency(G: FiniteDigraph, offset: int) -> tuple[list[list[int]], list[list[int]]]:
    out_adj: list[list[int]] = [[] for _ in range(G.n)]
    in_adj: list[list[int]] = [[] for _ in range(G.n)]
    for u, v in G.arcs.tolist():
        out_adj[u].append(v + offset)
        in_adj[v].append(u + offset)
    return out_adj, in_adj


def _base_colours(G: FiniteDigraph, respect_levels: bool) -> list[int]:
    if respect_levels and G.level is not None and G.n:
        return (G.level - G.level.min()).tolist()
    return [0] * G.n


def find_isomorphism(
    G: FiniteDigraph,
    H: FiniteDigraph,
    seed: Iterable[tuple[int, int]] = (),
    cap: int = DEFAULT_CAP,
    respect_levels: bool = True,
    rng: np.random.Generator | None = None,
) -> np.ndarray | None:
    """Bijection ``phi`` with ``(u, v)`` an arc of G iff ``(phi[u], phi[v])`` is an arc of H.

    ``seed`` pairs are forced. With ``respect_levels`` (and levels on both
    graphs) levels are preserved up to the difference of the two minima.
    Deterministic unless ``rng`` is given, which only shuffles branch order.
    Raises :class:`SearchCapExceeded` after ``cap`` backtrack nodes.
    """
    if G.n != H.n or G.num_arcs != H.num_arcs:
        return None
    N = G.n
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    for u, w in seed:
        u, w = int(u), int(w)
        if not (0 <= u < N and 0 <= w < N):
            raise ValueError("seed vertex out of range")
        if fwd.get(u, w) != w or bwd.get(w, u) != u:
            return None  # not injective: no bijection extends it
        fwd[u] = w
        bwd[w] = u
    if N == 0:
        return np.zeros(0, dtype=np.int64)

    go, gi = _adjacency(G, 0)
    ho, hi = _adjacency(H, N)
    out_adj, in_adj = go + ho, gi + hi
    use_levels = respect_levels and G.level is not None and H.level is not None
    colors = _base_colours(G, use_levels) + _base_colours(H, use_levels)
    top = max(colors) + 1
    for i, (u, w) in enumerate(sorted(fwd.items())):
        colors[u] = colors[N + w] = top + i

    nodes = 0

    def search(colors: list[int]) -> np.ndarray | None:
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise SearchCapExceeded(f"more than {cap} backtrack nodes")
        colors = _refine(colors, out_adj, in_adj)
        left = Counter(colors[:N])
        if left != Counter(colors[N:]):
            return None
        cells = [c for c, k in left.items() if k > 1]
        if not cells:
            pos = {c: w for w, c in enumerate(colors[N:])}
            phi = np.asarray([pos[c] for c in colors[:N]], dtype=np.int64)
            if H.has_arcs(phi[G.arcs]).all():
                return phi
            return None
        cell = min(cells, key=lambda c: (left[c], c))
        v = colors.index(cell)
        cands = [w for w in range(N) if colors[N + w] == cell]
        if rng is not None:
            rng.shuffle(cands)
        fresh = max(colors) + 1
        for w in cands:
            trial = list(colors)
            trial[v] = trial[N + w] = fresh
            phi = search(trial)
            if phi is not None:
                return phi
        return None

    return search(colors)


def find_automorphism(
    G: FiniteDigraph,
    seed: Iterable[tuple[int, int]] = (),
    cap: int = DEFAULT_CAP,
    respect_levels: bool = True,
    rng: np.random.Generator | None = None,
) -> np.ndarray | None:
    return find_isomorphism(G, G, seed=seed, cap=cap, respect_levels=respect_levels, rng=rng)


def isomorphic(G: FiniteDigraph, H: FiniteDigraph, respect_levels: bool = False, cap: int = DEFAULT_CAP) -> bool:
    return find_isomorphism(G, H, cap=cap, respect_levels=respect_levels) is not None


def is_automorphism(G: FiniteDigraph, phi: Sequence[int] | np.ndarray) -> bool:
    phi = np.asarray(phi, dtype=np.int64)
    if sorted(phi.tolist()) != list(range(G.n)):
        return False
    return bool(G.has_arcs(phi[G.arcs]).all())


def sample_automorphisms(
    G: FiniteDigraph, count: int, seed: int = 0, respect_levels: bool = True, cap: int = DEFAULT_CAP
) -> list[np.ndarray]:
    """Up to ``count`` automorphisms from randomly seeded searches."""
    rng = np.random.default_rng(seed)
    out_adj, in_adj = _adjacency(G, 0)
    colors = _refine(_base_colours(G, respect_levels), out_adj, in_adj)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    found = []
    for _ in range(4 * count):
        if len(found) == count or G.n == 0:
            break
        u = int(rng.integers(G.n))
        w = int(rng.choice(cells[colors[u]]))
        phi = find_automorphism(G, [(u, w)], cap=cap, respect_levels=respect_levels, rng=rng)
        if phi is not None:
            found.append(phi)
    return found


def enumerate_s_arcs(G: FiniteDigraph, s: int) -> np.ndarray:
    """All s-arcs as rows of an ``(N, s + 1)`` array, in lexicographic order."""
    if s < 0:
        raise ValueError("s must be non-negative")
    paths = np.arange(G.n, dtype=np.int64).reshape(-1, 1)
    indptr, idx = G._out
    for step in range(s):
        last = paths[:, -1]
        deg = indptr[last + 1] - indptr[last]
        rows = np.repeat(np.arange(len(paths)), deg)
        starts = np.repeat(indptr[last], deg)
        within = np.arange(len(rows)) - np.repeat(np.cumsum(deg) - deg, deg)
        nxt = idx[starts + within]
        paths = np.concatenate([paths[rows], nxt[:, None]], axis=1)
        if step >= 1:
            paths = paths[paths[:, -1] != paths[:, -3]]
    return paths


@dataclass
class SArcReport:
    """Orbits of the core s-arcs under automorphisms of the window.

    Window automorphisms need not extend to the infinite digraph, so a
    ``Transitive`` verdict is evidence, never proof.
    """

    verdict: str
    orbit_count: int
    s: int
    core_size: int
    num_s_arcs: int
    searches: int
    cap_hit: bool
    shift_used: bool = False
    representatives: list[tuple[int, ...]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "orbit_count": self.orbit_count,
            "s": self.s,
            "core_size": self.core_size,
            "searches": self.searches,
            "cap_hit": self.cap_hit,
            "shift_used": self.shift_used,
        }


def s_arc_transitivity_report(
    G: FiniteDigraph,
    s: int,
    core: Sequence[bool] | np.ndarray | None = None,
    cap: int = DEFAULT_CAP,
    respect_levels: bool = True,
    use_shift: bool = True,
) -> SArcReport:
    """Partition core s-arcs into orbits.

    An s-arc counts as a core s-arc when all its vertices except possibly the
    last lie in the core. Orbits are first computed under window
    automorphisms, level by level: every automorphism found is applied to all
    s-arcs through a union-find, so only one search per new generator or per
    confirmed separation between representatives is needed.

    A finite window has no automorphism moving levels, so orbits on different
    levels are then merged through the level shift when
    :func:`~hatdigraph.graph.level_shift` certifies it on this window.
    """
    mask = np.asarray(core, dtype=bool) if core is not None else (G.core if G.core is not None else np.ones(G.n, bool))
    if not mask.any():
        raise ValueError("core is empty")
    arcs = enumerate_s_arcs(G, s)
    arcs = arcs[mask[arcs[:, : max(s, 1)]].all(axis=1)]
    N = len(arcs)
    core_size = int(mask.sum())
    if N == 0:
        return SArcReport("Inconclusive", 0, s, core_size, 0, 0, False)
    index = {tuple(r): i for i, r in enumerate(arcs.tolist())}
    ds = DisjointSet(range(N))
    by_level = respect_levels and G.level is not None
    start = G.level[arcs[:, 0]].tolist() if by_level else [0] * N
    reps_at: dict[int, list[int]] = {}
    searches = 0
    cap_hit = False
    for x in range(N):
        reps = reps_at.setdefault(start[x], [])
        if any(ds.connected(x, r) for r in reps):
            continue
        for r in reps:
            searches += 1
            try:
                phi = find_automorphism(G, zip(arcs[r], arcs[x]), cap=cap, respect_levels=respect_levels)
            except SearchCapExceeded:
                cap_hit = True
                phi = None
            if phi is None:
                continue
            for i, img in enumerate(phi[arcs].tolist()):
                j = index.get(tuple(img))
                if j is not None:
                    ds.merge(i, j)
            break
        else:
            reps.append(x)
    shift = level_shift(G) if use_shift else None
    if shift is not None:
        for i, img in enumerate(shift[arcs].tolist()):
            j = index.get(tuple(img))
            if j is not None:
                ds.merge(i, j)
    reps = sorted(min(c) for c in ds.subsets())
    if cap_hit:
        verdict = "Inconclusive"
    else:
        verdict = "Transitive" if len(reps) == 1 else "NotTransitive"
    return SArcReport(
        verdict, len(reps), s, core_size, N, searches, cap_hit, shift is not None,
        representatives=[tuple(int(v) for v in arcs[r]) for r in reps],
    )


@dataclass
class CloneReport:
    """Right clones share out-neighbourhoods, left clones share in-neighbourhoods.

    ``c_plus``/``c_minus`` are the clone-class sizes on the core when they are
    constant there, else ``None``; ``c_plus_values`` lists what was seen.
    """

    right_classes: list[np.ndarray]
    left_classes: list[np.ndarray]
    right_size: np.ndarray
    left_size: np.ndarray
    c_plus: int | None
    c_minus: int | None
    c_plus_values: list[int]
    c_minus_values: list[int]

    @property
    def c_plus_constant(self) -> bool:
        return self.c_plus is not None

    @property
    def c_minus_constant(self) -> bool:
        return self.c_minus is not None


def _group_by_neighbourhood(n: int, indptr: np.ndarray, idx: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    groups: dict[bytes, list[int]] = {}
    for v in range(n):
        groups.setdefault(idx[indptr[v] : indptr[v + 1]].tobytes(), []).append(v)
    classes = sorted((np.asarray(g, dtype=np.int64) for g in groups.values()), key=lambda a: int(a[0]))
    size = np.empty(n, dtype=np.int64)
    for c in classes:
        size[c] = len(c)
    return classes, size


def clone_classes(G: FiniteDigraph, core: Sequence[bool] | np.ndarray | None = None) -> CloneReport:
    mask = np.asarray(core, dtype=bool) if core is not None else (G.core if G.core is not None else np.ones(G.n, bool))
    right, rsize = _group_by_neighbourhood(G.n, *G._out)
    left, lsize = _group_by_neighbourhood(G.n, *G._in[:2])
    cp = sorted(set(rsize[mask].tolist()))
    cm = sorted(set(lsize[mask].tolist()))
    return CloneReport(
        right, left, rsize, lsize,
        cp[0] if len(cp) == 1 else None,
        cm[0] if len(cm) == 1 else None,
        cp, cm,
    )


@dataclass
class LevelingResult:
    """Either a leveling ``f`` with ``f(v) = f(u) + 1`` on arcs, or an obstruction.

    The obstruction is a closed walk in the underlying graph given as steps
    ``(x, y, +1)`` (arc x->y used forwards) or ``(x, y, -1)`` (arc y->x used
    backwards) whose signs do not sum to zero.
    """

    consistent: bool
    f: np.ndarray | None = None
    walk: list[tuple[int, int, int]] | None = None

    @property
    def displacement(self) -> int:
        return 0 if self.walk is None else sum(s for _, _, s in self.walk)


def walk_displacement(G: FiniteDigraph, walk: Sequence[tuple[int, int, int]]) -> int:
    """Replay a signed closed walk against G and return its net displacement."""
    if not walk:
        raise ValueError("empty walk")
    for (x, y, s), (x2, _, _) in zip(walk, list(walk[1:]) + [walk[0]]):
        if y != x2:
            raise ValueError("walk is not closed or not contiguous")
        if s == 1 and not G.has_arc(x, y):
            raise ValueError(f"no arc {x}->{y}")
        if s == -1 and not G.has_arc(y, x):
            raise ValueError(f"no arc {y}->{x}")
        if s not in (1, -1):
            raise ValueError("step sign must be +1 or -1")
    return sum(s for _, _, s in walk)


def property_z_check(G: FiniteDigraph) -> LevelingResult:
    """Search for a homomorphism onto the directed line, component by component.

    When G carries levels, each component's root keeps its level, so a
    consistent result on a window reproduces the level labels.
    """
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(G.n)]
    for u, v in G.arcs.tolist():
        nbrs[u].append((v, 1))
        nbrs[v].append((u, -1))
    f = np.zeros(G.n, dtype=np.int64)
    parent: list[tuple[int, int] | None] = [None] * G.n
    seen = np.zeros(G.n, dtype=bool)

    def to_root(x: int) -> list[tuple[int, int, int]]:
        steps = []
        while parent[x] is not None:
            p, s = parent[x]
            steps.append((x, p, -s))
            x = p
        return steps

    for root in range(G.n):
        if seen[root]:
            continue
        seen[root] = True
        f[root] = 0 if G.level is None else G.level[root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, s in nbrs[x]:
                if not seen[y]:
                    seen[y] = True
                    f[y] = f[x] + s
                    parent[y] = (x, s)
                    queue.append(y)
                elif f[y] != f[x] + s:
                    # root -> x, the offending step, then y -> root
                    down = [(b, a, -t) for a, b, t in reversed(to_root(x))]
                    walk = down + [(x, y, s)] + to_root(y)
                    return LevelingResult(False, walk=walk)
    return LevelingResult(True, f=f)


def quotient_by_partition(G: FiniteDigraph, blocks: Sequence[Iterable[int]] | np.ndarray) -> FiniteDigraph:
    """Contract every block to a vertex, dropping loops and merging parallel arcs.

    ``blocks`` is either a list of vertex collections or a block id per vertex.
    Block ``i`` of the result is the ``i``-th block (ids in increasing order).
    Levels survive when every block is level-homogeneous.
    """
    if isinstance(blocks, np.ndarray) and blocks.ndim == 1 and len(blocks) == G.n and blocks.dtype.kind in "iu":
        block_of = blocks.astype(np.int64)
        ids, block_of = np.unique(block_of, return_inverse=True)
        k = len(ids)
    else:
        block_of = np.full(G.n, -1, dtype=np.int64)
        k = 0
        for i, blk in enumerate(blocks):
            members = list(blk)
            if not members:
                raise ValueError(f"block {i} is empty")
            for v in members:
                if not 0 <= v < G.n:
                    raise ValueError(f"vertex {v} out of range")
                if block_of[v] != -1:
                    raise ValueError(f"vertex {v} lies in two blocks")
                block_of[v] = i
            k += 1
        if np.any(block_of == -1):
            raise ValueError(f"vertex {int(np.flatnonzero(block_of == -1)[0])} lies in no block")
    arcs = block_of[G.arcs]
    arcs = arcs[arcs[:, 0] != arcs[:, 1]]
    if len(arcs):
        codes = np.unique(arcs[:, 0] * k + arcs[:, 1])
        arcs = np.stack([codes // k, codes % k], axis=1)
    level = None
    if G.level is not None:
        lv = np.full(k, 0, dtype=np.int64)
        lv[block_of] = G.level
        if np.array_equal(lv[block_of], G.level):
            level = lv
    return FiniteDigraph(k, arcs, level=level)
