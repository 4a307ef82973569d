"""Finite and periodic digraph containers plus basic structural queries.

Vertices are dense integer indices ``0..n-1``. Arcs are kept as a sorted
``(E, 2)`` integer array, so an arc id is simply its row number. Out- and
in-adjacency (CSR style) are built lazily once and never mutated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "FiniteDigraph",
    "PeriodicDigraph",
    "DegreeProfile",
    "window",
    "tile",
    "degree_profile",
    "underlying_components",
    "level_shift",
]


def _as_arc_array(arcs: Any) -> np.ndarray:
    arr = np.asarray(arcs, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"arcs must have shape (E, 2), got {arr.shape}")
    return arr


def _sort_arcs(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    return arr[order]


class FiniteDigraph:
    """Loopless digraph on vertices ``0..n-1`` with an arc *set*.

    ``level`` (optional) is an integer per vertex; when given, every arc must
    climb exactly one level. ``core`` (optional) is a boolean mask marking the
    vertices far enough from a truncation boundary to have their full
    neighbourhoods. ``labels`` is a free-form, human-readable table used for
    reports and for embedding one window into a larger one. ``regrow``
    (optional, set by builders) returns the same construction two levels
    wider on each side, with a compatible label table.
    """

    def __init__(
        self,
        n: int,
        arcs: Any = (),
        level: Sequence[int] | np.ndarray | None = None,
        core: Sequence[bool] | np.ndarray | None = None,
        labels: Sequence[Any] | None = None,
        regrow: Callable[[], "FiniteDigraph"] | None = None,
    ):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arr = _sort_arcs(_as_arc_array(arcs))
        if len(arr):
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("arc endpoint out of range")
            if np.any(arr[:, 0] == arr[:, 1]):
                u = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
                raise ValueError(f"loop at vertex {u}")
            dup = np.all(arr[1:] == arr[:-1], axis=1)
            if np.any(dup):
                u, v = arr[1:][dup][0]
                raise ValueError(f"duplicate arc ({u}, {v})")
        arr.setflags(write=False)
        self.n = n
        self.arcs = arr

        if level is not None:
            lv = np.asarray(level, dtype=np.int64)
            if lv.shape != (n,):
                raise ValueError("level must have one entry per vertex")
            if len(arr) and np.any(lv[arr[:, 1]] != lv[arr[:, 0]] + 1):
                bad = np.flatnonzero(lv[arr[:, 1]] != lv[arr[:, 0]] + 1)[0]
                u, v = arr[bad]
                raise ValueError(f"arc ({u}, {v}) does not climb exactly one level")
            lv.setflags(write=False)
            self.level = lv
        else:
            self.level = None

        if core is not None:
            cm = np.asarray(core, dtype=bool)
            if cm.shape != (n,):
                raise ValueError("core must be a boolean mask over vertices")
            cm.setflags(write=False)
            self.core = cm
        else:
            self.core = None

        if labels is not None:
            labels = list(labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per vertex")
        self.labels = labels
        self.regrow = regrow

    # -- basic accessors -------------------------------------------------

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def __repr__(self) -> str:
        extra = ", levelled" if self.level is not None else ""
        return f"FiniteDigraph(n={self.n}, arcs={self.num_arcs}{extra})"

    def __eq__(self, other: object) -> bool:
        # core is a truncation annotation, not part of graph identity
        if not isinstance(other, FiniteDigraph):
            return NotImplemented
        if self.n != other.n or not np.array_equal(self.arcs, other.arcs):
            return False
        if (self.level is None) != (other.level is None):
            return False
        if self.level is not None and not np.array_equal(self.level, other.level):
            return False
        return self.labels == other.labels

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def _codes(self) -> np.ndarray:
        return self.arcs[:, 0] * max(self.n, 1) + self.arcs[:, 1]

    @cached_property
    def _out(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.arcs[:, 0], minlength=self.n), out=indptr[1:])
        return indptr, self.arcs[:, 1].copy()

    @cached_property
    def _in(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        order = np.lexsort((self.arcs[:, 0], self.arcs[:, 1]))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.arcs[:, 1], minlength=self.n), out=indptr[1:])
        return indptr, self.arcs[order, 0], order

    @cached_property
    def out_degree(self) -> np.ndarray:
        return np.diff(self._out[0])

    @cached_property
    def in_degree(self) -> np.ndarray:
        return np.diff(self._in[0])

    def out_neighbors(self, u: int) -> np.ndarray:
        indptr, idx = self._out
        return idx[indptr[u] : indptr[u + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        indptr, idx, _ = self._in
        return idx[indptr[v] : indptr[v + 1]]

    def out_arc_ids(self, u: int) -> np.ndarray:
        indptr, _ = self._out
        return np.arange(indptr[u], indptr[u + 1])

    def in_arc_ids(self, v: int) -> np.ndarray:
        indptr, _, order = self._in
        return order[indptr[v] : indptr[v + 1]]

    def arc_id(self, u: int, v: int) -> int:
        """Row index of arc ``(u, v)``; raises ``KeyError`` if absent."""
        code = int(u) * max(self.n, 1) + int(v)
        i = int(np.searchsorted(self._codes, code))
        if i < self.num_arcs and self._codes[i] == code and 0 <= u < self.n and 0 <= v < self.n:
            return i
        raise KeyError((u, v))

    def has_arc(self, u: int, v: int) -> bool:
        try:
            self.arc_id(u, v)
        except KeyError:
            return False
        return True

    def has_arcs(self, pairs: np.ndarray) -> np.ndarray:
        """Vectorised membership test for an ``(k, 2)`` array of pairs."""
        pairs = _as_arc_array(pairs)
        if len(pairs) == 0:
            return np.zeros(0, dtype=bool)
        codes = pairs[:, 0] * max(self.n, 1) + pairs[:, 1]
        pos = np.searchsorted(self._codes, codes)
        pos = np.minimum(pos, max(self.num_arcs - 1, 0))
        if self.num_arcs == 0:
            return np.zeros(len(pairs), dtype=bool)
        return self._codes[pos] == codes

    def arc_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.arcs]

    @property
    def core_vertices(self) -> np.ndarray:
        if self.core is None:
            return np.arange(self.n)
        return np.flatnonzero(self.core)

    def core_arc_mask(self) -> np.ndarray:
        """Arcs with both endpoints in the core."""
        if self.core is None:
            return np.ones(self.num_arcs, dtype=bool)
        return self.core[self.arcs[:, 0]] & self.core[self.arcs[:, 1]]

    # -- derived graphs --------------------------------------------------

    def relabel(self, perm: Sequence[int] | np.ndarray) -> "FiniteDigraph":
        """Return the isomorphic copy in which vertex ``v`` becomes ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        level = None if self.level is None else self.level[inv]
        core = None if self.core is None else self.core[inv]
        labels = None if self.labels is None else [self.labels[i] for i in inv]
        return FiniteDigraph(self.n, perm[self.arcs], level=level, core=core, labels=labels)

    def induced_subgraph(self, vertices: Iterable[int]) -> "FiniteDigraph":
        keep = np.unique(np.asarray(list(vertices), dtype=np.int64))
        index = np.full(self.n, -1, dtype=np.int64)
        index[keep] = np.arange(len(keep))
        mask = (index[self.arcs[:, 0]] >= 0) & (index[self.arcs[:, 1]] >= 0)
        return self._restricted(keep, index, mask)

    def arc_subgraph(self, arc_ids: Iterable[int]) -> "FiniteDigraph":
        """Digraph formed by the given arcs and their endpoints (renumbered)."""
        ids = np.unique(np.asarray(list(arc_ids), dtype=np.int64))
        mask = np.zeros(self.num_arcs, dtype=bool)
        mask[ids] = True
        keep = np.unique(self.arcs[mask].ravel())
        index = np.full(self.n, -1, dtype=np.int64)
        index[keep] = np.arange(len(keep))
        return self._restricted(keep, index, mask)

    def _restricted(self, keep: np.ndarray, index: np.ndarray, mask: np.ndarray) -> "FiniteDigraph":
        arcs = index[self.arcs[mask]]
        level = None if self.level is None else self.level[keep]
        core = None if self.core is None else self.core[keep]
        labels = None if self.labels is None else [self.labels[i] for i in keep]
        return FiniteDigraph(len(keep), arcs, level=level, core=core, labels=labels)

    def with_core(self, core: Sequence[bool] | np.ndarray | None) -> "FiniteDigraph":
        return FiniteDigraph(self.n, self.arcs, level=self.level, core=core, labels=self.labels)

    def delete_arcs(self, arc_ids: Iterable[int]) -> "FiniteDigraph":
        mask = np.ones(self.num_arcs, dtype=bool)
        mask[np.asarray(list(arc_ids), dtype=np.int64)] = False
        return FiniteDigraph(self.n, self.arcs[mask], level=self.level, core=self.core, labels=self.labels)

    def label_index(self) -> dict[Any, int]:
        if self.labels is None:
            raise ValueError("graph carries no label table")
        return {lab: i for i, lab in enumerate(self.labels)}


class PeriodicDigraph:
    """Two-ended digraph given by one level of size ``m`` and a tile.

    Tile arc ``(u, v)`` stands for ``(i, u) -> (i + 1, v)`` for every integer
    ``i``.
    """

    def __init__(self, m: int, tile_arcs: Any, labels: Sequence[Any] | None = None, name: str = ""):
        m = int(m)
        if m < 1:
            raise ValueError("level size must be positive")
        arr = _as_arc_array(tile_arcs)
        if len(arr) == 0:
            raise ValueError("tile has no arcs; the represented digraph is not two-ended")
        if arr.min() < 0 or arr.max() >= m:
            raise ValueError("tile arc endpoint out of range")
        codes = np.unique(arr[:, 0] * m + arr[:, 1])
        if len(codes) != len(arr):
            raise ValueError("duplicate tile arcs")
        arr = np.stack([codes // m, codes % m], axis=1)
        outd = np.bincount(arr[:, 0], minlength=m)
        ind = np.bincount(arr[:, 1], minlength=m)
        if np.any(outd == 0) or np.any(ind == 0):
            x = int(np.flatnonzero((outd == 0) | (ind == 0))[0])
            raise ValueError(f"level index {x} has zero in- or out-degree in the tile")
        arr.setflags(write=False)
        self.m = m
        self.tile_arcs = arr
        if labels is not None:
            labels = list(labels)
            if len(labels) != m:
                raise ValueError("labels must have one entry per level index")
        self.labels = labels
        self.name = name

    def __repr__(self) -> str:
        tag = f"{self.name}, " if self.name else ""
        return f"PeriodicDigraph({tag}m={self.m}, tile_arcs={len(self.tile_arcs)})"

    @property
    def out_degree(self) -> np.ndarray:
        return np.bincount(self.tile_arcs[:, 0], minlength=self.m)

    @property
    def in_degree(self) -> np.ndarray:
        return np.bincount(self.tile_arcs[:, 1], minlength=self.m)


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex ``(in, out)`` degree pairs and their multiset."""

    in_degree: np.ndarray
    out_degree: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.in_degree.tolist(), self.out_degree.tolist()))

    @property
    def summary(self) -> Counter:
        return Counter(self.pairs)

    def restricted(self, vertices: Iterable[int]) -> Counter:
        idx = np.asarray(list(vertices), dtype=np.int64)
        return Counter(zip(self.in_degree[idx].tolist(), self.out_degree[idx].tolist()))


def window(P: PeriodicDigraph, lo: int, hi: int, margin: int = 1) -> FiniteDigraph:
    """The finite slice of ``P`` on levels ``lo..hi``.

    Vertex ``(level, x)`` gets index ``(level - lo) * m + x``. Vertices whose
    level lies at least ``margin`` levels inside the slice form the core.
    """
    if lo > hi:
        raise ValueError(f"empty level range {lo}:{hi}")
    if margin < 0:
        raise ValueError("margin must be non-negative")
    m = P.m
    L = hi - lo + 1
    offsets = np.arange(L - 1, dtype=np.int64)[:, None] * m
    src = (offsets + P.tile_arcs[:, 0][None, :]).ravel()
    dst = (offsets + m + P.tile_arcs[:, 1][None, :]).ravel()
    level = np.repeat(np.arange(lo, hi + 1, dtype=np.int64), m)
    core = (level >= lo + margin) & (level <= hi - margin)
    base = P.labels if P.labels is not None else list(range(m))
    labels = [(int(lv), base[x]) for lv in range(lo, hi + 1) for x in range(m)]
    return FiniteDigraph(
        L * m, np.stack([src, dst], axis=1), level=level, core=core, labels=labels,
        regrow=lambda: window(P, lo - 2, hi + 2, margin + 2),
    )


def tile(P: PeriodicDigraph) -> FiniteDigraph:
    """The bipartite tile between two consecutive levels (levels 0 and 1)."""
    return window(P, 0, 1, margin=0)


def degree_profile(G: FiniteDigraph) -> DegreeProfile:
    return DegreeProfile(in_degree=G.in_degree.copy(), out_degree=G.out_degree.copy())


def underlying_components(G: FiniteDigraph) -> list[np.ndarray]:
    """Weakly connected components, each a sorted vertex array, ordered by least vertex."""
    if G.n == 0:
        return []
    adj = coo_matrix(
        (np.ones(G.num_arcs, dtype=np.int8), (G.arcs[:, 0], G.arcs[:, 1])), shape=(G.n, G.n)
    )
    _, comp = connected_components(adj, directed=True, connection="weak")
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(comp.tolist()):
        groups.setdefault(c, []).append(v)
    return sorted((np.asarray(g, dtype=np.int64) for g in groups.values()), key=lambda a: int(a[0]))


def level_shift(G: FiniteDigraph) -> np.ndarray | None:
    """Vertex map ``(level, x) -> (level + 1, x)`` read off the label table, ``-1`` off the top.

    Returns ``None`` unless the map is a partial isomorphism: every arc with
    both endpoints shifted lands on an arc and every arc between images comes
    from one. That holds for windows of periodic digraphs.
    """
    if G.level is None or G.labels is None:
        return None
    try:
        index = {lab: i for i, lab in enumerate(G.labels)}
        shift = np.asarray(
            [index.get((lab[0] + 1,) + tuple(lab[1:]), -1) for lab in G.labels], dtype=np.int64
        )
    except (TypeError, IndexError):
        return None
    if not all(isinstance(lab, tuple) and lab[0] == lv for lab, lv in zip(G.labels, G.level.tolist())):
        return None
    u, v = G.arcs[:, 0], G.arcs[:, 1]
    both = (shift[u] >= 0) & (shift[v] >= 0)
    if not G.has_arcs(np.stack([shift[u[both]], shift[v[both]]], axis=1)).all():
        return None
    # arcs among images must come from arcs among preimages
    pre = np.full(G.n, -1, dtype=np.int64)
    pre[shift[shift >= 0]] = np.flatnonzero(shift >= 0)
    both = (pre[u] >= 0) & (pre[v] >= 0)
    if not G.has_arcs(np.stack([pre[u[both]], pre[v[both]]], axis=1)).all():
        return None
    return shift
