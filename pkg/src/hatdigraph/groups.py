"""Explicit permutation groups, left cosets and Cayley coset graphs.

Groups act on the left: ``(g * h)(x) = g(h(x))``. Everything is stored as
explicit element sets, which is only meant for desk-scale witnesses.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import FiniteDigraph

__all__ = [
    "Perm",
    "GeneratedGroup",
    "CosetSpace",
    "CayleyCosetGraph",
    "CloneExpansionVerdict",
    "GroupOverflow",
    "parse_cycles",
    "generate_group",
    "left_cosets",
    "double_coset",
    "check_connection_set",
    "cayley_coset_graph",
    "left_action_is_automorphic",
    "clone_expansion_check",
]

DEFAULT_GROUP_CAP = 10**4


class GroupOverflow(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    """Permutation of ``0..n-1`` given by its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{self.images} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Perm(tuple(self.images[i] for i in other.images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> str:
        seen, parts = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"


def parse_cycles(text: str, n: int) -> Perm:
    """Parse cycle notation such as ``"(0 1 2)(3 4)"``; ``"()"`` is the identity."""
    img = list(range(n))
    for body in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) for x in body.replace(",", " ").split()]
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle ({body})")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (0 <= a < n):
                raise ValueError(f"point {a} outside 0..{n - 1}")
            img[a] = b
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise ValueError(f"cannot parse cycle notation {text!r}")
    return Perm(tuple(img))


@dataclass(frozen=True)
class GeneratedGroup:
    gens: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    degree: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g: Perm) -> bool:
        return g in self.element_set

    @property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    def subgroup(self, gens: Sequence[Perm], cap: int = DEFAULT_GROUP_CAP) -> "GeneratedGroup":
        H = generate_group(gens, cap=cap, degree=self.degree)
        if not H.element_set <= self.element_set:
            raise ValueError("generators do not lie in the group")
        return H


def generate_group(gens: Sequence[Perm], cap: int = DEFAULT_GROUP_CAP, degree: int | None = None) -> GeneratedGroup:
    """Breadth-first closure of ``gens`` under multiplication."""
    gens = tuple(gens)
    if degree is None:
        if not gens:
            raise ValueError("need a generator or an explicit degree")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators must share one degree")
    e = Perm.identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupOverflow(f"group order exceeds cap {cap}")
                queue.append(y)
    return GeneratedGroup(gens, tuple(sorted(seen)), degree)


def _is_closed(elements: frozenset[Perm]) -> bool:
    return all(a * b in elements for a in elements for b in elements)


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets ``g * subgroup``, each labelled by its least element."""

    group: GeneratedGroup
    subgroup: GeneratedGroup
    cosets: tuple[frozenset[Perm], ...]
    representatives: tuple[Perm, ...]
    index_of: dict[Perm, int]

    def __len__(self) -> int:
        return len(self.cosets)

    def coset_of(self, g: Perm) -> int:
        return self.index_of[g]


def left_cosets(group: GeneratedGroup, subgroup: GeneratedGroup) -> CosetSpace:
    sub = subgroup.element_set
    if not sub <= group.element_set:
        raise ValueError("subgroup is not contained in the group")
    if group.identity not in sub or not _is_closed(sub):
        raise ValueError("subgroup is not closed")
    index_of: dict[Perm, int] = {}
    cosets, reps = [], []
    for g in group.elements:  # sorted, so the first unseen g is the least of its coset
        if g in index_of:
            continue
        coset = frozenset(g * h for h in subgroup.elements)
        for x in coset:
            index_of[x] = len(cosets)
        cosets.append(coset)
        reps.append(g)
    return CosetSpace(group, subgroup, tuple(cosets), tuple(reps), index_of)


def double_coset(subgroup: GeneratedGroup, g: Perm) -> frozenset[Perm]:
    return frozenset(a * g * b for a in subgroup.elements for b in subgroup.elements)


def check_connection_set(subgroup: GeneratedGroup, A: Iterable[Perm]) -> None:
    """Raise ``ValueError`` naming ``(l, a, m)`` with ``l*a*m`` outside ``A`` if ``LAL != A``."""
    A = frozenset(A)
    for a in sorted(A):
        for lam in subgroup.elements:
            for mu in subgroup.elements:
                if lam * a * mu not in A:
                    raise ValueError(
                        f"connection set not bi-invariant: {lam.cycles()} * {a.cycles()} * {mu.cycles()} not in A"
                    )


@dataclass
class CayleyCosetGraph:
    graph: FiniteDigraph
    space: CosetSpace
    connection: frozenset[Perm]
    loops_removed: int


def cayley_coset_graph(group: GeneratedGroup, subgroup: GeneratedGroup, A: Iterable[Perm]) -> CayleyCosetGraph:
    """Vertices are left cosets; ``Q -> R`` iff ``Q^{-1} R`` lies inside ``A``.

    Since ``A`` is bi-invariant, ``Q^{-1} R = L q^{-1} r L`` lies in ``A``
    exactly when ``q^{-1} r`` does, for any representatives ``q``, ``r``.
    Loops (cosets with ``Q^{-1} Q`` inside ``A``) are dropped and counted.
    """
    A = frozenset(A)
    if not A <= group.element_set:
        raise ValueError("connection set is not contained in the group")
    check_connection_set(subgroup, A)
    space = left_cosets(group, subgroup)
    arcs, loops = [], 0
    for i, q in enumerate(space.representatives):
        qi = q.inverse()
        for j, r in enumerate(space.representatives):
            if qi * r in A:
                if i == j:
                    loops += 1
                else:
                    arcs.append((i, j))
    labels = [r.images for r in space.representatives]
    G = FiniteDigraph(len(space), arcs, labels=labels)
    return CayleyCosetGraph(G, space, A, loops)


def left_action_is_automorphic(C: CayleyCosetGraph) -> bool:
    """Every group element, acting by left multiplication on cosets, is an automorphism."""
    from .symmetry import is_automorphism

    space = C.space
    for g in space.group.elements:
        phi = np.asarray([space.coset_of(g * r) for r in space.representatives], dtype=np.int64)
        if not is_automorphism(C.graph, phi):
            return False
    return True


@dataclass
class CloneExpansionVerdict:
    k: int
    block_sizes_ok: bool
    blocks_are_clones: bool
    quotient_isomorphic: bool
    natural_map_isomorphism: bool
    loops_removed: tuple[int, int]

    @property
    def passed(self) -> bool:
        return self.block_sizes_ok and self.blocks_are_clones and self.quotient_isomorphic


def clone_expansion_check(
    group: GeneratedGroup, sub: GeneratedGroup, smaller: GeneratedGroup, A: Iterable[Perm]
) -> CloneExpansionVerdict:
    """Compare Cay(group/smaller, A) with Cay(group/sub, A) when ``smaller`` has index k in ``sub``.

    The vertices of the larger graph lying in one ``sub``-coset must be
    mutual clones (same in- and out-neighbours), k to a block, and collapsing
    the blocks must give back the smaller graph.
    """
    from .symmetry import clone_classes, isomorphic, quotient_by_partition

    if not smaller.element_set <= sub.element_set:
        raise ValueError("second subgroup is not contained in the first")
    if sub.order % smaller.order:
        raise ValueError("subgroup orders are not divisible")
    k = sub.order // smaller.order
    A = frozenset(A)
    G = cayley_coset_graph(group, sub, A)
    Gp = cayley_coset_graph(group, smaller, A)
    block_of = np.asarray(
        [G.space.coset_of(r) for r in Gp.space.representatives], dtype=np.int64
    )
    sizes_ok = bool(np.all(np.bincount(block_of, minlength=len(G.space)) == k))
    report = clone_classes(Gp.graph)
    clones = all(
        _same_class(report.right_classes, np.flatnonzero(block_of == b))
        and _same_class(report.left_classes, np.flatnonzero(block_of == b))
        for b in range(len(G.space))
    )
    Q = quotient_by_partition(Gp.graph, block_of)
    iso = isomorphic(Q, G.graph)
    natural = np.array_equal(Q.arcs, G.graph.arcs)
    return CloneExpansionVerdict(k, sizes_ok, clones, iso, natural, (G.loops_removed, Gp.loops_removed))


def _same_class(classes: list[np.ndarray], members: np.ndarray) -> bool:
    member_set = set(members.tolist())
    return any(member_set <= set(c.tolist()) for c in classes)
