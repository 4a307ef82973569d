"""Subspaces of PG(n, q) for prime q and their incidence templates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .constructions import LeveledTemplate

__all__ = ["SubspaceCanon", "rref", "pg_subspaces", "incidence_template", "gaussian_binomial"]

MAX_SUBSPACES = 10**5


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


def rref(rows, q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row-echelon form over GF(q) with zero rows dropped."""
    M = [[x % q for x in r] for r in rows]
    if not M:
        return ()
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], q - 2, q)
        M[r] = [(x * inv) % q for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % q for x, y in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r])


@dataclass(frozen=True, order=True)
class SubspaceCanon:
    """A subspace of GF(q)^(n+1) stored by its reduced row-echelon basis."""

    basis: tuple[tuple[int, ...], ...]
    q: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient(self) -> int:
        return len(self.basis[0])

    @cached_property
    def points(self) -> frozenset[tuple[int, ...]]:
        """All vectors of the subspace (including zero)."""
        vecs = set()
        for coeffs in itertools.product(range(self.q), repeat=self.rank):
            v = [0] * self.ambient
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [(x + c * y) % self.q for x, y in zip(v, row)]
            vecs.add(tuple(v))
        return frozenset(vecs)

    def contains(self, other: "SubspaceCanon") -> bool:
        return all(row in self.points for row in other.basis)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def pg_subspaces(n: int, q: int, d: int) -> list[SubspaceCanon]:
    """All rank-``d`` subspaces of GF(q)^(n+1), i.e. projective (d-1)-flats of PG(n, q)."""
    if not _is_prime(q):
        raise ValueError(f"q={q} is not prime; only prime fields are supported")
    if n < 2:
        raise ValueError("projective dimension must be at least 2")
    if not 1 <= d <= n:
        raise ValueError(f"rank {d} outside 1..{n}")
    if gaussian_binomial(n + 1, d, q) > MAX_SUBSPACES:
        raise ValueError("too many subspaces for explicit enumeration")
    N = n + 1
    out = []
    for pivots in itertools.combinations(range(N), d):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, N) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * N for _ in range(d)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), x in zip(free, values):
                rows[r][c] = x
            out.append(SubspaceCanon(tuple(tuple(r) for r in rows), q))
    out.sort()
    return out


def incidence_template(n: int, q: int) -> LeveledTemplate:
    """Levels are the subspaces of rank 1..n; arcs are covering containments.

    ``labels[j]`` lists the :class:`SubspaceCanon` objects of level ``j``.
    """
    levels = [pg_subspaces(n, q, d) for d in range(1, n + 1)]
    if sum(len(x) for x in levels) > MAX_SUBSPACES:
        raise ValueError("too many subspaces for explicit enumeration")
    arcs = []
    for j in range(n - 1):
        for x, small in enumerate(levels[j]):
            for y, big in enumerate(levels[j + 1]):
                if big.contains(small):
                    arcs.append((j, x, y))
    return LeveledTemplate(
        tuple(len(x) for x in levels), tuple(arcs), labels=tuple(tuple(x) for x in levels)
    )
