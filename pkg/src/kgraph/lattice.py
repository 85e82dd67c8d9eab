"""Subgroups of Z^k in Hermite normal form.

Lattices are stored by a basis of row vectors in row-style Hermite normal form:
the basis is in echelon form, every pivot is positive, and the entries above a
pivot lie in ``[0, pivot)``.  This representation is unique, so two lattices
are equal exactly when their bases are equal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

Vector = tuple[int, ...]


def hermite_normal_form(rows: Sequence[Sequence[int]], dim: int | None = None):
    """Row-style HNF of the integer matrix ``rows``.

    Returns ``(H, U)`` where ``H`` is the list of nonzero HNF rows and ``U`` is a
    unimodular matrix (list of rows) with ``U @ rows`` equal to ``H`` followed by
    zero rows.
    """
    rows = [list(map(int, r)) for r in rows]
    m = len(rows)
    if dim is None:
        dim = len(rows[0]) if rows else 0
    if any(len(r) != dim for r in rows):
        raise ValueError("rows have inconsistent length")
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap(a, b):
        rows[a], rows[b] = rows[b], rows[a]
        U[a], U[b] = U[b], U[a]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        if q:
            rows[dst] = [x - q * y for x, y in zip(rows[dst], rows[src])]
            U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    pr = 0
    for col in range(dim):
        if pr == m:
            break
        while True:
            nz = [r for r in range(pr, m) if rows[r][col]]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(rows[r][col]))
            swap(pr, best)
            if len(nz) == 1:
                break
            for r in range(pr + 1, m):
                if rows[r][col]:
                    addmul(r, pr, rows[r][col] // rows[pr][col])
        if not rows[pr][col]:
            continue
        if rows[pr][col] < 0:
            rows[pr] = [-x for x in rows[pr]]
            U[pr] = [-x for x in U[pr]]
        piv = rows[pr][col]
        for r in range(pr):
            addmul(r, pr, rows[r][col] // piv)
        pr += 1
    return [tuple(r) for r in rows[:pr]], [tuple(u) for u in U]


def smith_invariants(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return ()
    m, n = len(A), len(A[0])
    out = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            piv = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    A[t], A[i] = A[i], A[t]
                    done = False
                    break
            if not done:
                continue
            piv = A[t][t]
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                    done = False
                    break
            if not done:
                continue
            # divisibility: fold any entry not divisible by the pivot into row t
            piv = A[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is not None:
                A[t] = [x + y for x, y in zip(A[t], A[bad])]
                done = False
        out.append(abs(A[t][t]))
        t += 1
    return tuple(out)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^dim given by its HNF basis rows."""

    dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def from_generators(cls, dim: int, generators: Iterable[Sequence[int]]) -> "Lattice":
        gens = [tuple(map(int, g)) for g in generators]
        if not gens:
            return cls(dim, ())
        H, _ = hermite_normal_form(gens, dim)
        return cls(dim, tuple(H))

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls.from_generators(dim, [tuple(int(i == j) for j in range(dim)) for i in range(dim)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(b) if x) for b in self.basis)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    @property
    def index(self) -> int | None:
        """|Z^dim / L|, or ``None`` when the index is infinite."""
        if not self.is_full_rank:
            return None
        return math.prod(b[p] for b, p in zip(self.basis, self.pivots))

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of the coset ``v + L``."""
        v = list(map(int, v))
        for b, p in zip(self.basis, self.pivots):
            q = v[p] // b[p]
            if q:
                v = [x - q * y for x, y in zip(v, b)]
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coefficients of ``v`` in the basis, or ``None`` if v is not in L."""
        v = list(map(int, v))
        coeffs = []
        for b, p in zip(self.basis, self.pivots):
            q, r = divmod(v[p], b[p])
            if r:
                return None
            coeffs.append(q)
            v = [x - q * y for x, y in zip(v, b)]
        return tuple(coeffs) if not any(v) else None

    def coset_representatives(self) -> list[Vector]:
        if not self.is_full_rank:
            raise ValueError("infinite index lattice has infinitely many cosets")
        ranges = [range(b[p]) for b, p in zip(self.basis, self.pivots)]
        reps = []
        for digits in itertools.product(*ranges):
            v = [0] * self.dim
            for p, d in zip(self.pivots, digits):
                v[p] = d
            reps.append(tuple(v))
        return reps

    def members_in_box(self, radius: int) -> list[Vector]:
        """All lattice points of sup-norm at most ``radius``."""
        box = range(-radius, radius + 1)
        return [g for g in itertools.product(box, repeat=self.dim) if self.contains(g)]

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return all(other.contains(b) for b in self.basis)

    def invariant_factors(self) -> tuple[int, ...]:
        return smith_invariants(self.basis) if self.basis else ()


@dataclass(frozen=True)
class QuotientGroup:
    """Z^k / L for a full-rank lattice L."""

    lattice: Lattice
    invariant_factors: tuple[int, ...]

    @classmethod
    def of(cls, lattice: Lattice) -> "QuotientGroup":
        if not lattice.is_full_rank:
            raise ValueError("quotient by an infinite-index lattice is not finite")
        return cls(lattice, lattice.invariant_factors())

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def reduce(self, v: Sequence[int]) -> Vector:
        return self.lattice.reduce(v)


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)
