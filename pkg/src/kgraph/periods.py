"""The group of periods, the coset map C, vertex classes and a positive period.

Everything here is exact integer arithmetic.  The starting point is a spanning
tree of paths into a base vertex ``u0``: ``pot(v)`` is the degree of one fixed
path in ``u0 Λ v``.  For an edge ``e`` the two paths ``μ_{r(e)} e`` and
``μ_{s(e)}`` both lie in ``u0 Λ s(e)``, so

    gen(e) = pot(r(e)) + d(e) - pot(s(e))

is a difference of degrees of parallel paths and lies in P_Λ.  Conversely the
degree of a cycle at ``u0`` is the sum of ``d(e)`` over its edges, which
telescopes to the sum of ``gen(e)``; so the ``gen(e)`` generate P_Λ exactly.
The same telescoping shows ``d(λ) ≡ pot(s(λ)) - pot(r(λ))`` mod P_Λ for any
path λ, which is the coset map.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import SearchExhausted
from .graph import Degree, KGraph, iter_paths
from .lattice import Lattice, QuotientGroup, hermite_normal_form
from .spectral import power_product


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class CMapData:
    """Potentials along a spanning tree of paths ending at ``base``.

    ``pot[v]`` is the degree of a path in ``base Λ v`` and ``back[v]`` the
    degree of a path in ``v Λ base``.
    """

    base: str
    pot: dict
    back: dict


def potentials(g: KGraph) -> CMapData:
    if "potentials" in g.cache:
        return g.cache["potentials"]
    u0 = g.vertices[0]
    zero = g.zero()
    pot = {u0: zero}
    todo = deque([u0])
    while todo:
        x = todo.popleft()
        for e in g.edges:
            if e.range == x and e.source not in pot:
                pot[e.source] = _add(pot[x], g.unit(e.color))
                todo.append(e.source)
    back = {u0: zero}
    todo = deque([u0])
    while todo:
        x = todo.popleft()
        for e in g.edges:
            if e.source == x and e.range not in back:
                back[e.range] = _add(back[x], g.unit(e.color))
                todo.append(e.range)
    data = CMapData(u0, pot, back)
    g.cache["potentials"] = data
    return data


def edge_generators(g: KGraph) -> list[Degree]:
    """gen(e) for every edge, in edge order."""
    pot = potentials(g).pot
    return [_sub(_add(pot[e.range], g.unit(e.color)), pot[e.source]) for e in g.edges]


def period_group(g: KGraph) -> Lattice:
    if "period_group" not in g.cache:
        g.cache["period_group"] = Lattice.from_generators(g.rank, edge_generators(g))
    return g.cache["period_group"]


def quotient(g: KGraph) -> QuotientGroup:
    return QuotientGroup.of(period_group(g))


def c_map(g: KGraph, v: str, w: str) -> Degree:
    """Canonical representative of C(v, w): the degree class of any path in vΛw."""
    pot = potentials(g).pot
    return period_group(g).reduce(_sub(pot[w], pot[v]))


@dataclass(frozen=True)
class VertexClasses:
    """Classes of ``v ~ w  <=>  C(v, w) = 0``, each labelled by its coset.

    ``labels[t]`` is the canonical representative of ``C(u0, w)`` for any w in
    ``classes[t]``; the labelling is a bijection onto Z^k / P_Λ.
    """

    classes: tuple[tuple[str, ...], ...]
    labels: tuple[Degree, ...]
    lattice: Lattice

    def class_of(self, v: str) -> int:
        for t, omega in enumerate(self.classes):
            if v in omega:
                return t
        raise KeyError(v)

    def label_of(self, v: str) -> Degree:
        return self.labels[self.class_of(v)]

    def __len__(self) -> int:
        return len(self.classes)


def vertex_classes(g: KGraph) -> VertexClasses:
    if "classes" in g.cache:
        return g.cache["classes"]
    P = period_group(g)
    pot = potentials(g).pot
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(P.reduce(tuple(-x for x in pot[v])), []).append(v)
    labels = sorted(groups)
    out = VertexClasses(tuple(tuple(groups[lab]) for lab in labels), tuple(labels), P)
    g.cache["classes"] = out
    return out


def class_action(g: KGraph, n: Sequence[int], omega: int | Sequence[str]) -> int:
    """Index of the class ``n · ω``: paths of degree n run from ω into n · ω."""
    vc = vertex_classes(g)
    if not isinstance(omega, int):
        omega = vc.class_of(tuple(omega)[0])
    target = vc.lattice.reduce(_add(vc.labels[omega], n))
    return vc.labels.index(target)


@dataclass(frozen=True)
class PositivePeriod:
    """A strictly positive p in P_Λ with ``v ~ w  <=>  A^p(v, w) > 0``.

    ``method`` is ``"search"`` when found by enumeration within ``bound`` and
    ``"construction"`` when produced by the explicit cycle-sum fallback.
    """

    p: Degree
    coordinates: tuple[int, ...]
    method: str
    bound: int


def _separates_classes(g: KGraph, p: Sequence[int], vc: VertexClasses) -> bool:
    Ap = power_product(g, p)
    idx = g.vertex_index
    for v in g.vertices:
        cv = vc.class_of(v)
        for w in g.vertices:
            if (Ap[idx[v], idx[w]] > 0) != (cv == vc.class_of(w)):
                return False
    return True


def default_search_bound(g: KGraph) -> int:
    return 4 * period_group(g).index * g.rank


def _positive_candidates(P: Lattice, k: int, bound: int):
    """Strictly positive members of P by increasing sup-norm, lexicographic within a norm."""
    for r in range(1, bound + 1):
        for p in itertools.product(range(1, r + 1), repeat=k):
            if max(p) == r and P.contains(p):
                yield p


def constructed_period(g: KGraph) -> Degree:
    """p = Σ_{v~w} m_{v,w} built from explicit cycles at the base vertex.

    For v ~ w, g_{v,w} = back(v) + pot(w) lies in P_Λ.  Writing it as an integer
    combination of the gen(e) and using the cycles c_e = μ_{r(e)} e ν_{s(e)}
    and b_x = μ_x ν_x (with d(c_e) - d(b_{s(e)}) = gen(e)), the positive and
    negative parts give cycles α, β at u0 with d(α) - d(β) = g_{v,w}.  Appending
    a fixed cycle of degree >= (1,...,1) makes both strictly positive.
    """
    P = period_group(g)
    data = potentials(g)
    pot, back, u0 = data.pot, data.back, data.base
    gens = edge_generators(g)
    H, U = hermite_normal_form(gens, g.rank)
    cyc = [_add(_add(pot[e.range], g.unit(e.color)), back[e.source]) for e in g.edges]
    base_cyc = {x: _add(pot[x], back[x]) for x in g.vertices}
    tau = next(iter_paths(g, (1,) * g.rank, range=u0))
    loop = _add(tau.degree, back[tau.source])
    vc = vertex_classes(g)
    total = g.zero()
    for v in g.vertices:
        for w in g.vertices:
            if vc.class_of(v) != vc.class_of(w):
                continue
            target = _add(back[v], pot[w])
            coords = P.coordinates(target)
            coeffs = [sum(c * U[t][j] for t, c in enumerate(coords)) for j in range(len(gens))]
            alpha = g.zero()
            for j, c in enumerate(coeffs):
                e = g.edges[j]
                if c > 0:
                    alpha = _add(alpha, tuple(c * x for x in cyc[j]))
                elif c < 0:
                    alpha = _add(alpha, tuple(-c * x for x in base_cyc[e.source]))
            total = _add(total, _add(alpha, loop))
    return total


def positive_period(g: KGraph, search_bound: int | None = None) -> PositivePeriod:
    key = ("positive_period", search_bound)
    if key in g.cache:
        return g.cache[key]
    P = period_group(g)
    vc = vertex_classes(g)
    bound = default_search_bound(g) if search_bound is None else search_bound
    found = None
    for p in _positive_candidates(P, g.rank, bound):
        if _separates_classes(g, p, vc):
            found = PositivePeriod(p, P.coordinates(p), "search", bound)
            break
    if found is None:
        p = constructed_period(g)
        if not (all(x > 0 for x in p) and P.contains(p) and _separates_classes(g, p, vc)):
            raise SearchExhausted(bound, {"constructed": p, "classes": vc.classes})
        found = PositivePeriod(p, P.coordinates(p), "construction", bound)
    g.cache[key] = found
    return found


@dataclass(frozen=True)
class StructureFlags:
    is_primitive: bool
    is_simple_cycle: bool


def structure_flags(g: KGraph) -> StructureFlags:
    """Primitive means P_Λ = Z^k.  Simple cycle means every vertex receives, and
    emits, exactly one edge of each colour."""
    simple = all(
        len(g.edges_into.get((v, c), ())) == 1 and len(g.edges_from.get((v, c), ())) == 1
        for v in g.vertices
        for c in range(1, g.rank + 1)
    )
    return StructureFlags(period_group(g).index == 1, simple)
