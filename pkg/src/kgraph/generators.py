"""Constructors for standard families of k-graphs.

* :func:`cycle` -- the simple k-dimensional cycle Delta_k / G for a finite-index G.
* :func:`single_vertex` -- one vertex with ``m_i`` loops of colour i.
* :func:`pullback` -- the pullback of a 1-graph along ``n -> n_1 + ... + n_k``.
* :func:`named_example` -- the 3-vertex 2-graphs Lambda1/Lambda2 and their
  amplified variants with doubled or tripled colour-2 edges.
* :func:`random_one_graph` -- random strongly connected 1-graphs for testing.
"""

from __future__ import annotations

import itertools
import random
from typing import Mapping, Sequence

from .errors import CubeFailure, InvalidPermutationRules, NotFiniteIndex, ValidationError
from .graph import Edge, FactorisationRules, KGraph, Skeleton, validate
from .lattice import Lattice


def _vname(g: Sequence[int]) -> str:
    return "[" + ",".join(map(str, g)) + "]"


def cycle(k: int, basis: Sequence[Sequence[int]]) -> KGraph:
    """Delta_k / G: vertices are the cosets Z^k/G, edges are [g, g + e_i]."""
    G = Lattice.from_generators(k, basis)
    if not G.is_full_rank:
        raise NotFiniteIndex(f"{[tuple(b) for b in basis]} does not have finite index in Z^{k}")
    reps = G.coset_representatives()
    units = [tuple(int(c == i) for c in range(k)) for i in range(k)]

    def step(g, i):
        return G.reduce(tuple(a + b for a, b in zip(g, units[i])))

    def eid(g, i):
        return f"e{i + 1}{_vname(g)}"

    edges = [
        Edge(eid(g, i), i + 1, source=_vname(step(g, i)), range=_vname(g))
        for g in reps
        for i in range(k)
    ]
    squares = {}
    for g in reps:
        for i in range(k):
            for j in range(i + 1, k):
                # [g, g+e_i][g+e_i, g+e_i+e_j] = [g, g+e_j][g+e_j, g+e_i+e_j]
                squares[(eid(g, i), eid(step(g, i), j))] = (eid(g, j), eid(step(g, j), i))
    sk = Skeleton(k, tuple(_vname(g) for g in reps), tuple(edges))
    return validate(sk, FactorisationRules(squares))


def single_vertex(
    k: int,
    counts: Sequence[int],
    rules: Mapping[tuple[int, int], Mapping[tuple[int, int], tuple[int, int]]] | None = None,
) -> KGraph:
    """One vertex ``v`` with ``counts[i-1]`` loops ``e{i}_{a}`` of colour i.

    ``rules[(i, j)][(a, b)] = (b2, a2)`` means ``e{i}_a e{j}_b = e{j}_b2 e{i}_a2``;
    colour pairs missing from ``rules`` get the flip rule ``ef = fe``.
    """
    counts = tuple(counts)
    if len(counts) != k or any(m < 1 for m in counts):
        raise ValueError(f"need {k} positive loop counts, got {counts}")
    rules = rules or {}

    def eid(c, a):
        return f"e{c}_{a}"

    edges = [Edge(eid(c, a), c, "v", "v") for c in range(1, k + 1) for a in range(counts[c - 1])]
    squares = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            table = rules.get((i, j))
            for a in range(counts[i - 1]):
                for b in range(counts[j - 1]):
                    b2, a2 = table[(a, b)] if table is not None else (b, a)
                    squares[(eid(i, a), eid(j, b))] = (eid(j, b2), eid(i, a2))
    sk = Skeleton(k, ("v",), tuple(edges))
    try:
        return validate(sk, FactorisationRules(squares))
    except CubeFailure as exc:
        raise InvalidPermutationRules(str(exc)) from exc
    except ValidationError as exc:
        raise InvalidPermutationRules(str(exc)) from exc


def pullback(base: Skeleton | KGraph, k: int) -> KGraph:
    """Pullback of a 1-graph along the sum map N^k -> N.

    Edge ``e`` of the 1-graph yields edges ``e@i`` of every colour i, and the
    squares are ``(e@i)(f@j) = (e@j)(f@i)``.
    """
    sk = base.skeleton if isinstance(base, KGraph) else base
    if sk.rank != 1:
        raise ValueError("pullback needs a 1-graph")
    edges = [
        Edge(f"{e.id}@{i}", i, e.source, e.range) for e in sk.edges for i in range(1, k + 1)
    ]
    by_range = {}
    for e in sk.edges:
        by_range.setdefault(e.range, []).append(e)
    squares = {}
    for e in sk.edges:
        for f in by_range.get(e.source, ()):
            for i in range(1, k + 1):
                for j in range(i + 1, k + 1):
                    squares[(f"{e.id}@{i}", f"{f.id}@{j}")] = (f"{e.id}@{j}", f"{f.id}@{i}")
    return validate(Skeleton(k, sk.vertices, tuple(edges)), FactorisationRules(squares))


# colour 1 carries a_i: v->{u,w}, c_i: {u,w}->v; colour 2 carries d_i: v->{u,w},
# b_i: {u,w}->v.  Endpoints indexed by i: 0 -> u, 1 -> w.
_ENDS = ("u", "w")


def _three_vertex_skeleton(copies: int) -> Skeleton:
    edges = []
    for i, x in enumerate(_ENDS):
        edges.append(Edge(f"a{i}", 1, "v", x))
        edges.append(Edge(f"c{i}", 1, x, "v"))
    for i, x in enumerate(_ENDS):
        for name, src, rng in ((f"d{i}", "v", x), (f"b{i}", x, "v")):
            if copies == 1:
                edges.append(Edge(name, 2, src, rng))
            else:
                edges.extend(Edge(f"{name}_{j}", 2, src, rng) for j in range(copies))
    return Skeleton(2, ("u", "v", "w"), tuple(edges))


def _three_vertex_squares(variant: int) -> dict:
    squares = {}
    for i in range(2):
        for j in range(2):
            squares[(f"a{i}", f"b{j}")] = (f"d{i}", f"c{j}")
        # c_i d_i = b_i a_i (Lambda1) or b_{1-i} a_{1-i} (Lambda2)
        t = i if variant == 1 else 1 - i
        squares[(f"c{i}", f"d{i}")] = (f"b{t}", f"a{t}")
    return squares


def three_vertex_skeleton(copies: int = 1) -> Skeleton:
    """The shared 3-vertex 2-coloured skeleton, optionally amplified."""
    return _three_vertex_skeleton(copies)


NAMED_EXAMPLES = ("Lambda1", "Lambda2", "Lambda12", "Lambda13", "Lambda22", "Lambda23")


def named_example(name: str) -> KGraph:
    """``Lambda{i}`` or the amplified ``Lambda{i}{copies}`` for copies in {2, 3}."""
    if name not in NAMED_EXAMPLES:
        raise ValueError(f"unknown example {name!r}; choose from {NAMED_EXAMPLES}")
    variant = int(name[6])
    copies = int(name[7]) if len(name) > 7 else 1
    base = _three_vertex_squares(variant)
    if copies == 1:
        return validate(_three_vertex_skeleton(1), FactorisationRules(base))
    squares = {
        (e, f"{f}_{j}"): (f"{f2}_{j}", e2)
        for (e, f), (f2, e2) in base.items()
        for j in range(copies)
    }
    return validate(_three_vertex_skeleton(copies), FactorisationRules(squares))


def one_graph(vertices: Sequence[str], arrows: Sequence[tuple[str, str]]) -> KGraph:
    """A 1-graph from ``(source, range)`` pairs; edges are named ``f0, f1, ...``."""
    edges = tuple(Edge(f"f{t}", 1, s, r) for t, (s, r) in enumerate(arrows))
    return validate(Skeleton(1, tuple(vertices), edges), FactorisationRules({}))


def random_one_graph(n: int, rng: random.Random, extra: int | None = None) -> KGraph:
    """Random strongly connected 1-graph on ``n`` vertices.

    A random Hamiltonian cycle guarantees strong connectivity; ``extra`` random
    arrows (default between 1 and 2n) are added on top, loops and parallel
    arrows allowed.
    """
    names = [f"x{t}" for t in range(n)]
    order = names[:]
    rng.shuffle(order)
    arrows = [(order[t], order[(t + 1) % n]) for t in range(n)]
    if extra is None:
        extra = rng.randint(1, 2 * n)
    arrows += [(rng.choice(names), rng.choice(names)) for _ in range(extra)]
    return one_graph(names, arrows)


def all_cycle_bases(k: int, max_index: int) -> list[tuple[tuple[int, ...], ...]]:
    """HNF bases of every sublattice of Z^k with index at most ``max_index``."""
    seen = set()
    out = []
    for diag in itertools.product(range(1, max_index + 1), repeat=k):
        prod = 1
        for d in diag:
            prod *= d
        if prod > max_index:
            continue
        # upper entries reduced modulo the pivot of their column
        slots = [(r, c) for r in range(k) for c in range(r + 1, k)]
        for vals in itertools.product(*(range(diag[c]) for _, c in slots)):
            rows = [[0] * k for _ in range(k)]
            for r in range(k):
                rows[r][r] = diag[r]
            for (r, c), v in zip(slots, vals):
                rows[r][c] = v
            basis = Lattice.from_generators(k, rows).basis
            if basis not in seen:
                seen.add(basis)
                out.append(basis)
    return out
