"""Finite k-graphs presented by a coloured skeleton and commuting squares.

A k-graph is described by its 1-skeleton (a k-coloured directed multigraph) and,
for every pair of colours ``i < j``, a bijection between composable
colour-(i, j) edge pairs and composable colour-(j, i) edge pairs.  For k >= 3 the
bijections must also satisfy the cube condition.

Morphisms are stored in colour-sorted normal form: the edge sequence lists all
colour-1 edges, then all colour-2 edges, and so on.  By the factorisation
property this representative is unique, so path equality is sequence equality.

Conventions: an edge goes from ``source`` to ``range``; a path ``e1 e2 ... en``
is composable when ``s(e_t) == r(e_{t+1})``, its range is ``r(e1)`` and its
source is ``s(en)``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .errors import (
    CubeFailure,
    InvalidSquare,
    MalformedSkeleton,
    MissingColorEdge,
    NonBijectiveSquares,
    NotComposable,
    NotStronglyConnected,
    OutOfRange,
    SearchSpaceTooLarge,
)

Degree = tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    source: str
    range: str


@dataclass(frozen=True)
class Skeleton:
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def check(self) -> None:
        """Structural checks that do not involve the factorisation rules."""
        if not isinstance(self.rank, int) or self.rank < 1:
            raise MalformedSkeleton(f"rank must be a positive integer, got {self.rank!r}")
        if not self.vertices:
            raise MalformedSkeleton("no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedSkeleton("duplicate vertex ids")
        vs = set(self.vertices)
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise MalformedSkeleton(f"duplicate edge id {e.id!r}")
            if e.id in vs:
                raise MalformedSkeleton(f"edge id {e.id!r} clashes with a vertex id")
            seen.add(e.id)
            if not 1 <= e.color <= self.rank:
                raise MalformedSkeleton(f"edge {e.id!r} has color {e.color} outside 1..{self.rank}")
            for end in (e.source, e.range):
                if end not in vs:
                    raise MalformedSkeleton(f"edge {e.id!r} refers to unknown vertex {end!r}")
        for v in self.vertices:
            for c in range(1, self.rank + 1):
                if not any(e.range == v and e.color == c for e in self.edges):
                    raise MissingColorEdge(v, c, "incoming")
                if not any(e.source == v and e.color == c for e in self.edges):
                    raise MissingColorEdge(v, c, "outgoing")
        _check_strongly_connected(self)

    def composable_pairs(self, first: int, second: int) -> list[tuple[str, str]]:
        """All composable (x, y) with color(x)=first, color(y)=second, s(x)=r(y)."""
        by_range = defaultdict(list)
        for e in self.edges:
            if e.color == second:
                by_range[e.range].append(e.id)
        return [
            (x.id, y)
            for x in self.edges
            if x.color == first
            for y in by_range[x.source]
        ]


def _check_strongly_connected(sk: Skeleton) -> None:
    fwd, bwd = defaultdict(set), defaultdict(set)
    for e in sk.edges:
        fwd[e.source].add(e.range)
        bwd[e.range].add(e.source)
    start = sk.vertices[0]
    for adj, forward in ((fwd, True), (bwd, False)):
        seen = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        for v in sk.vertices:
            if v not in seen:
                raise NotStronglyConnected(*((start, v) if forward else (v, start)))


@dataclass(frozen=True)
class FactorisationRules:
    """``squares[(e, f)] = (f2, e2)`` for color(e) < color(f): e f == f2 e2."""

    squares: Mapping[tuple[str, str], tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "squares", dict(self.squares))


@dataclass(frozen=True, eq=False)
class KGraph:
    """A validated finite k-graph; build instances with :func:`validate`."""

    skeleton: Skeleton
    rules: FactorisationRules
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.skeleton.rank

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.skeleton.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.skeleton.edges

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return self.skeleton.edge_map()

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def swap(self) -> dict[tuple[str, str], tuple[str, str]]:
        """Rewrite map for adjacent edges of distinct colors, in both directions."""
        out = {}
        for (e, f), (f2, e2) in self.rules.squares.items():
            out[(e, f)] = (f2, e2)
            out[(f2, e2)] = (e, f)
        return out

    @cached_property
    def edges_into(self) -> dict[tuple[str, int], tuple[str, ...]]:
        """Edges with a given range and color (the set vΛ^{e_i})."""
        out = defaultdict(list)
        for e in self.edges:
            out[(e.range, e.color)].append(e.id)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def edges_from(self) -> dict[tuple[str, int], tuple[str, ...]]:
        """Edges with a given source and color (the set Λ^{e_i}v)."""
        out = defaultdict(list)
        for e in self.edges:
            out[(e.source, e.color)].append(e.id)
        return {k: tuple(v) for k, v in out.items()}

    def zero(self) -> Degree:
        return (0,) * self.rank

    def unit(self, color: int) -> Degree:
        return tuple(int(c == color) for c in range(1, self.rank + 1))

    def vertex_path(self, v: str) -> "Path":
        if v not in self.vertex_index:
            raise KeyError(v)
        return Path(self, v, v, (), self.zero())

    def path(self, edge_ids: Sequence[str]) -> "Path":
        """Build a path from edges in any color order; result is normalized."""
        edge_ids = tuple(edge_ids)
        if not edge_ids:
            raise ValueError("use vertex_path for paths of degree 0")
        for x, y in zip(edge_ids, edge_ids[1:]):
            if self.edge[x].source != self.edge[y].range:
                raise NotComposable(f"{x} then {y}: s({x}) != r({y})")
        seq = normal_form(self, edge_ids)
        return Path(self, self.edge[seq[0]].range, self.edge[seq[-1]].source, seq, _degree(self, seq))

    def __repr__(self) -> str:
        counts = [sum(e.color == c for e in self.edges) for c in range(1, self.rank + 1)]
        return f"KGraph(rank={self.rank}, vertices={len(self.vertices)}, edges={counts})"


@dataclass(frozen=True)
class Path:
    """A morphism in color-sorted normal form."""

    graph: KGraph = field(compare=False, repr=False, hash=False)
    range: str
    source: str
    edges: tuple[str, ...]
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __str__(self) -> str:
        return "".join(self.edges) if self.edges else self.range


def _degree(g: KGraph, seq) -> Degree:
    d = [0] * g.rank
    for x in seq:
        d[g.edge[x].color - 1] += 1
    return tuple(d)


def reorder(g: KGraph, seq: Sequence[str], target_colors: Sequence[int]) -> tuple[str, ...]:
    """Rewrite ``seq`` by commuting squares until its color word is ``target_colors``.

    Edges of equal color never pass each other, so the j-th edge of color c in
    ``seq`` is sent to the slot of the j-th c in ``target_colors``; the sequence
    is then insertion-sorted by slot, each adjacent transposition being one square.
    """
    seq = list(seq)
    slots_by_color = defaultdict(list)
    for pos, c in enumerate(target_colors):
        slots_by_color[c].append(pos)
    seen = defaultdict(int)
    slot = []
    for x in seq:
        c = g.edge[x].color
        slot.append(slots_by_color[c][seen[c]])
        seen[c] += 1
    swap = g.swap
    for i in range(1, len(seq)):
        j = i
        while j > 0 and slot[j - 1] > slot[j]:
            seq[j - 1], seq[j] = swap[(seq[j - 1], seq[j])]
            slot[j - 1], slot[j] = slot[j], slot[j - 1]
            j -= 1
    return tuple(seq)


def _sorted_colors(degree: Sequence[int]) -> list[int]:
    return [c for c, n in enumerate(degree, start=1) for _ in range(n)]


def normal_form(g: KGraph, seq: Sequence[str]) -> tuple[str, ...]:
    colors = sorted(g.edge[x].color for x in seq)
    return reorder(g, seq, colors)


def compose(p: Path, q: Path) -> Path:
    """The composite ``p q`` (p on the range side), renormalized."""
    if p.source != q.range:
        raise NotComposable(f"s(p)={p.source!r} != r(q)={q.range!r}")
    g = p.graph
    if p.is_vertex:
        return q
    if q.is_vertex:
        return p
    seq = normal_form(g, p.edges + q.edges)
    return Path(g, p.range, q.source, seq, tuple(a + b for a, b in zip(p.degree, q.degree)))


def segment(p: Path, m: Sequence[int], n: Sequence[int]) -> Path:
    """The factor p(m, n): the middle piece of the factorisation p = a b c with
    d(a) = m and d(b) = n - m."""
    m, n = tuple(m), tuple(n)
    g = p.graph
    if len(m) != g.rank or len(n) != g.rank:
        raise OutOfRange("degree has the wrong length")
    if not all(0 <= a <= b <= c for a, b, c in zip(m, n, p.degree)):
        raise OutOfRange(f"need 0 <= {m} <= {n} <= {p.degree}")
    if m == g.zero() and n == p.degree:
        return p
    between = tuple(b - a for a, b in zip(m, n))
    rest = tuple(c - b for b, c in zip(n, p.degree))
    target = _sorted_colors(m) + _sorted_colors(between) + _sorted_colors(rest)
    seq = reorder(g, p.edges, target)
    lo, hi = sum(m), sum(n)
    mid = seq[lo:hi]
    if mid:
        return Path(g, g.edge[mid[0]].range, g.edge[mid[-1]].source, mid, between)
    if lo < len(seq):
        v = g.edge[seq[lo]].range
    elif seq:
        v = g.edge[seq[-1]].source
    else:
        v = p.range
    return g.vertex_path(v)


def iter_paths(
    g: KGraph, n: Sequence[int], source: str | None = None, range: str | None = None
) -> Iterator[Path]:
    """Lazily enumerate the normal forms of degree ``n``."""
    n = tuple(n)
    if len(n) != g.rank or any(x < 0 for x in n):
        raise OutOfRange(f"bad degree {n}")
    colors = _sorted_colors(n)
    starts = [range] if range is not None else list(g.vertices)
    if not colors:
        for v in starts:
            if source is None or source == v:
                yield g.vertex_path(v)
        return
    into = g.edges_into
    edge = g.edge
    L = len(colors)

    def walk(v, prefix):
        depth = len(prefix)
        if depth == L:
            if source is None or v == source:
                yield prefix
            return
        for x in into.get((v, colors[depth]), ()):
            yield from walk(edge[x].source, prefix + (x,))

    for v in starts:
        for seq in walk(v, ()):
            yield Path(g, v, edge[seq[-1]].source, seq, n)


def enumerate_paths(
    g: KGraph, n: Sequence[int], source: str | None = None, range: str | None = None
) -> list[Path]:
    """All paths of degree ``n``, optionally restricted to one source/range vertex."""
    return list(iter_paths(g, n, source=source, range=range))


# --- validation ---------------------------------------------------------------


def _check_squares(sk: Skeleton, rules: FactorisationRules) -> dict:
    edges = sk.edge_map()
    k = sk.rank
    expected = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            expected[(i, j)] = set(sk.composable_pairs(i, j))
    images = defaultdict(dict)
    for (e, f), (f2, e2) in rules.squares.items():
        for x in (e, f, f2, e2):
            if x not in edges:
                raise InvalidSquare(f"square {e}{f}={f2}{e2} uses unknown edge {x!r}")
        ce, cf = edges[e].color, edges[f].color
        if not ce < cf or edges[f2].color != cf or edges[e2].color != ce:
            raise InvalidSquare(f"square {e}{f}={f2}{e2} has inconsistent colors")
        if edges[e].source != edges[f].range or edges[f2].source != edges[e2].range:
            raise InvalidSquare(f"square {e}{f}={f2}{e2} is not composable")
        if edges[e].range != edges[f2].range or edges[f].source != edges[e2].source:
            raise InvalidSquare(f"square {e}{f}={f2}{e2} has mismatched endpoints")
        images[(ce, cf)][(e, f)] = (f2, e2)
    for (i, j), pairs in expected.items():
        got = images.get((i, j), {})
        missing = pairs - set(got)
        if missing:
            raise NonBijectiveSquares((i, j), sorted(missing)[0], "not defined on")
        inverse = {}
        for src, img in sorted(got.items()):
            if img in inverse:
                raise NonBijectiveSquares((i, j), (inverse[img], src, img), "not injective")
            inverse[img] = src
        targets = set(sk.composable_pairs(j, i))
        if set(inverse) != targets:
            raise NonBijectiveSquares((i, j), sorted(targets - set(inverse))[0], "not surjective onto")
    return images


def check_cube(g: KGraph) -> None:
    """Exhaustive cube condition over composable triples of three distinct colors.

    A triple with strictly decreasing colors can be sorted by two reduced words of
    adjacent transpositions; both must yield the same normal form.
    """
    k = g.rank
    if k < 3:
        return
    swap, edge = g.swap, g.edge
    for c3, c2, c1 in itertools.combinations(range(k, 0, -1), 3):
        for x in g.edges:
            if x.color != c3:
                continue
            for y in g.edges_into.get((x.source, c2), ()):
                for z in g.edges_into.get((edge[y].source, c1), ()):
                    a = [x.id, y, z]
                    a[0], a[1] = swap[(a[0], a[1])]
                    a[1], a[2] = swap[(a[1], a[2])]
                    a[0], a[1] = swap[(a[0], a[1])]
                    b = [x.id, y, z]
                    b[1], b[2] = swap[(b[1], b[2])]
                    b[0], b[1] = swap[(b[0], b[1])]
                    b[1], b[2] = swap[(b[1], b[2])]
                    if a != b:
                        raise CubeFailure((x.id, y, z), tuple(a), tuple(b))


def validate(skeleton: Skeleton, rules: FactorisationRules) -> KGraph:
    """Check every k-graph axiom and return the validated graph."""
    skeleton.check()
    _check_squares(skeleton, rules)
    g = KGraph(skeleton, rules)
    check_cube(g)
    return g


def enumerate_factorisations(skeleton: Skeleton, limit: int = 100_000) -> list[FactorisationRules]:
    """Every set of factorisation rules that makes ``skeleton`` a k-graph.

    A square must preserve range and source, so each colour-(i, j) pair can only
    map to a colour-(j, i) pair with the same endpoints; the search ranges over
    bijections within those endpoint groups, then filters by the cube condition.
    """
    skeleton.check()
    k = skeleton.rank
    edges = skeleton.edge_map()
    blocks = []  # (list of sources, list of targets)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            groups = defaultdict(lambda: ([], []))
            for e, f in skeleton.composable_pairs(i, j):
                groups[(edges[e].range, edges[f].source)][0].append((e, f))
            for f, e in skeleton.composable_pairs(j, i):
                groups[(edges[f].range, edges[e].source)][1].append((f, e))
            for key in sorted(groups):
                src, dst = groups[key]
                if len(src) != len(dst):
                    return []
                blocks.append((sorted(src), sorted(dst)))
    size = math.prod(math.factorial(len(s)) for s, _ in blocks)
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)
    found = []
    for choice in itertools.product(*(itertools.permutations(d) for _, d in blocks)):
        squares = {}
        for (src, _), perm in zip(blocks, choice):
            squares.update(zip(src, perm))
        rules = FactorisationRules(squares)
        g = KGraph(skeleton, rules)
        try:
            check_cube(g)
        except CubeFailure:
            continue
        found.append(rules)
    return found
