"""Brute-force and Monte-Carlo checks for the fast algorithms.

Each oracle avoids the shortcut it is meant to check: cycle degrees come from
walking the skeleton rather than from potentials, y from summing the series
rather than solving linear systems, periodicity from wide windows rather than
the single unit window, and λ for one-vertex graphs from exact integer
arithmetic rather than a real gcd.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .classify import DEFAULT_DENOMINATOR_BOUND, TypeIII, as_fraction, classify
from .graph import Degree, KGraph, Path, compose, iter_paths, segment
from .lattice import Lattice
from .periodicity import is_periodicity_pair
from .periods import period_group, positive_period, vertex_classes
from .spectral import DEFAULT_PRECISION, adjacency, identity, perron_pair, pf_eigenvector


# --- period group -------------------------------------------------------------


@dataclass(frozen=True)
class BFPeriodResult:
    lattice: Lattice
    stabilized: bool
    cycle_degrees: frozenset


def _cycle_degrees(g: KGraph, bound: Sequence[int]) -> set:
    """Degrees of all cycles with degree <= bound, by search over (vertex, degree)."""
    out = set()
    k = g.rank
    for v in g.vertices:
        seen = {(v, (0,) * k)}
        stack = [(v, (0,) * k)]
        while stack:
            x, d = stack.pop()
            for e in g.edges:
                if e.range != x:
                    continue
                c = e.color - 1
                if d[c] >= bound[c]:
                    continue
                nd = d[:c] + (d[c] + 1,) + d[c + 1 :]
                state = (e.source, nd)
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
        out.update(d for x, d in seen if x == v)
    return out


def bf_period_group(g: KGraph, degree_bound: Sequence[int]) -> BFPeriodResult:
    """Lattice spanned by cycle degrees within the bound (0 is the trivial cycle,
    so differences of cycle degrees and the degrees themselves span the same group)."""
    bound = tuple(degree_bound)
    degs = _cycle_degrees(g, bound)
    lat = Lattice.from_generators(g.rank, degs)
    smaller = tuple(max(b - 1, 0) for b in bound)
    prev = Lattice.from_generators(g.rank, _cycle_degrees(g, smaller))
    return BFPeriodResult(lat, prev == lat, frozenset(degs))


def gcd_of_cycle_lengths(g: KGraph, bound: int | None = None) -> int:
    """Period of a strongly connected 1-graph; cycles up to length |V|² suffice."""
    if g.rank != 1:
        raise ValueError("needs a 1-graph")
    n = len(g.vertices)
    res = bf_period_group(g, (bound or n * n,))
    return res.lattice.basis[0][0]


# --- Toeplitz series ----------------------------------------------------------


@dataclass(frozen=True)
class BFToeplitzResult:
    y: tuple
    tail_bound: mpf
    truncation: int


def bf_toeplitz_y(g: KGraph, beta, r, N: int, precision_bits: int = DEFAULT_PRECISION) -> BFToeplitzResult:
    """Σ_{n <= N·1} e^{-βr·n} 1ᵀA^n with a bound on the omitted terms.

    The box sum factorises over colours because the A_i commute.  For the tail,
    with z the positive left eigenvector of Σ A_i and K = max z / min z,
    1ᵀA^n <= K ρ^n 1ᵀ entrywise, so the omitted mass per entry is at most
    K (∏ S_i - ∏ S_i^{(N)}) with S_i the full and S_i^{(N)} the truncated
    geometric sums of q_i = e^{-βr_i} ρ_i.
    """
    from .kms import parse_real

    spec = pf_eigenvector(g, precision_bits)
    n = len(g.vertices)
    bq = as_fraction(beta)
    with mp.workprec(precision_bits + 32):
        b = mpf(bq.numerator) / bq.denominator
        r = spec.log_rho if isinstance(r, str) else tuple(parse_real(x) for x in r)
        row = [mpf(1)] * n
        full, part = mpf(1), mpf(1)
        for c in range(1, g.rank + 1):
            A = adjacency(g, c)
            t = mpmath.exp(-b * r[c - 1])
            acc = [mpf(0)] * n
            P = identity(n)
            tj = mpf(1)
            for _ in range(N + 1):
                vec = [mpmath.fsum(row[i] * int(P[i, j]) for i in range(n)) for j in range(n)]
                acc = [a + tj * x for a, x in zip(acc, vec)]
                P = P.dot(A)
                tj *= t
            row = acc
            q = t * spec.rho[c - 1]
            if q >= 1:
                raise ValueError(f"series diverges in colour {c}")
            full *= 1 / (1 - q)
            part *= (1 - q ** (N + 1)) / (1 - q)
        total = sum((adjacency(g, c) for c in range(1, g.rank + 1)), identity(n) * 0)
        _, _, z = perron_pair(total.T, precision_bits)
        K = max(z) / min(z)
        return BFToeplitzResult(tuple(row), +(K * (full - part)), N)


# --- sampling -----------------------------------------------------------------


class SampleStream:
    """Seeded sampler of μ_eq-distributed path prefixes.

    The initial vertex is drawn from x; the path is then extended at its source
    one edge at a time, colours in round-robin order, choosing e with
    r(e) = v and colour i with probability x_{s(e)} / (ρ_i x_v).
    """

    def __init__(self, g: KGraph, seed: int = 0, precision_bits: int = 64):
        self.graph = g
        self.seed = seed
        self.rng = random.Random(seed)
        spec = pf_eigenvector(g, max(precision_bits, 64))
        x = [float(t) for t in spec.x]
        self._x = x
        idx = g.vertex_index
        self._steps = {}
        for v in g.vertices:
            for c in range(1, g.rank + 1):
                eids = g.edges_into[(v, c)]
                w = [x[idx[g.edge[e].source]] / (float(spec.rho[c - 1]) * x[idx[v]]) for e in eids]
                self._steps[(v, c)] = (eids, w)

    def initial_vertex(self) -> str:
        return self.rng.choices(self.graph.vertices, weights=self._x)[0]

    def extend(self, v: str, color: int) -> str:
        eids, w = self._steps[(v, color)]
        return self.rng.choices(eids, weights=w)[0]


@dataclass(frozen=True)
class SampledPath:
    path: Path
    class_index: int


def sample_path(stream: SampleStream, length: int) -> SampledPath:
    """The degree length·(1,...,1) prefix of a sampled infinite path."""
    g = stream.graph
    v = stream.initial_vertex()
    if length == 0:
        p = g.vertex_path(v)
    else:
        seq = []
        at = v
        for _ in range(length):
            for c in range(1, g.rank + 1):
                e = stream.extend(at, c)
                seq.append(e)
                at = g.edge[e].source
        p = g.path(seq)
    return SampledPath(p, vertex_classes(g).class_of(v))


def empirical_cylinder_masses(stream: SampleStream, length: int, samples: int) -> Counter:
    return Counter(sample_path(stream, length).path.edges for _ in range(samples))


# --- cocycle ------------------------------------------------------------------


@dataclass(frozen=True)
class CocycleSample:
    m: Degree
    n: Degree
    value: mpf
    in_period_group: bool


def estimate_cocycle(
    g: KGraph,
    stream: SampleStream,
    samples: int,
    length: int = 2,
    prefix_max: int = 2,
    precision_bits: int = DEFAULT_PRECISION,
) -> list[CocycleSample]:
    """Sample related pairs (x, y) and record ρ^{n-m} for σ^m x = σ^n y.

    x is a sampled prefix of degree length·1; y replaces x(0, m) by a random
    path ν of degree n ending at r(σ^m x), so both share the tail σ^m x.
    Only pairs with r(x) ~ r(y) are kept.
    """
    spec = pf_eigenvector(g, precision_bits)
    P = period_group(g)
    rng = stream.rng
    k = g.rank
    vc = vertex_classes(g)
    out = []
    for _ in range(samples):
        x = sample_path(stream, length).path
        m = tuple(rng.randint(0, length) for _ in range(k))
        n = tuple(rng.randint(0, prefix_max) for _ in range(k))
        tail = segment(x, m, x.degree)
        nu = rng.choice(list(iter_paths(g, n, source=tail.range)))
        y = compose(nu, tail)
        if vc.class_of(x.range) != vc.class_of(y.range):
            continue
        diff = tuple(b - a for a, b in zip(m, n))
        out.append(CocycleSample(m, n, spec.rho_power(diff), P.contains(diff)))
    return out


def is_power_of(value: mpf, base: int, tol: float = 1e-9) -> bool:
    with mp.workprec(128):
        e = mpmath.log(value) / mpmath.log(base)
        return abs(e - mpmath.nint(e)) <= tol


# --- periodicity --------------------------------------------------------------


def bf_periodicity(g: KGraph, m: Sequence[int], n: Sequence[int], q: Sequence[int]) -> bool:
    """Window agreement λ(m, m+q) = λ(n, n+q) on every path of degree (m ∨ n) + q."""
    m, n, q = tuple(m), tuple(n), tuple(q)
    if any(x < 1 for x in q):
        raise ValueError("window must be at least (1,...,1)")
    top = tuple(max(a, b) + c for a, b, c in zip(m, n, q))
    mq = tuple(a + c for a, c in zip(m, q))
    nq = tuple(b + c for b, c in zip(n, q))
    return all(segment(lam, m, mq).edges == segment(lam, n, nq).edges for lam in iter_paths(g, top))


# --- closed forms -------------------------------------------------------------


def _minimal_root(m: int) -> tuple[int, int]:
    """m = root**e with e maximal."""
    for e in range(m.bit_length(), 1, -1):
        r = round(m ** (1 / e))
        for cand in (r - 1, r, r + 1):
            if cand > 1 and cand**e == m:
                return _minimal_root(cand)[0], e * _minimal_root(cand)[1]
    return m, 1


def one_vertex_lambda(counts: Sequence[int], precision_bits: int = DEFAULT_PRECISION):
    """λ for a one-vertex k-graph with counts[i] loops of colour i+1, or None if dense.

    log m_1 and log m_i are rationally dependent iff m_1 and m_i are powers of a
    common integer; then m_1^{a_i} = m_i^{b_i} with b_i = e_1 / gcd(e_1, e_i)
    and λ = m_1^{-1/lcm(b_2, ..., b_k)}.
    """
    if any(m < 2 for m in counts):
        raise ValueError("every colour needs at least two loops")
    root, e1 = _minimal_root(counts[0])
    bs = []
    for m in counts[1:]:
        r, e = _minimal_root(m)
        if r != root:
            return None
        bs.append(e1 // math.gcd(e1, e))
    L = math.lcm(*bs) if bs else 1
    with mp.workprec(precision_bits):
        return +(mpf(counts[0]) ** (mpf(-1) / L))


def one_graph_lambda(g: KGraph, precision_bits: int = DEFAULT_PRECISION) -> mpf:
    """ρ(A)^{-p} for a strongly connected 1-graph, p the gcd of cycle lengths."""
    p = gcd_of_cycle_lengths(g)
    rho = pf_eigenvector(g, precision_bits).rho[0]
    with mp.workprec(precision_bits):
        return +(rho ** (-p))


# --- named checks for the command line ---------------------------------------


@dataclass
class CheckResult:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)


def check_period_group(g: KGraph, bound: int | None = None, **_) -> CheckResult:
    fast = period_group(g)
    b = bound or max(4, 2 * len(g.vertices))
    slow = bf_period_group(g, (b,) * g.rank)
    ok = slow.lattice == fast
    return CheckResult(
        "period-group",
        ok,
        {"fast": [list(v) for v in fast.basis], "brute_force": [list(v) for v in slow.lattice.basis],
         "bound": b, "stabilized": slow.stabilized},
    )


def check_positive_period(g: KGraph, **_) -> CheckResult:
    from .spectral import power_product

    pp = positive_period(g)
    vc = vertex_classes(g)
    Ap = power_product(g, pp.p)
    idx = g.vertex_index
    bad = [
        [v, w]
        for v in g.vertices
        for w in g.vertices
        if (Ap[idx[v], idx[w]] > 0) != (vc.class_of(v) == vc.class_of(w))
    ]
    return CheckResult("positive-period", not bad and all(x > 0 for x in pp.p),
                       {"p": list(pp.p), "mismatches": bad})


def check_periodicity(g: KGraph, bound: int | None = None, **_) -> CheckResult:
    b = bound or 2
    bad = []
    for d in period_group(g).members_in_box(b):
        m = tuple(max(x, 0) for x in d)
        n = tuple(max(-x, 0) for x in d)
        fast = is_periodicity_pair(g, m, n)
        slow = bf_periodicity(g, m, n, (2,) * g.rank)
        if fast != slow:
            bad.append({"g": list(d), "single_window": fast, "wide_window": slow})
    return CheckResult("periodicity", not bad, {"box": b, "mismatches": bad})


def check_toeplitz(g: KGraph, bound: int | None = None, precision_bits: int = DEFAULT_PRECISION, **_) -> CheckResult:
    from .kms import toeplitz_state

    N = bound or 80
    st = toeplitz_state(g, 2, "preferred", precision_bits=precision_bits)
    bf = bf_toeplitz_y(g, 2, "preferred", N, precision_bits)
    with mp.workprec(precision_bits):
        err = max(abs(a - b) for a, b in zip(st.y, bf.y))
        ok = err <= 10 * bf.tail_bound
    return CheckResult("toeplitz-y", bool(ok), {"N": N, "max_error": mpmath.nstr(err, 10),
                                                "tail_bound": mpmath.nstr(bf.tail_bound, 10)})


def check_sampling(g: KGraph, seed: int = 0, samples: int = 20_000, **_) -> CheckResult:
    from .kms import cylinder_measure

    stream = SampleStream(g, seed)
    counts = empirical_cylinder_masses(stream, 1, samples)
    bad = []
    for p in iter_paths(g, (1,) * g.rank):
        expect = float(cylinder_measure(g, p))
        sigma = math.sqrt(expect * (1 - expect) / samples)
        got = counts.get(p.edges, 0) / samples
        if abs(got - expect) > 3 * sigma + 1e-12:
            bad.append({"path": str(p), "expected": expect, "observed": got, "sigma": sigma})
    return CheckResult("sampling", not bad, {"samples": samples, "seed": seed, "outliers": bad})


def check_classify(g: KGraph, precision_bits: int = DEFAULT_PRECISION,
                   denominator_bound: int = DEFAULT_DENOMINATOR_BOUND, **_) -> CheckResult:
    """Closed forms where they exist: ρ^{-p} for 1-graphs, the integer formula for one vertex."""
    c = classify(g, 1, precision_bits, denominator_bound).factor
    details = {"factor": c.tag}
    if not isinstance(c, TypeIII):
        return CheckResult("classify", True, details)
    if g.rank == 1:
        expect = one_graph_lambda(g, precision_bits)
    elif len(g.vertices) == 1 and all(len(g.edges_into[(g.vertices[0], i)]) >= 2 for i in range(1, g.rank + 1)):
        expect = one_vertex_lambda([len(g.edges_into[(g.vertices[0], i)]) for i in range(1, g.rank + 1)], precision_bits)
        expect = mpf(1) if expect is None else expect
    else:
        details["note"] = "no closed form for this graph"
        return CheckResult("classify", True, details)
    ok = abs(c.lam - expect) <= 1e-12
    details.update({"lambda": mpmath.nstr(c.lam, 20), "closed_form": mpmath.nstr(expect, 20)})
    return CheckResult("classify", bool(ok), details)


CHECKS = {
    "period-group": check_period_group,
    "positive-period": check_positive_period,
    "periodicity": check_periodicity,
    "toeplitz-y": check_toeplitz,
    "sampling": check_sampling,
    "classify": check_classify,
}
