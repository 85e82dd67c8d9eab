import random

import mpmath
import pytest

from kgraph import generators
from kgraph.lattice import Lattice
from kgraph.oracle import (
    CHECKS,
    SampleStream,
    bf_period_group,
    bf_toeplitz_y,
    estimate_cocycle,
    gcd_of_cycle_lengths,
    is_power_of,
    sample_path,
)
from kgraph.periods import period_group
from kgraph.spectral import pf_eigenvector


def test_bf_period_group(lam1, delta2):
    res = bf_period_group(lam1, (4, 4))
    assert res.lattice == Lattice.from_generators(2, [(1, 1), (0, 2)])
    assert res.stabilized
    assert (0, 0) in res.cycle_degrees and (1, 0) not in res.cycle_degrees
    assert bf_period_group(delta2, (4, 4)).lattice == period_group(delta2)


def test_gcd_of_cycle_lengths():
    for n in range(1, 6):
        assert gcd_of_cycle_lengths(generators.cycle(1, [(n,)])) == n
    rng = random.Random(2)
    for _ in range(10):
        g = generators.random_one_graph(rng.randint(1, 6), rng)
        assert gcd_of_cycle_lengths(g) == period_group(g).basis[0][0]


def test_truncated_series(lam1, o2):
    assert bf_toeplitz_y(lam1, 2, "preferred", 0).y == (1, 1, 1)
    res = bf_toeplitz_y(o2, 2, ["log:2"], 20)
    assert 2 - mpmath.mpf(2) ** -19 <= res.y[0] < 2
    prev = None
    for N in (5, 10, 20):
        y = bf_toeplitz_y(lam1, 2, "preferred", N).y
        if prev:
            assert all(a >= b for a, b in zip(y, prev))
        prev = y


def test_truncated_series_within_tail_bound(lam1):
    for N in (10, 40, 80):
        res = bf_toeplitz_y(lam1, 2, "preferred", N)
        err = max(abs(a - b) for a, b in zip(res.y, (10, 14, 10)))
        assert err <= res.tail_bound
    assert err < 1e-9


def test_sampling_reproducible(lam1):
    def draw(seed):
        s = SampleStream(lam1, seed)
        return [sample_path(s, 3).path.edges for _ in range(50)]

    assert draw(7) == draw(7)
    assert draw(7) != draw(8)


def test_cocycle_values(lam1):
    obs = estimate_cocycle(lam1, SampleStream(lam1, 1), 2000)
    assert obs
    for s in obs:
        assert s.in_period_group
        assert is_power_of(s.value, 2)
        if s.m == s.n:
            assert s.value == 1


@pytest.mark.parametrize("check", sorted(CHECKS))
def test_checks_on_corpus(check, corpus):
    for name, g in corpus.items():
        kw = {"samples": 4000} if check == "sampling" else {}
        if check == "toeplitz-y" and any(r == 1 for r in pf_eigenvector(g).rho):
            continue
        if check == "periodicity" and g.rank > 2:
            kw["bound"] = 1
        res = CHECKS[check](g, **kw)
        assert res.ok, (name, res.details)
