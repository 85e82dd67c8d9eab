import itertools

import mpmath
import pytest

from kgraph import generators
from kgraph.errors import NotAPeriod
from kgraph.graph import enumerate_paths
from kgraph.oracle import bf_periodicity
from kgraph.periodicity import (
    CharacterSpec,
    character_value,
    is_period,
    is_periodicity_pair,
    passes_filters,
    periodicity_group,
    theta,
)
from kgraph.periods import period_group
from kgraph.spectral import power_product


def test_pairs_on_three_vertex_examples(lam1, lam2):
    assert is_periodicity_pair(lam2, (2, 0), (0, 2))
    assert not is_periodicity_pair(lam2, (1, 0), (0, 1))
    assert is_periodicity_pair(lam1, (1, 0), (0, 1))
    assert is_periodicity_pair(lam1, (3, 1), (3, 1))


def test_groups(lam1, lam2, delta2):
    assert periodicity_group(lam1, 4).basis == ((1, -1),)
    assert periodicity_group(lam2, 4).basis == ((2, -2),)
    assert periodicity_group(delta2).lattice == period_group(delta2)


def test_simple_cycles_have_full_periodicity():
    for basis in generators.all_cycle_bases(2, 4):
        g = generators.cycle(2, basis)
        assert periodicity_group(g, 4).lattice == period_group(g)


def test_members_pass_every_filter(corpus):
    for g in corpus.values():
        per = periodicity_group(g, 3)
        assert per.lattice.is_sublattice_of(period_group(g))
        for d in per.members:
            hi = tuple(max(x, 0) for x in d)
            lo = tuple(max(-x, 0) for x in d)
            assert (power_product(g, hi) == power_product(g, lo)).all()
            assert passes_filters(g, d)


def test_group_property(lam1, lam2):
    for g in (lam1, lam2):
        members = [d for d in period_group(g).members_in_box(2) if is_period(g, d)]
        for a, b in itertools.product(members, repeat=2):
            s = tuple(x + y for x, y in zip(a, b))
            if max(map(abs, s)) <= 2:
                assert is_period(g, s)
            assert is_period(g, tuple(-x for x in a))


def test_single_window_matches_wide_windows(lam1, lam2):
    for g in (lam1, lam2):
        for d in period_group(g).members_in_box(3):
            m = tuple(max(x, 0) for x in d)
            n = tuple(max(-x, 0) for x in d)
            fast = is_periodicity_pair(g, m, n)
            for q in itertools.product(range(1, 4), repeat=2):
                assert bf_periodicity(g, m, n, q) == fast


def test_window_monotone(lam2):
    assert bf_periodicity(lam2, (2, 0), (0, 2), (1, 1))
    assert not bf_periodicity(lam2, (1, 0), (0, 1), (1, 1))
    assert not bf_periodicity(lam2, (1, 0), (0, 1), (2, 3))


def test_theta(lam1, lam2):
    for g in (lam1, lam2):
        for mu in enumerate_paths(g, (1, 1)):
            assert theta(g, mu, mu.degree) == mu
    mu = lam2.path(["c0", "a0"])
    nu = theta(lam2, mu, (0, 2))
    assert nu.degree == (0, 2) and nu.range == mu.range
    # c_i a_i x = b_{1-i} d_{1-i} x
    assert nu.edges == ("b1", "d1")
    with pytest.raises(NotAPeriod):
        theta(lam2, lam2.path(["c0"]), (0, 1))


def test_theta_independent_of_extension(lam1, lam2):
    for g, n_of in ((lam1, lambda d: (d[0] - 1, d[1] + 1)), (lam2, lambda d: (d[0] - 2, d[1] + 2))):
        for mu in enumerate_paths(g, (2, 0)):
            n = n_of(mu.degree)
            need = tuple(max(b - a, 0) for a, b in zip(mu.degree, n))
            results = set()
            for deg in (need, tuple(x + 1 for x in need)):
                for z in enumerate_paths(g, deg, range=mu.source):
                    results.add(theta(g, mu, n, extension=z).edges)
            assert len(results) == 1
            assert theta(g, mu, n).edges in results


def test_characters(lam2):
    per = periodicity_group(lam2)
    chi = CharacterSpec((mpmath.mpf(1) / 4,))
    assert character_value(chi, per, (0, 0)) == 1
    v = character_value(chi, per, (2, -2))
    assert abs(v - 1j) < 1e-60
    assert abs(character_value(chi, per, (-4, 4)) + 1) < 1e-60
    with pytest.raises(NotAPeriod):
        character_value(chi, per, (1, -1))
