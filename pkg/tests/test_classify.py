import random

import mpmath
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph import generators
from kgraph.classify import (
    Dense,
    Discrete,
    TrivialGroup,
    TypeIFinite,
    TypeIII,
    TypeIInfinity,
    classify,
    connes_invariant,
)
from kgraph.errors import InconclusivePrecision, NoKMSState
from kgraph.oracle import one_graph_lambda, gcd_of_cycle_lengths, one_vertex_lambda
from kgraph.spectral import pf_eigenvector


def test_connes_examples(lam1, delta2):
    inv = connes_invariant(lam1)
    assert isinstance(inv, Discrete)
    with mpmath.workprec(256):
        assert abs(inv.c - mpmath.log(2)) < 1e-60
    assert isinstance(connes_invariant(generators.named_example("Lambda13")), Dense)
    assert isinstance(connes_invariant(delta2), TrivialGroup)


def test_discrete_generators_are_multiples(corpus):
    for g in corpus.values():
        inv = connes_invariant(g)
        if isinstance(inv, Discrete):
            for x in inv.generators:
                t = x / inv.c
                assert abs(t - mpmath.nint(t)) < 1e-50


def test_classify_examples(lam1, delta2, o2):
    f = classify(lam1, 1).factor
    assert isinstance(f, TypeIII) and abs(f.lam - 0.5) < 1e-60 and not f.dense
    assert classify(delta2, 1).factor == TypeIFinite(2)
    f = classify(o2, 1).factor
    assert isinstance(f, TypeIII) and abs(f.lam - 0.5) < 1e-60
    assert classify(lam1, 2).factor == TypeIInfinity()
    assert classify(lam1, Fraction(3, 2)).extremal_labels == lam1.vertices
    with pytest.raises(NoKMSState):
        classify(lam1, "0.5")
    with pytest.raises(NoKMSState):
        classify(lam1, Fraction(999, 1000))


def test_beta_compared_exactly(lam1):
    assert classify(lam1, "1.0000000000000000000001").factor == TypeIInfinity()
    assert isinstance(classify(lam1, "1").factor, TypeIII)


def test_skeleton_invariance(lam1, lam2):
    for beta in (1, "1.5", 2):
        a, b = classify(lam1, beta).factor, classify(lam2, beta).factor
        assert a == b


def test_one_vertex_closed_form():
    for counts, lam in [((2, 2), 0.5), ((2, 8), 0.5), ((4, 8), 0.5), ((3, 9), 1 / 3)]:
        assert abs(one_vertex_lambda(counts) - lam) < 1e-15
    assert one_vertex_lambda((2, 3)) is None
    assert one_vertex_lambda((4, 8, 2)) == 0.5
    assert abs(one_vertex_lambda((8, 4)) - 0.5) < 1e-60


@given(st.lists(st.integers(2, 40), min_size=2, max_size=3))
@settings(max_examples=40, deadline=None)
def test_one_vertex_matches_closed_form(counts):
    g = generators.single_vertex(len(counts), counts)
    f = classify(g, 1).factor
    expect = one_vertex_lambda(counts)
    if expect is None:
        assert f.dense
    else:
        assert not f.dense and abs(f.lam - expect) < 1e-40


def test_one_graphs_match_period_formula():
    rng = random.Random(5)
    for _ in range(20):
        g = generators.random_one_graph(rng.randint(1, 6), rng)
        f = classify(g, 1).factor
        p = gcd_of_cycle_lengths(g)
        rho = pf_eigenvector(g).rho[0]
        with mpmath.workprec(256):
            assert abs(f.lam - rho ** (-p)) < 1e-40
        assert abs(one_graph_lambda(g) - f.lam) < 1e-40


def test_dense_needs_small_remainder():
    g = generators.single_vertex(2, (2, 3))
    # with Q = 2 the continued fraction of log 3 / log 2 stops early but the
    # remainder is not zero: still dense
    assert isinstance(connes_invariant(g, denominator_bound=2), Dense)
    assert isinstance(connes_invariant(g, 64, 10**4), Dense)


def test_inconclusive_at_tiny_precision():
    g = generators.single_vertex(2, (2, 3))
    with pytest.raises(InconclusivePrecision):
        connes_invariant(g, precision_bits=24, denominator_bound=10**12)
