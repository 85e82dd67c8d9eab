import itertools
from fractions import Fraction

import mpmath
import pytest

from kgraph import generators
from kgraph.errors import SimplexViolation, SourceMismatch, SubcriticalParameters, VertexNotInClass
from kgraph.graph import compose, enumerate_paths
from kgraph.kms import (
    core_trace,
    cylinder_measure,
    kms1_eval,
    parse_real,
    toeplitz_eval,
    toeplitz_state,
)
from kgraph.periodicity import CharacterSpec, periodicity_group, trivial_character
from kgraph.spectral import adjacency, pf_eigenvector


def _exact_y(g, t):
    """1ᵀ ∏ (I - t_i A_i)^{-1} by Gauss-Jordan over the rationals."""
    n = len(g.vertices)
    y = [Fraction(1)] * n
    for c, tc in enumerate(t, start=1):
        A = adjacency(g, c)
        # solve (I - tA)ᵀ z = y
        M = [[Fraction(int(i == j)) - tc * int(A[j, i]) for j in range(n)] + [y[i]] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            M[col] = [x / M[col][col] for x in M[col]]
            for r in range(n):
                if r != col and M[r][col]:
                    M[r] = [a - M[r][col] * b for a, b in zip(M[r], M[col])]
        y = [M[i][n] for i in range(n)]
    return y


def test_y_matches_exact_solver(lam1, lam2):
    # preferred dynamics at β = 2 gives t_i = 1/ρ_i² = 1/2
    for g in (lam1, lam2):
        assert _exact_y(g, (Fraction(1, 2),) * 2) == [10, 14, 10]
        st = toeplitz_state(g, 2)
        assert all(abs(a - b) < 1e-60 for a, b in zip(st.y, (10, 14, 10)))


def test_y_exact_on_rational_dynamics(delta2):
    g = generators.named_example("Lambda12")
    st = toeplitz_state(g, 1, r=["log:3", "log:3"])
    exact = _exact_y(g, (Fraction(1, 3),) * 2)
    with mpmath.workprec(256):
        assert all(abs(a - mpmath.mpf(b.numerator) / b.denominator) < 1e-60 for a, b in zip(st.y, exact))


def test_one_vertex_closed_form(o2):
    st = toeplitz_state(o2, 2, r=["log:2"], epsilon=["1/2"])
    assert abs(st.y[0] - 2) < 1e-60
    assert abs(st.m_eps[0] - 1) < 1e-60
    mu = enumerate_paths(o2, (3,))[0]
    assert abs(toeplitz_eval(st, mu, mu) - mpmath.mpf(1) / 64) < 1e-60


def test_extremal_states_exact(corpus):
    for g in corpus.values():
        if any(r == 1 for r in pf_eigenvector(g).rho):
            continue
        for v in g.vertices:
            st = toeplitz_state(g, 2, epsilon=("extremal", v))
            assert st.eps_dot_y == 1


def test_state_errors(lam1, o2):
    with pytest.raises(SubcriticalParameters):
        toeplitz_state(lam1, 1)
    with pytest.raises(SubcriticalParameters):
        toeplitz_state(o2, 1, r=["0.5"], epsilon=["1"])
    with pytest.raises(SimplexViolation):
        toeplitz_state(lam1, 2, epsilon=["1", "0", "0"])
    with pytest.raises(SimplexViolation):
        toeplitz_state(lam1, 2, epsilon=["-0.1", "0.1", "0.1"])
    st = toeplitz_state(lam1, 2)
    a, b = enumerate_paths(lam1, (1, 0), source="u")[0], enumerate_paths(lam1, (1, 0), source="v")[0]
    with pytest.raises(SourceMismatch):
        toeplitz_eval(st, a, b)


def test_state_normalised_and_dominating(lam1, lam2):
    for g in (lam1, lam2):
        for v in g.vertices:
            st = toeplitz_state(g, "2.5", epsilon=("extremal", v))
            # φ(1) = Σ_v m_v
            assert abs(mpmath.fsum(st.m_eps) - 1) < 1e-60
            for c in (1, 2):
                A = adjacency(g, c)
                t = mpmath.exp(-mpmath.mpf("2.5") * st.r[c - 1])
                for i in range(len(g.vertices)):
                    row = mpmath.fsum(t * int(A[i, j]) * st.m_eps[j] for j in range(len(g.vertices)))
                    assert st.m_eps[i] >= row - 1e-60


def test_parse_real():
    assert parse_real("1/4") == mpmath.mpf(1) / 4
    assert parse_real(3) == 3
    with mpmath.workprec(200):
        assert abs(parse_real("log:2") - mpmath.log(2)) < 1e-55


def test_cylinder_measure(corpus):
    for g in corpus.values():
        spec = pf_eigenvector(g)
        assert abs(mpmath.fsum(spec.x) - 1) < 1e-60
        ones = (1,) * g.rank
        for n in itertools.product(range(2), repeat=g.rank):
            for mu in enumerate_paths(g, n):
                total = mpmath.fsum(cylinder_measure(g, compose(mu, z))
                                    for z in enumerate_paths(g, ones, range=mu.source))
                assert abs(total - cylinder_measure(g, mu)) < 1e-25


def test_kms1_examples(lam1, lam2):
    per = periodicity_group(lam2)
    chi = trivial_character(per)
    mu, nu = lam2.path(["c0", "a0"]), lam2.path(["b1", "d1"])
    val = kms1_eval(lam2, chi, mu, nu, per)
    with mpmath.workprec(256):
        assert abs(val - cylinder_measure(lam2, mu)) < 1e-60
    # a twisted character picks up the phase
    quarter = CharacterSpec((mpmath.mpf(1) / 4,))
    assert abs(kms1_eval(lam2, quarter, mu, nu, per) - 1j * cylinder_measure(lam2, mu)) < 1e-60
    with pytest.raises(SourceMismatch):
        kms1_eval(lam1, trivial_character(periodicity_group(lam1)), lam1.vertex_path("u"), lam1.vertex_path("v"))


def test_kms1_off_period_is_zero(lam2):
    per = periodicity_group(lam2)
    chi = trivial_character(per)
    for mu in enumerate_paths(lam2, (1, 0)):
        for nu in enumerate_paths(lam2, (0, 1), source=mu.source):
            assert kms1_eval(lam2, chi, mu, nu, per) == 0


def test_kms1_cuntz_krieger_consistency(lam1, lam2):
    for g in (lam1, lam2):
        per = periodicity_group(g)
        chi = CharacterSpec(tuple(mpmath.mpf(1) / 3 for _ in per.basis))
        for mu in enumerate_paths(g, (2, 0)):
            for nu in enumerate_paths(g, (0, 2), source=mu.source):
                lhs = kms1_eval(g, chi, mu, nu, per)
                for step in ((1, 0), (0, 1)):
                    rhs = mpmath.fsum(
                        kms1_eval(g, chi, compose(mu, z), compose(nu, z), per)
                        for z in enumerate_paths(g, step, range=mu.source)
                    )
                    assert abs(lhs - rhs) < 1e-25


def test_core_trace(lam1):
    assert abs(core_trace(lam1, ["u", "w"], 0, "u") - mpmath.mpf(1) / 2) < 1e-60
    assert abs(core_trace(lam1, ["u", "w"], 1, "w") - mpmath.mpf(1) / 4) < 1e-60
    assert abs(core_trace(lam1, ["v"], 2, "v") - mpmath.mpf(1) / 4) < 1e-60
    with pytest.raises(VertexNotInClass):
        core_trace(lam1, ["u", "w"], 0, "v")
