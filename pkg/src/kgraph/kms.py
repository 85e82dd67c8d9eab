"""Toeplitz KMS_β states, the measure μ_eq and KMS_1 values on spanning elements.

For dynamics given by r ∈ R^k and β with βr_i > log ρ_i for every colour, the
Toeplitz states are parametrised by ε ≥ 0 with ε·y = 1, where

    yᵀ = 1ᵀ ∏_i (I - e^{-βr_i} A_i)^{-1}
    m^ε = ∏_i (I - e^{-βr_i} A_i)^{-1} ε
    φ_ε(t_μ t_ν*) = δ_{μ,ν} e^{-βr·d(μ)} m^ε_{s(μ)}.

The extremal states are ε = δ_v / y_v.  At β = 1 for the preferred dynamics
r = log ρ, states come from characters χ of Per Λ integrated against the
measure with μ_eq(Z(μ)) = ρ^{-d(μ)} x_{s(μ)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .errors import SimplexViolation, SourceMismatch, SubcriticalParameters, VertexNotInClass
from .classify import as_fraction
from .graph import KGraph, Path
from .periodicity import CharacterSpec, PeriodicityGroup, character_value, periodicity_group, theta
from .periods import positive_period
from .spectral import DEFAULT_PRECISION, adjacency, class_block, pf_eigenvector

_GUARD = 32


@dataclass(frozen=True)
class ToeplitzKMSState:
    beta: object
    r: tuple
    epsilon: tuple
    y: tuple
    m_eps: tuple
    eps_dot_y: mpf
    vertices: tuple
    precision_bits: int
    extremal_vertex: str | None = None

    def m_of(self, v: str) -> mpf:
        return self.m_eps[self.vertices.index(v)]

    def y_of(self, v: str) -> mpf:
        return self.y[self.vertices.index(v)]


def _resolvent_factors(g: KGraph, beta, r):
    """The matrices I - e^{-βr_i} A_i as mpmath matrices."""
    n = len(g.vertices)
    out = []
    for c in range(1, g.rank + 1):
        A = adjacency(g, c)
        t = mpmath.exp(-beta * r[c - 1])
        M = mpmath.eye(n)
        for i in range(n):
            for j in range(n):
                if A[i, j]:
                    M[i, j] -= t * int(A[i, j])
        out.append(M)
    return out


def _solve(M, b):
    """Gaussian elimination with partial pivoting plus one residual refinement."""
    x = mpmath.lu_solve(M, b)
    x += mpmath.lu_solve(M, b - M * x)
    return x


def parse_real(x) -> mpf:
    """A real from a number, a decimal or fraction string, or ``"log:<q>"`` for log q.

    Evaluated at the caller's working precision.
    """
    if isinstance(x, str):
        x = x.strip()
        if x.startswith("log:"):
            q = as_fraction(x[4:])
            return mpmath.log(mpf(q.numerator) / q.denominator)
        q = as_fraction(x)
        return mpf(q.numerator) / q.denominator
    return mpf(x)


def preferred_r(g: KGraph, precision_bits: int = DEFAULT_PRECISION) -> tuple:
    return pf_eigenvector(g, precision_bits).log_rho


def toeplitz_state(
    g: KGraph,
    beta,
    r="preferred",
    epsilon=None,
    precision_bits: int = DEFAULT_PRECISION,
) -> ToeplitzKMSState:
    """``epsilon`` is a vertex vector, ``("extremal", v)``, or None for extremal at the first vertex."""
    spec = pf_eigenvector(g, precision_bits)
    beta_q = as_fraction(beta)
    with mp.workprec(precision_bits + _GUARD):
        b = mpf(beta_q.numerator) / beta_q.denominator
        if isinstance(r, str):
            if r != "preferred":
                raise ValueError(f"unknown dynamics {r!r}")
            r = spec.log_rho
            if beta_q <= 1:
                raise SubcriticalParameters(f"preferred dynamics needs beta > 1, got {beta_q}")
        else:
            r = tuple(parse_real(x) for x in r)
            if len(r) != g.rank:
                raise ValueError(f"r needs {g.rank} entries")
        for c, (ri, lr) in enumerate(zip(r, spec.log_rho), start=1):
            if b * ri - lr <= mpf(2) ** -(precision_bits // 2):
                raise SubcriticalParameters(
                    f"beta*r_{c} = {mpmath.nstr(b * ri, 12)} <= log rho_{c} = {mpmath.nstr(lr, 12)}"
                )
        n = len(g.vertices)
        factors = _resolvent_factors(g, b, r)
        y = mpmath.ones(n, 1)
        for M in factors:
            y = _solve(M.T, y)
        extremal = None
        if epsilon is None:
            epsilon = ("extremal", g.vertices[0])
        if isinstance(epsilon, tuple) and len(epsilon) == 2 and epsilon[0] == "extremal":
            extremal = epsilon[1]
            t = g.vertex_index[extremal]
            eps = [mpf(0)] * n
            eps[t] = 1 / y[t]
            # ε·y for ε = δ_v / y_v: the single term y_v / y_v, exactly 1
            dot = y[t] / y[t]
        else:
            eps = [parse_real(x) for x in epsilon]
            if len(eps) != n:
                raise SimplexViolation(f"epsilon needs {n} entries")
            dot = mpmath.fsum(e * yy for e, yy in zip(eps, y))
            if any(e < 0 for e in eps) or abs(dot - 1) > mpf(2) ** -(precision_bits // 2):
                raise SimplexViolation(f"epsilon must be >= 0 with epsilon.y = 1, got {mpmath.nstr(dot, 15)}")
        m = mpmath.matrix(eps)
        for M in factors:
            m = _solve(M, m)
        return ToeplitzKMSState(
            beta=beta_q,
            r=tuple(+x for x in r),
            epsilon=tuple(+e for e in eps),
            y=tuple(+y[t] for t in range(n)),
            m_eps=tuple(+m[t] for t in range(n)),
            eps_dot_y=+dot,
            vertices=g.vertices,
            precision_bits=precision_bits,
            extremal_vertex=extremal,
        )


def toeplitz_eval(state: ToeplitzKMSState, mu: Path, nu: Path) -> mpf:
    """φ_ε(t_μ t_ν*)."""
    if mu.source != nu.source:
        raise SourceMismatch(f"s(mu)={mu.source!r} != s(nu)={nu.source!r}")
    if mu != nu:
        return mpf(0)
    b = state.beta
    with mp.workprec(state.precision_bits + _GUARD):
        bb = mpf(b.numerator) / b.denominator
        expo = mpmath.fsum(ri * d for ri, d in zip(state.r, mu.degree))
        return +(mpmath.exp(-bb * expo) * state.m_of(mu.source))


def cylinder_measure(g: KGraph, mu: Path, precision_bits: int = DEFAULT_PRECISION) -> mpf:
    """μ_eq(Z(μ)) = ρ^{-d(μ)} x_{s(μ)}."""
    spec = pf_eigenvector(g, precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        return +(spec.x_of(mu.source) / spec.rho_power(mu.degree))


def kms1_eval(
    g: KGraph,
    chi: CharacterSpec,
    mu: Path,
    nu: Path,
    per: PeriodicityGroup | None = None,
    precision_bits: int = DEFAULT_PRECISION,
):
    """φ_χ(s_μ s_ν*) for the KMS_1 state of the preferred dynamics given by χ."""
    if mu.source != nu.source:
        raise SourceMismatch(f"s(mu)={mu.source!r} != s(nu)={nu.source!r}")
    if per is None:
        per = periodicity_group(g, precision_bits=precision_bits)
    diff = tuple(a - b for a, b in zip(mu.degree, nu.degree))
    if not per.contains(diff):
        return mpmath.mpc(0)
    if theta(g, mu, nu.degree) != nu:
        return mpmath.mpc(0)
    with mp.workprec(precision_bits + _GUARD):
        return character_value(chi, per, diff, precision_bits + _GUARD) * cylinder_measure(
            g, mu, precision_bits
        )


def core_trace(
    g: KGraph,
    omega: Sequence[str],
    n: int,
    v: str,
    p: Sequence[int] | None = None,
    precision_bits: int = DEFAULT_PRECISION,
) -> mpf:
    """Trace of a minimal projection at v in the level-n block for class ω: ρ^{-np} ξ^ω_v."""
    omega = tuple(omega)
    if v not in omega:
        raise VertexNotInClass(f"{v!r} is not in {omega}")
    if n < 0:
        raise ValueError("level must be nonnegative")
    if p is None:
        p = positive_period(g).p
    block = class_block(g, omega, p, precision_bits)
    spec = pf_eigenvector(g, precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        return +(block.xi_of(v) / spec.rho_power(p) ** n)
