"""Connes invariant and factor type of the extremal KMS states.

At β = 1 the Connes invariant is the closure of {ρ(Λ)^g : g ∈ P_Λ}.  Taking logs,
it is the closure of the subgroup of R generated by γ_j = b_j · log ρ(Λ) over a
basis b_j of P_Λ.  That subgroup is either {0}, cyclic cZ, or dense, and a real
Euclidean algorithm tells the cases apart numerically: a cyclic group shows up
as a remainder that vanishes, a dense one as remainders that keep shrinking.
The cut-off is the denominator bound Q: once the running remainder is smaller
than max|γ_j| / Q the group is reported dense, with that caveat attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import InconclusivePrecision, InternalInconsistency, NoKMSState
from .graph import KGraph
from .periods import period_group, structure_flags
from .spectral import DEFAULT_PRECISION, pf_eigenvector

DEFAULT_DENOMINATOR_BOUND = 10_000


@dataclass(frozen=True)
class TrivialGroup:
    generators: tuple = ()
    tag: str = field(default="TrivialGroup", init=False)


@dataclass(frozen=True)
class Discrete:
    """S ∩ (0, ∞) = exp(cZ)."""

    c: mpf
    c_error: mpf
    generators: tuple = ()
    tag: str = field(default="Discrete", init=False)


@dataclass(frozen=True)
class Dense:
    generators: tuple = ()
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
    precision_bits: int = DEFAULT_PRECISION
    caveat: str = ""
    tag: str = field(default="Dense", init=False)


ConnesInvariant = TrivialGroup | Discrete | Dense


@dataclass(frozen=True)
class TypeIInfinity:
    tag: str = field(default="I_inf", init=False)


@dataclass(frozen=True)
class TypeIFinite:
    n: int
    tag: str = field(default="I_n", init=False)


@dataclass(frozen=True)
class TypeIII:
    lam: mpf
    lam_error: mpf
    dense: bool
    tag: str = field(default="III_lambda", init=False)


FactorType = TypeIInfinity | TypeIFinite | TypeIII


def _generators(g: KGraph, precision_bits: int):
    P = period_group(g)
    log_rho = pf_eigenvector(g, precision_bits).log_rho
    with mp.workprec(precision_bits):
        return tuple(mpmath.fsum(b_i * lr for b_i, lr in zip(b, log_rho)) for b in P.basis)


def connes_invariant(
    g: KGraph,
    precision_bits: int = DEFAULT_PRECISION,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
):
    gammas = _generators(g, precision_bits)
    with mp.workprec(precision_bits):
        scale = max([abs(x) for x in gammas] + [mpf(1)])
        tol = mpf(2) ** -(precision_bits // 2) * scale
        # error carried by each input: spectral radii are good to ~2^-(prec-8)
        unit_err = mpf(2) ** -(precision_bits - 16) * scale
        vals = [(abs(x), unit_err) for x in gammas if abs(x) > tol]
        if not vals:
            return TrivialGroup(gammas)
        top = max(v for v, _ in vals)
        limit = top / denominator_bound
        c, c_err = vals[0]
        for b, b_err in vals[1:]:
            a, a_err = (c, c_err) if c >= b else (b, b_err)
            b, b_err = (b, b_err) if c >= b else (c, c_err)
            while True:
                if b_err >= tol:
                    raise InconclusivePrecision(
                        "rounding error in the real gcd reached the zero tolerance; raise --precision"
                    )
                if b < limit:
                    return Dense(gammas, denominator_bound, precision_bits, "numeric, bound Q")
                q = mpmath.floor(a / b)
                r = a - q * b
                r_err = a_err + q * b_err
                if r <= tol:
                    c, c_err = b, b_err
                    break
                a, a_err, b, b_err = b, b_err, r, r_err
        if c < limit:
            return Dense(gammas, denominator_bound, precision_bits, "numeric, bound Q")
        for x in gammas:
            t = x / c
            if abs(t - mpmath.nint(t)) * c > tol:
                raise InconclusivePrecision(f"generator {mpmath.nstr(x, 12)} is not a multiple of c")
        return Discrete(+c, +c_err, gammas)


@dataclass(frozen=True)
class Classification:
    """Factor type at one β, with the index set of the extremal KMS states."""

    beta: Fraction
    factor: FactorType
    extremal_index: str
    extremal_labels: tuple
    connes: object = None
    basis: str = ""


def as_fraction(beta) -> Fraction:
    if isinstance(beta, Fraction):
        return beta
    if isinstance(beta, float):
        return Fraction(repr(beta))
    return Fraction(str(beta))


def classify(
    g: KGraph,
    beta,
    precision_bits: int = DEFAULT_PRECISION,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
) -> Classification:
    beta = as_fraction(beta)
    if beta < 1:
        raise NoKMSState(f"no KMS_beta state for the preferred dynamics at beta = {beta} < 1")
    if beta > 1:
        return Classification(
            beta,
            TypeIInfinity(),
            "vertices",
            g.vertices,
            basis="Toeplitz KMS states above the critical inverse temperature",
        )
    flags = structure_flags(g)
    inv = connes_invariant(g, precision_bits, denominator_bound)
    if isinstance(inv, TrivialGroup) != flags.is_simple_cycle:
        raise InternalInconsistency(
            f"Connes invariant {inv.tag} disagrees with simple-cycle flag {flags.is_simple_cycle}"
        )
    if flags.is_simple_cycle:
        factor = TypeIFinite(len(g.vertices))
        basis = "simple k-cycle at the critical inverse temperature"
    elif isinstance(inv, Discrete):
        with mp.workprec(precision_bits):
            lam = mpmath.exp(-inv.c)
            factor = TypeIII(+lam, +(lam * inv.c_error * 2), False)
        basis = "Connes invariant generated by rho^g over the group of periods"
    else:
        factor = TypeIII(mpf(1), mpf(0), True)
        basis = "Connes invariant generated by rho^g over the group of periods"
    return Classification(beta, factor, "characters of the periodicity group", (), inv, basis)
