"""Membership in the periodicity group and the companion-path map.

The shifts σ^m and σ^n agree on every infinite path exactly when every path λ
of degree (m ∨ n) + (1,...,1) satisfies λ(m, m+1) = λ(n, n+1), writing 1 for
(1,...,1).  One direction: apply the identity to x(0, (m ∨ n) + 1).  The other:
for an infinite path x and any t >= 0, the window test on x(t, t + (m ∨ n) + 1)
gives x(m + t, m + t + 1) = x(n + t, n + t + 1), and the unit cubes at the
diagonal positions t·1 cover every coordinate of σ^m x and σ^n x.

A candidate difference g only needs testing as the pair (g⁺, g⁻): every
shift is onto the infinite-path space (there are no sources), so σ^m = σ^n
holds iff σ^{m-t} = σ^{n-t} for t = m ∧ n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .errors import NotAPeriod
from .graph import Degree, KGraph, Path, compose, iter_paths, segment
from .lattice import Lattice
from .periods import period_group
from .spectral import DEFAULT_PRECISION, pf_eigenvector, power_product

DEFAULT_BOX = 5


def positive_part(g: Sequence[int]) -> Degree:
    return tuple(max(x, 0) for x in g)


def negative_part(g: Sequence[int]) -> Degree:
    return tuple(max(-x, 0) for x in g)


def is_periodicity_pair(g: KGraph, m: Sequence[int], n: Sequence[int]) -> bool:
    m, n = tuple(m), tuple(n)
    if m == n:
        return True
    top = tuple(max(a, b) + 1 for a, b in zip(m, n))
    m1 = tuple(a + 1 for a in m)
    n1 = tuple(b + 1 for b in n)
    for lam in iter_paths(g, top):
        if segment(lam, m, m1).edges != segment(lam, n, n1).edges:
            return False
    return True


def is_period(g: KGraph, diff: Sequence[int]) -> bool:
    """``diff`` in Per Λ, tested as the reduced pair (diff⁺, diff⁻)."""
    return is_periodicity_pair(g, positive_part(diff), negative_part(diff))


def theta(g: KGraph, mu: Path, n: Sequence[int], extension: Path | None = None) -> Path:
    """The path ν of degree n with μx = νx for every infinite path x.

    ν is the initial degree-n segment of μz for an extension z of degree
    (n - d(μ))⁺; the result does not depend on z.
    """
    n = tuple(n)
    diff = tuple(a - b for a, b in zip(mu.degree, n))
    if not is_period(g, diff):
        raise NotAPeriod(f"{diff} is not in the periodicity group")
    need = positive_part(tuple(-x for x in diff))
    if extension is None:
        extension = next(iter_paths(g, need, range=mu.source))
    elif extension.range != mu.source or any(a < b for a, b in zip(extension.degree, need)):
        raise ValueError("extension must start at s(mu) and have degree >= (n - d(mu))+")
    return segment(compose(mu, extension), g.zero(), n)


@dataclass(frozen=True)
class PeriodicityGroup:
    """Per Λ as found among the members of P_Λ in the box [-box, box]^k."""

    lattice: Lattice
    box: int
    members: tuple[Degree, ...]

    @property
    def basis(self):
        return self.lattice.basis

    def contains(self, g: Sequence[int]) -> bool:
        return self.lattice.contains(g)


def _rho_trivial(g: KGraph, diff, precision_bits: int) -> bool:
    s = pf_eigenvector(g, precision_bits)
    with mp.workprec(precision_bits):
        val = mpmath.fsum(c * lr for c, lr in zip(diff, s.log_rho))
        return abs(val) <= mpf(2) ** -(precision_bits // 2)


def passes_filters(g: KGraph, diff: Sequence[int], precision_bits: int = DEFAULT_PRECISION) -> bool:
    """ρ^diff = 1, then A^{diff⁺} = A^{diff⁻}, then the window test."""
    diff = tuple(diff)
    if not any(diff):
        return True
    if not _rho_trivial(g, diff, precision_bits):
        return False
    hi, lo = positive_part(diff), negative_part(diff)
    if not (power_product(g, hi) == power_product(g, lo)).all():
        return False
    return is_periodicity_pair(g, hi, lo)


def periodicity_group(
    g: KGraph, box_radius: int = DEFAULT_BOX, precision_bits: int = DEFAULT_PRECISION
) -> PeriodicityGroup:
    key = ("per", box_radius, precision_bits)
    if key in g.cache:
        return g.cache[key]
    P = period_group(g)
    members = tuple(
        d for d in P.members_in_box(box_radius) if any(d) and passes_filters(g, d, precision_bits)
    )
    out = PeriodicityGroup(Lattice.from_generators(g.rank, members), box_radius, members)
    g.cache[key] = out
    return out


@dataclass(frozen=True)
class CharacterSpec:
    """A character of Per Λ: generator j of the basis maps to exp(2πi·angles[j])."""

    angles: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(self.angles))


def trivial_character(per: PeriodicityGroup) -> CharacterSpec:
    return CharacterSpec((0,) * per.lattice.rank)


def character_value(chi: CharacterSpec, per: PeriodicityGroup, g: Sequence[int], precision_bits: int = DEFAULT_PRECISION):
    coords = per.lattice.coordinates(g)
    if coords is None:
        raise NotAPeriod(f"{tuple(g)} is not in the periodicity group")
    if len(chi.angles) != len(coords):
        raise ValueError(f"character needs {len(coords)} angles, got {len(chi.angles)}")
    with mp.workprec(precision_bits):
        t = mpmath.fsum(c * mpf(a) for c, a in zip(coords, chi.angles))
        t -= mpmath.floor(t)
        if t == 0:
            return mpmath.mpc(1)
        return mpmath.expjpi(2 * t)
