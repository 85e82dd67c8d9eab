"""Connectivity matrices, spectral radii and Perron-Frobenius vectors.

Integer matrices are numpy arrays of Python ints (``dtype=object``) so products
never overflow.  Real quantities are :mod:`mpmath` numbers at a caller-chosen
binary precision; each reported value carries an error bound.

Spectral radii come from power iteration on ``M + I``.  The shift makes the
iteration converge even when ``M`` is periodic, and since every matrix handled
here has a positive eigenvector, the Collatz-Wielandt quotients
``min_v (By)_v / y_v <= rho(B) <= max_v (By)_v / y_v`` bracket the answer at
every step; the bracket width is the certified error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp, mpf

from .errors import BlockNotPositive, EigenvectorVerificationFailed, InternalInconsistency, PrecisionNotReached
from .graph import KGraph

DEFAULT_PRECISION = 256
_GUARD_BITS = 24


def adjacency(g: KGraph, color: int) -> np.ndarray:
    """``A_i(v, w)`` = number of colour-i edges with range v and source w."""
    if not 1 <= color <= g.rank:
        raise ValueError(f"color {color} outside 1..{g.rank}")
    key = ("adjacency", color)
    if key not in g.cache:
        n = len(g.vertices)
        idx = g.vertex_index
        A = np.zeros((n, n), dtype=object)
        for e in g.edges:
            if e.color == color:
                A[idx[e.range], idx[e.source]] += 1
        A.setflags(write=False)
        g.cache[key] = A
    return g.cache[key]


def identity(n: int) -> np.ndarray:
    I = np.zeros((n, n), dtype=object)
    for t in range(n):
        I[t, t] = 1
    return I


def matrix_power(A: np.ndarray, e: int) -> np.ndarray:
    out = identity(A.shape[0])
    base = A
    while e:
        if e & 1:
            out = out.dot(base)
        e >>= 1
        if e:
            base = base.dot(base)
    return out


def power_product(g: KGraph, n: Sequence[int]) -> np.ndarray:
    """A^n = prod_i A_i^{n_i}; entry (v, w) counts paths of degree n from w to v."""
    n = tuple(n)
    if len(n) != g.rank or any(x < 0 for x in n):
        raise ValueError(f"bad degree {n}")
    out = identity(len(g.vertices))
    for c, e in enumerate(n, start=1):
        if e:
            out = out.dot(matrix_power(adjacency(g, c), e))
    return out


def perron_pair(M, precision_bits: int = DEFAULT_PRECISION, max_iterations: int = 200_000):
    """Spectral radius and positive eigenvector of a nonnegative integer matrix.

    ``M`` must admit a positive eigenvector for its spectral radius (true for
    irreducible matrices and for the connectivity matrices of a strongly
    connected k-graph).  Returns ``(rho, error, vector)`` with the vector
    normalised to unit 1-norm.
    """
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    rows = [[(j, int(M[i, j])) for j in range(n) if M[i, j]] for i in range(n)]
    with mp.workprec(precision_bits + _GUARD_BITS):
        tol = mpf(2) ** -(precision_bits - 8)
        y = [mpf(1) / n] * n
        lo = hi = None
        for _ in range(max_iterations):
            z = [y[i] + mpmath.fsum(c * y[j] for j, c in rows[i]) for i in range(n)]
            ratios = [z[i] / y[i] for i in range(n)]
            lo, hi = min(ratios), max(ratios)
            s = mpmath.fsum(z)
            y = [t / s for t in z]
            if hi - lo <= tol * hi:
                break
        else:
            raise PrecisionNotReached(max_iterations, mpmath.nstr(hi - lo, 5))
        rho = (lo + hi) / 2 - 1
        err = (hi - lo) / 2 + hi * mpf(2) ** -precision_bits
        return +rho, +err, tuple(y)


def spectral_radius(M, precision_bits: int = DEFAULT_PRECISION) -> tuple[mpf, mpf]:
    rho, err, _ = perron_pair(M, precision_bits)
    return rho, err


@dataclass(frozen=True)
class SpectralData:
    """rho(Lambda) with error bounds and the common unit-1-norm eigenvector x."""

    vertices: tuple[str, ...]
    rho: tuple[mpf, ...]
    rho_error: tuple[mpf, ...]
    precision_bits: int
    x: tuple[mpf, ...]
    residuals: tuple[mpf, ...]

    @property
    def log_rho(self) -> tuple[mpf, ...]:
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            return tuple(mpmath.log(r) for r in self.rho)

    def rho_power(self, g: Sequence[int]) -> mpf:
        """rho(Lambda)^g for g in Z^k."""
        with mp.workprec(self.precision_bits + _GUARD_BITS):
            out = mpf(1)
            for r, e in zip(self.rho, g):
                out *= r ** int(e)
            return +out

    def x_of(self, v: str) -> mpf:
        return self.x[self.vertices.index(v)]


def rho_vector(g: KGraph, precision_bits: int = DEFAULT_PRECISION) -> tuple[tuple[mpf, mpf], ...]:
    """``((rho(A_1), bound), ..., (rho(A_k), bound))``."""
    key = ("rho", precision_bits)
    if key not in g.cache:
        g.cache[key] = tuple(
            spectral_radius(adjacency(g, c), precision_bits) for c in range(1, g.rank + 1)
        )
    return g.cache[key]


def pf_eigenvector(g: KGraph, precision_bits: int = DEFAULT_PRECISION) -> SpectralData:
    """Common positive eigenvector of the A_i, verified against every colour.

    The Perron vector of the irreducible matrix sum_i A_i is an eigenvector of
    each A_i (they commute with the sum and the Perron eigenspace is a line),
    and a positive eigenvector of a nonnegative matrix has eigenvalue equal to
    the spectral radius.
    """
    key = ("spectral", precision_bits)
    if key in g.cache:
        return g.cache[key]
    radii = rho_vector(g, precision_bits)
    total = sum((adjacency(g, c) for c in range(1, g.rank + 1)), identity(len(g.vertices)) * 0)
    _, _, x = perron_pair(total, precision_bits)
    residuals = []
    with mp.workprec(precision_bits + _GUARD_BITS):
        bound = mpf(2) ** -(precision_bits // 2)
        for c in range(1, g.rank + 1):
            A = adjacency(g, c)
            rho = radii[c - 1][0]
            n = len(x)
            res = mpmath.fsum(
                abs(mpmath.fsum(int(A[i, j]) * x[j] for j in range(n)) - rho * x[i]) for i in range(n)
            )
            if res > bound * (1 + rho):
                raise EigenvectorVerificationFailed(c, mpmath.nstr(res, 5))
            residuals.append(+res)
    data = SpectralData(
        vertices=g.vertices,
        rho=tuple(r for r, _ in radii),
        rho_error=tuple(e for _, e in radii),
        precision_bits=precision_bits,
        x=x,
        residuals=tuple(residuals),
    )
    g.cache[key] = data
    return data


spectral_data = pf_eigenvector


@dataclass(frozen=True)
class ClassBlock:
    """The diagonal block of A^p on one vertex class, with its Perron pair."""

    vertices: tuple[str, ...]
    period: tuple[int, ...]
    matrix: np.ndarray
    eigenvalue: mpf
    eigenvalue_error: mpf
    xi: tuple[mpf, ...]

    def xi_of(self, v: str) -> mpf:
        return self.xi[self.vertices.index(v)]


def class_block(
    g: KGraph, omega: Sequence[str], p: Sequence[int], precision_bits: int = DEFAULT_PRECISION
) -> ClassBlock:
    """Restriction of A^p to the class ``omega``; all entries must be positive."""
    omega = tuple(omega)
    p = tuple(p)
    Ap = power_product(g, p)
    idx = [g.vertex_index[v] for v in omega]
    block = Ap[np.ix_(idx, idx)]
    if any(int(t) <= 0 for t in block.flat):
        raise BlockNotPositive(f"A^{p} restricted to {omega} has a zero entry")
    lam, err, xi = perron_pair(block, precision_bits)
    expected = pf_eigenvector(g, precision_bits).rho_power(p)
    with mp.workprec(precision_bits):
        if abs(lam - expected) > max(err, mpf(2) ** -(precision_bits // 2)) * (1 + expected):
            raise InternalInconsistency(
                f"block eigenvalue {mpmath.nstr(lam, 15)} != rho^p {mpmath.nstr(expected, 15)}"
            )
    return ClassBlock(omega, p, block, lam, err, xi)


def decimal(x, precision_bits: int = DEFAULT_PRECISION) -> str:
    """Fixed-width decimal string for an mpmath real."""
    digits = max(5, int(precision_bits * math.log10(2)) - 3)
    with mp.workprec(precision_bits + _GUARD_BITS):
        return mpmath.nstr(mpf(x), digits, min_fixed=-math.inf, max_fixed=math.inf)
