"""Exact rational pipeline for the critical-line partition function.

Everything in this module is computed in exact arithmetic.  The weight on
the half-line is w(x) = e^(-alpha*x) (e^x - e^(-x)) with alpha > 1, whose
moments are

    m_k = k! * ( (alpha-1)^-(k+1) - (alpha+1)^-(k+1) ).

The Hankel determinant of the derivatives of phi(alpha) = 2/(alpha^2 - 1)
equals the moment Hankel determinant det(m_{i+j}) because the sign pattern
(-1)^(i+j) factors into a +-1 diagonal similarity.  Orthogonal-polynomial
norms come out of one fraction-free elimination pass as ratios of leading
principal minors, and the partition function is

    Z_N = ((alpha^2-1)/2)^(N^2) * prod_{k<N} h_k / (k!)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import workprec

from .errors import DomainError, SingularMinor
from .precision import DEFAULT_PRECISION, PrecReal, mpf_from_rational

Rational = Fraction

#: soft cap on exact pipeline sizes; beyond this runtime degrades, not correctness
MAX_EXACT_N = 64


@dataclass(frozen=True)
class CriticalWeights:
    """Vertex weights a = (alpha-1)/2, b = (alpha+1)/2, c = 1 on the critical line."""

    alpha: Rational
    a: Rational
    b: Rational
    c: Rational
    tau: Rational

    @classmethod
    def from_alpha(cls, alpha) -> "CriticalWeights":
        alpha = Fraction(alpha)
        if alpha <= 1:
            raise DomainError(f"critical-line parameter must exceed 1, got {alpha}")
        return cls(
            alpha=alpha,
            a=(alpha - 1) / 2,
            b=(alpha + 1) / 2,
            c=Fraction(1),
            tau=1 / alpha,
        )

    def __post_init__(self):
        if self.alpha <= 1:
            raise DomainError("alpha must exceed 1")
        assert self.b - self.a == self.c, "weights must sit on the critical line"
        assert 0 < self.tau < 1


@dataclass(frozen=True)
class HankelResult:
    """One exact evaluation: tau_N, the norms h_0..h_{N-1} and Z_N."""

    N: int
    tau_N: Rational
    h: Sequence[Rational]
    Z_N: Rational


def _validate(N: int, alpha: Fraction, size_limit: Optional[int]) -> Fraction:
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if size_limit is not None and N > size_limit:
        raise DomainError(f"N={N} exceeds the configured exact-pipeline limit {size_limit}")
    return alpha


def moment(k: int, alpha) -> Rational:
    """k-th moment of e^(-alpha*x)(e^x - e^(-x)) on [0, inf), exact."""
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    if k < 0:
        raise DomainError("moment order must be non-negative")
    return math.factorial(k) * (
        Fraction(1, 1) / (alpha - 1) ** (k + 1) - Fraction(1, 1) / (alpha + 1) ** (k + 1)
    )


def phi_derivative(k: int, alpha) -> Rational:
    """k-th derivative of phi(alpha) = 2/(alpha^2-1); equals (-1)^k m_k."""
    m = moment(k, alpha)
    return -m if k % 2 else m


def bareiss_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors of an integer matrix, fraction-free.

    Bareiss elimination keeps every intermediate an exact integer; the
    pivot after step k is the (k+1)x(k+1) leading principal minor.
    """
    n = len(matrix)
    m = [list(row) for row in matrix]
    minors = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            raise SingularMinor(f"vanishing {k+1}x{k+1} leading principal minor")
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return minors


def _scaled_moment_matrix(N: int, alpha: Fraction) -> tuple[list[list[int]], int, Fraction]:
    """Integer Hankel matrix with row i multiplied by (p^2-q^2)^(i+N).

    Returns (matrix, D, q) with D = p^2 - q^2 for alpha = p/q; the entry
    scaling is m_{i+j} * D^(i+N), an exact integer since den(m_k) | D^(k+1).
    """
    p, q = alpha.numerator, alpha.denominator
    d = p * p - q * q
    rows = []
    for i in range(N):
        row = []
        for j in range(N):
            k = i + j
            numer = math.factorial(k) * q ** (k + 1) * ((p + q) ** (k + 1) - (p - q) ** (k + 1))
            row.append(numer * d ** (i + N - k - 1))
        rows.append(row)
    return rows, d, alpha


def hankel_minors(N: int, alpha, size_limit: Optional[int] = MAX_EXACT_N) -> list[Rational]:
    """Leading principal minors D_1..D_N of the moment Hankel matrix, exact."""
    alpha = _validate(N, alpha, size_limit)
    scaled, d, _ = _scaled_moment_matrix(N, alpha)
    ints = bareiss_minors(scaled)
    out = []
    for k in range(1, N + 1):
        scale = Fraction(d) ** (k * N + k * (k - 1) // 2)
        out.append(Fraction(ints[k - 1]) / scale)
    return out


def hankel_tau(N: int, alpha, size_limit: Optional[int] = MAX_EXACT_N) -> Rational:
    """Hankel determinant tau_N = det(phi^(i+j-2))_{i,j=1..N}."""
    return hankel_minors(N, alpha, size_limit)[-1]


def norms_h(N: int, alpha, size_limit: Optional[int] = MAX_EXACT_N) -> list[Rational]:
    """Orthogonal-polynomial norms h_0..h_{N-1} as minor ratios D_{k+1}/D_k."""
    minors = hankel_minors(N, alpha, size_limit)
    h = []
    prev = Fraction(1)
    for k, d in enumerate(minors):
        hk = d / prev
        if hk <= 0:
            raise SingularMinor(f"h_{k} is not positive; exact pipeline inconsistency")
        h.append(hk)
        prev = d
    return h


def ik_partition(N: int, alpha, size_limit: Optional[int] = MAX_EXACT_N) -> Rational:
    """Determinantal partition function Z_N on the critical line, exact."""
    alpha = _validate(N, alpha, size_limit)
    tau = hankel_tau(N, alpha, size_limit)
    fact = Fraction(1)
    for k in range(N):
        fact *= Fraction(math.factorial(k)) ** 2
    return ((alpha * alpha - 1) / 2) ** (N * N) * tau / fact


def hankel_result(N: int, alpha, size_limit: Optional[int] = MAX_EXACT_N) -> HankelResult:
    """tau_N, the norm sequence and Z_N from a single elimination pass."""
    alpha = _validate(N, alpha, size_limit)
    minors = hankel_minors(N, alpha, size_limit)
    h = []
    prev = Fraction(1)
    for d in minors:
        h.append(d / prev)
        prev = d
    tau = minors[-1]
    fact = Fraction(1)
    for k in range(N):
        fact *= Fraction(math.factorial(k)) ** 2
    z = ((alpha * alpha - 1) / 2) ** (N * N) * tau / fact
    return HankelResult(N=N, tau_N=tau, h=tuple(h), Z_N=z)


# ---------------------------------------------------------------------------
# independent determinant route and exact Toda residual
# ---------------------------------------------------------------------------


def det_cofactor(matrix: Sequence[Sequence[Rational]]) -> Rational:
    """Determinant by first-row cofactor expansion (cross-check, small N)."""
    n = len(matrix)
    if n == 1:
        return Fraction(matrix[0][0])
    total = Fraction(0)
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [[matrix[i][jj] for jj in range(n) if jj != j] for i in range(1, n)]
        sub = det_cofactor(minor)
        total += (-1) ** j * Fraction(matrix[0][j]) * sub
    return total


def hankel_tau_cofactor(N: int, alpha) -> Rational:
    """tau_N by direct cofactor expansion of the phi-derivative matrix."""
    alpha = _validate(N, alpha, 6)
    matrix = [[phi_derivative(i + j, alpha) for j in range(N)] for i in range(N)]
    return det_cofactor(matrix)


def det_fraction(matrix: Sequence[Sequence[Rational]]) -> Rational:
    """Exact determinant of a rational matrix via per-row denominator clearing."""
    n = len(matrix)
    scale = Fraction(1)
    ints = []
    for row in matrix:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        ints.append([int(x * lcm) for x in row])
        scale *= lcm
    try:
        det = bareiss_minors(ints)[-1]
    except SingularMinor:
        # fall back: a zero pivot only blocks elimination, not the determinant
        return det_cofactor(matrix)
    return Fraction(det) / scale


def toda_check(N: int, alpha) -> Rational:
    """Exact residual tau_N tau_N'' - (tau_N')^2 - tau_{N+1} tau_{N-1}.

    The alpha-derivatives of the Hankel determinant are taken exactly by
    row replacement: differentiating row i shifts every entry one
    derivative order up, so tau' is a sum of N determinants and tau'' runs
    over ordered row pairs plus twice-differentiated single rows.
    Returns 0 for every valid input; anything else signals a defect.
    """
    alpha = _validate(N, alpha, MAX_EXACT_N)

    def entry(i: int, j: int, bump: int) -> Rational:
        return phi_derivative(i + j + bump, alpha)

    def det_bumped(bumps: dict[int, int]) -> Rational:
        matrix = [
            [entry(i, j, bumps.get(i, 0)) for j in range(N)] for i in range(N)
        ]
        return det_fraction(matrix)

    tau = det_bumped({})
    tau_p = sum(det_bumped({i: 1}) for i in range(N))
    tau_pp = sum(det_bumped({i: 2}) for i in range(N))
    for i in range(N):
        for j in range(N):
            if i != j:
                tau_pp += det_bumped({i: 1, j: 1})
    tau_prev = Fraction(1) if N == 1 else hankel_tau(N - 1, alpha)
    tau_next = hankel_tau(N + 1, alpha)
    return tau * tau_pp - tau_p * tau_p - tau_next * tau_prev


def ln_rational(x, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """ln of an exact rational, safe for astronomically large numerators."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"logarithm requires a positive argument, got {x}")
    with workprec(precision + 20):
        value = mpmath.log(mpf_from_rational(x, precision + 20))
    return PrecReal(value, precision)
