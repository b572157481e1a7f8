"""Bernoulli numbers, the Riemann zeta function, and Euler-Maclaurin tails.

zeta(s) for real s > 1 is computed by direct summation to a cutoff M
followed by the Euler-Maclaurin correction

    sum_{k>=M} k^-s  =  M^(1-s)/(s-1) + M^-s/2
                        + sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^(1-s-2j),

truncated adaptively with the first omitted term as a certified remainder
bound.  The same tail formula, with caller-supplied derivatives, backs the
generic accelerated tail sum for smooth monotonically decaying terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, NonConvergence
from .precision import DEFAULT_PRECISION, PrecReal, Realish, mpf_from_rational, to_mpf
from .quadrature import QuadratureSpec, tanh_sinh

_BERNOULLI: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli_exact(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n < 0:
        raise DomainError("Bernoulli index must be non-negative")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        # sum_{k=0}^{m} C(m+1, k) B_k = 0
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * _BERNOULLI[k]
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


def _em_zeta_tail(s: mpf, start: int, prec: int) -> tuple[mpf, mpf]:
    """(sum_{k>=start} k^-s, certified remainder bound) by Euler-Maclaurin."""
    with workprec(prec + 10):
        m = mpf(start)
        eps = mpf(2) ** (-(prec + 5))
        total = m ** (1 - s) / (s - 1) + m ** (-s) / 2
        poch = s  # s(s+1)...(s+2j-2), built up incrementally
        power = m ** (-s - 1)
        bound = None
        prev_mag = None
        for j in range(1, 60):
            b2j = mpf_from_rational(bernoulli_exact(2 * j) / math.factorial(2 * j), prec + 10)
            term = b2j * poch * power
            mag = abs(term)
            if prev_mag is not None and mag > prev_mag:
                # asymptotic series started diverging; certify with last size
                bound = mag
                break
            total += term
            prev_mag = mag
            if mag <= eps * max(abs(total), mpf(1)):
                bound = mag
                break
            poch = poch * (s + 2 * j - 1) * (s + 2 * j)
            power = power / (m * m)
        if bound is None:
            bound = prev_mag if prev_mag is not None else abs(total)
        return total, bound


def zeta(s: Realish, precision: int = DEFAULT_PRECISION, cutoff: Optional[int] = None) -> PrecReal:
    """Riemann zeta at real s > 1, accurate to the requested precision."""
    s_mp = to_mpf(s, precision + 10)
    if not s_mp > 1:
        raise DomainError(f"zeta requires s > 1, got {s_mp}")
    target = mpf(2) ** (-(precision + 2))
    m = cutoff if cutoff is not None else max(16, precision // 6 + 8)
    for _ in range(6):
        with workprec(precision + 10):
            head = mpf(0)
            for k in range(m - 1, 0, -1):
                head += mpf(k) ** (-s_mp)
            tail, bound = _em_zeta_tail(s_mp, m, precision)
            value = head + tail
        if bound <= target * max(abs(value), mpf(1)) or cutoff is not None:
            return PrecReal(value, precision)
        m *= 2
    raise NonConvergence("zeta tail did not certify at requested precision", best=value, estimate=bound)


def zeta_tail(s: Realish, start: int, precision: int = DEFAULT_PRECISION) -> mpf:
    """sum_{k>=start} k^-s for real s > 1 (Euler-Maclaurin accelerated)."""
    s_mp = to_mpf(s, precision + 10)
    if not s_mp > 1:
        raise DomainError("zeta_tail requires s > 1")
    if start < 1:
        raise DomainError("start must be >= 1")
    if start < 8:
        with workprec(precision + 10):
            head = mpf(0)
            for k in range(start, 8):
                head += mpf(k) ** (-s_mp)
            value, _ = _em_zeta_tail(s_mp, 8, precision)
            return +(head + value)
    value, _ = _em_zeta_tail(s_mp, start, precision)
    return value


def em_tail_sum(
    term: Callable[[int], Realish],
    start: int,
    spec: Optional[QuadratureSpec] = None,
    *,
    deriv1: Optional[Callable] = None,
    deriv3: Optional[Callable] = None,
    tail_integral: Optional[Callable] = None,
    precision: int = DEFAULT_PRECISION,
) -> PrecReal:
    """Accelerated tail sum_{k>=start} term(k) for smooth decaying terms.

    Uses the Euler-Maclaurin formula through the B_2 and (when the third
    derivative is supplied) B_4 correction.  ``deriv1``/``deriv3`` are the
    first/third derivatives of the term as a function of a continuous
    index; ``tail_integral`` may supply a closed form for
    int_start^inf term(x) dx, otherwise it is computed by quadrature after
    the substitution x = start/u.

    The remainder is certified by the magnitude of the last Euler-Maclaurin
    correction, which bounds the truncation error for terms whose
    derivatives decay monotonically (the documented precondition).
    """
    if spec is None:
        spec = QuadratureSpec.default(precision)
    with workprec(precision + 10):
        f_start = to_mpf(term(start), precision + 10)
        if f_start == 0 and (deriv1 is None or to_mpf(deriv1(start), precision) == 0):
            return PrecReal(mpf(0), precision)
        abs_tol = to_mpf(spec.abs_tol, precision)

        def em_bound(k: int) -> mpf:
            if deriv3 is not None:
                return abs(to_mpf(deriv3(k), precision + 10)) / 720
            if deriv1 is not None:
                return abs(to_mpf(deriv1(k), precision + 10)) / 12
            return abs(to_mpf(term(k), precision + 10)) / 2

        # advance the switch-over point until the certified bound is small
        switch = start
        while em_bound(switch) > abs_tol:
            nxt = max(switch + 1, int(switch * 1.3) + 1)
            if nxt - start > 10 ** 7:
                raise NonConvergence(
                    "Euler-Maclaurin remainder bound exceeds tolerance at maximum order",
                    estimate=em_bound(switch),
                )
            switch = nxt

        head = mpf(0)
        for k in range(start, switch):
            head += to_mpf(term(k), precision + 10)

        a = mpf(switch)
        if tail_integral is not None:
            integral = to_mpf(tail_integral(switch), precision + 10)
        else:
            def mapped(u):
                x = a / u
                return to_mpf(term(x), precision + 10) * a / (u * u)

            integral, _ = tanh_sinh(mapped, mpf(0), mpf(1), precision + 10, spec)
        value = head + integral + to_mpf(term(switch), precision + 10) / 2
        bound = em_bound(switch)
        if deriv1 is not None:
            value -= to_mpf(deriv1(switch), precision + 10) / 12
        if deriv3 is not None:
            value += to_mpf(deriv3(switch), precision + 10) / 720
        tol = max(abs_tol, to_mpf(spec.rel_tol, precision) * abs(value))
        if bound > tol:
            raise NonConvergence(
                "Euler-Maclaurin remainder bound exceeds tolerance at maximum order",
                best=PrecReal(value, precision),
                estimate=bound,
            )
    return PrecReal(value, precision)
