"""The kernel functions behind the equilibrium data and the asymptotics.

Everything here is built from the Bose-type kernel phi(x) = x/(e^x - 1)
integrated against one of two weights on (0,1):

    I(z) = -1 + (1/pi) * int_0^1 phi(z u) / sqrt(u(1-u)) du
    J(z) =      (1/pi) * int_0^1 (omega(u)/u) * phi(z u) du,
    omega(u) = sqrt(u/(1-u)) - arcsin(sqrt(u)).

Each function carries three evaluation branches:

* a convergent power series from the exact Bernoulli expansion of phi
  (radius 2*pi), used for small arguments,
* quadrature after u = sin^2(theta), which removes both endpoint
  singularities (arctan(sqrt(u/(1-u))) = arcsin(sqrt(u)) = theta there),
* the large-z expansion in half-integer powers with zeta coefficients,
  truncated at its smallest term.

The series and asymptotic coefficient families are exact rationals
(times zeta values), so branch agreement in the overlap windows is a
genuine cross-check of the quadrature, not a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError
from .precision import DEFAULT_PRECISION, PrecReal, Realish, mpf_from_rational, to_mpf
from .quadrature import QuadratureSpec, cheb_gauss, tanh_sinh
from .summation import bernoulli_exact, zeta

#: default branch thresholds
Z_SERIES_MAX = mpf("0.1")
Z_ASYMPTOTIC_MIN = mpf(60)

#: internal ceiling below which the series is preferred for speed; the
#: Bernoulli series converges for |z| < 2*pi, so 5 keeps a safe margin
_Z_FAST_SERIES = mpf(5)


class Branch(str, Enum):
    series_small = "series_small"
    quadrature = "quadrature"
    asymptotic_large = "asymptotic_large"


@dataclass(frozen=True)
class FnEval:
    value: PrecReal
    branch: Branch
    est_error: PrecReal


# ---------------------------------------------------------------------------
# stable elementary pieces
# ---------------------------------------------------------------------------


def phi_bose(x):
    """phi(x) = x / (e^x - 1), stable near 0 via the Bernoulli series."""
    if abs(x) < 0.125:
        acc = x * 0 + 1  # works for mpf and mpc alike
        power = acc
        for k in range(1, 40):
            power = power * x
            b = bernoulli_exact(k)
            if b:
                term = power * mpf_from_rational(b / math.factorial(k), mpmath.mp.prec)
                acc += term
                if abs(term) < mpmath.eps * abs(acc):
                    break
        return acc
    return x / mpmath.expm1(x)


def phi_bose_prime(x):
    """phi'(x) = d/dx [x/(e^x-1)]."""
    if abs(x) < 0.125:
        acc = x * 0 - mpf(1) / 2
        power = x * 0 + 1
        for k in range(2, 42):
            power = power * x  # x^(k-1)
            b = bernoulli_exact(k)
            if b:
                term = k * power * mpf_from_rational(b / math.factorial(k), mpmath.mp.prec)
                acc += term
                if abs(term) < mpmath.eps * abs(acc):
                    break
        return acc
    em = mpmath.expm1(x)
    return (em - x * (em + 1)) / (em * em)


def coth_reg(y):
    """coth(y) - 1/y (odd, analytic at 0); accepts real or complex y."""
    if abs(y) < 0.125:
        acc = y * 0
        y2 = y * y
        power = y
        for k in range(1, 40):
            coeff = bernoulli_exact(2 * k) * Fraction(4) ** k / math.factorial(2 * k)
            term = power * mpf_from_rational(coeff, mpmath.mp.prec)
            acc += term
            if abs(term) < mpmath.eps * (abs(acc) + mpmath.eps):
                break
            power = power * y2
        return acc
    e2 = mpmath.exp(2 * y)
    return (e2 + 1) / (e2 - 1) - 1 / y


def one_minus_theta_cot(theta):
    """1 - theta*cot(theta) = theta^2/3 + theta^4/45 + ..."""
    if abs(theta) < 0.25:
        acc = theta * 0
        t2 = theta * theta
        power = t2
        for k in range(1, 40):
            # 1 - theta*cot(theta) = sum (-1)^(k+1) 4^k B_2k theta^2k/(2k)!,
            # and (-1)^(k+1) B_2k = |B_2k|
            coeff = abs(bernoulli_exact(2 * k)) * Fraction(4) ** k / math.factorial(2 * k)
            term = power * mpf_from_rational(coeff, mpmath.mp.prec)
            acc += term
            if abs(term) < mpmath.eps * abs(acc):
                break
            power = power * t2
        return acc
    return 1 - theta * mpmath.cos(theta) / mpmath.sin(theta)


def sinhc(x: Realish, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """S(x) = sinh(x)/x with the removable singularity filled in."""
    with workprec(precision + 10):
        x = to_mpf(x, precision + 10)
        if abs(x) < 0.25:
            acc = mpf(1)
            x2 = x * x
            power = mpf(1)
            for k in range(1, 40):
                power = power * x2
                term = power / math.factorial(2 * k + 1)
                acc += term
                if term < mpmath.eps * acc:
                    break
            return PrecReal(acc, precision)
        return PrecReal(mpmath.sinh(x) / x, precision)


def log_sinhc(y):
    """ln S(y) for y >= 0, stable for large y via y + ln(1-e^(-2y)) - ln(2y)."""
    if y == 0:
        return mpf(0)
    if y > 20:
        return y + mpmath.log(-mpmath.expm1(-2 * y)) - mpmath.log(2 * y)
    if abs(y) < 0.25:
        y2 = y * y
        s = y * 0
        power = mpf(1)
        for k in range(1, 40):
            power = power * y2
            term = power / math.factorial(2 * k + 1)
            s += term
            if term < mpmath.eps * s:
                break
        return mpmath.log1p(s)
    return mpmath.log(mpmath.sinh(y) / y)


def potential_V(x: Realish, tau: Realish, t: Realish, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """External potential V(x) = x - (tau/t) ln S(t x); V = x at t = 0."""
    with workprec(precision + 10):
        x = to_mpf(x, precision + 10)
        tau = to_mpf(tau, precision + 10)
        t = to_mpf(t, precision + 10)
        if t == 0 or tau == 0:
            return PrecReal(x, precision)
        return PrecReal(x - tau / t * log_sinhc(t * x), precision)


def potential_V_prime(x: Realish, tau: Realish, t: Realish, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """V'(x) = 1 - tau (coth(t x) - 1/(t x)); equals 1 - tau k(t x)."""
    with workprec(precision + 10):
        x = to_mpf(x, precision + 10)
        tau = to_mpf(tau, precision + 10)
        t = to_mpf(t, precision + 10)
        if t == 0 or tau == 0:
            return PrecReal(mpf(1), precision)
        return PrecReal(1 - tau * coth_reg(t * x), precision)


# ---------------------------------------------------------------------------
# exact series coefficients (rational, precision independent)
# ---------------------------------------------------------------------------

_I_SERIES_FRAC: list[Fraction] = []
_J_SERIES_FRAC: list[Fraction] = []


def _i_series_frac(k: int) -> Fraction:
    """Coefficient of z^k in I(z) (k >= 1): B_k/k! * C(2k,k)/4^k."""
    while len(_I_SERIES_FRAC) <= k:
        n = len(_I_SERIES_FRAC)
        if n == 0:
            _I_SERIES_FRAC.append(Fraction(0))
            continue
        coeff = bernoulli_exact(n) / math.factorial(n) * Fraction(math.comb(2 * n, n), 4 ** n)
        _I_SERIES_FRAC.append(coeff)
    return _I_SERIES_FRAC[k]


def _j_series_frac(k: int) -> Fraction:
    """Coefficient of z^k in J(z) - (1 - ln 2) (k >= 1)."""
    while len(_J_SERIES_FRAC) <= k:
        n = len(_J_SERIES_FRAC)
        if n == 0:
            _J_SERIES_FRAC.append(Fraction(0))
            continue
        moment = Fraction(math.comb(2 * n, n), 4 ** n) * Fraction(2 * n + 1, 2 * n) - Fraction(1, 2 * n)
        _J_SERIES_FRAC.append(bernoulli_exact(n) / math.factorial(n) * moment)
    return _J_SERIES_FRAC[k]


def _series_eval(z, frac_coeff, derivative: bool, prec: int) -> tuple:
    """(value, first omitted term magnitude) of sum_k c_k z^k or its derivative."""
    acc = mpf(0)
    eps = mpf(2) ** (-(prec + 8))
    omitted = mpf(0)
    zk = mpf(1)
    for k in range(1, 220):
        zk = zk * z if k > 1 else z
        c = frac_coeff(k)
        if not c:
            continue
        cm = mpf_from_rational(c, prec + 10)
        term = (k * cm * zk / z) if derivative else (cm * zk)
        if abs(term) <= eps * max(abs(acc), mpf(1)):
            omitted = abs(term)
            break
        acc += term
    return acc, omitted


# ---------------------------------------------------------------------------
# asymptotic expansions (half-integer powers, zeta coefficients)
# ---------------------------------------------------------------------------


def asymptotic_series_I(precision: int, nterms: int = 40) -> list[tuple[mpf, Fraction]]:
    """Terms (coeff, power) with I(z) ~ -1 + sum coeff * z^power, power = -(2j+1)/2."""
    out = []
    with workprec(precision + 10):
        sqrt_pi = mpmath.sqrt(mpmath.pi)
        for j in range(nterms):
            r = Fraction(math.comb(2 * j, j)) * Fraction(
                math.factorial(2 * j + 1), 2 ** j * math.factorial(j)
            ) / Fraction(4 ** j * 2 ** (j + 1))
            a_j = mpf_from_rational(r, precision + 10) * zeta(
                Fraction(2 * j + 3, 2), precision + 10
            ).value / sqrt_pi
            out.append((a_j, Fraction(-(2 * j + 1), 2)))
    return out


def asymptotic_series_J(precision: int, nterms: int = 40) -> list[tuple[mpf, Fraction]]:
    """Terms (coeff, power) with J(z) ~ sum coeff * z^power, power = -(2j+3)/2."""
    out = []
    with workprec(precision + 10):
        sqrt_pi = mpmath.sqrt(mpmath.pi)
        for j in range(nterms):
            r = Fraction(2 * j + 1) * Fraction(math.comb(2 * j, j)) * Fraction(
                math.factorial(2 * j + 1), 2 ** j * math.factorial(j)
            ) / Fraction(4 ** j * 2 ** (j + 2))
            b_j = mpf_from_rational(r, precision + 10) * zeta(
                Fraction(2 * j + 5, 2), precision + 10
            ).value / sqrt_pi
            out.append((b_j, Fraction(-(2 * j + 3), 2)))
    return out


def series_derivative(series: list[tuple[mpf, Fraction]]) -> list[tuple[mpf, Fraction]]:
    """Termwise derivative of a sum of c * z^p terms."""
    out = []
    for c, p in series:
        out.append((c * mpf_from_rational(p, mpmath.mp.prec + 10), p - 1))
    return out


def _asymptotic_eval(z, series, prec: int) -> tuple:
    """Evaluate sum c*z^p truncated at its smallest term; returns (value, bound)."""
    acc = mpf(0)
    best = None
    eps = mpf(2) ** (-(prec + 8))
    for c, p in series:
        term = c * z ** mpf_from_rational(p, prec + 10)
        mag = abs(term)
        if best is not None and mag > best:
            return acc, best + mpmath.exp(-z)
        acc += term
        best = mag
        if mag <= eps * max(abs(acc), mpf(1)):
            break
    return acc, (best if best is not None else mpf(0)) + mpmath.exp(-z)


_ASY_CACHE: dict = {}


def _asy(kind: str, precision: int):
    key = (kind, precision)
    if key not in _ASY_CACHE:
        if kind == "I":
            _ASY_CACHE[key] = asymptotic_series_I(precision)
        elif kind == "J":
            _ASY_CACHE[key] = asymptotic_series_J(precision)
        elif kind == "Ip":
            with workprec(precision + 10):
                _ASY_CACHE[key] = series_derivative(_asy("I", precision))
        elif kind == "Jp":
            with workprec(precision + 10):
                _ASY_CACHE[key] = series_derivative(_asy("J", precision))
        else:  # pragma: no cover
            raise ValueError(kind)
    return _ASY_CACHE[key]


# ---------------------------------------------------------------------------
# quadrature branches (u = sin^2 theta throughout)
# ---------------------------------------------------------------------------


def _quad_spec(precision: int) -> QuadratureSpec:
    return QuadratureSpec(
        abs_tol=mpf(2) ** (-(precision - 24)), rel_tol=mpf(2) ** (-(precision - 24)),
        max_subdivisions=11,
    )


def _cg_doubling(g, precision: int) -> tuple:
    spec = _quad_spec(precision)
    n = 32
    prev = cheb_gauss(g, n, precision)
    for _ in range(spec.max_subdivisions):
        n *= 2
        value = cheb_gauss(g, n, precision)
        err = abs(value - prev)
        if err <= spec.tolerance(value, precision):
            return value, err
        prev = value
    return value, err


def _i_quad(z, precision: int) -> tuple:
    value, err = _cg_doubling(lambda u: phi_bose(z * u), precision)
    return value / mpmath.pi - 1, err


def _iprime_quad(z, precision: int) -> tuple:
    value, err = _cg_doubling(lambda u: u * phi_bose_prime(z * u), precision)
    return value / mpmath.pi, err


def _j_quad(z, precision: int) -> tuple:
    def integrand(theta):
        return one_minus_theta_cot(theta) * phi_bose(z * mpmath.sin(theta) ** 2)

    value, err = tanh_sinh(integrand, 0, mpmath.pi / 2, precision, _quad_spec(precision))
    return 2 * value / mpmath.pi, err


def _jprime_quad(z, precision: int) -> tuple:
    def integrand(theta):
        s = mpmath.sin(theta)
        return (2 * s * s - theta * mpmath.sin(2 * theta)) * phi_bose_prime(z * s * s)

    value, err = tanh_sinh(integrand, 0, mpmath.pi / 2, precision, _quad_spec(precision))
    return value / mpmath.pi, err


# ---------------------------------------------------------------------------
# public branch-dispatched evaluations
# ---------------------------------------------------------------------------


def _dispatch(
    z: Realish,
    precision: int,
    z_lo,
    z_hi,
    series_fn,
    quad_fn,
    asym_kind: str,
    asym_const,
) -> FnEval:
    with workprec(precision + 10):
        z = to_mpf(z, precision + 10)
        if z < 0:
            raise DomainError(f"argument must be non-negative, got {z}")
        z_lo = to_mpf(z_lo, precision + 10)
        z_hi = to_mpf(z_hi, precision + 10)
        if z <= z_lo:
            value, omitted = series_fn(z)
            return FnEval(
                value=PrecReal(value, precision),
                branch=Branch.series_small,
                est_error=PrecReal(2 * omitted + abs(value) * mpf(2) ** (-(precision - 4)), precision),
            )
        if z < z_hi:
            value, err = quad_fn(z, precision)
            return FnEval(
                value=PrecReal(value, precision),
                branch=Branch.quadrature,
                est_error=PrecReal(err + abs(value) * mpf(2) ** (-(precision - 4)), precision),
            )
        tail, bound = _asymptotic_eval(z, _asy(asym_kind, precision), precision)
        return FnEval(
            value=PrecReal(asym_const + tail, precision),
            branch=Branch.asymptotic_large,
            est_error=PrecReal(bound, precision),
        )


def I_fn(
    z: Realish,
    precision: int = DEFAULT_PRECISION,
    z_lo: Realish = Z_SERIES_MAX,
    z_hi: Realish = Z_ASYMPTOTIC_MIN,
) -> FnEval:
    """I(z) = -1 + (z/pi) int_0^1 sqrt(u/(1-u)) du/(e^{zu}-1), z >= 0."""
    return _dispatch(
        z, precision, z_lo, z_hi,
        series_fn=lambda zz: _series_eval(zz, _i_series_frac, False, precision),
        quad_fn=_i_quad,
        asym_kind="I",
        asym_const=mpf(-1),
    )


def J_fn(
    z: Realish,
    precision: int = DEFAULT_PRECISION,
    z_lo: Realish = Z_SERIES_MAX,
    z_hi: Realish = Z_ASYMPTOTIC_MIN,
) -> FnEval:
    """J(z) = (z/pi) int_0^1 (sqrt(u/(1-u)) - arctan sqrt(u/(1-u))) du/(e^{zu}-1)."""

    def series(zz):
        value, omitted = _series_eval(zz, _j_series_frac, False, precision)
        with workprec(precision + 10):
            return value + 1 - mpmath.ln(2), omitted

    return _dispatch(
        z, precision, z_lo, z_hi,
        series_fn=series,
        quad_fn=_j_quad,
        asym_kind="J",
        asym_const=mpf(0),
    )


def I_prime(
    z: Realish,
    precision: int = DEFAULT_PRECISION,
    z_lo: Realish = Z_SERIES_MAX,
    z_hi: Realish = Z_ASYMPTOTIC_MIN,
) -> FnEval:
    """dI/dz by differentiation under the integral sign."""
    return _dispatch(
        z, precision, z_lo, z_hi,
        series_fn=lambda zz: _series_eval(zz, _i_series_frac, True, precision),
        quad_fn=_iprime_quad,
        asym_kind="Ip",
        asym_const=mpf(0),
    )


def J_prime(
    z: Realish,
    precision: int = DEFAULT_PRECISION,
    z_lo: Realish = Z_SERIES_MAX,
    z_hi: Realish = Z_ASYMPTOTIC_MIN,
) -> FnEval:
    """dJ/dz; tends to -1/8 as z -> 0+."""
    return _dispatch(
        z, precision, z_lo, z_hi,
        series_fn=lambda zz: _series_eval(zz, _j_series_frac, True, precision),
        quad_fn=_jprime_quad,
        asym_kind="Jp",
        asym_const=mpf(0),
    )


# fast unwrapped values for use inside integrands ---------------------------


def i_value(z, precision: int) -> mpf:
    return I_fn(z, precision, z_lo=_Z_FAST_SERIES).value.value


def j_value(z, precision: int) -> mpf:
    return J_fn(z, precision, z_lo=_Z_FAST_SERIES).value.value


def iprime_value(z, precision: int) -> mpf:
    return I_prime(z, precision, z_lo=_Z_FAST_SERIES).value.value


def jprime_value(z, precision: int) -> mpf:
    return J_prime(z, precision, z_lo=_Z_FAST_SERIES).value.value


def j_minus_const_value(z, precision: int) -> mpf:
    """J(z) - (1 - ln 2) without cancellation for small z."""
    with workprec(precision + 10):
        z = to_mpf(z, precision + 10)
        if z <= _Z_FAST_SERIES:
            value, _ = _series_eval(z, _j_series_frac, False, precision)
            return value
        return j_value(z, precision) - 1 + mpmath.ln(2)
