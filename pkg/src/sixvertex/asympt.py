"""Large-N predictors for ln Z_N and the universal constant in front.

The partition function obeys ln Z_N = ln C + N^2 ln F + sqrt(N) ln G +
(1/4) ln N + o(1) with F = (alpha+1)/2, ln G = -zeta(3/2) sqrt((alpha-1)/(2pi))
and C = e^c (alpha-1)^(1/4).  The number c has the double-series form

    c = (1/4) ln 2 + (1/2) ln pi
        + (1/(4 pi)) sum_{n>=1} [ -pi/n + sum_{m>=1} 1/((m+n) sqrt(mn)) ],

and an equivalent integral form c0 built from I and J - both are computed
here and compared.  The finite-(N/alpha) regime is covered by the
double-scaling predictor ln Z_N ~ ln N! + N^2 ln((alpha^2-1)/(2 alpha)) +
N ln(2/alpha) + N Phi(t) + Psi(t) with t = N/alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, NonConvergence
from .exact import ln_rational
from .precision import DEFAULT_PRECISION, PrecReal, Realish, mpf_from_rational, to_mpf
from .quadrature import QuadratureSpec, tanh_sinh
from .specfun import (
    _Z_FAST_SERIES,
    _asy,
    _i_series_frac,
    _j_series_frac,
    _series_eval,
    coth_reg,
    i_value,
    iprime_value,
    j_minus_const_value,
    j_value,
    jprime_value,
    log_sinhc,
    phi_bose,
)
from .summation import zeta, zeta_tail

__all__ = [
    "AsymptoticModel",
    "DoubleScalingModel",
    "bracket_series_total",
    "constant_c",
    "predict_lnZ",
    "phi_psi",
    "predict_lnZ_ds",
    "c0_identity_check",
    "c_constants_check",
]


@dataclass(frozen=True)
class AsymptoticModel:
    """The pieces of the leading large-N form of Z_N at one alpha."""

    alpha: PrecReal
    F: PrecReal
    G: PrecReal
    C: PrecReal
    c_const: PrecReal
    d_const: PrecReal  # identically zero


@dataclass(frozen=True)
class DoubleScalingModel:
    t: PrecReal
    Phi: PrecReal
    Psi: PrecReal


# ---------------------------------------------------------------------------
# the double series
# ---------------------------------------------------------------------------


def _bracket(n: int, m_cut: int, prec: int, rsqrt_cache: list) -> mpf:
    """-pi/n + sum_m 1/((m+n) sqrt(mn)), inner tail by Euler-Maclaurin."""
    n_mp = mpf(n)
    rn = 1 / mpmath.sqrt(n_mp)
    head = mpf(0)
    for m in range(1, m_cut):
        head += rsqrt_cache[m] / (m + n_mp)
    a = mpf(m_cut)

    # f(m) = m^(-1/2) (m+n)^(-1); closed-form integral and derivatives
    def f(m):
        return 1 / (mpmath.sqrt(m) * (m + n_mp))

    sq = mpmath.sqrt(a)
    integral = 2 / mpmath.sqrt(n_mp) * mpmath.atan(mpmath.sqrt(n_mp) / sq)
    u, up, upp, uppp = 1 / sq, None, None, None
    up = -u / (2 * a)
    upp = 3 * u / (4 * a * a)
    uppp = -15 * u / (8 * a ** 3)
    v = 1 / (a + n_mp)
    vp = -v * v
    vpp = 2 * v ** 3
    vppp = -6 * v ** 4
    d1 = up * v + u * vp
    d3 = uppp * v + 3 * upp * vp + 3 * up * vpp + u * vppp
    tail = integral + f(a) / 2 - d1 / 12 + d3 / 720
    return -mpmath.pi / n_mp + rn * (head + tail)


def _power_fit_tail(values: dict, n_cut: int, powers: list, prec: int) -> tuple[mpf, mpf]:
    """Fit sum a_i n^-p_i to the bracket at large n and sum the fitted tail.

    Returns (tail, error_estimate); the estimate combines the worst
    held-out prediction error with the magnitude it propagates to.
    """
    fit_nodes = [n_cut - i * (n_cut // 12) for i in range(len(powers))]
    rows = []
    rhs = []
    for n in fit_nodes:
        rows.append([mpf(n) ** mpf_from_rational(-p, prec) for p in powers])
        rhs.append(values[n])
    a = mpmath.matrix(rows)
    b = mpmath.matrix(rhs)
    coef = mpmath.lu_solve(a, b)
    # validate on held-out nodes
    worst = mpf(0)
    for n in (n_cut - n_cut // 8, n_cut - n_cut // 2 + 7):
        pred = sum(coef[i] * mpf(n) ** mpf_from_rational(-p, prec) for i, p in enumerate(powers))
        worst = max(worst, abs(pred - values[n]))
    tail = mpf(0)
    for i, p in enumerate(powers):
        tail += coef[i] * zeta_tail(Fraction(p), n_cut + 1, prec)
    # nested-model control: redo the fit one order lower and compare
    short = powers[:-1]
    rows_s = [[mpf(n) ** mpf_from_rational(-p, prec) for p in short] for n in fit_nodes[: len(short)]]
    rhs_s = [values[n] for n in fit_nodes[: len(short)]]
    coef_s = mpmath.lu_solve(mpmath.matrix(rows_s), mpmath.matrix(rhs_s))
    tail_s = mpf(0)
    for i, p in enumerate(short):
        tail_s += coef_s[i] * zeta_tail(Fraction(p), n_cut + 1, prec)
    # the held-out misfit scales into the tail roughly by the tail length;
    # the model-order difference guards against missing higher powers
    err = worst * 2 * (n_cut + 1) + 2 * abs(tail - tail_s) + abs(tail) * mpf(2) ** (-(prec - 30))
    return tail, err


_BRACKET_CACHE: dict = {}


def bracket_series_total(
    precision: int = DEFAULT_PRECISION,
    n_cut: int = 2000,
    m_cut: int = 800,
) -> tuple[PrecReal, PrecReal]:
    """Value and error estimate of sum_n [-pi/n + sum_m 1/((m+n)sqrt(mn))]."""
    key = (precision, n_cut, m_cut)
    if key in _BRACKET_CACHE:
        return _BRACKET_CACHE[key]
    with workprec(precision + 10):
        rsqrt = [mpf(0)] * (m_cut + 1)
        for m in range(1, m_cut + 1):
            rsqrt[m] = 1 / mpmath.sqrt(mpf(m))
        head = mpf(0)
        values = {}
        for n in range(1, n_cut + 1):
            beta = _bracket(n, m_cut, precision, rsqrt)
            head += beta
            if n >= n_cut - n_cut // 2:
                values[n] = beta
        powers = [Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(7, 2)]
        tail, err = _power_fit_tail(values, n_cut, powers, precision)
        total = head + tail
        result = (PrecReal(total, precision), PrecReal(err, precision))
    _BRACKET_CACHE[key] = result
    return result


def constant_c(
    tol: Realish = mpf("1e-9"),
    precision: int = DEFAULT_PRECISION,
    n_cut: int = 2000,
    m_cut: int = 800,
) -> PrecReal:
    """The universal additive constant c, certified to the requested tol."""
    with workprec(precision + 10):
        tol = to_mpf(tol, precision)
        if tol < mpf("1e-12"):
            raise DomainError("constant_c supports tolerances down to 1e-12")
        total, err = bracket_series_total(precision, n_cut, m_cut)
        if err.value / (4 * mpmath.pi) > tol:
            raise NonConvergence(
                "series tail estimate exceeds requested tolerance",
                best=total, estimate=err,
            )
        c = mpmath.ln(2) / 4 + mpmath.ln(mpmath.pi) / 2 + total.value / (4 * mpmath.pi)
        return PrecReal(c, precision)


# ---------------------------------------------------------------------------
# Theorem-level predictors
# ---------------------------------------------------------------------------


def asymptotic_model(alpha: Realish, precision: int = DEFAULT_PRECISION) -> AsymptoticModel:
    with workprec(precision + 10):
        alpha_mp = to_mpf(alpha, precision + 10)
        if not alpha_mp > 1:
            raise DomainError("alpha must exceed 1")
        c = constant_c(precision=precision).value
        f_val = (alpha_mp + 1) / 2
        z32 = zeta(Fraction(3, 2), precision + 10).value
        ln_g = -z32 * mpmath.sqrt((alpha_mp - 1) / (2 * mpmath.pi))
        c_big = mpmath.exp(c) * (alpha_mp - 1) ** (mpf(1) / 4)
        return AsymptoticModel(
            alpha=PrecReal(alpha_mp, precision),
            F=PrecReal(f_val, precision),
            G=PrecReal(mpmath.exp(ln_g), precision),
            C=PrecReal(c_big, precision),
            c_const=PrecReal(c, precision),
            d_const=PrecReal(mpf(0), precision),
        )


def predict_lnZ(N: int, alpha: Realish, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """ln C + N^2 ln F + sqrt(N) ln G + (1/4) ln N (no free parameter)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    with workprec(precision + 10):
        alpha_mp = to_mpf(alpha, precision + 10)
        if not alpha_mp > 1:
            raise DomainError("alpha must exceed 1")
        c = constant_c(precision=precision).value
        z32 = zeta(Fraction(3, 2), precision + 10).value
        ln_c = c + mpmath.log(alpha_mp - 1) / 4
        ln_f = mpmath.log((alpha_mp + 1) / 2)
        ln_g = -z32 * mpmath.sqrt((alpha_mp - 1) / (2 * mpmath.pi))
        value = ln_c + N * N * ln_f + mpmath.sqrt(mpf(N)) * ln_g + mpmath.log(mpf(N)) / 4
        return PrecReal(value, precision)


# ---------------------------------------------------------------------------
# double-scaling functions Phi, Psi
# ---------------------------------------------------------------------------


def _quad01(f: Callable, upper, precision: int) -> mpf:
    # the integrands call the branch-dispatched kernels, whose own noise
    # floor sits near 2^-(precision-24); stay safely above it
    spec = QuadratureSpec(
        abs_tol=mpf(2) ** (-(precision - 45)), rel_tol=mpf(2) ** (-(precision - 45)),
        max_subdivisions=11,
    )
    value, _ = tanh_sinh(f, mpf(0), upper, precision, spec)
    return value


def _i_over_x(x, precision: int) -> mpf:
    """I(8x)/x with the series branch keeping x -> 0 finite (limit -2)."""
    z = 8 * x
    if z <= _Z_FAST_SERIES:
        if z == 0:
            return mpf(-2)
        value, _ = _series_eval(z, _i_series_frac, False, precision)
        return 8 * value / z
    return i_value(z, precision) / x


_PHI_PSI_CACHE: dict = {}


def phi_psi(t: Realish, precision: int = DEFAULT_PRECISION) -> DoubleScalingModel:
    """The double-scaling exponent functions Phi(t) and Psi(t), t >= 0."""
    with workprec(precision + 14):
        t_mp = to_mpf(t, precision + 14)
        key = (t_mp._mpf_, precision)
        if key in _PHI_PSI_CACHE:
            return _PHI_PSI_CACHE[key]
        if t_mp < 0:
            raise DomainError("t must be non-negative")
        if t_mp == 0:
            zero = PrecReal(mpf(0), precision)
            return DoubleScalingModel(t=zero, Phi=zero, Psi=zero)
        wp = precision + 14

        int_j = _quad01(lambda x: j_minus_const_value(8 * x, wp), t_mp, wp)
        int_i = _quad01(lambda x: i_value(8 * x, wp), t_mp, wp)
        int_logs = _quad01(lambda x: log_sinhc(4 * x), t_mp, wp)
        phi = -t_mp + (2 * int_j - 2 * int_i + int_logs) / t_mp

        i8t = i_value(8 * t_mp, wp)
        j8t_c = j_minus_const_value(8 * t_mp, wp)
        int_i2x = _quad01(lambda x: _i_over_x(x, wp) * i_value(8 * x, wp), t_mp, wp)
        int_ix = _quad01(lambda x: _i_over_x(x, wp), t_mp, wp)

        def cross(x):
            inner = jprime_value(8 * x, wp) + coth_reg(4 * x) / 2
            return inner * (4 * x + 2 * x * _i_over_x(x, wp))

        int_cross = _quad01(cross, t_mp, wp)
        psi = (
            3 * t_mp
            - mpf(3) / 2 * t_mp * t_mp
            - 2 * t_mp * i8t
            - i8t * i8t / 2
            - mpf(3) / 2 * i8t
            - log_sinhc(4 * t_mp) / 2
            - j8t_c
            - int_i2x / 4
            + int_ix
            + 2 * int_cross
        )
        model = DoubleScalingModel(
            t=PrecReal(t_mp, precision),
            Phi=PrecReal(phi, precision),
            Psi=PrecReal(psi, precision),
        )
        _PHI_PSI_CACHE[key] = model
        return model


def predict_lnZ_ds(N: int, alpha: Realish, precision: int = DEFAULT_PRECISION) -> PrecReal:
    """Double-scaling prediction of ln Z_N at t = N/alpha (no free constant)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    with workprec(precision + 10):
        alpha_mp = to_mpf(alpha, precision + 10)
        if not alpha_mp > 1:
            raise DomainError("alpha must exceed 1")
        t = mpf(N) / alpha_mp
        model = phi_psi(t, precision)
        ln_fact = ln_rational(Fraction(math.factorial(N)), precision + 10).value
        value = (
            ln_fact
            + N * N * mpmath.log((alpha_mp * alpha_mp - 1) / (2 * alpha_mp))
            + N * mpmath.log(2 / alpha_mp)
            + N * model.Phi.value
            + model.Psi.value
        )
        return PrecReal(value, precision)


# ---------------------------------------------------------------------------
# integral identities for the constant
# ---------------------------------------------------------------------------


def _series_tail_integral(series, x0, extra_inv_power: int, prec: int) -> mpf:
    """int_x0^inf (sum c x^p) * x^-extra dx, term by term (p + extra < -1)."""
    total = mpf(0)
    for ccoef, p in series:
        pe = mpf_from_rational(p - extra_inv_power, prec)
        if pe >= -1:
            continue
        total += -ccoef * x0 ** (pe + 1) / (pe + 1)
    return total


def _series_product(s1, s2, max_terms: int = 60):
    out: dict = {}
    for c1, p1 in s1:
        for c2, p2 in s2:
            p = p1 + p2
            out[p] = out.get(p, mpf(0)) + c1 * c2
    terms = sorted(out.items(), key=lambda item: -item[0])
    return [(c, p) for p, c in terms[:max_terms]]


def int_I_over_expm1(precision: int = DEFAULT_PRECISION) -> mpf:
    """int_0^inf I(x)/(e^x - 1) dx (exponentially small tail beyond 60)."""
    wp = precision + 10
    with workprec(wp):
        x_cut = mpf(60)
        value = _quad01(lambda x: i_value(x, wp) * phi_bose(x) / x, x_cut, wp)
        # I ~ -1 beyond the cut
        tail = mpmath.log(-mpmath.expm1(-x_cut))
        return value + tail


def int_JprimeI(precision: int = DEFAULT_PRECISION) -> mpf:
    """int_0^inf J'(x) I(x) dx with a termwise asymptotic tail."""
    wp = precision + 10
    with workprec(wp):
        x_cut = mpf(60)
        value = _quad01(lambda x: jprime_value(x, wp) * i_value(x, wp), x_cut, wp)
        i_ser = [(mpf(-1), Fraction(0))] + _asy("I", wp)[:12]
        jp_ser = _asy("Jp", wp)[:12]
        tail = _series_tail_integral(_series_product(jp_ser, i_ser), x_cut, 0, wp)
        return value + tail


def int_I2_low(precision: int = DEFAULT_PRECISION) -> mpf:
    """int_0^1 I(x)^2 dx/x (integrand ~ x/16 near 0)."""
    wp = precision + 10
    with workprec(wp):
        def f(x):
            if x == 0:
                return mpf(0)
            iv = i_value(x, wp)
            return iv * iv / x

        return _quad01(f, mpf(1), wp)


def int_one_minus_I2_high(precision: int = DEFAULT_PRECISION) -> mpf:
    """int_1^inf (1 - I(x)^2) dx/x."""
    wp = precision + 10
    with workprec(wp):
        x_cut = mpf(60)
        spec = QuadratureSpec(
            abs_tol=mpf(2) ** (-(wp - 45)), rel_tol=mpf(2) ** (-(wp - 45)), max_subdivisions=11
        )

        def f(x):
            iv = i_value(x, wp)
            return (1 - iv * iv) / x

        value, _ = tanh_sinh(f, mpf(1), x_cut, wp, spec)
        # with I = -1 + T: 1 - I^2 = 2T - T^2, T = sum A_j x^(-j-1/2)
        i_tail = _asy("I", wp)[:12]
        two_i = [(2 * c, p) for c, p in i_tail]
        sq = _series_product(i_tail, i_tail)
        series = two_i + [(-c, p) for c, p in sq]
        tail = _series_tail_integral(series, x_cut, 1, wp)
        return value + tail


def c0_from_integrals(precision: int = DEFAULT_PRECISION) -> mpf:
    """The integral form of the constant: -1/2 - ln2/4 + ln(pi)/2 + ..."""
    with workprec(precision + 10):
        return (
            -mpf(1) / 2
            - mpmath.ln(2) / 4
            + mpmath.ln(mpmath.pi) / 2
            + int_I_over_expm1(precision) / 2
            + int_JprimeI(precision)
            - int_I2_low(precision) / 4
            + int_one_minus_I2_high(precision) / 4
        )


def c0_identity_check(tol: Realish = mpf("1e-7"), precision: int = DEFAULT_PRECISION) -> dict:
    """Crosscheck the series and integral forms of c and both bridge identities.

    Returns a report dict with the two constants, the two-sided values of
    each identity, and their residuals.
    """
    with workprec(precision + 10):
        tol = to_mpf(tol, precision)
        if tol < mpf("1e-8"):
            raise DomainError("identity checks support tolerances down to 1e-8")
        total, total_err = bracket_series_total(precision)
        c_series = constant_c(precision=precision).value
        c_integral = c0_from_integrals(precision)

        ii_low = int_I2_low(precision)
        ii_high = int_one_minus_I2_high(precision)
        ev1_lhs = -ii_low / 4 + ii_high / 4
        ev1_rhs = mpmath.ln(2) / 2 - total.value / (4 * mpmath.pi)

        jpi = int_JprimeI(precision)
        ibose = int_I_over_expm1(precision)
        ev2_lhs = jpi
        ev2_rhs = mpf(1) / 2 - ibose / 2 + total.value / (2 * mpmath.pi)

        report = {
            "c_series": PrecReal(c_series, precision),
            "c_integral": PrecReal(c_integral, precision),
            "c_residual": PrecReal(abs(c_series - c_integral), precision),
            "ev1_lhs": PrecReal(ev1_lhs, precision),
            "ev1_rhs": PrecReal(ev1_rhs, precision),
            "ev1_residual": PrecReal(abs(ev1_lhs - ev1_rhs), precision),
            "ev2_lhs": PrecReal(ev2_lhs, precision),
            "ev2_rhs": PrecReal(ev2_rhs, precision),
            "ev2_residual": PrecReal(abs(ev2_lhs - ev2_rhs), precision),
            "series_error_estimate": total_err,
            "tol": PrecReal(tol, precision),
        }
        report["ok"] = bool(
            report["c_residual"].value <= tol
            and report["ev1_residual"].value <= tol
            and report["ev2_residual"].value <= tol
        )
        return report


# ---------------------------------------------------------------------------
# the seven summation constants
# ---------------------------------------------------------------------------


def _c1_raw(precision: int) -> mpf:
    """int_0^1 I(8x) dx/x + int_1^inf (I(8x)+1) dx/x (equals -ln 2)."""
    wp = precision + 10
    with workprec(wp):
        low = _quad01(lambda x: _i_over_x(x, wp), mpf(1), wp)
        x_cut = mpf(30)
        spec = QuadratureSpec(
            abs_tol=mpf(2) ** (-(wp - 45)), rel_tol=mpf(2) ** (-(wp - 45)), max_subdivisions=11
        )
        mid, _ = tanh_sinh(lambda x: (i_value(8 * x, wp) + 1) / x, mpf(1), x_cut, wp, spec)
        series = [(c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("I", wp)[:12]]
        tail = _series_tail_integral(series, x_cut, 1, wp)
        return low + mid + tail


def _c2_raw(precision: int) -> mpf:
    """int_0^inf (ln S(4x) - 4x + ln(8x)) dx, evaluated literally."""
    wp = precision + 10
    with workprec(wp):
        def f(x):
            if x == 0:
                return mpf(0)
            return mpmath.log(mpmath.sinh(4 * x) / (4 * x)) - 4 * x + mpmath.log(8 * x)

        # integrand is ln(1 - e^{-8x}); beyond 12 it is below 1e-41
        return _quad01(f, mpf(12), wp)


def _c3_raw(precision: int) -> mpf:
    wp = precision + 10
    with workprec(wp):
        def f(x):
            if x == 0:
                return mpf(0)
            growth = 4 * x * (coth_reg(4 * x) + 1 / (4 * x) - 1)
            return growth * (1 + _i_over_x(x, wp) / 2)

        main = _quad01(f, mpf(12), wp)
        return mpf(3) / 2 * mpmath.ln(2) + main + _c6_raw_integral(precision) - _c1_raw(precision) / 2


def _c3_simplified(precision: int) -> mpf:
    with workprec(precision + 10):
        return 2 * mpmath.ln(2) + mpmath.pi ** 2 / 48 + int_I_over_expm1(precision) / 2


def _c4_raw(precision: int) -> mpf:
    """2 int_0^inf J(8x) dx."""
    wp = precision + 10
    with workprec(wp):
        x_cut = mpf(10)
        value = _quad01(lambda x: j_value(8 * x, wp), x_cut, wp)
        series = [(c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("J", wp)[:12]]
        tail = _series_tail_integral(series, x_cut, 0, wp)
        return 2 * (value + tail)


def _c5_raw(precision: int) -> mpf:
    wp = precision + 10
    with workprec(wp):
        x_cut = mpf(30)

        def f(x):
            if x == 0:
                return mpf(0)
            return x * jprime_value(8 * x, wp) * (1 + _i_over_x(x, wp) / 2)

        value = _quad01(f, x_cut, wp)
        jp8 = [(c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("Jp", wp)[:12]]
        # 1 + I(8x)/(2x) = 1 - 1/(2x) + sum A_j 8^p x^(p-1) / 2
        i8_full = [(mpf(1), Fraction(0)), (mpf(-1) / 2, Fraction(-1))] + [
            (c * mpf(8) ** mpf_from_rational(p, wp) / 2, p - 1) for c, p in _asy("I", wp)[:12]
        ]
        prod = _series_product([(c, p + 1) for c, p in jp8], i8_full)
        tail = _series_tail_integral(prod, x_cut, 0, wp)
        return -(1 - mpmath.ln(2)) + 16 * (value + tail)


def _c5_simplified(precision: int) -> mpf:
    with workprec(precision + 10):
        return -(1 - mpmath.ln(2)) - mpmath.pi ** 2 / 48 + int_JprimeI(precision)


def _c6_raw_integral(precision: int) -> mpf:
    """2 int_0^inf (I(8x) + 1 - zeta(3/2)/(4 sqrt(2 pi x))) dx."""
    wp = precision + 10
    with workprec(wp):
        z32 = zeta(Fraction(3, 2), wp).value
        x_cut = mpf(30)

        def f(x):
            if x == 0:
                return mpf(0)
            return i_value(8 * x, wp) + 1 - z32 / (4 * mpmath.sqrt(2 * mpmath.pi * x))

        value = _quad01(f, x_cut, wp)
        # the x^(-1/2) asymptotic term cancels the subtraction exactly
        series = [
            (c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("I", wp)[1:12]
        ]
        tail = _series_tail_integral(series, x_cut, 0, wp)
        return 2 * (value + tail)


def _c6_raw(precision: int) -> mpf:
    return -_c6_raw_integral(precision)


def _c7_raw(precision: int) -> mpf:
    wp = precision + 10
    with workprec(wp):
        z32 = zeta(Fraction(3, 2), wp).value
        sqrt_pi = mpmath.sqrt(mpmath.pi)
        x_cut = mpf(30)

        def f_i2low(x):
            if x == 0:
                return mpf(0)
            iv = i_value(8 * x, wp)
            return iv * iv / (4 * x)

        t1 = -_quad01(f_i2low, mpf(1), wp)

        def f_ipr(x):
            if x == 0:
                return mpf(0)
            shifted = iprime_value(8 * x, wp) + z32 / (4 * sqrt_pi * (8 * x) ** mpf(1.5))
            return shifted * 8 * x * (1 + _i_over_x(x, wp) / 2)

        ip8 = [(c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("Ip", wp)[1:12]]
        i8_full = [(mpf(1), Fraction(0)), (mpf(-1) / 2, Fraction(-1))] + [
            (c * mpf(8) ** mpf_from_rational(p, wp) / 2, p - 1) for c, p in _asy("I", wp)[:12]
        ]
        prod = _series_product([(8 * c, p + 1) for c, p in ip8], i8_full)
        t2 = -2 * (_quad01(f_ipr, x_cut, wp) + _series_tail_integral(prod, x_cut, 0, wp))

        spec = QuadratureSpec(
            abs_tol=mpf(2) ** (-(wp - 45)), rel_tol=mpf(2) ** (-(wp - 45)), max_subdivisions=11
        )

        def f_i2high(x):
            iv = i_value(8 * x, wp)
            return (1 - iv * iv) / (4 * x)

        mid, _ = tanh_sinh(f_i2high, mpf(1), x_cut, wp, spec)
        i8_tail = [(c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("I", wp)[:12]]
        sq = _series_product(i8_tail, i8_tail)
        series = [(2 * c / 4, p) for c, p in i8_tail] + [(-c / 4, p) for c, p in sq]
        t3 = mid + _series_tail_integral(series, x_cut, 1, wp)

        t4 = -_c6_raw_integral(precision)

        def f_mix(x):
            if x == 0:
                return mpf(0)
            return (4 * iprime_value(8 * x, wp) - _i_over_x(x, wp) / 2) / mpmath.sqrt(x)

        mix_series = _series_product(
            [(4 * c * mpf(8) ** mpf_from_rational(p, wp), p) for c, p in _asy("Ip", wp)[:12]]
            + [(mpf(1) / 2, Fraction(-1))]
            + [(-c * mpf(8) ** mpf_from_rational(p, wp) / 2, p - 1) for c, p in _asy("I", wp)[:12]],
            [(mpf(1), Fraction(-1, 2))],
        )
        t5 = -(z32 / (2 * mpmath.sqrt(2 * mpmath.pi))) * (
            _quad01(f_mix, x_cut, wp) + _series_tail_integral(mix_series, x_cut, 0, wp)
        )
        return 1 + t1 + t2 + t3 + t4 + t5


def _c7_simplified(precision: int) -> mpf:
    with workprec(precision + 10):
        return (
            mpf(1) / 2
            - mpf(3) / 4 * mpmath.ln(2)
            - int_I2_low(precision) / 4
            + int_one_minus_I2_high(precision) / 4
        )


def c_constants_check(tol: Realish = mpf("1e-8"), precision: int = DEFAULT_PRECISION) -> dict:
    """Verify the closed forms and raw-vs-simplified agreement of c_1..c_7."""
    with workprec(precision + 10):
        tol = to_mpf(tol, precision)
        if tol < mpf("1e-8"):
            raise DomainError("constant checks support tolerances down to 1e-8")
        pi2_48 = mpmath.pi ** 2 / 48
        rows = {}
        c1 = _c1_raw(precision)
        rows["c1"] = (c1, -mpmath.ln(2))
        c2 = _c2_raw(precision)
        rows["c2"] = (c2, -pi2_48)
        c4 = _c4_raw(precision)
        rows["c4"] = (c4, pi2_48)
        c6 = _c6_raw(precision)
        rows["c6"] = (c6, mpf(0))
        rows["c3"] = (_c3_raw(precision), _c3_simplified(precision))
        rows["c5"] = (_c5_raw(precision), _c5_simplified(precision))
        rows["c7"] = (_c7_raw(precision), _c7_simplified(precision))
        d0 = rows["c2"][0] + rows["c4"][0] + rows["c6"][0]
        report = {"tol": PrecReal(tol, precision), "d0": PrecReal(d0, precision)}
        ok = abs(d0) <= tol
        for name, (raw, target) in rows.items():
            resid = abs(raw - target)
            report[name] = {
                "raw": PrecReal(raw, precision),
                "reference": PrecReal(target, precision),
                "residual": PrecReal(resid, precision),
            }
            ok = ok and resid <= tol
        report["ok"] = bool(ok)
        return report
