"""Singularity-aware quadrature engines.

Three rules cover everything the package integrates:

* **tanh-sinh** panels on finite intervals.  The double-exponential
  substitution pushes the nodes toward the endpoints, so integrable
  endpoint singularities (u^(-1/2), log u, ...) converge spectrally.
  Levels are nested; the level-to-level difference is the error estimate.

* **Chebyshev-Gauss** for the two half-integer Jacobi weights on (0,1).
  Writing u = sin^2(theta) turns both weights into the arcsine weight,
  for which the n-point rule integrates polynomials of degree <= 2n-1
  exactly and analytic integrands geometrically.

* a mapped-panel scheme on (0, infinity) for integrands with an
  exponential envelope, with a certified tail bound from a decay probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, NonConvergence, TailNotDecaying
from .precision import DEFAULT_PRECISION, PrecReal, Realish, to_mpf


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for one quadrature call."""

    abs_tol: Realish
    rel_tol: Realish
    max_subdivisions: int = 12
    panel_rule: str = "tanh-sinh"

    def __post_init__(self):
        if not (to_mpf(self.abs_tol) > 0 and to_mpf(self.rel_tol) > 0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")

    @classmethod
    def default(cls, precision: int = DEFAULT_PRECISION) -> "QuadratureSpec":
        # 1e-20 absolute default; tighten relative tolerance with precision
        return cls(abs_tol=mpf("1e-20"), rel_tol=mpf(2) ** (-(precision - 18)), max_subdivisions=12)

    def tolerance(self, value: mpf, precision: int) -> mpf:
        return max(to_mpf(self.abs_tol, precision), to_mpf(self.rel_tol, precision) * abs(value))


# ---------------------------------------------------------------------------
# tanh-sinh rule
# ---------------------------------------------------------------------------

_TS_CACHE: dict = {}


def _ts_nodes(prec: int, level: int):
    """Unit-interval tanh-sinh nodes for step h = 2^-level.

    Returns (deltas, weights) for the *new* abscissas of this level (odd
    multiples of h for level >= 1, all multiples for level 0).  A node at
    parameter t contributes the pair of abscissas x = delta and
    x = 1 - delta with delta = 1/(1 + exp(2*y)), y = (pi/2)*sinh(t), and
    weight (pi/2)*cosh(t)/cosh(y)^2.
    """
    key = (prec, level)
    if key in _TS_CACHE:
        return _TS_CACHE[key]
    with workprec(prec + 20):
        h = mpf(2) ** (-level)
        # Truncation depth: a node at parameter t sits at distance
        # delta ~ exp(-2y) from the endpoint with weight ~ exp(-2y), so an
        # endpoint singularity u^-p inflates the summand to exp(-2(1-p)y).
        # Go deep enough that even p ~ 0.8 decays below the precision floor;
        # t_max only grows like log(y_max), so this costs little.
        y_max = mpf(5 * (prec + 40)) * mpmath.ln(2) / 2
        t_max = mpmath.asinh(2 * y_max / mpmath.pi)
        deltas, weights = [], []
        k = 0 if level == 0 else 1
        step = 1 if level == 0 else 2
        while True:
            t = k * h
            if t > t_max:
                break
            y = mpmath.pi / 2 * mpmath.sinh(t)
            e2y = mpmath.exp(2 * y)
            delta = 1 / (1 + e2y)
            w = mpmath.pi / 2 * mpmath.cosh(t) / mpmath.cosh(y) ** 2
            deltas.append(delta)
            weights.append(w)
            k += step
    _TS_CACHE[key] = (deltas, weights)
    return _TS_CACHE[key]


def tanh_sinh(
    f: Callable[[mpf], Realish],
    a: Realish,
    b: Realish,
    precision: int = DEFAULT_PRECISION,
    spec: Optional[QuadratureSpec] = None,
) -> tuple[mpf, mpf]:
    """Integrate f over (a, b); returns (value, error_estimate)."""
    if spec is None:
        spec = QuadratureSpec.default(precision)
    with workprec(precision + 20):
        a = to_mpf(a, precision + 20)
        b = to_mpf(b, precision + 20)
        length = b - a
        if length == 0:
            return mpf(0), mpf(0)

        def level_sum(level: int) -> mpf:
            deltas, weights = _ts_nodes(precision, level)
            acc = mpf(0)
            if level == 0:
                # center node (delta = 1/2) counted once
                acc += weights[0] * to_mpf(f(a + length / 2), precision + 20)
                pairs = zip(deltas[1:], weights[1:])
            else:
                pairs = zip(deltas, weights)
            for delta, w in pairs:
                d = delta * length
                acc += w * (to_mpf(f(a + d), precision + 20) + to_mpf(f(b - d), precision + 20))
            return acc * length / 2

        prev = level_sum(0)
        value = prev
        err = abs(value) + 1
        max_level = max(4, spec.max_subdivisions)
        for level in range(1, max_level + 1):
            h = mpf(2) ** (-level)
            # even-multiple nodes are the previous level; only odd ones are new
            value = prev / 2 + h * level_sum(level)
            err = abs(value - prev)
            if level >= 3 and err <= spec.tolerance(value, precision):
                return +value, +err
            prev = value
        raise NonConvergence("tanh-sinh levels exhausted", best=+value, estimate=+err)


# ---------------------------------------------------------------------------
# Chebyshev-Gauss rule for the (0,1) Jacobi half-weights
# ---------------------------------------------------------------------------

_CG_CACHE: dict = {}


def _cg_nodes(prec: int, n: int) -> Sequence[mpf]:
    key = (prec, n)
    if key in _CG_CACHE:
        return _CG_CACHE[key]
    with workprec(prec + 20):
        nodes = [(1 + mpmath.cospi(mpf(2 * i - 1) / (2 * n))) / 2 for i in range(1, n + 1)]
    _CG_CACHE[key] = nodes
    return nodes


def cheb_gauss(g: Callable[[mpf], Realish], n: int, precision: int) -> mpf:
    """n-point rule for int_0^1 g(u) / sqrt(u(1-u)) du."""
    with workprec(precision + 20):
        nodes = _cg_nodes(precision, n)
        acc = mpf(0)
        for u in nodes:
            acc += to_mpf(g(u), precision + 20)
        return +(acc * mpmath.pi / n)


WEIGHT_SQRT_RATIO = "sqrt_ratio"  # sqrt(u/(1-u))
WEIGHT_INV_SQRT = "inv_sqrt"      # 1/sqrt(u(1-u))


def quad_jacobi_half(
    f: Callable[[mpf], Realish],
    spec: Optional[QuadratureSpec] = None,
    weight: str = WEIGHT_SQRT_RATIO,
    precision: int = DEFAULT_PRECISION,
) -> PrecReal:
    """Integrate f against sqrt(u/(1-u)) or 1/sqrt(u(1-u)) over (0,1).

    The substitution u = sin^2(theta) removes both endpoint singularities;
    the resulting rule is exact on polynomials f up to degree 2n-1
    (inv_sqrt weight) resp. 2n-2 (sqrt_ratio weight) at n points.
    """
    if spec is None:
        spec = QuadratureSpec.default(precision)
    if weight == WEIGHT_SQRT_RATIO:
        g = lambda u: u * to_mpf(f(u), precision + 20)
    elif weight == WEIGHT_INV_SQRT:
        g = f
    else:
        raise DomainError(f"unknown weight {weight!r}")
    n = 16
    prev = cheb_gauss(g, n, precision)
    for _ in range(spec.max_subdivisions):
        n *= 2
        value = cheb_gauss(g, n, precision)
        err = abs(value - prev)
        if err <= spec.tolerance(value, precision):
            return PrecReal(value, precision)
        prev = value
    raise NonConvergence(
        "Chebyshev-Gauss doubling exhausted", best=PrecReal(prev, precision), estimate=err
    )


# ---------------------------------------------------------------------------
# half-line integrals with exponential decay
# ---------------------------------------------------------------------------


def quad_semi_infinite(
    g: Callable[[mpf], Realish],
    decay_scale: Realish,
    spec: Optional[QuadratureSpec] = None,
    precision: int = DEFAULT_PRECISION,
) -> PrecReal:
    """Integrate g over (0, infinity) assuming |g(x)| <= M exp(-x/decay_scale).

    The decay envelope is probed on a geometric grid; if the probe cannot
    confirm the envelope, TailNotDecaying is raised.  The integral is then
    computed on geometrically growing tanh-sinh panels up to a truncation
    point X with a certified tail bound M * scale * exp(-X/scale).
    """
    if spec is None:
        spec = QuadratureSpec.default(precision)
    s = to_mpf(decay_scale, precision)
    if not s > 0:
        raise DomainError("decay_scale must be positive")
    with workprec(precision + 20):
        abs_tol = to_mpf(spec.abs_tol, precision)
        # probe the envelope e(x) = |g(x)| * exp(x/s)
        env = []
        xs = []
        for j in range(2, 13):
            best = mpf(0)
            for frac in (mpf(1), mpf("1.37"), mpf("1.71")):
                x = s * (2 ** j) * frac
                best = max(best, abs(to_mpf(g(x), precision + 20)) * mpmath.exp(x / s))
            env.append(best)
            xs.append(s * (2 ** j))
        rises = sum(1 for e0, e1 in zip(env, env[1:]) if e1 > 4 * e0 and e1 > abs_tol)
        if rises >= 2:
            raise TailNotDecaying(
                "integrand does not satisfy the exponential envelope along the probe grid"
            )
        envelope = max(env + [mpf(1)])
        # truncation point: envelope * s * exp(-X/s) <= abs_tol / 4
        x_cut = s * mpmath.ln(4 * envelope * s / abs_tol + 1) + 5 * s
        tail_bound = envelope * s * mpmath.exp(-x_cut / s)

        panels = []
        lo = mpf(0)
        hi = s
        while True:
            panels.append((lo, min(hi, x_cut)))
            if hi >= x_cut:
                break
            lo, hi = hi, hi * 2
        panel_spec = QuadratureSpec(
            abs_tol=abs_tol / (2 * len(panels)),
            rel_tol=spec.rel_tol,
            max_subdivisions=spec.max_subdivisions,
        )
        total = mpf(0)
        err = tail_bound
        for lo, hi in panels:
            v, e = tanh_sinh(g, lo, hi, precision, panel_spec)
            total += v
            err += e
        if err > spec.tolerance(total, precision) * 4 + tail_bound:
            raise NonConvergence(
                "half-line quadrature error estimate above tolerance",
                best=PrecReal(total, precision),
                estimate=+err,
            )
    return PrecReal(total, precision)
