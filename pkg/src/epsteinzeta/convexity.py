"""Convexity machinery: log-convexity of theta, product-function Hessians,
and the minimum of Xi at equal scales.

The chain of custody runs: positivity of h(v) = theta'' theta - theta'^2
+ theta theta' / v on [1, inf) gives strict convexity of u -> log theta(e^u);
the closed-form determinant of diagonal-plus-rank-structure matrices turns
that into positive semidefiniteness of the Hessian of products of theta
factors (Sylvester criterion on leading principal minors); affine invariance
then yields convexity of Xi on constant-log-volume hyperplanes, checked here
end to end through midpoint inequalities, and the unique minimum at equal
scales, checked by randomised sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .epstein import ScaleVector, XiValue, xi
from .errors import DomainError
from .specfun import Approximation, theta_with_derivatives

__all__ = [
    "JnInput",
    "HyperplaneChart",
    "standard_chart",
    "h_of_v",
    "coefficient_positivity_check",
    "CoefficientReport",
    "det_jn",
    "jn_recursion",
    "jn_closed_form",
    "sylvester_check",
    "SylvesterReport",
    "midpoint_convexity_xi",
    "MidpointReport",
    "log_theta_convexity",
    "LogConvexityReport",
    "verify_minimum_at_equal_scales",
    "MinimumReport",
]

_EPS = 2.2204460492503131e-16


@dataclass(frozen=True)
class JnInput:
    """Diagonal entries z_i and rank-structure weights w_i of a symmetric
    matrix with off-diagonal entries w_i w_j."""

    z: tuple[float, ...]
    w: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.z) != len(self.w):
            raise ValueError("z and w must have equal length")


@dataclass(frozen=True)
class HyperplaneChart:
    """Affine chart b -> exp(v + A b) into the constant-log-volume surface.

    Every column of A sums to zero, so prod_i a_i is constant along the
    chart; j is the number of free coordinates.
    """

    A: np.ndarray
    v: np.ndarray
    j: int = field(init=False)

    def __init__(self, A, v=None) -> None:
        A = np.atleast_2d(np.asarray(A, dtype=float))
        n, j = A.shape
        if v is None:
            v = np.zeros(n)
        v = np.asarray(v, dtype=float)
        if v.shape != (n,):
            raise DomainError(f"offset must have length {n}, got shape {v.shape}")
        if j > n - 1:
            raise DomainError(f"chart can have at most {n - 1} free coordinates, got {j}")
        colsums = np.abs(A.sum(axis=0))
        if colsums.max(initial=0.0) > 1e-10 * max(1.0, float(np.abs(A).max())):
            raise DomainError("every chart column must sum to zero")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "j", j)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def scales(self, b) -> ScaleVector:
        b = np.asarray(b, dtype=float).reshape(self.j)
        return ScaleVector(np.exp(self.v + self.A @ b))


def standard_chart(n: int, v=None) -> HyperplaneChart:
    """The n x (n-1) chart [I; -1 .. -1]: free log-scales with the last
    coordinate balancing the sum."""
    A = np.vstack([np.eye(n - 1), -np.ones((1, n - 1))])
    return HyperplaneChart(A, v)


# ---------------------------------------------------------------------------
# h(v) and the coefficient claims behind it
# ---------------------------------------------------------------------------


def h_of_v(v: float, cfg: EvalConfig | None = None) -> Approximation:
    """h(v) = theta''(v) theta(v) - theta'(v)^2 + theta(v) theta'(v) / v.

    Positivity of h on [1, inf) is the computational core of the strict
    log-convexity of theta(e^u); the reflection symmetry of log theta(e^u)
    reduces u < 0 to this range, hence v >= 1 is required here.
    """
    if not v >= 1.0:
        raise DomainError(f"h(v) is evaluated on v >= 1 only, got {v}")
    th, thp, thpp = theta_with_derivatives(v, cfg)
    value = thpp.value * th.value - thp.value * thp.value + th.value * thp.value / v
    err = (
        abs(thpp.value) * th.err
        + th.value * thpp.err
        + 2.0 * abs(thp.value) * thp.err
        + (abs(thp.value) * th.err + th.value * thp.err) / v
        + 4.0 * _EPS * (abs(thpp.value) * th.value + thp.value**2 + abs(thp.value) / v)
    )
    return Approximation(value, err)


def _c_coeff(j: int, k: int, v: float) -> float:
    """pi (k^2 - j^2)^2 - (j^2 + k^2)/v, the coefficient of exp(-pi v (j^2+k^2))
    in the symmetrised double-series form of 2 h(v) / pi."""
    return math.pi * (k * k - j * j) ** 2 - (j * j + k * k) / v


@dataclass(frozen=True)
class CoefficientReport:
    kmax: int
    min_offdiagonal: float  # min over 0 <= j < k <= kmax of C(j, k)
    min_pair: float  # min over k >= 1 of C(k-1, k) + C(k, k)/2
    q1: float  # the k = 1 pair value, pi - 2
    all_positive: bool


def coefficient_positivity_check(kmax: int, v: float = 1.0) -> CoefficientReport:
    """Verify the two coefficient claims at the worst case v = 1.

    (a) C(j, k) > 0 whenever j != k; (b) C(k-1, k) + C(k, k)/2 > 0 for all
    k >= 1.  Together they force every block of the rearranged double series
    for h(v) to be positive.
    """
    if kmax < 2:
        raise DomainError(f"kmax must be at least 2, got {kmax}")
    min_off = math.inf
    for k in range(1, kmax + 1):
        for j in range(0, k):
            min_off = min(min_off, _c_coeff(j, k, v))
    min_pair = min(
        _c_coeff(k - 1, k, v) + 0.5 * _c_coeff(k, k, v) for k in range(1, kmax + 1)
    )
    q1 = _c_coeff(0, 1, v) + 0.5 * _c_coeff(1, 1, v)
    return CoefficientReport(
        kmax=kmax,
        min_offdiagonal=min_off,
        min_pair=min_pair,
        q1=q1,
        all_positive=min_off > 0.0 and min_pair > 0.0,
    )


# ---------------------------------------------------------------------------
# Determinant identity and recursion
# ---------------------------------------------------------------------------


def det_jn(inp: JnInput) -> float:
    """Closed-form determinant of the matrix with diagonal z_i and
    off-diagonal w_i w_j:

        prod_i (z_i - w_i^2) + sum_i w_i^2 prod_{j != i} (z_j - w_j^2).

    Both summands are nonnegative whenever z_i >= w_i^2, which is exactly the
    log-convexity condition on each factor.
    """
    d = [zi - wi * wi for zi, wi in zip(inp.z, inp.w)]
    terms = [math.prod(d)]
    for i, wi in enumerate(inp.w):
        terms.append(wi * wi * math.prod(d[:i] + d[i + 1 :]))
    return math.fsum(terms)


def assemble_jn(inp: JnInput) -> np.ndarray:
    """The dense matrix itself, for oracle comparisons."""
    w = np.asarray(inp.w)
    m = np.outer(w, w)
    np.fill_diagonal(m, inp.z)
    return m


def jn_closed_form(alphas) -> float:
    """prod_i (alpha_i - 1) + sum_i prod_{j != i} (alpha_j - 1)."""
    d = [a - 1.0 for a in alphas]
    terms = [math.prod(d)]
    for i in range(len(d)):
        terms.append(math.prod(d[:i] + d[i + 1 :]))
    return math.fsum(terms)


def jn_recursion(alphas) -> float:
    """Determinant of the all-ones matrix with diagonal replaced by alphas,
    through the elimination recursion

        D(a_1 .. a_n) = (a_1 - 1) D(a_2 .. a_n) + (-1)^{n-1} prod_{i>=2} (1 - a_i).
    """
    alphas = list(alphas)
    if len(alphas) < 1:
        raise DomainError("need at least one diagonal entry")
    if len(alphas) == 1:
        return alphas[0]
    n = len(alphas)
    rest = alphas[1:]
    sign = -1.0 if (n - 1) % 2 else 1.0
    return (alphas[0] - 1.0) * jn_recursion(rest) + sign * math.prod(
        1.0 - a for a in rest
    )


# ---------------------------------------------------------------------------
# Sylvester minors of the product-function Hessian
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SylvesterReport:
    xs: tuple[float, ...]
    minors: tuple[float, ...]
    all_nonnegative: bool


def sylvester_check(xs, cfg: EvalConfig | None = None) -> SylvesterReport:
    """Leading principal minors of the reduced Hessian of prod_i theta(e^{x_i}).

    With f(x) = theta(e^x), the reduced Hessian has diagonal f''/f and
    off-diagonal (f'/f)_i (f'/f)_j; its minors are evaluated through the
    closed determinant form, where z_i - w_i^2 = (log f)'' > 0 makes every
    minor a sum of positive products.
    """
    xs = tuple(float(x) for x in xs)
    zs: list[float] = []
    ws: list[float] = []
    for x in xs:
        t = math.exp(x)
        th, thp, thpp = theta_with_derivatives(t, cfg)
        g1 = thp.value / th.value
        g2 = (thpp.value * th.value - thp.value**2) / th.value**2
        w = t * g1  # (log f)'
        log_second = t * t * g2 + t * g1  # (log f)''
        ws.append(w)
        zs.append(log_second + w * w)  # f''/f
    minors = tuple(det_jn(JnInput(tuple(zs[:i]), tuple(ws[:i]))) for i in range(1, len(xs) + 1))
    return SylvesterReport(xs=xs, minors=minors, all_nonnegative=all(m >= 0.0 for m in minors))


# ---------------------------------------------------------------------------
# Midpoint convexity and the minimum at equal scales
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MidpointReport:
    left: XiValue
    right: XiValue
    mid: XiValue
    slack: float  # (left + right)/2 - mid, before error allowance
    holds: bool


def midpoint_convexity_xi(
    n: int,
    s: float,
    chart: HyperplaneChart,
    b1,
    b2,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> MidpointReport:
    """Check Xi(mid) <= (Xi(b1) + Xi(b2))/2 + combined error along a chart."""
    if chart.n != n:
        raise DomainError(f"chart is {chart.n}-dimensional, expected {n}")
    b1 = np.asarray(b1, dtype=float).reshape(chart.j)
    b2 = np.asarray(b2, dtype=float).reshape(chart.j)
    left = xi(n, s, chart.scales(b1), cfg)
    right = xi(n, s, chart.scales(b2), cfg)
    mid = xi(n, s, chart.scales(0.5 * (b1 + b2)), cfg)
    slack = 0.5 * (left.value + right.value) - mid.value
    allowance = 0.5 * (left.err + right.err) + mid.err
    return MidpointReport(left, right, mid, slack, holds=slack >= -allowance)


@dataclass(frozen=True)
class LogConvexityReport:
    us: tuple[float, ...]
    second_derivatives: tuple[Approximation, ...]
    all_positive: bool


def log_theta_convexity(us, cfg: EvalConfig | None = None) -> LogConvexityReport:
    """Second derivative of u -> log theta(e^u) at each grid point, with error
    bounds that must exclude zero.

    The symmetry (log theta(e^u))'' = (log theta(e^{-u}))'' maps negative
    grid points to positive ones before evaluation.
    """
    us = tuple(float(u) for u in us)
    if not us:
        raise DomainError("grid must be nonempty")
    results = []
    for u in us:
        t = math.exp(abs(u))
        th, thp, thpp = theta_with_derivatives(t, cfg)
        g1 = thp.value / th.value
        g2 = (thpp.value * th.value - thp.value**2) / th.value**2
        value = t * t * g2 + t * g1
        e0, e1, e2 = th.err, thp.err, thpp.err
        g1_err = (e1 + abs(g1) * e0) / th.value
        num_err = th.value * e2 + abs(thpp.value) * e0 + 2.0 * abs(thp.value) * e1
        g2_err = (num_err + 2.0 * abs(g2) * th.value * e0) / th.value**2
        err = t * t * g2_err + t * g1_err + 8.0 * _EPS * (t * t * abs(g2) + t * abs(g1))
        results.append(Approximation(value, err))
    all_pos = all(r.value > 0.0 and r.excludes_zero() for r in results)
    return LogConvexityReport(us=us, second_derivatives=tuple(results), all_positive=all_pos)


@dataclass(frozen=True)
class MinimumReport:
    n: int
    s: float
    samples: int
    failures: int
    min_margin: float  # smallest Xi(a) - Xi(1..1) over draws clear of the origin
    holds: bool


def verify_minimum_at_equal_scales(
    n: int,
    s: float,
    samples: int,
    cfg: EvalConfig = DEFAULT_CONFIG,
    seed: int = 0,
) -> MinimumReport:
    """Randomised check that equal scales minimise Xi at fixed volume.

    Draws product-one scale vectors (log a_i uniform on [-1, 1], last
    coordinate balancing) and requires Xi(s; a) >= Xi(s; 1 .. 1) - 2 err for
    every draw, strictly so whenever the draw is at least 0.05 away from the
    equal-scale point in max log-coordinates.
    """
    rng = np.random.default_rng(seed)
    base = xi(n, s, ScaleVector.unit(n), cfg)
    failures = 0
    min_margin = math.inf
    for _ in range(samples):
        logs = rng.uniform(-1.0, 1.0, size=n - 1)
        logs = np.append(logs, -logs.sum())
        value = xi(n, s, ScaleVector(np.exp(logs)), cfg)
        gap = value.value - base.value
        combined = value.err + base.err
        if gap < -2.0 * combined:
            failures += 1
        if float(np.abs(logs).max()) > 0.05:
            min_margin = min(min_margin, gap)
            if gap <= combined:  # strictness undecidable or violated
                failures += 1
    return MinimumReport(
        n=n,
        s=s,
        samples=samples,
        failures=failures,
        min_margin=min_margin,
        holds=failures == 0,
    )
