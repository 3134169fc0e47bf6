"""Independent Xi evaluation through the Chowla-Selberg expansion.

Splits pi^{-s} Gamma(s) Z_n(s; a) into a leading Riemann-zeta term, a tower
of n-1 lower-dimensional zeta terms, and an exponentially convergent double
sum of modified Bessel K factors.  The route shares no lattice machinery with
the incomplete-gamma evaluator, which makes agreement between the two a real
consistency check rather than a tautology.

Generic s only: the expansion's Gamma and zeta factors hit poles at
half-integer lattice points of s, where the two poles cancel in a limiting
form this module does not implement.  Those inputs are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, EvalConfig
from .epstein import ScaleVector, XiValue, _check_not_pole
from .errors import NotGenericError
from .specfun import bessel_k, riemann_zeta

__all__ = ["CSTerms", "chowla_selberg_terms", "xi_chowla_selberg"]

_GUARD = 1e-4
_ASYMPTOTIC_SWITCH = 30.0


@dataclass(frozen=True)
class CSTerms:
    """The three term groups of the expansion, before the V weight."""

    leading: float
    tower: tuple[float, ...]
    bessel_tail: float
    err: float


def _check_generic(n: int, s: float) -> None:
    for j in range(n):
        if abs(2.0 * s - j - 1.0) < 2.0 * _GUARD:
            raise NotGenericError(
                f"s={s}: zeta factor at 2s-{j} collides with the pole at 1; "
                "use the lattice evaluator for this point"
            )
        d = s - j / 2.0
        if d < 0.5 and abs(d - round(d)) < _GUARD and round(d) <= 0:
            raise NotGenericError(
                f"s={s}: Gamma factor at s-{j}/2 collides with a pole; "
                "use the lattice evaluator for this point"
            )


def _k_points(j: int, scales: tuple[float, ...], norm_cap: float) -> list[float]:
    """Squared a-weighted norms of the nonzero points of Z^j within the cap."""
    cap_sq = norm_cap * norm_cap
    out: list[float] = []

    def rec(axis: int, acc: float) -> None:
        if axis == j:
            if acc > 0.0:
                out.append(acc)
            return
        lim = int(math.floor(math.sqrt(max(cap_sq - acc, 0.0)) * scales[axis]))
        for k in range(-lim, lim + 1):
            rec(axis + 1, acc + (k / scales[axis]) ** 2)

    rec(0, 0.0)
    out.sort()
    return out


def _k_asymptotic_vec(nu: float, zs: np.ndarray) -> np.ndarray:
    """Large-argument K_nu expansion, identical to the scalar branch."""
    mu = 4.0 * nu * nu
    term = np.ones_like(zs)
    total = np.ones_like(zs)
    for k in range(1, 40):
        term = term * (mu - (2.0 * k - 1.0) ** 2) / (8.0 * zs * k)
        if float(np.abs(term).max()) < 1e-18:
            break
        total += term
    return np.sqrt(math.pi / (2.0 * zs)) * np.exp(-zs) * total


def chowla_selberg_terms(
    n: int, s: float, scales, cfg: EvalConfig = DEFAULT_CONFIG
) -> CSTerms:
    """Assemble the expansion of pi^{-s} Gamma(s) Z_n(s; a) term group by group.

    Scales are used in the order given; the expansion is not termwise
    symmetric in them even though its total is permutation invariant.
    """
    sv = ScaleVector.ensure(scales)
    if len(sv) != n:
        raise NotGenericError(f"expected {n} scales, got {len(sv)}")
    _check_not_pole(n, s)
    _check_generic(n, s)
    a = sv.a
    err = 0.0

    z2s = riemann_zeta(2.0 * s, cfg)
    lead_coeff = 2.0 * a[0] ** (-2.0 * s) * math.pi ** (-s) * math.gamma(s)
    leading = lead_coeff * z2s.value
    err += abs(lead_coeff) * z2s.err

    tower = []
    prod_a = 1.0
    for j in range(1, n):
        prod_a *= a[j - 1]
        zj = riemann_zeta(2.0 * s - j, cfg)
        coeff = (
            2.0
            * math.pi ** (-s + j / 2.0)
            * math.gamma(s - j / 2.0)
            / (a[j] ** (2.0 * s - j) * prod_a)
        )
        tower.append(coeff * zj.value)
        err += abs(coeff) * zj.err

    cutoff = math.log(1.0 / cfg.tol) + 40.0
    bessel_terms: list[float] = []
    prod_a = 1.0
    for j in range(1, n):
        prod_a *= a[j - 1]
        pref = 4.0 / prod_a
        nu = s - j / 2.0
        aj1 = a[j]
        # p = 1 admits the widest k-shells; |k|_a <= cutoff / (2 pi a_{j+1})
        small_z: list[tuple[float, float]] = []
        big_z: list[tuple[float, float]] = []
        for qa in _k_points(j, a[:j], cutoff / (2.0 * math.pi * aj1)):
            nrm = math.sqrt(qa)
            radial = qa ** (s / 2.0 - j / 4.0)
            p = 1
            while True:
                zarg = 2.0 * math.pi * p * aj1 * nrm
                if zarg > cutoff:
                    break
                coeff = pref * radial / (p * aj1) ** nu
                (big_z if zarg > _ASYMPTOTIC_SWITCH else small_z).append((coeff, zarg))
                p += 1
        for coeff, zarg in small_z:
            kv = bessel_k(nu, zarg, cfg)
            bessel_terms.append(coeff * kv.value)
            err += abs(coeff) * kv.err
        if big_z:
            coeffs = np.array([c for c, _ in big_z])
            zs = np.array([zv for _, zv in big_z])
            vals = coeffs * _k_asymptotic_vec(nu, zs)
            bessel_terms.append(float(vals.sum()))
            err += 1e-14 * float(np.abs(vals).sum())
    bessel_tail = math.fsum(bessel_terms)
    # everything past the cutoff decays like e^{-z}; the +40 margin makes the
    # omitted block negligible against tol
    err += cfg.tol * 1e-12 + 1e-15 * (abs(leading) + sum(abs(t) for t in tower))
    return CSTerms(leading, tuple(tower), bessel_tail, err)


def xi_chowla_selberg(
    n: int, s: float, scales, cfg: EvalConfig = DEFAULT_CONFIG
) -> XiValue:
    """Xi_n(s; a) through the Chowla-Selberg route (generic s only)."""
    sv = ScaleVector.ensure(scales)
    terms = chowla_selberg_terms(n, s, sv, cfg)
    total = math.fsum((terms.leading, *terms.tower, terms.bessel_tail))
    return XiValue(sv.V * total, sv.V * terms.err, n, s)
