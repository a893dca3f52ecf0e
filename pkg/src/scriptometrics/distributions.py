"""Count distributions and the special functions they need.

Everything here is plain-float, dependency-free numerics: the rising
factorial, Kummer's function 1F1(1; b; a), Poisson (optionally displaced)
and hyper-Poisson probabilities, and the chi-square survival function via
the regularized incomplete gamma function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from .exceptions import FitError

__all__ = [
    "PoissonParams",
    "HyperPoissonParams",
    "rising_factorial",
    "kummer_1f1_unit",
    "poisson_pmf",
    "poisson_sf",
    "hyper_poisson_pmf",
    "hyper_poisson_pmfs",
    "hyper_poisson_sf",
    "gammainc_lower",
    "gammainc_upper",
    "chi2_sf",
]

SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 10_000
_GAMMA_EPS = 1e-16
_GAMMA_MAX_ITER = 10_000
_TINY = 1e-300


@dataclass(frozen=True)
class PoissonParams:
    """Poisson law with rate ``lam`` displaced to start at ``shift``."""

    lam: float
    shift: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"Poisson rate must be positive, got {self.lam}")
        if self.shift < 0:
            raise ValueError(f"shift must be non-negative, got {self.shift}")

    n_params = 1

    def pmf(self, x: int) -> float:
        return poisson_pmf(self, x)

    def prob_below(self, x: int) -> float:
        """P(X < x)."""
        if x <= self.shift:
            return 0.0
        return gammainc_upper(x - self.shift, self.lam)

    def prob_above(self, x: int) -> float:
        """P(X > x)."""
        return poisson_sf(self, x)


@dataclass(frozen=True)
class HyperPoissonParams:
    a: float
    b: float

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError(f"hyper-Poisson a must be >= 0, got {self.a}")
        if not self.b > 0:
            raise ValueError(f"hyper-Poisson b must be > 0, got {self.b}")

    n_params = 2

    def pmf(self, x: int) -> float:
        return hyper_poisson_pmf(self, x)

    def prob_below(self, x: int) -> float:
        if x <= 0:
            return 0.0
        return math.fsum(hyper_poisson_pmfs(self, x))

    def prob_above(self, x: int) -> float:
        return hyper_poisson_sf(self, x)


def rising_factorial(b: float, x: int) -> float:
    """b (b + 1) ... (b + x - 1); equal to 1 for ``x == 0``."""
    if x < 0:
        raise ValueError("rising factorial needs a non-negative integer order")
    out = 1.0
    for k in range(x):
        out *= b + k
    return out


def kummer_1f1_unit(b: float, a: float) -> float:
    """Kummer's confluent hypergeometric function 1F1(1; b; a) for a >= 0.

    Sums ``a**k / rising_factorial(b, k)`` by the term ratio a / (b + k)
    until the terms are decreasing and a term is below 1e-15 of the sum.
    """
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    if a < 0:
        raise ValueError(f"a must be non-negative, got {a}")
    if a == 0:
        return 1.0
    total = term = 1.0
    for k in range(SERIES_MAX_TERMS):
        term *= a / (b + k)
        total += term
        if not math.isfinite(total):
            raise FitError(f"1F1(1; {b}; {a}) overflows")
        if b + k >= a and term <= SERIES_RTOL * total:
            return total
    raise FitError(f"1F1(1; {b}; {a}) did not converge in {SERIES_MAX_TERMS} terms")


def poisson_pmf(p: PoissonParams, x: int) -> float:
    k = x - p.shift
    if k < 0:
        return 0.0
    return math.exp(-p.lam + k * math.log(p.lam) - math.lgamma(k + 1))


def poisson_sf(p: PoissonParams, x: int) -> float:
    """P(X > x), via P(X > k) = P(k + 1, lam) for the unshifted law."""
    k = x - p.shift
    if k < 0:
        return 1.0
    return gammainc_lower(k + 1, p.lam)


def hyper_poisson_pmfs(h: HyperPoissonParams, n: int) -> List[float]:
    """[P_0, ..., P_{n-1}] built from P_0 = 1/1F1 and P_{x+1} = P_x a / (b + x)."""
    out = []
    p = 1.0 / kummer_1f1_unit(h.b, h.a)
    for x in range(n):
        out.append(p)
        p *= h.a / (h.b + x)
    return out


def hyper_poisson_pmf(h: HyperPoissonParams, x: int) -> float:
    if x < 0:
        return 0.0
    return hyper_poisson_pmfs(h, x + 1)[x]


def hyper_poisson_sf(h: HyperPoissonParams, x: int) -> float:
    """P(X > x), summed directly over the tail to avoid cancellation."""
    if x < 0:
        return 1.0
    if h.a == 0:
        return 0.0
    p = hyper_poisson_pmfs(h, x + 2)[-1]
    total = 0.0
    k = x + 1
    for _ in range(SERIES_MAX_TERMS):
        total += p
        if h.b + k >= h.a and p <= SERIES_RTOL * total:
            return min(total, 1.0)
        p *= h.a / (h.b + k)
        k += 1
    raise FitError("hyper-Poisson tail did not converge")


def _gamma_series(s: float, x: float) -> float:
    """Regularized P(s, x) by its power series; good for x < s + 1."""
    term = total = 1.0 / s
    denom = s
    for _ in range(_GAMMA_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    else:
        raise FitError(f"incomplete gamma series failed for s={s}, x={x}")
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _gamma_cfrac(s: float, x: float) -> float:
    """Regularized Q(s, x) by Lentz's continued fraction; good for x >= s + 1."""
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    else:
        raise FitError(f"incomplete gamma continued fraction failed for s={s}, x={x}")
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))


def gammainc_lower(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x)."""
    if s <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 0.0
    if x < s + 1.0:
        return min(_gamma_series(s, x), 1.0)
    return max(1.0 - _gamma_cfrac(s, x), 0.0)


def gammainc_upper(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    if s <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 1.0
    if x < s + 1.0:
        return max(1.0 - _gamma_series(s, x), 0.0)
    return min(_gamma_cfrac(s, x), 1.0)


def chi2_sf(chi2: float, df: int) -> float:
    """Upper tail probability of the chi-square law with ``df`` degrees of freedom."""
    if chi2 < 0:
        raise ValueError("chi-square statistic must be non-negative")
    if df < 1:
        raise ValueError("degrees of freedom must be positive")
    return gammainc_upper(df / 2.0, chi2 / 2.0)
