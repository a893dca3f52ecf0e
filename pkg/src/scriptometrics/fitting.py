"""Pearson chi-square fitting of Poisson and hyper-Poisson models.

Classes are the observed support with no pooling, so
``df = classes - 1 - free parameters``.  How tail mass outside the
observed support enters the expected frequencies is an explicit
:class:`ExpectedConvention`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from .distributions import HyperPoissonParams, PoissonParams, chi2_sf
from .exceptions import FitError, OverparameterizedError, StatisticalPreconditionError
from .frequency import FrequencyTable, sample_mean, sample_variance

__all__ = [
    "ExpectedConvention",
    "FitResult",
    "CalibrationRecord",
    "VAI_REFERENCE",
    "expected_frequencies",
    "pearson_chi2",
    "fit_poisson",
    "fit_hyper_poisson",
    "hyper_poisson_moment_start",
    "calibrate_convention",
    "select_convention",
    "evaluate",
]

Params = Union[PoissonParams, HyperPoissonParams]

B_MIN = 1e-9
SIMPLEX_XATOL = 5e-7


class ExpectedConvention(enum.Enum):
    TRUNCATE = "truncate"
    TAIL_POOL = "tailpool"
    RENORMALIZE = "renormalize"


# Fixed tie-break priority for calibration.
_PRIORITY = [ExpectedConvention.TRUNCATE, ExpectedConvention.TAIL_POOL, ExpectedConvention.RENORMALIZE]


def _convention(c) -> ExpectedConvention:
    return c if isinstance(c, ExpectedConvention) else ExpectedConvention(c)


def model_name(params: Params) -> str:
    return "poisson" if isinstance(params, PoissonParams) else "hyper-poisson"


def expected_frequencies(params: Params, t: FrequencyTable, convention=ExpectedConvention.TAIL_POOL) -> List[float]:
    """Expected class frequencies over the support of ``t``.

    * ``truncate``: ``N * P_x``.
    * ``tailpool``: as truncate, plus ``N * P(X < min)`` on the first class
      and ``N * P(X > max)`` on the last.
    * ``renormalize``: ``N * P_x / sum(P over the support)``.
    """
    convention = _convention(convention)
    n = t.total()
    probs = np.array([params.pmf(x) for x in t.values], dtype=float)
    if convention is ExpectedConvention.TAIL_POOL:
        probs[0] += params.prob_below(t.support_min)
        probs[-1] += params.prob_above(t.support_max)
    elif convention is ExpectedConvention.RENORMALIZE:
        mass = probs.sum()
        if mass <= 0:
            raise FitError("model puts no mass on the observed support")
        probs = probs / mass
    expected = n * probs
    if convention is ExpectedConvention.TRUNCATE and np.any(expected <= 0):
        x = t.values[int(np.argmin(expected))]
        raise FitError(f"zero expected frequency at x={x}")
    return expected.tolist()


def pearson_chi2(observed: FrequencyTable, expected, n_params: int) -> Tuple[float, int, float]:
    """Return ``(chi2, df, p_value)`` with ``df = classes - 1 - n_params``."""
    obs = np.asarray(observed.counts, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape:
        raise ValueError(f"{len(obs)} observed classes but {len(exp)} expected")
    df = len(obs) - 1 - n_params
    if df <= 0:
        raise OverparameterizedError(
            f"overparameterized: {len(obs)} classes, {n_params} parameter(s) leave df={df}"
        )
    if np.any(exp <= 0) or not np.all(np.isfinite(exp)):
        raise StatisticalPreconditionError("expected frequencies must be positive and finite")
    chi2 = float(np.sum((obs - exp) ** 2 / exp))
    return chi2, df, chi2_sf(chi2, df)


@dataclass(frozen=True)
class FitResult:
    model: str
    params: Params
    convention: ExpectedConvention
    observed: FrequencyTable
    expected: Tuple[float, ...]
    chi2: float
    df: int
    p_value: float
    start: Optional[Params] = None
    start_chi2: Optional[float] = None
    notes: Tuple[str, ...] = ()


def evaluate(params: Params, t: FrequencyTable, convention=ExpectedConvention.TAIL_POOL, **extra) -> FitResult:
    """Goodness of fit of fixed ``params`` to ``t``."""
    convention = _convention(convention)
    _check_df(t, params.n_params)
    expected = expected_frequencies(params, t, convention)
    chi2, df, p = pearson_chi2(t, expected, params.n_params)
    return FitResult(model_name(params), params, convention, t, tuple(expected), chi2, df, p, **extra)


def _check_df(t: FrequencyTable, n_params: int):
    df = len(t) - 1 - n_params
    if df <= 0:
        raise OverparameterizedError(
            f"overparameterized: {len(t)} classes, {n_params} parameter(s) leave df={df}"
        )


def fit_poisson(t: FrequencyTable, shift: Union[str, int] = "auto", convention=ExpectedConvention.TAIL_POOL) -> FitResult:
    """Moment fit: ``lam = mean - shift``; ``shift="auto"`` uses the support minimum."""
    _check_df(t, PoissonParams.n_params)
    s = t.support_min if shift == "auto" else int(shift)
    if s < 0:
        raise ValueError("shift must be non-negative")
    lam = sample_mean(t) - s
    if lam <= 0:
        raise StatisticalPreconditionError(f"shift exceeds mean (shift={s}, mean={lam + s:.6g})")
    return evaluate(PoissonParams(lam, s), t, convention)


def hyper_poisson_moment_start(t: FrequencyTable) -> HyperPoissonParams:
    """Method-of-moments point from mean, variance and the zero frequency.

    From P_{x+1} (b + x) = a P_x one gets ``a = mu + (b - 1)(1 - P0)`` and
    ``(b - 1) mu + E[X^2] = a (mu + 1)``, solved for (a, b) with the
    observed P0.  Falls back to the Poisson point (a = mu, b = 1) when the
    solution is degenerate or outside the parameter space.
    """
    mu = sample_mean(t)
    var = sample_variance(t) if t.total() > 1 else 0.0
    p0 = t[0] / t.total()
    denom = mu - (mu + 1.0) * (1.0 - p0)
    if abs(denom) > 1e-12:
        bm1 = (mu - var) / denom
        a = mu + bm1 * (1.0 - p0)
        b = 1.0 + bm1
        if a >= 0 and b > B_MIN and math.isfinite(a) and math.isfinite(b):
            return HyperPoissonParams(a, b)
    return HyperPoissonParams(max(mu, 0.0), 1.0)


def fit_hyper_poisson(t: FrequencyTable, convention=ExpectedConvention.TAIL_POOL) -> FitResult:
    """Minimum-chi-square hyper-Poisson fit.

    Starts from :func:`hyper_poisson_moment_start` and runs a bounded
    Nelder-Mead search (a >= 0, b > 0) until the simplex shrinks below
    1e-6.  The result is never worse than the starting point.
    """
    convention = _convention(convention)
    _check_df(t, HyperPoissonParams.n_params)
    start = hyper_poisson_moment_start(t)

    def objective(v):
        a, b = float(v[0]), float(v[1])
        if not (a >= 0 and b > 0):
            return math.inf
        try:
            exp = expected_frequencies(HyperPoissonParams(a, b), t, convention)
            return pearson_chi2(t, exp, 2)[0]
        except (FitError, StatisticalPreconditionError, OverflowError, ZeroDivisionError):
            return math.inf

    start_chi2 = objective([start.a, start.b])
    res = minimize(
        objective,
        x0=[start.a, start.b],
        method="Nelder-Mead",
        bounds=[(0.0, None), (B_MIN, None)],
        options={"xatol": SIMPLEX_XATOL, "fatol": 1e-12, "maxiter": 20_000, "maxfev": 40_000},
    )
    notes = []
    a, b = float(res.x[0]), float(res.x[1])
    if a < 0 or b < B_MIN:
        warnings.warn("optimizer left the parameter bounds; clamping", RuntimeWarning)
        notes.append("clamped to bounds")
        a, b = max(a, 0.0), max(b, B_MIN)
    best = HyperPoissonParams(a, b)
    if not objective([a, b]) <= start_chi2:
        best = start
        notes.append("optimizer did not improve on the moment start")
    if not math.isfinite(objective([best.a, best.b])):
        raise FitError("non-finite chi-square objective at the hyper-Poisson optimum")
    return evaluate(best, t, convention, start=start, start_chi2=start_chi2, notes=tuple(notes))


VAI_REFERENCE = {
    "components": {"params": PoissonParams(3.50, 2), "chi2": 4.39, "df": 7, "p": 0.73},
    "connections": {"params": HyperPoissonParams(10.73, 7.50), "chi2": 18.86, "df": 12, "p": 0.09},
}


def select_convention(deviation: Dict[ExpectedConvention, float], tol: float = 0.01):
    """Smallest deviation wins; ties within ``tol`` go to the first in priority order."""
    best = min(deviation.values())
    tied = tuple(c for c in _PRIORITY if c in deviation and deviation[c] - best <= tol)
    return tied[0], tied


@dataclass(frozen=True)
class CalibrationRecord:
    """Chi-square under each convention at the published parameters."""

    selected: ExpectedConvention
    chi2: Dict[ExpectedConvention, Tuple[float, float]]
    deviation: Dict[ExpectedConvention, float]
    targets: Tuple[float, float]
    tied: Tuple[ExpectedConvention, ...] = ()
    tolerance: float = 0.5
    passed: bool = field(default=False)


def calibrate_convention(
    components: FrequencyTable,
    connections: FrequencyTable,
    reference=VAI_REFERENCE,
    tolerance: float = 0.5,
) -> CalibrationRecord:
    """Pick the convention that best reproduces the reference chi-square values.

    Each convention is scored by the total absolute deviation from the
    reference chi-squares of both fits.  Conventions within 0.01 of the
    best are reported as tied and the first in fixed priority order
    (truncate, tailpool, renormalize) wins.
    """
    comp_ref, conn_ref = reference["components"], reference["connections"]
    targets = (comp_ref["chi2"], conn_ref["chi2"])
    chi2 = {}
    deviation = {}
    for conv in _PRIORITY:
        values = []
        for table, ref in ((components, comp_ref), (connections, conn_ref)):
            try:
                values.append(evaluate(ref["params"], table, conv).chi2)
            except FitError:
                values.append(math.inf)
        chi2[conv] = tuple(values)
        deviation[conv] = abs(values[0] - targets[0]) + abs(values[1] - targets[1])
    selected, tied = select_convention(deviation)
    passed = all(abs(v - t) <= tolerance for v, t in zip(chi2[selected], targets))
    return CalibrationRecord(
        selected=selected,
        chi2=chi2,
        deviation=deviation,
        targets=targets,
        tied=tied if len(tied) > 1 else (),
        tolerance=tolerance,
        passed=passed,
    )
