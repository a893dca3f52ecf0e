"""Frequency tables over integer values and the runs test for uniformity."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .exceptions import StatisticalPreconditionError, TiedFrequencyError

__all__ = [
    "FrequencyTable",
    "RunTestResult",
    "histogram",
    "sample_mean",
    "sample_variance",
    "run_test",
    "Z_CRITICAL",
]

Z_CRITICAL = 1.96


@dataclass(frozen=True)
class FrequencyTable:
    """Counts over the contiguous support ``support_min .. support_max``."""

    support_min: int
    counts: Tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if not counts:
            raise ValueError("frequency table needs at least one class")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        if counts[0] == 0 or counts[-1] == 0:
            raise ValueError("support must be trimmed to the observed range")

    @classmethod
    def from_mapping(cls, mapping) -> "FrequencyTable":
        """Build from ``{value: count}``; zero-count ends are trimmed."""
        observed = {int(k): int(v) for k, v in mapping.items() if v}
        if not observed:
            raise ValueError("no observations")
        lo, hi = min(observed), max(observed)
        return cls(lo, tuple(observed.get(x, 0) for x in range(lo, hi + 1)))

    @property
    def support_max(self) -> int:
        return self.support_min + len(self.counts) - 1

    @property
    def values(self) -> List[int]:
        return list(range(self.support_min, self.support_max + 1))

    def total(self) -> int:
        return sum(self.counts)

    def items(self):
        return zip(self.values, self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, value: int) -> int:
        if self.support_min <= value <= self.support_max:
            return self.counts[value - self.support_min]
        return 0

    def as_dict(self):
        return dict(self.items())


def histogram(values: Iterable[int]) -> FrequencyTable:
    """Frequency table of integer ``values`` spanning their observed range."""
    tally = Counter(int(v) for v in values)
    if not tally:
        raise ValueError("cannot build a histogram from no values")
    return FrequencyTable.from_mapping(tally)


def sample_mean(t: FrequencyTable) -> float:
    n = t.total()
    if n < 1:
        raise StatisticalPreconditionError("mean needs at least one observation")
    return sum(x * f for x, f in t.items()) / n


def sample_variance(t: FrequencyTable) -> float:
    """Population-style variance ``sum f (x - mean)^2 / N``."""
    n = t.total()
    if n < 2:
        raise StatisticalPreconditionError("variance needs at least two observations")
    mu = sample_mean(t)
    return sum(f * (x - mu) ** 2 for x, f in t.items()) / n


@dataclass(frozen=True)
class RunTestResult:
    inventory: int
    range: int
    expected: Fraction
    n: int
    n1: int
    n2: int
    runs: int
    expected_runs: float
    sigma_r: float
    z: float
    reject_uniformity: bool
    excluded: Tuple[int, ...] = ()

    @property
    def decision(self) -> str:
        return "REJECT" if self.reject_uniformity else "RETAIN"


def _classify(counts: Sequence[int], values: Sequence[int], expected: Fraction, tie_policy: str):
    signs = []
    excluded = []
    for v, c in zip(values, counts):
        if c == expected:
            if tie_policy == "exclude":
                excluded.append(v)
                continue
            raise TiedFrequencyError(v)
        signs.append(c > expected)
    return signs, tuple(excluded)


def run_test(t, tie_policy: str = "error") -> RunTestResult:
    """Runs test of the hypothesis that frequencies are uniform over the support.

    Every class, zero-count interior classes included, is marked as below
    or above the uniform expectation ``E = I / (R + 1)``; ``r`` is the number
    of maximal blocks of equal marks and

        z = (|r - E(r)| - 0.5) / sigma_r,
        E(r) = 1 + 2 n1 n2 / n,
        sigma_r^2 = 2 n1 n2 (2 n1 n2 - n) / (n^2 (n - 1)).

    Uniformity is rejected when ``z >= 1.96``.  A class whose count equals
    E exactly has no mark; this raises :class:`TiedFrequencyError` unless
    ``tie_policy="exclude"``, which drops such classes from the sequence.

    ``t`` may also be a plain sequence of counts (indexed from 0), which
    need not be trimmed.
    """
    if tie_policy not in ("error", "exclude"):
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    if isinstance(t, FrequencyTable):
        counts, values = t.counts, t.values
    else:
        counts = tuple(int(c) for c in t)
        values = list(range(len(counts)))
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
    if len(counts) < 2:
        raise StatisticalPreconditionError("runs test needs a support of at least two values")

    inventory = sum(counts)
    if inventory < 1:
        raise StatisticalPreconditionError("runs test needs at least one observation")
    rng = len(counts) - 1
    expected = Fraction(inventory, rng + 1)
    signs, excluded = _classify(counts, values, expected, tie_policy)
    n = len(signs)
    if n < 2:
        raise StatisticalPreconditionError("fewer than two classes left after excluding ties")
    n2 = sum(signs)
    n1 = n - n2
    runs = 1 + sum(a != b for a, b in zip(signs, signs[1:]))

    prod = 2 * n1 * n2
    expected_runs = 1 + prod / n
    sigma_r = math.sqrt(max(prod * (prod - n), 0) / (n * n * (n - 1)))
    numerator = abs(runs - expected_runs) - 0.5
    if sigma_r > 0:
        z = numerator / sigma_r
    elif numerator == 0:
        z = 0.0
    else:
        z = math.copysign(math.inf, numerator)
    return RunTestResult(
        inventory=inventory,
        range=rng,
        expected=expected,
        n=n,
        n1=n1,
        n2=n2,
        runs=runs,
        expected_runs=expected_runs,
        sigma_r=sigma_r,
        z=z,
        reject_uniformity=z >= Z_CRITICAL,
        excluded=excluded,
    )
