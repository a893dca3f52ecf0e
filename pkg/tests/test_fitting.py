import math

import numpy as np
import pytest
from scipy import stats

from scriptometrics.distributions import HyperPoissonParams, PoissonParams, hyper_poisson_pmfs
from scriptometrics.exceptions import FitError, OverparameterizedError, StatisticalPreconditionError
from scriptometrics.fitting import (
    ExpectedConvention as EC,
    calibrate_convention,
    evaluate,
    expected_frequencies,
    fit_hyper_poisson,
    fit_poisson,
    hyper_poisson_moment_start,
    pearson_chi2,
    select_convention,
)
from scriptometrics.frequency import FrequencyTable, histogram

from conftest import TABLE3_COMPONENTS, TABLE3_CONNECTIONS

# 229 * P_x for HyperPoisson(10.73, 7.5), x = 0..14, from a 50-digit mpmath evaluation.
HP_EXPECTED_TRUNCATE = [
    14.305110032321524, 20.465844086241326, 25.835118475925817, 29.18008644701937,
    29.8192692930017, 27.822674740339846, 23.882983997107722, 18.98254950288636,
    14.047086632135906, 9.724209004052792, 6.323682582635543, 3.877320806381679,
    2.2488460677013737, 1.237441964432602, 0.6476952330908204,
]
HP_LAST_CLASS_TAILPOOL = 1.247776367816437

PAPER_POISSON = PoissonParams(3.50, 2)
PAPER_HP = HyperPoissonParams(10.73, 7.50)


def test_expected_truncate_poisson():
    e = expected_frequencies(PAPER_POISSON, TABLE3_COMPONENTS, EC.TRUNCATE)
    assert e[0] == pytest.approx(229 * math.exp(-3.5), rel=1e-12)
    assert e[0] == pytest.approx(6.915, abs=5e-4)


def test_expected_hyper_poisson_oracle():
    e = expected_frequencies(PAPER_HP, TABLE3_CONNECTIONS, "truncate")
    assert e == pytest.approx(HP_EXPECTED_TRUNCATE, rel=1e-12)
    pooled = expected_frequencies(PAPER_HP, TABLE3_CONNECTIONS, "tailpool")
    assert pooled[:-1] == pytest.approx(HP_EXPECTED_TRUNCATE[:-1], rel=1e-12)
    assert pooled[-1] == pytest.approx(HP_LAST_CLASS_TAILPOOL, rel=1e-10)
    assert sum(pooled) == pytest.approx(229, rel=1e-12)


@pytest.mark.parametrize("params", [PAPER_POISSON, PAPER_HP, PoissonParams(9.0)])
def test_renormalize_sums_to_total(params):
    t = TABLE3_COMPONENTS
    assert sum(expected_frequencies(params, t, EC.RENORMALIZE)) == pytest.approx(t.total(), rel=1e-14)


def test_truncate_zero_expected():
    with pytest.raises(FitError, match="zero expected frequency"):
        expected_frequencies(PoissonParams(2.0, 3), TABLE3_COMPONENTS, EC.TRUNCATE)


def test_pearson_chi2():
    t = FrequencyTable(0, (3, 5, 2, 7))
    chi2, df, p = pearson_chi2(t, [3, 5, 2, 7], 1)
    assert (chi2, df, p) == (0, 2, 1)
    chi2, _, _ = pearson_chi2(t, [4, 4, 4, 5], 0)
    assert chi2 == pytest.approx(1 / 4 + 1 / 4 + 4 / 4 + 4 / 5)
    with pytest.raises(OverparameterizedError, match="overparameterized"):
        pearson_chi2(FrequencyTable(0, (3, 2)), [3, 2], 1)
    with pytest.raises(ValueError):
        pearson_chi2(t, [1, 2], 0)


def test_paper_parameters_tailpool():
    comp = evaluate(PAPER_POISSON, TABLE3_COMPONENTS, EC.TAIL_POOL)
    conn = evaluate(PAPER_HP, TABLE3_CONNECTIONS, EC.TAIL_POOL)
    assert comp.df == 7 and conn.df == 12
    assert comp.chi2 == pytest.approx(4.39, abs=0.5)
    assert conn.chi2 == pytest.approx(18.86, abs=0.5)


def test_calibration(components_table, connections_table):
    cal = calibrate_convention(components_table, connections_table)
    assert cal.selected is EC.TAIL_POOL and cal.passed and cal.tied == ()
    assert set(cal.chi2) == set(EC)


def test_select_convention_tie_break():
    selected, tied = select_convention({EC.TAIL_POOL: 0.2, EC.RENORMALIZE: 0.205, EC.TRUNCATE: 3.0})
    assert selected is EC.TAIL_POOL and tied == (EC.TAIL_POOL, EC.RENORMALIZE)
    selected, tied = select_convention({EC.TAIL_POOL: 1.0, EC.RENORMALIZE: 1.0, EC.TRUNCATE: 1.005})
    assert selected is EC.TRUNCATE and len(tied) == 3
    assert select_convention({EC.RENORMALIZE: 0.1, EC.TRUNCATE: 0.5, EC.TAIL_POOL: 0.5})[0] is EC.RENORMALIZE


def test_calibration_failure_is_reported(components_table, connections_table):
    ref = {
        "components": {"params": PAPER_POISSON, "chi2": 40.0},
        "connections": {"params": PAPER_HP, "chi2": 18.86},
    }
    cal = calibrate_convention(components_table, connections_table, ref)
    assert not cal.passed
    assert all(math.isfinite(v) for pair in cal.chi2.values() for v in pair)


def test_fit_poisson_vai(components_table):
    r = fit_poisson(components_table)
    assert r.params.shift == 2
    assert r.params.lam == pytest.approx(1250 / 229 - 2)
    assert 3.40 <= r.params.lam <= 3.55
    assert r.df == 7 and r.chi2 == pytest.approx(4.39, abs=0.5)


def test_fit_poisson_errors():
    with pytest.raises(OverparameterizedError):
        fit_poisson(FrequencyTable(0, (12,)))
    with pytest.raises(StatisticalPreconditionError, match="shift exceeds mean"):
        fit_poisson(TABLE3_COMPONENTS, shift=6)


def test_fit_poisson_synthetic():
    rng = np.random.default_rng(20240)
    t = histogram(rng.poisson(4.0, 10_000).tolist())
    r = fit_poisson(t, shift=0)
    assert abs(r.params.lam - 4.0) < 0.1
    assert r.p_value > 0.01


def test_moment_start(connections_table):
    s = hyper_poisson_moment_start(connections_table)
    assert s.a == pytest.approx(9.78, abs=0.05) and s.b == pytest.approx(6.52, abs=0.05)


def test_fit_hyper_poisson_vai(connections_table):
    r = fit_hyper_poisson(connections_table)
    assert r.df == 12
    assert r.chi2 <= 18.86 + 0.01
    assert r.chi2 <= r.start_chi2
    again = fit_hyper_poisson(connections_table)
    assert again.params == r.params and again.chi2 == r.chi2


def _sample_hyper_poisson(params, n, rng):
    cdf = np.cumsum(hyper_poisson_pmfs(params, 200))
    return np.searchsorted(cdf, rng.random(n) * cdf[-1]).tolist()


def test_fit_hyper_poisson_recovers_parameters():
    rng = np.random.default_rng(7)
    t = histogram(_sample_hyper_poisson(PAPER_HP, 100_000, rng))
    r = fit_hyper_poisson(t)
    assert abs(r.params.a - 10.73) < 0.3
    assert abs(r.params.b - 7.50) < 0.3


def test_fit_hyper_poisson_on_poisson_shape():
    probs = stats.poisson.pmf(np.arange(13), 3.0)
    t = FrequencyTable.from_mapping({x: int(round(1000 * p)) for x, p in enumerate(probs)})
    hp = fit_hyper_poisson(t)
    po = fit_poisson(t, shift=0)
    assert hp.params.b == pytest.approx(1.0, abs=0.15)
    assert abs(hp.chi2 - po.chi2) < 0.1


def test_fit_hyper_poisson_overparameterized():
    with pytest.raises(OverparameterizedError):
        fit_hyper_poisson(FrequencyTable(0, (5, 3)))


@pytest.mark.parametrize("conv", list(EC))
def test_chi2_nonnegative(conv, connections_table):
    r = evaluate(PAPER_HP, connections_table, conv)
    assert r.chi2 >= 0
