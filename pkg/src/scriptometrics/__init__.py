"""Complexity scoring of writing-system glyphs and count-model fitting."""

__version__ = "0.1.0"

from .distributions import (
    HyperPoissonParams,
    PoissonParams,
    chi2_sf,
    hyper_poisson_pmf,
    kummer_1f1_unit,
    poisson_pmf,
    rising_factorial,
)
from .estimators import ComplexityScorer, HyperPoissonFitter, PoissonFitter
from .exceptions import (
    DatasetError,
    FitError,
    NotationError,
    OverparameterizedError,
    ScriptometricsError,
    StatisticalPreconditionError,
    TiedFrequencyError,
)
from .fitting import (
    ExpectedConvention,
    FitResult,
    calibrate_convention,
    expected_frequencies,
    fit_hyper_poisson,
    fit_poisson,
    pearson_chi2,
)
from .frequency import FrequencyTable, RunTestResult, histogram, run_test, sample_mean, sample_variance
from .model import (
    ALTMANN2004_WEIGHTS,
    DEFAULT_WEIGHTS,
    ComponentKind,
    ConnectionKind,
    GlyphRecord,
    WeightScheme,
    check_consistency,
    complexity,
    component_count,
    connection_count,
)
from .notation import (
    Context,
    Dataset,
    dataset_consistency_report,
    format_expression,
    load_dataset,
    load_vai,
    parse_expression,
)
