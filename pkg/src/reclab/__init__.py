"""Conditional moments of upper record values and the regression identities
that characterize the exponential and Weibull(1/2) laws."""

from .characterize import (
    Classification,
    GridSpec,
    IdentityCase,
    IdentityId,
    ScanReport,
    Verdict,
    classify,
    errata_report,
    residual,
    scan,
)
from .condmom import Window, conditional_density, conditional_expectation, spacing_expectation
from .errors import (
    BudgetExceededError,
    DomainError,
    NumericalError,
    ParameterCapError,
    ReclabError,
    UsageError,
)
from .hazard import HazardModel, exponential, linear_quadratic, parse_model, weibull
from .report import parse_report, serialize_report
from .simrec import SimConfig, mc_conditional_expectation, mix64, sample_records, sample_records_naive

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError", "Classification", "DomainError", "GridSpec", "HazardModel",
    "IdentityCase", "IdentityId", "NumericalError", "ParameterCapError", "ReclabError",
    "ScanReport", "SimConfig", "UsageError", "Verdict", "Window", "classify",
    "conditional_density", "conditional_expectation", "errata_report", "exponential",
    "linear_quadratic", "mc_conditional_expectation", "mix64", "parse_model", "parse_report",
    "residual", "sample_records", "sample_records_naive", "scan", "serialize_report",
    "spacing_expectation", "weibull",
]
