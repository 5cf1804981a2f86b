"""Scenario simulation, group rates, NPMI vocabularies, statistics, OLS."""

from .npmi import TierRow, npmi_scores, npmi_vocab, role_tier_analysis
from .regression import (
    OLSResult,
    RegressionSpec,
    design_matrix,
    ols,
    ols_regression,
    significance_stars,
)
from .reports import FORMATS, emit_report, group_rate_dicts
from .scenarios import (
    MODES,
    GroupRateRow,
    Scenario,
    compute_threshold,
    group_rates,
    group_rates_multi,
    surviving_ids,
)
from .stats import MannWhitneyResult, bonferroni, mannwhitney, pearson, spearman

__all__ = [
    "FORMATS",
    "GroupRateRow",
    "MODES",
    "MannWhitneyResult",
    "OLSResult",
    "RegressionSpec",
    "Scenario",
    "TierRow",
    "bonferroni",
    "compute_threshold",
    "design_matrix",
    "emit_report",
    "group_rate_dicts",
    "group_rates",
    "group_rates_multi",
    "mannwhitney",
    "npmi_scores",
    "npmi_vocab",
    "ols",
    "ols_regression",
    "pearson",
    "role_tier_analysis",
    "significance_stars",
    "spearman",
    "surviving_ids",
]
