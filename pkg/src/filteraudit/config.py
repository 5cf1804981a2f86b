"""TOML configuration: scenario percentiles and per-filter score cutoffs.

Shipped defaults live in ``data/defaults.toml``; a user file overlays
them key by key.  ``load_config()`` without a path honors the
``FILTERAUDIT_CONFIG`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

ENV_VAR = "FILTERAUDIT_CONFIG"


@dataclass(frozen=True)
class FilterCutoff:
    """Fixed-threshold scenario pair for one filter.

    ``upper`` is always applied as ``score >= upper`` and ``lower`` as
    ``score < lower``.  Which side retains and which removes depends on
    the filter's direction: for lower-is-better scores (perplexity) the
    big-threshold side is the removal scenario.
    """

    upper: float
    lower: float
    lower_better: bool = False

    def retains(self, score: float) -> bool:
        if self.lower_better:
            return score < self.lower
        return score >= self.upper

    def removes(self, score: float) -> bool:
        if self.lower_better:
            return score >= self.upper
        return score < self.lower


@dataclass(frozen=True)
class Config:
    retain_percentile: float = 0.10
    remove_percentile: float = 0.10
    min_country_count: int = 500
    min_role_count: int = 1000
    bonferroni_comparisons: int = 20
    cutoffs: Dict[str, FilterCutoff] = field(default_factory=dict)


def _parse(data: dict, base: Optional[Config] = None) -> Config:
    scenario = data.get("scenario", {})
    audit = data.get("audit", {})
    cutoffs = dict(base.cutoffs) if base else {}
    for name, spec in data.get("cutoffs", {}).items():
        if "upper" not in spec or "lower" not in spec:
            raise ValueError(f'cutoff table "{name}" needs "upper" and "lower"')
        cutoffs[name] = FilterCutoff(
            upper=float(spec["upper"]),
            lower=float(spec["lower"]),
            lower_better=bool(spec.get("lower_better", False)),
        )

    def pick(section, key, fallback):
        return section[key] if key in section else fallback

    base = base or Config()
    return Config(
        retain_percentile=float(pick(scenario, "retain_percentile", base.retain_percentile)),
        remove_percentile=float(pick(scenario, "remove_percentile", base.remove_percentile)),
        min_country_count=int(pick(audit, "min_country_count", base.min_country_count)),
        min_role_count=int(pick(audit, "min_role_count", base.min_role_count)),
        bonferroni_comparisons=int(
            pick(audit, "bonferroni_comparisons", base.bonferroni_comparisons)
        ),
        cutoffs=cutoffs,
    )


def default_config() -> Config:
    raw = resources.files("filteraudit.data").joinpath("defaults.toml").read_bytes()
    return _parse(tomllib.loads(raw.decode("utf-8")))


def load_config(path: Optional[str] = None) -> Config:
    """Shipped defaults, overlaid by the given (or env-selected) file."""
    config = default_config()
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        return config
    text = Path(path).read_text("utf-8")
    return _parse(tomllib.loads(text), base=config)
