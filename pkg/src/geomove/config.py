"""Configuration: one structured YAML file, deep-merged over the bundled
defaults.  Paths left null fall back to the data files shipped with the
package."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import yaml


def _deep_merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass(frozen=True)
class Config:
    raw: dict

    # -- sections ---------------------------------------------------------

    @property
    def paths(self) -> dict:
        return self.raw["paths"]

    @property
    def min_places(self) -> int:
        return int(self.raw["ingest"]["min_places"])

    @property
    def min_df(self) -> int:
        return int(self.raw["features"]["min_df"])

    @property
    def split_ratio(self) -> float:
        return float(self.raw["training"]["split_ratio"])

    @property
    def seed(self) -> int:
        return int(self.raw["training"]["seed"])

    @property
    def oversample(self) -> str:
        return self.raw["training"]["oversample"]

    @property
    def smote_k(self) -> int:
        return int(self.raw["training"]["smote_k"])

    @property
    def undecided_policy(self) -> str:
        return self.raw["training"]["undecided_policy"]

    @property
    def committee_k(self) -> int:
        return int(self.raw["committee"]["k"])

    @property
    def committee_rule(self) -> str:
        return self.raw["committee"]["rule"]

    @property
    def silver_threshold(self) -> float:
        return float(self.raw["committee"]["silver_threshold"])

    @property
    def negative_ceiling(self) -> float:
        return float(self.raw["committee"]["negative_ceiling"])

    @property
    def batch_size(self) -> int:
        return int(self.raw["loop"]["batch_size"])

    @property
    def lease_seconds(self) -> int:
        return int(self.raw["loop"]["lease_seconds"])

    @property
    def sweep_grid(self) -> list[dict]:
        return list(self.raw["sweep_grid"])

    @property
    def simulation_committee(self) -> list[dict]:
        return list(self.raw["simulation_committee"])

    # -- data-file resolution ----------------------------------------------

    def path_or_bundled(self, key: str, bundled_name: str) -> Any:
        configured = self.paths.get(key)
        if configured:
            return Path(configured)
        return resources.files("geomove.data").joinpath(bundled_name)

    def optional_path(self, key: str) -> Optional[Path]:
        configured = self.paths.get(key)
        return Path(configured) if configured else None


def load_config(path: Optional[str | Path] = None) -> Config:
    """Bundled defaults, deep-merged with the user file when given."""
    default_text = resources.files("geomove.data").joinpath("default_config.yaml").read_text("utf-8")
    raw = yaml.safe_load(default_text)
    if path is not None:
        user = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        raw = _deep_merge(raw, user)
    return Config(raw=raw)
