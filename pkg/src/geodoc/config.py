"""Pipeline configuration: resource paths and tuning knobs.

Loadable from a JSON file (documented keys below); every key has a default
pointing at the fixtures shipped inside the package.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from importlib import resources as importlib_resources
from pathlib import Path

DATA_ROOT_ENV = "GEODOC_DATA"


def _pkg_path(*parts: str) -> str:
    return str(importlib_resources.files("geodoc").joinpath("resources", *parts))


@dataclass
class PipelineConfig:
    rules_dir: str = field(default_factory=lambda: _pkg_path("rules"))
    gazetteer_path: str = field(default_factory=lambda: _pkg_path("gazetteer", "fixture.tsv"))
    skos_path: str = field(default_factory=lambda: _pkg_path("skos", "thesaurus.xml"))
    default_language: str = "en"
    context_weight: float = 0.7
    importance_weight: float = 0.3
    broader_depth: int = 2
    languages: tuple[str, ...] = ("fr", "en")

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "languages" in obj:
            obj["languages"] = tuple(obj["languages"])
        return cls(**obj)


def data_root(override: str | None = None) -> Path:
    return Path(override or os.environ.get(DATA_ROOT_ENV, "./geodoc-data"))
