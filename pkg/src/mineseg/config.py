"""Pipeline configuration: nested dataclasses loaded from one YAML document.

Example::

    seed: 7
    workers: 2
    paths: {input: data/images, gt: data/gt, output: out}
    enhance: {gamma: 2.0}
    fusion: {keep_unmatched: true, struct_elem: 3}
    eval: {iou_threshold: 0.5}
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from .dataset import DegradeConfig, FilterConfig
from .enhance import EnhanceConfig
from .evaluation import EvalConfig
from .fusion.fuse import FusionConfig
from .losses import LossConfig


@dataclass(frozen=True)
class Paths:
    input: str | None = None
    output: str | None = None
    gt: str | None = None
    pred_a: str | None = None
    pred_b: str | None = None


@dataclass(frozen=True)
class PipelineConfig:
    enhance: EnhanceConfig = field(default_factory=EnhanceConfig)
    degrade: DegradeConfig = field(default_factory=DegradeConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    loss: LossConfig = field(default_factory=LossConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    paths: Paths = field(default_factory=Paths)
    seed: int = 0
    workers: int = 1
    run_filter: bool = False
    degrade_inputs: bool = False
    mock_epsilon: float = 0.2
    ablation: bool = True

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.mock_epsilon <= 1:
            raise ValueError("mock_epsilon must be in [0, 1]")

    def seeded(self) -> "PipelineConfig":
        """Copy with the global seed pushed into every stochastic component."""
        return replace(self, degrade=replace(self.degrade, seed=self.seed),
                       fusion=replace(self.fusion, seed=self.seed))


def _build(cls, data: dict | None):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ValueError(f"{cls.__name__}: expected a mapping, got {type(data).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ValueError(f"{cls.__name__}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        sub = _NESTED.get((cls, name))
        if sub is not None:
            value = _build(sub, value)
        elif isinstance(value, list):
            value = tuple(value)
        kwargs[name] = value
    return cls(**kwargs)


_NESTED = {
    (PipelineConfig, "enhance"): EnhanceConfig,
    (PipelineConfig, "degrade"): DegradeConfig,
    (PipelineConfig, "filter"): FilterConfig,
    (PipelineConfig, "fusion"): FusionConfig,
    (PipelineConfig, "loss"): LossConfig,
    (PipelineConfig, "eval"): EvalConfig,
    (PipelineConfig, "paths"): Paths,
}


def config_from_dict(data: dict | None) -> PipelineConfig:
    return _build(PipelineConfig, data or {})


def load_config(path) -> PipelineConfig:
    doc = yaml.safe_load(Path(path).read_text())
    return config_from_dict(doc)


def _plain(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def config_to_dict(cfg) -> dict:
    return _plain(cfg)


def config_hash(cfg: PipelineConfig) -> str:
    blob = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def override(cfg: PipelineConfig, section: str | None = None, **values) -> PipelineConfig:
    """Replace keys that are not None, either top-level or inside ``section``."""
    values = {k: v for k, v in values.items() if v is not None}
    if not values:
        return cfg
    if section is None:
        return replace(cfg, **values)
    return replace(cfg, **{section: replace(getattr(cfg, section), **values)})
