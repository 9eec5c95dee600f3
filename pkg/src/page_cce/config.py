"""
Configuration models for page_cce.

Every section is a pydantic model with validated ranges, so a resolved
configuration can be dumped into a run manifest and loaded back verbatim.

Resolution order (highest first): explicit overrides (CLI flags), a JSON config
file, ``PAGE_CCE_*`` environment variables, then the defaults below.
"""
import json
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from .exceptions import ConfigurationError


class EncoderConfig(BaseModel):
    """Utterance encoder: base vectors, projection, emotion fusion, attention, residual MLP."""
    d_u: int = Field(default=300, ge=1, description="Utterance representation dimension")
    d_e: int = Field(default=100, ge=1, description="Emotion embedding dimension")
    heads: int = Field(default=6, ge=1, description="Number of attention heads; must divide d_u")
    mode: Literal["hash", "precomputed"] = Field(default="hash", description="Base encoder")
    buckets: int = Field(default=16384, ge=1, description="Hash-embedding bucket count")
    base_dim: int = Field(
        default=100,
        ge=1,
        description="Base vector dimension (hash embedding size, or precomputed vector length)",
    )
    mlp_hidden: int = Field(default=300, ge=1, description="Hidden size of the residual MLP")
    learned_qkv: bool = Field(default=False, description="Use learned Q/K/V projections in attention")

    @model_validator(mode="after")
    def _heads_divide_dim(self) -> "EncoderConfig":
        if self.d_u % self.heads != 0:
            raise ValueError(f"d_u ({self.d_u}) must be divisible by heads ({self.heads})")
        return self


class GraphConfig(BaseModel):
    """Position-aware graph and R-GCN stack."""
    window: int = Field(default=3, ge=1, description="Relation clipping window w")
    layers: int = Field(default=1, ge=1, description="Number of stacked R-GCN layers")
    c_mode: Literal["constant", "degree"] = Field(
        default="constant", description="Neighbor normalization: fixed constant or |N_t^r|"
    )
    c_value: float = Field(default=2.0, gt=0, description="Normalization constant c_{t,r} in constant mode")


class ClassifierConfig(BaseModel):
    """Pair classifier head and decision rule."""
    hidden: int = Field(default=300, ge=1, description="Hidden size of the pair MLP")
    threshold: float = Field(default=0.5, gt=0, lt=1, description="Probability above which a pair is causal")
    pos_weight: float = Field(default=1.0, gt=0, description="Weight on the positive term of the loss")


class OptimizerConfig(BaseModel):
    mode: Literal["adam", "sgd"] = Field(default="adam", description="Update rule")
    lr: float = Field(default=1e-3, gt=0, description="Learning rate")
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)


class TrainConfig(BaseModel):
    epochs: int = Field(default=30, ge=0, description="Maximum training epochs")
    batch_size: int = Field(default=4, ge=1, description="Conversations per optimizer step")
    seed: int = Field(default=0, ge=0, description="Seed for initialization, shuffling and splits")
    patience: Optional[int] = Field(
        default=10, ge=1, description="Epochs without validation Macro F1 gain before stopping (None: never)"
    )
    val_fraction: float = Field(
        default=0.15, ge=0, lt=1, description="Share of conversations held out when no validation set is given"
    )
    ablate_pag: bool = Field(default=False, description="Bypass the position-aware graph stage (w/o PaG)")


class PageConfig(BaseModel):
    """Complete, resolved configuration of one run."""
    encoder: EncoderConfig = Field(default_factory=EncoderConfig)
    graph: GraphConfig = Field(default_factory=GraphConfig)
    classifier: ClassifierConfig = Field(default_factory=ClassifierConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)


# Environment variables consulted by resolve_config, mapped to dotted config keys.
ENV_OVERRIDES: Dict[str, str] = {
    "PAGE_CCE_SEED": "train.seed",
    "PAGE_CCE_EPOCHS": "train.epochs",
    "PAGE_CCE_WINDOW": "graph.window",
    "PAGE_CCE_LR": "optimizer.lr",
}


def _merge(base: Dict[str, Any], dotted: Mapping[str, Any]) -> Dict[str, Any]:
    for key, value in dotted.items():
        if value is None:
            continue
        section, _, name = key.partition(".")
        if not name:
            raise ConfigurationError(f"Override key must look like 'section.field', got '{key}'")
        base.setdefault(section, {})[name] = value
    return base


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must contain a JSON object")
    return data


def resolve_config(
    overrides: Optional[Mapping[str, Any]] = None,
    config_path: Optional[Union[str, Path]] = None,
    environ: Optional[Mapping[str, str]] = None,
    base: Optional[PageConfig] = None,
) -> PageConfig:
    """Build a PageConfig from defaults (or ``base``), environment, a config file and overrides."""
    environ = os.environ if environ is None else environ
    data: Dict[str, Any] = base.model_dump() if base is not None else {}
    _merge(data, {key: environ[var] for var, key in ENV_OVERRIDES.items() if var in environ})
    if config_path:
        for section, values in load_config_file(config_path).items():
            if not isinstance(values, dict):
                raise ConfigurationError(f"Config section '{section}' must be an object")
            data.setdefault(section, {}).update(values)
    _merge(data, overrides or {})
    try:
        return PageConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e
