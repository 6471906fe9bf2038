"""Configuration loader for vertex-ring.

Built-in defaults, then command-line flags, then an optional `config.toml`
(the file wins). Everything is validated here, before any computation, and
frozen into a `Settings` object the commands import.
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from src.freefield.algebra import FreeFieldAlgebra, Propagator, PropagatorError, standard_propagator
from src.singfun.errors import LiteralSyntaxError, SpecMismatchError
from src.singfun.parsing import parse_function
from src.singfun.spaces import SingularitySpec, SpacetimeSpec

PROJECT_ROOT = Path(__file__).resolve().parent.parent
CONFIG_PATH = PROJECT_ROOT / "config.toml"

BUILTIN_PROPAGATORS = ("x^-2", "x^-3", "1/q")
OUTPUT_FORMATS = ("text", "structured")


class ConfigError(ValueError):
    """Invalid configuration; raised before any computation starts."""


@dataclass(frozen=True)
class AlgebraSettings:
    dim: int = 1
    signature: str | None = None
    propagator: str | None = None

    @property
    def spacetime(self) -> SpacetimeSpec:
        if self.signature is None:
            return SpacetimeSpec(self.dim)
        return SpacetimeSpec.from_signature(self.signature)


@dataclass(frozen=True)
class RunSettings:
    cutoff: int = 5
    degree: int = 3
    seed: int = 0


@dataclass(frozen=True)
class OutputSettings:
    format: str = "text"
    log_dir: Path | None = None

    @property
    def structured(self) -> bool:
        return self.format == "structured"


@dataclass(frozen=True)
class ParallelismSettings:
    workers: int = 4


@dataclass(frozen=True)
class Settings:
    algebra: AlgebraSettings = field(default_factory=AlgebraSettings)
    run: RunSettings = field(default_factory=RunSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    parallelism: ParallelismSettings = field(default_factory=ParallelismSettings)
    project_root: Path = field(default=PROJECT_ROOT)


# Flag name -> (section, key) in config.toml.
FLAG_KEYS: dict[str, tuple[str, str]] = {
    "dim": ("algebra", "dim"),
    "signature": ("algebra", "signature"),
    "propagator": ("algebra", "propagator"),
    "cutoff": ("run", "cutoff"),
    "degree": ("run", "degree"),
    "seed": ("run", "seed"),
    "format": ("output", "format"),
    "log_dir": ("output", "log_dir"),
    "workers": ("parallelism", "workers"),
}


def _read_file(config_path: Path) -> dict:
    if not config_path.exists():
        raise ConfigError(f"config file not found at {config_path}")
    try:
        with config_path.open("rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{config_path}: {exc}") from exc


def _merge(overrides: Mapping[str, Any] | None, raw: Mapping[str, Any]) -> dict[str, dict[str, Any]]:
    merged: dict[str, dict[str, Any]] = {section: {} for section, _ in FLAG_KEYS.values()}
    for flag, value in (overrides or {}).items():
        if flag not in FLAG_KEYS:
            raise ConfigError(f"unknown setting {flag!r}")
        if value is not None:
            section, key = FLAG_KEYS[flag]
            merged[section][key] = value
    for section, values in raw.items():
        if section not in merged or not isinstance(values, Mapping):
            raise ConfigError(f"unknown config section [{section}]")
        for key, value in values.items():
            if (section, key) not in FLAG_KEYS.values():
                raise ConfigError(f"unknown config key {section}.{key}")
            merged[section][key] = value
    return merged


def _int(section: Mapping[str, Any], key: str, default: int, minimum: int) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            value = int(str(value))
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}")
    return value


def _load_algebra(section: Mapping[str, Any]) -> AlgebraSettings:
    dim = _int(section, "dim", 1, 1)
    signature = section.get("signature")
    if signature is not None:
        signature = str(signature).strip()
        if set(signature) - {"+", "-"}:
            raise ConfigError(f"signature may only contain '+' and '-', got {signature!r}")
        if len(signature) != dim:
            raise ConfigError(f"signature {signature!r} has length {len(signature)}, expected {dim}")
    propagator = section.get("propagator")
    settings = AlgebraSettings(dim, signature, None if propagator is None else str(propagator))
    resolve_propagator(settings)
    return settings


def load_settings(
    config_path: Path | str | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> Settings:
    """Validate defaults + overrides + file into Settings; ConfigError on any bad field."""
    raw = _read_file(Path(config_path)) if config_path is not None else {}
    merged = _merge(overrides, raw)

    algebra = _load_algebra(merged["algebra"])

    run_raw = merged["run"]
    run = RunSettings(
        cutoff=_int(run_raw, "cutoff", 5, 1),
        degree=_int(run_raw, "degree", 3, 0),
        seed=_int(run_raw, "seed", 0, 0),
    )

    out_raw = merged["output"]
    fmt = str(out_raw.get("format", "text"))
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {fmt!r}")
    log_dir = out_raw.get("log_dir")
    if log_dir is not None:
        log_dir = Path(log_dir)
        if not log_dir.is_absolute():
            log_dir = PROJECT_ROOT / log_dir
    output = OutputSettings(format=fmt, log_dir=log_dir)

    parallelism = ParallelismSettings(workers=_int(merged["parallelism"], "workers", 4, 1))
    return Settings(algebra=algebra, run=run, output=output, parallelism=parallelism)


def resolve_propagator(settings: AlgebraSettings) -> Propagator:
    try:
        spacetime = settings.spacetime
        selector = settings.propagator
        if selector is None or selector in BUILTIN_PROPAGATORS:
            return standard_propagator(spacetime, selector)
        delta = parse_function(selector, spacetime, SingularitySpec(), num_points=1)
        return Propagator(delta)
    except (PropagatorError, LiteralSyntaxError, SpecMismatchError) as exc:
        raise ConfigError(f"propagator {settings.propagator!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_algebra(settings: Settings) -> FreeFieldAlgebra:
    algebra = settings.algebra
    return FreeFieldAlgebra(algebra.spacetime, SingularitySpec(), resolve_propagator(algebra))
