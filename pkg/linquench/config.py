"""
Configuration management for linquench

A spec file is YAML with four sections:

    process:     which linear process (coefficient list, CSV, or counterexample schedule)
    experiment:  sizes, seeds, thresholds and grids for the experiments
    runtime:     thread count and chunk size (LINQUENCH_THREADS / LINQUENCH_CHUNK_SIZE win)
    logging:     level, format and optional log file

Unknown keys are rejected in every section.
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .artifacts import artifact_header
from .errors import ConfigError, InvalidSpecError, SpecFileNotFound


class ProcessConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["coefficients", "counterexample"] = "coefficients"
    innovation: Literal["iid_sign", "tower"] = "iid_sign"
    past_window: Optional[int] = Field(default=None, ge=0)

    # kind: coefficients
    coefficients: Optional[List[float]] = None
    coefficients_csv: Optional[str] = None
    tail_l2: float = Field(default=0.0, ge=0.0)

    # kind: counterexample
    K: Optional[int] = None
    V: Optional[List[int]] = None
    N: Optional[List[int]] = None
    kappa: Optional[List[float]] = None
    renormalize: bool = True
    scheduled: Optional[List[int]] = None


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    n: Optional[int] = Field(default=None, ge=1)  # default 10_000; N_k for failure
    M: int = Field(default=10_000, ge=1)
    R: int = Field(default=20, ge=1)
    n_max: int = Field(default=4096, ge=2)
    k: Optional[int] = None  # tower index; default: first scheduled
    threshold: Optional[float] = None  # default kappa_k / 2
    ks_threshold: float = 0.05
    sigma_ratio_band: float = 0.9
    slope_limit: float = 0.1
    growth_floor: float = 0.01
    grid: List[int] = Field(default_factory=lambda: [10, 100, 1_000, 10_000, 100_000])
    orbit_length: int = Field(default=100_000, ge=2)
    orbits: int = Field(default=10, ge=1)
    spread_limit: float = 0.05
    ecdf_svg: bool = False


class RuntimeConfig(BaseSettings):
    """
    Execution knobs. The thread count never changes a number; chunk_size
    fixes the per-chunk random streams, so it is part of the result.
    """
    model_config = SettingsConfigDict(env_prefix="LINQUENCH_", extra="forbid")

    threads: Optional[int] = Field(default=None, ge=1)  # None: physical core count
    chunk_size: int = Field(default=256, ge=1)

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings):
        # Environment beats the spec file.
        return env_settings, init_settings


class LoggingConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: str = "INFO"
    format: Literal["json", "text"] = "json"
    file: Optional[str] = None


class LinquenchConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    process: ProcessConfig = Field(default_factory=ProcessConfig)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)
    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("runtime", mode="before")
    @classmethod
    def _runtime_from_env(cls, value: Any) -> Any:
        if isinstance(value, dict):
            return RuntimeConfig(**value)
        return value


def find_config_file() -> Optional[Path]:
    """Find the configuration file in standard locations."""
    search_paths = [
        Path.cwd() / "linquench.yaml",
        Path.cwd() / "linquench.yml",
        Path.cwd() / "config" / "linquench.yaml",
        Path.home() / ".config" / "linquench" / "linquench.yaml",
    ]

    for path in search_paths:
        if path.exists():
            return path

    return None


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err.get("loc", ()))
        parts.append(f"{where}: {err.get('msg')}")
    return "; ".join(parts)


def config_from_dict(data: Dict[str, Any]) -> LinquenchConfig:
    try:
        return LinquenchConfig(**data)
    except ValidationError as e:
        raise InvalidSpecError(_validation_message(e)) from e


def load_config(config_path: Optional[Union[str, Path]] = None) -> LinquenchConfig:
    """
    Load configuration from a YAML spec file or use defaults.

    An explicit path that does not exist is an error; without a path the
    standard locations are searched and defaults used if none exists.
    A relative coefficients_csv is taken relative to the spec file.
    """
    if config_path is not None:
        config_file = Path(config_path)
        if not config_file.is_file():
            raise SpecFileNotFound(f"{config_file} does not exist")
    else:
        config_file = find_config_file()
        if config_file is None:
            return LinquenchConfig()

    try:
        with open(config_file, "r", encoding="utf-8") as f:
            yaml_data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise InvalidSpecError(f"{config_file}: not valid YAML ({e})") from e
    if not isinstance(yaml_data, dict):
        raise InvalidSpecError(f"{config_file}: top level must be a mapping of sections")

    config = config_from_dict(yaml_data)
    csv_path = config.process.coefficients_csv
    if csv_path and not Path(csv_path).is_absolute():
        config.process.coefficients_csv = str((config_file.parent / csv_path).resolve())
    return config


def parse_override(text: str) -> Tuple[str, str, Any]:
    """Split 'section.key=value'; the value is parsed as YAML so lists and booleans work."""
    if "=" not in text:
        raise ConfigError(f"override '{text}' is not of the form section.key=value")
    dotted, raw = text.split("=", 1)
    parts = dotted.strip().split(".")
    if len(parts) != 2 or not all(parts):
        raise ConfigError(f"override key '{dotted}' must be section.key")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as e:
        raise ConfigError(f"override '{text}': value is not valid YAML ({e})") from e
    return parts[0], parts[1], value


def apply_overrides(config: LinquenchConfig, overrides: Sequence[str]) -> LinquenchConfig:
    """Return a new, re-validated config with every --set override applied in order."""
    if not overrides:
        return config
    data = config.model_dump()
    for text in overrides:
        section, key, value = parse_override(text)
        if section not in data:
            raise InvalidSpecError(f"unknown section '{section}' in override '{text}'")
        data[section][key] = value
    return config_from_dict(data)


def resolved_dict(config: LinquenchConfig) -> Dict[str, Any]:
    """Everything that determines the numbers; thread count and logging are left out."""
    return config.model_dump(mode="json", exclude={"runtime": {"threads"}, "logging": True})


def write_resolved_config(config: LinquenchConfig, out_dir: Union[str, Path], seed: int) -> Path:
    path = Path(out_dir) / "config.resolved.yaml"
    with open(path, "w", encoding="utf-8") as f:
        f.write(artifact_header(seed) + "\n")
        yaml.safe_dump(resolved_dict(config), f, sort_keys=True, default_flow_style=False)
    return path


# Global config instance
_config: Optional[LinquenchConfig] = None


def get_config() -> LinquenchConfig:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config: LinquenchConfig) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config
