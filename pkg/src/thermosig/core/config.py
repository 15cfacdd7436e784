#!/usr/bin/env python3
"""
Configuration Management
Pydantic-based run configuration with JSON (or YAML) persistence
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from thermosig.core.errors import ConfigError
from thermosig.core.types import StationConstants
from thermosig.ingest.frames import ModeRule
from thermosig.ingest.reader import ColumnMap
from thermosig.regression.grid import GridSpec
from thermosig.synth.scenario import Scenario
from thermosig.utils.logging import logger

ENV_THREADS = "THERMOSIG_THREADS"
ENV_OUTPUT_DIR = "THERMOSIG_OUTPUT_DIR"
ENV_DEBUG = "THERMOSIG_DEBUG"


class RunConfig(BaseModel):
    """Configuration schema for a thermosig run"""

    model_config = ConfigDict(validate_assignment=True, populate_by_name=True)

    constants: StationConstants = Field(default_factory=StationConstants, description="Known station physics")
    column_map: ColumnMap = Field(default_factory=ColumnMap, alias="schema", description="Dataset column names")
    mode_rule: ModeRule = Field(default_factory=ModeRule, description="HVAC mode classification thresholds")
    grid: GridSpec = Field(default_factory=GridSpec, description="Coefficient search grid")
    scenario: Optional[Scenario] = Field(default=None, description="Synthetic scenario for 'simulate'")
    output_dir: Path = Field(default=Path("thermosig-out"), description="Directory for reports and datasets")
    max_gap_steps: int = Field(default=5, ge=0, description="Longest gap filled by interpolation, in steps")
    threads: Optional[int] = Field(default=None, ge=1, description="Grid-search worker threads (default: CPU count)")
    use_integrated: bool = Field(default=True, description="Fit on prefix-summed rows")
    window_steps: int = Field(default=1440, ge=2, description="Window length for 'scope', in steps")
    debug: bool = Field(default=False, description="Enable debug logging")

    @field_validator("output_dir")
    @classmethod
    def validate_output_dir(cls, v):
        if not str(v).strip():
            raise ValueError("Output directory cannot be empty")
        return Path(v).expanduser()

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


def _field_path(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "<root>"


def _describe(error: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(p) for p in e['loc']) or '<root>'}: {e['msg']}" for e in error.errors())


class ConfigManager:
    """Loads, validates and saves run configurations"""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        """Initialize config manager"""
        self.config_file = Path(path) if path else None
        self._config: Optional[RunConfig] = None

    def _read(self, path: Path) -> Dict[str, Any]:
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}", field="config") from None
        except OSError as e:
            raise ConfigError(f"Cannot read config file {path}: {e}", field="config") from e
        try:
            data = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"Config file {path} is not valid {'YAML' if path.suffix in ('.yaml', '.yml') else 'JSON'}: {e}", field="config") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must contain an object at the top level", field="config")
        return data

    def load(self) -> RunConfig:
        """Load configuration from file (if any), then apply environment overrides"""
        data: Dict[str, Any] = {}
        if self.config_file is not None:
            logger.debug(f"Loading configuration from {self.config_file}")
            data = self._read(self.config_file)
        data.update(self._from_env())
        try:
            self._config = RunConfig(**data)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {_describe(e)}", field=_field_path(e)) from e
        return self._config

    def _from_env(self) -> Dict[str, Any]:
        """Overrides from THERMOSIG_* environment variables"""
        overrides: Dict[str, Any] = {}
        if os.getenv(ENV_THREADS):
            overrides["threads"] = os.environ[ENV_THREADS]
        if os.getenv(ENV_OUTPUT_DIR):
            overrides["output_dir"] = os.environ[ENV_OUTPUT_DIR]
        if os.getenv(ENV_DEBUG, "0") == "1":
            overrides["debug"] = True
        if overrides:
            logger.debug(f"Environment overrides: {sorted(overrides)}")
        return overrides

    def get(self) -> RunConfig:
        """Get current configuration (never returns None)"""
        if not self._config:
            self.load()
        assert self._config is not None
        return self._config

    def update(self, **kwargs) -> RunConfig:
        """Apply overrides with validation; unknown keys are rejected"""
        config = self.get()
        for key, value in kwargs.items():
            if value is None:
                continue
            if key not in RunConfig.model_fields:
                raise ConfigError(f"Unknown configuration key '{key}'", field=key)
            try:
                setattr(config, key, value)
            except ValidationError as e:
                raise ConfigError(f"Invalid value for '{key}': {_describe(e)}", field=key) from e
        return config

    def save(self, config: Optional[RunConfig] = None, path: Optional[Union[str, Path]] = None) -> Path:
        """Save configuration as JSON"""
        if config:
            self._config = config
        target = Path(path) if path else self.config_file
        if target is None:
            raise ConfigError("No path to save the configuration to", field="config")
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(json.dumps(self.get().to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"Failed to save config to {target}: {e}", field="config") from e
        logger.debug(f"Saved config to {target}")
        return target

    def show(self) -> str:
        """Get configuration as formatted string"""
        return json.dumps(self.get().to_dict(), indent=2, sort_keys=True)


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Load and validate a run configuration"""
    return ConfigManager(path).load()
