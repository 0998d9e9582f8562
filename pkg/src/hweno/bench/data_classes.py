# Copyright hweno-solver contributors. All Rights Reserved.
from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import jsonschema

from ..scheme.core import WEIGHT_PRESETS, SchemeConfig

_logger = logging.getLogger(__name__)

SCHEMA_FILE = os.path.join(os.path.dirname(__file__), "schemas", "run_config.schema.json")


class RunConfigError(ValueError):
    """Error that is raised when a run configuration has unknown keys or invalid values"""

    pass


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    def parse_optional(text: str) -> Any:
        return None if text.strip().lower() in ("", "none") else parse(text)

    return parse_optional


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _key(parse: Callable[[str], Any]) -> Dict[str, Any]:
    return {"config_key": True, "parse": parse}


@dataclass
class RunConfig:
    """
    Everything one solver run needs. Fields marked as config keys can be read from and
    written to flat key=value files.
    """

    problem: str = field(default="burgers1d-smooth", metadata=_key(str))
    scheme: str = field(default="l-hweno", metadata=_key(str))
    nx: Optional[int] = field(default=None, metadata=_key(_optional(int)))
    ny: Optional[int] = field(default=None, metadata=_key(_optional(int)))
    cfl: float = field(default=0.6, metadata=_key(float))

    gamma0: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    gamma1: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    gamma2: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    gamma_preset: str = field(default="default", metadata=_key(str))
    d0: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    d1: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    d2: Optional[float] = field(default=None, metadata=_key(_optional(float)))
    d_preset: str = field(default="default", metadata=_key(str))

    epsilon: float = field(default=1e-6, metadata=_key(float))
    limiter_mode: str = field(default="staged", metadata=_key(str))
    time_step: str = field(default="auto", metadata=_key(str))
    out_dir: str = field(default="hweno-out", metadata=_key(str))
    emit_fields: bool = field(default=False, metadata=_key(_parse_bool))

    def __post_init__(self) -> None:
        self.validate()

    @classmethod
    def config_keys(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls) if f.metadata.get("config_key"))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "RunConfig":
        """
        Builds a config from keys and values; string values are parsed by field type.

        Raises:
            RunConfigError: On unknown keys, unparsable values or invalid settings.
        """
        fields = {f.name: f for f in dataclasses.fields(cls) if f.metadata.get("config_key")}
        unknown = sorted(set(values) - set(fields))
        if unknown:
            raise RunConfigError(
                f"Unknown config keys {unknown}. Valid keys are: {', '.join(fields)}"
            )
        parsed: Dict[str, Any] = {}
        for name, value in values.items():
            if isinstance(value, str):
                try:
                    value = fields[name].metadata["parse"](value)
                except ValueError as e:
                    raise RunConfigError(f"Bad value for '{name}': {e}") from e
            parsed[name] = value
        return cls(**parsed)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        return cls.from_mapping(read_config_file(path))

    def merged(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """A copy with the non-None overrides applied on top."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return type(self).from_mapping(values)

    def to_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in self.config_keys()}

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf8") as fh:
            for name, value in self.to_dict().items():
                if value is None:
                    continue
                fh.write(f"{name}={_format(value)}\n")

    def validate(self) -> None:
        """
        Raises:
            RunConfigError: When the values fail the run config schema or the scheme invariants.
        """
        with open(SCHEMA_FILE, encoding="utf8") as fh:
            schema = json.load(fh)
        try:
            jsonschema.validate(self.to_dict(), schema)
        except jsonschema.ValidationError as e:
            path = ".".join(str(p) for p in e.absolute_path) or "config"
            raise RunConfigError(f"Invalid run config at '{path}': {e.message}") from e
        self.scheme_config()

    def _weights(self, prefix: str, preset: str) -> Tuple[float, float, float]:
        explicit = [getattr(self, f"{prefix}{i}") for i in range(3)]
        if all(w is None for w in explicit):
            return WEIGHT_PRESETS[preset]
        if any(w is None for w in explicit):
            raise RunConfigError(f"Give all of {prefix}0, {prefix}1, {prefix}2 or none of them")
        return (explicit[0], explicit[1], explicit[2])

    def scheme_config(self) -> SchemeConfig:
        """
        Raises:
            RunConfigError: When the settings violate a SchemeConfig invariant.
        """
        try:
            return SchemeConfig(
                cfl=self.cfl,
                gamma_weights=self._weights("gamma", self.gamma_preset),
                d_weights=self._weights("d", self.d_preset),
                epsilon=self.epsilon,
                limiter_mode=self.limiter_mode,
                scheme=self.scheme,
                time_step=self.time_step,
            )
        except ValueError as e:
            if isinstance(e, RunConfigError):
                raise
            raise RunConfigError(str(e)) from e


def read_config_file(path: str) -> Dict[str, str]:
    """
    Parses a flat key=value file. Blank lines and lines starting with '#' are skipped.

    Raises:
        RunConfigError: On a line without '=' or a repeated key.
    """
    values: Dict[str, str] = {}
    with open(path, encoding="utf8") as fh:
        for number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise RunConfigError(f"{path}:{number}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in values:
                raise RunConfigError(f"{path}:{number}: repeated key '{key}'")
            values[key] = value
    _logger.debug(f"Read {len(values)} config keys from {path}")
    return values
