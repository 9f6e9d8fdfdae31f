#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run-file parser.

A run file is a UTF-8 key-value document with a ``[model]`` section and one
``[run.<command>]`` section per command::

    [model]
    kind = logarithmic
    a = 1.0

    [run.isotherm]
    theta = 0.9
    n = 200

Keys before the first section header belong to ``[model]``. Lines starting
with ``#`` or ``;`` are comments. Every key is validated when
the file is parsed; unknown keys, duplicates and malformed lines raise
``ParseError`` with the offending line number(s), constraint violations raise
``ValidationError(key, constraint)``.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from lvphase.config.settings import DEFAULT_CONFIG
from lvphase.exceptions import ParseError, ValidationError
from lvphase.models.data_models import PressureSchedule
from lvphase.models.params import ModelKind, ModelParams, PotentialModel, _constraint_of


def parse_schedule(value: Any) -> Optional[List[Tuple[float, float]]]:
    """Parse ``"t0:p0, t1:p1, ..."`` into schedule points."""
    if value is None or isinstance(value, list):
        return value
    points = []
    for item in str(value).split(","):
        item = item.strip()
        if not item:
            continue
        t, sep, p = item.partition(":")
        if not sep:
            raise ValueError(f"schedule entry {item!r} must be t:p")
        points.append((float(t), float(p)))
    return points


class _RunBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class IsothermRun(_RunBlock):
    theta: float = Field(default=0.9, gt=0)
    p_min: Optional[float] = Field(default=None, gt=0)
    p_max: Optional[float] = Field(default=None, gt=0)
    n: int = Field(default=200, ge=2)


class PhaseDiagramRun(_RunBlock):
    u_min: float = -0.95
    u_max: float = 1.0
    h_min: float = -2.0
    h_max: float = 2.0
    n_u: int = Field(default=41, ge=2)
    n_h: int = Field(default=41, ge=2)


class MinimaRun(_RunBlock):
    theta: float = Field(default=0.6, gt=0)
    p: Optional[float] = Field(default=None, gt=0)


class SpinodalRun(_RunBlock):
    theta_min: float = Field(default=0.5, gt=0)
    theta_max: float = Field(default=0.99, gt=0)
    n: int = Field(default=10, ge=1)


class HysteresisRun(_RunBlock):
    theta: float = Field(default=0.6, gt=0)
    u: Optional[float] = None
    h_amplitude: float = Field(default=1.0, gt=0)
    n_steps: int = Field(default=401, ge=2)


class RelaxRun(_RunBlock):
    phi0: float = 0.1
    theta: float = Field(default=0.6, gt=0)
    schedule: Optional[List[Tuple[float, float]]] = None
    t_end: float = Field(default=20.0, gt=0)
    atol: float = Field(default=DEFAULT_CONFIG["ODE_ATOL"], gt=0)
    rtol: float = Field(default=DEFAULT_CONFIG["ODE_RTOL"], gt=0)

    @field_validator("schedule", mode="before")
    @classmethod
    def _parse_schedule(cls, value):
        points = parse_schedule(value)
        if points is not None:
            PressureSchedule(points=points)
        return points


class ThermalRun(RelaxRun):
    r: float = 0.0


class Pde1dRun(_RunBlock):
    n: int = Field(default=401, ge=3)
    dx: float = Field(default=0.05, gt=0)
    x0: Optional[float] = None
    bc: Literal["noflux", "dirichlet"] = "noflux"
    phi_left: Optional[float] = None
    phi_right: Optional[float] = None
    initial: Literal["step", "tanh", "uniform"] = "step"
    amplitude: Optional[float] = None
    theta: float = Field(default=0.6, gt=0)
    p: Optional[float] = Field(default=None, gt=0)
    dt: Optional[float] = Field(default=None, gt=0)
    t_end: float = Field(default=10.0, gt=0)
    record_every: int = Field(default=100, ge=1)
    scheme: Literal["explicit", "semi-implicit"] = "explicit"
    density_mode: Literal["constant_rho", "frozen_rho_field"] = "constant_rho"
    steady_tol: Optional[float] = Field(default=None, gt=0)


class ValidateRun(_RunBlock):
    seed: int = DEFAULT_CONFIG["AUDIT_SEED"]
    n_samples: int = Field(default=DEFAULT_CONFIG["AUDIT_SAMPLES"], ge=1)
    n_pairs: int = Field(default=500, ge=1)


RUN_BLOCKS = {
    "isotherm": IsothermRun,
    "phase-diagram": PhaseDiagramRun,
    "minima": MinimaRun,
    "spinodal": SpinodalRun,
    "hysteresis": HysteresisRun,
    "relax": RelaxRun,
    "thermal": ThermalRun,
    "pde1d": Pde1dRun,
    "validate": ValidateRun,
}


class RunConfig(BaseModel):
    """Validated run configuration: model kind, parameters and command blocks."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ModelKind = ModelKind(DEFAULT_CONFIG["MODEL_KIND"])
    params: ModelParams = Field(default_factory=ModelParams)
    runs: Dict[str, Any] = Field(default_factory=dict)

    def model(self) -> PotentialModel:
        return PotentialModel(kind=self.kind, params=self.params)

    def run(self, command: str) -> _RunBlock:
        """The block for a command, with defaults when the file has none."""
        block = self.runs.get(command)
        return block if block is not None else RUN_BLOCKS[command]()

    def echo(self) -> Dict[str, Any]:
        """Plain, fully defaulted dictionary of this configuration."""
        return {
            "model": {"kind": self.kind.value, **self.params.model_dump()},
            "run": {name: block.model_dump() for name, block in sorted(self.runs.items())},
        }


def _coerce(raw: str) -> Any:
    text = raw.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null", ""):
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _validate(cls, values: Dict[str, Any], prefix: str = ""):
    try:
        return cls(**values)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(part) for part in first.get("loc", ()) if not isinstance(part, int))
        raise ValidationError(prefix + key, _constraint_of(first)) from exc


def _section_fields(section: str) -> Dict[str, Any]:
    if section == "model":
        return {"kind": None, **ModelParams.model_fields}
    return RUN_BLOCKS[section.split(".", 1)[1]].model_fields


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a run file.

    Args:
        text: Content of the run file

    Returns:
        The fully validated RunConfig

    Raises:
        ParseError: Malformed line, unknown section or key, duplicate key
        ValidationError: A value violates its constraint
    """
    sections: Dict[str, Dict[str, Tuple[int, Any]]] = {"model": {}}
    current = "model"
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError(number, f"malformed section header {stripped!r}")
            name = stripped[1:-1].strip()
            if name != "model" and not (name.startswith("run.") and name[4:] in RUN_BLOCKS):
                raise ParseError(number, f"unknown section [{name}]")
            current = name
            sections.setdefault(name, {})
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParseError(number, f"expected 'name = value', got {stripped!r}")
        if key not in _section_fields(current):
            raise ParseError(number, f"unknown key {key!r} in [{current}]")
        if key in sections[current]:
            first = sections[current][key][0]
            raise ParseError(number, f"duplicate key {key!r} in [{current}] (first on line {first})",
                             lines=(first, number))
        sections[current][key] = (number, _coerce(value))
    return build_config({name: {k: v for k, (_, v) in entries.items()} for name, entries in sections.items()})


def build_config(sections: Dict[str, Dict[str, Any]]) -> RunConfig:
    """Validate already split sections ({"model": {...}, "run.<cmd>": {...}})."""
    model_values = dict(sections.get("model", {}))
    kind = model_values.pop("kind", None) or DEFAULT_CONFIG["MODEL_KIND"]
    try:
        model_kind = ModelKind(kind)
    except ValueError as exc:
        raise ValidationError("kind", "one of " + ", ".join(k.value for k in ModelKind)) from exc
    params = _validate(ModelParams, model_values)
    runs = {}
    for name, values in sections.items():
        if name.startswith("run."):
            command = name[4:]
            runs[command] = _validate(RUN_BLOCKS[command], values, prefix=f"run.{command}.")
    return RunConfig(kind=model_kind, params=params, runs=runs)


def apply_overrides(config: RunConfig, overrides: List[str]) -> RunConfig:
    """
    Apply ``--set key=value`` overrides.

    ``model.x`` and bare ``x`` address the model section, ``run.<cmd>.x`` a
    command block.

    Raises:
        ParseError: Malformed override or unknown key (line 0)
        ValidationError: A value violates its constraint
    """
    if not overrides:
        return config
    sections: Dict[str, Dict[str, Any]] = {
        "model": {"kind": config.kind.value, **config.params.model_dump()},
    }
    for command, block in config.runs.items():
        sections[f"run.{command}"] = block.model_dump(exclude_unset=True)
    for item in overrides:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParseError(0, f"override {item!r} must be key=value")
        if key.startswith("run."):
            section, _, field = key.rpartition(".")
            if section[4:] not in RUN_BLOCKS:
                raise ParseError(0, f"unknown section [{section}] in override {item!r}")
        else:
            section, field = "model", key[6:] if key.startswith("model.") else key
        if field not in _section_fields(section):
            raise ParseError(0, f"unknown key {field!r} in [{section}]")
        sections.setdefault(section, {})[field] = _coerce(value)
    return build_config(sections)


def load_config(path: Optional[str], overrides: Optional[List[str]] = None) -> RunConfig:
    """
    Read a run file (or start from defaults) and apply overrides.

    Raises:
        ParseError: Also for a file that is not valid UTF-8, at the line of the first bad byte
        ValidationError: For a value outside its constraint
    """
    if path is None:
        config = RunConfig()
    else:
        with open(path, "rb") as handle:
            raw = handle.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = raw.count(b"\n", 0, exc.start) + 1
            raise ParseError(line, f"not valid UTF-8 (byte 0x{raw[exc.start]:02x})") from exc
        config = parse_config(text)
    return apply_overrides(config, overrides or [])

