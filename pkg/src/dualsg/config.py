"""Run configuration: flat key = value files plus command-line overrides.

The file format is one ``key = value`` pair per line, ``#`` comments,
SI units throughout, case-sensitive keys.  Unknown keys, unparsable
numbers and constraint violations are reported with enough context to
fix the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import (
    GRAVITATIONAL_CONSTANT,
    REDUCED_PLANCK,
    SPEED_OF_LIGHT,
    CouplingConvention,
    ExperimentParams,
)


class ConfigError(ValueError):
    """A configuration file or override could not be applied."""


_CONVENTIONS = {
    "m0sq": CouplingConvention.M0_SQUARED,
    "M0Squared": CouplingConvention.M0_SQUARED,
    "m0m": CouplingConvention.M0_TIMES_M,
    "M0TimesM": CouplingConvention.M0_TIMES_M,
}

_SWEEP_PARAMS = ("m0", "d", "dx", "T")
_OUTPUTS = ("csv", "svg")

_FLOAT_KEYS = ("m0", "d", "dx", "T", "G", "hbar", "c",
               "t0", "t1", "sweep_start", "sweep_stop")
_INT_KEYS = ("trace_points", "sweep_count")
_BOOL_KEYS = ("unwrap",)
_STR_KEYS = ("convention", "outputs", "sweep_param")

VALID_KEYS = tuple(sorted(_FLOAT_KEYS + _INT_KEYS + _BOOL_KEYS + _STR_KEYS))


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name, range and grid size."""

    param: str
    start: float
    stop: float
    count: int


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration for one CLI invocation.

    Defaults reproduce the reference operating point: 5e-14 kg
    components, 450 um separation, 250 um split, 1.5 s, coupling
    convention m0sq.
    """

    m0: float = 5e-14
    d: float = 450e-6
    dx: float = 250e-6
    T: float = 1.5
    G: float = GRAVITATIONAL_CONSTANT
    hbar: float = REDUCED_PLANCK
    c: float = SPEED_OF_LIGHT
    convention: CouplingConvention = CouplingConvention.M0_SQUARED
    trace_points: int = 2000
    t0: float | None = None
    t1: float | None = None
    unwrap: bool = False
    outputs: tuple[str, ...] = ("csv",)
    sweep: SweepAxis | None = None

    def experiment_params(self) -> ExperimentParams:
        return ExperimentParams(m0=self.m0, d=self.d, dx=self.dx, T=self.T,
                                G=self.G, hbar=self.hbar, c=self.c,
                                coupling=self.convention)

    def window(self) -> tuple[float, float]:
        return (self.t0 if self.t0 is not None else 0.0,
                self.t1 if self.t1 is not None else self.T)


def _parse_value(key: str, raw: str, where: str):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{where}: cannot parse number {raw!r} for key {key!r}") from None
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{where}: cannot parse integer {raw!r} for key {key!r}") from None
    if key in _BOOL_KEYS:
        lowered = raw.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ConfigError(f"{where}: cannot parse boolean {raw!r} for key {key!r}")
    if key == "convention":
        if raw not in _CONVENTIONS:
            raise ConfigError(
                f"{where}: unknown convention {raw!r}; "
                f"valid: {', '.join(sorted(set(_CONVENTIONS)))}")
        return _CONVENTIONS[raw]
    if key == "outputs":
        items = tuple(s.strip() for s in raw.split(",") if s.strip())
        bad = [s for s in items if s not in _OUTPUTS]
        if bad or not items:
            raise ConfigError(f"{where}: outputs must be a comma list of "
                              f"{_OUTPUTS}, got {raw!r}")
        return items
    if key == "sweep_param":
        if raw not in _SWEEP_PARAMS:
            raise ConfigError(f"{where}: sweep_param must be one of "
                              f"{_SWEEP_PARAMS}, got {raw!r}")
        return raw
    raise ConfigError(f"{where}: unhandled key {key!r}")   # pragma: no cover


def _read_file(path: str) -> dict:
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.rstrip()!r}")
            key, raw = (s.strip() for s in text.split("=", 1))
            if key not in VALID_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}; "
                                  f"valid keys: {', '.join(VALID_KEYS)}")
            values[key] = _parse_value(key, raw, f"{path}:{lineno}")
    return values


def _assemble(values: dict) -> RunConfig:
    sweep_keys = {k: values.pop(k) for k in
                  ("sweep_param", "sweep_start", "sweep_stop", "sweep_count")
                  if k in values}
    cfg = replace(RunConfig(), **values)
    if sweep_keys:
        missing = [k for k in ("sweep_param", "sweep_start", "sweep_stop", "sweep_count")
                   if k not in sweep_keys]
        if missing:
            raise ConfigError(f"incomplete sweep axis: missing {', '.join(missing)}")
        cfg = replace(cfg, sweep=SweepAxis(param=sweep_keys["sweep_param"],
                                           start=sweep_keys["sweep_start"],
                                           stop=sweep_keys["sweep_stop"],
                                           count=sweep_keys["sweep_count"]))
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.trace_points < 2:
        raise ConfigError(f"trace_points must be >= 2, got {cfg.trace_points}")
    if cfg.sweep is not None:
        if cfg.sweep.count < 2:
            raise ConfigError(f"sweep_count must be >= 2, got {cfg.sweep.count}")
        if not (math.isfinite(cfg.sweep.start) and math.isfinite(cfg.sweep.stop)
                and cfg.sweep.start != cfg.sweep.stop):
            raise ConfigError("sweep_start and sweep_stop must be finite and distinct")
    t0, t1 = cfg.window()
    if not (0.0 <= t0 < t1):
        raise ConfigError(f"window must satisfy 0 <= t0 < t1, got ({t0}, {t1})")
    # Raises GeometryError / ValueError naming the violated constraint.
    cfg.experiment_params()


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional file plus typed overrides.

    File values replace defaults; ``overrides`` (already-typed values,
    e.g. from parsed CLI flags) replace file values.  An empty or absent
    file yields the full default configuration.
    """
    values = _read_file(path) if path is not None else {}
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key == "sweep" and isinstance(val, SweepAxis):
            values["sweep_param"] = val.param
            values["sweep_start"] = val.start
            values["sweep_stop"] = val.stop
            values["sweep_count"] = val.count
            continue
        if key not in VALID_KEYS:
            raise ConfigError(f"override: unknown key {key!r}; "
                              f"valid keys: {', '.join(VALID_KEYS)}")
        if isinstance(val, str):
            val = _parse_value(key, val, "override")
        values[key] = val
    return _assemble(values)
