"""Run configuration: defaults, file parsing, and derived objects.

The config file is flat "key = value" text; '#' starts a comment and
blank lines are ignored. Lists are comma separated. Defaults reproduce
the standard drive family (10 + 10 MHz amplitude ramp) over operation
times 25..500 ns with the standard coherence times.
"""

import dataclasses
from dataclasses import dataclass

from .exceptions import ConfigError
from .propagate import DissipationParams, PropagatorConfig
from .schedules import RampSchedule
from .units import mhz_to_rad_ns

DEFAULT_OPERATION_TIMES = (25.0, 50.0, 100.0, 200.0, 500.0)


@dataclass(frozen=True)
class RunConfig:
    omega0_mhz: float = 10.0
    omega1_mhz: float = 10.0
    operation_times_ns: tuple = DEFAULT_OPERATION_TIMES
    grid_step_tbar: float = 0.02
    dt_ns: float = 0.005
    dissipation_enabled: bool = False
    t1_us: float = 22.0
    t2star_us: float = 64.0
    shot_noise_enabled: bool = False
    shots: int = 2000
    seed: int = -1  # required (>= 0) when shot noise is enabled
    output_dir: str = "out"

    def __post_init__(self):
        if self.omega0_mhz <= 0 or self.omega1_mhz < 0:
            raise ConfigError("omega0_mhz must be positive, omega1_mhz non-negative")
        if not self.operation_times_ns or any(t <= 0 for t in self.operation_times_ns):
            raise ConfigError("operation_times_ns must be positive")
        n = round(1.0 / self.grid_step_tbar) if self.grid_step_tbar > 0 else 0
        if n < 2 or abs(n * self.grid_step_tbar - 1.0) > 1e-9:
            raise ConfigError("grid_step_tbar must divide 1")
        if self.dt_ns <= 0:
            raise ConfigError("dt_ns must be positive")
        if self.t1_us <= 0 or self.t2star_us <= 0:
            raise ConfigError("coherence times must be positive")
        if self.shots < 1:
            raise ConfigError("shots must be at least 1")
        if self.shot_noise_enabled and self.seed < 0:
            raise ConfigError("shot noise requires an explicit non-negative seed")

    def schedule(self, T):
        return RampSchedule(
            omega0=mhz_to_rad_ns(self.omega0_mhz),
            omega1=mhz_to_rad_ns(self.omega1_mhz),
            T=float(T),
        )

    def propagator(self):
        return PropagatorConfig(dt=self.dt_ns)

    def dissipation(self):
        return DissipationParams(
            t1=self.t1_us * 1000.0,
            t2_star=self.t2star_us * 1000.0,
            enabled=self.dissipation_enabled,
        )


_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_bool(raw, key):
    word = raw.strip().lower()
    if word not in _BOOL_WORDS:
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    return _BOOL_WORDS[word]


def _parse_value(field, raw, key):
    try:
        if field.type in ("bool", bool):
            return _parse_bool(raw, key)
        if field.type in ("int", int):
            return int(raw)
        if field.type in ("float", float):
            return float(raw)
        if field.type in ("tuple", tuple):
            return tuple(float(part) for part in raw.split(",") if part.strip())
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def parse_config(path):
    """Read a RunConfig from a flat key = value file."""
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    overrides = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in fields:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        overrides[key] = _parse_value(fields[key], raw, key)
    return RunConfig(**overrides)
