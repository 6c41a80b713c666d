"""Flat ``key = value`` experiment configuration.

Lines are ``key = value``; blank lines and ``#`` comments are ignored.  Lists
are comma separated.  Every experiment has a fixed key schema with defaults,
and unknown keys are an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

__all__ = ["ConfigError", "ExperimentConfig", "SCHEMAS", "EXPERIMENTS", "parse_config_text"]


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit status 2)."""


def _float_list(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _str_list(text: str) -> tuple:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_PARSERS = {
    "int": int,
    "float": float,
    "bool": _bool,
    "str": str.strip,
    "floats": _float_list,
    "ints": _int_list,
    "strs": _str_list,
}

_ALL_SIGNALS = "smooth,piecewise_linear,piecewise_constant"

# experiment -> key -> (type, default as text)
SCHEMAS: dict[str, dict[str, tuple[str, str]]] = {
    "wave-adversarial": {
        "n_values": ("ints", "1,2,3,4"),
        "perturbed_n_values": ("ints", "1,2,3,4,5"),
        "perturbation_amplitude": ("float", "0.01"),
        "pulse_radius": ("float", "1.5"),
        "time": ("float", "1.0"),
        "r_max": ("float", "2.5"),
        "point_count": ("int", "2561"),
    },
    "wave-regularized": {
        "alpha": ("float", "0.1"),
        "beta": ("float", "0.1"),
        "perturbation_index": ("int", "5"),
        "perturbation_amplitude": ("float", "0.01"),
        "pulse_radius": ("float", "1.5"),
        "time": ("float", "1.0"),
        "r_max": ("float", "3.5"),
        "step": ("float", "0.00025"),
        "output_stride": ("int", "4"),
    },
    "perconv-recon": {
        "signals": ("strs", _ALL_SIGNALS),
        "rho": ("float", "0.3333333333333333"),
        "bandwidth": ("int", "2048"),
        "eta": ("float", "4.0"),
        "weight_constant": ("float", "1.0"),
        "perturbation_ratio": ("float", "0.005"),
        "targets": ("floats", "0.16,0.08,0.04"),
        "alpha_min": ("float", "1e-14"),
        "alpha_max": ("float", "10.0"),
        "bisection_steps": ("int", "60"),
        "output_points": ("int", "1024"),
        "workers": ("int", "1"),
    },
    "rate-study": {
        "eta": ("float", "4.0"),
        "beta": ("float", "1.0"),
        "modes": ("int", "4096"),
        "decay": ("float", "1.0"),
        "c0": ("float", "1.0"),
        "weight_constant": ("float", "1.0"),
        "alpha_exponents": ("ints", "4,5,6,7,8,9,10,11,12,13,14"),
        "deltas": ("floats", "1e-6,3.1622776601683795e-6,1e-5,3.1622776601683795e-5,1e-4,3.1622776601683795e-4,1e-3,3.1622776601683795e-3,1e-2"),
        "workers": ("int", "1"),
    },
    "bounds-audit": {
        "problems": ("int", "100"),
        "modes": ("int", "200"),
        "alphas": ("floats", "1e-4,1e-3,1e-2,1e-1,1.0"),
        "probe_count": ("int", "200"),
        "radial_fields": ("int", "20"),
        "tamper_sigma_order": ("bool", "false"),
    },
}

EXPERIMENTS = tuple(SCHEMAS)

_LIST_TYPES = ("floats", "ints", "strs")


def _format(kind: str, value: Any) -> str:
    if kind in _LIST_TYPES:
        return ",".join(repr(v) if kind == "floats" else str(v) for v in value)
    if kind == "float":
        return repr(float(value))
    if kind == "bool":
        return "true" if value else "false"
    return str(value)


def parse_config_text(experiment: str, text: str) -> dict[str, Any]:
    """Parse ``text`` against the schema of ``experiment`` and fill in defaults."""
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    schema = SCHEMAS[experiment]
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "seed":
            raw[key] = value
            continue
        if key not in schema:
            raise ConfigError(f"line {lineno}: unknown key {key!r} for {experiment}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    params: dict[str, Any] = {}
    for key, (kind, default) in schema.items():
        text_value = raw.get(key, default)
        try:
            value = _PARSERS[kind](text_value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
        if kind in _LIST_TYPES and len(value) == 0:
            raise ConfigError(f"{key}: sweep must not be empty")
        params[key] = value
    if "seed" in raw:
        params["seed"] = _parse_seed(raw["seed"])
    return params


def _parse_seed(text) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return seed


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    out_dir: Path = Path("runs")

    @classmethod
    def from_text(cls, experiment: str, text: str = "", seed=None, out_dir=None) -> "ExperimentConfig":
        params = parse_config_text(experiment, text)
        file_seed = params.pop("seed", 0)
        seed = file_seed if seed is None else _parse_seed(seed)
        out = Path(out_dir) if out_dir is not None else Path("runs") / experiment
        return cls(experiment, params, seed, out)

    @classmethod
    def from_file(cls, experiment: str, path, seed=None, out_dir=None) -> "ExperimentConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_text(experiment, text, seed, out_dir)

    def to_text(self) -> str:
        schema = SCHEMAS[self.experiment]
        lines = [f"{k} = {_format(schema[k][0], v)}" for k, v in self.params.items()]
        lines.append(f"seed = {self.seed}")
        return "\n".join(lines) + "\n"

    def echo(self) -> dict[str, Any]:
        """JSON-friendly view for the run manifest."""
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        return {"experiment": self.experiment, "seed": self.seed, "params": params}

    def __getitem__(self, key: str):
        return self.params[key]
