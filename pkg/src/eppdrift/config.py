"""Experiment configuration: INI-style sections, defaults from the reference protocol."""
from __future__ import annotations

import configparser
import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigInvalid, EppError
from .params import OscillatorParams, validate_params

MODES = ("mc_direct", "mc_cycles", "pde", "all")
STARTS = ("burn_in", "exact")


@dataclass
class ExperimentConfig:
    c0: list[float] = field(default_factory=lambda: [1.0])
    k: list[float] = field(default_factory=lambda: [1.0])
    Y: list[float] = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    T: float = 500.0
    dt: float = 1e-4
    MC: int = 5000
    master_seed: int = 2011
    mode: str = "all"
    out: str = "results"
    threads: int = 1
    start: str = "burn_in"
    cycles_per_seed: int = 1
    Ny: int = 401
    Nz: int = 101
    L: float | None = None

    def sweep(self) -> list[OscillatorParams]:
        """Parameter sets in row order (c0 outermost, Y innermost)."""
        return [validate_params(c0, k, Y) for c0, k, Y in itertools.product(self.c0, self.k, self.Y)]

    @property
    def runs_mc(self) -> bool:
        return self.mode in ("mc_direct", "mc_cycles", "all")

    def validate(self) -> "ExperimentConfig":
        if self.mode not in MODES:
            raise ConfigInvalid(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.start not in STARTS:
            raise ConfigInvalid(f"start must be one of {STARTS}, got {self.start!r}")
        if not self.dt > 0:
            raise ConfigInvalid("dt must be > 0")
        if not self.T > 0:
            raise ConfigInvalid("T must be > 0")
        if self.runs_mc and self.MC < 2:
            raise ConfigInvalid("MC must be >= 2 for Monte Carlo modes")
        if self.threads < 1 or self.cycles_per_seed < 1:
            raise ConfigInvalid("threads and cycles_per_seed must be >= 1")
        if self.Ny < 3 or self.Nz < 3 or self.Ny % 2 == 0:
            raise ConfigInvalid("need odd Ny >= 3 and Nz >= 3")
        try:
            params = self.sweep()
        except EppError as exc:
            raise ConfigInvalid(str(exc)) from exc
        if self.runs_mc:
            from .sde import check_step_size

            for p in params:
                try:
                    check_step_size(p, self.dt)
                except EppError as exc:
                    raise ConfigInvalid(str(exc)) from exc
        return self

    def echo_lines(self) -> list[str]:
        """Resolved settings that determine the numbers (scheduling and paths excluded)."""
        keys = ("c0", "k", "Y", "T", "dt", "MC", "master_seed", "mode", "start",
                "cycles_per_seed", "Ny", "Nz", "L")
        out = []
        for key in keys:
            value = getattr(self, key)
            if isinstance(value, list):
                value = ", ".join(repr(v) for v in value)
            out.append(f"{key} = {value!r}" if not isinstance(value, str) else f"{key} = {value}")
        return out


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigInvalid(f"unreadable config: {exc}") from exc
    known = {"experiment", "params", "pde"}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ConfigInvalid(f"unknown sections: {sorted(unknown)}")
    cfg = ExperimentConfig()
    try:
        if parser.has_section("params"):
            sec = parser["params"]
            for key in ("c0", "k", "Y"):
                if key in sec:
                    setattr(cfg, key, _floats(sec[key]))
        if parser.has_section("experiment"):
            sec = parser["experiment"]
            casts = {"T": float, "dt": float, "MC": int, "master_seed": int, "mode": str,
                     "out": str, "threads": int, "start": str, "cycles_per_seed": int}
            for key in sec:
                name = next((k for k in casts if k.lower() == key), None)
                if name is None:
                    raise ConfigInvalid(f"unknown key [experiment] {key}")
                setattr(cfg, name, casts[name](sec[key].strip()))
        if parser.has_section("pde"):
            sec = parser["pde"]
            for key in sec:
                if key == "ny":
                    cfg.Ny = int(sec[key])
                elif key == "nz":
                    cfg.Nz = int(sec[key])
                elif key == "l":
                    cfg.L = float(sec[key]) if sec[key].strip() else None
                else:
                    raise ConfigInvalid(f"unknown key [pde] {key}")
    except ValueError as exc:
        if isinstance(exc, ConfigInvalid):
            raise
        raise ConfigInvalid(str(exc)) from exc
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from exc
    return parse_config(text)
