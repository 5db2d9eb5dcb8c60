"""Projected Euler-Maruyama simulation of the velocity / elastic-component pair.

One step of size ``dt`` with Gaussian increment ``dW`` maps ``(y, z)`` to

    y' = y - (c0 y + k z) dt + dW
    z' = clamp(z + y dt, -Y, Y)

Both updates use the pre-step state.  The running displacement
``x' = x + y dt`` and the plastic deformation (the part of ``z + y dt``
removed by the clamp) are carried along, so ``x = z + delta`` holds on the
grid up to round-off.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import InvalidState, StepTooLarge
from .noise import NoisePath, gaussian_increments
from .params import OscillatorParams


class Regime(enum.Enum):
    ELASTIC = "elastic"
    PLASTIC_PLUS = "plastic+"
    PLASTIC_MINUS = "plastic-"


def regime_of(z: float, Y: float) -> Regime:
    if z == Y:
        return Regime.PLASTIC_PLUS
    if z == -Y:
        return Regime.PLASTIC_MINUS
    return Regime.ELASTIC


@dataclass(frozen=True)
class State:
    t: float
    y: float
    z: float
    regime: Regime = Regime.ELASTIC

    @classmethod
    def at(cls, t: float, y: float, z: float, Y: float) -> "State":
        return cls(t, y, z, regime_of(z, Y))


def euler_step(params: OscillatorParams, state: State, dW: float, dt: float) -> State:
    """One projected Euler-Maruyama step."""
    Y = params.Y
    if abs(state.z) > Y:
        raise InvalidState(f"|z| = {abs(state.z)} exceeds Y = {Y}")
    if not dt > 0:
        raise ValueError("dt must be positive")
    y, z = state.y, state.z
    zp = z + y * dt
    y_new = y - (params.c0 * y + params.k * z) * dt + dW
    z_new = min(max(zp, -Y), Y)
    return State(state.t + dt, y_new, z_new, regime_of(z_new, Y))


def check_step_size(params: OscillatorParams, dt: float) -> None:
    """Reject steps that could jump across a sizeable part of the band.

    The velocity is bounded in practice by six stationary standard
    deviations; a step must then move ``z`` by less than ``Y / 10``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    y_max = 6.0 * params.velocity_scale
    if not y_max * dt < params.Y / 10.0:
        raise StepTooLarge(
            f"dt={dt} too coarse for Y={params.Y}: need dt < {params.Y / (10.0 * y_max):.3g}"
        )


@dataclass
class Trajectory:
    """Sampled path on the uniform grid ``t_n = n dt``."""

    params: OscillatorParams
    dt: float
    y: np.ndarray
    z: np.ndarray
    x: np.ndarray
    delta: np.ndarray
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.y)

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.y)) * self.dt

    @property
    def plastic(self) -> np.ndarray:
        return np.abs(self.z) == self.params.Y

    def regimes(self) -> list[Regime]:
        return [regime_of(float(v), self.params.Y) for v in self.z]

    def states(self):
        Y = self.params.Y
        for n, (y, z) in enumerate(zip(self.y, self.z)):
            yield State.at(n * self.dt, float(y), float(z), Y)

    def __neg__(self) -> "Trajectory":
        return Trajectory(self.params, self.dt, -self.y, -self.z, -self.x, -self.delta, self.seed)

    @classmethod
    def from_states(cls, params: OscillatorParams, dt: float, y, z, seed=None) -> "Trajectory":
        """Build from velocity / elastic samples; displacement and plastic part are recomputed."""
        from .cycles import accumulate_plastic

        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        x = np.zeros_like(y)
        if len(y) > 1:
            x[1:] = np.cumsum(y[:-1] * dt)
        traj = cls(params, dt, y, z, x, np.zeros_like(y), seed)
        traj.delta = accumulate_plastic(traj)
        return traj

    def write_csv(self, path: str | Path, stride: int = 1) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "y", "z", "delta", "regime"])
            Y = self.params.Y
            for n in range(0, len(self.y), stride):
                w.writerow([
                    repr(n * self.dt), repr(float(self.y[n])), repr(float(self.z[n])),
                    repr(float(self.delta[n])), regime_of(float(self.z[n]), Y).value,
                ])


def simulate_trajectory(
    params: OscillatorParams,
    T: float,
    dt: float,
    seed: int | None = 0,
    noise: NoisePath | None = None,
    y0: float = 0.0,
    z0: float = 0.0,
    check_step: bool = True,
) -> Trajectory:
    """Materialized path on ``[0, T]`` with ``ceil(T/dt)`` steps.

    The increments come from ``noise`` when given (its ``dt`` must match),
    otherwise from :func:`gaussian_increments` with ``seed``.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if check_step:
        check_step_size(params, dt)
    if abs(z0) > params.Y:
        raise InvalidState(f"|z0| = {abs(z0)} exceeds Y = {params.Y}")
    n = int(math.ceil(T / dt - 1e-9))
    if noise is None:
        noise = gaussian_increments(seed, dt, n)
    elif not math.isclose(noise.dt, dt, rel_tol=1e-12):
        raise ValueError(f"noise step {noise.dt} does not match dt={dt}")
    inc = np.ascontiguousarray(noise.increments[:n], dtype=float)
    if len(inc) < n:
        raise ValueError(f"noise path has {len(noise)} increments, need {n}")
    y, z, x, delta = kernels.get().simulate_path(params.c0, params.k, params.Y, dt, y0, z0, inc)
    return Trajectory(params, dt, np.asarray(y), np.asarray(z), np.asarray(x), np.asarray(delta), noise.seed)


def _deterministic_part(params: OscillatorParams, y0: float, z0: float, t):
    a = params.c0 / 2.0
    w = params.omega
    e = np.exp(-a * t)
    c, s = np.cos(w * t), np.sin(w * t)
    z = e * (z0 * c + (y0 + a * z0) / w * s)
    ydet = e * (-w * z0 * s + (y0 + a * z0) * c)
    return z, ydet


def elastic_flow_exact(
    params: OscillatorParams, y0: float, z0: float, t: float, noise: NoisePath | None = None
) -> tuple[float, float]:
    """Closed-form damped-oscillator state at time ``t`` (no clamping).

    The stochastic convolutions are left-endpoint sums over the first
    ``round(t / noise.dt)`` increments.
    """
    a = params.c0 / 2.0
    w = params.omega
    z, ydet = _deterministic_part(params, y0, z0, t)
    sz = sy = 0.0
    if noise is not None and len(noise):
        n = int(round(t / noise.dt))
        if n > len(noise):
            raise ValueError("noise path shorter than t / dt")
        lag = t - np.arange(n) * noise.dt
        kern = np.exp(-a * lag)
        dw = noise.increments[:n]
        sz = float(np.sum(kern * np.sin(w * lag) * dw)) / w
        sy = float(np.sum(kern * np.cos(w * lag) * dw))
    z_t = float(z) + sz
    y_t = -a * z_t + float(ydet) + sy
    return y_t, z_t


def elastic_flow_path(params: OscillatorParams, y0: float, z0: float, noise: NoisePath):
    """:func:`elastic_flow_exact` at every grid time, via the complex recursion
    ``S_{n+1} = exp(lambda dt) (S_n + dW_n)`` with ``lambda = -c0/2 + i omega``."""
    a = params.c0 / 2.0
    w = params.omega
    n = len(noise)
    t = np.arange(n + 1) * noise.dt
    rot = np.exp(complex(-a, w) * noise.dt)
    S = np.zeros(n + 1, dtype=complex)
    acc = 0j
    for m, dw in enumerate(noise.increments):
        acc = rot * (acc + dw)
        S[m + 1] = acc
    z, ydet = _deterministic_part(params, y0, z0, t)
    z = z + S.imag / w
    y = -a * z + ydet + S.real
    return y, z
