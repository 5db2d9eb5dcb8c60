"""Parallel Monte Carlo drivers.

Path ``i`` of parameter row ``r`` draws from the substream
``(master_seed, r, stream, i)``; workers only decide *when* a path runs,
never what it draws, and results are collected in index order.  The
compiled kernels release the GIL, so a thread pool gives real parallelism.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels
from .cycles import CycleRecord, harvest_cycles
from .noise import CHUNK, CYCLE_STREAM, DIRECT_STREAM, substream
from .params import OscillatorParams
from .sde import check_step_size

START_BURN_IN = "burn_in"
START_EXACT = "exact"


def _map(fn, n: int, threads: int):
    if threads <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def path_integral(params: OscillatorParams, T: float, dt: float, rng: np.random.Generator,
                  y0: float = 0.0, z0: float = 0.0) -> tuple[float, float]:
    """Stream one path over ``ceil(T/dt)`` steps; returns ``(int y dt, plastic deformation)``."""
    kern = kernels.get()
    state = np.array([y0, z0, 0.0, 0.0])
    left = int(math.ceil(T / dt - 1e-9))
    scale = math.sqrt(dt)
    while left > 0:
        m = min(left, CHUNK)
        kern.advance(params.c0, params.k, params.Y, dt, state, rng.standard_normal(m) * scale)
        left -= m
    return float(state[2]), float(state[3])


def direct_integrals(
    params: OscillatorParams,
    T: float,
    dt: float,
    master_seed: int,
    n_paths: int,
    row: int = 0,
    threads: int = 1,
    check_step: bool = True,
) -> np.ndarray:
    """``(n_paths, 2)`` array of displacement and plastic deformation at ``T`` from ``(0, 0)``."""
    if check_step:
        check_step_size(params, dt)

    def one(i):
        return path_integral(params, T, dt, substream(master_seed, row, DIRECT_STREAM, i))

    return np.array(_map(one, n_paths, threads), dtype=float).reshape(n_paths, 2)


def sample_cycles(
    params: OscillatorParams,
    dt: float,
    master_seed: int,
    n_cycles: int,
    row: int = 0,
    threads: int = 1,
    start: str = START_BURN_IN,
    per_seed: int = 1,
    check_step: bool = True,
) -> list[CycleRecord]:
    """``n_cycles`` long cycles, ``per_seed`` consecutive ones from each independent path.

    ``start="burn_in"`` runs each path from ``(0, 0)`` and discards the
    transient before the first boundary rest event; ``start="exact"``
    starts at ``(0, +-Y)`` with a fair sign drawn from a side substream.
    """
    if check_step:
        check_step_size(params, dt)
    if start not in (START_BURN_IN, START_EXACT):
        raise ValueError(f"unknown start {start!r}")
    n_paths = -(-n_cycles // per_seed)

    def one(i):
        rng = substream(master_seed, row, CYCLE_STREAM, i)
        z0 = 0.0
        if start == START_EXACT:
            side = 1.0 if substream(master_seed, row, CYCLE_STREAM, i, 1).random() < 0.5 else -1.0
            z0 = side * params.Y
        return harvest_cycles(params, dt, rng, per_seed, 0.0, z0)

    batches = _map(one, n_paths, threads)
    return [c for batch in batches for c in batch][:n_cycles]
