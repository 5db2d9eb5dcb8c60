"""Boundary rest events and long-cycle extraction.

A boundary rest event is the end of a plastic phase: the first grid step
at which ``z`` sits on ``+Y`` (resp. ``-Y``) and the velocity has turned,
``y <= 0`` (resp. ``y >= 0``).  After an event its side is disarmed until
the path makes at least one step strictly inside the band, which stops
jitter around ``y = 0`` from producing repeated events.

The first event fixes the orientation ``s``.  A long cycle starts at an
``s``-event, reaches its mid point at the first ``-s``-event and ends at the
next ``s``-event, which also starts the following cycle.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import CycleTimeout
from .params import OscillatorParams


@dataclass(frozen=True)
class BoundaryRestEvent:
    t: float
    side: int
    index: int


@dataclass(frozen=True)
class CycleRecord:
    s: int
    t_start: float
    t_mid: float
    t_end: float
    half_integral: float = math.nan
    full_integral: float = math.nan
    plastic_change: float = math.nan

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def half_duration(self) -> float:
        return self.t_mid - self.t_start


CYCLE_COLUMNS = ("s", "t_start", "t_mid", "t_end", "duration", "half_integral", "full_integral")


def detect_boundary_rest_events(trajectory) -> list[BoundaryRestEvent]:
    """Scan a materialized trajectory for boundary rest events."""
    Y = trajectory.params.Y
    dt = trajectory.dt
    ys = np.asarray(trajectory.y)
    zs = np.asarray(trajectory.z)
    events = []
    armed_plus = armed_minus = True
    # only pinned steps can fire; interior steps just re-arm
    pinned = np.flatnonzero(np.abs(zs) == Y)
    prev = -1
    for n in pinned:
        if n > prev + 1:
            armed_plus = armed_minus = True
        prev = n
        if zs[n] == Y:
            if armed_plus and ys[n] <= 0.0:
                armed_plus = False
                events.append(BoundaryRestEvent(n * dt, 1, int(n)))
        elif armed_minus and ys[n] >= 0.0:
            armed_minus = False
            events.append(BoundaryRestEvent(n * dt, -1, int(n)))
    return events


def extract_cycles(events, trajectory=None) -> list[CycleRecord]:
    """Group time-sorted events into complete long cycles.

    With a trajectory, the velocity integrals over each half and each full
    cycle are read off its running displacement ``x``; without one they are
    left as NaN.  The transient before the first event and a trailing
    incomplete cycle are dropped.
    """
    cycles = []
    if not events:
        return cycles
    s = events[0].side
    start = events[0]
    mid = None
    for ev in events[1:]:
        if mid is None:
            if ev.side == -s:
                mid = ev
        elif ev.side == s:
            cycles.append(_record(s, start, mid, ev, trajectory))
            start, mid = ev, None
    return cycles


def _record(s, start, mid, end, trajectory) -> CycleRecord:
    if trajectory is None:
        return CycleRecord(s, start.t, mid.t, end.t)
    x = trajectory.x
    d = trajectory.delta
    return CycleRecord(
        s,
        start.t,
        mid.t,
        end.t,
        float(x[mid.index] - x[start.index]),
        float(x[end.index] - x[start.index]),
        float(d[end.index] - d[start.index]),
    )


def accumulate_plastic(trajectory) -> np.ndarray:
    """Plastic deformation recomputed from the (y, z) samples.

    On a step that ends on the boundary the increment is whatever the
    clamp removed from ``z + y dt``; this is ``y dt`` once the path is
    already pinned.
    """
    Y = trajectory.params.Y
    dt = trajectory.dt
    y = np.asarray(trajectory.y, dtype=float)
    z = np.asarray(trajectory.z, dtype=float)
    out = np.zeros_like(y)
    delta = 0.0
    for n in range(len(y) - 1):
        z_next = z[n + 1]
        if z_next == Y or z_next == -Y:
            zp = z[n] + y[n] * dt
            if zp > Y:
                delta = delta + (zp - Y)
            elif zp < -Y:
                delta = delta + (zp + Y)
            else:
                # pinned exactly without overshoot
                delta = delta + (zp - z_next)
        out[n + 1] = delta
    return out


def cycle_from_tracker(tracker, dt: float) -> CycleRecord:
    return CycleRecord(
        int(tracker.last_s),
        tracker.last_start * dt,
        tracker.last_mid * dt,
        tracker.last_end * dt,
        float(tracker.last_half),
        float(tracker.last_full),
        float(tracker.last_plastic),
    )


def harvest_cycles(
    params: OscillatorParams,
    dt: float,
    rng: np.random.Generator,
    n_cycles: int = 1,
    y0: float = 0.0,
    z0: float = 0.0,
    max_time: float = 1e5,
    chunk: int = 8192,
) -> list[CycleRecord]:
    """Stream one path from ``(y0, z0)`` until ``n_cycles`` long cycles are complete."""
    tracker = kernels.get().CycleTracker(params.c0, params.k, params.Y, dt, y0, z0)
    scale = math.sqrt(dt)
    max_steps = int(max_time / dt)
    out = []
    while len(out) < n_cycles:
        inc = rng.standard_normal(chunk) * scale
        offset = 0
        while offset < chunk and len(out) < n_cycles:
            offset += tracker.feed(inc[offset:])
            if tracker.completed:
                out.append(cycle_from_tracker(tracker, dt))
        if tracker.step > max_steps:
            raise CycleTimeout(f"no complete cycle within t = {max_time}")
    return out


def write_cycles_csv(cycles, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CYCLE_COLUMNS)
        for c in cycles:
            w.writerow([c.s, repr(c.t_start), repr(c.t_mid), repr(c.t_end), repr(c.duration),
                        repr(c.half_integral), repr(c.full_integral)])


def read_cycles_csv(path: str | Path) -> list[CycleRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(CycleRecord(int(row["s"]), float(row["t_start"]), float(row["t_mid"]),
                                   float(row["t_end"]), float(row["half_integral"]),
                                   float(row["full_integral"])))
    return out
