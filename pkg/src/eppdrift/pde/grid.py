"""Truncated (y, z) rectangle and fields living on it."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..params import OscillatorParams

CORNER_KEYS = ("0+,+Y", "0-,+Y", "0+,-Y", "0-,-Y")


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on ``[-L, L] x [-Y, Y]``.

    ``Ny`` must be odd so that ``y = 0`` is a grid line (index ``jm``).
    Nodes on ``z = Y`` with ``y > 0`` form the boundary half-line D+, nodes
    on ``z = -Y`` with ``y < 0`` form D-.  The node ``(0, Y)`` carries the
    interior-side limit ``(0-, Y)``; ``(0, -Y)`` carries ``(0+, -Y)``.
    """

    L: float
    Y: float
    Ny: int
    Nz: int

    def __post_init__(self):
        if not self.L > 0 or not self.Y > 0:
            raise ValueError("grid extents must be positive")
        if self.Ny < 3 or self.Nz < 3:
            raise ValueError("need Ny >= 3 and Nz >= 3")
        if self.Ny % 2 == 0:
            raise ValueError("Ny must be odd so that y = 0 is a grid line")

    @property
    def hy(self) -> float:
        return 2.0 * self.L / (self.Ny - 1)

    @property
    def hz(self) -> float:
        return 2.0 * self.Y / (self.Nz - 1)

    @property
    def jm(self) -> int:
        return (self.Ny - 1) // 2

    @property
    def y(self) -> np.ndarray:
        y = np.linspace(-self.L, self.L, self.Ny)
        y[self.jm] = 0.0
        return y

    @property
    def z(self) -> np.ndarray:
        return np.linspace(-self.Y, self.Y, self.Nz)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.y, self.z, indexing="ij")

    def refined(self) -> "Grid":
        """Grid with both spacings halved."""
        return Grid(self.L, self.Y, 2 * self.Ny - 1, 2 * self.Nz - 1)


def default_truncation(params: OscillatorParams) -> float:
    """Six stationary velocity standard deviations."""
    return 6.0 / math.sqrt(2.0 * params.c0)


def make_grid(params: OscillatorParams, Ny: int = 201, Nz: int = 51, L: float | None = None) -> Grid:
    if L is None:
        L = default_truncation(params)
    return Grid(float(L), params.Y, int(Ny), int(Nz))


@dataclass
class GridField:
    """Nodal values of a solved problem plus its one-sided corner limits."""

    grid: Grid
    values: np.ndarray
    tag: str
    corners: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.grid.Ny, self.grid.Nz):
            raise ValueError(f"values shape {self.values.shape} does not match grid")

    def at(self, y: float, z: float) -> float:
        """Value at a grid node (nearest node, no interpolation)."""
        j = int(round((y + self.grid.L) / self.grid.hy))
        i = int(round((z + self.grid.Y) / self.grid.hz))
        return float(self.values[j, i])

    def corner(self, key: str) -> float:
        return self.corners[key]

    def plus_line(self) -> np.ndarray:
        """Values on D+ including the corner node, for y >= 0."""
        return self.values[self.grid.jm:, -1]

    def minus_line(self) -> np.ndarray:
        """Values on D- including the corner node, for y <= 0."""
        return self.values[: self.grid.jm + 1, 0]

    def __add__(self, other: "GridField") -> "GridField":
        return GridField(
            self.grid,
            self.values + other.values,
            f"{self.tag}+{other.tag}",
            {k: self.corners[k] + other.corners[k] for k in self.corners if k in other.corners},
        )

    def scaled(self, factor: float, tag: str | None = None) -> "GridField":
        return GridField(
            self.grid,
            factor * self.values,
            tag or self.tag,
            {k: factor * v for k, v in self.corners.items()},
        )

    def write_csv(self, path: str | Path) -> None:
        """Row-major ``y,z,value`` dump."""
        yy, zz = self.grid.mesh()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["y", "z", "value"])
            for yv, zv, v in zip(yy.ravel(), zz.ravel(), self.values.ravel()):
                w.writerow([repr(float(yv)), repr(float(zv)), repr(float(v))])
