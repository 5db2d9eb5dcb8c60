"""Finite-difference solvers for the long-cycle boundary-value problems.

All problems share the degenerate operator

    A u = -1/2 u_yy + (c0 y + k z) u_y - y u_z

on the open band |z| < Y, plus the one-dimensional operators

    B+ u = -1/2 u_yy + (c0 y + k Y) u_y   on D+ = {y > 0, z = Y}
    B- u = -1/2 u_yy + (c0 y - k Y) u_y   on D- = {y < 0, z = -Y}

The discretization is monotone: central differences in y wherever the cell
Peclet number |b| hy <= 1 (first-order upwind otherwise) and first-order
upwinding of the -y u_z transport.  At y = +-L the diffusion term is dropped
and the inward-pointing drift is upwinded.  Linear systems are factorized
once per (params, grid, boundary layout) and reused for every right-hand
side.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DegenerateDenominator, SolverDiverged
from ..params import OscillatorParams
from .grid import Grid, GridField

RESIDUAL_TOL = 1e-8
DENOMINATOR_FLOOR = 1e-10

# Boundary layouts for the D+ / D- half-lines.
DIRICHLET = "dirichlet"  # values imposed
CONTINUOUS = "continuous"  # B+- holds on the line, joined to the interior corner node
ANCHORED = "anchored"  # B+- holds on the line, value 0 at the y = 0 end
# far field |y| = L: diffusion dropped (zero second derivative), drift upwinded
# from the interior, so the row needs no boundary data
EXTRAPOLATE = "extrapolate"


def _y_coeffs(b, h, diffusion=True):
    """(lower, diag, upper) weights of ``-1/2 d2/dy2 + b d/dy`` at a node."""
    b = np.asarray(b, dtype=float)
    lower = np.zeros_like(b)
    diag = np.zeros_like(b)
    upper = np.zeros_like(b)
    if diffusion:
        d = 0.5 / h**2
        lower -= d
        upper -= d
        diag += 2.0 * d
        central = np.abs(b) * h <= 1.0
    else:
        central = np.zeros(b.shape, dtype=bool)
    pos = ~central & (b > 0)
    neg = ~central & (b < 0)
    lower[central] -= b[central] / (2.0 * h)
    upper[central] += b[central] / (2.0 * h)
    diag[pos] += b[pos] / h
    lower[pos] -= b[pos] / h
    diag[neg] -= b[neg] / h
    upper[neg] += b[neg] / h
    return lower, diag, upper


def _line_nodes(grid: Grid, side: int) -> np.ndarray:
    """y-indices of the open half-line D+ (side=+1) or D- (side=-1)."""
    if side > 0:
        return np.arange(grid.jm + 1, grid.Ny)
    return np.arange(0, grid.jm)


def _line_coeffs(params: OscillatorParams, grid: Grid, side: int):
    """Weights of B+ (side=+1) or B- (side=-1) at the half-line nodes.

    The end node at |y| = L drops diffusion; its outer weight is zero.
    """
    js = _line_nodes(grid, side)
    y = grid.y[js]
    b = params.c0 * y + side * params.k * params.Y
    lower, diag, upper = _y_coeffs(b, grid.hy)
    end = -1 if side > 0 else 0
    lo_e, di_e, up_e = _y_coeffs(b[[end]], grid.hy, diffusion=False)
    lower[end], diag[end], upper[end] = lo_e[0], di_e[0], up_e[0]
    return js, lower, diag, upper


def _check_truncation(params: OscillatorParams, grid: Grid) -> None:
    if not params.c0 * grid.L > params.k * params.Y:
        raise ValueError(
            f"truncation L={grid.L} too small: need c0*L > k*Y for inward drift at |y| = L"
        )


@dataclass(frozen=True)
class _System:
    matrix: sp.csr_matrix
    lu: object
    dirichlet: np.ndarray  # boolean mask over flattened nodes


@functools.lru_cache(maxsize=32)
def _system(params: OscillatorParams, grid: Grid, plus: str, minus: str, far: str) -> _System:
    _check_truncation(params, grid)
    Ny, Nz, jm = grid.Ny, grid.Nz, grid.jm
    hy, hz = grid.hy, grid.hz
    J, I = np.meshgrid(np.arange(Ny), np.arange(Nz), indexing="ij")
    Yv, Zv = grid.mesh()
    node = J * Nz + I

    on_plus = (I == Nz - 1) & (J > jm)
    on_minus = (I == 0) & (J < jm)
    edge = ((J == 0) | (J == Ny - 1)) & ~on_plus & ~on_minus
    inner = ~on_plus & ~on_minus & ~edge

    rows, cols, vals = [], [], []
    dirichlet = np.zeros((Ny, Nz), dtype=bool)

    def add(mask_rows, mask_cols, weights):
        keep = weights != 0.0
        rows.append(mask_rows[keep])
        cols.append(mask_cols[keep])
        vals.append(weights[keep])

    def add_band(sel, diffusion):
        b = params.c0 * Yv[sel] + params.k * Zv[sel]
        lower, diag, upper = _y_coeffs(b, hy, diffusion)
        y = Yv[sel]
        zdiag = np.abs(y) / hz
        zup = np.where(y > 0, -y / hz, 0.0)
        zdown = np.where(y < 0, y / hz, 0.0)
        n = node[sel]
        add(n, n, diag + zdiag)
        j, i = J[sel], I[sel]
        ok = j > 0
        add(n[ok], (node[sel] - Nz)[ok], lower[ok])
        ok = j < Ny - 1
        add(n[ok], (node[sel] + Nz)[ok], upper[ok])
        ok = i < Nz - 1
        add(n[ok], (node[sel] + 1)[ok], zup[ok])
        ok = i > 0
        add(n[ok], (node[sel] - 1)[ok], zdown[ok])

    add_band(inner, diffusion=True)
    if far == DIRICHLET:
        dirichlet |= edge
    else:
        add_band(edge, diffusion=False)

    for side, mode in ((1, plus), (-1, minus)):
        i_line = Nz - 1 if side > 0 else 0
        if mode == DIRICHLET:
            dirichlet |= on_plus if side > 0 else on_minus
            continue
        js, lower, diag, upper = _line_coeffs(params, grid, side)
        n = js * Nz + i_line
        add(n, n, diag)
        # neighbour towards y = 0 is the shared corner node when continuous
        inner_end = 0 if side > 0 else len(js) - 1
        lo_nb = n - Nz
        up_nb = n + Nz
        lo_w = lower.copy()
        up_w = upper.copy()
        if mode == ANCHORED:
            if side > 0:
                lo_w[inner_end] = 0.0
            else:
                up_w[inner_end] = 0.0
        ok = js > 0
        add(n[ok], lo_nb[ok], lo_w[ok])
        ok = js < Ny - 1
        add(n[ok], up_nb[ok], up_w[ok])

    d = node[dirichlet]
    add(d, d, np.ones(d.size))

    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(Ny * Nz, Ny * Nz),
    )
    try:
        lu = spla.splu(matrix.tocsc())
    except RuntimeError as exc:  # singular factor
        raise SolverDiverged(f"factorization failed: {exc}") from exc
    return _System(matrix, lu, dirichlet.ravel())


def _solve(system: _System, rhs: np.ndarray, grid: Grid) -> np.ndarray:
    rhs = rhs.ravel()
    u = system.lu.solve(rhs)
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    residual = float(np.max(np.abs(system.matrix @ u - rhs))) / scale
    if not np.all(np.isfinite(u)) or residual > RESIDUAL_TOL:
        raise SolverDiverged(f"relative residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")
    # identity rows: impose the data exactly rather than up to pivoting noise
    u[system.dirichlet] = rhs[system.dirichlet]
    return u.reshape(grid.Ny, grid.Nz)


def source_array(grid: Grid, f) -> np.ndarray:
    """Evaluate a source given as a constant, a callable ``f(y, z)`` or an array."""
    if callable(f):
        yy, zz = grid.mesh()
        return np.broadcast_to(np.asarray(f(yy, zz), dtype=float), (grid.Ny, grid.Nz)).copy()
    arr = np.asarray(f, dtype=float)
    if arr.ndim == 0:
        return np.full((grid.Ny, grid.Nz), float(arr))
    if arr.shape != (grid.Ny, grid.Nz):
        raise ValueError(f"source shape {arr.shape} does not match grid")
    return arr.copy()


def _interior_corners(values: np.ndarray, grid: Grid, plus0: float, minus0: float) -> dict:
    return {
        "0+,+Y": plus0,
        "0-,+Y": float(values[grid.jm, -1]),
        "0+,-Y": float(values[grid.jm, 0]),
        "0-,-Y": minus0,
    }


def solve_pi(params: OscillatorParams, grid: Grid) -> tuple[GridField, GridField]:
    """Exit-side probabilities of the elastic process.

    ``pi_plus`` is 1 on D+ and 0 on D-; the far-field rows share the
    closure of the other problems, which keeps the assembly of v+- exact,
    and reproduce the limits 1 at y = L and 0 at y = -L.
    ``pi_minus`` is returned as ``1 - pi_plus``.
    """
    system = _system(params, grid, DIRICHLET, DIRICHLET, EXTRAPOLATE)
    rhs = np.zeros((grid.Ny, grid.Nz))
    rhs[grid.jm + 1:, -1] = 1.0
    pi_plus = _solve(system, rhs, grid)
    pp = GridField(grid, pi_plus, "pi_plus", _interior_corners(pi_plus, grid, 1.0, 0.0))
    pm_values = 1.0 - pi_plus
    pm = GridField(grid, pm_values, "pi_minus", _interior_corners(pm_values, grid, 0.0, 1.0))
    return pp, pm


def solve_eta(params: OscillatorParams, grid: Grid, f) -> GridField:
    """Expected integral of ``f`` until the elastic process reaches D+ or D-."""
    system = _system(params, grid, DIRICHLET, DIRICHLET, EXTRAPOLATE)
    rhs = source_array(grid, f)
    rhs[grid.jm + 1:, -1] = 0.0
    rhs[: grid.jm, 0] = 0.0
    eta = _solve(system, rhs, grid)
    return GridField(grid, eta, "eta", _interior_corners(eta, grid, 0.0, 0.0))


def phi_grid(params: OscillatorParams, grid: Grid, side: int, f) -> np.ndarray:
    """Plastic-phase functional on the grid half-line, with the discrete B+- operator.

    Returns values at the nodes of D+ (``side=+1``, y ascending from 0 to L)
    or D- (``side=-1``, y ascending from -L to 0), including the zero at
    the y = 0 end.  The weights are exactly those of the half-line rows in
    the monolithic system, so assembled and monolithic solutions agree to
    round-off.
    """
    js, lower, diag, upper = _line_coeffs(params, grid, side)
    src = source_array(grid, f)[:, -1 if side > 0 else 0][js]
    n = len(js)
    if side > 0:
        lower = lower.copy()
        lower[0] = 0.0
    else:
        upper = upper.copy()
        upper[-1] = 0.0
    m = sp.diags([lower[1:], diag, upper[:-1]], [-1, 0, 1], shape=(n, n), format="csc")
    phi = spla.spsolve(m, src)
    residual = float(np.max(np.abs(m @ phi - src))) / max(float(np.max(np.abs(src))), 1e-300)
    if not np.all(np.isfinite(phi)) or residual > RESIDUAL_TOL:
        raise SolverDiverged(f"half-line solve residual {residual:.3e}")
    if side > 0:
        return np.concatenate(([0.0], phi))
    return np.concatenate((phi, [0.0]))


def solve_psi(params: OscillatorParams, grid: Grid, side: int, f, phi=None) -> GridField:
    """Elastic continuation of the plastic-phase value on one half-line.

    ``phi`` overrides the half-line data (array over the same nodes as
    :func:`phi_grid`, or a callable of y such as the quadrature form);
    by default the discrete half-line solve is used.
    """
    if phi is None:
        phi = phi_grid(params, grid, side, f)
    elif callable(phi):
        ys = grid.y[grid.jm:] if side > 0 else grid.y[: grid.jm + 1]
        phi = np.array([phi(float(v)) for v in ys])
    phi = np.asarray(phi, dtype=float)
    system = _system(params, grid, DIRICHLET, DIRICHLET, EXTRAPOLATE)
    rhs = np.zeros((grid.Ny, grid.Nz))
    if side > 0:
        rhs[grid.jm + 1:, -1] = phi[1:]
        tag, plus0, minus0 = "psi_plus", float(phi[0]), 0.0
    else:
        rhs[: grid.jm, 0] = phi[:-1]
        tag, plus0, minus0 = "psi_minus", 0.0, float(phi[-1])
    psi = _solve(system, rhs, grid)
    return GridField(grid, psi, tag, _interior_corners(psi, grid, plus0, minus0))


@dataclass
class CycleSolution:
    """Both long-cycle functionals for one source, with their corner scalars."""

    v_plus: GridField
    v_minus: GridField
    v_plus_0Y: float  # v+(0, Y; f)
    v_minus_0mY: float  # v-(0, -Y; f)
    literal_minus_scalar: float  # v-(0,-Y; f) with the denominator pi+(0-, Y)


def assemble_v(
    params: OscillatorParams,
    eta: GridField,
    psi_plus: GridField,
    psi_minus: GridField,
    pi_plus: GridField,
    pi_minus: GridField,
) -> CycleSolution:
    """Combine elastic, plastic and restart pieces into v+ and v-."""
    base = eta + psi_plus + psi_minus
    den_plus = pi_minus.corner("0-,+Y")
    den_minus = pi_plus.corner("0+,-Y")
    for name, den in (("pi-(0-,Y)", den_plus), ("pi+(0+,-Y)", den_minus)):
        if not den > DENOMINATOR_FLOOR:
            raise DegenerateDenominator(f"{name} = {den:.3e}; refine the grid or enlarge L")
    c_plus = base.corner("0-,+Y") / den_plus
    c_minus = base.corner("0+,-Y") / den_minus
    v_plus = base + pi_plus.scaled(c_plus)
    v_plus.tag = "v_plus"
    v_minus = base + pi_minus.scaled(c_minus)
    v_minus.tag = "v_minus"
    literal = base.corner("0+,-Y") / pi_plus.corner("0-,+Y")
    return CycleSolution(v_plus, v_minus, c_plus, c_minus, literal)


def solve_v(params: OscillatorParams, grid: Grid, f, phi_method: str = "grid") -> CycleSolution:
    """Long-cycle functionals of ``f`` through the elastic/plastic decomposition."""
    pi_plus, pi_minus = solve_pi(params, grid)
    eta = solve_eta(params, grid, f)
    if phi_method == "grid":
        phis = (None, None)
    elif phi_method == "quadrature":
        from .phi import phi_quadrature

        src = source_array(grid, f)
        phis = tuple(
            phi_quadrature(params, side, _line_interpolant(grid, src, side)) for side in (1, -1)
        )
    else:
        raise ValueError(f"unknown phi_method {phi_method!r}")
    psi_plus = solve_psi(params, grid, 1, f, phis[0])
    psi_minus = solve_psi(params, grid, -1, f, phis[1])
    return assemble_v(params, eta, psi_plus, psi_minus, pi_plus, pi_minus)


def _line_interpolant(grid: Grid, src: np.ndarray, side: int):
    if side > 0:
        ys, vs = grid.y[grid.jm:], src[grid.jm:, -1]
    else:
        ys, vs = grid.y[: grid.jm + 1], src[: grid.jm + 1, 0]
    return lambda y: np.interp(y, ys, vs)


def solve_v_monolithic(params: OscillatorParams, grid: Grid, f, side: int = 1) -> GridField:
    """Solve the nonlocal problem for v+ (side=+1) or v- (side=-1) in one linear system."""
    if side > 0:
        system = _system(params, grid, CONTINUOUS, ANCHORED, EXTRAPOLATE)
    else:
        system = _system(params, grid, ANCHORED, CONTINUOUS, EXTRAPOLATE)
    rhs = source_array(grid, f)
    v = _solve(system, rhs, grid)
    if side > 0:
        corners = {"0+,+Y": float(v[grid.jm, -1]), "0-,+Y": float(v[grid.jm, -1]),
                   "0+,-Y": float(v[grid.jm, 0]), "0-,-Y": 0.0}
        return GridField(grid, v, "v_plus", corners)
    corners = {"0+,+Y": 0.0, "0-,+Y": float(v[grid.jm, -1]),
               "0+,-Y": float(v[grid.jm, 0]), "0-,-Y": float(v[grid.jm, 0])}
    return GridField(grid, v, "v_minus", corners)


def solve_second_moment(
    params: OscillatorParams, grid: Grid, v_plus_y: GridField
) -> tuple[GridField, float]:
    """Second moment of the half-cycle velocity integral.

    Solves the v+ problem with source ``2 y v+(y, z; y)``; the value at
    ``(0, Y)`` estimates the mean square of the integral of y up to the
    first rest at the lower boundary.
    """
    yy, _ = grid.mesh()
    src = 2.0 * yy * v_plus_y.values
    sol = solve_v(params, grid, src)
    m2 = sol.v_plus
    m2.tag = "m2"
    return m2, sol.v_plus_0Y


@dataclass
class PDESummary:
    E_tau1: float
    E_theta1: float
    v_plus_y: float
    v_minus_y: float
    m2: float
    sigma2_pde: float
    grid: Grid

    def as_dict(self) -> dict:
        return {
            "E_tau1": self.E_tau1,
            "E_theta1": self.E_theta1,
            "v_plus_y": self.v_plus_y,
            "v_minus_y": self.v_minus_y,
            "m2": self.m2,
            "sigma2_pde": self.sigma2_pde,
            "L": self.grid.L,
            "Ny": self.grid.Ny,
            "Nz": self.grid.Nz,
            "hy": self.grid.hy,
            "hz": self.grid.hz,
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            for key, value in self.as_dict().items():
                fh.write(f"{key} = {value!r}\n")


def pde_summary(params: OscillatorParams, grid: Grid) -> PDESummary:
    ones = solve_v(params, grid, 1.0)
    vel = solve_v(params, grid, lambda y, z: y)
    _, m2 = solve_second_moment(params, grid, vel.v_plus)
    e_theta = ones.v_plus_0Y
    sigma2 = (m2 - vel.v_plus_0Y**2) / e_theta
    return PDESummary(
        E_tau1=ones.v_plus_0Y + ones.v_minus_0mY,
        E_theta1=e_theta,
        v_plus_y=vel.v_plus_0Y,
        v_minus_y=vel.v_minus_0mY,
        m2=m2,
        sigma2_pde=sigma2,
        grid=grid,
    )


def drift_from_pde(params: OscillatorParams, grid: Grid) -> float:
    """Drift coefficient from the half-cycle moments."""
    return pde_summary(params, grid).sigma2_pde


def refinement_study(params: OscillatorParams, grid: Grid, levels: int = 3) -> list[float]:
    """``drift_from_pde`` on ``levels`` successively halved grids."""
    out = []
    g = grid
    for _ in range(levels):
        out.append(drift_from_pde(params, g))
        g = g.refined()
    return out


def observed_order(values) -> float:
    """Convergence order from three successive refinements."""
    a, b, c = values[-3:]
    return math.log(abs(a - b) / abs(b - c), 2.0)
