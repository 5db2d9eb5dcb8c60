"""Plastic-phase functionals on the boundary half-lines.

On D+ the velocity follows ``dy = -(c0 y + k Y) dt + dW`` until it returns
to 0, and ``phi_plus(y; f)`` is the expected integral of ``f(., Y)`` along
the way.  It solves

    -1/2 phi'' + (c0 y + k Y) phi' = f(y, Y),   y > 0,   phi(0) = 0,

whose bounded solution has the double-integral form

    phi_plus(y) = 2 int_0^inf exp(-(c0 s^2 + 2 k Y s))
                      int_s^{s+y} f(u) exp(-2 c0 s (u - s)) du ds.

On D- the mirror image ``phi_minus(y; f) = phi_plus(-y; u -> f(-u, -Y))``
holds for ``y <= 0``.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate
from scipy.linalg import solve_banded

from ..errors import QuadratureNotConverged
from ..params import OscillatorParams


def _quad(fun, a, b, epsrel):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(fun, a, b, epsabs=0.0, epsrel=epsrel, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureNotConverged(str(exc)) from exc
    return val


def _mirror(f, side):
    """Source on the positive half-line, as a function of |y|."""
    if f is None:
        return None
    if side > 0:
        return f
    return lambda u: f(-u)


def phi_quadrature(params: OscillatorParams, side: int, f=None, epsrel: float = 1e-10):
    """Return ``y -> phi_side(y; f)`` evaluated by adaptive quadrature.

    ``f`` is a function of the velocity on the half-line (``None`` for the
    constant 1, which has a closed-form inner integral).
    """
    c0, kY = params.c0, params.k * params.Y
    g = _mirror(f, side)

    def weight(s):
        return math.exp(-(c0 * s * s + 2.0 * kY * s))

    def inner_const(s, u):
        if s == 0.0:
            return u
        return -math.expm1(-2.0 * c0 * s * u) / (2.0 * c0 * s)

    def inner(s, u):
        return _quad(lambda v: g(v) * math.exp(-2.0 * c0 * s * (v - s)), s, s + u, epsrel)

    def phi(y: float) -> float:
        u = float(y) * side
        if u < 0:
            raise ValueError(f"y={y} is not on the side {side:+d} half-line")
        if u == 0.0:
            return 0.0
        body = inner_const if g is None else inner
        return 2.0 * _quad(lambda s: weight(s) * body(s, u), 0.0, math.inf, epsrel)

    return phi


def _fd_solve(params, g, y_end, n):
    h = y_end / (n - 1)
    y = np.linspace(0.0, y_end, n)
    b = params.c0 * y + params.k * params.Y
    src = np.ones(n) if g is None else np.array([g(v) for v in y], dtype=float)
    # unknowns phi_1..phi_{n-1}; phi_0 = 0
    m = n - 1
    ab = np.zeros((3, m))
    d = 0.5 / h**2
    lower = -d - b[1:] / (2 * h)
    diag = np.full(m, 2 * d)
    upper = -d + b[1:] / (2 * h)
    rhs = src[1:].copy()
    # far end: ghost node from phi' = f / b
    slope = src[-1] / b[-1]
    lower[-1] += upper[-1]
    rhs[-1] -= upper[-1] * 2 * h * slope
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    phi = np.concatenate(([0.0], solve_banded((1, 1), ab, rhs)))
    return y, phi


def phi_ode(params: OscillatorParams, side: int, f=None, y_max: float = 5.0, n: int = 20001,
            pad: float = 3.0):
    """Half-line ODE by central differences with one Richardson step.

    Solved on ``[0, y_max + pad]`` with the far-field slope ``f / b``; returns
    ``(y, phi)`` on ``[0, y_max]`` (``y <= 0`` for ``side=-1``).
    """
    g = _mirror(f, side)
    y_end = y_max + pad
    steps = n - 1
    span = int(round(steps * y_end / y_max))
    y1, p1 = _fd_solve(params, g, y_end, span + 1)
    y2, p2 = _fd_solve(params, g, y_end, 2 * span + 1)
    fine = p2[::2]
    phi = (4.0 * fine - p1) / 3.0
    keep = y1 <= y_max + 1e-12
    y, phi = y1[keep], phi[keep]
    if side < 0:
        return -y[::-1], phi[::-1]
    return y, phi
