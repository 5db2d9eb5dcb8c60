# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; arithmetic mirrors ``_pykernels`` operation by operation."""
import numpy as np


def advance(double c0, double k, double Y, double dt, double[::1] state, double[::1] dW):
    cdef Py_ssize_t m, n = dW.shape[0]
    cdef double y = state[0], z = state[1], x = state[2], delta = state[3]
    cdef double zp, w
    with nogil:
        for m in range(n):
            w = dW[m]
            zp = z + y * dt
            x = x + y * dt
            y = y - (c0 * y + k * z) * dt + w
            if zp > Y:
                delta = delta + (zp - Y)
                z = Y
            elif zp < -Y:
                delta = delta + (zp + Y)
                z = -Y
            else:
                z = zp
    state[0] = y
    state[1] = z
    state[2] = x
    state[3] = delta


def simulate_path(double c0, double k, double Y, double dt, double y0, double z0, double[::1] dW):
    cdef Py_ssize_t m, n = dW.shape[0]
    out = np.zeros((4, n + 1))
    cdef double[:, ::1] o = out
    cdef double y = y0, z = z0, x = 0.0, delta = 0.0
    cdef double zp, w
    o[0, 0] = y
    o[1, 0] = z
    with nogil:
        for m in range(n):
            w = dW[m]
            zp = z + y * dt
            x = x + y * dt
            y = y - (c0 * y + k * z) * dt + w
            if zp > Y:
                delta = delta + (zp - Y)
                z = Y
            elif zp < -Y:
                delta = delta + (zp + Y)
                z = -Y
            else:
                z = zp
            o[0, m + 1] = y
            o[1, m + 1] = z
            o[2, m + 1] = x
            o[3, m + 1] = delta
    return out[0], out[1], out[2], out[3]


cdef class CycleTracker:
    """Streaming long-cycle detector; see ``_pykernels.CycleTracker``."""

    cdef public double c0, k, Y, dt, y, z, x, delta
    cdef public long step
    cdef public bint armed_plus, armed_minus, completed
    cdef public int stage, s, last_s
    cdef public long i_start, i_mid, n_events, last_start, last_mid, last_end
    cdef public double x_start, x_mid, delta_start, last_half, last_full, last_plastic

    def __init__(self, c0, k, Y, dt, y0=0.0, z0=0.0):
        self.c0 = c0
        self.k = k
        self.Y = Y
        self.dt = dt
        self.y = y0
        self.z = z0
        self.x = 0.0
        self.delta = 0.0
        self.step = 0
        self.armed_plus = True
        self.armed_minus = True
        self.stage = 0
        self.s = 0
        self.i_start = 0
        self.i_mid = 0
        self.x_start = 0.0
        self.x_mid = 0.0
        self.delta_start = 0.0
        self.completed = False
        self.n_events = 0
        self.last_s = 0
        self.last_start = 0
        self.last_mid = 0
        self.last_end = 0
        self.last_half = 0.0
        self.last_full = 0.0
        self.last_plastic = 0.0
        self._observe()

    cdef bint _observe(self) noexcept nogil:
        cdef int ev = 0
        if self.z == self.Y:
            if self.armed_plus and self.y <= 0.0:
                self.armed_plus = False
                ev = 1
        elif self.z == -self.Y:
            if self.armed_minus and self.y >= 0.0:
                self.armed_minus = False
                ev = -1
        else:
            self.armed_plus = True
            self.armed_minus = True
        if ev == 0:
            return False
        self.n_events += 1
        if self.stage == 0:
            self.s = ev
            self.i_start = self.step
            self.x_start = self.x
            self.delta_start = self.delta
            self.stage = 1
        elif self.stage == 1:
            if ev == -self.s:
                self.i_mid = self.step
                self.x_mid = self.x
                self.stage = 2
        elif ev == self.s:
            self.last_s = self.s
            self.last_start = self.i_start
            self.last_mid = self.i_mid
            self.last_end = self.step
            self.last_half = self.x_mid - self.x_start
            self.last_full = self.x - self.x_start
            self.last_plastic = self.delta - self.delta_start
            self.i_start = self.step
            self.x_start = self.x
            self.delta_start = self.delta
            self.stage = 1
            return True
        return False

    def feed(self, double[::1] dW):
        cdef Py_ssize_t m, n = dW.shape[0]
        cdef Py_ssize_t used = n
        cdef double c0 = self.c0, k = self.k, Y = self.Y, dt = self.dt
        cdef double y, z, zp
        self.completed = False
        with nogil:
            for m in range(n):
                y = self.y
                z = self.z
                zp = z + y * dt
                self.x = self.x + y * dt
                self.y = y - (c0 * y + k * z) * dt + dW[m]
                if zp > Y:
                    self.delta = self.delta + (zp - Y)
                    self.z = Y
                elif zp < -Y:
                    self.delta = self.delta + (zp + Y)
                    self.z = -Y
                else:
                    self.z = zp
                self.step += 1
                if self._observe():
                    self.completed = True
                    used = m + 1
                    break
        return used
