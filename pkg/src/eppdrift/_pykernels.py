"""Pure-Python reference kernels.

Same arithmetic, in the same order, as the compiled ``_ckernels`` module:
the two back ends produce bit-identical trajectories.
"""


def advance(c0, k, Y, dt, state, dW):
    """Advance ``state = [y, z, x, delta]`` in place over the increments ``dW``."""
    y, z, x, delta = state[0], state[1], state[2], state[3]
    for w in dW:
        w = float(w)
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
    state[0], state[1], state[2], state[3] = y, z, x, delta


def simulate_path(c0, k, Y, dt, y0, z0, dW):
    """Materialized path: lists ``y, z, x, delta`` of length ``len(dW) + 1``."""
    n = len(dW)
    ys = [0.0] * (n + 1)
    zs = [0.0] * (n + 1)
    xs = [0.0] * (n + 1)
    ds = [0.0] * (n + 1)
    y, z, x, delta = float(y0), float(z0), 0.0, 0.0
    ys[0], zs[0] = y, z
    for m in range(n):
        w = float(dW[m])
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
        ys[m + 1], zs[m + 1], xs[m + 1], ds[m + 1] = y, z, x, delta
    return ys, zs, xs, ds


class CycleTracker:
    """Streaming long-cycle detector driven by Gaussian increments.

    A boundary rest event on side +1 fires at the first step where ``z == Y``
    and ``y <= 0`` (mirror for side -1).  A side is re-armed only after a
    step strictly inside the band.  The first event fixes the orientation
    ``s``; a cycle runs from an ``s``-event through the first ``-s``-event
    (the mid point) to the next ``s``-event.
    """

    def __init__(self, c0, k, Y, dt, y0=0.0, z0=0.0):
        self.c0, self.k, self.Y, self.dt = float(c0), float(k), float(Y), float(dt)
        self.y, self.z, self.x, self.delta = float(y0), float(z0), 0.0, 0.0
        self.step = 0
        self.armed_plus = True
        self.armed_minus = True
        self.stage = 0
        self.s = 0
        self.i_start = self.i_mid = 0
        self.x_start = self.x_mid = self.delta_start = 0.0
        self.completed = False
        self.n_events = 0
        self.last_s = 0
        self.last_start = self.last_mid = self.last_end = 0
        self.last_half = self.last_full = self.last_plastic = 0.0
        self._observe()

    def _observe(self):
        Y = self.Y
        ev = 0
        if self.z == Y:
            if self.armed_plus and self.y <= 0.0:
                self.armed_plus = False
                ev = 1
        elif self.z == -Y:
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
            self.i_start, self.x_start, self.delta_start = self.step, self.x, self.delta
            self.stage = 1
        elif self.stage == 1:
            if ev == -self.s:
                self.i_mid, self.x_mid = self.step, self.x
                self.stage = 2
        elif ev == self.s:
            self.last_s = self.s
            self.last_start, self.last_mid, self.last_end = self.i_start, self.i_mid, self.step
            self.last_half = self.x_mid - self.x_start
            self.last_full = self.x - self.x_start
            self.last_plastic = self.delta - self.delta_start
            self.i_start, self.x_start, self.delta_start = self.step, self.x, self.delta
            self.stage = 1
            return True
        return False

    def feed(self, dW):
        """Consume increments until a cycle completes; return how many were used."""
        c0, k, Y, dt = self.c0, self.k, self.Y, self.dt
        self.completed = False
        n = len(dW)
        for m in range(n):
            w = float(dW[m])
            y, z = self.y, self.z
            zp = z + y * dt
            self.x = self.x + y * dt
            self.y = y - (c0 * y + k * z) * dt + w
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
                return m + 1
        return n
