import numpy as np
import pytest

from eppdrift import kernels
from eppdrift.noise import gaussian_increments

BACKENDS = kernels.available()


def _run(name, fn):
    prev = kernels.use_backend(name)
    try:
        return fn(kernels.get())
    finally:
        kernels.use_backend(prev)


class TestSelection:
    def test_python_always_available(self):
        assert "python" in BACKENDS

    def test_default_prefers_compiled(self):
        if "compiled" in BACKENDS:
            assert kernels.backend_name() == "compiled"

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
class TestParity:
    """The compiled and pure-Python kernels produce bit-identical output."""

    args = (1.0, 1.0, 0.3, 1e-3)

    def test_simulate_path(self):
        dW = gaussian_increments(5, 1e-3, 20000).increments
        out = [_run(b, lambda k: k.simulate_path(*self.args, 0.0, 0.0, dW)) for b in BACKENDS]
        for a, b in zip(out[0], out[1]):
            assert np.array_equal(np.asarray(a), np.asarray(b))

    def test_advance(self):
        dW = gaussian_increments(6, 1e-3, 20000).increments

        def go(k):
            state = np.array([0.1, -0.2, 0.0, 0.0])
            k.advance(*self.args, state, dW)
            return state

        a, b = (_run(name, go) for name in BACKENDS)
        assert np.array_equal(a, b)

    def test_cycle_tracker(self):
        dW = gaussian_increments(8, 1e-3, 200000).increments

        def go(k):
            tr = k.CycleTracker(*self.args, 0.0, 0.0)
            rows, pos = [], 0
            while pos < len(dW):
                pos += tr.feed(dW[pos:])
                if tr.completed:
                    rows.append((tr.last_s, tr.last_start, tr.last_mid, tr.last_end,
                                 tr.last_half, tr.last_full, tr.last_plastic))
            return rows

        a, b = (_run(name, go) for name in BACKENDS)
        assert len(a) > 5
        assert a == b


class TestAdvance:
    def test_matches_simulate_path(self, backend):
        k = kernels.get()
        dW = gaussian_increments(9, 1e-3, 5000).increments
        y, z, x, d = k.simulate_path(1.0, 1.0, 0.2, 1e-3, 0.0, 0.0, dW)
        state = np.array([0.0, 0.0, 0.0, 0.0])
        k.advance(1.0, 1.0, 0.2, 1e-3, state, dW[:2000])
        k.advance(1.0, 1.0, 0.2, 1e-3, state, dW[2000:])
        assert list(state) == [y[-1], z[-1], x[-1], d[-1]]


def test_fallback_when_extension_missing(monkeypatch):
    import importlib
    import sys

    import eppdrift

    monkeypatch.setitem(sys.modules, "eppdrift._ckernels", None)
    monkeypatch.delattr(eppdrift, "_ckernels", raising=False)
    fresh = importlib.reload(kernels)
    try:
        assert fresh.available() == ["python"]
        assert fresh.backend_name() == "python"
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
