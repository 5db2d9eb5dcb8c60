import math

import numpy as np
import pytest

from eppdrift import NonPositiveParam, OverdampedParam, validate_params
from eppdrift.noise import (
    CHUNK,
    NoisePath,
    gaussian_increments,
    increment_chunks,
    substream,
)


class TestParams:
    def test_reference_set(self):
        p = validate_params(1, 1, 0.5)
        assert p.omega == pytest.approx(math.sqrt(3) / 2, rel=1e-15)
        assert p.velocity_scale == pytest.approx(1 / math.sqrt(2))

    def test_critical_damping_rejected(self):
        with pytest.raises(OverdampedParam):
            validate_params(2, 1, 0.5)

    @pytest.mark.parametrize("args", [(1, 1, 0), (0, 1, 0.5), (1, -1, 0.5), (1, 1, float("nan"))])
    def test_nonpositive(self, args):
        with pytest.raises(NonPositiveParam):
            validate_params(*args)

    def test_frozen(self):
        p = validate_params(1, 1, 0.5)
        with pytest.raises(Exception):
            p.Y = 2.0


class TestNoise:
    def test_empty(self):
        path = gaussian_increments(7, 0.01, 0)
        assert len(path) == 0

    def test_moments(self):
        dt, n = 0.01, 10**5
        inc = gaussian_increments(7, dt, n).increments
        assert abs(inc.mean()) < 4 * math.sqrt(dt / n)
        assert inc.var() == pytest.approx(dt, rel=0.05)

    def test_repeatable(self):
        a = gaussian_increments(7, 0.01, 1000).increments
        b = gaussian_increments(7, 0.01, 1000).increments
        assert np.array_equal(a, b)

    def test_keys_separate_streams(self):
        a = gaussian_increments(7, 0.01, 100, 0, 0, 1).increments
        b = gaussian_increments(7, 0.01, 100, 0, 0, 2).increments
        assert not np.array_equal(a, b)

    def test_chunks_concatenate_to_one_draw(self):
        n = 2 * CHUNK + 17
        whole = gaussian_increments(3, 1e-3, n, 1, 2).increments
        gen = increment_chunks(substream(3, 1, 2), 1e-3)
        parts = np.concatenate([next(gen) for _ in range(3)])[:n]
        assert np.array_equal(whole, parts)

    def test_coarsen_sums_blocks(self):
        path = NoisePath(0, 0.1, np.arange(10.0))
        c = path.coarsen(5)
        assert c.dt == pytest.approx(0.5)
        assert list(c.increments) == [10.0, 35.0]

    def test_negation(self):
        path = gaussian_increments(1, 0.1, 5)
        assert np.array_equal((-path).increments, -path.increments)
