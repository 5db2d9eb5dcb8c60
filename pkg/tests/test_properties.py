import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from eppdrift import validate_params
from eppdrift.cycles import BoundaryRestEvent, extract_cycles
from eppdrift.estimators import ci_95
from eppdrift.noise import NoisePath
from eppdrift.sde import State, euler_step, simulate_trajectory

finite = st.floats(-50, 50, allow_nan=False)
params = st.builds(
    lambda c0, r, Y: validate_params(c0, (1 + r) * c0 * c0 / 4, Y),
    st.floats(0.1, 3.0), st.floats(0.01, 3.0), st.floats(0.01, 2.0),
)


@given(params, finite, st.floats(-1, 1), finite, st.floats(1e-5, 0.5))
def test_step_stays_in_band(p, y, frac, dw, dt):
    z = frac * p.Y
    s = euler_step(p, State(0.0, y, z), dw, dt)
    assert abs(s.z) <= p.Y
    assert s.y == y - (p.c0 * y + p.k * z) * dt + dw


@settings(max_examples=25, deadline=None)
@given(params, st.integers(0, 2**32 - 1))
def test_path_invariants(p, seed):
    dt = min(1e-3, p.Y / (120 * p.velocity_scale))
    rng = np.random.default_rng(seed)
    noise = NoisePath(seed, dt, rng.standard_normal(2000) * math.sqrt(dt))
    a = simulate_trajectory(p, 2000 * dt, dt, noise=noise)
    b = simulate_trajectory(p, 2000 * dt, dt, noise=-noise)
    assert np.all(np.abs(a.z) <= p.Y)
    assert np.array_equal(a.z, -b.z) and np.array_equal(a.delta, -b.delta)
    np.testing.assert_allclose(a.x, a.z + a.delta, rtol=0, atol=1e-9 * max(1.0, np.abs(a.x).max()))


@given(st.lists(st.tuples(st.sampled_from([-1, 1]), st.floats(0.001, 5)), max_size=40))
def test_cycles_alternate_and_tile(steps):
    t, events = 0.0, []
    for side, gap in steps:
        t += gap
        events.append(BoundaryRestEvent(t, side, len(events)))
    cycles = extract_cycles(events)
    for c in cycles:
        assert c.s == events[0].side
        assert c.t_start < c.t_mid < c.t_end
    for a, b in zip(cycles, cycles[1:]):
        assert a.t_end == b.t_start


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200), st.randoms())
def test_ci_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    a, b = ci_95(xs), ci_95(ys)
    assert a.value == b.value and a.sample_std == b.sample_std
    assert a.ci_low <= a.value <= a.ci_high
