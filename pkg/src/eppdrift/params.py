"""Physical constants of the elasto-perfectly-plastic oscillator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NonPositiveParam, OverdampedParam


@dataclass(frozen=True)
class OscillatorParams:
    """Damping ``c0``, stiffness ``k`` and elasto-plastic bound ``Y``.

    ``omega`` is the damped natural frequency ``sqrt(4k - c0**2) / 2``.
    Construct through :func:`validate_params` to get the range checks.
    """

    c0: float
    k: float
    Y: float
    omega: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "omega", math.sqrt(max(4.0 * self.k - self.c0**2, 0.0)) / 2.0)

    @property
    def velocity_scale(self) -> float:
        """Stationary standard deviation of the velocity, ``1/sqrt(2 c0)``."""
        return 1.0 / math.sqrt(2.0 * self.c0)


def validate_params(c0: float, k: float, Y: float) -> OscillatorParams:
    c0, k, Y = float(c0), float(k), float(Y)
    for name, value in (("c0", c0), ("k", k), ("Y", Y)):
        if not value > 0.0:
            raise NonPositiveParam(f"{name} must be > 0, got {value!r}")
    if not 4.0 * k > c0 * c0:
        raise OverdampedParam(f"need 4k > c0^2 for an oscillating elastic phase (k={k}, c0={c0})")
    return OscillatorParams(c0, k, Y)
