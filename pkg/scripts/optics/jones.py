import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from scripts.common.matrices import Mat2, as_mat2
from scripts.common.utils import ValidationUtils
from scripts.optics.medium import MediumParams, transfer_closed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JonesState:
    ex: complex
    ey: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.ex, self.ey], dtype=complex)

    @classmethod
    def from_array(cls, values) -> 'JonesState':
        ex, ey = np.asarray(values, dtype=complex)
        return cls(complex(ex), complex(ey))

    def scaled(self, factor: complex) -> 'JonesState':
        return JonesState(self.ex * factor, self.ey * factor)

    def __add__(self, other: 'JonesState') -> 'JonesState':
        return JonesState(self.ex + other.ex, self.ey + other.ey)

    @property
    def intensity(self) -> float:
        return abs(self.ex) ** 2 + abs(self.ey) ** 2

    @property
    def is_null(self) -> bool:
        return self.ex == 0 and self.ey == 0


@dataclass(frozen=True)
class CarrierPhase:
    """Common propagation phase exp(i(kz - wt)); named carrier_wavenumber to keep k free for the medium."""
    carrier_wavenumber: float = 0.0
    angular_frequency: float = 0.0

    def factor(self, z: float, t: float) -> complex:
        return cmath.exp(1j * (self.carrier_wavenumber * z - self.angular_frequency * t))


class PolarizationSummary(NamedTuple):
    intensity_x: float
    intensity_y: float
    intensity_total: float
    azimuth: float
    ellipticity_angle: float


class TrajectoryPoint(NamedTuple):
    z: float
    state: JonesState
    summary: PolarizationSummary


def jones_from_amp_phase(a: float, b: float, phi1: float, phi2: float) -> JonesState:
    """ex = A exp(i phi1), ey = B exp(i phi2)."""
    ValidationUtils.require_finite(A=a, B=b, phi1=phi1, phi2=phi2)
    ValidationUtils.require_non_negative(A=a, B=b)
    return JonesState(a * cmath.exp(1j * phi1), b * cmath.exp(1j * phi2))


def apply_carrier(state: JonesState, carrier: CarrierPhase, z: float, t: float) -> JonesState:
    return state.scaled(carrier.factor(z, t))


def propagate(state: JonesState, m: Mat2) -> JonesState:
    """Apply a real transfer matrix; real and imaginary parts transform alike."""
    return JonesState.from_array(as_mat2(m) @ state.as_array())


def stokes(state: JonesState) -> Tuple[float, float, float, float]:
    """
    Stokes parameters of a Jones state.

    s3 = -2 Im(ex * conj(ey)), which makes ex = 1/sqrt(2), ey = i/sqrt(2)
    come out with s3 = +1.
    """
    ix, iy = abs(state.ex) ** 2, abs(state.ey) ** 2
    cross = state.ex * state.ey.conjugate()
    return ix + iy, ix - iy, 2.0 * cross.real, -2.0 * cross.imag


def summarize(state: JonesState) -> PolarizationSummary:
    s0, s1, s2, s3 = stokes(state)
    ix, iy = abs(state.ex) ** 2, abs(state.ey) ** 2
    if s0 == 0:
        return PolarizationSummary(0.0, 0.0, 0.0, 0.0, 0.0)

    azimuth = 0.5 * math.atan2(s2, s1)
    # atan2(-0.0, negative) is -pi; keep the range (-pi/2, pi/2]
    if azimuth <= -math.pi / 2:
        azimuth += math.pi
    ellipticity = 0.5 * math.asin(min(1.0, max(-1.0, s3 / s0)))
    return PolarizationSummary(ix, iy, ix + iy, azimuth, ellipticity)


def trajectory(params: MediumParams,
               initial: JonesState,
               z_max: float,
               samples: int) -> List[TrajectoryPoint]:
    """Sample the propagated state at evenly spaced z in [0, z_max], endpoints included."""
    ValidationUtils.require_finite(z_max=z_max)
    ValidationUtils.require_positive(z_max=z_max)
    ValidationUtils.require_count('samples', samples, 2)

    points = []
    for z in np.linspace(0.0, z_max, samples):
        z = float(z)
        state = propagate(initial, transfer_closed(params, z).matrix)
        points.append(TrajectoryPoint(z, state, summarize(state)))
    logger.debug(f"trajectory: {samples} samples over [0, {z_max}]")
    return points


def wrap_azimuth(angle: float) -> float:
    """Reduce an angle modulo pi into (-pi/2, pi/2]."""
    wrapped = math.remainder(angle, math.pi)
    if wrapped <= -math.pi / 2:
        wrapped += math.pi
    return wrapped
