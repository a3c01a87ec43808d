"""
Optical activity combined with asymmetric attenuation.

A medium rotates the polarization at rate gamma and attenuates the x and y
components at rates mu1 and mu2. Per unit length the effect is generated by

    G = [[0, -(gamma - mu)], [gamma + mu, 0]],   mu = (mu2 - mu1) / 2,

and the macroscopic transfer matrix is exp(-lambda z) * exp(G z) with
lambda = (mu1 + mu2) / 2. The sign of gamma^2 - mu^2 selects the regime:
elliptic (oscillating), parabolic (shear) or hyperbolic (growth/decay).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from scripts.common.matrices import GeneratorBasis, Mat2, frobenius_distance, identity2
from scripts.common.utils import NumericDefaults, ValidationError, ValidationUtils
from scripts.optics.elements import rotation, squeeze_45, squeeze_axis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MediumParams:
    gamma: float
    mu1: float
    mu2: float

    def __post_init__(self):
        ValidationUtils.require_finite(gamma=self.gamma, mu1=self.mu1, mu2=self.mu2)
        if self.mu1 < 0 or self.mu2 < 0:
            logger.debug(f"Negative attenuation coefficient treated as gain: mu1={self.mu1}, mu2={self.mu2}")

    @classmethod
    def from_decomposed(cls, gamma: float, lam: float, mu: float) -> 'MediumParams':
        """Build from the isotropic loss lambda and the squeeze rate mu."""
        return cls(gamma=gamma, mu1=lam - mu, mu2=lam + mu)

    @property
    def lam(self) -> float:
        return decompose_attenuation(self.mu1, self.mu2)[0]

    @property
    def mu(self) -> float:
        return decompose_attenuation(self.mu1, self.mu2)[1]

    @property
    def has_gain(self) -> bool:
        return self.mu1 < 0 or self.mu2 < 0


@dataclass(frozen=True)
class Elliptic:
    k: float
    eta: float
    # sign of gamma; the rotation runs backwards for left-handed media
    orientation: int = 1
    name = 'elliptic'


@dataclass(frozen=True)
class Parabolic:
    gamma: float
    mu: Optional[float] = None
    name = 'parabolic'
    k = 0.0
    eta = None

    @property
    def effective_mu(self) -> float:
        return self.gamma if self.mu is None else self.mu


@dataclass(frozen=True)
class Hyperbolic:
    k: float
    eta: float
    # sign of mu; a negative squeeze rate swaps the growing and decaying axes
    orientation: int = 1
    name = 'hyperbolic'


Regime = Union[Elliptic, Parabolic, Hyperbolic]


@dataclass(frozen=True)
class TransferResult:
    matrix: Mat2
    regime: Regime
    lambda_factor: float

    @property
    def unimodular(self) -> Mat2:
        """The matrix with the isotropic loss stripped off."""
        return self.matrix / self.lambda_factor


def decompose_attenuation(mu1: float, mu2: float) -> Tuple[float, float]:
    ValidationUtils.require_finite(mu1=mu1, mu2=mu2)
    return (mu2 + mu1) / 2, (mu2 - mu1) / 2


def generator(gamma: float, mu: float) -> Mat2:
    ValidationUtils.require_finite(gamma=gamma, mu=mu)
    return np.array([[0.0, -(gamma - mu)], [gamma + mu, 0.0]])


def classify(gamma: float,
             mu: float,
             rel_tol: float = NumericDefaults.CLASSIFY_REL_TOL,
             floor: float = NumericDefaults.CLASSIFY_ABS_FLOOR) -> Regime:
    """
    Classify the generator of (gamma, mu) by the sign of gamma^2 - mu^2.

    Args:
        gamma: rotary power
        mu: squeeze rate (mu2 - mu1) / 2
        rel_tol: relative width of the parabolic band around |gamma| = |mu|
        floor: absolute lower bound on the band's scale

    Returns:
        Regime: Elliptic or Hyperbolic with k = sqrt(|gamma^2 - mu^2|) and
        exp(2 eta) = sqrt((gamma - mu) / (gamma + mu)) (elliptic) or
        sqrt((mu - gamma) / (mu + gamma)) (hyperbolic); Parabolic inside
        the band.
    """
    ValidationUtils.require_finite(gamma=gamma, mu=mu)
    if rel_tol < 0:
        raise ValidationError(f"rel_tol must be >= 0, got {rel_tol!r}")

    abs_gamma, abs_mu = abs(gamma), abs(mu)
    scale = max(abs_gamma, abs_mu, floor)
    if abs(abs_gamma - abs_mu) <= rel_tol * scale:
        regime = Parabolic(gamma=gamma, mu=mu)
    elif abs_gamma > abs_mu:
        k = math.sqrt((abs_gamma - abs_mu) * (abs_gamma + abs_mu))
        eta = 0.25 * math.log((gamma - mu) / (gamma + mu))
        regime = Elliptic(k=k, eta=eta, orientation=1 if gamma > 0 else -1)
    else:
        k = math.sqrt((abs_mu - abs_gamma) * (abs_mu + abs_gamma))
        eta = 0.25 * math.log((mu - gamma) / (mu + gamma))
        regime = Hyperbolic(k=k, eta=eta, orientation=1 if mu > 0 else -1)

    logger.debug(f"classify(gamma={gamma}, mu={mu}) -> {regime}")
    return regime


def squeeze_similarity(eta: float) -> Mat2:
    """B(eta), the z-independent squeeze that conjugates J or K2 into G / k."""
    return squeeze_axis(eta)


def regime_generator(regime: Regime) -> Mat2:
    """Rebuild G from a classified regime."""
    if isinstance(regime, Parabolic):
        return generator(regime.gamma, regime.effective_mu)

    b = squeeze_similarity(regime.eta)
    b_inv = squeeze_similarity(-regime.eta)
    core = GeneratorBasis.J if isinstance(regime, Elliptic) else GeneratorBasis.K2
    return regime.orientation * regime.k * (b @ core @ b_inv)


def _cos_sinc(delta: float, z: float) -> Tuple[float, float]:
    """
    Return (c, s) such that exp(G z) = [[c, -(gamma - mu) s], [(gamma + mu) s, c]].

    c is cos(sqrt(delta) z) and s is sin(sqrt(delta) z) / sqrt(delta), with
    the hyperbolic functions taking over for delta < 0 and a truncated
    series near delta * z^2 = 0, where both branches meet at (1, z).
    """
    x = delta * z * z
    if abs(x) < NumericDefaults.SMALL_ARGUMENT:
        c = 1.0 - x / 2.0 + x * x / 24.0
        s = z * (1.0 - x / 6.0 + x * x / 120.0)
    elif delta > 0:
        root = math.sqrt(delta)
        c = math.cos(root * z)
        s = math.sin(root * z) / root
    else:
        root = math.sqrt(-delta)
        c = math.cosh(root * z)
        s = math.sinh(root * z) / root
    return c, s


def _validate_length(z: float) -> None:
    ValidationUtils.require_finite(z=z)
    ValidationUtils.require_non_negative(z=z)


def transfer_closed(params: MediumParams,
                    z: float,
                    rel_tol: float = NumericDefaults.CLASSIFY_REL_TOL) -> TransferResult:
    """
    Macroscopic transfer matrix exp(-lambda z) * exp(G z) in closed form.

    One expression covers all three regimes, so the result is continuous
    across gamma = mu; the regime is reported alongside but never used to
    branch the arithmetic.
    """
    _validate_length(z)
    gamma, lam, mu = params.gamma, params.lam, params.mu
    regime = classify(gamma, mu, rel_tol)

    delta = (gamma - mu) * (gamma + mu)
    c, s = _cos_sinc(delta, z)
    lambda_factor = math.exp(-lam * z)
    matrix = lambda_factor * np.array([[c, -(gamma - mu) * s], [(gamma + mu) * s, c]])
    return TransferResult(matrix=matrix, regime=regime, lambda_factor=lambda_factor)


def microscopic_step(params: MediumParams, h: float) -> Mat2:
    """One thin slice of length h: exp(-lambda h) * S(pi/4, mu h) * R(gamma h)."""
    return math.exp(-params.lam * h) * (squeeze_45(params.mu * h) @ rotation(params.gamma * h))


def transfer_product(params: MediumParams, z: float, n: int) -> Mat2:
    """The n-fold product of thin slices, the ground truth for transfer_closed."""
    _validate_length(z)
    ValidationUtils.require_count('n', n, 1)
    step = microscopic_step(params, z / n)
    logger.debug(f"transfer_product: n={n}, h={z / n:.6g}")
    return np.linalg.matrix_power(step, n)


def transfer_first_order(params: MediumParams, z: float, n: int) -> Mat2:
    """exp(-lambda z) * (I + G z / n)^n, the slice product truncated at first order."""
    _validate_length(z)
    ValidationUtils.require_count('n', n, 1)
    step = identity2() + generator(params.gamma, params.mu) * (z / n)
    return math.exp(-params.lam * z) * np.linalg.matrix_power(step, n)


def transfer_naive(params: MediumParams, z: float) -> Mat2:
    """Rotation applied once after one macroscopic squeeze; ignores their interleaving."""
    _validate_length(z)
    return math.exp(-params.lam * z) * (rotation(params.gamma * z) @ squeeze_45(params.mu * z))


def transfer_decomposed(params: MediumParams,
                        z: float,
                        rel_tol: float = NumericDefaults.CLASSIFY_REL_TOL) -> TransferResult:
    """
    Transfer matrix through the regime's similarity transformation.

    Elliptic: B(eta) R(kz) B(-eta); hyperbolic: B(eta) exp(kz K2) B(-eta);
    parabolic: I + G z. Loses accuracy next to the parabolic band, where
    exp(2 eta) blows up; use transfer_closed there.
    """
    _validate_length(z)
    regime = classify(params.gamma, params.mu, rel_tol)
    lambda_factor = math.exp(-params.lam * z)

    if isinstance(regime, Parabolic):
        core = identity2() + generator(params.gamma, params.mu) * z
    else:
        angle = regime.orientation * regime.k * z
        inner = rotation(angle) if isinstance(regime, Elliptic) else squeeze_45(angle)
        core = squeeze_similarity(regime.eta) @ inner @ squeeze_similarity(-regime.eta)

    return TransferResult(matrix=lambda_factor * core, regime=regime, lambda_factor=lambda_factor)


def convergence_study(params: MediumParams, z: float, steps: Sequence[int]) -> List[Dict[str, float]]:
    """Distance between the slice product and the closed form for each step count."""
    reference = transfer_closed(params, z).matrix
    return [
        {'n': n, 'distance': frobenius_distance(transfer_product(params, z, n), reference)}
        for n in steps
    ]


def convergence_slope(study: Sequence[Dict[str, float]]) -> float:
    """Least-squares slope of log(distance) against log(n)."""
    n = np.array([row['n'] for row in study], dtype=float)
    distance = np.array([row['distance'] for row in study], dtype=float)
    slope, _ = np.polyfit(np.log10(n), np.log10(distance), 1)
    return float(slope)
