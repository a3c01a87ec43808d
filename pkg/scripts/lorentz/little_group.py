"""
Four-by-four Lorentz transformations over (x, y, z, t) with c = 1.

Boosts and rotations that generate Wigner's little groups, the gauge
transformation of a light-like momentum, rapidity relations, and the lift
that turns a real unimodular 2x2 matrix into the Lorentz transformation it
induces on Hermitian coordinate matrices.
"""
import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from scripts.common.matrices import METRIC, FourVector, Mat2, Mat4, apply4, as_mat2, as_mat4, det2, mul4
from scripts.common.utils import NumericDefaults, ValidationError, ValidationUtils

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Massive:
    mass: float
    momentum: float
    name = 'massive'

    def __post_init__(self):
        ValidationUtils.require_finite(mass=self.mass, momentum=self.momentum)
        ValidationUtils.require_positive(mass=self.mass)
        ValidationUtils.require_non_negative(momentum=self.momentum)


@dataclass(frozen=True)
class Spacelike:
    momentum: float
    energy: float
    name = 'spacelike'

    def __post_init__(self):
        ValidationUtils.require_finite(momentum=self.momentum, energy=self.energy)
        ValidationUtils.require_positive(momentum=self.momentum)
        ValidationUtils.require_non_negative(energy=self.energy)
        if self.energy >= self.momentum:
            raise ValidationError(
                f"not space-like: energy {self.energy!r} must be below momentum {self.momentum!r}"
            )


@dataclass(frozen=True)
class Lightlike:
    momentum: float
    name = 'lightlike'

    def __post_init__(self):
        ValidationUtils.require_finite(momentum=self.momentum)
        ValidationUtils.require_positive(momentum=self.momentum)


LittleGroupKind = Union[Massive, Spacelike, Lightlike]


class LiftConvention:
    """
    Coordinate matrix X = t I + x sigma_1 + y sigma_2 + z sigma_3, acted on by X -> M X M^T.

    det X = t^2 - x^2 - y^2 - z^2, so any real M with det M = 1 preserves
    the Minkowski norm. The y part is sigma_2 = i J and M J M^T = det(M) J,
    so y never moves. With this convention a 2x2 rotation by alpha becomes
    a z-x rotation by 2 alpha, diag(e^eta, e^-eta) becomes a z boost with
    cosh(2 eta), and the 45 degree squeeze becomes an x boost.
    """
    SIGMA_0 = np.eye(2, dtype=complex)
    SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
    SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

    @staticmethod
    def coordinate_matrix(v: FourVector) -> np.ndarray:
        v = FourVector(*v)
        return (v.t * LiftConvention.SIGMA_0 + v.x * LiftConvention.SIGMA_1
                + v.y * LiftConvention.SIGMA_2 + v.z * LiftConvention.SIGMA_3)

    @staticmethod
    def coordinates(x_matrix: np.ndarray) -> FourVector:
        t = 0.5 * (x_matrix[0, 0] + x_matrix[1, 1]).real
        z = 0.5 * (x_matrix[0, 0] - x_matrix[1, 1]).real
        return FourVector(float(x_matrix[1, 0].real), float(x_matrix[1, 0].imag), float(z), float(t))


def _block(i: int, j: int, a: float, b: float, c: float, d: float) -> Mat4:
    """Identity with the (i, j) plane replaced by [[a, b], [c, d]]."""
    out = np.eye(4)
    out[i, i], out[i, j], out[j, i], out[j, j] = a, b, c, d
    return out


def boost_z(eta: float) -> Mat4:
    ch, sh = math.cosh(2 * eta), math.sinh(2 * eta)
    return _block(2, 3, ch, sh, sh, ch)


def boost_x(w: float) -> Mat4:
    ch, sh = math.cosh(2 * w), math.sinh(2 * w)
    return _block(0, 3, ch, sh, sh, ch)


def rot_zx(angle: float) -> Mat4:
    """Rotation about the y axis: x' = x cos + z sin, z' = -x sin + z cos."""
    c, s = math.cos(angle), math.sin(angle)
    return _block(0, 2, c, s, -s, c)


def rot_xy(angle: float) -> Mat4:
    """Rotation about the z axis; every momentum along z is invariant under it."""
    c, s = math.cos(angle), math.sin(angle)
    return _block(0, 1, c, -s, s, c)


def gauge_matrix(g: float) -> Mat4:
    """E(2)-like transformation leaving (0, 0, p, p) invariant; equals lift([[1, 2g], [0, 1]])."""
    a, b = 2 * g, 2 * g * g
    return np.array([
        [1.0, 0.0, -a, a],
        [0.0, 1.0, 0.0, 0.0],
        [a, 0.0, 1.0 - b, b],
        [a, 0.0, -b, 1.0 + b],
    ])


def lift(m: Mat2, tol: float = NumericDefaults.UNIMODULAR_TOL) -> Mat4:
    """
    The Lorentz transformation induced by a unimodular real 2x2 matrix.

    Columns are read off by transporting each basis four-vector through
    X -> m X m^T. Overall scalars such as exp(-lambda z) must be removed
    by the caller first.

    Raises:
        ValidationError: if |det m - 1| > tol
    """
    m = as_mat2(m)
    det = det2(m)
    if abs(det - 1.0) > tol:
        logger.warning(f"lift: matrix is not unimodular (det={det!r}); strip overall scalars first")
        raise ValidationError(f"lift requires det = 1 within {tol}, got {det!r}")

    columns = []
    for basis in np.eye(4):
        x_matrix = m @ LiftConvention.coordinate_matrix(FourVector.from_array(basis)) @ m.T
        columns.append(LiftConvention.coordinates(x_matrix).as_array())
    return np.column_stack(columns)


def _half_atanh(x: float) -> float:
    """0.5 * atanh(x) in log form, refusing arguments on or beyond the light cone."""
    if 1.0 - abs(x) < NumericDefaults.LIGHT_CONE_GUARD:
        raise ValidationError(f"rapidity argument {x!r} is on or beyond the light cone")
    return 0.25 * math.log((1.0 + x) / (1.0 - x))


def rapidity_massive(p: float, m: float) -> float:
    """eta with tanh(2 eta) = p / sqrt(p^2 + m^2)."""
    ValidationUtils.require_finite(p=p, m=m)
    ValidationUtils.require_positive(m=m)
    ValidationUtils.require_non_negative(p=p)
    return _half_atanh(p / math.hypot(p, m))


def rapidity_spacelike(p: float, e: float) -> float:
    """eta with tanh(2 eta) = E / p."""
    ValidationUtils.require_finite(p=p, e=e)
    ValidationUtils.require_positive(p=p)
    ValidationUtils.require_non_negative(e=e)
    if e >= p:
        raise ValidationError(f"not space-like: energy {e!r} must be below momentum {p!r}")
    return _half_atanh(e / p)


def reference_vector(kind: LittleGroupKind) -> FourVector:
    if isinstance(kind, Massive):
        return FourVector(0.0, 0.0, kind.momentum, math.hypot(kind.momentum, kind.mass))
    if isinstance(kind, Spacelike):
        return FourVector(0.0, 0.0, kind.momentum, kind.energy)
    return FourVector(0.0, 0.0, kind.momentum, kind.momentum)


def little_group_element(kind: LittleGroupKind, param: float) -> Mat4:
    """
    A little-group transformation for the kind's reference momentum.

    Massive: boost_z(eta) rot_zx(param) boost_z(-eta); space-like:
    boost_z(eta) boost_x(param) boost_z(-eta); light-like: gauge_matrix(param).
    """
    ValidationUtils.require_finite(param=param)
    if isinstance(kind, Massive):
        eta = rapidity_massive(kind.momentum, kind.mass)
        return mul4(mul4(boost_z(eta), rot_zx(param)), boost_z(-eta))
    if isinstance(kind, Spacelike):
        eta = rapidity_spacelike(kind.momentum, kind.energy)
        return mul4(mul4(boost_z(eta), boost_x(param)), boost_z(-eta))
    if isinstance(kind, Lightlike):
        return gauge_matrix(param)
    raise ValidationError(f"unknown little-group kind: {kind!r}")


def invariance_residual(l: Mat4, v: FourVector) -> float:
    """Euclidean distance between v and its image under l."""
    v = FourVector(*v)
    return float(np.linalg.norm(apply4(l, v).as_array() - v.as_array()))


def lorentz_defect(l: Mat4) -> float:
    """Frobenius norm of L^T g L - g."""
    l = as_mat4(l)
    return float(np.linalg.norm(l.T @ METRIC @ l - METRIC))


def is_lorentz(l: Mat4, tol: float = 1e-12) -> bool:
    """Lorentz test relative to ||L||^2, the scale at which L^T g L is rounded."""
    scale = max(1.0, float(np.linalg.norm(as_mat4(l))) ** 2)
    return lorentz_defect(l) <= tol * scale
