"""
Fixed-shape real 2x2 / 4x4 linear algebra.

Holds the real generator basis of the Sp(2) algebra (J, K1, K2), the
Minkowski helpers used by the Lorentz side, and a scaled Taylor-series
matrix exponential that serves as an independent check on every closed
form in the package.
"""
import logging
import math
from typing import NamedTuple, Tuple

import numpy as np

from scripts.common.utils import NumericDefaults, SeriesConvergenceError, ValidationError

logger = logging.getLogger(__name__)

Mat2 = np.ndarray
Mat4 = np.ndarray

METRIC = np.diag([1.0, 1.0, 1.0, -1.0])


def _frozen(rows) -> np.ndarray:
    array = np.array(rows, dtype=float)
    array.flags.writeable = False
    return array


def as_mat2(a) -> Mat2:
    """Return `a` as a float 2x2 array, rejecting any other shape."""
    array = np.asarray(a, dtype=float)
    if array.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {array.shape}")
    return array


def as_mat4(a) -> Mat4:
    array = np.asarray(a, dtype=float)
    if array.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {array.shape}")
    return array


class GeneratorBasis:
    """Real forms of the three pure-imaginary generators: J = -i*sigma_2, K1 = -i*tau_3, K2 = -i*tau_1."""
    J = _frozen([[0, -1], [1, 0]])
    K1 = _frozen([[1, 0], [0, -1]])
    K2 = _frozen([[0, 1], [1, 0]])


class FourVector(NamedTuple):
    x: float
    y: float
    z: float
    t: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.t], dtype=float)

    @classmethod
    def from_array(cls, values) -> 'FourVector':
        x, y, z, t = (float(v) for v in np.asarray(values, dtype=float))
        return cls(x, y, z, t)


def identity2() -> Mat2:
    return np.eye(2)


def identity4() -> Mat4:
    return np.eye(4)


def mul2(a: Mat2, b: Mat2) -> Mat2:
    return as_mat2(a) @ as_mat2(b)


def det2(a: Mat2) -> float:
    a = as_mat2(a)
    return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def commutator2(a: Mat2, b: Mat2) -> Mat2:
    a, b = as_mat2(a), as_mat2(b)
    return a @ b - b @ a


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def taylor_series(a: Mat2, tol: float, max_terms: int) -> Tuple[Mat2, int]:
    """
    Sum a**n / n! until the next term is negligible.

    Args:
        a: 2x2 series argument
        tol: stop once ||term||_F <= tol * ||I||_F
        max_terms: highest power allowed before giving up

    Returns:
        Tuple of the partial sum and the highest power actually added.
    """
    a = as_mat2(a)
    threshold = tol * math.sqrt(2.0)
    term = identity2()
    total = identity2()
    for n in range(1, max_terms + 1):
        term = term @ a / n
        if np.linalg.norm(term) <= threshold:
            return total, n - 1
        total = total + term
    raise SeriesConvergenceError(
        f"Taylor series did not reach tol={tol} within {max_terms} terms"
    )


def expm2_series(a: Mat2,
                 tol: float = NumericDefaults.SERIES_TOL,
                 max_terms: int = NumericDefaults.SERIES_MAX_TERMS) -> Mat2:
    """Matrix exponential by scaling, truncated Taylor series, and repeated squaring."""
    a = as_mat2(a)
    if not tol > 0:
        raise ValidationError(f"tol must be > 0, got {tol!r}")
    if max_terms < 1:
        raise ValidationError(f"max_terms must be >= 1, got {max_terms!r}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("series argument must be finite")

    norm = float(np.linalg.norm(a))
    squarings = 0
    if norm > NumericDefaults.SERIES_SCALE_NORM:
        squarings = int(math.ceil(math.log2(norm / NumericDefaults.SERIES_SCALE_NORM)))

    # power-of-two scaling is exact in binary floating point
    result, terms = taylor_series(np.ldexp(a, -squarings), tol, max_terms)
    for _ in range(squarings):
        result = result @ result
    logger.debug(f"expm2_series: norm={norm:.6g}, squarings={squarings}, terms={terms}")
    return result


def mul4(a: Mat4, b: Mat4) -> Mat4:
    return as_mat4(a) @ as_mat4(b)


def apply4(a: Mat4, v: FourVector) -> FourVector:
    return FourVector.from_array(as_mat4(a) @ FourVector(*v).as_array())


def minkowski(u: FourVector, v: FourVector) -> float:
    """Bilinear form with signature (+, +, +, -) over (x, y, z, t)."""
    u, v = FourVector(*u), FourVector(*v)
    return u.x * v.x + u.y * v.y + u.z * v.z - u.t * v.t
