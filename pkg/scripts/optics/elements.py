"""Rotation and squeeze matrices acting on the transverse (x, y) field components."""
import numpy as np

from scripts.common.matrices import Mat2


def rotation(alpha: float) -> Mat2:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]])


def squeeze_axis(beta: float) -> Mat2:
    """Expand x by e^beta and contract y by e^-beta."""
    return np.array([[np.exp(beta), 0.0], [0.0, np.exp(-beta)]])


def squeeze_at_angle(theta: float, w: float) -> Mat2:
    """
    Squeeze along the direction at angle `theta` from the x axis.

    Built as rotation(theta) @ squeeze_axis(w) @ rotation(-theta), so the
    diagonal carries cos(2*theta). At theta = pi/4 the matrix is
    [[cosh w, sinh w], [sinh w, cosh w]].
    """
    return rotation(theta) @ squeeze_axis(w) @ rotation(-theta)


def squeeze_45(w: float) -> Mat2:
    ch, sh = np.cosh(w), np.sinh(w)
    return np.array([[ch, sh], [sh, ch]])
