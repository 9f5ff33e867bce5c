"""Reduced ring sums x, y, z.

    x = sum_{k=1}^{N-1} (1 - rho_k) / |1 - rho_k|^3          (real)
    y = sum_{k=1}^{N} cos(t_k + theta) / D_k
    z = sum_{k=1}^{N} 1 / D_k,   D_k = [1 + a^2 - 2a cos(t_k + theta) + h^2]^(3/2)

with rho_k = exp(i t_k), t_k = 2*pi*k/N. Complex quantities are carried as
(real, imaginary) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._summation import csum
from .errors import ParameterError, SingularityError
from .polygon import admissible_twist, vertex_angles

IMAG_TOL = 1e-14


def _check_N(N):
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 2:
        raise ParameterError(f"N must be an integer >= 2, got {N!r}")


def kernel_x_parts(N):
    """Real and imaginary parts of the defining sum of x."""
    _check_N(N)
    phi = vertex_angles(N, 0.0)[:-1]  # k = 1..N-1, reduced into (-pi, pi]
    re = 2.0 * np.sin(0.5 * phi) ** 2  # 1 - cos(phi) without cancellation
    im = -np.sin(phi)
    mod3 = (re * re + im * im) ** 1.5
    return csum(re / mod3), csum(im / mod3)


def kernel_x(N: int) -> float:
    """x for an N-gon; the imaginary part of its defining sum must vanish."""
    re, im = kernel_x_parts(N)
    if abs(im) > IMAG_TOL * max(1.0, abs(re)):
        raise ArithmeticError(f"Im(x) = {im!r} does not vanish for N={N}")
    return re


def kernel_x_closed_form(N: int) -> float:
    """x = (1/4) sum_{k=1}^{N-1} csc(k pi / N)."""
    _check_N(N)
    k = np.arange(1, N)
    k = np.minimum(k, N - k)  # sin(k pi/N) = sin((N-k) pi/N); keeps the argument <= pi/2
    return 0.25 * csum(1.0 / np.sin(math.pi * k / N))


def _distance_sq(N, a, h, theta):
    phi = vertex_angles(N, theta)
    h = np.asarray(h, dtype=float)
    phi_b = phi.reshape((N,) + (1,) * h.ndim)
    # 1 + a^2 - 2a cos(phi) written to avoid cancellation near a = 1, phi = 0
    s = (1.0 - a) ** 2 + 4.0 * a * np.sin(0.5 * phi_b) ** 2 + h**2
    return phi_b, s


def kernel_yz(N: int, a: float, h, theta: float):
    """Return ``(y, z)``; ``h`` may be an array, in which case both are arrays.

    Raises
    ------
    SingularityError
        If some denominator vanishes (h = 0, a = 1, theta a multiple of
        2*pi/N).
    """
    _check_N(N)
    if not a > 0.0:
        raise ParameterError(f"a must be > 0, got {a!r}")
    if np.any(np.asarray(h) < 0.0):
        raise ParameterError("h must be >= 0")
    phi, s = _distance_sq(N, a, h, theta)
    if np.any(s <= 0.0):
        raise SingularityError(
            f"vanishing denominator in ring sums (N={N}, a={a}, theta={theta})")
    inv = s**-1.5
    y = csum(np.cos(phi) * inv)
    z = csum(inv)
    return y, z


def kernel_yz_dh(N: int, a: float, h, theta: float):
    """Derivatives ``(dy/dh, dz/dh)``; each term scales by ``-3h / s``."""
    _check_N(N)
    phi, s = _distance_sq(N, a, h, theta)
    if np.any(s <= 0.0):
        raise SingularityError(
            f"vanishing denominator in ring sums (N={N}, a={a}, theta={theta})")
    w = -3.0 * np.asarray(h, dtype=float) * s**-2.5
    return csum(np.cos(phi) * w), csum(w)


@dataclass(frozen=True)
class KernelValues:
    x: float
    y: float
    z: float
    N: int
    a: float
    h: float
    theta: float

    def to_dict(self):
        return {"x": self.x, "y": self.y, "z": self.z, "N": self.N,
                "a": self.a, "h": self.h, "theta": self.theta}


def kernel_values(N, a, h, theta) -> KernelValues:
    y, z = kernel_yz(N, a, float(h), theta)
    return KernelValues(kernel_x(N), float(y), float(z), int(N), float(a),
                        float(h), float(theta))


def check_theta_symmetry(N: int, a: float, h: float, theta: float) -> float:
    """Discrepancy between the ring sums at twist ``-theta`` and ``+theta``.

    Both sums are evaluated literally from float angles, so the returned value
    measures the reindexing identity itself rather than an exact-index shortcut.
    Only defined for theta in {0, pi/N} and h > 0.
    """
    _check_N(N)
    theta = admissible_twist(N, theta)
    if not h > 0.0:
        raise ParameterError(f"h must be > 0, got {h!r}")
    tk = 2.0 * math.pi * np.arange(1, N + 1) / N

    def ring_sum(angles):
        c = np.cos(angles)
        return csum(c / (1.0 + a * a - 2.0 * a * c + h * h) ** 1.5)

    return abs(ring_sum(tk - theta) - ring_sum(tk + theta))
