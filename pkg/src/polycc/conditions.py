"""Reduced central-configuration conditions for twisted double polygons.

Two equivalent reduced systems are evaluated:

* the real pair   b a y = x - z   and   (b/a^2) x - b a z = y;
* three complex expressions that must all equal lambda * N / M.

Both are only meaningful for h > 0 and a twist of 0 or pi/N; any other twist
is rejected rather than silently evaluated.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._summation import csum
from .errors import ParameterError
from .kernels import kernel_x, kernel_x_parts, kernel_yz
from .newtonian import cc_residual
from .polygon import TwistedPolygonParams, admissible_twist, build_configuration, vertex_angles

IMAG_TOL = 1e-12


class ImaginaryPartWarning(RuntimeWarning):
    """An expression that should be real has a sizeable imaginary part."""


def _reduced(params):
    if not params.h > 0.0:
        raise ParameterError(f"reduced conditions need h > 0, got h={params.h!r}")
    return admissible_twist(params.N, params.theta)


def lemma32_residual(params: TwistedPolygonParams):
    """Residuals ``(b a y - (x - z), (b/a^2) x - b a z - y)``."""
    theta = _reduced(params)
    N, a, b = params.N, params.a, params.b
    x = kernel_x(N)
    y, z = kernel_yz(N, a, params.h, theta)
    return b * a * y - (x - z), (b / a**2) * x - b * a * z - y


def lemma32_norm(params):
    return max(abs(r) for r in lemma32_residual(params))


def _csum_complex(values):
    values = np.asarray(values, dtype=complex)
    return complex(csum(values.real), csum(values.imag))


def lemma34_values(params: TwistedPolygonParams):
    """The three right-hand sides, evaluated verbatim as complex numbers.

    Returns ``(first, second, third)`` where ``second`` is the manifestly real
    sum ``sum 1 / [|1 - a e^{i theta} rho_k|^2 + h^2]^(3/2)``.
    """
    theta = _reduced(params)
    N, a, b, h = params.N, params.a, params.b, params.h
    x = complex(*kernel_x_parts(N))
    rho = np.exp(1j * vertex_angles(N, 0.0))
    twist = cmath.exp(1j * theta)
    w = a * np.exp(1j * vertex_angles(N, theta))  # a e^{i theta} rho_k

    one_minus_w = 1.0 - w
    inv_lower = (np.abs(one_minus_w) ** 2 + h * h) ** -1.5
    first = (x + b * _csum_complex(one_minus_w * inv_lower)) / (1.0 + b)
    second = _csum_complex(inv_lower + 0j)

    # sum over k<N of b(1 - rho_k) e^{i theta} / (a^2 |1 - rho_k|^3) is b e^{i theta} x / a^2
    upper_minus_lower = a * twist - rho
    inv_upper = (np.abs(upper_minus_lower) ** 2 + h * h) ** -1.5
    inner = b * x * twist / a**2 + _csum_complex(upper_minus_lower * inv_upper)
    third = cmath.exp(-1j * theta) / (a * (1.0 + b)) * inner
    return first, second, third


def lemma34_residual(params: TwistedPolygonParams, imag_tol: float = IMAG_TOL):
    """Each of the three expressions minus lambda N / M (taken from the real one).

    Emits :class:`ImaginaryPartWarning` when the first or third expression has
    an imaginary part above ``imag_tol``.
    """
    values = lemma34_values(params)
    anchor = values[1].real
    for label, v in (("first", values[0]), ("third", values[2])):
        if abs(v.imag) > imag_tol:
            warnings.warn(f"{label} expression has imaginary part {v.imag:.3g}",
                          ImaginaryPartWarning, stacklevel=2)
    return [v - anchor for v in values]


def mixed_identity_residual(params: TwistedPolygonParams) -> float:
    """``y - (x - a b z)``; zero on the equal-ring solutions."""
    theta = _reduced(params)
    x = kernel_x(params.N)
    y, z = kernel_yz(params.N, params.a, params.h, theta)
    return y - (x - params.a * params.b * z)


@dataclass(frozen=True)
class ConditionResidual:
    r32_1: float
    r32_2: float
    r34: tuple
    lambda_n_over_m: float

    @property
    def norm(self):
        parts = [abs(self.r32_1), abs(self.r32_2)]
        for c in self.r34:
            parts += [abs(c.real), abs(c.imag)]
        return max(parts)

    def to_dict(self):
        return {"r32": [self.r32_1, self.r32_2],
                "r34": [[c.real, c.imag] for c in self.r34],
                "norm": self.norm}


def condition_residual(params: TwistedPolygonParams) -> ConditionResidual:
    r1, r2 = lemma32_residual(params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ImaginaryPartWarning)
        r34 = lemma34_residual(params)
    anchor = lemma34_values(params)[1].real
    return ConditionResidual(float(r1), float(r2), tuple(complex(c) for c in r34), anchor)


def full_tolerance(params, tol):
    """Tolerance on the full per-body residual matching ``tol`` on the reduced one."""
    return tol * params.m**2 * max(1.0, params.b)


def cross_validate(params: TwistedPolygonParams, tol: float = 1e-10) -> bool:
    """True when the reduced pair and the brute-force equations give the same verdict."""
    reduced_ok = lemma32_norm(params) < tol
    report = cc_residual(build_configuration(params))
    full_ok = report.max_residual < full_tolerance(params, tol)
    return reduced_ok == full_ok
