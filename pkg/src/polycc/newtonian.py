"""Brute-force Newtonian quantities for an arbitrary body system.

Everything here works from positions and masses alone, with no knowledge of
the polygon structure, so it serves as the oracle for the reduced conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError
from .polygon import COLLISION_TOL, BodySystem, center_of_mass

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CCReport:
    """Per-body residuals of the central-configuration equations."""

    lam: float
    residuals: np.ndarray
    max_residual: float
    is_central: bool
    tolerance: float

    def to_dict(self):
        return {
            "lambda": self.lam,
            "max_residual": self.max_residual,
            "is_central": self.is_central,
            "tolerance": self.tolerance,
            "residuals": self.residuals.tolist(),
        }


def _separations(sys):
    q = sys.positions
    d = q[None, :, :] - q[:, None, :]  # d[k, j] = q_j - q_k
    r = np.sqrt(np.einsum("ijk,ijk->ij", d, d))
    np.fill_diagonal(r, np.inf)
    k, j = np.unravel_index(np.argmin(r), r.shape)
    if r[k, j] <= COLLISION_TOL:
        pair = (int(min(k, j)), int(max(k, j)))
        raise CollisionError(f"bodies {pair[0]} and {pair[1]} collide", pair)
    return d, r


def potential(sys: BodySystem) -> float:
    """Positive potential ``U = sum_{k<j} m_k m_j / r_kj``."""
    _, r = _separations(sys)
    m = sys.masses
    iu = np.triu_indices(sys.n, 1)
    return math.fsum((m[iu[0]] * m[iu[1]] / r[iu]).tolist())


def moment_of_inertia(sys: BodySystem) -> float:
    """``I = sum m_k |q_k - c0|^2`` about the centre of mass."""
    rel = sys.positions - center_of_mass(sys)
    return math.fsum((sys.masses * np.einsum("ij,ij->i", rel, rel)).tolist())


def lambda_of(sys: BodySystem) -> float:
    return potential(sys) / moment_of_inertia(sys)


def cc_residual(sys: BodySystem, tolerance: float = DEFAULT_TOL) -> CCReport:
    """Residuals ``sum_j m_j m_k (q_j - q_k)/r_kj^3 + lam m_k (q_k - c0)``.

    ``lam`` is always U/I, never fitted, so the residual depends on the
    configuration alone. Each component is accumulated with ``math.fsum``.
    """
    d, r = _separations(sys)
    m = sys.masses
    lam = lambda_of(sys)
    c0 = center_of_mass(sys)
    pair = (m[:, None] * m[None, :] / r**3)[:, :, None] * d
    restoring = lam * m[:, None] * (sys.positions - c0)
    res = np.empty((sys.n, 3))
    for k in range(sys.n):
        for c in range(3):
            terms = pair[k, :, c].tolist()
            terms.append(restoring[k, c])
            res[k, c] = math.fsum(terms)
    max_res = float(np.max(np.abs(res)))
    return CCReport(lam, res, max_res, max_res <= tolerance, float(tolerance))
