"""Release-from-rest integration as a dynamical check of central configurations.

A central configuration released with zero velocity collapses homothetically:
all mutual distances shrink by the same factor. Any other configuration
distorts. The integrator is a fourth-order symmetric composition of
kick-drift-kick leapfrog (Yoshida), with step halving whenever the relative
energy error exceeds a bound.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .newtonian import lambda_of
from .polygon import COLLISION_TOL, BodySystem

_CBRT2 = 2.0 ** (1.0 / 3.0)
_W1 = 1.0 / (2.0 - _CBRT2)
_W0 = -_CBRT2 / (2.0 - _CBRT2)
DRIFT_COEFFS = (0.5 * _W1, 0.5 * (_W0 + _W1), 0.5 * (_W0 + _W1), 0.5 * _W1)
KICK_COEFFS = (_W1, _W0, _W1)

DEFAULT_T_END = 0.2
ENERGY_TOL = 1e-6
DT_MIN = 1e-9


@dataclass(frozen=True)
class TrajectoryReport:
    times: list
    shape_drift: list
    energy_rel_drift: list
    energy_drift: float
    max_linear_momentum: float
    max_angular_momentum: float
    halted_early: bool
    dt: float

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "shape_drift", "energy_rel_drift"])
        for row in zip(self.times, self.shape_drift, self.energy_rel_drift):
            w.writerow([f"{v:.17g}" for v in row])


def accelerations(m, q):
    d = q[None, :, :] - q[:, None, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, np.inf)
    w = m[None, :] * r2**-1.5
    return np.einsum("ij,ijk->ik", w, d)


def _pair_distances(q):
    iu = np.triu_indices(q.shape[0], 1)
    return np.linalg.norm(q[iu[0]] - q[iu[1]], axis=1)


def energy(m, q, v):
    kinetic = 0.5 * math.fsum((m * np.einsum("ij,ij->i", v, v)).tolist())
    iu = np.triu_indices(m.shape[0], 1)
    pot = math.fsum((m[iu[0]] * m[iu[1]] / _pair_distances(q)).tolist())
    return kinetic - pot


def shape_drift(r0, r):
    """Max over pairs of |r/r0 - s| with s the median distance ratio."""
    ratio = r / r0
    return float(np.max(np.abs(ratio - np.median(ratio))))


def _step(m, q, v, dt):
    for i in range(3):
        q = q + DRIFT_COEFFS[i] * dt * v
        v = v + KICK_COEFFS[i] * dt * accelerations(m, q)
    q = q + DRIFT_COEFFS[3] * dt * v
    return q, v


def collapse_time(lam):
    """Free-fall time of a homothetic collapse with constant ``lam``."""
    return math.pi / (2.0 * math.sqrt(2.0 * lam))


def default_t_end(sys):
    return min(DEFAULT_T_END, collapse_time(lambda_of(sys)) / 4.0)


def integrate_release(sys: BodySystem, t_end=None, dt=1e-3, energy_tol=ENERGY_TOL,
                      dt_min=DT_MIN) -> TrajectoryReport:
    """Integrate ``sys`` from rest up to ``t_end``.

    ``t_end`` defaults to ``min(0.2, T_collapse / 4)`` with ``T_collapse`` the
    homothetic free-fall time for lambda = U/I. A step whose relative energy
    error exceeds ``energy_tol`` is retried at half the step size; the run stops
    early if two bodies come within ten collision tolerances.

    Raises
    ------
    IntegrationError
        If the step would have to drop below ``dt_min``.
    """
    if t_end is None:
        t_end = default_t_end(sys)
    m = np.array(sys.masses)
    q = np.array(sys.positions)
    v = np.zeros_like(q)
    r0 = _pair_distances(q)
    e0 = energy(m, q, v)
    close = 10.0 * COLLISION_TOL

    times, drift, e_rel = [0.0], [0.0], [0.0]
    p_max = l_max = 0.0
    t = 0.0
    halted = False
    while t < t_end * (1.0 - 1e-14):
        h = min(dt, t_end - t)
        while True:
            q_new, v_new = _step(m, q, v, h)
            rel = abs((energy(m, q_new, v_new) - e0) / e0)
            if rel <= energy_tol:
                break
            h *= 0.5
            dt = min(dt, h)
            if h < dt_min:
                raise IntegrationError(
                    f"step size fell below {dt_min} at t={t} (energy error {rel:.3g})")
        q, v, t = q_new, v_new, t + h
        r = _pair_distances(q)
        times.append(t)
        drift.append(shape_drift(r0, r))
        e_rel.append(rel)
        mv = m[:, None] * v
        p_max = max(p_max, float(np.linalg.norm(mv.sum(axis=0))))
        l_max = max(l_max, float(np.linalg.norm(np.cross(q, mv).sum(axis=0))))
        if r.min() < close:
            halted = True
            break
    return TrajectoryReport(times, drift, e_rel, max(e_rel), p_max, l_max, halted, dt)
