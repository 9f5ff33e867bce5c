"""Twisted double regular polygons and the explicit 2N-body systems they define.

Units are normalised so that the first ring has circumradius 1 and its bodies
carry mass ``m`` (default 1). The second ring sits at height ``h``, is scaled
by ``a``, rotated by the twist ``theta`` and carries mass ``b * m`` per body.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._summation import csum
from .errors import CollisionError, InadmissibleTwistError, ParameterError

TWO_PI = 2.0 * math.pi
COLLISION_TOL = 1e-9


def vertex_angles(N, theta=0.0):
    """Angles ``2*pi*k/N + theta`` for k = 1..N, in ring order.

    When ``theta`` is an exact integer multiple of ``pi/N`` (as produced by
    ``q * math.pi / N``) the angles are formed from integers reduced into
    (-pi, pi], so that mirror-image vertices get bit-identical cosines and
    opposite sines. Otherwise the float sum is used as is.
    """
    k = np.arange(1, N + 1)
    q = round(theta * N / math.pi)
    if q * math.pi / N == theta:
        j = (2 * k + q) % (2 * N)
        j = np.where(j > N, j - 2 * N, j)
        return math.pi * j / N
    return TWO_PI * k / N + theta


def admissible_twist(N, theta):
    """Return the canonical twist for ``theta`` in {0, pi/N} or raise.

    Only these two twists can carry a central configuration, so the reduced
    conditions refuse anything else. Values within a few ulps of ``pi/N`` (or of
    0 / 2*pi) are snapped to the exact constant.
    """
    t = float(theta) % TWO_PI
    if t == 0.0 or math.isclose(t, TWO_PI, rel_tol=1e-14):
        return 0.0
    if math.isclose(t, math.pi / N, rel_tol=1e-14, abs_tol=0.0):
        return math.pi / N
    raise InadmissibleTwistError(
        f"twist angle {theta!r} is not 0 or pi/N (pi/{N} = {math.pi / N!r})"
    )


@dataclass(frozen=True)
class TwistedPolygonParams:
    """Parameters (N, a, b, h, theta, m) of a twisted double polygon.

    ``theta`` is stored reduced modulo 2*pi; no reduction modulo 2*pi/N is
    applied.
    """

    N: int
    a: float
    b: float
    h: float
    theta: float
    m: float = 1.0

    def __post_init__(self):
        N = self.N
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 2:
            raise ParameterError(f"N must be an integer >= 2, got {N!r}")
        object.__setattr__(self, "N", int(N))
        for name in ("a", "b", "h", "theta", "m"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        for name in ("a", "b", "m"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.h < 0.0:
            raise ParameterError(f"h must be >= 0, got {self.h!r}")
        t = self.theta % TWO_PI
        if t == TWO_PI:
            t = 0.0
        object.__setattr__(self, "theta", t)

    def to_dict(self):
        return {"N": self.N, "a": self.a, "b": self.b, "h": self.h,
                "theta": self.theta, "m": self.m}

    @classmethod
    def from_dict(cls, d):
        return cls(N=d["N"], a=d["a"], b=d["b"], h=d["h"], theta=d["theta"],
                   m=d.get("m", 1.0))


def _closest_pair(positions):
    d = positions[:, None, :] - positions[None, :, :]
    r = np.sqrt(np.einsum("ijk,ijk->ij", d, d))
    np.fill_diagonal(r, np.inf)
    i, j = np.unravel_index(np.argmin(r), r.shape)
    return (int(min(i, j)), int(max(i, j))), float(r[i, j])


@dataclass(frozen=True, eq=False)
class BodySystem:
    """Point masses with 3-D positions.

    Arrays are copied and made read-only on construction. ``meta`` optionally
    echoes the polygon parameters the system was built from.
    """

    masses: np.ndarray
    positions: np.ndarray
    meta: TwistedPolygonParams | None = field(default=None)

    def __post_init__(self):
        m = np.array(self.masses, dtype=float).reshape(-1)
        q = np.array(self.positions, dtype=float)
        if q.ndim != 2 or q.shape[1] != 3 or q.shape[0] != m.shape[0]:
            raise ParameterError(
                f"positions must have shape ({m.shape[0]}, 3), got {q.shape}")
        if m.shape[0] < 2:
            raise ParameterError("a body system needs at least two bodies")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(q))):
            raise ParameterError("masses and positions must be finite")
        if np.any(m <= 0.0):
            raise ParameterError("all masses must be > 0")
        pair, dist = _closest_pair(q)
        if dist <= COLLISION_TOL:
            raise CollisionError(
                f"bodies {pair[0]} and {pair[1]} coincide (distance {dist:.3g})", pair)
        m.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", q)

    @property
    def n(self):
        return self.masses.shape[0]

    @property
    def total_mass(self):
        return csum(self.masses)

    @property
    def bodies(self):
        return [(float(mk), tuple(float(c) for c in qk))
                for mk, qk in zip(self.masses, self.positions)]

    def to_dict(self):
        d = {"bodies": [{"mass": mk, "position": list(qk)} for mk, qk in self.bodies]}
        if self.meta is not None:
            d["meta"] = self.meta.to_dict()
        return d

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d):
        try:
            bodies = d["bodies"]
            masses = [b["mass"] for b in bodies]
            positions = [b["position"] for b in bodies]
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed body system document: {exc}") from exc
        meta = d.get("meta")
        return cls(masses, positions,
                   TwistedPolygonParams.from_dict(meta) if meta else None)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def build_configuration(params: TwistedPolygonParams) -> BodySystem:
    """Place the 2N bodies of a twisted double polygon.

    Body k (k = 1..N) sits at (cos t_k, sin t_k, 0) with mass m, and body N+k at
    (a cos(t_k + theta), a sin(t_k + theta), h) with mass b*m, where
    t_k = 2*pi*k/N.

    Raises
    ------
    CollisionError
        If two bodies coincide, which happens only for h = 0, a = 1 and theta
        a multiple of 2*pi/N.
    """
    N, a, h = params.N, params.a, params.h
    lower = vertex_angles(N, 0.0)
    upper = vertex_angles(N, params.theta)
    positions = np.empty((2 * N, 3))
    positions[:N, 0] = np.cos(lower)
    positions[:N, 1] = np.sin(lower)
    positions[:N, 2] = 0.0
    positions[N:, 0] = a * np.cos(upper)
    positions[N:, 1] = a * np.sin(upper)
    positions[N:, 2] = h
    masses = np.concatenate([np.full(N, params.m), np.full(N, params.b * params.m)])
    return BodySystem(masses, positions, params)


def center_of_mass(sys: BodySystem) -> np.ndarray:
    """Centre of mass ``sum(m_k q_k) / M``; ``M`` is ``sys.total_mass``."""
    M = sys.total_mass
    weighted = sys.masses[:, None] * sys.positions
    return np.array([csum(weighted[:, c]) for c in range(3)]) / M
