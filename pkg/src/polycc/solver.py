"""Height solve for equal rings, residual scans, and randomized property suites.

For equal sizes and masses (a = b = 1) the reduced conditions collapse to a
single equation in the height,

    f(h) = x - z(h) - y(h) = 0,

which is solved by bracketed bisection. Away from a = b = 1 the scanner
reports, per (a, b) cell, how close the reduced pair comes to vanishing over h.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import minimize_scalar, root

from .errors import ParameterError
from .kernels import kernel_x, kernel_x_closed_form, kernel_yz, kernel_yz_dh
from .newtonian import lambda_of
from .polygon import TwistedPolygonParams, admissible_twist, build_configuration

BISECT_WIDTH = 1e-14
H_MAX = 1e3
SCAN_FLOOR = 1e-4
EXCLUDE_RADIUS = 0.05


def equal_ring_function(N, h, theta):
    """``x - z(h) - y(h)`` at a = b = 1; ``h`` may be an array."""
    y, z = kernel_yz(N, 1.0, h, theta)
    return kernel_x(N) - z - y


@dataclass(frozen=True)
class SolveResult:
    N: int
    theta: float
    found: bool
    h_root: float | None
    lam: float | None
    bracket: tuple | None
    iterations: int
    residual_at_root: float | None

    def to_dict(self):
        return {"N": self.N, "theta": self.theta, "found": self.found,
                "h_root": self.h_root, "lambda": self.lam,
                "bracket": list(self.bracket) if self.bracket else None,
                "iterations": self.iterations,
                "residual_at_root": self.residual_at_root}


def bisect(f, lo, hi, width=BISECT_WIDTH):
    """Bisection on a sign-changing bracket; returns ``(root, iterations)``."""
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo, 0
    if f_lo * f(hi) > 0.0:
        raise ParameterError(f"no sign change on [{lo}, {hi}]")
    it = 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        it += 1
        if f_mid == 0.0:
            return mid, it
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi), it


def solve_h(N, theta, bracket=(1e-3, 1.0), h_max=H_MAX, width=BISECT_WIDTH) -> SolveResult:
    """Find the height at which equal rings form a central configuration.

    The upper end of ``bracket`` is doubled until ``f`` turns positive; if that
    does not happen below ``h_max``, or ``f`` is already positive at the lower
    end, a result with ``found=False`` is returned instead of raising.
    """
    theta = admissible_twist(N, theta)
    f = partial(_scalar_equal_f, N, theta)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi:
        raise ParameterError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")
    no_root = SolveResult(N, theta, False, None, None, None, 0, None)
    if f(lo) >= 0.0:
        return no_root
    while (f_hi := f(hi)) < 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > h_max:
            return no_root
    h, it = (hi, 0) if f_hi == 0.0 else bisect(f, lo, hi, width)
    lam = lambda_of(build_configuration(TwistedPolygonParams(N, 1.0, 1.0, h, theta)))
    return SolveResult(N, theta, True, h, lam, (lo, hi), it, abs(f(h)))


def _scalar_equal_f(N, theta, h):
    return float(equal_ring_function(N, h, theta))


def count_sign_changes(values):
    s = np.sign(np.asarray(values))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


# ---------------------------------------------------------------- scanning


@dataclass(frozen=True)
class ScanCell:
    a: float
    b: float
    min_residual_over_h: float
    argmin_h: float


def pair_residuals(N, a, b, h, theta, x=None):
    """The reduced pair ``(b a y - (x - z), (b/a^2) x - b a z - y)``, vectorised in h."""
    if x is None:
        x = kernel_x(N)
    y, z = kernel_yz(N, a, h, theta)
    return b * a * y - (x - z), (b / a**2) * x - b * a * z - y


def joint_residual(N, a, b, h, theta, x=None):
    r1, r2 = pair_residuals(N, a, b, h, theta, x)
    return np.hypot(r1, r2)


def minimize_over_h(fun, h_grid):
    """Coarse grid minimum of ``fun`` refined by bounded Brent search.

    ``fun`` must accept both arrays and scalars. Returns ``(value, h)``.
    """
    h_grid = np.asarray(h_grid, dtype=float)
    values = np.asarray(fun(h_grid), dtype=float)
    i = int(np.argmin(values))
    best_v, best_h = float(values[i]), float(h_grid[i])
    lo = h_grid[max(i - 1, 0)]
    hi = h_grid[min(i + 1, h_grid.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda h: float(fun(h)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13 * max(1.0, hi)})
        if res.fun < best_v:
            best_v, best_h = float(res.fun), float(res.x)
    return best_v, best_h


def _polish(N, a, b, theta, x, h, v, lo, hi, iterations=20):
    """Gauss-Newton steps on the residual pair, kept only while they lower it.

    Brent locates a kink-shaped minimum (a genuine zero) only to about
    sqrt(eps) * h; Gauss-Newton converges to such zeros quadratically.
    """
    for _ in range(iterations):
        r1, r2 = pair_residuals(N, a, b, h, theta, x)
        dy, dz = kernel_yz_dh(N, a, h, theta)
        d1 = b * a * dy + dz
        d2 = -b * a * dz - dy
        denom = d1 * d1 + d2 * d2
        if denom == 0.0:
            break
        h_new = min(max(h - (r1 * d1 + r2 * d2) / denom, lo), hi)
        v_new = float(joint_residual(N, a, b, h_new, theta, x))
        if not v_new < v:
            break
        h, v = float(h_new), v_new
    return v, h


def scan_cell(N, theta, a, b, h_grid, x=None) -> ScanCell:
    """Minimum over h of the joint residual ``hypot(r1, r2)`` at fixed (a, b)."""
    if x is None:
        x = kernel_x(N)
    h_grid = np.asarray(h_grid, dtype=float)
    v, h = minimize_over_h(lambda hh: joint_residual(N, a, b, hh, theta, x), h_grid)
    v, h = _polish(N, a, b, theta, x, h, v, h_grid[0], h_grid[-1])
    return ScanCell(float(a), float(b), v, h)


def _scan_row(N, theta, b_grid, h_grid, exclude, a):
    x = kernel_x(N)
    return [scan_cell(N, theta, a, b, h_grid, x) for b in b_grid
            if not (abs(a - 1.0) < exclude and abs(b - 1.0) < exclude)]


def default_workers():
    env = os.environ.get("POLYCC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def certify_no_solution(N, theta, a_grid, b_grid, h_grid, exclude=EXCLUDE_RADIUS,
                        workers=1) -> list:
    """Scan (a, b) cells for the minimum over h of the reduced pair residual.

    Cells with both ``|a-1| < exclude`` and ``|b-1| < exclude`` are skipped, since
    the residual vanishes continuously at a = b = 1. Output is row-major in
    (a, b) regardless of ``workers``.
    """
    if N < 3:
        raise ParameterError(f"certification scans need N >= 3, got {N}")
    theta = admissible_twist(N, theta)
    a_grid = [float(v) for v in np.atleast_1d(a_grid)]
    b_grid = [float(v) for v in np.atleast_1d(b_grid)]
    h_grid = np.asarray(h_grid, dtype=float)
    if not a_grid or not b_grid or h_grid.size == 0:
        raise ParameterError("scan grids must be non-empty")
    if np.any(h_grid <= 0.0):
        raise ParameterError("h grid must be strictly positive")
    row = partial(_scan_row, N, theta, b_grid, h_grid, exclude)
    if workers > 1 and len(a_grid) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, a_grid))
    else:
        rows = [row(a) for a in a_grid]
    return [cell for r in rows for cell in r]


def write_scan_csv(cells, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["a", "b", "min_residual", "argmin_h"])
    for c in cells:
        w.writerow([f"{c.a:.17g}", f"{c.b:.17g}", f"{c.min_residual_over_h:.17g}",
                    f"{c.argmin_h:.17g}"])


# ------------------------------------------------------ unequal-ring branch


@dataclass(frozen=True)
class BranchPoint:
    N: int
    theta: float
    a: float
    b: float
    h: float
    residual: float


def solve_ring_ratio(N, theta, b, steps=20) -> BranchPoint:
    """Solve the reduced pair for (a, h) at mass ratio ``b``.

    Continues from the equal-ring solution at b = 1 in ``steps`` increments of
    b, each Newton-type solve seeded by the previous point.
    """
    theta = admissible_twist(N, theta)
    start = solve_h(N, theta)
    if not start.found:
        raise ParameterError(f"no equal-ring solution for N={N}, theta={theta}")
    x = kernel_x(N)
    guess = np.array([1.0, start.h_root])
    for bb in np.linspace(1.0, b, steps + 1)[1:]:
        sol = root(lambda v: pair_residuals(N, v[0], bb, v[1], theta, x), guess,
                   method="hybr", options={"xtol": 1e-14})
        # MINPACK reports "no further improvement" once at rounding level
        r = np.max(np.abs(sol.fun))
        if r > 1e-12 or sol.x[0] <= 0.0 or sol.x[1] <= 0.0:
            raise ParameterError(f"continuation failed at b={bb}: {sol.message}")
        guess = sol.x
    r = float(np.max(np.abs(pair_residuals(N, guess[0], b, guess[1], theta, x))))
    return BranchPoint(N, theta, float(guess[0]), float(b), float(guess[1]), r)


# ------------------------------------------------------- property suite


@dataclass
class SuiteReport:
    checked: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not any(self.violations.values())

    def record(self, name, count, bad):
        self.checked[name] = self.checked.get(name, 0) + count
        self.violations.setdefault(name, []).extend(bad)

    def to_dict(self):
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations}


def _random_a(rng):
    return float(math.exp(rng.uniform(math.log(0.05), math.log(20.0))))


def _random_h(rng):
    return float(10.0 * (1.0 - rng.random()))  # (0, 10]


def step_property_suite(N_max, samples, seed=0, floor=SCAN_FLOOR,
                        a_grid=None, h_grid=None) -> SuiteReport:
    """Randomized checks of the ring-sum properties the height analysis rests on.

    * ``y_positive``: y > 0 for N >= 3, h > 0, theta in {0, pi/N};
    * ``z_exceeds_y``: z > y for any twist;
    * ``x_positive``: x > 0 and both formulas for x agree (relative 1e-14);
    * ``equal_mass_scan``: at b = 1 no a in ``a_grid`` admits an h where the
      reduced pair and the combined equation all drop below ``floor``.
    """
    if N_max < 3:
        raise ParameterError(f"N_max must be >= 3, got {N_max}")
    rng = np.random.default_rng(seed)
    report = SuiteReport()

    bad = []
    for _ in range(samples):
        N = int(rng.integers(3, N_max + 1))
        a, h = _random_a(rng), _random_h(rng)
        theta = math.pi / N if rng.random() < 0.5 else 0.0
        y, _ = kernel_yz(N, a, h, theta)
        if not y > 0.0:
            bad.append({"N": N, "a": a, "h": h, "theta": theta, "y": float(y)})
    report.record("y_positive", samples, bad)

    bad = []
    for _ in range(samples):
        N = int(rng.integers(2, N_max + 1))
        a, h = _random_a(rng), _random_h(rng)
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        y, z = kernel_yz(N, a, h, theta)
        if not z > y:
            bad.append({"N": N, "a": a, "h": h, "theta": theta, "y": float(y), "z": float(z)})
    report.record("z_exceeds_y", samples, bad)

    bad = []
    for N in range(2, N_max + 1):
        x, xc = kernel_x(N), kernel_x_closed_form(N)
        if not (x > 0.0 and abs(x - xc) <= 1e-14 * xc):
            bad.append({"N": N, "x": x, "closed_form": xc})
    report.record("x_positive", N_max - 1, bad)

    a_grid = np.linspace(0.1, 0.95, 18) if a_grid is None else np.asarray(a_grid)
    h_grid = np.geomspace(0.01, 10.0, 200) if h_grid is None else np.asarray(h_grid)
    bad = []
    count = 0
    for N in range(3, N_max + 1):
        x = kernel_x(N)
        for theta in (0.0, math.pi / N):
            for a in a_grid:
                def worst(h, a=a):
                    y, z = kernel_yz(N, a, h, theta)
                    r1 = a * y - (x - z)
                    r2 = x / a**2 - a * z - y
                    r3 = (x - a * y) - (x / a**3 - y / a)
                    return np.maximum(np.maximum(np.abs(r1), np.abs(r2)), np.abs(r3))
                v, h = minimize_over_h(worst, h_grid)
                count += 1
                if v < floor:
                    bad.append({"N": N, "theta": theta, "a": float(a), "h": h, "residual": v})
    report.record("equal_mass_scan", count, bad)
    return report
