"""Stationary-phase structure of the circle path integral.

For evaluation points off the circle the dominant paths are arcs of equally
spaced angles spanning a complex half-angle theta that solves an implicit
chord equation.  Inside the circle two complex-conjugate arcs interfere and
produce the cosine oscillations of the Wigner function; outside, a single
purely imaginary arc gives monotone decay.  The closed-form evaluation keeps
the limiting (large-slice-count) phase while the finite slice count enters
through the normalization constants, which is how the printed asymptotic
forms are stated.  The amplitude inherited from the stationary-phase
determinant diverges with the slice count, so a matched normalization pinned
to the known interior wave-function asymptotics is provided alongside the raw
one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import FamilyParams, WignerSample

TURNING_TOL = 1e-3  # relative width of the excluded annulus around s = r
ORIGIN_TOL = 1e-3  # excluded core radius, as a fraction of r
_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 100

_WKB_AMPLITUDE = 1.0 / math.sqrt(math.pi**3 / 2.0)


class RegionError(ValueError):
    """Evaluation point inside one of the singular zones of the asymptotics."""

    def __init__(self, region: str, message: str):
        super().__init__(message)
        self.region = region


class SaddleConvergenceError(RuntimeError):
    """Newton iteration failed; carries the iterate trace."""

    def __init__(self, message: str, trace: list[complex]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class SaddleSolution:
    """Solved arc half-angle with its action and Hessian data.

    L is None for the limiting (infinite slice count) branch, in which case t
    and the Hessian log-determinant are undefined.
    """

    theta: complex
    L: int | None
    s: float
    r: float
    stationary_action: complex
    branch: str
    t: complex | None
    log_det_hessian: complex | None

    def angles(self) -> np.ndarray:
        """The stationary angles, equally spaced across the arc."""
        if self.L is None:
            raise ValueError("angle list is only defined for finite L")
        l = np.arange(1, self.L + 1)
        return (2 * l - self.L - 1) / (self.L - 1) * self.theta

    def residual(self) -> float:
        if self.L is None:
            return abs(self.r * cmath.cos(self.theta) - self.s)
        return abs(_chord_equation(self.theta, self.s, self.r, self.L))


def _chord_equation(theta: complex, s: float, r: float, L: int) -> complex:
    return 0.5 * r * (cmath.exp(1j * theta) + cmath.exp(-1j * theta * (L + 1) / (L - 1))) - s


def _chord_derivative(theta: complex, r: float, L: int) -> complex:
    ratio = (L + 1) / (L - 1)
    return 0.5 * r * 1j * (cmath.exp(1j * theta) - ratio * cmath.exp(-1j * theta * ratio))


def classify_branch(s: float, r: float) -> str:
    if abs(s / r - 1.0) < TURNING_TOL:
        return "turning"
    return "interior" if s < r else "exterior"


def solve_saddle(s: float, r: float, L: int | None) -> SaddleSolution:
    """Solve the implicit arc equation for the saddle half-angle.

    Finite L uses complex Newton started from the limiting solution
    (arccos(s/r) inside, i arccosh(s/r) outside); the limiting branch (L =
    None) returns that seed directly.  The turning annulus |s/r - 1| <
    TURNING_TOL is rejected: both asymptotic forms carry quarter-power
    singularities there.
    """
    if s < 0 or r <= 0:
        raise ValueError("need s >= 0 and r > 0")
    branch = classify_branch(s, r)
    if branch == "turning":
        raise RegionError(
            "turning",
            f"s/r = {s / r:.6f} lies in the turning annulus |s/r - 1| < {TURNING_TOL}",
        )
    u = s / r
    theta_limit = complex(math.acos(u)) if branch == "interior" else 1j * math.acosh(u)

    if L is None:
        action = _limit_action(theta_limit, r)
        return SaddleSolution(
            theta=theta_limit, L=None, s=s, r=r,
            stationary_action=action, branch=branch, t=None, log_det_hessian=None,
        )

    if L < 2 or int(L) != L:
        raise ValueError(f"L must be an integer >= 2 (or None for the limit), got {L}")

    theta, _ = _newton(theta_limit, s, r, L)
    action = _finite_action(theta, r, L)
    if branch == "exterior" and action.real < 0.0:
        # growing branch reached: the decaying arc sits at the mirrored seed
        theta, _ = _newton(-theta_limit, s, r, L)
        action = _finite_action(theta, r, L)
        if action.real < 0.0:
            raise SaddleConvergenceError(
                f"no decaying exterior saddle found at s={s}, r={r}, L={L}", [theta]
            )
    t = cmath.exp(2j * L * theta / (L - 1))
    return SaddleSolution(
        theta=theta, L=L, s=s, r=r,
        stationary_action=action, branch=branch, t=t,
        log_det_hessian=_hessian_log_det(theta, r, L) if L >= 3 else None,
    )


def _newton(seed: complex, s: float, r: float, L: int) -> tuple[complex, int]:
    theta = seed
    trace = [theta]
    for iteration in range(_NEWTON_MAX_ITER):
        f = _chord_equation(theta, s, r, L)
        if abs(f) <= _NEWTON_TOL * max(s, r):
            return theta, iteration
        theta = theta - f / _chord_derivative(theta, r, L)
        trace.append(theta)
    raise SaddleConvergenceError(
        f"Newton failed after {_NEWTON_MAX_ITER} iterations at s={s}, r={r}, L={L}",
        trace,
    )


def _finite_action(theta: complex, r: float, L: int) -> complex:
    r2 = r * r
    return L * r2 * (1.0 - cmath.exp(-2j * theta / (L - 1))) + 0.5 * r2 * (
        cmath.exp(-2j * theta * (L + 1) / (L - 1)) - cmath.exp(2j * theta)
    )


def _limit_action(theta: complex, r: float) -> complex:
    return 1j * r * r * (2.0 * theta - cmath.sin(2.0 * theta))


def stationary_action(sol: SaddleSolution) -> complex:
    """Action at the saddle, recomputed from the solved half-angle."""
    if sol.L is None:
        return _limit_action(sol.theta, sol.r)
    return _finite_action(sol.theta, sol.r, sol.L)


def time_reversed(sol: SaddleSolution) -> SaddleSolution:
    """The conjugate saddle traversing the arc the opposite way."""
    theta = -sol.theta.conjugate()
    if sol.L is None:
        return SaddleSolution(
            theta=theta, L=None, s=sol.s, r=sol.r,
            stationary_action=_limit_action(theta, sol.r),
            branch=sol.branch, t=None, log_det_hessian=None,
        )
    t = cmath.exp(2j * sol.L * theta / (sol.L - 1))
    return SaddleSolution(
        theta=theta, L=sol.L, s=sol.s, r=sol.r,
        stationary_action=_finite_action(theta, sol.r, sol.L),
        branch=sol.branch, t=t,
        log_det_hessian=_hessian_log_det(theta, sol.r, sol.L) if sol.L >= 3 else None,
    )


def _hessian_log_det(theta: complex, r: float, L: int) -> complex:
    t = cmath.exp(2j * L * theta / (L - 1))
    bracket = (1 + L) + 2.0 * t + (1 - L) * t * t
    return 2.0 * L * math.log(r) - 2j * L * theta / (L - 1) + cmath.log(bracket)


def hessian_log_det(sol: SaddleSolution) -> complex:
    """Log determinant of the second-derivative matrix at the saddle.

    Closed form r^{2L} t^{-1} [(1+L) + 2t + (1-L) t^2]; the t^{-1} factor is
    kept as an explicit -2iL theta/(L-1) so the result varies continuously
    with theta instead of wrapping at branch cuts.
    """
    if sol.L is None or sol.L < 3:
        raise ValueError("the Hessian matrix is defined for finite L > 2")
    return _hessian_log_det(sol.theta, sol.r, sol.L)


def hessian_matrix(sol: SaddleSolution) -> np.ndarray:
    """Dense second-derivative matrix, for cross-checking the closed form."""
    if sol.L is None or sol.L < 3:
        raise ValueError("the Hessian matrix is defined for finite L > 2")
    L = sol.L
    m = 2.0 * np.eye(L, dtype=complex)
    for i in range(L - 1):
        m[i, i + 1] = -1.0
        m[i + 1, i] = -1.0
    t = cmath.exp(2j * L * sol.theta / (L - 1))
    m[0, L - 1] += t
    m[L - 1, 0] += t
    return sol.r**2 * cmath.exp(-2j * sol.theta / (L - 1)) * m


def single_saddle_weight(sol: SaddleSolution) -> complex:
    """One arc's contribution factor exp(-S0) e^{i theta} (1 - e^{4 i theta})^{-1/2}.

    Real constants (grid measure, partition sum, r powers) are omitted; the
    time-reversed arc contributes the complex conjugate, so the pair sum is
    real.
    """
    theta = sol.theta
    return cmath.exp(-sol.stationary_action) * cmath.exp(1j * theta) / cmath.sqrt(
        1.0 - cmath.exp(4j * theta)
    )


@lru_cache(maxsize=64)
def _log_raw_constant(n: int, L: int) -> float:
    """ln[(2 pi)^{L/2} L^{1/2} Z_L(n + 1/2)] with the exact partition sum."""
    params = FamilyParams(L, n + 0.5)
    return 0.5 * L * math.log(2.0 * math.pi) + 0.5 * math.log(L) + params.log_z


def _check_zones(s: float, r: float) -> str:
    branch = classify_branch(s, r)
    if branch == "turning":
        raise RegionError(
            "turning",
            f"|alpha| = {s:.6f} lies in the turning annulus around sqrt(n+1/2) = {r:.6f}",
        )
    if s < ORIGIN_TOL * r:
        raise RegionError(
            "origin",
            f"|alpha| = {s:.6f} is inside the origin zone {ORIGIN_TOL * r:.2e} "
            "where the quarter-power amplitude diverges",
        )
    return branch


def interior_phase(s: float, n: int) -> float:
    """Oscillation phase (2n+1) arccos(u) - 2 s sqrt(n+1/2-s^2) - pi/4."""
    r2 = n + 0.5
    u = s / math.sqrt(r2)
    return (2 * n + 1) * math.acos(u) - 2.0 * s * math.sqrt(r2 - s * s) - 0.25 * math.pi


def wigner_saddle(
    alpha: complex, n: int, L: int = 512, normalization: str = "wkb-matched"
) -> WignerSample:
    """Saddle-point Wigner function of the family member pinned to level n.

    The family parameter is fixed at N = n + 1/2 (fastest pinch onto |n><n|).
    Inside the circle the value is cos(phase) over a quarter-power amplitude;
    outside it is the decaying exponential of the single imaginary arc.  "raw"
    normalization is 1/[(2 pi)^{L/2} L^{1/2} Z_L]; note it grows without bound
    as L increases, so large-L raw values can overflow.  "wkb-matched"
    rescales by one global constant so the interior amplitude agrees with the
    wave-function asymptotics.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if normalization not in ("raw", "wkb-matched"):
        raise ValueError(f"unknown normalization {normalization!r}")
    r2 = n + 0.5
    r = math.sqrt(r2)
    s = abs(alpha)
    branch = _check_zones(s, r)

    quarter = (s * s * abs(r2 - s * s)) ** 0.25
    log_c = _log_raw_constant(n, L)
    if normalization == "raw":
        log_amp = -log_c - math.log(quarter)
    else:
        log_amp = math.log(_WKB_AMPLITUDE) - math.log(quarter)

    try:
        if branch == "interior":
            value = math.cos(interior_phase(s, n)) * math.exp(log_amp)
        else:
            u = s / r
            exponent = (2 * n + 1) * math.acosh(u) - 2.0 * s * math.sqrt(s * s - r2)
            value = 0.5 * math.exp(exponent + log_amp)
    except OverflowError:
        raise OverflowError(
            f"raw-normalized saddle amplitude exp({log_amp:.1f}) exceeds double "
            f"range at L={L}; use normalization='wkb-matched' or a smaller L"
        ) from None
    return WignerSample(alpha=alpha, value=value, method="saddle")


def wigner_wkb(alpha: complex, n: int) -> float:
    """Interior wave-function asymptotics for the number-state Wigner function,
    with the explicit (pi^3/2)^{-1/2} amplitude."""
    if n < 0:
        raise ValueError("n must be non-negative")
    r2 = n + 0.5
    r = math.sqrt(r2)
    s = abs(alpha)
    branch = _check_zones(s, r)
    if branch != "interior":
        raise RegionError("exterior", f"|alpha| = {s:.6f} is outside the shelf (r = {r:.6f})")
    quarter = (s * s * (r2 - s * s)) ** 0.25
    return _WKB_AMPLITUDE * math.cos(interior_phase(s, n)) / quarter


def stirling_log_partition(n: int, L: int) -> float:
    """Stirling estimate -(L/2) ln[2 pi (n + 5/12)] of the log partition sum.

    Good to about a percent per slice for n >= 5; breaks down for small n
    (the exact value at L = 1 is 0).
    """
    if n < 2:
        raise ValueError("the Stirling form needs n >= 2")
    return -0.5 * L * math.log(2.0 * math.pi * (n + 5.0 / 12.0))
