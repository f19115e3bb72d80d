"""The interpolating family of radially squeezed number-diagonal states.

rho(L, N) has number-basis weights proportional to (N^n / n!)^L: L = 1 is a
phase-randomized Gaussian blob of mean occupation N (a Poisson mixture), and
as L grows the weights pinch onto the single number level nearest N.  All
weight arithmetic happens in log space; (N^n/n!)^L overflows doubles already
at modest L.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .phase_space import polar
from .special import laguerre_all, log_bessel_i0, log_factorial, log_factorials

# Truncation rule: drop levels whose log weight trails the peak by more than
# this (tail factor < 1e-20), but never truncate below ceil(4N + 20).
_TAIL_LOG_DROP = 46.0

_WIGNER_BOUND = 2.0 / math.pi

# Method tags whose values are genuine Wigner evaluations and must respect the
# global 2/pi bound.  Saddle-point and WKB values are asymptotic approximants
# with an amplitude that is not trustworthy near their singular edges.
_BOUNDED_METHODS = {"exact-poisson", "exact-number", "spectral", "quadrature", "monte-carlo"}


class TruncationError(ValueError):
    """Requested basis cutoff cannot meet the weight-tail bound."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature stopped refining before reaching tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class WignerSample:
    """One Wigner-function evaluation, tagged with how it was obtained."""

    alpha: complex
    value: float
    method: str
    standard_error: float | None = None
    mean_phase_magnitude: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite Wigner value {self.value!r} ({self.method})")
        if self.method in _BOUNDED_METHODS and abs(self.value) > _WIGNER_BOUND + 1e-9:
            raise ValueError(
                f"|W| = {abs(self.value):.6g} exceeds the 2/pi bound ({self.method})"
            )


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (L, N) of one family member, with cached weights.

    Construction computes the truncated, normalized number-basis weights and
    the log partition sum; instances are immutable afterwards and safe to
    share across workers.
    """

    L: int
    N: float
    n_max: int | None = None
    weight_array: np.ndarray = field(init=False, repr=False, compare=False)
    log_z: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.L < 1 or int(self.L) != self.L:
            raise ValueError(f"L must be a positive integer, got {self.L}")
        if not self.N > 0:
            raise ValueError(f"N must be positive, got {self.N}")
        if float(self.N).is_integer():
            warnings.warn(
                f"N = {self.N} is an integer: the L -> infinity limit is "
                "discontinuous there and the family does not single out one "
                "number level",
                stacklevel=2,
            )
        n_floor = self._tail_cutoff()
        n_max = n_floor if self.n_max is None else self.n_max
        object.__setattr__(self, "n_max", n_max)

        ell = self._log_weights_unnormalized(n_max)
        if ell[-1] > ell.max() - _TAIL_LOG_DROP:
            raise TruncationError(
                f"n_max = {n_max} leaves a weight tail above 1e-20 of the peak "
                f"(need n_max >= {n_floor} for L={self.L}, N={self.N})"
            )
        peak = ell.max()
        log_z = peak + math.log(np.exp(ell - peak).sum())
        object.__setattr__(self, "log_z", log_z)
        object.__setattr__(self, "weight_array", np.exp(ell - log_z))
        self.weight_array.setflags(write=False)

    def _tail_cutoff(self) -> int:
        hard_floor = math.ceil(4.0 * self.N + 20.0)
        logn = math.log(self.N)
        peak = self.L * (math.floor(self.N) * logn - log_factorial(math.floor(self.N)))
        n = hard_floor
        while self.L * (n * logn - log_factorial(n)) > peak - _TAIL_LOG_DROP:
            n += 1
        return n

    def _log_weights_unnormalized(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1, dtype=float)
        return self.L * (n * math.log(self.N) - log_factorials(n_max) - self.N)

    @property
    def radius(self) -> float:
        """Radius sqrt(N) of the circle carrying the L = 1 coherent mixture."""
        return math.sqrt(self.N)


def weights(params: FamilyParams) -> list[tuple[int, float]]:
    """Normalized number-basis weights [(n, w_n), ...] of rho(L, N)."""
    return [(n, float(w)) for n, w in enumerate(params.weight_array)]


def log_partition(params: FamilyParams) -> float:
    """ln Z(L, N) = ln[ e^{-LN} sum_n (N^n/n!)^L ]."""
    return params.log_z


def hamiltonian_eigenvalue(n: int, N: float) -> float:
    """Eigenvalue at level n of the confining Hamiltonian N + ln n! - n ln N.

    rho(L, N) is the thermal state of this Hamiltonian at temperature 1/L, so
    every family member is a physically realizable density matrix.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not N > 0:
        raise ValueError("N must be positive")
    return N + log_factorial(n) - n * math.log(N)


def quadratic_approx(n: int, N: float) -> float:
    """Stirling expansion of the eigenvalue about its minimum: a charging energy."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not N > 0:
        raise ValueError("N must be positive")
    return 0.5 * math.log(2.0 * math.pi * N) + (n + 0.5 - N) ** 2 / (2.0 * N)


def wigner_poisson(alpha: complex, N: float) -> float:
    """Wigner function of the L = 1 (Poisson) member: strictly positive."""
    if not N > 0:
        raise ValueError("N must be positive")
    s = abs(alpha)
    return _WIGNER_BOUND * math.exp(-2.0 * s * s - 2.0 * N + log_bessel_i0(4.0 * math.sqrt(N) * s))


def wigner_number(alpha: complex, n: int) -> float:
    """Wigner function of the number state |n>."""
    if n < 0:
        raise ValueError("n must be non-negative")
    s2 = alpha.real**2 + alpha.imag**2
    sign = -1.0 if n % 2 else 1.0
    return _WIGNER_BOUND * sign * math.exp(-2.0 * s2) * laguerre_all(n, 4.0 * s2)[n]


def wigner_spectral(alpha: complex, params: FamilyParams) -> float:
    """Exact W(L, N) as the weight-mixture of number-state Wigner functions.

    rho(L, N) is diagonal in the number basis and W is linear in the state, so
    this is the ground-truth oracle the path-integral evaluations are tested
    against.
    """
    s2 = alpha.real**2 + alpha.imag**2
    n = np.arange(params.n_max + 1)
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    lag = laguerre_all(params.n_max, 4.0 * s2)
    return float(_WIGNER_BOUND * math.exp(-2.0 * s2) * (params.weight_array * signs * lag).sum())


def gaussian_convolve_p1(
    alpha: complex,
    N: float,
    tol: float = 1e-10,
    max_points: int = 1 << 20,
) -> tuple[float, float]:
    """Wigner value of the Poisson member from its circle-supported weight
    function, as the Gaussian smoothing (2/pi) avg_theta exp(-2|alpha - sqrt(N) e^{i theta}|^2).

    Cross-check oracle for :func:`wigner_poisson`; the angular average uses
    doubling trapezoid refinement (spectrally accurate on periodic
    integrands).  Returns (value, achieved error estimate).
    """
    if not N > 0:
        raise ValueError("N must be positive")
    s, _ = polar(alpha)
    m = 4.0 * math.sqrt(N) * s

    def log_avg(points: int) -> float:
        theta = 2.0 * math.pi * np.arange(points) / points
        # integrand e^{m cos theta}, factored so the grid values stay in (0, 1]
        return m + math.log(np.exp(m * (np.cos(theta) - 1.0)).mean())

    points = 32
    prev = log_avg(points)
    while True:
        points *= 2
        cur = log_avg(points)
        err = abs(cur - prev)
        if err <= tol:
            break
        if points >= max_points:
            raise QuadratureConvergenceError(
                f"angular average did not converge by {points} points", err
            )
        prev = cur
    value = _WIGNER_BOUND * math.exp(-2.0 * s * s - 2.0 * N + cur)
    return value, err * abs(value)
