"""Numerical evaluation of the circle path integral for W(L, N).

Quadrature route: the angle integrals are discretized on a uniform tensor
grid (trapezoid rule; the integrand is periodic and entire in every angle, so
the error decays faster than any power of 1/M).  The grid sum is evaluated by
contracting a transfer matrix over the angle grid -- an exact reordering of
the same sum, so the tensor-product budget guard is kept as stated.  The
overall constant is anchored so that L = 1 reproduces the Poisson closed form
exactly; this fixes the 2/pi carried by the displaced-parity matrix element
together with the (2 pi)^{-L} angle measure.

Monte Carlo route: angles are sampled uniformly on the torus and the complex
weight exp(-S) is averaged; the surviving mean phase magnitude is the standard
severity measure of the sign problem and is reported with every estimate.
Batches are assigned counter-based RNG streams by batch index, so results are
bit-identical for a fixed (seed, batch schedule) regardless of worker count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .action import circle_actions_batch
from .states import FamilyParams, WignerSample

_TWO_OVER_PI = 2.0 / math.pi
_IMAG_RESIDUE_TOL = 1e-10


class BudgetError(ValueError):
    """Tensor-product quadrature would exceed the configured work budget."""


class RealnessError(RuntimeError):
    """Imaginary residue of the quadrature sum above tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform-grid quadrature settings: M points per angle, M^L work budget."""

    points_per_dim: int = 128
    budget: int = 2**30

    def __post_init__(self):
        m = self.points_per_dim
        if m < 8:
            raise ValueError(f"points_per_dim must be at least 8, got {m}")
        if m & (m - 1):
            raise ValueError(f"points_per_dim must be a power of two, got {m}")

    def check_budget(self, L: int) -> None:
        if self.points_per_dim**L > self.budget:
            raise BudgetError(
                f"M^L = {self.points_per_dim}^{L} exceeds the evaluation budget "
                f"{self.budget}; lower M or L, or raise the budget explicitly"
            )


@dataclass(frozen=True)
class MonteCarloSpec:
    """Sampling plan; the (seed, batch schedule) pair fixes every draw."""

    samples: int
    seed: int = 0
    workers: int = 1
    batch_size: int | None = None

    def __post_init__(self):
        if self.samples < 1000:
            raise ValueError(f"need at least 1e3 samples, got {self.samples}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.batch_size is None:
            object.__setattr__(self, "batch_size", max(256, -(-self.samples // 64)))
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")

    def batch_sizes(self) -> list[int]:
        full, rest = divmod(self.samples, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class McResult:
    """Monte Carlo estimate with sign-problem diagnostics."""

    estimate: float
    standard_error: float
    mean_phase_magnitude: float
    effective_sample_size: float
    phase_standard_error: float | None = None

    def __post_init__(self):
        if not self.standard_error >= 0:
            raise ValueError("standard error must be non-negative")
        if not 0.0 <= self.mean_phase_magnitude <= 1.0:
            raise ValueError("mean phase magnitude must lie in [0, 1]")


@lru_cache(maxsize=16)
def _circle_kernel(r: float, L: int, M: int) -> np.ndarray:
    """Alpha-independent part of the grid sum.

    B[j, k] = (T^{L-1})[j, k] * h[(k - j) mod M], where T[j, k] is the
    rescaled inter-slice link factor and h the combined closing-link and
    end-pair factor.  Each factor carries exp(-r^2) so entries stay bounded.
    Built with einsum (no BLAS) so the result is bit-stable across thread
    settings.
    """
    r2 = r * r
    phases = np.exp(2j * math.pi * np.arange(M) / M)
    t_link = np.exp(r2 * (phases - 1.0))
    h_end = np.exp(-r2 * (phases + 1.0))
    diff = (np.arange(M)[:, None] - np.arange(M)[None, :]) % M
    T = t_link[diff]
    A = np.eye(M, dtype=complex)
    for _ in range(L - 1):
        A = np.einsum("ij,jk->ik", A, T)
    B = A * h_end[diff.T]
    B.setflags(write=False)
    return B


def wigner_quadrature(
    alpha: complex, params: FamilyParams, spec: QuadratureSpec = QuadratureSpec()
) -> WignerSample:
    """W(L, N) at alpha from the uniform tensor grid over the L circle angles.

    Raises :class:`BudgetError` upfront if M^L exceeds the work budget and
    :class:`RealnessError` if the grid sum fails to be real to 1e-10 relative
    (the uniform grid pairs every path with its time reverse, so a residue
    signals a bug rather than a numerical limit).
    """
    spec.check_budget(params.L)
    M = spec.points_per_dim
    r = params.radius
    s = abs(alpha)
    phi = math.atan2(alpha.imag, alpha.real)
    theta = 2.0 * math.pi * np.arange(M) / M

    B = _circle_kernel(r, params.L, M)
    u = np.exp(2.0 * r * s * np.exp(-1j * (theta - phi)) - s * s)
    v = np.exp(2.0 * r * s * np.exp(1j * (theta - phi)) - s * s)
    total = np.einsum("j,jk,k->", u, B, v)
    incoherent = float(np.einsum("j,jk,k->", np.abs(u), np.abs(B), np.abs(v)).real)

    # a residue only signals a bug when it is large against both the real part
    # and the incoherent mass; deep-cancellation tails sit at roundoff level
    if abs(total.imag) > max(_IMAG_RESIDUE_TOL * abs(total.real), 1e-12 * incoherent):
        raise RealnessError(
            f"imaginary residue {total.imag:.3e} vs real part {total.real:.3e} "
            f"(incoherent scale {incoherent:.3e})"
        )
    value = _TWO_OVER_PI * math.exp(-params.log_z - params.L * math.log(M)) * total.real
    return WignerSample(alpha=alpha, value=value, method="quadrature")


def _mc_batch_stats(
    batch_index: int, size: int, L: int, r: float, s: float, seed: int
) -> tuple:
    rng = np.random.Generator(np.random.Philox(seed).jumped(batch_index))
    thetas = rng.uniform(0.0, 2.0 * math.pi, size=(size, L))
    path_terms, totals = circle_actions_batch(thetas, r, s)
    w = np.exp(-totals)
    mag = np.exp(-totals.real)
    return (
        size,
        complex(w.sum()),
        float((w.real**2).sum()),
        float(mag.sum()),
        float((mag**2).sum()),
        complex(np.exp(-path_terms).sum()),
    )


def _batch_stats_list(params: FamilyParams, spec: MonteCarloSpec, s: float) -> list[tuple]:
    sizes = spec.batch_sizes()
    args = [(b, sz, params.L, params.radius, s, spec.seed) for b, sz in enumerate(sizes)]
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(lambda a: _mc_batch_stats(*a), args))
    return [_mc_batch_stats(*a) for a in args]


def _weighted_batch_se(batch_means: np.ndarray, batch_weights: np.ndarray) -> float:
    mean = float((batch_weights * batch_means).sum())
    var = float((batch_weights**2 * (batch_means - mean) ** 2).sum())
    b = len(batch_means)
    return math.sqrt(var * b / (b - 1))


def wigner_montecarlo(
    alpha: complex,
    params: FamilyParams,
    spec: MonteCarloSpec,
    z_route: str = "exact",
) -> McResult:
    """Monte Carlo estimate of W(L, N) at alpha by uniform torus sampling.

    z_route selects the partition-sum normalization: "exact" divides by the
    number-basis Z(L, N) (default, exact and noise-free), "angular" divides by
    the same-sample estimate of the closed-path integral, which shares
    fluctuations with the numerator.
    """
    if z_route not in ("exact", "angular"):
        raise ValueError(f"unknown z_route {z_route!r}")
    s = abs(alpha)
    stats = _batch_stats_list(params, spec, s)

    n = sum(st[0] for st in stats)
    sum_w = sum(st[1] for st in stats)
    sum_w_re2 = sum(st[2] for st in stats)
    sum_mag = sum(st[3] for st in stats)
    sum_mag2 = sum(st[4] for st in stats)
    sum_path = sum(st[5] for st in stats)

    scale = _TWO_OVER_PI * math.exp(-params.log_z)
    sizes = np.array([st[0] for st in stats], dtype=float)
    weights = sizes / n
    if z_route == "exact":
        estimate = scale * sum_w.real / n
        batch_means = np.array([scale * st[1].real / st[0] for st in stats])
    else:
        estimate = _TWO_OVER_PI * sum_w.real / sum_path.real
        batch_means = np.array(
            [_TWO_OVER_PI * st[1].real / st[5].real for st in stats]
        )

    if len(stats) > 1:
        se = _weighted_batch_se(batch_means, weights)
    else:
        # single batch: fall back to the per-sample variance
        var = max(sum_w_re2 / n - (sum_w.real / n) ** 2, 0.0)
        se = scale * math.sqrt(var / max(n - 1, 1))

    phase = min(1.0, abs(sum_w) / sum_mag) if sum_mag > 0 else 0.0
    if len(stats) > 1:
        batch_phase = np.array(
            [min(1.0, abs(st[1]) / st[3]) if st[3] > 0 else 0.0 for st in stats]
        )
        phase_se = _weighted_batch_se(batch_phase, weights)
    else:
        phase_se = None
    ess = sum_mag**2 / sum_mag2 if sum_mag2 > 0 else 0.0

    return McResult(
        estimate=estimate,
        standard_error=se,
        mean_phase_magnitude=phase,
        effective_sample_size=ess,
        phase_standard_error=phase_se,
    )


@dataclass(frozen=True)
class MidpointGrid:
    """Square binning of the phase plane, centered on the origin."""

    half_width: float
    bins: int

    def __post_init__(self):
        if not self.half_width > 0 or self.bins < 2:
            raise ValueError("need positive half_width and at least 2 bins")

    def centers(self) -> np.ndarray:
        step = 2.0 * self.half_width / self.bins
        return -self.half_width + step * (np.arange(self.bins) + 0.5)

    def index(self, x: np.ndarray) -> np.ndarray:
        ix = ((x + self.half_width) / (2.0 * self.half_width) * self.bins).astype(int)
        return np.clip(ix, 0, self.bins - 1)


def midpoint_histogram(
    params: FamilyParams, spec: MonteCarloSpec, grid: MidpointGrid
) -> np.ndarray:
    """Accumulate exp(-path term) of sampled paths into chord-midpoint bins.

    Returns the complex (bins, bins) array of bin sums: the unnormalized
    functional weight attached to each phase-space cell before the Gaussian
    end-gap factor ties it to an evaluation point.  Bins are indexed
    [re, im].
    """
    if grid.half_width < params.radius + 3.0 - 1e-12:
        raise ValueError(
            f"grid must cover the square of half-width sqrt(N)+3 = {params.radius + 3.0:.3f}"
        )
    r = params.radius
    hist = np.zeros((grid.bins, grid.bins), dtype=complex)
    for b, size in enumerate(spec.batch_sizes()):
        rng = np.random.Generator(np.random.Philox(spec.seed).jumped(b))
        thetas = rng.uniform(0.0, 2.0 * math.pi, size=(size, params.L))
        path_terms, _ = circle_actions_batch(thetas, r, 0.0)
        mid = 0.5 * r * (np.exp(1j * thetas[:, 0]) + np.exp(1j * thetas[:, -1]))
        np.add.at(hist, (grid.index(mid.real), grid.index(mid.imag)), np.exp(-path_terms))
    empty = int((hist == 0).sum())
    if empty:
        warnings.warn(
            f"{empty} of {grid.bins**2} midpoint bins received no samples",
            stacklevel=2,
        )
    return hist


def smoothed_wigner_from_histogram(
    hist: np.ndarray, grid: MidpointGrid, params: FamilyParams, samples: int
) -> np.ndarray:
    """Apply the end-gap Gaussian analytically from each bin center.

    Convolves the binned path weights with exp(-2 |alpha - mid|^2) and applies
    the same normalization as the direct estimator, giving a (bins, bins) real
    approximation to W on the grid centers.
    """
    c = grid.centers()
    cx = np.repeat(c, grid.bins)
    cy = np.tile(c, grid.bins)
    flat = hist.real.ravel()
    out = np.empty(grid.bins * grid.bins)
    chunk = max(1, (1 << 22) // (grid.bins * grid.bins))
    for start in range(0, out.size, chunk):
        stop = min(start + chunk, out.size)
        d2 = (cx[start:stop, None] - cx[None, :]) ** 2 + (cy[start:stop, None] - cy[None, :]) ** 2
        out[start:stop] = np.exp(-2.0 * d2) @ flat
    out *= _TWO_OVER_PI * math.exp(-params.log_z) / samples
    return out.reshape(grid.bins, grid.bins)
