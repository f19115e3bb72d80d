"""Cross-validation suites: the named consistency checks behind `wigpath check`.

Each suite returns a list of :class:`CheckResult`; the CLI renders them as a
JSON report and the acceptance tests assert on the same code paths.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .integrate import MonteCarloSpec, QuadratureSpec, wigner_montecarlo, wigner_quadrature
from .saddle import hessian_matrix
from .states import FamilyParams, wigner_number, wigner_poisson, wigner_spectral

# (L, N) pairs exercised by the quadrature-vs-spectral identity check.
ORACLE_CASES = ((1, 1.5), (2, 1.5), (3, 1.5), (2, 10.5))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def radial_normalization(profile, s_max: float, limit: int = 400) -> tuple[float, float]:
    """2 pi int_0^smax W(s) s ds by adaptive quadrature, for rotation-invariant W.

    Returns (integral, reported error estimate).
    """
    val, err = quad(lambda s: profile(s) * s, 0.0, s_max, limit=limit, epsabs=1e-9, epsrel=1e-9)
    return 2.0 * math.pi * val, 2.0 * math.pi * err


def check_oracle(points: int = 20, M: int = 128) -> list[CheckResult]:
    """Path-integral quadrature against the spectral mixture, radially sampled."""
    out = []
    spec = QuadratureSpec(points_per_dim=M)
    for L, N in ORACLE_CASES:
        params = FamilyParams(L, N)
        rs = np.linspace(0.0, math.sqrt(N) + 2.0, points)
        worst = 0.0
        for s in rs:
            wq = wigner_quadrature(complex(s), params, spec).value
            ws = wigner_spectral(complex(s), params)
            tol = 1e-6 * max(abs(ws), 0.01)
            worst = max(worst, abs(wq - ws) / tol)
        out.append(
            CheckResult(
                name=f"oracle L={L} N={N}",
                passed=worst <= 1.0,
                detail={"worst_over_tolerance": worst, "points": points, "M": M},
            )
        )
    return out


def _normalization_cases() -> list[tuple[str, object, float]]:
    """(label, radial profile callable, s_max) triples for the six states."""
    qspec = QuadratureSpec()
    cases: list[tuple[str, object, float]] = []
    for N in (1.0, 10.5):
        s_max = math.sqrt(math.ceil(4 * N + 20)) + 6.0
        cases.append((f"poisson N={N}", lambda s, N=N: wigner_poisson(complex(s), N), s_max))
    for n in (1, 10):
        cases.append(
            (f"number n={n}", lambda s, n=n: wigner_number(complex(s), n), math.sqrt(n) + 6.0)
        )
    fam = FamilyParams(3, 1.5)
    cases.append(
        (
            "family L=3 N=1.5 quadrature",
            lambda s: wigner_quadrature(complex(s), fam, qspec).value,
            math.sqrt(fam.n_max) + 6.0,
        )
    )
    fam2 = FamilyParams(2, 10.5)
    cases.append(
        (
            "family L=2 N=10.5 spectral",
            lambda s: wigner_spectral(complex(s), fam2),
            math.sqrt(fam2.n_max) + 6.0,
        )
    )
    return cases


def check_normalization(tol: float = 1e-6) -> list[CheckResult]:
    """Unit total mass of the Wigner functions, by adaptive radial quadrature."""
    out = []
    for label, profile, s_max in _normalization_cases():
        integral, err = radial_normalization(profile, s_max)
        out.append(
            CheckResult(
                name=f"normalization {label}",
                passed=abs(integral - 1.0) <= tol,
                detail={"integral": integral, "quad_error": err},
            )
        )
    return out


def check_determinant(n_random: int = 50, seed: int = 20230914, tol: float = 1e-10) -> list[CheckResult]:
    """Closed-form Hessian determinant against dense elimination, random angles."""
    rng = np.random.default_rng(seed)
    out = []
    for L in range(3, 11):
        worst = 0.0
        for _ in range(n_random):
            theta = complex(rng.normal(0.0, 1.0), rng.normal(0.0, 0.3))
            r = 1.0 + 2.0 * rng.random()
            sol = _bare_solution(theta, r, L)
            sign, logabs = np.linalg.slogdet(hessian_matrix(sol))
            dense = sign * np.exp(logabs)
            closed = np.exp(complex(_closed_log_det(sol)))
            worst = max(worst, abs(dense - closed) / abs(closed))
        out.append(
            CheckResult(
                name=f"determinant L={L}",
                passed=worst <= tol,
                detail={"worst_relative_error": worst, "samples": n_random},
            )
        )
    return out


def _bare_solution(theta: complex, r: float, L: int):
    """A SaddleSolution shell at an arbitrary angle (not a solved saddle)."""
    from .saddle import SaddleSolution, _finite_action, _hessian_log_det

    return SaddleSolution(
        theta=theta, L=L, s=float("nan"), r=r,
        stationary_action=_finite_action(theta, r, L),
        branch="interior", t=np.exp(2j * L * theta / (L - 1)),
        log_det_hessian=_hessian_log_det(theta, r, L),
    )


def _closed_log_det(sol) -> complex:
    from .saddle import _hessian_log_det

    return _hessian_log_det(sol.theta, sol.r, sol.L)


def check_sign(
    L_max: int = 5,
    N: float = 1.5,
    alpha: complex = 0.8 + 0j,
    samples: int = 200_000,
    seed: int = 7,
    workers: int = 1,
) -> list[CheckResult]:
    """Mean-phase-magnitude table over L with a monotone-trend flag."""
    rows = []
    for L in range(1, L_max + 1):
        params = FamilyParams(L, N)
        res = wigner_montecarlo(alpha, params, MonteCarloSpec(samples, seed=seed, workers=workers))
        rows.append(
            {
                "L": L,
                "estimate": res.estimate,
                "standard_error": res.standard_error,
                "mean_phase_magnitude": res.mean_phase_magnitude,
                "phase_standard_error": res.phase_standard_error,
                "effective_sample_size": res.effective_sample_size,
            }
        )
    positive = all(row["mean_phase_magnitude"] > 0 for row in rows)
    monotone = True
    for a, b in zip(rows, rows[1:]):
        slack = 2.0 * math.hypot(a["phase_standard_error"] or 0.0, b["phase_standard_error"] or 0.0)
        if b["mean_phase_magnitude"] > a["mean_phase_magnitude"] + slack:
            monotone = False
    return [
        CheckResult(
            name=f"sign trend L=1..{L_max}",
            passed=positive and monotone,
            detail={"rows": rows, "strictly_positive": positive, "non_increasing": monotone},
        )
    ]


SUITES = {
    "oracle": check_oracle,
    "normalization": check_normalization,
    "determinant": check_determinant,
    "sign": check_sign,
}


def run_suite(name: str, **kwargs) -> dict:
    """Run one named suite (or "all") and assemble a machine-readable report."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown check suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    started = time.time()
    results: list[CheckResult] = []
    for suite in names:
        results.extend(SUITES[suite](**kwargs) if suite == "sign" else SUITES[suite]())
    return {
        "suites": names,
        "passed": bool(all(r.passed for r in results)),
        "elapsed_seconds": time.time() - started,
        "checks": [
            {"name": r.name, "passed": bool(r.passed), "detail": _plain(r.detail)}
            for r in results
        ],
    }


def _plain(obj):
    """Recursively convert numpy scalars for JSON serialization."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj
