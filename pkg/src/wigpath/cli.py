"""Command-line interface: reproducible profile runs, the two-panel figure
bundle, consistency check suites, and saddle/sign diagnostic tables.

Every run writes a metadata sidecar (full configuration, package version,
wall time) next to its output, sufficient to re-run the command exactly.
Numbers are formatted with 17 significant digits so identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .checks import run_suite
from .integrate import MonteCarloSpec, QuadratureSpec, wigner_montecarlo, wigner_quadrature
from .saddle import RegionError, solve_saddle, wigner_saddle, wigner_wkb
from .states import FamilyParams, wigner_number, wigner_poisson, wigner_spectral

OUTDIR_ENV = "WIGPATH_OUTDIR"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    state: str | None = None
    n: int | None = None
    N: float | None = None
    L: int | None = None
    method: str | None = None
    r_min: float = 0.0
    r_max: float = 4.0
    points: int = 200
    M: int = 128
    samples: int = 100_000
    seed: int = 0
    workers: int = 1
    batch_size: int | None = None
    normalization: str = "wkb-matched"
    output: str | None = None
    fmt: str = "csv"


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def _out_path(explicit: str | None, default_name: str) -> Path:
    if explicit:
        return Path(explicit)
    base = Path(os.environ.get(OUTDIR_ENV, "."))
    return base / default_name


def _write_sidecar(path: Path, config: dict, started: float) -> None:
    meta = {
        "config": config,
        "artifact_version": __version__,
        "wall_time_seconds": time.time() - started,
        "output": path.name,
    }
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _write_rows(path: Path, header: list[str], rows: list[list[str]], fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    else:
        payload = [dict(zip(header, row)) for row in rows]
        path.write_text(json.dumps(payload, indent=1) + "\n")


def _profile_evaluator(cfg: RunConfig):
    """Return (callable r -> (value, stderr, region), method label)."""
    state, method = cfg.state, cfg.method
    if state == "poisson":
        if method != "exact":
            raise ConfigError("state 'poisson' supports --method exact (its closed form)")
        if cfg.N is None:
            raise ConfigError("state 'poisson' needs --N (mean occupation)")
        return (lambda r: (wigner_poisson(complex(r), cfg.N), None, "")), "exact"

    if state == "number":
        if cfg.n is None:
            raise ConfigError("state 'number' needs --n (the level)")
        if method == "exact":
            return (lambda r: (wigner_number(complex(r), cfg.n), None, "")), "exact"
        if method in ("saddle", "wkb"):
            L = cfg.L if cfg.L is not None else 512

            def eval_asym(r: float):
                try:
                    if method == "saddle":
                        val = wigner_saddle(complex(r), cfg.n, L=L, normalization=cfg.normalization).value
                    else:
                        val = wigner_wkb(complex(r), cfg.n)
                    return val, None, ""
                except RegionError as exc:
                    return None, None, exc.region

            return eval_asym, method
        raise ConfigError("state 'number' supports --method exact, saddle or wkb")

    if state == "family":
        if cfg.L is None or cfg.N is None:
            raise ConfigError("state 'family' needs --L and --N")
        params = FamilyParams(cfg.L, cfg.N)
        if method == "spectral":
            return (lambda r: (wigner_spectral(complex(r), params), None, "")), "spectral"
        if method == "quadrature":
            qspec = QuadratureSpec(points_per_dim=cfg.M)
            return (
                lambda r: (wigner_quadrature(complex(r), params, qspec).value, None, "")
            ), "quadrature"
        if method == "mc":
            mspec = MonteCarloSpec(
                cfg.samples, seed=cfg.seed, workers=cfg.workers, batch_size=cfg.batch_size
            )

            def eval_mc(r: float):
                res = wigner_montecarlo(complex(r), params, mspec)
                return res.estimate, res.standard_error, ""

            return eval_mc, "mc"
        raise ConfigError(
            "state 'family' supports --method spectral, quadrature or mc "
            "(there is no single closed form)"
        )

    raise ConfigError(f"unknown state {state!r}; choose poisson, number or family")


def _profile_rows(cfg: RunConfig) -> tuple[list[str], list[list[str]]]:
    evaluate, label = _profile_evaluator(cfg)
    rs = np.linspace(cfg.r_min, cfg.r_max, cfg.points)

    def one(r: float) -> list[str]:
        value, stderr, region = evaluate(float(r))
        return [_fmt(r), _fmt(value), label, _fmt(stderr), region]

    if cfg.workers > 1 and cfg.method in ("quadrature", "spectral", "exact"):
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(one, rs))
    else:
        rows = [one(r) for r in rs]
    return ["r", "W", "method", "stderr", "region"], rows


def cmd_profile(cfg: RunConfig) -> int:
    started = time.time()
    header, rows = _profile_rows(cfg)
    name = f"profile_{cfg.state}_{cfg.method}.{ 'json' if cfg.fmt == 'json' else 'csv'}"
    path = _out_path(cfg.output, name)
    _write_rows(path, header, rows, cfg.fmt)
    _write_sidecar(path, asdict(cfg), started)
    print(path)
    return EXIT_OK


def _interpolate_gaps(rs: np.ndarray, vals: list, regions: list[str]) -> tuple[list, list[str]]:
    """Linearly fill region-error points from their valid neighbours (plot aid only)."""
    vals = list(vals)
    regions = list(regions)
    good = [i for i, v in enumerate(vals) if v is not None]
    if not good:
        return vals, regions
    for i, v in enumerate(vals):
        if v is not None:
            continue
        left = max((g for g in good if g < i), default=None)
        right = min((g for g in good if g > i), default=None)
        if left is None or right is None:
            anchor = left if left is not None else right
            vals[i] = vals[anchor]
        else:
            w = (rs[i] - rs[left]) / (rs[right] - rs[left])
            vals[i] = (1.0 - w) * vals[left] + w * vals[right]
        regions[i] = f"interpolated:{regions[i]}"
    return vals, regions


def cmd_figure2(n_values: list[int], out_dir: str | None, points: int, L: int, fmt: str) -> int:
    """Emit the exact, matched-saddle and Poisson radial profiles per level."""
    started = time.time()
    base = Path(out_dir) if out_dir else Path(os.environ.get(OUTDIR_ENV, ".")) / "figure2"
    base.mkdir(parents=True, exist_ok=True)
    manifest = {"artifact_version": __version__, "panels": []}
    for n in n_values:
        if n < 1:
            raise ConfigError("figure2 needs n >= 1")
        N = n + 0.5
        r_hi = math.sqrt(N) + 2.0
        rs = np.linspace(0.0, r_hi, points)
        files = {}

        exact_rows = [[_fmt(r), _fmt(wigner_number(complex(r), n)), "exact", "", ""] for r in rs]
        poisson_rows = [[_fmt(r), _fmt(wigner_poisson(complex(r), N)), "exact", "", ""] for r in rs]

        saddle_vals: list = []
        regions: list[str] = []
        for r in rs:
            try:
                saddle_vals.append(wigner_saddle(complex(r), n, L=L).value)
                regions.append("")
            except RegionError as exc:
                saddle_vals.append(None)
                regions.append(exc.region)
        saddle_vals, regions = _interpolate_gaps(rs, saddle_vals, regions)
        saddle_rows = [
            [_fmt(r), _fmt(v), "saddle", "", reg] for r, v, reg in zip(rs, saddle_vals, regions)
        ]

        header = ["r", "W", "method", "stderr", "region"]
        for label, rows in (("exact", exact_rows), ("saddle", saddle_rows), ("poisson", poisson_rows)):
            path = base / f"n{n}_{label}.{ 'json' if fmt == 'json' else 'csv'}"
            _write_rows(path, header, rows, fmt)
            files[label] = path.name
        config = {"n": n, "N": N, "points": points, "L": L, "fmt": fmt}
        digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
        manifest["panels"].append({"n": n, "files": files, "config": config, "config_sha256": digest})
    manifest_path = base / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    _write_sidecar(manifest_path, {"command": "figure2", "n_values": n_values, "points": points, "L": L}, started)
    print(manifest_path)
    return EXIT_OK


def cmd_check(suite: str, output: str | None, **kwargs) -> int:
    started = time.time()
    report = run_suite(suite, **kwargs)
    text = json.dumps(report, indent=2, sort_keys=True)
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        _write_sidecar(path, {"command": "check", "suite": suite, **kwargs}, started)
    print(text)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def cmd_saddle_table(
    n: int, L: int, s_min: float, s_max: float, points: int, output: str | None, fmt: str
) -> int:
    started = time.time()
    r = math.sqrt(n + 0.5)
    header = [
        "s", "s_over_r", "branch", "theta_re", "theta_im",
        "action_re", "action_im", "logdet_re", "logdet_im", "t_re", "t_im", "residual", "region",
    ]
    rows = []
    for s in np.linspace(s_min, s_max, points):
        try:
            sol = solve_saddle(float(s), r, L)
        except RegionError as exc:
            rows.append([_fmt(s), _fmt(s / r)] + [""] * 10 + [exc.region])
            continue
        ld = sol.log_det_hessian
        rows.append(
            [
                _fmt(s), _fmt(s / r), sol.branch,
                _fmt(sol.theta.real), _fmt(sol.theta.imag),
                _fmt(sol.stationary_action.real), _fmt(sol.stationary_action.imag),
                _fmt(ld.real if ld is not None else None),
                _fmt(ld.imag if ld is not None else None),
                _fmt(sol.t.real), _fmt(sol.t.imag),
                _fmt(sol.residual()), "",
            ]
        )
    path = _out_path(output, f"saddle_n{n}_L{L}.{ 'json' if fmt == 'json' else 'csv'}")
    _write_rows(path, header, rows, fmt)
    _write_sidecar(
        path,
        {"command": "saddle-table", "n": n, "L": L, "s_min": s_min, "s_max": s_max, "points": points},
        started,
    )
    print(path)
    return EXIT_OK


def cmd_mc_diag(
    N: float, alpha: float, L_min: int, L_max: int,
    samples: int, seed: int, workers: int, output: str | None, fmt: str,
) -> int:
    started = time.time()
    header = ["L", "estimate", "stderr", "mean_phase_magnitude", "phase_stderr", "ess"]
    rows = []
    for L in range(L_min, L_max + 1):
        params = FamilyParams(L, N)
        res = wigner_montecarlo(complex(alpha), params, MonteCarloSpec(samples, seed=seed, workers=workers))
        rows.append(
            [
                str(L), _fmt(res.estimate), _fmt(res.standard_error),
                _fmt(res.mean_phase_magnitude), _fmt(res.phase_standard_error),
                _fmt(res.effective_sample_size),
            ]
        )
    path = _out_path(output, f"mc_diag_N{N}.{ 'json' if fmt == 'json' else 'csv'}")
    _write_rows(path, header, rows, fmt)
    _write_sidecar(
        path,
        {
            "command": "mc-diag", "N": N, "alpha": alpha, "L_min": L_min, "L_max": L_max,
            "samples": samples, "seed": seed, "workers": workers,
        },
        started,
    )
    print(path)
    return EXIT_OK


def _read_config_file(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigpath",
        description="Wigner functions of radially squeezed states: closed forms, "
        "circle path-integral quadrature/Monte Carlo, and saddle-point asymptotics.",
    )
    parser.add_argument("--version", action="version", version=f"wigpath {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    prof = sub.add_parser("profile", help="radial Wigner profile of one state by one method")
    prof.add_argument("--config", help="key=value file; command-line flags override")
    prof.add_argument("--state", choices=["poisson", "number", "family"])
    prof.add_argument("--n", type=int, help="number-state level")
    prof.add_argument("--N", type=float, help="mean occupation / circle radius squared")
    prof.add_argument("--L", type=int, help="slice count of the family member")
    prof.add_argument("--method", choices=["exact", "spectral", "quadrature", "mc", "saddle", "wkb"])
    prof.add_argument("--rmin", dest="r_min", type=float, default=0.0)
    prof.add_argument("--rmax", dest="r_max", type=float, default=4.0)
    prof.add_argument("--points", type=int, default=200)
    prof.add_argument("--M", type=int, default=128, help="quadrature points per angle")
    prof.add_argument("--samples", type=int, default=100_000)
    prof.add_argument("--seed", type=int, default=0)
    prof.add_argument("--workers", type=int, default=1)
    prof.add_argument("--batch", dest="batch_size", type=int)
    prof.add_argument("--normalization", choices=["raw", "wkb-matched"], default="wkb-matched")
    prof.add_argument("--out", dest="output")
    prof.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")

    fig = sub.add_parser("figure2", help="exact / saddle / Poisson profile bundle per level")
    fig.add_argument("--n", type=int, nargs="+", default=[1, 10])
    fig.add_argument("--points", type=int, default=801)
    fig.add_argument("--L", type=int, default=512, help="slice count entering the saddle constants")
    fig.add_argument("--out-dir", dest="out_dir")
    fig.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")

    chk = sub.add_parser("check", help="run a named cross-validation suite")
    chk.add_argument("suite", choices=["oracle", "normalization", "determinant", "sign", "all"])
    chk.add_argument("--out", dest="output")
    chk.add_argument("--L-max", dest="L_max", type=int, default=5, help="sign suite: largest L")
    chk.add_argument("--samples", type=int, default=200_000, help="sign suite: samples per L")
    chk.add_argument("--seed", type=int, default=7, help="sign suite: RNG seed")

    sad = sub.add_parser("saddle-table", help="dump solved saddle data over an |alpha| grid")
    sad.add_argument("--n", type=int, required=True)
    sad.add_argument("--L", type=int, default=8)
    sad.add_argument("--smin", dest="s_min", type=float, default=0.05)
    sad.add_argument("--smax", dest="s_max", type=float)
    sad.add_argument("--points", type=int, default=50)
    sad.add_argument("--out", dest="output")
    sad.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")

    mcd = sub.add_parser("mc-diag", help="sign-problem diagnostics over a range of L")
    mcd.add_argument("--N", type=float, required=True)
    mcd.add_argument("--alpha", type=float, default=0.8)
    mcd.add_argument("--L-min", dest="L_min", type=int, default=1)
    mcd.add_argument("--L-max", dest="L_max", type=int, default=5)
    mcd.add_argument("--samples", type=int, default=200_000)
    mcd.add_argument("--seed", type=int, default=0)
    mcd.add_argument("--workers", type=int, default=1)
    mcd.add_argument("--out", dest="output")
    mcd.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")

    return parser


_CONFIG_COERCE = {
    "n": int, "L": int, "points": int, "M": int, "samples": int, "seed": int,
    "workers": int, "batch_size": int, "N": float, "r_min": float, "r_max": float,
}


def _apply_config_file(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    if getattr(args, "config", None) is None:
        return args
    file_values = _read_config_file(args.config)
    explicit = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
    alias = {"rmin": "r_min", "rmax": "r_max", "batch": "batch_size", "out": "output", "format": "fmt"}
    for key, raw in file_values.items():
        dest = alias.get(key, key)
        if not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        if dest in explicit or alias.get(key) in explicit or key in explicit:
            continue  # command line wins
        caster = _CONFIG_COERCE.get(dest, str)
        setattr(args, dest, caster(raw))
    return args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "profile":
            args = _apply_config_file(args, argv)
            cfg = RunConfig(
                command="profile", state=args.state, n=args.n, N=args.N, L=args.L,
                method=args.method, r_min=args.r_min, r_max=args.r_max, points=args.points,
                M=args.M, samples=args.samples, seed=args.seed, workers=args.workers,
                batch_size=args.batch_size, normalization=args.normalization,
                output=args.output, fmt=args.fmt,
            )
            return cmd_profile(cfg)
        if args.command == "figure2":
            return cmd_figure2(args.n, args.out_dir, args.points, args.L, args.fmt)
        if args.command == "check":
            if args.suite == "sign":
                return cmd_check(args.suite, args.output, L_max=args.L_max, samples=args.samples, seed=args.seed)
            return cmd_check(args.suite, args.output)
        if args.command == "saddle-table":
            s_max = args.s_max if args.s_max is not None else math.sqrt(args.n + 0.5) + 2.0
            return cmd_saddle_table(args.n, args.L, args.s_min, s_max, args.points, args.output, args.fmt)
        if args.command == "mc-diag":
            return cmd_mc_diag(
                args.N, args.alpha, args.L_min, args.L_max,
                args.samples, args.seed, args.workers, args.output, args.fmt,
            )
        raise ConfigError(f"unhandled command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
