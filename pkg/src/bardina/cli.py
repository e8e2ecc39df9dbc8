"""Command-line front end.

One dispatcher, five subcommands:

    simulate     integrate the vorticity equation, emit observer CSV
    lyapunov     Benettin exponent estimation, emit exponent CSV
    instability  per-chain growth rates for a Kolmogorov forcing, CSV
    bounds       two-sided attractor dimension bounds, JSON
    verify       inequality suites with PASS/FAIL margins, CSV

Every output starts with `#` comment lines recording the version, the
sha256 of the effective configuration, and the seed; identical
configuration and seed give byte-identical output.  Floats are printed with
repr, the shortest decimal that round-trips.  The JSON body of `bounds`
follows the comment lines, so strip `#` lines before handing it to a JSON
parser.

Configuration may come from a `key = value` file (# comments allowed);
command-line flags override file values.  Exit codes: 0 success, 1 a verify
suite failed (or a computation error), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .spectral import ModelParams, SpectralField, make_grid, random_field
from . import bounds as bounds_mod
from . import dynamics, inequalities, instability
from . import io as ckpt

__all__ = ["RunConfig", "load_config", "main", "parse_and_dispatch"]


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Effective settings of one invocation; file values, then flag overrides."""

    subcommand: str = ""
    alpha: float | None = None
    gamma: float | None = None
    grid: int | None = None
    dt: float | None = None
    t_end: float | None = None
    forcing: str = "zero"
    seed: int = 0
    output: str | None = None
    threads: int = 0
    s: int | None = None
    delta: float = 0.35
    amplitude: float | None = None
    exponents: int = 4
    renorm_every: int = 10
    t_transient: float | None = None
    t_average: float | None = None
    suite: str = "all"
    tolerance: float | None = None
    initial: str | None = None
    save: str | None = None
    observe_every: int = 1


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
_PARSERS = {
    "alpha": float, "gamma": float, "dt": float, "t_end": float,
    "delta": float, "amplitude": float, "t_transient": float,
    "t_average": float, "tolerance": float,
    "grid": int, "seed": int, "threads": int, "s": int,
    "exponents": int, "renorm_every": int, "observe_every": int,
    "forcing": str, "output": str, "suite": str, "initial": str,
    "save": str, "subcommand": str,
}


def load_config(path: str) -> dict:
    """Parse a `key = value` file into typed values.

    Unknown keys and values of the wrong type are errors; the latter names
    the offending line number.
    """
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _PARSERS:
                raise ConfigError(f"{path}: unknown configuration key {key!r}")
            try:
                values[key] = _PARSERS[key](val)
            except ValueError:
                raise ConfigError(
                    f"{path}:{lineno}: value {val!r} for key {key!r} is not "
                    f"a valid {_PARSERS[key].__name__}"
                ) from None
    return values


def _effective_config(args: argparse.Namespace) -> RunConfig:
    merged = {f.name: f.default for f in fields(RunConfig)}
    if getattr(args, "config", None):
        merged.update(load_config(args.config))
    for key in merged:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    merged["subcommand"] = args.subcommand
    if merged["threads"] == 0:
        env = os.environ.get("EBA_THREADS", "").strip()
        if env:
            try:
                merged["threads"] = int(env)
            except ValueError:
                raise ConfigError(f"EBA_THREADS = {env!r} is not an integer")
    return RunConfig(**merged)


def config_lines(cfg: RunConfig) -> list[str]:
    """Canonical `key = value` lines of the effective config (round-trips)."""
    out = []
    for name in sorted(_FIELD_TYPES):
        val = getattr(cfg, name)
        if val is None:
            continue
        out.append(f"{name} = {val!r}" if isinstance(val, float) else f"{name} = {val}")
    return out


def _header(cfg: RunConfig) -> list[str]:
    lines = config_lines(cfg)
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    head = [f"# bardina {__version__}", f"# config sha256: {digest}"]
    head += [f"# {line}" for line in lines]
    return head


def _emit(cfg: RunConfig, body: list[str], path: str | None = None) -> None:
    text = "\n".join(_header(cfg) + body) + "\n"
    target = path if path is not None else cfg.output
    if target is None:
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv(rows: list[tuple], columns: tuple[str, ...]) -> list[str]:
    return [",".join(columns)] + [",".join(_fmt(v) for v in row) for row in rows]


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError(
            f"{cfg.subcommand}: missing required setting(s): {', '.join(missing)}"
        )


def _limit_threads(threads: int) -> None:
    # best effort: cap the BLAS pools used by the dense eigensolver; the FFT
    # path is single-threaded regardless
    if threads > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)


def _check_grid(cfg: RunConfig) -> int:
    _require(cfg, "grid")
    n = cfg.grid
    if n < 32 or (n & (n - 1)) != 0:
        raise ConfigError(f"grid must be a power of two >= 32, got {n}")
    return n


def _make_forcing(cfg: RunConfig, grid, params: ModelParams) -> SpectralField:
    """Forcing spec: 'zero' | 'kolmogorov S LAMBDA' | 'checkpoint PATH'."""
    parts = cfg.forcing.split()
    if parts == ["zero"]:
        return SpectralField(grid, np.zeros((grid.n, grid.n), dtype=complex))
    if parts and parts[0] == "kolmogorov":
        if len(parts) != 3:
            raise ConfigError(f"forcing {cfg.forcing!r}: expected 'kolmogorov S LAMBDA'")
        try:
            s, lam = int(parts[1]), float(parts[2])
        except ValueError:
            raise ConfigError(f"forcing {cfg.forcing!r}: S must be int, LAMBDA float") from None
        spec = instability.KolmogorovSpec(s=s, amplitude=lam, gamma=params.gamma)
        from .spectral import curl
        return curl(instability.kolmogorov_forcing(spec, grid))
    if parts and parts[0] == "checkpoint":
        if len(parts) != 2:
            raise ConfigError(f"forcing {cfg.forcing!r}: expected 'checkpoint PATH'")
        field, fparams, _ = ckpt.read_scalar(parts[1])
        if field.grid.n != grid.n:
            raise ConfigError(f"forcing checkpoint grid {field.grid.n} != run grid {grid.n}")
        return field
    raise ConfigError(f"unrecognized forcing spec {cfg.forcing!r}")


def _initial_state(cfg: RunConfig, params: ModelParams) -> dynamics.SimState:
    if cfg.initial is not None:
        state = ckpt.load_state(cfg.initial)
        if state.params != params and (cfg.alpha is not None or cfg.gamma is not None):
            raise ConfigError(
                f"checkpoint parameters {state.params} disagree with configured "
                f"alpha/gamma; drop the flags or use a matching checkpoint"
            )
        return state
    _require(cfg, "alpha", "gamma")
    n = _check_grid(cfg)
    grid = make_grid(n)
    fc = _make_forcing(cfg, grid, params)
    rng = np.random.default_rng(np.random.Philox(cfg.seed))
    omega = random_field(grid, rng, amplitude=1.0, band=max(4, n // 8))
    return dynamics.make_state(omega, params, forcing_curl=fc)


def _cmd_simulate(cfg: RunConfig) -> int:
    _require(cfg, "alpha", "gamma", "dt", "t_end")
    params = ModelParams(alpha=cfg.alpha, gamma=cfg.gamma)
    state = _initial_state(cfg, params)
    state, rows = dynamics.simulate(state, cfg.t_end, cfg.dt, observe_every=cfg.observe_every)
    body = _csv(
        [(r.time, r.enstrophy_bar, r.grad_enstrophy_bar, r.r0_margin) for r in rows],
        ("time", "enstrophy_bar", "grad_enstrophy_bar", "r0_margin"),
    )
    _emit(cfg, body)
    if cfg.save is not None:
        ckpt.save_state(state, cfg.save)
    return 0


def _cmd_lyapunov(cfg: RunConfig) -> int:
    _require(cfg, "alpha", "gamma", "dt")
    params = ModelParams(alpha=cfg.alpha, gamma=cfg.gamma)
    state = _initial_state(cfg, params)
    report = dynamics.lyapunov_spectrum(
        state,
        n=cfg.exponents,
        dt=cfg.dt,
        renorm_every=cfg.renorm_every,
        t_transient=cfg.t_transient,
        t_average=cfg.t_average,
        seed=cfg.seed,
    )
    body = _csv(
        [
            (j + 1, report.exponents[j], report.standard_errors[j], report.partial_sums[j])
            for j in range(len(report.exponents))
        ],
        ("n", "exponent", "standard_error", "q"),
    )
    body.insert(1, f"# lyapunov_dimension = {report.lyapunov_dimension!r}")
    _emit(cfg, body)
    return 0


def _cmd_instability(cfg: RunConfig) -> int:
    _require(cfg, "alpha", "gamma", "s")
    chains = instability.region_lattice(cfg.s, cfg.delta)
    amplitude = cfg.amplitude
    if amplitude is None:
        amplitude = instability.threshold_amplitude(cfg.s, cfg.delta, cfg.alpha, cfg.gamma)
    spec = instability.KolmogorovSpec(s=cfg.s, amplitude=amplitude, gamma=cfg.gamma)
    rows = []
    for t, r in chains:
        ch = instability.Chain.from_spec(spec, t=t, r=r, alpha=cfg.alpha)
        sigma = instability.solve_sigma(ch)
        lo, hi = instability.sigma_bounds(ch, cfg.delta)
        oracle = instability.chain_matrix_eigen(ch)
        rows.append((cfg.s, t, r, cfg.delta, ch.coupling, sigma, lo, hi, oracle))
    body = _csv(
        rows,
        ("s", "t", "r", "delta", "Lambda", "sigma",
         "sigma_lower_bound", "sigma_upper_bound", "oracle_sigma"),
    )
    _emit(cfg, body)
    return 0


def _cmd_bounds(cfg: RunConfig) -> int:
    _require(cfg, "alpha", "gamma")
    rep = bounds_mod.dimension_report(cfg.alpha, cfg.gamma)
    record = {
        "alpha": rep.alpha,
        "gamma": rep.gamma,
        "curl_g_sq": rep.curl_g_norm_sq,
        "upper": rep.upper,
        "lower": rep.lower,
        "c1": rep.constant_c1,
        "delta_star": rep.delta_star,
        "s": rep.s,
    }
    _emit(cfg, [json.dumps(record, indent=2, sort_keys=True)])
    return 0


# ---------------------------------------------------------------------------
# verify suites


def _suite_lattice_f(cfg: RunConfig):
    rows, ok = [], True
    for m in np.linspace(0.1, 16.0, 61):
        m = float(m)
        res = inequalities.lattice_F(m)
        margin = res.margin()
        good = margin > 0.0
        ok &= good
        rows.append((m, res.F_direct, res.tail_bound, margin, "PASS" if good else "FAIL"))
    return ("m", "F_direct", "tail_bound", "margin", "status"), rows, ok


def _suite_rho_l2(cfg: RunConfig):
    rows, ok = [], True
    for n in (1, 2, 4, 8, 16):
        for m in (0.25, 0.5, 1.0, 2.0):
            res = inequalities.rho_l2_check(n=n, m=m, trials=25, seed=cfg.seed)
            margin = 1.0 - res.worst_ratio
            good = res.violations == 0
            ok &= good
            rows.append((n, m, res.trials, res.worst_ratio, margin, "PASS" if good else "FAIL"))
    return ("n", "m", "trials", "worst_ratio", "margin", "status"), rows, ok


def _suite_trace_k2(cfg: RunConfig):
    rows, ok = [], True
    rng = np.random.default_rng(np.random.Philox(cfg.seed))
    grid = make_grid(64)
    for m in (0.5, 1.0, 2.0, 4.0):
        for trial in range(5):
            raw = random_field(grid, rng, amplitude=1.0, band=10)
            samples = raw.to_samples()
            v = SpectralField(grid, np.fft.fft2(samples * samples) / grid.n**2)
            res = inequalities.trace_k2_check(v, m=m)
            margin = res.rhs - res.lhs
            good = margin >= 0.0
            ok &= good
            rows.append((m, trial, res.lhs, res.rhs, margin, "PASS" if good else "FAIL"))
    return ("m", "trial", "lhs", "rhs", "margin", "status"), rows, ok


def _suite_sigma_bounds(cfg: RunConfig):
    rows, ok = [], True
    alpha = cfg.alpha if cfg.alpha is not None else 1.0 / 64.0
    gamma = cfg.gamma if cfg.gamma is not None else 1.0
    delta = cfg.delta
    for s in (8, 16, 32):
        amplitude = instability.threshold_amplitude(s, delta, alpha, gamma)
        spec = instability.KolmogorovSpec(s=s, amplitude=amplitude, gamma=gamma)
        for t, r in instability.region_lattice(s, delta):
            ch = instability.Chain.from_spec(spec, t=t, r=r, alpha=alpha)
            sigma = instability.solve_sigma(ch)
            lo, hi = instability.sigma_bounds(ch, delta)
            margin = min(sigma - lo, hi - sigma)
            good = margin >= 0.0 and sigma > 0.0
            ok &= good
            rows.append((s, t, r, sigma, lo, hi, margin, "PASS" if good else "FAIL"))
    return ("s", "t", "r", "sigma", "sigma_lower_bound", "sigma_upper_bound",
            "margin", "status"), rows, ok


def _suite_psi_negative(cfg: RunConfig):
    rows, ok = [], True
    for m in np.linspace(0.9, 16.0, 31):
        m = float(m)
        val = inequalities.psi_big(m)
        margin = -val
        good = margin > 0.0
        ok &= good
        rows.append((m, val, margin, "PASS" if good else "FAIL"))
    return ("m", "psi", "margin", "status"), rows, ok


_SUITES = {
    "lattice-F": _suite_lattice_f,
    "rho-l2": _suite_rho_l2,
    "trace-k2": _suite_trace_k2,
    "sigma-bounds": _suite_sigma_bounds,
    "psi-negative": _suite_psi_negative,
}


def _cmd_verify(cfg: RunConfig) -> int:
    names = list(_SUITES) if cfg.suite == "all" else [cfg.suite]
    for name in names:
        if name not in _SUITES:
            raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(_SUITES)} or all")
    all_ok = True
    multi = len(names) > 1 and cfg.output is not None
    for name in names:
        columns, rows, ok = _SUITES[name](cfg)
        all_ok &= ok
        body = [f"# suite: {name}", f"# result: {'PASS' if ok else 'FAIL'}"]
        body += _csv(rows, columns)
        path = cfg.output
        if multi:
            path = os.path.join(cfg.output, f"{name}.csv")
        _emit(cfg, body, path=path)
    return 0 if all_ok else 1


_COMMANDS = {
    "simulate": _cmd_simulate,
    "lyapunov": _cmd_lyapunov,
    "instability": _cmd_instability,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bardina",
        description="Damped Euler-Bardina model: simulation, instability, dimension bounds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--threads", type=int,
                        help="thread cap, 0 = auto; EBA_THREADS is the fallback")
    common.add_argument("--alpha", type=float, help="filter scale alpha > 0")
    common.add_argument("--gamma", type=float, help="damping rate gamma > 0")

    p = sub.add_parser("simulate", parents=[common], help="integrate the vorticity equation")
    p.add_argument("--grid", type=int, help="modes per axis, power of two >= 32")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--t-end", dest="t_end", type=float, help="final time")
    p.add_argument("--forcing", help="'zero' | 'kolmogorov S LAMBDA' | 'checkpoint PATH'")
    p.add_argument("--initial", help="EBV1 checkpoint to resume from")
    p.add_argument("--save", help="write final state checkpoint here")
    p.add_argument("--observe-every", dest="observe_every", type=int,
                   help="steps between observer rows (default 1)")

    p = sub.add_parser("lyapunov", parents=[common], help="Lyapunov exponents and dimension")
    p.add_argument("--grid", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--forcing", help="'zero' | 'kolmogorov S LAMBDA' | 'checkpoint PATH'")
    p.add_argument("--initial", help="EBV1 checkpoint to start from")
    p.add_argument("--exponents", type=int, help="number of exponents (default 4)")
    p.add_argument("--renorm-every", dest="renorm_every", type=int)
    p.add_argument("--t-transient", dest="t_transient", type=float)
    p.add_argument("--t-average", dest="t_average", type=float)

    p = sub.add_parser("instability", parents=[common],
                       help="per-chain growth rates in the instability region")
    p.add_argument("--s", type=int, help="forcing wavenumber")
    p.add_argument("--delta", type=float, help="region parameter (default 0.35)")
    p.add_argument("--amplitude", type=float,
                   help="forcing amplitude; default is the threshold-exceeding choice")

    sub.add_parser("bounds", parents=[common],
                   help="two-sided attractor dimension bounds as JSON")

    p = sub.add_parser("verify", parents=[common], help="inequality verification suites")
    p.add_argument("--suite", help=f"one of {', '.join(_SUITES)} or all (default)")
    return parser


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _effective_config(args)
        _limit_threads(cfg.threads)
        return _COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"bardina: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"bardina: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"bardina: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return parse_and_dispatch()
