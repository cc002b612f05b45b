"""Command-line front end.

Usage::

    cavitywalk fig1 --n 8 --out fig1b.csv
    cavitywalk max-deloc --n 2 --theta 0.7853981634 --phi 0
    cavitywalk verify --seed 7

Exit status: 0 success, 1 numeric verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .correlations import negativity as psi_negativity
from .correlations import pair_probabilities, report_from_state
from .fock import (
    PsiFamily,
    chi_state,
    evolve_oracle,
    fock_state,
    psi_state,
    sector_hamiltonian,
)
from .lattice import ArrayModel, propagator
from .sweep import (
    COLUMNS,
    FIG1_THETAS,
    FIG2_SETTINGS,
    FIG2_SIZES,
    FIG_PHIS,
    CrossCheckError,
    TimeGrid,
    max_delocalization,
    n_sweep,
    theta_phi_sweep,
)

COMMANDS = ("propagator", "evolve", "correlations", "max-deloc", "fig1", "fig2", "negativity", "verify")
VERIFY_SIZES = (1, 2, 4, 8)
VERIFY_CASES = 200
VERIFY_TOL = 1e-10


@dataclass
class RunConfig:
    command: str
    n: int = 2
    omega: float = 1.0
    j: float = 0.1
    r: Optional[int] = None
    s: Optional[int] = None
    theta: float = math.pi / 4
    phi: float = 0.0
    t: float = 0.0
    t_max: Optional[float] = None
    dt: Optional[float] = None
    refine: bool = True
    out: Optional[str] = None
    format: str = "csv"
    seed: int = 0
    n_given: bool = False

    @property
    def model(self) -> ArrayModel:
        return ArrayModel(self.n, self.omega, self.j)

    def grid(self, model: ArrayModel) -> TimeGrid:
        default = TimeGrid.for_model(model, refine=self.refine)
        return TimeGrid(
            self.t_max if self.t_max is not None else default.t_max,
            self.dt if self.dt is not None else default.step,
            self.refine,
        )

    def family(self) -> PsiFamily:
        return PsiFamily(self.r, self.s, self.theta, self.phi)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cavitywalk",
        description="Two-photon localisation and delocalisation in a coupled-cavity chain.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="PATH", help="key = value file supplying defaults")
    p.add_argument("--n", type=int, help="number of cavities (fig2: largest N, default 20)")
    p.add_argument("--omega", type=_finite, help="cavity frequency (default 1.0)")
    p.add_argument("--j", type=_finite, help="hopping strength (default 0.1)")
    p.add_argument("--r", type=int, help="first input cavity (default floor(N/2))")
    p.add_argument("--s", type=int, help="second input cavity (default r + 1)")
    p.add_argument("--theta", type=_finite, help="mixing angle in radians")
    p.add_argument("--phi", type=_finite, help="relative phase in radians")
    p.add_argument("--t", type=_finite, help="evaluation time")
    p.add_argument("--t-max", type=_finite, help="scan horizon (default 400/|J|)")
    p.add_argument("--dt", type=_finite, help="coarse scan step (default 0.05/|J|)")
    p.add_argument("--refine", type=_bool, nargs="?", const=True,
                   help="golden-section refinement; '--refine false' disables it (default on)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int, help="seed for verify's random cases (default 0)")
    return p


_CONFIG_TYPES = {
    "n": int, "omega": _finite, "j": _finite, "r": int, "s": int, "theta": _finite,
    "phi": _finite, "t": _finite, "t_max": _finite, "dt": _finite, "refine": _bool,
    "out": str, "format": str, "seed": int,
}


def _read_config(path: str, parser: argparse.ArgumentParser) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        parser.error(f"argument --config: cannot read {path}: {exc.strerror}")
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"argument --config: {path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in _CONFIG_TYPES:
            parser.error(f"argument --config: {path}:{lineno}: unknown key {key!r}")
        try:
            values[dest] = _CONFIG_TYPES[dest](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            parser.error(f"argument --{key}: {path}:{lineno}: {exc}")
    if values.get("format", "csv") not in ("csv", "json"):
        parser.error(f"argument --format: invalid choice {values['format']!r}")
    return values


def parse_args(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    merged = _read_config(ns.config, parser) if ns.config else {}
    for key, value in vars(ns).items():
        if key not in ("command", "config") and value is not None:
            merged[key] = value
    cfg = RunConfig(command=ns.command, n_given="n" in merged, **merged)
    if cfg.command == "fig2" and not cfg.n_given:
        cfg.n = max(FIG2_SIZES)

    if cfg.n < 1:
        parser.error(f"argument --n: must be >= 1, got {cfg.n}")
    if cfg.command in ("fig1", "fig2") and cfg.n < 2:
        parser.error(f"argument --n: {cfg.command} needs at least 2 cavities")
    if cfg.command in ("max-deloc", "fig1", "fig2", "correlations", "evolve") or cfg.r is not None:
        if cfg.r is None:
            cfg.r = max(cfg.n // 2, 1)
        if cfg.s is None:
            cfg.s = cfg.r + 1
    for name in ("r", "s"):
        v = getattr(cfg, name)
        if v is not None and not 1 <= v <= cfg.n:
            parser.error(f"argument --{name}: must lie in 1..{cfg.n}, got {v}")
    if cfg.r is not None and cfg.r == cfg.s and cfg.command not in ("propagator", "negativity", "verify"):
        parser.error(f"argument --s: must differ from --r (both {cfg.r})")
    if cfg.command in ("max-deloc", "fig1", "fig2") and cfg.j == 0.0 and (cfg.t_max is None or cfg.dt is None):
        parser.error("argument --j: zero hopping needs explicit --t-max and --dt")
    if cfg.t_max is not None and cfg.t_max <= 0:
        parser.error(f"argument --t-max: must be > 0, got {cfg.t_max}")
    if cfg.dt is not None and cfg.dt <= 0:
        parser.error(f"argument --dt: must be > 0, got {cfg.dt}")
    if cfg.command in ("max-deloc", "fig1", "fig2"):
        try:
            cfg.grid(cfg.model)
        except ValueError as exc:
            parser.error(f"argument --dt: {exc}")
    return cfg


def fmt(x) -> str:
    """Locale-independent real with 17 significant digits."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _write_table(cfg: RunConfig, header: Sequence[str], rows: Sequence[Sequence], trailer: dict | None = None):
    if cfg.format == "json":
        records = [dict(zip(header, (_jsonable(v) for v in row))) for row in rows]
        payload = records if trailer is None else {"rows": records, **trailer}
        text = json.dumps(payload, indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
        if trailer:
            for key, value in trailer.items():
                buf.write(f"# {key}={fmt(value)}\n")
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    return float(v)


def _sweep_rows(result):
    return [[getattr(row, c) for c in COLUMNS] for row in result.rows]


def _initial_state(cfg: RunConfig):
    return psi_state(cfg.family(), cfg.n)


def cmd_propagator(cfg):
    g = propagator(cfg.model, cfg.t).matrix
    rows = [[j + 1, l + 1, g[j, l].real, g[j, l].imag] for j in range(cfg.n) for l in range(cfg.n)]
    _write_table(cfg, ("j", "l", "re", "im"), rows)
    return 0


def cmd_evolve(cfg):
    state = evolve_oracle(cfg.model, _initial_state(cfg), cfg.t)
    rows = [[m, n, c.real, c.imag, abs(c) ** 2] for (m, n), c in zip(state.basis.pairs, state.amplitudes)]
    _write_table(cfg, ("m", "n", "re", "im", "prob"), rows)
    return 0


def cmd_correlations(cfg):
    rep = report_from_state(evolve_oracle(cfg.model, _initial_state(cfg), cfg.t))
    rows = [[m + 1, n + 1, rep.joint[m, n], rep.normalized[m, n]]
            for m in range(cfg.n) for n in range(m, cfg.n)]
    _write_table(cfg, ("m", "n", "Q", "P"), rows, {"S": rep.s_value})
    return 0


def cmd_max_deloc(cfg):
    model, family = cfg.model, cfg.family()
    s_max, t_at = max_delocalization(model, family, cfg.grid(model))
    row = [cfg.n, family.r, family.s, family.theta, family.phi, s_max, t_at, psi_negativity(family)]
    _write_table(cfg, COLUMNS, [row])
    return 0


def cmd_fig1(cfg):
    model = cfg.model
    result = theta_phi_sweep(model, FIG1_THETAS, FIG_PHIS, cfg.grid(model))
    _write_table(cfg, COLUMNS, _sweep_rows(result))
    return 0


def cmd_fig2(cfg):
    models = [ArrayModel(n, cfg.omega, cfg.j) for n in range(2, cfg.n + 1)]
    result = n_sweep(models, FIG2_SETTINGS, cfg.grid(models[0]))
    _write_table(cfg, COLUMNS, _sweep_rows(result))
    return 0


def cmd_negativity(cfg):
    # cavity labels do not affect the value; a two-cavity family carries the angles
    family = PsiFamily(1, 2, cfg.theta, cfg.phi)
    _write_table(cfg, ("theta", "phi", "negativity"), [[family.theta, family.phi, psi_negativity(family)]])
    return 0


def verify(sizes=VERIFY_SIZES, n_cases=VERIFY_CASES, seed=0, omega=1.0, hopping=0.1,
           horizon=400.0) -> dict:
    """Cross-check the propagator route against the sector oracle on random cases.

    Returns a dict of worst errors per check, the worst oracle/propagator
    case, and ``passed``.
    """
    rng = np.random.default_rng(seed)
    worst = {"pair_probabilities": 0.0, "unitarity": 0.0, "norm": 0.0,
             "photon_number": 0.0, "joint_sum": 0.0, "eigenstate": 0.0}
    worst_case = None
    for _ in range(n_cases):
        n = int(rng.choice(sizes))
        model = ArrayModel(n, omega, hopping)
        t = float(rng.uniform(0.0, horizon / abs(hopping)))
        theta, phi = rng.uniform(0.0, 2 * math.pi, size=2)
        if n == 1:
            state0 = fock_state(1, 1, 1)
            case = dict(N=1, t=t)
        else:
            r, s = (int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
            state0 = psi_state(PsiFamily(r, s, theta, phi), n)
            case = dict(N=n, r=r, s=s, theta=float(theta), phi=float(phi), t=t)
        oracle = evolve_oracle(model, state0, t)
        err = float(np.max(np.abs(oracle.probabilities() - pair_probabilities(model, state0, t))))
        if err >= worst["pair_probabilities"]:
            worst["pair_probabilities"], worst_case = err, case
        g = propagator(model, t).matrix
        worst["unitarity"] = max(worst["unitarity"], float(np.max(np.abs(g @ g.conj().T - np.eye(n)))))
        worst["norm"] = max(worst["norm"], abs(float(np.sum(oracle.probabilities())) - 1.0))
        worst["photon_number"] = max(worst["photon_number"], abs(float(oracle.mean_occupation().sum()) - 2.0))
        rep = report_from_state(oracle)
        worst["joint_sum"] = max(worst["joint_sum"], abs(float(np.sum(np.triu(rep.joint))) - 1.0))
    for n in sizes:
        model = ArrayModel(n, omega, hopping)
        chi = chi_state(n).amplitudes
        err = float(np.max(np.abs(sector_hamiltonian(model) @ chi - 2 * omega * chi)))
        worst["eigenstate"] = max(worst["eigenstate"], err)
    tolerances = {"pair_probabilities": VERIFY_TOL, "unitarity": 1e-12, "norm": 1e-12,
                  "photon_number": 1e-12, "joint_sum": 1e-12, "eigenstate": 1e-12}
    failed = [k for k, v in worst.items() if not v < tolerances[k]]
    return {"seed": seed, "cases": n_cases, "worst": worst, "tolerances": tolerances,
            "worst_case": worst_case, "failed": failed, "passed": not failed}


def cmd_verify(cfg):
    sizes = (cfg.n,) if cfg.n_given else VERIFY_SIZES
    start = time.perf_counter()
    report = verify(sizes, seed=cfg.seed, omega=cfg.omega, hopping=cfg.j)
    elapsed = time.perf_counter() - start
    lines = [f"seed={report['seed']} cases={report['cases']} sizes={list(sizes)} elapsed={elapsed:.2f}s"]
    for key, value in report["worst"].items():
        status = "ok" if key not in report["failed"] else "FAIL"
        lines.append(f"{status:4s} {key:18s} max={value:.3e} tol={report['tolerances'][key]:.0e}")
    lines.append(f"worst oracle/propagator case: {report['worst_case']}")
    lines.append("PASS" if report["passed"] else "FAIL")
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


HANDLERS = {
    "propagator": cmd_propagator, "evolve": cmd_evolve, "correlations": cmd_correlations,
    "max-deloc": cmd_max_deloc, "fig1": cmd_fig1, "fig2": cmd_fig2,
    "negativity": cmd_negativity, "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except (FloatingPointError, CrossCheckError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
