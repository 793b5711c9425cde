"""Command-line front end: capacity tables, certification reports and curve data.

Exit codes: 0 pass, 1 certification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MOE_TOL = 1e-8
FOCK_FLOOR = 1e-12

# certification thresholds; `--tolerance-scale` multiplies them (test hook)
CERTIFY_TOLERANCES = {
    "ppt": 1e-12,
    "lift": 1e-9,
    "fidelity": 1e-9,
    "conjugacy": 1e-9,
    "commutation": 1e-9,
    "separable": 1e-10,
    "witness": 1e-10,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    seeds: tuple[int, ...]
    out: str | None
    format: str
    jobs: int
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("at least one explicit seed is required")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# formatting


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), ".17g"))
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render(cfg: RunConfig, rows: list[dict], verdict: str) -> str:
    if cfg.format == "json":
        doc = {
            "config": _jsonable({**asdict(cfg), "seeds": list(cfg.seeds)}),
            "rows": _jsonable(rows),
            "verdict": verdict,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: fmt(v) for k, v in r.items()})
    return buf.getvalue()


def render_dat(rows: list[dict]) -> str:
    cols = list(rows[0]) if rows else []
    lines = ["# " + " ".join(cols)]
    lines += [" ".join(fmt(r[c]) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def fan_out(fn, items, jobs: int) -> list:
    """Ordered map, in a process pool when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# work items (module level so that worker processes can import them)


def _capacity_row(item) -> dict:
    from .capacity import cloning_capacity_closed_form, covariant_capacity
    from .channels import cloning_channel

    ell, seeds, restarts = item
    closed = cloning_capacity_closed_form(ell)
    via = max(covariant_capacity(cloning_channel(ell), restarts, s).c_hol for s in seeds)
    return {"ell": ell, "c_closed_form": closed, "c_via_moe": via, "abs_diff": abs(closed - via)}


def _unruh_row(item) -> dict:
    from .unruh import unruh_capacity

    z, eps = item
    c = unruh_capacity(z, eps)
    return {"z": z, "capacity_bits": c.value, "error_bar": c.error_bar, "K_used": c.K}


def _certify_row(item) -> dict:
    from . import degradability as dg

    ell, seed, scale = item
    tol = {k: v * scale for k, v in CERTIFY_TOLERANCES.items()}
    ppt = dg.ppt_check(ell)
    try:
        lift = dg.generator_lift(ell)
        lift_gap, mu_gap = lift.agreement, lift.mu_deviation
    except dg.LiftInconsistency:
        lift_gap = mu_gap = math.inf
    sep = dg.separable_decomposition(ell)
    ans = dg.build_degrading_map(ell, "ansatz")
    opt = dg.build_degrading_map(ell, "optimize")
    conj = dg.verify_conjugate_degradability(ell, ans.ansatz, seed=seed)
    comm = dg.check_choi_commutation(ell, ans.ansatz, seed=seed)
    wit = dg.degradability_witness(ell, ans.ansatz)
    row = {
        "ell": ell,
        "decomposition": f"[{ell}]x[{ell - 1}]",
        "ppt_verdict": ppt.verdict,
        "min_pt_eigenvalue": ppt.min_pt_eigenvalue,
        "lift_gap": lift_gap,
        "mu_gap": mu_gap,
        "separable_error": sep.reconstruction_error,
        "fidelity_ansatz": ans.fidelity,
        "fidelity_optimize": opt.fidelity,
        "conjugacy_deviation": conj.deviation,
        "commutation_violation": comm,
        "degrading_choi_min_eigenvalue": wit.min_choi_eigenvalue,
        "degrading_deviation": wit.deviation,
    }
    row["pass"] = bool(
        ppt.min_pt_eigenvalue >= -tol["ppt"]
        and lift_gap <= tol["lift"]
        and mu_gap <= tol["lift"]
        and sep.reconstruction_error <= tol["separable"]
        and ans.fidelity >= 1 - tol["fidelity"]
        and opt.fidelity >= 1 - tol["fidelity"]
        and conj.deviation <= tol["conjugacy"]
        and comm <= tol["commutation"]
        and wit.min_choi_eigenvalue >= -tol["witness"]
        and wit.deviation <= tol["conjugacy"]
    )
    return row


# --------------------------------------------------------------------------
# commands


def cmd_cloning_capacities(cfg: RunConfig) -> int:
    lo, hi = cfg.params["lmin"], cfg.params["lmax"]
    if not 2 <= lo <= hi <= 64:
        raise UsageError(f"need 2 <= lmin <= lmax <= 64, got {lo}, {hi}")
    restarts = cfg.params["restarts"]
    rows = fan_out(_capacity_row, [(ell, cfg.seeds, restarts) for ell in range(lo, hi + 1)], cfg.jobs)
    ok = all(r["abs_diff"] <= MOE_TOL for r in rows)
    emit(cfg, render(cfg, rows, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_FAIL


def z_grid(zmin: float, zmax: float, step: float) -> list[float]:
    from .unruh import Z_MAX

    if step <= 0 or zmin < 0 or zmax < zmin:
        raise UsageError(f"bad z grid ({zmin}, {zmax}, {step})")
    n = int(math.floor((zmax - zmin) / step + 1e-9)) + 1
    grid = [round(zmin + i * step, 12) for i in range(n)]
    if grid[-1] > Z_MAX:
        print(f"note: z values above {Z_MAX} are capped", file=sys.stderr)
    return [min(z, Z_MAX) for z in grid]


def cmd_unruh_curve(cfg: RunConfig) -> int:
    p = cfg.params
    if not p["tail"] > 0:
        raise UsageError("--tail must be positive")
    grid = z_grid(p["zmin"], p["zmax"], p["step"])
    rows = fan_out(_unruh_row, [(z, p["tail"]) for z in grid], cfg.jobs)
    caps = [r["capacity_bits"] for r in rows]
    ok = all(a > b for a, b in zip(caps, caps[1:]))
    emit(cfg, render(cfg, rows, "pass" if ok else "fail"))
    if cfg.extra.get("dat"):
        with open(cfg.extra["dat"], "w", encoding="utf-8") as f:
            f.write(render_dat(rows))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_certify(cfg: RunConfig) -> int:
    lmax = cfg.params["lmax"]
    if not 3 <= lmax <= 24:
        raise UsageError(f"need 3 <= lmax <= 24, got {lmax}")
    scale = cfg.extra.get("tolerance_scale", 1.0)
    items = [(ell, cfg.seeds[0], scale) for ell in range(3, lmax + 1)]
    rows = fan_out(_certify_row, items, cfg.jobs)
    failing = [r["ell"] for r in rows if not r["pass"]]
    emit(cfg, render(cfg, rows, "pass" if not failing else "fail"))
    if failing:
        print(f"certification failed for l = {failing}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_fock_check(cfg: RunConfig) -> int:
    from .channels import PureQubitInput, apply_cloning
    from .linalg import trace_distance
    from .unruh import fock_oracle, weight

    p = cfg.params
    if not 4 <= p["cutoff"] <= 16:
        raise UsageError(f"need 4 <= cutoff <= 16, got {p['cutoff']}")
    if not 0 <= p["z"] < 1:
        raise UsageError(f"z must lie in [0, 1), got {p['z']}")
    phi = PureQubitInput.from_bloch(p["theta"], p["phi"])
    rep = fock_oracle(phi.alpha, phi.beta, p["z"], p["cutoff"])
    bound = max(rep.norm_deficit, FOCK_FLOOR)
    rows = []
    for b in rep.blocks:
        pl = weight(b.ell, p["z"])
        rows.append(
            {
                "ell": b.ell,
                "weight": b.weight,
                "p_ell": pl,
                "weight_deviation": abs(b.weight - pl),
                "state_deviation": trace_distance(b.state, apply_cloning(b.ell, phi)),
                "truncation_bound": rep.norm_deficit,
            }
        )
    ok = all(r["weight_deviation"] <= bound and r["state_deviation"] <= bound for r in rows)
    emit(cfg, render(cfg, rows, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "cloning-capacities": cmd_cloning_capacities,
    "unruh-curve": cmd_unruh_curve,
    "certify": cmd_certify,
    "fock-check": cmd_fock_check,
}


# --------------------------------------------------------------------------
# argument parsing


def _seeds(text: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be integers, got {text!r}")
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--out", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=_seeds, metavar="N[,N...]", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, metavar="K", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="clonecap",
        description="Capacities and degradability certificates for qubit cloning channels.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cloning-capacities", parents=[common], help="closed form vs minimum output entropy")
    p.add_argument("--lmin", type=int, default=2)
    p.add_argument("--lmax", type=int, default=64)
    p.add_argument("--restarts", type=int, default=4)

    p = sub.add_parser("unruh-curve", parents=[common], help="Unruh channel capacity on a z grid")
    p.add_argument("--zmin", type=float, default=0.0)
    p.add_argument("--zmax", type=float, default=0.9)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--tail", type=float, default=1e-9)
    p.add_argument("--dat", metavar="PATH", help="also write a gnuplot-style .dat file")

    p = sub.add_parser("certify", parents=[common], help="entanglement-breaking and degrading-map checks")
    p.add_argument("--lmax", type=int, default=7)
    p.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)

    p = sub.add_parser("fock-check", parents=[common], help="Fock-space oracle vs block formulas")
    p.add_argument("--z", type=float, default=0.4)
    p.add_argument("--cutoff", type=int, default=12)
    p.add_argument("--theta", type=float, default=0.0, help="input polar angle")
    p.add_argument("--phi", type=float, default=0.0, help="input azimuth")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    command = d.pop("command")
    fmt_ = d.pop("format", "csv")
    out = d.pop("out", None)
    seeds = d.pop("seed", (0,))
    jobs = d.pop("jobs", os.cpu_count() or 1)
    extra = {k: d.pop(k) for k in ("dat", "tolerance_scale") if k in d}
    return RunConfig(command, d, tuple(seeds), out, fmt_, jobs, extra)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ValueError) as e:
        print(f"clonecap: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
