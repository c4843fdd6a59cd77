"""Command-line interface.

Subcommands: ``spectrum`` (band data and phase diagnostics), ``evolve``
(time evolution to CSV/SVG), ``decay-scan`` (decay traces, envelope fits, and
parameter scans), ``verify`` (the acceptance battery). All artifacts are
deterministic for a fixed config: CSV numbers are written with 17 significant
digits, plots are dependency-free SVG.

Exit codes: 0 success, 2 config error, 3 verification/envelope failure,
4 numerical budget exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .decay import (constant_dependence_scan, envelope_constant,
                    fit_power_law, log_envelope, mixed_envelope_constant,
                    trace_decay)
from .errors import BudgetExceeded, ConfigError, SSHDispersiveError
from .model import HoppingParams, WaveFunction, edge_state, winding_number
from .oracle import causal_cells, oracle_evolve
from .propagator import EvolutionRequest, evolve_ac
from .quadrature import QuadratureSpec
from .svgplot import heatmap, loglog_plot
from .verify import run_battery


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _threads() -> int:
    env = os.environ.get("SSH_DISPERSIVE_THREADS", "")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"SSH_DISPERSIVE_THREADS must be an integer, "
                              f"got {env!r}")
        if n < 1:
            raise ConfigError("SSH_DISPERSIVE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# configuration

_DEFAULTS = {
    "initial": {"kind": "delta", "cell": 0, "site": "A"},
    "times": {"start": 0.0, "stop": 10.0, "points": 11, "spacing": "linear"},
    "cells": {"min": 0, "max": 30},
    "method": "oracle",
    "quadrature": {},
    "seed": 0,
}


@dataclasses.dataclass
class RunConfig:
    params: dict
    initial: dict
    times: dict
    cells: dict
    method: str
    quadrature: dict
    seed: int
    extras: dict = dataclasses.field(default_factory=dict)

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        if "params" not in raw:
            raise ConfigError("missing required key: params")
        known = {"params", "initial", "times", "cells", "method",
                 "quadrature", "seed"}
        merged = {k: raw.get(k, _DEFAULTS.get(k)) for k in known}
        cfg = RunConfig(extras={k: v for k, v in raw.items() if k not in known},
                        **merged)
        cfg.validate()
        return cfg

    def validate(self):
        p = self.params
        if not isinstance(p, dict) or "gamma1" not in p or "gamma2" not in p:
            raise ConfigError("params must contain gamma1 and gamma2")
        g1 = p["gamma1"]
        if not isinstance(g1, (int, float)) or g1 <= 0:
            raise ConfigError("gamma1 must be a positive real number")
        g2 = p["gamma2"]
        if not (isinstance(g2, (list, tuple)) and len(g2) == 2):
            raise ConfigError("gamma2 must be a [re, im] pair")
        if g2[0] == 0 and g2[1] == 0:
            raise ConfigError("gamma2 must be nonzero")
        ini = self.initial
        if ini.get("kind") not in ("delta", "explicit"):
            raise ConfigError("initial.kind must be 'delta' or 'explicit'")
        if ini["kind"] == "delta":
            if not isinstance(ini.get("cell"), int) or ini["cell"] < 0:
                raise ConfigError("initial.cell must be a nonnegative integer")
            if ini.get("site", "A") not in ("A", "B"):
                raise ConfigError("initial.site must be 'A' or 'B'")
        else:
            cells = ini.get("cells")
            if not cells or any(len(row) != 4 for row in cells):
                raise ConfigError("initial.cells must be rows of "
                                  "[reA, imA, reB, imB]")
        t = self.times
        for key in ("start", "stop", "points"):
            if key not in t:
                raise ConfigError(f"times.{key} is required")
        if t["points"] < 1 or t["stop"] < t["start"] or t["start"] < 0:
            raise ConfigError("times must satisfy 0 <= start <= stop, "
                              "points >= 1")
        if t.get("spacing", "linear") not in ("linear", "geometric"):
            raise ConfigError("times.spacing must be 'linear' or 'geometric'")
        if t.get("spacing") == "geometric" and t["start"] <= 0:
            raise ConfigError("geometric spacing requires start > 0")
        c = self.cells
        if c["min"] < 0 or c["max"] < c["min"]:
            raise ConfigError("cells must satisfy 0 <= min <= max")
        if self.method not in ("oracle", "analytic", "both"):
            raise ConfigError("method must be 'oracle', 'analytic' or 'both'")
        allowed = {f.name for f in dataclasses.fields(QuadratureSpec)}
        bad = set(self.quadrature) - allowed
        if bad:
            raise ConfigError(f"unknown quadrature keys: {sorted(bad)}")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")

    # -- derived objects ---------------------------------------------------

    def hopping(self) -> HoppingParams:
        g2 = self.params["gamma2"]
        return HoppingParams(float(self.params["gamma1"]),
                             complex(g2[0], g2[1]))

    def initial_state(self) -> WaveFunction:
        ini = self.initial
        if ini["kind"] == "delta":
            return WaveFunction.delta(ini["cell"], ini.get("site", "A"))
        rows = np.asarray(ini["cells"], dtype=float)
        return WaveFunction(rows[:, 0::2] + 1j * rows[:, 1::2],
                            offset=ini.get("offset", 0))

    def time_grid(self) -> np.ndarray:
        t = self.times
        if t["points"] == 1:
            return np.array([float(t["start"])])
        if t.get("spacing", "linear") == "geometric":
            return np.geomspace(t["start"], t["stop"], t["points"])
        return np.linspace(t["start"], t["stop"], t["points"])

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec(**self.quadrature)

    def resolved(self) -> dict:
        out = {k: getattr(self, k) for k in
               ("params", "initial", "times", "cells", "method",
                "quadrature", "seed")}
        out.update(self.extras)
        return out


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    return RunConfig.from_dict(raw)


def _write(out_dir, name, text):
    if out_dir is None:
        return None
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _emit_resolved(cfg: RunConfig, out_dir):
    _write(out_dir, "resolved-config.json",
           json.dumps(cfg.resolved(), indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# spectrum

def cmd_spectrum(cfg: RunConfig, out_dir=None) -> int:
    p = cfg.hopping()
    report = {
        "bands": [[-p.gamma_plus, -p.gamma_minus],
                  [p.gamma_minus, p.gamma_plus]],
        "gap_radius": p.gamma_minus,
        "phase": "nontrivial" if p.is_topological else
                 ("gapless" if p.gamma_minus == 0 else "trivial"),
        "winding_number": winding_number(p),
    }
    if p.is_topological:
        report["edge_decay_ratio"] = abs(p.gamma1 / p.gamma2)
        phi = edge_state(p, 60).normalized()
        report["edge_state_head"] = [[c.real, c.imag] for c in phi.cells[:4, 0]]
    print(f"bands: [{-p.gamma_plus:.6g}, {-p.gamma_minus:.6g}] U "
          f"[{p.gamma_minus:.6g}, {p.gamma_plus:.6g}]")
    print(f"gap radius: {p.gamma_minus:.6g}")
    print(f"phase: {report['phase']}   winding number: "
          f"{report['winding_number']}")
    if p.is_topological:
        print(f"edge-state decay ratio |g1/g2|: "
              f"{report['edge_decay_ratio']:.6g}")
    if p.gamma_minus == 0:
        print("warning: analytic propagator unavailable (gap is zero)")
    _write(out_dir, "spectrum.json", json.dumps(report, indent=2) + "\n")
    _emit_resolved(cfg, out_dir)
    return 0


# ---------------------------------------------------------------------------
# evolve

def _run_evolution(cfg: RunConfig, method: str, times, window):
    p = cfg.hopping()
    f = cfg.initial_state()
    if method == "oracle":
        n_lat = max(causal_cells(f.support[1], float(np.max(times)), p),
                    window[1] + 1)
        # keep the full lattice: the edge-overlap diagnostic needs the tail
        return oracle_evolve(f, times, p, n_lat)
    req = EvolutionRequest(p, f, tuple(float(t) for t in times), window,
                           "analytic", cfg.quadrature_spec())
    return evolve_ac(req)


def cmd_evolve(cfg: RunConfig, out_dir=None) -> int:
    p = cfg.hopping()
    times = cfg.time_grid()
    window = (cfg.cells["min"], cfg.cells["max"])
    methods = ("oracle", "analytic") if cfg.method == "both" else (cfg.method,)
    states = {m: _run_evolution(cfg, m, times, window) for m in methods}
    primary = states[methods[0]]

    overlap = None
    if p.is_topological and "oracle" in states:
        phi = edge_state(p, max(window[1] + 1, 200)).normalized()
        overlap = [abs(phi.inner(psi)) for psi in states["oracle"]]

    header = ["t", "n", "reA", "imA", "reB", "imB", "absCell"]
    if cfg.method == "both":
        header.append("absDiff")
    if overlap is not None:
        header.append("absEdgeOverlap")
    lines = [",".join(header)]
    max_diff = 0.0
    for i, t in enumerate(times):
        cells = primary[i].window(*window)
        diff = None
        if cfg.method == "both":
            diff = np.abs(cells - states["analytic"][i].window(*window))
            max_diff = max(max_diff, float(diff.max(initial=0.0)))
        for j, n in enumerate(range(window[0], window[1] + 1)):
            a, b = cells[j]
            row = [_fmt(t), str(n), _fmt(a.real), _fmt(a.imag),
                   _fmt(b.real), _fmt(b.imag),
                   _fmt(float(np.hypot(abs(a), abs(b))))]
            if diff is not None:
                row.append(_fmt(float(np.max(diff[j]))))
            if overlap is not None:
                row.append(_fmt(overlap[i]))
            lines.append(",".join(row))
    _write(out_dir, "evolution.csv", "\n".join(lines) + "\n")

    if cfg.extras.get("heatmap", True) and len(times) > 1 and out_dir:
        mags = np.array([np.linalg.norm(s.window(*window), axis=1)
                         for s in primary])
        _write(out_dir, "evolution.svg",
               heatmap(mags, times, np.arange(window[0], window[1] + 1),
                       xlabel="t", ylabel="cell",
                       title=f"|psi_n(t)|, method={methods[0]}"))
    _emit_resolved(cfg, out_dir)
    if cfg.method == "both":
        print(f"maxDiff {max_diff:.3e}")
    print(f"evolution: {len(times)} times x cells "
          f"[{window[0]}, {window[1]}], method={cfg.method}")
    return 0


# ---------------------------------------------------------------------------
# decay-scan

def _scan_grid(cfg: RunConfig, out_dir) -> int:
    grid = cfg.extras["grid"]
    params = [HoppingParams(float(g.get("gamma1", cfg.params["gamma1"])),
                            complex(g["gamma2"][0], g["gamma2"][1]))
              for g in grid]
    f = cfg.initial_state()
    times = cfg.time_grid()

    def one(p):
        return constant_dependence_scan([p], f, times,
                                        method=cfg.method if cfg.method != "both"
                                        else "oracle")[0]

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        rows = list(ex.map(one, params))
    lines = ["gamma1,reGamma2,imGamma2,constant,prefactor,ratio"]
    for p, r in zip(params, rows):
        lines.append(",".join([
            _fmt(p.gamma1), _fmt(p.gamma2.real), _fmt(p.gamma2.imag),
            _fmt(r["constant"]), _fmt(r["prefactor"]), _fmt(r["ratio"])]))
    _write(out_dir, "constants.csv", "\n".join(lines) + "\n")
    _emit_resolved(cfg, out_dir)
    for p, r in zip(params, rows):
        print(f"gamma2={p.gamma2:.4g}: constant {r['constant']:.4g}, "
              f"ratio {r['ratio']:.4g}")
    return 0


def _scan_replay(cfg: RunConfig, out_dir) -> int:
    tr = cfg.extras["trace"]
    times = np.asarray(tr["times"], dtype=float)
    values = np.asarray(tr["supNorm"], dtype=float)
    fit = fit_power_law(times, values, "power")
    print(f"replay fit: exponent {fit.exponent:.6g}, "
          f"constant {fit.constant:.6g}, residual {fit.residual:.3e}")
    report = {"exponent": fit.exponent, "constant": fit.constant,
              "residual": fit.residual}
    _write(out_dir, "fit.json", json.dumps(report, indent=2) + "\n")
    _emit_resolved(cfg, out_dir)
    return 0


def cmd_decay_scan(cfg: RunConfig, out_dir=None) -> int:
    if "grid" in cfg.extras:
        return _scan_grid(cfg, out_dir)
    if "trace" in cfg.extras:
        return _scan_replay(cfg, out_dir)

    p = cfg.hopping()
    times = cfg.time_grid()
    window = (cfg.cells["min"], cfg.cells["max"])
    method = "oracle" if cfg.method == "both" else cfg.method
    trace = trace_decay(EvolutionRequest(
        p, cfg.initial_state(), tuple(times), window, method,
        cfg.quadrature_spec()))
    fit = fit_power_law(trace.times, trace.sup_norm, "power")
    c1 = envelope_constant(trace.times, trace.sup_norm,
                           lambda t: np.asarray(t, float) ** (-1 / 3))
    c2 = mixed_envelope_constant(trace, with_log=True, sigma=1)
    c3 = mixed_envelope_constant(trace, with_log=False, sigma=2)

    lines = ["t,supNorm,weightedNorm,envSup,envMixedLog"]
    env_sup = c1 * trace.times ** (-1.0 / 3.0)
    env_log = c2 * trace.data_norms["l1_1"] * log_envelope(trace.times)
    for i in range(len(trace.times)):
        lines.append(",".join(_fmt(v) for v in (
            trace.times[i], trace.sup_norm[i], trace.weighted_norm[i],
            env_sup[i], env_log[i])))
    _write(out_dir, "decay.csv", "\n".join(lines) + "\n")
    if out_dir:
        _write(out_dir, "decay.svg", loglog_plot(
            [("sup norm", trace.times, trace.sup_norm, False),
             ("C1 t^{-1/3}", trace.times, env_sup, True),
             ("C2 |f| log env", trace.times, env_log, True)],
            xlabel="t", ylabel="norm", title="dispersive decay"))
    _emit_resolved(cfg, out_dir)

    slope_ok = fit.exponent <= -1.0 / 3.0 + 0.05
    cover_ok = bool(np.all(trace.sup_norm <= env_sup * (1 + 1e-12)))
    print(f"fitted slope {fit.exponent:.4f} (pass bound -0.2833: "
          f"{'ok' if slope_ok else 'FAIL'})")
    print(f"envelope constants: C1={c1:.4f} C2={c2:.4f} C3={c3:.4f}")
    report = {"slope": fit.exponent, "C1": c1, "C2": c2, "C3": c3,
              "slope_ok": slope_ok, "envelope_ok": cover_ok}
    _write(out_dir, "decay.json", json.dumps(report, indent=2) + "\n")
    return 0 if (slope_ok and cover_ok) else 3


# ---------------------------------------------------------------------------
# verify

def cmd_verify(cfg: RunConfig, out_dir=None, tier: str = "quick") -> int:
    p = cfg.hopping()
    spec = cfg.quadrature_spec() if cfg.quadrature else None
    results = run_battery(tier, gapless=(p.gamma_minus == 0), spec=spec)
    for r in results:
        tag = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        print(f"{tag} {r.name} [{r.seconds:.1f}s] {r.detail}")
    ok = all(r.passed for r in results)
    report = {"tier": tier, "passed": ok,
              "checks": [r.as_dict() for r in results]}
    _write(out_dir, "verify.json", json.dumps(report, indent=2) + "\n")
    _emit_resolved(cfg, out_dir)
    return 0 if ok else 3


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="ssh-dispersive",
        description="Dispersive dynamics of the half-line SSH lattice.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "evolve", "decay-scan", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        if name == "verify":
            sp.add_argument("--tier", choices=("quick", "full"),
                            default="quick")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.out)
        if args.command == "evolve":
            return cmd_evolve(cfg, args.out)
        if args.command == "decay-scan":
            return cmd_decay_scan(cfg, args.out)
        return cmd_verify(cfg, args.out, args.tier)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"numerical budget exceeded: {exc}", file=sys.stderr)
        return 4
    except SSHDispersiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
