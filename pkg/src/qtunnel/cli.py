"""``qtunnel`` command line: classify, sweep, verify, plot, spectrum, evolve.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .graph import GraphError, read_graph
from .io import (ReportFormatError, dumps, evolve_csv, parse_potential_text, parse_wells,
                 spectrum_csv, sweep_csv, write_text)
from .plot import KINDS, plot_csv
from .spectral import PotentialSpec, basis_state, evolve, spectrum
from .triple import classify_triple_well
from .tunneling import (DEFAULT_SCHEDULE, NONE, PERFECT, SweepConfig, WindowError,
                        classify_double_well, tc_curve)
from .verify import SUITES, run_suite, suite_invariants
from .wellseries import MarginError

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
AGREEMENT_TOL = 0.05


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    graph: str | None = None
    wells: str | None = None
    potential: str | None = None
    start: int | None = None
    target: int | None = None
    q_schedule: tuple[float, ...] = DEFAULT_SCHEDULE
    window_exp: float | None = None
    window_const: float = 32.0
    steps: int = 2000
    refine: int = 48
    simulate: bool = False
    out: str | None = None
    k_cut: int | None = None
    seed: int = 2024
    extra: dict = field(default_factory=dict)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(q_schedule=self.q_schedule, window_exp=self.window_exp,
                           window_const=self.window_const, coarse_steps=self.steps,
                           refine_iters=self.refine)


def _schedule(text: str) -> tuple[float, ...]:
    try:
        qs = tuple(float(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad Q schedule {text!r}") from exc
    if not qs:
        raise argparse.ArgumentTypeError("empty Q schedule")
    if any(b <= a for a, b in zip(qs, qs[1:])) or qs[0] < 0:
        raise argparse.ArgumentTypeError("Q schedule must be nonnegative and strictly ascending")
    return qs


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtunnel", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qtunnel {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, wells=True, query=True, sweep=True):
        p.add_argument("--graph", required=True, help="edge list: 'n m' header then 'u v' lines")
        if wells:
            p.add_argument("--wells", help="wells as '0,2' or '0:1,2:1'")
            p.add_argument("--potential", help="potential file ('vertex weight' lines) or inline 'v:w,...'")
        if query:
            p.add_argument("--start", type=int)
            p.add_argument("--target", type=int)
        p.add_argument("--q-schedule", type=_schedule, default=DEFAULT_SCHEDULE,
                       help="comma separated depths, strictly ascending")
        if sweep:
            p.add_argument("--window-exp", type=float, default=None,
                           help="window T = C * Q^exp (default d(start, target) - 1)")
            p.add_argument("--window-const", type=float, default=32.0)
            p.add_argument("--steps", type=int, default=2000, help="coarse grid points per window")
            p.add_argument("--refine", type=int, default=48, help="golden-section iterations per peak")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("classify", help="predict the tunneling regime for 2 or 3 wells")
    common(p)
    p.add_argument("--k-cut", type=int, default=None, help="cospectrality search depth")
    p.add_argument("--simulate", action="store_true", help="also run the windowed sweep")
    p.add_argument("--seed", type=int, default=2024)

    p = sub.add_parser("sweep", help="windowed sup transfer per depth (CSV)")
    common(p)

    p = sub.add_parser("spectrum", help="eigenpairs at one depth (CSV)")
    common(p, query=False, sweep=False)

    p = sub.add_parser("evolve", help="vertex probabilities over a time grid (CSV)")
    common(p, query=True, sweep=True)

    p = sub.add_parser("verify", help="run built-in verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=["all", *SUITES])
    p.add_argument("--seed", type=int, default=2024, help="seed for randomized invariant samples")
    p.add_argument("--out", default=None, help="JSON summary path")

    p = sub.add_parser("plot", help="SVG plot of a CSV produced by this tool")
    p.add_argument("csv")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--out", required=True, help="SVG path")
    return ap


def _config(ns: argparse.Namespace) -> ExperimentConfig:
    keys = {f for f in ExperimentConfig.__dataclass_fields__ if f not in ("command", "extra")}
    vals = {k: getattr(ns, k) for k in keys if hasattr(ns, k) and getattr(ns, k) is not None}
    return ExperimentConfig(command=ns.command, **vals)


def _load(cfg: ExperimentConfig):
    try:
        g = read_graph(cfg.graph)
    except OSError as exc:
        raise OSError(f"cannot read graph {cfg.graph}: {exc.strerror or exc}") from exc
    return g


def _weights(cfg: ExperimentConfig, n: int) -> dict[int, float]:
    if cfg.wells and cfg.potential:
        raise UsageError("give either --wells or --potential, not both")
    if cfg.potential:
        path = Path(cfg.potential)
        weights = parse_potential_text(path.read_text()) if path.exists() else parse_wells(cfg.potential)
    elif cfg.wells:
        weights = parse_wells(cfg.wells)
    else:
        raise UsageError("--wells or --potential is required")
    for v in weights:
        if not 0 <= v < n:
            raise UsageError(f"vertex {v} does not exist (graph has {n} vertices)")
    return weights


def _template(cfg: ExperimentConfig, n: int) -> PotentialSpec:
    try:
        return PotentialSpec.from_mapping(n, _weights(cfg, n))
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ReportFormatError):
            raise
        raise UsageError(f"invalid potential: {exc}") from exc


def _query(cfg: ExperimentConfig, wells: Sequence[int], n: int) -> tuple[int, int]:
    start = cfg.start if cfg.start is not None else wells[0]
    target = cfg.target if cfg.target is not None else next(w for w in wells if w != start)
    for v in (start, target):
        if not 0 <= v < n:
            raise UsageError(f"vertex {v} does not exist (graph has {n} vertices)")
    if start == target:
        raise UsageError("start and target must differ")
    return start, target


def _single_depth(cfg: ExperimentConfig) -> float:
    if len(cfg.q_schedule) != 1:
        raise UsageError("this command takes a single depth: --q-schedule Q")
    return cfg.q_schedule[0]


def _estimates_json(curve) -> list[dict]:
    return [{"Q": e.Q, "window_T": e.window_T, "sup_prob": e.sup_prob, "argmax_t": e.argmax_t,
             "gap": e.gap, "pi_over_gap": e.pi_over_gap, "grid_points": e.grid_points,
             "dropped_weight": e.dropped_weight} for e in curve.estimates]


def _verdict(pred: float | None, curve) -> dict:
    if pred is None:
        return {"verdict": "inconclusive", "tolerance": AGREEMENT_TOL, "reason": "no numeric prediction"}
    diff = abs(curve.tail - pred)
    if diff <= AGREEMENT_TOL:
        v = "consistent"
    elif curve.stabilized:
        v = "inconsistent"
    else:
        v = "inconclusive"
    return {"verdict": v, "tolerance": AGREEMENT_TOL, "predicted": pred, "observed": curve.tail,
            "difference": diff, "stabilized": curve.stabilized}


def cmd_classify(cfg: ExperimentConfig) -> tuple[dict, int]:
    g = _load(cfg)
    template = _template(cfg, g.n)
    if not template.is_simple:
        raise UsageError("classification needs a simple potential (weights 0 or 1)")
    wells = template.wells
    if len(wells) not in (2, 3):
        raise UsageError(f"classification supports 2 or 3 wells, got {len(wells)}")
    start, target = _query(cfg, wells, g.n)
    if start not in wells or target not in wells:
        raise UsageError("start and target must be wells")
    work = {}
    if len(wells) == 2:
        rep = classify_double_well(g, start, target, k_cut=cfg.k_cut, schedule=cfg.q_schedule)
        prediction = rep.to_json()
        pred = float(rep.tc_pred) if rep.tc_pred is not None else None
        default_exp = max(rep.d - 1, 0)
    else:
        rep = classify_triple_well(g, wells, start, target, k_cut=cfg.k_cut)
        prediction = rep.to_json()
        pred = rep.tc_table.get((start, target))
        default_exp = max(rep.geometry.a - 1, 0)
        if rep.time_scale == "at-least-Q^a":
            default_exp = rep.geometry.a
    report = {
        "tool": {"name": "qtunnel", "version": __version__},
        "config": _echo(cfg),
        "prediction": prediction,
        "simulation": None,
        "agreement": {"verdict": "inconclusive", "tolerance": AGREEMENT_TOL, "reason": "no simulation"},
    }
    code = EXIT_OK
    if cfg.simulate:
        sc = cfg.sweep_config()
        if sc.window_exp is None:
            sc = SweepConfig(**{**asdict(sc), "window_exp": float(default_exp)})
        curve = tc_curve(g, template, start, target, sc)
        report["simulation"] = {"window_exp": curve.window_exp, "estimates": _estimates_json(curve),
                                "stabilized": curve.stabilized, "notes": list(curve.notes)}
        report["agreement"] = _verdict(pred, curve)
        work["grid_points"] = sum(e.grid_points for e in curve.estimates)
        if report["agreement"]["verdict"] == "inconsistent":
            code = EXIT_VERIFY
    report["work"] = work
    return report, code


def _echo(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d.pop("extra")
    d["q_schedule"] = list(cfg.q_schedule)
    return d


def cmd_sweep(cfg: ExperimentConfig) -> str:
    g = _load(cfg)
    template = _template(cfg, g.n)
    start, target = _query(cfg, template.wells, g.n)
    if start not in template.wells or target not in template.wells:
        raise UsageError("start and target must be wells")
    return sweep_csv(tc_curve(g, template, start, target, cfg.sweep_config()).estimates)


def cmd_spectrum(cfg: ExperimentConfig) -> str:
    g = _load(cfg)
    return spectrum_csv(spectrum(g, _template(cfg, g.n).with_depth(_single_depth(cfg))))


def cmd_evolve(cfg: ExperimentConfig) -> str:
    g = _load(cfg)
    q = _single_depth(cfg)
    d = spectrum(g, _template(cfg, g.n).with_depth(q))
    start = cfg.start if cfg.start is not None else 0
    if not 0 <= start < g.n:
        raise UsageError(f"vertex {start} does not exist (graph has {g.n} vertices)")
    T = cfg.window_const * q ** (cfg.window_exp or 0.0)
    if cfg.steps < 2:
        raise UsageError("--steps must be at least 2")
    times = np.linspace(0.0, T, cfg.steps)
    coeffs = d.vectors.T @ basis_state(g.n, start)
    rel = d.values - d.values[0]
    amps = (np.exp(1j * np.outer(times, rel)) * coeffs) @ d.vectors.T
    return evolve_csv(times, np.abs(amps) ** 2)


def cmd_verify(suite: str, seed: int, out: str | None) -> int:
    if suite == "invariants":
        checks = suite_invariants(seed=seed)
    elif suite == "all":
        checks = [c for name in SUITES for c in
                  (suite_invariants(seed=seed) if name == "invariants" else run_suite(name))]
    else:
        checks = run_suite(suite)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if out:
        Path(out).write_text(dumps({"suite": suite, "seed": seed, "checks": [c.to_json() for c in checks],
                                    "passed": failed == 0}))
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if ns.command == "verify":
            return cmd_verify(ns.suite, ns.seed, ns.out)
        if ns.command == "plot":
            plot_csv(ns.csv, ns.kind, ns.out)
            return EXIT_OK
        cfg = _config(ns)
        if ns.command == "classify":
            report, code = cmd_classify(cfg)
            write_text(cfg.out, dumps(report))
            return code
        text = {"sweep": cmd_sweep, "spectrum": cmd_spectrum, "evolve": cmd_evolve}[ns.command](cfg)
        write_text(cfg.out, text)
        return EXIT_OK
    except (ReportFormatError, GraphError) as exc:
        print(f"qtunnel: input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"qtunnel: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, WindowError, MarginError, ValueError, IndexError, KeyError) as exc:
        print(f"qtunnel: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
