"""Configuration-driven command line runner.

Subcommands:
    berry   compute the Berry phase by all four methods and cross-check them
    det     determinant phases at a single adiabatic coupling (the largest m)
    verify  sweep m and compare determinant phases with the holonomy prediction
    sweep   scale the off-diagonal coupling and track the determinant phase
    demo    bundled spin-1/2 showcase (berry cross-check + verify sweep)

Configuration is a JSON file; ``DEMO_CONFIG`` documents every key.  Complex
matrices are written as nested ``[re, im]`` pairs.  Exit status is 0 when all
checks requested by the subcommand pass, 1 when a check fails, and 2 on
configuration or numerical errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .determinant import (
    DetPhaseReport,
    build_hat_blocks,
    det_phase_hat,
    det_pm_bfk,
    deformation_sweep,
    gaps_nonincreasing,
    monodromy,
    schrodinger_operator,
    theorem_verify,
)
from .errors import BadSpec, BerryDetError, ConfigError
from .hamiltonians import LevelCurve, PeriodicHamiltonian, build_family
from .linalg import circular_distance, wrap_angle
from .transport import (
    berry_phase_exterior,
    berry_phase_holonomy,
    berry_phase_trace,
    build_periodic_gauge,
    kato_evolve,
    wilson_loop_oracle,
)

GAMMA_METHODS = ("holonomy", "trace", "wilson", "exterior")

DEMO_CONFIG = {
    "family": {"type": "spin_half", "theta": math.pi / 3, "b0": 1.0},
    "level": 0.0,
    "gauge_steps": 2048,
    "det_steps": None,
    "wilson_points": 4096,
    "m_list": [2.0, 4.0, 8.0, 16.0],
    "s_list": [0.0, 0.5, 1.0],
    "sweep_m": 4.0,
    "gamma_method": "holonomy",
    "seed": None,
}

CSV_HEADER = ("m,gamma,imlogdet_plus,imlogdet_minus,"
              "predicted_plus,predicted_minus,gap_plus,gap_minus")

BERRY_AGREE_TOL = 1e-4
FINAL_GAP_TOL = 1e-2
SWEEP_MATCH_TOL = 1e-5


@dataclass
class RunConfig:
    """Validated, normalized run configuration."""

    family: dict
    level: float = 0.0
    gauge_steps: int = 2048
    det_steps: int | None = None
    wilson_points: int = 4096
    m_list: list = field(default_factory=lambda: [2.0, 4.0, 8.0, 16.0])
    s_list: list = field(default_factory=lambda: [0.0, 0.5, 1.0])
    sweep_m: float = 4.0
    gamma_method: str = "holonomy"
    seed: int | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        unknown = set(raw) - set(DEMO_CONFIG)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = dict(DEMO_CONFIG)
        merged.update(raw)
        cfg = cls(**merged)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not isinstance(self.family, dict):
            raise ConfigError("family: must be a mapping with a 'type' tag")
        if not isinstance(self.level, (int, float)) or not math.isfinite(self.level):
            raise ConfigError("level: must be a finite number")
        self.level = float(self.level)
        for name in ("gauge_steps", "wilson_points"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 16:
                raise ConfigError(f"{name}: must be an integer >= 16")
        if self.det_steps is not None and (
                not isinstance(self.det_steps, int) or self.det_steps < 16):
            raise ConfigError("det_steps: must be null or an integer >= 16")
        if (not isinstance(self.m_list, list) or not self.m_list
                or any(not isinstance(m, (int, float)) or m <= 0 for m in self.m_list)):
            raise ConfigError("m_list: must be a non-empty list of positive numbers")
        self.m_list = [float(m) for m in self.m_list]
        if any(b <= a for a, b in zip(self.m_list, self.m_list[1:])):
            raise ConfigError("m_list: must be strictly ascending")
        if (not isinstance(self.s_list, list) or not self.s_list
                or any(not isinstance(s, (int, float)) or not math.isfinite(s)
                       for s in self.s_list)):
            raise ConfigError("s_list: must be a non-empty list of finite numbers")
        self.s_list = [float(s) for s in self.s_list]
        if not isinstance(self.sweep_m, (int, float)) or self.sweep_m <= 0:
            raise ConfigError("sweep_m: must be a positive number")
        self.sweep_m = float(self.sweep_m)
        if self.gamma_method not in GAMMA_METHODS:
            raise ConfigError(f"gamma_method: must be one of {GAMMA_METHODS}")
        if self.seed is not None and (not isinstance(self.seed, int)
                                      or isinstance(self.seed, bool)):
            raise ConfigError("seed: must be null or an integer")
        try:
            self._built_family = build_family(self.family)
        except BadSpec as exc:
            raise ConfigError(f"family: {exc}") from exc

    def build(self) -> PeriodicHamiltonian:
        return self._built_family

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "level": self.level,
            "gauge_steps": self.gauge_steps,
            "det_steps": self.det_steps,
            "wilson_points": self.wilson_points,
            "m_list": list(self.m_list),
            "s_list": list(self.s_list),
            "sweep_m": self.sweep_m,
            "gamma_method": self.gamma_method,
            "seed": self.seed,
        }


def config_hash(cfg: RunConfig) -> str:
    """sha256 of the canonical JSON form; identifies a run reproducibly."""
    canon = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


@dataclass
class ReportRow:
    """One CSV row; carries the config hash for reproducibility."""

    m: float
    gamma: float
    imlogdet_plus: float
    imlogdet_minus: float
    predicted_plus: float
    predicted_minus: float
    gap_plus: float
    gap_minus: float
    config_hash: str


@dataclass
class RunReport:
    command: str
    config_hash: str
    gammas: dict
    rows: list
    sweep: list
    checks: dict
    timings: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _rows_from(reports: list[DetPhaseReport], chash: str) -> list[ReportRow]:
    return [ReportRow(m=r.m, gamma=r.gamma.gamma,
                      imlogdet_plus=r.imlogdet_plus, imlogdet_minus=r.imlogdet_minus,
                      predicted_plus=r.predicted_plus, predicted_minus=r.predicted_minus,
                      gap_plus=r.gap_plus, gap_minus=r.gap_minus,
                      config_hash=chash) for r in reports]


def _all_gammas(cfg: RunConfig, fam: PeriodicHamiltonian, level: LevelCurve) -> dict:
    path = kato_evolve(fam, level, steps=cfg.gauge_steps)
    path = build_periodic_gauge(path, path.split0)
    out = {
        "holonomy": berry_phase_holonomy(path, path.split0).gamma,
        "trace": berry_phase_trace(path, path.split0).gamma,
        "wilson": wilson_loop_oracle(fam, level, points=cfg.wilson_points).gamma,
        "exterior": berry_phase_exterior(fam, level, steps=cfg.gauge_steps).gamma,
    }
    return out


def run_config(cfg: RunConfig, command: str = "verify") -> RunReport:
    """Execute one subcommand pipeline and collect its checks."""
    chash = config_hash(cfg)
    fam = cfg.build()
    level = LevelCurve(cfg.level)
    gammas: dict = {}
    rows: list = []
    sweep: list = []
    checks: dict = {}
    timings: dict = {}
    t0 = time.perf_counter()

    if command in ("berry", "demo"):
        t1 = time.perf_counter()
        gammas = _all_gammas(cfg, fam, level)
        timings["gamma"] = time.perf_counter() - t1
        ref = gammas["holonomy"]
        worst = max(circular_distance(ref, gammas[k]) for k in gammas)
        checks["berry_methods_agree"] = bool(worst <= BERRY_AGREE_TOL)

    if command in ("det", "verify", "demo"):
        mlist = cfg.m_list if command != "det" else cfg.m_list[-1:]
        t1 = time.perf_counter()
        reports = theorem_verify(
            fam, mlist, level,
            gauge_steps=cfg.gauge_steps, det_steps=cfg.det_steps,
            gamma_method=cfg.gamma_method, wilson_points=cfg.wilson_points,
        )
        timings["det"] = time.perf_counter() - t1
        rows = _rows_from(reports, chash)
        gammas.setdefault(cfg.gamma_method, reports[0].gamma.gamma)
        if command == "det":
            checks["det_phases_finite"] = all(
                math.isfinite(r.imlogdet_plus) and math.isfinite(r.imlogdet_minus)
                for r in rows)
        else:
            ok_plus, ok_minus = gaps_nonincreasing(reports)
            checks["plus_gaps_nonincreasing"] = bool(ok_plus)
            checks["minus_gaps_nonincreasing"] = bool(ok_minus)
            checks["final_gap_plus_small"] = bool(reports[-1].gap_plus <= FINAL_GAP_TOL)
            checks["final_gap_minus_small"] = bool(reports[-1].gap_minus <= FINAL_GAP_TOL)

    if command == "sweep":
        t1 = time.perf_counter()
        path = kato_evolve(fam, level, steps=cfg.gauge_steps)
        path = build_periodic_gauge(path, path.split0)
        gammas = {"holonomy": berry_phase_holonomy(path, path.split0).gamma}
        m = cfg.sweep_m
        sweep = deformation_sweep(fam, path, path.split0, m, cfg.s_list,
                                  steps=cfg.det_steps)
        blocks = build_hat_blocks(fam, path, path.split0, m)
        frag = det_phase_hat(blocks, m, steps=cfg.det_steps)
        op = schrodinger_operator(fam, m)
        direct_plus, _ = det_pm_bfk(monodromy(op, steps=cfg.det_steps), op)
        timings["sweep"] = time.perf_counter() - t1
        by_s = {p.s: p for p in sweep}
        if 0.0 in by_s:
            checks["sweep_start_matches_blocks"] = bool(
                circular_distance(by_s[0.0].imlogdet_plus, frag.imlogdet_plus)
                <= SWEEP_MATCH_TOL)
        if 1.0 in by_s:
            checks["sweep_endpoint_matches_direct"] = bool(
                circular_distance(by_s[1.0].imlogdet_plus, float(direct_plus.imag))
                <= SWEEP_MATCH_TOL)

    timings["total"] = time.perf_counter() - t0
    return RunReport(command=command, config_hash=chash, gammas=gammas,
                     rows=rows, sweep=sweep, checks=checks, timings=timings)


def emit_csv(report: RunReport, path) -> None:
    """Write the per-m rows with the fixed header, 12 significant digits."""
    lines = [CSV_HEADER]
    for r in report.rows:
        vals = (r.m, r.gamma, r.imlogdet_plus, r.imlogdet_minus,
                r.predicted_plus, r.predicted_minus, r.gap_plus, r.gap_minus)
        lines.append(",".join("%.12g" % v for v in vals))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _print_report(report: RunReport, fam: PeriodicHamiltonian) -> None:
    print(f"family: {fam.describe()}")
    print(f"config: {report.config_hash[:16]}")
    for name in GAMMA_METHODS:
        if name in report.gammas:
            print(f"gamma[{name}] = {report.gammas[name]:+.9f}")
    if report.rows:
        print("      m        Im log det+   predicted+        gap+"
              "   Im log det-   predicted-        gap-")
        for r in report.rows:
            print(f"{r.m:7g}  {r.imlogdet_plus:+13.9f} {r.predicted_plus:+12.9f} "
                  f"{r.gap_plus:11.3e}  {r.imlogdet_minus:+13.9f} "
                  f"{r.predicted_minus:+12.9f} {r.gap_minus:11.3e}")
    if report.sweep:
        print("      s   Im log det+   Im log det-")
        for p in report.sweep:
            print(f"{p.s:7g}  {p.imlogdet_plus:+12.9f}  {p.imlogdet_minus:+12.9f}")
    for name, ok in report.checks.items():
        print(f"check {name}: {'PASS' if ok else 'FAIL'}")


def _parse_m_list(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"--m: could not parse {text!r} as comma-separated numbers") from exc


def _load_config(path: str | None) -> dict:
    if path is None:
        return dict(DEMO_CONFIG)
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berrydet",
        description="Berry phases and regularized determinant phases of "
                    "periodic Hermitian families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "berry": "compute the Berry phase by all four methods",
        "det": "determinant phases at the largest configured m",
        "verify": "sweep m and compare against the holonomy prediction",
        "sweep": "scale the block coupling and track the determinant phase",
        "demo": "bundled spin-1/2 showcase",
    }
    for name, help_text in helps.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--out", metavar="PATH", help="write per-m rows as CSV")
        p.add_argument("--steps", type=int, metavar="N",
                       help="override gauge_steps and det_steps")
        p.add_argument("--m", metavar="LIST", help="comma-separated m values")
        p.add_argument("--seed", type=int, metavar="N",
                       help="override the random-family seed")
        p.add_argument("--quiet", action="store_true", help="suppress the summary")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = _load_config(None if args.command == "demo" else args.config)
        if args.steps is not None:
            raw["gauge_steps"] = args.steps
            raw["det_steps"] = args.steps
        if args.m is not None:
            raw["m_list"] = _parse_m_list(args.m)
        if args.seed is not None:
            raw["seed"] = args.seed
            if isinstance(raw.get("family"), dict) and \
                    raw["family"].get("type") == "random_gapped":
                raw["family"] = dict(raw["family"], seed=args.seed)
        cfg = RunConfig.from_dict(raw)
        report = run_config(cfg, args.command)
        if not args.quiet:
            _print_report(report, cfg.build())
        if args.out:
            emit_csv(report, args.out)
    except (BerryDetError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
