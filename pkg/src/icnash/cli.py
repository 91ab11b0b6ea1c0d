"""Command-line interface.

Subcommands: ``region`` (compute the equilibrium region and emit frontier
CSV / conditions CSV / stats JSON / SVG), ``eval`` (a/b function table at one
sweep point), ``limits`` (feedback-limit convergence report), ``tin``
(treat-interference-as-noise floor and impossibility region), ``simcheck``
(signal-model Monte-Carlo sanity check).

Exit codes: 0 success, 2 validation/config error, 3 numeric or domain error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from . import fileio
from .errors import (
    ConfigError,
    DomainError,
    EmptyRegionError,
    InvalidArgumentError,
    OutOfWindowError,
    RateRegionError,
    UnboundedRegionError,
    UnsupportedRegimeError,
)
from .neregion import (
    AchievableRegionInput,
    condition_constants,
    default_rmax,
    impossibility_region,
    ne_region,
    tin_bound,
)
from .params import (
    ChannelGains,
    ChannelParams,
    SimConfig,
    params_from_gains,
    simulate_feedback_variance,
    snr_bwd_closed_form,
)
from .presets import PRESETS, get_preset
from .ratefuncs import SweepPoint, a3, a3_perfect_limit, eval_table
from .sweep import SweepSpec, make_grid
import numpy as np

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_FORMATS = ("csv", "svg", "json")
_CONDITION_MODES = ("none", "coarse", "full")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration; round-trips through JSON."""

    channel: dict
    preset: Optional[str] = None
    sweep: SweepSpec = field(default_factory=SweepSpec)
    raster_n: int = 512
    rmax: Optional[float] = None
    out: str = "out"
    formats: tuple[str, ...] = ("csv", "svg", "json")
    conditions: str = "coarse"
    errata_c13_mu: bool = False
    hull: bool = False
    threads: int = 1

    def __post_init__(self):
        if not self.formats:
            raise ConfigError("at least one output format is required", field="formats")
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise ConfigError(f"unknown format {fmt!r}", field="formats")
        if self.conditions not in _CONDITION_MODES:
            raise ConfigError(f"unknown conditions mode {self.conditions!r}", field="conditions")
        if self.raster_n < 1:
            raise ConfigError("raster_n must be >= 1", field="raster_n")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", field="threads")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}", field="preset")

    def channel_params(self, **overrides) -> ChannelParams:
        doc = self.channel
        if "gains" in doc:
            g = doc["gains"]
            if not isinstance(g, (list, tuple)) or len(g) != 6:
                raise ConfigError("gains must be a 6-element array", field="gains")
            return params_from_gains(ChannelGains(*g), float(doc.get("eta", 1.0)))
        params = ChannelParams.from_json_dict(doc)
        if overrides:
            params = replace(params, **overrides)
        return params

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel,
            "preset": self.preset,
            "sweep": {
                "n_rho": self.sweep.n_rho,
                "n_mu1": self.sweep.n_mu1,
                "n_mu2": self.sweep.n_mu2,
                "adaptive": self.sweep.adaptive,
                "budget": self.sweep.budget,
            },
            "raster_n": self.raster_n,
            "rmax": self.rmax,
            "out": self.out,
            "formats": list(self.formats),
            "conditions": self.conditions,
            "errata_c13_mu": self.errata_c13_mu,
            "hull": self.hull,
            "threads": self.threads,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("run config must be a JSON object")
        if "channel" not in doc and ("snr_fwd_db" in doc or "gains" in doc):
            doc = {"channel": doc}
        if "channel" not in doc:
            raise ConfigError("missing required field", field="channel")
        sweep_doc = doc.get("sweep", {})
        if not isinstance(sweep_doc, dict):
            raise ConfigError("sweep must be an object", field="sweep")
        try:
            sweep = SweepSpec(
                n_rho=int(sweep_doc.get("n_rho", 64)),
                n_mu1=int(sweep_doc.get("n_mu1", 33)),
                n_mu2=int(sweep_doc.get("n_mu2", 33)),
                adaptive=bool(sweep_doc.get("adaptive", False)),
                budget=int(sweep_doc.get("budget", 0)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad sweep spec: {exc}", field="sweep") from exc
        rmax = doc.get("rmax")
        return cls(
            channel=doc["channel"],
            preset=doc.get("preset"),
            sweep=sweep,
            raster_n=int(doc.get("raster_n", 512)),
            rmax=None if rmax is None else float(rmax),
            out=str(doc.get("out", "out")),
            formats=tuple(doc.get("formats", list(_FORMATS))),
            conditions=str(doc.get("conditions", "coarse")),
            errata_c13_mu=bool(doc.get("errata_c13_mu", False)),
            hull=bool(doc.get("hull", False)),
            threads=int(doc.get("threads", 1)),
        )


def _parse_grid(text: str) -> SweepSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("grid must be R,M1,M2", field="grid")
    try:
        n_rho, n_mu1, n_mu2 = (int(s) for s in parts)
    except ValueError as exc:
        raise ConfigError(f"grid entries must be integers: {text!r}", field="grid") from exc
    return SweepSpec(n_rho=n_rho, n_mu1=n_mu1, n_mu2=n_mu2)


def _load_config(args: argparse.Namespace) -> RunConfig:
    if args.preset and args.config:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset:
        preset = get_preset(args.preset)
        cfg = RunConfig(channel=preset.channel_json(), preset=preset.name)
    elif args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON at line {exc.lineno}: {exc.msg}")
        cfg = RunConfig.from_json_dict(doc)
    else:
        raise ConfigError("one of --preset or --config is required")

    updates: dict = {}
    if getattr(args, "grid", None):
        updates["sweep"] = _parse_grid(args.grid)
    if getattr(args, "adaptive", False) or getattr(args, "budget", 0):
        sweep = updates.get("sweep", cfg.sweep)
        updates["sweep"] = replace(
            sweep,
            adaptive=bool(getattr(args, "adaptive", False) or getattr(args, "budget", 0)),
            budget=int(getattr(args, "budget", 0) or 0),
        )
    for name in ("raster_n", "rmax", "out", "conditions", "threads"):
        value = getattr(args, name, None)
        if value is not None:
            updates[name] = value
    if getattr(args, "formats", None):
        updates["formats"] = tuple(s.strip() for s in args.formats.split(","))
    if getattr(args, "errata_c13_mu", False):
        updates["errata_c13_mu"] = True
    if getattr(args, "hull", False):
        updates["hull"] = True
    if getattr(args, "eta", None) is not None:
        channel = dict(cfg.channel)
        channel["eta"] = float(args.eta)
        updates["channel"] = channel
    return replace(cfg, **updates) if updates else cfg


def _variants(cfg: RunConfig) -> list[tuple[str, ChannelParams]]:
    """Per-figure feedback settings: presets sweep the first pair's feedback
    level at fixed second-pair level; plain configs run once."""
    if cfg.preset is not None:
        preset = get_preset(cfg.preset)
        eta = float(cfg.channel.get("eta", preset.eta))
        out = []
        for v in preset.snr_bwd_1_variants_db:
            label = f"bwd1_{v:g}dB"
            out.append((label, preset.params(snr_bwd_1_db=v, eta=eta)))
        return out
    return [("run", cfg.channel_params())]


def cmd_region(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    achievable = AchievableRegionInput.default_box()
    overlay = []
    if getattr(args, "achievable", None):
        poly = fileio.read_polygon_csv(Path(args.achievable))
        achievable = AchievableRegionInput.from_polygon(poly)
        overlay.append(("capacity input", poly))

    variants = _variants(cfg)
    frontiers = []
    rmax_used = None
    for label, params in variants:
        result = ne_region(
            params,
            achievable,
            cfg.sweep,
            raster_n=cfg.raster_n,
            rmax=cfg.rmax,
            hull=cfg.hull,
            errata_c13_mu=cfg.errata_c13_mu,
            threads=cfg.threads,
        )
        rmax_used = result.rmax
        frontiers.append((label, result.frontier))
        if "csv" in cfg.formats:
            fileio.write_frontier_csv(outdir / f"frontier_{label}.csv", result.frontier)
            if cfg.conditions != "none":
                if cfg.conditions == "full":
                    pts = make_grid(cfg.sweep, params)
                else:
                    pts = make_grid(SweepSpec(n_rho=5, n_mu1=3, n_mu2=3), params)
                cc = condition_constants(params, pts, cfg.errata_c13_mu)
                fileio.write_conditions_csv(
                    outdir / f"conditions_{label}.csv", fileio.conditions_rows(cc)
                )
        if "json" in cfg.formats:
            fileio.write_stats_json(
                outdir / f"stats_{label}.json",
                result.stats,
                meta={
                    "label": label,
                    "rmax": result.rmax,
                    "raster_n": cfg.raster_n,
                    "area": result.region.area(),
                    "channel": params.to_json_dict(),
                },
            )
        print(f"{label}: area={result.region.area():.6g} rmax={result.rmax:.6g} "
              f"slices={result.stats.n_points} empty={result.stats.n_empty}")
    if "svg" in cfg.formats and rmax_used is not None:
        fileio.write_region_svg(
            outdir / "region.svg",
            frontiers,
            rmax=rmax_used,
            overlays=overlay,
            title=cfg.preset or "equilibrium region",
        )
    if getattr(args, "dump_config", False):
        with open(outdir / "config.json", "w") as fh:
            json.dump(cfg.to_json_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _parse_point(text: str) -> SweepPoint:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError("point must be rho,mu1,mu2", field="point")
    try:
        rho, mu1, mu2 = (float(s) for s in parts)
    except ValueError as exc:
        raise ConfigError(f"point entries must be numbers: {text!r}", field="point") from exc
    return SweepPoint(rho=rho, mu_1=mu1, mu_2=mu2)


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = cfg.channel_params()
    pt = _parse_point(args.point)
    print("quantity,pair,value")
    for name, i, value in eval_table(params, pt):
        print(f"{name},{i},{value:.12g}")
    return EXIT_OK


def cmd_limits(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = cfg.channel_params()
    spec = cfg.sweep
    rhos = np.linspace(0.0, params.rho_max, spec.n_rho)
    mus = np.linspace(0.0, 1.0, max(spec.n_mu1, spec.n_mu2))
    rho_grid = rhos[:, None]
    mu_grid = mus[None, :]
    tol = 1e-3
    ok = True
    for i in (1, 2):
        limit = a3_perfect_limit(params, i, rho_grid, mu_grid)
        for snr in (1e6, 1e8):
            noisy = replace(params, **{f"snr_bwd_{i}": snr})
            dev = float(np.max(np.abs(a3(noisy, i, rho_grid, mu_grid) - limit)))
            print(f"perfect-limit pair={i} snr_bwd={snr:g}: max|dev|={dev:.3e}")
            if snr == 1e8 and dev > tol:
                ok = False
        for snr in (1e-6, 1e-8):
            noisy = replace(params, **{f"snr_bwd_{i}": snr})
            dev = float(np.max(np.abs(a3(noisy, i, 0.0, mu_grid))))
            print(f"no-feedback pair={i} snr_bwd={snr:g}: max|dev|={dev:.3e}")
            if snr == 1e-8 and dev > tol:
                ok = False
    print(f"limits: {'PASS' if ok else 'FAIL'} (tolerance {tol:g})")
    return EXIT_OK


def cmd_tin(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = cfg.channel_params()
    bound = tin_bound(params)
    print("pair,L")
    print(f"1,{bound.l1:.12g}")
    print(f"2,{bound.l2:.12g}")
    if getattr(args, "out", None):
        converse = None
        if getattr(args, "converse", None):
            converse = AchievableRegionInput.from_polygon(
                fileio.read_polygon_csv(Path(args.converse))
            )
        region = impossibility_region(params, converse)
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "impossibility_region.csv", "w") as fh:
            fh.write("R1,R2\n")
            for poly in region.polygons:
                for x, y in poly:
                    fh.write(f"{x:.9g},{y:.9g}\n")
        print(f"impossibility region polygon written to {outdir / 'impossibility_region.csv'}")
    return EXIT_OK


def _parse_gains(text: str) -> ChannelGains:
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError("gains must be hf1,hf2,h12,h21,hb1,hb2", field="gains")
    try:
        values = [float(s) for s in parts]
    except ValueError as exc:
        raise ConfigError(f"gain entries must be numbers: {text!r}", field="gains") from exc
    return ChannelGains(*values)


def cmd_simcheck(args: argparse.Namespace) -> int:
    gains = _parse_gains(args.gains)
    sim = SimConfig(n=args.n, delay=args.delay, seed=args.seed)
    est = simulate_feedback_variance(gains, sim)
    all_ok = True
    for i in (1, 2):
        closed = snr_bwd_closed_form(gains, i)
        se = closed * math.sqrt(2.0 / est.n_samples) if closed > 0 else 0.0
        dev = abs(est.var(i) - closed)
        ok = dev <= 3.0 * se if se > 0 else dev == 0.0
        all_ok &= ok
        print(
            f"pair={i}: estimate={est.var(i):.6g} closed_form={closed:.6g} "
            f"stderr={se:.3g} |dev|={dev:.3g} {'PASS' if ok else 'FAIL'}"
        )
    print(f"simcheck: {'PASS' if all_ok else 'FAIL'} (3 standard errors)")
    return EXIT_OK


def _add_config_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--preset", help=f"named preset ({', '.join(sorted(PRESETS))})")
    sub.add_argument("--config", help="JSON config file (channel or full run config)")
    sub.add_argument("--grid", help="sweep grid as R,M1,M2")
    sub.add_argument("--eta", type=float, help="override eta (>= 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icnash",
        description="Equilibrium rate regions of the two-user Gaussian "
        "interference channel with noisy output feedback",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    region = subs.add_parser("region", help="compute the region and emit files")
    _add_config_args(region)
    region.add_argument("--out", help="output directory (default 'out')")
    region.add_argument("--formats", help="comma list out of csv,svg,json")
    region.add_argument("--raster-n", dest="raster_n", type=int, help="raster cells per axis")
    region.add_argument("--rmax", type=float, help="window edge in bits (default auto)")
    region.add_argument("--achievable", help="achievable capacity polygon CSV")
    region.add_argument("--adaptive", action="store_true", help="refine frontier cells")
    region.add_argument("--budget", type=int, default=0, help="max extra refinement points")
    region.add_argument("--threads", type=int, help="parallel slice chunks")
    region.add_argument("--hull", action="store_true", help="convex-hull post-pass")
    region.add_argument(
        "--errata-c13-mu", dest="errata_c13_mu", action="store_true",
        help="use the own-pair split in the sum bound's cross term",
    )
    region.add_argument(
        "--conditions", choices=_CONDITION_MODES, help="conditions CSV density"
    )
    region.add_argument(
        "--dump-config", dest="dump_config", action="store_true",
        help="write the resolved run config to config.json",
    )
    region.set_defaults(func=cmd_region)

    ev = subs.add_parser("eval", help="print the a/b function table at a sweep point")
    _add_config_args(ev)
    ev.add_argument("--point", required=True, help="sweep point as rho,mu1,mu2")
    ev.set_defaults(func=cmd_eval)

    lim = subs.add_parser("limits", help="feedback-limit convergence report")
    _add_config_args(lim)
    lim.set_defaults(func=cmd_limits)

    tin = subs.add_parser("tin", help="treat-interference-as-noise floor")
    _add_config_args(tin)
    tin.add_argument("--out", help="also write the impossibility region polygon here")
    tin.add_argument("--converse", help="converse capacity polygon CSV")
    tin.set_defaults(func=cmd_tin)

    sim = subs.add_parser("simcheck", help="signal-model Monte-Carlo sanity check")
    sim.add_argument("--gains", required=True, help="hf1,hf2,h12,h21,hb1,hb2")
    sim.add_argument("-N", "--samples", dest="n", type=int, required=True, help="block length")
    sim.add_argument("--delay", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.set_defaults(func=cmd_simcheck)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, UnsupportedRegimeError, UnboundedRegionError,
            OutOfWindowError, EmptyRegionError) as exc:
        extra = getattr(exc, "diagnostics", None)
        print(f"numeric/domain error: {exc}" + (f" {extra}" if extra else ""), file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidArgumentError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RateRegionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
