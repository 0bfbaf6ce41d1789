"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import config as cfgmod
from .crystal import SIGN_PAIRS, classify_crystal, optic_axes, singular_axes
from .errors import ConfigError, NotBiaxial, UnfoldingError
from .surfaces import dump_json, hermitian_plane_grid, surface_grid
from .symmetric import Regime
from .validation import run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2


def builtin_config_path() -> Path:
    return Path(str(resources.files("dpunfold") / "data" / "example_crystal.toml"))


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def _sidecar(path) -> str | None:
    if path in (None, "-"):
        return None
    return str(Path(path).with_suffix(".json"))


def resolve_config(args) -> cfgmod.RunConfig:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.load(builtin_config_path())
    changes = {}
    if args.axis is not None:
        changes["axis"] = args.axis
    if args.scale is not None:
        changes["scale"] = args.scale
    if args.grid is not None:
        changes["resolution"] = args.grid
    if args.half_width is not None:
        changes["half_width"] = args.half_width
    return cfg.replace(**changes) if changes else cfg


def cmd_axes(cfg: cfgmod.RunConfig, out=None) -> dict:
    model = cfg.model.scaled(cfg.scale)
    axes = optic_axes(model)
    report = {
        "eta": list(model.eta_diag),
        "lambda0": axes[0].lambda0,
        "axes": [
            {
                "axis": ax.sign_pair,
                "s0": list(ax.s0.s),
                "u1": list(ax.diabolic_point().u1.real),
                "u2": list(ax.diabolic_point().u2.real),
            }
            for ax in axes
        ],
    }
    _write(dump_json(report), out)
    return report


def cmd_classify(cfg: cfgmod.RunConfig, out=None) -> dict:
    model = cfg.model.scaled(cfg.scale)
    reports = classify_crystal(model)
    axes = {ax.sign_pair: ax for ax in optic_axes(model)}
    entries = []
    for pair in SIGN_PAIRS:
        rep = reports[pair]
        entry = {
            "axis": pair,
            "s0": list(axes[pair].s0.s),
            "D": rep.D,
            "im_xi": rep.im_xi,
            "im_eta": rep.im_eta,
            "im_zeta": rep.im_zeta,
            "regime": rep.regime.value,
        }
        if rep.regime is Regime.ABSORPTION_DOMINATED:
            sa = singular_axes(model, axes[pair])
            entry["singular_axes"] = [{"s": list(d.s), "valid": v} for d, v in zip(sa.directions, sa.valid)]
        entries.append(entry)
    report = {"scale": cfg.scale, "axes": entries}
    _write(dump_json(report), out)
    return report


def cmd_surface(cfg: cfgmod.RunConfig, out=None):
    model = cfg.model.scaled(cfg.scale)
    grid = surface_grid(model, cfg.axis, cfg.half_width, cfg.resolution, cfg.center)
    grid.report["scale"] = cfg.scale
    target = out if out is not None else cfg.grid_path
    _write(grid.to_csv(), target)
    report_path = cfg.report_path if out is None and cfg.report_path else _sidecar(target)
    if report_path is not None:
        _write(dump_json(grid.report), report_path)
    return grid


def cmd_unfold_hermitian(cfg: cfgmod.RunConfig, out=None, half_width: float = 2.0):
    grid = hermitian_plane_grid(cfg.scale * cfg.hermitian_delta, half_width, cfg.resolution)
    _write(grid.to_csv(), out)
    sidecar = _sidecar(out)
    if sidecar is not None:
        _write(dump_json(grid.report), sidecar)
    return grid


def cmd_validate(cfg: cfgmod.RunConfig, out=None) -> int:
    model = cfg.model.scaled(cfg.scale)
    checks = run_checks(model, cfg.tolerances, cfg.scale)
    lines = [c.line() for c in checks]
    failed = [c for c in checks if not c.ok]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed" + (" (warnings are out-of-regime)" if any(c.status == "WARN" for c in checks) else ""))
    _write("\n".join(lines) + "\n", out)
    return EXIT_VALIDATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration (default: bundled example crystal)")
    common.add_argument("--axis", choices=SIGN_PAIRS, help="optic axis by signs of (S1, S3)")
    common.add_argument("--scale", type=float, help="scale factor t for absorption and optical activity")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--grid", type=int, help="grid resolution per dimension")
    common.add_argument("--half-width", type=float, help="half-width of the sampling window")
    common.add_argument("--dump-config", action="store_true", help="print the effective config as TOML and exit")

    parser = argparse.ArgumentParser(prog="dpunfold", description="Unfolding of diabolic points under complex perturbation.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("axes", parents=[common], help="optic axes and degenerate eigenvectors")
    sub.add_parser("classify", parents=[common], help="per-axis discriminant D, regime and singular axes")
    sub.add_parser("surface", parents=[common], help="asymptotic vs exact eigenvalue sheets on a grid (CSV)")
    sub.add_parser("unfold-hermitian", parents=[common], help="ring-plane grid for a three-parameter Hermitian family")
    sub.add_parser("validate", parents=[common], help="run the invariant suite against the exact oracle")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            _write(cfgmod.dumps(cfg), args.out)
            return EXIT_OK
        if args.command == "axes":
            cmd_axes(cfg, args.out)
        elif args.command == "classify":
            cmd_classify(cfg, args.out)
        elif args.command == "surface":
            cmd_surface(cfg, args.out)
        elif args.command == "unfold-hermitian":
            cmd_unfold_hermitian(cfg, args.out, args.half_width if args.half_width is not None else 2.0)
        elif args.command == "validate":
            return cmd_validate(cfg, args.out)
    except (ConfigError, NotBiaxial) as exc:
        print(f"dpunfold: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnfoldingError as exc:
        print(f"dpunfold: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
