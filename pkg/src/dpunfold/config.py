"""Run configuration: TOML in, TOML out.

Layout::

    [transparent]
    eta = [0.5, 0.4, 0.1]

    [dichroic]            # the tensor is i * matrix
    matrix = [[...], [...], [...]]

    [gamma]               # complex symmetric, entries as [re, im]
    matrix = [[[re, im], ...], ...]

    [grid]
    axis = "-+"
    half_width = 0.1
    resolution = 101
    scale = 1.0
    center = [s1, s2]     # optional, defaults to the optic axis

    [output]
    grid = "surface.csv"
    report = "report.json"

    [hermitian]           # optional, used by unfold-hermitian
    delta = [[[re, im], [re, im]], [[re, im], [re, im]]]

    [tolerances]          # optional overrides, see DEFAULT_TOLERANCES
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .crystal import SIGN_PAIRS, DielectricModel
from .errors import ConfigError, UnfoldingError

DEFAULT_TOLERANCES = {
    "coupling_fd": 1e-6,
    "scalars": 1e-12,
    "gauge": 1e-12,
    "oracle_2x2": 1e-14,
    "cone_order": 1.9,
    "joint_order": 1.4,
    "ep_gap_order": 1.4,
    "golden_rel": 1e-13,
}

DEFAULT_HERMITIAN_DELTA = np.array([[0.02 + 0.01j, 0.015 - 0.02j], [-0.01 + 0.025j, -0.005 + 0.012j]])


@dataclass(frozen=True)
class RunConfig:
    model: DielectricModel
    axis: str = "-+"
    half_width: float = 0.1
    resolution: int = 101
    scale: float = 1.0
    center: Optional[tuple[float, float]] = None
    grid_path: Optional[str] = None
    report_path: Optional[str] = None
    hermitian_delta: np.ndarray = field(default_factory=lambda: DEFAULT_HERMITIAN_DELTA.copy())
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        if self.axis not in SIGN_PAIRS:
            raise ConfigError(f"axis must be one of {SIGN_PAIRS}, got {self.axis!r}")
        if not self.resolution >= 2:
            raise ConfigError(f"resolution must be at least 2, got {self.resolution}")
        if not self.half_width > 0:
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        delta = np.asarray(self.hermitian_delta, dtype=complex)
        if delta.shape != (2, 2):
            raise ConfigError("hermitian.delta must be a 2x2 complex matrix")
        object.__setattr__(self, "hermitian_delta", delta)
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        mine, theirs = dataclasses.asdict(self), dataclasses.asdict(other)
        for key in ("model", "hermitian_delta"):
            mine.pop(key), theirs.pop(key)
        return (
            mine == theirs
            and self.model == other.model
            and np.array_equal(self.hermitian_delta, other.hermitian_delta)
        )

    __hash__ = None

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _complex_matrix(rows, shape, where: str) -> np.ndarray:
    try:
        arr = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in rows])
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"{where}: entries must be [re, im] pairs ({exc})") from exc
    if arr.shape != shape:
        raise ConfigError(f"{where}: expected shape {shape}, got {arr.shape}")
    return arr


def _real_matrix(rows, where: str) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if arr.shape != (3, 3):
        raise ConfigError(f"{where}: expected a 3x3 matrix, got shape {arr.shape}")
    return arr


def from_dict(data: dict) -> RunConfig:
    try:
        eta = data["transparent"]["eta"]
    except KeyError as exc:
        raise ConfigError("missing [transparent] eta = [eta1, eta2, eta3]") from exc
    if len(eta) != 3:
        raise ConfigError("[transparent] eta needs three values")
    dichroic = _real_matrix(data.get("dichroic", {}).get("matrix", np.zeros((3, 3))), "[dichroic] matrix")
    gamma_rows = data.get("gamma", {}).get("matrix")
    gamma = np.zeros((3, 3), dtype=complex) if gamma_rows is None else _complex_matrix(gamma_rows, (3, 3), "[gamma] matrix")
    try:
        model = DielectricModel(tuple(float(v) for v in eta), dichroic, gamma)
    except UnfoldingError as exc:
        raise ConfigError(f"invalid dielectric model: {exc}") from exc

    grid = data.get("grid", {})
    out = data.get("output", {})
    herm = data.get("hermitian", {})
    kwargs = dict(
        model=model,
        axis=str(grid.get("axis", "-+")),
        half_width=float(grid.get("half_width", 0.1)),
        resolution=int(grid.get("resolution", 101)),
        scale=float(grid.get("scale", 1.0)),
        center=tuple(float(v) for v in grid["center"]) if "center" in grid else None,
        grid_path=out.get("grid"),
        report_path=out.get("report"),
        tolerances={**DEFAULT_TOLERANCES, **{k: float(v) for k, v in data.get("tolerances", {}).items()}},
    )
    if "delta" in herm:
        kwargs["hermitian_delta"] = _complex_matrix(herm["delta"], (2, 2), "[hermitian] delta")
    return RunConfig(**kwargs)


def load(path) -> RunConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path}: no such config file") from exc
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        return from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def loads(text: str) -> RunConfig:
    try:
        return from_dict(tomllib.loads(text))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(exc)) from exc


def _num(x: float) -> str:
    return repr(float(x))


def _real_rows(m) -> str:
    return "[\n" + "".join("    [" + ", ".join(_num(v) for v in row) + "],\n" for row in m) + "]"


def _complex_rows(m) -> str:
    return (
        "[\n"
        + "".join("    [" + ", ".join(f"[{_num(v.real)}, {_num(v.imag)}]" for v in row) + "],\n" for row in m)
        + "]"
    )


def dumps(cfg: RunConfig) -> str:
    """TOML text that :func:`loads` parses back to an equal config."""
    m = cfg.model
    lines = [
        "[transparent]",
        "eta = [" + ", ".join(_num(v) for v in m.eta_diag) + "]",
        "",
        "[dichroic]",
        "matrix = " + _real_rows(m.dichroic),
        "",
        "[gamma]",
        "matrix = " + _complex_rows(m.gamma),
        "",
        "[grid]",
        f"axis = {json.dumps(cfg.axis)}",
        f"half_width = {_num(cfg.half_width)}",
        f"resolution = {cfg.resolution}",
        f"scale = {_num(cfg.scale)}",
    ]
    if cfg.center is not None:
        lines.append(f"center = [{_num(cfg.center[0])}, {_num(cfg.center[1])}]")
    lines += ["", "[output]"]
    if cfg.grid_path is not None:
        lines.append(f"grid = {json.dumps(cfg.grid_path)}")
    if cfg.report_path is not None:
        lines.append(f"report = {json.dumps(cfg.report_path)}")
    lines += ["", "[hermitian]", "delta = " + _complex_rows(cfg.hermitian_delta), "", "[tolerances]"]
    lines += [f"{k} = {_num(v)}" for k, v in sorted(cfg.tolerances.items())]
    return "\n".join(lines) + "\n"
