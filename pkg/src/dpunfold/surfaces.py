"""Gridded eigenvalue surfaces, asymptotic next to exact, and their writers."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .crystal import (
    DielectricModel,
    axis_coupling,
    axis_perturbation,
    exact_pair,
    optic_axis,
    singular_axes,
)
from .diabolic import CouplingData, DiabolicPoint
from .errors import ConfigError
from .hermitian import (
    c_hermitian_parts,
    exceptional_ring,
    frame3,
    hermitian_eigenvalues,
    ring_parameters,
    ring_plane_partition,
)
from .linalg import SymmetryClass, eig_exact, match_pairs
from .perturb import perturbation_scalars
from .symmetric import Regime, classify, frame2, sheets

SURFACE_COLUMNS = (
    "s1",
    "s2",
    "re_lambda_plus",
    "re_lambda_minus",
    "im_lambda_plus",
    "im_lambda_minus",
    "re_c",
    "im_c",
    "exact_re_plus",
    "exact_re_minus",
    "exact_im_plus",
    "exact_im_minus",
    "abs_err_plus",
    "abs_err_minus",
)

HERMITIAN_COLUMNS = (
    "a",
    "b",
    "p1",
    "p2",
    "p3",
    "region",
    "re_lambda_plus",
    "re_lambda_minus",
    "im_lambda_plus",
    "im_lambda_minus",
    "re_c",
    "im_c",
    "exact_re_plus",
    "exact_re_minus",
    "exact_im_plus",
    "exact_im_minus",
    "abs_err_plus",
    "abs_err_minus",
)


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering; complex as ``re+imj``."""
    if isinstance(x, str):
        return x
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return f"{z.real:.17g}{z.imag:+.17g}j"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def to_jsonable(obj):
    """Recursively render numbers with :func:`fmt`-compatible values for JSON."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return fmt(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False) + "\n"


def grid_axes(center, half_width: float, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    c1, c2 = center
    return (
        np.linspace(c1 - half_width, c1 + half_width, resolution),
        np.linspace(c2 - half_width, c2 + half_width, resolution),
    )


@dataclass
class SurfaceGrid:
    rows: list[tuple]
    report: dict

    @property
    def max_abs_err(self) -> float:
        return max(max(r[-2], r[-1]) for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SURFACE_COLUMNS)
        for r in self.rows:
            w.writerow(fmt(v) for v in r)
        return buf.getvalue()


def surface_grid(
    model: DielectricModel, axis_sel: str, half_width: float, resolution: int, center=None
) -> SurfaceGrid:
    """Asymptotic sheets and exact eigenvalues on a square window of ``(s1, s2)``.

    Rows run over ``s1`` fastest.  Exact values come from the trace formula
    on the full perturbed matrix at each direction.
    """
    axis = optic_axis(model, axis_sel)
    dp = axis.diabolic_point()
    cd = axis_coupling(model, axis)
    ps = axis_perturbation(model, axis)
    if center is None:
        center = tuple(axis.p0)
    s1_axis, s2_axis = grid_axes(center, half_width, resolution)
    corner = max(abs(s1_axis[0]), abs(s1_axis[-1])) ** 2 + max(abs(s2_axis[0]), abs(s2_axis[-1])) ** 2
    if corner >= 1.0:
        raise ConfigError("grid window leaves the unit disk s1^2 + s2^2 < 1")

    rows = []
    for s2 in s2_axis:
        for s1 in s1_axis:
            p = np.array([s1, s2])
            sample = sheets(frame2(cd, dp, p - dp.p0), ps)
            approx = (sample.plus, sample.minus)
            exact, _ = match_pairs(approx, exact_pair(model, p, axis.hemisphere))
            rows.append(
                (
                    s1,
                    s2,
                    sample.re_plus,
                    sample.re_minus,
                    sample.im_plus,
                    sample.im_minus,
                    sample.re_c,
                    sample.im_c,
                    exact[0].real,
                    exact[1].real,
                    exact[0].imag,
                    exact[1].imag,
                    abs(approx[0] - exact[0]),
                    abs(approx[1] - exact[1]),
                )
            )
    report = crystal_axis_report(model, axis_sel)
    report.update(
        {
            "window": {"center": list(center), "half_width": half_width, "resolution": resolution},
            "rows": len(rows),
            "max_abs_err": max(max(r[-2], r[-1]) for r in rows),
        }
    )
    return SurfaceGrid(rows, report)


def crystal_axis_report(model: DielectricModel, axis_sel: str) -> dict:
    axis = optic_axis(model, axis_sel)
    ps = axis_perturbation(model, axis)
    cd = axis_coupling(model, axis)
    rep = classify(ps)
    im_grad = 2 * (ps.xi.imag * ((cd.f11 - cd.f22) / 2).real + ps.eta.imag * cd.f12.real)
    out = {
        "axis": axis_sel,
        "s0": list(axis.s0.s),
        "lambda0": axis.lambda0,
        "f11": list(cd.f11.real),
        "f22": list(cd.f22.real),
        "f12": list(cd.f12.real),
        "eps11": ps.eps11,
        "eps12": ps.eps12,
        "eps21": ps.eps21,
        "eps22": ps.eps22,
        "mu": ps.mu,
        "xi": ps.xi,
        "eta": ps.eta,
        "zeta": ps.zeta,
        "D": rep.D,
        "regime": rep.regime.value,
        "re_c_at_axis": rep.im_zeta**2 - rep.im_xi**2 - rep.im_eta**2 - ps.zeta.real**2,
        # Im c is linear in (s1, s2); its sign flips with u2 -> -u2
        "im_c_gradient": list(im_grad),
        "im_c_gradient_abs": list(np.abs(im_grad)),
        "gauge_note": "signs of eta, zeta and Im c depend on the sign of u2; |Im c|, D and EP positions do not",
    }
    if rep.regime is Regime.ABSORPTION_DOMINATED:
        sa = singular_axes(model, axis)
        out["singular_axes"] = [
            {"s": list(d.s), "p": list(d.s[:2]), "valid": v} for d, v in zip(sa.directions, sa.valid)
        ]
    return out


# --- Hermitian demonstration family -------------------------------------------------

def canonical_hermitian_point() -> tuple[CouplingData, DiabolicPoint]:
    """``A(p) = [[p1, p2 - i p3], [p2 + i p3, -p1]]``, diabolic at ``p = 0``.

    Its frame coordinates are exactly ``(x, y, z) = (p1, p2, p3)``.
    """
    cd = CouplingData([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 1j], [0.0, 1.0, -1j], cls=SymmetryClass.HERMITIAN)
    dp = DiabolicPoint(np.zeros(3), 0.0, [1.0, 0.0], [0.0, 1.0])
    return cd, dp


def canonical_hermitian_matrix(p) -> np.ndarray:
    p1, p2, p3 = p
    return np.array([[p1, p2 - 1j * p3], [p2 + 1j * p3, -p1]], dtype=complex)


@dataclass
class HermitianGrid:
    rows: list[tuple]
    report: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HERMITIAN_COLUMNS)
        for r in self.rows:
            w.writerow(fmt(v) for v in r)
        return buf.getvalue()


def hermitian_plane_grid(delta, half_width: float, resolution: int) -> HermitianGrid:
    """Sample the plane of the exceptional ring for the canonical Hermitian family.

    ``(a, b)`` are in-plane coordinates around the ring centre; ``half_width``
    is measured in ring radii.
    """
    cd, dp = canonical_hermitian_point()
    ps = perturbation_scalars(delta, dp)
    ring = exceptional_ring(ps)
    e1, e2 = ring.basis()
    extent = half_width * ring.radius
    a_axis = np.linspace(-extent, extent, resolution)
    rows = []
    for b in a_axis:
        for a in a_axis:
            xyz = ring.center + a * e1 + b * e2
            frame = frame3(cd, dp, xyz)
            re_c, im_c = c_hermitian_parts(frame, ps)
            region = ring_plane_partition(frame, ps, tol=1e-9 * ring.radius**2).value
            approx = hermitian_eigenvalues(frame, ps)
            w = eig_exact(canonical_hermitian_matrix(xyz) + delta).eigenvalues
            exact, _ = match_pairs(approx, tuple(w))
            rows.append(
                (
                    a, b, *xyz, region,
                    approx[0].real, approx[1].real, approx[0].imag, approx[1].imag,
                    re_c, im_c,
                    exact[0].real, exact[1].real, exact[0].imag, exact[1].imag,
                    abs(approx[0] - exact[0]), abs(approx[1] - exact[1]),
                )
            )
    report = {
        "family": "[[p1, p2 - i p3], [p2 + i p3, -p1]] + delta",
        "delta": np.asarray(delta).tolist(),
        "mu": ps.mu,
        "xi": ps.xi,
        "eta": ps.eta,
        "zeta": ps.zeta,
        "ring": {
            "center": list(ring.center),
            "radius": ring.radius,
            "plane_normal": list(ring.plane_normal),
            "points_p": ring_parameters(cd, dp, ring, 16).tolist(),
        },
        "rows": len(rows),
    }
    return HermitianGrid(rows, report)
