"""Unfolding of a Hermitian diabolic point under non-Hermitian perturbation.

With ``x = <f11 - f22, dp>/2``, ``y = <Re f12, dp>``, ``z = <Im f12, dp>``
the eigenvalues are ``lambda0' + mu +- sqrt(c)`` where

    c = (x + xi)^2 + (y + eta)^2 + (z - i zeta)^2.

``c = 0`` is the intersection of a sphere and a plane through its centre:
a ring of exceptional points.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .diabolic import CouplingData, DiabolicPoint
from .errors import ClassMismatch, DegenerateRing, DimensionMismatch, OffPlane, SingularFrame
from .linalg import SymmetryClass
from .perturb import PerturbationScalars


@dataclass(frozen=True)
class UnfoldingFrame3:
    lambda0_prime: float
    x: float
    y: float
    z: float
    g_x: np.ndarray
    g_y: np.ndarray
    g_z: np.ndarray

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def unperturbed(self) -> tuple[float, float]:
        r = float(np.sqrt(self.x**2 + self.y**2 + self.z**2))
        return self.lambda0_prime + r, self.lambda0_prime - r


def _frame_vectors(cd: CouplingData):
    if cd.cls not in (SymmetryClass.HERMITIAN, SymmetryClass.REAL_SYMMETRIC):
        raise ClassMismatch(f"three-parameter frame needs a Hermitian family, got {cd.cls.value}")
    return ((cd.f11 - cd.f22) / 2).real, cd.f12.real, cd.f12.imag


def frame3(cd: CouplingData, dp: DiabolicPoint, delta_p) -> UnfoldingFrame3:
    g_x, g_y, g_z = _frame_vectors(cd)
    delta_p = np.asarray(delta_p, dtype=float).reshape(-1)
    if delta_p.size != cd.n_params:
        raise DimensionMismatch(f"expected {cd.n_params} parameters, got {delta_p.size}")
    lam = dp.lambda0 + float(np.dot((cd.f11 + cd.f22).real, delta_p)) / 2
    return UnfoldingFrame3(lam, float(g_x @ delta_p), float(g_y @ delta_p), float(g_z @ delta_p), g_x, g_y, g_z)


def frame_at(frame_like: UnfoldingFrame3, xyz, lambda0_prime: Optional[float] = None) -> UnfoldingFrame3:
    """Same frame vectors, different ``(x, y, z)`` point."""
    x, y, z = (float(v) for v in xyz)
    lam = frame_like.lambda0_prime if lambda0_prime is None else lambda0_prime
    return UnfoldingFrame3(lam, x, y, z, frame_like.g_x, frame_like.g_y, frame_like.g_z)


def c_hermitian(frame: UnfoldingFrame3, ps: PerturbationScalars) -> complex:
    return (frame.x + ps.xi) ** 2 + (frame.y + ps.eta) ** 2 + (frame.z - 1j * ps.zeta) ** 2


def c_hermitian_parts(frame: UnfoldingFrame3, ps: PerturbationScalars) -> tuple[float, float]:
    """``(Re c, Im c)`` written as sphere and plane equations."""
    xi, eta, zeta = ps.xi, ps.eta, ps.zeta
    xr, yr, zr = frame.x + xi.real, frame.y + eta.real, frame.z + zeta.imag
    re_c = xr**2 + yr**2 + zr**2 - (xi.imag**2 + eta.imag**2 + zeta.real**2)
    im_c = 2 * (xi.imag * xr + eta.imag * yr - zeta.real * zr)
    return re_c, im_c


def hermitian_eigenvalues(frame: UnfoldingFrame3, ps: PerturbationScalars) -> tuple[complex, complex]:
    root = np.sqrt(c_hermitian(frame, ps))
    base = frame.lambda0_prime + ps.mu
    return complex(base + root), complex(base - root)


@dataclass(frozen=True)
class ExceptionalRing:
    center: np.ndarray
    radius: float
    plane_normal: np.ndarray

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal pair spanning the ring plane."""
        n = self.plane_normal / np.linalg.norm(self.plane_normal)
        helper = np.eye(3)[int(np.argmin(np.abs(n)))]
        e1 = np.cross(n, helper)
        e1 /= np.linalg.norm(e1)
        return e1, np.cross(n, e1)

    def points(self, n: int = 64) -> np.ndarray:
        """``n`` ring points equally spaced by angle, in ``(x, y, z)``."""
        e1, e2 = self.basis()
        t = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * (np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2))

    def plane_point(self, a: float, b: float) -> np.ndarray:
        e1, e2 = self.basis()
        return self.center + a * e1 + b * e2


def exceptional_ring(ps: PerturbationScalars, rtol: float = 1e-12) -> ExceptionalRing:
    xi, eta, zeta = ps.xi, ps.eta, ps.zeta
    center = np.array([-xi.real, -eta.real, -zeta.imag])
    normal = np.array([xi.imag, eta.imag, -zeta.real])
    radius = float(np.linalg.norm(normal))
    if radius <= rtol * max(ps.epsilon_norm, np.finfo(float).tiny):
        raise DegenerateRing("Im xi, Im eta and Re zeta vanish: the ring collapses to a point")
    return ExceptionalRing(center, radius, normal)


def invert_frame3(cd: CouplingData, xyz) -> tuple[np.ndarray, np.ndarray, float]:
    """Parameter shift reaching frame point ``xyz``.

    Returns ``(shift, null_space, condition_number)``; the null space is
    empty for three parameters.
    """
    g = np.vstack(_frame_vectors(cd))
    sv = np.linalg.svd(g, compute_uv=False)
    if sv.size < 3 or sv[-1] <= 1e-14 * sv[0]:
        raise SingularFrame("frame vectors f11 - f22, Re f12, Im f12 are linearly dependent")
    cond = float(sv[0] / sv[-1])
    if cd.n_params == 3:
        return np.linalg.solve(g, np.asarray(xyz, dtype=float)), np.zeros((3, 0)), cond
    shift = np.linalg.lstsq(g, np.asarray(xyz, dtype=float), rcond=None)[0]
    null = np.linalg.svd(g)[2][3:].T
    return shift, null, cond


def ring_parameters(cd: CouplingData, dp: DiabolicPoint, ring: ExceptionalRing, n: int = 64) -> np.ndarray:
    """The ring mapped into parameter space (an ellipse for three parameters)."""
    return np.array([dp.p0 + invert_frame3(cd, q)[0] for q in ring.points(n)])


def ring_ratios(frame: UnfoldingFrame3, ps: PerturbationScalars) -> tuple[complex, complex]:
    """The two expressions for ``alpha/beta`` that must agree on the ring.

    ``<f21, dp> + eps21 = y - iz + eta - zeta`` sits in the first numerator,
    matching the restricted matrix built with ``(u, v) = sum u_i conj(v_i)``.
    """
    x, y, z = frame.x, frame.y, frame.z
    first = (y - 1j * z + ps.eta - ps.zeta) / (-x - ps.xi)
    second = (x + ps.xi) / (y + 1j * z + ps.eta + ps.zeta)
    return complex(first), complex(second)


class PlaneRegion(enum.Enum):
    INSIDE = "inside"  # c < 0, real parts coincide
    OUTSIDE = "outside"  # c > 0, imaginary parts coincide
    ON_RING = "on_ring"


def ring_plane_partition(frame: UnfoldingFrame3, ps: PerturbationScalars, tol: Optional[float] = None) -> PlaneRegion:
    eps2 = max(ps.epsilon_norm**2, np.finfo(float).tiny)
    if tol is None:
        tol = 1e-10 * eps2
    re_c, im_c = c_hermitian_parts(frame, ps)
    if abs(im_c) > tol:
        raise OffPlane(f"Im c = {im_c:.3e}: point is not on the ring plane")
    if abs(re_c) <= tol:
        return PlaneRegion.ON_RING
    return PlaneRegion.INSIDE if re_c < 0 else PlaneRegion.OUTSIDE


def gap_residuals(frame: UnfoldingFrame3, ps: PerturbationScalars, gap: float) -> tuple[float, float]:
    """Residuals of the constant-gap surfaces at this point.

    The first vanishes when ``|Re(lambda+ - lambda-)| == gap`` (an ellipsoid
    around the ring), the second when ``|Im(lambda+ - lambda-)| == gap``
    (a hyperboloid threading it).
    """
    re_c, im_c = c_hermitian_parts(frame, ps)
    g2 = gap * gap
    return g2 * g2 - 4 * g2 * re_c - 4 * im_c**2, g2 * g2 + 4 * g2 * re_c - 4 * im_c**2
