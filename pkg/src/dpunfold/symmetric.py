"""Unfolding of a real-symmetric diabolic point under complex perturbation.

In the frame ``x = <f11 - f22, dp>/2``, ``y = <f12, dp>`` the perturbed
eigenvalues are ``lambda0' + mu +- sqrt(c)`` with

    c = (x + xi)^2 + (y + eta)^2 - zeta^2.

Everything here is a closed-form function of that frame and the
perturbation scalars.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diabolic import CouplingData, DiabolicPoint
from .errors import (
    ClassMismatch,
    DegenerateD,
    DegenerateLine,
    DimensionMismatch,
    NearZeroRec,
    NegativeD,
    RealnessViolated,
    SingularFrame,
)
from .linalg import SymmetryClass
from .perturb import PerturbationScalars


@dataclass(frozen=True)
class UnfoldingFrame2:
    lambda0_prime: float
    x: float
    y: float
    g_x: np.ndarray
    g_y: np.ndarray
    p: Optional[np.ndarray] = None


@dataclass(frozen=True)
class SheetSample:
    p: Optional[np.ndarray]
    re_plus: float
    re_minus: float
    im_plus: float
    im_minus: float
    re_c: float
    im_c: float

    @property
    def plus(self) -> complex:
        return complex(self.re_plus, self.im_plus)

    @property
    def minus(self) -> complex:
        return complex(self.re_minus, self.im_minus)


class Regime(enum.Enum):
    CHIRALITY_DOMINATED = "ChiralityDominated"
    DEGENERATE = "Degenerate"
    ABSORPTION_DOMINATED = "AbsorptionDominated"


@dataclass(frozen=True)
class ClassificationReport:
    D: float
    im_xi: float
    im_eta: float
    im_zeta: float
    regime: Regime


@dataclass(frozen=True)
class ExceptionalPair:
    xy_a: tuple[float, float]
    xy_b: tuple[float, float]
    p_a: np.ndarray
    p_b: np.ndarray
    # for n > 2 every p_a + null_space @ t is an exceptional point too
    null_space: np.ndarray = field(default_factory=lambda: np.zeros((2, 0)))


def _real_gauge_vectors(cd: CouplingData):
    if cd.cls is not SymmetryClass.REAL_SYMMETRIC:
        raise ClassMismatch(f"two-parameter frame needs a real-symmetric family, got {cd.cls.value}")
    return ((cd.f11 - cd.f22) / 2).real, cd.f12.real


def frame2(cd: CouplingData, dp: DiabolicPoint, delta_p) -> UnfoldingFrame2:
    g_x, g_y = _real_gauge_vectors(cd)
    delta_p = np.asarray(delta_p, dtype=float).reshape(-1)
    if delta_p.size != cd.n_params:
        raise DimensionMismatch(f"expected {cd.n_params} parameters, got {delta_p.size}")
    lam = dp.lambda0 + float(np.dot((cd.f11 + cd.f22).real, delta_p)) / 2
    return UnfoldingFrame2(lam, float(g_x @ delta_p), float(g_y @ delta_p), g_x, g_y, dp.p0 + delta_p)


def c_value(frame: UnfoldingFrame2, ps: PerturbationScalars) -> complex:
    return (frame.x + ps.xi) ** 2 + (frame.y + ps.eta) ** 2 - ps.zeta**2


def c_parts(frame: UnfoldingFrame2, ps: PerturbationScalars) -> tuple[float, float]:
    """``(Re c, Im c)`` expanded in real and imaginary parts of the scalars."""
    xi, eta, zeta = ps.xi, ps.eta, ps.zeta
    xr, yr = frame.x + xi.real, frame.y + eta.real
    re_c = (zeta.imag**2 - xi.imag**2 - eta.imag**2 - zeta.real**2) + xr**2 + yr**2
    im_c = 2 * (xr * xi.imag + yr * eta.imag - zeta.real * zeta.imag)
    return re_c, im_c


def _sheet_roots(re_c: float, im_c: float) -> tuple[float, float]:
    modulus = np.hypot(re_c, im_c)
    return np.sqrt(max(re_c + modulus, 0.0) / 2), np.sqrt(max(modulus - re_c, 0.0) / 2)


def sheets(frame: UnfoldingFrame2, ps: PerturbationScalars) -> SheetSample:
    """Real and imaginary eigenvalue sheets at one frame point.

    The square roots of the real and imaginary sheets carry equal signs
    when ``Im c >= 0`` and opposite signs when ``Im c < 0`` so that each
    (re, im) pair is one analytic eigenvalue.
    """
    re_c, im_c = c_parts(frame, ps)
    r, i = _sheet_roots(re_c, im_c)
    sign = 1.0 if im_c >= 0 else -1.0
    base = frame.lambda0_prime + ps.mu.real
    return SheetSample(
        p=frame.p,
        re_plus=base + r,
        re_minus=base - r,
        im_plus=ps.mu.imag + sign * i,
        im_minus=ps.mu.imag - sign * i,
        re_c=re_c,
        im_c=im_c,
    )


def sheet_approx_near_intersection(frame: UnfoldingFrame2, ps: PerturbationScalars, guard: float = 1e-8):
    """Approximate sheets close to the lines where they are glued.

    For ``Re c < 0`` returns ``(Re lambda+, Re lambda-)``; for ``Re c > 0``
    returns ``(Im lambda+, Im lambda-)``.  Valid while ``|Im c| << |Re c|``.
    """
    re_c, im_c = c_parts(frame, ps)
    if abs(re_c) < guard:
        raise NearZeroRec(f"|Re c| = {abs(re_c):.3e} below guard {guard:g}")
    if re_c < 0:
        off = im_c / 2 * np.sqrt(-1 / re_c)
        base = frame.lambda0_prime + ps.mu.real
    else:
        off = im_c / 2 * np.sqrt(1 / re_c)
        base = ps.mu.imag
    return base + off, base - off


def im_sheet_angle(frame: UnfoldingFrame2, ps: PerturbationScalars, guard: float = 1e-300) -> float:
    """Angle between the tangent planes of the two imaginary sheets.

    On the line ``Im c = 0, Re c > 0`` the imaginary sheets cross; the
    angle is about ``|grad Im c| / sqrt(Re c)``, so of order ``eps`` away from
    the exceptional points, and tends to ``pi`` as they are approached.
    Gradients are taken in the parameters ``p``.
    """
    c = c_value(frame, ps)
    if c.real <= guard:
        raise NearZeroRec(f"Re c = {c.real:.3e}: the imaginary sheets do not cross here")
    grad_c = 2 * (frame.x + ps.xi) * frame.g_x + 2 * (frame.y + ps.eta) * frame.g_y
    slope = float(np.linalg.norm((grad_c / (2 * np.sqrt(c))).imag))
    return 2 * float(np.arctan(slope))


def classify(ps: PerturbationScalars, rtol: float = 1e-14) -> ClassificationReport:
    im_xi, im_eta, im_zeta = ps.xi.imag, ps.eta.imag, ps.zeta.imag
    d = im_xi**2 + im_eta**2 - im_zeta**2
    if abs(d) <= rtol * ps.epsilon_norm**2:
        regime = Regime.DEGENERATE
    elif d > 0:
        regime = Regime.ABSORPTION_DOMINATED
    else:
        regime = Regime.CHIRALITY_DOMINATED
    return ClassificationReport(d, im_xi, im_eta, im_zeta, regime)


def exceptional_xy(ps: PerturbationScalars) -> tuple[tuple[float, float], tuple[float, float]]:
    """The two frame points where ``c = 0`` (requires ``D > 0``)."""
    report = classify(ps)
    if report.regime is Regime.CHIRALITY_DOMINATED:
        raise NegativeD(f"D = {report.D:.6e} < 0: no real exceptional points")
    if report.regime is Regime.DEGENERATE:
        raise DegenerateD(f"D = {report.D:.6e} ~ 0: the exceptional points coincide")
    xi, eta, zeta = ps.xi, ps.eta, ps.zeta
    s = xi.imag**2 + eta.imag**2
    root = np.sqrt((s + zeta.real**2) * report.D)
    common = zeta.real * zeta.imag
    x = [(xi.imag * common + sign * eta.imag * root) / s - xi.real for sign in (1, -1)]
    y = [(eta.imag * common - sign * xi.imag * root) / s - eta.real for sign in (1, -1)]
    return (x[0], y[0]), (x[1], y[1])


def invert_frame2(cd: CouplingData, xy) -> tuple[np.ndarray, np.ndarray]:
    """Parameter shift(s) reaching frame point ``(x, y)``.

    Returns a particular solution and a basis of the null space (empty for
    two parameters).
    """
    g_x, g_y = _real_gauge_vectors(cd)
    x, y = xy
    if cd.n_params == 2:
        a = 2 * g_x  # = f11 - f22
        b = g_y  # = f12
        den = b[0] * a[1] - b[1] * a[0]
        if abs(den) <= 1e-14 * np.linalg.norm(a) * np.linalg.norm(b):
            raise SingularFrame("f11 - f22 and f12 are linearly dependent")
        shift = np.array([-(2 * b[1] * x - a[1] * y) / den, (2 * b[0] * x - a[0] * y) / den])
        return shift, np.zeros((2, 0))
    g = np.vstack([g_x, g_y])
    u, sv, vt = np.linalg.svd(g)
    if sv.size < 2 or sv[-1] <= 1e-14 * sv[0]:
        raise SingularFrame("frame vectors are linearly dependent")
    shift = np.linalg.lstsq(g, np.array([x, y]), rcond=None)[0]
    return shift, vt[2:].T


def exceptional_points(cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars) -> ExceptionalPair:
    xy_a, xy_b = exceptional_xy(ps)
    shift_a, null = invert_frame2(cd, xy_a)
    shift_b, _ = invert_frame2(cd, xy_b)
    return ExceptionalPair(xy_a, xy_b, dp.p0 + shift_a, dp.p0 + shift_b, null)


@dataclass(frozen=True)
class LocusSegment:
    kind: str  # "re_coincidence" (branch cut) or "im_coincidence"
    start: np.ndarray
    end: np.ndarray


@dataclass(frozen=True)
class BranchLocus:
    """The line ``Im c = 0`` in a two-parameter plane.

    ``normal . p = offset`` describes the line; ``segments`` cover its part
    inside the requested window.
    """

    point: np.ndarray
    direction: np.ndarray
    normal: np.ndarray
    offset: float
    segments: list[LocusSegment]
    exceptional: Optional[ExceptionalPair] = None


def _clip_line(point, direction, lo, hi):
    t0, t1 = -np.inf, np.inf
    for k in range(2):
        if abs(direction[k]) < 1e-300:
            if not lo[k] <= point[k] <= hi[k]:
                return None
            continue
        a = (lo[k] - point[k]) / direction[k]
        b = (hi[k] - point[k]) / direction[k]
        t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
    if t0 > t1:
        return None
    return t0, t1


def branch_locus(cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars, window) -> BranchLocus:
    """Line where ``Im c = 0`` inside ``window = (lo, hi)`` and where the sheets glue there.

    For ``D > 0`` the segment between the exceptional points glues the real
    sheets (branch cut) and the rest glues the imaginary sheets; otherwise
    the whole line glues the imaginary sheets.
    """
    if cd.n_params != 2:
        raise DimensionMismatch("branch locus is a line only for two parameters")
    g_x, g_y = _real_gauge_vectors(cd)
    xi, eta, zeta = ps.xi, ps.eta, ps.zeta
    normal = xi.imag * g_x + eta.imag * g_y
    scale = max(np.linalg.norm(g_x), np.linalg.norm(g_y)) * max(ps.epsilon_norm, 1e-300)
    if np.linalg.norm(normal) <= 1e-12 * scale:
        raise DegenerateLine("Im xi and Im eta vanish: Im c is constant")
    rhs = zeta.real * zeta.imag - xi.real * xi.imag - eta.real * eta.imag
    offset = float(normal @ dp.p0 + rhs)
    nn = float(normal @ normal)
    point = dp.p0 + normal * (rhs / nn)
    direction = np.array([-normal[1], normal[0]]) / np.sqrt(nn)

    lo, hi = (np.asarray(w, dtype=float) for w in window)
    clip = _clip_line(point, direction, lo, hi)
    pair = None
    if classify(ps).regime is Regime.ABSORPTION_DOMINATED:
        pair = exceptional_points(cd, dp, ps)
    segments: list[LocusSegment] = []
    if clip is not None:
        t0, t1 = clip
        at = lambda t: point + t * direction
        if pair is None:
            segments.append(LocusSegment("im_coincidence", at(t0), at(t1)))
        else:
            ta, tb = sorted(float((q - point) @ direction) for q in (pair.p_a, pair.p_b))
            pieces = [
                ("im_coincidence", t0, min(t1, ta)),
                ("re_coincidence", max(t0, ta), min(t1, tb)),
                ("im_coincidence", max(t0, tb), t1),
            ]
            segments = [LocusSegment(k, at(a), at(b)) for k, a, b in pieces if a < b]
    return BranchLocus(point, direction, normal, offset, segments, pair)


class Region(enum.Enum):
    INSIDE = "inside"  # c < 0: complex-conjugate pair, real parts coincide
    OUTSIDE = "outside"  # c > 0: two real eigenvalues
    ON_RING = "on_ring"


@dataclass(frozen=True)
class RealSample:
    region: Region
    c: float
    re_plus: float
    re_minus: float
    im_plus: float
    im_minus: float


class RealPerturbationSurface:
    """Eigenvalue surfaces of a real-symmetric family under a real perturbation.

    Here ``c`` is real: inside the ellipse ``c < 0`` the eigenvalues form a
    complex-conjugate pair with a common real part (the disk and the
    bubble), outside they are real (the hyperboloid and the plane), and on
    the ellipse itself they coalesce into an exceptional ring.
    """

    def __init__(self, cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars, tol: Optional[float] = None):
        scale = max(1.0, ps.epsilon_norm)
        for name in ("mu", "xi", "eta", "zeta"):
            if abs(getattr(ps, name).imag) > 1e-14 * scale:
                raise RealnessViolated(f"{name} = {getattr(ps, name)} is not real")
        _real_gauge_vectors(cd)
        self.cd, self.dp = cd, dp
        self.mu, self.xi, self.eta, self.zeta = (getattr(ps, n).real for n in ("mu", "xi", "eta", "zeta"))
        self.tol = 1e-10 * max(1.0, ps.epsilon_norm**2) if tol is None else tol
        self._ps = ps

    def c(self, frame: UnfoldingFrame2) -> float:
        return (frame.x + self.xi) ** 2 + (frame.y + self.eta) ** 2 - self.zeta**2

    def at_frame(self, frame: UnfoldingFrame2) -> RealSample:
        c = self.c(frame)
        base = frame.lambda0_prime + self.mu
        if abs(c) <= self.tol:
            return RealSample(Region.ON_RING, c, base, base, 0.0, 0.0)
        if c > 0:
            r = np.sqrt(c)
            return RealSample(Region.OUTSIDE, c, base + r, base - r, 0.0, 0.0)
        i = np.sqrt(-c)
        return RealSample(Region.INSIDE, c, base, base, i, -i)

    def __call__(self, delta_p) -> RealSample:
        return self.at_frame(frame2(self.cd, self.dp, delta_p))

    def ring_xy(self, n: int = 64) -> np.ndarray:
        """Frame points ``(x, y)`` on the exceptional ring."""
        t = 2 * np.pi * np.arange(n) / n
        r = abs(self.zeta)
        return np.column_stack([-self.xi + r * np.cos(t), -self.eta + r * np.sin(t)])

    def ring_points(self, n: int = 64) -> np.ndarray:
        """Parameter points on the exceptional ring (two-parameter families)."""
        return np.array([self.dp.p0 + invert_frame2(self.cd, xy)[0] for xy in self.ring_xy(n)])


def real_perturbation_geometry(cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars) -> RealPerturbationSurface:
    return RealPerturbationSurface(cd, dp, ps)
