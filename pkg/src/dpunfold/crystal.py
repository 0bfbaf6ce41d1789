"""Optic axes of weakly absorbing, optically active biaxial crystals.

For a propagation direction ``s`` the inverse refractive index squared
``lambda = n**-2`` is a nonzero eigenvalue of ``P eta P`` with the
projector ``P = I - s s^T``.  The transparent part of ``eta`` is diagonal
and real; dichroism adds ``i * eta_d`` (real symmetric ``eta_d``) and
optical activity adds ``i * [g]_x`` with ``g = gamma s``.

Directions are parametrized by ``p = (s1, s2)`` with ``s3`` fixed by the
hemisphere sign.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diabolic import CouplingData, DiabolicPoint, MatrixFamily
from .errors import DegenerateLine, DimensionMismatch, NotBiaxial, SymmetryViolation
from .linalg import SymmetryClass, two_nonzero_eigs_trace
from .perturb import PerturbationScalars
from .symmetric import (
    ClassificationReport,
    ExceptionalPair,
    classify,
    exceptional_points,
)

WHICH = ("transparent", "perturbation", "full")
SIGN_PAIRS = ("++", "+-", "-+", "--")


def _sym3(m, dtype, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=dtype)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"{name} must be 3x3, got {m.shape}")
    if np.max(np.abs(m - m.T)) > 1e-14 * max(1.0, float(np.max(np.abs(m)))):
        raise SymmetryViolation(f"{name} tensor is not symmetric")
    return m


@dataclass(frozen=True)
class DielectricModel:
    eta_diag: tuple[float, float, float]
    dichroic: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    gamma: np.ndarray = field(default_factory=lambda: np.zeros((3, 3), dtype=complex))

    def __post_init__(self):
        eta = tuple(float(v) for v in self.eta_diag)
        if len(eta) != 3:
            raise DimensionMismatch("eta_diag needs three values")
        object.__setattr__(self, "eta_diag", eta)
        object.__setattr__(self, "dichroic", _sym3(self.dichroic, float, "dichroic"))
        object.__setattr__(self, "gamma", _sym3(self.gamma, complex, "gamma"))

    def __eq__(self, other):
        if not isinstance(other, DielectricModel):
            return NotImplemented
        return (
            self.eta_diag == other.eta_diag
            and np.array_equal(self.dichroic, other.dichroic)
            and np.array_equal(self.gamma, other.gamma)
        )

    __hash__ = None

    @property
    def is_biaxial(self) -> bool:
        e1, e2, e3 = self.eta_diag
        return e1 > e2 > e3

    def scaled(self, t: float) -> "DielectricModel":
        """Same transparent part, absorption and optical activity scaled by ``t``."""
        return DielectricModel(self.eta_diag, t * self.dichroic, t * self.gamma)

    def transparent_tensor(self) -> np.ndarray:
        return np.diag(self.eta_diag).astype(complex)

    def dichroic_tensor(self) -> np.ndarray:
        return 1j * self.dichroic

    def chiral_tensor(self, s) -> np.ndarray:
        g1, g2, g3 = self.gamma @ np.asarray(s, dtype=float)
        return 1j * np.array([[0, -g3, g2], [g3, 0, -g1], [-g2, g1, 0]], dtype=complex)


@dataclass(frozen=True)
class Direction:
    s: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float).reshape(-1)
        if s.size != 3:
            raise DimensionMismatch("direction needs three components")
        object.__setattr__(self, "s", s)

    @classmethod
    def from_params(cls, p, hemisphere: float = 1.0) -> "Direction":
        s1, s2 = (float(v) for v in p)
        rest = 1.0 - s1 * s1 - s2 * s2
        if rest < 0:
            raise ValueError(f"(s1, s2) = ({s1}, {s2}) lies outside the unit disk")
        return cls([s1, s2, np.copysign(np.sqrt(rest), hemisphere)])

    @property
    def hemisphere(self) -> float:
        return 1.0 if self.s[2] >= 0 else -1.0

    @property
    def params(self) -> np.ndarray:
        return self.s[:2].copy()


def projector(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.eye(3) - np.outer(s, s)


def projected_matrix(model: DielectricModel, s, which: str = "full") -> np.ndarray:
    """``P T P`` for the transparent tensor, the perturbation, or their sum."""
    if isinstance(s, Direction):
        s = s.s
    s = np.asarray(s, dtype=float)
    if which == "transparent":
        t = model.transparent_tensor()
    elif which == "perturbation":
        t = model.dichroic_tensor() + model.chiral_tensor(s)
    elif which == "full":
        t = model.transparent_tensor() + model.dichroic_tensor() + model.chiral_tensor(s)
    else:
        raise ValueError(f"which must be one of {WHICH}, got {which!r}")
    p = projector(s)
    return p @ t @ p


def refractive_index(lam: complex):
    """``n = lam**-1/2`` for positive real ``lam``; complex values are returned unchanged."""
    if abs(complex(lam).imag) == 0 and complex(lam).real > 0:
        return 1.0 / np.sqrt(complex(lam).real)
    return lam


@dataclass(frozen=True)
class OpticAxis:
    s0: Direction
    lambda0: float
    sign_pair: str

    @property
    def S1(self) -> float:
        return float(self.s0.s[0])

    @property
    def S3(self) -> float:
        return float(self.s0.s[2])

    @property
    def hemisphere(self) -> float:
        return self.s0.hemisphere

    @property
    def p0(self) -> np.ndarray:
        return self.s0.params

    def diabolic_point(self) -> DiabolicPoint:
        return DiabolicPoint(self.p0, self.lambda0, [0.0, 1.0, 0.0], [self.S3, 0.0, -self.S1])


def optic_axes(model: DielectricModel) -> list[OpticAxis]:
    """The four diabolic directions, ordered ``++, +-, -+, --`` by the signs of ``(S1, S3)``."""
    if not model.is_biaxial:
        raise NotBiaxial(f"need eta1 > eta2 > eta3, got {model.eta_diag}")
    e1, e2, e3 = model.eta_diag
    a1 = np.sqrt((e1 - e2) / (e1 - e3))
    a3 = np.sqrt((e2 - e3) / (e1 - e3))
    axes = []
    for pair in SIGN_PAIRS:
        sgn1 = 1.0 if pair[0] == "+" else -1.0
        sgn3 = 1.0 if pair[1] == "+" else -1.0
        axes.append(OpticAxis(Direction([sgn1 * a1, 0.0, sgn3 * a3]), e2, pair))
    return axes


def optic_axis(model: DielectricModel, sign_pair: str) -> OpticAxis:
    if sign_pair not in SIGN_PAIRS:
        raise ValueError(f"axis selector must be one of {SIGN_PAIRS}, got {sign_pair!r}")
    return optic_axes(model)[SIGN_PAIRS.index(sign_pair)]


def crystal_family(model: DielectricModel, hemisphere: float = 1.0, which: str = "transparent") -> MatrixFamily:
    """The projected matrix as a function of ``p = (s1, s2)``.

    Derivatives are central differences on the sphere chart, so the
    implied variation of ``s3`` is included.
    """
    cls = SymmetryClass.REAL_SYMMETRIC if which == "transparent" else SymmetryClass.GENERAL
    return MatrixFamily(
        n_params=2,
        dim=3,
        evaluate=lambda p: projected_matrix(model, Direction.from_params(p, hemisphere), which),
        cls=cls,
    )


def axis_coupling(model: DielectricModel, axis: OpticAxis) -> CouplingData:
    """Closed-form coupling vectors at an optic axis."""
    e1, _, e3 = model.eta_diag
    s1, s3 = axis.S1, axis.S3
    return CouplingData(
        f11=[0.0, 0.0],
        f22=[2 * (e3 - e1) * s1, 0.0],
        f12=[0.0, (e3 - e1) * s1 * s3],
        f21=[0.0, (e3 - e1) * s1 * s3],
        cls=SymmetryClass.REAL_SYMMETRIC,
    )


def axis_perturbation(model: DielectricModel, axis: OpticAxis) -> PerturbationScalars:
    """Closed-form ``eps_ij`` at an optic axis (chirality evaluated at the axis)."""
    d, g = model.dichroic, model.gamma
    s1, s3 = axis.S1, axis.S3
    eps11 = 1j * d[1, 1]
    eps22 = 1j * (d[0, 0] * s3**2 - 2 * d[0, 2] * s1 * s3 + d[2, 2] * s1**2)
    eps12 = -1j * (d[1, 2] + g[0, 0] * s1 + g[0, 2] * s3) * s1 + 1j * (d[0, 1] - g[0, 2] * s1 - g[2, 2] * s3) * s3
    eps21 = -1j * (d[1, 2] - g[0, 0] * s1 - g[0, 2] * s3) * s1 + 1j * (d[0, 1] + g[0, 2] * s1 + g[2, 2] * s3) * s3
    norm = float(np.linalg.norm(projected_matrix(model, axis.s0, "perturbation")))
    return PerturbationScalars(complex(eps11), complex(eps12), complex(eps21), complex(eps22), norm)


@dataclass(frozen=True)
class SingularAxes:
    directions: tuple[Direction, Direction]
    pair: ExceptionalPair
    valid: tuple[bool, bool]  # False when (s1, s2) left the unit disk


def singular_axes(model: DielectricModel, axis: OpticAxis) -> SingularAxes:
    """Exceptional directions ``s_a, s_b`` near an absorption-dominated optic axis."""
    ps = axis_perturbation(model, axis)
    pair = exceptional_points(axis_coupling(model, axis), axis.diabolic_point(), ps)
    e1, _, e3 = model.eta_diag
    dirs, valid = [], []
    for x, y in (pair.xy_a, pair.xy_b):
        s1 = axis.S1 + x / ((e1 - e3) * axis.S1)
        s2 = y / ((e3 - e1) * axis.S1 * axis.S3)
        rest = 1.0 - s1 * s1 - s2 * s2
        valid.append(rest >= 0)
        s3 = np.copysign(np.sqrt(max(rest, 0.0)), axis.hemisphere)
        dirs.append(Direction([s1, s2, s3]))
    return SingularAxes(tuple(dirs), pair, tuple(valid))


@dataclass(frozen=True)
class Line2:
    """``a * s1 + b * s2 = c``."""

    a: float
    b: float
    c: float

    @property
    def normal(self) -> np.ndarray:
        return np.array([self.a, self.b])

    def point(self) -> np.ndarray:
        n = self.normal
        return n * self.c / float(n @ n)

    def direction(self) -> np.ndarray:
        n = self.normal / np.linalg.norm(self.normal)
        return np.array([-n[1], n[0]])

    def residual(self, p) -> float:
        return float(self.a * p[0] + self.b * p[1] - self.c)


def singularity_line(model: DielectricModel, axis: OpticAxis) -> Line2:
    """Line ``Im c = 0`` in the ``(s1, s2)`` plane near ``axis``."""
    ps = axis_perturbation(model, axis)
    e1, _, e3 = model.eta_diag
    s1, s3 = axis.S1, axis.S3
    a = s1 * (e1 - e3) * ps.xi.imag
    b = -s1 * s3 * (e1 - e3) * ps.eta.imag
    if np.hypot(a, b) <= 1e-14 * max(ps.epsilon_norm, np.finfo(float).tiny):
        raise DegenerateLine("Im xi and Im eta vanish at this axis")
    return Line2(a, b, a * s1 + ps.zeta.real * ps.zeta.imag)


def classify_crystal(model: DielectricModel) -> dict[str, ClassificationReport]:
    return {axis.sign_pair: classify(axis_perturbation(model, axis)) for axis in optic_axes(model)}


def example_crystal(t: float = 1.0) -> DielectricModel:
    """Biaxial crystal (0.5, 0.4, 0.1) with weak absorption and chirality, scaled by ``t``."""
    dichroic = np.array([[3, 2, 0], [2, 3, 1], [0, 1, 3]]) / 200
    gamma = np.array([[3, 1, 2], [1, 3, 1], [2, 1, 3]]) / 200
    return DielectricModel((0.5, 0.4, 0.1), dichroic, gamma).scaled(t)


def full_matrix(model: DielectricModel, p, hemisphere: float = 1.0) -> np.ndarray:
    return projected_matrix(model, Direction.from_params(p, hemisphere), "full")


def exact_pair(model: DielectricModel, p, hemisphere: float = 1.0, which: str = "full") -> tuple[complex, complex]:
    return two_nonzero_eigs_trace(projected_matrix(model, Direction.from_params(p, hemisphere), which))

