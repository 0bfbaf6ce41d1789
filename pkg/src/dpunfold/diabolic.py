"""Diabolic points of parameter-dependent matrix families.

A family ``A(p)`` with a double eigenvalue ``lambda0`` at ``p0`` splits
into two sheets under a parameter shift ``dp``.  To first order the
splitting depends only on the coupling vectors

    f_ij[k] = (dA/dp_k u_i, u_j),

built from the derivative of the family at ``p0`` and an orthonormal
basis ``u1, u2`` of the degenerate eigenspace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateDirection, DerivativeFailure, DimensionMismatch
from .linalg import SymmetryClass, as_matrix, check_class, inner, unit_phase


@dataclass(frozen=True)
class MatrixFamily:
    """Map from a real parameter vector to a square complex matrix.

    ``evaluate`` must be free of hidden mutable state.  ``derivative``, if
    given, returns ``dA/dp_k`` at ``p``; otherwise central differences with
    a step-halving self-check are used.
    """

    n_params: int
    dim: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    cls: SymmetryClass = SymmetryClass.GENERAL
    derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    fd_rtol: float = 1e-6

    def __call__(self, p) -> np.ndarray:
        p = self._params(p)
        m = as_matrix(self.evaluate(p))
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"family returned {m.shape}, expected {(self.dim, self.dim)}")
        return check_class(m, self.cls)

    def _params(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float).reshape(-1)
        if p.size != self.n_params:
            raise DimensionMismatch(f"expected {self.n_params} parameters, got {p.size}")
        return p

    def fd_step(self, p, k: int) -> float:
        return 1e-6 * max(1.0, abs(float(p[k])))

    def central_difference(self, p, k: int, h: float) -> np.ndarray:
        e = np.zeros(self.n_params)
        e[k] = h
        return (as_matrix(self.evaluate(p + e)) - as_matrix(self.evaluate(p - e))) / (2 * h)

    def deriv(self, p, k: int) -> np.ndarray:
        p = self._params(p)
        if self.derivative is not None:
            return as_matrix(self.derivative(p, k))
        h = self.fd_step(p, k)
        d_h = self.central_difference(p, k, h)
        d_half = self.central_difference(p, k, h / 2)
        scale = max(1.0, float(np.linalg.norm(d_half)))
        change = float(np.linalg.norm(d_h - d_half))
        if not change <= self.fd_rtol * scale:
            raise DerivativeFailure(
                f"d/dp_{k}: halving the step changed the derivative by {change:.3e}"
            )
        return d_half


def affine_family(a0, slopes, cls: SymmetryClass = SymmetryClass.GENERAL) -> MatrixFamily:
    """``A(p) = a0 + sum_k p_k * slopes[k]`` with exact derivatives."""
    a0 = as_matrix(a0)
    slopes = [as_matrix(b) for b in slopes]
    stack = np.array(slopes)

    return MatrixFamily(
        n_params=len(slopes),
        dim=a0.shape[0],
        evaluate=lambda p: a0 + np.tensordot(p, stack, axes=1),
        cls=cls,
        derivative=lambda p, k: slopes[k],
    )


@dataclass(frozen=True)
class DiabolicPoint:
    p0: np.ndarray
    lambda0: float
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p0", np.asarray(self.p0, dtype=float).reshape(-1))
        object.__setattr__(self, "u1", np.asarray(self.u1, dtype=complex).reshape(-1))
        object.__setattr__(self, "u2", np.asarray(self.u2, dtype=complex).reshape(-1))
        if self.u1.shape != self.u2.shape:
            raise DimensionMismatch("u1 and u2 must have the same length")

    def with_basis(self, u1, u2) -> "DiabolicPoint":
        return DiabolicPoint(self.p0, self.lambda0, u1, u2)

    def rotated(self, theta: float, phase1: float = 0.0, phase2: float = 0.0) -> "DiabolicPoint":
        """Another orthonormal basis of the same eigenspace (a gauge change)."""
        c, s = np.cos(theta), np.sin(theta)
        v1 = np.exp(1j * phase1) * (c * self.u1 + s * self.u2)
        v2 = np.exp(1j * phase2) * (-s * self.u1 + c * self.u2)
        return self.with_basis(v1, v2)


@dataclass(frozen=True)
class CouplingData:
    f11: np.ndarray
    f22: np.ndarray
    f12: np.ndarray
    f21: np.ndarray
    cls: SymmetryClass = field(default=SymmetryClass.GENERAL)

    def __post_init__(self):
        for name in ("f11", "f22", "f12", "f21"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex).reshape(-1))

    @property
    def n_params(self) -> int:
        return self.f11.size

    def forms(self, dp) -> tuple[complex, complex, complex, complex]:
        """The four linear forms ``<f_ij, dp>`` for a real shift ``dp``."""
        dp = np.asarray(dp, dtype=float).reshape(-1)
        if dp.size != self.n_params:
            raise DimensionMismatch(f"expected {self.n_params} parameters, got {dp.size}")
        return tuple(complex(np.dot(f, dp)) for f in (self.f11, self.f22, self.f12, self.f21))


def verify_diabolic(family: MatrixFamily, dp: DiabolicPoint, tol: float = 1e-10) -> bool:
    a0 = family(dp.p0)
    if dp.u1.size != a0.shape[0]:
        return False
    for u in (dp.u1, dp.u2):
        if np.linalg.norm(a0 @ u - dp.lambda0 * u) > tol:
            return False
    gram = [inner(dp.u1, dp.u1) - 1, inner(dp.u2, dp.u2) - 1, inner(dp.u1, dp.u2)]
    return all(abs(g) <= tol for g in gram)


def coupling_vectors(family: MatrixFamily, dp: DiabolicPoint) -> CouplingData:
    """``f_ij[k] = (dA/dp_k u_i, u_j)`` at ``p0``."""
    f = np.zeros((2, 2, family.n_params), dtype=complex)
    basis = (dp.u1, dp.u2)
    for k in range(family.n_params):
        d = family.deriv(dp.p0, k)
        for i in range(2):
            du = d @ basis[i]
            for j in range(2):
                f[i, j, k] = inner(du, basis[j])
    if family.cls is not SymmetryClass.GENERAL:
        # the class forces f11, f22 real; drop round-off imaginary parts
        f[0, 0] = f[0, 0].real
        f[1, 1] = f[1, 1].real
    return CouplingData(f[0, 0], f[1, 1], f[0, 1], f[1, 0], cls=family.cls)


def _pair(lambda0, s11, s22, s12, s21) -> tuple[complex, complex]:
    # shared by split_eigenvalues and perturbed_eigenvalues so that the
    # epsilon = 0 case reduces bit-for-bit
    root = np.sqrt(complex((s11 - s22) ** 2 / 4 + s12 * s21))
    mid = lambda0 + (s11 + s22) / 2
    return complex(mid + root), complex(mid - root)


def _ratio_vectors(lam, lambda0, s11, s22, s12, s21, u1, u2, tol):
    # With (u, v) = sum u_i conj(v_i) the restricted matrix is
    # [[lambda0 + s11, s21], [s12, lambda0 + s22]], so alpha/beta equals
    # s21 / (lam - lambda0 - s11) = (lam - lambda0 - s22) / s12.
    out = []
    for lm in lam:
        # two equivalent forms of alpha/beta; keep the better conditioned one
        first = np.array([s21, lm - lambda0 - s11])
        second = np.array([lm - lambda0 - s22, s12])
        ab = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
        if np.linalg.norm(ab) < tol:
            raise DegenerateDirection("both ratio forms are 0/0; the shift keeps the point diabolic")
        out.append(unit_phase(ab[0] * u1 + ab[1] * u2))
    return tuple(out)


def split_eigenvalues(cd: CouplingData, dp: DiabolicPoint, delta_p) -> tuple[complex, complex]:
    """First-order eigenvalue pair ``(lambda+, lambda-)`` at ``p0 + delta_p``.

    The sign labels follow the principal branch of the square root.
    """
    s11, s22, s12, s21 = cd.forms(delta_p)
    return _pair(dp.lambda0, s11, s22, s12, s21)


def split_eigenvectors(cd: CouplingData, dp: DiabolicPoint, delta_p, tol: float = 1e-14):
    s = cd.forms(delta_p)
    lam = _pair(dp.lambda0, *s)
    return _ratio_vectors(lam, dp.lambda0, *s, dp.u1, dp.u2, tol)
