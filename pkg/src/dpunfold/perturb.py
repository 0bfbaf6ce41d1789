"""Complex perturbation ``A(p) + dA(p)`` of a family near a diabolic point.

Only ``dA(p0)`` enters the leading-order theory, through the scalars
``eps_ij = (dA(p0) u_i, u_j)`` and their combinations ``mu, xi, eta, zeta``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diabolic import CouplingData, DiabolicPoint, MatrixFamily, _pair, _ratio_vectors
from .errors import DimensionMismatch
from .linalg import as_matrix, hermitian_split, inner


@dataclass(frozen=True)
class PerturbationScalars:
    eps11: complex
    eps12: complex
    eps21: complex
    eps22: complex
    epsilon_norm: float = 0.0

    @classmethod
    def zero(cls) -> "PerturbationScalars":
        return cls(0j, 0j, 0j, 0j, 0.0)

    @property
    def mu(self) -> complex:
        return (self.eps11 + self.eps22) / 2

    @property
    def xi(self) -> complex:
        return (self.eps11 - self.eps22) / 2

    @property
    def eta(self) -> complex:
        return (self.eps12 + self.eps21) / 2

    @property
    def zeta(self) -> complex:
        return (self.eps12 - self.eps21) / 2

    def scaled(self, t: float) -> "PerturbationScalars":
        return PerturbationScalars(
            t * self.eps11, t * self.eps12, t * self.eps21, t * self.eps22, abs(t) * self.epsilon_norm
        )


def perturbation_scalars(da0, dp: DiabolicPoint) -> PerturbationScalars:
    """Project ``dA(p0)`` onto the degenerate eigenspace."""
    da0 = as_matrix(da0)
    if da0.shape[0] != dp.u1.size:
        raise DimensionMismatch(f"perturbation is {da0.shape}, eigenvectors have length {dp.u1.size}")
    u = (dp.u1, dp.u2)
    e = [[inner(da0 @ u[i], u[j]) for j in range(2)] for i in range(2)]
    return PerturbationScalars(e[0][0], e[0][1], e[1][0], e[1][1], float(np.linalg.norm(da0)))


def perturbation_scalars_from_family(da: MatrixFamily, dp: DiabolicPoint) -> PerturbationScalars:
    return perturbation_scalars(da.evaluate(dp.p0), dp)


def _shifted_forms(cd: CouplingData, ps: PerturbationScalars, delta_p):
    s11, s22, s12, s21 = cd.forms(delta_p)
    return s11 + ps.eps11, s22 + ps.eps22, s12 + ps.eps12, s21 + ps.eps21


def perturbed_eigenvalues(cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars, delta_p):
    """Leading-order complex eigenvalue pair of ``A + dA`` at ``p0 + delta_p``."""
    return _pair(dp.lambda0, *_shifted_forms(cd, ps, delta_p))


def perturbed_eigenvectors(cd, dp, ps, delta_p, tol: float = 1e-14):
    """Zero-order eigenvectors ``(u+, u-)``; they coincide at an exceptional point."""
    s = _shifted_forms(cd, ps, delta_p)
    lam = _pair(dp.lambda0, *s)
    return _ratio_vectors(lam, dp.lambda0, *s, dp.u1, dp.u2, tol)


def eigenvector_ratios(cd, dp, ps, delta_p):
    """Both forms of ``alpha/beta`` for each sheet, ``((r1+, r2+), (r1-, r2-))``.

    Division by zero yields ``inf`` or ``nan`` rather than raising.
    """
    s11, s22, s12, s21 = _shifted_forms(cd, ps, delta_p)
    lam = _pair(dp.lambda0, s11, s22, s12, s21)
    with np.errstate(divide="ignore", invalid="ignore"):
        return tuple(
            (
                np.complex128(s21) / np.complex128(lm - dp.lambda0 - s11),
                np.complex128(lm - dp.lambda0 - s22) / np.complex128(s12),
            )
            for lm in lam
        )


def dp_persistence_residual(cd: CouplingData, ps: PerturbationScalars, delta_p) -> float:
    """Largest of the three quantities that must vanish for the point to stay diabolic."""
    s11, s22, s12, s21 = cd.forms(delta_p)
    return max(abs(s12 + ps.eps12), abs(s21 + ps.eps21), abs(s11 - s22 + ps.eps11 - ps.eps22))


def persistence_tolerance(cd: CouplingData, ps: PerturbationScalars, delta_p) -> float:
    f_norm = max(np.linalg.norm(f) for f in (cd.f11, cd.f22, cd.f12, cd.f21))
    return 1e-10 * (f_norm * np.linalg.norm(delta_p) + ps.epsilon_norm)


def part_contributions(da0, dp: DiabolicPoint) -> tuple[float, float, float]:
    """``(Im xi, Im eta, Im zeta)`` from the Hermitian/anti-Hermitian split.

    The first two come from the anti-Hermitian part only, the last from the
    Hermitian part only.  Meaningful for real eigenvectors ``u1, u2``.
    """
    h, n = hermitian_split(da0)
    u1, u2 = dp.u1, dp.u2
    im_xi = (inner(n @ u1, u1) - inner(n @ u2, u2)) / 2j
    im_eta = (inner(n @ u1, u2) + inner(n @ u2, u1)) / 2j
    im_zeta = (inner(h @ u1, u2) - inner(h @ u2, u1)) / 2j
    return float(im_xi.real), float(im_eta.real), float(im_zeta.real)


def reduced_matrix(cd: CouplingData, dp: DiabolicPoint, ps: PerturbationScalars, delta_p) -> np.ndarray:
    """2x2 restriction of ``A + dA`` to the degenerate eigenspace, to first order.

    Its exact eigenvalues are what ``perturbed_eigenvalues`` returns.
    """
    s11, s22, s12, s21 = _shifted_forms(cd, ps, delta_p)
    return np.array([[dp.lambda0 + s11, s21], [s12, dp.lambda0 + s22]], dtype=complex)
