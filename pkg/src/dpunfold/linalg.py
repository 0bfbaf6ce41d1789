"""Small dense complex matrices and the exact eigensolver used as oracle.

Matrices are plain ``numpy`` arrays of complex dtype.  Nothing here is
asymptotic: these routines are the ground truth every perturbation
formula is checked against.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonConvergence, SymmetryViolation

MAX_ORACLE_DIM = 16


class SymmetryClass(enum.Enum):
    REAL_SYMMETRIC = "RealSymmetric"
    HERMITIAN = "Hermitian"
    GENERAL = "General"


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, unit norm, same order as eigenvalues
    residual: float


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square complex array, raising on bad shape."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def symmetry_defect(a: np.ndarray, cls: SymmetryClass) -> float:
    """Frobenius norm of the part of ``a`` violating ``cls``."""
    if cls is SymmetryClass.HERMITIAN:
        return float(np.linalg.norm(a - a.conj().T))
    if cls is SymmetryClass.REAL_SYMMETRIC:
        return float(np.hypot(np.linalg.norm(a - a.T), np.linalg.norm(a.imag)))
    return 0.0


def check_class(a, cls: SymmetryClass, rtol: float = 1e-12) -> np.ndarray:
    """Validate that ``a`` conforms to ``cls`` to ``rtol * ||a||_F``."""
    m = as_matrix(a)
    defect = symmetry_defect(m, cls)
    if defect > rtol * np.linalg.norm(m):
        raise SymmetryViolation(
            f"matrix is not {cls.value}: defect {defect:.3e} exceeds {rtol:g}*||A||"
        )
    return m


def eig_exact(a, cls: SymmetryClass = SymmetryClass.GENERAL, tol: float | None = None) -> EigenDecomposition:
    """Exact eigenpairs of a desk-scale matrix.

    LAPACK does the work (``eigh`` for Hermitian and real-symmetric input,
    ``eig`` otherwise); the returned residual ``max ||A v - lambda v||`` is
    checked against ``tol`` (default ``1e-12 * ||A||_F``).
    """
    m = check_class(a, cls)
    if m.shape[0] > MAX_ORACLE_DIM:
        raise DimensionMismatch(f"oracle limited to dim <= {MAX_ORACLE_DIM}, got {m.shape[0]}")
    if tol is None:
        tol = 1e-12 * max(float(np.linalg.norm(m)), np.finfo(float).tiny)
    try:
        if cls is SymmetryClass.GENERAL:
            w, v = np.linalg.eig(m)
        else:
            # symmetrize so round-off in the input cannot leak into eigh
            w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
            w = w.astype(complex)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigensolver failed: {exc}") from exc
    v = v / np.linalg.norm(v, axis=0)
    residual = float(np.max(np.linalg.norm(m @ v - v * w, axis=0)))
    if not residual <= tol:
        raise NonConvergence(f"residual {residual:.3e} above tolerance {tol:.3e}", residual)
    return EigenDecomposition(w, v, residual)


def two_nonzero_eigs_trace(a) -> tuple[complex, complex]:
    """Nonzero eigenvalue pair of a 3x3 matrix known to have a zero eigenvalue.

    With eigenvalues ``{0, l1, l2}`` the trace and the trace of the square
    determine ``l1, l2`` in closed form, so the result is exact for any
    such matrix, Hermitian or not.
    """
    m = as_matrix(a)
    if m.shape != (3, 3):
        raise DimensionMismatch(f"expected a 3x3 matrix, got {m.shape}")
    tr = np.trace(m)
    tr2 = np.trace(m @ m)
    root = np.sqrt(complex(2.0 * tr2 - tr * tr))
    return complex(tr / 2 + root / 2), complex(tr / 2 - root / 2)


def hermitian_split(da) -> tuple[np.ndarray, np.ndarray]:
    """Split ``da`` into Hermitian and anti-Hermitian parts ``(H, N)``."""
    m = as_matrix(da)
    # both parts are exactly (anti-)Hermitian; H + N recovers da to within
    # one ulp of the larger part
    return 0.5 * (m + m.conj().T), 0.5 * (m - m.conj().T)


def match_pairs(approx, exact) -> tuple[tuple[complex, complex], float]:
    """Reorder ``exact`` to best match ``approx`` (minimal total distance).

    Returns the reordered pair and the total distance.  Works for any
    equal-length sequences but is meant for the two-sheet case.
    """
    approx = list(approx)
    best = None
    for perm in itertools.permutations(exact):
        cost = sum(abs(a - e) for a, e in zip(approx, perm))
        if best is None or cost < best[1]:
            best = (tuple(perm), cost)
    return best


def unit_phase(v, rtol: float = 1e-8) -> np.ndarray:
    """Normalize ``v`` to unit norm with its first significant entry real positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    significant = np.flatnonzero(np.abs(v) > rtol)
    if significant.size:
        z = v[significant[0]]
        v = v * (abs(z) / z)
    return v


def inner(u, v) -> complex:
    """``(u, v) = sum u_i conj(v_i)``."""
    return complex(np.vdot(v, u))
