"""Shared fixtures: the example crystal and synthetic diabolic families."""
from __future__ import annotations

import numpy as np
import pytest

from dpunfold.crystal import axis_coupling, axis_perturbation, optic_axis, example_crystal
from dpunfold.diabolic import DiabolicPoint, affine_family
from dpunfold.linalg import SymmetryClass

R3 = np.sqrt(3.0)


def random_unitary(rng, m, real=False):
    z = rng.normal(size=(m, m))
    if not real:
        z = z + 1j * rng.normal(size=(m, m))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, m, real=False):
    z = rng.normal(size=(m, m))
    if not real:
        z = z + 1j * rng.normal(size=(m, m))
    return (z + z.conj().T) / 2


def chordal(a: complex, b: complex) -> float:
    """Sine of the angle between the directions ``(a, 1)`` and ``(b, 1)``.

    Eigenvector ratios are compared this way: their relative difference
    diverges wherever one component of the eigenvector vanishes.
    """
    return abs(a - b) / np.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def synthetic_dp(rng, m=4, n=2, real=True, lambda0=0.3):
    """Affine family ``A0 + sum p_k B_k`` with a diabolic point at ``p0``.

    ``A0`` has the double eigenvalue ``lambda0`` on the first two columns of
    a random orthogonal (or unitary) matrix; the rest of the spectrum is
    kept well away from it.
    """
    q = random_unitary(rng, m, real=real)
    others = lambda0 + np.sign(rng.normal(size=m - 2)) * rng.uniform(1.0, 2.0, size=m - 2)
    a0 = (q * np.concatenate([[lambda0, lambda0], others])) @ q.conj().T
    p0 = rng.normal(size=n)
    slopes = [random_hermitian(rng, m, real=real) for _ in range(n)]
    a0_shifted = a0 - np.tensordot(p0, np.array(slopes), axes=1)
    cls = SymmetryClass.REAL_SYMMETRIC if real else SymmetryClass.HERMITIAN
    if real:
        a0_shifted = a0_shifted.real
        slopes = [b.real for b in slopes]
    family = affine_family(a0_shifted, slopes, cls)
    dp = DiabolicPoint(p0, lambda0, q[:, 0], q[:, 1])
    return family, dp


@pytest.fixture(scope="session")
def model():
    return example_crystal()


@pytest.fixture(scope="session")
def left(model):
    """The ``(-1/2, 0, sqrt(3)/2)`` optic axis with its closed-form data."""
    ax = optic_axis(model, "-+")
    return ax, axis_coupling(model, ax), ax.diabolic_point(), axis_perturbation(model, ax)


@pytest.fixture(scope="session")
def right(model):
    ax = optic_axis(model, "++")
    return ax, axis_coupling(model, ax), ax.diabolic_point(), axis_perturbation(model, ax)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
