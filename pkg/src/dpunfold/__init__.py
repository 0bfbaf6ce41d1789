"""Asymptotic unfolding of diabolic points under complex perturbation.

Library layout:

``linalg``      exact eigensolver oracle and small-matrix helpers
``diabolic``    matrix families, diabolic points, coupling vectors
``perturb``     perturbation scalars and perturbed eigenpairs
``symmetric``   real-symmetric unfolding (sheets, D, exceptional points)
``hermitian``   Hermitian unfolding (exceptional ring, gap surfaces)
``crystal``     optic axes of absorbing chiral biaxial crystals
"""
from .crystal import DielectricModel, optic_axes, example_crystal
from .diabolic import CouplingData, DiabolicPoint, MatrixFamily, coupling_vectors
from .linalg import SymmetryClass, eig_exact, two_nonzero_eigs_trace
from .perturb import PerturbationScalars, perturbation_scalars, perturbed_eigenvalues

__version__ = "0.1.0"

__all__ = [
    "CouplingData",
    "DiabolicPoint",
    "DielectricModel",
    "MatrixFamily",
    "PerturbationScalars",
    "SymmetryClass",
    "coupling_vectors",
    "eig_exact",
    "optic_axes",
    "example_crystal",
    "perturbation_scalars",
    "perturbed_eigenvalues",
    "two_nonzero_eigs_trace",
]
