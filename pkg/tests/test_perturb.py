import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R3, chordal, random_hermitian, synthetic_dp
from dpunfold.crystal import exact_pair, projected_matrix
from dpunfold.diabolic import CouplingData, DiabolicPoint, coupling_vectors, split_eigenvalues, split_eigenvectors
from dpunfold.errors import DimensionMismatch
from dpunfold.linalg import inner
from dpunfold.perturb import (
    PerturbationScalars,
    dp_persistence_residual,
    eigenvector_ratios,
    part_contributions,
    perturbation_scalars,
    perturbed_eigenvalues,
    perturbed_eigenvectors,
    persistence_tolerance,
    reduced_matrix,
)
from dpunfold.symmetric import exceptional_points

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_scalars(rng, size=0.01):
    e = size * (rng.normal(size=4) + 1j * rng.normal(size=4))
    return PerturbationScalars(*e, epsilon_norm=float(np.linalg.norm(e)))


class TestPerturbationScalars:
    def test_zero_perturbation(self, left):
        _, _, dp, _ = left
        ps = perturbation_scalars(np.zeros((3, 3)), dp)
        assert (ps.eps11, ps.eps12, ps.eps21, ps.eps22, ps.epsilon_norm) == (0, 0, 0, 0, 0)

    def test_left_axis_values(self, model, left):
        ax, _, dp, closed = left
        generic = perturbation_scalars(projected_matrix(model, ax.s0, "perturbation"), dp)
        for ps in (closed, generic):
            assert ps.xi == pytest.approx(0, abs=1e-15)
            assert ps.eta == pytest.approx(1j * (2 * R3 + 1) / 400, abs=1e-15)
            assert ps.zeta == pytest.approx(-1j * (3 - R3) / 200, abs=1e-15)
            assert ps.mu == pytest.approx(0.015j, abs=1e-15)

    def test_right_axis_values(self, model, right):
        ax, _, dp, closed = right
        generic = perturbation_scalars(projected_matrix(model, ax.s0, "perturbation"), dp)
        for ps in (closed, generic):
            assert ps.eta == pytest.approx(1j * (2 * R3 - 1) / 400, abs=1e-15)
            assert ps.zeta == pytest.approx(-1j * (3 + R3) / 200, abs=1e-15)

    def test_epsilon_norm_is_frobenius(self, model, left):
        ax, _, dp, _ = left
        da = projected_matrix(model, ax.s0, "perturbation")
        assert perturbation_scalars(da, dp).epsilon_norm == pytest.approx(np.sqrt(np.sum(np.abs(da) ** 2)))

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_combination_identities(self, seed):
        ps = random_scalars(np.random.default_rng(seed))
        assert ps.mu == (ps.eps11 + ps.eps22) / 2
        assert ps.xi == (ps.eps11 - ps.eps22) / 2
        assert ps.eta == (ps.eps12 + ps.eps21) / 2
        assert ps.zeta == (ps.eps12 - ps.eps21) / 2

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_hermitian_perturbation(self, seed):
        rng = np.random.default_rng(seed)
        _, dp = synthetic_dp(rng, m=4, n=3, real=False)
        ps = perturbation_scalars(random_hermitian(rng, 4), dp)
        assert abs(ps.xi.imag) <= 1e-14 and abs(ps.eta.imag) <= 1e-14
        assert abs(ps.zeta.real) <= 1e-14

    def test_dimension_mismatch(self, left):
        with pytest.raises(DimensionMismatch):
            perturbation_scalars(np.zeros((2, 2)), left[2])


class TestPerturbedEigenvalues:
    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_reduces_to_unperturbed(self, seed):
        rng = np.random.default_rng(seed)
        fam, dp = synthetic_dp(rng, m=4, n=3, real=False)
        cd = coupling_vectors(fam, dp)
        shift = rng.normal(size=3)
        assert perturbed_eigenvalues(cd, dp, PerturbationScalars.zero(), shift) == split_eigenvalues(cd, dp, shift)
        got = perturbed_eigenvectors(cd, dp, PerturbationScalars.zero(), shift)
        want = split_eigenvectors(cd, dp, shift)
        for a, b in zip(got, want):
            np.testing.assert_array_equal(a, b)

    @given(seeds)
    @settings(max_examples=200, deadline=None)
    def test_matches_reduced_oracle_at_dp(self, seed):
        rng = np.random.default_rng(seed)
        ps = random_scalars(rng)
        lam0 = rng.uniform(-1, 1)
        dp = DiabolicPoint([0.0, 0.0], lam0, [1, 0, 0], [0, 1, 0])
        cd = CouplingData(*(np.zeros(2) for _ in range(4)))
        approx = perturbed_eigenvalues(cd, dp, ps, [0.0, 0.0])
        m = np.array([[lam0 + ps.eps11, ps.eps21], [ps.eps12, lam0 + ps.eps22]])
        exact = np.linalg.eigvals(m)
        assert sorted(approx, key=lambda z: (z.real, z.imag)) == pytest.approx(
            sorted(exact, key=lambda z: (z.real, z.imag)), abs=1e-14
        )

    @given(seeds, st.floats(min_value=0, max_value=2 * np.pi))
    @settings(max_examples=50, deadline=None)
    def test_gauge_phase_of_u2(self, seed, theta):
        rng = np.random.default_rng(seed)
        fam, dp = synthetic_dp(rng, m=4, n=3, real=False)
        da = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        shift = 0.01 * rng.normal(size=3)
        ref = perturbed_eigenvalues(coupling_vectors(fam, dp), dp, perturbation_scalars(0.01 * da, dp), shift)
        alt = dp.with_basis(dp.u1, np.exp(1j * theta) * dp.u2)
        got = perturbed_eigenvalues(coupling_vectors(fam, alt), alt, perturbation_scalars(0.01 * da, alt), shift)
        assert sorted(got, key=abs) == pytest.approx(sorted(ref, key=abs), abs=1e-14)

    def test_reduced_matrix_eigenvalues(self, left):
        _, cd, dp, ps = left
        shift = np.array([0.003, -0.002])
        got = perturbed_eigenvalues(cd, dp, ps, shift)
        w = np.linalg.eigvals(reduced_matrix(cd, dp, ps, shift))
        assert sorted(got, key=lambda z: z.real) == pytest.approx(sorted(w, key=lambda z: z.real), abs=1e-15)

    def test_gap_closes_at_exceptional_point(self, model, left):
        ax, cd, dp, _ = left
        ts = np.array([1.0, 0.5, 0.25, 0.125])
        gaps = []
        for t in ts:
            mt = model.scaled(t)
            ps = perturbation_scalars(projected_matrix(mt, ax.s0, "perturbation"), dp)
            p_a = exceptional_points(cd, dp, ps).p_a
            lp, lm = exact_pair(mt, p_a, ax.hemisphere)
            gaps.append(abs(lp - lm))
        assert np.polyfit(np.log(ts), np.log(gaps), 1)[0] > 1.0


class TestPerturbedEigenvectors:
    def test_vectors_merge_at_exceptional_point(self, left):
        _, cd, dp, ps = left
        ep = exceptional_points(cd, dp, ps)
        for p in (ep.p_a, ep.p_b):
            up, um = perturbed_eigenvectors(cd, dp, ps, p - dp.p0)
            angle = np.arccos(min(1.0, abs(inner(up, um))))
            assert angle <= 1e-6

    @given(seeds)
    @settings(max_examples=100, deadline=None)
    def test_ratio_forms_agree(self, seed):
        rng = np.random.default_rng(seed)
        fam, dp = synthetic_dp(rng, m=4, n=3, real=False)
        cd = coupling_vectors(fam, dp)
        ps = perturbation_scalars(0.01 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))), dp)
        for first, second in eigenvector_ratios(cd, dp, ps, 0.01 * rng.normal(size=3)):
            assert chordal(first, second) <= 1e-10

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_vectors_are_eigenvectors_of_reduced_matrix(self, seed):
        rng = np.random.default_rng(seed)
        fam, dp = synthetic_dp(rng, m=3, n=3, real=False)
        cd = coupling_vectors(fam, dp)
        ps = perturbation_scalars(0.01 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))), dp)
        shift = 0.01 * rng.normal(size=3)
        m = reduced_matrix(cd, dp, ps, shift)
        for u, lam in zip(perturbed_eigenvectors(cd, dp, ps, shift), perturbed_eigenvalues(cd, dp, ps, shift)):
            ab = np.array([inner(u, dp.u1), inner(u, dp.u2)])
            assert np.linalg.norm(m @ ab - lam * ab) <= 1e-12

    def test_unit_norm_and_real_leading_entry(self, left):
        _, cd, dp, ps = left
        for u in perturbed_eigenvectors(cd, dp, ps, [0.01, 0.02]):
            assert np.linalg.norm(u) == pytest.approx(1.0)
            lead = u[np.flatnonzero(np.abs(u) > 1e-8)[0]]
            assert lead.imag == pytest.approx(0, abs=1e-15) and lead.real > 0


class TestPersistence:
    def test_trivial(self, left):
        _, cd, _, _ = left
        assert dp_persistence_residual(cd, PerturbationScalars.zero(), [0.0, 0.0]) == 0

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_codimension_two_plane(self, seed):
        rng = np.random.default_rng(seed)
        fam, dp = synthetic_dp(rng, m=4, n=3, real=True)
        cd = coupling_vectors(fam, dp)
        forms = np.vstack([(cd.f11 - cd.f22).real, cd.f12.real])
        kernel = np.linalg.svd(forms)[2][-1]
        residual = dp_persistence_residual(cd, PerturbationScalars.zero(), 0.1 * kernel)
        assert residual <= 1e-14
        assert residual <= persistence_tolerance(cd, PerturbationScalars.zero(), 0.1 * kernel)

    def test_generic_perturbation_breaks_the_point(self, left):
        _, cd, dp, ps = left
        assert dp_persistence_residual(cd, ps, [0.0, 0.0]) > 1e-4


class TestPartContributions:
    def test_left_axis(self, model, left):
        ax, _, dp, _ = left
        got = part_contributions(projected_matrix(model, ax.s0, "perturbation"), dp)
        assert got == pytest.approx((0.0, (2 * R3 + 1) / 400, -(3 - R3) / 200), abs=1e-15)

    def test_hermitian_part_only(self):
        rng = np.random.default_rng(11)
        _, dp = synthetic_dp(rng, m=3, n=2, real=True)
        im_xi, im_eta, _ = part_contributions(random_hermitian(rng, 3), dp)
        assert im_xi == pytest.approx(0, abs=1e-15) and im_eta == pytest.approx(0, abs=1e-15)

    def test_anti_hermitian_part_only(self):
        rng = np.random.default_rng(12)
        _, dp = synthetic_dp(rng, m=3, n=2, real=True)
        _, _, im_zeta = part_contributions(1j * random_hermitian(rng, 3), dp)
        assert im_zeta == pytest.approx(0, abs=1e-15)

    @given(seeds)
    @settings(max_examples=100, deadline=None)
    def test_consistent_with_scalars(self, seed):
        rng = np.random.default_rng(seed)
        _, dp = synthetic_dp(rng, m=4, n=2, real=True)
        da = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        ps = perturbation_scalars(da, dp)
        assert part_contributions(da, dp) == pytest.approx((ps.xi.imag, ps.eta.imag, ps.zeta.imag), abs=1e-12)
