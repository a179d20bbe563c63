"""Jacobi operators, spectrum clustering, and the constancy test."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from weylgeom.curvature_algebra import (
    a_phi,
    complex_space_form_act,
    r0,
    random_act,
    weyl_decompose,
)
from weylgeom.models import standard_phi
from weylgeom.spectral import (
    SpectralProfile,
    complement_basis,
    jacobi_operator,
    osserman_test,
    reduced_jacobi,
    spectral_profile,
    structured_directions,
    trace_check,
    unit_directions,
)
from weylgeom.tensor_core import InnerProduct, max_abs


def basis_vector(m, i):
    x = np.zeros(m)
    x[i] = 1.0
    return x


class TestJacobiOperator:
    def setup_method(self):
        self.g4 = InnerProduct.euclidean(4)
        self.g5 = InnerProduct.euclidean(5)

    def test_sphere_gives_complement_projection(self):
        j = jacobi_operator(r0(self.g5), basis_vector(5, 0))
        assert_allclose(j, np.diag([0.0, 1.0, 1.0, 1.0, 1.0]), atol=1e-14)

    def test_annihilates_own_direction(self):
        for seed in range(3):
            a = random_act(seed, 5)
            x = unit_directions(5, 1, seed=seed, include_structured=False)[0]
            assert np.abs(jacobi_operator(a, x) @ x).max() <= 1e-12

    def test_self_adjoint(self):
        a = random_act(11, 6)
        x = unit_directions(6, 1, seed=0, include_structured=False)[0]
        j = jacobi_operator(a, x)
        assert max_abs(j - j.T) <= 1e-12

    def test_quadratic_homogeneity(self):
        a = random_act(1, 4)
        x = basis_vector(4, 2)
        assert_allclose(jacobi_operator(a, 3.0 * x), 9.0 * jacobi_operator(a, x))

    def test_complex_generator_eigenvector(self):
        # The rotated direction carries the triple eigenvalue.
        phi = standard_phi(4)
        x = basis_vector(4, 0)
        j = jacobi_operator(a_phi(phi, self.g4), x)
        assert_allclose(j @ (phi.matrix @ x), 3.0 * (phi.matrix @ x), atol=1e-14)

    def test_requires_orthonormal_frame(self):
        g = InnerProduct(np.diag([4.0, 1.0, 1.0, 1.0]))
        with pytest.raises(ValueError, match="orthonormal"):
            jacobi_operator(r0(g), np.array([0.5, 0.0, 0.0, 0.0]))


class TestComplementBasis:
    def test_column_geometry(self):
        x = unit_directions(5, 1, seed=4, include_structured=False)[0]
        b = complement_basis(x)
        assert b.shape == (5, 4)
        assert max_abs(b.T @ b - np.eye(4)) <= 1e-14
        assert np.abs(b.T @ x).max() <= 1e-14

    def test_negative_leading_component(self):
        x = np.array([-1.0, 0.0, 0.0])
        b = complement_basis(x)
        assert max_abs(b.T @ b - np.eye(2)) <= 1e-14
        assert np.abs(b.T @ x).max() <= 1e-14

    def test_deterministic(self):
        x = unit_directions(6, 1, seed=8, include_structured=False)[0]
        assert_allclose(complement_basis(x), complement_basis(x))


class TestReducedJacobi:
    def test_sphere_is_identity(self):
        for m in (3, 5, 8):
            g = InnerProduct.euclidean(m)
            x = unit_directions(m, 1, seed=m, include_structured=False)[0]
            assert_allclose(reduced_jacobi(r0(g), x), np.eye(m - 1), atol=1e-12)

    def test_complex_space_form_weyl_spectrum(self):
        # m=8: one eigenvalue at 18/7, six at -3/7, independent of x.
        g = InnerProduct.euclidean(8)
        w = weyl_decompose(complex_space_form_act(1.0, 1.0, standard_phi(8))).w
        for x in unit_directions(8, 3, seed=2, include_structured=False):
            eig = np.sort(np.linalg.eigvalsh(reduced_jacobi(w, x)))
            expect = np.array([-3.0 / 7.0] * 6 + [18.0 / 7.0])
            assert_allclose(eig, expect, atol=1e-12)

    def test_rejects_non_unit_direction(self):
        with pytest.raises(ValueError, match="unit"):
            reduced_jacobi(r0(InnerProduct.euclidean(4)), np.array([0.5, 0.0, 0.0, 0.0]))


class TestSpectralProfile:
    def test_merges_close_eigenvalues(self):
        p = spectral_profile(np.diag([1.0000001, 0.9999999, 4.0]))
        assert p.clusters == ((1.0, 2), (4.0, 1))
        assert p.values == (1.0, 4.0)
        assert p.multiplicities == (2, 1)
        assert p.dim == 4
        assert 0 < p.spread < 3e-7

    def test_identity_is_one_cluster(self):
        p = spectral_profile(np.eye(5))
        assert p.clusters == ((1.0, 5),)
        assert p.spread == 0.0

    def test_tight_tolerance_splits(self):
        mat = np.diag([1.0, 1.0 + 1e-5, 4.0])
        assert len(spectral_profile(mat, cluster_tol=1e-3).clusters) == 2
        assert len(spectral_profile(mat, cluster_tol=1e-7).clusters) == 3

    def test_threshold_is_relative_to_scale(self):
        # Same gap, 1000x the magnitude: the relative threshold merges it.
        mat = np.diag([1000.0, 1000.0 + 1e-5, 4000.0])
        assert len(spectral_profile(mat, cluster_tol=1e-3).clusters) == 2

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="self adjoint"):
            spectral_profile(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_multiplicity_bookkeeping_enforced(self):
        with pytest.raises(ValueError, match="multiplicities"):
            SpectralProfile(((1.0, 2),), 0.0, dim=4)


class TestDirectionSampling:
    def test_structured_count_and_norms(self):
        for m in (3, 4, 6):
            dirs = structured_directions(m)
            assert dirs.shape == (m + m * (m - 1), m)
            assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-14)

    def test_structured_prefix_then_random(self):
        s = structured_directions(4)
        full = unit_directions(4, 10, seed=3)
        assert full.shape == (len(s) + 10, 4)
        assert_allclose(full[: len(s)], s)

    def test_random_only(self):
        dirs = unit_directions(5, 7, seed=1, include_structured=False)
        assert dirs.shape == (7, 5)
        assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-14)

    def test_deterministic_across_calls(self):
        a = unit_directions(6, 20, seed=9)
        b = unit_directions(6, 20, seed=9)
        assert_allclose(a, b)
        c = unit_directions(6, 20, seed=10)
        assert max_abs(a - c) > 1e-3


class TestTraceCheck:
    def test_sphere_trace_is_ricci_diagonal(self):
        assert_allclose(trace_check(r0(InnerProduct.euclidean(5))), 4.0, atol=1e-12)

    def test_weyl_parts_are_traceless(self):
        for seed, m in ((0, 4), (1, 6), (2, 7)):
            w = weyl_decompose(random_act(seed, m)).w
            assert trace_check(w) <= 1e-9

    def test_zero_tensor(self):
        from weylgeom.tensor_core import CurvatureTensor

        g = InnerProduct.euclidean(4)
        assert trace_check(CurvatureTensor(np.zeros((4,) * 4), g)) == 0.0


class TestOssermanTest:
    def test_space_forms_are_constant(self):
        for lam in (1.0, -2.0, 0.5):
            g = InnerProduct.euclidean(5)
            from weylgeom.tensor_core import CurvatureTensor

            a = CurvatureTensor(lam * r0(g).components, g)
            rep = osserman_test(a)
            assert rep.is_constant
            assert rep.max_profile_distance <= 1e-10

    def test_complex_space_form_is_constant(self):
        rep = osserman_test(complex_space_form_act(1.0, 1.0, standard_phi(8)))
        assert rep.is_constant
        assert rep.max_profile_distance <= 1e-10
        row = np.sort(rep.spectra[0])
        assert_allclose(row, [1.0] * 6 + [4.0], atol=1e-12)

    def test_generic_tensor_is_not_constant(self):
        rep = osserman_test(random_act(7, 6))
        assert not rep.is_constant
        # Pinned to protect the direction sampling and the distance metric.
        assert_allclose(rep.max_profile_distance, 2.1283790807437541, rtol=1e-12)

    def test_spectra_rows_cover_structured_and_random(self):
        rep = osserman_test(random_act(7, 6), samples=64)
        assert rep.spectra.shape == (6 + 6 * 5 + 64, 5)

    def test_rejects_tiny_sample_count(self):
        with pytest.raises(ValueError):
            osserman_test(r0(InnerProduct.euclidean(4)), samples=1)

    def test_report_is_deterministic(self):
        a = osserman_test(random_act(3, 5), seed=12)
        b = osserman_test(random_act(3, 5), seed=12)
        assert a.max_profile_distance == b.max_profile_distance
        assert_allclose(a.spectra, b.spectra)
