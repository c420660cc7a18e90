"""Extrinsic geometry: metric, normals, shape operators, parallel families."""

import numpy as np
import pytest

from qgv import catalog
from qgv.diffcalc import SmoothMap
from qgv.errors import NormalDegenerateError, SignatureError
from qgv.hypersurface import (
    HypersurfacePatch,
    frame_batch,
    induced_metric,
    parallel_patch,
    shape_eigenvalues_batch,
    shape_operator,
    unit_normal,
)
from qgv.indefinite import mink_dot
from tests.conftest import standard_entry


class TestInducedMetric:
    def test_umbilic_closed_form(self):
        """sin^2(a) * diag(1, sinh^2 u) for the standard H^2 embedding."""
        entry = standard_entry("umbilic")
        patch = catalog.instantiate(entry)
        G = induced_metric(patch, np.array([1.0, 0.8]))
        np.testing.assert_allclose(G, np.diag([0.5, np.sinh(1.0) ** 2 / 2]), atol=1e-9)

    def test_symmetry(self, families):
        for ctx in families.values():
            for p in ctx.points[:5]:
                G = induced_metric(ctx.patch, p)
                assert np.abs(G - G.T).max() <= 1e-12

    def test_product_block_structure(self):
        """cos^2(a) g_H1 (+) sin^2(a) g_H1 for the product embedding."""
        entry = catalog.make_entry("product", 2, alpha=np.pi / 4, k=1)
        patch = catalog.instantiate(entry)
        G = induced_metric(patch, np.array([0.9, 0.5]))
        np.testing.assert_allclose(G, np.diag([np.cos(np.pi / 4) ** 2, np.sin(np.pi / 4) ** 2]),
                                   atol=1e-9)

    def test_timelike_chart_rejected(self):
        """A chart whose tangent is timelike raises SignatureError."""

        def fn(P):
            t = P[:, 0]
            return np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1)

        patch = HypersurfacePatch(SmoothMap(fn, 1, 3), 1, ref_point=np.array([0.5]))
        with pytest.raises(SignatureError):
            induced_metric(patch, np.array([0.5]))


class TestUnitNormal:
    def test_umbilic_matches_stated_normal(self):
        entry = catalog.make_entry("umbilic", 2, alpha=np.pi / 5)
        patch = catalog.instantiate(entry)
        p = np.array([0.7, 1.1])
        b = unit_normal(patch, p)
        np.testing.assert_allclose(b.coords, catalog.golden_normal(entry, p), atol=1e-10)

    def test_product_matches_stated_normal(self):
        entry = catalog.make_entry("product", 3, alpha=np.pi / 3, k=1)
        patch = catalog.instantiate(entry)
        p = np.array([0.7, 0.5, 1.1])
        b = unit_normal(patch, p)
        np.testing.assert_allclose(b.coords, catalog.golden_normal(entry, p), atol=1e-10)

    def test_rotation_pm_matches_stated_normal(self):
        entry = standard_entry("rotation_sig_plus_minus")
        patch = catalog.instantiate(entry)
        p = np.array([0.9, 0.6])
        b = unit_normal(patch, p)
        np.testing.assert_allclose(b.coords, catalog.golden_normal(entry, p), atol=1e-10)

    def test_frame_invariants_all_families(self, families):
        """<a,a> = <b,b> = -1 and <a,b> = <b,da> = 0 within 1e-8 on 20 points."""
        for ctx in families.values():
            a, T, b = frame_batch(ctx.patch, ctx.points)
            assert np.abs(mink_dot(a, a, 2) + 1).max() <= 1e-8
            assert np.abs(mink_dot(b, b, 2) + 1).max() <= 1e-8
            assert np.abs(mink_dot(a, b, 2)).max() <= 1e-8
            eta = np.array([-1.0, -1.0, 1.0, 1.0])
            assert np.abs(np.einsum("mdi,d,md->mi", T, eta, b)).max() <= 1e-8

    def test_degenerate_input_rejected(self):
        def fn(P):
            out = np.zeros((P.shape[0], 3))
            out[:, 0] = 1.0
            return out

        patch = HypersurfacePatch(SmoothMap(fn, 1, 3), 1, ref_point=np.array([0.5]))
        with pytest.raises(NormalDegenerateError):
            frame_batch(patch, np.array([[0.5]]))


class TestShapeOperator:
    def test_umbilic_all_cot_alpha(self):
        for alpha in (np.pi / 4, np.pi / 3, 2.0):
            entry = catalog.make_entry("umbilic", 2, alpha=alpha)
            sd = shape_operator(catalog.instantiate(entry), np.array([0.8, 0.9]))
            np.testing.assert_allclose(sd.principal_curvatures, 1 / np.tan(alpha), atol=1e-9)

    def test_product_two_branches(self):
        entry = catalog.make_entry("product", 3, alpha=np.pi / 3, k=1)
        sd = shape_operator(catalog.instantiate(entry), np.array([0.8, 0.9, 0.4]))
        np.testing.assert_allclose(
            np.sort(sd.principal_curvatures),
            np.sort([-np.tan(np.pi / 3), 1 / np.tan(np.pi / 3), 1 / np.tan(np.pi / 3)]),
            atol=1e-9,
        )

    def test_rotation_constant_profile(self):
        """g = 1/2 profile: branch values 1/sqrt(3) and -sqrt(3)."""
        entry = standard_entry("rotation_sig_plus_minus")
        sd = shape_operator(catalog.instantiate(entry), np.array([0.7, 1.0]))
        np.testing.assert_allclose(np.sort(sd.principal_curvatures),
                                   [-np.sqrt(3), 1 / np.sqrt(3)], atol=1e-9)

    def test_self_adjointness(self, families):
        for ctx in families.values():
            for p in ctx.points[:5]:
                sd = shape_operator(ctx.patch, p)
                K = sd.metric @ sd.shape
                assert np.abs(K - K.T).max() <= 1e-7

    def test_directions_are_metric_orthonormal(self, families):
        ctx = families["rotation_sig_minus_minus"]
        sd = shape_operator(ctx.patch, ctx.points[0])
        V, G = sd.principal_directions, sd.metric
        assert np.abs(V.T @ G @ V - np.eye(2)).max() <= 1e-10

    def test_curvature_constant_along_rotation_directions(self, families):
        """e_i(lambda_j) = 0 across the rotation orbit directions, 1e-5."""
        for fid in catalog.ROTATION_IDS:
            ctx = families[fid]
            p = ctx.points[0]
            h = 5e-3
            vals = []
            for off in (-2, -1, 1, 2):
                q = p.copy()
                q[1] += off * h
                vals.append(shape_eigenvalues_batch(ctx.patch, q[None, :])[0])
            w = np.array([1.0, -8.0, 8.0, -1.0]) / (12 * h)
            dlam = np.einsum("s,sj->j", w, np.array(vals))
            assert np.abs(dlam).max() <= 1e-5


class TestParallelPatch:
    def test_zero_shift_is_identity(self, families):
        ctx = families["umbilic"]
        pp = parallel_patch(ctx.patch, 0.0)
        p = ctx.points[0]
        np.testing.assert_allclose(pp.chart(p), ctx.patch.chart(p), atol=1e-14)

    def test_umbilic_family_shifts_alpha(self):
        """Parallel displacement of the umbilic family shifts alpha by -t."""
        alpha, t = np.pi / 3, 0.25
        patch = catalog.instantiate(catalog.make_entry("umbilic", 2, alpha=alpha))
        shifted = catalog.instantiate(catalog.make_entry("umbilic", 2, alpha=alpha - t))
        pp = parallel_patch(patch, t)
        p = np.array([0.8, 0.6])
        np.testing.assert_allclose(pp.chart(p), shifted.chart(p), atol=1e-10)

    def test_roundtrip(self, families):
        """parallel(parallel(a, t), -t) reproduces the chart to 1e-9."""
        for ctx in families.values():
            pp = parallel_patch(ctx.patch, 0.3)
            back = parallel_patch(pp, -0.3)
            p = ctx.points[1]
            assert np.abs(back.chart(p) - ctx.patch.chart(p)).max() <= 1e-9

    def test_normal_of_parallel_patch(self, families):
        """b' = -sin(t) a + cos(t) b with the inherited orientation."""
        ctx = families["product"]
        t = 0.4
        pp = parallel_patch(ctx.patch, t)
        p = ctx.points[2]
        a, _, b = frame_batch(ctx.patch, p[None, :])
        b_new = unit_normal(pp, p).coords
        np.testing.assert_allclose(b_new, -np.sin(t) * a[0] + np.cos(t) * b[0], atol=1e-9)

    def test_degenerate_shift_rejected(self):
        """cot(t) hitting a principal curvature degenerates the metric."""
        patch = catalog.instantiate(catalog.make_entry("umbilic", 2, alpha=np.pi / 4))
        with pytest.raises(SignatureError):
            parallel_patch(patch, np.pi / 4)
