"""Catalog entries, profiles, golden oracles and arc-length reparametrization."""

import numpy as np
import pytest

from qgv import catalog
from qgv.diffcalc import SmoothMap
from qgv.errors import ConstraintError, ContractViolationError, DegenerateProfileError, RegularityError
from qgv.hypersurface import shape_operator
from qgv.indefinite import mink_dot
from tests.conftest import interior_points, standard_entry


class TestEntries:
    def test_umbilic_point_value(self):
        """Direct evaluation of the standard H^2 embedding at (0.5, 1.0)."""
        entry = catalog.make_entry("umbilic", 2, alpha=np.pi / 4)
        patch = catalog.instantiate(entry)
        a = patch.chart(np.array([0.5, 1.0]))
        r = np.sqrt(2) / 2
        expect = [r, r * np.cosh(0.5), r * np.sinh(0.5) * np.cos(1.0), r * np.sinh(0.5) * np.sin(1.0)]
        np.testing.assert_allclose(a, expect, atol=1e-14)
        assert mink_dot(a, a, 2) == pytest.approx(-1, abs=1e-14)

    def test_all_entries_land_on_ads(self, families):
        for ctx in families.values():
            pts = interior_points(ctx.entry, 20, seed=5)
            a = ctx.patch.chart(pts)
            assert np.abs(mink_dot(a, a, 2) + 1).max() <= 1e-12

    def test_patch_validation(self, families):
        for ctx in families.values():
            ctx.patch.validate(ctx.points)

    def test_bad_parameters_rejected(self):
        with pytest.raises(ConstraintError):
            catalog.make_entry("umbilic", 2, alpha=np.pi)  # sin = 0
        with pytest.raises(ConstraintError):
            catalog.make_entry("product", 2, alpha=np.pi / 2, k=1)  # cos = 0
        with pytest.raises(ConstraintError):
            catalog.make_entry("product", 3, alpha=0.5, k=3)  # k out of range
        with pytest.raises(ConstraintError):
            catalog.make_entry("rotation_sig_plus_minus", 1)
        with pytest.raises(ContractViolationError):
            catalog.make_entry("nonexistent", 2)

    def test_invalid_profile_rejected(self):
        bad = catalog.default_profile("rotation_sig_plus_minus")
        bad = catalog.Profile(
            bad.family, bad.f, bad.g,
            catalog.AnalyticFn(lambda s: np.cosh(s), lambda s: np.sinh(s), lambda s: np.cosh(s)),
            bad.s_domain,
        )
        with pytest.raises(ConstraintError):
            catalog.make_entry("rotation_sig_plus_minus", 2, profile=bad)


class TestProfiles:
    def test_default_constraints(self):
        """Surface and unit-speed constraints hold to 1e-7 on the s-domain."""
        for fid in catalog.ROTATION_IDS:
            prof = catalog.default_profile(fid)
            s = np.linspace(*prof.s_domain, 80)
            surf, speed = prof.constraint_residuals(s)
            assert surf <= 1e-7 and speed <= 1e-7

    def test_defaults_have_distinct_branches(self):
        """Shipped rotation profiles keep their two curvature branches apart."""
        for fid in catalog.ROTATION_IDS:
            entry = catalog.make_entry(fid, 2)
            for s in np.linspace(*entry.box[0], 15):
                lam = catalog.golden_lambdas(entry, np.array([s, 0.8]))
                assert abs(lam[0] - lam[1]) >= 0.02

    def test_pm_default_is_the_constant_radius_family(self):
        prof = catalog.default_profile("rotation_sig_plus_minus")
        s = np.array([0.4, 1.2])
        np.testing.assert_allclose(prof.g(s), 0.5)
        np.testing.assert_allclose(prof.f(s), np.sqrt(3) / 2 * np.cosh(2 * s / np.sqrt(3)))
        np.testing.assert_allclose(prof.h(s), np.sqrt(3) / 2 * np.sinh(2 * s / np.sqrt(3)))

    def test_null_auxiliary_identity(self):
        """(h f' - f h')^2 = (h')^2 - h^2 follows from the two constraints."""
        prof = catalog.default_profile("rotation_sig_minus_null")
        s = np.linspace(0.1, 2.0, 50)
        f, _, h = prof.values(s)
        df, _, dh = prof.d1(s)
        np.testing.assert_allclose((h * df - f * dh) ** 2, dh * dh - h * h, atol=1e-12)


class TestGoldenValues:
    def test_umbilic_constant(self):
        entry = catalog.make_entry("umbilic", 3, alpha=np.pi / 3)
        np.testing.assert_allclose(catalog.golden_lambdas(entry, np.array([0.5, 0.5, 0.5])),
                                   1 / np.sqrt(3), atol=1e-14)

    def test_product_branches(self):
        entry = catalog.make_entry("product", 3, alpha=np.pi / 4, k=1)
        np.testing.assert_allclose(catalog.golden_lambdas(entry, np.array([0.5, 0.5, 0.5])),
                                   [-1.0, 1.0, 1.0], atol=1e-14)

    def test_pm_constant_profile_branches(self):
        """g = 1/2 family: branch values 1/sqrt(3) and -sqrt(3).

        The profile-direction branch comes out positive here: the printed
        closed form with the opposite sign contradicts the stated normal
        field through the ambient Gauss equation (K = -1 - lam1 lam2 forces
        lam1 lam2 = -1 for this flat-metric family), so the corrected sign
        is the golden value.
        """
        entry = standard_entry("rotation_sig_plus_minus")
        lam = catalog.golden_lambdas(entry, np.array([0.8, 0.5]))
        np.testing.assert_allclose(lam, [1 / np.sqrt(3), -np.sqrt(3)], atol=1e-14)

    def test_goldens_match_computed_everywhere(self, families, random_rotations):
        """Shape-operator spectra match the closed forms at 20 points each."""
        for ctx in list(families.values()) + list(random_rotations.values()):
            for p in ctx.points:
                lam = np.sort(shape_operator(ctx.patch, p).principal_curvatures)
                gold = np.sort(catalog.golden_lambdas(ctx.entry, p))
                assert np.abs(lam - gold).max() <= 1e-5

    def test_thetas_are_arccot(self):
        entry = standard_entry("rotation_sig_minus_minus")
        p = np.array([0.8, 0.5])
        lam = catalog.golden_lambdas(entry, p)
        theta = catalog.golden_thetas(entry, p)
        np.testing.assert_allclose(1 / np.tan(theta), lam, atol=1e-12)
        assert np.all((theta > 0) & (theta < np.pi))

    def test_degenerate_profile_rejected(self):
        """A profile whose rotation radius vanishes is refused at that point.

        h = r sinh(ks) with f constant satisfies both constraints but its
        radius crosses zero at s = 0.
        """
        c = 0.6
        k = 1.0 / np.sqrt(1.0 - c * c)
        r = np.sqrt(1.0 - c * c)
        profile = catalog.Profile(
            "rotation_sig_minus_minus",
            catalog.AnalyticFn(lambda s: np.full_like(s, c), lambda s: np.zeros_like(s),
                               lambda s: np.zeros_like(s)),
            catalog.AnalyticFn(lambda s: r * np.cosh(k * s), lambda s: np.sinh(k * s),
                               lambda s: k * np.cosh(k * s)),
            catalog.AnalyticFn(lambda s: r * np.sinh(k * s), lambda s: np.cosh(k * s),
                               lambda s: k * np.sinh(k * s)),
            (0.02, 2.8),
        )
        entry = catalog.CatalogEntry("rotation_sig_minus_minus", 2, profile=profile,
                                     box=[[0.3, 1.3], [0.3, 1.3]])
        with pytest.raises(DegenerateProfileError):
            catalog.golden_lambdas(entry, np.array([1e-9, 0.5]))


class TestArcLength:
    def test_unit_speed_input_is_fixed_point(self):
        """An already unit-speed curve reparametrizes to itself (shifted to 0)."""
        prof = catalog.default_profile("rotation_sig_plus_minus")

        def fn(T):
            s = T[:, 0]
            return np.stack([prof.f(s), prof.g(s), prof.h(s)], axis=1)

        curve = SmoothMap(fn, 1, 3, domain=[[0.2, 1.8]], name="unit seed")
        out = catalog.arc_length_reparametrize(curve, "rotation_sig_plus_minus")
        s = np.linspace(*out.domain[0], 30)
        vals = out(s[:, None])
        ref = fn((s + 0.2 + 5e-4 * 1.6)[:, None])
        assert np.abs(vals - ref).max() <= 1e-9

    def test_double_speed_input_recovers_parametrization(self):
        """s -> 2s scaling is inverted: the new parameter is tau = s/2."""
        prof = catalog.default_profile("rotation_sig_plus_minus")

        def fn(T):
            tau = 2.0 * T[:, 0]
            return np.stack([prof.f(tau), prof.g(tau), prof.h(tau)], axis=1)

        curve = SmoothMap(fn, 1, 3, domain=[[0.0, 1.0]], name="double-speed seed")
        out = catalog.arc_length_reparametrize(curve, "rotation_sig_plus_minus")
        lo, hi = out.domain[0]
        assert out.length == pytest.approx(2.0 * (1.0 - 2 * 5e-4), abs=1e-9)
        s = np.linspace(lo, hi, 20)
        ref = fn((s / 2.0 + 5e-4)[:, None])
        assert np.abs(out(s[:, None]) - ref).max() <= 1e-9

    def test_constraints_preserved(self):
        """The surface constraint survives; unit speed holds afterwards."""
        rng = np.random.default_rng(3)
        curve = catalog._random_seed_curve("rotation_sig_minus_null", rng)
        prof = catalog._profile_from_curve(curve, "rotation_sig_minus_null")
        s = np.linspace(*prof.s_domain, 60)
        surf, speed = prof.constraint_residuals(s)
        assert surf <= 1e-7 and speed <= 1e-7

    def test_vanishing_speed_rejected(self):
        def fn(T):
            t = T[:, 0]
            c = np.cosh(t * 0)  # constant curve
            return np.stack([c, 0 * t, 0 * t], axis=1)

        curve = SmoothMap(fn, 1, 3, domain=[[0.0, 1.0]])
        with pytest.raises(RegularityError):
            catalog.arc_length_reparametrize(curve, "rotation_sig_plus_minus")


class TestRandomEntries:
    def test_deterministic_in_seed(self):
        a = catalog.random_rotation_entry("rotation_sig_minus_minus", 2, seed=4)
        b = catalog.random_rotation_entry("rotation_sig_minus_minus", 2, seed=4)
        s = np.linspace(*a.profile.s_domain, 11)
        np.testing.assert_allclose(a.profile.h(s), b.profile.h(s), atol=1e-15)

    def test_profiles_are_nonisoparametric(self, random_rotations):
        for ctx in random_rotations.values():
            lo = ctx.entry.box[0] @ [0.9, 0.1]
            hi = ctx.entry.box[0] @ [0.1, 0.9]
            lam_lo = catalog.golden_lambdas(ctx.entry, np.array([lo, 0.5]))
            lam_hi = catalog.golden_lambdas(ctx.entry, np.array([hi, 0.5]))
            assert np.abs(lam_lo - lam_hi).max() > 1e-3
