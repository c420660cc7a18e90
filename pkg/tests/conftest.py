import numpy as np
import pytest

from qgv import catalog
from qgv.gaussmap import build_gauss_map


def standard_entry(family, n=2):
    if family == "umbilic":
        return catalog.make_entry("umbilic", n, alpha=np.pi / 4)
    if family == "product":
        return catalog.make_entry("product", n, alpha=np.pi / 3, k=1)
    return catalog.make_entry(family, n)


def interior_points(entry, count, seed=123):
    """Deterministic sample of interior grid-box points with stencil margin."""
    rng = np.random.default_rng([seed, entry.n])
    lo = entry.box[:, 0] + 0.02
    hi = entry.box[:, 1] - 0.02
    return lo + (hi - lo) * rng.random((count, entry.n))


class FamilyContext:
    def __init__(self, entry):
        self.entry = entry
        self.patch = catalog.instantiate(entry)
        self.gm = build_gauss_map(self.patch)
        self.points = interior_points(entry, 20)


@pytest.fixture(scope="session")
def families():
    """One context per catalog family at n = 2 with default parameters."""
    return {fid: FamilyContext(standard_entry(fid)) for fid in catalog.ENTRY_IDS}


@pytest.fixture(scope="session")
def umbilic3():
    return FamilyContext(standard_entry("umbilic", n=3))


@pytest.fixture(scope="session")
def product3():
    return FamilyContext(catalog.make_entry("product", 3, alpha=np.pi / 3, k=1))


@pytest.fixture(scope="session")
def random_rotations():
    """Seeded non-isoparametric rotation profiles, one per rotation family."""
    return {
        fid: FamilyContext(catalog.random_rotation_entry(fid, 2, seed=idx + 1))
        for idx, fid in enumerate(catalog.ROTATION_IDS)
    }
