"""Extrinsic geometry of spacelike hypersurfaces a : U -> H^{n+1}_1(-1).

The chart maps an open box U in R^n into the anti-de Sitter quadric
``<a, a>_2 = -1`` inside R^{n+2}_2. The unit normal b is tangent to the
quadric and timelike; its sign is fixed per patch by the ``orientation``
selector, which prescribes the sign of ``det[a; da; b]``, so b is a
deterministic, continuous function of the point (no sweep-order dependence).

Shape operator convention: S = G^{-1} Pi with Pi_ij = <d_i d_j a, b>_2, which
is equivalent to db(X) = -S(da(X)). For a standard umbilic embedding
(cos(alpha), sin(alpha) p) with normal (sin(alpha), -cos(alpha) p) this gives
principal curvatures cot(alpha).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .diffcalc import DiffConfig, SmoothMap, hessian_batch, jacobian_batch
from .errors import ContractViolationError, NormalDegenerateError, SignatureError
from .indefinite import IndefVector, SymPair, g_selfadjoint_eigen, mink_dot, signature_vector

# step choices for chart derivatives; the hessian value is the nested-level
# step squared (level step ~3.2e-3 balances truncation and cancellation)
JAC_CFG = DiffConfig(step=1e-3, order=4)
HESS_CFG = DiffConfig(step=1e-5, order=4)

AMBIENT_INDEX = 2


@dataclass
class HypersurfacePatch:
    """A chart into H^{n+1}_1(-1) together with its normal orientation."""

    chart: SmoothMap
    n: int
    orientation: int = 1
    ref_point: Optional[np.ndarray] = None
    name: str = "patch"

    def __post_init__(self):
        if self.chart.dim_in != self.n or self.chart.dim_out != self.n + 2:
            raise ContractViolationError(
                f"chart must map R^{self.n} -> R^{self.n + 2}, got "
                f"R^{self.chart.dim_in} -> R^{self.chart.dim_out}"
            )
        if self.orientation not in (-1, 1):
            raise ContractViolationError("orientation must be +1 or -1")
        if self.ref_point is not None:
            self.ref_point = np.asarray(self.ref_point, dtype=float)

    @property
    def ambient_dim(self) -> int:
        return self.n + 2

    def validate(self, points: np.ndarray, tol: float = 1e-8,
                 cfg: DiffConfig = JAC_CFG) -> None:
        """Check the patch lands on the quadric and is spacelike at `points`."""
        P = np.atleast_2d(points)
        a = self.chart(P)
        norms = mink_dot(a, a, AMBIENT_INDEX)
        worst = np.abs(norms + 1.0).max()
        if worst > tol:
            raise ContractViolationError(
                f"{self.name}: chart leaves H^{{n+1}}_1(-1), |<a,a>+1| up to {worst:.3e}"
            )
        G = metric_batch(self, P, cfg)
        eig = np.linalg.eigvalsh(G)
        if eig.min() <= 1e-10:
            raise SignatureError(
                f"{self.name}: induced metric not positive definite (min eig {eig.min():.3e})"
            )


@dataclass
class ShapeData:
    """Per-point extrinsic data of a spacelike patch."""

    point: np.ndarray
    metric: np.ndarray
    normal: IndefVector
    shape: np.ndarray
    principal_curvatures: np.ndarray
    principal_directions: np.ndarray  # columns, G-orthonormal, in chart coordinates


def _cross_normal(rows: np.ndarray) -> np.ndarray:
    """Indefinite-orthogonal complement of n+1 row vectors in R^{n+2}_2.

    Cofactor expansion of det([rows; x]) along x gives the Euclidean kernel
    covector c; the metric-orthogonal vector is eta*c. The construction fixes
    det([rows; result]) = <c, c>_2 < 0, so the sign convention is canonical.
    """
    m, nrows, d = rows.shape
    c = np.empty((m, d))
    cols = np.arange(d)
    for j in range(d):
        minor = rows[:, :, cols != j]
        c[:, j] = (-1.0) ** (nrows + j + 1) * np.linalg.det(minor)
    return c * signature_vector(d, AMBIENT_INDEX)


def frame_batch(patch: HypersurfacePatch, P: np.ndarray, cfg: DiffConfig = JAC_CFG):
    """Chart values, tangent frames and unit normals at a batch of points.

    Returns (a, T, b) with shapes (m, d), (m, d, n), (m, d).
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    a = patch.chart(P)
    T = jacobian_batch(patch.chart, P, cfg)
    rows = np.concatenate([a[:, None, :], np.swapaxes(T, 1, 2)], axis=1)
    raw = _cross_normal(rows)
    q = mink_dot(raw, raw, AMBIENT_INDEX)
    if np.any(q >= -1e-14):
        raise NormalDegenerateError(
            "orthogonal complement of span{a, da} is not timelike; "
            "the input is not a valid spacelike patch"
        )
    b = patch.orientation * raw / np.sqrt(-q)[:, None]
    return a, T, b


def metric_batch(patch: HypersurfacePatch, P: np.ndarray, cfg: DiffConfig = JAC_CFG) -> np.ndarray:
    """First fundamental forms G_ij = <d_i a, d_j a>_2 at a batch of points."""
    T = jacobian_batch(patch.chart, np.atleast_2d(P), cfg)
    eta = signature_vector(patch.ambient_dim, AMBIENT_INDEX)
    return np.einsum("mdi,d,mdj->mij", T, eta, T)


def induced_metric(patch: HypersurfacePatch, p: np.ndarray,
                   cfg: DiffConfig = JAC_CFG, tol: float = 1e-10) -> np.ndarray:
    """Induced metric at p; raises SignatureError if not spacelike there."""
    G = metric_batch(patch, np.asarray(p, dtype=float)[None, :], cfg)[0]
    eig = np.linalg.eigvalsh(G)
    if eig.min() <= tol:
        raise SignatureError(f"chart not spacelike at {p} (min eig {eig.min():.3e})")
    return G


def unit_normal(patch: HypersurfacePatch, p: np.ndarray,
                cfg: DiffConfig = JAC_CFG) -> IndefVector:
    """Unit timelike normal at p, tangent to the ambient quadric."""
    induced_metric(patch, p, cfg)  # spacelike precondition
    _, _, b = frame_batch(patch, np.asarray(p, dtype=float)[None, :], cfg)
    return IndefVector(b[0], AMBIENT_INDEX)


def shape_operator(patch: HypersurfacePatch, p: np.ndarray,
                   jac_cfg: DiffConfig = JAC_CFG,
                   hess_cfg: DiffConfig = HESS_CFG) -> ShapeData:
    """Shape operator, principal curvatures and directions at p."""
    p = np.asarray(p, dtype=float)
    G = induced_metric(patch, p, jac_cfg)
    _, _, b = frame_batch(patch, p[None, :], jac_cfg)
    H = hessian_batch(patch.chart, p[None, :], hess_cfg)[0]
    eta = signature_vector(patch.ambient_dim, AMBIENT_INDEX)
    Pi = np.einsum("d,d,dij->ij", b[0], eta, H)
    Pi = 0.5 * (Pi + Pi.T)
    S = np.linalg.solve(G, Pi)
    lam, V = g_selfadjoint_eigen(SymPair(G, S, tol=1e-6))
    return ShapeData(
        point=p,
        metric=G,
        normal=IndefVector(b[0], AMBIENT_INDEX),
        shape=S,
        principal_curvatures=lam,
        principal_directions=V,
    )


def shape_eigenvalues_batch(patch: HypersurfacePatch, P: np.ndarray,
                            jac_cfg: DiffConfig = JAC_CFG,
                            hess_cfg: DiffConfig = HESS_CFG) -> np.ndarray:
    """Principal curvatures (ascending) at a batch of points, shape (m, n).

    Bulk path for derivative checks on fields of eigenvalues; the per-point
    contract checks of :func:`shape_operator` are skipped.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    G = metric_batch(patch, P, jac_cfg)
    _, _, b = frame_batch(patch, P, jac_cfg)
    H = hessian_batch(patch.chart, P, hess_cfg)
    eta = signature_vector(patch.ambient_dim, AMBIENT_INDEX)
    Pi = np.einsum("md,d,mdij->mij", b, eta, H)
    S = np.linalg.solve(G, Pi)
    lam = np.linalg.eigvals(S)
    lam = np.sort(np.real(lam), axis=1)
    return lam


def parallel_patch(patch: HypersurfacePatch, t: float,
                   cfg: DiffConfig = JAC_CFG) -> HypersurfacePatch:
    """The parallel hypersurface cos(t) a + sin(t) b, orientation preserved.

    The derived patch's computed normal then equals -sin(t) a + cos(t) b at
    the reference point (checked at construction), so composing with -t
    reproduces the original chart.
    """
    t = float(t)
    ct, st = np.cos(t), np.sin(t)

    def shifted(P: np.ndarray) -> np.ndarray:
        a, _, b = frame_batch(patch, P, cfg)
        return ct * a + st * b

    chart = SmoothMap(shifted, patch.n, patch.ambient_dim,
                      domain=patch.chart.domain, name=f"{patch.name}_parallel")
    ref = patch.ref_point
    if ref is None:
        if patch.chart.domain is None:
            raise ContractViolationError("parallel_patch needs a ref_point or a bounded domain")
        ref = patch.chart.domain.mean(axis=1)

    probe = HypersurfacePatch(chart, patch.n, orientation=1, ref_point=ref,
                              name=chart.name)
    G = metric_batch(probe, ref[None, :], cfg)[0]
    if np.linalg.eigvalsh(G).min() <= 1e-10:
        raise SignatureError(f"parallel patch degenerates for t={t}")
    a0, _, b0 = frame_batch(patch, ref[None, :], cfg)
    target = -st * a0[0] + ct * b0[0]
    _, _, b_new = frame_batch(probe, ref[None, :], cfg)
    orientation = 1 if mink_dot(b_new[0], target, AMBIENT_INDEX) < 0 else -1
    return HypersurfacePatch(chart, patch.n, orientation=orientation,
                             ref_point=ref, name=chart.name)
