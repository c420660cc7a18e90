"""Finite-difference engine for charts and fields.

Central differences of order 2 or 4. Second derivatives are nested first
differences whose per-level step is ``sqrt(cfg.step)``, balancing truncation
against cancellation; callers that need high-accuracy Hessians pass a small
``step`` (the geometry pipelines use 1e-5, i.e. a level step of ~3.2e-3).

Evaluators are expected to be vectorized: a :class:`SmoothMap` function
receives an (m, k) array of points and returns an (m, d) array of values.
All stencils are batched into a single evaluator call per derivative level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractViolationError, DomainError

# offsets (in units of the step) and weights of the central first-difference
_STENCILS = {
    2: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    4: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0),
}


@dataclass(frozen=True)
class DiffConfig:
    """Step size and scheme order for the difference operators."""

    step: float = 1e-3
    order: int = 4
    richardson: bool = False

    def __post_init__(self):
        if self.step <= 0:
            raise ContractViolationError("step must be positive")
        if self.order not in _STENCILS:
            raise ContractViolationError("order must be 2 or 4")


class SmoothMap:
    """A vectorized evaluator from R^k to R^d or C^d with an optional domain box.

    ``fn`` must accept an (m, k) float array and return an (m, d) array; the
    evaluator has to be re-entrant since stencil batches may be evaluated in
    parallel.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], dim_in: int, dim_out: int,
                 domain: Optional[np.ndarray] = None, name: str = "map"):
        self.fn = fn
        self.dim_in = dim_in
        self.dim_out = dim_out
        self.domain = None if domain is None else np.asarray(domain, dtype=float).reshape(dim_in, 2)
        self.name = name

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[-1] != self.dim_in:
            raise ContractViolationError(
                f"{self.name}: expected points in R^{self.dim_in}, got shape {pts.shape}"
            )
        vals = np.asarray(self.fn(pts))
        if vals.ndim == 1:
            vals = vals[:, None]
        return vals[0] if single else vals

    def contains(self, pts: np.ndarray, margin: float = 0.0) -> bool:
        if self.domain is None:
            return True
        pts = np.atleast_2d(pts)
        lo = self.domain[:, 0] + margin
        hi = self.domain[:, 1] - margin
        return bool(np.all(pts >= lo - 1e-12) and np.all(pts <= hi + 1e-12))


def _require_margin(f: SmoothMap, P: np.ndarray, margin: float):
    if f.domain is not None and not f.contains(P, margin):
        raise DomainError(
            f"{f.name}: point too close to the domain boundary for a stencil of extent {margin:.3g}"
        )


def jacobian_batch(f: SmoothMap, P: np.ndarray, cfg: DiffConfig) -> np.ndarray:
    """Jacobians at a batch of points: (m, k) -> (m, d, k)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    m, k = P.shape
    _require_margin(f, P, 2.0 * cfg.step)

    def one_pass(h: float) -> np.ndarray:
        offsets, weights = _STENCILS[cfg.order]
        shifts = h * offsets[:, None, None] * np.eye(k)[None, :, :]  # (s, k, k)
        pts = P[:, None, None, :] + shifts[None, :, :, :]            # (m, s, k, k)
        vals = f(pts.reshape(-1, k)).reshape(m, offsets.size, k, f.dim_out)
        deriv = np.einsum("s,mskd->mdk", weights, vals) / h
        return deriv

    J = one_pass(cfg.step)
    if cfg.richardson:
        J_half = one_pass(cfg.step / 2.0)
        factor = 2.0 ** cfg.order
        J = (factor * J_half - J) / (factor - 1.0)
    return J


def jacobian(f: SmoothMap, p: np.ndarray, cfg: DiffConfig = DiffConfig()) -> np.ndarray:
    """Matrix of partials at p; column i approximates d f / d u_i."""
    return jacobian_batch(f, np.asarray(p, dtype=float)[None, :], cfg)[0]


def hessian_batch(f: SmoothMap, P: np.ndarray, cfg: DiffConfig) -> np.ndarray:
    """Second derivatives at a batch of points: (m, k) -> (m, d, k, k).

    Nested first differences share their stencil points symmetrically in
    (i, j), so the output is symmetric up to rounding by construction.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    m, k = P.shape
    eta = float(np.sqrt(cfg.step))
    _require_margin(f, P, 4.0 * eta)

    def one_pass(h: float) -> np.ndarray:
        offsets, weights = _STENCILS[cfg.order]
        s = offsets.size
        eye = np.eye(k)
        # p + h*(a e_i + b e_j) for all offset pairs (a, b) and axis pairs (i, j)
        shift_a = h * offsets[:, None, None, None, None] * eye[None, None, :, None, :]
        shift_b = h * offsets[None, :, None, None, None] * eye[None, None, None, :, :]
        shifts = np.broadcast_to(shift_a + shift_b, (s, s, k, k, k))
        pts = P[:, None, None, None, None, :] + shifts[None, ...]
        vals = f(pts.reshape(-1, k)).reshape(m, s, s, k, k, f.dim_out)
        return np.einsum("a,b,mabijd->mdij", weights, weights, vals) / (h * h)

    H = one_pass(eta)
    if cfg.richardson:
        H_half = one_pass(eta / 2.0)
        factor = 2.0 ** cfg.order
        H = (factor * H_half - H) / (factor - 1.0)
    return H


def hessian(f: SmoothMap, p: np.ndarray, cfg: DiffConfig = DiffConfig()) -> np.ndarray:
    """3-index array of second partials d_i d_j f at p, shape (d, k, k)."""
    return hessian_batch(f, np.asarray(p, dtype=float)[None, :], cfg)[0]


def directional_derivative(phi: SmoothMap, p: np.ndarray, v: np.ndarray,
                           cfg: DiffConfig = DiffConfig()) -> float:
    """Derivative of a scalar field along the coordinate vector v."""
    J = jacobian(phi, p, cfg)
    if J.shape[0] != 1:
        raise ContractViolationError("directional_derivative needs a scalar field")
    return float(np.real(J[0] @ np.asarray(v, dtype=float)))
