"""Intrinsic curvature of a metric field by finite differences.

Independent oracle for the Gauss/Codazzi checks: it sees nothing but a
callable returning metric matrices over coordinates. Conventions:

    Gamma^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)
    R(X, Y)Z   = grad_X grad_Y Z - grad_Y grad_X Z - grad_[X,Y] Z
    R_abcd     = g( R(d_a, d_b) d_c , d_d )

so a space of constant curvature c has R_abcd = c (g_bc g_ad - g_ac g_bd).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

# 4th-order central stencil for fields that are themselves finite-difference
# products; larger steps here keep the noise amplification bounded
FIELD_STEP = 5e-3
_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0

MetricField = Callable[[np.ndarray], np.ndarray]  # (m, k) -> (m, n, n)


def _field_grad(field: Callable[[np.ndarray], np.ndarray], p: np.ndarray,
                step: float) -> np.ndarray:
    """d_c field at p: output shape (k,) + field shape."""
    p = np.asarray(p, dtype=float)
    k = p.size
    pts = p[None, None, :] + step * _OFFSETS[:, None, None] * np.eye(k)[None, :, :]
    vals = field(pts.reshape(-1, k))
    vals = vals.reshape((_OFFSETS.size, k) + vals.shape[1:])
    return np.einsum("s,sc...->c...", _WEIGHTS, vals) / step


def christoffel(metric_field: MetricField, p: np.ndarray,
                step: float = FIELD_STEP) -> np.ndarray:
    """Christoffel symbols Gamma[k, i, j] of the field at p."""
    g = metric_field(np.asarray(p, dtype=float)[None, :])[0]
    dg = _field_grad(metric_field, p, step)  # dg[c, a, b] = d_c g_ab
    ginv = np.linalg.inv(g)
    term = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    return 0.5 * np.einsum("kl,lij->kij", ginv, term)


def riemann_lowered(metric_field: MetricField, p: np.ndarray,
                    step: float = FIELD_STEP) -> np.ndarray:
    """Fully lowered curvature R[a, b, c, d] = g(R(d_a, d_b)d_c, d_d) at p."""
    p = np.asarray(p, dtype=float)
    g = metric_field(p[None, :])[0]
    gamma = christoffel(metric_field, p, step)

    def gamma_field(P: np.ndarray) -> np.ndarray:
        return np.stack([christoffel(metric_field, q, step) for q in np.atleast_2d(P)])

    dgamma = _field_grad(gamma_field, p, step)  # dgamma[a, k, b, c] = d_a Gamma^k_bc
    r_up = (
        np.einsum("adbc->abcd", dgamma[:, :, :, :])
        - np.einsum("bdac->abcd", dgamma[:, :, :, :])
        + np.einsum("dae,ebc->abcd", gamma, gamma)
        - np.einsum("dbe,eac->abcd", gamma, gamma)
    )
    return np.einsum("abce,ed->abcd", r_up, g)
