"""Linear algebra over real and complex vector spaces with indefinite inner products.

Conventions used throughout the package:

* ``R^d_i`` is real d-space with metric ``-x_1 y_1 - ... - x_i y_i + x_{i+1} y_{i+1} + ...``;
  the negative-signature slots always lead.
* ``C^{n+2}_2`` is complex (n+2)-space with the sesquilinear form
  ``h(z, w) = -z_0 conj(w_0) - z_1 conj(w_1) + sum_{j>=2} z_j conj(w_j)``.
  Its real part is the R^{2n+4}_4 metric under the usual identification.
* The quadric polynomial is ``q(z) = -z_0^2 - z_1^2 + sum_{j>=2} z_j^2``.

The array-level helpers (:func:`mink_dot`, :func:`herm_product`,
:func:`quadric_poly`) are broadcast over leading axes and are what the
geometry pipelines call; the typed wrappers add the contract checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ContractViolationError, DimensionMismatchError, SignatureError

DEFAULT_TOL = 1e-9


def signature_vector(dim: int, index: int) -> np.ndarray:
    """Diagonal of the R^d_i metric: `index` leading -1 entries, then +1."""
    eta = np.ones(dim)
    eta[:index] = -1.0
    return eta


def mink_dot(x: np.ndarray, y: np.ndarray, index: int) -> np.ndarray:
    """<x, y>_index on the trailing axis, broadcast over leading axes."""
    x = np.asarray(x)
    y = np.asarray(y)
    prod = x * y
    return prod[..., index:].sum(axis=-1) - prod[..., :index].sum(axis=-1)


def herm_product(z: np.ndarray, w: np.ndarray, index: int = 2) -> np.ndarray:
    """Sesquilinear form h(z, w), conjugate-linear in w, on the trailing axis."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    prod = z * np.conj(w)
    return prod[..., index:].sum(axis=-1) - prod[..., :index].sum(axis=-1)


def quadric_poly(z: np.ndarray, index: int = 2) -> np.ndarray:
    """q(z) = -z_0^2 - ... - z_{index-1}^2 + sum of remaining squares."""
    z = np.asarray(z, dtype=complex)
    sq = z * z
    return sq[..., index:].sum(axis=-1) - sq[..., :index].sum(axis=-1)


@dataclass(frozen=True)
class IndefVector:
    """A real coordinate vector carrying the metric index of its home space."""

    coords: np.ndarray
    index: int

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        if coords.ndim != 1 or coords.size < 1:
            raise DimensionMismatchError("IndefVector needs a 1-d, nonempty coordinate array")
        if not 0 <= self.index <= coords.size:
            raise DimensionMismatchError(
                f"index {self.index} out of range for dimension {coords.size}"
            )

    @property
    def dim(self) -> int:
        return self.coords.size


@dataclass(frozen=True)
class CVector:
    """A complex vector in C^{n+2} whose first two slots are the timelike ones."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=complex)
        object.__setattr__(self, "coords", coords)
        if coords.ndim != 1 or coords.size < 3:
            raise DimensionMismatchError("CVector needs length >= 3 (n >= 1)")

    @property
    def dim(self) -> int:
        return self.coords.size


@dataclass(frozen=True)
class SymPair:
    """A metric G together with a G-self-adjoint operator S.

    Carrier for the generalized eigenproblem ``(G S) v = lambda G v``;
    both the shape operator and the B/C diagonalization reduce to it.
    """

    G: np.ndarray
    S: np.ndarray
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        G = np.asarray(self.G, dtype=float)
        S = np.asarray(self.S, dtype=float)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "S", S)
        if G.shape != S.shape or G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise DimensionMismatchError("G and S must be square matrices of equal shape")
        if np.abs(G - G.T).max() > self.tol:
            raise ContractViolationError(
                f"G is not symmetric within tolerance: {np.abs(G - G.T).max():.3e}"
            )
        K = G @ S
        if np.abs(K - K.T).max() > max(self.tol, self.tol * np.abs(K).max()):
            raise ContractViolationError(
                f"S is not G-self-adjoint within tolerance: {np.abs(K - K.T).max():.3e}"
            )


def inner_real(x: IndefVector, y: IndefVector) -> float:
    """Indefinite inner product <x, y>_i of two vectors in the same R^d_i."""
    if x.dim != y.dim or x.index != y.index:
        raise DimensionMismatchError(
            f"incompatible spaces: R^{x.dim}_{x.index} vs R^{y.dim}_{y.index}"
        )
    return float(mink_dot(x.coords, y.coords, x.index))


def hermitian_form(z: CVector, w: CVector) -> complex:
    """Full complex form h(z, w) on C^{n+2}_2; Re h is the real metric."""
    if z.dim != w.dim:
        raise DimensionMismatchError(f"length mismatch: {z.dim} vs {w.dim}")
    return complex(herm_product(z.coords, w.coords))


def quadric_residual(z: CVector) -> complex:
    """q(z); zero exactly when the complex line [z] lies on the quadric."""
    return complex(quadric_poly(z.coords))


def g_selfadjoint_eigen(pair: SymPair, tol: float = DEFAULT_TOL):
    """Eigenvalues (ascending) and a G-orthonormal eigenbasis of S.

    G must be positive definite; this is the spacelike/Riemannian case, and a
    failure signals a non-spacelike chart upstream.
    """
    G, S = pair.G, pair.S
    eivals_G = np.linalg.eigvalsh(G)
    if eivals_G.min() <= tol:
        raise SignatureError(
            f"metric not positive definite (min eigenvalue {eivals_G.min():.3e})"
        )
    K = G @ S
    K = 0.5 * (K + K.T)
    lam, V = scipy.linalg.eigh(K, G)
    return lam, V
