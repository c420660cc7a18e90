"""The complex hyperbolic quadric through unit lifts.

Points are always carried by explicit representatives z in the unit-lift set
(Re h(z,z) = -1, q(z) = 0); there is no chart atlas on the quadric itself.
For such z the four directions z, iz, zbar, i*zbar split off the fiber and
the quadric-normal directions, and since h(z,z) = h(zbar,zbar) = -1 and
h(z,zbar) = q(z) = 0, removing them is the single complex-linear projection

    w  |->  w + h(w,z) z + h(w,zbar) zbar.

The metric g is Re h on horizontal representatives, J is multiplication by i,
and the almost product structures are the gauge family

    A_phi w = e^{i phi} * (-conj(w))   (projected back to horizontal),

phi = 0 being the structure induced by the given lift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractViolationError
from .indefinite import herm_product, quadric_poly

SAME_POINT_TOL = 1e-6


@dataclass(frozen=True)
class QuadricPoint:
    """A point of the quadric, carried by a unit lift z = u + iv."""

    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=complex))

    def residuals(self) -> dict:
        hzz = herm_product(self.z, self.z)
        return {
            "unit": abs(hzz.real + 1.0),
            "imag": abs(hzz.imag),
            "quadric": abs(quadric_poly(self.z)),
        }

    def validate(self, tol: float = 1e-8) -> "QuadricPoint":
        worst = max(self.residuals().values())
        if worst > tol:
            raise ContractViolationError(
                f"lift violates the unit-lift invariants (residual {worst:.3e})"
            )
        return self


@dataclass(frozen=True)
class HorizontalVector:
    """A horizontal tangent representative w at a base lift z."""

    base: QuadricPoint
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", np.asarray(self.w, dtype=complex))

    def residuals(self) -> dict:
        z = self.base.z
        return {
            "fiber": abs(complex(herm_product(self.w, z))),
            "normal": abs(complex(herm_product(self.w, np.conj(z)))),
        }

    def validate(self, tol: float = 1e-8) -> "HorizontalVector":
        worst = max(self.residuals().values())
        if worst > tol:
            raise ContractViolationError(f"vector is not horizontal (residual {worst:.3e})")
        return self


class SamePointResult(NamedTuple):
    match: bool
    residual: float
    phase: float


def same_point(z1: QuadricPoint, z2: QuadricPoint, tol: float = SAME_POINT_TOL) -> SamePointResult:
    """Whether two unit lifts project to the same quadric point.

    The fiber over [z] is {e^{it} z}; the optimal phase comes from the
    Euclidean Hermitian pairing and the residual is the Euclidean distance
    after alignment.
    """
    a, b = z1.z, z2.z
    s = np.sum(b * np.conj(a))
    phase = float(np.angle(s)) if abs(s) > 0 else 0.0
    residual = float(np.linalg.norm(b - np.exp(1j * phase) * a))
    return SamePointResult(residual <= tol, residual, phase)


def horizontal_project(z: QuadricPoint, w: np.ndarray) -> HorizontalVector:
    """Remove the fiber and quadric-normal components of w at z; idempotent."""
    w = np.asarray(w, dtype=complex)
    zc = z.z
    zbar = np.conj(zc)
    out = w + complex(herm_product(w, zc)) * zc + complex(herm_product(w, zbar)) * zbar
    return HorizontalVector(z, out)


def _common_base(*vecs: HorizontalVector) -> QuadricPoint:
    base = vecs[0].base
    for v in vecs[1:]:
        if v.base is not base and not np.allclose(v.base.z, base.z, atol=1e-9):
            raise ContractViolationError("horizontal vectors have different base points")
    return base


def quadric_metric(X: HorizontalVector, Y: HorizontalVector) -> float:
    """Submersion metric g(X, Y) = Re h of horizontal representatives."""
    _common_base(X, Y)
    return float(herm_product(X.w, Y.w).real)


def apply_J(X: HorizontalVector) -> HorizontalVector:
    """Complex structure: multiplication by i; preserves horizontality."""
    return HorizontalVector(X.base, 1j * X.w)


@dataclass(frozen=True)
class ProductStructure:
    """Almost product structure at a lift, as a gauge rotation of -conj.

    ``phi = 0`` is the structure induced by the base lift itself; a nonzero
    phi applies A = cos(phi) A_0 + sin(phi) J A_0.
    """

    phi: float = 0.0

    @classmethod
    def canonical(cls) -> "ProductStructure":
        return cls(0.0)

    @classmethod
    def rotated(cls, phi: float) -> "ProductStructure":
        return cls(float(phi))

    @property
    def is_canonical(self) -> bool:
        return self.phi == 0.0


def apply_A(P: ProductStructure, X: HorizontalVector) -> HorizontalVector:
    """A X for the gauge P; involutive, g-symmetric, anti-commutes with J.

    -conj(w) is exactly horizontal when w is, so the trailing projection only
    absorbs numerical drift of the base lift.
    """
    A0 = -np.conj(X.w)
    w = np.exp(1j * P.phi) * A0
    return horizontal_project(X.base, w)


def curvature_Qstar(P: ProductStructure, X: HorizontalVector, Y: HorizontalVector,
                    Z: HorizontalVector) -> HorizontalVector:
    """Ambient curvature R(X, Y)Z of the quadric; gauge-independent in A."""
    base = _common_base(X, Y, Z)
    g = quadric_metric
    J = apply_J
    JX, JY, JZ = J(X), J(Y), J(Z)
    AX, AY = apply_A(P, X), apply_A(P, Y)
    JAX, JAY = J(AX), J(AY)
    w = (
        -g(Y, Z) * X.w
        + g(X, Z) * Y.w
        - g(X, JZ) * JY.w
        + g(Y, JZ) * JX.w
        - 2.0 * g(X, JY) * JZ.w
        - g(AY, Z) * AX.w
        + g(AX, Z) * AY.w
        - g(JAY, Z) * JAX.w
        + g(JAX, Z) * JAY.w
    )
    return HorizontalVector(base, w)
