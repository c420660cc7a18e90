"""Gauss maps of spacelike AdS hypersurfaces into the quadric.

The Gauss map of a patch a with unit normal b is [a + ib]; its canonical
lift (a + ib)/sqrt(2) is horizontal, so every tangent computation happens on
lifts: the differential dG has horizontal representatives W_a = d_a(lift),
the induced metric is Re h(W_a, W_b), and the structures J and A act as in
:mod:`qgv.quadric`.

Second fundamental form: the flat second derivative of the lift decomposes
into tangential Christoffel terms, the complex spans of z (position + fiber)
and zbar (quadric normals), and the J-image of the tangent space; removing
the first three leaves the lift of h(X, Y). Its cubic components
g(h(e_i, e_j), J e_k) are totally symmetric.

Angle functions: with B (tangential part of A) and C (J-image of the normal
part) expressed in an orthonormal tangent frame, B and C are symmetric,
commute and satisfy B^2 + C^2 = id; the joint eigenframe carries angles
theta_j = atan2(C_jj, B_jj)/2 mod pi. All cross-point comparisons of angles
use mod-pi metrics since only the class mod pi is defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np
import scipy.linalg

from .diffcalc import DiffConfig, SmoothMap, hessian_batch, jacobian_batch
from .errors import (
    ContractViolationError,
    EigenCrossingError,
    JointDiagonalizationError,
    SignatureError,
)
from .hypersurface import (
    HESS_CFG,
    JAC_CFG,
    HypersurfacePatch,
    ShapeData,
    frame_batch,
    shape_eigenvalues_batch,
    shape_operator,
)
from .indefinite import signature_vector
from .intrinsic import FIELD_STEP, christoffel, riemann_lowered
from .quadric import ProductStructure, QuadricPoint, horizontal_project

_FD_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_FD_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


# ---------------------------------------------------------------------------
# angle utilities (angles live on the circle R / pi Z)

def wrap_angle(theta):
    """Reduce an angle to its representative in [0, pi)."""
    return np.mod(theta, np.pi)


def angle_distance(x, y):
    """Distance on the circle of circumference pi."""
    d = np.mod(np.asarray(x) - np.asarray(y), np.pi)
    return np.minimum(d, np.pi - d)


def angle_multiset_distance(A, B) -> float:
    """Best max-distance pairing of two mod-pi angle multisets.

    Sorted circular sequences are compared under all cyclic alignments, which
    is what makes comparisons robust when angles sit near the 0 ~ pi seam.
    """
    a = np.sort(wrap_angle(np.asarray(A, dtype=float)))
    b = np.sort(wrap_angle(np.asarray(B, dtype=float)))
    if a.shape != b.shape:
        raise ContractViolationError("angle multisets must have equal size")
    n = a.size
    best = np.inf
    for s in range(n):
        d = angle_distance(a, np.roll(b, s))
        best = min(best, float(d.max()))
    return best


# ---------------------------------------------------------------------------
# the Gauss map field

class GaussMapField:
    """Canonical lift of the Gauss map of a patch, with per-point caches."""

    def __init__(self, patch: HypersurfacePatch,
                 jac_cfg: DiffConfig = JAC_CFG, hess_cfg: DiffConfig = HESS_CFG):
        self.patch = patch
        self.jac_cfg = jac_cfg
        self.hess_cfg = hess_cfg
        self.eta = signature_vector(patch.ambient_dim, 2)
        self.lift = SmoothMap(self._lift_fn, patch.n, patch.ambient_dim,
                              domain=patch.chart.domain, name=f"{patch.name}_lift")
        self._frames: dict = {}
        self._shapes: dict = {}
        self._hessians: dict = {}

    def _lift_fn(self, P: np.ndarray) -> np.ndarray:
        a, _, b = frame_batch(self.patch, P, self.jac_cfg)
        return (a + 1j * b) / np.sqrt(2.0)

    # -- cached per-point data -------------------------------------------

    def lift_at(self, p: np.ndarray) -> QuadricPoint:
        return QuadricPoint(self.lift(np.asarray(p, dtype=float)))

    def frame_at(self, p: np.ndarray):
        """(z, W, G): lift, horizontal frame d(lift), induced metric at p."""
        p = np.asarray(p, dtype=float)
        key = p.tobytes()
        if key not in self._frames:
            z = self.lift(p)
            W = jacobian_batch(self.lift, p[None, :], self.jac_cfg)[0]
            G = np.real(np.einsum("da,d,db->ab", W, self.eta, np.conj(W)))
            self._frames[key] = (z, W, G)
        return self._frames[key]

    def shape_at(self, p: np.ndarray) -> ShapeData:
        p = np.asarray(p, dtype=float)
        key = p.tobytes()
        if key not in self._shapes:
            self._shapes[key] = shape_operator(self.patch, p, self.jac_cfg, self.hess_cfg)
        return self._shapes[key]

    def lift_hessian_at(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        key = p.tobytes()
        if key not in self._hessians:
            self._hessians[key] = hessian_batch(self.lift, p[None, :], self.hess_cfg)[0]
        return self._hessians[key]

    # -- batched fields ---------------------------------------------------

    def metric_field(self, P: np.ndarray) -> np.ndarray:
        W = jacobian_batch(self.lift, np.atleast_2d(P), self.jac_cfg)
        return np.real(np.einsum("mda,d,mdb->mab", W, self.eta, np.conj(W)))

    def lift_residuals(self, p: np.ndarray) -> dict:
        """Unit-lift, quadric and horizontality residuals at p."""
        z, W, _ = self.frame_at(p)
        point = QuadricPoint(z)
        res = point.residuals()
        hz = np.einsum("da,d,d->a", W, self.eta, np.conj(1j * z))
        res["horizontal"] = float(np.abs(np.real(hz)).max())
        res["tangent_to_quadric"] = float(
            max(np.linalg.norm(W[:, a] - horizontal_project(point, W[:, a]).w)
                for a in range(W.shape[1]))
        )
        return res


def build_gauss_map(patch: HypersurfacePatch,
                    jac_cfg: DiffConfig = JAC_CFG,
                    hess_cfg: DiffConfig = HESS_CFG) -> GaussMapField:
    """Canonical-lift Gauss map field of a spacelike patch."""
    return GaussMapField(patch, jac_cfg, hess_cfg)


def lagrangian_residual(gm: GaussMapField, p: np.ndarray) -> float:
    """max_{i,j} |g(J dG e_i, dG e_j)|; small for any Gauss map."""
    z, W, _ = gm.frame_at(p)
    QuadricPoint(z).validate(tol=1e-7)
    omega = np.real(np.einsum("da,d,db->ab", 1j * W, gm.eta, np.conj(W)))
    return float(np.abs(omega).max())


# ---------------------------------------------------------------------------
# angle spectrum


@dataclass
class AngleSpectrum:
    """Joint eigenframe of (B, C) with its angle functions, mod pi."""

    point: np.ndarray
    angles: np.ndarray            # (n,), representatives in [0, pi)
    frame: np.ndarray             # (n, n), columns = chart-coordinate components of e_j
    gauge: ProductStructure
    lift_frame: np.ndarray        # (d, n) complex, horizontal lifts of e_j
    diagnostics: dict = field(default_factory=dict)
    _gm: Optional[GaussMapField] = field(default=None, repr=False)


def _apply_A_matrix(z: np.ndarray, M: np.ndarray, phi: float, eta: np.ndarray) -> np.ndarray:
    """Column-wise A_phi on horizontal columns of M at lift z."""
    A0 = -np.conj(M)
    out = np.exp(1j * phi) * A0
    zbar = np.conj(z)
    hz = np.einsum("dc,d,d->c", out, eta, np.conj(z))
    hzbar = np.einsum("dc,d,d->c", out, eta, np.conj(zbar))
    return out + np.outer(z, hz) + np.outer(zbar, hzbar)


def _hmat(X: np.ndarray, Y: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Matrix of h(X_col, Y_col) pairings: (d, p), (d, q) -> (p, q)."""
    return np.einsum("dp,d,dq->pq", X, eta, np.conj(Y))


def angle_spectrum(gm: GaussMapField, P: ProductStructure, p: np.ndarray,
                   cluster_tol: float = 1e-6,
                   commute_tol: float = 1e-5) -> AngleSpectrum:
    """Angle functions and the adapted orthonormal frame at p for gauge P.

    B is diagonalized first; C is diagonalized inside each B-eigenvalue
    cluster (commuting is a theorem, so a large [B, C] residual signals an
    upstream numerical failure and raises JointDiagonalizationError).
    """
    p = np.asarray(p, dtype=float)
    z, W, G = gm.frame_at(p)
    n = gm.patch.n
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise SignatureError(f"Gauss-map metric not positive definite at {p}") from exc
    E = scipy.linalg.solve_triangular(L, np.eye(n), lower=True).T  # G-orthonormal frame
    We = W @ E
    AWe = _apply_A_matrix(z, We, P.phi, gm.eta)
    B = np.real(_hmat(AWe, We, gm.eta)).T
    C = -np.real(_hmat(AWe, 1j * We, gm.eta)).T

    sym_b = float(np.abs(B - B.T).max())
    sym_c = float(np.abs(C - C.T).max())
    B = 0.5 * (B + B.T)
    C = 0.5 * (C + C.T)
    comm = float(np.abs(B @ C - C @ B).max())
    if comm > commute_tol:
        raise JointDiagonalizationError(
            f"[B, C] residual {comm:.3e} exceeds {commute_tol:.1e} at {p}"
        )
    bc_identity = float(np.abs(B @ B + C @ C - np.eye(n)).max())

    beta, U = np.linalg.eigh(B)
    # split the B-spectrum into clusters, then diagonalize C inside each
    splits = np.nonzero(np.diff(beta) > cluster_tol)[0] + 1
    for idx in np.split(np.arange(n), splits):
        if idx.size > 1:
            Uc = U[:, idx]
            _, Vc = np.linalg.eigh(Uc.T @ C @ Uc)
            U[:, idx] = Uc @ Vc
    diag_b = np.einsum("ij,ik,kj->j", U, B, U)
    diag_c = np.einsum("ij,ik,kj->j", U, C, U)
    theta = wrap_angle(0.5 * np.arctan2(diag_c, diag_b))

    order = np.argsort(theta, kind="stable")
    theta = theta[order]
    U = U[:, order]
    # deterministic eigenvector signs
    for j in range(n):
        col = U[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            U[:, j] = -col
    frame = E @ U
    lift_frame = W @ frame

    A_lf = _apply_A_matrix(z, lift_frame, P.phi, gm.eta)
    expected = np.cos(2 * theta)[None, :] * lift_frame - np.sin(2 * theta)[None, :] * (1j * lift_frame)
    frame_rel = float(np.abs(A_lf - expected).max())

    return AngleSpectrum(
        point=p,
        angles=theta,
        frame=frame,
        gauge=P,
        lift_frame=lift_frame,
        diagnostics={
            "symmetry_B": sym_b,
            "symmetry_C": sym_c,
            "commutator": comm,
            "bc_identity": bc_identity,
            "frame_relation": frame_rel,
        },
        _gm=gm,
    )


def gauge_normalize(spec: AngleSpectrum) -> AngleSpectrum:
    """Rotate the gauge so the angle functions sum to 0 mod pi.

    phi = 2 sum(theta)/n does it, but only up to the residual freedom of
    shifting every angle by a multiple of pi/n; the lexicographically
    smallest sorted angle set is chosen so that normalizing commutes with
    arbitrary prior gauge rotations.
    """
    if spec._gm is None:
        raise ContractViolationError("spectrum lost its source field; recompute it")
    n = spec.angles.size
    phi = 2.0 * float(spec.angles.sum()) / n
    best_m, best_key = 0, None
    for m in range(n):
        cand = np.sort(wrap_angle(spec.angles - phi / 2.0 - m * np.pi / n))
        key = tuple(np.round(cand, 9))
        if best_key is None or key < best_key:
            best_key, best_m = key, m
    total = spec.gauge.phi + phi + 2.0 * best_m * np.pi / n
    return angle_spectrum(spec._gm, ProductStructure(total), spec.point)


# ---------------------------------------------------------------------------
# second fundamental form


@dataclass
class LagrangianSFF:
    """Cubic components of the second fundamental form in the adapted frame."""

    point: np.ndarray
    frame: np.ndarray
    components: np.ndarray        # (n, n, n): h_{ij}^k = g(h(e_i, e_j), J e_k)
    mean_curvature: np.ndarray    # (n,): (1/n) sum_i h_{ii}^k
    symmetry_residual: float
    coord_components: np.ndarray  # same tensor on coordinate fields
    lift_values: np.ndarray       # (d, n, n) complex: lifts of h(d_a, d_b)


def _sff_lift_batch(gm: GaussMapField, P: np.ndarray):
    """h-lifts and coordinate cubic tensors at a batch of points.

    Returns (hlift (m, d, n, n), T (m, n, n, n), W (m, d, n), G (m, n, n)).
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    m = P.shape[0]
    n = gm.patch.n
    eta = gm.eta
    Z = np.atleast_2d(gm.lift(P))
    W = jacobian_batch(gm.lift, P, gm.jac_cfg)
    G = np.real(np.einsum("mda,d,mdb->mab", W, eta, np.conj(W)))
    H = hessian_batch(gm.lift, P, gm.hess_cfg)  # (m, d, n, n)

    Zbar = np.conj(Z)
    hz = np.einsum("mdab,d,md->mab", H, eta, np.conj(Z))
    hzbar = np.einsum("mdab,d,md->mab", H, eta, np.conj(Zbar))
    V = H + Z[:, :, None, None] * hz[:, None, :, :] + Zbar[:, :, None, None] * hzbar[:, None, :, :]
    # remove the dG-tangential part with metric-correct coefficients
    rhs = np.real(np.einsum("mdab,d,mdc->mcab", V, eta, np.conj(W)))
    coeff = np.linalg.solve(G, rhs.reshape(m, n, n * n)).reshape(m, n, n, n)
    V = V - np.einsum("mdc,mcab->mdab", W, coeff)
    T = np.real(np.einsum("mdab,d,mdc->mabc", V, eta, np.conj(1j * W)))
    return V, T, W, G


def second_fundamental_form(gm: GaussMapField, spec: AngleSpectrum,
                            p: np.ndarray) -> LagrangianSFF:
    """Totally symmetric components h_{ij}^k in the spectrum's frame."""
    p = np.asarray(p, dtype=float)
    hlift, T, _, _ = _sff_lift_batch(gm, p[None, :])
    hlift, T = hlift[0], T[0]
    E = spec.frame
    comp = np.einsum("ai,bj,ck,abc->ijk", E, E, E, T)
    sym = max(
        float(np.abs(comp - comp.transpose(perm)).max())
        for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))
    )
    n = comp.shape[0]
    jh = np.einsum("iik->k", comp) / n
    return LagrangianSFF(
        point=p,
        frame=E,
        components=comp,
        mean_curvature=jh,
        symmetry_residual=sym,
        coord_components=T,
        lift_values=hlift,
    )


# ---------------------------------------------------------------------------
# verification operations


class ThetaLambdaPair(NamedTuple):
    indices: tuple
    residual: float
    infinite_case: bool


@dataclass
class ThetaLambdaResult:
    lambdas: np.ndarray           # ascending
    thetas: np.ndarray            # paired so cot(theta) is ascending
    direct_residuals: np.ndarray  # |lambda_j - cot(theta_j)|
    pair_residuals: List[ThetaLambdaPair]

    @property
    def max_direct(self) -> float:
        return float(self.direct_residuals.max())

    @property
    def max_pair(self) -> float:
        return max((r.residual for r in self.pair_residuals), default=0.0)


def verify_theta_lambda(gm: GaussMapField, p: np.ndarray,
                        min_gap: float = 1e-3) -> ThetaLambdaResult:
    """Check lambda_j = cot(theta_j) for the lift-induced gauge at p.

    Also checks the gauge-free relation
    cot(theta_j - theta_k) = +-(lambda_j lambda_k + 1)/(lambda_j - lambda_k)
    for pairs with |lambda_j - lambda_k| >= min_gap, either sign accepted;
    the residual is the cross-multiplied form normalized by the hypotenuse,
    so near-infinite cotangents stay finite and are flagged instead.
    """
    p = np.asarray(p, dtype=float)
    lam = np.sort(gm.shape_at(p).principal_curvatures)
    spec = angle_spectrum(gm, ProductStructure.canonical(), p)
    theta = np.sort(spec.angles)[::-1]  # cot is decreasing on (0, pi)
    with np.errstate(divide="ignore"):
        direct = np.abs(lam - 1.0 / np.tan(theta))
    pairs: List[ThetaLambdaPair] = []
    n = lam.size
    for j in range(n):
        for k in range(j + 1, n):
            if abs(lam[j] - lam[k]) < min_gap:
                continue
            dtheta = theta[j] - theta[k]
            s, c = np.sin(dtheta), np.cos(dtheta)
            num = lam[j] * lam[k] + 1.0
            den = lam[j] - lam[k]
            scale = float(np.hypot(num, den))
            residual = min(abs(c * den - s * num), abs(c * den + s * num)) / scale
            pairs.append(ThetaLambdaPair((j, k), float(residual), bool(abs(s) < 1e-6)))
    return ThetaLambdaResult(lam, theta, direct, pairs)


@dataclass
class PalmerResult:
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def residuals(self) -> np.ndarray:
        return np.abs(self.lhs - self.rhs)

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max())

    @property
    def max_side(self) -> float:
        return float(max(np.abs(self.lhs).max(), np.abs(self.rhs).max()))


def verify_palmer(gm: GaussMapField, p: np.ndarray,
                  field_step: float = 1e-2) -> PalmerResult:
    """g(JH, dG v) against (1/n) d(sum_j arctan lambda_j) v per coordinate v."""
    p = np.asarray(p, dtype=float)
    n = gm.patch.n
    hlift, _, W, G = _sff_lift_batch(gm, p[None, :])
    hlift, W, G = hlift[0], W[0], G[0]
    Ginv = np.linalg.inv(G)
    H = np.einsum("ab,dab->d", Ginv, hlift) / n
    lhs = np.real(np.einsum("d,d,da->a", 1j * H, gm.eta, np.conj(W)))
    # d(sum arctan lambda) by central differences of the eigenvalue field
    pts = p[None, None, :] + field_step * _FD_OFFSETS[:, None, None] * np.eye(n)[None, :, :]
    lam = shape_eigenvalues_batch(gm.patch, pts.reshape(-1, n), gm.jac_cfg, gm.hess_cfg)
    F = np.arctan(lam).sum(axis=1).reshape(_FD_OFFSETS.size, n)
    rhs = np.einsum("s,sa->a", _FD_WEIGHTS, F) / (field_step * n)
    return PalmerResult(lhs, rhs)


# ---------------------------------------------------------------------------
# differentiated angle relations


def _aligned_spectrum(gm: GaussMapField, gauge: ProductStructure, q: np.ndarray,
                      ref: AngleSpectrum, overlap_tol: float = 0.5):
    """Spectrum at q with angles and frame continued from the reference.

    Within clusters of repeated angles the eigenframe is only defined up to
    rotation; the reference frame is projected onto the matched cluster span
    and re-orthonormalized, which yields a smooth section when branches do
    not cross. Raises EigenCrossingError when the clusters cannot be matched.
    """
    raw = angle_spectrum(gm, gauge, q)
    _, _, Gq = gm.frame_at(q)
    n = raw.angles.size

    # cluster the reference angles mod pi
    order = np.argsort(ref.angles)
    clusters: List[List[int]] = []
    for idx in order:
        if clusters and angle_distance(ref.angles[idx], ref.angles[clusters[-1][-1]]) < 1e-5:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    # merge the seam cluster (angles near 0 and near pi are neighbors)
    if len(clusters) > 1 and angle_distance(
        ref.angles[clusters[0][0]], ref.angles[clusters[-1][-1]]
    ) < 1e-5:
        clusters[0].extend(clusters.pop())

    theta_out = np.empty(n)
    frame_out = np.empty_like(ref.frame)
    taken = np.zeros(n, dtype=bool)
    for members in clusters:
        dist = angle_distance(raw.angles, ref.angles[members[0]])
        cand = [j for j in np.argsort(dist)[: len(members)] if not taken[j]]
        if len(cand) < len(members) or dist[cand].max() > 0.3:
            raise EigenCrossingError(
                f"angle branches could not be continued from {ref.point} to {q}"
            )
        taken[cand] = True
        span = raw.frame[:, cand]                       # G_q-orthonormal columns
        coeff = span.T @ Gq @ ref.frame[:, members]     # project reference frame
        new = span @ coeff
        for c in range(len(members)):                   # Gram-Schmidt in G_q
            v = new[:, c]
            for c2 in range(c):
                v = v - (new[:, c2] @ Gq @ v) * new[:, c2]
            norm = float(np.sqrt(v @ Gq @ v))
            if norm < overlap_tol:
                raise EigenCrossingError(
                    f"frame overlap too small ({norm:.2f}) between {ref.point} and {q}"
                )
            new[:, c] = v / norm
        for c, j in enumerate(members):
            frame_out[:, j] = new[:, c]
            # unwrap to the representative nearest the reference angle
            t = raw.angles[cand[0]]
            shift = np.round((ref.angles[j] - t) / np.pi)
            theta_out[j] = t + shift * np.pi
    return theta_out, frame_out


class ThetaDerivativeRecord(NamedTuple):
    kind: str          # "theta_derivative" or "omega_relation"
    indices: tuple
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def verify_theta_derivatives(gm: GaussMapField, spec: AngleSpectrum, p: np.ndarray,
                             field_step: float = FIELD_STEP,
                             sin_gap: float = 1e-4) -> List[ThetaDerivativeRecord]:
    """Differentiated angle relations at p.

    Checks the gauge-free combination e_i(theta_j - theta_k) =
    h_jj^i - h_kk^i and sin(theta_j - theta_k) w_j^k(e_i) =
    cos(theta_j - theta_k) h_ij^k; pairs with |sin| below `sin_gap` are
    skipped for the second relation.
    """
    p = np.asarray(p, dtype=float)
    n = gm.patch.n
    sff = second_fundamental_form(gm, spec, p)
    h = sff.components
    E0 = spec.frame
    _, _, G0 = gm.frame_at(p)

    dtheta = np.empty((n, n))   # dtheta[a, j] = d_a theta_j
    dframe = np.empty((n, n, n))  # dframe[a, b, j] = d_a E[b, j]
    for a in range(n):
        thetas, frames = [], []
        for off in _FD_OFFSETS:
            q = p.copy()
            q[a] += off * field_step
            th, fr = _aligned_spectrum(gm, spec.gauge, q, spec)
            thetas.append(th)
            frames.append(fr)
        dtheta[a] = np.einsum("s,sj->j", _FD_WEIGHTS, np.array(thetas)) / field_step
        dframe[a] = np.einsum("s,sbj->bj", _FD_WEIGHTS, np.array(frames)) / field_step

    gamma = christoffel(gm.metric_field, p)
    # nabla_{e_i} e_j in coordinates, then omega_j^k(e_i) = g(. , e_k)
    nabla = np.einsum("ai,abj->bij", E0, dframe) + np.einsum(
        "ai,bj,cab->cij", E0, E0, gamma
    )
    omega = np.einsum("cij,cb,bk->ijk", nabla, G0, E0)  # omega[i, j, k] = w_j^k(e_i)

    e_dtheta = np.einsum("ai,aj->ij", E0, dtheta)  # e_i(theta_j)

    records: List[ThetaDerivativeRecord] = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if j == k:
                    continue
                lhs = e_dtheta[i, j] - e_dtheta[i, k]
                rhs = h[j, j, i] - h[k, k, i]
                records.append(ThetaDerivativeRecord("theta_derivative", (i, j, k), lhs, rhs))
                delta = spec.angles[j] - spec.angles[k]
                if abs(np.sin(delta)) >= sin_gap:
                    records.append(
                        ThetaDerivativeRecord(
                            "omega_relation", (i, j, k),
                            float(np.sin(delta) * omega[i, j, k]),
                            float(np.cos(delta) * h[i, j, k]),
                        )
                    )
    return records


# ---------------------------------------------------------------------------
# curvature


def sectional_curvature(spec: AngleSpectrum, sff: LagrangianSFF, i: int, j: int) -> float:
    """Sectional curvature of the plane (e_i, e_j) of the induced metric."""
    if i == j:
        raise ContractViolationError("sectional curvature needs two distinct directions")
    h = sff.components
    dtheta = spec.angles[i] - spec.angles[j]
    return float(
        -2.0 * np.cos(dtheta) ** 2
        + np.einsum("k,k->", h[i, i], h[j, j])
        - np.einsum("k,k->", h[i, j], h[i, j])
    )


@dataclass
class GaussCodazziResult:
    gauss_residual: float
    codazzi_residual: float


def verify_gauss_codazzi(gm: GaussMapField, spec: Optional[AngleSpectrum],
                         sff: Optional[LagrangianSFF], p: np.ndarray,
                         field_step: float = FIELD_STEP) -> GaussCodazziResult:
    """Gauss and Codazzi equations at p against a finite-difference oracle.

    The left sides come from the induced metric alone (Christoffel symbols
    by finite differences); the right sides from B, C and the cubic form.
    Both sides are gauge-invariant combinations, evaluated here in chart
    coordinates so no eigenframe continuation is needed.
    """
    p = np.asarray(p, dtype=float)
    n = gm.patch.n
    z, W, G = gm.frame_at(p)
    eta = gm.eta

    R_int = riemann_lowered(gm.metric_field, p, field_step)

    AW = _apply_A_matrix(z, W, 0.0, eta)
    b = np.real(_hmat(AW, W, eta))
    c = -np.real(_hmat(AW, 1j * W, eta))
    b = 0.5 * (b + b.T)
    c = 0.5 * (c + c.T)

    if sff is not None and np.array_equal(sff.point, p):
        hlift = sff.lift_values
        T0 = sff.coord_components
    else:
        hl, T, _, _ = _sff_lift_batch(gm, p[None, :])
        hlift, T0 = hl[0], T[0]
    hh = np.real(np.einsum("dab,d,dce->abce", hlift, eta, np.conj(hlift)))

    gauss_rhs = (
        -np.einsum("bc,ad->abcd", G, G)
        + np.einsum("ac,bd->abcd", G, G)
        - np.einsum("bc,ad->abcd", b, b)
        + np.einsum("ac,bd->abcd", b, b)
        - np.einsum("bc,ad->abcd", c, c)
        + np.einsum("ac,bd->abcd", c, c)
        + np.einsum("bcad->abcd", hh)
        - np.einsum("acbd->abcd", hh)
    )
    gauss_residual = float(np.abs(R_int - gauss_rhs).max())

    def T_field(P: np.ndarray) -> np.ndarray:
        _, T, _, _ = _sff_lift_batch(gm, P)
        return T

    pts = p[None, None, :] + field_step * _FD_OFFSETS[:, None, None] * np.eye(n)[None, :, :]
    Tvals = T_field(pts.reshape(-1, n)).reshape(_FD_OFFSETS.size, n, n, n, n)
    dT = np.einsum("s,seabc->eabc", _FD_WEIGHTS, Tvals) / field_step
    gamma = christoffel(gm.metric_field, p, field_step)
    nablaT = (
        dT
        - np.einsum("fea,fbc->eabc", gamma, T0)
        - np.einsum("feb,afc->eabc", gamma, T0)
        - np.einsum("fec,abf->eabc", gamma, T0)
    )
    cod_lhs = np.einsum("abcd->abcd", nablaT) - np.einsum("bacd->abcd", nablaT)
    cod_rhs = (
        np.einsum("bc,ad->abcd", b, c)
        - np.einsum("ac,bd->abcd", b, c)
        - np.einsum("bc,ad->abcd", c, b)
        + np.einsum("ac,bd->abcd", c, b)
    )
    codazzi_residual = float(np.abs(cod_lhs - cod_rhs).max())
    return GaussCodazziResult(gauss_residual, codazzi_residual)
