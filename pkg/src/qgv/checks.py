"""Check registry and verification runner.

Every check has a stable id, a suite, the identity it tests (as a formula
string; these are what ``--list-checks`` prints and what reports carry), a
default tolerance, and a per-point evaluator. Geometric errors raised by an
evaluator are recorded as failed checks, not crashes.

Default suites are deterministic for a fixed config: grids are fixed and the
auxiliary random vectors used by the structure/curvature property checks are
drawn from a generator seeded by (config.seed, point index).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import catalog
from .errors import ConfigError, QgvError, UnknownSuiteError
from .expr import chart_from_expressions
from .gaussmap import (
    GaussMapField,
    angle_distance,
    angle_multiset_distance,
    angle_spectrum,
    build_gauss_map,
    gauge_normalize,
    lagrangian_residual,
    second_fundamental_form,
    sectional_curvature,
    verify_gauss_codazzi,
    verify_palmer,
    verify_theta_derivatives,
    verify_theta_lambda,
)
from .hypersurface import HypersurfacePatch, parallel_patch
from .indefinite import mink_dot
from .quadric import ProductStructure, apply_A, apply_J, curvature_Qstar, horizontal_project, quadric_metric, same_point
from .report import CheckRecord, VerificationReport

SUITES = ("basic", "angles", "palmer", "curvature", "gauss_codazzi", "parallel", "gauge")

PARALLEL_SHIFTS = (0.2, 0.5, 1.0)
GAUGE_SHIFTS = (0.3, np.pi / 2, np.pi)


@dataclass
class RunConfig:
    """Everything a verification run needs; see the README for the schema."""

    example: Optional[str] = None
    alpha: Optional[float] = None
    k: Optional[int] = None
    n: Optional[int] = None
    chart: Optional[dict] = None
    grid: int = 5
    box: Optional[list] = None
    suites: Optional[List[str]] = None
    tolerances: Dict[str, float] = dc_field(default_factory=dict)
    seed: int = 0
    jobs: int = 1
    report: Optional[str] = None
    format: str = "json"
    dump_fields: Optional[str] = None

    def validate(self) -> None:
        if (self.example is None) == (self.chart is None):
            raise ConfigError("exactly one of an example id or a chart table is required")
        if self.example is not None:
            if self.example not in catalog.ENTRY_IDS:
                raise ConfigError(f"unknown example {self.example!r}; "
                                  f"known: {', '.join(catalog.ENTRY_IDS)}")
            if self.n is None:
                raise ConfigError("missing dimension n")
        if self.chart is not None:
            for key in ("params", "coords"):
                if key not in self.chart:
                    raise ConfigError(f"chart table is missing {key!r}")
        if self.grid < 3:
            raise ConfigError("grid must have at least 3 points per axis")
        for key, val in self.tolerances.items():
            if val <= 0:
                raise ConfigError(f"tolerance for {key!r} must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        for s in self.suites or ():
            if s not in SUITES:
                raise UnknownSuiteError(f"unknown suite {s!r}; known: {', '.join(SUITES)}")


@dataclass
class CheckDef:
    id: str
    suite: str
    identity: str
    tolerance: float
    fn: Callable
    catalog_only: bool = False
    min_n: int = 1


class RunContext:
    """Shared state across a run: the field, caches and derived patches."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.entry = None
        if config.example is not None:
            self.entry = catalog.make_entry(
                config.example, config.n, alpha=config.alpha, k=config.k,
            )
            if config.box is not None:
                self.entry.box = np.asarray(config.box, dtype=float).reshape(config.n, 2)
            self.patch = catalog.instantiate(self.entry)
            self.box = self.entry.box
        else:
            table = config.chart
            n = len(table["params"])
            chart = chart_from_expressions(table["params"], table["coords"],
                                           domain=table.get("domain"))
            if chart.dim_out != n + 2:
                raise ConfigError(f"chart must have n+2 = {n + 2} coordinates")
            box = config.box if config.box is not None else table.get("box")
            if box is None:
                raise ConfigError("external charts need a grid box")
            self.box = np.asarray(box, dtype=float).reshape(n, 2)
            self.patch = HypersurfacePatch(
                chart, n, orientation=int(table.get("orientation", 1)),
                ref_point=self.box.mean(axis=1), name="external chart",
            )
        self.gm = build_gauss_map(self.patch)
        self.n = self.patch.n
        self._specs: dict = {}
        self._sffs: dict = {}
        self._theta_derivs: dict = {}
        self._parallel: Dict[float, GaussMapField] = {}

    def grid_points(self) -> np.ndarray:
        axes = [np.linspace(lo, hi, self.config.grid) for lo, hi in self.box]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def spectrum(self, p: np.ndarray):
        key = p.tobytes()
        if key not in self._specs:
            self._specs[key] = angle_spectrum(self.gm, ProductStructure.canonical(), p)
        return self._specs[key]

    def sff(self, p: np.ndarray):
        key = p.tobytes()
        if key not in self._sffs:
            self._sffs[key] = second_fundamental_form(self.gm, self.spectrum(p), p)
        return self._sffs[key]

    def theta_derivative_records(self, p: np.ndarray):
        key = p.tobytes()
        if key not in self._theta_derivs:
            self._theta_derivs[key] = verify_theta_derivatives(self.gm, self.spectrum(p), p)
        return self._theta_derivs[key]

    def parallel_gm(self, t: float) -> GaussMapField:
        if t not in self._parallel:
            self._parallel[t] = build_gauss_map(parallel_patch(self.patch, t))
        return self._parallel[t]

    def point_rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, index])

    def random_horizontal(self, p: np.ndarray, rng) -> "object":
        z = self.gm.lift_at(p)
        d = self.patch.ambient_dim
        w = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return horizontal_project(z, w)

    @property
    def is_minimal_family(self) -> bool:
        return self.entry is not None and self.entry.id in ("umbilic", "product")


# ---------------------------------------------------------------------------
# check evaluators: (ctx, p, rng) -> list of (residual, passed_or_None, note)


def _chk_ads_norm(ctx, p, rng):
    a = ctx.patch.chart(p)
    return [(abs(float(mink_dot(a, a, 2)) + 1.0), None, "")]


def _chk_normal_unit(ctx, p, rng):
    res = ctx.gm.lift_residuals(p)
    return [(res["unit"] + res["imag"], None, "")]


def _chk_normal_orthogonal(ctx, p, rng):
    from .hypersurface import frame_batch

    a, T, b = frame_batch(ctx.patch, p[None, :], ctx.gm.jac_cfg)
    r1 = abs(float(mink_dot(a[0], b[0], 2)))
    r2 = float(np.abs(np.einsum("di,d->i", T[0], b[0] * ctx.gm.eta)).max())
    return [(max(r1, r2), None, "")]


def _chk_metric_spacelike(ctx, p, rng):
    _, _, G = ctx.gm.frame_at(p)
    min_eig = float(np.linalg.eigvalsh(G).min())
    return [(max(0.0, -min_eig), min_eig > 1e-10, f"min eigenvalue {min_eig:.3e}")]


def _chk_shape_selfadjoint(ctx, p, rng):
    sd = ctx.gm.shape_at(p)
    K = sd.metric @ sd.shape
    return [(float(np.abs(K - K.T).max()), None, "")]


def _chk_golden_lambda(ctx, p, rng):
    lam = np.sort(ctx.gm.shape_at(p).principal_curvatures)
    gold = np.sort(catalog.golden_lambdas(ctx.entry, p))
    return [(float(np.abs(lam - gold).max()), None, "")]


def _chk_lift_unit(ctx, p, rng):
    res = ctx.gm.lift_residuals(p)
    return [(max(res["unit"], res["imag"]), None, "")]


def _chk_lift_quadric(ctx, p, rng):
    return [(ctx.gm.lift_residuals(p)["quadric"], None, "")]


def _chk_lift_horizontal(ctx, p, rng):
    return [(ctx.gm.lift_residuals(p)["horizontal"], None, "")]


def _chk_lagrangian(ctx, p, rng):
    return [(lagrangian_residual(ctx.gm, p), None, "")]


def _structure_vectors(ctx, p, rng):
    z, W, _ = ctx.gm.frame_at(p)
    from .quadric import QuadricPoint

    base = QuadricPoint(z)
    vecs = [horizontal_project(base, W[:, a]) for a in range(W.shape[1])]
    vecs.append(ctx.random_horizontal(p, rng))
    return vecs


def _chk_structure_involutive(ctx, p, rng):
    worst = 0.0
    for P in (ProductStructure.canonical(), ProductStructure.rotated(0.7)):
        for X in _structure_vectors(ctx, p, rng):
            AAX = apply_A(P, apply_A(P, X))
            worst = max(worst, float(np.abs(AAX.w - X.w).max()))
    return [(worst, None, "")]


def _chk_structure_symmetric(ctx, p, rng):
    worst = 0.0
    vecs = _structure_vectors(ctx, p, rng)
    for P in (ProductStructure.canonical(), ProductStructure.rotated(0.7)):
        for X in vecs:
            for Y in vecs:
                worst = max(worst, abs(quadric_metric(apply_A(P, X), Y)
                                       - quadric_metric(X, apply_A(P, Y))))
    return [(worst, None, "")]


def _chk_structure_anticommutes(ctx, p, rng):
    worst = 0.0
    for P in (ProductStructure.canonical(), ProductStructure.rotated(0.7)):
        for X in _structure_vectors(ctx, p, rng):
            AJ = apply_A(P, apply_J(X)).w
            JA = apply_J(apply_A(P, X)).w
            worst = max(worst, float(np.abs(AJ + JA).max()))
    return [(worst, None, "")]


def _chk_bc_identity(ctx, p, rng):
    return [(ctx.spectrum(p).diagnostics["bc_identity"], None, "")]


def _chk_bc_commute(ctx, p, rng):
    return [(ctx.spectrum(p).diagnostics["commutator"], None, "")]


def _chk_angle_frame(ctx, p, rng):
    return [(ctx.spectrum(p).diagnostics["frame_relation"], None, "")]


def _chk_theta_lambda(ctx, p, rng):
    return [(verify_theta_lambda(ctx.gm, p).max_direct, None, "")]


def _chk_theta_lambda_gaugefree(ctx, p, rng):
    res = verify_theta_lambda(ctx.gm, p)
    out = []
    for pair in res.pair_residuals:
        note = f"pair {pair.indices}" + (" (cot = inf case)" if pair.infinite_case else "")
        out.append((pair.residual, None, note))
    return out


def _chk_golden_theta(ctx, p, rng):
    gold = catalog.golden_thetas(ctx.entry, p)
    return [(angle_multiset_distance(ctx.spectrum(p).angles, gold), None, "")]


def _chk_palmer(ctx, p, rng):
    return [(verify_palmer(ctx.gm, p).max_residual, None, "")]


def _chk_palmer_minimal(ctx, p, rng):
    return [(verify_palmer(ctx.gm, p).max_side, None, "")]


def _chk_sff_symmetric(ctx, p, rng):
    return [(ctx.sff(p).symmetry_residual, None, "")]


def _chk_totally_geodesic(ctx, p, rng):
    return [(float(np.abs(ctx.sff(p).components).max()), None, "")]


def _chk_sectional_constant(ctx, p, rng):
    spec, sff = ctx.spectrum(p), ctx.sff(p)
    out = []
    for i in range(ctx.n):
        for j in range(i + 1, ctx.n):
            K = sectional_curvature(spec, sff, i, j)
            if ctx.entry.id == "umbilic":
                target, label = -2.0, "-2"
            else:
                same_block = (j < ctx.entry.k) or (i >= ctx.entry.k)
                target = -2.0 if same_block else 0.0
                label = f"{target:g}"
            out.append((abs(K - target), None, f"plane ({i},{j}), expect {label}"))
    return out


def _chk_theta_derivative(ctx, p, rng):
    recs = ctx.theta_derivative_records(p)
    worst_td = max((r.residual for r in recs if r.kind == "theta_derivative"), default=0.0)
    return [(worst_td, None, "")]


def _chk_omega_relation(ctx, p, rng):
    recs = ctx.theta_derivative_records(p)
    rel = [r.residual for r in recs if r.kind == "omega_relation"]
    if not rel:
        return [(0.0, None, "no pairs with distinct angles")]
    return [(max(rel), None, "")]


def _chk_curvature_antisymmetry(ctx, p, rng):
    X, Y, Z = (ctx.random_horizontal(p, rng) for _ in range(3))
    P = ProductStructure.canonical()
    r1 = float(np.abs(curvature_Qstar(P, X, X, Z).w).max())
    r2 = float(np.abs(curvature_Qstar(P, X, Y, Z).w + curvature_Qstar(P, Y, X, Z).w).max())
    return [(max(r1, r2), None, "")]


def _chk_curvature_bianchi(ctx, p, rng):
    X, Y, Z = (ctx.random_horizontal(p, rng) for _ in range(3))
    P = ProductStructure.canonical()
    total = (curvature_Qstar(P, X, Y, Z).w + curvature_Qstar(P, Y, Z, X).w
             + curvature_Qstar(P, Z, X, Y).w)
    return [(float(np.abs(total).max()), None, "")]


def _chk_curvature_gauge_invariance(ctx, p, rng):
    X, Y, Z = (ctx.random_horizontal(p, rng) for _ in range(3))
    base = curvature_Qstar(ProductStructure.canonical(), X, Y, Z).w
    worst = 0.0
    for phi in (0.4, 1.3):
        worst = max(worst, float(np.abs(
            curvature_Qstar(ProductStructure.rotated(phi), X, Y, Z).w - base
        ).max()))
    return [(worst, None, "")]


def _chk_gauss_codazzi(ctx, p, rng):
    res = verify_gauss_codazzi(ctx.gm, None, None, p)
    return [
        ("gauss_equation", res.gauss_residual, None, ""),
        ("codazzi_equation", res.codazzi_residual, None, ""),
    ]


def _chk_parallel_gauss_map(ctx, p, rng):
    z0 = ctx.gm.lift_at(p)
    out = []
    for t in PARALLEL_SHIFTS:
        res = same_point(z0, ctx.parallel_gm(t).lift_at(p))
        out.append((res.residual, None, f"t={t}"))
    return out


def _chk_parallel_roundtrip(ctx, p, rng):
    t = 0.3
    fwd = ctx.parallel_gm(t)
    back = parallel_patch(fwd.patch, -t)
    diff = float(np.abs(back.chart(p) - ctx.patch.chart(p)).max())
    return [(diff, None, f"t={t}")]


def _chk_gauge_shift(ctx, p, rng):
    base = ctx.spectrum(p)
    out = []
    for phi in GAUGE_SHIFTS:
        rotated = angle_spectrum(ctx.gm, ProductStructure.rotated(phi), p)
        dist = angle_multiset_distance(rotated.angles, base.angles - phi / 2.0)
        out.append((dist, None, f"phi={phi:.6g}"))
    return out


def _chk_gauge_normalized_sum(ctx, p, rng):
    normalized = gauge_normalize(ctx.spectrum(p))
    return [(float(angle_distance(normalized.angles.sum(), 0.0)), None, "")]


# ---------------------------------------------------------------------------
# registry

CHECKS: List[CheckDef] = [
    CheckDef("ads_norm", "basic", "⟨a,a⟩₂ = −1", 1e-8, _chk_ads_norm),
    CheckDef("normal_unit", "basic", "⟨b,b⟩₂ = −1", 1e-8, _chk_normal_unit),
    CheckDef("normal_orthogonal", "basic", "⟨b,a⟩₂ = 0 = ⟨b,∂ᵢa⟩₂", 1e-8, _chk_normal_orthogonal),
    CheckDef("metric_spacelike", "basic", "induced metric positive definite", 1e-10, _chk_metric_spacelike),
    CheckDef("shape_selfadjoint", "basic", "G·S = (G·S)ᵀ", 1e-7, _chk_shape_selfadjoint),
    CheckDef("golden_lambda", "basic", "computed λ = closed-form λ", 1e-5, _chk_golden_lambda, catalog_only=True),
    CheckDef("lift_unit", "basic", "⟪G̃,G̃⟫ = −1", 1e-8, _chk_lift_unit),
    CheckDef("lift_quadric", "basic", "−G̃₀² − G̃₁² + Σ G̃ⱼ² = 0", 1e-8, _chk_lift_quadric),
    CheckDef("lift_horizontal", "basic", "Re⟪∂ᵢG̃, i·G̃⟫ = 0", 1e-7, _chk_lift_horizontal),
    CheckDef("lagrangian", "basic", "g(J·dG eᵢ, dG eⱼ) = 0", 1e-6, _chk_lagrangian),
    CheckDef("structure_involutive", "angles", "A² = id", 1e-6, _chk_structure_involutive),
    CheckDef("structure_symmetric", "angles", "g(AX,Y) = g(X,AY)", 1e-6, _chk_structure_symmetric),
    CheckDef("structure_anticommutes", "angles", "AJ + JA = 0", 1e-6, _chk_structure_anticommutes),
    CheckDef("bc_identity", "angles", "B² + C² = id", 1e-6, _chk_bc_identity),
    CheckDef("bc_commute", "angles", "BC = CB", 1e-6, _chk_bc_commute),
    CheckDef("angle_frame", "angles", "Aeⱼ = cos(2θⱼ)eⱼ − sin(2θⱼ)Jeⱼ", 1e-6, _chk_angle_frame),
    CheckDef("theta_lambda", "angles", "λⱼ = cot θⱼ", 1e-5, _chk_theta_lambda),
    CheckDef("theta_lambda_gaugefree", "angles",
             "cot(θⱼ−θₖ) = ±(λⱼλₖ+1)/(λⱼ−λₖ)", 1e-4, _chk_theta_lambda_gaugefree),
    CheckDef("golden_theta", "angles", "θⱼ = arccot(closed-form λⱼ) mod π", 1e-5, _chk_golden_theta, catalog_only=True),
    CheckDef("palmer", "palmer", "g(JH,·) = (1/n)·d(Σ arctan λⱼ)", 1e-5, _chk_palmer),
    CheckDef("palmer_minimal", "palmer", "JH = 0 and d(Σ arctan λⱼ) = 0", 1e-6, _chk_palmer_minimal, catalog_only=True),
    CheckDef("sff_symmetric", "curvature", "h_{ij}^k symmetric in i,j,k", 1e-6, _chk_sff_symmetric),
    CheckDef("totally_geodesic", "curvature", "h = 0", 1e-6, _chk_totally_geodesic, catalog_only=True),
    CheckDef("sectional_constant", "curvature", "K(eᵢ,eⱼ) = const", 1e-5, _chk_sectional_constant,
             catalog_only=True, min_n=2),
    CheckDef("theta_derivative", "curvature", "eᵢ(θⱼ−θₖ) = hⱼⱼⁱ − hₖₖⁱ", 1e-4, _chk_theta_derivative, min_n=2),
    CheckDef("omega_relation", "curvature",
             "sin(θⱼ−θₖ)ωⱼᵏ(eᵢ) = cos(θⱼ−θₖ)h_{ij}^k", 1e-4, _chk_omega_relation, min_n=2),
    CheckDef("curvature_antisymmetry", "curvature", "R(X,Y)Z = −R(Y,X)Z", 1e-7, _chk_curvature_antisymmetry),
    CheckDef("curvature_bianchi", "curvature", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", 1e-7, _chk_curvature_bianchi),
    CheckDef("curvature_gauge_invariance", "curvature",
             "R unchanged under A ↦ cos φ·A + sin φ·JA", 1e-7, _chk_curvature_gauge_invariance),
    CheckDef("gauss_equation", "gauss_codazzi",
             "g(R(X,Y)Z,W) = Gauss right side in B, C, h", 1e-4, _chk_gauss_codazzi),
    CheckDef("codazzi_equation", "gauss_codazzi",
             "(∇̄h)(X,Y,Z) − (∇̄h)(Y,X,Z) = Codazzi right side in B, C", 1e-4, None),
    CheckDef("parallel_gauss_map", "parallel",
             "Gauss maps of parallel hypersurfaces coincide", 1e-6, _chk_parallel_gauss_map),
    CheckDef("parallel_roundtrip", "parallel",
             "parallel(parallel(a, t), −t) = a", 1e-9, _chk_parallel_roundtrip),
    CheckDef("gauge_shift", "gauge", "θⱼ(A_φ) = θⱼ(A) − φ/2 mod π", 1e-6, _chk_gauge_shift),
    CheckDef("gauge_normalized_sum", "gauge", "Σθⱼ = 0 mod π after normalization", 1e-7, _chk_gauge_normalized_sum),
]

CHECKS_BY_ID = {c.id: c for c in CHECKS}


def list_checks(suites: Optional[List[str]] = None) -> List[CheckDef]:
    """Registry entries, optionally filtered to the given suites."""
    for s in suites or ():
        if s not in SUITES:
            raise UnknownSuiteError(f"unknown suite {s!r}; known: {', '.join(SUITES)}")
    return [c for c in CHECKS if suites is None or c.suite in suites]


def _tolerance_for(check: CheckDef, config: RunConfig) -> float:
    if check.id in config.tolerances:
        return config.tolerances[check.id]
    if check.suite in config.tolerances:
        return config.tolerances[check.suite]
    return check.tolerance


def run(config: RunConfig) -> VerificationReport:
    """Execute the selected suites over the grid and assemble a report."""
    config.validate()
    started = time.perf_counter()
    ctx = RunContext(config)
    config.box = [list(ax) for ax in ctx.box]  # echo the effective box in the report
    suites = list(config.suites) if config.suites else list(SUITES)
    active = [
        c for c in CHECKS
        if c.suite in suites
        and (ctx.entry is not None or not c.catalog_only)
        and ctx.n >= c.min_n
    ]
    # the special-constant checks only have targets on these two families
    active = [
        c for c in active
        if c.id not in ("palmer_minimal", "totally_geodesic", "sectional_constant")
        or ctx.is_minimal_family
    ]
    points = ctx.grid_points()
    if any(c.suite == "parallel" for c in active):
        for t in PARALLEL_SHIFTS:
            ctx.parallel_gm(t)  # build derived patches before any thread fan-out

    def run_point(item):
        index, p = item
        rng = ctx.point_rng(index)
        records = []
        for check in active:
            if check.fn is None:
                continue  # realized by a sibling evaluator (gauss_codazzi pair)
            tol = _tolerance_for(check, config)
            try:
                results = check.fn(ctx, p, rng)
            except QgvError as exc:
                records.append(CheckRecord(
                    check.id, check.suite, check.identity, list(p),
                    None, tol, False, f"{type(exc).__name__}: {exc}",
                ))
                continue
            for res in results:
                if len(res) == 4:
                    cid, residual, passed, note = res
                    cdef = CHECKS_BY_ID[cid]
                    ctol = _tolerance_for(cdef, config)
                else:
                    residual, passed, note = res
                    cid, cdef, ctol = check.id, check, tol
                ok = passed if passed is not None else bool(residual <= ctol)
                records.append(CheckRecord(
                    cid, cdef.suite, cdef.identity, list(p),
                    float(residual), ctol, ok, note,
                ))
        return index, records

    items = list(enumerate(points))
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outs = list(pool.map(run_point, items))
    else:
        outs = [run_point(it) for it in items]
    outs.sort(key=lambda x: x[0])
    records = [r for _, recs in outs for r in recs]

    wall = time.perf_counter() - started
    return VerificationReport.assemble(config, records, wall)


def dump_fields(config: RunConfig, path: str) -> None:
    """Write per-grid-point fields (curvatures, angles) as CSV."""
    import csv

    ctx = RunContext(config)
    points = ctx.grid_points()
    n = ctx.n
    header = [f"u{i}" for i in range(n)]
    header += [f"lambda{j + 1}" for j in range(n)] + [f"theta{j + 1}" for j in range(n)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for p in points:
            lam = np.sort(ctx.gm.shape_at(p).principal_curvatures)
            theta = np.sort(ctx.spectrum(p).angles)
            writer.writerow([f"{x:.12g}" for x in (*p, *lam, *theta)])
