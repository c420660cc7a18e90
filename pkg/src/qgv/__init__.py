"""Gauss maps of spacelike anti-de Sitter hypersurfaces into the complex
hyperbolic quadric, with a numerical verification suite.

The package follows the conventions of pseudo-Riemannian geometry with
leading negative-signature coordinates: real ambient space R^{n+2}_2, the
anti-de Sitter quadric <a, a> = -1 inside it, and the complex space
C^{n+2}_2 whose projectivized null cone of -z0^2 - z1^2 + sum z_j^2 carries
the quadric that Gauss maps land in.
"""

from .catalog import (
    CatalogEntry,
    ENTRY_IDS,
    arc_length_reparametrize,
    default_profile,
    golden_lambdas,
    golden_thetas,
    instantiate,
    make_entry,
    random_rotation_entry,
)
from .checks import RunConfig, list_checks, run
from .diffcalc import DiffConfig, SmoothMap, directional_derivative, hessian, jacobian
from .errors import (
    ConfigError,
    ConstraintError,
    ContractViolationError,
    DegenerateProfileError,
    DimensionMismatchError,
    DomainError,
    EigenCrossingError,
    ExprError,
    JointDiagonalizationError,
    NormalDegenerateError,
    QgvError,
    RegularityError,
    SignatureError,
    UnknownSuiteError,
)
from .gaussmap import (
    AngleSpectrum,
    GaussMapField,
    LagrangianSFF,
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
from .hypersurface import (
    HypersurfacePatch,
    ShapeData,
    induced_metric,
    parallel_patch,
    shape_operator,
    unit_normal,
)
from .indefinite import (
    CVector,
    IndefVector,
    SymPair,
    g_selfadjoint_eigen,
    hermitian_form,
    inner_real,
    quadric_residual,
)
from .quadric import (
    HorizontalVector,
    ProductStructure,
    QuadricPoint,
    apply_A,
    apply_J,
    curvature_Qstar,
    horizontal_project,
    quadric_metric,
    same_point,
)

__version__ = "0.1.0"
