"""Axial cone-nets: construction, classification and isometric flexion.

The package builds the continuous flexible quad-surfaces whose strips lie on
cones with collinear tips, classifies which bar data admits the one-parameter
motion, reconstructs states across the admissible range, and produces general
nets through the edge-parallel (Combescure) transfer.
"""
from .errors import (
    AngleUnsolvable,
    ChedraError,
    ClosureFailure,
    DegenerateTip,
    DiscriminantNegative,
    IdealImage,
    InadmissibleSample,
    IncompatibleChaining,
    InvalidTipConfiguration,
    InvariantError,
    MixedCases,
    NonSimpleFan,
    NotFlexibleError,
    OutOfRange,
    RadicandNegative,
    SchemaError,
    ShapeMismatch,
    SingularDenominator,
    SolverDiverged,
)
from .geometry import (
    AxialMap,
    AxisTip,
    MapKind,
    Point3,
    ProfilePoint,
    apply_map,
    make_axial_map,
    profile_point,
    rotate_about_axis,
)
from .linkage import (
    BRANCHES,
    CaseLabel,
    Classification,
    CoeffTriple,
    LinkageSpec,
    Sublinkage,
    case_label,
    classify,
    compatibility_coeffs,
    extend_sublinkage,
    family_tip_height,
    flexion_range,
    interval_containing,
    residual_w,
    select_branch,
    tip_b,
)
from .nets import (
    ChainLink,
    ConeNet,
    CurveSampler,
    FlexionState,
    GeneralNet,
    Intrinsics,
    NetSpec,
    ProfileEntry,
    build_net,
    build_patch,
    build_pnet,
    compute_intrinsics,
    flex,
    flex_parallel,
    net_flexion_range,
    parallel_transfer,
    sample_semidiscrete,
    spec_from_curve,
    transfer_grid,
)
from .serialize import (
    dumps_canonical,
    export_geometry,
    geometry_document,
    load_spec,
    save_spec,
    spec_from_document,
    spec_to_document,
)
from .validation import (
    Complex3x3,
    CrossValidationSummary,
    OracleResult,
    ValidationReport,
    check_isometry,
    check_planarity,
    check_tip_collinearity,
    cross_validate,
    extract_3x3_blocks,
    kokotsakis_oracle,
    validate_state,
)

__version__ = "0.1.0"
