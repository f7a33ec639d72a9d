"""Minimization diagrams for separable convex functions, smoothed
distance and dilation on star networks, and an annulus Lloyd variant."""

from .errors import (
    ComputationError,
    ConstructionError,
    DegeneracyError,
    DomainError,
    EmptyCellError,
    EmptyLevelSetError,
    InputError,
    MindiagError,
    NumericError,
    PoleError,
    UndefinedPointError,
)
from .diagram import (
    Arc,
    CellTopology,
    MinDiagram,
    RasterDiagram,
    VertexRecord,
    build_incremental,
    build_raster,
    cell_boundary_points,
    diagram_to_json,
    feature_counts,
    point_in_cell,
    raster_cell_topology,
    raster_to_pgm,
    verify_against_raster,
)
from .geometry import (
    Bisector,
    CrossingReport,
    FunctionPair,
    LevelSet,
    Window,
    bisector_y_at_x,
    classify_bisector,
    count_bisector_intersections,
    count_crossings,
    crossing_report,
    curvature_measure,
    sample_level_set,
    t_curve_slope,
    tangent_slope,
    three_site_vertex,
)
from .metric import (
    OriginAnchoredMetric,
    PlanarPoint,
    TransformedPoint,
    delta_distance,
    dilation,
    exp_transform,
    f_to_smoothed,
    log_transform,
    smoothed_distance,
    smoothed_to_f,
)
from .profiles import (
    AdmissibilityReport,
    Profile1D,
    admissibility_margin,
    check_admissible_on,
    make_builtin,
)
from .smoothed import (
    AngleReport,
    CellAngle,
    SmoothedDiagram,
    StarNetwork,
    build_smoothed_voronoi,
    cell_outline,
    check_angle_condition,
    max_dilation_pair_bruteforce,
    max_dilation_pair_via_diagram,
    modified_distance,
    smoothed_to_json_dict,
)
from .lloyd import (
    AnnulusConfig,
    LloydState,
    LloydTrajectory,
    assign_pixels,
    cell_objective,
    initial_state,
    lloyd_step,
    objective_value,
    run_lloyd,
    sample_euclidean,
    sample_exponential,
    spacing_cv,
    weighted_centroid,
)
from .svg import (
    Marker,
    Polyline,
    RasterUnderlay,
    Scene,
    label_color,
    render_svg,
)
from .figures import (
    fig1_scene,
    fig2_scene,
    fig3_scene,
    fig6_frames,
    figure_command,
    smoothed_circle,
)
from .pointfile import load_points, parse_points

__version__ = "0.1.0"
