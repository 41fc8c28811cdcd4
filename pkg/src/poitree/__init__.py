"""Two-tier place extraction from raw GPS trajectories.

The pipeline: parse raw fixes, clean them (accuracy filter, dwell
attribution, deduplication, gap marking), then either extract a two-tier
tree of places by maximizing a visit-regularity score over dendrogram cuts,
or run one of the conventional stay-point clustering baselines. Visit
sequences over the extracted places feed an entropy estimator and the
derived ceiling on location predictability. A seeded synthetic-trajectory
generator with planted ground truth supports end-to-end evaluation.
"""

from .baselines import (
    BaselineParams,
    LabeledClusters,
    LinkageSearch,
    OpticsAnalysis,
    PipelineResult,
    db_index,
    dbscan,
    optics_analysis,
    optics_clusters,
    optimize_linkage,
    silhouette,
    sp_dbscan,
    sp_linkage,
    sp_optics,
)
from .compare import (
    EvaluationRow,
    METHODS,
    RunConfig,
    evaluate_user,
    rows_to_csv,
    run_compare,
    summarize,
)
from .estimators import (
    PoiTreeExtractor,
    StayPointDbscan,
    StayPointLinkage,
    StayPointOptics,
)
from .extraction import (
    OptimizationTrace,
    extract_pois,
    find_optimal_cut,
    poi_score,
    temporal_stats,
)
from .geo import (
    DistanceMatrix,
    EARTH_RADIUS_M,
    GeoPoint,
    PlanarPoint,
    haversine_m,
    pairwise_matrix,
    project_equirectangular,
    unproject_equirectangular,
)
from .hclust import ClusterAssignment, Dendrogram, cluster_members, cut, linkage_complete
from .predictability import (
    PoiSequence,
    PredictabilityResult,
    lz_entropy_bits,
    lz_match_lengths,
    predictability_limit,
    sequence_from_labels,
    sequence_from_tree,
    solve_fano,
)
from .staypoint import StayPoint, detect_staypoints
from .synth import (
    Persona,
    PlaceSpec,
    PlantedPoi,
    SynthResult,
    VisitBlock,
    builtin_persona,
    generate,
    persona_from_json,
    persona_to_json,
    recovery_personas,
    sweep_personas,
    timing_persona,
    two_building_trajectory,
)
from .trajectory import (
    CleanReport,
    ColumnSchema,
    DataError,
    Fix,
    ParseReport,
    Trajectory,
    clean,
    day_index,
    load_csv,
    parse_fixes,
    preprocess,
    save_csv,
)
from .tree import (
    GLOBAL_THRESHOLDS,
    LOCAL_THRESHOLDS,
    Poi,
    PoiThresholds,
    PoiTree,
    TIER_GLOBAL,
    TIER_LOCAL,
    TemporalStats,
    tree_from_dict,
    tree_from_json,
    tree_to_dict,
    tree_to_geojson,
    tree_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineParams",
    "CleanReport",
    "ClusterAssignment",
    "ColumnSchema",
    "DataError",
    "Dendrogram",
    "DistanceMatrix",
    "EARTH_RADIUS_M",
    "EvaluationRow",
    "Fix",
    "GLOBAL_THRESHOLDS",
    "GeoPoint",
    "LOCAL_THRESHOLDS",
    "LabeledClusters",
    "LinkageSearch",
    "METHODS",
    "OpticsAnalysis",
    "OptimizationTrace",
    "ParseReport",
    "Persona",
    "PipelineResult",
    "PlaceSpec",
    "PlanarPoint",
    "PlantedPoi",
    "Poi",
    "PoiSequence",
    "PoiThresholds",
    "PoiTree",
    "PoiTreeExtractor",
    "PredictabilityResult",
    "RunConfig",
    "StayPoint",
    "StayPointDbscan",
    "StayPointLinkage",
    "StayPointOptics",
    "SynthResult",
    "TIER_GLOBAL",
    "TIER_LOCAL",
    "TemporalStats",
    "Trajectory",
    "VisitBlock",
    "builtin_persona",
    "clean",
    "cluster_members",
    "cut",
    "day_index",
    "db_index",
    "dbscan",
    "detect_staypoints",
    "evaluate_user",
    "extract_pois",
    "find_optimal_cut",
    "generate",
    "haversine_m",
    "linkage_complete",
    "load_csv",
    "lz_entropy_bits",
    "lz_match_lengths",
    "optics_analysis",
    "optics_clusters",
    "optimize_linkage",
    "pairwise_matrix",
    "parse_fixes",
    "persona_from_json",
    "persona_to_json",
    "poi_score",
    "predictability_limit",
    "preprocess",
    "project_equirectangular",
    "recovery_personas",
    "rows_to_csv",
    "run_compare",
    "save_csv",
    "sequence_from_labels",
    "sequence_from_tree",
    "silhouette",
    "solve_fano",
    "sp_dbscan",
    "sp_linkage",
    "sp_optics",
    "summarize",
    "sweep_personas",
    "temporal_stats",
    "timing_persona",
    "tree_from_dict",
    "tree_from_json",
    "tree_to_dict",
    "tree_to_geojson",
    "tree_to_json",
    "two_building_trajectory",
    "unproject_equirectangular",
    "__version__",
]
