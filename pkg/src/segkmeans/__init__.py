"""k-means clustering of planar segments and polylines under the squared Hausdorff distance."""

from .coreset import Coreset, SensitivityProfile, build_coreset, construct_coreset, coreset_size, sensitivities
from .errors import InternalInvariantError, InvalidInputError, ParseError, ResourceLimitError
from .frechet_bench import frechet_cost, is_frechet_mean, perpendicular_instance
from .geometry import (
    CandidateFamily,
    Point,
    RegionLabel,
    Segment,
    candidate_family,
    classify_point,
    hausdorff_segments,
    point_segment_distance,
)
from .io import emit_result, emit_svg, load_polylines, load_segments
from .objective import CenterTuple, WeightedSegment, assign, cost
from .optimizer import ClusteringResult, GridSpec, OptimizerConfig, certify, grid_brute_force, local_search
from .pipeline import PipelineConfig, run_pipeline, split_epsilon
from .polyline import Polyline, hausdorff_polylines, hausdorff_polylines_maxmin
from .seeding import BicriteriaResult, bicriteria_seed

__version__ = "0.1.0"

__all__ = [
    "Coreset",
    "SensitivityProfile",
    "build_coreset",
    "construct_coreset",
    "coreset_size",
    "sensitivities",
    "InternalInvariantError",
    "InvalidInputError",
    "ParseError",
    "ResourceLimitError",
    "frechet_cost",
    "is_frechet_mean",
    "perpendicular_instance",
    "CandidateFamily",
    "Point",
    "RegionLabel",
    "Segment",
    "candidate_family",
    "classify_point",
    "hausdorff_segments",
    "point_segment_distance",
    "emit_result",
    "emit_svg",
    "load_polylines",
    "load_segments",
    "CenterTuple",
    "WeightedSegment",
    "assign",
    "cost",
    "ClusteringResult",
    "GridSpec",
    "OptimizerConfig",
    "certify",
    "grid_brute_force",
    "local_search",
    "PipelineConfig",
    "run_pipeline",
    "split_epsilon",
    "Polyline",
    "hausdorff_polylines",
    "hausdorff_polylines_maxmin",
    "BicriteriaResult",
    "bicriteria_seed",
]
