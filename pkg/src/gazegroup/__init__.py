"""Group eye-tracking entities by weighted gaze-metric similarity and
render the result as a dimensionally stacked, Hilbert-ordered matrix."""

from .clustering import (
    Dendrogram,
    Merge,
    agglomerate,
    boundaries_for_cut,
    cluster_metrics,
    correlation_distance,
    cut,
    leaf_order,
    ordered_entities,
)
from .colorspace import lab_to_srgb8, lch_to_lab, lch_to_srgb8, in_srgb_gamut
from .hilbert import d2xy, side_length, subgrid_order, xy2d
from .ingest import (
    Dataset,
    EntityAxis,
    Fixation,
    Scanpath,
    ValidationReport,
    parse_fixation_csv,
    parse_sidecar_csv,
    pivot_entities,
    serialize_dataset,
    with_sidecar,
)
from .layout import (
    ColorSpec,
    MatrixLayout,
    SubgridAssignment,
    assign_colors,
    assign_subgrid,
    build_matrix_layout,
    layout_to_json,
    render_svg,
)
from .metrics import (
    METRIC_IDS,
    MetricTable,
    MetricVector,
    WeightVector,
    aggregate,
    k_coefficient,
    merge_metrics,
    moments,
    normalize,
    scanpath_metrics,
    table_to_csv,
    table_to_json,
)
from .similarity import (
    CorrelationMatrix,
    DistanceMatrix,
    SimilarityTensor,
    combined_distance,
    metric_correlations,
    pairwise_similarity,
    single_metric_distance,
)
from .synth import GroupSpec, SynthResult, generate, parse_group_spec

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "Dendrogram",
    "EntityAxis",
    "Fixation",
    "GroupSpec",
    "Merge",
    "METRIC_IDS",
    "MetricTable",
    "MetricVector",
    "MatrixLayout",
    "ColorSpec",
    "CorrelationMatrix",
    "DistanceMatrix",
    "Scanpath",
    "SimilarityTensor",
    "SubgridAssignment",
    "SynthResult",
    "ValidationReport",
    "WeightVector",
    "agglomerate",
    "aggregate",
    "assign_colors",
    "assign_subgrid",
    "boundaries_for_cut",
    "build_matrix_layout",
    "cluster_metrics",
    "combined_distance",
    "correlation_distance",
    "cut",
    "d2xy",
    "generate",
    "in_srgb_gamut",
    "k_coefficient",
    "lab_to_srgb8",
    "layout_to_json",
    "lch_to_lab",
    "lch_to_srgb8",
    "leaf_order",
    "merge_metrics",
    "metric_correlations",
    "moments",
    "normalize",
    "ordered_entities",
    "pairwise_similarity",
    "parse_fixation_csv",
    "parse_group_spec",
    "parse_sidecar_csv",
    "pivot_entities",
    "render_svg",
    "scanpath_metrics",
    "serialize_dataset",
    "side_length",
    "single_metric_distance",
    "subgrid_order",
    "table_to_csv",
    "table_to_json",
    "with_sidecar",
    "xy2d",
]
