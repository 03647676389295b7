"""Geospatial decision support for ranking candidate housing locations.

Combines percentile-normalized area attributes with distance-based proximity
criteria under user-supplied weights, producing a desirability raster and an
ordered apartment list, with a safe submission path for new listings.
"""

from .catalog import (
    Apartment,
    BlockGroup,
    Catalog,
    CatalogStats,
    Place,
    PlaceCategory,
    School,
    catalog_stats,
    estimate_monthly_cost,
    filter_affordable,
    parse_blockgroups_csv,
    parse_places_csv,
)
from .geo import (
    BoundingBox,
    GeoPoint,
    GridSpec,
    RasterGrid,
    cell_center,
    grid_from_bbox,
    haversine_distance,
    point_in_polygon,
)
from .scoring import (
    DEFAULT_WEIGHT_PRESET,
    CriterionId,
    ProximityConfig,
    RankedApartment,
    ScoreBreakdown,
    WeightVector,
    build_percentile_tables,
    composite_score,
    criterion_score,
    percentile_scores,
    rank_apartments,
    score_raster,
)
from .spatial import PlaceIndex, build_index
from .submissions import (
    Geocoder,
    MergeReport,
    Submission,
    SubmissionStore,
    TableGeocoder,
    canonical_bytes,
    merge_pending,
    save_submission,
    submission_filename,
)

__all__ = [name for name in dir() if not name.startswith("_")]
