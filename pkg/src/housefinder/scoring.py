"""Percentile normalization, per-criterion scores, weighted composites, the
desirability raster, and the ordered apartment ranking.

Criterion directions are fixed: more jobs/retail access is better, cheaper
housing is better, less crime is better, shorter distances are better.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .catalog import (
    Apartment,
    BlockGroup,
    Catalog,
    PlaceCategory,
    block_group_containing,
)
from .geo import (
    METERS_PER_MILE,
    GeoPoint,
    GridSpec,
    RasterGrid,
    cell_center,
    haversine_distance,
)
from .spatial import PlaceIndex


class CriterionId(str, Enum):
    AFFORDABILITY = "affordability"
    JOBS = "jobs"
    RETAIL = "retail"
    CRIME = "crime"
    PROX_TRANSIT = "prox_transit"
    PROX_SCHOOLS = "prox_schools"
    PROX_MARKETS = "prox_markets"
    PROX_ANCHOR = "prox_anchor"


AREA_CRITERIA = (
    CriterionId.AFFORDABILITY,
    CriterionId.JOBS,
    CriterionId.RETAIL,
    CriterionId.CRIME,
)
PROXIMITY_CRITERIA = (
    CriterionId.PROX_TRANSIT,
    CriterionId.PROX_SCHOOLS,
    CriterionId.PROX_MARKETS,
    CriterionId.PROX_ANCHOR,
)
CRITERION_ORDER = AREA_CRITERIA + PROXIMITY_CRITERIA

_PROXIMITY_CATEGORY = {
    CriterionId.PROX_TRANSIT: PlaceCategory.TRANSIT_STOP,
    CriterionId.PROX_SCHOOLS: PlaceCategory.SCHOOL,
    CriterionId.PROX_MARKETS: PlaceCategory.MARKET,
}

# Significant decimal digits kept when normalizing weight shares. Rounding
# through exact rationals makes proportional weight vectors (w vs c*w)
# produce identical shares even when c*w picked up float rounding.
_SHARE_DIGITS = 12


def _round_share(fr: Fraction) -> float:
    if fr == 0:
        return 0.0
    with localcontext() as ctx:
        ctx.prec = _SHARE_DIGITS
        return float(Decimal(fr.numerator) / Decimal(fr.denominator))


@dataclass(frozen=True)
class WeightVector:
    """Non-negative importance weights per criterion; only ratios matter."""

    weights: Mapping[CriterionId, float]

    def __post_init__(self) -> None:
        clean: dict[CriterionId, float] = {}
        for key, value in self.weights.items():
            criterion = CriterionId(key)
            w = float(value)
            if not (math.isfinite(w) and w >= 0.0):
                raise ValueError(f"weight for {criterion.value} must be finite and >= 0, got {value}")
            clean[criterion] = w
        if not any(w > 0.0 for w in clean.values()):
            raise ValueError("at least one weight must be strictly positive")
        object.__setattr__(self, "weights", clean)

    @classmethod
    def from_mapping(cls, raw: Mapping[Union[str, CriterionId], float]) -> "WeightVector":
        weights: dict[CriterionId, float] = {}
        for key, value in raw.items():
            try:
                criterion = CriterionId(key)
            except ValueError:
                raise ValueError(f"unknown criterion {key!r}") from None
            weights[criterion] = value
        return cls(weights)

    def get(self, criterion: CriterionId) -> float:
        return self.weights.get(criterion, 0.0)

    @property
    def requested(self) -> tuple[CriterionId, ...]:
        return tuple(c for c in CRITERION_ORDER if self.get(c) > 0.0)


# Rent and transit access carry the highest default priority, then schools.
DEFAULT_WEIGHT_PRESET = WeightVector(
    {
        CriterionId.AFFORDABILITY: 3.0,
        CriterionId.PROX_TRANSIT: 3.0,
        CriterionId.PROX_SCHOOLS: 2.0,
        CriterionId.JOBS: 1.0,
        CriterionId.RETAIL: 1.0,
        CriterionId.CRIME: 1.0,
        CriterionId.PROX_MARKETS: 1.0,
        CriterionId.PROX_ANCHOR: 1.0,
    }
)


@dataclass(frozen=True)
class ProximityConfig:
    """Cutoff distance (meters) at which each proximity score reaches zero."""

    d_max: Mapping[CriterionId, float] = field(
        default_factory=lambda: {
            CriterionId.PROX_TRANSIT: METERS_PER_MILE,
            CriterionId.PROX_SCHOOLS: METERS_PER_MILE,
            CriterionId.PROX_MARKETS: 3218.68,
            CriterionId.PROX_ANCHOR: 16093.4,
        }
    )

    def __post_init__(self) -> None:
        clean = {}
        for key, value in self.d_max.items():
            criterion = CriterionId(key)
            if criterion not in PROXIMITY_CRITERIA:
                raise ValueError(f"{criterion.value} is not a proximity criterion")
            v = float(value)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"d_max for {criterion.value} must be positive, got {value}")
            clean[criterion] = v
        for criterion in PROXIMITY_CRITERIA:
            if criterion not in clean:
                raise ValueError(f"missing d_max for {criterion.value}")
        object.__setattr__(self, "d_max", clean)

    def cutoff(self, criterion: CriterionId) -> float:
        return self.d_max[criterion]


def percentile_scores(values: Sequence[tuple[str, float]]) -> dict[str, float]:
    """Hazen percentile (r - 0.5) / n of each value, ties sharing the average
    rank of their tie group. Output is order-independent and lies in (0, 1).
    """
    if not values:
        raise ValueError("percentile_scores needs at least one value")
    for key, v in values:
        if not math.isfinite(v):
            raise ValueError(f"value for {key!r} must be finite, got {v}")
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i][1])
    scores: dict[str, float] = {}
    i = 0
    while i < n:
        j = i
        v = values[order[i]][1]
        while j + 1 < n and values[order[j + 1]][1] == v:
            j += 1
        rank = (i + 1 + j + 1) / 2.0  # average 1-based rank of the tie group
        score = (rank - 0.5) / n
        for k in range(i, j + 1):
            scores[values[order[k]][0]] = score
        i = j + 1
    return scores


PercentileTable = dict[CriterionId, dict[str, float]]


def build_percentile_tables(groups: Sequence[BlockGroup]) -> PercentileTable:
    """Percentile table per area criterion over the given block groups.

    Cost and crime enter negated so that cheaper and safer areas score
    higher. Groups without a crime index are absent from the crime table.
    """
    tables: PercentileTable = {c: {} for c in AREA_CRITERIA}
    if groups:
        tables[CriterionId.AFFORDABILITY] = percentile_scores(
            [(bg.id, -bg.est_monthly_cost) for bg in groups]
        )
        tables[CriterionId.JOBS] = percentile_scores(
            [(bg.id, bg.jobs_index) for bg in groups]
        )
        tables[CriterionId.RETAIL] = percentile_scores(
            [(bg.id, bg.retail_index) for bg in groups]
        )
        with_crime = [(bg.id, -bg.crime_index) for bg in groups if bg.crime_index is not None]
        if with_crime:
            tables[CriterionId.CRIME] = percentile_scores(with_crime)
    return tables


def proximity_score(distance: float, d_max: float) -> float:
    """Linear decay: 1 at distance 0, 0 at and beyond d_max."""
    return max(0.0, 1.0 - distance / d_max)


def criterion_score(
    p: GeoPoint,
    criterion: CriterionId,
    catalog: Catalog,
    index: PlaceIndex,
    tables: PercentileTable,
    cfg: ProximityConfig,
) -> Optional[float]:
    """Score of one criterion at a point, or None where data is missing."""
    if criterion in AREA_CRITERIA:
        bg = block_group_containing(catalog, p)
        if bg is None:
            return None
        return tables.get(criterion, {}).get(bg.id)
    if criterion is CriterionId.PROX_ANCHOR:
        return proximity_score(haversine_distance(p, catalog.anchor), cfg.cutoff(criterion))
    found = index.nearest(p, _PROXIMITY_CATEGORY[criterion])
    if found is None:
        return None
    return proximity_score(found[1], cfg.cutoff(criterion))


@dataclass(frozen=True)
class CriterionContribution:
    score: Optional[float]
    effective_weight: float


@dataclass(frozen=True)
class ScoreBreakdown:
    """Composite score plus the per-criterion decomposition behind it.

    completeness is the fraction of requested weight mass that had data at
    this location; composite is None when nothing was available.
    """

    composite: Optional[float]
    criteria: Mapping[CriterionId, CriterionContribution]
    completeness: float


def _breakdown_from_scores(
    w: WeightVector, scores: Mapping[CriterionId, Optional[float]]
) -> ScoreBreakdown:
    requested = w.requested
    available = [c for c in requested if scores.get(c) is not None]
    total = sum((Fraction(w.get(c)) for c in requested), Fraction(0))
    if not available:
        criteria = {c: CriterionContribution(None, 0.0) for c in requested}
        return ScoreBreakdown(composite=None, criteria=criteria, completeness=0.0)
    avail_total = sum((Fraction(w.get(c)) for c in available), Fraction(0))
    criteria: dict[CriterionId, CriterionContribution] = {}
    composite = 0.0
    for c in requested:
        s = scores.get(c)
        if s is None:
            criteria[c] = CriterionContribution(None, 0.0)
            continue
        share = _round_share(Fraction(w.get(c)) / avail_total)
        criteria[c] = CriterionContribution(s, share)
        composite += s * share
    composite = min(1.0, max(0.0, composite))
    completeness = _round_share(avail_total / total)
    return ScoreBreakdown(composite=composite, criteria=criteria, completeness=completeness)


def composite_score(
    p: GeoPoint,
    w: WeightVector,
    catalog: Catalog,
    index: PlaceIndex,
    tables: PercentileTable,
    cfg: ProximityConfig,
) -> ScoreBreakdown:
    """Weighted mean of the available criterion scores at a point, with the
    weights renormalized over what was available."""
    scores = {
        c: criterion_score(p, c, catalog, index, tables, cfg) for c in w.requested
    }
    return _breakdown_from_scores(w, scores)


def score_raster(
    spec: GridSpec,
    w: WeightVector,
    catalog: Catalog,
    index: PlaceIndex,
    tables: PercentileTable,
    cfg: ProximityConfig,
    workers: int = 1,
) -> RasterGrid:
    """Composite score at every cell center. Evaluation order never affects
    the result; workers > 1 only parallelizes the same pure computation."""

    def cell_value(idx: int) -> Optional[float]:
        row, col = divmod(idx, spec.cols)
        point = cell_center(spec, row, col)
        return composite_score(point, w, catalog, index, tables, cfg).composite

    total = spec.rows * spec.cols
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(cell_value, range(total)))
    else:
        values = tuple(cell_value(i) for i in range(total))
    return RasterGrid(spec=spec, values=values)


@dataclass(frozen=True)
class RankedApartment:
    apartment_id: str
    composite: Optional[float]
    rank: int
    breakdown: ScoreBreakdown


def rank_apartments(
    apartments: Sequence[Apartment],
    w: WeightVector,
    catalog: Catalog,
    index: PlaceIndex,
    tables: PercentileTable,
    cfg: ProximityConfig,
) -> list[RankedApartment]:
    """Score every apartment at its location and order the list best-first.

    Apartments that carry their own monthly cost get their affordability
    score from the percentile of that cost within the apartment cost
    distribution (cheaper is better); the rest fall back to their block
    group. Ordering: composite desc, completeness desc, name asc, id asc;
    apartments with no scoreable criteria go last in name order.
    """
    priced = [(a.id, -a.monthly_cost) for a in apartments if a.monthly_cost is not None]
    own_cost_pct = percentile_scores(priced) if priced else {}

    rows: list[tuple[tuple, str, ScoreBreakdown]] = []
    for a in apartments:
        scores: dict[CriterionId, Optional[float]] = {}
        for c in w.requested:
            if c is CriterionId.AFFORDABILITY and a.monthly_cost is not None:
                scores[c] = own_cost_pct[a.id]
            else:
                scores[c] = criterion_score(a.location, c, catalog, index, tables, cfg)
        breakdown = _breakdown_from_scores(w, scores)
        missing = breakdown.composite is None
        key = (
            1 if missing else 0,
            0.0 if missing else -breakdown.composite,
            -breakdown.completeness,
            a.name,
            a.id,
        )
        rows.append((key, a.id, breakdown))

    rows.sort(key=lambda r: r[0])
    return [
        RankedApartment(apartment_id=pid, composite=bd.composite, rank=i + 1, breakdown=bd)
        for i, (_, pid, bd) in enumerate(rows)
    ]
