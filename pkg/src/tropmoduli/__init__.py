"""Exact-arithmetic toolkit for tropical moduli strata and wall crossings.

Submodules:
  exact_linalg  rational linear algebra, Smith normal form, LP feasibility
  polyhedral    abstract polyhedral complexes, stars, harmonicity, skeletons
  tropcurve     tropical curves, balancing, realization, stabilization
  moduli        strata, canonical types, resolutions, enumeration, wall graph
  family        families over a base complex, the induced map, wall verdicts
  documents     JSON document schemas ("tropmoduli/1")
  cli           command-line front end
"""

from .exact_linalg import Subspace, smith_normal_form, is_saturated, primitive_vector, \
    span_membership, strict_positive_combination
from .polyhedral import (
    Face,
    FaceInclusion,
    Harmonicity,
    PIAMap,
    Polyhedron,
    PolyhedralComplex,
    SemistablePairData,
    StarData,
    Stratum,
    build_skeleton,
    harmonicity_at,
    lin_of_image,
    star,
    validate_complex,
)
from .tropcurve import (
    CombinatorialType,
    Degree,
    ParameterizedTropicalCurve,
    TropicalCurve,
    WeightedGraph,
    check_balanced,
    genus,
    is_stable,
    realize,
    stabilize,
    type_of,
)
from .moduli import (
    StratumDescriptor,
    TypeIso,
    WallClass,
    WallClassification,
    WallGraph,
    automorphisms,
    canonical_form,
    canonical_string,
    classify,
    connected_through_walls,
    contract,
    contract_any_slope,
    dim_stratum,
    enumerate_types,
    is_adjacent,
    resolve_4valent,
    sample_stratum,
    stratum,
    wall_graph,
)
from .family import (
    AffineFn,
    AffineMapN,
    Contraction,
    FaceCurveData,
    FamilyDatum,
    InducedMap,
    WallVerdict,
    WallVerdictKind,
    fiber,
    image_strata,
    induced_alpha,
    propagate_closure,
    validate_family,
    wall_verdict,
)

__version__ = "0.1.0"
