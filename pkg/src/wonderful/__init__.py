"""Wonderful compactifications as traced blowup towers, with ordinarity certificates."""

from .betti import InsufficientData, betti_vector, poincare
from .blowup import (
    BlowupTrace,
    InvalidBuildingSet,
    Locus,
    Stage,
    StageElement,
    TraceError,
    TransformCase,
    blowup_step,
    dominant_transform,
    initial_stage,
    wonderful,
)
from .certify import (
    Certificate,
    Rule,
    blocking_leaves,
    certify_building_set,
    certify_hodge_witt,
    certify_space,
    certify_trace,
    certify_wonderful,
    explain,
)
from .checker import check_certificate
from .constructions import (
    TowerDescription,
    UnsupportedRange,
    affine_polydiagonal_building_set,
    fm_building_set,
    kapranov_m0n,
    keel_tower,
    polydiagonal_building_set,
    tdn_tower,
    ulyanov_building_set,
)
from .lattice import (
    EMPTY_MARK,
    Arrangement,
    ArrangementError,
    BuildingSet,
    ElementDescriptor,
    ValidationReport,
    close_under_meet,
    inclusion_order,
    is_building_set,
    poison,
)
from .polynomial import PoincarePolynomial
from .space import (
    EMPTY,
    POINT,
    Atom,
    Blowup,
    Empty,
    Point,
    Product,
    ProjBundle,
    PropertyFacts,
    SpaceError,
    Tristate,
    atom,
    blow_up,
    dimension,
    power,
    product,
    proj_bundle,
    projective_space,
    render,
)

__version__ = "0.1.0"
