"""Persistence posets, their classifying-space homology, and interleaving bounds."""

from .errors import (
    CycleError,
    DuplicateElement,
    EmptyAfterNonempty,
    HypothesisUnmet,
    InconsistentTransfer,
    NegativeMultiplicity,
    NonMonotoneStructureMap,
    NotASubposet,
    NotClosed,
    NotNested,
    PartialStructureMap,
    PersistenceError,
    SchemaError,
    ShapeMismatch,
    TooLarge,
    UnknownElement,
    UnknownVertex,
    ValidationError,
)
from .posets import (
    FinitePoset,
    MonotoneMap,
    downset,
    is_monotone,
    linear_extension,
    mapping_cylinder,
    new_poset,
)
from .pposets import (
    ElementTrack,
    PersistenceMap,
    PersistencePoset,
    chain_filtrations,
    fiber,
    persistence_linear_extension,
    persistence_mapping_cylinder,
    puncture,
    sub_downset,
    tracks,
    validate,
)
from .complexes import (
    ComplexTower,
    SimplicialComplex,
    SimplicialMap,
    induced_map,
    join,
    link,
    order_complex,
    order_complex_tower,
    star,
)
from .homology import (
    FieldSpec,
    HomologyBasis,
    boundary_matrix,
    homology,
    homology_tower,
    induced_on_homology,
)
from .modules import (
    Barcode,
    PersistenceModule,
    ShiftMorphism,
    barcode,
    bottleneck_distance,
    direct_sum,
    eps_trivial,
    interleaving_bruteforce,
    point_comparison_defect,
    rank_invariant,
    triviality_defect,
)
from .verifier import (
    TheoremCertificate,
    chain_puncture_suite,
    fiber_defects,
    verify_cylinder_retraction,
    verify_join_acyclicity,
    verify_puncture_lemma,
    verify_split_ses_properties,
    verify_theorem,
)
from .documents import (
    CoverTower,
    GeneratorLimits,
    InstanceDocument,
    Scale,
    cover_to_pposet,
    parse_instance,
    random_instance,
    serialize_instance,
)

__version__ = "0.1.0"
