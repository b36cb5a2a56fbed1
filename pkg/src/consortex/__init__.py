"""Collaborative attribute exploration with consortia of local experts."""

from .closure import (
    ClosureSystem,
    all_closed_sets,
    canonical_base,
    canonical_base_from_operator,
    drop_redundant,
    enumerate_closure_systems,
    holds_in,
    intersection_closure,
    models_of,
    reduce_theory,
    theory_holds_in,
)
from .consortium import (
    Consortium,
    ConsortialDomain,
    ExampleNamer,
    ExpertAnswer,
    ExpertKind,
    LocalExpertSpec,
    Mode,
    SelectionStrategy,
    Verdict,
    check_consistent_consortium,
    check_consistent_experts,
    consortial_answer,
    consortium_from_domain,
    format_domain,
    is_well_formed,
    local_answer,
    mstar_closure,
    parse_domain,
    restrict,
    select_experts,
)
from .context import (
    FormalContext,
    all_intents,
    context_from_closure_system,
    derive_attributes,
    derive_objects,
    format_burmeister,
    intent_closure,
    parse_burmeister,
)
from .errors import (
    CapacityError,
    ConflictingEvidenceError,
    ConsortexError,
    FormatError,
    InvalidDomainError,
    MalformedDesignError,
    NotReadyError,
    ProtocolError,
    QualificationError,
    StaleQueryError,
    UniverseMismatchError,
    UnknownExpertError,
    UnknownSessionError,
)
from .exploration import (
    ExampleRegistry,
    ExplorationReport,
    ExplorationState,
    ExploreOptions,
    PartialExample,
    build_report,
    combine_example,
    explore,
    next_query,
    refutes,
    repair,
    submit_answer,
)
from .implications import (
    Implication,
    ImplicationTheory,
    close_under_theory,
    format_implication,
    format_implication_lines,
    parse_implication,
    parse_implication_lines,
)
from .oracles import ConsortiumOracle, FullDomainOracle, party_view
from .reconstruct import (
    can_reconstruct_class,
    confounder_pair,
    cover_witness,
    covers_all,
    is_steiner_system,
    premise_complexity,
    reconstructed_system,
    system_premise_complexity,
    verify_reconstruction,
    well_formed_valid,
)
from .service import Session, SessionHub, SessionOptions, build_session, run_server
from .sets import AttributeSet, Universe, common_universe
from .simulate import (
    SimulationConfig,
    SimulationResult,
    parse_config,
    random_closure_system,
    random_cover,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSet",
    "CapacityError",
    "ClosureSystem",
    "ConflictingEvidenceError",
    "ConsortexError",
    "Consortium",
    "ConsortiumOracle",
    "ConsortialDomain",
    "ExampleNamer",
    "ExampleRegistry",
    "ExpertAnswer",
    "ExpertKind",
    "ExplorationReport",
    "ExplorationState",
    "ExploreOptions",
    "FormatError",
    "FormalContext",
    "FullDomainOracle",
    "Implication",
    "ImplicationTheory",
    "InvalidDomainError",
    "LocalExpertSpec",
    "MalformedDesignError",
    "Mode",
    "NotReadyError",
    "PartialExample",
    "ProtocolError",
    "QualificationError",
    "SelectionStrategy",
    "Session",
    "SessionHub",
    "SessionOptions",
    "SimulationConfig",
    "SimulationResult",
    "StaleQueryError",
    "Universe",
    "UniverseMismatchError",
    "UnknownExpertError",
    "UnknownSessionError",
    "Verdict",
    "all_closed_sets",
    "all_intents",
    "build_report",
    "build_session",
    "can_reconstruct_class",
    "canonical_base",
    "canonical_base_from_operator",
    "check_consistent_consortium",
    "check_consistent_experts",
    "close_under_theory",
    "combine_example",
    "common_universe",
    "confounder_pair",
    "consortial_answer",
    "consortium_from_domain",
    "context_from_closure_system",
    "cover_witness",
    "covers_all",
    "derive_attributes",
    "derive_objects",
    "drop_redundant",
    "enumerate_closure_systems",
    "explore",
    "format_burmeister",
    "format_domain",
    "format_implication",
    "format_implication_lines",
    "holds_in",
    "intent_closure",
    "intersection_closure",
    "is_steiner_system",
    "is_well_formed",
    "local_answer",
    "models_of",
    "mstar_closure",
    "next_query",
    "parse_burmeister",
    "parse_config",
    "parse_domain",
    "parse_implication",
    "parse_implication_lines",
    "party_view",
    "premise_complexity",
    "random_closure_system",
    "random_cover",
    "reconstructed_system",
    "reduce_theory",
    "refutes",
    "repair",
    "restrict",
    "run_server",
    "run_simulation",
    "select_experts",
    "submit_answer",
    "system_premise_complexity",
    "theory_holds_in",
    "verify_reconstruction",
    "well_formed_valid",
]
