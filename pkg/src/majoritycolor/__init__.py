"""Majority colorings and majority list-colorings: solvers, oracles, verifiers.

The package covers finite graphs, finite digraphs, and finite prefixes of
countable graphs carrying degree-class metadata.  Solvers are deterministic
and every one of them is cross-checked against the brute-force oracles in
:mod:`majoritycolor.verify`.
"""

from .backforth import SelectionState, not_amc_certificate, select_sublists, seq_s
from .core import (
    CLASS_A,
    CLASS_B,
    DEG_FINITE,
    DEG_INFINITE,
    Coloring,
    Digraph,
    Graph,
    ListAssignment,
    PrefixInstance,
    WeightMap,
    induced_subgraph,
)
from .directed import (
    BaseCaseResult,
    GreedyResult,
    PeelResult,
    PeelStep,
    PeelTrace,
    base_case_solve,
    greedy_acyclic_solve,
    peel_and_solve,
    three_stage_solve_directed,
    topological_order_sinks_first,
)
from .errors import (
    AcyclicityError,
    BudgetExceededError,
    InfeasibleError,
    MajorityColorError,
    ParseError,
    PartialColoringError,
    SolverError,
    ValidationError,
)
from .generators import (
    DIRECTED_FAMILIES,
    FAMILIES,
    UNDIRECTED_FAMILIES,
    FamilySpec,
    generate,
    grow,
)
from .instance_io import (
    Instance,
    parse_coloring,
    parse_instance,
    serialize_coloring,
    serialize_instance,
)
from .undirected import (
    LovaszResult,
    PipelineResult,
    PotentialLedger,
    Stage3Decision,
    StageReport,
    WeightedResult,
    bernardi_weighted_solve,
    lovasz_switch_solve,
    three_stage_solve,
)
from .verify import (
    VertexReport,
    amc_dominant,
    check_weighted_guarantee,
    good_bad_counts,
    is_majority,
    is_majority_digraph,
    oracle_choosability,
    oracle_exists_majority_coloring,
)

__version__ = "0.1.0"
