"""Structural controllability and attack-resilience analysis."""

from ._kernels import active_backend, set_backend
from .document import (
    DocumentError,
    DocumentIssue,
    ModeDocument,
    SystemDocument,
    load_system,
    parse_system,
    serialize_system,
    to_partitioned,
    to_switched,
)
from .dotexport import export_dot
from .graphs import (
    BipartiteView,
    Digraph,
    Matching,
    MatchingEnumeration,
    SccDecomposition,
    TopAssignability,
    bipartite_of_blocks,
    bipartite_of_digraph,
    complete_to_maximum,
    digraph_of,
    enumerate_maximum_matchings,
    max_top_assignability_index,
    maximum_matching,
    reachable_from,
    saturating_maximum_matching,
    scc_decomposition,
)
from .oracle import (
    OracleReport,
    kalman_rank,
    sample_realization,
    validate_structural_verdict,
)
from .patterns import (
    DimensionMismatchError,
    DisjointnessViolation,
    IndexRangeViolation,
    InvalidPartitionError,
    PartitionedSystem,
    RowConstraintViolation,
    StructuredMatrix,
    SwitchedMode,
    SwitchedPartitionedSystem,
    closed_loop,
    pattern_hstack,
    pattern_product,
    pattern_sum,
    validate_partition,
    validate_switched_partition,
    zero_structure_subset,
)
from .resilience import (
    ControllabilityReport,
    DiagnosticHit,
    MinDesignReport,
    SfiReport,
    Verdict,
    attacker_complete_controllability,
    dos_resilience,
    dos_success_diagnostics,
    integrity_resilience,
    is_structurally_controllable,
    min_design_report,
    sfi_resilience,
)
from .switched import (
    UnionSystem,
    build_union,
    switched_dos_resilience,
    switched_structural_controllability,
)

__version__ = "0.1.0"
