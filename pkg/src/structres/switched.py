"""Union-graph analyses for switched systems.

A switched system is summarized two ways: the union pattern (star union
over modes, used for everything SCC- or reachability-based) and the
concatenated bipartite view, whose left side carries one vertex per
column per mode (used for matchings — a state row can be covered by any
mode).  Defender inputs keep their actuator identity across modes: mode
copies are distinct columns in the concatenation, but one input for
counting purposes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .graphs import (
    BipartiteView,
    Digraph,
    Matching,
    bipartite_of_blocks,
    complete_to_maximum,
    digraph_of,
    input_vertex,
    maximum_matching,
    reachable_from,
    saturating_maximum_matching,
    scc_decomposition,
    state_vertex,
)
from .patterns import (
    InvalidPartitionError,
    StructuredMatrix,
    SwitchedPartitionedSystem,
    pattern_sum,
    validate_switched_partition,
)
from .resilience import ControllabilityReport, Verdict

DEFENDER_INPUTS_BELOW_UNMATCHED = "defender-input-count-below-defender-unmatched-count"
UNION_ATTACKER_ONLY_SOURCE_SCC = "union-source-scc-contains-only-attacker-states"
NO_ATTACKER_SATURATING_MATCHING = (
    "attacker-state-unmatched-in-every-concatenated-maximum-matching"
)
NO_DEDICATED_DEFENDER_INPUTS = "unmatched-states-lack-distinct-defender-inputs"
SOURCE_SCC_NOT_ACTUATED = "union-source-scc-lacks-actuated-defender-state"


@dataclass(frozen=True)
class UnionSystem:
    """Union pattern plus the concatenated bipartite view of all modes."""

    union_a: StructuredMatrix
    union_b_def: StructuredMatrix
    union_b_att: StructuredMatrix
    concat_view: BipartiteView
    mode_count: int


def _union(patterns: list[StructuredMatrix]) -> StructuredMatrix:
    return reduce(pattern_sum, patterns)


def _require_valid(sys: SwitchedPartitionedSystem) -> None:
    violations = validate_switched_partition(sys)
    if violations:
        raise InvalidPartitionError(violations)


def build_union(sys: SwitchedPartitionedSystem, include_attacker: bool) -> UnionSystem:
    """Union pattern and concatenated view of all mode blocks.

    When ``include_attacker`` is False (the denial-of-service reading)
    the attacker blocks are zeroed and their columns dropped from the
    concatenated view.
    """
    _require_valid(sys)
    union_a = _union([mode.a for mode in sys.modes])
    union_b_def = _union([mode.b_def for mode in sys.modes])
    blocks: list[StructuredMatrix] = [mode.a for mode in sys.modes]
    labels: list[list[str]] = [
        [f"s{c}.{k}" for c in range(1, sys.n + 1)] for k in range(1, sys.z + 1)
    ]
    blocks += [mode.b_def for mode in sys.modes]
    labels += [
        [f"u{j}.{k}" for j in range(1, sys.d + 1)] for k in range(1, sys.z + 1)
    ]
    if include_attacker:
        union_b_att = _union([mode.b_att for mode in sys.modes])
        blocks += [mode.b_att for mode in sys.modes]
        labels += [
            [f"u{sys.d + j}.{k}" for j in range(1, sys.a_dim + 1)]
            for k in range(1, sys.z + 1)
        ]
    else:
        union_b_att = StructuredMatrix.zeros(sys.n, sys.a_dim)
    view = bipartite_of_blocks(blocks, labels)
    return UnionSystem(union_a, union_b_def, union_b_att, view, sys.z)


def _state_blocks_view(sys: SwitchedPartitionedSystem) -> BipartiteView:
    blocks = [mode.a for mode in sys.modes]
    labels = [
        [f"s{c}.{k}" for c in range(1, sys.n + 1)] for k in range(1, sys.z + 1)
    ]
    return bipartite_of_blocks(blocks, labels)


def _defender_feeds(sys: SwitchedPartitionedSystem) -> dict[int, frozenset[int]]:
    """States each defender input can actuate in at least one mode."""
    feeds: dict[int, set[int]] = {j: set() for j in range(1, sys.d + 1)}
    for mode in sys.modes:
        for row, col in mode.b_def.stars:
            feeds[col].add(row)
    return {j: frozenset(v) for j, v in feeds.items()}


def _union_input_digraph(sys: SwitchedPartitionedSystem) -> Digraph:
    """Union state digraph with input edges from every mode's blocks."""
    union_a = _union([mode.a for mode in sys.modes])
    input_edges: set[tuple[int, int]] = set()
    for mode in sys.modes:
        for i, j in mode.b_def.stars:
            input_edges.add((j, i))
        for i, j in mode.b_att.stars:
            input_edges.add((sys.d + j, i))
    g = digraph_of(union_a)
    return Digraph(sys.n, sys.d + sys.a_dim, g.state_edges, frozenset(input_edges))


def switched_structural_controllability(
    sys: SwitchedPartitionedSystem,
) -> ControllabilityReport:
    """Controllability of the full switched system (all inputs available).

    Needs every source SCC of the union state digraph to receive an input
    edge somewhere, and a full state-row matching of the concatenation of
    every mode's state and input blocks.
    """
    _require_valid(sys)
    n = sys.n
    g = _union_input_digraph(sys)
    p = sys.d + sys.a_dim
    reached = reachable_from(g, [input_vertex(j) for j in range(1, p + 1)])
    unreachable = frozenset(i for i in range(1, n + 1) if state_vertex(i) not in reached)
    union = build_union(sys, include_attacker=True)
    matching = maximum_matching(union.concat_view)
    unmatched = matching.unmatched_states() if len(matching) < n else frozenset()
    fed = frozenset(i for _, i in g.input_edges)
    uncovered = tuple(
        scc
        for scc in scc_decomposition(digraph_of(union.union_a)).non_top_linked_sccs
        if not (scc & fed)
    )
    return ControllabilityReport(
        controllable=not unreachable and len(matching) == n,
        unreachable_states=unreachable,
        right_unmatched_after_inputs=unmatched,
        uncovered_non_top_linked_sccs=uncovered,
    )


def switched_dos_resilience(sys: SwitchedPartitionedSystem) -> Verdict:
    """Denial-of-service resilience of a switched system.

    Attacker blocks are zeroed.  Over the union digraph and the
    concatenated state-block view this needs: enough defender inputs for
    the unmatched defender states, no attacker-only source SCC, a maximum
    matching saturating the attacker states whose unmatched remainder
    takes distinct defender inputs, and an actuated defender state inside
    every source SCC.
    """
    _require_valid(sys)
    union_a = _union([mode.a for mode in sys.modes])
    scc = scc_decomposition(digraph_of(union_a))
    state_view = _state_blocks_view(sys)
    feeds = _defender_feeds(sys)
    violated: list[str] = []

    offending = tuple(s for s in scc.non_top_linked_sccs if s and s <= sys.x_att)
    if offending:
        violated.append(UNION_ATTACKER_ONLY_SOURCE_SCC)

    att_rights = frozenset(f"w{i}" for i in sorted(sys.x_att))
    saturating = saturating_maximum_matching(state_view, att_rights)
    witness: Matching | None = saturating
    if saturating is None:
        violated.append(NO_ATTACKER_SATURATING_MATCHING)
        m_def_matching = maximum_matching(state_view)
    else:
        joint = _joint_defender_matching(sys, state_view)
        if joint is None:
            violated.append(NO_DEDICATED_DEFENDER_INPUTS)
            m_def_matching = saturating
        else:
            witness = joint
            m_def_matching = joint

    unmatched_def = m_def_matching.unmatched_states() & sys.x_def
    if sys.d < len(unmatched_def):
        violated.append(DEFENDER_INPUTS_BELOW_UNMATCHED)

    actuated = frozenset().union(*feeds.values()) if feeds else frozenset()
    unactuated = tuple(
        s for s in scc.non_top_linked_sccs if not (s & sys.x_def & actuated)
    )
    if unactuated:
        violated.append(SOURCE_SCC_NOT_ACTUATED)

    return Verdict(
        resilient=not violated,
        violated_conditions=tuple(violated),
        witness_matching=witness,
        witness_sccs=(offending + unactuated) or None,
    )


def _joint_defender_matching(
    sys: SwitchedPartitionedSystem, state_view: BipartiteView
) -> Matching | None:
    """A maximum matching of the state blocks, saturating the attacker
    states, whose unmatched vertices take distinct defender inputs.

    Decided through one joint matching: append one left vertex per
    defender input (with edges to every state it can actuate in any mode)
    and ask for a full state-row matching.  A size-n joint matching splits
    into a state-block part — augmentable to maximum without uncovering
    the input-assigned rows — plus a distinct-representative assignment of
    those rows to inputs; the converse composition also holds, so joint
    feasibility is equivalent to the matching clauses it implements.
    """
    n = sys.n
    feeds = _defender_feeds(sys)
    joint_lefts = tuple(state_view.lefts) + tuple(
        input_vertex(j) for j in range(1, sys.d + 1)
    )
    joint_edges = set(state_view.edges)
    for j, states in feeds.items():
        for i in sorted(states):
            joint_edges.add((input_vertex(j), f"w{i}"))
    joint_view = BipartiteView(joint_lefts, state_view.rights, frozenset(joint_edges))
    joint = maximum_matching(joint_view)
    if len(joint) < n:
        return None
    state_edges = frozenset((l, r) for l, r in joint.edges if not l.startswith("u"))
    partial = Matching(state_edges, state_view.rights)
    return complete_to_maximum(state_view, partial)
