"""Single-mode decision procedures.

Structural controllability is decided by the classic two-part criterion:
every state must be reachable from some input, and the bipartite view of
``[A B]`` must admit a matching covering all n state rows.  The attack
analyses layer set conditions on top: which states the defender or the
attacker can actuate, which right vertices can be left unmatched, and
which source SCCs are reachable only through one party's states.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .graphs import (
    ALPHA_ENUM_CAP,
    Matching,
    TopAssignability,
    bipartite_of_digraph,
    digraph_of,
    input_vertex,
    max_top_assignability_index,
    maximum_matching,
    reachable_from,
    saturating_maximum_matching,
    scc_decomposition,
    state_vertex,
)
from .patterns import (
    DimensionMismatchError,
    InvalidPartitionError,
    PartitionedSystem,
    StructuredMatrix,
    closed_loop,
    validate_partition,
)

# Condition codes (shared vocabulary between verdicts and diagnostics)
DEFENDER_NOT_CONTROLLABLE = "defender-system-not-structurally-controllable"
ATTACKER_ALWAYS_UNMATCHED = "attacker-state-unmatched-in-every-maximum-matching"
ATTACKER_ONLY_SOURCE_SCC = "source-scc-contains-only-attacker-states"
INPUT_BUDGET_BUT_DEFENDER_SHORT = "total-input-budget-sufficient-but-defender-short"
LINK_BUDGET_BUT_DEFENDER_SHORT = "total-link-budget-sufficient-but-defender-short"
UNREACHABLE_FROM_DEFENDER = "state-unreachable-from-defender-inputs"
NO_DEFENDER_STATE_COVER = "defender-inputs-cannot-complete-state-cover"
DEFENDER_LINKS_BELOW_MINIMUM = "defender-link-count-below-minimum"
DEFENDER_STATES_SATURABLE = "some-maximum-matching-saturates-defender-states"
NO_DEFENDER_ONLY_SOURCE_SCC = "no-source-scc-contains-only-defender-states"
DEFENDER_STATES_NOT_SATURABLE = "no-maximum-matching-saturates-defender-states"
SOURCE_SCC_NOT_ATTACKER_ONLY = "source-scc-not-attacker-only"
DEFENDER_EXTENSION_IMPOSSIBLE = "defender-link-extension-impossible"


@dataclass(frozen=True)
class ControllabilityReport:
    controllable: bool
    unreachable_states: frozenset[int]
    right_unmatched_after_inputs: frozenset[int]
    uncovered_non_top_linked_sccs: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Verdict:
    """Decision plus machine-checkable evidence.

    ``violated_conditions`` lists the clause codes that failed; it is empty
    exactly when the decision bit is True.  Witness slots are filled where
    a concrete object certifies or refutes a clause.
    """

    resilient: bool
    violated_conditions: tuple[str, ...] = ()
    witness_matching: Matching | None = None
    witness_sccs: tuple[frozenset[int], ...] | None = None
    witness_vertices: frozenset[int] | None = None


@dataclass(frozen=True)
class MinDesignReport:
    m: int
    beta: int
    alpha: int
    min_inputs: int
    min_links: int
    m_def: int
    m_att: int
    alpha_exact: bool
    witness: Matching


@dataclass(frozen=True)
class DiagnosticHit:
    code: str
    detail: str
    states: frozenset[int] = frozenset()


def is_structurally_controllable(
    a: StructuredMatrix, b: StructuredMatrix
) -> ControllabilityReport:
    """Reachability from the inputs plus a full state-row matching of [A B]."""
    if not a.is_square:
        raise DimensionMismatchError(f"state matrix must be square, got {a.rows}x{a.cols}")
    if b.rows != a.rows:
        raise DimensionMismatchError(f"b has {b.rows} rows, expected {a.rows}")
    n = a.rows
    g = digraph_of(a, b)
    reached = reachable_from(g, [input_vertex(j) for j in range(1, b.cols + 1)])
    unreachable = frozenset(
        i for i in range(1, n + 1) if state_vertex(i) not in reached
    )
    matching = maximum_matching(bipartite_of_digraph(g))
    unmatched = matching.unmatched_states() if len(matching) < n else frozenset()
    fed_states = b.star_rows()
    uncovered = tuple(
        scc
        for scc in scc_decomposition(digraph_of(a)).non_top_linked_sccs
        if not (scc & fed_states)
    )
    controllable = not unreachable and len(matching) == n
    return ControllabilityReport(controllable, unreachable, unmatched, uncovered)


def _design_counts(
    a: StructuredMatrix, enum_cap: int = ALPHA_ENUM_CAP
) -> tuple[int, int, TopAssignability]:
    """(m, beta, alpha-result) for the state pattern alone."""
    view = bipartite_of_digraph(digraph_of(a))
    m = a.rows - len(maximum_matching(view))
    beta = len(scc_decomposition(digraph_of(a)).non_top_linked_sccs)
    top = max_top_assignability_index(a, enum_cap=enum_cap)
    return m, beta, top


def min_design_report(
    a: StructuredMatrix,
    x_def: frozenset[int] = frozenset(),
    x_att: frozenset[int] = frozenset(),
    enum_cap: int = ALPHA_ENUM_CAP,
) -> MinDesignReport:
    """Minimum input/link counts for structural controllability of ``[A]``.

    ``min_inputs`` is 1 when no right vertex is unmatched and the unmatched
    count otherwise; ``min_links`` is m + beta - alpha.  The defender /
    attacker split of the unmatched vertices is taken on the
    alpha-maximizing witness matching.
    """
    x_def, x_att = frozenset(x_def), frozenset(x_att)
    if x_def & x_att:
        raise InvalidPartitionError(
            validate_partition(
                PartitionedSystem(
                    a,
                    StructuredMatrix.zeros(a.rows, 0),
                    StructuredMatrix.zeros(a.rows, 0),
                    x_def,
                    x_att,
                )
            )
        )
    m, beta, top = _design_counts(a, enum_cap)
    unmatched = top.witness.unmatched_states()
    return MinDesignReport(
        m=m,
        beta=beta,
        alpha=top.alpha,
        min_inputs=1 if m == 0 else m,
        min_links=m + beta - top.alpha,
        m_def=len(unmatched & x_def),
        m_att=len(unmatched & x_att),
        alpha_exact=top.exact,
        witness=top.witness,
    )


def _require_valid(sys: PartitionedSystem) -> None:
    violations = validate_partition(sys)
    if violations:
        raise InvalidPartitionError(violations)


def dos_success_diagnostics(
    sys: PartitionedSystem, enum_cap: int = ALPHA_ENUM_CAP
) -> tuple[DiagnosticHit, ...]:
    """Evaluate every sufficient condition for a DoS attack to succeed.

    The two budget clauses fire only together with a defender input count
    below the unmatched-defender-vertex count of the alpha witness; the
    five structural clauses are each independently sufficient and are
    evaluated unconditionally.
    """
    _require_valid(sys)
    a, n = sys.a, sys.n
    report = min_design_report(sys.a, sys.x_def, sys.x_att, enum_cap=enum_cap)
    hits: list[DiagnosticHit] = []
    links_needed = report.min_links
    total_links = sys.b_def.star_count + sys.b_att.star_count
    defender_short = sys.d < report.m_def
    if sys.p >= links_needed and defender_short:
        hits.append(
            DiagnosticHit(
                INPUT_BUDGET_BUT_DEFENDER_SHORT,
                f"p={sys.p} >= {links_needed} but d={sys.d} < m_def={report.m_def}",
            )
        )
    if sys.p >= report.m and total_links >= links_needed and defender_short:
        hits.append(
            DiagnosticHit(
                LINK_BUDGET_BUT_DEFENDER_SHORT,
                f"p={sys.p} >= m={report.m}, links={total_links} >= {links_needed}, "
                f"d={sys.d} < m_def={report.m_def}",
            )
        )
    ctrl = is_structurally_controllable(a, sys.b_def)
    if ctrl.unreachable_states:
        hits.append(
            DiagnosticHit(
                UNREACHABLE_FROM_DEFENDER,
                "states unreachable from every defender input",
                ctrl.unreachable_states,
            )
        )
    if ctrl.right_unmatched_after_inputs:
        hits.append(
            DiagnosticHit(
                NO_DEFENDER_STATE_COVER,
                "no disjoint defender-rooted path and cycle family covers the states",
                ctrl.right_unmatched_after_inputs,
            )
        )
    defender_links = sys.b_def.star_count
    floor = report.m_def + report.beta - report.alpha
    if defender_links < floor:
        hits.append(
            DiagnosticHit(
                DEFENDER_LINKS_BELOW_MINIMUM,
                f"defender links {defender_links} < m_def+beta-alpha = {floor}",
            )
        )
    att_rights = frozenset(f"w{i}" for i in sorted(sys.x_att))
    state_view = bipartite_of_digraph(digraph_of(a))
    if saturating_maximum_matching(state_view, att_rights) is None:
        always = _always_unmatched_attacker_states(sys)
        hits.append(
            DiagnosticHit(
                ATTACKER_ALWAYS_UNMATCHED,
                "every maximum matching leaves some attacker state unmatched",
                always,
            )
        )
    for scc in scc_decomposition(digraph_of(a)).non_top_linked_sccs:
        if scc and scc <= sys.x_att:
            hits.append(
                DiagnosticHit(
                    ATTACKER_ONLY_SOURCE_SCC,
                    "source SCC consists of attacker states only",
                    scc,
                )
            )
    return tuple(hits)


def _always_unmatched_attacker_states(sys: PartitionedSystem) -> frozenset[int]:
    """Attacker states that no maximum matching can cover."""
    view = bipartite_of_digraph(digraph_of(sys.a))
    stuck = set()
    for i in sorted(sys.x_att):
        if saturating_maximum_matching(view, {f"w{i}"}) is None:
            stuck.add(i)
    return frozenset(stuck)


def dos_resilience(sys: PartitionedSystem) -> Verdict:
    """Resilience when the attacker inputs are removed.

    Requires structural controllability through the defender block alone,
    a maximum matching of the state view leaving no attacker state
    unmatched, and that no source SCC consists purely of attacker states.
    With an empty ``x_att`` the last two conditions hold vacuously and the
    verdict collapses to plain structural controllability of
    ``(a, b_def)``.
    """
    _require_valid(sys)
    violated: list[str] = []
    witness_vertices: frozenset[int] | None = None
    ctrl = is_structurally_controllable(sys.a, sys.b_def)
    if not ctrl.controllable:
        violated.append(DEFENDER_NOT_CONTROLLABLE)
        witness_vertices = ctrl.unreachable_states | ctrl.right_unmatched_after_inputs
    att_rights = frozenset(f"w{i}" for i in sorted(sys.x_att))
    saturating = saturating_maximum_matching(
        bipartite_of_digraph(digraph_of(sys.a)), att_rights
    )
    if saturating is None:
        violated.append(ATTACKER_ALWAYS_UNMATCHED)
    offending = tuple(
        scc
        for scc in scc_decomposition(digraph_of(sys.a)).non_top_linked_sccs
        if scc and scc <= sys.x_att
    )
    if offending:
        violated.append(ATTACKER_ONLY_SOURCE_SCC)
    return Verdict(
        resilient=not violated,
        violated_conditions=tuple(violated),
        witness_matching=saturating,
        witness_sccs=offending or None,
        witness_vertices=witness_vertices,
    )


def integrity_resilience(
    a_def: StructuredMatrix, x_def: frozenset[int], x_att: frozenset[int]
) -> Verdict:
    """Resilience of the defender-feedback closed loop to an integrity attack.

    The attacker (who may only actuate ``x_att``) fails exactly when every
    maximum matching leaves some defender state unmatched, or some source
    SCC consists purely of defender states.
    """
    x_def, x_att = frozenset(x_def), frozenset(x_att)
    def_rights = frozenset(f"w{i}" for i in sorted(x_def))
    saturating = saturating_maximum_matching(
        bipartite_of_digraph(digraph_of(a_def)), def_rights
    )
    def_only = tuple(
        scc
        for scc in scc_decomposition(digraph_of(a_def)).non_top_linked_sccs
        if scc and scc <= x_def
    )
    if saturating is None or def_only:
        return Verdict(
            resilient=True,
            witness_sccs=def_only or None,
        )
    return Verdict(
        resilient=False,
        violated_conditions=(DEFENDER_STATES_SATURABLE, NO_DEFENDER_ONLY_SOURCE_SCC),
        witness_matching=saturating,
    )


def attacker_complete_controllability(
    a_def: StructuredMatrix, x_def: frozenset[int], x_att: frozenset[int]
) -> Verdict:
    """Whether the attacker alone can achieve structural controllability.

    The verdict's boolean answers that question: True needs a maximum
    matching saturating every defender state and all source SCCs made of
    attacker states only.  (Read as: every vertex that must take a
    dedicated input can take it from the attacker side.)
    """
    x_def, x_att = frozenset(x_def), frozenset(x_att)
    violated: list[str] = []
    def_rights = frozenset(f"w{i}" for i in sorted(x_def))
    saturating = saturating_maximum_matching(
        bipartite_of_digraph(digraph_of(a_def)), def_rights
    )
    if saturating is None:
        violated.append(DEFENDER_STATES_NOT_SATURABLE)
    stray = tuple(
        scc
        for scc in scc_decomposition(digraph_of(a_def)).non_top_linked_sccs
        if not (scc <= x_att)
    )
    if stray:
        violated.append(SOURCE_SCC_NOT_ATTACKER_ONLY)
    return Verdict(
        resilient=not violated,
        violated_conditions=tuple(violated),
        witness_matching=saturating,
        witness_sccs=stray or None,
    )


@dataclass(frozen=True)
class SfiReport:
    """Outcome of the state-feedback-attack reuse analysis.

    ``link_bound_holds`` records whether the feedback-modified pattern
    needs no more input-state links than the original; when it does, the
    existing defender block is reused verbatim, otherwise free parameters
    are added (never removed) to obtain ``b_def_prime``.
    """

    verdict: Verdict
    link_bound_holds: bool
    reused_b_def: bool
    b_def_prime: StructuredMatrix
    a_att: StructuredMatrix
    m_a: int
    beta_a: int
    alpha_a: int
    m_a_att: int
    beta_a_att: int
    alpha_a_att: int


def _extend_defender_links(
    a_att: StructuredMatrix,
    b_def: StructuredMatrix,
    x_def: frozenset[int],
) -> StructuredMatrix | None:
    """Add stars to existing defender columns until (a_att, b) passes the
    controllability criterion; None when a needed row is outside x_def."""
    if is_structurally_controllable(a_att, b_def).controllable:
        return b_def
    if b_def.cols == 0:
        return None
    scc = scc_decomposition(digraph_of(a_att))
    b = b_def
    for _ in range(a_att.rows * (b_def.cols + 1) + 1):
        report = is_structurally_controllable(a_att, b)
        if report.controllable:
            return b
        targets: list[int] = sorted(report.right_unmatched_after_inputs)
        if not targets:
            for s in report.uncovered_non_top_linked_sccs:
                if not (s & x_def):
                    return None
                targets.append(min(s & x_def))
        fixed_any = False
        for row in targets:
            if row not in x_def:
                return None
            members = scc.sccs[scc.component_of(row)]
            same_scc_cols = [
                c
                for c in range(1, b.cols + 1)
                if any(rr in members for rr, c2 in b.stars if c2 == c)
            ]
            ordering = same_scc_cols + [
                c for c in range(1, b.cols + 1) if c not in same_scc_cols
            ]
            before = len(report.right_unmatched_after_inputs) + len(
                report.uncovered_non_top_linked_sccs
            )
            for col in ordering:
                if (row, col) in b.stars:
                    continue
                candidate = StructuredMatrix(b.rows, b.cols, b.stars | {(row, col)})
                after_report = is_structurally_controllable(a_att, candidate)
                after = len(after_report.right_unmatched_after_inputs) + len(
                    after_report.uncovered_non_top_linked_sccs
                )
                if after < before:
                    b = candidate
                    fixed_any = True
                    break
            if fixed_any:
                break
        if not fixed_any:
            return None
    return None


def sfi_resilience(
    sys: PartitionedSystem,
    k_att: StructuredMatrix,
    enum_cap: int = ALPHA_ENUM_CAP,
) -> SfiReport:
    """Resilience to a state feedback attack, reusing the defender block.

    Forms the feedback-modified state pattern, compares its minimum-link
    requirement against the original, and either certifies the existing
    defender block or extends it (adding free parameters only).
    """
    _require_valid(sys)
    if (k_att.rows, k_att.cols) != (sys.a_dim, sys.n):
        raise DimensionMismatchError(
            f"k_att must be {sys.a_dim}x{sys.n}, got {k_att.rows}x{k_att.cols}"
        )
    a_att = closed_loop(sys.a, sys.b_att, k_att)
    m_a, beta_a, top_a = _design_counts(sys.a, enum_cap)
    m_t, beta_t, top_t = _design_counts(a_att, enum_cap)
    bound_holds = (m_t + beta_t - top_t.alpha) <= (m_a + beta_a - top_a.alpha)
    if bound_holds:
        b_prime: StructuredMatrix | None = sys.b_def
    else:
        b_prime = _extend_defender_links(a_att, sys.b_def, sys.x_def)
    if b_prime is None:
        return SfiReport(
            verdict=Verdict(
                resilient=False,
                violated_conditions=(DEFENDER_EXTENSION_IMPOSSIBLE,),
            ),
            link_bound_holds=bound_holds,
            reused_b_def=False,
            b_def_prime=sys.b_def,
            a_att=a_att,
            m_a=m_a,
            beta_a=beta_a,
            alpha_a=top_a.alpha,
            m_a_att=m_t,
            beta_a_att=beta_t,
            alpha_a_att=top_t.alpha,
        )
    post = replace(sys, a=a_att, b_def=b_prime)
    verdict = dos_resilience(post)
    return SfiReport(
        verdict=verdict,
        link_bound_holds=bound_holds,
        reused_b_def=b_prime == sys.b_def,
        b_def_prime=b_prime,
        a_att=a_att,
        m_a=m_a,
        beta_a=beta_a,
        alpha_a=top_a.alpha,
        m_a_att=m_t,
        beta_a_att=beta_t,
        alpha_a_att=top_t.alpha,
    )
