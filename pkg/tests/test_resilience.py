import numpy as np
import pytest

import bruteforce
from conftest import (
    f2_system,
    random_dos_resilient_system,
    random_partition,
    random_pattern,
)
from structres import (
    InvalidPartitionError,
    PartitionedSystem,
    StructuredMatrix,
    attacker_complete_controllability,
    bipartite_of_digraph,
    digraph_of,
    dos_resilience,
    dos_success_diagnostics,
    integrity_resilience,
    is_structurally_controllable,
    min_design_report,
    pattern_sum,
    scc_decomposition,
    sfi_resilience,
    zero_structure_subset,
)
from structres.resilience import (
    ATTACKER_ALWAYS_UNMATCHED,
    ATTACKER_ONLY_SOURCE_SCC,
)


class TestStructuralControllability:
    def test_fixture_with_two_inputs(self, ex1):
        b = StructuredMatrix(7, 2, {(3, 1), (5, 2)})
        assert is_structurally_controllable(ex1, b).controllable

    def test_fixture_with_single_input_fails(self, ex1):
        report = is_structurally_controllable(ex1, StructuredMatrix(7, 1, {(3, 1)}))
        assert not report.controllable
        assert 5 in report.unreachable_states

    def test_dedicated_inputs(self):
        a = StructuredMatrix.zeros(2, 2)
        assert is_structurally_controllable(a, StructuredMatrix.identity(2)).controllable

    def test_report_consistency(self, ex1):
        report = is_structurally_controllable(ex1, StructuredMatrix(7, 1, {(3, 1)}))
        empty = (
            not report.unreachable_states
            and not report.right_unmatched_after_inputs
            and not report.uncovered_non_top_linked_sccs
        )
        assert report.controllable == empty

    def test_agrees_with_clause_oracle_on_randoms(self):
        rng = np.random.default_rng(101)
        for _ in range(60):
            a = random_pattern(rng, 6, 6, 0.25)
            b = random_pattern(rng, 6, 2, 0.3)
            ours = is_structurally_controllable(a, b).controllable
            theirs = bruteforce.structurally_controllable_by_clauses(a, b)
            assert ours == theirs, (sorted(a.stars), sorted(b.stars))


class TestMinDesignReport:
    def test_fixture_with_partition(self, ex1, f1):
        rep = min_design_report(ex1, f1.x_def, f1.x_att)
        assert (rep.m, rep.beta, rep.alpha) == (2, 2, 2)
        assert (rep.min_inputs, rep.min_links) == (2, 2)
        assert (rep.m_def, rep.m_att) == (2, 0)

    def test_all_zero(self):
        rep = min_design_report(StructuredMatrix.zeros(3, 3), frozenset({1, 2, 3}))
        assert (rep.m, rep.beta, rep.alpha) == (3, 3, 3)
        assert (rep.min_inputs, rep.min_links) == (3, 3)

    def test_cycle(self):
        cycle = StructuredMatrix(3, 3, {(2, 1), (3, 2), (1, 3)})
        rep = min_design_report(cycle)
        assert (rep.m, rep.beta, rep.alpha) == (0, 1, 0)
        assert (rep.min_inputs, rep.min_links) == (1, 1)

    def test_split_sums_to_m_on_covering_partitions(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            a = random_pattern(rng, 6, 6, 0.25)
            x_def, x_att = random_partition(rng, 6, allow_neither=False)
            rep = min_design_report(a, x_def, x_att)
            assert rep.m_def + rep.m_att == rep.m


class TestDosDiagnostics:
    def test_resilient_fixture_triggers_nothing(self, f1):
        assert dos_success_diagnostics(f1) == ()

    def test_isolated_attacker_state_triggers_matching_clause(self, ex1):
        sys = PartitionedSystem(
            ex1,
            StructuredMatrix(7, 1, {(3, 1)}),
            StructuredMatrix(7, 0),
            frozenset({1, 2, 3}),
            frozenset({5}),
        )
        codes = {hit.code for hit in dos_success_diagnostics(sys)}
        assert ATTACKER_ALWAYS_UNMATCHED in codes

    def test_ten_state_fixture_triggers_both_attacker_clauses(self, ex2a):
        codes = {hit.code for hit in dos_success_diagnostics(f2_system(ex2a))}
        assert ATTACKER_ALWAYS_UNMATCHED in codes
        assert ATTACKER_ONLY_SOURCE_SCC in codes

    def test_invalid_partition_rejected(self, ex1):
        broken = PartitionedSystem(
            ex1,
            StructuredMatrix(7, 0),
            StructuredMatrix(7, 0),
            frozenset({1}),
            frozenset({1}),
        )
        with pytest.raises(InvalidPartitionError):
            dos_success_diagnostics(broken)


class TestDosResilience:
    def test_resilient_fixture(self, f1):
        verdict = dos_resilience(f1)
        assert verdict.resilient and not verdict.violated_conditions
        assert verdict.witness_matching is not None
        # witness saturates the attacker states
        att = {f"w{i}" for i in f1.x_att}
        assert att <= verdict.witness_matching.right_matched

    def test_ten_state_verdicts(self, ex2a, ex2b, ex2c):
        assert not dos_resilience(f2_system(ex2a)).resilient
        assert dos_resilience(f2_system(ex2b)).resilient
        verdict = dos_resilience(f2_system(ex2c))
        assert not verdict.resilient
        assert frozenset({7, 8}) in (verdict.witness_sccs or ())

    def test_witnesses_revalidate(self, ex2b):
        sys = f2_system(ex2b)
        verdict = dos_resilience(sys)
        view = bipartite_of_digraph(digraph_of(sys.a))
        assert verdict.witness_matching.is_valid_for(view)
        assert len(verdict.witness_matching) == 9

    def test_consistency_with_diagnostics_on_randoms(self):
        rng = np.random.default_rng(19)
        checked = 0
        for _ in range(200):
            a = random_pattern(rng, 6, 6, 0.25)
            x_def, x_att = random_partition(rng, 6)
            b_def = StructuredMatrix(
                6, 2, frozenset((r, c) for r, c in random_pattern(rng, 6, 2, 0.4).stars if r in x_def)
            )
            b_att = StructuredMatrix(
                6, 1, frozenset((r, c) for r, c in random_pattern(rng, 6, 1, 0.3).stars if r in x_att)
            )
            sys = PartitionedSystem(a, b_def, b_att, x_def, x_att)
            if dos_resilience(sys).resilient:
                checked += 1
                assert dos_success_diagnostics(sys) == ()
        assert checked > 0


class TestIntegrityResilience:
    def test_ten_state_fixtures_resilient(self, ex2a, ex2b, f2_partition):
        x_def, x_att = f2_partition
        for a in (ex2a, ex2b):
            verdict = integrity_resilience(a, x_def, x_att)
            assert verdict.resilient
            assert frozenset({1, 2, 3}) in (verdict.witness_sccs or ())

    def test_defender_cycle_with_isolated_attacker_state(self):
        a = StructuredMatrix(4, 4, {(2, 1), (3, 2), (1, 3)})
        verdict = integrity_resilience(a, frozenset({1, 2, 3}), frozenset({4}))
        assert verdict.resilient

    def test_not_resilient_when_attacker_covers_everything(self):
        a = StructuredMatrix(2, 2, {(2, 1)})
        verdict = integrity_resilience(a, frozenset({2}), frozenset({1}))
        assert not verdict.resilient
        assert verdict.witness_matching is not None


class TestAttackerCompleteControllability:
    def test_modified_fixture_allows_takeover(self, ex2a, f2_partition):
        x_def, x_att = f2_partition
        modified = pattern_sum(ex2a, StructuredMatrix(10, 10, {(1, 9)}))
        scc = scc_decomposition(digraph_of(modified))
        assert [sorted(s) for s in scc.non_top_linked_sccs] == [[8]]
        assert attacker_complete_controllability(modified, x_def, x_att).resilient

    def test_fixture_blocks_takeover(self, ex2a, f2_partition):
        x_def, x_att = f2_partition
        assert not attacker_complete_controllability(ex2a, x_def, x_att).resilient

    def test_all_zero_with_full_attacker_set(self):
        a = StructuredMatrix.zeros(3, 3)
        verdict = attacker_complete_controllability(
            a, frozenset(), frozenset({1, 2, 3})
        )
        assert verdict.resilient

    def test_mutually_exclusive_with_integrity(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            a = random_pattern(rng, 6, 6, 0.25)
            x_def, x_att = random_partition(rng, 6)
            takeover = attacker_complete_controllability(a, x_def, x_att).resilient
            if takeover:
                assert not integrity_resilience(a, x_def, x_att).resilient


class TestSfiResilience:
    def test_fixture_reuse(self, ex2a, ex2b):
        sys = f2_system(ex2a)
        k_att = StructuredMatrix(1, 10, {(1, 7)})
        report = sfi_resilience(sys, k_att)
        assert report.a_att == ex2b
        assert report.link_bound_holds and report.reused_b_def
        assert report.verdict.resilient
        assert report.b_def_prime == sys.b_def

    def test_zero_feedback_matches_dos_verdict(self, f1):
        k_att = StructuredMatrix.zeros(0, 7)
        report = sfi_resilience(f1, k_att)
        assert report.a_att == f1.a
        assert report.verdict.resilient == dos_resilience(f1).resilient

    def test_two_state_example(self):
        a = StructuredMatrix.zeros(2, 2)
        sys = PartitionedSystem(
            a,
            StructuredMatrix(2, 1, {(1, 1)}),
            StructuredMatrix(2, 1, {(2, 1)}),
            frozenset({1}),
            frozenset({2}),
        )
        k_att = StructuredMatrix(1, 2, {(1, 1)})
        report = sfi_resilience(sys, k_att)
        assert report.a_att.stars == {(2, 1)}
        assert report.m_a == 2 and report.m_a_att == 1
        assert report.link_bound_holds  # 1+1-1 <= 2+2-2

    def test_unmatched_count_never_grows(self):
        rng = np.random.default_rng(43)
        for _ in range(60):
            sys = random_dos_resilient_system(rng)
            k_att = random_pattern(rng, sys.a_dim, sys.n, 0.3)
            report = sfi_resilience(sys, k_att)
            assert report.m_a_att <= report.m_a

    def test_end_to_end_on_resilient_systems(self):
        rng = np.random.default_rng(47)
        for _ in range(40):
            sys = random_dos_resilient_system(rng)
            k_att = random_pattern(rng, sys.a_dim, sys.n, 0.3)
            report = sfi_resilience(sys, k_att)
            assert zero_structure_subset(report.b_def_prime, sys.b_def)
            if report.link_bound_holds:
                assert report.b_def_prime == sys.b_def
            assert is_structurally_controllable(
                report.a_att, report.b_def_prime
            ).controllable
