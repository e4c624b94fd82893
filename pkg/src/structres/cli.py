"""Command-line interface.

Exit codes: 0 when the analysis ran and the outcome is the favorable one
(controllable / resilient / takeover impossible / oracle agreement), 1
when it ran with the negative outcome, 2 on input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Any

import numpy as np

from . import document as docmod
from .document import DocumentError, SystemDocument, load_system
from .dotexport import export_dot
from .graphs import ALPHA_ENUM_CAP, Matching
from .oracle import validate_structural_verdict
from .patterns import (
    InvalidPartitionError,
    StructuredMatrix,
    closed_loop,
    pattern_hstack,
)
from .resilience import (
    Verdict,
    attacker_complete_controllability,
    dos_resilience,
    dos_success_diagnostics,
    integrity_resilience,
    is_structurally_controllable,
    min_design_report,
    sfi_resilience,
)
from .switched import switched_dos_resilience, switched_structural_controllability


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Matching):
        return {
            "edges": sorted([list(e) for e in obj.edges]),
            "right_unmatched": sorted(obj.right_unmatched),
        }
    if isinstance(obj, StructuredMatrix):
        return {
            "rows": obj.rows,
            "cols": obj.cols,
            "stars": sorted([list(s) for s in obj.stars]),
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            field.name: _jsonable(getattr(obj, field.name))
            for field in dataclasses.fields(obj)
        }
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _emit(args: argparse.Namespace, payload: Any, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _verdict_lines(title: str, verdict: Verdict, good: str, bad: str) -> list[str]:
    lines = [f"{title}: {good if verdict.resilient else bad}"]
    for code in verdict.violated_conditions:
        lines.append(f"  violated: {code}")
    if verdict.witness_sccs:
        for scc in verdict.witness_sccs:
            lines.append(f"  witness SCC: {{{', '.join(f'x{i}' for i in sorted(scc))}}}")
    if verdict.witness_vertices:
        lines.append(
            f"  witness states: {{{', '.join(f'x{i}' for i in sorted(verdict.witness_vertices))}}}"
        )
    if verdict.witness_matching is not None:
        unmatched = sorted(verdict.witness_matching.right_unmatched)
        lines.append(
            f"  witness matching: {len(verdict.witness_matching)} edges,"
            f" unmatched {{{', '.join(unmatched)}}}"
        )
    return lines


def _load(args: argparse.Namespace) -> SystemDocument:
    return load_system(args.file)


def _load_k(path: str, rows: int, cols: int) -> StructuredMatrix:
    """A feedback pattern file: {"stars": [[row, col], ...]}."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    stars = raw.get("stars", raw) if isinstance(raw, dict) else raw
    return StructuredMatrix(rows, cols, frozenset(tuple(s) for s in stars))


def _cmd_analyze(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    b_full = pattern_hstack(sys_.b_def, sys_.b_att)
    report = is_structurally_controllable(sys_.a, b_full)
    design = min_design_report(sys_.a, sys_.x_def, sys_.x_att, enum_cap=args.max_enumerate)
    lines = [
        f"structurally controllable: {'yes' if report.controllable else 'no'}",
    ]
    if report.unreachable_states:
        lines.append(f"  unreachable states: {sorted(report.unreachable_states)}")
    if report.right_unmatched_after_inputs:
        lines.append(f"  unmatched states: {sorted(report.right_unmatched_after_inputs)}")
    lines += [
        f"unmatched right vertices (m): {design.m}",
        f"source SCCs (beta): {design.beta}",
        f"top assignability (alpha): {design.alpha}"
        + ("" if design.alpha_exact else " (lower bound)"),
        f"minimum inputs: {design.min_inputs}",
        f"minimum input-state links: {design.min_links}",
        f"defender/attacker unmatched split: {design.m_def}/{design.m_att}",
    ]
    _emit(args, {"controllability": report, "design": design}, lines)
    return 0 if report.controllable else 1


def _cmd_dos(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    verdict = dos_resilience(sys_)
    diagnostics = dos_success_diagnostics(sys_, enum_cap=args.max_enumerate)
    lines = _verdict_lines(
        "denial-of-service resilience", verdict, "resilient", "not resilient"
    )
    for hit in diagnostics:
        lines.append(f"  triggered: {hit.code} ({hit.detail})")
    _emit(args, {"verdict": verdict, "diagnostics": diagnostics}, lines)
    return 0 if verdict.resilient else 1


def _cmd_integrity(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    if args.k_def:
        k_def = _load_k(args.k_def, sys_.d, sys_.n)
    else:
        k_def = docmod.k_def_matrix(doc)
    a_def = closed_loop(sys_.a, sys_.b_def, k_def)
    verdict = integrity_resilience(a_def, sys_.x_def, sys_.x_att)
    lines = _verdict_lines("integrity resilience", verdict, "resilient", "not resilient")
    _emit(args, {"verdict": verdict}, lines)
    return 0 if verdict.resilient else 1


def _cmd_sfi(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    if args.k_att:
        k_att = _load_k(args.k_att, sys_.a_dim, sys_.n)
    elif doc.k_att is not None:
        k_att = docmod.k_att_matrix(doc)
    else:
        raise DocumentError(
            [docmod.DocumentIssue("K_att", "sfi needs --k-att or a K_att field")]
        )
    report = sfi_resilience(sys_, k_att, enum_cap=args.max_enumerate)
    lines = _verdict_lines(
        "state-feedback-attack resilience", report.verdict, "resilient", "not resilient"
    )
    lines += [
        f"link bound holds: {'yes' if report.link_bound_holds else 'no'}"
        f"  (feedback side {report.m_a_att}+{report.beta_a_att}-{report.alpha_a_att},"
        f" original {report.m_a}+{report.beta_a}-{report.alpha_a})",
        f"defender block reused: {'yes' if report.reused_b_def else 'no'}",
        f"defender links used: {sorted(report.b_def_prime.stars)}",
    ]
    _emit(args, report, lines)
    return 0 if report.verdict.resilient else 1


def _cmd_complete_takeover(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    k_def = docmod.k_def_matrix(doc)
    a_def = closed_loop(sys_.a, sys_.b_def, k_def)
    verdict = attacker_complete_controllability(a_def, sys_.x_def, sys_.x_att)
    lines = _verdict_lines(
        "complete takeover by attacker", verdict, "possible", "not possible"
    )
    _emit(args, {"verdict": verdict}, lines)
    # takeover possible is the unfavorable outcome for the defender
    return 1 if verdict.resilient else 0


def _cmd_switched_dos(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_switched(doc)
    verdict = switched_dos_resilience(sys_)
    lines = _verdict_lines(
        "switched denial-of-service resilience", verdict, "resilient", "not resilient"
    )
    _emit(args, {"verdict": verdict}, lines)
    return 0 if verdict.resilient else 1


def _cmd_switched_controllability(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_switched(doc)
    report = switched_structural_controllability(sys_)
    lines = [f"switched structurally controllable: {'yes' if report.controllable else 'no'}"]
    if report.unreachable_states:
        lines.append(f"  unreachable states: {sorted(report.unreachable_states)}")
    if report.right_unmatched_after_inputs:
        lines.append(f"  unmatched states: {sorted(report.right_unmatched_after_inputs)}")
    for scc in report.uncovered_non_top_linked_sccs:
        lines.append(f"  uncovered source SCC: {sorted(scc)}")
    _emit(args, report, lines)
    return 0 if report.controllable else 1


def _cmd_oracle(args: argparse.Namespace) -> int:
    doc = _load(args)
    sys_ = docmod.to_partitioned(doc)
    b_full = pattern_hstack(sys_.b_def, sys_.b_att)
    report = validate_structural_verdict(sys_.a, b_full, args.trials, args.seed)
    lines = [
        f"structural verdict: {'controllable' if report.structurally_controllable else 'not controllable'}",
        f"full-rank trials: {report.full_rank_trials}/{report.trials}",
        f"agreement: {'yes' if report.agreement else 'NO'}",
    ]
    for miss in report.mismatches:
        lines.append(
            f"  mismatch trial {miss.trial}: rank {miss.rank}"
            f" (seeds {miss.a_seed}, {miss.b_seed})"
        )
    _emit(args, report, lines)
    return 0 if report.agreement else 1


def _cmd_export_dot(args: argparse.Namespace) -> int:
    doc = _load(args)
    witness = None
    if args.witness:
        if doc.single_mode:
            witness = dos_resilience(docmod.to_partitioned(doc)).witness_matching
        else:
            witness = switched_dos_resilience(docmod.to_switched(doc)).witness_matching
    sys.stdout.write(export_dot(doc, witness))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="structres",
        description="Structural controllability and attack-resilience analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file", help="system document (JSON)")
        cmd.add_argument("--json", action="store_true", help="machine-readable output")
        cmd.add_argument(
            "--max-enumerate",
            type=int,
            default=ALPHA_ENUM_CAP,
            metavar="CAP",
            help="cap on enumerated maximum matchings",
        )
        cmd.set_defaults(handler=handler)
        return cmd

    add("analyze", _cmd_analyze, "controllability and minimum design counts")
    add("dos", _cmd_dos, "denial-of-service resilience")
    integ = add("integrity", _cmd_integrity, "integrity-attack resilience")
    integ.add_argument("--k-def", metavar="FILE", help="defender feedback pattern")
    sfi = add("sfi", _cmd_sfi, "state-feedback-attack resilience")
    sfi.add_argument("--k-att", metavar="FILE", help="attacker feedback pattern")
    add("complete-takeover", _cmd_complete_takeover, "attacker complete controllability")
    add("switched-dos", _cmd_switched_dos, "switched denial-of-service resilience")
    add(
        "switched-controllability",
        _cmd_switched_controllability,
        "switched structural controllability",
    )
    oracle = add("oracle", _cmd_oracle, "numerical validation of the structural verdict")
    oracle.add_argument("--trials", type=int, default=20)
    oracle.add_argument("--seed", type=int, default=0)
    dot = add("export-dot", _cmd_export_dot, "Graphviz DOT rendering")
    dot.add_argument("--witness", action="store_true", help="bold the resilience witness matching")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DocumentError, InvalidPartitionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
