"""Graphviz DOT rendering of a system document.

One cluster per SCC of the (union) state digraph, source SCCs drawn with
a bold dashed border, states colored by defender / attacker class, and
witness-matching edges drawn bold.  Output is byte-identical for
identical inputs.
"""

from __future__ import annotations

from .document import SystemDocument
from .graphs import Matching, digraph_of, right_state, scc_decomposition
from .patterns import StructuredMatrix, pattern_sum

_DEF_FILL = "#cfe2f3"
_ATT_FILL = "#f4cccc"
_NEUTRAL_FILL = "#ffffff"


def _union_blocks(doc: SystemDocument) -> tuple[StructuredMatrix, StructuredMatrix, StructuredMatrix]:
    a = StructuredMatrix.zeros(doc.n, doc.n)
    b_def = StructuredMatrix.zeros(doc.n, doc.d)
    b_att = StructuredMatrix.zeros(doc.n, doc.a)
    for mode in doc.modes:
        a = pattern_sum(a, StructuredMatrix(doc.n, doc.n, frozenset(mode.a_stars)))
        b_def = pattern_sum(b_def, StructuredMatrix(doc.n, doc.d, frozenset(mode.b_def_stars)))
        b_att = pattern_sum(b_att, StructuredMatrix(doc.n, doc.a, frozenset(mode.b_att_stars)))
    return a, b_def, b_att


def _witness_state_edges(witness: Matching | None) -> set[tuple[int, int]]:
    """(source, target) state edges selected by a bipartite matching witness."""
    if witness is None:
        return set()
    edges = set()
    for left, right in witness.edges:
        if left.startswith("s"):
            source = int(left[1:].split(".")[0])
            edges.add((source, right_state(right)))
    return edges


def export_dot(doc: SystemDocument, witness: Matching | None = None) -> str:
    a, b_def, b_att = _union_blocks(doc)
    scc = scc_decomposition(digraph_of(a))
    x_def, x_att = set(doc.x_def), set(doc.x_att)
    bold = _witness_state_edges(witness)

    lines = [
        "digraph system {",
        "  rankdir=LR;",
        '  node [shape=circle, style=filled, fontname="Helvetica"];',
    ]
    for idx, members in enumerate(scc.sccs):
        source = scc.non_top_linked[idx]
        lines.append(f"  subgraph cluster_{idx} {{")
        if source:
            lines.append('    label="source SCC";')
            lines.append("    style=dashed;")
            lines.append("    color=darkgreen;")
            lines.append("    penwidth=2;")
        else:
            lines.append('    label="";')
            lines.append("    style=dashed;")
            lines.append("    color=gray50;")
        for state in sorted(members):
            if state in x_def:
                fill = _DEF_FILL
            elif state in x_att:
                fill = _ATT_FILL
            else:
                fill = _NEUTRAL_FILL
            lines.append(f'    x{state} [fillcolor="{fill}"];')
        lines.append("  }")
    for j in range(1, doc.d + 1):
        lines.append(f'  u{j} [shape=box, fillcolor="{_DEF_FILL}"];')
    for j in range(1, doc.a + 1):
        lines.append(f'  u{doc.d + j} [shape=box, fillcolor="{_ATT_FILL}", style="filled,dashed"];')
    g = digraph_of(a)
    for source, target in sorted(g.state_edges):
        attrs = " [penwidth=2.5]" if (source, target) in bold else ""
        lines.append(f"  x{source} -> x{target}{attrs};")
    for i, j in sorted(b_def.stars):
        lines.append(f"  u{j} -> x{i};")
    for i, j in sorted(b_att.stars):
        lines.append(f"  u{doc.d + j} -> x{i} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
