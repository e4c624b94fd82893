"""System description files.

UTF-8 JSON with 1-indexed ``[row, col]`` star lists.  A single-mode
system is a document whose ``modes`` list has one entry.  ``d`` and ``a``
fix the defender / attacker input counts (star lists alone cannot pin
trailing all-zero columns).

    {
      "schema_version": "1",
      "n": 7, "d": 2, "a": 0,
      "x_def": [1, 2, 3, 5],
      "x_att": [4, 6, 7],
      "modes": [{"A": [[1, 3], ...], "B_def": [[3, 1], [5, 2]], "B_att": []}],
      "K_att": [[1, 7]],          # optional, a x n
      "K_def": []                 # optional, d x n
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .patterns import (
    PartitionedSystem,
    Star,
    StructuredMatrix,
    SwitchedMode,
    SwitchedPartitionedSystem,
)

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class DocumentIssue:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class DocumentError(ValueError):
    def __init__(self, issues: list[DocumentIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


@dataclass(frozen=True)
class ModeDocument:
    a_stars: tuple[Star, ...]
    b_def_stars: tuple[Star, ...]
    b_att_stars: tuple[Star, ...]


@dataclass(frozen=True)
class SystemDocument:
    schema_version: str
    n: int
    d: int
    a: int
    x_def: tuple[int, ...]
    x_att: tuple[int, ...]
    modes: tuple[ModeDocument, ...]
    k_att: tuple[Star, ...] | None = None
    k_def: tuple[Star, ...] | None = None

    @property
    def single_mode(self) -> bool:
        return len(self.modes) == 1


def _star_list(raw: Any, path: str, rows: int, cols: int, issues: list[DocumentIssue]) -> tuple[Star, ...]:
    if not isinstance(raw, list):
        issues.append(DocumentIssue(path, f"expected a list of [row, col] pairs, got {type(raw).__name__}"))
        return ()
    stars: list[Star] = []
    for idx, entry in enumerate(raw):
        where = f"{path}[{idx}]"
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in entry)
        ):
            issues.append(DocumentIssue(where, f"expected [row, col] integers, got {entry!r}"))
            continue
        r, c = entry
        if not (1 <= r <= rows and 1 <= c <= cols):
            issues.append(DocumentIssue(where, f"position ({r}, {c}) outside {rows}x{cols}"))
            continue
        stars.append((r, c))
    seen = set()
    for idx, star in enumerate(stars):
        if star in seen:
            issues.append(DocumentIssue(f"{path}", f"duplicate star {list(star)}"))
        seen.add(star)
    return tuple(sorted(set(stars)))


def _index_list(raw: Any, path: str, n: int, issues: list[DocumentIssue]) -> tuple[int, ...]:
    if not isinstance(raw, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in raw
    ):
        issues.append(DocumentIssue(path, "expected a list of state indices"))
        return ()
    for idx, v in enumerate(raw):
        if not 1 <= v <= n:
            issues.append(DocumentIssue(f"{path}[{idx}]", f"state index {v} outside 1..{n}"))
    return tuple(sorted(set(v for v in raw if 1 <= v <= n)))


def _count(raw: Any, path: str, minimum: int, issues: list[DocumentIssue]) -> int | None:
    if not isinstance(raw, int) or isinstance(raw, bool) or raw < minimum:
        issues.append(DocumentIssue(path, f"expected an integer >= {minimum}, got {raw!r}"))
        return None
    return raw


def parse_system(text: str) -> SystemDocument:
    """Parse and validate a system document; raises DocumentError with one
    located issue per problem."""
    issues: list[DocumentIssue] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([DocumentIssue("$", f"invalid JSON: {exc}")]) from exc
    if not isinstance(raw, dict):
        raise DocumentError([DocumentIssue("$", "top level must be an object")])
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        issues.append(
            DocumentIssue("schema_version", f"expected {SCHEMA_VERSION!r}, got {version!r}")
        )
    n = _count(raw.get("n"), "n", 1, issues)
    d = _count(raw.get("d"), "d", 0, issues)
    a = _count(raw.get("a"), "a", 0, issues)
    if issues or n is None or d is None or a is None:
        raise DocumentError(issues)

    x_def = _index_list(raw.get("x_def", []), "x_def", n, issues)
    x_att = _index_list(raw.get("x_att", []), "x_att", n, issues)
    for state in sorted(set(x_def) & set(x_att)):
        issues.append(
            DocumentIssue("x_def", f"state {state} appears in both x_def and x_att")
        )

    raw_modes = raw.get("modes")
    modes: list[ModeDocument] = []
    if not isinstance(raw_modes, list) or not raw_modes:
        issues.append(DocumentIssue("modes", "expected a non-empty list of modes"))
    else:
        for k, raw_mode in enumerate(raw_modes):
            base = f"modes[{k}]"
            if not isinstance(raw_mode, dict):
                issues.append(DocumentIssue(base, "mode must be an object"))
                continue
            a_stars = _star_list(raw_mode.get("A", []), f"{base}.A", n, n, issues)
            b_def = _star_list(raw_mode.get("B_def", []), f"{base}.B_def", n, d, issues)
            b_att = _star_list(raw_mode.get("B_att", []), f"{base}.B_att", n, a, issues)
            for r, c in b_def:
                if r not in x_def:
                    issues.append(
                        DocumentIssue(
                            f"{base}.B_def",
                            f"star [{r}, {c}] is in a row outside x_def",
                        )
                    )
            for r, c in b_att:
                if r not in x_att:
                    issues.append(
                        DocumentIssue(
                            f"{base}.B_att",
                            f"star [{r}, {c}] is in a row outside x_att",
                        )
                    )
            modes.append(ModeDocument(a_stars, b_def, b_att))

    k_att = k_def = None
    if "K_att" in raw:
        k_att = _star_list(raw["K_att"], "K_att", a, n, issues)
    if "K_def" in raw:
        k_def = _star_list(raw["K_def"], "K_def", d, n, issues)

    if issues:
        raise DocumentError(issues)
    return SystemDocument(
        schema_version=SCHEMA_VERSION,
        n=n,
        d=d,
        a=a,
        x_def=x_def,
        x_att=x_att,
        modes=tuple(modes),
        k_att=k_att,
        k_def=k_def,
    )


def load_system(path: str) -> SystemDocument:
    with open(path, encoding="utf-8") as handle:
        return parse_system(handle.read())


def serialize_system(doc: SystemDocument) -> str:
    """Canonical JSON: sorted star lists, two-space indent, trailing newline."""
    payload: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "n": doc.n,
        "d": doc.d,
        "a": doc.a,
        "x_def": list(doc.x_def),
        "x_att": list(doc.x_att),
        "modes": [
            {
                "A": [list(s) for s in mode.a_stars],
                "B_def": [list(s) for s in mode.b_def_stars],
                "B_att": [list(s) for s in mode.b_att_stars],
            }
            for mode in doc.modes
        ],
    }
    if doc.k_att is not None:
        payload["K_att"] = [list(s) for s in doc.k_att]
    if doc.k_def is not None:
        payload["K_def"] = [list(s) for s in doc.k_def]
    return json.dumps(payload, indent=2) + "\n"


def to_partitioned(doc: SystemDocument) -> PartitionedSystem:
    if not doc.single_mode:
        raise DocumentError(
            [DocumentIssue("modes", f"expected a single mode, got {len(doc.modes)}")]
        )
    mode = doc.modes[0]
    return PartitionedSystem(
        a=StructuredMatrix(doc.n, doc.n, frozenset(mode.a_stars)),
        b_def=StructuredMatrix(doc.n, doc.d, frozenset(mode.b_def_stars)),
        b_att=StructuredMatrix(doc.n, doc.a, frozenset(mode.b_att_stars)),
        x_def=frozenset(doc.x_def),
        x_att=frozenset(doc.x_att),
    )


def to_switched(doc: SystemDocument) -> SwitchedPartitionedSystem:
    return SwitchedPartitionedSystem(
        modes=tuple(
            SwitchedMode(
                a=StructuredMatrix(doc.n, doc.n, frozenset(mode.a_stars)),
                b_def=StructuredMatrix(doc.n, doc.d, frozenset(mode.b_def_stars)),
                b_att=StructuredMatrix(doc.n, doc.a, frozenset(mode.b_att_stars)),
            )
            for mode in doc.modes
        ),
        x_def=frozenset(doc.x_def),
        x_att=frozenset(doc.x_att),
    )


def k_att_matrix(doc: SystemDocument) -> StructuredMatrix:
    return StructuredMatrix(doc.a, doc.n, frozenset(doc.k_att or ()))


def k_def_matrix(doc: SystemDocument) -> StructuredMatrix:
    return StructuredMatrix(doc.d, doc.n, frozenset(doc.k_def or ()))
