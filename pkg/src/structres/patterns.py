"""Zero-pattern matrices and partitioned system descriptions.

A structured matrix records only which entries are free parameters
("stars") and which are fixed zeros.  All algebra on patterns is generic:
a sum or product of free parameters is itself treated as a free parameter,
never as an accidental zero (cancellation happens only on a measure-zero
set of parameter values).

Positions are 1-indexed `(row, col)` pairs throughout the public API.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Star = tuple[int, int]


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes."""


@dataclass(frozen=True)
class StructuredMatrix:
    """A fixed-zero / free-parameter pattern.

    ``stars`` holds the positions of the free parameters; every other
    entry is a fixed zero.
    """

    rows: int
    cols: int
    stars: frozenset[Star] = frozenset()

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative dimensions: {self.rows}x{self.cols}")
        stars = frozenset((int(r), int(c)) for r, c in self.stars)
        object.__setattr__(self, "stars", stars)
        for r, c in stars:
            if not (1 <= r <= self.rows and 1 <= c <= self.cols):
                raise ValueError(
                    f"star ({r}, {c}) outside a {self.rows}x{self.cols} pattern"
                )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "StructuredMatrix":
        return cls(rows, cols, frozenset())

    @classmethod
    def identity(cls, n: int) -> "StructuredMatrix":
        return cls(n, n, frozenset((i, i) for i in range(1, n + 1)))

    @property
    def star_count(self) -> int:
        return len(self.stars)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def star_rows(self) -> frozenset[int]:
        return frozenset(r for r, _ in self.stars)

    def to_bool_array(self) -> np.ndarray:
        """Dense boolean mask of the star positions (0-indexed array)."""
        mask = np.zeros((self.rows, self.cols), dtype=bool)
        for r, c in self.stars:
            mask[r - 1, c - 1] = True
        return mask


def _require_same_shape(m1: StructuredMatrix, m2: StructuredMatrix) -> None:
    if (m1.rows, m1.cols) != (m2.rows, m2.cols):
        raise DimensionMismatchError(
            f"shape mismatch: {m1.rows}x{m1.cols} vs {m2.rows}x{m2.cols}"
        )


def pattern_sum(m1: StructuredMatrix, m2: StructuredMatrix) -> StructuredMatrix:
    """Generic sum of two patterns: the union of their star sets."""
    _require_same_shape(m1, m2)
    return StructuredMatrix(m1.rows, m1.cols, m1.stars | m2.stars)


def pattern_product(m1: StructuredMatrix, m2: StructuredMatrix) -> StructuredMatrix:
    """Generic product: (i, j) is a star iff some k links m1(i, k) to m2(k, j)."""
    if m1.cols != m2.rows:
        raise DimensionMismatchError(
            f"inner dimensions differ: {m1.rows}x{m1.cols} times {m2.rows}x{m2.cols}"
        )
    right: dict[int, set[int]] = {}
    for k, j in m2.stars:
        right.setdefault(k, set()).add(j)
    out: set[Star] = set()
    for i, k in m1.stars:
        for j in right.get(k, ()):
            out.add((i, j))
    return StructuredMatrix(m1.rows, m2.cols, frozenset(out))


def closed_loop(
    a: StructuredMatrix, b: StructuredMatrix, k: StructuredMatrix
) -> StructuredMatrix:
    """Pattern of the feedback-modified system matrix: a + b*k."""
    if not a.is_square:
        raise DimensionMismatchError(f"state matrix must be square, got {a.rows}x{a.cols}")
    if b.rows != a.rows:
        raise DimensionMismatchError(f"b has {b.rows} rows, expected {a.rows}")
    if (k.rows, k.cols) != (b.cols, a.cols):
        raise DimensionMismatchError(
            f"k must be {b.cols}x{a.cols}, got {k.rows}x{k.cols}"
        )
    return pattern_sum(a, pattern_product(b, k))


def zero_structure_subset(m1: StructuredMatrix, m2: StructuredMatrix) -> bool:
    """True iff every fixed zero of m1 is a fixed zero of m2.

    Equivalently, the star set of m2 is contained in the star set of m1.
    """
    _require_same_shape(m1, m2)
    return m2.stars <= m1.stars


def pattern_hstack(m1: StructuredMatrix, m2: StructuredMatrix) -> StructuredMatrix:
    """Column-wise concatenation [m1 m2]."""
    if m1.rows != m2.rows:
        raise DimensionMismatchError(f"row counts differ: {m1.rows} vs {m2.rows}")
    shifted = frozenset((r, c + m1.cols) for r, c in m2.stars)
    return StructuredMatrix(m1.rows, m1.cols + m2.cols, m1.stars | shifted)


# ---------------------------------------------------------------------------
# Partitioned systems


@dataclass(frozen=True)
class PartitionedSystem:
    """A state pattern plus defender/attacker input blocks and state classes.

    ``x_def`` / ``x_att`` are the state indices directly actuable by the
    defender and the attacker.  States in neither set exist but cannot be
    directly actuated by either party.
    """

    a: StructuredMatrix
    b_def: StructuredMatrix
    b_att: StructuredMatrix
    x_def: frozenset[int]
    x_att: frozenset[int]

    def __post_init__(self) -> None:
        if not self.a.is_square or self.a.rows < 1:
            raise DimensionMismatchError(
                f"state matrix must be square and non-empty, got {self.a.rows}x{self.a.cols}"
            )
        n = self.a.rows
        if self.b_def.rows != n:
            raise DimensionMismatchError(f"b_def has {self.b_def.rows} rows, expected {n}")
        if self.b_att.rows != n:
            raise DimensionMismatchError(f"b_att has {self.b_att.rows} rows, expected {n}")
        object.__setattr__(self, "x_def", frozenset(int(i) for i in self.x_def))
        object.__setattr__(self, "x_att", frozenset(int(i) for i in self.x_att))

    @property
    def n(self) -> int:
        return self.a.rows

    @property
    def d(self) -> int:
        """Number of defender inputs."""
        return self.b_def.cols

    @property
    def a_dim(self) -> int:
        """Number of attacker inputs."""
        return self.b_att.cols

    @property
    def p(self) -> int:
        """Total number of inputs."""
        return self.d + self.a_dim


@dataclass(frozen=True)
class SwitchedMode:
    a: StructuredMatrix
    b_def: StructuredMatrix
    b_att: StructuredMatrix


@dataclass(frozen=True)
class SwitchedPartitionedSystem:
    """A mode list sharing dimensions and defender/attacker state classes."""

    modes: tuple[SwitchedMode, ...]
    x_def: frozenset[int]
    x_att: frozenset[int]

    def __post_init__(self) -> None:
        if not self.modes:
            raise ValueError("a switched system needs at least one mode")
        object.__setattr__(self, "modes", tuple(self.modes))
        first = self.modes[0]
        if not first.a.is_square or first.a.rows < 1:
            raise DimensionMismatchError("mode state matrices must be square and non-empty")
        for k, mode in enumerate(self.modes, start=1):
            shapes = (
                (mode.a.rows, mode.a.cols),
                (mode.b_def.rows, mode.b_def.cols),
                (mode.b_att.rows, mode.b_att.cols),
            )
            expected = (
                (first.a.rows, first.a.cols),
                (first.b_def.rows, first.b_def.cols),
                (first.b_att.rows, first.b_att.cols),
            )
            if shapes != expected:
                raise DimensionMismatchError(f"mode {k} dimensions differ from mode 1")
        object.__setattr__(self, "x_def", frozenset(int(i) for i in self.x_def))
        object.__setattr__(self, "x_att", frozenset(int(i) for i in self.x_att))

    @property
    def n(self) -> int:
        return self.modes[0].a.rows

    @property
    def d(self) -> int:
        return self.modes[0].b_def.cols

    @property
    def a_dim(self) -> int:
        return self.modes[0].b_att.cols

    @property
    def z(self) -> int:
        return len(self.modes)

    def mode_system(self, k: int) -> PartitionedSystem:
        """Single-mode view of mode ``k`` (1-indexed)."""
        mode = self.modes[k - 1]
        return PartitionedSystem(mode.a, mode.b_def, mode.b_att, self.x_def, self.x_att)


# ---------------------------------------------------------------------------
# Partition validation (violations are data, not exceptions)


@dataclass(frozen=True)
class DisjointnessViolation:
    state: int


@dataclass(frozen=True)
class IndexRangeViolation:
    group: str
    state: int


@dataclass(frozen=True)
class RowConstraintViolation:
    block: str
    row: int
    col: int


Violation = DisjointnessViolation | IndexRangeViolation | RowConstraintViolation


def _partition_violations(
    n: int,
    b_def: StructuredMatrix,
    b_att: StructuredMatrix,
    x_def: frozenset[int],
    x_att: frozenset[int],
    block_suffix: str = "",
) -> list[Violation]:
    out: list[Violation] = []
    for group, members in (("x_def", x_def), ("x_att", x_att)):
        for state in sorted(members):
            if not 1 <= state <= n:
                out.append(IndexRangeViolation(group, state))
    for state in sorted(x_def & x_att):
        out.append(DisjointnessViolation(state))
    for block, matrix, allowed in (("b_def", b_def, x_def), ("b_att", b_att, x_att)):
        for row, col in sorted(matrix.stars):
            if row not in allowed:
                out.append(RowConstraintViolation(block + block_suffix, row, col))
    return out


def validate_partition(sys: PartitionedSystem) -> list[Violation]:
    """Check the partition invariants, returning one record per violation."""
    return _partition_violations(sys.n, sys.b_def, sys.b_att, sys.x_def, sys.x_att)


def validate_switched_partition(sys: SwitchedPartitionedSystem) -> list[Violation]:
    out: list[Violation] = []
    for k, mode in enumerate(sys.modes, start=1):
        suffix = f"[mode {k}]" if sys.z > 1 else ""
        mode_issues = _partition_violations(
            sys.n, mode.b_def, mode.b_att, sys.x_def, sys.x_att, block_suffix=suffix
        )
        if k > 1:
            # set-level issues are identical across modes; report them once
            mode_issues = [v for v in mode_issues if isinstance(v, RowConstraintViolation)]
        out.extend(mode_issues)
    return out


class InvalidPartitionError(ValueError):
    """Raised by analyses whose preconditions require a valid partition."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__(f"invalid partition: {violations}")
