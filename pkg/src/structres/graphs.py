"""Digraph and bipartite views of structured matrices.

A pattern ``[A]`` induces a digraph on state vertices ``x1..xn`` with an
edge ``xj -> xi`` per star ``(i, j)``; an input block ``[B]`` adds input
vertices ``u1..up`` with edges ``uj -> xi``.  The bipartite view splits
every state into a column copy ``s_i`` (left) and a row copy ``w_i``
(right).  Maximum matchings of that view and the strongly connected
components of the digraph carry all the structural information the
resilience analyses need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._kernels import kernels
from .patterns import DimensionMismatchError, StructuredMatrix


def state_vertex(i: int) -> str:
    return f"x{i}"


def input_vertex(j: int) -> str:
    return f"u{j}"


def right_state(label: str) -> int:
    """State index carried by a right vertex label such as ``w4``."""
    return int(label[1:])


@dataclass(frozen=True)
class Digraph:
    """Directed graph over state vertices plus optional input vertices.

    Edges are stored as 1-indexed ``(source, target)`` pairs; state edges
    connect states, input edges run from an input to a state (inputs never
    receive edges).
    """

    n: int
    p: int
    state_edges: frozenset[tuple[int, int]]
    input_edges: frozenset[tuple[int, int]]

    @property
    def vertices(self) -> frozenset[str]:
        states = {state_vertex(i) for i in range(1, self.n + 1)}
        inputs = {input_vertex(j) for j in range(1, self.p + 1)}
        return frozenset(states | inputs)


@dataclass(frozen=True)
class SccDecomposition:
    """SCCs of a state digraph, their condensation, and source flags.

    ``sccs`` is ordered by smallest member; ``condensation`` holds edges
    between positions in that list; ``non_top_linked[i]`` is True when
    component ``i`` has no incoming condensation edge.
    """

    sccs: tuple[frozenset[int], ...]
    condensation: frozenset[tuple[int, int]]
    non_top_linked: tuple[bool, ...]

    @property
    def non_top_linked_sccs(self) -> tuple[frozenset[int], ...]:
        return tuple(s for s, flag in zip(self.sccs, self.non_top_linked) if flag)

    def component_of(self, state: int) -> int:
        for idx, members in enumerate(self.sccs):
            if state in members:
                return idx
        raise KeyError(f"state {state} not in decomposition")


@dataclass(frozen=True)
class BipartiteView:
    """Left/right vertex labels plus the directed left-to-right edge set."""

    lefts: tuple[str, ...]
    rights: tuple[str, ...]
    edges: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class Matching:
    """An injective left-to-right edge set over a bipartite view."""

    edges: frozenset[tuple[str, str]]
    rights: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def right_matched(self) -> frozenset[str]:
        return frozenset(r for _, r in self.edges)

    @property
    def right_unmatched(self) -> frozenset[str]:
        return frozenset(self.rights) - self.right_matched

    def unmatched_states(self) -> frozenset[int]:
        return frozenset(right_state(r) for r in self.right_unmatched)

    def left_of(self) -> dict[str, str]:
        return {r: l for l, r in self.edges}

    def is_valid_for(self, view: BipartiteView) -> bool:
        lefts = [l for l, _ in self.edges]
        rights = [r for _, r in self.edges]
        return (
            self.edges <= view.edges
            and len(set(lefts)) == len(lefts)
            and len(set(rights)) == len(rights)
            and tuple(self.rights) == tuple(view.rights)
        )


@dataclass(frozen=True)
class MatchingEnumeration:
    matchings: tuple[Matching, ...]
    truncated: bool

    def __iter__(self) -> Iterator[Matching]:
        return iter(self.matchings)

    def __len__(self) -> int:
        return len(self.matchings)


@dataclass(frozen=True)
class TopAssignability:
    """Maximum count of source SCCs holding an unmatched vertex, with witness.

    ``exact`` is False when the enumeration cap was hit or the instance was
    large enough that only the local-search refinement ran; the value is
    then a lower bound.
    """

    alpha: int
    witness: Matching
    exact: bool


# ---------------------------------------------------------------------------
# View construction


def digraph_of(a: StructuredMatrix, b: StructuredMatrix | None = None) -> Digraph:
    """Digraph of ``[A]`` (and optionally ``[B]``): stars become edges."""
    if not a.is_square:
        raise DimensionMismatchError(f"state matrix must be square, got {a.rows}x{a.cols}")
    if b is not None and b.rows != a.rows:
        raise DimensionMismatchError(f"b has {b.rows} rows, expected {a.rows}")
    state_edges = frozenset((j, i) for i, j in a.stars)
    input_edges = frozenset((j, i) for i, j in b.stars) if b is not None else frozenset()
    return Digraph(a.rows, b.cols if b is not None else 0, state_edges, input_edges)


def bipartite_of_digraph(g: Digraph) -> BipartiteView:
    """Split every state into a left copy ``s_i`` and a right copy ``w_i``.

    Input vertices become extra left vertices feeding the states they
    actuate.
    """
    lefts = tuple(f"s{i}" for i in range(1, g.n + 1)) + tuple(
        input_vertex(j) for j in range(1, g.p + 1)
    )
    rights = tuple(f"w{i}" for i in range(1, g.n + 1))
    edges = {(f"s{j}", f"w{i}") for j, i in g.state_edges}
    edges |= {(input_vertex(j), f"w{i}") for j, i in g.input_edges}
    return BipartiteView(lefts, rights, frozenset(edges))


def bipartite_of_blocks(
    blocks: Sequence[StructuredMatrix],
    column_labels: Sequence[Sequence[str]] | None = None,
) -> BipartiteView:
    """Concatenated view: every column of every block is its own left vertex.

    Default labels are ``s{c}`` for a single block and ``s{c}.{k}`` for
    block ``k`` of several; pass ``column_labels`` to override (one label
    per column per block, unique overall).
    """
    if not blocks:
        raise ValueError("need at least one block")
    n = blocks[0].rows
    for k, block in enumerate(blocks, start=1):
        if block.rows != n:
            raise DimensionMismatchError(f"block {k} has {block.rows} rows, expected {n}")
    if column_labels is None:
        if len(blocks) == 1:
            column_labels = [[f"s{c}" for c in range(1, blocks[0].cols + 1)]]
        else:
            column_labels = [
                [f"s{c}.{k}" for c in range(1, block.cols + 1)]
                for k, block in enumerate(blocks, start=1)
            ]
    lefts: list[str] = []
    for k, (block, labels) in enumerate(zip(blocks, column_labels), start=1):
        if len(labels) != block.cols:
            raise ValueError(f"block {k}: {len(labels)} labels for {block.cols} columns")
        lefts.extend(labels)
    if len(set(lefts)) != len(lefts):
        raise ValueError("left vertex labels must be unique across blocks")
    rights = tuple(f"w{i}" for i in range(1, n + 1))
    edges: set[tuple[str, str]] = set()
    for block, labels in zip(blocks, column_labels):
        for i, c in block.stars:
            edges.add((labels[c - 1], f"w{i}"))
    return BipartiteView(tuple(lefts), rights, frozenset(edges))


# ---------------------------------------------------------------------------
# CSR plumbing


def _view_csr(
    view: BipartiteView, allowed_rights: frozenset[str] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    left_index = {l: i for i, l in enumerate(view.lefts)}
    right_index = {r: i for i, r in enumerate(view.rights)}
    adj: list[list[int]] = [[] for _ in view.lefts]
    for l, r in view.edges:
        if allowed_rights is not None and r not in allowed_rights:
            continue
        adj[left_index[l]].append(right_index[r])
    indptr = np.zeros(len(view.lefts) + 1, np.int64)
    for i, nbrs in enumerate(adj):
        nbrs.sort()
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter(
        (v for nbrs in adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
    )
    return indptr, indices


def _matching_from_arrays(view: BipartiteView, match_l: np.ndarray) -> Matching:
    edges = frozenset(
        (view.lefts[u], view.rights[int(v)])
        for u, v in enumerate(match_l)
        if v >= 0
    )
    return Matching(edges, view.rights)


def _arrays_from_matching(view: BipartiteView, m: Matching) -> tuple[np.ndarray, np.ndarray]:
    left_index = {l: i for i, l in enumerate(view.lefts)}
    right_index = {r: i for i, r in enumerate(view.rights)}
    match_l = np.full(len(view.lefts), -1, np.int64)
    match_r = np.full(len(view.rights), -1, np.int64)
    for l, r in m.edges:
        match_l[left_index[l]] = right_index[r]
        match_r[right_index[r]] = left_index[l]
    return match_l, match_r


# ---------------------------------------------------------------------------
# Matchings


def maximum_matching(v: BipartiteView) -> Matching:
    """A deterministic maximum-cardinality matching (Hopcroft-Karp)."""
    indptr, indices = _view_csr(v)
    match_l = np.full(len(v.lefts), -1, np.int64)
    match_r = np.full(len(v.rights), -1, np.int64)
    kernels().hopcroft_karp(indptr, indices, match_l, match_r)
    return _matching_from_arrays(v, match_l)


def saturating_maximum_matching(
    v: BipartiteView, s: Iterable[str]
) -> Matching | None:
    """A maximum matching in which every right vertex of ``s`` is matched.

    By the transversal-matroid exchange property such a matching exists
    iff ``s`` alone is matchable, in which case any matching of ``s`` can
    be augmented to maximum cardinality without unmatching it.  Returns
    None when no such matching exists.
    """
    targets = frozenset(s)
    unknown = targets - set(v.rights)
    if unknown:
        raise ValueError(f"not right vertices of the view: {sorted(unknown)}")
    match_l = np.full(len(v.lefts), -1, np.int64)
    match_r = np.full(len(v.rights), -1, np.int64)
    if targets:
        indptr_s, indices_s = _view_csr(v, allowed_rights=targets)
        kernels().hopcroft_karp(indptr_s, indices_s, match_l, match_r)
        right_index = {r: i for i, r in enumerate(v.rights)}
        if any(match_r[right_index[r]] < 0 for r in targets):
            return None
    indptr, indices = _view_csr(v)
    kernels().hopcroft_karp(indptr, indices, match_l, match_r)
    return _matching_from_arrays(v, match_l)


def complete_to_maximum(v: BipartiteView, partial: Matching) -> Matching:
    """Augment a valid partial matching to maximum cardinality.

    Augmenting paths only rematch right vertices, never free them, so
    every right vertex covered by ``partial`` stays covered.
    """
    indptr, indices = _view_csr(v)
    match_l, match_r = _arrays_from_matching(v, partial)
    kernels().hopcroft_karp(indptr, indices, match_l, match_r)
    return _matching_from_arrays(v, match_l)


def _max_matching_size_csr(indptr: np.ndarray, indices: np.ndarray, n_right: int) -> int:
    match_l = np.full(len(indptr) - 1, -1, np.int64)
    match_r = np.full(n_right, -1, np.int64)
    return int(kernels().hopcroft_karp(indptr, indices, match_l, match_r))


def iter_maximum_matchings(v: BipartiteView) -> Iterator[Matching]:
    """Yield every maximum matching exactly once, in a deterministic order.

    Recursive inclusion/exclusion over the left vertices with a
    matching-size bound computed on the undecided remainder; intended for
    desk-scale views.
    """
    n_left, n_right = len(v.lefts), len(v.rights)
    indptr, indices = _view_csr(v)
    target = _max_matching_size_csr(indptr, indices, n_right)
    adj = [list(indices[indptr[u] : indptr[u + 1]]) for u in range(n_left)]
    used = np.zeros(n_right, dtype=bool)
    chosen: list[tuple[int, int]] = []

    def remainder_bound(pos: int) -> int:
        sub_adj = [[r for r in adj[u] if not used[r]] for u in range(pos, n_left)]
        sub_indptr = np.zeros(len(sub_adj) + 1, np.int64)
        for i, nbrs in enumerate(sub_adj):
            sub_indptr[i + 1] = sub_indptr[i] + len(nbrs)
        sub_indices = np.fromiter(
            (r for nbrs in sub_adj for r in nbrs), dtype=np.int64, count=int(sub_indptr[-1])
        )
        return _max_matching_size_csr(sub_indptr, sub_indices, n_right)

    def recurse(pos: int) -> Iterator[Matching]:
        if len(chosen) + remainder_bound(pos) < target:
            return
        if pos == n_left:
            if len(chosen) == target:
                yield Matching(
                    frozenset((v.lefts[u], v.rights[r]) for u, r in chosen), v.rights
                )
            return
        for r in adj[pos]:
            if not used[r]:
                used[r] = True
                chosen.append((pos, r))
                yield from recurse(pos + 1)
                chosen.pop()
                used[r] = False
        yield from recurse(pos + 1)

    yield from recurse(0)


def enumerate_maximum_matchings(v: BipartiteView, cap: int) -> MatchingEnumeration:
    """Collect distinct maximum matchings, flagging overflow past ``cap``."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    found: list[Matching] = []
    truncated = False
    for m in iter_maximum_matchings(v):
        if len(found) == cap:
            truncated = True
            break
        found.append(m)
    return MatchingEnumeration(tuple(found), truncated)


# ---------------------------------------------------------------------------
# SCC decomposition and reachability


def scc_decomposition(g: Digraph) -> SccDecomposition:
    """SCCs of the state digraph; input vertices are excluded."""
    n = g.n
    adj: list[list[int]] = [[] for _ in range(n)]
    for j, i in g.state_edges:
        adj[j - 1].append(i - 1)
    indptr = np.zeros(n + 1, np.int64)
    for i, nbrs in enumerate(adj):
        nbrs.sort()
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter(
        (v for nbrs in adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
    )
    comp = kernels().tarjan_scc(indptr, indices, n)
    ncomp = int(comp.max()) + 1 if n else 0
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for v in range(n):
        members[int(comp[v])].append(v + 1)
    order = sorted(range(ncomp), key=lambda c: members[c][0])
    rank = {old: new for new, old in enumerate(order)}
    sccs = tuple(frozenset(members[old]) for old in order)
    cond: set[tuple[int, int]] = set()
    for j, i in g.state_edges:
        cj, ci = rank[int(comp[j - 1])], rank[int(comp[i - 1])]
        if cj != ci:
            cond.add((cj, ci))
    has_in = [False] * ncomp
    for _, ci in cond:
        has_in[ci] = True
    return SccDecomposition(sccs, frozenset(cond), tuple(not f for f in has_in))


def reachable_from(g: Digraph, sources: Iterable[str]) -> frozenset[str]:
    """All vertices reachable from the given vertex labels (sources included)."""
    total = g.n + g.p
    labels = [state_vertex(i) for i in range(1, g.n + 1)] + [
        input_vertex(j) for j in range(1, g.p + 1)
    ]
    index = {lab: i for i, lab in enumerate(labels)}
    seeds = np.zeros(total, dtype=bool)
    for src in sources:
        if src not in index:
            raise ValueError(f"unknown vertex {src!r}")
        seeds[index[src]] = True
    adj: list[list[int]] = [[] for _ in range(total)]
    for j, i in g.state_edges:
        adj[j - 1].append(i - 1)
    for j, i in g.input_edges:
        adj[g.n + j - 1].append(i - 1)
    indptr = np.zeros(total + 1, np.int64)
    for i, nbrs in enumerate(adj):
        nbrs.sort()
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter(
        (v for nbrs in adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
    )
    visited = kernels().bfs_reachable(indptr, indices, seeds)
    return frozenset(labels[i] for i in range(total) if visited[i])


# ---------------------------------------------------------------------------
# Top assignability


ALPHA_ENUM_CAP = 1_000_000
ALPHA_EXACT_MAX_N = 20


def _alpha_of(unmatched: frozenset[int], ntl_sccs: Sequence[frozenset[int]]) -> int:
    return sum(1 for scc in ntl_sccs if scc & unmatched)


def _alpha_local_search(
    v: BipartiteView, start: Matching, ntl_sccs: Sequence[frozenset[int]]
) -> Matching:
    """Hill-climb over right-exchange moves to pull unmatched vertices into
    uncovered source SCCs.  Best effort; never loses matching cardinality."""
    right_adj: dict[str, set[str]] = {r: set() for r in v.rights}
    for l, r in v.edges:
        right_adj[r].add(l)
    current = start

    def exchange(m: Matching, free_r: str, want: frozenset[int]) -> Matching | None:
        # BFS over rights: free_r can displace r' if some left seeing the
        # frontier right is matched to r'.
        left_of = m.left_of()
        matched_right_of_left = {l: r for r, l in left_of.items()}
        parent: dict[str, tuple[str, str]] = {}
        frontier = [free_r]
        seen = {free_r}
        while frontier:
            nxt = []
            for r in frontier:
                for l in sorted(right_adj[r]):
                    r2 = matched_right_of_left.get(l)
                    if r2 is None or r2 in seen:
                        continue
                    parent[r2] = (r, l)
                    if right_state(r2) in want:
                        # flip the alternating path back to free_r
                        edges = set(m.edges)
                        cur = r2
                        while cur != free_r:
                            prev, via = parent[cur]
                            edges.discard((via, cur))
                            edges.add((via, prev))
                            cur = prev
                        return Matching(frozenset(edges), m.rights)
                    seen.add(r2)
                    nxt.append(r2)
            frontier = nxt
        return None

    improved = True
    while improved:
        improved = False
        unmatched = current.unmatched_states()
        uncovered = [s for s in ntl_sccs if not (s & unmatched)]
        if not uncovered:
            break
        donors = [
            r
            for r in sorted(current.right_unmatched, key=right_state)
            if all(
                right_state(r) not in s or len(s & unmatched) >= 2 for s in ntl_sccs
            )
        ]
        for target in uncovered:
            for donor in donors:
                swapped = exchange(current, donor, target)
                if swapped is not None:
                    current = swapped
                    improved = True
                    break
            if improved:
                break
    return current


def max_top_assignability_index(
    a: StructuredMatrix, enum_cap: int = ALPHA_ENUM_CAP
) -> TopAssignability:
    """Largest count, over maximum matchings of the state bipartite view, of
    non-top-linked SCCs containing a right unmatched vertex.

    Exact (by enumeration, bounded by ``enum_cap``) up to 20 states;
    beyond that a local-search refinement reports a labeled lower bound.
    """
    if not a.is_square:
        raise DimensionMismatchError(f"state matrix must be square, got {a.rows}x{a.cols}")
    g = digraph_of(a)
    view = bipartite_of_digraph(g)
    base = maximum_matching(view)
    ntl = scc_decomposition(g).non_top_linked_sccs
    m = a.rows - len(base)
    if m == 0:
        return TopAssignability(0, base, True)
    bound = min(len(ntl), m)
    if a.rows > ALPHA_EXACT_MAX_N:
        witness = _alpha_local_search(view, base, ntl)
        return TopAssignability(_alpha_of(witness.unmatched_states(), ntl), witness, False)
    best, witness = -1, base
    seen = 0
    exhausted = True
    for matching in iter_maximum_matchings(view):
        seen += 1
        alpha = _alpha_of(matching.unmatched_states(), ntl)
        if alpha > best:
            best, witness = alpha, matching
            if best == bound:
                break
        if seen >= enum_cap:
            exhausted = False
            break
    return TopAssignability(max(best, 0), witness, exhausted or best == bound)
