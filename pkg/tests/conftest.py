import pytest

from structres import (
    PartitionedSystem,
    StructuredMatrix,
    SwitchedMode,
    SwitchedPartitionedSystem,
    bipartite_of_digraph,
    digraph_of,
    maximum_matching,
    pattern_sum,
    reachable_from,
    scc_decomposition,
)
from structres.graphs import BipartiteView


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # trigger one-time JIT compilation (or cache load) outside timed tests
    tiny = StructuredMatrix(2, 2, {(1, 2)})
    maximum_matching(bipartite_of_digraph(digraph_of(tiny)))
    scc_decomposition(digraph_of(tiny))
    reachable_from(digraph_of(tiny), {"x1"})


@pytest.fixture(scope="session")
def ex1():
    return StructuredMatrix(
        7, 7, {(1, 3), (2, 1), (3, 2), (4, 2), (6, 4), (6, 7), (7, 5), (7, 6)}
    )


@pytest.fixture(scope="session")
def ex1a():
    return StructuredMatrix(7, 7, {(1, 3), (2, 1), (7, 5), (7, 6)})


@pytest.fixture(scope="session")
def ex1b():
    return StructuredMatrix(7, 7, {(3, 2), (4, 2), (6, 4), (6, 7)})


@pytest.fixture(scope="session")
def ex2a():
    return StructuredMatrix(
        10,
        10,
        {
            (2, 1), (3, 2), (1, 3), (4, 2), (5, 4), (6, 5),
            (7, 6), (4, 7), (7, 8), (9, 8), (10, 9), (9, 10),
        },
    )


@pytest.fixture(scope="session")
def ex2b(ex2a):
    return pattern_sum(ex2a, StructuredMatrix(10, 10, {(8, 7)}))


@pytest.fixture(scope="session")
def ex2c(ex2b):
    return StructuredMatrix(10, 10, ex2b.stars - {(7, 6)})


@pytest.fixture(scope="session")
def f1(ex1):
    return PartitionedSystem(
        a=ex1,
        b_def=StructuredMatrix(7, 2, {(3, 1), (5, 2)}),
        b_att=StructuredMatrix(7, 0),
        x_def=frozenset({1, 2, 3, 5}),
        x_att=frozenset({4, 6, 7}),
    )


F2_DEF = frozenset(range(1, 7))
F2_ATT = frozenset(range(7, 11))


@pytest.fixture(scope="session")
def f2_partition():
    return F2_DEF, F2_ATT


def f2_system(a, b_def_stars=((3, 1),), b_att_stars=((8, 1),)):
    """A single-mode system over the 10-state fixtures with partition F2."""
    return PartitionedSystem(
        a=a,
        b_def=StructuredMatrix(10, 1, frozenset(b_def_stars)),
        b_att=StructuredMatrix(10, 1, frozenset(b_att_stars)),
        x_def=F2_DEF,
        x_att=F2_ATT,
    )


def random_pattern(rng, rows, cols, density):
    stars = frozenset(
        (i, j)
        for i in range(1, rows + 1)
        for j in range(1, cols + 1)
        if rng.random() < density
    )
    return StructuredMatrix(rows, cols, stars)


def random_view(rng, max_left=8, max_right=8, density=0.3):
    nl = int(rng.integers(1, max_left + 1))
    nr = int(rng.integers(1, max_right + 1))
    lefts = tuple(f"s{i}" for i in range(1, nl + 1))
    rights = tuple(f"w{j}" for j in range(1, nr + 1))
    edges = frozenset(
        (l, r) for l in lefts for r in rights if rng.random() < density
    )
    return BipartiteView(lefts, rights, edges)


def random_partition(rng, n, allow_neither=True):
    """Disjoint x_def/x_att over 1..n, possibly leaving states in neither."""
    x_def, x_att = set(), set()
    for state in range(1, n + 1):
        roll = rng.random()
        if roll < 0.45:
            x_def.add(state)
        elif roll < 0.8:
            x_att.add(state)
        elif not allow_neither:
            (x_def if roll < 0.9 else x_att).add(state)
    return frozenset(x_def), frozenset(x_att)


def random_dos_resilient_system(rng, max_tries=400):
    """Rejection-sample a partitioned system that dos_resilience certifies.

    Builds the defender block constructively: one dedicated column per
    unmatched vertex of an attacker-avoiding maximum matching, plus a
    column into every so-far-uncovered source SCC.
    """
    from structres import dos_resilience, saturating_maximum_matching

    for _ in range(max_tries):
        n = int(rng.integers(4, 8))
        a = random_pattern(rng, n, n, 0.25)
        x_def, x_att = random_partition(rng, n)
        if not x_att or not x_def:
            continue
        g = digraph_of(a)
        scc = scc_decomposition(g)
        if any(s <= x_att for s in scc.non_top_linked_sccs):
            continue
        matching = saturating_maximum_matching(
            bipartite_of_digraph(g), {f"w{i}" for i in x_att}
        )
        if matching is None:
            continue
        unmatched = matching.unmatched_states()
        if not unmatched <= x_def:
            continue
        stars = set()
        col = 0
        for state in sorted(unmatched):
            col += 1
            stars.add((state, col))
        covered = {state for state, _ in stars}
        feasible = True
        for s in scc.non_top_linked_sccs:
            if not (s & covered):
                pool = sorted(s & x_def)
                if not pool:
                    feasible = False
                    break
                col += 1
                stars.add((pool[0], col))
                covered.add(pool[0])
        if not feasible:
            continue
        b_def = StructuredMatrix(n, max(col, 1), frozenset(stars))
        a_cols = int(rng.integers(1, 3))
        b_att = StructuredMatrix(
            n,
            a_cols,
            frozenset(
                (r, c)
                for r, c in random_pattern(rng, n, a_cols, 0.4).stars
                if r in x_att
            ),
        )
        sys = PartitionedSystem(a, b_def, b_att, x_def, x_att)
        if dos_resilience(sys).resilient:
            return sys
    raise RuntimeError("could not sample a resilient system")


def single_mode(sys: PartitionedSystem) -> SwitchedPartitionedSystem:
    return SwitchedPartitionedSystem(
        (SwitchedMode(sys.a, sys.b_def, sys.b_att),), sys.x_def, sys.x_att
    )


def split_modes(rng, sys: PartitionedSystem, z: int) -> SwitchedPartitionedSystem:
    """Distribute the stars of a single-mode system over z modes at random."""
    buckets_a = [set() for _ in range(z)]
    for star in sorted(sys.a.stars):
        buckets_a[int(rng.integers(z))].add(star)
    buckets_d = [set() for _ in range(z)]
    for star in sorted(sys.b_def.stars):
        buckets_d[int(rng.integers(z))].add(star)
    buckets_t = [set() for _ in range(z)]
    for star in sorted(sys.b_att.stars):
        buckets_t[int(rng.integers(z))].add(star)
    modes = tuple(
        SwitchedMode(
            StructuredMatrix(sys.n, sys.n, frozenset(buckets_a[k])),
            StructuredMatrix(sys.n, sys.d, frozenset(buckets_d[k])),
            StructuredMatrix(sys.n, sys.a_dim, frozenset(buckets_t[k])),
        )
        for k in range(z)
    )
    return SwitchedPartitionedSystem(modes, sys.x_def, sys.x_att)
