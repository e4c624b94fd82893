"""Array kernels shared by both execution backends.

Every function here operates on plain numpy arrays (CSR adjacency:
``indptr`` of length n_left+1 and ``indices`` holding sorted neighbor
indices) so the same source can run interpreted or compiled with
``numba.njit``.  Keep the bodies free of Python containers.
"""

import numpy as np


def hopcroft_karp(indptr, indices, match_l, match_r):
    """Grow ``match_l``/``match_r`` to a maximum bipartite matching.

    Hopcroft-Karp: repeated BFS layering from the free left vertices
    followed by DFS augmentation along layered paths.  The arrays may
    carry an existing (valid) partial matching; pass all -1 for a fresh
    run.  Left vertices are processed in ascending index order and the
    CSR neighbor lists are required to be sorted, so the result is
    deterministic.  Returns the matching cardinality.
    """
    n_left = match_l.shape[0]
    inf = n_left + 2
    dist = np.empty(n_left, np.int64)
    queue = np.empty(n_left, np.int64)
    stack_v = np.empty(n_left + 1, np.int64)
    size = 0
    for u in range(n_left):
        if match_l[u] >= 0:
            size += 1
    while True:
        # BFS phase: layer the left vertices by alternating-path depth.
        qt = 0
        free_dist = inf
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue[qt] = u
                qt += 1
            else:
                dist[u] = inf
        qh = 0
        while qh < qt:
            u = queue[qh]
            qh += 1
            if dist[u] >= free_dist:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[k]]
                if w < 0:
                    if free_dist == inf:
                        free_dist = dist[u] + 1
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue[qt] = w
                    qt += 1
        if free_dist == inf:
            break
        # DFS phase: vertex-disjoint augmenting paths along the layering.
        cursor = np.empty(n_left + 1, np.int64)
        for u0 in range(n_left):
            if match_l[u0] >= 0:
                continue
            top = 0
            stack_v[0] = u0
            cursor[0] = indptr[u0]
            while top >= 0:
                u = stack_v[top]
                k = cursor[top]
                if k >= indptr[u + 1]:
                    dist[u] = inf
                    top -= 1
                    if top >= 0:
                        cursor[top] += 1
                    continue
                v = indices[k]
                w = match_r[v]
                if w < 0:
                    # free right vertex: flip the path recorded on the stack
                    for i in range(top, -1, -1):
                        uu = stack_v[i]
                        vv = indices[cursor[i]]
                        match_l[uu] = vv
                        match_r[vv] = uu
                    size += 1
                    break
                if dist[w] == dist[u] + 1:
                    top += 1
                    stack_v[top] = w
                    cursor[top] = indptr[w]
                else:
                    cursor[top] += 1
    return size


def tarjan_scc(indptr, indices, n):
    """Strongly connected components of a CSR digraph (iterative Tarjan).

    Returns an array mapping each vertex to a component id; ids are
    assigned in completion order and renumbered by the caller.
    """
    unvisited = -1
    index = np.full(n, unvisited, np.int64)
    low = np.zeros(n, np.int64)
    on_stack = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    comp = np.full(n, -1, np.int64)
    dfs_v = np.empty(n, np.int64)
    dfs_e = np.empty(n, np.int64)
    sp = 0
    ncomp = 0
    counter = 0
    for root in range(n):
        if index[root] != unvisited:
            continue
        top = 0
        dfs_v[0] = root
        dfs_e[0] = indptr[root]
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on_stack[root] = True
        while top >= 0:
            v = dfs_v[top]
            e = dfs_e[top]
            if e < indptr[v + 1]:
                dfs_e[top] = e + 1
                w = indices[e]
                if index[w] == unvisited:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on_stack[w] = True
                    top += 1
                    dfs_v[top] = w
                    dfs_e[top] = indptr[w]
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        w = stack[sp - 1]
                        sp -= 1
                        on_stack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                top -= 1
                if top >= 0 and low[v] < low[dfs_v[top]]:
                    low[dfs_v[top]] = low[v]
    return comp


def bfs_reachable(indptr, indices, seeds):
    """Vertices reachable from the seed mask (seeds included)."""
    n = seeds.shape[0]
    visited = seeds.copy()
    queue = np.empty(n, np.int64)
    qt = 0
    for v in range(n):
        if seeds[v]:
            queue[qt] = v
            qt += 1
    qh = 0
    while qh < qt:
        v = queue[qh]
        qh += 1
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if not visited[w]:
                visited[w] = True
                queue[qt] = w
                qt += 1
    return visited
