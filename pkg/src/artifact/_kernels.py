"""Compiled inner loops shared by the connectivity, oracle and scan code.

Two representations are used. The flow code works on a dense 0/1 adjacency
matrix plus a 0/1 membership vector, so it has no size limit. The brute-force
oracle and the scan driver work on int64 neighbourhood bitmasks (n <= 62).
"""

import numpy as np
from numba import njit

_INF = 1 << 30


# ---------------------------------------------------------------------------
# vertex-capacitated max flow on the split graph (x_in = 2x, x_out = 2x + 1)


@njit(cache=True)
def max_flow(adj, part, s, t, limit, skip_direct, reach):
    """Number of internally disjoint s-t paths inside ``part``, stopping at ``limit``.

    ``reach`` receives the residual reachability from s_out after the last
    search: bit 1 marks x_in reachable, bit 2 marks x_out reachable. It is only
    a minimum cut when the returned value is below ``limit``.
    """
    n = adj.shape[0]
    m = 2 * n
    flow = np.zeros((m, m), dtype=np.int32)
    parent = np.empty(m, dtype=np.int64)
    queue = np.empty(m, dtype=np.int64)
    value = 0
    src = 2 * s + 1
    dst = 2 * t
    while True:
        for i in range(m):
            parent[i] = -1
        parent[src] = src
        head = 0
        tail = 0
        queue[tail] = src
        tail += 1
        while head < tail and parent[dst] < 0:
            a = queue[head]
            head += 1
            x = a >> 1
            if a & 1 == 0:
                # x_in -> x_out (forward, unit capacity except at the terminals)
                b = a + 1
                cap = _INF if (x == s or x == t) else 1
                if parent[b] < 0 and cap - flow[a, b] > 0:
                    parent[b] = a
                    queue[tail] = b
                    tail += 1
                # x_in -> y_out (backward along used y_out -> x_in)
                for y in range(n):
                    if adj[x, y] and part[y]:
                        b = 2 * y + 1
                        if parent[b] < 0 and flow[b, a] > 0:
                            parent[b] = a
                            queue[tail] = b
                            tail += 1
            else:
                # x_out -> x_in (backward)
                b = a - 1
                if parent[b] < 0 and flow[b, a] > 0:
                    parent[b] = a
                    queue[tail] = b
                    tail += 1
                for y in range(n):
                    if adj[x, y] and part[y]:
                        if skip_direct and ((x == s and y == t) or (x == t and y == s)):
                            continue
                        b = 2 * y
                        if parent[b] < 0:
                            parent[b] = a
                            queue[tail] = b
                            tail += 1
        if parent[dst] < 0:
            for x in range(n):
                r = 0
                if parent[2 * x] >= 0:
                    r |= 1
                if parent[2 * x + 1] >= 0:
                    r |= 2
                reach[x] = r
            return value
        b = dst
        while b != src:
            a = parent[b]
            flow[a, b] += 1
            flow[b, a] -= 1
            b = a
        value += 1
        if value >= limit:
            return value


@njit(cache=True)
def _component_of(adj, part, start, out):
    n = adj.shape[0]
    for i in range(n):
        out[i] = 0
    stack = np.empty(n, dtype=np.int64)
    top = 0
    stack[top] = start
    top += 1
    out[start] = 1
    size = 1
    while top > 0:
        top -= 1
        x = stack[top]
        for y in range(n):
            if adj[x, y] and part[y] and not out[y]:
                out[y] = 1
                size += 1
                stack[top] = y
                top += 1
    return size


@njit(cache=True)
def find_separation(adj, part, k, side_a, side_b):
    """Deterministic separation of order <= k of the part, both sides proper.

    A disconnected part splits off the component of its least vertex with an
    empty separator. Otherwise non-adjacent pairs (u, v) are tried in
    lexicographic order; the first pair with at most k internally disjoint
    paths yields the source-side minimum cut of the residual network.
    Returns 1 and fills ``side_a``/``side_b`` on success, else 0.
    """
    n = adj.shape[0]
    size = 0
    first = -1
    for x in range(n):
        if part[x]:
            size += 1
            if first < 0:
                first = x
    if size < 2:
        return 0
    comp = np.zeros(n, dtype=np.uint8)
    csize = _component_of(adj, part, first, comp)
    if csize < size:
        for x in range(n):
            side_a[x] = comp[x]
            side_b[x] = 1 if (part[x] and not comp[x]) else 0
        return 1
    reach = np.zeros(n, dtype=np.uint8)
    for u in range(n):
        if not part[u]:
            continue
        for v in range(u + 1, n):
            if not part[v] or adj[u, v]:
                continue
            val = max_flow(adj, part, u, v, k + 1, False, reach)
            if val <= k:
                for x in range(n):
                    if part[x]:
                        r = reach[x]
                        side_a[x] = 1 if r != 0 else 0
                        side_b[x] = 0 if r & 2 else 1
                    else:
                        side_a[x] = 0
                        side_b[x] = 0
                return 1
    return 0


@njit(cache=True)
def split_until_witness(adj, part, k, witness):
    """Run the recursive splitting; return 1 and the first stuck part, or 0.

    Parts are explored depth first, side A before side B, which is the same
    order the tree builder uses.
    """
    n = adj.shape[0]
    cap = 2 * n + 4
    stack = np.zeros((cap, n), dtype=np.uint8)
    top = 0
    for x in range(n):
        stack[0, x] = part[x]
    top = 1
    side_a = np.zeros(n, dtype=np.uint8)
    side_b = np.zeros(n, dtype=np.uint8)
    while top > 0:
        top -= 1
        cur = stack[top].copy()
        size = 0
        for x in range(n):
            size += cur[x]
        if size <= 2 * k:
            continue
        if find_separation(adj, cur, k, side_a, side_b) == 0:
            for x in range(n):
                witness[x] = cur[x]
            return 1
        for x in range(n):
            stack[top, x] = side_b[x]
            stack[top + 1, x] = side_a[x]
        top += 2
    return 0


# ---------------------------------------------------------------------------
# bitmask brute force


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _connected_mask(nb, w):
    if w == 0:
        return True
    comp = w & -w
    frontier = comp
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            v = popcount(low - 1)
            grow |= nb[v]
            f ^= low
        frontier = grow & w & ~comp
        comp |= frontier
    return comp == w


@njit(cache=True)
def brute_is_connected_plus(nb, u, k):
    """True iff the subgraph on mask u is (k+1)-connected, by cut enumeration."""
    size = popcount(u)
    if size < k + 2:
        return False
    verts = np.empty(size, dtype=np.int64)
    i = 0
    w = u
    while w:
        low = w & -w
        verts[i] = popcount(low - 1)
        i += 1
        w ^= low
    for v in verts:
        if popcount(nb[v] & u) < k + 1:
            return False
    for c in range(0, k + 1):
        if c == 0:
            if not _connected_mask(nb, u):
                return False
            continue
        # Gosper enumeration of c-subsets of positions 0..size-1
        comb = (1 << c) - 1
        limit = 1 << size
        while comb < limit:
            cut = 0
            cc = comb
            while cc:
                low = cc & -cc
                cut |= 1 << verts[popcount(low - 1)]
                cc ^= low
            if not _connected_mask(nb, u & ~cut):
                return False
            lo = comb & -comb
            r = comb + lo
            comb = (((r ^ comb) >> 2) // lo) | r
    return True


@njit(cache=True)
def brute_search(nb, n, k, min_size):
    """First vertex mask with at least ``min_size`` vertices inducing a
    (k+1)-connected subgraph, scanning sizes from n down and masks in
    ascending numeric order within a size. Returns 0 if there is none."""
    full = (1 << n) - 1
    for size in range(n, min_size - 1, -1):
        if size < 1:
            break
        comb = (1 << size) - 1
        limit = 1 << n
        while comb < limit:
            ok = True
            # cheap necessary condition before cut enumeration
            w = comb
            while w:
                low = w & -w
                v = popcount(low - 1)
                if popcount(nb[v] & comb) < k + 1:
                    ok = False
                    break
                w ^= low
            if ok and brute_is_connected_plus(nb, comb & full, k):
                return comb
            lo = comb & -comb
            r = comb + lo
            comb = (((r ^ comb) >> 2) // lo) | r
    return 0


# ---------------------------------------------------------------------------
# exhaustive and sampled scans


@njit(cache=True)
def _edge_pairs(n):
    m = n * (n - 1) // 2
    pu = np.empty(m, dtype=np.int64)
    pv = np.empty(m, dtype=np.int64)
    i = 0
    for u in range(n):
        for v in range(u + 1, n):
            pu[i] = u
            pv[i] = v
            i += 1
    return pu, pv


@njit(cache=True)
def _analyse(nb, adj, part, witness, n, k, e, flags):
    """Fill flags = [has_witness_flow, has_witness_brute, is_forest]."""
    for x in range(n):
        part[x] = 1
    flags[0] = split_until_witness(adj, part, k, witness)
    flags[1] = 1 if brute_search(nb, n, k, 2 * k + 1) != 0 else 0
    # forest iff e == n - #components
    comps = 0
    rest = (1 << n) - 1
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= nb[popcount(low - 1)]
                f ^= low
            frontier = grow & rest & ~comp
            comp |= frontier
        rest &= ~comp
        comps += 1
    flags[2] = 1 if e == n - comps else 0


@njit(cache=True)
def scan_masks(n, k, masks, out):
    """Analyse every graph whose edge set is given by a mask over the
    lexicographically ordered vertex pairs.

    out = [scanned, qualifying, counterexamples, disagreements,
           max_edges_without_witness, forest_mismatches, witnesses]
    Qualifying means average degree >= 10k/3, i.e. 3e >= 5kn.
    """
    pu, pv = _edge_pairs(n)
    npairs = pu.shape[0]
    nb = np.zeros(max(n, 1), dtype=np.int64)
    adj = np.zeros((n, n), dtype=np.uint8)
    part = np.ones(n, dtype=np.uint8)
    witness = np.zeros(n, dtype=np.uint8)
    flags = np.zeros(3, dtype=np.int64)
    for idx in range(masks.shape[0]):
        mask = masks[idx]
        for x in range(n):
            nb[x] = 0
            for y in range(n):
                adj[x, y] = 0
        e = 0
        for i in range(npairs):
            if (mask >> i) & 1:
                u = pu[i]
                v = pv[i]
                nb[u] |= 1 << v
                nb[v] |= 1 << u
                adj[u, v] = 1
                adj[v, u] = 1
                e += 1
        _analyse(nb, adj, part, witness, n, k, e, flags)
        out[0] += 1
        qualifies = 3 * e >= 5 * k * n
        if qualifies:
            out[1] += 1
            if flags[1] == 0:
                out[2] += 1
        if flags[0] != flags[1]:
            out[3] += 1
        if flags[1] == 0 and e > out[4]:
            out[4] = e
        if k == 1 and (flags[0] == 0) != (flags[2] == 1):
            out[5] += 1
        if flags[1] == 1:
            out[6] += 1


@njit(cache=True)
def scan_range(n, k, lo, hi, out):
    """scan_masks over the contiguous mask range [lo, hi)."""
    step = 1 << 14
    start = lo
    while start < hi:
        stop = min(hi, start + step)
        masks = np.arange(start, stop).astype(np.int64)
        scan_masks(n, k, masks, out)
        start = stop
