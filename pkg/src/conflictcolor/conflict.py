"""Single conflict coloring of r-uniform hypergraphs.

A local k-partition assigns to every edge e = {u_1 < ... < u_r} a conflict
r-tuple (c_{u_1}(e), ..., c_{u_r}(e)) with entries in {1..k}.  A vertex
coloring is a conflict coloring if no edge matches its tuple on all r
vertices at once.  This module provides random partitions, the greedy
sequential procedure, a backtracking decision solver with a 2-SAT fast path,
exact exhaustive oracles for tiny instances, closed-form bound evaluators,
and reductions from list-coloring variants.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations, product

from .hypergraph import (
    DegeneracyOrder,
    Hypergraph,
    HypergraphError,
    degeneracy_order,
    incidence,
    max_density,
)
from .outcomes import (
    Estimate,
    SolveOutcome,
    Status,
    derive_rng,
    fmt6,
    tally_statuses,
)

Coloring = tuple[int, ...]

DEFAULT_NODE_BUDGET = 500_000
ENUMERATION_LIMIT = 10_000_000


class EnumerationLimitError(ValueError):
    """An exhaustive oracle was asked for an instance beyond its size limit."""


@dataclass(frozen=True)
class LocalKPartition:
    """Per-edge conflict tuples, index-aligned with the host's sorted edges."""

    k: int
    tuples: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"palette size must be >= 1, got {self.k}")
        for t in self.tuples:
            if any(c < 1 or c > self.k for c in t):
                raise ValueError(f"conflict tuple {t} has entries outside 1..{self.k}")


def _check_partition(h: Hypergraph, part: LocalKPartition) -> None:
    if len(part.tuples) != h.m:
        raise ValueError(f"partition has {len(part.tuples)} tuples for {h.m} edges")
    for t in part.tuples:
        if len(t) != h.r:
            raise ValueError(f"conflict tuple {t} has arity {len(t)}, expected {h.r}")


def random_local_partition(h: Hypergraph, k: int, rng) -> LocalKPartition:
    """Each edge's tuple drawn uniformly from [k]^r, independently across edges.

    Tuples are consumed from rng in canonical edge order, so the partition is
    a pure function of the rng seed.
    """
    if k < 1:
        raise ValueError(f"palette size must be >= 1, got {k}")
    randint = rng.randint
    r = h.r
    return LocalKPartition(k, tuple(tuple(randint(1, k) for _ in range(r)) for _ in range(h.m)))


def check_conflict_coloring(h: Hypergraph, part: LocalKPartition, phi: Coloring) -> int | None:
    """Index of the first edge fully matching its conflict tuple, or None."""
    _check_partition(h, part)
    if len(phi) != h.n:
        raise ValueError(f"coloring has {len(phi)} entries for {h.n} vertices")
    if any(c < 1 or c > part.k for c in phi):
        raise ValueError(f"coloring uses colors outside 1..{part.k}")
    for i, (e, t) in enumerate(zip(h.edges, part.tuples)):
        if all(phi[v] == c for v, c in zip(e, t)):
            return i
    return None


def _arrival_lists(h: Hypergraph, order: tuple[int, ...]) -> list[list[int]]:
    """For each order position i, the edges whose last vertex sits at i."""
    pos = [0] * h.n
    for i, v in enumerate(order):
        pos[v] = i
    arrive: list[list[int]] = [[] for _ in range(h.n)]
    for ei, e in enumerate(h.edges):
        arrive[max(pos[v] for v in e)].append(ei)
    return arrive


def greedy_color(h: Hypergraph, part: LocalKPartition, order) -> Coloring:
    """Sequential greedy coloring along the given order.

    The first vertex gets color 1; each later vertex v takes the smallest
    color not forbidden by an edge whose other vertices are all colored and
    match their conflict entries.  If every color is forbidden the fallback
    is color 1, so the result is always total but may violate edges.
    """
    phi, _ = greedy_trace(h, part, order)
    return phi


def greedy_trace(h: Hypergraph, part: LocalKPartition, order) -> tuple[Coloring, list[set[int]]]:
    """greedy_color plus the set of available colors at every step."""
    _check_partition(h, part)
    seq = tuple(getattr(order, "order", order))
    if sorted(seq) != list(range(h.n)):
        raise ValueError("order is not a permutation of the vertex set")
    k = part.k
    arrive = _arrival_lists(h, seq)
    full = set(range(1, k + 1))
    phi = [0] * h.n
    avail: list[set[int]] = []
    for i, v in enumerate(seq):
        forbidden = set()
        for ei in arrive[i]:
            e, t = h.edges[ei], part.tuples[ei]
            own = None
            matched = True
            for u, c in zip(e, t):
                if u == v:
                    own = c
                elif phi[u] != c:
                    matched = False
                    break
            if matched:
                forbidden.add(own)
        allowed = full - forbidden
        avail.append(allowed)
        if i == 0:
            phi[v] = 1
        else:
            phi[v] = min(allowed) if allowed else 1
    return tuple(phi), avail


# ---------------------------------------------------------------------------
# decision solver
# ---------------------------------------------------------------------------

def solve_conflict(
    h: Hypergraph,
    part: LocalKPartition,
    budget: int = DEFAULT_NODE_BUDGET,
    order: DegeneracyOrder | None = None,
) -> SolveOutcome:
    """Decide conflict colorability of (h, part).

    Backtracking over the degeneracy order with unit-nogood propagation: an
    edge whose other vertices are all assigned and matching removes one color
    from its last vertex's domain.  For r=2, k=2 the instance is a 2-SAT
    formula and is decided exactly via implication-graph SCCs, so that case
    never times out.  The budget counts assignments (search nodes).
    """
    _check_partition(h, part)
    start = time.perf_counter()
    if h.m == 0:
        phi = tuple([1] * h.n)
        return SolveOutcome(Status.SAT, phi, 0, time.perf_counter() - start)
    if h.r == 2 and part.k == 2:
        return _solve_conflict_2sat(h, part)
    return _solve_conflict_backtracking(h, part, budget, order)


def _solve_conflict_backtracking(
    h: Hypergraph,
    part: LocalKPartition,
    budget: int,
    order: DegeneracyOrder | None = None,
) -> SolveOutcome:
    start = time.perf_counter()
    n, k = h.n, part.k
    seq = (order or degeneracy_order(h)).order
    everts = list(h.edges)
    etup = list(part.tuples)
    # incident edges per vertex, paired with the vertex's own conflict entry
    incid: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ei, (e, t) in enumerate(zip(everts, etup)):
        for v, c in zip(e, t):
            incid[v].append((ei, c))

    assign = [0] * n
    dom = [bytearray([0]) + bytearray([1]) * k for _ in range(n)]
    dom_size = [k] * n
    edge_rem = [h.r] * h.m
    edge_alive = [True] * h.m
    removals: list[tuple[int, int]] = []
    killed: list[int] = []
    marks = [(0, 0)] * n
    next_color = [0] * n
    nodes = 0
    depth = 0

    def undo(d: int) -> None:
        rm, km = marks[d]
        while len(removals) > rm:
            u, col = removals.pop()
            dom[u][col] = 1
            dom_size[u] += 1
        while len(killed) > km:
            edge_alive[killed.pop()] = True
        v = seq[d]
        for ei, _ in incid[v]:
            edge_rem[ei] += 1
        assign[v] = 0

    def try_assign(v: int, color: int) -> bool:
        assign[v] = color
        for ei, vcol in incid[v]:
            edge_rem[ei] -= 1
            if edge_alive[ei] and vcol != color:
                edge_alive[ei] = False
                killed.append(ei)
        for ei, vcol in incid[v]:
            if not edge_alive[ei]:
                continue
            rem = edge_rem[ei]
            if rem == 0:
                return False  # edge fully assigned and fully matched
            if rem == 1:
                e, t = everts[ei], etup[ei]
                for idx, u in enumerate(e):
                    if assign[u] == 0:
                        forb = t[idx]
                        break
                du = dom[u]
                if du[forb]:
                    du[forb] = 0
                    dom_size[u] -= 1
                    removals.append((u, forb))
                    if dom_size[u] == 0:
                        return False
        return True

    while True:
        if depth == n:
            phi = tuple(assign)
            assert check_conflict_coloring(h, part, phi) is None
            return SolveOutcome(Status.SAT, phi, nodes, time.perf_counter() - start)
        v = seq[depth]
        dv = dom[v]
        c = next_color[depth] + 1
        while c <= k and not dv[c]:
            c += 1
        if c > k:
            next_color[depth] = 0
            depth -= 1
            if depth < 0:
                return SolveOutcome(Status.UNSAT, None, nodes, time.perf_counter() - start)
            undo(depth)
            continue
        next_color[depth] = c
        nodes += 1
        if nodes > budget:
            return SolveOutcome(Status.TIMEOUT, None, nodes, time.perf_counter() - start)
        marks[depth] = (len(removals), len(killed))
        if try_assign(v, c):
            depth += 1
        else:
            undo(depth)


def _solve_conflict_2sat(h: Hypergraph, part: LocalKPartition) -> SolveOutcome:
    """Exact decision for r=2, k=2 via implication-graph SCCs.

    Literal 2v+c-1 stands for "vertex v has color c".  Each edge {u, v} with
    conflict pair (a, b) forbids (u=a and v=b), giving the implications
    (u=a) -> (v=3-b) and (v=b) -> (u=3-a).
    """
    start = time.perf_counter()
    n = h.n
    nlits = 2 * n
    adj: list[list[int]] = [[] for _ in range(nlits)]
    for (u, v), (a, b) in zip(h.edges, part.tuples):
        adj[2 * u + a - 1].append(2 * v + (3 - b) - 1)
        adj[2 * v + b - 1].append(2 * u + (3 - a) - 1)

    # iterative Tarjan
    comp = [-1] * nlits
    index = [-1] * nlits
    low = [0] * nlits
    onstack = bytearray(nlits)
    stack: list[int] = []
    counter = 0
    ncomps = 0
    for root in range(nlits):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, ptr = work[-1]
            if ptr == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                onstack[node] = 1
            advanced = False
            neighbors = adj[node]
            while ptr < len(neighbors):
                nxt = neighbors[ptr]
                ptr += 1
                if index[nxt] == -1:
                    work[-1] = (node, ptr)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if onstack[nxt]:
                    if index[nxt] < low[node]:
                        low[node] = index[nxt]
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    onstack[w] = 0
                    comp[w] = ncomps
                    if w == node:
                        break
                ncomps += 1
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]

    for v in range(n):
        if comp[2 * v] == comp[2 * v + 1]:
            return SolveOutcome(Status.UNSAT, None, nlits, time.perf_counter() - start)
    # Tarjan numbers components in reverse topological order: prefer the
    # literal whose component is closer to the sinks.
    phi = tuple(1 if comp[2 * v] < comp[2 * v + 1] else 2 for v in range(n))
    assert check_conflict_coloring(h, part, phi) is None
    return SolveOutcome(Status.SAT, phi, nlits, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# exhaustive oracles (tiny instances)
# ---------------------------------------------------------------------------

def _colorable_by_enumeration(h: Hypergraph, tuples, k: int) -> bool:
    edges = h.edges
    for phi in product(range(1, k + 1), repeat=h.n):
        ok = True
        for e, t in zip(edges, tuples):
            matched = True
            for v, c in zip(e, t):
                if phi[v] != c:
                    matched = False
                    break
            if matched:
                ok = False
                break
        if ok:
            return True
    return False


def exact_p(h: Hypergraph, k: int, limit: int = ENUMERATION_LIMIT) -> Fraction:
    """Exact fraction of local k-partitions that are conflict colorable.

    Enumerates all k^(r*m) partitions and decides each by exhaustive
    enumeration of the k^n colorings; refuses instances beyond the limit.
    """
    if k < 1:
        raise ValueError("palette size must be >= 1")
    total = k ** (h.r * h.m)
    if total > limit:
        raise EnumerationLimitError(
            f"{total} local partitions exceed the enumeration limit {limit}"
        )
    if h.m == 0:
        return Fraction(1)
    tuple_space = list(product(range(1, k + 1), repeat=h.r))
    good = 0
    for tuples in product(tuple_space, repeat=h.m):
        if _colorable_by_enumeration(h, tuples, k):
            good += 1
    return Fraction(good, total)


def count_conflict_colorings(
    h: Hypergraph, part: LocalKPartition, limit: int = ENUMERATION_LIMIT
) -> int:
    """Exact number of colorings with no fully matching edge."""
    _check_partition(h, part)
    k = part.k
    if k ** h.n > limit:
        raise EnumerationLimitError(f"{k}^{h.n} colorings exceed the enumeration limit {limit}")
    edges, tuples = h.edges, part.tuples
    count = 0
    for phi in product(range(1, k + 1), repeat=h.n):
        ok = True
        for e, t in zip(edges, tuples):
            matched = True
            for v, c in zip(e, t):
                if phi[v] != c:
                    matched = False
                    break
            if matched:
                ok = False
                break
        if ok:
            count += 1
    return count


def expected_colorings(n: int, m: int, k: int, r: int) -> Fraction:
    """Expected number of conflict colorings under a random local k-partition:
    k^n * ((k^r - 1) / k^r)^m, exactly."""
    if k < 1:
        raise ValueError("palette size must be >= 1")
    return Fraction(k**n) * Fraction(k**r - 1, k**r) ** m


def chi_single_conflict(h: Hypergraph, k_max: int, limit: int = ENUMERATION_LIMIT) -> int | None:
    """Smallest k <= k_max for which every local k-partition is colorable.

    Returns None when every k up to k_max fails (the invariant exceeds k_max).
    """
    for k in range(1, k_max + 1):
        if exact_p(h, k, limit=limit) == 1:
            return k
    return None


# ---------------------------------------------------------------------------
# closed-form bounds and thresholds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoryBounds:
    """Closed-form bounds and threshold reference values for one hypergraph.

    Lower bounds are None when the average degree is below 3 (the log
    degenerates); threshold formulas are None when their argument leaves the
    formula's domain.  All logarithms are natural.
    """

    avg_deg_lower: int | None
    dp_lower: int | None
    max_deg_upper: int | None
    degeneracy_upper: int
    threshold_complete_graph: float | None
    threshold_complete_uniform: float | None
    threshold_density: float | None


def _snap_ceil(x: float) -> int:
    # guard against float error when the true value is an exact integer
    nearest = round(x)
    if abs(x - nearest) < 1e-9:
        return int(nearest)
    return math.ceil(x)


def theory_bounds(h: Hypergraph) -> TheoryBounds:
    if h.n == 0:
        raise HypergraphError("bounds undefined for an empty vertex set")
    n, r = h.n, h.r
    d = float(h.average_degree())
    delta = h.max_degree()
    avg_lower = _snap_ceil((d / math.log(d)) ** (1.0 / r)) if d >= 3 else None
    dp_lower = _snap_ceil((d / (r * math.log(d))) ** (1.0 / (r - 1))) if d >= 3 else None
    max_deg_upper = _snap_ceil(r * delta ** (1.0 / r)) if delta >= 1 else None
    degen_upper = degeneracy_order(h).degeneracy + 1
    thr_graph = math.sqrt(n / (2 * math.log(n))) if n >= 2 else None
    thr_uniform = (
        (n ** (r - 1) / (math.factorial(r) * math.log(n))) ** (1.0 / r) if n >= 2 else None
    )
    rho = float(max_density(h).value)
    thr_density = (rho / math.log(rho)) ** (1.0 / r) if rho > 1 else None
    return TheoryBounds(
        avg_lower, dp_lower, max_deg_upper, degen_upper, thr_graph, thr_uniform, thr_density
    )


# ---------------------------------------------------------------------------
# Monte Carlo estimation
# ---------------------------------------------------------------------------

def _conflict_trial(
    h: Hypergraph,
    k: int,
    seed: int,
    budget: int,
    order: DegeneracyOrder,
    t: int,
) -> Status:
    rng = derive_rng(seed, "conflict-trial", t)
    part = random_local_partition(h, k, rng)
    return solve_conflict(h, part, budget=budget, order=order).status


def estimate_p(
    h: Hypergraph,
    k: int,
    trials: int,
    seed: int = 0,
    budget: int = DEFAULT_NODE_BUDGET,
    workers: int = 1,
) -> Estimate:
    """Monte Carlo estimate of the conflict colorability probability.

    Trial t draws its partition from an rng derived from (seed, t) and is
    decided by solve_conflict, so the aggregate is identical for any worker
    count or execution order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    order = degeneracy_order(h)
    fn = partial(_conflict_trial, h, k, seed, budget, order)
    if workers > 1:
        chunk = max(1, trials // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            statuses = list(pool.map(fn, range(trials), chunksize=chunk))
    else:
        statuses = [fn(t) for t in range(trials)]
    return tally_statuses(statuses)


ESTIMATE_CSV_HEADER = "family,n,r,k,trials,successes,failures,timeouts,p_hat,ci_low,ci_high,seed"


def estimate_csv_row(family: str, h: Hypergraph, k: int, est: Estimate, seed: int) -> str:
    return ",".join(
        [
            family,
            str(h.n),
            str(h.r),
            str(k),
            str(est.trials),
            str(est.successes),
            str(est.failures),
            str(est.timeouts),
            fmt6(est.p_hat),
            fmt6(est.ci_low),
            fmt6(est.ci_high),
            str(seed),
        ]
    )


# ---------------------------------------------------------------------------
# reductions between coloring models
# ---------------------------------------------------------------------------

def _unwrap_lists(lists) -> tuple[tuple[int, ...], ...]:
    raw = getattr(lists, "lists", lists)
    return tuple(tuple(lst) for lst in raw)


def reduce_adapted_to_conflict(
    h: Hypergraph, lists, alpha
) -> tuple[LocalKPartition, tuple[tuple[int, ...], ...]]:
    """Encode "find an L-coloring adapted to edge coloring alpha" as a
    conflict coloring instance.

    For edge e and vertex v, the conflict entry is alpha[e] when that color is
    in L(v) and the first list entry otherwise, then each vertex's list is
    bijectively relabeled to 1..k in list order.  The returned relabeling maps
    solver colors back: actual_color = relabeling[v][solver_color - 1].  A
    conflict coloring of the output always pulls back to an L-coloring of h in
    which no edge is monochromatic in its alpha color.
    """
    ls = _unwrap_lists(lists)
    if len(ls) != h.n:
        raise ValueError(f"{len(ls)} lists for {h.n} vertices")
    if len(alpha) != h.m:
        raise ValueError(f"{len(alpha)} edge colors for {h.m} edges")
    if h.n == 0:
        return LocalKPartition(1, ()), ()
    k = len(ls[0])
    if k == 0:
        raise ValueError("empty color list")
    if any(len(lst) != k for lst in ls):
        raise ValueError(f"all lists must have exactly {k} colors")
    tuples = []
    for e, a in zip(h.edges, alpha):
        row = []
        for v in e:
            lv = ls[v]
            raw = a if a in lv else lv[0]
            row.append(lv.index(raw) + 1)
        tuples.append(tuple(row))
    return LocalKPartition(k, tuple(tuples)), ls


def pull_back_coloring(relabeling, phi: Coloring) -> Coloring:
    """Map solver colors back through the relabeling returned by
    reduce_adapted_to_conflict."""
    return tuple(relabeling[v][c - 1] for v, c in enumerate(phi))


def is_adapted(h: Hypergraph, alpha, colors: Coloring) -> bool:
    """True iff no edge e has every vertex colored alpha[e]."""
    return all(
        any(colors[v] != a for v in e) for e, a in zip(h.edges, alpha)
    )


class SeparationError(ValueError):
    """Lists of two co-edge vertices share more than one color."""


def reduce_separation_to_adapted(h: Hypergraph, lists) -> tuple[Hypergraph, tuple[int, ...]]:
    """Turn a separated list assignment into an adapted-coloring instance.

    Requires lists of co-edge vertices to intersect in at most one color.
    Edges whose vertices share no common color can never be monochromatic and
    are dropped; every surviving edge e gets alpha[e] = its unique common
    color.  Any alpha-adapted L-coloring of the result is a proper L-coloring
    of the input.
    """
    ls = _unwrap_lists(lists)
    if len(ls) != h.n:
        raise ValueError(f"{len(ls)} lists for {h.n} vertices")
    sets = [set(lst) for lst in ls]
    for e in h.edges:
        for u, v in combinations(e, 2):
            if len(sets[u] & sets[v]) > 1:
                raise SeparationError(
                    f"lists of {u} and {v} (edge {e}) share more than one color"
                )
    surviving = []
    alpha = []
    for e in h.edges:
        common = set(sets[e[0]])
        for v in e[1:]:
            common &= sets[v]
        if common:
            surviving.append(e)
            alpha.append(next(iter(common)))
    return Hypergraph(h.n, h.r, tuple(surviving)), tuple(alpha)


# ---------------------------------------------------------------------------
# partition text format: header "k", then one line of r colors per edge in
# canonical edge order.  '#' comments and blank lines are ignored.
# ---------------------------------------------------------------------------

def serialize_partition(part: LocalKPartition) -> str:
    lines = [str(part.k)]
    lines.extend(" ".join(str(c) for c in t) for t in part.tuples)
    return "\n".join(lines) + "\n"


def loads_partition(text: str) -> LocalKPartition:
    from .hypergraph import FormatError

    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise FormatError("empty partition file")
    if len(rows[0]) != 1:
        raise FormatError(f"partition header must be a single integer k, got {rows[0]!r}")
    try:
        k = int(rows[0][0])
        tuples = tuple(tuple(int(tok) for tok in row) for row in rows[1:])
    except ValueError as exc:
        raise FormatError(f"non-integer value in partition file: {exc}") from exc
    return LocalKPartition(k, tuples)


def load_partition(path: str) -> LocalKPartition:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_partition(fh.read())


def save_partition(part: LocalKPartition, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_partition(part))
