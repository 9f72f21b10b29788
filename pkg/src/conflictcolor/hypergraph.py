"""Immutable r-uniform hypergraphs: structure, generators, and text file I/O.

Vertices are dense 0-based integers.  Edges are stored canonically (each edge
ascending, the edge list lexicographically sorted) so that identical inputs
always serialize identically and can be hashed/compared.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product


class HypergraphError(ValueError):
    """Semantic validation failure (bad arity, ids, duplicate edges)."""


class FormatError(HypergraphError):
    """A hypergraph file could not be parsed."""


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on vertices 0..n-1.

    Edges are canonicalized on construction; duplicate edges, repeated
    vertices inside an edge, out-of-range ids and wrong arity are rejected.
    Instances are immutable and safe to share across parallel workers.
    """

    n: int
    r: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise HypergraphError(f"vertex count must be >= 0, got {self.n}")
        if self.r < 2:
            raise HypergraphError(f"uniformity must be >= 2, got {self.r}")
        canon = []
        for e in self.edges:
            edge = tuple(sorted(e))
            if len(edge) != self.r:
                raise HypergraphError(f"edge {e} has arity {len(e)}, expected {self.r}")
            if len(set(edge)) != self.r:
                raise HypergraphError(f"edge {e} repeats a vertex")
            if edge[0] < 0 or edge[-1] >= self.n:
                raise HypergraphError(f"edge {e} has vertex id outside [0, {self.n})")
            canon.append(edge)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise HypergraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def average_degree(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(self.r * self.m, self.n)


def incidence(h: Hypergraph) -> list[list[int]]:
    """Edge indices incident to each vertex."""
    inc: list[list[int]] = [[] for _ in range(h.n)]
    for i, e in enumerate(h.edges):
        for v in e:
            inc[v].append(i)
    return inc


def is_linear(h: Hypergraph) -> bool:
    """True iff every pair of vertices lies in at most one common edge."""
    seen: set[tuple[int, int]] = set()
    for e in h.edges:
        for pair in combinations(e, 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


@dataclass(frozen=True)
class DegeneracyOrder:
    """A vertex ordering with its back degrees.

    back_degrees[i] counts the edges contained in order[:i+1] whose last
    vertex (in this order) is order[i]; their maximum is the degeneracy.
    """

    order: tuple[int, ...]
    back_degrees: tuple[int, ...]
    degeneracy: int

    def positions(self) -> list[int]:
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos


def degeneracy_order(h: Hypergraph) -> DegeneracyOrder:
    """Minimum-degree peeling order with lowest-id tie breaking.

    Repeatedly removes a vertex of minimum degree (and all edges through it)
    and prepends it to the order; the maximum back degree of the resulting
    order equals the degeneracy.
    """
    n, edges = h.n, h.edges
    deg = h.degrees()
    edge_alive = [True] * len(edges)
    removed = [False] * n
    inc = incidence(h)
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removal: list[int] = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        removal.append(v)
        for ei in inc[v]:
            if not edge_alive[ei]:
                continue
            edge_alive[ei] = False
            for u in edges[ei]:
                if not removed[u]:
                    deg[u] -= 1
                    heapq.heappush(heap, (deg[u], u))
    order = tuple(reversed(removal))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    back = [0] * n
    for e in edges:
        back[max(pos[v] for v in e)] += 1
    return DegeneracyOrder(order, tuple(back), max(back, default=0))


def density(h: Hypergraph) -> Fraction:
    """m/n as an exact rational."""
    if h.n == 0:
        raise HypergraphError("density undefined for an empty vertex set")
    return Fraction(h.m, h.n)


@dataclass(frozen=True)
class DensityBound:
    """Maximum subhypergraph density; exact=False marks a peeling lower bound."""

    value: Fraction
    exact: bool


def max_density(h: Hypergraph, exhaustive_limit: int = 20) -> DensityBound:
    """Maximum of m'/n' over nonempty induced subhypergraphs.

    Exact (subset enumeration via a subset-sum transform) when
    n <= exhaustive_limit; otherwise the best density seen along the
    minimum-degree peeling, returned as a flagged lower bound.
    """
    if h.n == 0:
        raise HypergraphError("max_density undefined for an empty vertex set")
    if h.n <= exhaustive_limit:
        size = 1 << h.n
        inside = [0] * size
        for e in h.edges:
            mask = 0
            for v in e:
                mask |= 1 << v
            inside[mask] += 1
        for b in range(h.n):
            bit = 1 << b
            for s in range(size):
                if s & bit:
                    inside[s] += inside[s ^ bit]
        best = Fraction(0)
        for s in range(1, size):
            cand = Fraction(inside[s], s.bit_count())
            if cand > best:
                best = cand
        return DensityBound(best, True)
    # peeling lower bound: track density of every peel suffix
    deg = h.degrees()
    edge_alive = [True] * h.m
    removed = [False] * h.n
    inc = incidence(h)
    heap = [(deg[v], v) for v in range(h.n)]
    heapq.heapify(heap)
    n_alive, m_alive = h.n, h.m
    best = Fraction(m_alive, n_alive)
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        n_alive -= 1
        for ei in inc[v]:
            if not edge_alive[ei]:
                continue
            edge_alive[ei] = False
            m_alive -= 1
            for u in h.edges[ei]:
                if not removed[u]:
                    deg[u] -= 1
                    heapq.heappush(heap, (deg[u], u))
        if n_alive >= 1:
            cand = Fraction(m_alive, n_alive)
            if cand > best:
                best = cand
    return DensityBound(best, False)


def induced(h: Hypergraph, vertices: list[int] | tuple[int, ...]) -> Hypergraph:
    """Subhypergraph induced by the given vertices, reindexed to 0..len-1."""
    keep = sorted(set(vertices))
    remap = {v: i for i, v in enumerate(keep)}
    keepset = set(keep)
    edges = [tuple(remap[v] for v in e) for e in h.edges if all(v in keepset for v in e)]
    return Hypergraph(len(keep), h.r, tuple(edges))


def drop_edge(h: Hypergraph, index: int) -> Hypergraph:
    """The same hypergraph with one edge (by canonical index) removed."""
    edges = h.edges[:index] + h.edges[index + 1:]
    return Hypergraph(h.n, h.r, edges)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def gen_complete_uniform(n: int, r: int) -> Hypergraph:
    """All C(n, r) r-subsets of [n] as edges."""
    if r > n:
        raise HypergraphError(f"complete r-uniform hypergraph needs r <= n, got r={r}, n={n}")
    return Hypergraph(n, r, tuple(combinations(range(n), r)))


def gen_complete_r_partite(r: int, part_size: int) -> Hypergraph:
    """r parts of part_size vertices; edges are all part-transversals."""
    if part_size < 1:
        raise HypergraphError("part_size must be >= 1")
    parts = [range(i * part_size, (i + 1) * part_size) for i in range(r)]
    edges = tuple(tuple(choice) for choice in product(*parts))
    return Hypergraph(r * part_size, r, edges)


def gen_random_linear(n: int, r: int, target_max_degree: int, seed: int) -> Hypergraph:
    """Random linear r-uniform hypergraph with max degree <= target_max_degree.

    Rejection sampling: uniform r-subsets are accepted while they share at
    most one vertex with every accepted edge and respect the degree cap.
    The attempt budget is 50 * n * target_max_degree, so the output may fall
    short of the packing bound n*Delta/r, but is always linear.
    """
    if n < r:
        raise HypergraphError(f"need n >= r, got n={n}, r={r}")
    if target_max_degree < 0:
        raise HypergraphError("target_max_degree must be >= 0")
    rng = random.Random(seed)
    deg = [0] * n
    below_cap = n if target_max_degree > 0 else 0
    pairs: set[int] = set()
    edges: list[tuple[int, ...]] = []
    budget = 50 * n * target_max_degree
    randrange = rng.randrange
    for _ in range(budget):
        if below_cap < r:
            break
        verts = []
        while len(verts) < r:
            v = randrange(n)
            if v not in verts:
                verts.append(v)
        verts.sort()
        if any(deg[v] >= target_max_degree for v in verts):
            continue
        keys = [verts[i] * n + verts[j] for i in range(r) for j in range(i + 1, r)]
        if any(key in pairs for key in keys):
            continue
        pairs.update(keys)
        edges.append(tuple(verts))
        for v in verts:
            deg[v] += 1
            if deg[v] == target_max_degree:
                below_cap -= 1
    return Hypergraph(n, r, tuple(edges))


def gen_disjoint_cliques(num_cliques: int, k: int, r: int) -> Hypergraph:
    """Disjoint union of complete r-uniform hypergraphs of order k*(r-1)+1."""
    if k < 1:
        raise HypergraphError("k must be >= 1")
    q = k * (r - 1) + 1
    edges: list[tuple[int, ...]] = []
    for b in range(num_cliques):
        base = b * q
        edges.extend(tuple(base + v for v in combo) for combo in combinations(range(q), r))
    return Hypergraph(num_cliques * q, r, tuple(edges))


def gen_random_degenerate(n: int, r: int, d: int, seed: int) -> Hypergraph:
    """Random r-uniform hypergraph built by sequential vertex addition.

    Vertex i receives min(d, C(i, r-1)) distinct edges into its predecessors,
    so every back degree in the addition order is at most d and the
    degeneracy is at most d by construction.
    """
    if n < 0 or d < 0:
        raise HypergraphError("n and d must be >= 0")
    rng = random.Random(seed)
    edges: list[tuple[int, ...]] = []
    for i in range(r - 1, n):
        available = math.comb(i, r - 1)
        want = min(d, available)
        if want == 0:
            continue
        chosen: set[tuple[int, ...]] = set()
        if available <= 2 * want:
            pool = list(combinations(range(i), r - 1))
            rng.shuffle(pool)
            chosen.update(pool[:want])
        else:
            while len(chosen) < want:
                chosen.add(tuple(sorted(rng.sample(range(i), r - 1))))
        edges.extend(tuple(sorted(back + (i,))) for back in sorted(chosen))
    return Hypergraph(n, r, tuple(edges))


# ---------------------------------------------------------------------------
# text format:  "n r m" header, then m lines of r vertex ids.
# '#' starts a comment line; blank lines and trailing whitespace are ignored.
# ---------------------------------------------------------------------------

def serialize(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.r} {h.m}"]
    lines.extend(" ".join(str(v) for v in e) for e in h.edges)
    return "\n".join(lines) + "\n"


def loads(text: str) -> Hypergraph:
    rows: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise FormatError("empty hypergraph file")
    header = rows[0]
    if len(header) != 3:
        raise FormatError(f"header must be 'n r m', got {' '.join(header)!r}")
    try:
        n, r, m = (int(tok) for tok in header)
    except ValueError as exc:
        raise FormatError(f"non-integer header field: {' '.join(header)!r}") from exc
    body = rows[1:]
    if len(body) != m:
        raise FormatError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for tokens in body:
        try:
            edge = tuple(int(tok) for tok in tokens)
        except ValueError as exc:
            raise FormatError(f"non-integer vertex id in line {' '.join(tokens)!r}") from exc
        edges.append(edge)
    return Hypergraph(n, r, tuple(edges))


def load(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def save(h: Hypergraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(h))
