"""List coloring of hypergraphs from random palettes.

Random (k, sigma)-list assignments, the color-degree machinery, a sufficiency
test based on the maximum edge color degree, a local-lemma resampling colorer,
bad-color pruning, and the disjoint-clique same-list arithmetic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .hypergraph import DegeneracyOrder, Hypergraph, degeneracy_order
from .outcomes import SolveOutcome, Status

DEFAULT_NODE_BUDGET = 500_000


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex color lists over the universe {1..sigma}.

    Lists are stored sorted and duplicate-free.
    """

    sigma: int
    lists: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.sigma < 1:
            raise ValueError(f"color universe size must be >= 1, got {self.sigma}")
        canon = []
        for lst in self.lists:
            cl = tuple(sorted(set(lst)))
            if cl and (cl[0] < 1 or cl[-1] > self.sigma):
                raise ValueError(f"list {lst} has colors outside 1..{self.sigma}")
            canon.append(cl)
        object.__setattr__(self, "lists", tuple(canon))

    def min_size(self) -> int:
        return min((len(lst) for lst in self.lists), default=0)


def random_list_assignment(h: Hypergraph, k: int, sigma: int, rng) -> ListAssignment:
    """Each vertex independently receives a uniform k-subset of {1..sigma}.

    Lists are consumed from rng in vertex order, so the assignment is a pure
    function of the rng seed.
    """
    if not 1 <= k <= sigma:
        raise ValueError(f"need 1 <= k <= sigma, got k={k}, sigma={sigma}")
    population = range(1, sigma + 1)
    lists = tuple(tuple(sorted(rng.sample(population, k))) for _ in range(h.n))
    return ListAssignment(sigma, lists)


def check_list_coloring(h: Hypergraph, la: ListAssignment, phi) -> tuple[str, int] | None:
    """First violation as ("list", vertex) or ("edge", edge index), else None."""
    if len(phi) != h.n:
        raise ValueError(f"coloring has {len(phi)} entries for {h.n} vertices")
    for v in range(h.n):
        if phi[v] not in la.lists[v]:
            return ("list", v)
    for i, e in enumerate(h.edges):
        first = phi[e[0]]
        if all(phi[v] == first for v in e[1:]):
            return ("edge", i)
    return None


def solve_list_coloring(
    h: Hypergraph,
    la: ListAssignment,
    budget: int = DEFAULT_NODE_BUDGET,
    order: DegeneracyOrder | None = None,
) -> SolveOutcome:
    """Decide L-colorability by backtracking over the degeneracy order.

    Domains are the lists; an edge with all but one vertex assigned a common
    color c removes c from the last vertex's domain.  The budget counts
    assignments.
    """
    if len(la.lists) != h.n:
        raise ValueError(f"{len(la.lists)} lists for {h.n} vertices")
    start = time.perf_counter()
    n, sigma = h.n, la.sigma
    seq = (order or degeneracy_order(h)).order
    everts = list(h.edges)
    incid: list[list[int]] = [[] for _ in range(n)]
    for ei, e in enumerate(everts):
        for v in e:
            incid[v].append(ei)

    assign = [0] * n
    dom = []
    for v in range(n):
        row = bytearray(sigma + 1)
        for c in la.lists[v]:
            row[c] = 1
        dom.append(row)
    dom_size = [len(la.lists[v]) for v in range(n)]
    candidates = [la.lists[v] for v in range(n)]
    edge_rem = [h.r] * h.m
    edge_alive = [True] * h.m  # alive = all assigned vertices share one color
    mono = [0] * h.m  # that shared color, once an assigned vertex exists
    removals: list[tuple[int, int]] = []
    killed: list[int] = []
    mono_set: list[int] = []
    marks = [(0, 0, 0)] * n
    next_idx = [0] * n
    nodes = 0
    depth = 0

    def undo(d: int) -> None:
        rm, km, mm = marks[d]
        while len(removals) > rm:
            u, col = removals.pop()
            dom[u][col] = 1
            dom_size[u] += 1
        while len(killed) > km:
            edge_alive[killed.pop()] = True
        while len(mono_set) > mm:
            mono[mono_set.pop()] = 0
        v = seq[d]
        for ei in incid[v]:
            edge_rem[ei] += 1
        assign[v] = 0

    def try_assign(v: int, color: int) -> bool:
        assign[v] = color
        for ei in incid[v]:
            edge_rem[ei] -= 1
            if not edge_alive[ei]:
                continue
            if mono[ei] == 0:
                mono[ei] = color
                mono_set.append(ei)
            elif mono[ei] != color:
                edge_alive[ei] = False
                killed.append(ei)
        for ei in incid[v]:
            if not edge_alive[ei]:
                continue
            rem = edge_rem[ei]
            if rem == 0:
                return False  # monochromatic edge
            if rem == 1:
                for u in everts[ei]:
                    if assign[u] == 0:
                        break
                col = mono[ei]
                du = dom[u]
                if du[col]:
                    du[col] = 0
                    dom_size[u] -= 1
                    removals.append((u, col))
                    if dom_size[u] == 0:
                        return False
        return True

    while True:
        if depth == n:
            phi = tuple(assign)
            assert check_list_coloring(h, la, phi) is None
            return SolveOutcome(Status.SAT, phi, nodes, time.perf_counter() - start)
        v = seq[depth]
        dv = dom[v]
        cand = candidates[v]
        i = next_idx[depth]
        while i < len(cand) and not dv[cand[i]]:
            i += 1
        if i == len(cand):
            next_idx[depth] = 0
            depth -= 1
            if depth < 0:
                return SolveOutcome(Status.UNSAT, None, nodes, time.perf_counter() - start)
            undo(depth)
            continue
        next_idx[depth] = i + 1
        nodes += 1
        if nodes > budget:
            return SolveOutcome(Status.TIMEOUT, None, nodes, time.perf_counter() - start)
        marks[depth] = (len(removals), len(killed), len(mono_set))
        if try_assign(v, cand[i]):
            depth += 1
        else:
            undo(depth)


# ---------------------------------------------------------------------------
# color degrees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColorDegreeTable:
    """Color-degree maps; zero entries are omitted from the dicts.

    vertex_color[(v, c)] counts edges through v whose every vertex lists c.
    edge_color[(e, c)] sums vertex_color over the edge's vertices.
    edge_total[e] sums edge_color over the set of colors listed by at least
    one vertex of e; delta_col is the maximum edge_total.
    """

    vertex_color: dict
    edge_color: dict
    edge_total: dict
    delta_col: int


def _vertex_color_degrees(h: Hypergraph, la: ListAssignment) -> dict:
    table: dict = {}
    sets = [set(lst) for lst in la.lists]
    for e in h.edges:
        common = set(sets[e[0]])
        for v in e[1:]:
            common &= sets[v]
            if not common:
                break
        for c in common:
            for v in e:
                key = (v, c)
                table[key] = table.get(key, 0) + 1
    return table


def color_degrees(h: Hypergraph, la: ListAssignment) -> ColorDegreeTable:
    if len(la.lists) != h.n:
        raise ValueError(f"{len(la.lists)} lists for {h.n} vertices")
    vertex_color = _vertex_color_degrees(h, la)
    edge_color: dict = {}
    edge_total: dict = {}
    for ei, e in enumerate(h.edges):
        union: set[int] = set()
        for v in e:
            union.update(la.lists[v])
        total = 0
        for c in union:
            dce = sum(vertex_color.get((v, c), 0) for v in e)
            if dce:
                edge_color[(ei, c)] = dce
                total += dce
        edge_total[ei] = total
    delta = max(edge_total.values(), default=0)
    return ColorDegreeTable(vertex_color, edge_color, edge_total, delta)


def drgas_sufficient(h: Hypergraph, la: ListAssignment) -> bool:
    """True iff the minimum list size is at least (e*(Delta_col+1))^(1/r).

    A sufficient condition for L-colorability; e is Euler's constant.
    """
    if h.n == 0:
        return True
    kmin = la.min_size()
    delta_col = color_degrees(h, la).delta_col
    return kmin >= (math.e * (delta_col + 1)) ** (1.0 / h.r)


# ---------------------------------------------------------------------------
# local-lemma resampling
# ---------------------------------------------------------------------------

def lll_resample_color(
    h: Hypergraph,
    la: ListAssignment,
    rng,
    max_resamples: int | None = None,
) -> SolveOutcome:
    """Resampling colorer: color every vertex uniformly from its list, then
    repeatedly resample all vertices of the first monochromatic edge (in
    canonical edge order) until none remains.

    Times out after max_resamples resampling events (default 10 * m).
    """
    if any(not lst for lst in la.lists):
        raise ValueError("every vertex needs a nonempty list")
    if max_resamples is None:
        max_resamples = 10 * max(h.m, 1)
    start = time.perf_counter()
    choice = rng.choice
    lists = la.lists
    phi = [choice(lists[v]) for v in range(h.n)]
    edges = h.edges
    resamples = 0
    while True:
        bad = -1
        for i, e in enumerate(edges):
            first = phi[e[0]]
            ok = False
            for v in e[1:]:
                if phi[v] != first:
                    ok = True
                    break
            if not ok:
                bad = i
                break
        if bad < 0:
            out = tuple(phi)
            assert check_list_coloring(h, la, out) is None
            return SolveOutcome(Status.SAT, out, resamples, time.perf_counter() - start)
        if resamples >= max_resamples:
            return SolveOutcome(Status.TIMEOUT, None, resamples, time.perf_counter() - start)
        resamples += 1
        for v in edges[bad]:
            phi[v] = choice(lists[v])


# ---------------------------------------------------------------------------
# bad-color pruning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PruneRecord:
    vertex: int
    color: int
    degree: int
    threshold: float
    removed: bool


def prune_bad_colors(
    h: Hypergraph, la: ListAssignment, epsilon: float = 0.1
) -> tuple[ListAssignment, list[PruneRecord]]:
    """Remove colors whose vertex color degree exceeds the expectation bound.

    The threshold is (1 + epsilon) * Delta(H) * (k / sigma)^(r-1) with k the
    minimum list size; colors c in L(v) with color degree above it are
    dropped.  Returns the pruned assignment and one record per (vertex,
    listed color).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if len(la.lists) != h.n:
        raise ValueError(f"{len(la.lists)} lists for {h.n} vertices")
    k = la.min_size()
    delta = h.max_degree()
    threshold = (1.0 + epsilon) * delta * (k / la.sigma) ** (h.r - 1)
    degrees = _vertex_color_degrees(h, la)
    new_lists = []
    records = []
    for v, lst in enumerate(la.lists):
        kept = []
        for c in lst:
            d = degrees.get((v, c), 0)
            removed = d > threshold
            records.append(PruneRecord(v, c, d, threshold, removed))
            if not removed:
                kept.append(c)
        new_lists.append(tuple(kept))
    return ListAssignment(la.sigma, tuple(new_lists)), records


PRUNE_CSV_HEADER = "vertex,color,degree,threshold,removed"


def prune_report_csv(records) -> str:
    from .outcomes import fmt6

    lines = [PRUNE_CSV_HEADER]
    lines.extend(
        f"{r.vertex},{r.color},{r.degree},{fmt6(r.threshold)},{int(r.removed)}" for r in records
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def clique_same_list_probability(k: int, r: int, sigma: int) -> Fraction:
    """Probability that all k(r-1)+1 vertices of a clique draw the same list:
    C(sigma, k)^(-k(r-1)), exactly."""
    if not 1 <= k <= sigma:
        raise ValueError(f"need 1 <= k <= sigma, got k={k}, sigma={sigma}")
    return Fraction(1, math.comb(sigma, k) ** (k * (r - 1)))


def chernoff_lower_tail(expectation: float, t: float) -> float:
    """exp(-t^2 / (2 E[X])): P[X < E[X] - t] bound for sums of binary
    variables whose complements are negatively correlated; needs 0 < t <= E."""
    if not 0 < t <= expectation:
        raise ValueError(f"need 0 < t <= expectation, got t={t}, expectation={expectation}")
    return math.exp(-(t * t) / (2.0 * expectation))


def chernoff_upper_tail(expectation: float, eps: float) -> float:
    """exp(-eps^2 E[X] / 3): upper-tail bound for sums of iid Bernoullis,
    P[X - E[X] >= eps E[X]]."""
    if eps <= 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if expectation < 0:
        raise ValueError("expectation must be >= 0")
    return math.exp(-(eps * eps) * expectation / 3.0)


# ---------------------------------------------------------------------------
# list file format: header "sigma", then per vertex "v k c_1 ... c_k".
# '#' comments and blank lines are ignored.
# ---------------------------------------------------------------------------

def serialize_lists(la: ListAssignment) -> str:
    lines = [str(la.sigma)]
    for v, lst in enumerate(la.lists):
        lines.append(" ".join([str(v), str(len(lst))] + [str(c) for c in lst]))
    return "\n".join(lines) + "\n"


def loads_lists(text: str) -> ListAssignment:
    from .hypergraph import FormatError

    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise FormatError("empty list-assignment file")
    if len(rows[0]) != 1:
        raise FormatError(f"list-assignment header must be a single integer, got {rows[0]!r}")
    try:
        sigma = int(rows[0][0])
        entries = {}
        for tokens in rows[1:]:
            v, count = int(tokens[0]), int(tokens[1])
            colors = tuple(int(tok) for tok in tokens[2:])
            if len(colors) != count:
                raise FormatError(f"vertex {v} announces {count} colors, lists {len(colors)}")
            entries[v] = colors
    except (ValueError, IndexError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed list-assignment line: {exc}") from exc
    n = max(entries, default=-1) + 1
    if sorted(entries) != list(range(n)):
        raise FormatError("list-assignment lines must cover vertices 0..n-1 exactly once")
    return ListAssignment(sigma, tuple(entries[v] for v in range(n)))


def load_lists(path: str) -> ListAssignment:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_lists(fh.read())


def save_lists(la: ListAssignment, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_lists(la))
