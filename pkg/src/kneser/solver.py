"""Exact colorings of KG^r(n, k, s).

A coloring is proper iff no color class contains an r-clique of the
compatibility graph.  ``m_colorable`` is a depth-first search over
vertex -> color assignments with

* saturation ordering: branch on the vertex with the fewest admissible colors,
  ties broken by the number of colors it is one step from losing, then by
  uncolored degree, then by lowest index;
* forward checking: after coloring v with q, every uncolored neighbour u that
  would now complete an r-clique inside class q loses q;
* canonical color opening: color q may be used only once 1..q-1 are in use;
* a clique capacity cut at the root: a clique of size w needs ceil(w/(r-1))
  colors, since one class holds at most r-1 of its vertices.

``no`` answers come only from exhausting this pruned tree.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

from .bounds import ceil_div, theorem1_lower_bound
from .core import (
    DEFAULT_MAX_VERTICES,
    CompatibilityGraph,
    Coloring,
    Edge,
    KneserParams,
    compatibility_graph,
    has_clique,
    iter_bits,
    mask_elements,
)
from .errors import BudgetExceeded, ParameterError

CHI_FOUND = "chi_found"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SolveBudget:
    max_nodes: int = 10**7
    max_vertices: int = DEFAULT_MAX_VERTICES
    time_hint: float | None = None  # advisory only

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_vertices < 1:
            raise ParameterError("budget caps must be positive")
        if self.time_hint is not None and self.time_hint <= 0:
            raise ParameterError("time hint must be positive")


@dataclass(frozen=True)
class SolveResult:
    status: str
    chi: int | None
    witness: Coloring | None
    nodes_explored: int
    # every m < proven_lower_bound was refuted by search (or excluded by ``start``)
    proven_lower_bound: int = 1
    start: int = 1


class _Clock:
    __slots__ = ("nodes", "cap")

    def __init__(self, cap: int, nodes: int = 0):
        self.nodes = nodes
        self.cap = cap

    def tick(self):
        self.nodes += 1
        if self.nodes > self.cap:
            raise BudgetExceeded(f"search exceeded {self.cap} nodes", self.nodes)


def greedy_clique(graph: CompatibilityGraph) -> int:
    """A maximal clique grown greedily by degree inside the remaining candidates."""
    adj = graph.adj
    cands = (1 << len(graph)) - 1
    clique = 0
    while cands:
        best = max(iter_bits(cands), key=lambda u: ((adj[u] & cands).bit_count(), -u))
        clique |= 1 << best
        cands &= adj[best]
    return clique


class ColoringSearch:
    """Backtracking decision procedure for m-colorability, with a shared node budget."""

    def __init__(self, params: KneserParams, budget: SolveBudget | None = None,
                 graph: CompatibilityGraph | None = None):
        self.params = params
        self.budget = budget or SolveBudget()
        self.graph = graph or compatibility_graph(params, self.budget.max_vertices)
        self.clock = _Clock(self.budget.max_nodes)
        self._clique = greedy_clique(self.graph)

    @property
    def nodes(self) -> int:
        return self.clock.nodes

    def colorable(self, m: int) -> Coloring | None:
        """A proper coloring with colors in 1..m, or None if there is none."""
        if m < 1:
            raise ParameterError(f"m must be >= 1, got {m}")
        n_vertices = len(self.graph)
        r = self.params.r
        self.clock.tick()
        if n_vertices == 0:
            return Coloring((), m)
        if ceil_div(self._clique.bit_count(), r - 1) > m:
            return None

        adj = self.graph.adj
        clock = self.clock
        color = [-1] * n_vertices
        forb = [0] * n_vertices
        cls = [0] * m
        # for r == 3: touch[u] has bit q iff class q holds a neighbour of u,
        # i.e. one more q-colored neighbour could forbid q at u
        touch = [0] * n_vertices
        touch_count = [[0] * m for _ in range(n_vertices)]
        scale = n_vertices + 1

        def choose(uncol: int, used: int) -> int:
            full = uncol
            used_mask = (1 << used) - 1
            extra = 1 if used < m else 0
            best, best_key = -1, -1
            while uncol:
                low = uncol & -uncol
                uncol ^= low
                u = low.bit_length() - 1
                f = forb[u] & used_mask
                free = used - f.bit_count() + extra
                if free == 0:
                    return -1
                if r == 2:
                    threats = 0
                elif r == 3:
                    threats = (touch[u] & ~f & used_mask).bit_count()
                else:
                    au = adj[u]
                    threats = sum(
                        1 for q in range(used)
                        if not f >> q & 1 and has_clique(cls[q] & au, r - 2, adj)
                    )
                key = ((m + 1 - free) * scale + threats) * scale + (adj[u] & full).bit_count()
                if key > best_key:
                    best, best_key = u, key
            return best

        def descend(uncol: int, used: int) -> bool:
            clock.tick()
            if not uncol:
                return True
            v = choose(uncol, used)
            if v < 0:
                return False
            rest = uncol & ~(1 << v)
            nbrs = adj[v] & rest
            av = adj[v]
            for q in range(min(used + 1, m)):
                if forb[v] >> q & 1:
                    continue
                color[v] = q
                cls[q] |= 1 << v
                bit = 1 << q
                changed = []
                cq = cls[q] & av
                for u in iter_bits(nbrs):
                    if r == 3:
                        tc = touch_count[u]
                        tc[q] += 1
                        touch[u] |= bit
                    if not forb[u] & bit and (
                        r == 2
                        or (cq & adj[u] if r == 3 else has_clique(cq & adj[u], r - 2, adj))
                    ):
                        forb[u] |= bit
                        changed.append(u)
                if descend(rest, max(used, q + 1)):
                    return True
                for u in changed:
                    forb[u] &= ~bit
                if r == 3:
                    for u in iter_bits(nbrs):
                        tc = touch_count[u]
                        tc[q] -= 1
                        if not tc[q]:
                            touch[u] &= ~bit
                cls[q] &= ~(1 << v)
                color[v] = -1
            return False

        limit = sys.getrecursionlimit()
        if limit < n_vertices + 100:
            sys.setrecursionlimit(n_vertices + 100)
        try:
            found = descend((1 << n_vertices) - 1, 0)
        finally:
            sys.setrecursionlimit(limit)
        if not found:
            return None
        coloring = Coloring(tuple(c + 1 for c in color), m)
        if _first_monochromatic(self.graph, coloring, r) is not None:
            raise AssertionError("search produced an improper coloring")
        return coloring


def m_colorable(params: KneserParams, m: int, budget: SolveBudget | None = None) -> Coloring | None:
    """Decide m-colorability. Returns a verified proper coloring, or None.

    Raises BudgetExceeded when the node cap is hit.
    """
    return ColoringSearch(params, budget).colorable(m)


def exact_chromatic(params: KneserParams, budget: SolveBudget | None = None,
                    start: int | None = None) -> SolveResult:
    """Chromatic number by climbing m from ``start`` until a coloring exists.

    ``start`` defaults to the closed-form lower bound when it applies, else 1.  Pass
    ``start=1`` to certify the lower bound by search instead of assuming it.
    """
    budget = budget or SolveBudget()
    if start is None:
        start = theorem1_lower_bound(params) if params.bound_applicable else 1
    start = max(1, start)
    if params.num_vertices > budget.max_vertices:
        return SolveResult(BUDGET_EXCEEDED, None, None, 0, start, start)
    search = ColoringSearch(params, budget)
    m = start
    while True:
        try:
            coloring = search.colorable(m)
        except BudgetExceeded:
            return SolveResult(BUDGET_EXCEEDED, None, None, search.nodes, m, start)
        if coloring is not None:
            break
        m += 1
    if coloring.num_used < m:
        # a coloring below the starting bound; only possible if the bound were wrong
        if start > 1:
            return exact_chromatic(params, budget, start=1)
        raise AssertionError("search returned a coloring below a refuted color count")
    return SolveResult(CHI_FOUND, m, coloring, search.nodes, m, start)


def _first_monochromatic(graph: CompatibilityGraph, coloring: Coloring, r: int,
                         clock: _Clock | None = None) -> tuple[int, ...] | None:
    """Lexicographically least r-clique lying inside a single color class."""
    adj = graph.adj
    best = None
    for cls_mask in coloring.classes().values():
        found = _first_clique(cls_mask, r, adj, clock)
        if found is not None and (best is None or found < best):
            best = found
    return best


def _first_clique(cands: int, size: int, adj, clock: _Clock | None) -> tuple[int, ...] | None:
    if clock is not None:
        clock.tick()
    if size == 0:
        return ()
    while cands.bit_count() >= size:
        low = cands & -cands
        cands ^= low
        v = low.bit_length() - 1
        rest = _first_clique(cands & adj[v], size - 1, adj, clock)
        if rest is not None:
            return (v,) + rest
    return None


def find_monochromatic_edge(params: KneserParams, coloring: Coloring,
                            budget: SolveBudget | None = None) -> Edge | None:
    """The canonically least monochromatic edge, or None if the coloring is proper."""
    budget = budget or SolveBudget()
    graph = compatibility_graph(params, budget.max_vertices)
    if len(coloring) != len(graph):
        raise ParameterError(
            f"coloring has {len(coloring)} entries, {params.label()} has {len(graph)} vertices"
        )
    found = _first_monochromatic(graph, coloring, params.r, _Clock(budget.max_nodes))
    if found is None:
        return None
    return Edge(tuple(graph.subset(i) for i in found))


def is_proper(params: KneserParams, coloring: Coloring,
              budget: SolveBudget | None = None) -> tuple[bool, Edge | None]:
    edge = find_monochromatic_edge(params, coloring, budget)
    return edge is None, edge


def windowed_coloring_s0(params: KneserParams) -> Coloring:
    """The ceil((n - r(k-1)) / (r-1))-coloring of KG^r(n, k, 0).

    Color i < t goes to the sets whose minimum lies in the window
    {(i-1)(r-1)+1, ..., i(r-1)}; all other sets get color t.  Inside a window of
    r-1 elements there is no room for r disjoint sets, and the sets left for
    color t live on at most rk-1 elements.
    """
    n, k, r, s = params.n, params.k, params.r, params.s
    if s != 0:
        raise ParameterError("the windowed coloring needs s = 0")
    if n < r * k:
        raise ParameterError(f"the windowed coloring needs n >= rk = {r * k}")
    t = ceil_div(n - r * (k - 1), r - 1)
    from itertools import combinations

    colors = tuple(
        min(ceil_div(c[0], r - 1), t) for c in combinations(range(1, n + 1), k)
    )
    return Coloring(colors, t)


def coloring_to_json(coloring: Coloring) -> str:
    return json.dumps(list(coloring.colors))


def coloring_from_json(text: str, m: int | None = None) -> Coloring:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(c, int) for c in data):
        raise ParameterError("a coloring file must hold a JSON array of integers")
    return Coloring.from_list(data, m)


def coloring_text(params: KneserParams, coloring: Coloring) -> str:
    from .core import vertex_masks

    lines = [
        " ".join(map(str, mask_elements(mask))) + f" -> {c}"
        for mask, c in zip(vertex_masks(params.n, params.k), coloring.colors)
    ]
    return "\n".join(lines) + "\n"
