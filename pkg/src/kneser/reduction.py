"""Composite-arity reduction: extract a monochromatic edge of KG^{r1 r2}(n, k, s).

Given a coloring of KG^r(n, k, s), r = r1*r2, with t colors and t below the
lower bound, the extractor

1. sets m = (r1-1)t + r1(k-s-1) + 1;
2. colors every m-subset A of [n] by the common color of the canonically least
   monochromatic KG^{r1} edge among the k-subsets of A (the *induced* color);
3. finds a monochromatic edge {A_1, ..., A_r2} of KG^{r2}(n, m, s) under the
   induced coloring, recursing through the smallest prime factor when r2 is
   composite;
4. returns the union of the per-A_i edges, which is an r-edge of the original
   hypergraph, and re-verifies it.

Both size conditions that make steps 2 and 3 sound are checked numerically
before any search.  If one fails, :class:`StructuralError` is raised naming it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator

from .bounds import ceil_div, theorem1_lower_bound
from .core import (
    Coloring,
    Edge,
    KneserParams,
    KSubset,
    is_edge,
    iter_cliques,
    vertex_index,
)
from .errors import BudgetExceeded, ParameterError, StructuralError

DEFAULT_MAX_SUBSETS = 10**6

ColorFn = Callable[[int], int]


def derived_m(r1: int, t: int, k: int, s: int) -> int:
    if r1 < 2 or t < 1 or not k > s >= 0:
        raise ParameterError(f"need r1 >= 2, t >= 1, k > s >= 0; got {r1=}, {t=}, {k=}, {s=}")
    m = (r1 - 1) * t + r1 * (k - s - 1) + 1
    assert m == (r1 - 1) * (t - 1) + r1 * (k - s)
    return m


def smallest_prime_factor(r: int) -> int:
    d = 2
    while d * d <= r:
        if r % d == 0:
            return d
        d += 1
    return r


@dataclass(frozen=True)
class ReductionPlan:
    r1: int
    r2: int
    t: int
    k: int
    s: int

    @property
    def r(self) -> int:
        return self.r1 * self.r2

    @property
    def m(self) -> int:
        return derived_m(self.r1, self.t, self.k, self.s)

    def size_chain(self, n: int) -> dict[str, bool]:
        """The inequalities the reduction relies on, evaluated at ground-set size n.

        ``inner``: m >= r1(k-1)+1, so KG^{r1}(A, k, s) falls under the bound.
        ``outer``: n >= (r2-1)(t-1) + r2*m, so KG^{r2}(n, m, s) does too.
        ``outer_identity``: (r-1)(t-1) + r(k-s) rewrites as (r2-1)(t-1) + r2*m.
        ``inner_ratio_step``: the intermediate comparison
        (n - r(k-s-1))/(r-1) >= (n - r1(k-s-1))/(r1-1); informational.
        """
        r1, r2, t, k, s = self.r1, self.r2, self.t, self.k, self.s
        r, m, c = self.r, self.m, k - s - 1
        return {
            "m_identity": (r1 - 1) * t + r1 * c + 1 == (r1 - 1) * (t - 1) + r1 * (k - s),
            "inner": m >= r1 * (k - 1) + 1,
            "outer": n >= (r2 - 1) * (t - 1) + r2 * m,
            "outer_identity": (r - 1) * (t - 1) + r * (k - s) == (r2 - 1) * (t - 1) + r2 * m,
            "inner_ratio_step": (n - r * c) * (r1 - 1) >= (n - r1 * c) * (r - 1),
        }

    def check(self, n: int):
        chain = self.size_chain(n)
        for name in ("m_identity", "inner", "outer", "outer_identity"):
            if not chain[name]:
                raise StructuralError(
                    f"size condition '{name}' fails for r1={self.r1}, r2={self.r2}, "
                    f"t={self.t}, k={self.k}, s={self.s}, n={n}, m={self.m}"
                )


def plan_for(n: int, k: int, s: int, r1: int, r2: int) -> ReductionPlan:
    """The plan with t = bound - 1 for KG^{r1 r2}(n, k, s); plain arithmetic, any n."""
    r = r1 * r2
    if not k > s >= 0 or n < r * (k - 1) + 1:
        raise ParameterError(f"need k > s >= 0 and n >= r(k-1)+1; got {n=}, {k=}, {s=}, {r=}")
    t = ceil_div(n - r * (k - s - 1), r - 1) - 1
    return ReductionPlan(r1, r2, t, k, s)


class _Counter:
    def __init__(self, cap: int):
        self.cap, self.count = cap, 0

    def step(self):
        self.count += 1
        if self.count > self.cap:
            raise BudgetExceeded(f"reduction scanned more than {self.cap} subsets", self.count)


def _as_color_fn(coloring: Coloring | ColorFn, n: int, k: int) -> ColorFn:
    if callable(coloring):
        return coloring
    colors = coloring.colors

    def color_of(mask: int) -> int:
        return colors[vertex_index(KSubset(mask), n)]

    return color_of


def _subsets_of(mask: int, k: int) -> Iterator[int]:
    elems = [i for i in range(mask.bit_length()) if mask >> i & 1]
    for combo in combinations(elems, k):
        yield sum(1 << i for i in combo)


def _least_monochromatic(masks: list[int], colors: list[int], r: int, s: int):
    """Lexicographically least r-tuple of indices into ``masks`` forming a monochromatic edge."""
    size = len(masks)
    adj = [0] * size
    for u in range(size):
        for v in range(u + 1, size):
            if colors[u] == colors[v] and (masks[u] & masks[v]).bit_count() <= s:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    for clique in iter_cliques((1 << size) - 1, r, adj):
        return clique
    return None


def induced_color(A: KSubset, base_coloring: Coloring | ColorFn, r1: int, k: int, s: int,
                  n: int) -> tuple[int, list[KSubset]]:
    """Common color and members of the least monochromatic KG^{r1} edge inside A."""
    color_of = _as_color_fn(base_coloring, n, k)
    masks = list(_subsets_of(A.mask, k))
    colors = [color_of(b) for b in masks]
    found = _least_monochromatic(masks, colors, r1, s)
    if found is None:
        raise StructuralError(
            f"no monochromatic KG^{r1} edge among the {k}-subsets of {A}"
        )
    return colors[found[0]], [KSubset(masks[i]) for i in found]


class _Induced:
    """Memoized induced coloring on m-subsets, keeping each subset's witness edge."""

    def __init__(self, color_of: ColorFn, r1: int, k: int, s: int):
        self.color_of, self.r1, self.k, self.s = color_of, r1, k, s
        self.witness: dict[int, list[int]] = {}
        self.color: dict[int, int] = {}

    def __call__(self, A: int) -> int:
        if A not in self.color:
            masks = list(_subsets_of(A, self.k))
            colors = [self.color_of(b) for b in masks]
            found = _least_monochromatic(masks, colors, self.r1, self.s)
            if found is None:
                raise StructuralError(
                    f"no monochromatic KG^{self.r1} edge among the {self.k}-subsets of "
                    f"{KSubset(A)}"
                )
            self.color[A] = colors[found[0]]
            self.witness[A] = [masks[i] for i in found]
        return self.color[A]


def _scan_edge(n: int, k: int, r: int, s: int, color_of: ColorFn,
               counter: _Counter) -> list[int] | None:
    """First monochromatic r-edge met while scanning k-subsets in lexicographic order.

    The returned edge has the smallest possible last member; among those, the
    lexicographically least remaining members.
    """
    seen: dict[int, list[int]] = {}
    for combo in combinations(range(n), k):
        counter.step()
        mask = sum(1 << i for i in combo)
        c = color_of(mask)
        bucket = seen.setdefault(c, [])
        cands = [b for b in bucket if (b & mask).bit_count() <= s]
        if len(cands) >= r - 1:
            size = len(cands)
            adj = [0] * size
            for u in range(size):
                for v in range(u + 1, size):
                    if (cands[u] & cands[v]).bit_count() <= s:
                        adj[u] |= 1 << v
                        adj[v] |= 1 << u
            for clique in iter_cliques((1 << size) - 1, r - 1, adj):
                return [cands[i] for i in clique] + [mask]
        bucket.append(mask)
    return None


@dataclass
class _Trace:
    plans: list = field(default_factory=list)
    parents: dict = field(default_factory=dict)


def _extract(n: int, k: int, r: int, s: int, color_of: ColorFn, t: int, r1: int, r2: int,
             counter: _Counter, trace: _Trace) -> list[int]:
    plan = ReductionPlan(r1, r2, t, k, s)
    plan.check(n)
    trace.plans.append(plan)
    induced = _Induced(color_of, r1, k, s)
    m = plan.m
    if _is_prime(r2):
        outer = _scan_edge(n, m, r2, s, induced, counter)
    else:
        q = smallest_prime_factor(r2)
        outer = _extract(n, m, r2, s, induced, t, q, r2 // q, counter, trace)
    if outer is None:
        raise StructuralError(
            f"no monochromatic KG^{r2}({n},{m},{s}) edge under the induced coloring"
        )
    for A in outer:
        induced(A)
    A_sets = outer
    for i, a in enumerate(A_sets):
        for b in A_sets[i + 1:]:
            if (a & b).bit_count() > s:
                raise StructuralError("outer edge members overlap in more than s elements")
    members = []
    for A in A_sets:
        for B in induced.witness[A]:
            trace.parents[B] = A
            members.append(B)
    return members


def _is_prime(r: int) -> bool:
    return r >= 2 and smallest_prime_factor(r) == r


@dataclass(frozen=True)
class WitnessReport:
    params: KneserParams
    r1: int
    r2: int
    t: int
    m: int
    edge: Edge
    color: int
    parents: tuple[KSubset | None, ...]
    checks: dict

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {"n": p.n, "k": p.k, "r": p.r, "s": p.s},
            "r1": self.r1, "r2": self.r2, "t": self.t, "m": self.m,
            "edge": self.edge.as_lists(),
            "color": self.color,
            "parents": [list(a.elements) if a is not None else None for a in self.parents],
            "checks": self.checks,
        }


def verify_witness(params: KneserParams, coloring: Coloring, edge: Edge) -> bool:
    """Arity r, pairwise meets at most s, and a single shared color."""
    if not is_edge(list(edge.members), params.r, params.s):
        return False
    if any(len(b) != params.k or b.mask >> params.n for b in edge.members):
        return False
    colors = {coloring[vertex_index(b, params.n)] for b in edge.members}
    return len(colors) == 1


def extract_witness(params: KneserParams, r1: int, r2: int, coloring: Coloring, t: int,
                    method: str = "auto",
                    max_subsets: int = DEFAULT_MAX_SUBSETS) -> WitnessReport:
    """A verified monochromatic edge of KG^{r1 r2}(n, k, s) for a coloring with t colors.

    ``method="auto"`` uses pigeonhole directly for k = 1 and the reduction
    otherwise; ``method="reduction"`` always runs the reduction.
    """
    n, k, r, s = params.n, params.k, params.r, params.s
    if r1 < 2 or r2 < 2 or r1 * r2 != r:
        raise ParameterError(f"need r1, r2 >= 2 with r1*r2 = r = {r}")
    if method not in ("auto", "reduction"):
        raise ParameterError(f"unknown method {method!r}")
    bound = theorem1_lower_bound(params)
    if not 1 <= t < bound:
        raise ParameterError(
            f"t={t} must satisfy 1 <= t < {bound} (the lower bound for {params.label()})"
        )
    if len(coloring) != params.num_vertices:
        raise ParameterError("coloring length does not match the vertex count")
    if max(coloring.colors) > t:
        raise ParameterError(f"coloring uses colors above t={t}")

    plan = ReductionPlan(r1, r2, t, k, s)
    if k == 1 and method == "auto":
        members, parents = _pigeonhole(params, coloring)
    else:
        counter = _Counter(max_subsets)
        trace = _Trace()
        masks = _extract(n, k, r, s, _as_color_fn(coloring, n, k), t, r1, r2, counter, trace)
        members = [KSubset(b) for b in masks]
        parents = [KSubset(trace.parents[b]) for b in masks]

    order = sorted(range(len(members)), key=lambda i: members[i])
    edge = Edge(tuple(members[i] for i in order))
    parents = tuple(parents[i] for i in order)
    color = coloring[vertex_index(edge.members[0], n)]
    chain = plan.size_chain(n)
    checks = {
        "verified": verify_witness(params, coloring, edge),
        "cross_meets": _cross_meets_ok(edge, parents, s),
        "m_identity": chain["m_identity"],
        "inner": chain["inner"],
        "outer": chain["outer"],
    }
    if not checks["verified"] or not checks["cross_meets"]:
        raise AssertionError(f"extracted edge failed verification: {checks}")
    return WitnessReport(params, r1, r2, t, plan.m, edge, color, parents, checks)


def _pigeonhole(params: KneserParams, coloring: Coloring):
    """k = 1: any r singletons form an edge; take the least r of one color class."""
    r = params.r
    best = None
    for cls_mask in coloring.classes().values():
        idx = [i for i in range(params.n) if cls_mask >> i & 1][:r]
        if len(idx) == r and (best is None or idx < best):
            best = idx
    if best is None:
        raise StructuralError("no color class holds r singletons")
    return [KSubset(1 << i) for i in best], [None] * r


def _cross_meets_ok(edge: Edge, parents, s: int) -> bool:
    """|B & B'| <= |A & A'| <= s for members drawn from different parents."""
    items = list(zip(edge.members, parents))
    for (b, a), (b2, a2) in combinations(items, 2):
        if a is None or a2 is None or a.mask == a2.mask:
            continue
        if not b.meet(b2) <= a.meet(a2) <= s:
            return False
    return True
