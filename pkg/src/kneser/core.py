"""Generalized Kneser hypergraphs KG^r(n, k, s).

Vertices are the k-subsets of [n] = {1, ..., n}, stored as integer bit masks
(element e lives in bit e - 1).  An edge is any r distinct vertices whose
pairwise intersections have at most s elements.

Edges are never materialized.  Every edge question is answered either by the
:func:`is_edge` predicate or by clique search in the *compatibility graph*,
where u ~ v iff |u & v| <= s: the hypergraph edges are exactly the r-cliques
of that graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, ParameterError

MAX_N = 64
DEFAULT_MAX_VERTICES = 56


@dataclass(frozen=True)
class KneserParams:
    n: int
    k: int
    r: int
    s: int

    def __post_init__(self):
        n, k, r, s = self.n, self.k, self.r, self.s
        if not all(isinstance(v, int) for v in (n, k, r, s)):
            raise ParameterError(f"parameters must be integers, got {self!r}")
        if r < 2:
            raise ParameterError(f"r must be >= 2, got r={r}")
        if not k > s >= 0:
            raise ParameterError(f"need k > s >= 0, got k={k}, s={s}")
        if n < k:
            raise ParameterError(f"need n >= k for a nonempty vertex set, got n={n}, k={k}")
        if n > MAX_N:
            raise ParameterError(f"n={n} exceeds the supported maximum {MAX_N}")

    @property
    def bound_applicable(self) -> bool:
        return self.n >= self.r * (self.k - 1) + 1

    @property
    def num_vertices(self) -> int:
        return comb(self.n, self.k)

    def label(self) -> str:
        return f"KG^{self.r}({self.n},{self.k},{self.s})"


@dataclass(frozen=True)
class KSubset:
    """A finite subset of [n] held as a bit mask."""

    mask: int

    @classmethod
    def of(cls, elements: Iterable[int]) -> "KSubset":
        mask = 0
        for e in elements:
            if e < 1:
                raise ParameterError(f"elements are 1-based, got {e}")
            if mask >> (e - 1) & 1:
                raise ParameterError(f"duplicate element {e}")
            mask |= 1 << (e - 1)
        return cls(mask)

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return mask_elements(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __lt__(self, other: "KSubset") -> bool:
        return self.elements < other.elements

    def __le__(self, other: "KSubset") -> bool:
        return self.elements <= other.elements

    def meet(self, other: "KSubset") -> int:
        """Size of the intersection."""
        return (self.mask & other.mask).bit_count()

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Edge:
    members: tuple[KSubset, ...]

    @classmethod
    def of(cls, members: Iterable[KSubset]) -> "Edge":
        return cls(tuple(sorted(members)))

    def __len__(self) -> int:
        return len(self.members)

    def as_lists(self) -> list[list[int]]:
        return [list(m.elements) for m in self.members]

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class Coloring:
    """Total map from canonical vertex index to a color in 1..m."""

    colors: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"color count must be positive, got m={self.m}")
        bad = [c for c in self.colors if not 1 <= c <= self.m]
        if bad:
            raise ParameterError(f"colors outside 1..{self.m}: {sorted(set(bad))[:5]}")

    @classmethod
    def from_list(cls, colors: Sequence[int], m: int | None = None) -> "Coloring":
        colors = tuple(int(c) for c in colors)
        return cls(colors, m if m is not None else max(colors, default=1))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, index: int) -> int:
        return self.colors[index]

    @property
    def num_used(self) -> int:
        return len(set(self.colors))

    def classes(self) -> dict[int, int]:
        """Color -> bit mask of vertex indices carrying it."""
        out: dict[int, int] = {}
        for i, c in enumerate(self.colors):
            out[c] = out.get(c, 0) | (1 << i)
        return out


def enumerate_vertices(params: KneserParams) -> list[KSubset]:
    """All k-subsets of [n] in lexicographic order of their sorted elements."""
    return [KSubset.of(c) for c in combinations(range(1, params.n + 1), params.k)]


def vertex_masks(n: int, k: int) -> list[int]:
    return [sum(1 << (e - 1) for e in c) for c in combinations(range(1, n + 1), k)]


def vertex_index(subset: KSubset | Iterable[int], n: int) -> int:
    """Lexicographic rank of a k-subset of [n]; inverse of :func:`vertex_at`."""
    elements = subset.elements if isinstance(subset, KSubset) else tuple(sorted(subset))
    k = len(elements)
    if elements and (elements[0] < 1 or elements[-1] > n):
        raise ParameterError(f"subset {elements} not inside [{n}]")
    rank, prev = 0, 0
    for i, c in enumerate(elements):
        for j in range(prev + 1, c):
            rank += comb(n - j, k - i - 1)
        prev = c
    return rank


def vertex_at(index: int, n: int, k: int) -> KSubset:
    if not 0 <= index < comb(n, k):
        raise ParameterError(f"index {index} out of range for C({n},{k})")
    elements, x = [], 1
    for i in range(k):
        while True:
            block = comb(n - x, k - i - 1)
            if index < block:
                break
            index -= block
            x += 1
        elements.append(x)
        x += 1
    return KSubset.of(elements)


def is_edge(members: Sequence[KSubset], r: int, s: int) -> bool:
    if len(members) != r or len({m.mask for m in members}) != r:
        return False
    return all(a.meet(b) <= s for a, b in combinations(members, 2))


@dataclass(frozen=True)
class CompatibilityGraph:
    """u ~ v iff the k-subsets meet in at most s elements; adjacency as bit masks."""

    params: KneserParams
    vertices: tuple[int, ...]
    adj: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    @property
    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, a in enumerate(self.adj):
            for v in iter_bits(a >> (u + 1)):
                yield u, u + 1 + v

    def subset(self, index: int) -> KSubset:
        return KSubset(self.vertices[index])


def compatibility_graph(
    params: KneserParams, max_vertices: int = DEFAULT_MAX_VERTICES
) -> CompatibilityGraph:
    size = params.num_vertices
    if size > max_vertices:
        raise BudgetExceeded(
            f"{params.label()} has C({params.n},{params.k})={size} vertices, cap is {max_vertices}"
        )
    verts = vertex_masks(params.n, params.k)
    s = params.s
    adj = [0] * size
    for u in range(size):
        mu = verts[u]
        for v in range(u + 1, size):
            if (mu & verts[v]).bit_count() <= s:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return CompatibilityGraph(params, tuple(verts), tuple(adj))


def has_clique(candidates: int, size: int, adj: Sequence[int]) -> bool:
    """Does the vertex set ``candidates`` contain a clique of ``size`` vertices?"""
    if size <= 0:
        return True
    if size == 1:
        return candidates != 0
    if candidates.bit_count() < size:
        return False
    while candidates:
        low = candidates & -candidates
        candidates ^= low
        if has_clique(candidates & adj[low.bit_length() - 1], size - 1, adj):
            return True
    return False


def iter_cliques(candidates: int, size: int, adj: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Cliques of exactly ``size`` vertices inside ``candidates``, in lexicographic order."""
    if size == 0:
        yield ()
        return
    while candidates.bit_count() >= size:
        low = candidates & -candidates
        candidates ^= low
        v = low.bit_length() - 1
        for rest in iter_cliques(candidates & adj[v], size - 1, adj):
            yield (v,) + rest


def pad_homomorphism(vertex: KSubset, source_n: int, s: int) -> KSubset:
    """Send A in [source_n] to A together with {source_n+1, ..., source_n+s}."""
    if vertex.mask >> source_n:
        raise ParameterError(f"{vertex} is not a subset of [{source_n}]")
    pad = ((1 << s) - 1) << source_n
    return KSubset(vertex.mask | pad)


@dataclass(frozen=True)
class HomomorphismCheck:
    passed: bool
    edges_checked: int
    counterexample: Edge | None = None


def verify_homomorphism(
    source: KneserParams, target: KneserParams, max_vertices: int = DEFAULT_MAX_VERTICES
) -> HomomorphismCheck:
    """Check exhaustively that padding maps every source edge onto a target edge."""
    pad = target.s
    if source.s != 0:
        raise ParameterError("the padding source must have s = 0")
    if (target.n, target.k, target.r) != (source.n + pad, source.k + pad, source.r):
        raise ParameterError(
            f"{target.label()} is not the padding target of {source.label()}"
        )
    graph = compatibility_graph(source, max_vertices)
    checked = 0
    for clique in iter_cliques((1 << len(graph)) - 1, source.r, graph.adj):
        checked += 1
        members = [graph.subset(i) for i in clique]
        image = [pad_homomorphism(m, source.n, pad) for m in members]
        if not is_edge(image, target.r, target.s):
            return HomomorphismCheck(False, checked, Edge.of(members))
    return HomomorphismCheck(True, checked)


def export_text(params: KneserParams, with_graph: bool = False,
                max_vertices: int = DEFAULT_MAX_VERTICES) -> str:
    """Plain-text dump: header, one ``v`` line per vertex, optional ``e`` lines."""
    lines = [f"kg {params.n} {params.k} {params.r} {params.s} {params.num_vertices}"]
    if with_graph:
        graph = compatibility_graph(params, max_vertices)
        for i, mask in enumerate(graph.vertices):
            lines.append(f"v {i} " + " ".join(map(str, mask_elements(mask))))
        lines.extend(f"e {u} {v}" for u, v in graph.edges())
    else:
        if params.num_vertices > max_vertices:
            raise BudgetExceeded(f"{params.label()} exceeds the vertex cap {max_vertices}")
        for i, c in enumerate(combinations(range(1, params.n + 1), params.k)):
            lines.append(f"v {i} " + " ".join(map(str, c)))
    return "\n".join(lines) + "\n"
