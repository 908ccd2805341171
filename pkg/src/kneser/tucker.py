"""Signed vectors, the Z_p action, and exhaustive checks of the Z_p-Tucker hypotheses.

A signed vector is an element of (Z_p u {0})^n.  Nonzero entries are stored as
exponents 1..p (the group element w^e); 0 is the fixed non-group symbol.  The
group acts by adding exponents mod p and leaves zeros in place.

Given a proper coloring c of KG^p(n, k, s) with C colors, :func:`lam` is the
map to Z_p x [alpha + C], alpha = p(k-s-1):

* every nonzero class has at most k-s-1 positions: the sign is the first
  nonzero entry, the level is the number of nonzero entries;
* otherwise: scan positions left to right and stop at the first entry w^i whose
  class X_i has at least k-s positions and |X_i| + |X_0| >= k.  The k-set
  F = (first min(k, |X_i|) of X_i) u (first k - that many of X_0) gets
  level alpha + c(F), sign w^i.

The three checks enumerate, respectively, all nonzero vectors, all comparable
pairs x <= y, and all chains x1 <= ... <= xp, each coordinate-by-coordinate so
that the chain space has (p^2+1)^n points rather than ((p+1)^n)^p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .bounds import ceil_div
from .core import Coloring, KneserParams, KSubset, vertex_masks
from .errors import BudgetExceeded, ParameterError

DEFAULT_MAX_ENUMERATION = 10**7
_CHUNK = 1 << 17

INTERPRETATION = (
    "condition 3 is checked as: the p sign values of the chain are not pairwise distinct"
)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class SignedVector:
    entries: tuple[int, ...]
    p: int

    def __post_init__(self):
        if not all(0 <= e <= self.p for e in self.entries):
            raise ParameterError(f"entries must lie in 0..{self.p}, got {self.entries}")

    @classmethod
    def of(cls, entries: Iterable[int], p: int) -> "SignedVector":
        return cls(tuple(entries), p)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """(X_0, X_1, ..., X_p) as sorted tuples of 1-based positions."""
        out: list[list[int]] = [[] for _ in range(self.p + 1)]
        for j, e in enumerate(self.entries, start=1):
            out[e].append(j)
        return tuple(tuple(c) for c in out)

    def __str__(self) -> str:
        def fmt(e):
            return "0" if e == 0 else ("w" if e == 1 else f"w^{e}")

        return "(" + ", ".join(fmt(e) for e in self.entries) + ")"


def rotate(e: int, i: int, p: int) -> int:
    """w^i * w^e, with exponents in 1..p."""
    return (e + i - 1) % p + 1


def omega_action(i: int, x: SignedVector) -> SignedVector:
    if not 1 <= i <= x.p:
        raise ParameterError(f"group exponent must lie in 1..{x.p}, got {i}")
    return SignedVector(tuple(rotate(e, i, x.p) if e else 0 for e in x.entries), x.p)


def preceq(x: SignedVector, y: SignedVector) -> bool:
    """x <= y iff each nonzero class of x sits inside the same class of y."""
    if len(x) != len(y) or x.p != y.p:
        raise ParameterError("vectors must share length and p")
    return all(a == 0 or a == b for a, b in zip(x.entries, y.entries))


def first_set(X: Iterable[int], l: int) -> tuple[int, ...]:
    """The l smallest elements of X."""
    xs = sorted(X)
    if not 0 <= l <= len(xs):
        raise ParameterError(f"cannot take {l} elements of a {len(xs)}-set")
    return tuple(xs[:l])


@dataclass(frozen=True)
class LambdaValue:
    sign: int
    level: int
    case: int = 1
    kset: KSubset | None = None

    def pair(self) -> tuple[int, int]:
        return self.sign, self.level


@dataclass(frozen=True)
class TuckerInstance:
    p: int
    params: KneserParams
    coloring: Coloring
    diagnostic: bool = False

    def __post_init__(self):
        p, params = self.p, self.params
        if not is_prime(p):
            raise ParameterError(f"p={p} is not prime")
        if params.r != p:
            raise ParameterError(f"instance needs r = p, got r={params.r}, p={p}")
        if not params.bound_applicable:
            raise ParameterError(f"{params.label()}: need n >= p(k-1)+1")
        if len(self.coloring) != params.num_vertices:
            raise ParameterError("coloring length does not match the vertex count")
        if not self.diagnostic:
            from .solver import find_monochromatic_edge, SolveBudget

            edge = find_monochromatic_edge(
                params, self.coloring, SolveBudget(max_vertices=max(params.num_vertices, 1))
            )
            if edge is not None:
                raise ParameterError(f"coloring is not proper: monochromatic edge {edge}")

    @classmethod
    def build(cls, p: int, n: int, k: int, s: int, coloring: Coloring,
              diagnostic: bool = False) -> "TuckerInstance":
        return cls(p, KneserParams(n, k, p, s), coloring, diagnostic)

    @property
    def alpha(self) -> int:
        return self.p * (self.params.k - self.params.s - 1)

    @property
    def colors(self) -> int:
        return self.coloring.m

    @property
    def m(self) -> int:
        return self.alpha + self.colors

    @cached_property
    def _color_of_mask(self) -> dict[int, int]:
        masks = vertex_masks(self.params.n, self.params.k)
        return dict(zip(masks, self.coloring.colors))

    def color_of(self, subset: KSubset) -> int:
        return self._color_of_mask[subset.mask]


def lam(instance: TuckerInstance, x: SignedVector) -> LambdaValue:
    p, k, s = instance.p, instance.params.k, instance.params.s
    if x.p != p or len(x) != instance.params.n:
        raise ParameterError("vector does not match the instance")
    if x.is_zero:
        raise ParameterError("lambda is undefined on the zero vector")
    classes = x.classes
    small = k - s - 1
    if all(len(classes[i]) <= small for i in range(1, p + 1)):
        first = next(e for e in x.entries if e)
        return LambdaValue(first, sum(len(classes[i]) for i in range(1, p + 1)), 1)
    zeros = classes[0]
    for e in x.entries:
        if not e:
            continue
        big = classes[e]
        if len(big) >= k - s and len(big) + len(zeros) >= k:
            t = min(k, len(big))
            F = KSubset.of(first_set(big, t) + first_set(zeros, k - t))
            return LambdaValue(e, instance.alpha + instance.color_of(F), 2, F)
    raise AssertionError(
        f"no qualifying class for {x}; requires n >= p(k-1)+1 (instance invariant broken)"
    )


LambdaFn = Callable[[TuckerInstance, SignedVector], LambdaValue]


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    enumerated: int
    witness: dict | None = None


class _Table:
    """lambda tabulated over all (p+1)^n vectors; code 0 is the zero vector.

    Codes are base-(p+1) numbers with position 1 as the most significant digit,
    so code order is the lexicographic order of entry tuples.
    """

    def __init__(self, instance: TuckerInstance, fn: LambdaFn, max_size: int):
        p, n = instance.p, instance.params.n
        size = (p + 1) ** n
        if size > max_size:
            raise BudgetExceeded(f"(p+1)^n = {size} vectors exceed the cap {max_size}")
        self.instance, self.fn, self.p, self.n = instance, fn, p, n
        self.weights = np.array([(p + 1) ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.sign = np.zeros(size, dtype=np.int64)
        self.level = np.zeros(size, dtype=np.int64)
        for code, entries in enumerate(product(range(p + 1), repeat=n)):
            if code == 0:
                continue
            value = fn(instance, SignedVector(entries, p))
            self.sign[code] = value.sign
            self.level[code] = value.level
        self.size = size

    def vector(self, code: int) -> SignedVector:
        digits = []
        for _ in range(self.n):
            code, d = divmod(code, self.p + 1)
            digits.append(d)
        return SignedVector(tuple(reversed(digits)), self.p)

    def describe(self, code: int) -> dict:
        x = self.vector(code)
        value = self.fn(self.instance, x)
        out = {"x": list(x.entries), "sign": value.sign, "level": value.level, "case": value.case}
        if value.kset is not None:
            out["F"] = list(value.kset.elements)
        return out


def _digits(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    out = np.empty((indices.size, width), dtype=np.int64)
    rest = indices.copy()
    for j in range(width - 1, -1, -1):
        out[:, j] = rest % base
        rest //= base
    return out


def _check_size(space: int, cap: int, what: str):
    if space > cap:
        raise BudgetExceeded(f"{what}: {space} patterns exceed the cap {cap}")


def verify_equivariance(instance: TuckerInstance, lambda_fn: LambdaFn = lam,
                        max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> CheckResult:
    """lambda(w^i x) == (w^i lambda_1(x), lambda_2(x)) for every nonzero x and every i."""
    table = _Table(instance, lambda_fn, max_enumeration)
    p = instance.p
    codes = np.arange(1, table.size, dtype=np.int64)
    digits = _digits(codes, p + 1, table.n)
    for i in range(1, p + 1):
        rotated = np.where(digits > 0, (digits + i - 1) % p + 1, 0)
        rcodes = rotated @ table.weights
        expected_sign = (table.sign[codes] + i - 1) % p + 1
        bad = (table.sign[rcodes] != expected_sign) | (table.level[rcodes] != table.level[codes])
        if bad.any():
            j = int(np.argmax(bad))
            code = int(codes[j])
            return CheckResult(False, table.size - 1, {
                "i": i, "x": table.describe(code), "image": table.describe(int(rcodes[j])),
            })
    return CheckResult(True, table.size - 1)


def verify_condition2(instance: TuckerInstance, lambda_fn: LambdaFn = lam,
                      max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> CheckResult:
    """x <= y and lambda_2(x) = lambda_2(y) <= alpha force lambda_1(x) = lambda_1(y).

    Per coordinate a pair pattern is one of: 0 in both, v in y only, v in both.
    """
    p, n, alpha = instance.p, instance.params.n, instance.alpha
    base = 2 * p + 1
    space = base ** n
    _check_size(space, max_enumeration, "pair patterns")
    table = _Table(instance, lambda_fn, max_enumeration)
    option = np.arange(base)
    x_val = np.where(option > p, option - p, 0)
    y_val = np.where(option > p, option - p, option)
    count = 0
    for start in range(0, space, _CHUNK):
        idx = np.arange(start, min(space, start + _CHUNK), dtype=np.int64)
        d = _digits(idx, base, n)
        xc = x_val[d] @ table.weights
        yc = y_val[d] @ table.weights
        live = xc != 0
        count += int(live.sum())
        lx, ly = table.level[xc], table.level[yc]
        bad = live & (lx == ly) & (lx <= alpha) & (table.sign[xc] != table.sign[yc])
        if bad.any():
            j = int(np.argmax(bad))
            return CheckResult(False, count, {
                "x": table.describe(int(xc[j])), "y": table.describe(int(yc[j])),
            })
    return CheckResult(True, count)


def verify_condition3(instance: TuckerInstance, lambda_fn: LambdaFn = lam,
                      max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> CheckResult:
    """Chains x1 <= ... <= xp with equal levels >= alpha+1 must repeat a sign.

    Per coordinate a chain pattern is 0 throughout, or a value v that appears
    at chain position j and stays: p^2 + 1 options.
    """
    p, n, alpha = instance.p, instance.params.n, instance.alpha
    base = p * p + 1
    space = base ** n
    _check_size(space, max_enumeration, "chain patterns")
    table = _Table(instance, lambda_fn, max_enumeration)
    option = np.arange(base)
    value = np.where(option > 0, (option - 1) // p + 1, 0)
    first = np.where(option > 0, (option - 1) % p + 1, p + 1)
    count = 0
    for start in range(0, space, _CHUNK):
        idx = np.arange(start, min(space, start + _CHUNK), dtype=np.int64)
        d = _digits(idx, base, n)
        val, fst = value[d], first[d]
        codes = [np.where(fst <= i, val, 0) @ table.weights for i in range(1, p + 1)]
        live = codes[0] != 0
        count += int(live.sum())
        levels = [table.level[c] for c in codes]
        same = live & (levels[0] >= alpha + 1)
        for lv in levels[1:]:
            same &= lv == levels[0]
        seen = np.zeros(idx.size, dtype=np.int64)
        for c in codes:
            seen |= np.left_shift(1, table.sign[c])
        distinct = sum((seen >> b) & 1 for b in range(1, p + 1)) == p
        bad = same & distinct
        if bad.any():
            j = int(np.argmax(bad))
            chain = [table.describe(int(c[j])) for c in codes]
            return CheckResult(False, count, {"chain": chain, **_chain_facts(instance, chain)})
    return CheckResult(True, count)


def _chain_facts(instance: TuckerInstance, chain: Sequence[dict]) -> dict:
    """Pairwise intersections and colors of the chain's k-sets."""
    sets = [set(link.get("F", ())) for link in chain]
    meets = [
        len(sets[a] & sets[b]) for a in range(len(sets)) for b in range(a + 1, len(sets))
    ]
    colors = [
        instance.color_of(KSubset.of(link["F"])) if "F" in link else None for link in chain
    ]
    return {"max_meet": max(meets, default=0), "colors": colors}


def conclusion_check(alpha: int, m: int, p: int, n: int) -> bool:
    """alpha + (m - alpha)(p - 1) >= n."""
    if not m >= alpha >= 0:
        raise ParameterError(f"need m >= alpha >= 0, got m={m}, alpha={alpha}")
    if not is_prime(p):
        raise ParameterError(f"p={p} is not prime")
    return alpha + (m - alpha) * (p - 1) >= n


def conclusion_report(alpha: int, m: int, p: int, n: int) -> dict:
    lhs = alpha + (m - alpha) * (p - 1)
    return {
        "lhs": lhs,
        "rhs": n,
        "holds": conclusion_check(alpha, m, p, n),
        "colors": m - alpha,
        "implied_min_colors": ceil_div(n - alpha, p - 1),
    }


@dataclass(frozen=True)
class TuckerReport:
    instance: TuckerInstance
    equivariance: CheckResult
    condition2: CheckResult
    condition3: CheckResult
    conclusion: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return (self.equivariance.passed and self.condition2.passed
                and self.condition3.passed and self.conclusion["holds"])

    def to_dict(self) -> dict:
        inst = self.instance
        witness = None
        for name, res in (("equivariance", self.equivariance), ("cond2", self.condition2),
                          ("cond3", self.condition3)):
            if res.witness is not None:
                witness = {"check": name, **res.witness}
                break
        return {
            "p": inst.p, "n": inst.params.n, "k": inst.params.k, "s": inst.params.s,
            "C": inst.colors, "alpha": inst.alpha, "m": inst.m,
            "diagnostic": inst.diagnostic,
            "equivariance": _verdict(self.equivariance),
            "cond2": _verdict(self.condition2),
            "cond3": _verdict(self.condition3),
            "conclusion": {k: self.conclusion[k] for k in ("lhs", "rhs", "holds")},
            "implied_min_colors": self.conclusion["implied_min_colors"],
            "witness": witness,
            "vectors_enumerated": self.equivariance.enumerated,
            "pairs_enumerated": self.condition2.enumerated,
            "chains_enumerated": self.condition3.enumerated,
            "interpretation": INTERPRETATION,
        }


def _verdict(res: CheckResult) -> str:
    return "pass" if res.passed else "fail"


def verify_tucker(instance: TuckerInstance,
                  max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> TuckerReport:
    return TuckerReport(
        instance,
        verify_equivariance(instance, max_enumeration=max_enumeration),
        verify_condition2(instance, max_enumeration=max_enumeration),
        verify_condition3(instance, max_enumeration=max_enumeration),
        conclusion_report(instance.alpha, instance.m, instance.p, instance.params.n),
    )
