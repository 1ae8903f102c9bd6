"""Finite abelian groups and generalized dicyclic groups as explicit tables.

Elements are dense indices 0..|G|-1 with the identity at 0.  For a
generalized dicyclic group the A-part comes first (lexicographic residue
order) followed by the tA-part in the same order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from .errors import ConstructionError, InvalidSpecError, ParseError

DEFAULT_ORDER_CAP = 96

_INT = re.compile(r"\d+")


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors(prime_powers: dict[int, list[int]]) -> tuple[int, ...]:
    """Recombine per-prime exponent lists into d1 | d2 | ... | dk."""
    width = max((len(e) for e in prime_powers.values()), default=0)
    cols = []
    for p, exps in prime_powers.items():
        padded = [0] * (width - len(exps)) + sorted(exps)
        cols.append([p**e for e in padded])
    factors = [prod(col[i] for col in cols) for i in range(width)]
    return tuple(d for d in factors if d > 1)


@dataclass(frozen=True)
class AbelianGroup:
    """Abelian group in invariant-factor form; elements are residue vectors."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fs = self.invariant_factors
        if not fs or any(d < 2 for d in fs):
            raise InvalidSpecError(f"invalid invariant factors {fs!r}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise InvalidSpecError(f"factors {fs!r} are not a divisor chain")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def add(self, u, v):
        return tuple((a + b) % d for a, b, d in zip(u, v, self.invariant_factors))

    def neg(self, u):
        return tuple((-a) % d for a, d in zip(u, self.invariant_factors))

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariant_factors)

    def spec(self) -> str:
        return "x".join(str(d) for d in self.invariant_factors)

    def __str__(self):
        return "x".join(f"Z{d}" for d in self.invariant_factors)


def abelian_group(factors) -> AbelianGroup:
    """Canonical invariant-factor form of Z_{f1} x ... x Z_{fk}."""
    factors = list(factors)
    if not factors:
        raise InvalidSpecError("empty factor list")
    if any(f < 2 for f in factors):
        raise InvalidSpecError(f"every factor must be >= 2, got {factors!r}")
    powers: dict[int, list[int]] = {}
    for f in factors:
        for p, e in _factorize(f).items():
            powers.setdefault(p, []).append(e)
    return AbelianGroup(_invariant_factors(powers))


def involutions(A: AbelianGroup) -> set[tuple[int, ...]]:
    zero = A.zero
    return {v for v in A.elements() if v != zero and A.add(v, v) == zero}


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups(order: int) -> list[AbelianGroup]:
    """One representative per isomorphism class of abelian groups of `order`."""
    if order < 2:
        raise InvalidSpecError(f"order must be >= 2, got {order}")
    fact = sorted(_factorize(order).items())
    per_prime = [[(p, part) for part in _partitions(e)] for p, e in fact]
    groups = []
    for combo in itertools.product(*per_prime):
        groups.append(AbelianGroup(_invariant_factors({p: part for p, part in combo})))
    return sorted(groups, key=lambda g: (len(g.invariant_factors), g.invariant_factors))


def abelian_groups_with_unique_involution(order: int) -> list[AbelianGroup]:
    """Abelian groups of even `order` whose Sylow 2-subgroup is cyclic."""
    if order % 2:
        raise InvalidSpecError(f"order must be even, got {order}")
    if order < 4:
        raise InvalidSpecError(f"order must be >= 4, got {order}")
    return [A for A in abelian_groups(order) if len(involutions(A)) == 1]


@dataclass(frozen=True, order=True)
class GroupElement:
    """The element t^epsilon * x with x a residue vector of A."""

    epsilon: int
    vector: tuple[int, ...]

    def __str__(self):
        body = "(" + ",".join(str(r) for r in self.vector) + ")"
        return "t*" + body if self.epsilon else body


def parse_element(text: str) -> GroupElement:
    """Parse ``["t*"] "(" int {"," int} ")"``."""
    pos = 0
    eps = 0
    if text.startswith("t*"):
        eps, pos = 1, 2
    if pos >= len(text) or text[pos] != "(":
        raise ParseError(text, pos, "'('" if eps else "'t*' or '('")
    pos += 1
    vec = []
    while True:
        m = _INT.match(text, pos)
        if not m:
            raise ParseError(text, pos, "integer")
        vec.append(int(m.group()))
        pos = m.end()
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if pos < len(text) and text[pos] == ")":
            pos += 1
            break
        raise ParseError(text, pos, "',' or ')'")
    if pos != len(text):
        raise ParseError(text, pos, "end of element")
    return GroupElement(eps, tuple(vec))


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Explicit finite group: dense indices, multiplication and inverse tables."""

    kind: str  # "abelian" | "generalized-dicyclic"
    base: AbelianGroup
    labels: tuple[GroupElement, ...]
    mul: np.ndarray
    inv: np.ndarray
    index_of: dict = field(repr=False)

    identity = 0

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def spec(self) -> str:
        prefix = "dicyclic" if self.kind == "generalized-dicyclic" else "abelian"
        return f"{prefix}:{self.base.spec()}"

    def __str__(self):
        return self.spec

    @cached_property
    def mul_rows(self) -> list[list[int]]:
        return self.mul.tolist()

    @cached_property
    def involution(self) -> int | None:
        """The unique element of order 2, or None if there is not exactly one."""
        invs = [g for g in range(1, self.order) if self.inv[g] == g]
        return invs[0] if len(invs) == 1 else None

    @cached_property
    def t(self) -> int:
        if self.kind != "generalized-dicyclic":
            raise AttributeError("abelian tables have no t")
        return self.index_of[GroupElement(1, self.base.zero)]

    def in_A(self, g: int) -> bool:
        return self.labels[g].epsilon == 0

    def element(self, text: str) -> int:
        el = parse_element(text)
        fs = self.base.invariant_factors
        if el.epsilon and self.kind != "generalized-dicyclic":
            raise InvalidSpecError(f"{text!r}: abelian group has no t-part")
        if len(el.vector) != len(fs):
            raise InvalidSpecError(
                f"{text!r}: expected {len(fs)} residues for {self.base}"
            )
        vec = tuple(r % d for r, d in zip(el.vector, fs))
        return self.index_of[GroupElement(el.epsilon, vec)]

    def format(self, g: int) -> str:
        return str(self.labels[g])

    def power(self, g: int, k: int) -> int:
        x = self.identity
        for _ in range(k % self.element_order(g)):
            x = int(self.mul[x, g])
        return x

    def element_order(self, g: int) -> int:
        return int(self.orders[g])

    @cached_property
    def orders(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        rows = self.mul_rows
        for g in range(self.order):
            x, k = g, 1
            while x != 0:
                x = rows[x][g]
                k += 1
            out[g] = k
        out.setflags(write=False)
        return out


def element_order(G: GroupTable, g: int) -> int:
    return G.element_order(g)


def _freeze(arr):
    arr = np.asarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _build(kind, A, labels, op) -> GroupTable:
    index_of = {el: i for i, el in enumerate(labels)}
    n = len(labels)
    mul = [[index_of[op(labels[i], labels[j])] for j in range(n)] for i in range(n)]
    inv = [row.index(0) for row in mul]
    return GroupTable(kind, A, tuple(labels), _freeze(mul), _freeze(inv), index_of)


def abelian_table(A: AbelianGroup) -> GroupTable:
    labels = [GroupElement(0, v) for v in A.elements()]
    return _build("abelian", A, labels, lambda x, y: GroupElement(0, A.add(x.vector, y.vector)))


def generalized_dicyclic(A: AbelianGroup, *, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """G = <A, t> with t^2 = a (the unique involution of A) and t^-1 x t = x^-1."""
    if A.order % 2:
        raise ConstructionError(f"|A| = {A.order} is odd")
    if A.order == 2:
        raise ConstructionError("n = 1 (|A| = 2) is excluded; need n > 1")
    invs = involutions(A)
    if len(invs) != 1:
        raise ConstructionError(f"{A} has {len(invs)} involutions; exactly one required")
    if 2 * A.order > order_cap:
        raise ConstructionError(f"group order {2 * A.order} exceeds cap {order_cap}")
    (a,) = invs
    vecs = A.elements()
    labels = [GroupElement(0, v) for v in vecs] + [GroupElement(1, v) for v in vecs]

    def op(g: GroupElement, h: GroupElement) -> GroupElement:
        x, y = g.vector, h.vector
        if not g.epsilon and not h.epsilon:
            return GroupElement(0, A.add(x, y))
        if not g.epsilon:  # x * ty = t x^-1 y
            return GroupElement(1, A.add(A.neg(x), y))
        if not h.epsilon:  # tx * y = t xy
            return GroupElement(1, A.add(x, y))
        return GroupElement(0, A.add(a, A.add(A.neg(x), y)))  # tx * ty = a x^-1 y

    return _build("generalized-dicyclic", A, labels, op)


def parse_group_spec(spec: str, *, order_cap: int = DEFAULT_ORDER_CAP) -> GroupTable:
    """``dicyclic:4``, ``dicyclic:2x6`` or ``abelian:6``."""
    kind, sep, body = spec.partition(":")
    if not sep or kind not in ("dicyclic", "abelian"):
        raise ParseError(spec, 0, "'dicyclic:' or 'abelian:'")
    factors = []
    pos = len(kind) + 1
    for part in body.split("x"):
        if not part.isdigit():
            raise ParseError(spec, pos, "integer factor")
        factors.append(int(part))
        pos += len(part) + 1
    A = abelian_group(factors)
    if kind == "dicyclic":
        return generalized_dicyclic(A, order_cap=order_cap)
    if A.order > order_cap:
        raise ConstructionError(f"group order {A.order} exceeds cap {order_cap}")
    return abelian_table(A)


@dataclass(frozen=True)
class Subgroup:
    members: frozenset[int]
    group_order: int

    @property
    def index_in_G(self) -> int:
        return self.group_order // len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    @property
    def bits(self) -> int:
        return sum(1 << g for g in self.members)


def closure(G: GroupTable, seed) -> set[int]:
    """Worklist closure of seed | {1} under multiplication by the seed."""
    rows = G.mul_rows
    gens = sorted(set(seed))
    members = {0}
    todo = [0]
    while todo:
        x = todo.pop()
        row = rows[x]
        for s in gens:
            y = row[s]
            if y not in members:
                members.add(y)
                todo.append(y)
    return members


def generated_subgroup(G: GroupTable, seed) -> Subgroup:
    # finite group: closure under right multiplication by generators already contains inverses
    return Subgroup(frozenset(closure(G, seed)), G.order)


def left_cosets(G: GroupTable, H: Subgroup) -> list[list[int]]:
    rows = G.mul_rows
    members = sorted(H.members)
    seen = [False] * G.order
    blocks = []
    for g in range(G.order):
        if seen[g]:
            continue
        block = sorted(rows[g][h] for h in members)
        for x in block:
            seen[x] = True
        blocks.append(block)
    return blocks
