"""Distance partitions, intersection arrays and related regularity checks."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .cayley import Graph
from .errors import ContractViolation, ParseError

INF = math.inf


@dataclass(frozen=True)
class DistancePartition:
    source: int
    dist: tuple  # ints, INF where unreachable
    levels: tuple[frozenset[int], ...]

    @property
    def eccentricity(self) -> int:
        return len(self.levels) - 1

    def sizes(self) -> list[int]:
        return [len(level) for level in self.levels]


def _bfs_bits(g: Graph, source: int) -> tuple[list, list[int]]:
    """Distances from source plus one bitset per distance level."""
    bits = g.bits
    dist: list = [INF] * g.order
    dist[source] = 0
    level_bits = [1 << source]
    seen = 1 << source
    frontier = [source]
    while frontier:
        nxt_bits = 0
        for v in frontier:
            nxt_bits |= bits[v]
        nxt_bits &= ~seen
        if not nxt_bits:
            break
        seen |= nxt_bits
        level_bits.append(nxt_bits)
        d = len(level_bits) - 1
        frontier = []
        x = nxt_bits
        while x:
            low = x & -x
            v = low.bit_length() - 1
            dist[v] = d
            frontier.append(v)
            x ^= low
    return dist, level_bits


def distance_partition(g: Graph, source: int) -> DistancePartition:
    dist, level_bits = _bfs_bits(g, source)
    levels = tuple(frozenset(v for v in range(g.order) if lb >> v & 1) for lb in level_bits)
    return DistancePartition(source, tuple(dist), levels)


def distance_matrix(g: Graph) -> list[list]:
    return [_bfs_bits(g, u)[0] for u in range(g.order)]


@dataclass(frozen=True)
class IntersectionArray:
    """b0..b_{d-1} and c1..c_d of a distance-regular graph."""

    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.c)

    @property
    def k(self) -> int:
        return self.b[0] if self.b else 0

    @property
    def a(self) -> tuple[int, ...]:
        bs = self.b + (0,)
        cs = (0,) + self.c
        return tuple(self.k - bs[i] - cs[i] for i in range(self.d + 1))

    def __str__(self):
        return "{" + ",".join(map(str, self.b)) + "; " + ",".join(map(str, self.c)) + "}"

    @classmethod
    def parse(cls, text: str) -> "IntersectionArray":
        m = re.fullmatch(r"\{([\d,]*); ([\d,]*)\}", text)
        if not m:
            raise ParseError(text, 0, "'{b0,...; c1,...}'")
        b = tuple(int(x) for x in m.group(1).split(",") if x)
        c = tuple(int(x) for x in m.group(2).split(",") if x)
        return cls(b, c)


@dataclass(frozen=True)
class RegularityFailure:
    """Why a graph is not (distance-/amply-) regular.

    For a pair discrepancy, ``first`` and ``second`` are ordered vertex pairs at
    the same ``distance`` whose triples (c, a, b) (or common-neighbor counts)
    differ.
    """

    note: str
    distance: int | None = None
    first: tuple[int, int] | None = None
    first_value: tuple | None = None
    second: tuple[int, int] | None = None
    second_value: tuple | None = None

    def __str__(self):
        if self.first is None:
            return self.note
        return (
            f"{self.note}: pairs {self.first} -> {self.first_value} and "
            f"{self.second} -> {self.second_value} at distance {self.distance}"
        )


@dataclass(frozen=True)
class RegularityVerdict:
    array: IntersectionArray | None = None
    failure: RegularityFailure | None = None

    @property
    def is_distance_regular(self) -> bool:
        return self.array is not None

    @property
    def status(self) -> str:
        return "distance-regular" if self.array is not None else "failure"

    def __str__(self):
        return f"DRG {self.array}" if self.array is not None else f"not DRG ({self.failure})"

    def to_dict(self) -> dict:
        if self.array is not None:
            return {"status": "distance-regular", "array": str(self.array)}
        f = self.failure
        out = {"status": "failure", "note": f.note}
        if f.first is not None:
            out.update(
                distance=f.distance,
                first=list(f.first),
                first_triple=list(f.first_value),
                second=list(f.second),
                second_triple=list(f.second_value),
            )
        return out


def _irregularity(g: Graph) -> RegularityFailure | None:
    if g.order == 0:
        return RegularityFailure("empty graph")
    if not g.is_connected():
        return RegularityFailure("disconnected")
    k = g.degree(0)
    for v in range(g.order):
        if g.degree(v) != k:
            return RegularityFailure(f"not regular: deg(0)={k}, deg({v})={g.degree(v)}")
    return None


def pair_triple(g: Graph, u: int, v: int) -> tuple[int, int, int]:
    """(c_i(u,v), a_i(u,v), b_i(u,v)) for i = dist(u, v), recomputed from scratch."""
    dist, level_bits = _bfs_bits(g, u)
    i = dist[v]
    nb = g.bits[v]
    c = (level_bits[i - 1] & nb).bit_count() if i > 0 else 0
    a = (level_bits[i] & nb).bit_count()
    b = (level_bits[i + 1] & nb).bit_count() if i + 1 < len(level_bits) else 0
    return c, a, b


def intersection_array(g: Graph) -> RegularityVerdict:
    """Exact check over all ordered pairs; first discrepancy in (u, v) order wins."""
    bad = _irregularity(g)
    if bad is not None:
        return RegularityVerdict(failure=bad)
    bits = g.bits
    ref: dict[int, tuple[tuple[int, int], tuple[int, int, int]]] = {}
    for u in range(g.order):
        dist, level_bits = _bfs_bits(g, u)
        depth = len(level_bits)
        for v in range(g.order):
            i = dist[v]
            nb = bits[v]
            c = (level_bits[i - 1] & nb).bit_count() if i > 0 else 0
            a = (level_bits[i] & nb).bit_count()
            b = (level_bits[i + 1] & nb).bit_count() if i + 1 < depth else 0
            triple = (c, a, b)
            seen = ref.get(i)
            if seen is None:
                ref[i] = ((u, v), triple)
            elif seen[1] != triple:
                return RegularityVerdict(
                    failure=RegularityFailure(
                        "intersection numbers vary", i, seen[0], seen[1], (u, v), triple
                    )
                )
    d = max(ref)
    return RegularityVerdict(
        array=IntersectionArray(
            tuple(ref[i][1][2] for i in range(d)),
            tuple(ref[i][1][0] for i in range(1, d + 1)),
        )
    )


@dataclass(frozen=True)
class RegularParams:
    """(n, k, lambda, mu); ``has_distance2`` is False when mu is vacuous."""

    n: int
    k: int
    lam: int
    mu: int
    has_distance2: bool = field(default=True, compare=False)

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.k, self.lam, self.mu)

    def __str__(self):
        return f"({self.n},{self.k},{self.lam},{self.mu})"


def amply_regular_params(g: Graph) -> RegularParams | RegularityFailure:
    bad = _irregularity(g)
    if bad is not None:
        return bad
    bits = g.bits
    first: dict[int, tuple[tuple[int, int], int]] = {}
    for u in range(g.order):
        dist, _ = _bfs_bits(g, u)
        for v in range(g.order):
            i = dist[v]
            if i not in (1, 2):
                continue
            common = (bits[u] & bits[v]).bit_count()
            seen = first.get(i)
            if seen is None:
                first[i] = ((u, v), common)
            elif seen[1] != common:
                what = "lambda" if i == 1 else "mu"
                return RegularityFailure(
                    f"{what} varies", i, seen[0], (seen[1],), (u, v), (common,)
                )
    lam = first[1][1] if 1 in first else 0
    if 2 in first:
        return RegularParams(g.order, g.degree(0), lam, first[2][1])
    return RegularParams(g.order, g.degree(0), lam, 0, has_distance2=False)


def strongly_regular_params(g: Graph) -> RegularParams | RegularityFailure:
    verdict = intersection_array(g)
    if not verdict.is_distance_regular:
        return verdict.failure
    arr = verdict.array
    if arr.d != 2:
        return RegularityFailure(f"diameter {arr.d} != 2")
    return RegularParams(g.order, arr.k, arr.a[1], arr.c[1])


def distance_i_graph(g: Graph, i: int) -> Graph:
    if not g.is_connected():
        raise ValueError("distance graphs need a connected graph")
    dm = distance_matrix(g)
    diameter = max(max(row) for row in dm)
    if not 1 <= i <= diameter:
        raise ValueError(f"i={i} outside 1..{diameter}")
    return Graph.from_adjacency([[v for v in range(g.order) if row[v] == i] for row in dm])


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.order
    for s in range(g.order):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return False
    return True


@dataclass(frozen=True)
class PrimitivityProfile:
    primitive: bool
    bipartite: bool
    antipodal: bool
    note: str = ""

    def to_dict(self) -> dict:
        out = {"primitive": self.primitive, "bipartite": self.bipartite, "antipodal": self.antipodal}
        if self.note:
            out["note"] = self.note
        return out


def primitivity_profile(g: Graph) -> PrimitivityProfile:
    verdict = intersection_array(g)
    if not verdict.is_distance_regular:
        raise ContractViolation(f"primitivity_profile needs a distance-regular graph: {verdict.failure}")
    d = verdict.array.d
    dm = distance_matrix(g)
    primitive = all(
        Graph.from_adjacency([[v for v in range(g.order) if row[v] == i] for row in dm]).is_connected()
        for i in range(1, d + 1)
    )
    if d == 1:
        # every pair is at distance 0 or 1, a trivial equivalence; not called antipodal
        return PrimitivityProfile(primitive, is_bipartite(g), False, "d=1: antipodal reported false by convention")
    classes = [frozenset(v for v in range(g.order) if row[v] in (0, d)) for row in dm]
    antipodal = all(classes[v] == classes[u] for u in range(g.order) for v in classes[u])
    return PrimitivityProfile(primitive, is_bipartite(g), antipodal)
