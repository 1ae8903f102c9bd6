"""Named distance-regular families, Cartesian products and exact isomorphism.

Canonical labeling is individualization-refinement: 1-dimensional color
refinement to an equitable ordered partition, then backtracking over the
first smallest non-singleton cell.  Automorphisms discovered at leaves prune
sibling branches, so vertex-transitive graphs like H(3,4) stay cheap.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .cayley import Graph, cayley_graph, connection_set
from .drg import _bfs_bits
from .errors import CapExceededError, InvalidSpecError
from .groups import abelian_group, abelian_table

DEFAULT_VERTEX_CAP = 4096
DEFAULT_ISO_CAP = 256


def _check_cap(order: int, cap: int) -> None:
    if order > cap:
        raise CapExceededError(f"{order} vertices exceeds cap {cap}")


def complete(n: int) -> Graph:
    if n < 1:
        raise InvalidSpecError(f"complete graph needs n >= 1, got {n}")
    return Graph(n, tuple(tuple(v for v in range(n) if v != u) for u in range(n)))


def complete_bipartite(m: int, m2: int | None = None) -> Graph:
    m2 = m if m2 is None else m2
    if m < 1 or m2 < 1:
        raise InvalidSpecError(f"complete bipartite needs parts >= 1, got {m},{m2}")
    left = tuple(range(m))
    right = tuple(range(m, m + m2))
    return Graph(m + m2, tuple([right] * m + [left] * m2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidSpecError(f"cycle needs n >= 3, got {n}")
    return Graph(n, tuple(tuple(sorted({(v - 1) % n, (v + 1) % n})) for v in range(n)))


def cartesian_product(g1: Graph, g2: Graph, *, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Vertex (i1, i2) has index i1 * |V2| + i2."""
    if g1.order == 0 or g2.order == 0:
        raise InvalidSpecError("Cartesian product needs nonempty factors")
    n2 = g2.order
    _check_cap(g1.order * n2, cap)
    adj = []
    for i1 in range(g1.order):
        for i2 in range(n2):
            row = [i1 * n2 + j2 for j2 in g2.adj[i2]]
            row += [j1 * n2 + i2 for j1 in g1.adj[i1]]
            adj.append(tuple(sorted(row)))
    return Graph(len(adj), tuple(adj))


def hamming(d: int, q: int, *, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    if d < 1 or q < 2:
        raise InvalidSpecError(f"hamming needs d >= 1 and q >= 2, got d={d}, q={q}")
    _check_cap(q**d, cap)
    g = complete(q)
    for _ in range(d - 1):
        g = cartesian_product(g, complete(q), cap=cap)
    return g


def shrikhande() -> Graph:
    Z44 = abelian_table(abelian_group([4, 4]))
    S = connection_set(Z44, ["(1,0)", "(3,0)", "(0,1)", "(0,3)", "(1,1)", "(3,3)"])
    g = cayley_graph(Z44, S)
    return Graph(g.order, g.adj)


def doob(n: int, m: int, *, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """H(n,4) times m copies of the Shrikhande graph (n = 0: just the copies)."""
    if n < 0 or m < 1:
        raise InvalidSpecError(f"doob needs n >= 0 and m >= 1, got n={n}, m={m}")
    _check_cap(4**n * 16**m, cap)
    g = hamming(n, 4, cap=cap) if n else shrikhande()
    for _ in range(m if n else m - 1):
        g = cartesian_product(g, shrikhande(), cap=cap)
    return g


def _ints(body: str, count: int, spec: str) -> list[int]:
    parts = body.split(",") if body else []
    if len(parts) != count or not all(p.strip().isdigit() for p in parts):
        raise InvalidSpecError(f"{spec!r}: expected {count} integer parameter(s)")
    return [int(p) for p in parts]


def named_graph(spec: str, *, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Build from ``complete:n``, ``kmm:m``, ``cycle:n``, ``hamming:d,q``, ``shrikhande`` or ``doob:n,m``."""
    name, _, body = spec.partition(":")
    if name == "shrikhande":
        if body:
            raise InvalidSpecError("shrikhande takes no parameters")
        return shrikhande()
    if name == "complete":
        (n,) = _ints(body, 1, spec)
        _check_cap(n, cap)
        return complete(n)
    if name == "kmm":
        (m,) = _ints(body, 1, spec)
        _check_cap(2 * m, cap)
        return complete_bipartite(m)
    if name == "cycle":
        (n,) = _ints(body, 1, spec)
        _check_cap(n, cap)
        return cycle(n)
    if name == "hamming":
        d, q = _ints(body, 2, spec)
        return hamming(d, q, cap=cap)
    if name == "doob":
        n, m = _ints(body, 2, spec)
        return doob(n, m, cap=cap)
    raise InvalidSpecError(f"unknown graph name {name!r}")


# canonical labeling


def _rank(keys) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(adj, colors: list[int]) -> list[int]:
    ncells = len(set(colors))
    while True:
        keys = [(colors[v], tuple(sorted(colors[u] for u in row))) for v, row in enumerate(adj)]
        new = _rank(keys)
        count = max(new) + 1 if new else 0
        if count == ncells:
            return new
        colors, ncells = new, count


def _individualize(colors: list[int], v: int) -> list[int]:
    return _rank([(c, u != v) for u, c in enumerate(colors)])


def _target_cell(colors: list[int]) -> list[int] | None:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        cell = cells[c]
        if len(cell) > 1 and (best is None or len(cell) < len(best)):
            best = cell
    return best


def _cert_int(adj, perm) -> int:
    n = len(adj)
    rev = [0] * n
    for u, row in enumerate(adj):
        x = 0
        for v in row:
            x |= 1 << (n - 1 - perm[v])
        rev[perm[u]] = x
    out = 0
    for i in range(n):
        width = n - 1 - i
        out = (out << width) | (rev[i] & ((1 << width) - 1))
    return out


def _encode(n: int, value: int) -> bytes:
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 7) // 8
    return n.to_bytes(4, "big") + (value << (8 * nbytes - nbits)).to_bytes(nbytes, "big")


@dataclass(frozen=True)
class CanonicalForm:
    certificate: bytes
    labeling: tuple[int, ...]  # vertex v goes to position labeling[v]

    def hex(self) -> str:
        return self.certificate.hex()


class _Orbits:
    def __init__(self, n: int, gens):
        self.parent = list(range(n))
        for perm in gens:
            for v, w in enumerate(perm):
                self.union(v, w)

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, v: int, w: int) -> None:
        a, b = self.find(v), self.find(w)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


class _Search:
    def __init__(self, adj):
        self.adj = adj
        self.n = len(adj)
        self.first = None  # (cert, perm, path)
        self.best = None
        self.autos: list[tuple[int, ...]] = []

    def _automorphism(self, ref_perm, perm) -> tuple[int, ...]:
        # vertex u -> the vertex sharing u's position in the reference leaf
        inv_ref = [0] * self.n
        for v, p in enumerate(ref_perm):
            inv_ref[p] = v
        return tuple(inv_ref[perm[u]] for u in range(self.n))

    @staticmethod
    def _common(a, b) -> int:
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        return k

    def leaf(self, colors, path) -> int | None:
        perm = tuple(colors)
        cert = _cert_int(self.adj, perm)
        if self.first is None:
            self.first = self.best = (cert, perm, path)
            return None
        for ref in (self.first, self.best):
            if cert == ref[0]:
                self.autos.append(self._automorphism(ref[1], perm))
                return self._common(ref[2], path)
        if cert > self.best[0]:
            self.best = (cert, perm, path)
        return None

    def run(self, colors, path) -> int | None:
        cell = _target_cell(colors)
        if cell is None:
            return self.leaf(colors, path)
        depth = len(path)
        done: list[int] = []
        for v in cell:
            if done:
                fixing = [a for a in self.autos if all(a[p] == p for p in path)]
                orbits = _Orbits(self.n, fixing)
                if any(orbits.find(v) == orbits.find(w) for w in done):
                    continue
            jump = self.run(_refine(self.adj, _individualize(colors, v)), path + (v,))
            done.append(v)
            if jump is not None and jump < depth:
                return jump
        return None


def canonical_form(g: Graph, *, cap: int = DEFAULT_ISO_CAP) -> CanonicalForm:
    _check_cap(g.order, cap)
    if g.order == 0:
        return CanonicalForm(_encode(0, 0), ())
    search = _Search(g.adj)
    search.run(_refine(g.adj, [0] * g.order), ())
    cert, perm, _ = search.best
    return CanonicalForm(_encode(g.order, cert), perm)


def _level_profile(g: Graph) -> Counter:
    return Counter(tuple(lb.bit_count() for lb in _bfs_bits(g, v)[1]) for v in range(g.order))


def is_isomorphic(g1: Graph, g2: Graph, *, cap: int = DEFAULT_ISO_CAP) -> bool:
    _check_cap(g1.order, cap)
    _check_cap(g2.order, cap)
    if g1.order != g2.order or g1.num_edges() != g2.num_edges():
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    if _level_profile(g1) != _level_profile(g2):
        return False
    return canonical_form(g1, cap=cap).certificate == canonical_form(g2, cap=cap).certificate
