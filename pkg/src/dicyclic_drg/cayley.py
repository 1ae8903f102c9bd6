"""Cayley graphs Cay(G, S) and the plain graph container they produce."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .errors import ConnectionSetError, ParseError
from .groups import GroupTable, closure


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..order-1.

    ``adj`` holds sorted neighbor tuples; ``bits`` mirrors them as one
    integer bitset per vertex for fast neighborhood intersections.
    """

    order: int
    adj: tuple[tuple[int, ...], ...]
    provenance: dict | None = None

    @classmethod
    def from_adjacency(cls, adj, provenance=None) -> "Graph":
        rows = tuple(tuple(sorted(set(int(v) for v in row))) for row in adj)
        g = cls(len(rows), rows, provenance)
        g.validate()
        return g

    @classmethod
    def from_edges(cls, order: int, edges, provenance=None) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(order)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        return cls.from_adjacency(adj, provenance)

    def validate(self) -> None:
        for u, row in enumerate(self.adj):
            for v in row:
                if not 0 <= v < self.order:
                    raise ValueError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise ValueError(f"loop at vertex {u}")
                if u not in self.adj[v]:
                    raise ValueError(f"asymmetric edge {u}->{v}")

    @cached_property
    def bits(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in row) for row in self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(row) for row in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self.adj) for v in row if u < v]

    def num_edges(self) -> int:
        return sum(len(row) for row in self.adj) // 2

    def is_connected(self) -> bool:
        if self.order == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for v in self.adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.order

    def permuted(self, perm) -> "Graph":
        """Relabel vertex v as perm[v]."""
        adj: list[list[int]] = [[] for _ in range(self.order)]
        for u, row in enumerate(self.adj):
            adj[perm[u]] = [perm[v] for v in row]
        return Graph.from_adjacency(adj)

    def same_edges(self, other: "Graph") -> bool:
        return self.order == other.order and self.adj == other.adj

    def to_json(self) -> str:
        payload = {"order": self.order, "adj": [list(row) for row in self.adj], "provenance": self.provenance}
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        payload = json.loads(text)
        g = cls.from_adjacency(payload["adj"], payload.get("provenance"))
        if g.order != payload["order"]:
            raise ValueError(f"order field {payload['order']} != {g.order} rows")
        return g

    def to_dot(self, name: str = "G") -> str:
        labels = (self.provenance or {}).get("labels")
        lines = [f"graph {name} {{"]
        for v in range(self.order):
            text = labels[v] if labels else str(v)
            lines.append(f'  {v} [label="{text}"];')
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class ConnectionSet:
    members: tuple[int, ...]
    group: GroupTable

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    def texts(self) -> list[str]:
        return [self.group.format(g) for g in self.members]

    def __str__(self):
        return "{" + ", ".join(self.texts()) + "}"


def connection_set(G: GroupTable, elements) -> ConnectionSet:
    """Validate an inverse-closed subset of G minus the identity; never closes it."""
    members = set()
    for g in elements:
        g = G.element(g) if isinstance(g, str) else int(g)
        if not 0 <= g < G.order:
            raise ConnectionSetError(f"element index {g} out of range", g)
        members.add(g)
    if G.identity in members:
        raise ConnectionSetError("identity in connection set", G.format(G.identity))
    for s in sorted(members):
        if int(G.inv[s]) not in members:
            raise ConnectionSetError(
                f"missing inverse of {G.format(s)} (need {G.format(int(G.inv[s]))})",
                G.format(s),
            )
    return ConnectionSet(tuple(sorted(members)), G)


def parse_set_spec(G: GroupTable, text: str) -> ConnectionSet:
    """Semicolon-separated element tokens, e.g. ``(1);(3);t*(0);t*(2)``."""
    elements = []
    offset = 0
    for token in text.split(";"):
        stripped = token.strip()
        lead = len(token) - len(token.lstrip())
        if not stripped:
            raise ParseError(text, offset + lead, "element")
        try:
            elements.append(G.element(stripped))
        except ParseError as err:
            raise ParseError(text, offset + lead + err.position, err.expected) from None
        offset += len(token) + 1
    return connection_set(G, elements)


def cayley_graph(G: GroupTable, S: ConnectionSet) -> Graph:
    """g ~ h iff g = h*s for some s in S."""
    rows = G.mul_rows
    adj = tuple(tuple(sorted(rows[h][s] for s in S)) for h in range(G.order))
    provenance = {
        "group": G.spec,
        "set": S.texts(),
        "convention": "right",
        "labels": [G.format(g) for g in range(G.order)],
    }
    return Graph(G.order, adj, provenance)


def minimality_witnesses(G: GroupTable, S: ConnectionSet) -> tuple[bool, list[int]]:
    """Return (<S> == G, all s in S with <S - {s, s^-1}> != G)."""
    generates = len(closure(G, S.members)) == G.order
    witnesses = []
    if generates:
        for s in S:
            pair = {s, int(G.inv[s])}
            rest = [x for x in S if x not in pair]
            if len(closure(G, rest)) != G.order:
                witnesses.append(s)
    return generates, witnesses


def is_minimal(G: GroupTable, S: ConnectionSet) -> bool:
    generates, witnesses = minimality_witnesses(G, S)
    return generates and bool(witnesses)


def induced_subgraph(g: Graph, vertices) -> Graph:
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < g.order:
            raise ValueError(f"vertex {v} out of range for order {g.order}")
    pos = {v: i for i, v in enumerate(keep)}
    adj = tuple(tuple(sorted(pos[u] for u in g.adj[v] if u in pos)) for v in keep)
    provenance = {"vertices": keep}
    labels = (g.provenance or {}).get("labels")
    if labels:
        provenance["labels"] = [labels[v] for v in keep]
    return Graph(len(keep), adj, provenance)
