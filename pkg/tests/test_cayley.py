from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicyclic_drg.cayley import (
    Graph,
    cayley_graph,
    connection_set,
    induced_subgraph,
    is_minimal,
    minimality_witnesses,
    parse_set_spec,
)
from dicyclic_drg.errors import ConnectionSetError, ParseError
from dicyclic_drg.graphkit import canonical_form, complete_bipartite, cycle, is_isomorphic
from dicyclic_drg.groups import generated_subgroup, left_cosets, parse_group_spec


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


def test_connection_set_validation(q8, el):
    S = connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")])
    assert len(S) == 4
    with pytest.raises(ConnectionSetError) as info:
        connection_set(q8, [el("x")])
    assert info.value.offending == "(1)"
    with pytest.raises(ConnectionSetError, match="identity"):
        connection_set(q8, [0, el("a")])
    assert len(connection_set(q8, [el("a")])) == 1


def test_k44_from_tA(q8, el):
    S = connection_set(q8, [el("t"), el("tx"), el("ta"), el("tx3")])
    g = cayley_graph(q8, S)
    assert nx.is_isomorphic(to_nx(g), nx.complete_bipartite_graph(4, 4))
    A_part = {v for v in range(8) if q8.in_A(v)}
    assert all(set(g.adj[v]).isdisjoint(A_part) == (v in A_part) for v in range(8))


def test_involution_gives_matching(q8, el):
    g = cayley_graph(q8, connection_set(q8, [el("a")]))
    assert g.num_edges() == 4 and set(g.degrees()) == {1} and not g.is_connected()


def test_z6_k33():
    Z6 = parse_group_spec("abelian:6")
    S = connection_set(Z6, ["(1)", "(3)", "(5)"])
    g = cayley_graph(Z6, S)
    oracle = {(u, v) for u in range(6) for v in range(6) if u < v and (v - u) % 6 in (1, 3, 5)}
    assert set(g.edges()) == oracle
    assert nx.is_isomorphic(to_nx(g), nx.complete_bipartite_graph(3, 3))


def test_minimality_examples(q8, el):
    S = connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")])
    assert minimality_witnesses(q8, S) == (True, sorted(S))
    S = connection_set(q8, [el("x"), el("x3"), el("t"), el("ta"), el("tx"), el("tx3")])
    assert minimality_witnesses(q8, S) == (True, [])
    S = connection_set(q8, [el("x"), el("x3")])
    assert minimality_witnesses(q8, S)[0] is False
    assert not is_minimal(q8, S)


def test_induced_subgraph_examples(q8, el):
    k44 = complete_bipartite(4)
    part = induced_subgraph(k44, range(4))
    assert part.order == 4 and part.num_edges() == 0
    whole = induced_subgraph(k44, range(8))
    assert whole.same_edges(k44)
    g = cayley_graph(q8, connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")]))
    H = generated_subgroup(q8, [el("x")])
    sub = induced_subgraph(g, H.members)
    assert is_isomorphic(sub, cycle(4))
    assert sub.provenance["vertices"] == sorted(H.members)
    with pytest.raises(ValueError):
        induced_subgraph(k44, [9])


def test_parse_set_spec(q8):
    S = parse_set_spec(q8, "(1);(3);t*(0);t*(2)")
    assert S.texts() == ["(1)", "(3)", "t*(0)", "t*(2)"]
    with pytest.raises(ParseError) as info:
        parse_set_spec(q8, "(1);(3);t*0")
    assert info.value.position == 10
    with pytest.raises(ParseError):
        parse_set_spec(q8, "(1);;(3)")


GROUPS = ["dicyclic:4", "dicyclic:6", "dicyclic:8", "dicyclic:10", "dicyclic:12", "dicyclic:3x6", "dicyclic:24", "abelian:2x6"]


@st.composite
def group_and_set(draw, specs=GROUPS):
    G = parse_group_spec(draw(st.sampled_from(specs)))
    picks = draw(st.sets(st.integers(1, G.order - 1), max_size=6))
    S = connection_set(G, picks | {int(G.inv[g]) for g in picks})
    return G, S


@settings(max_examples=60, deadline=None)
@given(group_and_set())
def test_cayley_properties(case):
    G, S = case
    g = cayley_graph(G, S)
    assert set(g.degrees()) <= {len(S)}
    g.validate()
    assert g.is_connected() == (len(generated_subgroup(G, S.members)) == G.order)
    edges = set(g.edges())
    for x in range(G.order):
        image = {tuple(sorted((int(G.mul[x, u]), int(G.mul[x, v])))) for u, v in edges}
        assert image == edges


@settings(max_examples=40, deadline=None)
@given(group_and_set(["dicyclic:4", "dicyclic:6", "dicyclic:8", "dicyclic:10"]), st.data())
def test_coset_subgraphs_isomorphic(case, data):
    G, S = case
    seed = data.draw(st.sets(st.integers(0, G.order - 1), max_size=2))
    H = generated_subgroup(G, seed)
    g = cayley_graph(G, S)
    certs = {canonical_form(induced_subgraph(g, block)).certificate for block in left_cosets(G, H)}
    assert len(certs) == 1


def test_json_round_trip(q8, el):
    g = cayley_graph(q8, connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")]))
    back = Graph.from_json(g.to_json())
    assert back.same_edges(g) and back.provenance == g.provenance
    assert back.to_json() == g.to_json()
    assert Graph.from_json(complete_bipartite(2).to_json()).provenance is None


def test_dot_labels(q8, el):
    g = cayley_graph(q8, connection_set(q8, [el("x"), el("x3")]))
    dot = g.to_dot()
    assert dot.startswith("graph G {") and '[label="t*(3)"]' in dot
    assert dot.count(" -- ") == 8
    assert '[label="0"]' in complete_bipartite(1).to_dot()


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_adjacency([[1], []])
    with pytest.raises(ValueError):
        Graph.from_adjacency([[0]])
