from __future__ import annotations

import json
import random

import numpy as np
import pytest

from dicyclic_drg.cayley import cayley_graph, connection_set, minimality_witnesses
from dicyclic_drg.drg import IntersectionArray, intersection_array
from dicyclic_drg.errors import CapExceededError, InvalidSpecError
from dicyclic_drg.groups import generated_subgroup, parse_group_spec
from dicyclic_drg.verifier import (
    GroupReport,
    VerificationReport,
    _drg_claims,
    _structural,
    atom_decomposition,
    cayley_verdict,
    claim_checks,
    classify_instance,
    enumerate_minimal_sets,
    groups_for_range,
    raw_minimal_sets,
    scan_group,
    verify_theorem,
)

SMALL_SPECS = [spec for _, spec in groups_for_range(2, 5)]


@pytest.mark.parametrize("spec", [spec for _, spec in groups_for_range(2, 9)])
def test_atom_decomposition(spec):
    G = parse_group_spec(spec)
    atoms = atom_decomposition(G).atoms
    assert sorted(x for atom in atoms for x in atom) == list(range(1, G.order))
    singletons = [atom for atom in atoms if len(atom) == 1]
    assert singletons == [(G.involution,)]
    assert len(atoms) == G.order // 2
    assert all(int(G.inv[atom[0]]) == atom[-1] for atom in atoms)


def test_q8_enumeration(q8):
    sets = list(enumerate_minimal_sets(q8))
    assert len(sets) == 6
    assert scan_group(q8.spec).scanned == 16
    assert {frozenset(S) for S in sets} == set(raw_minimal_sets(q8))


def test_dic3_enumeration(dic3):
    scan = scan_group(dic3.spec)
    assert len(scan.atoms) == 6 and scan.scanned == 64
    sets = {frozenset(S) for S in enumerate_minimal_sets(dic3)}
    assert sets == set(raw_minimal_sets(dic3))


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_emitted_sets_are_minimal(spec):
    G = parse_group_spec(spec)
    scan = scan_group(spec)
    seen = set()
    for mask, wit in scan.minimal_masks():
        S = connection_set(G, scan.atoms.members(mask))
        assert 0 not in S and all(int(G.inv[s]) in S for s in S)
        generates, witnesses = minimality_witnesses(G, S)
        assert generates and witnesses == scan.atoms.members(wit)
        assert frozenset(S) not in seen
        seen.add(frozenset(S))


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_identity_rooted_verdict_matches_all_pairs(spec):
    G = parse_group_spec(spec)
    rnd = random.Random(5)
    sets = list(enumerate_minimal_sets(G))
    # also non-minimal and disconnected sets
    for _ in range(30):
        picks = rnd.sample(range(1, G.order), rnd.randint(1, 5))
        sets.append(connection_set(G, set(picks) | {int(G.inv[g]) for g in picks}))
    for S in sets:
        fast = cayley_verdict(G, list(S))
        full = intersection_array(cayley_graph(G, S))
        assert fast.array == full.array
        assert fast.status == full.status
        if full.failure is not None and full.failure.first is not None:
            assert fast.failure == full.failure


def test_classify_examples(q8, dic3, el):
    rec = classify_instance(q8, connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")]))
    assert str(rec.verdict.array) == "{4,3; 1,4}" and rec.iso_k44 is True
    assert not rec.failures
    assert rec.primitivity == {"primitive": False, "bipartite": True, "antipodal": True}

    rec = classify_instance(q8, connection_set(q8, [el("a"), el("x"), el("x3"), el("t"), el("ta")]))
    f = rec.verdict.failure
    assert rec.iso_k44 is None and f.distance == 1
    assert f.first == (0, el("x")) and f.second == (0, el("a"))
    assert f.second_value[1] == 4 and f.first_value[1] < 4

    for S in enumerate_minimal_sets(dic3):
        assert not classify_instance(dic3, S).verdict.is_distance_regular

    with pytest.raises(InvalidSpecError):
        classify_instance(q8, connection_set(q8, [el("x"), el("x3"), el("t"), el("ta"), el("tx"), el("tx3")]))


def _by(results, claim, witness):
    return [c for c in results if c.claim == claim and c.witness == witness]


def test_claim_checks_examples(q8, el):
    S = connection_set(q8, [el("x"), el("x3"), el("t"), el("ta")])
    results = claim_checks(q8, S)
    (lemma,) = _by(results, "lemma-tA", "t*(0)")
    assert lemma.status == "pass" and lemma.case == "tA"
    # independent: outside neighbors of each vertex v w.r.t. H = <x> are exactly v*t and v*t^-1
    H = generated_subgroup(q8, [el("x")]).members
    for v in range(8):
        coset = {int(q8.mul[v, h]) for h in H}
        outside = {int(q8.mul[v, s]) for s in S} - coset
        assert outside == {int(q8.mul[v, el("t")]), int(q8.mul[v, el("ta")])}
    for claim in ("claim-1", "claim-2(i)", "claim-2(ii)", "claim-3", "claim-4", "lemma-A(ii)"):
        (r,) = _by(results, claim, "(1)")
        assert r.status == "pass", r
    assert "[G:H]=2, o(s)=4" in _by(results, "claim-1", "(1)")[0].detail
    assert "a1=0" in _by(results, "claim-2(i)", "(1)")[0].detail
    assert "c2=4" in _by(results, "claim-2(ii)", "(1)")[0].detail

    non_drg = claim_checks(q8, connection_set(q8, [el("a"), el("x"), el("x3"), el("t"), el("ta")]))
    conditional = [c for c in non_drg if c.claim.startswith("claim") or c.claim in ("lemma-A(ii)", "tA-subcase")]
    assert conditional and all(c.status == "n-a" for c in conditional)
    assert all(c.status == "pass" for c in non_drg if c.claim.startswith("lemma-A") and c.claim != "lemma-A(ii)")


def test_claim_checks_can_fail(q8, el):
    scan = scan_group(q8.spec)
    members = [el("x"), el("x3"), el("t"), el("ta")]
    S_arr = np.array(members)
    N = q8.mul[:, S_arr]
    # trivial subgroup in place of <S - {t, t^-1}>
    bad = _structural(q8, S_arr, N, el("t"), 0, scan.lattice)
    assert any(c.status == "fail" for c in bad)
    hid = scan.lattice._ids[generated_subgroup(q8, [el("t")]).bits]
    fake = IntersectionArray((4, 1), (1, 2))  # a1 = 2 with s^2 not in S
    results = _drg_claims(q8, members, el("x"), hid, scan.lattice, fake, True)
    assert {c.claim for c in results if c.status == "fail"} >= {"claim-2(i)"}


def test_verify_small_ranges():
    r = verify_theorem(2, 2)
    (g,) = r.groups
    assert (g.group, g.atoms, g.scanned, g.generating, g.minimal) == ("dicyclic:4", 4, 16, 8, 6)
    assert len(g.drg) == 3 and all(rec["iso_k44"] is True for rec in g.drg)
    assert {tuple(rec["set"]) for rec in g.drg} == {
        ("(1)", "(3)", "t*(0)", "t*(2)"),
        ("(1)", "(3)", "t*(1)", "t*(3)"),
        ("t*(0)", "t*(1)", "t*(2)", "t*(3)"),
    }
    assert r.theorem_holds

    r = verify_theorem(3, 3)
    assert len(r.groups) == 1 and r.drg_count == 0 and r.theorem_holds


def test_verify_rejects():
    with pytest.raises(InvalidSpecError):
        verify_theorem(1, 2)
    with pytest.raises(InvalidSpecError):
        verify_theorem(4, 3)
    with pytest.raises(CapExceededError, match="16,777,216"):
        verify_theorem(2, 12, cap=10)


def test_theorem_fails_on_violation():
    g = GroupReport(2, "dicyclic:4", 8, 4, 16, 8, 6, [], [{"claim": "claim-3"}], {}, 0)
    assert not VerificationReport(2, 2, [g]).theorem_holds
    g = GroupReport(3, "dicyclic:6", 12, 6, 64, 50, 24, [{"iso_k44": "n/a"}], [], {}, 0)
    assert not VerificationReport(3, 3, [g]).theorem_holds


def test_parallel_matches_sequential():
    a = verify_theorem(2, 5, jobs=1, deterministic=True)
    b = verify_theorem(2, 5, jobs=3, deterministic=True)
    assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)


def test_group_by_iso():
    r = verify_theorem(2, 2, group_by_iso=True, deterministic=True)
    (g,) = r.groups
    assert len(g.iso_classes) == 1 and g.iso_classes[0]["count"] == 3
    assert g.iso_classes[0]["array"] == "{4,3; 1,4}"
