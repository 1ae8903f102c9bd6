"""Exhaustive check of the K4,4 classification over generalized dicyclic groups.

Inverse-closed subsets of G - {1} are unions of atoms ({a} and the pairs
{g, g^-1}), so a connection set is an atom bitmask.  The subgroup generated
by every mask is tabulated once per group with a join table over the
subgroup lattice; generation and minimality then reduce to array lookups.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cayley import ConnectionSet, cayley_graph, connection_set, minimality_witnesses
from .drg import (
    IntersectionArray,
    RegularityFailure,
    RegularityVerdict,
    intersection_array,
    primitivity_profile,
)
from .errors import CapExceededError, InvalidSpecError
from .graphkit import canonical_form, complete_bipartite, is_isomorphic
from .groups import (
    GroupTable,
    abelian_groups_with_unique_involution,
    closure,
    parse_group_spec,
)

DEFAULT_N_CAP = 12
K44_ARRAY = IntersectionArray((4, 3), (1, 4))


@dataclass(frozen=True)
class AtomDecomposition:
    atoms: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.atoms)

    def members(self, mask: int) -> list[int]:
        out = []
        for b, atom in enumerate(self.atoms):
            if mask >> b & 1:
                out.extend(atom)
        return sorted(out)


def atom_decomposition(G: GroupTable) -> AtomDecomposition:
    atoms = []
    seen = set()
    for g in range(1, G.order):
        if g not in seen:
            atom = tuple(sorted({g, int(G.inv[g])}))
            seen.update(atom)
            atoms.append(atom)
    return AtomDecomposition(tuple(atoms))


class SubgroupLattice:
    """All subgroups reachable as <union of atoms>, with a join table.

    ``join[h, b]`` is the id of <H_h, atom_b>; subgroup 0 is trivial.
    """

    def __init__(self, G: GroupTable, atoms: AtomDecomposition):
        self.G = G
        self.bits: list[int] = []
        self._ids: dict[int, int] = {}
        self._id(1)
        joins = []
        q = 0
        while q < len(self.bits):
            hb = self.bits[q]
            members = [g for g in range(G.order) if hb >> g & 1]
            joins.append([self._id(sum(1 << x for x in closure(G, members + list(atom)))) for atom in atoms.atoms])
            q += 1
        self.join = np.array(joins, dtype=np.int32).reshape(len(self.bits), len(atoms))
        self.full = self._ids[(1 << G.order) - 1]
        self._cosets: dict[int, np.ndarray] = {}

    def _id(self, bits: int) -> int:
        if bits not in self._ids:
            self._ids[bits] = len(self.bits)
            self.bits.append(bits)
        return self._ids[bits]

    def __len__(self):
        return len(self.bits)

    def size(self, hid: int) -> int:
        return self.bits[hid].bit_count()

    def coset_labels(self, hid: int) -> np.ndarray:
        """Smallest element of gH, for every g."""
        if hid not in self._cosets:
            hb = self.bits[hid]
            members = [g for g in range(self.G.order) if hb >> g & 1]
            self._cosets[hid] = self.G.mul[:, members].min(axis=1)
        return self._cosets[hid]


def subgroup_table(lattice: SubgroupLattice, m: int) -> np.ndarray:
    """sub[mask] = id of the subgroup generated by the atoms in mask."""
    dtype = np.int16 if len(lattice) < 2**15 else np.int32
    sub = np.zeros(1 << m, dtype=dtype)
    for b in range(m):
        sub[1 << b : 1 << (b + 1)] = lattice.join[sub[: 1 << b], b]
    return sub


@dataclass
class GroupScan:
    G: GroupTable
    atoms: AtomDecomposition
    lattice: SubgroupLattice
    sub: np.ndarray

    @property
    def scanned(self) -> int:
        return len(self.sub)

    def minimal_masks(self, lo: int = 0, hi: int | None = None, block: int = 1 << 20):
        """Yield (mask, witness-atom bitmask) for minimal masks in [lo, hi), ascending."""
        hi = self.scanned if hi is None else hi
        full = self.lattice.full
        m = len(self.atoms)
        for start in range(lo, hi, block):
            masks = np.arange(start, min(start + block, hi), dtype=np.int64)
            gen = self.sub[masks] == full
            masks = masks[gen]
            wit = np.zeros(len(masks), dtype=np.int64)
            for b in range(m):
                has = (masks >> b) & 1
                wit |= (has & (self.sub[masks ^ (1 << b)] != full)) << b
            keep = wit != 0
            yield from zip(masks[keep].tolist(), wit[keep].tolist())

    def generating_count(self, lo: int = 0, hi: int | None = None) -> int:
        hi = self.scanned if hi is None else hi
        return int(np.count_nonzero(self.sub[lo:hi] == self.lattice.full))


@lru_cache(maxsize=8)
def scan_group(spec: str) -> GroupScan:
    G = parse_group_spec(spec)
    atoms = atom_decomposition(G)
    lattice = SubgroupLattice(G, atoms)
    return GroupScan(G, atoms, lattice, subgroup_table(lattice, len(atoms)))


def enumerate_minimal_sets(G: GroupTable):
    """Every minimal inverse-closed generating set, in atom-bitmask order."""
    scan = scan_group(G.spec)
    for mask, _ in scan.minimal_masks():
        yield connection_set(G, scan.atoms.members(mask))


def raw_minimal_sets(G: GroupTable) -> list[frozenset[int]]:
    """Brute force over all subsets of G - {1}; only for small groups."""
    others = list(range(1, G.order))
    out = []
    for mask in range(1 << len(others)):
        S = [g for i, g in enumerate(others) if mask >> i & 1]
        if any(int(G.inv[s]) not in S for s in S):
            continue
        cs = connection_set(G, S)
        generates, witnesses = minimality_witnesses(G, cs)
        if generates and witnesses:
            out.append(frozenset(S))
    return out


# regularity on Cayley graphs


def cayley_verdict(G: GroupTable, S) -> RegularityVerdict:
    """Intersection numbers from the identity only.

    Left multiplication is a graph automorphism, so the pair (u, v) behaves
    exactly like (1, u^-1 v).  The witness convention matches the all-pairs
    scan, whose first row is u = 0.
    """
    S = np.asarray(S, dtype=np.int64)
    N = G.mul[:, S]
    n = G.order
    dist = np.full(n, -1, dtype=np.int64)
    dist[0] = 0
    frontier = np.zeros(1, dtype=np.int64)
    d = 0
    while frontier.size:
        nxt = np.unique(N[frontier].ravel())
        nxt = nxt[dist[nxt] < 0]
        if not nxt.size:
            break
        d += 1
        dist[nxt] = d
        frontier = nxt
    if (dist < 0).any():
        return RegularityVerdict(failure=RegularityFailure("disconnected"))
    L = dist[N]
    dv = dist[:, None]
    c = (L == dv - 1).sum(axis=1)
    a = (L == dv).sum(axis=1)
    b = (L == dv + 1).sum(axis=1)
    k = len(S) + 1
    key = (c * k + a) * k + b
    _, first = np.unique(dist, return_index=True)
    ref = key[first][dist]
    bad = np.nonzero(key != ref)[0]
    if bad.size:
        v = int(bad[0])
        i = int(dist[v])
        w = int(first[i])
        return RegularityVerdict(
            failure=RegularityFailure(
                "intersection numbers vary",
                i,
                (0, w),
                (int(c[w]), int(a[w]), int(b[w])),
                (0, v),
                (int(c[v]), int(a[v]), int(b[v])),
            )
        )
    bs = tuple(int(b[first[i]]) for i in range(d))
    cs = tuple(int(c[first[i]]) for i in range(1, d + 1))
    return RegularityVerdict(array=IntersectionArray(bs, cs))


# claim checks


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    status: str  # pass | fail | n-a
    witness: str
    case: str  # "A" or "tA": where the witness lives
    detail: str = ""

    def to_dict(self) -> dict:
        return {"claim": self.claim, "status": self.status, "witness": self.witness, "case": self.case, "detail": self.detail}


STRUCTURAL_CLAIMS = ("lemma-tA", "lemma-A-order", "lemma-A-cosets", "lemma-A(i)", "coset-iso")
DRG_CLAIMS_A = ("lemma-A(ii)", "claim-1", "claim-2(i)", "claim-2(ii)", "claim-3", "claim-4")
DRG_CLAIMS_TA = ("tA-subcase",)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _power(G: GroupTable, g: int, k: int) -> int:
    x = 0
    for _ in range(k):
        x = int(G.mul[x, g])
    return x


def _structural(G, S_arr, N, s, hid, lattice) -> list[ClaimResult]:
    text = G.format(s)
    sinv = int(G.inv[s])
    cos = lattice.coset_labels(hid)
    index = G.order // lattice.size(hid)
    outside = cos[N] != cos[:, None]
    expected = (S_arr == s) | (S_arr == sinv)
    layout_ok = bool((outside == expected[None, :]).all())
    # left multiplication by the coset minimum r maps H onto rH: compare r*N[h] with N[r*h]
    h_of = G.mul[G.inv[cos], np.arange(G.order)]
    in_coset = cos[N] == cos[:, None]
    image = G.mul[cos[:, None], N[h_of]]
    iso_ok = bool((image == N).all() and (in_coset == (cos[N[h_of]] == cos[h_of][:, None])).all())
    results = []
    if not G.in_A(s):
        results.append(
            ClaimResult("lemma-tA", _status(layout_ok), text, "tA", f"[G:H]={index}; outside neighbors are v*s, v*s^-1")
        )
    else:
        order = G.element_order(s)
        results.append(ClaimResult("lemma-A-order", _status(order > 2), text, "A", f"o(s)={order}"))
        powers = [_power(G, s, i) for i in range(order)]
        labels = {int(cos[powers[i]]) for i in range(index)}
        cosets_ok = len(labels) == index and order % index == 0
        results.append(
            ClaimResult("lemma-A-cosets", _status(cosets_ok), text, "A", f"[G:H]={index}, o(s)={order}")
        )
        swap_ok = bool(
            (np.sort(N[:, [int(np.nonzero(S_arr == s)[0][0]), int(np.nonzero(S_arr == sinv)[0][0])]], axis=1)
             == np.sort(np.stack([G.mul[s], G.mul[sinv]], axis=1), axis=1)).all()
        )
        collapse = index == 2 and order >= 4
        iff_ok = all(
            (cos[powers[(i - 1) % order]] == cos[powers[(i + 1) % order]]) == collapse for i in range(index)
        )
        results.append(
            ClaimResult(
                "lemma-A(i)",
                _status(layout_ok and swap_ok and iff_ok),
                text,
                "A",
                f"two outside neighbors s^(i-1)h, s^(i+1)h; collapse={collapse}",
            )
        )
    results.append(
        ClaimResult("coset-iso", _status(iso_ok), text, "A" if G.in_A(s) else "tA", f"{index} cosets of size {G.order // index}")
    )
    return results


def _drg_claims(G, S, s, hid, lattice, arr: IntersectionArray, iso_k44) -> list[ClaimResult]:
    text = G.format(s)
    sinv = int(G.inv[s])
    index = G.order // lattice.size(hid)
    a1 = arr.a[1]
    c2 = arr.c[1] if arr.d >= 2 else None
    members = set(S)
    out = []
    if G.in_A(s):
        order = G.element_order(s)
        out.append(ClaimResult("lemma-A(ii)", _status(c2 is not None and c2 >= 2), text, "A", f"c2={c2}"))
        out.append(ClaimResult("claim-1", _status(index == 2 and order >= 4), text, "A", f"[G:H]={index}, o(s)={order}"))
        s2 = int(G.mul[s, s])
        out.append(
            ClaimResult("claim-2(i)", _status(a1 in (0, 2) and (a1 == 2) == (s2 in members)), text, "A", f"a1={a1}, s^2 in S: {s2 in members}")
        )
        ok = c2 in (2, 4) and (order < 6 or c2 == 4)
        out.append(ClaimResult("claim-2(ii)", _status(ok), text, "A", f"c2={c2}, o(s)={order}"))
        out.append(ClaimResult("claim-3", _status(order == 4), text, "A", f"o(s)={order}"))
        out.append(ClaimResult("claim-4", _status(iso_k44 is True), text, "A", f"iso K4,4: {iso_k44}"))
        return out
    a = G.involution
    H = lattice.bits[hid]
    rest = sorted(members - {s, sinv})
    if not H >> a & 1:
        out.append(ClaimResult("tA-subcase", "fail", text, "tA", "case B (a not in H) admits no distance-regular graph"))
    elif all(G.in_A(x) for x in rest):
        ok = (
            len(rest) == 2
            and a not in members
            and int(G.mul[rest[0], rest[0]]) == a
            and iso_k44 is True
        )
        out.append(ClaimResult("tA-subcase", _status(ok), text, "tA", f"case A.1: S - {{s,s^-1}} = {[G.format(x) for x in rest]}"))
    else:
        ok = (
            len(rest) == 2
            and all(not G.in_A(x) for x in rest)
            and G.element_order(int(G.mul[sinv, rest[0]])) == 4
            and iso_k44 is True
        )
        out.append(ClaimResult("tA-subcase", _status(ok), text, "tA", f"case A.2: S - {{s,s^-1}} = {[G.format(x) for x in rest]}"))
    return out


def _na_claims(G, s) -> list[ClaimResult]:
    text = G.format(s)
    if G.in_A(s):
        return [ClaimResult(c, "n-a", text, "A", "not distance-regular") for c in DRG_CLAIMS_A]
    return [ClaimResult(c, "n-a", text, "tA", "not distance-regular") for c in DRG_CLAIMS_TA]


# instance classification


@dataclass
class InstanceRecord:
    set: ConnectionSet
    witnesses: list[int]
    verdict: RegularityVerdict
    iso_k44: bool | str | None  # None: not DRG; "n/a": DRG but |G| != 8
    claim_checks: list[ClaimResult] = field(default_factory=list)
    primitivity: dict | None = None
    certificate: str | None = None

    @property
    def failures(self) -> list[ClaimResult]:
        return [c for c in self.claim_checks if c.status == "fail"]

    def to_dict(self) -> dict:
        G = self.set.group
        out = {
            "set": self.set.texts(),
            "witnesses": [G.format(w) for w in self.witnesses],
            "verdict": self.verdict.to_dict(),
            "iso_k44": self.iso_k44,
            "claim_checks": [c.to_dict() for c in self.claim_checks],
        }
        if self.primitivity is not None:
            out["primitivity"] = self.primitivity
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


_K44 = complete_bipartite(4)


def _classify(scan: GroupScan, mask: int, wit_atoms: int, group_by_iso: bool) -> InstanceRecord:
    G, lattice = scan.G, scan.lattice
    members = scan.atoms.members(mask)
    S = connection_set(G, members)
    S_arr = np.asarray(members, dtype=np.int64)
    witnesses = scan.atoms.members(wit_atoms)
    verdict = cayley_verdict(G, S_arr)
    N = G.mul[:, S_arr]
    record = InstanceRecord(S, witnesses, verdict, None)
    graph = None
    if verdict.is_distance_regular:
        graph = cayley_graph(G, S)
        full = intersection_array(graph)
        if full.array != verdict.array:
            record.claim_checks.append(
                ClaimResult("dual-route", "fail", "", "", f"identity-rooted {verdict.array} vs all-pairs {full.array}")
            )
        record.iso_k44 = is_isomorphic(graph, _K44) if G.order == 8 else "n/a"
        record.primitivity = primitivity_profile(graph).to_dict()
        if group_by_iso:
            record.certificate = canonical_form(graph).hex()
        ok = record.iso_k44 is True and verdict.array == K44_ARRAY
        record.claim_checks.append(
            ClaimResult("theorem", _status(ok), "", "", f"{verdict.array}; iso K4,4: {record.iso_k44}")
        )
    for b, atom in enumerate(scan.atoms.atoms):
        if not wit_atoms >> b & 1:
            continue
        hid = int(scan.sub[mask ^ (1 << b)])
        for s in atom:
            record.claim_checks.extend(_structural(G, S_arr, N, s, hid, lattice))
            if verdict.is_distance_regular:
                record.claim_checks.extend(_drg_claims(G, members, s, hid, lattice, verdict.array, record.iso_k44))
            else:
                record.claim_checks.extend(_na_claims(G, s))
    return record


def classify_instance(G: GroupTable, S: ConnectionSet, *, group_by_iso: bool = False) -> InstanceRecord:
    """Classify one minimal connection set (regularity, K4,4 test, claim checks)."""
    scan = scan_group(G.spec)
    mask = 0
    members = set(S)
    for b, atom in enumerate(scan.atoms.atoms):
        if members.issuperset(atom):
            mask |= 1 << b
    if scan.atoms.members(mask) != sorted(members):
        raise InvalidSpecError(f"{S} is not a union of atoms")
    full = scan.lattice.full
    wit = 0
    for b in range(len(scan.atoms)):
        if mask >> b & 1 and scan.sub[mask ^ (1 << b)] != full:
            wit |= 1 << b
    if scan.sub[mask] != full or not wit:
        raise InvalidSpecError(f"{S} is not a minimal generating set")
    return _classify(scan, mask, wit, group_by_iso)


def claim_checks(G: GroupTable, S: ConnectionSet, record: InstanceRecord | None = None) -> list[ClaimResult]:
    record = record if record is not None else classify_instance(G, S)
    return list(record.claim_checks)


# theorem verification


@dataclass
class ChunkResult:
    minimal: int = 0
    generating: int = 0
    drg: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    claim_counts: Counter = field(default_factory=Counter)


def _run_chunk(spec: str, lo: int, hi: int, group_by_iso: bool) -> ChunkResult:
    scan = scan_group(spec)
    out = ChunkResult(generating=scan.generating_count(lo, hi))
    for mask, wit in scan.minimal_masks(lo, hi):
        out.minimal += 1
        record = _classify(scan, mask, wit, group_by_iso)
        for c in record.claim_checks:
            out.claim_counts[(c.claim, c.status)] += 1
        failures = record.failures
        if failures:
            texts = record.set.texts()
            out.violations.extend({"set": texts, **c.to_dict()} for c in failures)
        if record.verdict.is_distance_regular:
            out.drg.append(record.to_dict())
    return out


@dataclass
class GroupReport:
    n: int
    group: str
    order: int
    atoms: int
    scanned: int
    generating: int
    minimal: int
    drg: list
    violations: list
    claim_counts: dict
    elapsed_ms: int
    iso_classes: list | None = None

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "group": self.group,
            "order": self.order,
            "atoms": self.atoms,
            "scanned": self.scanned,
            "generating": self.generating,
            "minimal": self.minimal,
            "drg": self.drg,
            "violations": self.violations,
            "claim_counts": self.claim_counts,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.iso_classes is not None:
            out["iso_classes"] = self.iso_classes
        return out


@dataclass
class VerificationReport:
    n_min: int
    n_max: int
    groups: list[GroupReport]

    @property
    def theorem_holds(self) -> bool:
        return all(
            rec["iso_k44"] is True for g in self.groups for rec in g.drg
        ) and not any(g.violations for g in self.groups)

    @property
    def drg_count(self) -> int:
        return sum(len(g.drg) for g in self.groups)

    def to_dict(self) -> dict:
        return {
            "range": [self.n_min, self.n_max],
            "groups": [g.to_dict() for g in self.groups],
            "theorem_holds": self.theorem_holds,
        }

    def summary(self) -> str:
        minimal = sum(g.minimal for g in self.groups)
        drg = self.drg_count
        ng = len(self.groups)
        line = f"{ng} group{'s' if ng != 1 else ''}, {minimal} minimal sets, {drg} DRG"
        if drg and all(rec["iso_k44"] is True for g in self.groups for rec in g.drg):
            line += ", all ≅ K4,4"
        nviol = sum(len(g.violations) for g in self.groups)
        line += "; theorem holds" if self.theorem_holds else f"; VIOLATIONS: {nviol}"
        return line


def subset_estimate(n: int) -> int:
    return 2 ** (2 * n)


def groups_for_range(n_min: int, n_max: int) -> list[tuple[int, str]]:
    out = []
    for n in range(n_min, n_max + 1):
        for A in abelian_groups_with_unique_involution(2 * n):
            out.append((n, f"dicyclic:{A.spec()}"))
    return out


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def verify_theorem(
    n_min: int,
    n_max: int,
    *,
    jobs: int = 1,
    cap: int = DEFAULT_N_CAP,
    group_by_iso: bool = False,
    deterministic: bool = False,
    progress=None,
) -> VerificationReport:
    if n_min < 2:
        raise InvalidSpecError(f"n_min must be >= 2 (n > 1), got {n_min}")
    if n_max < n_min:
        raise InvalidSpecError(f"n_max={n_max} < n_min={n_min}")
    if n_max > cap:
        raise CapExceededError(
            f"n_max={n_max} exceeds cap {cap}: would scan 2^{2 * n_max} = {subset_estimate(n_max):,} subsets per group"
        )
    reports = []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for n, spec in groups_for_range(n_min, n_max):
            t0 = time.perf_counter()
            scan = scan_group(spec)
            pieces = _chunks(scan.scanned, 4 * jobs if jobs > 1 else 1)
            if pool is None:
                results = [_run_chunk(spec, lo, hi, group_by_iso) for lo, hi in pieces]
            else:
                futures = [pool.submit(_run_chunk, spec, lo, hi, group_by_iso) for lo, hi in pieces]
                results = [f.result() for f in futures]
            merged = ChunkResult()
            for r in results:
                merged.minimal += r.minimal
                merged.generating += r.generating
                merged.drg.extend(r.drg)
                merged.violations.extend(r.violations)
                merged.claim_counts.update(r.claim_counts)
            counts: dict[str, dict[str, int]] = {}
            for (claim, status), k in sorted(merged.claim_counts.items()):
                counts.setdefault(claim, {"pass": 0, "fail": 0, "n-a": 0})[status] = k
            iso_classes = None
            if group_by_iso:
                by_cert: dict[str, dict] = {}
                for rec in merged.drg:
                    entry = by_cert.setdefault(
                        rec["certificate"], {"certificate": rec["certificate"], "array": rec["verdict"]["array"], "count": 0}
                    )
                    entry["count"] += 1
                iso_classes = [by_cert[c] for c in sorted(by_cert)]
            elapsed = 0 if deterministic else int(round((time.perf_counter() - t0) * 1000))
            report = GroupReport(
                n=n,
                group=spec,
                order=scan.G.order,
                atoms=len(scan.atoms),
                scanned=scan.scanned,
                generating=merged.generating,
                minimal=merged.minimal,
                drg=merged.drg,
                violations=merged.violations,
                claim_counts=counts,
                elapsed_ms=elapsed,
                iso_classes=iso_classes,
            )
            reports.append(report)
            if progress is not None:
                progress(report)
    finally:
        if pool is not None:
            pool.shutdown()
    return VerificationReport(n_min, n_max, reports)

