"""The E8 root system and its root subsystems.

Roots are kept in simple-root coordinates; all pairing goes through the
Cartan matrix.  A separate linear map into Z^9 (one column per generator
z_1..z_9, with the all-ones relation) is used only for Pi-quotients.

Subsystem enumeration follows Borel-de Siebenthal: every maximal-rank
subsystem arises by deleting one node from the affine diagram of an
irreducible component, so recursing on one representative per Weyl orbit
and expanding each new orbit under the 8 simple-reflection permutations
reaches every rank-8 subsystem.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import snf
from .arith import InvalidArgument
from .snf import AbGroup

CACHE_ENV = "POLYPRIME_CACHE"
_CACHE_VERSION = "polyprime-e8-cache v1"

# Dynkin diagram: chain 1-2-3-5-6-7-8 with node 4 attached to node 3
# (1-indexed as in the Z^9 generator list below).
_EDGES = [(0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (6, 7)]

# Images of the simple roots in Z^9 (e_k basis); the ambient lattice Pi is
# Z^9 modulo the all-ones vector.
_Z9_SIMPLE = np.array([
    [1, -1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, -1, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, -1, 0],
], dtype=np.int64)

_WEYL_EXCEPTIONAL = {6: 51840, 7: 2903040, 8: 696729600}


class RootSystemError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootSystemE8:
    roots: np.ndarray            # (240, 8) simple-root coordinates
    cartan: np.ndarray           # (8, 8)
    reflection_perms: np.ndarray  # (8, 240) permutations of root indices
    z9: np.ndarray               # (240, 9) images in Z^9
    neg_index: np.ndarray        # (240,) index of -root
    simple_indices: tuple[int, ...]

    def digest(self) -> str:
        return hashlib.sha256(self.roots.astype(np.int64).tobytes()).hexdigest()


@dataclass(frozen=True)
class RootSubsystem:
    membership: np.ndarray       # sorted root indices, int16
    simple_roots: tuple[int, ...]
    type_label: str
    rank: int

    def key(self) -> bytes:
        return self.membership.tobytes()

    def root_count(self) -> int:
        return len(self.membership)


_system: RootSystemE8 | None = None


def build_root_system() -> RootSystemE8:
    """Close the 8 simple roots under the 8 simple reflections."""
    global _system
    if _system is not None:
        return _system
    cartan = 2 * np.eye(8, dtype=np.int64)
    for a, b in _EDGES:
        cartan[a, b] = cartan[b, a] = -1
    roots: list[tuple[int, ...]] = [tuple(row) for row in np.eye(8, dtype=np.int64)]
    index = {r: k for k, r in enumerate(roots)}
    frontier = list(roots)
    while frontier:
        new = []
        for v in frontier:
            vv = np.array(v, dtype=np.int64)
            pair = cartan @ vv
            for i in range(8):
                w = vv.copy()
                w[i] -= pair[i]
                tw = tuple(int(x) for x in w)
                if tw not in index:
                    index[tw] = len(roots)
                    roots.append(tw)
                    new.append(tw)
        frontier = new
    roots_arr = np.array(roots, dtype=np.int64)
    if len(roots_arr) != 240:
        raise RootSystemError(f"generated {len(roots_arr)} roots, expected 240")
    perms = np.zeros((8, 240), dtype=np.int32)
    pairings = roots_arr @ cartan
    for i in range(8):
        for r in range(240):
            w = roots_arr[r].copy()
            w[i] -= pairings[r, i]
            perms[i, r] = index[tuple(int(x) for x in w)]
    neg = np.array([index[tuple(int(-x) for x in roots_arr[r])] for r in range(240)],
                   dtype=np.int32)
    _system = RootSystemE8(
        roots=roots_arr, cartan=cartan, reflection_perms=perms,
        z9=roots_arr @ _Z9_SIMPLE, neg_index=neg,
        simple_indices=tuple(range(8)))
    return _system


def highest_root_coeffs() -> np.ndarray:
    """Coefficient vector of the highest root (maximal coordinate sum)."""
    sys = build_root_system()
    sums = sys.roots.sum(axis=1)
    return sys.roots[int(np.argmax(sums))]


def _component_partition(indices: tuple[int, ...]) -> list[list[int]]:
    """Connected components of the pairing graph on the chosen roots,
    as lists of positions into `indices`."""
    sys = build_root_system()
    k = len(indices)
    gram = sys.roots[list(indices)] @ sys.cartan @ sys.roots[list(indices)].T
    seen = [False] * k
    comps = []
    for s in range(k):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in range(k):
                if not seen[v] and gram[u, v] != 0:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _irreducible_label(rank: int, count: int) -> str:
    if count == rank * (rank + 1):
        return f"A{rank}"
    if rank >= 4 and count == 2 * rank * (rank - 1):
        return f"D{rank}"
    if (rank, count) in ((6, 72), (7, 126), (8, 240)):
        return f"E{rank}"
    raise RootSystemError(f"no irreducible type with rank {rank}, {count} roots")


def _label_sort_key(lbl: str):
    return ({"E": 0, "D": 1, "A": 2}[lbl[0]], -int(lbl[1:]))


def _solve_int(basis: np.ndarray, targets: np.ndarray):
    """Integer coordinates of each target in the Z-span of `basis` rows.

    Returns (mask, coeffs): mask flags targets lying in the span; coeffs
    holds their exact integer coordinates (verified by integer matmul).
    """
    sol, *_ = np.linalg.lstsq(basis.T.astype(np.float64),
                              targets.T.astype(np.float64), rcond=None)
    cand = np.rint(sol.T)
    ok = np.abs(sol.T - cand) < 1e-8
    mask = ok.all(axis=1)
    cand = cand.astype(np.int64)
    exact = (cand[mask] @ basis == targets[mask]).all(axis=1)
    full = np.zeros(len(targets), dtype=bool)
    full[np.nonzero(mask)[0]] = exact
    return full, cand


def subsystem_closure(simple_root_indices) -> RootSubsystem:
    """All 240 roots in the Z-span of the chosen roots, with type label."""
    sys = build_root_system()
    idx = tuple(int(i) for i in simple_root_indices)
    basis = sys.roots[list(idx)]
    if snf.integer_rank(basis.tolist()) != len(idx):
        raise InvalidArgument("generators are linearly dependent")
    mask, coeffs = _solve_int(basis, sys.roots)
    members = np.nonzero(mask)[0].astype(np.int16)
    comps = _component_partition(idx)
    labels = []
    member_coeffs = coeffs[members]
    for comp in comps:
        support = np.zeros(len(idx), dtype=bool)
        support[comp] = True
        in_comp = (member_coeffs[:, ~support] == 0).all(axis=1)
        labels.append(_irreducible_label(len(comp), int(in_comp.sum())))
    labels.sort(key=_label_sort_key)
    return RootSubsystem(membership=members, simple_roots=idx,
                         type_label="+".join(labels), rank=len(idx))


def _bds_children(sub: RootSubsystem) -> list[RootSubsystem]:
    """One affine-node deletion per component node, every component."""
    sys = build_root_system()
    idx = list(sub.simple_roots)
    basis = sys.roots[idx]
    _, coeffs = _solve_int(basis, sys.roots[sub.membership.astype(np.int64)])
    comps = _component_partition(sub.simple_roots)
    children = []
    for comp in comps:
        support = np.zeros(len(idx), dtype=bool)
        support[comp] = True
        in_comp = (coeffs[:, ~support] == 0).all(axis=1)
        comp_rows = np.nonzero(in_comp)[0]
        heights = coeffs[comp_rows].sum(axis=1)
        highest_member = int(sub.membership[comp_rows[int(np.argmax(heights))]])
        affine = int(sys.neg_index[highest_member])
        for pos in comp:
            cand = idx.copy()
            cand[pos] = affine
            if len(set(cand)) < len(cand):
                continue
            children.append(subsystem_closure(cand))
    return children


def enumerate_orbit(rep: RootSubsystem):
    """Weyl orbit of `rep`: closure under the 8 simple-reflection
    permutations, acting on membership sets with simple roots transported."""
    sys = build_root_system()
    perms = sys.reflection_perms
    memb0 = rep.membership.astype(np.int16)
    simp0 = np.array(rep.simple_roots, dtype=np.int16)
    seen = {memb0.tobytes(): 0}
    members = [(memb0, simp0)]
    frontier = [(memb0, simp0)]
    while frontier:
        new = []
        for memb, simp in frontier:
            for i in range(8):
                m2 = np.sort(perms[i][memb]).astype(np.int16)
                key = m2.tobytes()
                if key not in seen:
                    s2 = perms[i][simp].astype(np.int16)
                    seen[key] = len(members)
                    members.append((m2, s2))
                    new.append((m2, s2))
        frontier = new
    return [RootSubsystem(membership=m, simple_roots=tuple(int(x) for x in s),
                          type_label=rep.type_label, rank=rep.rank)
            for m, s in members]


def bds_representatives() -> list[RootSubsystem]:
    """One representative per rank-8 orbit found by the affine recursion,
    plus the rank-7 subsystems obtained by dropping one simple node."""
    reps = [r for r, _ in _orbit_reps()]
    full = list(range(8))
    seen = {r.key() for r in reps}
    for drop in range(8):
        sub = subsystem_closure(tuple(full[:drop] + full[drop + 1:]))
        if sub.key() not in seen:
            seen.add(sub.key())
            reps.append(sub)
    return reps


def _orbit_reps() -> list[tuple[RootSubsystem, int]]:
    """Rank-8 orbit representatives with orbit sizes, by BdS recursion on
    one representative per orbit (children of conjugates are conjugate)."""
    e8 = subsystem_closure(tuple(range(8)))
    reps = [(e8, 1)]
    seen_members: set[bytes] = {e8.key()}
    queue = [e8]
    while queue:
        sub = queue.pop()
        for child in _bds_children(sub):
            if child.key() in seen_members:
                continue
            orbit = enumerate_orbit(child)
            for member in orbit:
                seen_members.add(member.key())
            reps.append((child, len(orbit)))
            queue.append(child)
    return reps


@dataclass(frozen=True)
class SubsystemRecord:
    type_label: str
    simple_roots: tuple[int, ...]
    pi_invariants: tuple[int, ...]
    orbit_id: int


@dataclass
class Enumeration:
    records: list[SubsystemRecord]
    orbit_sizes: dict[int, int]
    _membership: np.ndarray | None = None   # (N, 240) bool, built lazily

    def membership_matrix(self) -> np.ndarray:
        if self._membership is None:
            self._membership = _membership_matrix(self.records)
        return self._membership

    def type_totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for rec in self.records:
            out[rec.type_label] = out.get(rec.type_label, 0) + 1
        return out

    def class_counts(self) -> dict[tuple[str, tuple[int, ...]], int]:
        out: dict[tuple[str, tuple[int, ...]], int] = {}
        for rec in self.records:
            key = (rec.type_label, rec.pi_invariants)
            out[key] = out.get(key, 0) + 1
        return out


def quotient_pi(sub_or_simple) -> AbGroup:
    """Cokernel of Z^9 by the z9-images of the simple roots plus the
    all-ones relation; torsion part is Pi/Lambda."""
    sys = build_root_system()
    simple = sub_or_simple.simple_roots if isinstance(sub_or_simple, RootSubsystem) \
        else tuple(sub_or_simple)
    rows = [sys.z9[int(i)].tolist() for i in simple]
    rows.append([1] * 9)
    return snf.cokernel(rows, 9)


def quotient_e8(sub_or_simple) -> AbGroup:
    """Cokernel of Z^8 by the simple roots in E8 coordinates."""
    sys = build_root_system()
    simple = sub_or_simple.simple_roots if isinstance(sub_or_simple, RootSubsystem) \
        else tuple(sub_or_simple)
    rows = [sys.roots[int(i)].tolist() for i in simple]
    return snf.cokernel(rows, 8)


def enumerate_all_rank8(cache_path: str | None = None) -> Enumeration:
    """All rank-8 root subsystems with type labels and Pi-quotients.

    Results are cached to disk (path from the POLYPRIME_CACHE environment
    variable when not given); the cache is validated against a digest of
    the root ordering.
    """
    if cache_path is None:
        cache_path = os.environ.get(CACHE_ENV) or os.path.join(
            os.path.expanduser("~"), ".cache", "polyprime", "e8_rank8.cache")
    if cache_path and os.path.exists(cache_path):
        cached = _load_cache(cache_path)
        if cached is not None:
            return cached
    records: list[SubsystemRecord] = []
    orbit_sizes: dict[int, int] = {}
    memb_rows: list[np.ndarray] = []
    for orbit_id, (rep, _) in enumerate(_orbit_reps()):
        orbit = enumerate_orbit(rep)
        orbit_sizes[orbit_id] = len(orbit)
        for member in orbit:
            grp = quotient_pi(member)
            if grp.free_rank != 0:
                raise RootSystemError("rank-8 subsystem with infinite Pi-quotient")
            records.append(SubsystemRecord(
                type_label=member.type_label,
                simple_roots=member.simple_roots,
                pi_invariants=grp.invariant_factors,
                orbit_id=orbit_id))
            row = np.zeros(240, dtype=bool)
            row[member.membership.astype(np.int64)] = True
            memb_rows.append(row)
    enum = Enumeration(records=records, orbit_sizes=orbit_sizes,
                       _membership=np.array(memb_rows))
    if cache_path:
        _save_cache(cache_path, enum)
    return enum


def _save_cache(path: str, enum: Enumeration) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    sys = build_root_system()
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(_CACHE_VERSION + "\n")
        fh.write("digest " + sys.digest() + "\n")
        for rec in enum.records:
            fh.write("{};{};{};{}\n".format(
                rec.type_label,
                ",".join(str(i) for i in rec.simple_roots),
                ",".join(str(f) for f in rec.pi_invariants),
                rec.orbit_id))
    os.replace(tmp, path)


class CacheDigestError(RuntimeError):
    """Cache was produced under a different root ordering; recompute by
    deleting the cache file."""


def _load_cache(path: str) -> Enumeration | None:
    sys = build_root_system()
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _CACHE_VERSION:
        return None
    if len(lines) < 2 or lines[1] != "digest " + sys.digest():
        raise CacheDigestError(f"stale cache digest in {path}")
    records = []
    orbit_sizes: dict[int, int] = {}
    for line in lines[2:]:
        if not line:
            continue
        label, simple_s, inv_s, orbit_s = line.split(";")
        simple = tuple(int(x) for x in simple_s.split(","))
        invs = tuple(int(x) for x in inv_s.split(",")) if inv_s else ()
        oid = int(orbit_s)
        records.append(SubsystemRecord(label, simple, invs, oid))
        orbit_sizes[oid] = orbit_sizes.get(oid, 0) + 1
    return Enumeration(records=records, orbit_sizes=orbit_sizes)


def _membership_matrix(records: list[SubsystemRecord]) -> np.ndarray:
    """(N, 240) membership flags, batched float solve with exact integer
    verification of the flagged rows."""
    sys = build_root_system()
    roots_f = sys.roots.astype(np.float64)
    n = len(records)
    out = np.zeros((n, 240), dtype=bool)
    bases = np.stack([sys.roots[list(rec.simple_roots)] for rec in records])
    chunk = 2048
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        inv = np.linalg.inv(bases[lo:hi].astype(np.float64))
        coeffs = np.einsum("rj,bjk->brk", roots_f, inv)
        cand = np.rint(coeffs)
        near = (np.abs(coeffs - cand) < 1e-8).all(axis=2)
        recon = np.einsum("brk,bkj->brj", cand, bases[lo:hi].astype(np.float64))
        exact = (recon == roots_f[None, :, :]).all(axis=2)
        out[lo:hi] = near & exact
    return out


def superlattices(sub: RootSubsystem, enum: Enumeration):
    """Indices of enumerated subsystems strictly containing `sub`."""
    m = enum.membership_matrix()
    contains = m[:, list(sub.simple_roots)].all(axis=1)
    row = np.zeros(240, dtype=bool)
    row[sub.membership.astype(np.int64)] = True
    equal = (m == row[None, :]).all(axis=1)
    return np.nonzero(contains & ~equal)[0]


def sublattices(sub: RootSubsystem, enum: Enumeration):
    """Indices of enumerated subsystems strictly contained in `sub`."""
    m = enum.membership_matrix()
    row = np.zeros(240, dtype=bool)
    row[sub.membership.astype(np.int64)] = True
    inside = ~(m & ~row[None, :]).any(axis=1)
    equal = (m == row[None, :]).all(axis=1)
    return np.nonzero(inside & ~equal)[0]


def weyl_order(label: str) -> int:
    """Order of the Weyl group of an irreducible-type label like 'A5'."""
    family, rank = label[0], int(label[1:])
    if family == "A":
        return math.factorial(rank + 1)
    if family == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if family == "E":
        return _WEYL_EXCEPTIONAL[rank]
    raise InvalidArgument(f"unknown type label {label}")


def weyl_order_product(type_label: str) -> int:
    out = 1
    for part in type_label.split("+"):
        out *= weyl_order(part)
    return out


W_E8 = 696729600


def oshima_count(type_label: str, sharp: int, out_order: int) -> int:
    """#O = (#) * #W(E8) / (#Out * #W_Lambda); rank 8 makes the
    orthogonal-complement Weyl factor 1, and the ambient multiplicity
    factor is 1 throughout."""
    w = weyl_order_product(type_label)
    num = sharp * W_E8
    den = out_order * w
    if num % den:
        raise InvalidArgument("count formula did not divide evenly")
    return num // den


def e6a1_z_ratio() -> Fraction:
    """Fraction of the E6+A1 orbit whose Pi-quotient is torsion free."""
    rep = subsystem_closure((0, 1, 2, 3, 4, 5, 7))
    if rep.type_label != "E6+A1":
        raise RootSystemError(f"unexpected type {rep.type_label}")
    orbit = enumerate_orbit(rep)
    free = 0
    for member in orbit:
        grp = quotient_pi(member)
        if grp.free_rank != 1:
            raise RootSystemError("rank-7 subsystem with wrong free rank")
        if not grp.invariant_factors:
            free += 1
    return Fraction(free, len(orbit))
