"""
src/polytope/lattice.py
Face lattices as coset posets: construction, axiom checks, flags and the
dualities of a self-dual polytope.
"""

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.groups.permgroup import bfs_tree, inverse, orbit_of
from src.polytope.systems import SelfDuality, SelfDualityReport, _System
from src.utils.errors import BudgetExceededError, DualityError
from src.utils.log import debug, log


# ── Lattice ───────────────────────────────────────────────────────────────────

@dataclass(eq=False)
class FaceLattice:
    """
    Proper faces of ranks 0..n-1 plus the implicit F_-1 and F_n.
    incidence[j] holds (face of rank j, face of rank j+1) pairs. When the
    lattice comes from a group, face_of[j][x] is the j-face whose coset
    contains the point x of the regular representation (-1 off the group).
    """

    rank: int
    f_vector: Tuple[int, ...]
    incidence: List[np.ndarray]
    face_of: Optional[List[np.ndarray]] = None
    reps: Optional[List[np.ndarray]] = None
    system: Optional[_System] = field(default=None, repr=False)

    @property
    def offsets(self) -> List[int]:
        return [sum(self.f_vector[:j]) for j in range(self.rank + 1)]

    @property
    def face_count(self) -> int:
        return sum(self.f_vector)

    def neighbours(self, j: int, upward: bool) -> List[np.ndarray]:
        """For each j-face, the incident faces of rank j+1 (upward) or j-1."""
        if upward:
            pairs, size = self.incidence[j], self.f_vector[j]
            src, dst = pairs[:, 0], pairs[:, 1]
        else:
            pairs, size = self.incidence[j - 1], self.f_vector[j]
            src, dst = pairs[:, 1], pairs[:, 0]
        order = np.argsort(src, kind="stable")
        bounds = np.searchsorted(src[order], np.arange(size + 1))
        dst = dst[order]
        return [dst[bounds[i]:bounds[i + 1]] for i in range(size)]

    def remove_incidence(self, j: int, a: int, b: int) -> "FaceLattice":
        pairs = self.incidence[j]
        keep = ~((pairs[:, 0] == a) & (pairs[:, 1] == b))
        incidence = list(self.incidence)
        incidence[j] = pairs[keep]
        return FaceLattice(self.rank, self.f_vector, incidence)

    def flags(self) -> np.ndarray:
        """All maximal chains of proper faces, one row per flag."""
        chains = np.arange(self.f_vector[0], dtype=np.int64).reshape(-1, 1)
        for j in range(self.rank - 1):
            pairs = self.incidence[j]
            order = np.argsort(pairs[:, 0], kind="stable")
            lower, upper = pairs[order, 0], pairs[order, 1]
            last = chains[:, -1]
            starts = np.searchsorted(lower, last, side="left")
            counts = np.searchsorted(lower, last, side="right") - starts
            total = int(counts.sum())
            rows = np.repeat(np.arange(len(chains)), counts)
            within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            chains = np.column_stack([chains[rows], upper[np.repeat(starts, counts) + within]])
        return chains

    def count_flags(self) -> int:
        counts = np.ones(self.f_vector[0], dtype=np.int64)
        for j in range(self.rank - 1):
            nxt = np.zeros(self.f_vector[j + 1], dtype=np.int64)
            pairs = self.incidence[j]
            np.add.at(nxt, pairs[:, 1], counts[pairs[:, 0]])
            counts = nxt
        return int(counts.sum())

    def export_lines(self) -> List[str]:
        lines = [f"rank {self.rank}", "f_vector " + " ".join(map(str, self.f_vector))]
        for j, pairs in enumerate(self.incidence):
            lines.append(f"incidence {j} {j + 1} {len(pairs)}")
            lines.extend(f"{a} {b}" for a, b in pairs.tolist())
        return lines


def _component_minima(perms: Sequence[np.ndarray], degree: int) -> np.ndarray:
    """Label each point with the least point of its orbit under <perms>."""
    labels = np.arange(degree, dtype=np.int64)
    invs = [inverse(p) for p in perms]
    while True:
        before = labels
        for p, q in zip(perms, invs):
            labels = np.minimum(labels, labels[p])
            labels = np.minimum(labels, labels[q])
        while True:
            jumped = labels[labels]
            if np.array_equal(jumped, labels):
                break
            labels = jumped
        if np.array_equal(labels, before):
            return labels


def build_face_lattice(sys: _System, face_budget: int = 100_000) -> FaceLattice:
    """Faces of rank j are the right cosets of the base j-face stabiliser."""
    n = sys.rank
    points = sys.points
    face_of, reps = [], []
    for j in range(n):
        perms = [sys.rep.left_perm(w) for w in sys.stabilizer_words(j)]
        labels = _component_minima(perms, sys.degree) if perms else np.arange(sys.degree)
        lab = labels[points]
        r = np.unique(lab)
        if r.size > face_budget:
            raise BudgetExceededError(f"rank-{j} faces ({r.size})", face_budget)
        fo = np.full(sys.degree, -1, dtype=np.int64)
        fo[points] = np.searchsorted(r, lab)
        face_of.append(fo)
        reps.append(r)
    incidence = []
    for j in range(n - 1):
        pairs = np.column_stack([face_of[j][points], face_of[j + 1][points]])
        incidence.append(np.unique(pairs, axis=0))
    f_vector = tuple(int(r.size) for r in reps)
    log("Lattice", f"f-vector {f_vector}")
    return FaceLattice(n, f_vector, incidence, face_of, reps, sys)


# ── Validation ────────────────────────────────────────────────────────────────

@dataclass
class ValidationReport:
    diamond: bool
    chains: bool
    flag_connected: bool
    strongly_flag_connected: bool
    sampled: bool
    flag_count: int
    violation: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.diamond and self.chains and self.flag_connected and self.strongly_flag_connected

    def to_lines(self) -> List[str]:
        lines = [f"diamond={str(self.diamond).lower()}", f"chains={str(self.chains).lower()}",
                 f"flag_connected={str(self.flag_connected).lower()}",
                 f"strongly_flag_connected={str(self.strongly_flag_connected).lower()}",
                 f"sections_sampled={str(self.sampled).lower()}", f"flags={self.flag_count}"]
        if self.violation:
            lines.append(f"violation={self.violation}")
        return lines


def _check_diamond(lat: FaceLattice) -> Optional[str]:
    n = lat.rank
    below_edges = np.bincount(lat.incidence[0][:, 1], minlength=lat.f_vector[1]) if n > 1 else None
    if below_edges is not None:
        bad = np.flatnonzero(below_edges != 2)
        if bad.size:
            e = int(bad[0])
            return f"edge {e} has {int(below_edges[e])} vertices"
    if n > 1:
        above = np.bincount(lat.incidence[n - 2][:, 0], minlength=lat.f_vector[n - 2])
        bad = np.flatnonzero(above != 2)
        if bad.size:
            r = int(bad[0])
            return f"{n - 2}-face {r} lies in {int(above[r])} facets"
    for j in range(1, n - 1):
        down = lat.neighbours(j, upward=False)
        up = lat.neighbours(j, upward=True)
        width = lat.f_vector[j + 1]
        keys = [(d[:, None] * width + u[None, :]).ravel() for d, u in zip(down, up) if d.size and u.size]
        if not keys:
            continue
        found, counts = np.unique(np.concatenate(keys), return_counts=True)
        bad = np.flatnonzero(counts != 2)
        if bad.size:
            a, c = divmod(int(found[bad[0]]), width)
            return f"{j - 1}-face {a} and {j + 1}-face {c} have {int(counts[bad[0]])} faces of rank {j} between them"
    return None


def _check_chains(lat: FaceLattice) -> Optional[str]:
    n = lat.rank
    for j in range(n):
        if j > 0:
            has_lower = np.bincount(lat.incidence[j - 1][:, 1], minlength=lat.f_vector[j]) > 0
            if not has_lower.all():
                return f"{j}-face {int(np.flatnonzero(~has_lower)[0])} has no face of rank {j - 1} below it"
        if j < n - 1:
            has_upper = np.bincount(lat.incidence[j][:, 0], minlength=lat.f_vector[j]) > 0
            if not has_upper.all():
                return f"{j}-face {int(np.flatnonzero(~has_upper)[0])} has no face of rank {j + 1} above it"
    return None


def _adjacency_edges(flags: np.ndarray, i: int) -> np.ndarray:
    """Pairs of flags differing only in rank i."""
    others = np.delete(flags, i, axis=1)
    order = np.lexsort(others.T[::-1])
    sorted_others = others[order]
    same = np.all(sorted_others[1:] == sorted_others[:-1], axis=1)
    return np.column_stack([order[:-1][same], order[1:][same]])


def _components(count: int, edges: np.ndarray) -> np.ndarray:
    labels = np.arange(count, dtype=np.int64)
    if edges.size == 0:
        return labels
    u, v = edges[:, 0], edges[:, 1]
    while True:
        before = labels.copy()
        m = np.minimum(labels[u], labels[v])
        np.minimum.at(labels, u, m)
        np.minimum.at(labels, v, m)
        while True:
            jumped = labels[labels]
            if np.array_equal(jumped, labels):
                break
            labels = jumped
        if np.array_equal(labels, before):
            return labels


def _group_keys(flags: np.ndarray, ranks: Sequence[int]) -> np.ndarray:
    if not ranks:
        return np.zeros(len(flags), dtype=np.int64)
    _, keys = np.unique(flags[:, list(ranks)], axis=0, return_inverse=True)
    return keys.ravel()


def validate_polytope(lat: FaceLattice, exhaustive_flag_limit: int = 100_000,
                      flag_samples: int = 200, seed: int = 1) -> ValidationReport:
    """
    Checks the diamond condition, that every maximal chain meets every rank,
    and strong flag connectivity: for each set T of ranks, the flags sharing
    their faces in T stay connected through adjacencies outside T.
    """
    violation = _check_diamond(lat)
    diamond = violation is None
    chain_violation = _check_chains(lat)
    chains = chain_violation is None
    violation = violation or chain_violation

    flags = lat.flags()
    n = lat.rank
    adjacency = [_adjacency_edges(flags, i) for i in range(n)]
    whole = _components(len(flags), np.concatenate(adjacency))
    flag_connected = np.unique(whole).size == 1
    if not flag_connected and violation is None:
        violation = "flag graph is disconnected"

    strong = flag_connected
    sampled = len(flags) > exhaustive_flag_limit
    proper_subsets = [t for r in range(1, n - 1) for t in itertools.combinations(range(n), r)]
    if strong and not sampled:
        for t in proper_subsets:
            edges = np.concatenate([adjacency[i] for i in range(n) if i not in t])
            comps = _components(len(flags), edges)
            keys = _group_keys(flags, t)
            if np.unique(comps).size != np.unique(keys).size:
                strong = False
                violation = violation or f"flags through a chain of ranks {list(t)} are disconnected"
                break
    elif strong:
        rng = random.Random(seed)
        for _ in range(flag_samples):
            t = rng.choice(proper_subsets)
            f = rng.randrange(len(flags))
            members = np.flatnonzero(np.all(flags[:, list(t)] == flags[f, list(t)], axis=1))
            local = {int(x): k for k, x in enumerate(members)}
            edges = [e for i in range(n) if i not in t for e in adjacency[i].tolist()
                     if e[0] in local and e[1] in local]
            local_edges = np.array([[local[a], local[b]] for a, b in edges], dtype=np.int64).reshape(-1, 2)
            if np.unique(_components(len(members), local_edges)).size != 1:
                strong = False
                violation = violation or f"flags through flag {f} on ranks {list(t)} are disconnected"
                break
    log("Lattice", f"validated {len(flags)} flags (sections {'sampled' if sampled else 'exhaustive'})")
    return ValidationReport(diamond, chains, flag_connected, strong, sampled, len(flags), violation)


# ── Dualities ─────────────────────────────────────────────────────────────────

@dataclass
class DualityReport:
    kind: SelfDuality
    polarity_exists: bool = False
    order_histogram: Dict[int, int] = field(default_factory=dict)
    square_preserves_order: bool = True

    @property
    def total(self) -> int:
        return sum(self.order_histogram.values())

    def to_lines(self) -> List[str]:
        lines = [f"kind={self.kind.value}", f"polarity={str(self.polarity_exists).lower()}"]
        lines += [f"order.{k}={v}" for k, v in sorted(self.order_histogram.items())]
        return lines


def face_image_map(lat: FaceLattice, rank: int, perm: np.ndarray) -> np.ndarray:
    """Where right multiplication by the element with point-permutation `perm` sends each face."""
    return lat.face_of[rank][perm[lat.reps[rank]]]


def _left_coset_faces(lat: FaceLattice, rank: int, right_gens: Sequence[np.ndarray]) -> np.ndarray:
    """Faces of `rank` whose point set is closed under right multiplication by `right_gens`."""
    pts = lat.system.points
    fo = lat.face_of[rank]
    bad = np.zeros(lat.f_vector[rank], dtype=bool)
    for g in right_gens:
        moved = fo[g[pts]] != fo[pts]
        bad[fo[pts][moved]] = True
    return np.flatnonzero(~bad)


def base_duality(lat: FaceLattice, witness: SelfDualityReport) -> np.ndarray:
    """
    The duality sending the coset of the j-face stabiliser S_j through g to
    c_j.phi(g), where c_j picks the (n-1-j)-face that is a left coset of
    phi(S_j). Returned as a permutation of all proper faces.
    """
    sys = lat.system
    rep = sys.rep
    labels = witness.witness.labels
    n = lat.rank
    offsets = lat.offsets

    candidates, phi_stab = [], []
    for j in range(n):
        gens = []
        for w in sys.stabilizer_words(j):
            gens.append(rep.perm(rep.word_of(int(labels[rep.point(w)]))))
        phi_stab.append(gens)
        candidates.append(_left_coset_faces(lat, n - 1 - j, gens))

    incident = [set(map(tuple, pairs.tolist())) for pairs in lat.incidence]

    def flag_choices(j, chosen):
        if j == n:
            yield list(chosen)
            return
        for face in candidates[j].tolist():
            if j > 0 and (face, chosen[-1]) not in incident[n - 1 - j]:
                continue
            yield from flag_choices(j + 1, chosen + [face])

    for choice in flag_choices(0, []):
        D = np.empty(lat.face_count, dtype=np.int64)
        consistent = True
        for j, face in enumerate(choice):
            k = n - 1 - j
            c = int(lat.reps[k][face])
            left = rep.left_of_point(c)
            pts = sys.points
            image_faces = lat.face_of[k][left[labels[pts]]]
            per_face = np.full(lat.f_vector[j], -1, dtype=np.int64)
            per_face[lat.face_of[j][pts]] = image_faces
            if np.any(per_face[lat.face_of[j][pts]] != image_faces) or np.any(per_face < 0):
                consistent = False
                break
            D[offsets[j]:offsets[j] + lat.f_vector[j]] = offsets[k] + per_face
        if not consistent or not _reverses_order(lat, D):
            continue
        return D
    raise DualityError("no choice of image flag gives an order-reversing duality")


def _reverses_order(lat: FaceLattice, D: np.ndarray) -> bool:
    n = lat.rank
    offsets = lat.offsets
    for j, pairs in enumerate(lat.incidence):
        k = n - 2 - j
        lower = D[offsets[j + 1] + pairs[:, 1]] - offsets[k]
        upper = D[offsets[j] + pairs[:, 0]] - offsets[k + 1]
        target = lat.incidence[k]
        width = lat.f_vector[k + 1]
        if not np.all(np.isin(lower * width + upper, target[:, 0] * width + target[:, 1])):
            return False
    if np.unique(D).size != D.size:
        return False
    return True


def _perm_order(q: np.ndarray, limit: int = 10_000) -> int:
    ident = np.arange(q.size)
    cur, k = q, 1
    while not np.array_equal(cur, ident):
        cur = q[cur]
        k += 1
        if k > limit:
            return math.lcm(*_cycle_lengths(q))
    return k


def _cycle_lengths(q: np.ndarray) -> List[int]:
    seen = np.zeros(q.size, dtype=bool)
    out = []
    for s in range(q.size):
        if not seen[s]:
            length, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = q[x]
                length += 1
            out.append(length)
    return out


def _duality_order(q: np.ndarray) -> int:
    """Odd powers of a duality are dualities, so only even powers can be trivial."""
    return 2 * _perm_order(q[q])


def enumerate_dualities(lat: FaceLattice, witness: SelfDualityReport) -> DualityReport:
    """
    Orders of every duality D.g, g in the group, streamed along a spanning
    tree so that only one root-to-node path of face permutations is held.
    """
    if witness.kind == SelfDuality.NOT_SELF_DUAL:
        return DualityReport(SelfDuality.NOT_SELF_DUAL)
    sys = lat.system
    n = lat.rank
    D = base_duality(lat, witness)
    offsets = lat.offsets
    squared = D[D]
    square_ok = bool(np.all(np.searchsorted(offsets[1:], squared, side="right") ==
                            np.searchsorted(offsets[1:], np.arange(D.size), side="right")))

    gen_face_perms = []
    for g in sys.gens:
        gen_face_perms.append(np.concatenate([offsets[j] + face_image_map(lat, j, g) for j in range(n)]))

    order, parent, via = bfs_tree(0, sys.gens, sys.degree)
    children: Dict[int, List[int]] = {}
    for x in order[1:].tolist():
        children.setdefault(int(parent[x]), []).append(x)

    histogram: Counter = Counter()
    stack = [(0, np.arange(D.size, dtype=np.int64))]
    visited = 0
    while stack:
        x, action = stack.pop()
        histogram[_duality_order(action[D])] += 1
        visited += 1
        for child in children.get(x, ()):
            stack.append((child, gen_face_perms[int(via[child])][action]))
        if visited % 5000 == 0:
            debug("Dualities", f"{visited}/{order.size}")
    hist = dict(sorted(histogram.items()))
    log("Dualities", f"{visited} dualities, orders {hist}")
    return DualityReport(witness.kind, hist.get(2, 0) > 0, hist, square_ok)


# ── Normal subgroups of small order ───────────────────────────────────────────

@dataclass
class NormalSubgroupReport:
    order: int
    quotient_order: int
    class_points: List[int]


def normal_closure_scan(sys: _System, max_order: int = 27) -> Optional[NormalSubgroupReport]:
    """
    Smallest normal subgroup generated by one conjugacy class of size
    below max_order, found by closing each element under conjugation by
    the generators.
    """
    rep = sys.rep
    conj = []
    for w in sys.words:
        left_inv = rep.left_perm(tuple(-x for x in reversed(w)))
        conj.append(rep.perm(w)[left_inv])
    best: Optional[NormalSubgroupReport] = None
    skip = np.zeros(sys.degree, dtype=bool)
    skip[0] = True
    for x in sys.points.tolist():
        if skip[x]:
            continue
        cls, frontier = {x}, [x]
        while frontier and len(cls) < max_order:
            y = frontier.pop()
            for c in conj:
                z = int(c[y])
                if z not in cls:
                    cls.add(z)
                    frontier.append(z)
        if len(cls) >= max_order:
            continue
        perms = [rep.perm(rep.word_of(c)) for c in sorted(cls)]
        members = orbit_of(0, perms, sys.degree)
        if members.size >= max_order or sys.order % members.size:
            continue
        skip[members] = True
        if best is None or members.size < best.order:
            best = NormalSubgroupReport(int(members.size), sys.order // int(members.size), sorted(cls))
    return best
