"""
src/groups/permgroup.py
Permutation groups on {0..n-1}: Schreier-Sims stabiliser chains, orbits,
membership, subgroup intersection and extension of generator maps.

Permutations are numpy integer arrays; compose(p, q) applies p first.
"""

import math
import random
import re
from typing import Iterable, List, Optional, Sequence

import numpy as np

from src.utils.errors import BudgetExceededError, InvariantError
from src.utils.log import debug

Perm = np.ndarray


# ── Permutation helpers ───────────────────────────────────────────────────────

def identity(n: int) -> Perm:
    return np.arange(n, dtype=np.int64)


def compose(p: Perm, q: Perm) -> Perm:
    return q[p]


def inverse(p: Perm) -> Perm:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def is_identity(p: Perm) -> bool:
    return bool(np.array_equal(p, np.arange(len(p))))


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inverse(p), -k
    result = identity(len(p))
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def cycle_lengths(p: Perm) -> List[int]:
    seen = np.zeros(len(p), dtype=bool)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        lengths.append(length)
    return lengths


def element_order(p: Perm) -> int:
    return math.lcm(*cycle_lengths(p)) if len(p) else 1


def parse_perm(text: str, degree: int) -> Perm:
    """Cycle notation '(0 1 2)(3 4)' or an image list '[1, 2, 0]'."""
    text = text.strip()
    if text.startswith("["):
        images = [int(t) for t in re.findall(r"-?\d+", text)]
        p = np.array(images, dtype=np.int64)
        if len(p) != degree or sorted(images) != list(range(degree)):
            raise ValueError(f"not a permutation of degree {degree}: {text}")
        return p
    p = identity(degree)
    for cycle in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) for t in re.split(r"[\s,]+", cycle.strip()) if t]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    if len(set(p.tolist())) != degree:
        raise ValueError(f"cycles overlap: {text}")
    return p


def format_perm(p: Perm) -> str:
    seen = np.zeros(len(p), dtype=bool)
    cycles = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            continue
        cyc, x = [], start
        while not seen[x]:
            seen[x] = True
            cyc.append(str(int(x)))
            x = p[x]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "()"


def orbit_of(point: int, gens: Sequence[Perm], degree: int) -> np.ndarray:
    """Orbit in BFS order."""
    seen = np.zeros(degree, dtype=bool)
    seen[point] = True
    order = [np.array([point], dtype=np.int64)]
    frontier = order[0]
    while frontier.size:
        nxt = []
        for g in gens:
            ys = g[frontier]
            ys = np.unique(ys[~seen[ys]])
            if ys.size:
                seen[ys] = True
                nxt.append(ys)
        frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        if frontier.size:
            order.append(frontier)
    return np.concatenate(order)


def bfs_tree(point: int, gens: Sequence[Perm], degree: int):
    """
    Spanning tree of the orbit of `point`: (order, parent, via) where
    order lists the orbit breadth-first and x = gens[via[x]] applied to parent[x].
    """
    parent = np.full(degree, -1, dtype=np.int64)
    via = np.full(degree, -1, dtype=np.int64)
    seen = np.zeros(degree, dtype=bool)
    seen[point] = True
    layers = [np.array([point], dtype=np.int64)]
    frontier = layers[0]
    while frontier.size:
        nxt = []
        for gi, g in enumerate(gens):
            ys = g[frontier]
            fresh = ~seen[ys]
            if not fresh.any():
                continue
            ys, idx = np.unique(ys[fresh], return_index=True)
            parent[ys] = frontier[fresh][idx]
            via[ys] = gi
            seen[ys] = True
            nxt.append(ys)
        frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        if frontier.size:
            layers.append(frontier)
    return np.concatenate(layers), parent, via


# ── Stabiliser chain ──────────────────────────────────────────────────────────

class _Level:
    """One level of the chain: a base point, its strong generators, a Schreier tree."""

    def __init__(self, basepoint: int, degree: int):
        self.basepoint = basepoint
        self.degree = degree
        self.gens: List[Perm] = []
        self.invs: List[Perm] = []
        self.tree = np.full(degree, -1, dtype=np.int64)
        self.tree[basepoint] = -2
        self.checked = set()

    def add(self, g: Perm, ginv: Perm) -> None:
        self.gens.append(g)
        self.invs.append(ginv)

    def rebuild(self) -> None:
        """Breadth-first tree: tree[y] = index of the generator that first reached y."""
        tree = np.full(self.degree, -1, dtype=np.int64)
        tree[self.basepoint] = -2
        frontier = np.array([self.basepoint], dtype=np.int64)
        while frontier.size:
            nxt = []
            for gi, g in enumerate(self.gens):
                ys = g[frontier]
                ys = np.unique(ys[tree[ys] == -1])
                if ys.size:
                    tree[ys] = gi
                    nxt.append(ys)
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
        self.tree = tree

    @property
    def orbit(self) -> np.ndarray:
        return np.flatnonzero(self.tree != -1)

    @property
    def orbit_size(self) -> int:
        return int(np.count_nonzero(self.tree != -1))

    def to_base(self, point: int) -> Perm:
        """An element of the level group taking `point` to the base point."""
        path = []
        x = point
        while x != self.basepoint:
            gi = int(self.tree[x])
            path.append(gi)
            x = int(self.invs[gi][x])
        result = identity(self.degree)
        for gi in path:
            result = compose(result, self.invs[gi])
        return result


class PermGroup:
    """
    A permutation group given by generators. The stabiliser chain is built
    on first use; with `known_order` a randomised Schreier-Sims stops as soon
    as the chain reaches that order, otherwise every Schreier generator is
    sifted.
    """

    def __init__(self, gens: Sequence[Perm], degree: int = None, known_order: int = None,
                 base: Sequence[int] = (), seed: int = 1):
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group with no generators")
            degree = len(gens[0])
        self.degree = degree
        self.generators = gens
        self.gens = [g for g in gens if not is_identity(g)]
        self.known_order = known_order
        self.base_prefix = list(dict.fromkeys(int(b) for b in base))
        self.seed = seed
        self._levels: Optional[List[_Level]] = None

    @classmethod
    def from_strong_generators(cls, gens: Sequence[Perm], base: Sequence[int], degree: int) -> "PermGroup":
        """Chain from a base and a strong generating set relative to it."""
        group = cls(gens, degree=degree, base=base)
        group._levels = []
        for i, b in enumerate(group.base_prefix):
            lv = _Level(b, degree)
            for g in group.gens:
                if all(g[c] == c for c in group.base_prefix[:i]):
                    lv.add(g, inverse(g))
            lv.rebuild()
            group._levels.append(lv)
        group.known_order = group.order()
        return group

    # -- chain construction --

    @property
    def levels(self) -> List[_Level]:
        if self._levels is None:
            self._build()
        return self._levels

    def _new_level(self, h: Perm) -> _Level:
        used = {lv.basepoint for lv in self._levels}
        for b in self.base_prefix:
            if b not in used:
                return _Level(b, self.degree)
        moved = np.flatnonzero(h != np.arange(self.degree))
        return _Level(int(moved[0]), self.degree)

    def _sift(self, g: Perm, start: int = 0):
        """Returns (residue, level index where sifting stopped)."""
        for i in range(start, len(self._levels)):
            lv = self._levels[i]
            pt = int(g[lv.basepoint])
            if lv.tree[pt] == -1:
                return g, i
            if pt != lv.basepoint:
                g = compose(g, lv.to_base(pt))
        return g, len(self._levels)

    def _add_strong(self, h: Perm, upto: int, start: int = 0) -> None:
        """h fixes the base points of levels < upto; add it to levels start..upto."""
        if upto == len(self._levels):
            self._levels.append(self._new_level(h))
        hinv = inverse(h)
        for i in range(start, upto + 1):
            lv = self._levels[i]
            lv.add(h, hinv)
            lv.rebuild()
            lv.checked.clear()

    def _build(self) -> None:
        self._levels = []
        for b in self.base_prefix:
            self._levels.append(_Level(b, self.degree))
        for g in self.gens:
            h, j = self._sift(g)
            if not is_identity(h):
                self._add_strong(h, j)
        if self.known_order is not None:
            self._build_random()
        else:
            self._build_deterministic()
        order = self.order()
        if self.known_order is not None and order != self.known_order:
            raise InvariantError(f"chain order {order} differs from the known order {self.known_order}")
        debug("Chain", f"degree {self.degree}: order {order}, base length {len(self._levels)}")

    def _build_random(self) -> None:
        rng = _ProductReplacer(self.gens, self.degree, self.seed)
        attempts = 0
        while self.order() < self.known_order:
            h, j = self._sift(rng.next())
            if not is_identity(h):
                self._add_strong(h, j)
            attempts += 1
            if attempts > 100_000:
                raise InvariantError(f"random Schreier-Sims stalled below order {self.known_order}")

    def _build_deterministic(self) -> None:
        i = len(self._levels) - 1
        while i >= 0:
            lv = self._levels[i]
            restart = None
            for x in lv.orbit.tolist():
                for gi in range(len(lv.gens)):
                    key = (x, id(lv.gens[gi]))
                    if key in lv.checked:
                        continue
                    lv.checked.add(key)
                    y = int(lv.gens[gi][x])
                    if lv.tree[y] == gi and int(lv.invs[gi][y]) == x:
                        continue
                    u = inverse(lv.to_base(x))
                    schreier = compose(compose(u, lv.gens[gi]), lv.to_base(y))
                    h, j = self._sift(schreier, i + 1)
                    if not is_identity(h):
                        self._add_strong(h, j, start=i + 1)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = min(restart, len(self._levels) - 1)
                continue
            i -= 1

    # -- queries --

    def order(self) -> int:
        total = 1
        for lv in (self._levels if self._levels is not None else self.levels):
            total *= lv.orbit_size
        return total

    @property
    def base(self) -> List[int]:
        return [lv.basepoint for lv in self.levels]

    def contains(self, p: Perm) -> bool:
        self.levels
        h, _ = self._sift(np.asarray(p, dtype=np.int64))
        return is_identity(h)

    def orbit(self, point: int) -> np.ndarray:
        return orbit_of(point, self.gens, self.degree)

    def is_transitive(self) -> bool:
        return self.orbit(0).size == self.degree

    def level(self, k: int) -> "PermGroup":
        """Pointwise stabiliser of the first k base points, sharing this chain."""
        levels = self.levels[k:]
        gens = levels[0].gens if levels else []
        sub = PermGroup(gens, degree=self.degree)
        sub._levels = levels
        sub.known_order = sub.order()
        return sub

    def transversal(self, k: int) -> List[Perm]:
        """Coset representatives u_x (base point -> x) for level k."""
        lv = self.levels[k]
        return [inverse(lv.to_base(x)) for x in lv.orbit.tolist()]

    def transversal_element(self, k: int, point: int) -> Optional[Perm]:
        lv = self.levels[k]
        if lv.tree[point] == -1:
            return None
        return inverse(lv.to_base(point))

    def elements(self, budget: int = 1_000_000) -> List[Perm]:
        if self.order() > budget:
            raise BudgetExceededError("element enumeration", budget)
        elems = [identity(self.degree)]
        for k in range(len(self.levels) - 1, -1, -1):
            reps = self.transversal(k)
            elems = [compose(e, u) for e in elems for u in reps]
        return elems

    def random_element(self) -> Perm:
        return _ProductReplacer(self.gens, self.degree, self.seed).next()

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, gens={len(self.gens)})"


class _ProductReplacer:
    """Product replacement: a slot vector and an accumulator of random products."""

    def __init__(self, gens: Sequence[Perm], degree: int, seed: int):
        self.rng = random.Random(seed)
        slots = list(gens) or [identity(degree)]
        while len(slots) < 10:
            slots = slots + list(gens or [identity(degree)])
        self.slots = slots[:max(10, len(gens))]
        self.acc = identity(degree)
        for _ in range(50):
            self.next()

    def next(self) -> Perm:
        n = len(self.slots)
        i = self.rng.randrange(n)
        j = self.rng.randrange(n - 1)
        if j >= i:
            j += 1
        other = self.slots[j] if self.rng.random() < 0.5 else inverse(self.slots[j])
        if self.rng.random() < 0.5:
            self.slots[i] = compose(self.slots[i], other)
        else:
            self.slots[i] = compose(other, self.slots[i])
        self.acc = compose(self.acc, self.slots[i])
        return self.acc


# ── Module-level operations ───────────────────────────────────────────────────

def build_chain(gens: Sequence[Perm], known_order: int = None, base: Sequence[int] = (),
                degree: int = None, seed: int = 1) -> PermGroup:
    group = PermGroup(gens, degree=degree, known_order=known_order, base=base, seed=seed)
    group.levels
    return group


def order(group: PermGroup) -> int:
    return group.order()


def membership(p: Perm, group: PermGroup) -> bool:
    return group.contains(p)


def orbit(point: int, group: PermGroup) -> np.ndarray:
    return group.orbit(point)


def _semiregular_at_zero(group: PermGroup) -> bool:
    return group.orbit(0).size == group.order()


def _generate_greedily(candidates: Iterable[Perm], degree: int, target: int) -> PermGroup:
    gens: List[Perm] = []
    current = PermGroup([], degree=degree, known_order=1)
    for c in candidates:
        if current.order() >= target:
            break
        if not current.contains(c):
            gens.append(c)
            current = build_chain(gens)
    return current


def intersect(a: PermGroup, b: PermGroup, budget: int = 1_000_000) -> PermGroup:
    """
    Subgroup intersection. Subgroups of a regular representation meet in
    the common part of their orbits of point 0; anything else enumerates the
    smaller group and keeps the members of the larger one.
    """
    if a.degree != b.degree:
        raise ValueError("groups act on different degrees")
    if _semiregular_at_zero(a) and _semiregular_at_zero(b):
        common = np.intersect1d(a.orbit(0), b.orbit(0))
        based = build_chain(a.gens, known_order=a.order(), base=(0,), degree=a.degree) if a.gens else a
        gens: List[Perm] = []
        reached = {0}
        ok = True
        for x in common.tolist():
            if x in reached:
                continue
            u = based.transversal_element(0, x)
            if u is None or not b.contains(u):
                ok = False
                break
            gens.append(u)
            reached = set(orbit_of(0, gens, a.degree).tolist())
        if ok and len(reached) == common.size:
            return PermGroup(gens, degree=a.degree, known_order=common.size)
    small, large = (a, b) if a.order() <= b.order() else (b, a)
    if small.order() > budget:
        raise BudgetExceededError("subgroup intersection", budget)
    members = [g for g in small.elements(budget) if large.contains(g)]
    result = _generate_greedily(members, a.degree, len(members))
    if result.order() != len(members):
        raise InvariantError("intersection is not closed under products")
    return result


# ── Extending generator maps ──────────────────────────────────────────────────

class GenMap:
    """
    A homomorphism determined by generator images. On groups acting
    regularly on the orbit of 0 it is a point labelling; otherwise it
    reads images off the fiber-product group.
    """

    def __init__(self, group: PermGroup, images: Sequence[Perm], labels: np.ndarray = None,
                 fiber: PermGroup = None):
        self.group = group
        self.sources = group.generators
        self.images = [np.asarray(y, dtype=np.int64) for y in images]
        self.labels = labels
        self.fiber = fiber
        self._image_group: Optional[PermGroup] = None
        self._based: Optional[PermGroup] = None

    def apply_point(self, x: int) -> int:
        if self.labels is None:
            raise ValueError("point labels exist only for regular actions")
        return int(self.labels[x])

    def apply(self, p: Perm) -> Perm:
        p = np.asarray(p, dtype=np.int64)
        if self.labels is not None:
            if self._based is None:
                self._based = build_chain(self.group.gens, known_order=self.group.order(),
                                          base=(0,), degree=self.group.degree)
            return self._based.transversal_element(0, int(self.labels[p[0]]))
        n = self.group.degree
        g = np.concatenate([p, np.arange(n, self.fiber.degree)])
        residue, _ = self.fiber._sift(g)
        return inverse(residue[n:] - n)

    def image_group(self) -> PermGroup:
        if self._image_group is None:
            self._image_group = build_chain(self.images, degree=len(self.images[0]))
        return self._image_group

    def is_automorphism(self) -> bool:
        if self.labels is not None:
            reached = self.labels[self.group.orbit(0)]
            return np.unique(reached).size == reached.size
        if len(self.images[0]) != self.group.degree:
            return False
        if not all(self.group.contains(y) for y in self.images):
            return False
        return self.image_group().order() == self.group.order()

    def is_involution(self) -> bool:
        """The map squares to the identity (checked on generators)."""
        if self.labels is not None:
            pts = self.group.orbit(0)
            return bool(np.array_equal(self.labels[self.labels[pts]], pts))
        return all(np.array_equal(self.apply(y), x) for x, y in zip(self.sources, self.images))


def _label_regular(sources: Sequence[Perm], images: Sequence[Perm], degree: int) -> Optional[np.ndarray]:
    """Label the Cayley graph on the orbit of 0; None on the first clash."""
    labels = np.full(degree, -1, dtype=np.int64)
    labels[0] = 0
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = []
        for x, y in zip(sources, images):
            nx, ny = x[frontier], y[labels[frontier]]
            known = labels[nx] != -1
            if np.any(labels[nx[known]] != ny[known]):
                return None
            order_ = np.argsort(nx[~known], kind="stable")
            xs, ys = nx[~known][order_], ny[~known][order_]
            dup = xs[1:] == xs[:-1]
            if np.any(ys[1:][dup] != ys[:-1][dup]):
                return None
            fresh, idx = np.unique(xs, return_index=True)
            labels[fresh] = ys[idx]
            if fresh.size:
                nxt.append(fresh)
        frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
    return labels


def extend_generator_map(group: PermGroup, images: Sequence[Perm]) -> Optional[GenMap]:
    """
    Decide whether group.generators[i] -> images[i] extends to a
    homomorphism. Returns the witness, or None when it does not.
    """
    sources = group.generators
    images = [np.asarray(y, dtype=np.int64) for y in images]
    if len(sources) != len(images):
        raise ValueError("need one image per generator")
    n = group.degree

    if len(images[0]) == n and _semiregular_at_zero(group) and all(group.contains(y) for y in images):
        labels = _label_regular(sources, images, n)
        return None if labels is None else GenMap(group, images, labels=labels)

    m = len(images[0])
    pairs = [np.concatenate([x, y + n]) for x, y in zip(sources, images)]
    fiber = build_chain(pairs, base=group.base, degree=n + m)
    if fiber.order() != group.order():
        return None
    return GenMap(group, images, fiber=fiber)
