"""
src/polytope/systems.py
Rotation and reflection systems of abstract polytopes, read off a regular
representation: smoothness, intersection conditions, orientation and
self-duality.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.groups.fpgroup import Presentation, RegularRep, Word, free_reduce, invert_word
from src.groups.permgroup import GenMap, PermGroup, extend_generator_map, orbit_of
from src.utils.errors import IntersectionConditionError, NonSmoothError, PolymedialError
from src.utils.log import log


class Orientation(str, Enum):
    DIRECTLY_REGULAR = "directly-regular"
    CHIRAL = "chiral"
    NON_ORIENTABLY_REGULAR = "non-orientably-regular"


class SelfDuality(str, Enum):
    NOT_SELF_DUAL = "not-self-dual"
    PROPERLY = "properly-self-dual"
    IMPROPERLY = "improperly-self-dual"


@dataclass(eq=False)
class _System:
    """Shared plumbing: distinguished generators given as words in an ambient regular rep."""

    rep: RegularRep
    words: List[Word]
    schlafli: Tuple[int, ...]
    source: Presentation
    points: np.ndarray = field(init=False, repr=False)
    gens: List[np.ndarray] = field(init=False, repr=False)
    group: PermGroup = field(init=False, repr=False)

    def __post_init__(self):
        self.gens = [self.rep.perm(w) for w in self.words]
        self.points = np.sort(orbit_of(0, self.gens, self.rep.degree))
        self.group = PermGroup(self.gens, degree=self.rep.degree, known_order=int(self.points.size))

    @property
    def order(self) -> int:
        return int(self.points.size)

    @property
    def degree(self) -> int:
        return self.rep.degree

    def word(self, *indices: int) -> Word:
        """Product of distinguished generators; negative index = inverse, 1-based."""
        out: Word = ()
        for i in indices:
            w = self.words[abs(i) - 1]
            out = free_reduce(out + (w if i > 0 else invert_word(w)))
        return out

    def element_order(self, word: Word) -> int:
        x, k = self.rep.point(word), 1
        while x != 0:
            x = self.rep.point(word, start=x)
            k += 1
        return k

    def subgroup_points(self, words: Sequence[Word]) -> np.ndarray:
        """Elements of the subgroup generated by `words`, as points of the rep."""
        perms = [self.rep.perm(w) for w in words]
        return np.sort(orbit_of(0, perms, self.degree)) if perms else np.array([0])

    def contains_point(self, x: int) -> bool:
        i = np.searchsorted(self.points, x)
        return bool(i < self.points.size and self.points[i] == x)


@dataclass(eq=False)
class RotationSystem(_System):
    """sigma_1..sigma_{n-1}; words[i] is sigma_{i+1} in the ambient rep."""

    kind = "rotation"

    @property
    def rank(self) -> int:
        return len(self.words) + 1

    @property
    def sigma(self) -> List[np.ndarray]:
        return self.gens

    def stabilizer_words(self, j: int) -> List[Word]:
        """Generators of the stabiliser of the base j-face inside the rotation group."""
        n = self.rank
        words = [self.word(i) for i in range(1, n) if i not in (j, j + 1)]
        if 1 <= j <= n - 2:
            words.append(self.word(j, j + 1))
        return words


@dataclass(eq=False)
class ReflectionSystem(_System):
    """rho_0..rho_{n-1}; words[i] is rho_i in the ambient rep."""

    kind = "reflection"

    @property
    def rank(self) -> int:
        return len(self.words)

    @property
    def rho(self) -> List[np.ndarray]:
        return self.gens

    def rotation_words(self) -> List[Word]:
        """sigma_i = rho_{i-1} rho_i."""
        return [self.word(i, i + 1) for i in range(1, self.rank)]

    def stabilizer_words(self, j: int) -> List[Word]:
        return [self.words[i] for i in range(self.rank) if i != j]


# ── Construction ──────────────────────────────────────────────────────────────

def _check_orders(sys: _System, products: Dict[Tuple[int, ...], int]) -> None:
    for idx, want in products.items():
        got = sys.element_order(sys.word(*idx))
        if got != want:
            label = "".join(f"g{i}" for i in idx)
            raise NonSmoothError(f"{label} has order {got}, expected {want}")


def build_rotation_system(pres: Presentation, schlafli: Sequence[int], rep: RegularRep = None,
                          words: Sequence[Word] = None, limit: int = 2_000_000) -> RotationSystem:
    """The rotation group of a smooth quotient of [p_1, ..., p_{n-1}]^+."""
    schlafli = tuple(int(p) for p in schlafli)
    if words is None:
        if pres.rank != len(schlafli):
            raise PolymedialError(f"{pres.rank} generators for a Schlafli type of length {len(schlafli)}")
        words = [(i + 1,) for i in range(pres.rank)]
    if rep is None:
        rep = RegularRep.from_presentation(pres, limit=limit)
    sys = RotationSystem(rep, list(words), schlafli, pres)
    k = len(schlafli)
    checks = {(i + 1,): p for i, p in enumerate(schlafli)}
    for j in range(1, k + 1):
        for m in range(j + 1, k + 1):
            checks[tuple(range(j, m + 1))] = 2
    _check_orders(sys, checks)
    log("Polytope", f"rotation system of type {{{','.join(map(str, schlafli))}}}, order {sys.order}")
    return sys


def build_reflection_system(pres: Presentation, schlafli: Sequence[int], rep: RegularRep = None,
                            words: Sequence[Word] = None, limit: int = 2_000_000) -> ReflectionSystem:
    schlafli = tuple(int(p) for p in schlafli)
    if words is None:
        if pres.rank != len(schlafli) + 1:
            raise PolymedialError(f"{pres.rank} generators for a Schlafli type of length {len(schlafli)}")
        words = [(i + 1,) for i in range(pres.rank)]
    if rep is None:
        rep = RegularRep.from_presentation(pres, limit=limit)
    sys = ReflectionSystem(rep, list(words), schlafli, pres)
    n = len(words)
    checks = {(i + 1,): 2 for i in range(n)}
    for i, p in enumerate(schlafli):
        checks[(i + 1, i + 2)] = p
    for i in range(n):
        for j in range(i + 2, n):
            checks[(i + 1, j + 1)] = 2
    _check_orders(sys, checks)
    log("Polytope", f"reflection system of type {{{','.join(map(str, schlafli))}}}, order {sys.order}")
    return sys


# ── Intersection conditions ───────────────────────────────────────────────────

@dataclass
class IntersectionReport:
    ok: bool
    violation: Optional[str] = None


def _tau(sys: "RotationSystem", i: int, j: int) -> Word:
    n = sys.rank
    if (i == 0 and i < j) or (i < j == n) or (i == j and i in (0, n)):
        return ()
    if 0 < i == j < n:
        return sys.word(i)
    return sys.word(*range(i, j + 1))


def _subset_points(sys: _System, subsets, gens_of) -> Dict[frozenset, np.ndarray]:
    return {s: sys.subgroup_points([w for w in gens_of(s) if w]) for s in subsets}


def check_intersection_conditions(sys: _System) -> IntersectionReport:
    """
    Reflection systems: <rho_I> meet <rho_J> = <rho_(I&J)>. Rotation systems:
    the same with generators tau_{s+1,t}, s < t both in the index set.
    Subgroups of a regular representation are compared through their orbits of 0.
    """
    n = sys.rank
    if isinstance(sys, ReflectionSystem):
        universe = range(n)

        def gens_of(s):
            return [sys.words[i] for i in sorted(s)]

        def name(s):
            return "rho" + str(sorted(s))
    else:
        universe = range(-1, n + 1)

        def gens_of(s):
            idx = sorted(s)
            return [_tau(sys, a + 1, b) for a in idx for b in idx if a < b]

        def name(s):
            return "tau" + str(sorted(s))

    subsets = [frozenset(c) for r in range(len(universe) + 1) for c in itertools.combinations(universe, r)]
    points = _subset_points(sys, subsets, gens_of)
    for a, b in itertools.combinations(subsets, 2):
        if a <= b or b <= a:
            continue
        if not np.array_equal(np.intersect1d(points[a], points[b]), points[a & b]):
            return IntersectionReport(False, f"<{name(a)}> meet <{name(b)}> != <{name(a & b)}>")
    return IntersectionReport(True)


def require_intersection_conditions(sys: _System) -> None:
    report = check_intersection_conditions(sys)
    if not report.ok:
        raise IntersectionConditionError(report.violation)


# ── Orientation and self-duality ──────────────────────────────────────────────

def _images_map(sys: _System, image_words: Sequence[Word]) -> Optional[GenMap]:
    return extend_generator_map(sys.group, [sys.rep.perm(w) for w in image_words])


def orientation_images(sys: RotationSystem) -> List[Word]:
    """sigma_1 -> sigma_1^-1, sigma_2 -> sigma_1^2 sigma_2, the rest fixed."""
    images = [sys.word(-1), sys.word(1, 1, 2)]
    images += [sys.word(i) for i in range(3, sys.rank)]
    return images


@dataclass
class OrientationReport:
    orientation: Orientation
    witness: Optional[GenMap] = None


def classify_orientation(sys: _System) -> OrientationReport:
    if isinstance(sys, ReflectionSystem):
        rotation_points = orbit_of(0, [sys.rep.perm(w) for w in sys.rotation_words()], sys.degree)
        if 2 * rotation_points.size == sys.order:
            return OrientationReport(Orientation.DIRECTLY_REGULAR)
        return OrientationReport(Orientation.NON_ORIENTABLY_REGULAR)
    witness = _images_map(sys, orientation_images(sys))
    if witness is not None and witness.is_automorphism():
        return OrientationReport(Orientation.DIRECTLY_REGULAR, witness)
    return OrientationReport(Orientation.CHIRAL)


def proper_duality_images(sys: _System) -> List[Word]:
    if isinstance(sys, ReflectionSystem):
        return [sys.words[sys.rank - 1 - j] for j in range(sys.rank)]
    n = sys.rank
    return [sys.word(-(n - i)) for i in range(1, n)]


def improper_duality_images(sys: RotationSystem) -> List[Word]:
    n = sys.rank
    images = [sys.word(-(n - i)) for i in range(1, n - 2)]
    images.append(sys.word(1, 2, -1))
    images.append(sys.word(1))
    return images


@dataclass
class SelfDualityReport:
    kind: SelfDuality
    witness: Optional[GenMap] = None
    image_words: Optional[List[Word]] = None
    proper_extends: bool = False
    improper_extends: bool = False


def classify_self_duality(sys: _System) -> SelfDualityReport:
    """Rank 4 only. Regular systems are tested against the proper map alone, chiral ones against both."""
    if sys.rank != 4:
        raise PolymedialError(f"self-duality is classified for rank 4 only, not rank {sys.rank}")
    proper_words = proper_duality_images(sys)
    proper = _images_map(sys, proper_words)
    proper_ok = proper is not None and proper.is_automorphism() and proper.is_involution()
    if isinstance(sys, ReflectionSystem):
        if proper_ok:
            return SelfDualityReport(SelfDuality.PROPERLY, proper, proper_words, True, False)
        return SelfDualityReport(SelfDuality.NOT_SELF_DUAL)
    if classify_orientation(sys).orientation != Orientation.CHIRAL:
        if proper_ok:
            return SelfDualityReport(SelfDuality.PROPERLY, proper, proper_words, True, False)
        return SelfDualityReport(SelfDuality.NOT_SELF_DUAL)

    improper_words = improper_duality_images(sys)
    improper = _images_map(sys, improper_words)
    improper_ok = improper is not None and improper.is_automorphism()
    if proper_ok and improper_ok:
        log("Polytope", "warning: both self-duality maps extend; reporting properly self-dual")
    if proper_ok:
        return SelfDualityReport(SelfDuality.PROPERLY, proper, proper_words, True, improper_ok)
    if improper_ok:
        return SelfDualityReport(SelfDuality.IMPROPERLY, improper, improper_words, False, True)
    return SelfDualityReport(SelfDuality.NOT_SELF_DUAL)
