"""
src/groups/fpgroup.py
Finitely presented groups: the presentation language, Todd-Coxeter coset
enumeration (HLT with lookahead) and the regular representation.

Words are tuples of non-zero ints: generator i is i + 1, its inverse -(i + 1).
"""

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import EnumerationLimitError, PresentationSyntaxError
from src.utils.log import debug, log

Word = Tuple[int, ...]


# ── Words ─────────────────────────────────────────────────────────────────────

def free_reduce(word: Sequence[int]) -> Word:
    out: List[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    lo, hi = 0, len(w) - 1
    while lo < hi and w[lo] == -w[hi]:
        lo += 1
        hi -= 1
    return tuple(w[lo:hi + 1])


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def power_word(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k > 0 else invert_word(word)
    return free_reduce(base * abs(k))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u^-1 v^-1 u v"""
    return free_reduce(invert_word(u) + invert_word(v) + tuple(u) + tuple(v))


def letter_column(letter: int) -> int:
    """Coset-table column of a letter: 2i for x_i, 2i + 1 for x_i^-1."""
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    for letter in word:
        name = names[abs(letter) - 1]
        parts.append(name if letter > 0 else f"{name}^-1")
    return "*".join(parts)


# ── Presentations ─────────────────────────────────────────────────────────────

@dataclass
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    source: str = ""

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def letter(self, name: str, inverse: bool = False) -> int:
        i = self.index(name) + 1
        return -i if inverse else i

    def extend(self, names: Sequence[str], relators: Sequence[Word]) -> "Presentation":
        """Append generators and relators; existing letters keep their meaning."""
        gens = self.generators + tuple(names)
        rels = list(self.relators)
        for r in relators:
            r = cyclic_reduce(r)
            if r and r not in rels:
                rels.append(r)
        return Presentation(gens, tuple(rels))

    def to_text(self) -> str:
        lines = ["gens " + " ".join(self.generators)]
        lines += ["rel " + format_word(r, self.generators) for r in self.relators]
        return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[()\[\],^*=]))")


class _WordParser:
    """Recursive descent over one statement body."""

    def __init__(self, text: str, line: int, col0: int, gens: Dict[str, int]):
        self.line = line
        self.gens = gens
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                col = col0 + len(text[:pos]) + (len(text[pos:]) - len(text[pos:].lstrip())) + 1
                raise PresentationSyntaxError(f"unexpected character {text[pos:].strip()[0]!r}", line, col)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), col0 + start + 1))
            pos = m.end()
        self.pos = 0
        self.end_col = col0 + len(text) + 1

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "", self.end_col)

    def take(self, value: str = None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            found = tok[1] or "end of statement"
            raise PresentationSyntaxError(f"expected {value!r}, found {found!r}", self.line, tok[2])
        self.pos += 1
        return tok

    def error(self, message: str):
        raise PresentationSyntaxError(message, self.line, self.peek()[2])

    def word(self, stops=("end", ")", "]", ",", "=")) -> Word:
        out: Word = ()
        while True:
            kind, value, _ = self.peek()
            if kind == "end" or value in stops:
                return out
            if value == "*":
                self.take()
            out = free_reduce(out + self.factor())

    def factor(self) -> Word:
        w = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, value, col = self.take()
            if kind != "int":
                raise PresentationSyntaxError("exponent must be an integer", self.line, col)
            k = int(value)
            if k == 0:
                raise PresentationSyntaxError("zero exponent", self.line, col)
            w = power_word(w, k)
        return w

    def atom(self) -> Word:
        kind, value, col = self.take()
        if kind == "name":
            if value not in self.gens:
                raise PresentationSyntaxError(f"unknown generator {value!r}", self.line, col)
            return (self.gens[value] + 1,)
        if kind == "int" and value == "1":
            return ()
        if value == "(":
            w = self.word()
            self.take(")")
            return w
        if value == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            return commutator(u, v)
        raise PresentationSyntaxError(f"unexpected {value or 'end of statement'!r}", self.line, col)


def _statements(text: str):
    """Yield (line, column offset, statement) with comments stripped."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        offset = 0
        for piece in body.split(";"):
            if piece.strip():
                lead = len(piece) - len(piece.lstrip())
                yield lineno, offset + lead, piece.strip()
            offset += len(piece) + 1


def _int_list(args: str, line: int, col: int, allow_inf: bool) -> List[Optional[int]]:
    values = []
    for m in re.finditer(r"\S+", args):
        tok = m.group(0)
        if allow_inf and tok == "inf":
            values.append(None)
            continue
        if not re.fullmatch(r"\d+", tok) or int(tok) < 2:
            raise PresentationSyntaxError(f"expected an integer >= 2, found {tok!r}", line, col + m.start() + 1)
        values.append(int(tok))
    return values


def coxeter_relators(periods: Sequence[Optional[int]]) -> List[Word]:
    """String Coxeter relators on len(periods) + 1 involutions; None omits a bond."""
    k = len(periods) + 1
    rels = [(i + 1, i + 1) for i in range(k)]
    for i, p in enumerate(periods):
        if p is not None:
            rels.append((i + 1, i + 2) * p)
    for i in range(k):
        for j in range(i + 2, k):
            rels.append((i + 1, j + 1) * 2)
    return rels


def rotation_relators(periods: Sequence[int]) -> List[Word]:
    """Rotation-group relators: s_j^p_j and (s_j ... s_k)^2 for j < k."""
    k = len(periods)
    rels = [(j + 1,) * p for j, p in enumerate(periods)]
    for j in range(k):
        for m in range(j + 1, k):
            rels.append(tuple(range(j + 1, m + 2)) * 2)
    return rels


def parse_presentation(text: str) -> Presentation:
    gens: Dict[str, int] = {}
    names: List[str] = []
    relators: List[Word] = []
    seen_gens = False

    for line, col, stmt in _statements(text):
        keyword, _, rest = stmt.partition(" ")
        rest_col = col + len(keyword) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if keyword == "gens":
            if seen_gens:
                raise PresentationSyntaxError("'gens' may appear only once", line, col + 1)
            seen_gens = True
            for m in re.finditer(r"\S+", rest):
                name = m.group(0)
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in gens:
                    raise PresentationSyntaxError(f"bad generator name {name!r}", line, rest_col + m.start() + 1)
                gens[name] = len(names)
                names.append(name)
            if not names:
                raise PresentationSyntaxError("'gens' lists no generators", line, col + 1)
            continue
        if not seen_gens:
            raise PresentationSyntaxError("'gens' must come first", line, col + 1)
        if keyword == "rel":
            parser = _WordParser(rest, line, rest_col, gens)
            lhs = parser.word()
            if parser.peek()[1] == "=":
                parser.take()
                rhs = parser.word()
                lhs = free_reduce(lhs + invert_word(rhs))
            if parser.peek()[0] != "end":
                parser.error(f"unexpected {parser.peek()[1]!r}")
            relators.append(lhs)
        elif keyword == "coxeter":
            periods = _int_list(rest, line, rest_col, allow_inf=True)
            if len(periods) + 1 != len(names):
                raise PresentationSyntaxError(
                    f"coxeter needs {len(names) - 1} periods for {len(names)} generators", line, col + 1)
            relators.extend(coxeter_relators(periods))
        elif keyword == "rotation":
            periods = _int_list(rest, line, rest_col, allow_inf=False)
            if len(periods) != len(names):
                raise PresentationSyntaxError(
                    f"rotation needs {len(names)} periods for {len(names)} generators", line, col + 1)
            relators.extend(rotation_relators(periods))
        else:
            raise PresentationSyntaxError(f"unknown statement {keyword!r}", line, col + 1)

    if not seen_gens:
        raise PresentationSyntaxError("missing 'gens' statement", 1, 1)

    reduced: List[Word] = []
    for r in relators:
        r = cyclic_reduce(r)
        if r and r not in reduced:
            reduced.append(r)
    return Presentation(tuple(names), tuple(reduced), source=text)


# ── Coset enumeration ─────────────────────────────────────────────────────────

class CosetTable:
    """
    HLT coset table with lookahead. Rows are cosets, columns are letters
    (see letter_column); -1 marks an undefined entry. `p` is the union-find
    forest used while processing coincidences.
    """

    def __init__(self, presentation: Presentation, subgroup: Sequence[Word] = (),
                 limit: int = 2_000_000, margin: int = 64):
        self.presentation = presentation
        self.ncols = 2 * presentation.rank
        self.limit = limit
        self.margin = margin
        self.relators = [[letter_column(x) for x in r] for r in presentation.relators]
        self.subgroup = [[letter_column(x) for x in w] for w in subgroup if w]
        self.table: List[List[int]] = [[-1] * self.ncols]
        self.p: List[int] = [0]
        self.defined = 1
        self.lookaheads = 0
        self._compressed_at = 0

    # -- bookkeeping --

    def is_live(self, c: int) -> bool:
        return self.p[c] == c

    def define(self, alpha: int, col: int) -> None:
        if len(self.table) >= self.limit:
            raise EnumerationLimitError(self.limit, self.defined)
        beta = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(beta)
        self.table[alpha][col] = beta
        self.table[beta][col ^ 1] = alpha
        self.defined += 1

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def merge(self, a: int, b: int, queue: deque) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.p[hi] = lo
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: deque = deque()
        self.merge(a, b, queue)
        while queue:
            gamma = queue.popleft()
            row = table[gamma]
            for col in range(self.ncols):
                delta = row[col]
                if delta == -1:
                    continue
                inv = col ^ 1
                table[delta][inv] = -1
                mu, nu = self.rep(gamma), self.rep(delta)
                if table[mu][col] != -1:
                    self.merge(nu, table[mu][col], queue)
                elif table[nu][inv] != -1:
                    self.merge(mu, table[nu][inv], queue)
                else:
                    table[mu][col] = nu
                    table[nu][inv] = mu

    # -- scanning --

    def scan(self, alpha: int, word: List[int], fill: bool) -> None:
        """Scan a relator at alpha; with fill, define cosets until it closes."""
        table = self.table
        f, b = alpha, alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] != -1:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] != -1:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, word[i])

    def lookahead(self) -> None:
        self.lookaheads += 1
        for beta in range(len(self.table)):
            if not self.is_live(beta):
                continue
            for w in self.relators:
                self.scan(beta, w, fill=False)
                if not self.is_live(beta):
                    break

    def compress(self) -> List[int]:
        """Renumber live cosets in order; returns the old-to-new map (-1 for dead)."""
        mapping = [-1] * len(self.table)
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        for new, old in enumerate(live):
            mapping[old] = new
        rows = []
        for old in live:
            rows.append([mapping[self.rep(v)] if v != -1 else -1 for v in self.table[old]])
        self.table = rows
        self.p = list(range(len(rows)))
        return mapping

    def run(self) -> np.ndarray:
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        alpha = 0
        while alpha < len(self.table):
            if len(self.table) + self.margin > self.limit and len(self.table) > self._compressed_at:
                before = len(self.table)
                self.lookahead()
                mapping = self.compress()
                while alpha < len(mapping) and mapping[alpha] == -1:
                    alpha += 1
                alpha = mapping[alpha] if alpha < len(mapping) else len(self.table)
                self._compressed_at = len(self.table)
                debug("Enumerate", f"lookahead: {before} -> {len(self.table)} rows")
                continue
            if self.is_live(alpha):
                for w in self.relators:
                    self.scan(alpha, w, fill=True)
                    if not self.is_live(alpha):
                        break
                if self.is_live(alpha):
                    row = self.table[alpha]
                    for col in range(self.ncols):
                        if row[col] == -1:
                            self.define(alpha, col)
            alpha += 1
        self.compress()
        result = np.array(self.table, dtype=np.int64).reshape(len(self.table), self.ncols)
        log("Enumerate", f"{len(result)} cosets ({self.defined} defined, {self.lookaheads} lookaheads)")
        return result


def coset_enumerate(presentation: Presentation, subgroup: Sequence[Word] = (),
                    limit: int = 2_000_000, margin: int = 64) -> np.ndarray:
    """Complete coset table of the subgroup generated by `subgroup` words."""
    return CosetTable(presentation, subgroup, limit, margin).run()


def perm_rep(table: np.ndarray) -> List[np.ndarray]:
    """Permutation of each generator on the cosets (right action)."""
    return [table[:, 2 * i].copy() for i in range(table.shape[1] // 2)]


def evaluate_word(perms: Sequence[np.ndarray], word: Sequence[int],
                  inverses: Sequence[np.ndarray] = None) -> np.ndarray:
    """Left-to-right product: the result sends x to x . w."""
    n = len(perms[0])
    if inverses is None:
        inverses = []
        for p in perms:
            inv = np.empty_like(p)
            inv[p] = np.arange(n)
            inverses.append(inv)
    result = np.arange(n)
    for letter in word:
        step = perms[letter - 1] if letter > 0 else inverses[-letter - 1]
        result = step[result]
    return result


# ── Regular representation ────────────────────────────────────────────────────

@dataclass(eq=False)
class RegularRep:
    """
    The group acting on itself by right multiplication. Point 0 is the
    identity; the point of an element g is 0.g, so a permutation P in the
    image corresponds to the element at point P[0].
    """

    presentation: Presentation
    table: np.ndarray
    parent: np.ndarray = field(init=False, repr=False)
    parent_col: np.ndarray = field(init=False, repr=False)
    layers: List[np.ndarray] = field(init=False, repr=False)
    _left: Dict[int, np.ndarray] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        n = self.degree
        self.parent = np.full(n, -1, dtype=np.int64)
        self.parent_col = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        self.layers = [frontier]
        while frontier.size:
            nxt = []
            for col in range(self.table.shape[1]):
                ys = self.table[frontier, col]
                fresh = ~seen[ys]
                if not fresh.any():
                    continue
                ys, idx = np.unique(ys[fresh], return_index=True)
                self.parent[ys] = frontier[fresh][idx]
                self.parent_col[ys] = col
                seen[ys] = True
                nxt.append(ys)
            frontier = np.concatenate(nxt) if nxt else np.array([], dtype=np.int64)
            if frontier.size:
                self.layers.append(frontier)

    @classmethod
    def from_presentation(cls, presentation: Presentation, limit: int = 2_000_000,
                          margin: int = 64) -> "RegularRep":
        return cls(presentation, coset_enumerate(presentation, (), limit, margin))

    @classmethod
    def from_permutations(cls, names: Sequence[str], perms: Sequence[np.ndarray],
                          budget: int = 1_000_000) -> "RegularRep":
        """Regular representation of a permutation group, by closing the identity under the generators."""
        steps = []
        for p in perms:
            p = np.asarray(p, dtype=np.int64)
            steps += [p, np.argsort(p)]
        ident = np.arange(len(steps[0]), dtype=np.int64)
        index = {ident.tobytes(): 0}
        elements = [ident]
        rows = []
        while len(rows) < len(elements):
            x = elements[len(rows)]
            row = []
            for step in steps:
                y = step[x]
                key = y.tobytes()
                j = index.get(key)
                if j is None:
                    if len(elements) >= budget:
                        raise EnumerationLimitError(budget, len(elements))
                    j = index[key] = len(elements)
                    elements.append(y)
                row.append(j)
            rows.append(row)
        return cls(Presentation(tuple(names), (), source="permutations"), np.array(rows, dtype=np.int64))

    @property
    def degree(self) -> int:
        return int(self.table.shape[0])

    @property
    def order(self) -> int:
        return self.degree

    def right(self, letter: int) -> np.ndarray:
        return self.table[:, letter_column(letter)]

    def perm(self, word: Sequence[int]) -> np.ndarray:
        """Right multiplication by the element `word`."""
        result = np.arange(self.degree)
        for letter in word:
            result = self.table[result, letter_column(letter)]
        return result

    def point(self, word: Sequence[int], start: int = 0) -> int:
        x = start
        for letter in word:
            x = int(self.table[x, letter_column(letter)])
        return x

    def word_of(self, x: int) -> Word:
        letters = []
        while x != 0:
            col = int(self.parent_col[x])
            letters.append(col // 2 + 1 if col % 2 == 0 else -(col // 2 + 1))
            x = int(self.parent[x])
        return tuple(reversed(letters))

    def multiply(self, x: int, y: int) -> int:
        return self.point(self.word_of(y), start=x)

    def left_letter(self, letter: int) -> np.ndarray:
        """Left multiplication by one generator letter, built along the BFS tree."""
        col = letter_column(letter)
        if col in self._left:
            return self._left[col]
        out = np.empty(self.degree, dtype=np.int64)
        out[0] = self.table[0, col]
        for layer in self.layers[1:]:
            out[layer] = self.table[out[self.parent[layer]], self.parent_col[layer]]
        self._left[col] = out
        return out

    def left_perm(self, word: Sequence[int]) -> np.ndarray:
        """x -> w.x"""
        result = np.arange(self.degree)
        for letter in reversed(word):
            result = self.left_letter(letter)[result]
        return result

    def left_of_point(self, c: int) -> np.ndarray:
        return self.left_perm(self.word_of(c))
