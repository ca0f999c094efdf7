"""Finitely presented groups: a small DSL and Todd-Coxeter coset enumeration.

The enumstrategy is HLT (relator-based scanning with gap filling), with
coincidence handling through a union-find over cosets and immediate table
merging, and a compaction pass when the table accumulates too many dead
rows.  See Holt, Eick, O'Brien, "Handbook of Computational Group Theory",
ch. 5 for the standard procedures this follows.

Words are stored as tuples of nonzero signed integers: +(i+1) is generator
i, -(i+1) its inverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .groups import GroupTable


class PresentationError(ValueError):
    pass


class SyntaxErrorAt(PresentationError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class EnumerationError(PresentationError):
    pass


Word = tuple[int, ...]


def invert_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Word) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """Parsed generators and relators of a finitely presented group."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def is_free(self) -> bool:
        return not self.relators

    def pretty(self) -> str:
        rels = ", ".join(word_to_text(w, self.generators) for w in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def word_to_text(w: Word, generators: tuple[str, ...]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        x = w[i]
        j = i
        while j < len(w) and w[j] == x:
            j += 1
        run = j - i
        name = generators[abs(x) - 1]
        exp = run if x > 0 else -run
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return "*".join(parts)


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>\d+)"
                       r"|(?P<sym>[<>⟨⟩|,=^*()\[\]-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise SyntaxErrorAt(f"unexpected character {stripped[0]!r}", pos)
        if m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        elif m.group("int"):
            tokens.append(("int", m.group("int"), m.start("int")))
        else:
            sym = m.group("sym")
            if sym == "⟨":
                sym = "<"
            elif sym == "⟩":
                sym = ">"
            tokens.append(("sym", sym, m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, generators: tuple[str, ...] | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.generators = list(generators) if generators else []
        self.gen_index = {g: k for k, g in enumerate(self.generators)}

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise SyntaxErrorAt(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def at_sym(self, *values: str) -> bool:
        kind, val, _ = self.peek()
        return kind == "sym" and val in values

    # -- word grammar --------------------------------------------------

    def parse_word(self) -> Word:
        """word := factor+ with optional '*' separators; '1' is the empty word."""
        letters: list[int] = []
        first = True
        while True:
            kind, val, pos = self.peek()
            if kind == "sym" and val == "*":
                self.next()
                continue
            if (kind == "name" or (kind == "sym" and val in "([")
                    or (kind == "int" and val == "1" and first)):
                letters.extend(self.parse_factor())
                first = False
                continue
            break
        if first:
            kind, val, pos = self.peek()
            raise SyntaxErrorAt("expected a word", pos)
        return free_reduce(tuple(letters))

    def parse_factor(self) -> Word:
        base = self.parse_primary()
        if self.at_sym("^"):
            self.next()
            kind, val, pos = self.peek()
            if kind == "int" or (kind == "sym" and val == "-"):
                neg = False
                if kind == "sym":
                    self.next()
                    neg = True
                    kind, val, pos = self.peek()
                if kind != "int":
                    raise SyntaxErrorAt("expected an integer exponent", pos)
                self.next()
                e = int(val)
                if neg:
                    e = -e
                if e == 0:
                    return ()
                w = base if e > 0 else invert_word(base)
                return w * abs(e)
            # conjugation sugar: u^v = v^-1 u v
            conj = self.parse_primary()
            return free_reduce(invert_word(conj) + base + conj)
        return base

    def parse_primary(self) -> Word:
        kind, val, pos = self.next()
        if kind == "int" and val == "1":
            return ()
        if kind == "name":
            return self.resolve_name(val, pos)
        if kind == "sym" and val == "(":
            w = self.parse_word()
            self.expect(")")
            return w
        if kind == "sym" and val == "[":
            u = self.parse_word()
            self.expect(",")
            v = self.parse_word()
            self.expect("]")
            return free_reduce(invert_word(u) + invert_word(v) + u + v)
        raise SyntaxErrorAt(f"unexpected token {val!r}", pos)

    def resolve_name(self, name: str, pos: int) -> Word:
        idx = self.gen_index.get(name)
        if idx is not None:
            return (idx + 1,)
        # juxtaposition sugar: "ba" means b*a when all generators are single letters
        if all(len(g) == 1 for g in self.gen_index) and name and \
                all(ch in self.gen_index for ch in name):
            return tuple(self.gen_index[ch] + 1 for ch in name)
        raise SyntaxErrorAt(f"undeclared generator {name!r}", pos)


def parse_presentation(text: str) -> Presentation:
    """Parse "<x,y | x^3=y^4=1, x^y=x^-1>" into generators and relators.

    A relation u = v = ... = w contributes the relators u*w^-1, v*w^-1, ...;
    in particular a chain ending in 1 contributes each left-hand side as a
    relator directly.  Commutators [u,v] and conjugations u^v are expanded
    to plain words.  Empty relators (e.g. from 1 = 1) are dropped.
    """
    p = _Parser(text)
    p.expect("<")
    # generator list
    while True:
        kind, val, pos = p.next()
        if kind != "name":
            raise SyntaxErrorAt("expected a generator name", pos)
        if val in p.gen_index:
            raise SyntaxErrorAt(f"duplicate generator {val!r}", pos)
        if val == "1":
            raise SyntaxErrorAt("'1' cannot be a generator name", pos)
        p.gen_index[val] = len(p.generators)
        p.generators.append(val)
        if p.at_sym(","):
            p.next()
            continue
        break
    p.expect("|")
    relators: list[Word] = []
    if not p.at_sym(">"):
        while True:
            words = [p.parse_word()]
            while p.at_sym("="):
                p.next()
                words.append(p.parse_word())
            last = words[-1]
            if len(words) == 1:
                rel = free_reduce(words[0])
                if rel:
                    relators.append(rel)
            else:
                for w in words[:-1]:
                    rel = free_reduce(w + invert_word(last))
                    if rel:
                        relators.append(rel)
            if p.at_sym(","):
                p.next()
                continue
            break
    p.expect(">")
    kind, val, pos = p.peek()
    if kind != "end":
        raise SyntaxErrorAt(f"trailing input {val!r}", pos)
    return Presentation(tuple(p.generators), tuple(relators))


def parse_word(text: str, generators: tuple[str, ...]) -> Word:
    """Parse a single word (e.g. "x*y^-1") over the given generator names."""
    p = _Parser(text, generators)
    w = p.parse_word()
    kind, val, pos = p.peek()
    if kind != "end":
        raise SyntaxErrorAt(f"trailing input {val!r}", pos)
    return w


# ---------------------------------------------------------------------------
# Todd-Coxeter enumeration
# ---------------------------------------------------------------------------

@dataclass
class CosetTable:
    """Mutable HLT enumeration state over the trivial subgroup.

    Columns come in generator/inverse pairs: column 2i is generator i,
    column 2i+1 its inverse.  Undefined entries are -1.  `parent` is the
    union-find structure over all cosets ever defined.
    """

    ngens: int
    max_cosets: int
    rows: list[list[int]] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)
    live: int = 0

    def __post_init__(self):
        self.ncols = 2 * self.ngens
        self._new_coset()

    def _new_coset(self) -> int:
        if self.live >= self.max_cosets:
            raise EnumerationError(
                f"coset limit {self.max_cosets} exceeded "
                "(presentation may be infinite, or raise max_cosets)")
        if len(self.rows) > max(16 * self.max_cosets, 1 << 20):
            raise EnumerationError(
                "total coset definitions exceeded a safe multiple of max_cosets")
        c = len(self.rows)
        self.rows.append([-1] * self.ncols)
        self.parent.append(c)
        self.live += 1
        return c

    def find(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.live -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            g = queue[qi]
            qi += 1
            row = self.rows[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                self.rows[d][x ^ 1] = -1
                mu, nu = self.find(g), self.find(d)
                t = self.rows[mu][x]
                if t >= 0:
                    self._merge(nu, t, queue)
                else:
                    t2 = self.rows[nu][x ^ 1]
                    if t2 >= 0:
                        self._merge(mu, t2, queue)
                    else:
                        self.rows[mu][x] = nu
                        self.rows[nu][x ^ 1] = mu

    def _entry(self, c: int, x: int) -> int:
        d = self.rows[c][x]
        return -1 if d < 0 else self.find(d)

    def scan_and_fill(self, a: int, word: list[int]) -> None:
        f, b = a, a
        i, j = 0, len(word) - 1
        while True:
            while i <= j:
                nxt = self._entry(f, word[i])
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                prv = self._entry(b, word[j] ^ 1)
                if prv < 0:
                    break
                b = prv
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                # deduction closing the gap
                self.rows[f][word[i]] = b
                self.rows[b][word[i] ^ 1] = f
                return
            # gap longer than one letter: define a new coset and keep going
            c = self._new_coset()
            self.rows[f][word[i]] = c
            self.rows[c][word[i] ^ 1] = f

    def compact(self) -> None:
        """Drop dead rows, renumbering live cosets in increasing order."""
        remap = {}
        for c in range(len(self.rows)):
            if self.find(c) == c:
                remap[c] = len(remap)
        new_rows = []
        for c in range(len(self.rows)):
            if c not in remap:
                continue
            new_rows.append([-1 if d < 0 else remap[self.find(d)]
                             for d in self.rows[c]])
        self.rows = new_rows
        self.parent = list(range(len(new_rows)))

    def live_cosets(self) -> list[int]:
        return [c for c in range(len(self.rows)) if self.find(c) == c]


def _word_to_columns(w: Word) -> list[int]:
    return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w]


def todd_coxeter(P: Presentation, max_cosets: int = 100000,
                 name: str | None = None) -> GroupTable:
    """Enumerate the presented group over the trivial subgroup.

    On success the coset table is the regular representation; the result is
    returned as a GroupTable whose order is the final coset count, with the
    presentation's generator labels attached.  Deterministic: identical
    input yields an identical table.
    """
    if P.is_free:
        raise EnumerationError("free group: enumeration would not terminate")
    relcols = [_word_to_columns(w) for w in P.relators]
    ct = CosetTable(len(P.generators), max_cosets)
    cur = 0
    while cur < len(ct.rows):
        if ct.find(cur) != cur:
            cur += 1
            continue
        for cols in relcols:
            if ct.find(cur) != cur:
                break
            ct.scan_and_fill(cur, cols)
        if ct.find(cur) != cur:
            cur += 1
            continue
        row = ct.rows[cur]
        for x in range(ct.ncols):
            if row[x] < 0:
                c = ct._new_coset()
                row[x] = c
                ct.rows[c][x ^ 1] = cur
        cur += 1
    ct.compact()
    n = len(ct.rows)

    # verification: complete, permutation action, relators act trivially
    for c in range(n):
        if any(d < 0 for d in ct.rows[c]):
            raise EnumerationError("internal error: incomplete table after enumeration")
    for x in range(ct.ncols):
        if sorted(ct.rows[c][x] for c in range(n)) != list(range(n)):
            raise EnumerationError("internal error: generator action is not a permutation")
    for cols in relcols:
        for c in range(n):
            d = c
            for x in cols:
                d = ct.rows[d][x]
            if d != c:
                raise EnumerationError("internal error: relator does not act trivially")

    # canonical renumbering: BFS from coset 0, columns in declaration order
    order = [0]
    seen = [False] * n
    seen[0] = True
    qi = 0
    while qi < len(order):
        c = order[qi]
        qi += 1
        for x in range(ct.ncols):
            d = ct.rows[c][x]
            if not seen[d]:
                seen[d] = True
                order.append(d)
    newidx = [0] * n
    for i, c in enumerate(order):
        newidx[c] = i
    table = [[0] * ct.ncols for _ in range(n)]
    for c in range(n):
        for x in range(ct.ncols):
            table[newidx[c]][x] = newidx[ct.rows[c][x]]

    # coset c corresponds to the group element carrying coset 0 to c; a word
    # for it comes from the BFS tree, and right multiplication follows words
    word_of: list[list[int]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[0] = True
    bfs = [0]
    qi = 0
    while qi < len(bfs):
        c = bfs[qi]
        qi += 1
        for x in range(ct.ncols):
            d = table[c][x]
            if not seen[d]:
                seen[d] = True
                word_of[d] = word_of[c] + [x]
                bfs.append(d)
    mul = [[0] * n for _ in range(n)]
    for b in range(n):
        w = word_of[b]
        for a in range(n):
            d = a
            for x in w:
                d = table[d][x]
            mul[a][b] = d
    gens = {g: table[0][2 * i] for i, g in enumerate(P.generators)}
    G = GroupTable(mul, name=name or P.pretty(), generators=gens)

    # relators must evaluate to the identity at the generator images
    for w in P.relators:
        e = 0
        for x in w:
            g = gens[P.generators[abs(x) - 1]]
            e = G.mul[e][g if x > 0 else G.inv[g]]
        if e != 0:
            raise EnumerationError("internal error: relator fails in the built group")
    return G


# ---------------------------------------------------------------------------
# the two-generator presentation family used for order-3/order-4 interaction
# ---------------------------------------------------------------------------

def build_gij(i: int, j: int) -> Presentation:
    """Presentation on x, y of the finite quotient family indexed by (i, j).

    Relators: x^4, y^3, [x^2,y], (xy)^i, [x,y]^j, plus commutation of
    (xy)^(i/2) with both generators when i is even, and of [x,y]^(j/2) with
    both generators when j is even (omitted for odd exponents, where the
    power would be trivial).
    """
    allowed = {2, 3, 4, 6}
    if i not in allowed or j not in allowed:
        raise PresentationError(f"indices must lie in {sorted(allowed)}")
    parts = [f"x^4=y^3=[x^2,y]=(x*y)^{i}=[x,y]^{j}=1"]
    if i % 2 == 0:
        parts.append(f"[(x*y)^{i // 2},x]=[(x*y)^{i // 2},y]=1")
    if j % 2 == 0:
        parts.append(f"[[x,y]^{j // 2},x]=[[x,y]^{j // 2},y]=1")
    return parse_presentation(f"<x,y | {', '.join(parts)}>")
