"""Exact character tables (abelian groups, Q8 x C2^n) and character spectra.

Character values live in the ring of cyclotomic integers Z[zeta_e] for the
group exponent e, represented by integer coordinate vectors over the power
basis 1, zeta, ..., zeta^(phi(e)-1).  All arithmetic is exact.

For a connection set closed under conjugation, the classical character-sum
formula gives the Cayley spectrum directly: each irreducible character chi
contributes the eigenvalue (1/chi(1)) * sum_{s in S} chi(s) with
multiplicity chi(1)^2 (see e.g. Brouwer & Haemers, "Spectra of Graphs",
Prop. 6.3.1, going back to Babai and to Diaconis-Shahshahani).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .groups import (GroupTable, GroupError, conjugacy_classes, class_of,
                     exponent, is_abelian, derived_subgroup, quotient_group,
                     find_isomorphism, _generating_sequence)
from .polynomials import IntPolynomial
from .spectral import ConnectionSet


class UnsupportedGroupError(GroupError):
    """The character path does not cover this group; use the matrix path."""


class CharacterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic integers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> IntPolynomial:
    if e == 1:
        return IntPolynomial((1, -1))
    num = IntPolynomial((1,) + (0,) * (e - 1) + (-1,))  # x^e - 1
    for d in range(1, e):
        if e % d == 0:
            quot, rem = num.divmod_monic(cyclotomic_polynomial(d))
            if any(rem):
                raise CharacterError("cyclotomic division failed")
            num = quot
    return num


def _phi(e: int) -> int:
    return sum(1 for k in range(1, e + 1) if gcd(k, e) == 1) if e > 1 else 1


@lru_cache(maxsize=None)
def _power_table(e: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta^m over the power basis, for m up to max(e, 2*phi) - 1."""
    phi = _phi(e)
    cyc = cyclotomic_polynomial(e)
    top = max(e, 2 * phi - 1)
    rows = []
    for m in range(top):
        if m < phi:
            vec = [0] * phi
            vec[m] = 1
        else:
            # reduce x^m mod the cyclotomic polynomial
            p = IntPolynomial((1,) + (0,) * m)
            _, rem = p.divmod_monic(cyc)
            rem = tuple(rem)
            vec = [0] * (phi - len(rem)) + list(rem)
            vec = vec[-phi:] if len(vec) > phi else vec
            vec = list(reversed(vec))  # rem is degree-descending; basis is ascending
        rows.append(tuple(vec))
    return tuple(rows)


class CyclotomicInt:
    """Exact element of Z[zeta_e] with integer power-basis coordinates."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs):
        self.e = e
        cs = tuple(int(c) for c in coeffs)
        if len(cs) != _phi(e):
            raise CharacterError("coordinate vector has wrong length")
        self.coeffs = cs

    @classmethod
    def zero(cls, e: int) -> "CyclotomicInt":
        return cls(e, (0,) * _phi(e))

    @classmethod
    def integer(cls, e: int, n: int) -> "CyclotomicInt":
        return cls(e, (n,) + (0,) * (_phi(e) - 1))

    @classmethod
    def root_power(cls, e: int, t: int) -> "CyclotomicInt":
        """zeta_e^t as a basis vector (reduced through the power table)."""
        return cls(e, _power_table(e)[t % e])

    def _check(self, other: "CyclotomicInt"):
        if self.e != other.e:
            raise CharacterError("mixed cyclotomic moduli")

    def __add__(self, other):
        self._check(other)
        return CyclotomicInt(self.e, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CyclotomicInt(self.e, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CyclotomicInt(self.e, tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "CyclotomicInt":
        return CyclotomicInt(self.e, tuple(k * a for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        phi = len(self.coeffs)
        conv = [0] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                conv[i + j] += a * b
        table = _power_table(self.e)
        out = [0] * phi
        for m, c in enumerate(conv):
            if c == 0:
                continue
            row = table[m]
            for t in range(phi):
                out[t] += c * row[t]
        return CyclotomicInt(self.e, out)

    def conjugate(self) -> "CyclotomicInt":
        """Complex conjugation zeta -> zeta^-1."""
        table = _power_table(self.e)
        phi = len(self.coeffs)
        out = [0] * phi
        for m, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(self.e - m) % self.e]
            for t in range(phi):
                out[t] += c * row[t]
        return CyclotomicInt(self.e, out)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    @property
    def rational_value(self) -> int:
        if not self.is_rational:
            raise CharacterError(f"value {self.coeffs} is not rational")
        return self.coeffs[0]

    def divide_exact(self, k: int) -> "CyclotomicInt":
        if any(c % k for c in self.coeffs):
            raise CharacterError(f"coordinates {self.coeffs} not divisible by {k}")
        return CyclotomicInt(self.e, tuple(c // k for c in self.coeffs))

    def __eq__(self, other):
        return (isinstance(other, CyclotomicInt) and self.e == other.e
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.e, self.coeffs))

    def __repr__(self):
        return f"CyclotomicInt(e={self.e}, {self.coeffs})"


# ---------------------------------------------------------------------------
# character tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharacterTable:
    group: GroupTable
    modulus: int                      # cyclotomic modulus used for the values
    degrees: tuple[int, ...]
    class_reps: tuple[int, ...]
    class_sizes: tuple[int, ...]
    values: tuple[tuple[CyclotomicInt, ...], ...]   # [character][class]
    element_class: tuple[int, ...]

    @property
    def n_classes(self) -> int:
        return len(self.class_reps)

    def value_at(self, char_index: int, element: int) -> CyclotomicInt:
        return self.values[char_index][self.element_class[element]]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "modulus": self.modulus,
            "degrees": list(self.degrees),
            "class_representatives": list(self.class_reps),
            "class_sizes": list(self.class_sizes),
            "values": [[list(v.coeffs) for v in row] for row in self.values],
        }


def _validate_table(T: CharacterTable) -> None:
    G = T.group
    if sum(d * d for d in T.degrees) != G.order:
        raise CharacterError("degree squares do not sum to the group order")
    nc = T.n_classes
    for i in range(len(T.values)):
        for j in range(i, len(T.values)):
            acc = CyclotomicInt.zero(T.modulus)
            for c in range(nc):
                term = T.values[i][c] * T.values[j][c].conjugate()
                acc = acc + term.scale(T.class_sizes[c])
            expected = G.order if i == j else 0
            if not acc.is_rational or acc.rational_value != expected:
                raise CharacterError(f"row orthogonality fails for characters {i},{j}")


def _abelian_character_table(G: GroupTable) -> CharacterTable:
    """All homomorphisms G -> <zeta_e>, enumerated on a generating set."""
    n = G.order
    e = exponent(G)
    gens = _generating_sequence(G) if n > 1 else []
    if gens and e ** len(gens) > 1_000_000:
        raise UnsupportedGroupError(f"abelian group too large to enumerate: {G.name}")
    # spanning construction: element -> (parent, generator used)
    parent = {0: None}
    order_bfs = [0]
    qi = 0
    while qi < len(order_bfs):
        a = order_bfs[qi]
        qi += 1
        for gi, g in enumerate(gens):
            b = G.mul[a][g]
            if b not in parent:
                parent[b] = (a, gi)
                order_bfs.append(b)
    rows: list[tuple[int, ...]] = []
    assign = [0] * len(gens)
    while True:
        val = [0] * n
        for b in order_bfs[1:]:
            pa, gi = parent[b]
            val[b] = (val[pa] + assign[gi]) % e
        ok = all(val[G.mul[a][b]] == (val[a] + val[b]) % e
                 for a in range(n) for b in range(n))
        if ok:
            rows.append(tuple(val))
        # advance the odometer
        pos = len(assign) - 1
        while pos >= 0:
            assign[pos] += 1
            if assign[pos] < e:
                break
            assign[pos] = 0
            pos -= 1
        if pos < 0:
            break
    rows = sorted(set(rows))
    if len(rows) != n:
        raise CharacterError(f"expected {n} characters, found {len(rows)}")
    classes = conjugacy_classes(G)
    reps = tuple(c[0] for c in classes)
    values = tuple(
        tuple(CyclotomicInt.root_power(e, row[rep]) for rep in reps)
        for row in rows)
    T = CharacterTable(G, e, (1,) * n, reps, tuple(len(c) for c in classes),
                       values, tuple(class_of(G)))
    _validate_table(T)
    return T


def linear_characters(G: GroupTable, e: int) -> list[list[CyclotomicInt]]:
    """Degree-1 characters of G (pulled back from its abelianization),
    as value-per-element rows over modulus e."""
    D = derived_subgroup(G)
    Q = quotient_group(G, D, name=f"{G.name}_ab")
    # projection: element -> coset representative index
    mem = set(D.members)
    rep_of = {}
    reps = []
    for g in range(G.order):
        if g in rep_of:
            continue
        coset = sorted(G.mul[h][g] for h in D.members)
        r = coset[0]
        reps.append(r)
        for a in coset:
            rep_of[a] = r
    reps.sort()
    idx = {r: i for i, r in enumerate(reps)}
    TQ = _abelian_character_table(Q)
    rows = []
    for ci in range(len(TQ.values)):
        scaled = [CyclotomicInt.root_power(e, 0)] * G.order
        for g in range(G.order):
            v = TQ.value_at(ci, idx[rep_of[g]])
            # re-embed from modulus exponent(Q) into modulus e
            t = _root_exponent(v)
            scaled[g] = CyclotomicInt.root_power(e, t * (e // v.e))
        rows.append(scaled)
    return rows


def _root_exponent(v: CyclotomicInt) -> int:
    """The t with v == zeta^t; character values of degree-1 characters only."""
    for t in range(v.e):
        if v == CyclotomicInt.root_power(v.e, t):
            return t
    raise CharacterError("value is not a root of unity")


def _q8_like_reference(n: int) -> GroupTable:
    from .catalog import catalog
    k = n.bit_length() - 1
    return catalog("Q8" if k == 3 else f"Q8xC2^{k - 3}" if k > 4 else "Q8xC2")


def _q8x2n_value_rows(R: GroupTable, e: int) -> tuple[list[list[CyclotomicInt]], list[int]]:
    """Value-per-element rows for Q8 x C2^m with the catalog index packing."""
    from .catalog import catalog
    Q8 = catalog("Q8")
    m = (R.order // 8).bit_length() - 1
    # linear characters of Q8 from its abelianization, plus the degree-2 row:
    # 2 at the identity, -2 at the central involution, 0 on order-4 elements
    rows_q8 = linear_characters(Q8, e)
    z = next(g for g in range(1, 8) if Q8.mul[g][g] == 0)
    deg2 = [CyclotomicInt.zero(e) for _ in range(8)]
    deg2[0] = CyclotomicInt.integer(e, 2)
    deg2[z] = CyclotomicInt.integer(e, -2)
    rows = [(r, 1) for r in rows_q8] + [(deg2, 2)]
    for _ in range(m):
        doubled = []
        for row, deg in rows:
            size = len(row)
            for sign in (1, -1):
                new = [CyclotomicInt.zero(e)] * (2 * size)
                for idx in range(2 * size):
                    v = row[idx >> 1]
                    new[idx] = v if (idx & 1) == 0 or sign == 1 else -v
                doubled.append((new, deg))
        rows = doubled
    return [r for r, _ in rows], [d for _, d in rows]


_Q8_PATH_VALIDATED = False


def _validate_q8_path(T: CharacterTable) -> None:
    """One-time cross-check of the quaternion table against the matrix path."""
    global _Q8_PATH_VALIDATED
    if _Q8_PATH_VALIDATED:
        return
    _Q8_PATH_VALIDATED = True
    from .catalog import catalog
    from .spectral import is_integral_graph
    Q8 = catalog("Q8")
    TQ = character_table(Q8)
    z = next(g for g in range(1, 8) if Q8.mul[g][g] == 0)
    order4 = [g for g in range(1, 8) if g != z]
    fixed_sets = [
        ConnectionSet(Q8, (z,)),
        ConnectionSet(Q8, tuple(range(1, 8))),
        ConnectionSet(Q8, (order4[0], Q8.inv[order4[0]], z)),
    ]
    for S in fixed_sets:
        ent = bh1_spectrum(Q8, S, TQ)
        got = spectrum_counter(ent)
        rep = is_integral_graph(Q8, S)
        want = {r: m for r, m in rep.integer_roots}
        if not rep.is_integral or got != want:
            raise CharacterError("quaternion character table failed matrix cross-check")


def character_table(G: GroupTable) -> CharacterTable:
    """Exact character table for an abelian group or one isomorphic to Q8 x C2^n."""
    if is_abelian(G):
        return _abelian_character_table(G)
    n = G.order
    if n >= 8 and n & (n - 1) == 0:
        R = _q8_like_reference(n)
        iso = find_isomorphism(G, R)
        if iso is not None:
            e = exponent(G)
            rows, degs = _q8x2n_value_rows(R, e)
            classes = conjugacy_classes(G)
            reps = tuple(c[0] for c in classes)
            values = tuple(
                tuple(row[iso[rep]] for rep in reps) for row in rows)
            T = CharacterTable(G, e, tuple(degs), reps,
                               tuple(len(c) for c in classes), values,
                               tuple(class_of(G)))
            _validate_table(T)
            _validate_q8_path(T)
            return T
    raise UnsupportedGroupError(
        f"no character table for {G.name}: not abelian and not Q8 x C2^n")


def is_rational_table(T: CharacterTable) -> bool:
    return all(v.is_rational for row in T.values for v in row)


# ---------------------------------------------------------------------------
# character-sum spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenvalueEntry:
    value: CyclotomicInt
    multiplicity: int

    @property
    def integer_value(self) -> int:
        return self.value.rational_value


def bh1_spectrum(G: GroupTable, S: ConnectionSet,
                 T: CharacterTable | None = None) -> tuple[EigenvalueEntry, ...]:
    """Spectrum of Cay(G, S) by character sums; S must be conjugation-closed.

    Each irreducible character contributes (1/deg) * sum_{s in S} chi(s)
    with multiplicity deg^2; the entries are asserted real, and total
    multiplicity is |G|.
    """
    if T is None:
        T = character_table(G)
    if T.group is not G and not T.group.same_table(G):
        raise CharacterError("character table belongs to a different group")
    if not S.is_conjugation_closed():
        raise CharacterError("connection set is not closed under conjugation")
    hit = sorted({T.element_class[s] for s in S.members})
    entries = []
    for ci, deg in enumerate(T.degrees):
        acc = CyclotomicInt.zero(T.modulus)
        for c in hit:
            acc = acc + T.values[ci][c].scale(T.class_sizes[c])
        theta = acc.divide_exact(deg)
        if theta != theta.conjugate():
            raise CharacterError("non-real eigenvalue from an inverse-closed set")
        entries.append(EigenvalueEntry(theta, deg * deg))
    if sum(e.multiplicity for e in entries) != G.order:
        raise CharacterError("multiplicities do not sum to the group order")
    return tuple(entries)


def spectrum_counter(entries) -> dict[int, int]:
    """Collapse rational entries into {eigenvalue: multiplicity}; raises if
    any entry is irrational (i.e. the spectrum is not integral)."""
    out: dict[int, int] = {}
    for e in entries:
        v = e.integer_value
        out[v] = out.get(v, 0) + e.multiplicity
    return out


def entries_all_integral(entries) -> bool:
    return all(e.value.is_rational for e in entries)
