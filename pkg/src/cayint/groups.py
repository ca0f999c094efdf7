"""Finite groups as explicit multiplication tables.

Conventions used everywhere in this package:

* elements of a group of order n are the integers 0..n-1,
* element 0 is the identity,
* every construction re-validates the full group axioms (identity row and
  column, Latin square, associativity) before returning, so a GroupTable in
  hand is always an actual group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


class GroupError(ValueError):
    pass


class BoundExceededError(GroupError):
    """An operation was asked to run above its configured size bound."""


def _as_np(table) -> np.ndarray:
    arr = np.asarray(table, dtype=np.intp)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise GroupError("multiplication table must be square")
    return arr


def _validate_table(mul: np.ndarray) -> np.ndarray:
    """Check identity/Latin-square/associativity; return the inverse table."""
    n = mul.shape[0]
    idx = np.arange(n)
    if (mul < 0).any() or (mul >= n).any():
        raise GroupError("table entries out of range")
    if not np.array_equal(mul[0], idx) or not np.array_equal(mul[:, 0], idx):
        raise GroupError("element 0 is not a two-sided identity")
    if not np.array_equal(np.sort(mul, axis=1), np.tile(idx, (n, 1))):
        raise GroupError("rows are not permutations (Latin square violated)")
    if not np.array_equal(np.sort(mul, axis=0), np.tile(idx[:, None], (1, n))):
        raise GroupError("columns are not permutations (Latin square violated)")
    # full associativity check, chunked over the first index to cap memory
    chunk = max(1, (1 << 22) // max(1, n * n))
    for a0 in range(0, n, chunk):
        lhs = mul[mul[a0:a0 + chunk]]          # (k, n, n): (a*b)*c
        rhs = mul[a0:a0 + chunk][:, mul]       # (k, n, n): a*(b*c)
        if not np.array_equal(lhs, rhs):
            raise GroupError("multiplication is not associative")
    inv = np.empty(n, dtype=np.intp)
    rows, cols = np.nonzero(mul == 0)
    inv[rows] = cols
    return inv


class GroupTable:
    """A finite group given by its full multiplication table.

    Immutable after construction; safe to share between workers. `generators`
    maps display labels (e.g. "x", "y") to element indices for groups that
    carry designated generators.
    """

    __slots__ = ("order", "mul", "inv", "name", "generators", "_np")

    def __init__(self, mul, name: str = "", generators: dict[str, int] | None = None):
        arr = _as_np(mul)
        inv = _validate_table(arr)
        self.order = int(arr.shape[0])
        self.mul = tuple(tuple(int(x) for x in row) for row in arr)
        self.inv = tuple(int(x) for x in inv)
        self.name = name or f"group{self.order}"
        self.generators = dict(generators) if generators else {}
        for label, g in self.generators.items():
            if not 0 <= g < self.order:
                raise GroupError(f"generator {label!r} index out of range")
        self._np = arr
        arr.setflags(write=False)

    def np_table(self) -> np.ndarray:
        """Read-only numpy view of the multiplication table."""
        return self._np

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name!r}, order={self.order})"

    def same_table(self, other: "GroupTable") -> bool:
        return self.order == other.order and self.mul == other.mul

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "mul": [x for row in self.mul for x in row],
            "generators": dict(self.generators),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroupTable":
        n = int(data["order"])
        flat = list(data["mul"])
        if len(flat) != n * n:
            raise GroupError("row-major table has wrong length")
        rows = [flat[i * n:(i + 1) * n] for i in range(n)]
        return cls(rows, name=data.get("name", ""), generators=data.get("generators"))


@dataclass(frozen=True)
class SubgroupDescriptor:
    """A subgroup given by its sorted member indices inside a parent group."""

    members: tuple[int, ...]
    parent: GroupTable

    def __post_init__(self):
        members = tuple(sorted(set(int(m) for m in self.members)))
        object.__setattr__(self, "members", members)
        G = self.parent
        if not members or members[0] != 0:
            raise GroupError("subgroup must contain the identity")
        mem = set(members)
        for a in members:
            if G.inv[a] not in mem:
                raise GroupError("subgroup not closed under inverse")
            row = G.mul[a]
            for b in members:
                if row[b] not in mem:
                    raise GroupError("subgroup not closed under multiplication")
        if G.order % len(members) != 0:
            raise GroupError("subgroup size does not divide group order")

    @property
    def size(self) -> int:
        return len(self.members)

    def index(self) -> int:
        return self.parent.order // len(self.members)


@dataclass(frozen=True)
class ActionTable:
    """An action of group K on group N by automorphisms, as permutation rows."""

    domain_order: int
    actor_order: int
    map: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "ActionTable":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        return cls(domain_order=len(rows[0]), actor_order=len(rows), map=rows)

    @classmethod
    def trivial(cls, N: GroupTable, K: GroupTable) -> "ActionTable":
        row = tuple(range(N.order))
        return cls(domain_order=N.order, actor_order=K.order, map=(row,) * K.order)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def cyclic(n: int, name: str | None = None) -> GroupTable:
    """The cyclic group of order n, written additively mod n."""
    if n < 1:
        raise GroupError("cyclic group order must be >= 1")
    rows = [[(i + j) % n for j in range(n)] for i in range(n)]
    gens = {"x": 1} if n > 1 else {}
    return GroupTable(rows, name=name or f"C{n}", generators=gens)


def _product_labels(factors: list[GroupTable]) -> dict[str, int]:
    """Generator labels for a direct product; suffixed by factor position."""
    labels: dict[str, int] = {}
    sizes = [f.order for f in factors]
    for pos, f in enumerate(factors):
        stride = 1
        for s in sizes[pos + 1:]:
            stride *= s
        for lab, g in f.generators.items():
            suffixed = f"{lab}_{pos + 1}" if len(factors) > 1 else lab
            labels[suffixed] = g * stride
    return labels


def direct_product(G: GroupTable, H: GroupTable, name: str | None = None) -> GroupTable:
    """Componentwise product; (g, h) is encoded as g * |H| + h."""
    n, m = G.order, H.order
    gm, hm = G.np_table(), H.np_table()
    # mul[(g1,h1)][(g2,h2)] = (g1 g2, h1 h2)
    big = (gm[:, None, :, None] * m + hm[None, :, None, :]).reshape(n * m, n * m)
    labels = _product_labels([G, H])
    return GroupTable(big, name=name or f"{G.name}x{H.name}", generators=labels)


def _check_action(N: GroupTable, K: GroupTable, act: ActionTable) -> None:
    if act.domain_order != N.order or act.actor_order != K.order:
        raise GroupError("action table shape does not match the groups")
    nm = N.np_table()
    for k in range(K.order):
        sigma = np.asarray(act.map[k], dtype=np.intp)
        if sigma.shape != (N.order,) or len(set(act.map[k])) != N.order:
            raise GroupError(f"action row {k} is not a permutation")
        if sigma[0] != 0 or not np.array_equal(sigma[nm], nm[sigma][:, sigma]):
            raise GroupError(f"action row {k} is not an automorphism of the domain")
    for k1 in range(K.order):
        s1 = act.map[k1]
        for k2 in range(K.order):
            s2 = act.map[k2]
            composed = tuple(s1[s2[x]] for x in range(N.order))
            if composed != act.map[K.mul[k1][k2]]:
                raise GroupError("action does not respect actor multiplication")


def semidirect_product(N: GroupTable, K: GroupTable, act: ActionTable,
                       name: str | None = None) -> GroupTable:
    """Semidirect product with K acting on N; (n, k) encoded as n * |K| + k.

    Multiplication: (n1, k1)(n2, k2) = (n1 * act[k1](n2), k1 k2).
    """
    _check_action(N, K, act)
    n, m = N.order, K.order
    rows = []
    for n1 in range(n):
        nrow = N.mul[n1]
        for k1 in range(m):
            sigma = act.map[k1]
            krow = K.mul[k1]
            rows.append([nrow[sigma[n2]] * m + krow[k2]
                         for n2 in range(n) for k2 in range(m)])
    G = GroupTable(rows, name=name or f"{N.name}_rtimes_{K.name}")
    # sanity on the construction: N's copy is normal, copies meet trivially
    n_copy = [i * m for i in range(n)]
    k_copy = list(range(m))
    if set(n_copy) & set(k_copy) != {0}:
        raise GroupError("copies of N and K do not intersect trivially")
    mem = set(n_copy)
    for g in range(G.order):
        for h in n_copy:
            if G.mul[G.mul[G.inv[g]][h]][g] not in mem:
                raise GroupError("copy of N is not normal in the semidirect product")
    return G


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def element_order(G: GroupTable, g: int) -> int:
    if not 0 <= g < G.order:
        raise GroupError("element index out of range")
    k, acc = 1, g
    while acc != 0:
        acc = G.mul[acc][g]
        k += 1
    return k


def order_spectrum(G: GroupTable) -> tuple[int, ...]:
    """Multiset of element orders, as a sorted tuple."""
    return tuple(sorted(element_order(G, g) for g in range(G.order)))


def exponent(G: GroupTable) -> int:
    e = 1
    for g in range(G.order):
        o = element_order(G, g)
        e = e * o // gcd(e, o)
    return e


def is_abelian(G: GroupTable) -> bool:
    arr = G.np_table()
    return bool(np.array_equal(arr, arr.T))


def conjugacy_classes(G: GroupTable) -> list[tuple[int, ...]]:
    """Orbits under conjugation, each sorted; classes ordered by least member."""
    n = G.order
    seen = [False] * n
    classes = []
    for g in range(n):
        if seen[g]:
            continue
        orbit = set()
        stack = [g]
        while stack:
            a = stack.pop()
            if a in orbit:
                continue
            orbit.add(a)
            for x in range(n):
                b = G.mul[G.mul[G.inv[x]][a]][x]
                if b not in orbit:
                    stack.append(b)
        cls = tuple(sorted(orbit))
        for a in cls:
            seen[a] = True
        classes.append(cls)
    classes.sort(key=lambda c: c[0])
    return classes


def class_of(G: GroupTable) -> list[int]:
    """Map element -> index of its conjugacy class in conjugacy_classes(G)."""
    out = [0] * G.order
    for i, cls in enumerate(conjugacy_classes(G)):
        for a in cls:
            out[a] = i
    return out


def center(G: GroupTable) -> SubgroupDescriptor:
    arr = G.np_table()
    members = [g for g in range(G.order) if np.array_equal(arr[g], arr[:, g])]
    return SubgroupDescriptor(tuple(members), G)


def centralizer_size(G: GroupTable, g: int) -> int:
    arr = G.np_table()
    return int(np.count_nonzero(arr[g] == arr[:, g]))


def subgroup_generated(G: GroupTable, gens) -> SubgroupDescriptor:
    """Closure of a set of elements under multiplication (BFS)."""
    gens = sorted(set(int(g) for g in gens))
    for g in gens:
        if not 0 <= g < G.order:
            raise GroupError("generator index out of range")
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            row = G.mul[a]
            for g in gens:
                b = row[g]
                if b not in members:
                    members.add(b)
                    nxt.append(b)
        frontier = nxt
    return SubgroupDescriptor(tuple(sorted(members)), G)


def derived_subgroup(G: GroupTable) -> SubgroupDescriptor:
    comms = set()
    for a in range(G.order):
        ia = G.inv[a]
        for b in range(G.order):
            comms.add(G.mul[G.mul[G.mul[ia][G.inv[b]]][a]][b])
    return subgroup_generated(G, comms)


def subgroup_table(G: GroupTable, H: SubgroupDescriptor, name: str | None = None) -> GroupTable:
    """The subgroup as a standalone GroupTable (members reindexed, 0 first)."""
    pos = {m: i for i, m in enumerate(H.members)}
    rows = [[pos[G.mul[a][b]] for b in H.members] for a in H.members]
    return GroupTable(rows, name=name or f"{G.name}_sub{len(H.members)}")


def normal_subgroups(G: GroupTable, bound: int = 1024) -> list[SubgroupDescriptor]:
    """All normal subgroups, via closures of unions of conjugacy classes.

    Every normal subgroup is a union of conjugacy classes containing the
    identity and closed under multiplication, so the lattice is generated by
    walking closures of class unions; this stays cheap even when the
    class count is large.
    """
    if G.order > bound:
        raise BoundExceededError(
            f"normal_subgroups bound exceeded: |G|={G.order} > {bound}")
    classes = conjugacy_classes(G)
    k = len(classes)
    cls_of = class_of(G)
    sizes = [len(c) for c in classes]
    # bitmask of classes hit by products of members of class i and class j
    prod_bits = [[0] * k for _ in range(k)]
    for i in range(k):
        for a in classes[i]:
            row = G.mul[a]
            for j in range(i, k):
                bits = 0
                for b in classes[j]:
                    bits |= 1 << cls_of[row[b]]
                prod_bits[i][j] |= bits
    for i in range(k):
        for j in range(i):
            prod_bits[i][j] = prod_bits[j][i]

    def close(mask: int) -> int:
        while True:
            new = mask
            live = [i for i in range(k) if (mask >> i) & 1]
            for i in live:
                pb = prod_bits[i]
                for j in live:
                    new |= pb[j]
            if new == mask:
                return mask
            mask = new

    trivial = close(1)  # class of the identity alone
    found = set()
    stack = [trivial]
    while stack:
        m = stack.pop()
        if m in found:
            continue
        found.add(m)
        for c in range(k):
            if not (m >> c) & 1:
                stack.append(close(m | (1 << c)))
    subs = []
    for m in sorted(found, key=lambda m: (sum(sizes[i] for i in range(k) if (m >> i) & 1), m)):
        members = sorted(a for i in range(k) if (m >> i) & 1 for a in classes[i])
        subs.append(SubgroupDescriptor(tuple(members), G))
    return subs


def is_normal(G: GroupTable, H: SubgroupDescriptor) -> bool:
    mem = set(H.members)
    for g in range(G.order):
        ig = G.inv[g]
        for h in H.members:
            if G.mul[G.mul[ig][h]][g] not in mem:
                return False
    return True


def quotient_group(G: GroupTable, N: SubgroupDescriptor, name: str | None = None) -> GroupTable:
    """The quotient G/N on cosets; requires N normal (checked)."""
    if N.parent is not G and not N.parent.same_table(G):
        raise GroupError("subgroup does not belong to this group")
    if not is_normal(G, N):
        raise GroupError("subgroup is not normal; quotient undefined")
    n = G.order
    rep_of = [-1] * n  # element -> least element of its coset
    reps = []
    for g in range(n):
        if rep_of[g] >= 0:
            continue
        coset = sorted(G.mul[h][g] for h in N.members)
        r = coset[0]
        reps.append(r)
        for a in coset:
            rep_of[a] = r
    reps.sort()
    idx_of = {r: i for i, r in enumerate(reps)}
    q = len(reps)
    rows = [[idx_of[rep_of[G.mul[a][b]]] for b in reps] for a in reps]
    Q = GroupTable(rows, name=name or f"{G.name}/N{len(N.members)}")
    # the natural projection must be a homomorphism
    for a in range(n):
        pa = idx_of[rep_of[a]]
        for b in range(n):
            if Q.mul[pa][idx_of[rep_of[b]]] != idx_of[rep_of[G.mul[a][b]]]:
                raise GroupError("projection onto cosets is not a homomorphism")
    return Q


def relabeled(G: GroupTable, perm: list[int], name: str | None = None) -> GroupTable:
    """Transport the group structure along a bijection with perm[0] == 0."""
    if sorted(perm) != list(range(G.order)) or perm[0] != 0:
        raise GroupError("relabeling must be a permutation fixing 0")
    inv_p = [0] * G.order
    for i, p in enumerate(perm):
        inv_p[p] = i
    rows = [[perm[G.mul[inv_p[a]][inv_p[b]]] for b in range(G.order)]
            for a in range(G.order)]
    gens = {lab: perm[g] for lab, g in G.generators.items()}
    return GroupTable(rows, name=name or G.name, generators=gens)


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

def abelianization(G: GroupTable) -> GroupTable:
    return quotient_group(G, derived_subgroup(G), name=f"{G.name}_ab")


def fingerprint(G: GroupTable) -> tuple:
    """Cheap isomorphism invariants used to prune the backtracking search."""
    return (
        G.order,
        order_spectrum(G),
        center(G).size,
        tuple(sorted(len(c) for c in conjugacy_classes(G))),
        derived_subgroup(G).size,
        order_spectrum(abelianization(G)),
    )


def _element_profiles(G: GroupTable) -> list[tuple[int, int, int]]:
    cls = conjugacy_classes(G)
    size_of = {}
    for c in cls:
        for a in c:
            size_of[a] = len(c)
    return [(element_order(G, g), size_of[g], centralizer_size(G, g))
            for g in range(G.order)]


def _generating_sequence(G: GroupTable) -> list[int]:
    gens: list[int] = []
    sub = {0}
    while len(sub) < G.order:
        g = next(i for i in range(G.order) if i not in sub)
        gens.append(g)
        sub = set(subgroup_generated(G, gens).members)
    return gens


def find_isomorphism(G: GroupTable, H: GroupTable) -> list[int] | None:
    """An explicit isomorphism G -> H as an index map, or None.

    Backtracking over images of a generating sequence, with candidate images
    filtered by (order, class size, centralizer size) profiles and the partial
    map closed under multiplication after every choice.
    """
    if G.order != H.order:
        return None
    if G.same_table(H):
        return list(range(G.order))
    if fingerprint(G) != fingerprint(H):
        return None
    n = G.order
    gens = _generating_sequence(G)
    prof_G = _element_profiles(G)
    prof_H = _element_profiles(H)
    candidates = [[h for h in range(n) if prof_H[h] == prof_G[g]] for g in gens]

    def extend(img: dict[int, int], used: set[int], g: int, h: int):
        img = dict(img)
        used = set(used)
        if h in used:
            return None
        img[g] = h
        used.add(h)
        elems = list(img.keys())
        i = 0
        while i < len(elems):
            a = elems[i]
            i += 1
            for b in list(elems):
                for p, q in ((G.mul[a][b], H.mul[img[a]][img[b]]),
                             (G.mul[b][a], H.mul[img[b]][img[a]])):
                    known = img.get(p)
                    if known is None:
                        if q in used:
                            return None
                        img[p] = q
                        used.add(q)
                        elems.append(p)
                    elif known != q:
                        return None
        return img, used

    def search(level: int, img: dict[int, int], used: set[int]):
        if level == len(gens):
            return img if len(img) == n else None
        g = gens[level]
        if g in img:
            return search(level + 1, img, used)
        for h in candidates[level]:
            ext = extend(img, used, g, h)
            if ext is None:
                continue
            result = search(level + 1, *ext)
            if result is not None:
                return result
        return None

    img = search(0, {0: 0}, {0})
    if img is None:
        return None
    return [img[g] for g in range(n)]


def isomorphic(G: GroupTable, H: GroupTable, bound: int = 256) -> bool:
    """Isomorphism test: invariant fingerprints, then generator backtracking."""
    if G.order > bound or H.order > bound:
        raise BoundExceededError(
            f"isomorphism bound exceeded: orders {G.order}, {H.order} > {bound}")
    if G.order != H.order or fingerprint(G) != fingerprint(H):
        return False
    return find_isomorphism(G, H) is not None
