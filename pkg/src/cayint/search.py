"""Exhaustive, witness-producing decision of the Cayley-integral property.

Inverse-closed subsets are enumerated as bitmasks: involutions occupy the
low bits, inverse pairs the high bits, and masks run in increasing numeric
order, so witnesses are reproducible across runs, platforms, and worker
counts.  In witness mode the reported `sets_checked` and method breakdown
always describe the masks up to and including the minimal witness,
regardless of how much speculative work parallel workers performed.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groups import (GroupTable, BoundExceededError, element_order,
                     subgroup_generated, subgroup_table, normal_subgroups,
                     conjugacy_classes)
from .spectral import (ConnectionSet, SpectrumReport, adjacency_np,
                       is_integral_graph, lift_report, spectrum_report_fast)
from .characters import (character_table, bh1_spectrum, entries_all_integral,
                         UnsupportedGroupError, CharacterTable)

ALLOWED_ORDERS = frozenset({1, 2, 3, 4, 6})
STRATEGIES = ("matrix", "characters-when-valid", "auto")

_CHUNK = 4096


@dataclass(frozen=True)
class SubsetSpace:
    """The inverse-closed subsets of G \\ {1}, as an atom bitmask space."""

    group: GroupTable
    involutions: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def n_atoms(self) -> int:
        return len(self.involutions) + len(self.pairs)

    @property
    def total_count(self) -> int:
        return 1 << self.n_atoms

    @property
    def atoms(self) -> list[tuple[int, ...]]:
        return [(g,) for g in self.involutions] + list(self.pairs)

    def members_of(self, mask: int) -> tuple[int, ...]:
        out = []
        for b, g in enumerate(self.involutions):
            if (mask >> b) & 1:
                out.append(g)
        base = len(self.involutions)
        for b, (g, h) in enumerate(self.pairs):
            if (mask >> (base + b)) & 1:
                out.append(g)
                out.append(h)
        return tuple(sorted(out))


def subset_space(G: GroupTable) -> SubsetSpace:
    involutions = []
    pairs = []
    for g in range(1, G.order):
        ig = G.inv[g]
        if ig == g:
            involutions.append(g)
        elif g < ig:
            pairs.append((g, ig))
    return SubsetSpace(G, tuple(involutions), tuple(pairs))


@dataclass(frozen=True)
class IntegralityVerdict:
    group: str
    cayley_integral: bool
    sets_checked: int
    subset_count: int
    witness: tuple[ConnectionSet, SpectrumReport] | None
    elapsed: float
    method_breakdown: dict[str, int]

    def to_json(self) -> dict:
        # elapsed is intentionally omitted: reports must be byte-identical
        # across runs and worker counts
        return {
            "group": self.group,
            "cayley_integral": self.cayley_integral,
            "sets_checked": self.sets_checked,
            "subset_count": self.subset_count,
            "witness": None if self.witness is None else {
                "set": self.witness[0].describe(),
                "set_indices": list(self.witness[0].members),
                "report": self.witness[1].to_json(),
            },
            "method_breakdown": dict(sorted(self.method_breakdown.items())),
        }


# ---------------------------------------------------------------------------
# fast reject by element order
# ---------------------------------------------------------------------------

def fast_reject_order(G: GroupTable) -> tuple[ConnectionSet, SpectrumReport] | None:
    """Witness {x, x^-1} for the first element of order outside {1,2,3,4,6}.

    The spectrum is computed (on the generated cyclic subgroup, then lifted
    by the component count), never assumed from the order condition.
    """
    for g in range(1, G.order):
        o = element_order(G, g)
        if o in ALLOWED_ORDERS:
            continue
        S = ConnectionSet(G, (g, G.inv[g]))
        sub = subgroup_generated(G, [g])
        H = subgroup_table(G, sub)
        pos = {m: i for i, m in enumerate(sub.members)}
        local = ConnectionSet(H, tuple(pos[m] for m in S.members))
        rep = is_integral_graph(H, local)
        lifted = lift_report(rep, G.order // o, bound=local.size).with_context(S)
        if not lifted.is_integral:
            return S, lifted
    return None


# ---------------------------------------------------------------------------
# per-set evaluation
# ---------------------------------------------------------------------------

class _Evaluator:
    """Evaluates one inverse-closed subset; picklable for worker processes."""

    def __init__(self, G: GroupTable, space: SubsetSpace, strategy: str,
                 table: CharacterTable | None):
        self.G = G
        self.space = space
        self.strategy = strategy
        self.table = table
        self.memo: dict = {}

    def method_for(self, S: ConnectionSet) -> str:
        if self.strategy != "matrix" and self.table is not None \
                and S.is_conjugation_closed():
            return "characters"
        return "matrix"

    def integral(self, mask: int) -> tuple[bool, str]:
        S = ConnectionSet(self.G, self.space.members_of(mask))
        method = self.method_for(S)
        if method == "characters":
            entries = bh1_spectrum(self.G, S, self.table)
            return entries_all_integral(entries), method
        return self._matrix_verdict(S), method

    def _matrix_verdict(self, S: ConnectionSet) -> bool:
        G = self.G
        sub = subgroup_generated(G, S.members)
        if sub.size == G.order:
            return spectrum_report_fast(adjacency_np(G, S.members), S.size).is_integral
        key = (sub.members, S.members)
        hit = self.memo.get(key)
        if hit is None:
            H = subgroup_table(G, sub)
            pos = {m: i for i, m in enumerate(sub.members)}
            local = tuple(pos[m] for m in S.members)
            hit = spectrum_report_fast(adjacency_np(H, local), len(local)).is_integral
            if len(self.memo) > (1 << 16):
                self.memo.clear()
            self.memo[key] = hit
        return hit

    def scan_chunk(self, bounds: tuple[int, int]):
        """Return (first non-integral mask or None, method counts for the chunk)."""
        start, end = bounds
        counts: dict[str, int] = {}
        for mask in range(start, end):
            ok, method = self.integral(mask)
            counts[method] = counts.get(method, 0) + 1
            if not ok:
                return mask, counts
        return None, counts


_WORKER_EVAL: _Evaluator | None = None


def _init_worker(ev: _Evaluator):
    global _WORKER_EVAL
    _WORKER_EVAL = ev


def _worker_scan(bounds):
    return _WORKER_EVAL.scan_chunk(bounds)


# ---------------------------------------------------------------------------
# batch character kernel
# ---------------------------------------------------------------------------

def _every_subset_conjugation_closed(G: GroupTable) -> bool:
    """True iff every conjugacy class is {a} or {a, a^-1}; then every
    inverse-closed subset is automatically conjugation-closed."""
    for cls in conjugacy_classes(G):
        if len(cls) > 2:
            return False
        if not all(c in (cls[0], G.inv[cls[0]]) for c in cls):
            return False
    return True


def _batch_first_nonintegral(G: GroupTable, space: SubsetSpace,
                             T: CharacterTable, stop_early: bool):
    """Vectorised character sweep over all masks in increasing order.

    Returns (first non-integral mask or None, masks scanned).  Exact: the
    per-atom character sums are integers in cyclotomic coordinates; a mask
    is integral iff for every character the non-constant coordinates vanish
    and the constant one is divisible by the degree.
    """
    atoms = space.atoms
    n_atoms = len(atoms)
    nchars = len(T.degrees)
    phi = len(T.values[0][0].coeffs)
    atom_sums = np.zeros((n_atoms, nchars * phi), dtype=np.int64)
    for ai, atom in enumerate(atoms):
        for ci in range(nchars):
            acc = None
            for g in atom:
                v = T.value_at(ci, g)
                acc = v if acc is None else acc + v
            atom_sums[ai, ci * phi:(ci + 1) * phi] = acc.coeffs
    degrees = np.asarray(T.degrees, dtype=np.int64)
    total = space.total_count
    first = None
    for start in range(0, total, 1 << 16):
        end = min(start + (1 << 16), total)
        masks = np.arange(start, end, dtype=np.uint64)
        bits = ((masks[:, None] >> np.arange(n_atoms, dtype=np.uint64)) & 1).astype(np.int64)
        sums = (bits @ atom_sums).reshape(len(masks), nchars, phi)
        ok = np.ones(len(masks), dtype=bool)
        if phi > 1:
            ok &= (sums[:, :, 1:] == 0).all(axis=(1, 2))
        ok &= (sums[:, :, 0] % degrees[None, :] == 0).all(axis=1)
        if not ok.all() and first is None:
            first = start + int(np.nonzero(~ok)[0][0])
            if stop_early:
                return first, first + 1
    return first, total


# ---------------------------------------------------------------------------
# the main decision procedure
# ---------------------------------------------------------------------------

def is_cayley_integral(G: GroupTable, strategy: str = "auto",
                       exhaustive: bool = False, jobs: int = 1,
                       subset_bound: int = 1 << 24,
                       matrix_order_bound: int = 64) -> IntegralityVerdict:
    """Decide whether every undirected Cayley graph over G is integral.

    Enumerates all inverse-closed subsets in increasing mask order, stopping
    at the first non-integral witness unless `exhaustive` is set.  The
    strategy picks the evaluation path per set: "matrix" forces the
    characteristic-polynomial pipeline, "characters-when-valid" uses
    character sums whenever the set is conjugation-closed and the table is
    supported, "auto" additionally vectorises the character path when every
    subset qualifies.  The witness always carries a matrix-path
    SpectrumReport, whatever path flagged it.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.perf_counter()
    space = subset_space(G)
    if space.total_count > subset_bound:
        raise BoundExceededError(
            f"{G.name}: {space.total_count} subsets exceed the bound "
            f"{subset_bound}; raise it explicitly to proceed")
    table = None
    if strategy != "matrix":
        try:
            table = character_table(G)
        except UnsupportedGroupError:
            table = None
    if table is None and G.order > matrix_order_bound:
        raise BoundExceededError(
            f"{G.name}: order {G.order} exceeds the matrix-path bound "
            f"{matrix_order_bound} and the character path does not apply")

    if not exhaustive:
        fr = fast_reject_order(G)
        if fr is not None:
            return IntegralityVerdict(
                G.name, False, 1, space.total_count, fr,
                time.perf_counter() - t0, {"fast-reject": 1})

    witness_mask = None
    breakdown: dict[str, int] = {}
    evaluator = _Evaluator(G, space, strategy, table)

    use_batch = (strategy == "auto" and table is not None
                 and _every_subset_conjugation_closed(G))
    if use_batch:
        first, _ = _batch_first_nonintegral(G, space, table, stop_early=not exhaustive)
        witness_mask = first
        upto = space.total_count if (exhaustive or first is None) else first + 1
        breakdown = {"characters": upto}
        sets_checked = upto
    else:
        chunks = [(s, min(s + _CHUNK, space.total_count))
                  for s in range(0, space.total_count, _CHUNK)]
        results = []
        if jobs > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                     initargs=(evaluator,)) as pool:
                for res in pool.map(_worker_scan, chunks):
                    results.append(res)
                    if res[0] is not None and not exhaustive:
                        break
        else:
            for bounds in chunks:
                res = evaluator.scan_chunk(bounds)
                results.append(res)
                if res[0] is not None and not exhaustive:
                    break
        for first, counts in results:
            if first is not None:
                witness_mask = first
                break
        if witness_mask is not None and not exhaustive:
            # canonical bookkeeping for masks 0..witness, independent of the
            # amount of speculative parallel work
            breakdown = {}
            for mask in range(witness_mask + 1):
                S = ConnectionSet(G, space.members_of(mask))
                m = evaluator.method_for(S)
                breakdown[m] = breakdown.get(m, 0) + 1
            sets_checked = witness_mask + 1
        else:
            for _, counts in results:
                for k, v in counts.items():
                    breakdown[k] = breakdown.get(k, 0) + v
            sets_checked = space.total_count

    witness = None
    if witness_mask is not None:
        S = ConnectionSet(G, space.members_of(witness_mask))
        report = is_integral_graph(G, S)
        if report.is_integral:
            raise RuntimeError("internal error: witness did not confirm")
        witness = (S, report)
        if exhaustive:
            sets_checked = space.total_count
    return IntegralityVerdict(
        G.name, witness is None, sets_checked, space.total_count, witness,
        time.perf_counter() - t0, breakdown)


# ---------------------------------------------------------------------------
# boolean algebra generated by the normal subgroups
# ---------------------------------------------------------------------------

def _boolean_algebra_atoms(G: GroupTable, bound: int) -> list[tuple[int, ...]]:
    """Atoms of the boolean algebra generated by the normal subgroups:
    cells of the membership-pattern partition of the elements."""
    subs = normal_subgroups(G, bound=bound)
    member_sets = [frozenset(H.members) for H in subs]
    cells: dict[tuple[bool, ...], list[int]] = {}
    for g in range(G.order):
        pat = tuple(g in ms for ms in member_sets)
        cells.setdefault(pat, []).append(g)
    atoms = sorted((tuple(v) for v in cells.values()), key=lambda c: c[0])
    assert atoms[0] == (0,), "identity cell must be the trivial subgroup"
    return atoms


def iter_boolean_algebra_sets(G: GroupTable, bound: int = 1024):
    """Yield every member of the boolean algebra, as S = B \\ {1}.

    Members of the algebra are exactly the unions of membership-pattern
    atoms; dropping the identity atom enumerates each candidate connection
    set once.  Every yielded set is inverse- and conjugation-closed.
    """
    atoms = _boolean_algebra_atoms(G, bound)[1:]
    k = len(atoms)
    for mask in range(1 << k):
        members: list[int] = []
        for b in range(k):
            if (mask >> b) & 1:
                members.extend(atoms[b])
        yield ConnectionSet(G, tuple(sorted(members)))


def boolean_algebra_sets(G: GroupTable, bound: int = 1024) -> list[ConnectionSet]:
    return list(iter_boolean_algebra_sets(G, bound))


def _audit_chunk(args):
    """Spectral verdicts for one mask range over boolean-algebra atoms."""
    G, atoms, start, end = args
    n = G.order
    stack = np.zeros((end - start, n, n), dtype=np.int64)
    sizes = []
    for i, mask in enumerate(range(start, end)):
        members: list[int] = []
        for b in range(len(atoms)):
            if (mask >> b) & 1:
                members.extend(atoms[b])
        sizes.append(len(members))
        stack[i] = adjacency_np(G, members)
    hints = np.linalg.eigvalsh(stack.astype(np.float64))
    for i, mask in enumerate(range(start, end)):
        rep = spectrum_report_fast(stack[i], sizes[i], eig_hint=hints[i])
        if not rep.is_integral:
            return mask
    return None


def spectral_boolean_algebra_audit(G: GroupTable, bound: int = 1024,
                                   jobs: int = 1) -> tuple[int, int | None]:
    """Matrix-path verdict for every boolean-algebra connection set.

    Returns (number of sets audited, first non-integral mask or None).
    Exactness is inherited from spectrum_report_fast; float eigenvalues are
    hints only.
    """
    atoms = _boolean_algebra_atoms(G, bound)[1:]
    total = 1 << len(atoms)
    chunks = [(G, atoms, s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]
    first_bad = None
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for res in pool.map(_audit_chunk, chunks, chunksize=4):
                if res is not None:
                    first_bad = res
                    break
    else:
        for ch in chunks:
            res = _audit_chunk(ch)
            if res is not None:
                first_bad = res
                break
    return total, first_bad


# ---------------------------------------------------------------------------
# batch catalog classification
# ---------------------------------------------------------------------------

def classify_catalog(names, jobs: int = 1, strategy: str = "auto",
                     subset_bound: int = 1 << 24) -> list[IntegralityVerdict]:
    from .catalog import catalog
    out = []
    for name in names:
        G = catalog(name)
        out.append(is_cayley_integral(G, strategy=strategy, jobs=jobs,
                                      subset_bound=subset_bound))
    return out
