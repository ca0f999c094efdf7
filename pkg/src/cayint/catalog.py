"""Built-in catalog of named finite groups.

Names resolve through, in order: exact named entries (mostly presentations
realised by Todd-Coxeter), the cyclic pattern C<n>, the dihedral pattern
D<2n> (2n = group order, 2n >= 4), the two-generator family pattern
G<i><j> with i, j in {2,3,4,6}, and finally direct-product expressions
built from "x"-separated factors with optional ^k repetition
(e.g. "Q8xC2^2", "D8xC3").

Presentation-backed entries expose their generator labels so connection
sets can be given as words (e.g. "x*y^-1").  Direct products suffix each
factor's labels with the 1-based factor position ("i_1", "x_2", ...).
"""

from __future__ import annotations

import re
from functools import lru_cache

from .groups import (GroupTable, GroupError, direct_product, cyclic)
from .presentations import parse_presentation, todd_coxeter, build_gij

# name -> (presentation text, expected order)
PRESENTATIONS: dict[str, tuple[str, int]] = {
    "S3": ("<x,y | x^2=y^3=1, y^x=y^-1>", 6),
    "S4": ("<x,y | x^2=y^3=(x*y)^4=1>", 24),
    "A4": ("<x,y | x^3=y^2=(x*y)^3=1>", 12),
    "Q8": ("<i,j | i^4=1, i^2=j^2, i^j=i^-1>", 8),
    "SL23": ("<x,y | x^3=y^4=y^-1*x*y*x*y^-1*x=x^-1*y^-1*(x^-1*y)^2=(x*y)^3=1>", 24),
    "C3_rtimes_C4": ("<x,y | x^3=y^4=1, x^y=x^-1>", 12),
    "C4_rtimes_C4": ("<x,y | x^4=y^4=1, x^y=x^-1>", 16),
    "S3xC3": ("<x,y,z | x^2=y^3=z^3=[x,z]=[y,z]=1, y^x=y^-1>", 18),
    "C4_ltimes_C3": ("<a,b | a^3=b^4=1, a^b=a^-1>", 12),
    "C4_ltimes_C3_x_C2": ("<x,y,z | x^4=y^3=z^2=[x,z]=[y,z]=1, y^x=y^-1>", 24),
    "C4xC2_rtimes_C4": ("<x,y | x^4=y^4=[x,y]^2=[x^2,y]=[x,y^2]=1>", 32),
    "E27": ("<x,y | x^3=y^3=(x*y)^3=(x*y^-1)^3=1>", 27),
    "C3xC3_rtimes_C4": ("<x,y,z | x^3=y^3=z^4=[x,y]=1, x^z=x^-1, y^z=y^-1>", 36),
}

_CYCLIC_RE = re.compile(r"^C(\d+)$")
_DIHEDRAL_RE = re.compile(r"^D(\d+)$")
_GIJ_RE = re.compile(r"^G([2346])([2346])$")

GIJ_MAX_COSETS = 100000


class UnknownGroupError(GroupError):
    pass


def _product_factors(name: str) -> list[str] | None:
    """Split a product expression on 'x', expanding trailing ^k powers."""
    factors: list[str] = []
    for part in name.split("x"):
        if not part:
            return None
        if "^" in part:
            base, _, exp = part.partition("^")
            if not base or not exp.isdigit() or int(exp) < 1:
                return None
            factors.extend([base] * int(exp))
        else:
            factors.append(part)
    if len(factors) < 2:
        return None
    return factors


@lru_cache(maxsize=None)
def catalog(name: str) -> GroupTable:
    """Return the named group from the catalog (memoized)."""
    key = name.strip()
    if key in PRESENTATIONS:
        text, expected = PRESENTATIONS[key]
        G = todd_coxeter(parse_presentation(text), name=key)
        if G.order != expected:
            raise GroupError(f"{key}: enumeration gave order {G.order}, expected {expected}")
        return G
    m = _CYCLIC_RE.match(key)
    if m:
        return cyclic(int(m.group(1)))
    m = _DIHEDRAL_RE.match(key)
    if m:
        two_n = int(m.group(1))
        if two_n < 4 or two_n % 2:
            raise UnknownGroupError(f"dihedral order must be even and >= 4: {key}")
        n = two_n // 2
        G = todd_coxeter(
            parse_presentation(f"<a,b | a^{n}=b^2=1, b^-1*a*b=a^-1>"), name=key)
        if G.order != two_n:
            raise GroupError(f"{key}: enumeration gave order {G.order}")
        return G
    m = _GIJ_RE.match(key)
    if m:
        P = build_gij(int(m.group(1)), int(m.group(2)))
        return todd_coxeter(P, max_cosets=GIJ_MAX_COSETS, name=key)
    factors = _product_factors(key)
    if factors:
        groups = [catalog(f) for f in factors]
        G = groups[0]
        for f in groups[1:]:
            G = direct_product(G, f)
        from .groups import _product_labels
        return GroupTable(G.mul, name=key, generators=_product_labels(groups))
    raise UnknownGroupError(f"unknown catalog name: {name!r}")


def group_from_spec(spec: str) -> GroupTable:
    """A catalog name, or an inline presentation like '<x,y | ...>'."""
    s = spec.strip()
    if s.startswith("<") or s.startswith("⟨"):
        return todd_coxeter(parse_presentation(s))
    return catalog(s)


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

# (name, classify_default, canonical) -- canonical entries form the pool used
# for isomorphism identification; aliases of another entry are non-canonical.
_MANIFEST_ROWS: list[tuple[str, bool, bool]] = [
    ("C1", True, True),
    ("C2", True, True),
    ("C3", True, True),
    ("C4", True, True),
    ("C5", True, True),
    ("C6", True, True),
    ("C8", True, True),
    ("C9", True, True),
    ("C2^2", True, True),
    ("C2^3", True, True),
    ("C2^4", True, True),
    ("C4xC2", True, True),
    ("C4xC4", True, True),
    ("C6xC2", True, True),
    ("C3xC3", True, True),
    ("S3", True, True),
    ("Q8", True, True),
    ("D8", True, True),
    ("D10", True, True),
    ("A4", True, True),
    ("C3_rtimes_C4", True, True),
    ("C4_ltimes_C3", False, False),  # same group as C3_rtimes_C4, labels swapped
    ("D12", True, True),
    ("D14", True, True),
    ("C4_rtimes_C4", True, True),
    ("D16", True, True),
    ("Q8xC2", True, True),
    ("S3xC3", True, True),
    ("S4", True, True),
    ("SL23", True, True),
    ("C4_ltimes_C3_x_C2", True, True),
    ("D8xC3", True, True),
    ("S3xC4", True, True),
    ("A4xC2", True, True),
    ("E27", True, True),
    ("C4xC2_rtimes_C4", True, True),
    ("Q8xC2^2", True, True),
    ("C3xC3_rtimes_C4", True, True),
    ("SL23xC2", False, True),
    ("Q8xC2^3", False, True),
    ("Q8xC2^4", False, True),
] + [(f"G{i}{j}", False, False) for i in (2, 3, 4, 6) for j in (2, 3, 4, 6)]

GIJ_NAMES = tuple(f"G{i}{j}" for i in (2, 3, 4, 6) for j in (2, 3, 4, 6))


def manifest() -> list[dict]:
    """Machine-readable catalog description (builds every listed group)."""
    rows = []
    for name, classify_default, canonical in _MANIFEST_ROWS:
        G = catalog(name)
        construction = ("presentation" if name in PRESENTATIONS or
                        _DIHEDRAL_RE.match(name) or _GIJ_RE.match(name)
                        else "direct construction")
        rows.append({
            "name": name,
            "order": G.order,
            "construction": construction,
            "generators": dict(G.generators),
            "classify_default": classify_default,
            "canonical": canonical,
        })
    return rows


def classify_default_names() -> list[str]:
    return [name for name, flag, _ in _MANIFEST_ROWS if flag]


def identify(G: GroupTable, pool: list[str] | None = None) -> str | None:
    """Name of the catalog group isomorphic to G, or None.

    The pool defaults to the canonical manifest entries; the first match in
    manifest order wins, so isomorphic aliases resolve to one fixed name.
    """
    from .groups import isomorphic
    names = pool if pool is not None else [
        name for name, _, canonical in _MANIFEST_ROWS if canonical]
    for name in names:
        H = catalog(name)
        if H.order != G.order:
            continue
        if isomorphic(G, H, bound=max(G.order, 256)):
            return name
    return None
