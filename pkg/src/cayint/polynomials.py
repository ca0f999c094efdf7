"""Dense integer polynomials with exact arbitrary-precision arithmetic."""

from __future__ import annotations

from typing import Iterable


class PolynomialError(ValueError):
    pass


class IntPolynomial:
    """Integer polynomial, coefficients stored degree-descending.

    The leading coefficient is always nonzero; the zero polynomial is not
    representable (it never arises: every instance here is monic or divides
    a monic characteristic polynomial).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        i = 0
        while i < len(cs) - 1 and cs[i] == 0:
            i += 1
        cs = cs[i:]
        if not cs or cs[0] == 0:
            raise PolynomialError("zero polynomial is not supported")
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @classmethod
    def x_minus(cls, r: int) -> "IntPolynomial":
        """The monic linear factor x - r."""
        return cls((1, -r))

    @classmethod
    def x_power(cls, n: int) -> "IntPolynomial":
        return cls((1,) + (0,) * n)

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[0] == 1

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"

    def __call__(self, x: int) -> int:
        """Evaluate at an integer by Horner's rule."""
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    # -- arithmetic ---------------------------------------------------

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return IntPolynomial(out)

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise PolynomialError("negative power")
        result = IntPolynomial.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", tuple[int, ...]]:
        """Divide by a monic divisor; returns (quotient, remainder coeffs).

        The remainder is returned as a raw (possibly empty) coefficient
        tuple so an exact division can be recognised as an empty/zero tail.
        """
        if not divisor.is_monic:
            raise PolynomialError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if d == 0:
            return self, ()
        n = len(rem)
        if n - 1 < d:
            raise PolynomialError("dividend degree smaller than divisor degree")
        quot = [0] * (n - d)
        for i in range(n - d):
            q = rem[i]
            quot[i] = q
            if q:
                for j, c in enumerate(divisor.coeffs[1:], start=1):
                    rem[i + j] -= q * c
        tail = tuple(rem[n - d:])
        return IntPolynomial(quot), tail

    def deflate_root(self, r: int) -> "IntPolynomial":
        """Exact synthetic division by (x - r); raises if r is not a root."""
        out = []
        acc = 0
        for c in self.coeffs[:-1]:
            acc = acc * r + c
            out.append(acc)
        if acc * r + self.coeffs[-1] != 0:
            raise PolynomialError(f"{r} is not a root")
        return IntPolynomial(out)

    # -- rendering ----------------------------------------------------

    def __str__(self) -> str:
        """Compact form without spaces, e.g. 'x^2-2x-11'."""
        terms = []
        n = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = n - i
            if e == 0:
                body = str(abs(c))
            else:
                xs = "x" if e == 1 else f"x^{e}"
                body = xs if abs(c) == 1 else f"{abs(c)}{xs}"
            sign = "-" if c < 0 else "+"
            if not terms:
                terms.append(body if c > 0 else "-" + body)
            else:
                terms.append(sign + body)
        return "".join(terms) if terms else "0"
