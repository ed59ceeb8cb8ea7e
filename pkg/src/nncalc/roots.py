"""Algebraic breakpoints: real roots as (defining polynomial, isolating interval).

A Cut is either an exact Fraction or an AlgebraicNumber.  AlgebraicNumbers
are immutable; refinement returns a narrower copy.  Total order among cuts is
decidable by interval refinement, with equality settled through polynomial
gcds, so breakpoint lists can always be kept strictly sorted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Union

from .polynomials import (Poly, count_roots, peval, pgcd, degree,
                          poly, sturm_chain)

DEFAULT_REFINE_WIDTH = Fraction(1, 2 ** 64)


@dataclass(frozen=True)
class AlgebraicNumber:
    """The unique root of `defining` inside the open interval (lo, hi).

    `defining` is squarefree with nonzero values at both endpoints.
    """

    defining: Poly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError("isolating interval must be nonempty")

    def _chain(self) -> list[Poly]:
        return sturm_chain(self.defining)

    def refine(self, width: Fraction = DEFAULT_REFINE_WIDTH) -> "AlgebraicNumber":
        """A copy whose isolating interval has width <= `width` (or is exact)."""
        lo, hi = self.lo, self.hi
        chain = self._chain()
        while hi - lo > width:
            mid = (lo + hi) / 2
            v = peval(self.defining, mid)
            if v == 0:
                # the unique root in (lo, hi) is mid itself; pick non-root endpoints
                w = min((hi - lo) / 8, width / 2)
                while peval(self.defining, mid - w) == 0 or peval(self.defining, mid + w) == 0:
                    w /= 2
                lo, hi = mid - w, mid + w
                break
            if count_roots(chain, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return AlgebraicNumber(self.defining, lo, hi)

    def is_root_of(self, q: Poly) -> bool:
        """Whether q vanishes at this number (q need not define it)."""
        if not q:
            return True
        g = pgcd(self.defining, q)
        if degree(g) < 1:
            return False
        # g divides the squarefree defining polynomial, and its roots are
        # common roots; our root lies in (lo, hi) where defining has exactly
        # one root, so g has a root there iff that root is ours.
        chain = sturm_chain(g)
        if peval(g, self.lo) == 0 or peval(g, self.hi) == 0:
            # endpooints are not roots of `defining`, so they cannot be our
            # root; shrink away from them
            ref = self.refine((self.hi - self.lo) / 4)
            return ref.is_root_of(q)
        return count_roots(chain, self.lo, self.hi) == 1

    def to_float(self) -> float:
        r = self.refine(Fraction(1, 2 ** 80))
        return float((r.lo + r.hi) / 2)

    def as_exact(self) -> Fraction | None:
        """The value as a Fraction if the defining polynomial is linear."""
        if degree(self.defining) == 1:
            return -self.defining[0] / self.defining[1]
        return None


Cut = Union[Fraction, AlgebraicNumber]


def make_cut(kind: str, val) -> Cut:
    if kind == "rat":
        return val
    q, a, b = val
    alg = AlgebraicNumber(q, a, b)
    exact = alg.as_exact()
    return exact if exact is not None else alg


def cut_is_rational(c: Cut) -> bool:
    return isinstance(c, Fraction)


def _cmp_rat_alg(x: Fraction, a: AlgebraicNumber) -> int:
    """-1 if x < root, 0 if equal, +1 if x > root."""
    if x <= a.lo:
        return -1
    if x >= a.hi:
        return 1
    if peval(a.defining, x) == 0:
        return 0
    chain = a._chain()
    # the root is in (lo, x) or (x, hi); x is not a root so counting is valid
    return 1 if count_roots(chain, a.lo, x) == 1 else -1


def cut_cmp(a: Cut, b: Cut) -> int:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    if isinstance(a, Fraction):
        return -_cmp_rat_alg(a, b)
    if isinstance(b, Fraction):
        return _cmp_rat_alg(b, a)
    x, y = a, b
    for _ in range(200):
        if x.hi <= y.lo:
            return -1
        if y.hi <= x.lo:
            return 1
        # overlapping: try to settle equality, else refine
        if x.is_root_of(y.defining):
            # x is a root of y's polynomial; equal iff x lies in y's interval
            z = x
            for _ in range(200):
                if z.lo >= y.lo and z.hi <= y.hi:
                    return 0
                if z.hi <= y.lo or z.lo >= y.hi:
                    break
                z = z.refine((z.hi - z.lo) / 4)
            x = z
            continue
        x = x.refine((x.hi - x.lo) / 4)
        y = y.refine((y.hi - y.lo) / 4)
    raise RuntimeError("cut comparison did not converge")


def cut_eq(a: Cut, b: Cut) -> bool:
    return cut_cmp(a, b) == 0


def cut_lt(a: Cut, b: Cut) -> bool:
    return cut_cmp(a, b) < 0


cut_sort_key = cmp_to_key(cut_cmp)


def cut_to_float(c: Cut) -> float:
    return float(c) if isinstance(c, Fraction) else c.to_float()


def cut_enclosure(c: Cut, width: Fraction = DEFAULT_REFINE_WIDTH,
                  ) -> tuple[Fraction, Fraction]:
    if isinstance(c, Fraction):
        return c, c
    r = c.refine(width)
    return r.lo, r.hi


def rational_between(a: Cut, b: Cut) -> Fraction:
    """Some rational strictly between two cuts with a < b."""
    while True:
        alo, ahi = cut_enclosure(a, Fraction(1, 4)) if not isinstance(a, Fraction) else (a, a)
        blo, bhi = cut_enclosure(b, Fraction(1, 4)) if not isinstance(b, Fraction) else (b, b)
        if ahi < blo:
            return _simple_between(ahi, blo)
        if isinstance(a, AlgebraicNumber):
            a = a.refine((a.hi - a.lo) / 8)
        if isinstance(b, AlgebraicNumber):
            b = b.refine((b.hi - b.lo) / 8)


def _simple_between(a: Fraction, b: Fraction) -> Fraction:
    """A rational strictly inside (a, b) with modest denominator."""
    if a < 0 < b:
        return Fraction(0)
    span = b - a
    if span > 1:
        from math import floor
        k = floor(a) + 1
        if a < k < b:
            return Fraction(k)
    return (a + b) / 2


def rational_below(c: Cut) -> Fraction:
    if isinstance(c, Fraction):
        return c - 1
    return c.lo


def rational_above(c: Cut) -> Fraction:
    if isinstance(c, Fraction):
        return c + 1
    return c.hi


def cut_json(c: Cut) -> object:
    if isinstance(c, Fraction):
        return str(c)
    return {"poly": [str(v) for v in c.defining],
            "interval": [str(c.lo), str(c.hi)]}


def cut_from_json(data) -> Cut:
    if isinstance(data, str):
        return Fraction(data)
    q = poly([Fraction(v) for v in data["poly"]])
    return AlgebraicNumber(q, Fraction(data["interval"][0]),
                           Fraction(data["interval"][1]))
