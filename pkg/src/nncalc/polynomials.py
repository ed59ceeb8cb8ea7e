"""Dense univariate polynomials over exact rationals.

Coefficients are ascending tuples of Fractions with no trailing zeros; the
zero polynomial is the empty tuple.  Includes Sturm sequences and bisection
root isolation (with closed forms for degrees one and two), the foundation
for exact piece extraction and crossing computations.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .affine import ZERO, ONE, as_fraction

Poly = tuple[Fraction, ...]

PZERO: Poly = ()


def poly(coeffs: Sequence[object]) -> Poly:
    cs = [as_fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Poly) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def is_zero(p: Poly) -> bool:
    return not p


def peval(p: Poly, x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                 for i in range(n)])


def psub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0)
                 for i in range(n)])


def pscale(p: Poly, a: Fraction) -> Poly:
    if a == 0:
        return PZERO
    return tuple(c * a for c in p)


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return PZERO
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def ppow(p: Poly, k: int) -> Poly:
    out: Poly = (ONE,)
    base = p
    while k:
        if k & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        k >>= 1
    return out


def pcompose_affine(p: Poly, a: Fraction, b: Fraction) -> Poly:
    """p(a x + b), by Horner in the argument."""
    acc: Poly = PZERO
    arg = poly([b, a])
    for c in reversed(p):
        acc = padd(pmul(acc, arg), poly([c]))
    return acc


def derivative(p: Poly) -> Poly:
    return poly([i * c for i, c in enumerate(p)][1:])


def antiderivative(p: Poly) -> Poly:
    return poly([ZERO] + [c / (i + 1) for i, c in enumerate(p)])


def integrate(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    F = antiderivative(p)
    return peval(F, b) - peval(F, a)


# -- integer normalization and gcd ------------------------------------------------

def primitive(p: Poly) -> Poly:
    """Positive-leading-coefficient integer primitive part (as Fractions)."""
    if not p:
        return PZERO
    den = math.lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return tuple(Fraction(v // g) for v in ints)


def prem(p: Poly, q: Poly) -> Poly:
    """Polynomial remainder of p by q (q nonzero)."""
    r = list(p)
    dq, lq = degree(q), q[-1]
    while len(r) - 1 >= dq and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dq:
            break
        factor = r[-1] / lq
        shift = len(r) - 1 - dq
        for i, c in enumerate(q):
            r[shift + i] -= factor * c
        r.pop()
    return poly(r)


def pgcd(p: Poly, q: Poly) -> Poly:
    a, b = primitive(p), primitive(q)
    while b:
        a, b = b, primitive(prem(a, b))
    return a


def squarefree(p: Poly) -> Poly:
    """Squarefree part p / gcd(p, p'), primitive."""
    if degree(p) < 1:
        return primitive(p)
    g = pgcd(p, derivative(p))
    if degree(g) < 1:
        return primitive(p)
    return primitive(pdiv_exact(primitive(p), g))


def pdiv_exact(p: Poly, q: Poly) -> Poly:
    """Exact quotient; raises if q does not divide p."""
    r = list(p)
    out = [ZERO] * (len(p) - len(q) + 1)
    dq, lq = degree(q), q[-1]
    while len(r) - 1 >= dq and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dq:
            break
        factor = r[-1] / lq
        out[len(r) - 1 - dq] = factor
        shift = len(r) - 1 - dq
        for i, c in enumerate(q):
            r[shift + i] -= factor * c
        r.pop()
    if any(c != 0 for c in r):
        raise ValueError("inexact polynomial division")
    return poly(out)


# -- Sturm sequences and root isolation ----------------------------------------------

def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm sequence of a squarefree polynomial."""
    chain = [p, derivative(p)]
    while chain[-1]:
        r = prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(primitive(pscale(r, Fraction(-1))))
    return [c for c in chain if c]


def _variations(vals: list[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain: list[Poly], x: Fraction) -> int:
    return _variations([peval(c, x) for c in chain])


def count_roots(chain: list[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b]; endpoints must not be roots of chain[0]."""
    return _variations_at(chain, a) - _variations_at(chain, b)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(p[-1])
    return ONE + max((abs(c) / lead for c in p[:-1]), default=ZERO)


def _isqrt_fraction(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        return None
    ns = math.isqrt(x.numerator)
    ds = math.isqrt(x.denominator)
    if ns * ns == x.numerator and ds * ds == x.denominator:
        return Fraction(ns, ds)
    return None


def isolate_roots(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None,
                  ) -> list[tuple[str, object]]:
    """Distinct real roots of p, each as ("rat", q) or ("alg", (sqfree, a, b)).

    Isolating intervals (a, b) are open with p(a) != 0 != p(b) and contain
    exactly one root.  Optional [lo, hi] clip restricts to roots strictly
    inside (lo, hi).
    """
    sf = squarefree(p)
    d = degree(sf)
    if d < 1:
        return []
    results: list[tuple[str, object]] = []
    if d == 1:
        r = -sf[0] / sf[1]
        results = [("rat", r)]
    elif d == 2:
        c, b, a = sf[0], sf[1], sf[2]
        disc = b * b - 4 * a * c
        if disc < 0:
            results = []
        else:
            s = _isqrt_fraction(disc)
            if s is not None:
                r1 = (-b - s) / (2 * a)
                r2 = (-b + s) / (2 * a)
                results = [("rat", r) for r in sorted({r1, r2})]
            else:
                results = _isolate_by_bisection(sf)
    else:
        results = _isolate_by_bisection(sf)
    if lo is None and hi is None:
        return results
    out = []
    for kind, val in results:
        if kind == "rat":
            if (lo is None or val > lo) and (hi is None or val < hi):
                out.append((kind, val))
        else:
            q, a, b = val
            a, b = _shrink_into(q, a, b, lo, hi)
            if a is not None:
                out.append(("alg", (q, a, b)))
    return out


def _isolate_by_bisection(sf: Poly) -> list[tuple[str, object]]:
    chain = sturm_chain(sf)
    B = root_bound(sf)
    lo, hi = -B, B
    # Cauchy bound endpoints are never roots
    total = count_roots(chain, lo, hi)
    results: list[tuple[str, object]] = []

    def recurse(a: Fraction, b: Fraction, n: int):
        if n == 0:
            return
        if n == 1:
            # single root in (a, b]; shave a root endpoint if b is one
            if peval(sf, b) == 0:
                results.append(("rat", b))
                return
            results.append(("alg", (sf, a, b)))
            return
        mid = (a + b) / 2
        if peval(sf, mid) == 0:
            results.append(("rat", mid))
            # perturb to reuse the counting endpoints
            eps = (b - a) / (4 * degree(sf) * 2)
            left, right = mid - eps, mid + eps
            while peval(sf, left) == 0:
                left = (a + left) / 2
            while peval(sf, right) == 0:
                right = (right + b) / 2
            recurse(a, left, count_roots(chain, a, left))
            recurse(right, b, count_roots(chain, right, b))
            return
        nl = count_roots(chain, a, mid)
        recurse(a, mid, nl)
        recurse(mid, b, n - nl)

    recurse(lo, hi, total)
    results.sort(key=_root_key)
    return results


def _root_key(item: tuple[str, object]) -> Fraction:
    kind, val = item
    if kind == "rat":
        return val
    _, a, b = val
    return (a + b) / 2


def _shrink_into(q: Poly, a: Fraction, b: Fraction,
                 lo: Fraction | None, hi: Fraction | None):
    """Refine the isolating interval of q's root until within (lo, hi) or
    provably outside; returns (a, b) or (None, None)."""
    chain = sturm_chain(q)
    for _ in range(20000):
        if lo is not None and b <= lo:
            return None, None
        if hi is not None and a >= hi:
            return None, None
        if (lo is None or a >= lo) and (hi is None or b <= hi):
            return a, b
        mid = (a + b) / 2
        if peval(q, mid) == 0:
            # the root is exactly mid; clip decision is immediate
            if (lo is None or mid > lo) and (hi is None or mid < hi):
                eps = (b - a) / 4
                return mid - eps, mid + eps
            return None, None
        if count_roots(chain, a, mid) == 1:
            b = mid
        else:
            a = mid
    raise RuntimeError("root refinement did not converge")
