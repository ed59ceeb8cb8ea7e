"""L_p norms and distances of piecewise polynomials with certified enclosures.

Integer p and p = infinity go through exact piecewise integration or exact
per-piece extrema; results are Enclosure values that are exact points
whenever every required evaluation node is rational, and certified tight
intervals otherwise.  Non-integer p falls back to float quadrature at a
reported tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .affine import ZERO, ONE
from .piecewise import Enclosure, E_ZERO, PiecewisePoly
from .polynomials import (Poly, antiderivative, degree, derivative,
                          isolate_roots, peval, ppow, poly, psub)
from .roots import (AlgebraicNumber, Cut, cut_cmp, cut_to_float, make_cut,
                    rational_between)

_ROOT_SCALE_BITS = 64


def _integer_kth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def kth_root_enclosure(v: Enclosure, k: int) -> Enclosure:
    """Certified [lo, hi] for v^(1/k), v >= 0, to ~2^-64 width."""
    if v.hi < 0:
        raise ValueError("negative value under root")
    S = 1 << _ROOT_SCALE_BITS
    lo = max(v.lo, ZERO)
    nlo = (lo.numerator * S ** k) // lo.denominator
    rlo = _integer_kth_root(nlo, k)
    nhi = -((-v.hi.numerator * S ** k) // v.hi.denominator)  # ceil
    rhi = _integer_kth_root(nhi, k) + 1
    return Enclosure(Fraction(rlo, S), Fraction(rhi, S))


def _interval_peval(p: Poly, lo: Fraction, hi: Fraction) -> Enclosure:
    vlo = vhi = ZERO
    for c in reversed(p):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return Enclosure(vlo, vhi)


def _peval_enclosure(p: Poly, c: Cut,
                     width: Fraction = Fraction(1, 2 ** 64)) -> Enclosure:
    if isinstance(c, Fraction):
        v = peval(p, c)
        return Enclosure(v, v)
    r = c.refine(width)
    return _interval_peval(p, r.lo, r.hi)


def _clip_pieces(pw: PiecewisePoly, a: Fraction, b: Fraction):
    """Yield (lo_cut, hi_cut, poly) covering [a, b]; cuts may be algebraic."""
    if a >= b:
        return
    n = len(pw.pieces)
    for k, p in enumerate(pw.pieces):
        lo: Cut = pw.breakpoints[k - 1] if k > 0 else a
        hi: Cut = pw.breakpoints[k] if k < n - 1 else b
        if cut_cmp(lo, b) >= 0 or cut_cmp(hi, a) <= 0:
            continue
        if cut_cmp(lo, a) < 0:
            lo = a
        if cut_cmp(hi, b) > 0:
            hi = b
        if cut_cmp(lo, hi) < 0:
            yield lo, hi, p


def _signed_subintervals(p: Poly, lo: Cut, hi: Cut):
    """Split (lo, hi) at the roots of p; yield (a, b, sign_of_p_inside)."""
    if not p:
        yield lo, hi, 0
        return
    roots = [make_cut(kind, val) for kind, val in isolate_roots(p)]
    inside = [c for c in roots
              if cut_cmp(c, lo) > 0 and cut_cmp(c, hi) < 0]
    cuts = [lo] + inside + [hi]
    for a, b in zip(cuts, cuts[1:]):
        sample = rational_between(a, b)
        v = peval(p, sample)
        yield a, b, (v > 0) - (v < 0)


def lp_pow_integral(pw: PiecewisePoly, p: int, a: Fraction, b: Fraction,
                    ) -> Enclosure:
    """Certified enclosure of integral_a^b |f|^p dx for integer p >= 1."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    total = E_ZERO
    for lo, hi, piece in _clip_pieces(pw, a, b):
        if not piece:
            continue
        if p % 2 == 0:
            F = antiderivative(ppow(piece, p))
            upper = _peval_enclosure(F, hi)
            lower = _peval_enclosure(F, lo)
            total += Enclosure(upper.lo - lower.hi, upper.hi - lower.lo)
        else:
            F = antiderivative(ppow(piece, p))
            for s_lo, s_hi, sign in _signed_subintervals(piece, lo, hi):
                if sign == 0:
                    continue
                upper = _peval_enclosure(F, s_hi)
                lower = _peval_enclosure(F, s_lo)
                seg = Enclosure(upper.lo - lower.hi, upper.hi - lower.lo)
                if sign < 0:
                    seg = Enclosure(-seg.hi, -seg.lo)
                total += seg
    return total


def sup_norm(pw: PiecewisePoly, a: Fraction, b: Fraction) -> Enclosure:
    """Essential sup of |f| on [a, b]: per-piece extrema over closures."""
    best = E_ZERO
    for lo, hi, piece in _clip_pieces(pw, a, b):
        if not piece:
            continue
        candidates: list[Cut] = [lo, hi]
        if degree(piece) >= 2:
            crits = [make_cut(kind, val)
                     for kind, val in isolate_roots(derivative(piece))]
            candidates += [c for c in crits
                           if cut_cmp(c, lo) > 0 and cut_cmp(c, hi) < 0]
        for c in candidates:
            v = _peval_enclosure(piece, c)
            best = best.max_with(Enclosure(max(v.lo, -v.hi), max(v.hi, -v.lo)))
    return best


def _quadrature(pw: PiecewisePoly, p: float, a: Fraction, b: Fraction,
                rel_tol: float = 1e-10) -> Enclosure:
    """Composite-Simpson float quadrature of |f|^p with Richardson control."""
    def integrand(x: float) -> float:
        return abs(float(pw(Fraction(x).limit_denominator(10 ** 15)))) ** p

    nodes = sorted({float(a), float(b)} |
                   {cut_to_float(c) for c in pw.breakpoints
                    if float(a) < cut_to_float(c) < float(b)})
    total_prev = None
    n = 8
    for _ in range(16):
        total = 0.0
        for x0, x1 in zip(nodes, nodes[1:]):
            h = (x1 - x0) / n
            s = integrand(x0) + integrand(x1)
            for i in range(1, n):
                s += (4 if i % 2 else 2) * integrand(x0 + i * h)
            total += s * h / 3
        if total_prev is not None and abs(total - total_prev) <= rel_tol * max(abs(total), 1e-300):
            err = abs(total - total_prev) + rel_tol * abs(total)
            return Enclosure(Fraction(max(total - err, 0.0)), Fraction(total + err))
        total_prev = total
        n *= 2
    err = rel_tol * max(abs(total), 1.0)
    return Enclosure(Fraction(max(total - err, 0.0)), Fraction(total + err))


def lp_norm(pw: PiecewisePoly, p, a, b) -> Enclosure:
    """||f||_{L_p([a,b])} as a certified enclosure (heuristic for float p).

    p in {1, 2, ...} integers and p = math.inf are exact-or-certified; other
    positive p use quadrature with relative tolerance 1e-10.
    """
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        return E_ZERO
    if p == math.inf or (isinstance(p, str) and p == "inf"):
        return sup_norm(pw, a, b)
    if isinstance(p, float) and p.is_integer():
        p = int(p)
    if isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1):
        p = int(p)
        if p < 1:
            raise ValueError("integer p must be >= 1")
        I = lp_pow_integral(pw, p, a, b)
        if p == 1:
            return I
        return kth_root_enclosure(I, p)
    pf = float(p)
    if pf <= 0:
        raise ValueError("p must be positive")
    I = _quadrature(pw, pf, a, b)
    mid = float(I.mid) ** (1.0 / pf)
    return Enclosure(Fraction(float(I.lo) ** (1.0 / pf)),
                     Fraction(max(float(I.hi) ** (1.0 / pf), mid)))


def lp_distance(f: PiecewisePoly, g: PiecewisePoly, p, a, b) -> Enclosure:
    """||f - g||_{L_p([a,b])} via exact piecewise subtraction."""
    return lp_norm(f.sub(g), p, a, b)
