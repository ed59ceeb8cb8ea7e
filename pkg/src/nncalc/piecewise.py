"""Exact univariate piecewise polynomials and their quantitative invariants.

A PiecewisePoly covers all of R: n breakpoints (rational or algebraic cuts)
delimit n+1 pieces, each a rational-coefficient polynomial.  Pieces are
half-open [b, next); the value at a breakpoint comes from the right piece.
Normalization merges adjacent pieces only on exact coefficient equality.

The module provides extraction of scalar rho_r-network realizations,
piece/degree accounting with the depth-driven piece bounds, crossing
profiles, exact disagreement fractions, and L_p norms with certified
enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .affine import ONE, ZERO, as_fraction
from .network import Network, require_valid
from .polynomials import (Poly, PZERO, antiderivative, degree, derivative,
                          integrate, isolate_roots, padd, pcompose_affine,
                          peval, poly, ppow, pscale, psub)
from .roots import (AlgebraicNumber, Cut, cut_cmp, cut_eq, cut_is_rational,
                    cut_json, cut_from_json, cut_to_float, make_cut,
                    rational_above, rational_below, rational_between)


class Enclosure(NamedTuple):
    """Certified interval [lo, hi] containing an exact real value."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    @staticmethod
    def point(x: Fraction) -> "Enclosure":
        return Enclosure(x, x)

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def max_with(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(max(self.lo, other.lo), max(self.hi, other.hi))


E_ZERO = Enclosure(ZERO, ZERO)


@dataclass(frozen=True)
class PiecewisePoly:
    breakpoints: tuple[Cut, ...]
    pieces: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need exactly breakpoints+1 pieces")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def const(c) -> "PiecewisePoly":
        return PiecewisePoly((), (poly([c]),))

    @staticmethod
    def identity() -> "PiecewisePoly":
        return PiecewisePoly((), (poly([0, 1]),))

    @staticmethod
    def from_poly(p: Sequence[object]) -> "PiecewisePoly":
        return PiecewisePoly((), (poly(p),))

    # -- basic queries ------------------------------------------------------

    @property
    def piece_count(self) -> int:
        return len(self.pieces)

    @property
    def max_degree(self) -> int:
        return max((degree(p) for p in self.pieces), default=-1)

    def piece_index(self, x: Fraction) -> int:
        """Index of the piece owning x under the [b, next) convention."""
        lo, hi = 0, len(self.breakpoints)
        while lo < hi:
            mid = (lo + hi) // 2
            if cut_cmp(self.breakpoints[mid], x) <= 0:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        return peval(self.pieces[self.piece_index(x)], x)

    def is_continuous(self) -> bool:
        """Exact check that adjacent pieces agree at every breakpoint."""
        for k, b in enumerate(self.breakpoints):
            diff = psub(self.pieces[k], self.pieces[k + 1])
            if not diff:
                continue
            if isinstance(b, Fraction):
                if peval(diff, b) != 0:
                    return False
            elif not b.is_root_of(diff):
                return False
        return True

    # -- normalization -----------------------------------------------------

    def normalize(self) -> "PiecewisePoly":
        """Merge adjacent pieces with identical coefficient vectors."""
        if not self.breakpoints:
            return self
        bps: list[Cut] = []
        pieces: list[Poly] = [self.pieces[0]]
        for b, p in zip(self.breakpoints, self.pieces[1:]):
            if p == pieces[-1]:
                continue
            bps.append(b)
            pieces.append(p)
        return PiecewisePoly(tuple(bps), tuple(pieces))

    # -- arithmetic ---------------------------------------------------------

    def scale(self, a) -> "PiecewisePoly":
        a = as_fraction(a)
        return PiecewisePoly(self.breakpoints,
                             tuple(pscale(p, a) for p in self.pieces)).normalize()

    def shift_arg(self, h) -> "PiecewisePoly":
        """x -> f(x + h) for rational h; breakpoints move by -h."""
        h = as_fraction(h)
        bps = tuple(_cut_sub(b, h) for b in self.breakpoints)
        return PiecewisePoly(bps, tuple(pcompose_affine(p, ONE, h)
                                        for p in self.pieces))

    def compose_arg(self, a, b) -> "PiecewisePoly":
        """x -> f(a x + b) for rational a > 0."""
        a, b = as_fraction(a), as_fraction(b)
        if a <= 0:
            raise ValueError("only increasing affine arguments are supported")
        bps = tuple(_cut_affine_preimage(c, a, b) for c in self.breakpoints)
        return PiecewisePoly(bps, tuple(pcompose_affine(p, a, b)
                                        for p in self.pieces))

    def add(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return overlay(self, other, lambda p, q: padd(p, q))

    def sub(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return overlay(self, other, lambda p, q: psub(p, q))

    # -- JSON ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"format": "nncalc-pw-v1",
                "breakpoints": [cut_json(b) for b in self.breakpoints],
                "pieces": [[str(c) for c in p] for p in self.pieces]}

    @staticmethod
    def from_json_dict(data) -> "PiecewisePoly":
        bps = tuple(cut_from_json(b) for b in data["breakpoints"])
        pieces = tuple(poly([Fraction(c) for c in p]) for p in data["pieces"])
        return PiecewisePoly(bps, pieces)


def _cut_sub(c: Cut, h: Fraction) -> Cut:
    if isinstance(c, Fraction):
        return c - h
    return AlgebraicNumber(pcompose_affine(c.defining, ONE, h), c.lo - h, c.hi - h)


def _cut_affine_preimage(c: Cut, a: Fraction, b: Fraction) -> Cut:
    """The cut t with a*t + b = c (a > 0)."""
    if isinstance(c, Fraction):
        return (c - b) / a
    return AlgebraicNumber(pcompose_affine(c.defining, a, b),
                           (c.lo - b) / a, (c.hi - b) / a)


def overlay(f: PiecewisePoly, g: PiecewisePoly, combine) -> PiecewisePoly:
    """Piecewise combination on the merged breakpoint set."""
    bps: list[Cut] = []
    pieces: list[Poly] = []
    i = j = 0
    fb, gb = f.breakpoints, g.breakpoints
    pieces.append(combine(f.pieces[0], g.pieces[0]))
    while i < len(fb) or j < len(gb):
        if i == len(fb):
            take_f, take_g = False, True
        elif j == len(gb):
            take_f, take_g = True, False
        else:
            c = cut_cmp(fb[i], gb[j])
            take_f, take_g = c <= 0, c >= 0
        cut = fb[i] if take_f else gb[j]
        if take_f:
            i += 1
        if take_g:
            j += 1
        bps.append(cut)
        pieces.append(combine(f.pieces[i], g.pieces[j]))
    return PiecewisePoly(tuple(bps), tuple(pieces)).normalize()


def affine_combination(terms: Sequence[tuple[Fraction, PiecewisePoly]],
                       bias: Fraction = ZERO) -> PiecewisePoly:
    """sum_i coef_i * f_i + bias via a delta sweep over all breakpoints.

    Each input contributes one event per breakpoint carrying the change of
    its (scaled) polynomial, so the total work is near-linear in the total
    number of breakpoints rather than quadratic.
    """
    events: list[tuple[Cut, Poly]] = []
    start: Poly = poly([bias])
    for coef, f in terms:
        if coef == 0:
            continue
        start = padd(start, pscale(f.pieces[0], coef))
        for k, b in enumerate(f.breakpoints):
            delta = pscale(psub(f.pieces[k + 1], f.pieces[k]), coef)
            if delta:
                events.append((b, delta))
    if not events:
        return PiecewisePoly((), (start,))
    events.sort(key=lambda e: _SortKey(e[0]))
    bps: list[Cut] = []
    pieces: list[Poly] = [start]
    current = start
    idx = 0
    while idx < len(events):
        cut = events[idx][0]
        delta = events[idx][1]
        idx += 1
        while idx < len(events) and cut_eq(events[idx][0], cut):
            delta = padd(delta, events[idx][1])
            idx += 1
        if not delta:
            continue
        current = padd(current, delta)
        bps.append(cut)
        pieces.append(current)
    return PiecewisePoly(tuple(bps), tuple(pieces)).normalize()


class _SortKey:
    __slots__ = ("cut",)

    def __init__(self, cut: Cut):
        self.cut = cut

    def __lt__(self, other: "_SortKey") -> bool:
        return cut_cmp(self.cut, other.cut) < 0

    def __eq__(self, other: "_SortKey") -> bool:
        return cut_cmp(self.cut, other.cut) == 0


# -- rho application and extraction ------------------------------------------------

def apply_rho_pw(f: PiecewisePoly, r: int) -> PiecewisePoly:
    """max(0, f)^r, splitting each piece at the real roots of its polynomial."""
    new_bps: list[Cut] = []
    new_pieces: list[Poly] = []

    n = len(f.pieces)
    for k, p in enumerate(f.pieces):
        left: Cut | None = f.breakpoints[k - 1] if k > 0 else None
        right: Cut | None = f.breakpoints[k] if k < n - 1 else None
        if not p:
            _emit(new_bps, new_pieces, left, PZERO)
            continue
        roots = [make_cut(kind, val) for kind, val in isolate_roots(p)]
        inside = [c for c in roots
                  if (left is None or cut_cmp(c, left) > 0)
                  and (right is None or cut_cmp(c, right) < 0)]
        cuts = [left] + inside + [right]
        pos = ppow(p, r)
        for a, b in zip(cuts, cuts[1:]):
            sample = _sample_inside(a, b)
            val = peval(p, sample)
            _emit(new_bps, new_pieces, a, pos if val > 0 else PZERO)
    out = PiecewisePoly(tuple(new_bps), tuple(new_pieces)).normalize()
    return out


def _emit(bps: list[Cut], pieces: list[Poly], left: Cut | None, piece: Poly):
    if left is None:
        if pieces:
            raise AssertionError("leftmost piece emitted twice")
        pieces.append(piece)
    else:
        bps.append(left)
        pieces.append(piece)


def _sample_inside(a: Cut | None, b: Cut | None) -> Fraction:
    if a is None and b is None:
        return ZERO
    if a is None:
        return rational_below(b) - 1
    if b is None:
        return rational_above(a) + 1
    return rational_between(a, b)


def extract_pieces(net: Network) -> PiecewisePoly:
    """Exact realization of a scalar id/rho network as a PiecewisePoly.

    Layer by layer: affine images are delta-sweep combinations of the neuron
    functions, then each rho_r splits pieces at the isolated real roots of
    the incoming polynomial, clamping negative parts to zero and raising
    nonnegative parts to the r-th power.
    """
    require_valid(net)
    if net.d_in != 1 or net.d_out != 1:
        raise ValueError("piece extraction needs a scalar network")
    for layer in net.layers:
        for a in layer.acts:
            if a.kind == "custom":
                raise ValueError("piece extraction needs id/rho activations only")
    funcs: list[PiecewisePoly] = [PiecewisePoly.identity()]
    for layer in net.layers:
        rows = layer.map.rows_dict()
        nxt: list[PiecewisePoly] = []
        for i in range(layer.map.rows):
            terms = [(v, funcs[j]) for j, v in rows[i].items()]
            g = affine_combination(terms, bias=layer.map.bias[i])
            act = layer.acts[i]
            if act.kind == "rho":
                g = apply_rho_pw(g, act.r)
            nxt.append(g)
        funcs = nxt
    return funcs[0].normalize()


def count_pieces(pw: PiecewisePoly) -> int:
    return pw.normalize().piece_count


# -- worst-case piece bounds --------------------------------------------------------

def piece_bound(W: int, N: int, L: int, r: int, mode: str) -> int:
    """Upper bound on the piece count of any scalar rho_r-network realization.

    mode="weights": Lambda * W^(L//2); mode="neurons": Lambda * N^(L-1).
    The Lambda constants come from the semi-algebraic composition recursions:
    per hidden layer a factor 2(1+deg) per activation crossing, accumulated
    over pairs of layers in the weights mode.
    """
    if L < 1:
        raise ValueError("L must be positive")
    if mode == "neurons":
        C = 4
        for ell in range(1, L):
            C = 2 * (1 + r ** ell) * C
        return max(1, C * N ** (L - 1))
    if mode == "weights":
        C = 4
        for t in range((L - 1) // 2):
            Cp = 2 * C * (1 + r ** (2 * t + 1))
            C = 2 * (1 + r ** (2 * t + 2)) * Cp
        return max(1, C * W ** (L // 2))
    raise ValueError(f"unknown mode {mode!r}")


# -- crossing numbers ----------------------------------------------------------------

@dataclass(frozen=True)
class CrossingProfile:
    """Components of the 1/2-superlevel indicator of a piecewise polynomial.

    components: ordered (lo, hi, level) with None meaning +-infinity; the
    level-1 sets are closed where they meet level-0 neighbours.
    """

    components: tuple[tuple[object, object, int], ...]
    crossing_number: int


class _StepFn:
    """Indicator data of {f >= 1/2}: open-cell levels plus point levels."""

    __slots__ = ("cuts", "open_levels", "point_levels")

    def __init__(self, cuts: list[Cut], open_levels: list[int],
                 point_levels: list[int]):
        self.cuts = cuts
        self.open_levels = open_levels
        self.point_levels = point_levels

    def simplify(self) -> "_StepFn":
        """Drop cuts that separate nothing (same level on both sides and at
        the point)."""
        cuts, opens, points = [], [self.open_levels[0]], []
        for k, c in enumerate(self.cuts):
            a, p, b = self.open_levels[k], self.point_levels[k], self.open_levels[k + 1]
            if a == p == b:
                continue
            cuts.append(c)
            points.append(p)
            opens.append(b)
        # re-merge identical neighbouring opens is unnecessary: kept cuts differ
        return _StepFn(cuts, opens, points)

    def cells(self):
        """Alternating (kind, level) cells: 'open' then 'point' then 'open'..."""
        out = [("open", self.open_levels[0])]
        for k in range(len(self.cuts)):
            out.append(("point", self.point_levels[k]))
            out.append(("open", self.open_levels[k + 1]))
        return out


def _sign_at_cut(p: Poly, c: Cut) -> int:
    if not p:
        return 0
    if isinstance(c, Fraction):
        v = peval(p, c)
        return (v > 0) - (v < 0)
    if c.is_root_of(p):
        return 0
    x = c
    for _ in range(300):
        lo, hi = _interval_eval(p, x.lo, x.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        x = x.refine((x.hi - x.lo) / 8)
    raise RuntimeError("sign determination did not converge")


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Crude interval Horner evaluation of p over [lo, hi]."""
    vlo = vhi = ZERO
    for c in reversed(p):
        cands = [vlo * lo, vlo * hi, vhi * lo, vhi * hi]
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


def _step_function(pw: PiecewisePoly) -> _StepFn:
    shifted = PiecewisePoly(pw.breakpoints,
                            tuple(psub(p, poly([Fraction(1, 2)]))
                                  for p in pw.pieces))
    cuts: list[Cut] = []
    opens: list[int] = []
    points: list[int] = []
    n = len(shifted.pieces)
    for k, p in enumerate(shifted.pieces):
        left = shifted.breakpoints[k - 1] if k > 0 else None
        right = shifted.breakpoints[k] if k < n - 1 else None
        roots = [make_cut(kind, val) for kind, val in isolate_roots(p)] if p else []
        inside = [c for c in roots
                  if (left is None or cut_cmp(c, left) > 0)
                  and (right is None or cut_cmp(c, right) < 0)]
        gaps = [left] + inside + [right]
        for a, b in zip(gaps, gaps[1:]):
            if a is not None:
                # point value at a cut comes from the right piece (half-open
                # convention); for a root cut the value is exactly 1/2
                cuts.append(a)
                points.append(1 if _sign_at_cut(p, a) >= 0 else 0)
            sample = _sample_inside(a, b)
            v = peval(p, sample) if p else ZERO
            opens.append(1 if v >= 0 else 0)
    return _StepFn(cuts, opens, points).simplify()


def _components(step: _StepFn) -> list[tuple[object, object, int]]:
    comps: list[tuple[object, object, int]] = []
    cells = step.cells()
    bounds: list[tuple[object, object]] = [(None, step.cuts[0] if step.cuts else None)]
    for k in range(len(step.cuts)):
        bounds.append((step.cuts[k], step.cuts[k]))
        bounds.append((step.cuts[k],
                       step.cuts[k + 1] if k + 1 < len(step.cuts) else None))
    cur_level = cells[0][1]
    cur_lo = bounds[0][0]
    cur_hi = bounds[0][1]
    for (kind, lvl), (lo, hi) in zip(cells[1:], bounds[1:]):
        if lvl == cur_level:
            cur_hi = hi
        else:
            comps.append((cur_lo, cur_hi, cur_level))
            cur_level, cur_lo, cur_hi = lvl, lo, hi
    comps.append((cur_lo, cur_hi, cur_level))
    return comps


def crossing_profile(pw: PiecewisePoly) -> CrossingProfile:
    """Exact components of {f >= 1/2} and {f < 1/2} over R."""
    comps = _components(_step_function(pw))
    return CrossingProfile(tuple(comps), len(comps))


def crossing_number(pw: PiecewisePoly) -> int:
    return crossing_profile(pw).crossing_number


def disagreement_fraction(f: PiecewisePoly, g: PiecewisePoly) -> Fraction:
    """|{I in I_f : f-tilde != g-tilde on all of I}| / Cr(f), exactly."""
    F = _step_function(f)
    G = _step_function(g)
    merged: list[Cut] = []
    fi = gi = 0
    while fi < len(F.cuts) or gi < len(G.cuts):
        if fi == len(F.cuts):
            c = G.cuts[gi]
            gi += 1
        elif gi == len(G.cuts):
            c = F.cuts[fi]
            fi += 1
        else:
            cmpv = cut_cmp(F.cuts[fi], G.cuts[gi])
            c = F.cuts[fi] if cmpv <= 0 else G.cuts[gi]
            fi += 1 if cmpv <= 0 else 0
            gi += 1 if cmpv >= 0 else 0
        if merged and cut_eq(merged[-1], c):
            continue
        merged.append(c)

    def cells_on_merged(S: _StepFn) -> list[int]:
        """Levels of S on the merged cell sequence open, point, open, ..."""
        out = []
        si = 0  # S.cuts consumed so far; merged contains every S cut
        for c in merged:
            out.append(S.open_levels[si])
            if si < len(S.cuts) and cut_eq(S.cuts[si], c):
                out.append(S.point_levels[si])
                si += 1
            else:
                out.append(S.open_levels[si])
        out.append(S.open_levels[si])
        return out

    f_cells = cells_on_merged(F)
    g_cells = cells_on_merged(G)

    # components of f-tilde are the maximal constant runs of f_cells; the
    # merged refinement preserves them exactly
    total = 0
    disagree = 0
    i = 0
    while i < len(f_cells):
        j = i
        ok = True
        while j < len(f_cells) and f_cells[j] == f_cells[i]:
            if g_cells[j] == f_cells[j]:
                ok = False
            j += 1
        total += 1
        if ok:
            disagree += 1
        i = j
    return Fraction(disagree, total)
