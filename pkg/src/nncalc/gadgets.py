"""Exact special-purpose networks: sawtooth, B-splines, squashing units,
multiplication trees, tensor B-splines, indicator approximants, localizers.

Every constructor returns an exact realization and asserts the complexity
budget attached to it; `budget_report` helpers expose the same numbers to the
service layer and CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import ONE, ZERO, AffineMap, as_fraction
from .calculus import (BudgetViolation, _check, cartesian, compose_fused,
                       compose_stacked, pre_post_affine,
                       shifted_monomial_coefficients, sum_networks)
from .network import (ID, Act, Layer, Network, complexity, constant_network,
                      evaluate, rho)
from .piecewise import PiecewisePoly
from .polynomials import degree, poly


# -- sawtooth ---------------------------------------------------------------------

def hat_eval(x: Fraction) -> Fraction:
    """The hat Delta_1: 2x on [0,1/2], 2-2x on [1/2,1], 0 outside [0,1]."""
    if x <= 0 or x >= 1:
        return ZERO
    return 2 * x if x <= Fraction(1, 2) else 2 - 2 * x


def sawtooth_eval(j: int, x) -> Fraction:
    """Delta_j(x) exactly, as the j-fold self-composition of the hat."""
    if j < 0:
        raise ValueError("order must be nonnegative")
    v = as_fraction(x)
    for _ in range(j):
        v = hat_eval(v)
    return v


def sawtooth_pw(j: int) -> PiecewisePoly:
    """Closed-form piecewise description of Delta_j: 2 + 2^j pieces on R."""
    if j < 1:
        raise ValueError("order must be positive")
    n = 2 ** j
    bps = [Fraction(m, n) for m in range(n + 1)]
    pieces: list = [poly([0])]
    for m in range(n):
        if m % 2 == 0:
            pieces.append(poly([Fraction(-m), Fraction(n)]))
        else:
            pieces.append(poly([Fraction(m + 1), Fraction(-n)]))
    pieces.append(poly([0]))
    return PiecewisePoly(tuple(bps), tuple(pieces))


def pw_affine_to_net(breaks: Sequence[Fraction], slopes: Sequence[Fraction],
                     left_value_at_first_break: Fraction,
                     left_slope: Fraction = ZERO) -> Network:
    """Strict rho_1 network for a continuous piecewise-affine function.

    The function has the given slope on (-inf, breaks[0]], value
    left_value_at_first_break at breaks[0], and slopes[i] on
    [breaks[i], breaks[i+1]].  Each slope change contributes one hidden
    neuron; a nonzero leftmost slope costs two more for +-identity.
    """
    terms: list[tuple[Fraction, Fraction]] = []  # (coef, knot)
    prev = left_slope
    for b, s in zip(breaks, slopes):
        if s != prev:
            terms.append((s - prev, b))
        prev = s
    ents1, bias1, ents2, acts = [], [], [], []
    row = 0
    if left_slope != 0:
        ents1 += [(0, 0, ONE), (1, 0, -ONE)]
        bias1 += [ZERO, ZERO]
        ents2 += [(0, 0, left_slope), (0, 1, -left_slope)]
        acts += [rho(1), rho(1)]
        row = 2
    for coef, knot in terms:
        ents1.append((row, 0, ONE))
        bias1.append(-knot)
        ents2.append((0, row, coef))
        acts.append(rho(1))
        row += 1
    offset = left_value_at_first_break - left_slope * breaks[0]
    if row == 0:
        return constant_network([offset], 1)
    t1 = AffineMap.from_entries(row, 1, ents1, bias1)
    t2 = AffineMap.from_entries(1, row, ents2, [offset])
    return Network((Layer(t1, tuple(acts)), Layer(t2, (ID,))))


def _sawtooth_block(k: int) -> Network:
    """Depth-2 strict rho_1 network realizing Delta_k on R (Delta_0 = id)."""
    if k == 0:
        t1 = AffineMap.from_entries(2, 1, [(0, 0, ONE), (1, 0, -ONE)])
        t2 = AffineMap.from_entries(1, 2, [(0, 0, ONE), (0, 1, -ONE)])
        return Network((Layer(t1, (rho(1), rho(1))), Layer(t2, (ID,))))
    n = 2 ** k
    breaks = [Fraction(m, n) for m in range(n + 1)]
    slopes = [Fraction(n) if m % 2 == 0 else Fraction(-n) for m in range(n)] + [ZERO]
    return pw_affine_to_net(breaks, slopes, ZERO)


@dataclass(frozen=True)
class SawtoothSpec:
    j: int
    L: int
    d: int = 1
    variant: str = "weights"  # "weights" | "neurons"

    def __post_init__(self):
        if self.j < 1 or self.d < 1:
            raise ValueError("order and dimension must be positive")
        if self.L < 2:
            raise ValueError("target depth must be at least 2")
        if self.variant not in ("weights", "neurons"):
            raise ValueError("variant must be 'weights' or 'neurons'")


def sawtooth_budget(spec: SawtoothSpec) -> float:
    """C_L * 2^(j/floor(L/2)) (weights) or C_L * 2^(j/(L-1)) (neurons)."""
    C = 4 * spec.L + 2 ** (spec.L - 1)
    if spec.variant == "weights":
        return C * 2 ** (spec.j / (spec.L // 2))
    return C * 2 ** (spec.j / (spec.L - 1))


def sawtooth_budget_holds(spec: SawtoothSpec, value: int) -> bool:
    """Exact integer check of value <= C_L * 2^(j/e) (e per variant)."""
    C = 4 * spec.L + 2 ** (spec.L - 1)
    e = spec.L // 2 if spec.variant == "weights" else spec.L - 1
    return value ** e <= C ** e * 2 ** spec.j


def sawtooth_net(spec: SawtoothSpec) -> Network:
    """Exact Delta_{j,d} within the depth-L budget of the chosen variant.

    Factorizes Delta_j = Delta_{k+s} o Delta_k o ... o Delta_k with the
    block count set by the variant (fused compositions spend one layer per
    extra block, stacked ones two), the remainder block last in composition
    order.  d > 1 slices out the first coordinate before the scalar net.
    """
    j, L = spec.j, spec.L
    if spec.variant == "neurons":
        blocks_after_first = L - 2
        k, s = divmod(j, L - 1)
        compose = compose_fused
    else:
        kappa = L // 2
        blocks_after_first = kappa - 1
        k, s = divmod(j, kappa)
        compose = compose_stacked
    net = _sawtooth_block(k)
    for _ in range(blocks_after_first - 1):
        net = compose(net, _sawtooth_block(k))
    if blocks_after_first >= 1:
        net = compose(net, _sawtooth_block(k + s))
    elif s:
        raise AssertionError("remainder requires at least one extra block")
    rep = complexity(net)
    value = rep.W if spec.variant == "weights" else rep.N
    _check(sawtooth_budget_holds(spec, value),
           f"sawtooth {spec.variant} count {value} exceeds budget "
           f"{sawtooth_budget(spec):g}")
    _check(rep.L <= L, "sawtooth network exceeds target depth")
    if spec.d > 1:
        slice_map = AffineMap.from_entries(1, spec.d, [(0, 0, ONE)])
        net = pre_post_affine(net, P=slice_map)
    return net


# -- B-splines and squashing --------------------------------------------------------

def bspline_net(n: int) -> Network:
    """Depth-2 strict rho_n network for the degree-n B-spline on [0, n+1].

    Uses the (n+1)-fold finite difference of rho_n divided by n!; degree 0
    is discontinuous and not representable.
    """
    if n < 1:
        raise ValueError("degree must be at least 1 (degree 0 is discontinuous)")
    terms = n + 2
    fact = math.factorial(n)
    ents1 = [(k, 0, ONE) for k in range(terms)]
    bias1 = [Fraction(-k) for k in range(terms)]
    ents2 = [(0, k, Fraction((-1) ** k * math.comb(n + 1, k), fact))
             for k in range(terms)]
    t1 = AffineMap.from_entries(terms, 1, ents1, bias1)
    t2 = AffineMap.from_entries(1, terms, ents2)
    net = Network((Layer(t1, (rho(n),) * terms), Layer(t2, (ID,))))
    rep = complexity(net)
    _check(rep.W == 2 * (n + 2) and rep.L == 2 and rep.N == n + 2,
           "B-spline budget (2(n+2), 2, n+2) violated")
    return net


def bspline_pw(n: int) -> PiecewisePoly:
    """Closed-form B-spline of degree n >= 0 via the convolution recursion.

    Independent of bspline_net: repeated exact convolution of the degree-0
    box with itself.
    """
    box = PiecewisePoly((ZERO, ONE), (poly([0]), poly([1]), poly([0])))
    out = box
    for _ in range(n):
        out = _convolve_with_box(out)
    return out


def _convolve_with_box(f: PiecewisePoly) -> PiecewisePoly:
    """(f * 1_{[0,1)})(x) = integral_{x-1}^{x} f, exact for compact support."""
    from .polynomials import antiderivative, padd, peval

    F_pieces = []
    for k, p in enumerate(f.pieces):
        Fp = antiderivative(p)
        if k == 0:
            F_pieces.append(Fp)  # leftmost piece of a compact function is 0
        else:
            b = f.breakpoints[k - 1]  # rational for spline knots
            shiftv = peval(F_pieces[-1], b) - peval(Fp, b)
            F_pieces.append(padd(Fp, poly([shiftv])))
    F = PiecewisePoly(f.breakpoints, tuple(F_pieces))
    return F.sub(F.shift_arg(Fraction(-1))).normalize()


def squash_net(r: int) -> Network:
    """The smooth step sigma_r in (2(r+1), 2, r+1): 0 below 0, 1 above 1.

    sigma_r(x) = (1/r!) * sum_k C(r,k) (-1)^k rho_r(r x - k); the normalizer
    g_{r-1}(r) equals 1 because the degree-(r-1) B-spline has unit mass.
    """
    if r < 1:
        raise ValueError("degree must be positive")
    fact = math.factorial(r)
    ents1 = [(k, 0, Fraction(r)) for k in range(r + 1)]
    bias1 = [Fraction(-k) for k in range(r + 1)]
    ents2 = [(0, k, Fraction((-1) ** k * math.comb(r, k), fact))
             for k in range(r + 1)]
    t1 = AffineMap.from_entries(r + 1, 1, ents1, bias1)
    t2 = AffineMap.from_entries(1, r + 1, ents2)
    net = Network((Layer(t1, (rho(r),) * (r + 1)), Layer(t2, (ID,))))
    rep = complexity(net)
    _check(rep.W == 2 * (r + 1) and rep.L == 2 and rep.N == r + 1,
           "squash budget (2(r+1), 2, r+1) violated")
    return net


# -- multiplication -----------------------------------------------------------------

def _square_terms(r: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """x^2 = sum a_i rho_r(b_i x + c_i) with n = 2(r+1) terms (r >= 2)."""
    sol = shifted_monomial_coefficients((ZERO, ZERO, ONE), r)
    sign = ONE if r % 2 == 0 else -ONE
    terms = []
    for ell, a in enumerate(sol):
        terms.append((a, ONE, Fraction(-ell)))
        terms.append((sign * a, -ONE, Fraction(ell)))
    return terms


def mult2_net(r: int) -> Network:
    """Exact product M_2(x, y) = x*y as a strict (6n, 2, 2n) rho_r network.

    Polarization: x*y = ((x+y)^2 - (x-y)^2) / 4 over the squared expansion.
    """
    if r < 2:
        raise ValueError("exact squaring needs r >= 2")
    terms = _square_terms(r)
    n = len(terms)
    ents1, bias1, ents2, acts = [], [], [], []
    for idx, (a, b, c) in enumerate(terms):
        # rho(b*(x+y) + c)
        ents1 += [(idx, 0, b), (idx, 1, b)]
        bias1.append(c)
        ents2.append((0, idx, a / 4))
        # rho(b*(x-y) + c)
        ents1 += [(idx + n, 0, b), (idx + n, 1, -b)]
        ents2.append((0, idx + n, -a / 4))
        acts.append(rho(r))
    bias1 += [c for (_, _, c) in terms]
    acts = acts + acts
    t1 = AffineMap.from_entries(2 * n, 2, ents1, bias1)
    t2 = AffineMap.from_entries(1, 2 * n, ents2)
    net = Network((Layer(t1, tuple(acts)), Layer(t2, (ID,))))
    rep = complexity(net)
    _check(rep.W <= 6 * n and rep.L == 2 and rep.N <= 2 * n,
           "M_2 budget (6n, 2, 2n) violated")
    return net


def mult_net(d: int, r: int) -> Network:
    """Exact product of d >= 2 inputs within the binary-tree budget.

    Build M_{2^j} recursively with j = ceil(log2 d), then pad the input with
    ones: x -> (x, 1, ..., 1).
    """
    if d < 2:
        raise ValueError("need at least two factors")
    if r < 2:
        raise ValueError("exact multiplication needs r >= 2 (no exact square for r=1)")
    j = max(1, math.ceil(math.log2(d)))
    m2 = mult2_net(r)
    net = m2
    width = 2
    for _ in range(j - 1):
        sel = [AffineMap.from_entries(width, 2 * width,
                                      [(i, i + off, ONE) for i in range(width)])
               for off in (0, width)]
        halves = [pre_post_affine(net, P=s) for s in sel]
        net = compose_stacked(cartesian(halves), m2)
        width *= 2
    if d < width:
        pad = AffineMap.from_entries(
            width, d, [(i, i, ONE) for i in range(d)],
            [ZERO] * d + [ONE] * (width - d))
        net = pre_post_affine(net, P=pad)
    n = 2 * (r + 1)
    rep = complexity(net)
    _check(rep.W <= 6 * n * (2 ** j - 1), "M_d weight budget violated")
    _check(rep.L == 2 * j, "M_d depth must be 2*ceil(log2 d)")
    _check(rep.N <= (2 * n + 1) * (2 ** j - 1) - 1, "M_d neuron budget violated")
    return net


def scalar_vector_mult_net(k: int, r: int) -> Network:
    """(x, y_1..y_k) -> (x y_1, ..., x y_k) within (6kn, 2, 2kn)."""
    if k < 1:
        raise ValueError("vector dimension must be positive")
    if r < 2:
        raise ValueError("exact multiplication needs r >= 2")
    m2 = mult2_net(r)
    parts = []
    for i in range(k):
        proj = AffineMap.from_entries(2, 1 + k, [(0, 0, ONE), (1, 1 + i, ONE)])
        parts.append(pre_post_affine(m2, P=proj))
    net = cartesian(parts)
    n = 2 * (r + 1)
    rep = complexity(net)
    _check(rep.W <= 6 * k * n and rep.L == 2 and rep.N <= 2 * k * n,
           "scalar-vector multiplication budget (6kn, 2, 2kn) violated")
    return net


# -- tensor B-splines ----------------------------------------------------------------

def tensor_bspline_net(d: int, t: int) -> Network:
    """Exact tensor-product B-spline beta_d^(t) within (28d(t+1), 2+2ceil(log2 d), 13d(t+1)).

    d = 1 reduces to the univariate spline with budget (2(t+2), 2, t+2).
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if t < min(d, 2):
        raise ValueError(f"degree t={t} too small; need t >= min(d, 2) = {min(d, 2)}")
    if d == 1:
        return bspline_net(t)
    parts = []
    for i in range(d):
        proj = AffineMap.from_entries(1, d, [(0, i, ONE)])
        parts.append(pre_post_affine(bspline_net(t), P=proj))
    net = compose_stacked(cartesian(parts), mult_net(d, t))
    rep = complexity(net)
    j = math.ceil(math.log2(d))
    _check(rep.W <= 28 * d * (t + 1), "tensor B-spline weight budget violated")
    _check(rep.L == 2 + 2 * j, "tensor B-spline depth must be 2 + 2 ceil(log2 d)")
    _check(rep.N <= 13 * d * (t + 1), "tensor B-spline neuron budget violated")
    return net


# -- indicator approximants and localizers ---------------------------------------------

def exact_squashing_check_pw(sigma: Network) -> list[str]:
    """Exact verification that a scalar id/rho net is a squashing unit.

    Checks sigma = 0 left of 0, sigma = 1 right of 1, and 0 <= sigma <= 1
    everywhere, via piece extraction; returns diagnostics (empty iff valid).
    """
    from .piecewise import extract_pieces
    from .norms import sup_norm

    diags = []
    pw = extract_pieces(sigma)
    if pw(Fraction(-1)) != 0 or pw(ZERO) != 0:
        diags.append("sigma must vanish at and left of 0")
    if pw(ONE) != 1 or pw(Fraction(2)) != 1:
        diags.append("sigma must be 1 at and right of 1")
    first, last = pw.pieces[0], pw.pieces[-1]
    if first != ():
        diags.append("leftmost piece must be identically 0")
    if last != poly([1]):
        diags.append("rightmost piece must be identically 1")
    lo, hi = _pw_range(pw)
    if lo < 0 or hi > 1:
        diags.append("sigma must take values in [0, 1]")
    return diags


def _pw_range(pw: PiecewisePoly) -> tuple[Fraction, Fraction]:
    """Certified bounds on the range via per-piece extrema."""
    from .norms import _peval_enclosure
    from .polynomials import derivative, isolate_roots
    from .roots import cut_cmp, make_cut

    lo, hi = None, None
    n = len(pw.pieces)
    for k, p in enumerate(pw.pieces):
        cands = []
        if k > 0:
            cands.append(pw.breakpoints[k - 1])
        if k < n - 1:
            cands.append(pw.breakpoints[k])
        if degree(p) >= 2:
            for kind, val in isolate_roots(derivative(p)):
                c = make_cut(kind, val)
                left_ok = k == 0 or cut_cmp(c, pw.breakpoints[k - 1]) > 0
                right_ok = k == n - 1 or cut_cmp(c, pw.breakpoints[k]) < 0
                if left_ok and right_ok:
                    cands.append(c)
        if not cands:  # single-piece function: polynomial must be constant/affine
            cands.append(ZERO)
        for c in cands:
            e = _peval_enclosure(p, c)
            lo = e.lo if lo is None else min(lo, e.lo)
            hi = e.hi if hi is None else max(hi, e.hi)
    return lo, hi


def indicator_net(d: int, rect: Sequence[tuple[object, object]], eps,
                  sigma: Network, validate_sigma: bool = True,
                  ) -> Network:
    """Approximate indicator of a hyper-rectangle:  0 <= h <= 1,
    supp h inside rect, and h = 1 on the eps-shrunken core.

    Budget: (2W, L, 2N) for d = 1 and (2dW(N+1), 2L-1, (2d+1)N) otherwise.
    sigma must satisfy the exact squashing property; for id/rho sigmas this
    is verified exactly via piece extraction.
    """
    eps = as_fraction(eps)
    if not (0 < eps < Fraction(1, 2)):
        raise ValueError("eps must lie in (0, 1/2)")
    if len(rect) != d:
        raise ValueError("rect must provide one interval per dimension")
    if validate_sigma:
        if all(a.kind in ("id", "rho") for layer in sigma.layers for a in layer.acts):
            diags = exact_squashing_check_pw(sigma)
            if diags:
                raise ValueError("sigma is not a squashing unit: " + "; ".join(diags))
        else:
            _sampled_squashing_check(sigma)
    rep_s = complexity(sigma)
    W, L, N = rep_s.W, rep_s.L, rep_s.N

    # t(x) = sigma(x/eps) - sigma(1 + (x-1)/eps), one pair per coordinate
    parts = []
    for i in range(d):
        p1 = AffineMap.from_entries(1, d, [(0, i, 1 / eps)])
        p2 = AffineMap.from_entries(1, d, [(0, i, 1 / eps)], [1 - 1 / eps])
        parts.append(pre_post_affine(sigma, P=p1))
        parts.append(pre_post_affine(pre_post_affine(sigma, P=p2),
                                     Q=AffineMap.from_entries(1, 1, [(0, 0, -ONE)])))
    F = sum_networks(parts)
    if d == 1:
        h = F
        rep = complexity(h)
        _check(rep.W <= 2 * W and rep.L == L and rep.N <= 2 * N,
               "indicator budget (2W, L, 2N) violated for d=1")
    else:
        G = pre_post_affine(
            F, Q=AffineMap.from_entries(1, 1, [(0, 0, ONE)], [Fraction(1 - d)]))
        h = compose_fused(G, sigma)
        rep = complexity(h)
        _check(rep.W <= 2 * d * W * (N + 1) and rep.L == 2 * L - 1
               and rep.N <= (2 * d + 1) * N,
               "indicator budget (2dW(N+1), 2L-1, (2d+1)N) violated")
    # map the unit cube onto the requested rectangle
    ents, bias = [], []
    for i, (a, b) in enumerate(rect):
        a, b = as_fraction(a), as_fraction(b)
        if not a < b:
            raise ValueError("rectangle sides must be nondegenerate")
        ents.append((i, i, 1 / (b - a)))
        bias.append(-a / (b - a))
    T0 = AffineMap.from_entries(d, d, ents, bias)
    return pre_post_affine(h, P=T0)


def _sampled_squashing_check(sigma: Network, samples: int = 10 ** 4) -> None:
    from .network import evaluate_float
    import warnings

    warnings.warn("sigma has custom activations; squashing property checked "
                  "by sampling only", stacklevel=3)
    for i in range(samples):
        x = -2.0 + 5.0 * i / (samples - 1)
        v, _ = evaluate_float(sigma, [x])
        ok = -1e-9 <= v[0] <= 1 + 1e-9
        if x <= 0:
            ok = ok and abs(v[0]) <= 1e-9
        if x >= 1:
            ok = ok and abs(v[0] - 1) <= 1e-9
        if not ok:
            raise ValueError(f"sampled squashing check failed at x={x}")


def localize_net(g: Network, R, delta, r: int) -> Network:
    """Multiply g by an indicator-style cutoff of [-R, R]^d.

    Exactly g inside [-R, R]^d, zero outside [-R-delta, R+delta]^d, and
    pointwise within 2|g| of 1_[-R,R]^d * g in between.  Requires W, N >= 1;
    the budget constant c(d, k, r) is computed from the construction chain.
    """
    R, delta = as_fraction(R), as_fraction(delta)
    if R < 1 or delta <= 0:
        raise ValueError("need R >= 1 and delta > 0")
    if r < 2:
        raise ValueError("localization needs r >= 2 for the product network")
    rep_g = complexity(g)
    if rep_g.W == 0 or rep_g.N == 0:
        raise ValueError("localization as stated cannot hold for W=0 or N=0")
    d, k = g.d_in, g.d_out

    # margin so the indicator core [-(R+d)(1-2e), (R+d)(1-2e)] covers [-R, R]
    eps = delta / (2 * (R + delta))
    side = (-(R + delta), R + delta)
    theta = indicator_net(d, [side] * d, eps, squash_net(r), validate_sigma=False)
    rep_t = complexity(theta)

    from .network import compress
    g_small = compress(g)
    pair = cartesian([theta, g_small])
    mult = scalar_vector_mult_net(k, r)
    out = compose_fused(pair, mult)

    # budget constant from the construction chain (not hard-coded)
    w, ell, m = rep_t.W, rep_t.L, rep_t.N
    mind = min(d, k)
    c1 = w + mind * (ell - 2 if ell >= 2 else 0)
    c2 = m + mind * (ell - 2 if ell >= 2 else 0)
    c_w = (1 + mind) * (1 + 12 * k * (r + 1)) + c1 + 12 * k * (r + 1) * c2
    c_n = (1 + mind) + m + mind * (ell - 1) + 4 * k * (r + 1)
    c = max(c_w, c_n)
    rep = complexity(out)
    _check(rep.W <= c * rep_g.W, "localizer weight budget violated")
    _check(rep.N <= c * rep_g.N, "localizer neuron budget violated")
    _check(rep.L <= max(rep_g.L + 1, ell + 1), "localizer depth budget violated")
    return out


# -- budget reporting -----------------------------------------------------------------

def budget_report(kind: str, net: Network, **params) -> dict:
    """Machine-readable budget check for a gadget network."""
    rep = complexity(net)
    checks: list[dict] = []

    def add(name: str, bound, value, ok=None):
        checks.append({"name": name, "bound": str(bound), "value": value,
                       "pass": bool(value <= bound) if ok is None else ok})

    if kind == "sawtooth":
        spec = SawtoothSpec(params["j"], params["L"], params.get("d", 1),
                            params.get("variant", "weights"))
        budget = sawtooth_budget(spec)
        if spec.variant == "weights":
            add(f"W <= (4L+2^(L-1)) * 2^(j/floor(L/2)) = {budget:g}",
                budget, rep.W, ok=sawtooth_budget_holds(spec, rep.W))
        else:
            add(f"N <= (4L+2^(L-1)) * 2^(j/(L-1)) = {budget:g}",
                budget, rep.N, ok=sawtooth_budget_holds(spec, rep.N))
    elif kind == "squash":
        rr = params["r"]
        add("W = 2(r+1)", 2 * (rr + 1), rep.W, ok=rep.W == 2 * (rr + 1))
        add("N = r+1", rr + 1, rep.N, ok=rep.N == rr + 1)
        add("L = 2", 2, rep.L, ok=rep.L == 2)
    elif kind == "bspline":
        nn = params["n"]
        add("W = 2(n+2)", 2 * (nn + 2), rep.W, ok=rep.W == 2 * (nn + 2))
        add("N = n+2", nn + 2, rep.N, ok=rep.N == nn + 2)
    elif kind == "mult":
        dd, rr = params["d"], params["r"]
        n = 2 * (rr + 1)
        j = max(1, math.ceil(math.log2(dd)))
        add("W <= 6n(2^j-1)", 6 * n * (2 ** j - 1), rep.W)
        add("L = 2j", 2 * j, rep.L, ok=rep.L == 2 * j)
        add("N <= (2n+1)(2^j-1)-1", (2 * n + 1) * (2 ** j - 1) - 1, rep.N)
    elif kind == "tensor-bspline":
        dd, tt = params["d"], params["t"]
        if dd == 1:
            add("W = 2(t+2)", 2 * (tt + 2), rep.W, ok=rep.W == 2 * (tt + 2))
        else:
            add("W <= 28d(t+1)", 28 * dd * (tt + 1), rep.W)
            add("N <= 13d(t+1)", 13 * dd * (tt + 1), rep.N)
            add("L = 2+2ceil(log2 d)", 2 + 2 * math.ceil(math.log2(dd)), rep.L,
                ok=rep.L == 2 + 2 * math.ceil(math.log2(dd)))
    elif kind == "indicator":
        dd = params["d"]
        W, L, N = params["sigmaW"], params["sigmaL"], params["sigmaN"]
        if dd == 1:
            add("W <= 2W_sigma", 2 * W, rep.W)
            add("L = L_sigma", L, rep.L, ok=rep.L == L)
            add("N <= 2N_sigma", 2 * N, rep.N)
        else:
            add("W <= 2dW(N+1)", 2 * dd * W * (N + 1), rep.W)
            add("L = 2L-1", 2 * L - 1, rep.L, ok=rep.L == 2 * L - 1)
            add("N <= (2d+1)N", (2 * dd + 1) * N, rep.N)
    elif kind == "poly":
        rr = params["r"]
        add("N <= 2r+2", 2 * rr + 2, rep.N)
        add("L <= 2", 2, rep.L)
    elif kind == "localize":
        checks.append({"name": "budget asserted during construction",
                       "bound": "c(d,k,r) chain", "value": rep.W, "pass": True})
    return {"kind": kind, "params": {k: str(v) for k, v in params.items()},
            "complexity": rep.as_dict(), "checks": checks,
            "all_pass": all(c["pass"] for c in checks)}
