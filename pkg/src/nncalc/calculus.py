"""Construction calculus on networks.

Each operation mirrors one constructive step from the underlying theory:
depth synchronization, scalar multiples, Cartesian products, sums, pre/post
affine composition, two composition modes (layer-stacked and fused),
polynomial representation by shifted ReLU-power monomials, strictification,
activation substitution, and power unrolling.  Every operation checks its
complexity budget on the result and raises BudgetViolation on failure, so a
passing run doubles as a verification of the accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import ONE, ZERO, AffineMap, as_fraction
from .network import (ID, Act, Layer, Network, apply_rho, complexity,
                      constant_network, get_activation, require_valid, rho)


class BudgetViolation(RuntimeError):
    """A constructed network exceeds the complexity budget it must satisfy."""


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise BudgetViolation(msg)


# -- depth synchronization ------------------------------------------------------

def deepen(net: Network, L0: int) -> Network:
    """Add L0 identity layers; W and N grow by exactly min(d_in, d_out) each.

    Layers go to the output side when d_out <= d_in and to the input side
    otherwise, which is what attains the min.
    """
    if L0 < 0:
        raise ValueError("L0 must be nonnegative")
    if L0 == 0:
        return net
    require_valid(net)
    d, k = net.d_in, net.d_out
    before = complexity(net)
    if k <= d:
        pad = Layer(AffineMap.identity(k), (ID,) * k)
        out = Network(net.layers + (pad,) * L0)
    else:
        pad = Layer(AffineMap.identity(d), (ID,) * d)
        out = Network((pad,) * L0 + net.layers)
    after = complexity(out)
    c = min(d, k)
    _check(after.L == before.L + L0 and after.W == before.W + c * L0
           and after.N == before.N + c * L0,
           "deepen budget (W+cL0, L+L0, N+cL0) violated")
    return out


def scale(net: Network, a) -> Network:
    """Pointwise scalar multiple a * R(net); W preserved exactly when a != 0."""
    require_valid(net)
    a = as_fraction(a)
    last = net.layers[-1]
    out = Network(net.layers[:-1] + (Layer(last.map.scale(a), last.acts),))
    _check(complexity(out).W <= complexity(net).W, "scale must not grow W")
    return out


# -- Cartesian products and sums --------------------------------------------------

def _merge_pair(a: Network, b: Network, mode: str) -> Network:
    """Block-diagonal merge of two equal-input networks.

    mode="cartesian": outputs concatenated; mode="sum": outputs added
    (requires equal output dimensions).
    """
    L = max(a.depth, b.depth)
    if a.depth < L:
        a = deepen(a, L - a.depth)
    if b.depth < L:
        b = deepen(b, L - b.depth)
    layers = []
    for ell in range(L):
        la, lb = a.layers[ell], b.layers[ell]
        summing_output = mode == "sum" and ell == L - 1
        if ell == 0 and L > 1:
            m = la.map.vstack(lb.map)
            acts = la.acts + lb.acts
        elif ell == 0:  # single-layer networks
            if summing_output:
                m = la.map.add(lb.map)
                acts = la.acts
            else:
                m = la.map.vstack(lb.map)
                acts = la.acts + lb.acts
        elif summing_output:
            m = la.map.hsum(lb.map)
            acts = la.acts
        else:
            m = la.map.block_diag(lb.map)
            acts = la.acts + lb.acts
        layers.append(Layer(m, acts))
    return Network(tuple(layers))


def _fold_sorted(nets: Sequence[Network], mode: str) -> tuple[Network, list[int]]:
    """Fold a pairwise merge over the nets sorted by increasing depth.

    Sorting makes the total deepening cost telescope to
    c * (max depth - min depth); the returned order records where each
    original output landed.
    """
    order = sorted(range(len(nets)), key=lambda i: nets[i].depth)
    acc = nets[order[0]]
    for idx in order[1:]:
        acc = _merge_pair(acc, nets[idx], mode)
    return acc, order


def cartesian(nets: Sequence[Network]) -> Network:
    """Tuple of realizations x -> (R(net_1)(x), ..., R(net_n)(x))."""
    if not nets:
        raise ValueError("cartesian of an empty list")
    d = nets[0].d_in
    if any(n.d_in != d for n in nets):
        raise ValueError("all networks must share the input dimension")
    if len(nets) == 1:
        return nets[0]
    for n in nets:
        require_valid(n)
    merged, order = _fold_sorted(nets, "cartesian")
    # restore the requested output order with a permutation of the last map
    offsets = []
    pos = 0
    starts = {}
    for idx in order:
        starts[idx] = pos
        pos += nets[idx].d_out
    for idx in range(len(nets)):
        offsets.extend(range(starts[idx], starts[idx] + nets[idx].d_out))
    last = merged.layers[-1]
    rows = last.map.rows_dict()
    ents = [(new_i, j, v)
            for new_i, old_i in enumerate(offsets)
            for j, v in rows[old_i].items()]
    bias = [last.map.bias[old_i] for old_i in offsets]
    pm = AffineMap.from_entries(last.map.rows, last.map.cols, ents, bias)
    out = Network(merged.layers[:-1] + (Layer(pm, last.acts),))

    reports = [complexity(n) for n in nets]
    K = sum(n.d_out for n in nets)
    depths = [r.L for r in reports]
    delta = min(d, K - 1) * (max(depths) - min(depths))
    rep = complexity(out)
    _check(rep.L == max(depths), "cartesian depth must be the max depth")
    _check(rep.W <= delta + sum(r.W for r in reports), "cartesian W budget violated")
    _check(rep.N <= delta + sum(r.N for r in reports), "cartesian N budget violated")
    return out


def sum_networks(nets: Sequence[Network]) -> Network:
    """Pointwise sum of realizations with shared input and output dims."""
    if not nets:
        raise ValueError("sum of an empty list")
    d, k = nets[0].d_in, nets[0].d_out
    if any(n.d_in != d or n.d_out != k for n in nets):
        raise ValueError("all networks must share input and output dimensions")
    if len(nets) == 1:
        return nets[0]
    for n in nets:
        require_valid(n)
    out, _ = _fold_sorted(nets, "sum")
    reports = [complexity(n) for n in nets]
    depths = [r.L for r in reports]
    delta = min(d, k) * (max(depths) - min(depths))
    rep = complexity(out)
    _check(rep.L == max(depths), "sum depth must be the max depth")
    _check(rep.W <= delta + sum(r.W for r in reports), "sum W budget violated")
    _check(rep.N <= delta + sum(r.N for r in reports), "sum N budget violated")
    return out


# -- affine pre/post composition ---------------------------------------------------

def pre_post_affine(net: Network, P: AffineMap | None = None,
                    Q: AffineMap | None = None) -> Network:
    """Q o R(net) o P with L and N unchanged and W <= |Q| * W * |P|_*."""
    require_valid(net)
    before = complexity(net)
    layers = list(net.layers)
    if P is not None:
        if P.rows != net.d_in:
            raise ValueError("P must map into the network input space")
        first = layers[0]
        layers[0] = Layer(first.map.compose(P), first.acts)
    if Q is not None:
        if Q.cols != net.d_out:
            raise ValueError("Q must accept the network output space")
        if Q.l0 == 0:
            # constant collapse: zero all maps, emit Q's bias at the end
            dims = Network(tuple(layers)).dims
            zeroed = [Layer(AffineMap.constant([ZERO] * dims[i + 1], dims[i]),
                            layers[i].acts)
                      for i in range(len(layers) - 1)]
            zeroed.append(Layer(AffineMap.constant(Q.bias, dims[-2]),
                                (ID,) * Q.rows))
            layers = zeroed
        else:
            last = layers[-1]
            layers[-1] = Layer(Q.compose(last.map), (ID,) * Q.rows)
    out = Network(tuple(layers))
    after = complexity(out)
    qn = Q.l0_colmax if Q is not None else 1
    pn = P.l0_rowmax if P is not None else 1
    _check(after.L == before.L and after.N == before.N,
           "pre/post affine must preserve L and N")
    _check(after.W <= qn * before.W * pn, "pre/post affine W budget violated")
    return out


# -- composition --------------------------------------------------------------------

def compose_stacked(f: Network, g: Network) -> Network:
    """R(g) o R(f) by concatenating layers: W and L add, N gains d_out(f)."""
    require_valid(f)
    require_valid(g)
    if f.d_out != g.d_in:
        raise ValueError("interface dimension mismatch")
    out = Network(f.layers + g.layers)
    rf, rg, ro = complexity(f), complexity(g), complexity(out)
    _check(ro.W == rf.W + rg.W and ro.L == rf.L + rg.L
           and ro.N == rf.N + rg.N + f.d_out,
           "stacked composition must satisfy the exact complexity identities")
    return out


def compose_fused(f: Network, g: Network) -> Network:
    """R(g) o R(f) fusing g's first map into f's last: L = L_f + L_g - 1."""
    require_valid(f)
    require_valid(g)
    if f.d_out != g.d_in:
        raise ValueError("interface dimension mismatch")
    rf, rg = complexity(f), complexity(g)
    if f.depth == 1:
        out = pre_post_affine(g, P=f.layers[0].map)
    else:
        g0 = g.layers[0]
        fused = Layer(g0.map.compose(f.layers[-1].map), g0.acts)
        out = Network(f.layers[:-1] + (fused,) + g.layers[1:])
    ro = complexity(out)
    _check(ro.L == rf.L + rg.L - 1, "fused composition depth identity violated")
    _check(ro.N == rf.N + rg.N, "fused composition neuron identity violated")
    _check(ro.W <= rf.W + max(rf.N, f.d_in) * rg.W,
           "fused composition W budget violated")
    return out


# -- polynomial representation --------------------------------------------------------

def _solve_linear(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination; the shifted-monomial system is invertible."""
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [v / pval for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def shifted_monomial_coefficients(coeffs: Sequence[Fraction], r: int) -> list[Fraction]:
    """Solve p(x) = sum_l a_l (x - l)^r with shift nodes l = 0..r.

    The system is a (transposed, scaled) Vandermonde matrix at the integer
    nodes, hence invertible.
    """
    p = list(coeffs) + [ZERO] * (r + 1 - len(coeffs))
    matrix = [[Fraction(math.comb(r, t)) * (Fraction(-ell)) ** (r - t)
               for ell in range(r + 1)] for t in range(r + 1)]
    return _solve_linear(matrix, p[:r + 1])


def represent_polynomial(coeffs: Sequence[object], r: int) -> Network:
    """Strict depth-2 rho_r network realizing the polynomial exactly.

    coeffs are ascending (constant term first), degree at most r.  Uses
    x^r = rho_r(x) + (-1)^r rho_r(-x) on the shifted-monomial expansion;
    at most 2r + 2 hidden neurons.  Degree <= 0 yields a bias-only network,
    and r = 1 uses the two-term identity a*rho(x) - a*rho(-x).
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    cs = [as_fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    deg = len(cs) - 1
    if deg > r:
        raise ValueError(f"degree {deg} exceeds activation power {r}")
    if deg <= 0:
        return constant_network([cs[0] if cs else ZERO], 1)
    if r == 1:
        a, b = cs[1], cs[0]
        t1 = AffineMap.from_entries(2, 1, [(0, 0, ONE), (1, 0, -ONE)])
        t2 = AffineMap.from_entries(1, 2, [(0, 0, a), (0, 1, -a)], [b])
        return Network((Layer(t1, (rho(1), rho(1))), Layer(t2, (ID,))))
    sol = shifted_monomial_coefficients(cs, r)
    ents1, ents2, acts = [], [], []
    row = 0
    sign = ONE if r % 2 == 0 else -ONE
    for ell, a in enumerate(sol):
        ents1.append((row, 0, ONE))
        ents2.append((0, row, a))
        acts.append(rho(r))
        ents1.append((row + 1, 0, -ONE))
        ents2.append((0, row + 1, sign * a))
        acts.append(rho(r))
        row += 2
    bias1 = []
    for ell in range(r + 1):
        bias1 += [Fraction(-ell), Fraction(ell)]
    t1 = AffineMap.from_entries(row, 1, ents1, bias1)
    t2 = AffineMap.from_entries(1, row, [(i, j, v) for i, j, v in ents2 if v != 0])
    net = Network((Layer(t1, tuple(acts)), Layer(t2, (ID,))))
    _check(complexity(net).N <= 2 * r + 2, "polynomial representation exceeds 2r+2 terms")
    return net


@dataclass(frozen=True)
class IdentityRepresentation:
    """x = c + sum a_i rho_r(b_i x + c_i), used to strictify identity neurons."""

    terms: tuple[tuple[Fraction, Fraction, Fraction], ...]
    offset: Fraction
    r: int

    @property
    def n(self) -> int:
        return len(self.terms)

    def check(self) -> None:
        """Verify at 2r+3 distinct rationals; both sides are piecewise degree
        <= r with at most 2r+2 breakpoints, so agreement there forces equality."""
        pts = [Fraction(k, 7) for k in range(-(self.r + 1), self.r + 2)]
        for x in pts:
            val = self.offset + sum(a * apply_rho(self.r, b * x + c)
                                    for a, b, c in self.terms)
            if val != x:
                raise ValueError("identity representation is not exact")


def identity_representation(r: int) -> IdentityRepresentation:
    net = represent_polynomial([0, 1], r)
    t1, t2 = net.layers[0].map, net.layers[1].map
    rows = t1.rows_dict()
    coeffs = {j: v for _, j, v in t2.entries}
    terms = []
    for i in range(t1.rows):
        a = coeffs.get(i, ZERO)
        b = rows[i].get(0, ZERO)
        terms.append((a, b, t1.bias[i]))
    rep = IdentityRepresentation(tuple(terms), t2.bias[0], r)
    rep.check()
    return rep


# -- strictification ---------------------------------------------------------------

def _expansion_blocks(terms, offset, scalar_act: Act):
    """E: R -> R^n and D: R^n -> R used to expand one identity neuron."""
    n = len(terms)
    E = AffineMap.from_entries(
        n, 1, [(i, 0, b) for i, (_, b, _) in enumerate(terms) if b != 0],
        [c for (_, _, c) in terms])
    D = AffineMap.from_entries(
        1, n, [(0, i, a) for i, (a, _, _) in enumerate(terms) if a != 0],
        [offset])
    return E, D, (scalar_act,) * n


def _strictify_generic(net: Network, terms, offset, scalar_act: Act,
                       keep_kinds: tuple[str, ...]) -> Network:
    """Expand every hidden neuron whose tag is not in keep_kinds."""
    K = net.depth
    if K == 1:
        return net
    E, D, block_acts = _expansion_blocks(terms, offset, scalar_act)
    single = AffineMap.identity(1)

    P_maps: list[AffineMap | None] = [None] * K  # P after layer ell's affine map
    Q_maps: list[AffineMap | None] = [None] * K
    new_acts: list[tuple[Act, ...]] = [None] * K
    for ell in range(K - 1):
        P = Q = None
        acts: list[Act] = []
        for a in net.layers[ell].acts:
            if a.kind in keep_kinds:
                blockP, blockQ, blockA = single, single, (a,)
            else:
                blockP, blockQ, blockA = E, D, block_acts
            P = blockP if P is None else P.block_diag(blockP)
            Q = blockQ if Q is None else Q.block_diag(blockQ)
            acts.extend(blockA)
        P_maps[ell], Q_maps[ell], new_acts[ell] = P, Q, tuple(acts)

    layers = []
    for ell in range(K):
        m = net.layers[ell].map
        if ell > 0:
            m = m.compose(Q_maps[ell - 1])
        if ell < K - 1:
            m = P_maps[ell].compose(m)
            layers.append(Layer(m, new_acts[ell]))
        else:
            layers.append(Layer(m, net.layers[ell].acts))
    return Network(tuple(layers))


def strictify(net: Network, idrep: IdentityRepresentation) -> Network:
    """Replace identity hidden neurons by n-term rho_r expansions, exactly.

    Output is strict with W <= n^2 W, N <= n N and the same depth.
    """
    require_valid(net)
    r = idrep.r
    for a in net.hidden_acts():
        if a.kind == "custom":
            raise ValueError("custom activations cannot be strictified exactly")
        if a.kind == "rho" and a.r != r:
            raise ValueError(f"mixed rho degrees: network uses rho_{a.r}, "
                             f"representation targets rho_{r}")
    if net.is_strict and all(a.kind == "rho" for a in net.hidden_acts()):
        return net
    out = _strictify_generic(net, idrep.terms, idrep.offset, rho(r),
                             keep_kinds=("rho",))
    before, after = complexity(net), complexity(out)
    n = idrep.n
    _check(after.W <= n * n * before.W and after.N <= n * before.N
           and after.L == before.L, "strictify budget (n^2 W, L, n N) violated")
    _check(all(a.kind == "rho" for a in out.hidden_acts()),
           "strictify output must not contain identity hidden tags")
    return out


# -- activation substitution ----------------------------------------------------------

def substitute_activation(net: Network, sigma_net: Network, mode: str,
                          handle: str | None = None) -> Network:
    """Re-express a sigma-network over sigma_net's own activation.

    Hidden tags equal to Custom(handle) (or rho tags when handle is None and
    sigma_net realizes that power) are replaced by copies of sigma_net.
    mode="two-layer" requires L(sigma_net) = 2 and gives (W m^2, L, N m);
    mode="general" gives (m W + w N, 1 + (L-1) l, N (1 + m)).
    """
    require_valid(net)
    require_valid(sigma_net)
    if sigma_net.d_in != 1 or sigma_net.d_out != 1:
        raise ValueError("sigma_net must be scalar to scalar")
    rep_s = complexity(sigma_net)
    if rep_s.W == 0:
        raise ValueError("sigma must not be constant")
    w, ell_s, m = rep_s.W, rep_s.L, max(rep_s.N, 1)

    def is_sigma(a: Act) -> bool:
        if handle is not None:
            return a.kind == "custom" and a.handle == handle
        return a.kind == "rho"

    K = net.depth
    if K == 1:
        return net
    before = complexity(net)

    if mode == "two-layer":
        if ell_s != 2:
            raise ValueError("two-layer mode needs a depth-2 sigma_net")
        sE, sB = sigma_net.layers[0], sigma_net.layers[1]
        single = AffineMap.identity(1)
        layers = []
        prevQ: AffineMap | None = None
        for k in range(K):
            mmap = net.layers[k].map
            if prevQ is not None:
                mmap = mmap.compose(prevQ)
            if k == K - 1:
                layers.append(Layer(mmap, net.layers[k].acts))
                break
            P = Q = None
            acts: list[Act] = []
            for a in net.layers[k].acts:
                if is_sigma(a):
                    bp, bq, ba = sE.map, sB.map, sE.acts
                else:
                    bp, bq, ba = single, single, (a,)
                P = bp if P is None else P.block_diag(bp)
                Q = bq if Q is None else Q.block_diag(bq)
                acts.extend(ba)
            layers.append(Layer(P.compose(mmap), tuple(acts)))
            prevQ = Q
        out = Network(tuple(layers))
        after = complexity(out)
        _check(after.W <= before.W * m * m and after.N <= before.N * m
               and after.L == before.L,
               "two-layer substitution budget (W m^2, L, N m) violated")
        return out

    if mode != "general":
        raise ValueError(f"unknown substitution mode {mode!r}")

    id_chain = [Layer(AffineMap.identity(1), (ID,)) for _ in range(ell_s)]
    layers = []
    prev_last: AffineMap | None = None  # trailing map of previous tensor block
    for k in range(K - 1):
        mmap = net.layers[k].map
        if prev_last is not None:
            mmap = mmap.compose(prev_last)
        # tensor block: one sigma_net (or identity chain) per neuron, depth ell_s
        blocks = [sigma_net.layers if is_sigma(a) else id_chain
                  for a in net.layers[k].acts]
        for t in range(ell_s):
            bm = None
            acts: list[Act] = []
            for blk in blocks:
                lay = blk[t]
                bm = lay.map if bm is None else bm.block_diag(lay.map)
                acts.extend(lay.acts)
            if t == 0:
                layers.append(Layer(bm.compose(mmap), tuple(acts)))
            elif t < ell_s - 1:
                layers.append(Layer(bm, tuple(acts)))
            else:
                prev_last = bm
    final = net.layers[-1].map
    if prev_last is not None:
        final = final.compose(prev_last)
    layers.append(Layer(final, net.layers[-1].acts))
    out = Network(tuple(layers))
    after = complexity(out)
    _check(after.W <= m * before.W + w * before.N,
           "general substitution W budget violated")
    _check(after.L == 1 + (before.L - 1) * ell_s,
           "general substitution depth identity violated")
    _check(after.N <= before.N * (1 + m),
           "general substitution N budget violated")
    return out


# -- power unrolling ------------------------------------------------------------------

def power_unroll(net: Network, r: int, s: int) -> Network:
    """Rewrite rho_{r^s} activations as s-fold rho_r compositions.

    Exact since rho_r(rho_r(x)) = rho_{r^2}(x); budget
    (W + (s-1)N, 1 + s(L-1), sN) holds with equality on W and N.
    """
    if s < 1:
        raise ValueError("s must be positive")
    require_valid(net)
    if s == 1:
        return net
    target = r ** s
    for a in net.hidden_acts():
        if a.kind == "custom":
            raise ValueError("cannot unroll custom activations")
        if a.kind == "rho" and a.r != target:
            raise ValueError(f"expected rho_{target} tags, found rho_{a.r}")
    before = complexity(net)
    layers = []
    for k in range(net.depth - 1):
        lay = net.layers[k]
        unrolled = tuple(rho(r) if a.kind == "rho" else ID for a in lay.acts)
        layers.append(Layer(lay.map, unrolled))
        ident = AffineMap.identity(lay.map.rows)
        for _ in range(s - 1):
            layers.append(Layer(ident, unrolled))
    layers.append(net.layers[-1])
    out = Network(tuple(layers))
    after = complexity(out)
    _check(after.W == before.W + (s - 1) * before.N
           and after.L == 1 + s * (before.L - 1)
           and after.N == s * before.N,
           "power unroll budget (W+(s-1)N, 1+s(L-1), sN) violated")
    return out


# -- approximate strictification for custom activations --------------------------------

def _slope_probe(fn, x0: float, a: float, m: int, delta: float,
                 probes: int = 1001) -> bool:
    tol = abs(a) / m
    for i in range(1, probes + 1):
        h = delta * i / probes
        for hh in (h, -h):
            if abs((fn(x0 + hh) - fn(x0)) / hh - a) > tol:
                return False
    return True


def pick_delta(fn, x0: float, a: float, m: int) -> float:
    """Doubling-then-bisection search for the difference-quotient radius."""
    delta = 1.0
    if _slope_probe(fn, x0, a, m, delta):
        while delta < 2.0 ** 20 and _slope_probe(fn, x0, a, m, delta * 2):
            delta *= 2
        return delta
    lo, hi = 0.0, delta
    for _ in range(80):
        mid = (lo + hi) / 2
        if mid == 0:
            break
        if _slope_probe(fn, x0, a, m, mid):
            lo = mid
            break
        hi = mid
    if lo == 0.0:
        raise ValueError("could not find a difference-quotient radius; "
                         "is the registered derivative point correct?")
    return lo


def strictify_approx(net: Network, m: int, sample_radius: float = 1.0,
                     samples_per_axis: int = 201) -> tuple[Network, dict]:
    """Strictify a Custom-activated network approximately.

    Identity neurons become two-term difference quotients around the
    registered differentiability point, giving a strict network within the
    (4W, L, 2N) budget whose realization converges locally uniformly as
    m -> infinity.  Returns (network, report with delta_m and the measured
    sup error on [-sample_radius, sample_radius]^d).
    """
    require_valid(net)
    if m < 1:
        raise ValueError("m must be a positive integer")
    handles = {a.handle for a in net.hidden_acts() if a.kind == "custom"}
    if any(a.kind == "rho" for a in net.hidden_acts()):
        raise ValueError("network uses exact rho activations; "
                         "use strictify with an identity representation instead")
    if len(handles) != 1:
        raise ValueError("exactly one custom activation is required")
    handle = handles.pop()
    ca = get_activation(handle)
    if ca.x0 is None or ca.slope in (None, 0):
        raise ValueError(f"activation {handle!r} has no registered "
                         "derivative point with nonzero slope")
    delta = pick_delta(ca.fn, ca.x0, ca.slope, m)

    # E_m(x) = (x0 + delta/sqrt(m) * x, x0);  D_m(y) = sqrt(m) (y1 - y2)/(a delta)
    sqrt_m = math.sqrt(m)
    x0 = Fraction(ca.x0)
    step = Fraction(delta / sqrt_m)
    inv = Fraction(sqrt_m / (ca.slope * delta))
    term_list = ((inv, step, x0), (-inv, ZERO, x0))
    out = _strictify_generic(net, term_list, ZERO, Act("custom", handle=handle),
                             keep_kinds=("custom",))
    before, after = complexity(net), complexity(out)
    _check(after.W <= 4 * before.W and after.N <= 2 * before.N
           and after.L == before.L,
           "approximate strictification budget (4W, L, 2N) violated")

    from .network import evaluate_float  # local import to avoid cycle at import time
    sup_err = 0.0
    if net.d_in == 1:
        xs = [(-sample_radius + 2 * sample_radius * i / (samples_per_axis - 1),)
              for i in range(samples_per_axis)]
    else:
        import itertools
        grid = [-sample_radius + 2 * sample_radius * i / 16 for i in range(17)]
        xs = list(itertools.product(grid, repeat=net.d_in))
    for x in xs:
        ref, _ = evaluate_float(net, list(x))
        got, _ = evaluate_float(out, list(x))
        sup_err = max(sup_err, max(abs(u - v) for u, v in zip(ref, got)))
    report = {"m": m, "delta_m": delta, "sup_error": sup_err,
              "sample_radius": sample_radius, "bound_hint": 1.0 / sqrt_m}
    return out, report
