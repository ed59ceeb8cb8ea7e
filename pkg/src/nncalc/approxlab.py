"""Quantitative approximation instruments.

best_free_knot runs a dynamic program over dyadic candidate knots (plus the
target's own breakpoints) and returns the exact error of the best approximant
it found: a certified upper bound on the true best approximation error.
The search uses float least-squares costs; every reported number is the exact
error of an explicitly constructed piecewise polynomial.

modulus and besov_lower compute certified lower estimates of moduli of
smoothness and Besov quasi-norms via exact finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .affine import ONE, ZERO
from .piecewise import (Enclosure, E_ZERO, PiecewisePoly, affine_combination)
from .norms import lp_norm, lp_pow_integral, kth_root_enclosure, sup_norm
from .polynomials import (Poly, degree, integrate, isolate_roots, peval,
                          pmul, poly, psub)


# -- error curves ------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxErrorCurve:
    """Best-approximation errors E_n at increasing budgets n."""

    family: str
    budgets: tuple[int, ...]
    errors: tuple[float, ...]
    p: object
    target: str = ""

    def __post_init__(self):
        if len(self.budgets) != len(self.errors):
            raise ValueError("budgets and errors must align")
        if any(b2 <= b1 for b1, b2 in zip(self.budgets, self.budgets[1:])):
            raise ValueError("budgets must increase")
        if any(e2 > e1 + 1e-12 for e1, e2 in zip(self.errors, self.errors[1:])):
            raise ValueError("errors must be nonincreasing in the budget")


def truncated_approx_norm(curve: ApproxErrorCurve, alpha: float, q: float,
                          n_max: int | None = None) -> dict:
    """Truncation of the approximation-space quasi-norm.

    sum_{n=1}^{n_max} [n^alpha E_{n-1}]^q / n (q < inf) or the sup form;
    E at budgets between curve points uses the last available value, which
    keeps the truncated value monotone in n_max.
    """
    if not curve.budgets:
        raise ValueError("empty curve")
    n_max = n_max or (curve.budgets[-1] + 1)

    def err_at(n: int) -> float:
        best = None
        for b, e in zip(curve.budgets, curve.errors):
            if b <= n:
                best = e
            else:
                break
        if best is None:
            raise ValueError(f"curve has no budget <= {n}; need E_0")
        return best

    if q == math.inf:
        value = max(n ** alpha * err_at(n - 1) for n in range(1, n_max + 1))
    else:
        value = sum((n ** alpha * err_at(n - 1)) ** q / n
                    for n in range(1, n_max + 1)) ** (1 / q)
    return {"value": value, "alpha": alpha, "q": q, "truncation": n_max,
            "note": "truncated quasi-norm; lower bound of the full sum"}


# -- free-knot best approximation ----------------------------------------------------

class ResolutionError(ValueError):
    pass


def _candidate_knots(target: PiecewisePoly, resolution_bits: int) -> list[Fraction]:
    knots = {Fraction(k, 2 ** resolution_bits) for k in range(2 ** resolution_bits + 1)}
    for b in target.breakpoints:
        if not isinstance(b, Fraction):
            raise ValueError("free-knot DP needs rational target breakpoints")
        if 0 < b < 1:
            knots.add(b)
    return sorted(knots)


def _prefix_moments(target: PiecewisePoly, knots: list[Fraction], s_max: int):
    """Exact integral_0^{t} x^s f(x) dx and integral f^2 at every knot."""
    moments = [[ZERO] * (s_max + 1)]
    sq = [ZERO]
    for a, b in zip(knots, knots[1:]):
        row = list(moments[-1])
        acc_sq = sq[-1]
        # split [a, b] at piece boundaries (knots contain all breakpoints,
        # so each cell lies in a single piece)
        piece = target.pieces[target.piece_index((a + b) / 2)]
        for s in range(s_max + 1):
            xs = poly([0] * s + [1]) if s else poly([1])
            row[s] += integrate(pmul(xs, piece), a, b)
        acc_sq += integrate(pmul(piece, piece), a, b)
        moments.append(row)
        sq.append(acc_sq)
    return moments, sq


def _l2_fit(target: PiecewisePoly, a: Fraction, b: Fraction, deg: int,
            moments_a, moments_b) -> Poly:
    """Exact least-squares polynomial of degree <= deg on [a, b]."""
    size = deg + 1
    G = [[(b ** (s + t + 1) - a ** (s + t + 1)) / (s + t + 1)
          for t in range(size)] for s in range(size)]
    rhs = [moments_b[s] - moments_a[s] for s in range(size)]
    from .calculus import _solve_linear
    return poly(_solve_linear(G, rhs))


def _minimax_affine_fit(points: list[tuple[Fraction, Fraction]]) -> tuple[Poly, Fraction]:
    """Exact minimax affine fit to finitely many points.

    The optimal error is half the minimal vertical width of a strip
    containing the points; the minimizing strip is supported on a hull edge.
    """
    pts = sorted(set(points))
    if len(pts) == 1:
        return poly([pts[0][1]]), ZERO

    def hull(side: int):
        out = []
        for p in pts:
            while len(out) >= 2:
                (x1, y1), (x2, y2) = out[-2], out[-1]
                cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
                if (cross <= 0 if side > 0 else cross >= 0):
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower, upper = hull(+1), hull(-1)
    slopes = {ZERO}
    for chain in (lower, upper):
        for (x1, y1), (x2, y2) in zip(chain, chain[1:]):
            if x1 != x2:
                slopes.add((y2 - y1) / (x2 - x1))
    best: tuple[Fraction, Poly] | None = None
    for m in slopes:
        devs = [y - m * x for x, y in pts]
        width = max(devs) - min(devs)
        err = width / 2
        if best is None or err < best[0]:
            center = (max(devs) + min(devs)) / 2
            best = (err, poly([center, m]))
    return best[1], best[0]


def _segment_points(target: PiecewisePoly, a: Fraction, b: Fraction,
                    ) -> list[tuple[Fraction, Fraction]]:
    xs = {a, b}
    for br in target.breakpoints:
        if isinstance(br, Fraction) and a < br < b:
            xs.add(br)
    pts = []
    for x in sorted(xs):
        pts.append((x, target(x)))
        # left limits matter at jump discontinuities; piecewise targets here
        # are continuous, so the right-piece value suffices
    return pts


def _segment_is_exact(target: PiecewisePoly, a: Fraction, b: Fraction,
                      deg: int) -> Poly | None:
    """The target's own polynomial if [a,b] sits inside one piece of degree <= deg."""
    idx = target.piece_index(a)
    from .roots import cut_cmp
    hi_ok = idx >= len(target.breakpoints) or cut_cmp(target.breakpoints[idx], b) >= 0
    if hi_ok and degree(target.pieces[idx]) <= deg:
        return target.pieces[idx]
    return None


def _chebyshev_nodes(a: Fraction, b: Fraction, count: int = 129) -> list[Fraction]:
    """Rational approximations of Chebyshev nodes on [a, b]."""
    nodes = []
    for k in range(count):
        c = (1 - math.cos(math.pi * k / (count - 1))) / 2
        nodes.append(a + (b - a) * Fraction(c).limit_denominator(2 ** 20))
    return sorted(set(nodes))


def _fit_segment(target: PiecewisePoly, a: Fraction, b: Fraction, deg: int,
                 p, moments_a, moments_b) -> Poly:
    exact = _segment_is_exact(target, a, b, deg)
    if exact is not None:
        return exact
    if p == math.inf and deg == 1 and target.max_degree <= 1:
        q, _ = _minimax_affine_fit(_segment_points(target, a, b))
        return q
    if p in (math.inf, 1):
        # least-deviation fit on (rationalized) Chebyshev nodes, exact cost later
        nodes = _chebyshev_nodes(a, b)
        A = np.array([[float(x) ** s for s in range(deg + 1)] for x in nodes])
        y = np.array([float(target(x)) for x in nodes])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        if p == math.inf:
            # one Remez-like reweighting pass sharpens the sup fit
            resid = np.abs(A @ coef - y) + 1e-15
            w = resid ** 0.5
            coef, *_ = np.linalg.lstsq(A * w[:, None], y * w, rcond=None)
        return poly([Fraction(c).limit_denominator(2 ** 40) for c in coef])
    return _l2_fit(target, a, b, deg, moments_a, moments_b)


def _segment_error_pow(target: PiecewisePoly, q: Poly, a: Fraction, b: Fraction,
                       p) -> Enclosure:
    diff = target.sub(PiecewisePoly.from_poly(q))
    if p == math.inf:
        return sup_norm(diff, a, b)
    return lp_pow_integral(diff, int(p), a, b)


def best_free_knot(target: PiecewisePoly, n: int, deg: int, p,
                   resolution_bits: int = 10) -> tuple[Enclosure, PiecewisePoly, dict]:
    """Best free-knot piecewise-polynomial approximation over a dyadic grid.

    Returns (error, approximant, report).  The error is the exact L_p error
    of the returned approximant on (0,1) - an upper bound on the true
    free-knot error that never increases when the grid is refined or the
    budget is raised.
    """
    if n < 1:
        raise ValueError("need at least one piece")
    if p != math.inf and (int(p) != p or p < 1):
        raise ValueError("p must be a positive integer or infinity")
    knots = _candidate_knots(target, resolution_bits)
    M = len(knots) - 1  # number of grid cells
    if M < n:
        raise ResolutionError(f"grid has {M} cells < {n} pieces; refine the grid")

    s_max = max(deg, 1)
    moments, sq = _prefix_moments(target, knots, s_max)

    # float search costs: residual of the exact L2 projection per segment
    kf = np.array([float(t) for t in knots])
    mom = np.array([[float(v) for v in row] for row in moments])  # (M+1, s_max+1)
    sqf = np.array([float(v) for v in sq])
    size = deg + 1
    # power sums for Gram matrices, all pairs i<j
    powers = np.array([[kf ** (s + t + 1) / (s + t + 1) for t in range(size)]
                       for s in range(size)])  # (size, size, M+1)
    INF = float("inf")
    C = np.full((M + 1, M + 1), INF)
    for i in range(M):
        G = powers[:, :, i + 1:] - powers[:, :, i:i + 1]      # (size, size, M-i)
        rhs = (mom[i + 1:, :size] - mom[i, :size]).T           # (size, M-i)
        Gb = np.moveaxis(G, -1, 0)                             # (M-i, size, size)
        rb = np.moveaxis(rhs, -1, 0)[..., None]                # (M-i, size, 1)
        try:
            sol = np.linalg.solve(Gb + 1e-30 * np.eye(size), rb)
        except np.linalg.LinAlgError:
            sol = np.linalg.lstsq(Gb.reshape(-1, size), rb.reshape(-1, 1), rcond=None)[0]
        resid = (sqf[i + 1:] - sqf[i]) - np.einsum("msk,msk->m", sol, rb)
        C[i, i + 1:] = np.maximum(resid, 0.0)

    # DP over budgets; E[m][j] = best cost of covering [0, t_j] with m pieces
    E = np.full((n + 1, M + 1), INF)
    choice = np.zeros((n + 1, M + 1), dtype=int)
    E[0, 0] = 0.0
    for m in range(1, n + 1):
        tot = E[m - 1][:, None] + C
        choice[m] = np.argmin(tot, axis=0)
        E[m] = tot[choice[m], np.arange(M + 1)]

    best_err: Enclosure | None = None
    best_plan: list[int] | None = None
    best_m = 0
    for m in range(1, n + 1):
        if not np.isfinite(E[m, M]):
            continue
        plan = [M]
        j = M
        for mm in range(m, 0, -1):
            j = int(choice[mm][j])
            plan.append(j)
        plan.reverse()
        err = _exact_plan_error(target, knots, plan, deg, p, moments)
        if best_err is None or err.hi < best_err.hi:
            best_err, best_plan, best_m = err, plan, m
    approx = _plan_to_pw(target, knots, best_plan, deg, p, moments)
    report = {"pieces_budget": n, "pieces_used": best_m, "degree": deg,
              "p": "inf" if p == math.inf else p,
              "resolution_bits": resolution_bits,
              "knots": [str(knots[j]) for j in best_plan],
              "error": float(best_err.hi), "error_lo": float(best_err.lo)}
    return best_err, approx, report


def _plan_segments(knots, plan):
    return [(knots[i], knots[j]) for i, j in zip(plan, plan[1:])]


def _plan_fit(target, knots, plan, deg, p, moments):
    fits = []
    for i, j in zip(plan, plan[1:]):
        q = _fit_segment(target, knots[i], knots[j], deg, p,
                         moments[i], moments[j])
        fits.append(q)
    return fits


def _exact_plan_error(target, knots, plan, deg, p, moments) -> Enclosure:
    fits = _plan_fit(target, knots, plan, deg, p, moments)
    if p == math.inf:
        total = E_ZERO
        for (i, j), q in zip(zip(plan, plan[1:]), fits):
            total = total.max_with(
                _segment_error_pow(target, q, knots[i], knots[j], p))
        return total
    total = E_ZERO
    for (i, j), q in zip(zip(plan, plan[1:]), fits):
        total += _segment_error_pow(target, q, knots[i], knots[j], p)
    if p == 1:
        return total
    return kth_root_enclosure(total, int(p))


def _plan_to_pw(target, knots, plan, deg, p, moments) -> PiecewisePoly:
    """The approximant as a PiecewisePoly, zero outside [0, 1]."""
    fits = _plan_fit(target, knots, plan, deg, p, moments)
    bps = [knots[j] for j in plan[1:-1]]
    return PiecewisePoly(tuple([knots[plan[0]]] + bps + [knots[plan[-1]]]),
                         tuple([poly([0])] + fits + [poly([0])])).normalize()


# -- moduli of smoothness and Besov lower bounds ----------------------------------------

@dataclass(frozen=True)
class ModulusTable:
    order: int
    p: object
    samples: tuple[tuple[Fraction, float], ...]  # (t, lower estimate)


def finite_difference(target: PiecewisePoly, k: int, h: Fraction) -> PiecewisePoly:
    """D_h^k f = sum_i binom(k,i) (-1)^(k-i) f(. + i h), exactly."""
    terms = []
    for i in range(k + 1):
        coef = Fraction(math.comb(k, i) * (-1) ** (k - i))
        terms.append((coef, target.shift_arg(h * i)))
    return affine_combination(terms)


def modulus(target: PiecewisePoly, k: int, p, t) -> Enclosure:
    """Lower estimate of omega_k(f)_p(t) on (0,1) via a dyadic probe set.

    Probes h in {2^-m : m <= 20, 2^-m <= t} plus t itself; each probe value
    ||D_h^k f||_{L_p((0, 1-k h))} is computed exactly.
    """
    if k < 1:
        raise ValueError("order must be positive")
    t = Fraction(t)
    if t <= 0:
        return E_ZERO
    probes = {Fraction(1, 2 ** m) for m in range(1, 21)
              if Fraction(1, 2 ** m) <= t}
    if t < 1:
        probes.add(t)
    best = E_ZERO
    for h in sorted(probes):
        if k * h >= 1:
            continue
        diff = finite_difference(target, k, h)
        best = best.max_with(lp_norm(diff, p, ZERO, 1 - k * h))
    return best


def modulus_table(target: PiecewisePoly, k: int, p,
                  ts: Sequence[Fraction]) -> ModulusTable:
    samples = tuple((Fraction(t), float(modulus(target, k, p, t).lo))
                    for t in ts)
    return ModulusTable(k, "inf" if p == math.inf else p, samples)


def besov_lower(target: PiecewisePoly, s: float, p, q,
                max_scale: int = 20) -> float:
    """Certified lower bound on the Besov quasi-norm with smoothness s < 2.

    Uses sup_t t^-s omega_2(t) for q = inf; for finite q, a lower Riemann
    sum of the integral form over dyadic scales, exploiting that omega is
    nondecreasing.
    """
    if not (0 < s < 2):
        raise ValueError("effective smoothness must lie in (0, 2)")
    omega = [float(modulus(target, 2, p, Fraction(1, 2 ** m)).lo)
             for m in range(max_scale + 1)]
    if q == math.inf:
        return max((2.0 ** (m * s)) * omega[m] for m in range(max_scale + 1))
    # integral_0^1 [t^-s w(t)]^q dt/t >= sum_m [2^(ms) w(2^-(m+1))]^q ln 2
    total = 0.0
    for m in range(max_scale):
        total += (2.0 ** (m * s) * omega[m + 1]) ** q * math.log(2.0)
    return total ** (1.0 / q)


# -- headline checks ---------------------------------------------------------------------

def sawtooth_inapprox_check(j: int, N: int, alpha: int, p, resolution_bits: int = 10,
                            ) -> dict:
    """Certify the sawtooth inapproximability constant at desk scale.

    Precondition N <= (2^j + 1) / (4 (1 + alpha)); the DP upper bound on the
    best N-piece degree-alpha error must then be at least 2^(-5/p).
    """
    from .gadgets import sawtooth_pw

    threshold = Fraction(2 ** j + 1, 4 * (1 + alpha))
    if N > threshold:
        raise ValueError(
            f"N={N} exceeds the crossing-number threshold {threshold}")
    target = sawtooth_pw(j)
    err, _, rep = best_free_knot(target, N, alpha, p, resolution_bits)
    pf = 1.0 if p == math.inf else float(p)
    bound = 2.0 ** (-5.0 / pf)
    value = float(err.lo)
    return {"j": j, "N": N, "alpha": alpha, "p": "inf" if p == math.inf else p,
            "resolution_bits": resolution_bits,
            "dp_error": value, "paper_bound": bound,
            "margin": value / bound if bound else math.inf,
            "pass": value >= bound, "plan": rep["knots"]}


def bernstein_probe(n_list: Sequence[int], s: float, p, deg: int,
                    seed: int = 0) -> dict:
    """Consistency probe of the free-knot Bernstein inequality direction.

    For a corpus of n-piece piecewise polynomials (sawtooths, plus seeded
    random splines), the ratio besov_lower / ||f||_p should grow no faster
    than n^s: the fitted log-log slope must stay below s + 0.1.
    """
    from .gadgets import sawtooth_pw
    import random

    rows = []
    for n in n_list:
        j = max(1, round(math.log2(n)))
        f = sawtooth_pw(j)
        pieces = 2 ** j
        lower = besov_lower(f, s, p, math.inf)
        base = float(lp_norm(f, p, ZERO, ONE).lo)
        rows.append({"kind": f"sawtooth j={j}", "pieces": pieces,
                     "ratio": lower / base if base else 0.0})
    rng = random.Random(seed)
    for n in n_list:
        bps = sorted(Fraction(rng.randrange(1, 2 ** 10), 2 ** 10)
                     for _ in range(max(1, n - 1)))
        vals = [Fraction(rng.randrange(-8, 9), 8) for _ in range(len(bps) + 2)]
        pieces = []
        knots = [ZERO] + bps + [ONE]
        for kdx in range(len(knots) - 1):
            a, b = knots[kdx], knots[kdx + 1]
            ya, yb = vals[kdx], vals[kdx + 1]
            if b == a:
                continue
            slope = (yb - ya) / (b - a)
            pieces.append(poly([ya - slope * a, slope]))
        pw = PiecewisePoly(tuple([ZERO] + bps + [ONE]),
                           tuple([poly([0])] + pieces + [poly([0])])).normalize()
        lower = besov_lower(pw, s, p, math.inf)
        base = float(lp_norm(pw, p, ZERO, ONE).lo)
        if base > 0:
            rows.append({"kind": f"random spline n={n}", "pieces": n,
                         "ratio": lower / base})
    pts = [(math.log(r["pieces"]), math.log(r["ratio"]))
           for r in rows if r["ratio"] > 0 and r["pieces"] > 1]
    slope = _fit_slope(pts)
    return {"rows": rows, "slope": slope, "s": s,
            "pass": slope <= s + 0.1,
            "note": "consistency probe, not a proof"}


def _fit_slope(pts: list[tuple[float, float]]) -> float:
    if len(pts) < 2:
        return 0.0
    xs = np.array([x for x, _ in pts])
    ys = np.array([y for _, y in pts])
    A = np.vstack([xs, np.ones_like(xs)]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(sol[0])
