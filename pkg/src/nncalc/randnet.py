"""Seeded generation of random sparse networks and rational test points.

All randomness flows from a single 64-bit seed expanded by SHA-256 over a
(seed, label) pair, so every suite, trial, and point set is reproducible and
independent of Python's hash randomization.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .affine import AffineMap
from .network import ID, Act, Layer, Network, rho


def split_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(seed: int, label: str) -> random.Random:
    return random.Random(split_seed(seed, label))


def random_rational(rng: random.Random, lo: int, hi: int, max_den: int = 16) -> Fraction:
    den = rng.randrange(1, max_den + 1)
    num = rng.randrange(lo * den, hi * den + 1)
    return Fraction(num, den)


def rational_points(seed: int, label: str, count: int, dim: int,
                    lo: int = -8, hi: int = 8) -> list[tuple[Fraction, ...]]:
    rng = rng_for(seed, label)
    return [tuple(random_rational(rng, lo, hi, max_den=16) for _ in range(dim))
            for _ in range(count)]


def random_network(rng: random.Random, d_in: int = 1, d_out: int = 1,
                   r: int = 1, max_depth: int = 5, max_width: int = 4,
                   max_weights: int = 30, identity_prob: float = 0.3,
                   strict: bool = False) -> Network:
    """A random valid network with W <= max_weights.

    Every row keeps at least one entry so the realization genuinely depends
    on its inputs in the common case; remaining weight budget is spread
    uniformly over the free matrix positions.
    """
    depth = rng.randrange(1, max_depth + 1)
    widths = [d_in] + [rng.randrange(1, max_width + 1) for _ in range(depth - 1)] + [d_out]
    budget = max_weights
    layers = []
    for ell in range(depth):
        rows, cols = widths[ell + 1], widths[ell]
        positions = [(i, rng.randrange(cols)) for i in range(rows)]
        extra = [(i, j) for i in range(rows) for j in range(cols)]
        rng.shuffle(extra)
        for pos in extra:
            if len(positions) >= budget // max(1, depth - ell):
                break
            if pos not in positions:
                positions.append(pos)
        positions = positions[:max(0, budget)]
        entries = []
        seen = set()
        for i, j in positions:
            if (i, j) in seen:
                continue
            seen.add((i, j))
            v = random_rational(rng, -2, 2, max_den=8)
            if v == 0:
                v = Fraction(1)
            entries.append((i, j, v))
        budget -= len(entries)
        bias = [random_rational(rng, -2, 2, max_den=8) if rng.random() < 0.5 else 0
                for _ in range(rows)]
        if ell == depth - 1:
            acts = (ID,) * rows
        elif strict:
            acts = (rho(r),) * rows
        else:
            acts = tuple(ID if rng.random() < identity_prob else rho(r)
                         for _ in range(rows))
        layers.append(Layer(AffineMap.from_entries(rows, cols, entries, bias), acts))
    return Network(tuple(layers))
