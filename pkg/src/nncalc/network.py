"""Symbolic feed-forward networks over exact rationals.

A network is a sequence of (affine map, per-neuron activation) layers; the
final layer is always all-identity.  Per-neuron activations are either the
identity, a ReLU power rho_r : x -> max(0, x)^r, or a registered custom
scalar function (float-only).  All coefficients are Fractions; floats exist
only as an evaluation view.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath

from .affine import ZERO, AffineMap, as_fraction


@dataclass(frozen=True)
class Act:
    """Per-neuron activation tag."""

    kind: str  # "id" | "rho" | "custom"
    r: int | None = None
    handle: str | None = None

    def __post_init__(self):
        if self.kind == "id":
            if self.r is not None or self.handle is not None:
                raise ValueError("identity tag carries no parameters")
        elif self.kind == "rho":
            if not isinstance(self.r, int) or self.r < 1:
                raise ValueError("rho degree must be a positive integer")
        elif self.kind == "custom":
            if not self.handle:
                raise ValueError("custom tag needs a registry handle")
        else:
            raise ValueError(f"unknown activation kind {self.kind!r}")

    def format(self) -> str:
        if self.kind == "id":
            return "id"
        if self.kind == "rho":
            return f"rho:{self.r}"
        return f"custom:{self.handle}"

    @staticmethod
    def parse(s: str) -> "Act":
        if s == "id":
            return ID
        if s.startswith("rho:"):
            return Act("rho", r=int(s[4:]))
        if s.startswith("custom:"):
            return Act("custom", handle=s[7:])
        raise ValueError(f"unparseable activation tag {s!r}")


ID = Act("id")


def rho(r: int) -> Act:
    return Act("rho", r=r)


def apply_rho(r: int, x: Fraction) -> Fraction:
    return x ** r if x > 0 else ZERO


# -- custom activation registry ----------------------------------------------
#
# Custom activations participate only in float evaluation and in the
# approximate strictification; the optional (x0, slope) pair records a point
# of differentiability with nonzero derivative.

@dataclass(frozen=True)
class CustomActivation:
    name: str
    fn: Callable[[float], float]
    x0: float | None = None
    slope: float | None = None


_REGISTRY: dict[str, CustomActivation] = {}


def register_activation(name: str, fn: Callable[[float], float],
                        x0: float | None = None,
                        slope: float | None = None) -> Act:
    _REGISTRY[name] = CustomActivation(name, fn, x0, slope)
    return Act("custom", handle=name)


def get_activation(name: str) -> CustomActivation:
    if name not in _REGISTRY:
        raise KeyError(f"custom activation {name!r} is not registered")
    return _REGISTRY[name]


# -- layers and networks -------------------------------------------------------

@dataclass(frozen=True)
class Layer:
    map: AffineMap
    acts: tuple[Act, ...]

    def __post_init__(self):
        if len(self.acts) != self.map.rows:
            raise ValueError("one activation tag per output neuron required")


@dataclass(frozen=True)
class Network:
    layers: tuple[Layer, ...]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("network needs at least one layer")

    @property
    def d_in(self) -> int:
        return self.layers[0].map.cols

    @property
    def d_out(self) -> int:
        return self.layers[-1].map.rows

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.d_in,) + tuple(layer.map.rows for layer in self.layers)

    def hidden_acts(self):
        for layer in self.layers[:-1]:
            yield from layer.acts

    @property
    def is_strict(self) -> bool:
        """Every hidden activation is the same rho_r."""
        degrees = {a.r for a in self.hidden_acts() if a.kind == "rho"}
        if any(a.kind != "rho" for a in self.hidden_acts()):
            return False
        return len(degrees) <= 1

    def rho_degree(self) -> int | None:
        """The unique rho degree used, or None if no rho tag is present."""
        degrees = {a.r for layer in self.layers for a in layer.acts if a.kind == "rho"}
        if len(degrees) > 1:
            raise ValueError(f"mixed rho degrees {sorted(degrees)}")
        return degrees.pop() if degrees else None


def single_layer(map_: AffineMap) -> Network:
    return Network((Layer(map_, (ID,) * map_.rows),))


def constant_network(c: Sequence[object], d: int) -> Network:
    """The W=0, N=0, L=1 network realizing x -> c on R^d."""
    if d < 1:
        raise ValueError("input dimension must be positive")
    bias = [as_fraction(v) for v in c]
    return single_layer(AffineMap.constant(bias, d))


# -- validation ----------------------------------------------------------------

def validate(net: Network) -> list[str]:
    """Diagnostics list; empty iff all structural invariants hold."""
    diags: list[str] = []
    prev_rows = net.d_in
    for idx, layer in enumerate(net.layers):
        if layer.map.cols != prev_rows:
            diags.append(
                f"layer {idx}: dimension chain broken "
                f"(expects {prev_rows} inputs, map has {layer.map.cols})")
        prev_rows = layer.map.rows
        if len(layer.acts) != layer.map.rows:
            diags.append(f"layer {idx}: activation vector length mismatch")
    for a in net.layers[-1].acts:
        if a.kind != "id":
            diags.append(f"layer {net.depth - 1}: output activation must be identity")
            break
    for idx, layer in enumerate(net.layers):
        for a in layer.acts:
            if a.kind == "custom" and a.handle not in _REGISTRY:
                diags.append(f"layer {idx}: unregistered custom activation {a.handle!r}")
    return diags


class InvalidNetworkError(ValueError):
    pass


def require_valid(net: Network) -> None:
    diags = validate(net)
    if diags:
        raise InvalidNetworkError("; ".join(diags))


# -- complexity accounting -------------------------------------------------------

@dataclass(frozen=True)
class ComplexityReport:
    W: int
    N: int
    L: int
    W0: int
    per_layer: tuple[tuple[int, int, int], ...]  # (l0, l0_colmax, l0_rowmax)

    def as_dict(self) -> dict:
        return {"W": self.W, "N": self.N, "L": self.L, "W0": self.W0,
                "per_layer": [list(t) for t in self.per_layer]}


def complexity(net: Network) -> ComplexityReport:
    require_valid(net)
    W = sum(layer.map.l0 for layer in net.layers)
    N = sum(layer.map.rows for layer in net.layers[:-1])
    L = net.depth
    W0 = sum(layer.map.l0 + layer.map.bias_l0 for layer in net.layers)
    per_layer = tuple((layer.map.l0, layer.map.l0_colmax, layer.map.l0_rowmax)
                      for layer in net.layers)
    return ComplexityReport(W, N, L, W0, per_layer)


# -- evaluation ------------------------------------------------------------------

class ExactEvaluationUnavailable(ValueError):
    pass


def evaluate(net: Network, x: Sequence[object],
             custom_exact: Mapping[str, Callable[[Fraction], Fraction]] | None = None,
             ) -> tuple[Fraction, ...]:
    """Exact rational output of the realization at a rational point."""
    vec = tuple(as_fraction(v) for v in x)
    if len(vec) != net.d_in:
        raise ValueError(f"expected {net.d_in} inputs, got {len(vec)}")
    for layer in net.layers:
        vec = layer.map.apply(vec)
        out = []
        for a, v in zip(layer.acts, vec):
            if a.kind == "id":
                out.append(v)
            elif a.kind == "rho":
                out.append(apply_rho(a.r, v))
            elif custom_exact and a.handle in custom_exact:
                out.append(as_fraction(custom_exact[a.handle](v)))
            else:
                raise ExactEvaluationUnavailable(
                    f"custom activation {a.handle!r} present; use evaluate_float")
        vec = tuple(out)
    return vec


DEFAULT_PRECISION_BITS = 128


def _precision_bits(precision_bits: int | None) -> int:
    if precision_bits is not None:
        return precision_bits
    return int(os.environ.get("NNCALC_PRECISION_BITS", DEFAULT_PRECISION_BITS))


def evaluate_float(net: Network, x: Sequence[float],
                   precision_bits: int | None = None,
                   ) -> tuple[list[float], list[float | None]]:
    """Float view of the realization at configurable precision.

    Returns (values, error_bounds).  For id/rho networks the computation runs
    in certified interval arithmetic, so each bound is a true enclosure
    radius; custom activations are evaluated pointwise and get bound None.
    """
    if len(x) != net.d_in:
        raise ValueError(f"expected {net.d_in} inputs, got {len(x)}")
    prec = _precision_bits(precision_bits)
    has_custom = any(a.kind == "custom" for layer in net.layers for a in layer.acts)

    if has_custom:
        with mpmath.workprec(prec):
            vec = [mpmath.mpf(v) for v in x]
            for layer in net.layers:
                nxt = [mpmath.mpf(b) for b in _bias_mpf(layer.map)]
                for i, j, v in layer.map.entries:
                    nxt[i] += mpmath.mpf(v.numerator) / v.denominator * vec[j]
                vec = [_act_float(a, v) for a, v in zip(layer.acts, nxt)]
            return [float(v) for v in vec], [None] * len(vec)

    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        vec = [iv.mpf(v) for v in x]
        for layer in net.layers:
            nxt = [iv.mpf(b.numerator) / b.denominator for b in layer.map.bias]
            for i, j, v in layer.map.entries:
                nxt[i] += (iv.mpf(v.numerator) / v.denominator) * vec[j]
            out = []
            for a, v in zip(layer.acts, nxt):
                if a.kind == "id":
                    out.append(v)
                else:
                    zero = iv.mpf(0)
                    clip = iv.mpf([max(float(v.a), 0.0), max(float(v.b), 0.0)])
                    out.append(clip ** a.r if a.r > 1 else clip)
            vec = out
        values = [float(v.mid) for v in vec]
        bounds = [float(v.delta) / 2 for v in vec]
        return values, bounds
    finally:
        iv.prec = old


def _bias_mpf(m: AffineMap):
    return [mpmath.mpf(b.numerator) / b.denominator for b in m.bias]


def _act_float(a: Act, v):
    if a.kind == "id":
        return v
    if a.kind == "rho":
        return v ** a.r if v > 0 else mpmath.mpf(0)
    return mpmath.mpf(get_activation(a.handle).fn(float(v)))


# -- compression (dead-neuron removal) --------------------------------------------

def compress(net: Network) -> Network:
    """Remove dead hidden neurons; collapse to a constant when a map is zero.

    Realization is preserved exactly.  Neurons whose incoming row is all-zero
    are eliminated lowest-layer-first, lowest-index-first, folding the
    constant they emit into the next layer's bias, until a fixed point.
    """
    require_valid(net)
    layers = list(net.layers)
    while True:
        if any(layer.map.l0 == 0 for layer in layers):
            # some affine map is constant, hence so is the whole realization
            probe = (ZERO,) * net.d_in
            c = evaluate(Network(tuple(layers)), probe)
            return constant_network(c, net.d_in)
        target = None
        for ell in range(len(layers) - 1):  # hidden layers only
            rows_with_entries = {i for i, _, _ in layers[ell].map.entries}
            for i in range(layers[ell].map.rows):
                if i not in rows_with_entries:
                    target = (ell, i)
                    break
            if target:
                break
        if target is None:
            return Network(tuple(layers))
        ell, i = target
        layer = layers[ell]
        if layer.map.rows == 1:
            # single dead neuron makes the layer constant; handled above next pass
            bias = layer.map.bias
            layers[ell] = Layer(AffineMap.constant(bias, layer.map.cols), layer.acts)
            continue
        a = layer.acts[i]
        const = layer.map.bias[i]
        if a.kind == "rho":
            const = apply_rho(a.r, const)
        elif a.kind == "custom":
            raise ExactEvaluationUnavailable(
                "cannot compress a dead custom-activated neuron exactly")
        new_map = layer.map.drop_row(i)
        new_acts = layer.acts[:i] + layer.acts[i + 1:]
        layers[ell] = Layer(new_map, new_acts)
        nxt = layers[ell + 1]
        layers[ell + 1] = Layer(nxt.map.drop_col_into_bias(i, const), nxt.acts)


# -- JSON wire format --------------------------------------------------------------

FORMAT_TAG = "nncalc-net-v1"


def to_json_dict(net: Network) -> dict:
    return {
        "format": FORMAT_TAG,
        "layers": [
            {
                "rows": layer.map.rows,
                "cols": layer.map.cols,
                "matrix": [[i, j, str(v)] for i, j, v in layer.map.entries],
                "bias": [str(b) for b in layer.map.bias],
                "act": [a.format() for a in layer.acts],
            }
            for layer in net.layers
        ],
    }


def from_json_dict(data: Mapping) -> Network:
    if data.get("format") != FORMAT_TAG:
        raise ValueError(f"unsupported network format {data.get('format')!r}")
    layers = []
    for spec in data["layers"]:
        m = AffineMap.from_entries(
            spec["rows"], spec["cols"],
            [(i, j, Fraction(v)) for i, j, v in spec["matrix"]],
            [Fraction(b) for b in spec["bias"]])
        acts = tuple(Act.parse(s) for s in spec["act"])
        layers.append(Layer(m, acts))
    return Network(tuple(layers))


def to_json(net: Network, indent: int | None = None) -> str:
    return json.dumps(to_json_dict(net), indent=indent, sort_keys=True)


def from_json(text: str) -> Network:
    return from_json_dict(json.loads(text))
