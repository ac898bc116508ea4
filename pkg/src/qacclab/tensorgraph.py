"""Tensor graphs: a succinct representation of the state sets a layered
circuit produces, with amplitudes recoverable per basis vector.

A tensor graph is a DAG with one source and one terminal.  Vertical edges
carry a color product and an amplitude pair (for |0> and |1>); horizontal
edges are unlabeled routing between nodes of one height.  Every
source-to-terminal path crosses exactly one vertical edge per height, and
no node has vertical in- or out-degree above one.  A path denotes the
product state formed by its edges' amplitude pairs, weighted by the
product of its color factors; the amplitude of a basis vector is the sum
over paths of the per-height amplitudes times color products, evaluated
in path order.

Colors obey c*c = 1, anti*anti = 1 and c*anti = 0: a fresh color/anticolor
pair binds the two heights a controlled-not touches, so paths that pick
inconsistent control branches annihilate instead of the graph having to
fan out the span between the two lines.

Gate application rules are stated against the operator identities they
implement:

* one-qubit U: amplitude pairs at the target height are mapped by U; no
  structural change.
* Toffoli, from AND_m(X) = I + P(controls all 1) (x) (X - I): the span
  keeps its original term and gains one variant whose control edges
  become (0, a1) and whose target edge becomes (a1-a0, a0-a1).
* fan-out, from F = P0 (x) I + P1 (x) X^(targets): the original term keeps
  only the control's |0> branch (a0, 0); the added variant carries
  (0, a1) on the control and swapped pairs on the targets.
* controlled-not (c,t) in a layer, from P0 (x) I + P1 (x) X: every vertical
  edge at the control height splits into a c-tagged (a0, 0) edge and an
  anticolor-tagged (0, a1) companion; at the target height into a
  c-tagged unchanged edge and an anticolor-tagged swapped companion.
* any other (block) gate lowers by dense local expansion: one span
  variant per nonzero matrix entry |y><x|, each picking the input bit's
  amplitude into the output slot, with the entry's scalar folded into the
  gate's first line.

The binding correctness contract for all of these is exact agreement with
the brute-force state-vector simulator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import ExactScalar
from .algebra.scalars import f_from_json
from . import circuit as cir
from .circuit import (
    Circuit,
    CNotLayer,
    FourierGate,
    OneQubitGate,
    StagedCNotLayer,
    TensorLayer,
    ToffoliGate,
    FanOutGate,
    ValidationError,
    validate,
)

PATH_CAP_DEFAULT = 10**6


class GraphError(RuntimeError):
    pass


class PathCapExceeded(GraphError):
    pass


# -- color algebra -------------------------------------------------------------


class ColorProduct:
    """Product of colors/anticolors; at most one polarity per color id.

    times() returns None when the product annihilates (a color meets its
    anticolor); matching factors cancel pairwise.  The empty product is
    the scalar 1.
    """

    __slots__ = ("factors",)

    def __init__(self, factors=frozenset()):
        self.factors = frozenset(factors)
        ids = [cid for cid, _ in self.factors]
        if len(ids) != len(set(ids)):
            raise GraphError("color product holds both polarities of one color")

    def times(self, other: "ColorProduct"):
        if not other.factors:
            return self
        if not self.factors:
            return other
        mine = dict(self.factors)
        out = dict(mine)
        for cid, anti in other.factors:
            if cid in mine:
                if mine[cid] != anti:
                    return None  # c * anti(c) = 0
                del out[cid]
            else:
                out[cid] = anti
        return ColorProduct(frozenset(out.items()))

    def is_unit(self) -> bool:
        return not self.factors

    def __eq__(self, other):
        return isinstance(other, ColorProduct) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        if not self.factors:
            return "{1}"
        names = [f"~c{cid}" if anti else f"c{cid}" for cid, anti in sorted(self.factors)]
        return "{" + "*".join(names) + "}"


UNIT_PRODUCT = ColorProduct()


def color(cid: int) -> ColorProduct:
    return ColorProduct(frozenset({(cid, False)}))


def anticolor(cid: int) -> ColorProduct:
    return ColorProduct(frozenset({(cid, True)}))


def fold_color_products(products) -> ColorProduct | None:
    """Left-to-right product, the order paths multiply their factors in."""
    acc = UNIT_PRODUCT
    for p in products:
        acc = acc.times(p)
        if acc is None:
            return None
    return acc


class ColorTerm:
    """Formal sum of scalar-weighted color products."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = dict(terms or {})

    @classmethod
    def unit(cls, ctx):
        return cls(ctx, {UNIT_PRODUCT: ctx.one()})

    @classmethod
    def single(cls, ctx, product: ColorProduct, scalar: ExactScalar):
        if scalar.is_zero():
            return cls(ctx)
        return cls(ctx, {product: scalar})

    def is_zero(self) -> bool:
        return not self.terms

    def plus(self, other: "ColorTerm") -> "ColorTerm":
        out = dict(self.terms)
        for prod, scalar in other.terms.items():
            prev = out.get(prod)
            new = scalar if prev is None else prev + scalar
            if new.is_zero():
                out.pop(prod, None)
            else:
                out[prod] = new
        return ColorTerm(self.ctx, out)

    def times(self, other: "ColorTerm") -> "ColorTerm":
        out: dict = {}
        for p1, s1 in self.terms.items():
            for p2, s2 in other.terms.items():
                prod = p1.times(p2)
                if prod is None:
                    continue
                scalar = s1 * s2
                if scalar.is_zero():
                    continue
                prev = out.get(prod)
                new = scalar if prev is None else prev + scalar
                if new.is_zero():
                    out.pop(prod, None)
                else:
                    out[prod] = new
        return ColorTerm(self.ctx, out)

    def scalar_part(self) -> ExactScalar:
        return self.terms.get(UNIT_PRODUCT, self.ctx.zero())

    def colored_residue(self) -> bool:
        return any(not p.is_unit() for p in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{p!r}*({s!r})" for p, s in self.terms.items())


def color_mul(a: ColorTerm, b: ColorTerm) -> ColorTerm:
    return a.times(b)


# -- the graph -----------------------------------------------------------------


class TensorGraph:
    """Mutating builder methods are for construction and loaders; the
    apply_* functions below never modify their argument."""

    def __init__(self, ctx, height: int):
        self.ctx = ctx
        self.height = height
        self.nodes: dict[int, int] = {}
        self.vout: dict[int, tuple] = {}  # src -> (dst, ColorProduct, a0, a1)
        self.vin: dict[int, int] = {}
        self.hout: dict[int, list[int]] = {}
        self.source: int | None = None
        self.terminal: int | None = None
        self._next_node = 0
        self._next_color = 0
        self.dense_lowered_gates = 0

    # construction ---------------------------------------------------------

    def add_node(self, height: int, node_id: int | None = None) -> int:
        nid = self._next_node if node_id is None else node_id
        if nid in self.nodes:
            raise GraphError(f"duplicate node id {nid}")
        self.nodes[nid] = height
        self._next_node = max(self._next_node, nid + 1)
        return nid

    def add_vedge(self, src: int, dst: int, product: ColorProduct, a0, a1):
        if src in self.vout:
            raise GraphError(f"node {src} already has a vertical out-edge")
        if dst in self.vin:
            raise GraphError(f"node {dst} already has a vertical in-edge")
        if self.nodes[dst] != self.nodes[src] + 1:
            raise GraphError("vertical edge must descend exactly one height")
        self.vout[src] = (dst, product, a0, a1)
        self.vin[dst] = src

    def add_hedge(self, src: int, dst: int):
        if self.nodes[src] != self.nodes[dst]:
            raise GraphError("horizontal edge must stay at one height")
        self.hout.setdefault(src, []).append(dst)

    def copy(self) -> "TensorGraph":
        g = TensorGraph(self.ctx, self.height)
        g.nodes = dict(self.nodes)
        g.vout = dict(self.vout)
        g.vin = dict(self.vin)
        g.hout = {k: list(v) for k, v in self.hout.items()}
        g.source = self.source
        g.terminal = self.terminal
        g._next_node = self._next_node
        g._next_color = self._next_color
        g.dense_lowered_gates = self.dense_lowered_gates
        return g

    def fresh_color(self) -> int:
        cid = self._next_color
        self._next_color += 1
        return cid

    # views ------------------------------------------------------------------

    def nodes_at(self, height: int) -> list[int]:
        return sorted(n for n, h in self.nodes.items() if h == height)

    def vedges_at(self, height: int) -> list[tuple]:
        """(src, dst, product, a0, a1) for vertical edges ending at height."""
        out = []
        for src, (dst, product, a0, a1) in self.vout.items():
            if self.nodes[dst] == height:
                out.append((src, dst, product, a0, a1))
        out.sort(key=lambda e: e[1])
        return out

    def width(self) -> int:
        counts: dict[int, int] = {}
        for h in self.nodes.values():
            counts[h] = counts.get(h, 0) + 1
        return max(counts.values()) if counts else 0


def tg_init(bits: str, ctx) -> TensorGraph:
    """Width-1 chain for a basis state: edge k carries (1,0) or (0,1)."""
    g = TensorGraph(ctx, len(bits))
    prev = g.add_node(0)
    g.source = prev
    one, zero = ctx.one(), ctx.zero()
    for k, b in enumerate(bits):
        node = g.add_node(k + 1)
        if b == "0":
            g.add_vedge(prev, node, UNIT_PRODUCT, one, zero)
        else:
            g.add_vedge(prev, node, UNIT_PRODUCT, zero, one)
        prev = node
    g.terminal = prev
    return g


# -- gate application ------------------------------------------------------------


def apply_one_qubit(g: TensorGraph, matrix, line: int) -> TensorGraph:
    """Left-multiply the amplitude pair of every edge at the line's height."""
    out = g.copy()
    h = line + 1
    for src, (dst, product, a0, a1) in list(out.vout.items()):
        if out.nodes[dst] != h:
            continue
        b0 = matrix[0][0] * a0 + matrix[0][1] * a1
        b1 = matrix[1][0] * a0 + matrix[1][1] * a1
        out.vout[src] = (dst, product, b0, b1)
    return out


def _apply_span_variants(g: TensorGraph, lo: int, hi: int, transforms) -> TensorGraph:
    """Rewrite the span of heights lo..hi with label transformers.

    transforms[0] is applied to the original edges in place; every further
    transformer adds one parallel copy of the span, entered by a
    horizontal edge at each height lo-1 node that starts a vertical edge
    and left through a horizontal edge at each height-hi landing node.
    Each existing path therefore splits into exactly len(transforms)
    paths, one per variant.
    """
    out = g.copy()
    span_edges = {}
    for h in range(lo, hi + 1):
        span_edges[h] = g.vedges_at(h)
    entry_nodes = [src for (src, *_rest) in span_edges[lo]]
    exit_nodes = [dst for (_src, dst, *_rest) in span_edges[hi]]
    internal = [n for n, h in sorted(g.nodes.items()) if lo <= h <= hi - 1]

    for transform in transforms[1:]:
        mapping = {}
        for n in entry_nodes + internal + exit_nodes:
            if n not in mapping:
                mapping[n] = out.add_node(g.nodes[n])
        for h in range(lo, hi + 1):
            for src, dst, product, a0, a1 in span_edges[h]:
                product2, b0, b1 = transform(h, product, a0, a1)
                out.add_vedge(mapping[src], mapping[dst], product2, b0, b1)
        for src in internal:
            for dst in g.hout.get(src, ()):  # routing inside the span
                if dst in mapping and lo <= g.nodes[dst] <= hi - 1:
                    out.add_hedge(mapping[src], mapping[dst])
        for n in entry_nodes:
            out.add_hedge(n, mapping[n])
        for n in exit_nodes:
            out.add_hedge(mapping[n], n)

    base = transforms[0]
    for h in range(lo, hi + 1):
        for src, dst, product, a0, a1 in span_edges[h]:
            product2, b0, b1 = base(h, product, a0, a1)
            out.vout[src] = (dst, product2, b0, b1)
    return out


def apply_toffoli(g: TensorGraph, controls, target: int) -> TensorGraph:
    """AND_m(X) = identity plus an all-controls-1 correction variant."""
    if not controls:
        ctx = g.ctx
        x_matrix = (
            (ctx.zero(), ctx.one()),
            (ctx.one(), ctx.zero()),
        )
        return apply_one_qubit(g, x_matrix, target)
    lines = tuple(controls) + (target,)
    lo, hi = min(lines) + 1, max(lines) + 1
    control_heights = {c + 1 for c in controls}
    target_height = target + 1
    zero = g.ctx.zero()

    def identity(h, product, a0, a1):
        return product, a0, a1

    def correction(h, product, a0, a1):
        if h in control_heights:
            return product, zero, a1
        if h == target_height:
            return product, a1 - a0, a0 - a1
        return product, a0, a1

    return _apply_span_variants(g, lo, hi, [identity, correction])


def apply_fanout(g: TensorGraph, targets, control: int) -> TensorGraph:
    """F = (control |0> branch, targets kept) + (|1> branch, targets swapped)."""
    lines = tuple(targets) + (control,)
    lo, hi = min(lines) + 1, max(lines) + 1
    target_heights = {t + 1 for t in targets}
    control_height = control + 1
    zero = g.ctx.zero()

    def keep_zero(h, product, a0, a1):
        if h == control_height:
            return product, a0, zero
        return product, a0, a1

    def one_branch(h, product, a0, a1):
        if h == control_height:
            return product, zero, a1
        if h in target_heights:
            return product, a1, a0
        return product, a0, a1

    return _apply_span_variants(g, lo, hi, [keep_zero, one_branch])


def apply_dense_gate(g: TensorGraph, gate) -> TensorGraph:
    """Lower a block gate: one span variant per nonzero matrix entry."""
    ctx = g.ctx
    lines = tuple(gate.lines())
    k = len(lines)
    local = _relabel(gate, {l: i for i, l in enumerate(lines)})
    entries = []
    for x in range(1 << k):
        for y, scalar in cir.apply_gate_to_basis(local, x, k, ctx):
            entries.append((x, y, scalar))
    lo, hi = min(lines) + 1, max(lines) + 1
    first_line = lines[0]
    position = {l: i for i, l in enumerate(lines)}
    zero = ctx.zero()

    def entry_transform(x, y, scalar):
        def t(h, product, a0, a1):
            line = h - 1
            pos = position.get(line)
            if pos is None:
                return product, a0, a1
            xb = (x >> (k - 1 - pos)) & 1
            yb = (y >> (k - 1 - pos)) & 1
            amp = a0 if xb == 0 else a1
            if line == first_line and scalar is not None:
                amp = amp * scalar
            return (product, amp, zero) if yb == 0 else (product, zero, amp)

        return t

    out = _apply_span_variants(g, lo, hi, [entry_transform(*e) for e in entries])
    out.dense_lowered_gates += 1
    return out


def _relabel(gate, mapping):
    def remap(v):
        if isinstance(v, tuple):
            return tuple(remap(x) for x in v)
        if isinstance(v, int) and not isinstance(v, bool):
            return mapping[v]
        return v

    fields = {}
    for name in gate.__dataclass_fields__:
        value = getattr(gate, name)
        if name in ("matrix", "q", "r", "inverse"):
            fields[name] = value
        else:
            fields[name] = remap(value)
    return type(gate)(**fields)


def apply_cnot_pair(g: TensorGraph, control: int, target: int) -> TensorGraph:
    """Color-bound split of the control and target heights.

    Control edges become (C*c, a0, 0) with an anticolor companion
    (C*~c, 0, a1); target edges become (C*c, a0, a1) with companion
    (C*~c, a1, a0).  Mixed picks annihilate through c*~c = 0, so only the
    two globally consistent branch choices survive.
    """
    out = g.copy()
    cid = out.fresh_color()
    c, anti = color(cid), anticolor(cid)
    zero = out.ctx.zero()
    for height, is_control in ((control + 1, True), (target + 1, False)):
        for src, dst, product, a0, a1 in g.vedges_at(height):
            tagged = product.times(c)
            companion_product = product.times(anti)
            if is_control:
                out.vout[src] = (dst, tagged, a0, zero)
                comp = (companion_product, zero, a1)
            else:
                out.vout[src] = (dst, tagged, a0, a1)
                comp = (companion_product, a1, a0)
            p = out.add_node(g.nodes[src])
            r = out.add_node(g.nodes[dst])
            out.add_hedge(src, p)
            out.add_vedge(p, r, *comp)
            out.add_hedge(r, dst)
    return out


def apply_cnot_layer(g: TensorGraph, pairs) -> TensorGraph:
    for control, target in pairs:
        g = apply_cnot_pair(g, control, target)
    return g


def apply_layer(g: TensorGraph, layer) -> TensorGraph:
    if isinstance(layer, TensorLayer):
        for gate in layer.gates:
            if isinstance(gate, OneQubitGate):
                g = apply_one_qubit(g, gate.matrix, gate.line)
            elif isinstance(gate, FourierGate) and gate.q == 2:
                zeta, invsq = g.ctx.fourier_scalars(2)
                sign = -invsq
                matrix = ((invsq, invsq), (invsq, sign))
                g = apply_one_qubit(g, matrix, gate.block[0])
            elif isinstance(gate, ToffoliGate):
                g = apply_toffoli(g, gate.controls, gate.target)
            elif isinstance(gate, FanOutGate):
                g = apply_fanout(g, gate.targets, gate.control)
            else:
                g = apply_dense_gate(g, gate)
        return g
    if isinstance(layer, CNotLayer):
        return apply_cnot_layer(g, layer.pairs)
    if isinstance(layer, StagedCNotLayer):
        for stage in layer.stages:
            g = apply_cnot_layer(g, stage)
        return g
    raise TypeError(f"unknown layer {type(layer).__name__}")


def tg_build(c: Circuit, input_bits: str, check: bool = True) -> TensorGraph:
    """Graph whose amplitude map equals running the circuit on |x, 0^aux>."""
    if len(input_bits) != c.n_inputs:
        raise GraphError(f"input has {len(input_bits)} bits, expected {c.n_inputs}")
    if check:
        diags = validate(c)
        if diags:
            raise ValidationError(diags)
    g = tg_init(input_bits + "0" * c.n_aux, c.context)
    for layer in c.layers:
        g = apply_layer(g, layer)
    return g


# -- amplitude extraction --------------------------------------------------------


def _topo_nodes(g: TensorGraph) -> list[int]:
    """Heights ascending; within one height, horizontal-edge topological."""
    by_height: dict[int, list[int]] = {}
    for n, h in g.nodes.items():
        by_height.setdefault(h, []).append(n)
    order = []
    for h in sorted(by_height):
        nodes = sorted(by_height[h])
        indeg = {n: 0 for n in nodes}
        for src in nodes:
            for dst in g.hout.get(src, ()):
                if g.nodes[dst] == h:
                    indeg[dst] += 1
        ready = sorted(n for n, d in indeg.items() if d == 0)
        seen = []
        while ready:
            n = ready.pop(0)
            seen.append(n)
            for dst in g.hout.get(n, ()):
                if g.nodes[dst] == h:
                    indeg[dst] -= 1
                    if indeg[dst] == 0:
                        ready.append(dst)
            ready.sort()
        if len(seen) != len(nodes):
            raise GraphError(f"horizontal cycle at height {h}")
        order.extend(seen)
    return order


def _edge_value(g: TensorGraph, product, a0, a1, bit: str) -> ColorTerm:
    amp = a0 if bit == "0" else a1
    return ColorTerm.single(g.ctx, product, amp)


def tg_amplitude_dp(g: TensorGraph, target_bits: str) -> ExactScalar:
    """Height-by-height dynamic program over color terms.

    Accumulates, per node, the color-term amplitude of the target prefix
    over all partial paths; color products multiply in path order, the
    regime where the algebra behaves associatively.
    """
    if len(target_bits) != g.height:
        raise GraphError(f"target has {len(target_bits)} bits, graph height {g.height}")
    ctx = g.ctx
    acc: dict[int, ColorTerm] = {n: ColorTerm(ctx) for n in g.nodes}
    acc[g.source] = ColorTerm.unit(ctx)
    for node in _topo_nodes(g):
        value = acc[node]
        if value.is_zero():
            continue
        for dst in g.hout.get(node, ()):
            acc[dst] = acc[dst].plus(value)
        if node in g.vout:
            dst, product, a0, a1 = g.vout[node]
            bit = target_bits[g.nodes[dst] - 1]
            edge = _edge_value(g, product, a0, a1, bit)
            if not edge.is_zero():
                acc[dst] = acc[dst].plus(value.times(edge))
    final = acc[g.terminal]
    if final.colored_residue():
        raise GraphError("terminal value keeps color factors: graph is not color consistent")
    return final.scalar_part()


def tg_path_count(g: TensorGraph) -> int:
    count = {n: 0 for n in g.nodes}
    count[g.source] = 1
    for node in _topo_nodes(g):
        c = count[node]
        if not c:
            continue
        for dst in g.hout.get(node, ()):
            count[dst] += c
        if node in g.vout:
            count[g.vout[node][0]] += c
    return count[g.terminal]


def tg_amplitude_paths(
    g: TensorGraph, target_bits: str, cap: int = PATH_CAP_DEFAULT
) -> ExactScalar:
    """Sum over explicit source-terminal paths; color-annihilated paths drop."""
    if len(target_bits) != g.height:
        raise GraphError(f"target has {len(target_bits)} bits, graph height {g.height}")
    n_paths = tg_path_count(g)
    if n_paths > cap:
        raise PathCapExceeded(f"{n_paths} paths exceed the cap {cap}")
    ctx = g.ctx
    total = ctx.zero()
    stack = [(g.source, UNIT_PRODUCT, ctx.one())]
    while stack:
        node, product, scalar = stack.pop()
        if node == g.terminal:
            if not product.is_unit():
                raise GraphError("path ends with open colors: graph is not color consistent")
            total = total + scalar
            continue
        for dst in g.hout.get(node, ()):
            stack.append((dst, product, scalar))
        if node in g.vout:
            dst, eproduct, a0, a1 = g.vout[node]
            amp = a0 if target_bits[g.nodes[dst] - 1] == "0" else a1
            if amp.is_zero():
                continue
            new_product = product.times(eproduct)
            if new_product is None:
                continue
            new_scalar = scalar * amp
            if new_scalar.is_zero():
                continue
            stack.append((dst, new_product, new_scalar))
    return total


# -- metrics ---------------------------------------------------------------------


@dataclass(frozen=True)
class GraphMetrics:
    width: int
    height: int
    path_count: int
    color_depth: int
    color_consistent: bool
    dense_lowered_gates: int

    def to_json(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "path_count": self.path_count,
            "color_depth": self.color_depth,
            "color_consistent": self.color_consistent,
            "dense_lowered_gates": self.dense_lowered_gates,
        }


def tg_metrics(g: TensorGraph) -> GraphMetrics:
    heights_of_color: dict[int, dict[bool, set]] = {}
    for src, (dst, product, _a0, _a1) in g.vout.items():
        h = g.nodes[dst]
        for cid, anti in product.factors:
            heights_of_color.setdefault(cid, {False: set(), True: set()})[anti].add(h)
    consistent = True
    spans = []
    for cid, polarity_heights in heights_of_color.items():
        all_heights = polarity_heights[False] | polarity_heights[True]
        if len(all_heights) != 2 or polarity_heights[False] != polarity_heights[True]:
            consistent = False
        if len(all_heights) >= 2:
            spans.append((min(all_heights), max(all_heights)))
    color_depth = 0
    for h in range(g.height + 1):
        active = sum(1 for lo, hi in spans if lo <= h < hi)
        color_depth = max(color_depth, active)
    return GraphMetrics(
        width=g.width(),
        height=g.height,
        path_count=tg_path_count(g),
        color_depth=color_depth,
        color_consistent=consistent,
        dense_lowered_gates=g.dense_lowered_gates,
    )


# -- serialization -----------------------------------------------------------------


def tg_to_json(g: TensorGraph) -> dict:
    nodes = [{"id": n, "height": h} for n, h in sorted(g.nodes.items())]
    vedges = []
    for src in sorted(g.vout):
        dst, product, a0, a1 = g.vout[src]
        vedges.append(
            {
                "from": src,
                "to": dst,
                "colors": [[cid, int(anti)] for cid, anti in sorted(product.factors)],
                "amp0": a0.to_json(),
                "amp1": a1.to_json(),
            }
        )
    hedges = [
        {"from": src, "to": dst}
        for src in sorted(g.hout)
        for dst in g.hout[src]
    ]
    return {
        "nodes": nodes,
        "vedges": vedges,
        "hedges": hedges,
        "source": g.source,
        "terminal": g.terminal,
    }


def tg_from_json(data: dict, ctx) -> TensorGraph:
    heights = [n["height"] for n in data["nodes"]]
    g = TensorGraph(ctx, max(heights) if heights else 0)
    for n in data["nodes"]:
        g.add_node(n["height"], n["id"])
    for e in data["vedges"]:
        product = ColorProduct(
            frozenset((int(cid), bool(anti)) for cid, anti in e["colors"])
        )
        a0 = _scalar_from_json(e["amp0"], ctx)
        a1 = _scalar_from_json(e["amp1"], ctx)
        g.add_vedge(e["from"], e["to"], product, a0, a1)
        for cid, _anti in product.factors:
            g._next_color = max(g._next_color, cid + 1)
    for e in data["hedges"]:
        g.add_hedge(e["from"], e["to"])
    g.source = data["source"]
    g.terminal = data["terminal"]
    return g


def _scalar_from_json(data: dict, ctx) -> ExactScalar:
    return ExactScalar(ctx, [f_from_json(c, ctx.arity) for c in data["coords"]])
