"""Layered circuit IR for the QACC gate set.

Lines are indexed 0..width-1 and gates carry explicit line lists, so a
layer is a genuine Kronecker product with no unspoken permutations; wire
crossings only ever happen through controlled-not layers.  Block gates
(q-ary modular add, q-ary fan-out, the q-ary Fourier gate, and the
block-add transform) address ceil(log2 q)-bit registers; register values
>= q ("non-qudigit" states) and control registers >= q are left fixed,
which keeps every block gate unitary as a direct sum.

Basis states are ints whose binary expansion, read most significant bit
first, lists line 0 first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

from .algebra import AlgebraContext, ExactScalar


class ValidationError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    layer: int | None
    message: str

    def __str__(self):
        where = "circuit" if self.layer is None else f"layer {self.layer}"
        return f"{where}: {self.message}"


def block_width(q: int) -> int:
    return max(1, math.ceil(math.log2(q)))


# -- gates -------------------------------------------------------------------


@dataclass(frozen=True)
class OneQubitGate:
    matrix: tuple  # ((m00, m01), (m10, m11)) of ExactScalar, column = input
    line: int

    def lines(self):
        return (self.line,)


@dataclass(frozen=True)
class ToffoliGate:
    """m-controlled X; zero controls is a plain X, one control a CNot."""

    controls: tuple[int, ...]
    target: int

    def lines(self):
        return self.controls + (self.target,)


@dataclass(frozen=True)
class FanOutGate:
    """XORs the control bit onto every target bit, control unchanged."""

    targets: tuple[int, ...]
    control: int

    def lines(self):
        return self.targets + (self.control,)


@dataclass(frozen=True)
class ModGate:
    """Flips the output bit iff the input bit-sum is congruent to r mod q."""

    q: int
    r: int
    inputs: tuple[int, ...]
    output: int

    def lines(self):
        return self.inputs + (self.output,)


@dataclass(frozen=True)
class AddModGate:
    """Adds the sum of the qudigit blocks into the result block, mod q."""

    q: int
    blocks: tuple[tuple[int, ...], ...]
    result: tuple[int, ...]
    inverse: bool = False

    def lines(self):
        return tuple(l for b in self.blocks for l in b) + self.result


@dataclass(frozen=True)
class FanOutModGate:
    """Adds the control qudigit into every target block, mod q."""

    q: int
    blocks: tuple[tuple[int, ...], ...]
    control: tuple[int, ...]
    inverse: bool = False

    def lines(self):
        return tuple(l for b in self.blocks for l in b) + self.control


@dataclass(frozen=True)
class FourierGate:
    """q-ary Fourier transform on one block; fixes values >= q."""

    q: int
    block: tuple[int, ...]
    inverse: bool = False

    def lines(self):
        return self.block


@dataclass(frozen=True)
class AddBlockGate:
    """Adds the addend block into the result block mod q (both qudigits)."""

    q: int
    addend: tuple[int, ...]
    result: tuple[int, ...]
    inverse: bool = False

    def lines(self):
        return self.addend + self.result


Gate = Union[
    OneQubitGate,
    ToffoliGate,
    FanOutGate,
    ModGate,
    AddModGate,
    FanOutModGate,
    FourierGate,
    AddBlockGate,
]

BLOCK_GATES = (AddModGate, FanOutModGate, FourierGate, AddBlockGate)


# -- layers ------------------------------------------------------------------


@dataclass(frozen=True)
class TensorLayer:
    gates: tuple[Gate, ...]


def tensor_layer(*gates: Gate) -> TensorLayer:
    """Tensor layer in canonical order (gates sorted by lowest line)."""
    return TensorLayer(tuple(sorted(gates, key=lambda g: min(g.lines()))))


@dataclass(frozen=True)
class CNotLayer:
    """Simultaneous controlled-nots between disjoint (control, target) pairs."""

    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class StagedCNotLayer:
    """Log-depth controlled-not layer: ordered stages of span-disjoint pairs."""

    stages: tuple[tuple[tuple[int, int], ...], ...]


Layer = Union[TensorLayer, CNotLayer, StagedCNotLayer]


@dataclass(frozen=True)
class Circuit:
    n_inputs: int
    n_aux: int
    layers: tuple[Layer, ...]
    context: AlgebraContext

    @property
    def width(self) -> int:
        return self.n_inputs + self.n_aux


def circuit(n_inputs: int, n_aux: int, layers: Iterable[Layer], context) -> Circuit:
    return Circuit(n_inputs, n_aux, tuple(layers), context)


# -- validation --------------------------------------------------------------


def validate(c: Circuit) -> list[Diagnostic]:
    """Structural diagnostics; empty list means the circuit is well formed."""
    out: list[Diagnostic] = []
    width = c.width
    if c.n_inputs < 0 or c.n_aux < 0:
        out.append(Diagnostic(None, "negative line counts"))
    for idx, layer in enumerate(c.layers):
        if isinstance(layer, TensorLayer):
            seen: dict[int, int] = {}
            for g in layer.gates:
                out.extend(_gate_diagnostics(g, idx, width, c.context))
                for l in g.lines():
                    if l in seen:
                        out.append(Diagnostic(idx, f"overlap on line {l}"))
                    seen[l] = 1
        elif isinstance(layer, CNotLayer):
            out.extend(_pair_diagnostics(layer.pairs, idx, width))
        elif isinstance(layer, StagedCNotLayer):
            for stage in layer.stages:
                out.extend(_pair_diagnostics(stage, idx, width))
                spans = sorted((min(p), max(p)) for p in stage)
                for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
                    if a2 <= b1:
                        out.append(
                            Diagnostic(idx, f"stage spans [{a1},{b1}] and [{a2},{b2}] overlap")
                        )
        else:
            out.append(Diagnostic(idx, f"unknown layer kind {type(layer).__name__}"))
    return out


def _pair_diagnostics(pairs, idx, width):
    out = []
    seen: set[int] = set()
    for ctrl, tgt in pairs:
        if ctrl == tgt:
            out.append(Diagnostic(idx, f"pair ({ctrl},{tgt}) is degenerate"))
        for l in (ctrl, tgt):
            if not 0 <= l < width:
                out.append(Diagnostic(idx, f"line {l} out of range"))
            if l in seen:
                out.append(Diagnostic(idx, f"non-disjoint pairs at line {l}"))
            seen.add(l)
    return out


def _gate_diagnostics(g: Gate, idx: int, width: int, ctx) -> list[Diagnostic]:
    out = []
    lines = g.lines()
    for l in lines:
        if not 0 <= l < width:
            out.append(Diagnostic(idx, f"line {l} out of range"))
    if len(set(lines)) != len(lines):
        out.append(Diagnostic(idx, f"{type(g).__name__} reuses a line"))
    if isinstance(g, (ModGate, AddModGate, FanOutModGate, FourierGate, AddBlockGate)):
        if g.q < 2:
            out.append(Diagnostic(idx, f"q={g.q} must be at least 2"))
            return out
    if isinstance(g, ModGate):
        if not 0 <= g.r < g.q:
            out.append(Diagnostic(idx, f"residue r={g.r} out of range for q={g.q}"))
        if not g.inputs:
            out.append(Diagnostic(idx, "MOD gate needs at least one input"))
    if isinstance(g, AddModGate):
        out.extend(_block_diagnostics(g.blocks + (g.result,), g.q, idx))
    if isinstance(g, FanOutModGate):
        out.extend(_block_diagnostics(g.blocks + (g.control,), g.q, idx))
    if isinstance(g, FourierGate):
        out.extend(_block_diagnostics((g.block,), g.q, idx))
    if isinstance(g, AddBlockGate):
        out.extend(_block_diagnostics((g.addend, g.result), g.q, idx))
    if isinstance(g, OneQubitGate):
        out.extend(_unitarity_diagnostics(g, idx, ctx))
    return out


def _block_diagnostics(blocks, q, idx):
    w = block_width(q)
    return [
        Diagnostic(idx, f"block {b} must have exactly {w} lines for q={q}")
        for b in blocks
        if len(b) != w
    ]


def _unitarity_diagnostics(g: OneQubitGate, idx: int, ctx) -> list[Diagnostic]:
    m = g.matrix
    if len(m) != 2 or any(len(row) != 2 for row in m):
        return [Diagnostic(idx, "one-qubit matrix must be 2x2")]
    if ctx.conjugation is not None:
        for i in range(2):
            for j in range(2):
                entry = sum(
                    (m[i][k] * m[j][k].conjugate() for k in range(2)),
                    start=ctx.zero(),
                )
                want = ctx.one() if i == j else ctx.zero()
                if not (entry - want).is_zero():
                    return [Diagnostic(idx, "one-qubit matrix is not unitary")]
        return []
    vals = [[m[i][j].numeric() for j in range(2)] for i in range(2)]
    for i in range(2):
        for j in range(2):
            entry = sum(vals[i][k] * vals[j][k].conjugate() for k in range(2))
            if abs(entry - (1 if i == j else 0)) > 1e-9:
                return [Diagnostic(idx, "one-qubit matrix is not unitary (numeric)")]
    return []


def check_valid(c: Circuit) -> Circuit:
    diags = validate(c)
    if diags:
        raise ValidationError(diags)
    return c


# -- basis-state helpers -----------------------------------------------------


def bit_of(key: int, line: int, width: int) -> int:
    return (key >> (width - 1 - line)) & 1


def with_bit(key: int, line: int, width: int, value: int) -> int:
    mask = 1 << (width - 1 - line)
    return (key | mask) if value else (key & ~mask)


def flip_bit(key: int, line: int, width: int) -> int:
    return key ^ (1 << (width - 1 - line))


def read_block(key: int, block: tuple[int, ...], width: int) -> int:
    v = 0
    for l in block:
        v = (v << 1) | bit_of(key, l, width)
    return v


def write_block(key: int, block: tuple[int, ...], width: int, value: int) -> int:
    for pos, l in enumerate(reversed(block)):
        key = with_bit(key, l, width, (value >> pos) & 1)
    return key


def key_to_bits(key: int, width: int) -> str:
    return format(key, f"0{width}b") if width else ""


def bits_to_key(bits: str) -> int:
    return int(bits, 2) if bits else 0


# -- gate action -------------------------------------------------------------


def permutation_action(g: Gate, width: int) -> Callable[[int], int] | None:
    """Basis-permutation map for the permutation gates, None for the rest."""
    if isinstance(g, ToffoliGate):
        def act(key, g=g, width=width):
            if all(bit_of(key, c, width) for c in g.controls):
                return flip_bit(key, g.target, width)
            return key
        return act
    if isinstance(g, FanOutGate):
        def act(key, g=g, width=width):
            if bit_of(key, g.control, width):
                for t in g.targets:
                    key = flip_bit(key, t, width)
            return key
        return act
    if isinstance(g, ModGate):
        def act(key, g=g, width=width):
            total = sum(bit_of(key, l, width) for l in g.inputs)
            if total % g.q == g.r:
                return flip_bit(key, g.output, width)
            return key
        return act
    if isinstance(g, AddModGate):
        def act(key, g=g, width=width):
            b = read_block(key, g.result, width)
            if b >= g.q:
                return key
            total = 0
            for blk in g.blocks:
                v = read_block(key, blk, width)
                if v < g.q:
                    total += v
            delta = -total if g.inverse else total
            return write_block(key, g.result, width, (b + delta) % g.q)
        return act
    if isinstance(g, FanOutModGate):
        def act(key, g=g, width=width):
            c = read_block(key, g.control, width)
            if c >= g.q:
                return key
            delta = -c if g.inverse else c
            for blk in g.blocks:
                v = read_block(key, blk, width)
                if v < g.q:
                    key = write_block(key, blk, width, (v + delta) % g.q)
            return key
        return act
    if isinstance(g, AddBlockGate):
        def act(key, g=g, width=width):
            s = read_block(key, g.addend, width)
            y = read_block(key, g.result, width)
            if s >= g.q or y >= g.q:
                return key
            delta = -s if g.inverse else s
            return write_block(key, g.result, width, (y + delta) % g.q)
        return act
    return None


def fourier_columns(g: FourierGate, ctx) -> list[list[tuple[int, ExactScalar]]]:
    """Column v of the block matrix as (output value, scalar) pairs."""
    cache_key = ("fourier", g.q, g.inverse)
    cols = ctx._gate_cache.get(cache_key)
    if cols is not None:
        return cols
    zeta, invsq = ctx.fourier_scalars(g.q)
    size = 1 << block_width(g.q)
    cols = []
    for v in range(size):
        if v >= g.q:
            cols.append([(v, ctx.one())])
            continue
        col = []
        for y in range(g.q):
            e = (v * y) % g.q
            if g.inverse:
                e = (-e) % g.q
            col.append((y, invsq * zeta[e]))
        cols.append(col)
    ctx._gate_cache[cache_key] = cols
    return cols


def apply_gate_to_basis(g: Gate, key: int, width: int, ctx):
    """List of (basis key, scalar or None) the gate sends |key> to.

    A None scalar marks an amplitude carried over unchanged, which keeps
    permutation gates free of scalar arithmetic.
    """
    perm = permutation_action(g, width)
    if perm is not None:
        return [(perm(key), None)]
    if isinstance(g, OneQubitGate):
        b = bit_of(key, g.line, width)
        out = []
        for y in (0, 1):
            entry = g.matrix[y][b]
            if not entry.is_zero():
                out.append((with_bit(key, g.line, width, y), entry))
        return out
    if isinstance(g, FourierGate):
        v = read_block(key, g.block, width)
        cols = fourier_columns(g, ctx)
        out = []
        for y, scalar in cols[v]:
            out.append((write_block(key, g.block, width, y), scalar))
        return out
    raise TypeError(f"unknown gate {type(g).__name__}")


GATE_MATRIX_CAP = 12


def gate_matrix(g: Gate, width: int, ctx) -> list[list[ExactScalar]]:
    """Dense 2^width matrix of the gate embedded in `width` lines."""
    if width > GATE_MATRIX_CAP:
        raise ValueError(f"width {width} exceeds dense-matrix cap {GATE_MATRIX_CAP}")
    size = 1 << width
    zero = ctx.zero()
    one = ctx.one()
    cols = [[zero] * size for _ in range(size)]
    for x in range(size):
        for key, scalar in apply_gate_to_basis(g, x, width, ctx):
            cols[key][x] = one if scalar is None else scalar
    return cols


# -- inversion ---------------------------------------------------------------


def inverse_gate(g: Gate, ctx) -> Gate:
    if isinstance(g, OneQubitGate):
        m = g.matrix
        conj = [[m[j][i].conjugate() for j in range(2)] for i in range(2)]
        return OneQubitGate((tuple(conj[0]), tuple(conj[1])), g.line)
    if isinstance(g, (ToffoliGate, FanOutGate, ModGate)):
        return g
    if isinstance(g, (AddModGate, FanOutModGate, FourierGate, AddBlockGate)):
        return type(g)(**{**_fields(g), "inverse": not g.inverse})
    raise TypeError(f"unknown gate {type(g).__name__}")


def _fields(g):
    return {f: getattr(g, f) for f in g.__dataclass_fields__}


def inverse_layer(layer: Layer, ctx) -> Layer:
    if isinstance(layer, TensorLayer):
        return TensorLayer(tuple(inverse_gate(g, ctx) for g in layer.gates))
    if isinstance(layer, CNotLayer):
        return layer
    if isinstance(layer, StagedCNotLayer):
        return StagedCNotLayer(tuple(reversed(layer.stages)))
    raise TypeError(f"unknown layer {type(layer).__name__}")


def inverse_circuit(c: Circuit) -> Circuit:
    return Circuit(
        c.n_inputs,
        c.n_aux,
        tuple(inverse_layer(layer, c.context) for layer in reversed(c.layers)),
        c.context,
    )


# -- reporting helpers -------------------------------------------------------


def is_multiline(g: Gate) -> bool:
    return not isinstance(g, OneQubitGate)


def circuit_stats(c: Circuit) -> dict:
    """Reported metadata: gate counts and distinct one-qubit gate types."""
    multi = 0
    onequbit_kinds = set()
    gate_count = 0
    for layer in c.layers:
        if isinstance(layer, TensorLayer):
            for g in layer.gates:
                gate_count += 1
                if is_multiline(g):
                    multi += 1
                else:
                    onequbit_kinds.add(
                        tuple(entry.key() for row in g.matrix for entry in row)
                    )
        elif isinstance(layer, CNotLayer):
            multi += len(layer.pairs)
            gate_count += len(layer.pairs)
        elif isinstance(layer, StagedCNotLayer):
            n = sum(len(s) for s in layer.stages)
            multi += n
            gate_count += n
    return {
        "layers": len(c.layers),
        "gates": gate_count,
        "multi_line_gates": multi,
        "distinct_one_qubit_gates": len(onequbit_kinds),
        "lines": c.width,
    }


# -- convenience constructors --------------------------------------------------


def x_gate(line: int) -> ToffoliGate:
    return ToffoliGate((), line)


def cnot_gate(control: int, target: int) -> ToffoliGate:
    return ToffoliGate((control,), target)


def hadamard_gate(line: int) -> FourierGate:
    """The Hadamard is the binary Fourier gate on a single line."""
    return FourierGate(2, (line,))


def one_qubit(ctx, entries, line: int) -> OneQubitGate:
    """2x2 gate from ints/Fractions/ExactScalars."""
    rows = []
    for row in entries:
        cells = []
        for e in row:
            if isinstance(e, ExactScalar):
                cells.append(e)
            elif isinstance(e, Fraction):
                cells.append(ctx.scalar_from_rational(e))
            else:
                cells.append(ctx.from_int(e))
        rows.append(tuple(cells))
    return OneQubitGate(tuple(rows), line)
