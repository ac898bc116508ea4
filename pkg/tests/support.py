"""Shared test helpers: an independent double-precision simulator and a
seeded random-circuit generator.

The numeric simulator is deliberately written from scratch (own bit
conventions, cmath roots of unity) so it can serve as a cross-check
oracle for the exact engine rather than echoing its code paths.
"""

from __future__ import annotations

import cmath
import math
import random

from qacclab import circuit as cir
from qacclab.circuit import (
    AddBlockGate,
    AddModGate,
    CNotLayer,
    FanOutGate,
    FanOutModGate,
    FourierGate,
    ModGate,
    OneQubitGate,
    StagedCNotLayer,
    TensorLayer,
    ToffoliGate,
)


def _bit(key: int, line: int, width: int) -> int:
    return (key >> (width - 1 - line)) & 1


def _blockval(key: int, lines, width: int) -> int:
    value = 0
    for l in lines:
        value = 2 * value + _bit(key, l, width)
    return value


def _setblock(key: int, lines, width: int, value: int) -> int:
    for offset, l in enumerate(reversed(lines)):
        mask = 1 << (width - 1 - l)
        if (value >> offset) & 1:
            key |= mask
        else:
            key &= ~mask
    return key


def _numeric_gate(state: dict, gate, width: int) -> dict:
    out: dict = {}

    def put(key, amp):
        out[key] = out.get(key, 0j) + amp

    for key, amp in state.items():
        if isinstance(gate, OneQubitGate):
            b = _bit(key, gate.line, width)
            for y in (0, 1):
                entry = gate.matrix[y][b].numeric()
                if entry:
                    put(_setblock(key, (gate.line,), width, y), amp * entry)
        elif isinstance(gate, FourierGate):
            v = _blockval(key, gate.block, width)
            if v >= gate.q:
                put(key, amp)
            else:
                sign = -1 if gate.inverse else 1
                root = 1 / math.sqrt(gate.q)
                for y in range(gate.q):
                    phase = cmath.exp(sign * 2j * cmath.pi * v * y / gate.q)
                    put(_setblock(key, gate.block, width, y), amp * root * phase)
        elif isinstance(gate, ToffoliGate):
            if all(_bit(key, c, width) for c in gate.controls):
                key = _setblock(key, (gate.target,), width, 1 - _bit(key, gate.target, width))
            put(key, amp)
        elif isinstance(gate, FanOutGate):
            if _bit(key, gate.control, width):
                for t in gate.targets:
                    key = _setblock(key, (t,), width, 1 - _bit(key, t, width))
            put(key, amp)
        elif isinstance(gate, ModGate):
            total = sum(_bit(key, l, width) for l in gate.inputs)
            if total % gate.q == gate.r:
                key = _setblock(key, (gate.output,), width, 1 - _bit(key, gate.output, width))
            put(key, amp)
        elif isinstance(gate, AddModGate):
            b = _blockval(key, gate.result, width)
            if b < gate.q:
                total = sum(
                    v
                    for blk in gate.blocks
                    if (v := _blockval(key, blk, width)) < gate.q
                )
                if gate.inverse:
                    total = -total
                key = _setblock(key, gate.result, width, (b + total) % gate.q)
            put(key, amp)
        elif isinstance(gate, FanOutModGate):
            c = _blockval(key, gate.control, width)
            if c < gate.q:
                delta = -c if gate.inverse else c
                for blk in gate.blocks:
                    v = _blockval(key, blk, width)
                    if v < gate.q:
                        key = _setblock(key, blk, width, (v + delta) % gate.q)
            put(key, amp)
        elif isinstance(gate, AddBlockGate):
            s = _blockval(key, gate.addend, width)
            y = _blockval(key, gate.result, width)
            if s < gate.q and y < gate.q:
                delta = -s if gate.inverse else s
                key = _setblock(key, gate.result, width, (y + delta) % gate.q)
            put(key, amp)
        else:
            raise TypeError(type(gate).__name__)
    return out


def numeric_simulate(c, input_bits: str) -> dict:
    """Plain complex-double simulation; returns basis key -> amplitude."""
    width = c.width
    state = {int(input_bits + "0" * c.n_aux, 2) if width else 0: 1 + 0j}
    for layer in c.layers:
        if isinstance(layer, TensorLayer):
            for gate in layer.gates:
                state = _numeric_gate(state, gate, width)
        elif isinstance(layer, (CNotLayer, StagedCNotLayer)):
            stages = layer.stages if isinstance(layer, StagedCNotLayer) else (layer.pairs,)
            for pairs in stages:
                new = {}
                for key, amp in state.items():
                    nk = key
                    for ctrl, tgt in pairs:
                        if _bit(key, ctrl, width):
                            nk = _setblock(nk, (tgt,), width, 1 - _bit(nk, tgt, width))
                    new[nk] = new.get(nk, 0j) + amp
                state = new
        else:
            raise TypeError(type(layer).__name__)
    return state


# -- seeded circuit generator ----------------------------------------------------


def random_tensor_layer(rng: random.Random, lines: int, ctx) -> TensorLayer:
    avail = list(range(lines))
    rng.shuffle(avail)
    gates = []
    while avail:
        kind = rng.choice(("h", "x", "z", "tof", "fan", "skip"))
        if kind == "h":
            gates.append(cir.hadamard_gate(avail.pop()))
        elif kind == "x":
            gates.append(cir.x_gate(avail.pop()))
        elif kind == "z":
            minus = ctx.zero() - ctx.one()
            gates.append(
                OneQubitGate(((ctx.one(), ctx.zero()), (ctx.zero(), minus)), avail.pop())
            )
        elif kind == "tof" and len(avail) >= 2:
            k = rng.randint(1, min(2, len(avail) - 1))
            controls = tuple(avail.pop() for _ in range(k))
            gates.append(ToffoliGate(controls, avail.pop()))
        elif kind == "fan" and len(avail) >= 2:
            k = rng.randint(1, min(2, len(avail) - 1))
            targets = tuple(avail.pop() for _ in range(k))
            gates.append(FanOutGate(targets, avail.pop()))
        else:
            avail.pop()
    if not gates:
        gates.append(cir.hadamard_gate(rng.randrange(lines)))
    return cir.tensor_layer(*gates)


def random_cnot_layer(rng: random.Random, lines: int, separated: bool = False) -> CNotLayer:
    """Random disjoint pairs; separated=True keeps all pair endpoints at
    mutual distance >= 2 (the regime where a layer provably at most
    doubles the graph width)."""
    avail = list(range(lines))
    rng.shuffle(avail)
    pairs = []
    used: list[int] = []
    while len(avail) >= 2:
        a = avail.pop()
        b = avail.pop()
        if separated and any(abs(a - u) <= 1 or abs(b - u) <= 1 for u in used):
            continue
        if separated and abs(a - b) <= 1:
            continue
        pairs.append((a, b))
        used.extend((a, b))
        if rng.random() < 0.4:
            break
    if not pairs:
        pairs = [(0, lines - 1)] if lines >= 3 or not separated else [(0, 1)]
    return CNotLayer(tuple(sorted(pairs, key=min)))


def random_circuit(
    rng: random.Random,
    lines: int,
    n_layers: int,
    ctx,
    ensure_cnot_layer: bool = True,
    separated_pairs: bool = False,
):
    layers = []
    cnot_at = rng.randrange(n_layers) if ensure_cnot_layer else -1
    for i in range(n_layers):
        if i == cnot_at or (rng.random() < 0.25 and lines >= 2):
            layers.append(random_cnot_layer(rng, lines, separated=separated_pairs))
        else:
            layers.append(random_tensor_layer(rng, lines, ctx))
    return cir.circuit(lines, 0, layers, ctx)


def random_bits(rng: random.Random, n: int) -> str:
    return "".join(rng.choice("01") for _ in range(n))


def multiline_gate_count(c) -> int:
    count = 0
    for layer in c.layers:
        if isinstance(layer, TensorLayer):
            count += sum(1 for g in layer.gates if cir.is_multiline(g))
        elif isinstance(layer, CNotLayer):
            count += len(layer.pairs)
        elif isinstance(layer, StagedCNotLayer):
            count += sum(len(s) for s in layer.stages)
    return count
