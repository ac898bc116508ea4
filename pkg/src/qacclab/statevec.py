"""Brute-force exact simulator and the E/N/B acceptance predicates.

States are sparse maps from basis keys to exact scalars; amplitudes that
become exactly zero are pruned eagerly.  Permutation gates move keys with
no scalar arithmetic at all; only one-qubit and Fourier gates touch the
algebra.  Exact runs are capped at 20 lines (override with QACC_LINE_CAP
at your own risk: the cost is exponential and the scalars are heavy).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ExactScalar
from .circuit import (
    Circuit,
    CNotLayer,
    Layer,
    StagedCNotLayer,
    TensorLayer,
    ValidationError,
    apply_gate_to_basis,
    bit_of,
    bits_to_key,
    flip_bit,
    key_to_bits,
    permutation_action,
    validate,
)

DEFAULT_LINE_CAP = 20


class SimulationError(RuntimeError):
    pass


class CapExceededError(SimulationError):
    pass


class AcceptanceError(SimulationError):
    pass


def line_cap() -> int:
    value = os.environ.get("QACC_LINE_CAP")
    return int(value) if value else DEFAULT_LINE_CAP


@dataclass(frozen=True)
class StateVector:
    entries: dict  # basis key -> ExactScalar, no exact zeros stored
    width: int
    context: object

    def amplitude_of(self, key) -> ExactScalar:
        if isinstance(key, str):
            key = bits_to_key(key)
        return self.entries.get(key, self.context.zero())

    def support(self) -> list[int]:
        return sorted(self.entries)

    def to_json(self) -> list:
        out = []
        for key in sorted(self.entries):
            amp = self.entries[key]
            approx = amp.numeric()
            out.append(
                {
                    "basis": key_to_bits(key, self.width),
                    "amplitude": amp.to_json(),
                    "approx": [approx.real, approx.imag],
                }
            )
        return out


def basis_state(bits: str, ctx) -> StateVector:
    return StateVector({bits_to_key(bits): ctx.one()}, len(bits), ctx)


def _accumulate(target: dict, key: int, amp: ExactScalar):
    prev = target.get(key)
    if prev is None:
        target[key] = amp
        return
    new = prev + amp
    if new.is_zero():
        del target[key]
    else:
        target[key] = new


def _apply_gate(state: StateVector, gate) -> StateVector:
    width = state.width
    perm = permutation_action(gate, width)
    if perm is not None:
        return StateVector(
            {perm(key): amp for key, amp in state.entries.items()}, width, state.context
        )
    ctx = state.context
    out: dict = {}
    for key, amp in state.entries.items():
        for new_key, scalar in apply_gate_to_basis(gate, key, width, ctx):
            _accumulate(out, new_key, amp if scalar is None else amp * scalar)
    return StateVector(out, width, ctx)


def _apply_pairs(state: StateVector, pairs) -> StateVector:
    width = state.width
    out = {}
    for key, amp in state.entries.items():
        new_key = key
        for ctrl, tgt in pairs:
            if bit_of(key, ctrl, width):
                new_key = flip_bit(new_key, tgt, width)
        out[new_key] = amp
    return StateVector(out, width, state.context)


def apply_layer(state: StateVector, layer: Layer) -> StateVector:
    """Exact action of one layer; gates in a tensor layer commute, so they
    are applied in sequence."""
    if isinstance(layer, TensorLayer):
        for gate in layer.gates:
            for line in gate.lines():
                if not 0 <= line < state.width:
                    raise SimulationError(f"line {line} out of range")
            state = _apply_gate(state, gate)
        return state
    if isinstance(layer, CNotLayer):
        return _apply_pairs(state, layer.pairs)
    if isinstance(layer, StagedCNotLayer):
        for stage in layer.stages:
            state = _apply_pairs(state, stage)
        return state
    raise TypeError(f"unknown layer {type(layer).__name__}")


def run(c: Circuit, input_bits: str, check: bool = True) -> StateVector:
    """U_t ... U_1 |x, 0^aux> with exact amplitudes."""
    if len(input_bits) != c.n_inputs:
        raise SimulationError(
            f"input has {len(input_bits)} bits, circuit expects {c.n_inputs}"
        )
    if c.width > line_cap():
        raise CapExceededError(
            f"{c.width} lines exceed the exact-run cap {line_cap()} "
            "(set QACC_LINE_CAP to override)"
        )
    if check:
        diags = validate(c)
        if diags:
            raise ValidationError(diags)
    state = basis_state(input_bits + "0" * c.n_aux, c.context)
    for layer in c.layers:
        state = apply_layer(state, layer)
    return state


def amplitude(c: Circuit, input_bits: str, target_bits: str, check: bool = True) -> ExactScalar:
    """The single coefficient <target| C |input, 0^aux>."""
    if len(target_bits) != c.width:
        raise SimulationError(
            f"target has {len(target_bits)} bits, circuit has {c.width} lines"
        )
    return run(c, input_bits, check=check).amplitude_of(target_bits)


def norm_squared(state: StateVector) -> ExactScalar:
    total = state.context.zero()
    for amp in state.entries.values():
        total = total + amp * amp.conjugate()
    return total


@dataclass(frozen=True)
class AcceptResult:
    decision: str  # accept | reject | invalid-gap
    mode: str
    amplitude: ExactScalar
    probability: Fraction | None = None

    @property
    def accepted(self) -> bool:
        return self.decision == "accept"


def accept(c: Circuit, input_bits: str, target_bits: str, mode: str) -> AcceptResult:
    """Language-acceptance decision for the observed basis state.

    E: |amp|^2 must be exactly 0 or 1 and acceptance means 1.
    N: accept iff the amplitude is not exactly zero.
    B: exact rational |amp|^2 compared against 3/4 and 1/4; only contexts
       with rational amplitudes support it.
    """
    amp = amplitude(c, input_bits, target_bits)
    ctx = c.context
    if mode == "N":
        return AcceptResult("accept" if not amp.is_zero() else "reject", mode, amp)
    if mode == "E":
        if ctx.conjugation is None:
            raise AcceptanceError("E mode needs a context with conjugation")
        prob = amp * amp.conjugate()
        if prob.is_zero():
            return AcceptResult("reject", mode, amp)
        if (prob - ctx.one()).is_zero():
            return AcceptResult("accept", mode, amp)
        raise AcceptanceError("not an E-operator on this input: |amplitude|^2 is not 0 or 1")
    if mode == "B":
        if not ctx.is_rational:
            raise AcceptanceError("B mode requires a rational-amplitude context")
        prob = (amp * amp.conjugate()).as_fraction()
        if prob > Fraction(3, 4):
            return AcceptResult("accept", mode, amp, prob)
        if prob < Fraction(1, 4):
            return AcceptResult("reject", mode, amp, prob)
        return AcceptResult("invalid-gap", mode, amp, prob)
    raise ValueError(f"unknown acceptance mode {mode!r}")
