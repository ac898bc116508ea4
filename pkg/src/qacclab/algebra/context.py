"""Algebra contexts: the field G = Q(A)(B) an amplitude lives in.

A context fixes the ordered indeterminates A, the basis B (with basis
element 0 being 1), the d x d basis multiplication table, the common
denominator u, and floating approximations used only for sanity checks.

Shipped contexts:

* ``cyclotomic(q)``: exact arithmetic for the entries of the q-ary Fourier
  gate.  The basis is the power basis 1, z, ..., z^(phi(q)-1) of the q-th
  root of unity z, reduced by the q-th cyclotomic polynomial, with the
  extra element s = 1/sqrt(q) adjoined only when sqrt(q) is not already in
  Q(z).  For square q the root is an integer; for q = 0, 1 mod 4 it is
  recovered from the quadratic Gauss sum and verified by exact squaring.
  The common denominator is u = q.

* ``rational(u)``: plain rational amplitudes a/u^r (d = 1), as required by
  bounded-error acceptance.

User contexts load from JSON; their basis independence is declared, not
decided: it is only sanity-checked numerically.
"""

from __future__ import annotations

import cmath
import json
import math
import re
from fractions import Fraction

from . import polys
from .scalars import (
    ExactScalar,
    FScalar,
    f_from_json,
    f_numeric,
    f_to_json,
)


class ContextError(ValueError):
    pass


class AlgebraContext:
    def __init__(
        self,
        indeterminates,
        basis,
        mult_table,
        denominator,
        numeric,
        conjugation=None,
        constants=None,
        fourier_q=None,
        name=None,
        check=True,
    ):
        self.indeterminates = tuple(indeterminates)
        self.basis = tuple(basis)
        if not self.basis or self.basis[0] != "1":
            raise ContextError("basis element 0 must be the unit, named '1'")
        self.dim = len(self.basis)
        self.arity = len(self.indeterminates)
        self.mult_table = tuple(tuple(tuple(v) for v in row) for row in mult_table)
        self.denominator = dict(denominator)
        if polys.is_zero(self.denominator):
            raise ContextError("denominator u must be nonzero")
        self.numeric = dict(numeric)
        self.name = name

        self.f_zero = FScalar({}, 0)
        self.f_one = FScalar(polys.const(self.arity, 1), 0)
        self._u_pows = [polys.const(self.arity, 1), dict(self.denominator)]
        self.mult_rows = [
            [
                [(j, entry) for j, entry in enumerate(vec) if not entry.is_zero()]
                for vec in row
            ]
            for row in self.mult_table
        ]
        self.conjugation = None
        if conjugation is not None:
            self.conjugation = tuple(
                [(j, entry) for j, entry in enumerate(vec) if not entry.is_zero()]
                for vec in conjugation
            )
        self._conj_dense = tuple(tuple(vec) for vec in conjugation) if conjugation else None

        self.indeterminate_values = [
            complex(*_pair(self.numeric[a])) if a in self.numeric else None
            for a in self.indeterminates
        ]
        if any(v is None for v in self.indeterminate_values):
            raise ContextError("numeric assignment missing for an indeterminate")
        self.basis_values = []
        for b in self.basis:
            if b == "1":
                self.basis_values.append(1 + 0j)
            elif b in self.numeric:
                self.basis_values.append(complex(*_pair(self.numeric[b])))
            else:
                raise ContextError(f"numeric assignment missing for basis element {b!r}")
        self.u_numeric = complex(polys.evaluate(self.denominator, self.indeterminate_values))

        self.is_rational = self.dim == 1 and self.arity == 0
        self.u_int = None
        if self.arity == 0:
            self.u_int = self.denominator.get((), 0)

        self.constants = dict(constants or {})
        self.fourier_q = fourier_q
        self._zero = ExactScalar(self, [self.f_zero] * self.dim)
        one = [self.f_zero] * self.dim
        one[0] = self.f_one
        self._one = ExactScalar(self, one)
        self._mul_cache = {}
        self._gate_cache = {}

        if check:
            self.validate()

    # -- basic element constructors ------------------------------------

    def zero(self) -> ExactScalar:
        return self._zero

    def one(self) -> ExactScalar:
        return self._one

    def from_int(self, value: int) -> ExactScalar:
        coords = [self.f_zero] * self.dim
        if value:
            coords[0] = FScalar(polys.const(self.arity, value), 0)
        return ExactScalar(self, coords)

    def basis_element(self, j: int) -> ExactScalar:
        coords = [self.f_zero] * self.dim
        coords[j] = self.f_one
        return ExactScalar(self, coords)

    def scalar_from_rational(self, value) -> ExactScalar:
        """a/b as an exact scalar; b must divide some power of u."""
        value = Fraction(value)
        coords = [self.f_zero] * self.dim
        coords[0] = self.f_from_rational(value)
        return ExactScalar(self, coords)

    def f_from_rational(self, value: Fraction) -> FScalar:
        if self.u_int is None:
            raise ContextError("rational coefficients need a constant denominator u")
        num, den = value.numerator, value.denominator
        if num == 0:
            return self.f_zero
        r, cur = 0, 1
        while cur % den:
            r += 1
            cur *= self.u_int
            if r > 64:
                raise ContextError(
                    f"denominator {den} does not divide a power of u={self.u_int}"
                )
        return FScalar(polys.const(self.arity, num * (cur // den)), r)

    def u_power(self, k: int) -> polys.Poly:
        while len(self._u_pows) <= k:
            self._u_pows.append(polys.mul(self._u_pows[-1], self.denominator))
        return self._u_pows[k]

    def symbol(self, name: str) -> ExactScalar:
        if name in self.constants:
            return self.constants[name]
        raise ContextError(f"context has no symbol {name!r}")

    def fourier_scalars(self, q: int):
        """(powers of zeta_q, 1/sqrt(q)) as exact scalars, if this context has them."""
        if self.fourier_q != q:
            raise ContextError(
                f"context {self.name or '<anonymous>'} has no exact constants for q={q}"
            )
        return self._zeta_pows, self.constants["s"]

    # -- verification ----------------------------------------------------

    def validate(self, tol: float = 1e-9):
        d = self.dim
        for b in range(d):
            for j in range(d):
                entry = self.mult_table[0][b][j]
                expected = self.f_one if j == b else self.f_zero
                if not _f_struct_eq(entry, expected, self):
                    raise ContextError("identity row of mult_table is not the unit vector")
        for a in range(d):
            for b in range(a + 1, d):
                for j in range(d):
                    if not _f_struct_eq(self.mult_table[a][b][j], self.mult_table[b][a][j], self):
                        raise ContextError(f"mult_table not symmetric at ({a},{b})")
        for a in range(d):
            for b in range(d):
                direct = self.basis_values[a] * self.basis_values[b]
                via_table = sum(
                    f_numeric(entry, self) * self.basis_values[j]
                    for j, entry in enumerate(self.mult_table[a][b])
                    if not entry.is_zero()
                )
                if abs(direct - via_table) > tol:
                    raise ContextError(
                        f"numeric assignment violates mult_table at ({a},{b}): "
                        f"{direct} vs {via_table}"
                    )

    # -- equality / serialization ----------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlgebraContext):
            return NotImplemented
        if (
            self.indeterminates != other.indeterminates
            or self.basis != other.basis
            or self.denominator != other.denominator
        ):
            return False
        for ra, rb in zip(self.mult_table, other.mult_table):
            for va, vb in zip(ra, rb):
                for ea, eb in zip(va, vb):
                    if ea.r != eb.r or ea.num != eb.num:
                        return False
        return True

    def __hash__(self):
        return hash((self.indeterminates, self.basis, tuple(sorted(self.denominator.items()))))

    def __repr__(self):
        return f"AlgebraContext({self.name or 'anonymous'}, d={self.dim}, m={self.arity})"

    def to_json(self) -> dict:
        data = {
            "indeterminates": list(self.indeterminates),
            "basis": list(self.basis),
            "mult_table": [
                [[f_to_json(entry) for entry in vec] for vec in row]
                for row in self.mult_table
            ],
            "u": polys.to_terms(self.denominator),
            "numeric": {k: _pair(v) for k, v in self.numeric.items()},
        }
        if self._conj_dense is not None:
            data["conjugation"] = [
                [f_to_json(entry) for entry in vec] for vec in self._conj_dense
            ]
        if self.fourier_q is not None:
            data["fourier_q"] = self.fourier_q
        if self.name is not None:
            data["name"] = self.name
        return data

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraContext":
        arity = len(data["indeterminates"])
        mult_table = [
            [[f_from_json(e, arity) for e in vec] for vec in row]
            for row in data["mult_table"]
        ]
        conj = None
        if "conjugation" in data:
            conj = [[f_from_json(e, arity) for e in vec] for vec in data["conjugation"]]
        ctx = cls(
            data["indeterminates"],
            data["basis"],
            mult_table,
            polys.from_terms(data["u"], arity),
            {k: complex(*_pair(v)) for k, v in data.get("numeric", {}).items()},
            conjugation=conj,
            fourier_q=data.get("fourier_q"),
            name=data.get("name"),
        )
        if ctx.fourier_q is not None:
            _attach_fourier_constants(ctx, ctx.fourier_q)
        return ctx


def _pair(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return [float(v[0]), float(v[1])]


def _f_struct_eq(a: FScalar, b: FScalar, ctx) -> bool:
    if a.r == b.r:
        return a.num == b.num
    r0 = max(a.r, b.r)
    na = a.num if a.r == r0 else polys.mul(a.num, ctx.u_power(r0 - a.r))
    nb = b.num if b.r == r0 else polys.mul(b.num, ctx.u_power(r0 - b.r))
    return na == nb


# ---------------------------------------------------------------------------
# cyclotomic machinery (dense one-variable integer polynomials as lists)


def cyclotomic_polynomial(q: int) -> list[int]:
    """Coefficients (ascending) of the q-th cyclotomic polynomial."""
    if q < 1:
        raise ValueError("q must be positive")
    memo = {}

    def build(n: int) -> list[int]:
        if n in memo:
            return memo[n]
        # X^n - 1 divided by the product of all proper-divisor cyclotomics
        num = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                num = _poly_div_exact(num, build(d))
        memo[n] = num
        return num

    return build(q)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("non-exact polynomial division")
        c //= den[-1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


def _poly_mod(coeffs: list[int], phi: list[int]) -> list[int]:
    """Remainder of a dense integer polynomial modulo monic phi."""
    rem = list(coeffs)
    deg = len(phi) - 1
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            for j in range(deg + 1):
                rem[i - deg + j] -= c * phi[j]
    rem = rem[:deg]
    rem += [0] * (deg - len(rem))
    return rem


def _poly_mul_mod(a: list[int], b: list[int], phi: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _poly_mod(out, phi)


def _sqrt_in_cyclotomic(q: int, phi: list[int]) -> list[int] | None:
    """Power-basis coefficients of sqrt(q) in Q(zeta_q), or None if absent.

    Square q: the integer root.  q = 1 mod 4: the quadratic Gauss sum
    G = sum zeta^(a^2) equals sqrt(q).  q = 0 mod 4: G = (1+i) sqrt(q) and
    i = zeta^(q/4), so sqrt(q) = G (1-i)/2.  q = 2, 3 mod 4 (non-square):
    sqrt(q) is not in the field.  Every candidate is verified by squaring.
    """
    deg = len(phi) - 1
    isq = math.isqrt(q)
    if isq * isq == q:
        return [isq] + [0] * (deg - 1)
    gauss = [0] * q
    for a in range(q):
        gauss[a * a % q] += 1
    gauss = _poly_mod(gauss, phi)
    if q % 4 == 1:
        cand = gauss
    elif q % 4 == 0:
        i_pow = [0] * (q // 4) + [1]
        i_vec = _poly_mod(i_pow, phi)
        one_minus_i = [1 - c if k == 0 else -c for k, c in enumerate(i_vec)]
        prod = _poly_mul_mod(gauss, one_minus_i, phi)
        if any(c % 2 for c in prod):
            raise AssertionError("Gauss-sum construction produced odd coefficients")
        cand = [c // 2 for c in prod]
    else:
        return None
    square = _poly_mul_mod(cand, cand, phi)
    expected = [q] + [0] * (deg - 1)
    if square != expected:
        raise AssertionError(f"Gauss-sum candidate for sqrt({q}) failed verification")
    return cand


def cyclotomic_context(q: int) -> AlgebraContext:
    """Exact context for circuits over the q-ary Fourier gate set."""
    if q < 2:
        raise ContextError("q must be at least 2")
    phi = cyclotomic_polynomial(q)
    deg = len(phi) - 1
    # zeta^e in the power basis, for e = 0..q-1
    red = []
    for e in range(q):
        red.append(_poly_mod([0] * e + [1], phi))

    root = _sqrt_in_cyclotomic(q, phi)
    extended = root is None
    d = 2 * deg if extended else deg

    def names():
        out = []
        for eps in range(2 if extended else 1):
            for j in range(deg):
                head = "1" if j == 0 else ("z" if j == 1 else f"z^{j}")
                if eps == 0:
                    out.append(head)
                else:
                    out.append("s" if j == 0 else f"{head}*s")
        return out

    basis = names()
    u = polys.const(0, q)

    def f_int(c):
        return FScalar(polys.const(0, c), 0) if c else FScalar({}, 0)

    def f_over_q(c):
        if c == 0:
            return FScalar({}, 0)
        return FScalar(polys.const(0, c), 1)

    def vec_from(zvec, eps, over_q=False):
        coords = [FScalar({}, 0)] * d
        offset = eps * deg
        for j, c in enumerate(zvec):
            if c:
                coords[offset + j] = f_over_q(c) if over_q else f_int(c)
        return coords

    table = []
    for a in range(d):
        row = []
        ja, ea = a % deg, a // deg
        for b in range(d):
            jb, eb = b % deg, b // deg
            # z^ja * z^jb folds through z^q = 1, then reduces modulo phi_q
            zvec = red[(ja + jb) % q]
            e_sum = ea + eb
            if e_sum == 0:
                row.append(vec_from(zvec, 0))
            elif e_sum == 1:
                row.append(vec_from(zvec, 1))
            else:  # s*s = 1/q
                row.append(vec_from(zvec, 0, over_q=True))
        table.append(row)

    zeta_num = cmath.exp(2j * cmath.pi / q)
    invsq_num = 1 / math.sqrt(q)
    numeric = {}
    for idx, name in enumerate(basis):
        if name == "1":
            continue
        j, eps = idx % deg, idx // deg
        numeric[name] = zeta_num**j * (invsq_num if eps else 1)

    conjugation = []
    for idx in range(d):
        j, eps = idx % deg, idx // deg
        conjugation.append(vec_from(red[(q - j) % q], eps))

    ctx = AlgebraContext(
        [],
        basis,
        table,
        u,
        numeric,
        conjugation=conjugation,
        fourier_q=q,
        name=f"cyclotomic{q}",
        check=True,
    )
    _attach_fourier_constants(ctx, q, red=red, root=root, deg=deg, extended=extended)
    return ctx


def _attach_fourier_constants(ctx, q, red=None, root=None, deg=None, extended=None):
    """Bind z (= w) and s constants plus the zeta power list used by gates."""
    if red is None:
        phi = cyclotomic_polynomial(q)
        deg = len(phi) - 1
        red = [_poly_mod([0] * e + [1], phi) for e in range(q)]
        root = _sqrt_in_cyclotomic(q, phi)
        extended = root is None

    def z_scalar(zvec, eps=0, over_q=False):
        coords = [ctx.f_zero] * ctx.dim
        for j, c in enumerate(zvec):
            if c:
                num = polys.const(0, c)
                coords[eps * deg + j] = FScalar(num, 1 if over_q else 0)
        return ExactScalar(ctx, coords)

    zeta_pows = [z_scalar(red[k % q]) for k in range(q)]
    if extended:
        s = ctx.basis_element(deg)
    else:
        s = z_scalar(root, over_q=True)
    ctx._zeta_pows = zeta_pows
    ctx.constants.update({"z": zeta_pows[1 % q], "w": zeta_pows[1 % q], "s": s})


def rational_context(u: int = 10) -> AlgebraContext:
    """Amplitudes a/u^r in Q; the context bounded-error acceptance needs."""
    if u == 0:
        raise ContextError("u must be nonzero")
    table = [[(FScalar(polys.const(0, 1), 0),)]]
    ctx = AlgebraContext(
        [],
        ["1"],
        table,
        polys.const(0, u),
        {},
        conjugation=[[FScalar(polys.const(0, 1), 0)]],
        name=f"rational{u}",
    )
    return ctx


_REGISTRY_CACHE: dict[str, AlgebraContext] = {}


def get_context(name: str) -> AlgebraContext:
    """Resolve a context name: cyclotomic<q> or rational<u> (default u=10)."""
    if name in _REGISTRY_CACHE:
        return _REGISTRY_CACHE[name]
    m = re.fullmatch(r"cyclotomic(\d+)", name)
    if m:
        ctx = cyclotomic_context(int(m.group(1)))
    else:
        m = re.fullmatch(r"rational(\d*)", name)
        if m:
            ctx = rational_context(int(m.group(1)) if m.group(1) else 10)
        else:
            raise ContextError(f"unknown context name {name!r}")
    _REGISTRY_CACHE[name] = ctx
    return ctx


def save_context(ctx: AlgebraContext, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ctx.to_json(), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_context(path) -> AlgebraContext:
    with open(path, encoding="utf-8") as fh:
        return AlgebraContext.from_json(json.load(fh))
