"""Iterated sums and products of integer polynomials, with the product
recoverable by multivariate Lagrange interpolation on the principal
lattice of a simplex.

The interpolation route evaluates every factor at each lattice point,
multiplies the resulting integers pointwise, and rebuilds the product as
sum_j p_j * k_j, where the p_j are the lattice's Lagrange basis
polynomials (Kronecker delta on the nodes).  It must agree exactly with
direct convolution whenever the true product degree fits the lattice
order; a violated degree bound is rejected rather than silently returning
a wrong polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import polys
from .scalars import ExactScalar, FScalar


class DegreeBoundError(ValueError):
    """The product's true degree exceeds the lattice's interpolation order."""


@dataclass(frozen=True)
class LatticeSpec:
    """Principal lattice of the m'-simplex at order p'."""

    arity: int
    degree_bound: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("lattice arity must be at least 1")
        if self.degree_bound < 0:
            raise ValueError("degree bound must be nonnegative")

    @property
    def point_count(self) -> int:
        return math.comb(self.degree_bound + self.arity, self.arity)


def principal_lattice(spec: LatticeSpec) -> list[tuple[int, ...]]:
    """All nonnegative integer points with coordinate sum <= p', lex order."""
    points: list[tuple[int, ...]] = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            points.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], spec.degree_bound, spec.arity)
    points.sort()
    assert len(points) == spec.point_count
    return points


def _linear(arity: int, const, var_coeffs) -> dict:
    """Fraction-coefficient polynomial const + sum coeff_i * y_i."""
    out = {}
    if const != 0:
        out[(0,) * arity] = Fraction(const)
    for i, c in enumerate(var_coeffs):
        if c != 0:
            exps = [0] * arity
            exps[i] = 1
            out[tuple(exps)] = Fraction(c)
    return out


_BASIS_CACHE: dict[LatticeSpec, list] = {}


def lagrange_basis(spec: LatticeSpec) -> list[dict]:
    """One polynomial per lattice point, delta-valued on the lattice.

    For node (i_1..i_m) with slack i_0 = p' - sum(i_s), the basis polynomial
    is the product over each coordinate s (the slack counting as coordinate
    0 with linear form p' - sum_t y_t) of (ell_s - t) / (i_s - t) for
    t = 0..i_s-1.  Multiplying the linear factors out keeps every p_j of
    total degree <= p'.
    """
    cached = _BASIS_CACHE.get(spec)
    if cached is not None:
        return cached
    m, p = spec.arity, spec.degree_bound
    basis = []
    for point in principal_lattice(spec):
        slack = p - sum(point)
        poly = polys.const(m, Fraction(1))
        for s, i_s in enumerate(point):
            for t in range(i_s):
                coeffs = [0] * m
                coeffs[s] = Fraction(1, i_s - t)
                factor = _linear(m, Fraction(-t, i_s - t), coeffs)
                poly = polys.mul(poly, factor)
        for t in range(slack):
            denom = slack - t
            factor = _linear(m, Fraction(p - t, denom), [Fraction(-1, denom)] * m)
            poly = polys.mul(poly, factor)
        basis.append(poly)
    _BASIS_CACHE[spec] = basis
    return basis


def ipoly_iterated_sum(items, arity: int | None = None) -> polys.Poly:
    """Exact coefficient-wise sum of integer polynomials."""
    items = list(items)
    polys.check_arity(items, arity)
    total: polys.Poly = {}
    for p in items:
        total = polys.add(total, p)
    return total


def ipoly_direct_product(items, arity: int | None = None) -> polys.Poly:
    """Exact product by sequential convolution (the cross-check reference)."""
    items = list(items)
    m = polys.check_arity(items, arity)
    total = polys.const(m if m is not None else (arity or 0), 1)
    for p in items:
        total = polys.mul(total, p)
    return total


def ipoly_interpolated_product(items, spec: LatticeSpec) -> polys.Poly:
    """Product reconstructed from lattice evaluations; exact or rejected."""
    items = list(items)
    polys.check_arity(items, spec.arity)
    degrees = [polys.total_degree(p) for p in items]
    if any(d is None for d in degrees):
        return polys.zero()
    true_degree = sum(degrees)
    if true_degree > spec.degree_bound:
        raise DegreeBoundError(
            f"product degree {true_degree} exceeds lattice order {spec.degree_bound}"
        )
    points = principal_lattice(spec)
    values = []
    for point in points:
        v = 1
        for p in items:
            v *= polys.evaluate(p, point)
        values.append(v)
    result: dict = {}
    for p_j, k_j in zip(lagrange_basis(spec), values):
        if k_j:
            result = polys.add(result, polys.scale(p_j, k_j))
    return polys.make_integral(result)


# ---------------------------------------------------------------------------
# interpolated products in G (optional, non-canonical route)


def g_interpolated_product(xs: list[ExactScalar], ctx=None) -> ExactScalar:
    """Iterated product in G via lattice evaluation of d-variate linear forms.

    Each factor sum_j lambda_j beta_j is read as the linear polynomial
    sum_j lambda_j y_j; the product polynomial (degree = number of factors)
    is interpolated from pointwise products on the principal lattice, then
    the basis elements are substituted back for the y_j.  Exact for
    contexts without indeterminates; the mult-table fold remains the
    source of truth.
    """
    if xs:
        ctx = xs[0].ctx
    if ctx is None:
        raise ValueError("empty product needs an explicit context")
    if ctx.arity != 0:
        raise ValueError("interpolated products need a context with no indeterminates")
    if not xs:
        return ctx.one()
    d = ctx.dim
    n_factors = len(xs)

    def coords_frac(x: ExactScalar) -> list[Fraction]:
        out = []
        for c in x.coords:
            if c.is_zero():
                out.append(Fraction(0))
            else:
                out.append(Fraction(c.num[()], ctx.u_int**c.r))
        return out

    factor_coords = [coords_frac(x) for x in xs]
    spec = LatticeSpec(arity=d, degree_bound=n_factors)
    points = principal_lattice(spec)
    k_values = []
    for point in points:
        v = Fraction(1)
        for coords in factor_coords:
            v *= sum(c * y for c, y in zip(coords, point))
        k_values.append(v)

    # substitute y_j := beta_j into each Lagrange basis polynomial, working
    # in Fraction coordinate vectors through the mult table
    basis_vecs = []
    for j in range(d):
        vec = [Fraction(0)] * d
        vec[j] = Fraction(1)
        basis_vecs.append(vec)

    def vec_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * d
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for k, bk in enumerate(b):
                if bk == 0:
                    continue
                w = ai * bk
                for j, entry in ctx.mult_rows[i][k]:
                    out[j] += w * Fraction(entry.num[()], ctx.u_int**entry.r)
        return out

    total = [Fraction(0)] * d
    for p_j, k_j in zip(lagrange_basis(spec), k_values):
        if k_j == 0:
            continue
        for exps, coeff in p_j.items():
            term = None
            for j, e in enumerate(exps):
                for _ in range(e):
                    term = basis_vecs[j] if term is None else vec_mul(term, basis_vecs[j])
            if term is None:
                term = basis_vecs[0]
            w = coeff * k_j
            for j in range(d):
                total[j] += w * term[j]

    coords = [_frac_to_fscalar(v, ctx) for v in total]
    return ExactScalar(ctx, coords)


def _frac_to_fscalar(value: Fraction, ctx) -> FScalar:
    if value == 0:
        return ctx.f_zero
    return ctx.f_from_rational(value)
