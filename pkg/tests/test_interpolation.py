import random
from fractions import Fraction

import pytest

from qacclab.algebra import (
    DegreeBoundError,
    LatticeSpec,
    cyclotomic_context,
    g_iterated_product,
    ipoly_direct_product,
    ipoly_interpolated_product,
    ipoly_iterated_sum,
    lagrange_basis,
    principal_lattice,
    polys,
)


def test_lattice_m2_p2():
    points = principal_lattice(LatticeSpec(2, 2))
    assert points == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_lattice_m1_p3():
    assert [p[0] for p in principal_lattice(LatticeSpec(1, 3))] == [0, 1, 2, 3]


def test_lattice_counting_formula():
    assert len(principal_lattice(LatticeSpec(3, 4))) == 35
    assert LatticeSpec(3, 4).point_count == 35


def test_linear_basis_m1_p1():
    b = lagrange_basis(LatticeSpec(1, 1))
    assert b[0] == {(0,): Fraction(1), (1,): Fraction(-1)}  # 1 - y
    assert b[1] == {(1,): Fraction(1)}  # y


def test_basis_m1_p2_against_vandermonde_oracle():
    # oracle: solve the 3-point Vandermonde system for the node-1 basis poly
    # p(y) = c0 + c1 y + c2 y^2 with p(0)=0, p(1)=1, p(2)=0
    # => c0 = 0, c1 + c2 = 1, 2c1 + 4c2 = 0 => c1 = 2, c2 = -1: p = y(2-y)
    b = lagrange_basis(LatticeSpec(1, 2))
    node_index = principal_lattice(LatticeSpec(1, 2)).index((1,))
    assert b[node_index] == {(1,): Fraction(2), (2,): Fraction(-1)}


@pytest.mark.parametrize("spec", [LatticeSpec(1, 2), LatticeSpec(2, 3), LatticeSpec(3, 2)])
def test_kronecker_delta_property(spec):
    points = principal_lattice(spec)
    for j, pj in enumerate(lagrange_basis(spec)):
        assert polys.total_degree(pj) <= spec.degree_bound
        for i, point in enumerate(points):
            assert polys.evaluate(pj, point) == (1 if i == j else 0)


@pytest.mark.parametrize("spec", [LatticeSpec(1, 3), LatticeSpec(2, 2)])
def test_partition_of_unity_at_nodes(spec):
    total = {}
    for pj in lagrange_basis(spec):
        total = polys.add(total, pj)
    # the interpolant of the constant 1
    assert total == polys.const(spec.arity, Fraction(1))


def test_iterated_sum_examples():
    one = polys.const(1, 1)
    a = polys.variable(1, 0)
    assert ipoly_iterated_sum([polys.add(one, a), polys.sub(one, a)]) == polys.const(1, 2)
    assert ipoly_iterated_sum([]) == polys.zero()


def test_direct_product_examples():
    one = polys.const(1, 1)
    a = polys.variable(1, 0)
    assert ipoly_direct_product([]) == polys.const(0, 1)
    p = polys.add(one, a)
    assert ipoly_direct_product([p]) == p


def test_interpolated_product_simple():
    one = polys.const(1, 1)
    a = polys.variable(1, 0)
    got = ipoly_interpolated_product([polys.add(one, a), polys.sub(one, a)], LatticeSpec(1, 2))
    assert got == polys.sub(one, polys.power(a, 2))


def test_interpolated_product_random_vs_direct():
    rng = random.Random(4242)

    def rand_poly(m, deg):
        p = {}
        for _ in range(rng.randint(1, 4)):
            exps = []
            left = deg
            for _ in range(m):
                k = rng.randint(0, left)
                exps.append(k)
                left -= k
            c = rng.randint(-9, 9)
            if c:
                p = polys.add(p, {tuple(exps): c})
        return p

    for _ in range(40):
        items = [rand_poly(2, 2) for _ in range(rng.randint(1, 10))]
        direct = ipoly_direct_product(items)
        assert ipoly_interpolated_product(items, LatticeSpec(2, 20)) == direct


def test_degree_bound_violation_rejected():
    with pytest.raises(DegreeBoundError):
        ipoly_interpolated_product([polys.variable(1, 0)], LatticeSpec(1, 0))


def test_zero_factor_short_circuits():
    got = ipoly_interpolated_product([polys.zero(), polys.variable(1, 0)], LatticeSpec(1, 1))
    assert got == polys.zero()


def test_g_interpolated_product_matches_fold():
    for q in (3, 5):
        ctx = cyclotomic_context(q)
        z = ctx.constants["z"]
        s = ctx.constants["s"]
        values = [ctx.one() + z, z * s, ctx.from_int(2) - s, s * s]
        fold = g_iterated_product(values, ctx)
        interp = g_iterated_product(values, ctx, method="interpolated")
        assert (fold - interp).is_zero()
        numeric = 1
        for v in values:
            numeric *= v.numeric()
        assert abs(fold.numeric() - numeric) < 1e-9


def test_g_interpolated_empty_product_is_one():
    ctx = cyclotomic_context(3)
    assert (g_iterated_product([], ctx, method="interpolated") - ctx.one()).is_zero()
