import json
import math

import pytest

from qacclab.algebra import (
    AlgebraContext,
    ContextError,
    FScalar,
    cyclotomic_context,
    cyclotomic_polynomial,
    get_context,
    load_context,
    polys,
    save_context,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == [-1, 1]
    assert cyclotomic_polynomial(2) == [1, 1]
    assert cyclotomic_polynomial(3) == [1, 1, 1]
    assert cyclotomic_polynomial(4) == [1, 0, 1]
    assert cyclotomic_polynomial(5) == [1, 1, 1, 1, 1]
    assert cyclotomic_polynomial(6) == [1, -1, 1]
    assert cyclotomic_polynomial(12) == [1, 0, -1, 0, 1]


@pytest.mark.parametrize("q,dim", [(2, 2), (3, 4), (4, 2), (5, 4), (6, 4), (7, 12), (8, 4)])
def test_basis_dimensions(q, dim):
    # sqrt(q) already lies in the cyclotomic field iff q is square or 0,1 mod 4
    assert cyclotomic_context(q).dim == dim


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6, 8])
def test_root_constant_squares_to_inverse_q(q):
    ctx = cyclotomic_context(q)
    s = ctx.constants["s"]
    lhs = s * s
    # q * s^2 == 1 exactly
    assert (ctx.from_int(q) * lhs - ctx.one()).is_zero()
    assert abs(s.numeric() - 1 / math.sqrt(q)) < 1e-12


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_geometric_root_sum_vanishes(q):
    # sum of zeta^(a*l) over l is exactly zero unless a = 0 mod q
    ctx = cyclotomic_context(q)
    zeta, _ = ctx.fourier_scalars(q)
    for a in range(1, q):
        total = ctx.zero()
        for l in range(q):
            total = total + zeta[(a * l) % q]
        assert total.is_zero(), (q, a)
    total = ctx.zero()
    for _ in range(q):
        total = total + zeta[0]
    assert (total - ctx.from_int(q)).is_zero()


def test_json_round_trip_bit_exact(tmp_path):
    for name in ("cyclotomic3", "cyclotomic5", "rational10"):
        ctx = get_context(name)
        path = tmp_path / f"{name}.json"
        save_context(ctx, path)
        loaded = load_context(path)
        assert loaded == ctx
        # dumping again is byte-identical
        second = tmp_path / f"{name}-2.json"
        save_context(loaded, second)
        assert path.read_text() == second.read_text()


def test_registry_names():
    assert get_context("cyclotomic3") is get_context("cyclotomic3")
    assert get_context("rational").u_int == 10
    assert get_context("rational5").u_int == 5
    with pytest.raises(ContextError):
        get_context("nonsense")


def test_identity_row_enforced():
    bad = [
        [(FScalar(polys.const(0, 1), 0), FScalar({}, 0)), (FScalar({}, 0), FScalar(polys.const(0, 1), 0))],
        [(FScalar({}, 0), FScalar(polys.const(0, 1), 0)), (FScalar(polys.const(0, 2), 0), FScalar({}, 0))],
    ]
    with pytest.raises(ContextError):
        AlgebraContext([], ["1", "b"], bad, polys.const(0, 2), {"b": [0.5, 0]})


def test_numeric_consistency_enforced():
    # claim b*b = 1 while numerically b = 2: should be rejected
    one = FScalar(polys.const(0, 1), 0)
    zero = FScalar({}, 0)
    table = [[(one, zero), (zero, one)], [(zero, one), (one, zero)]]
    with pytest.raises(ContextError):
        AlgebraContext([], ["1", "b"], table, polys.const(0, 2), {"b": [2.0, 0.0]})


def test_zero_denominator_rejected():
    with pytest.raises(ContextError):
        AlgebraContext([], ["1"], [[(FScalar(polys.const(0, 1), 0),)]], polys.zero(), {})


def test_context_with_indeterminate_round_trips(tmp_path):
    # user-declared transcendental: basis {1}, u = a1, numeric a1 = pi
    one = FScalar(polys.const(1, 1), 0)
    ctx = AlgebraContext(
        ["a1"],
        ["1"],
        [[(one,)]],
        polys.variable(1, 0),
        {"a1": [math.pi, 0.0]},
        name=None,
    )
    path = tmp_path / "user.json"
    save_context(ctx, path)
    loaded = load_context(path)
    assert loaded == ctx
    data = json.loads(path.read_text())
    assert set(data) >= {"indeterminates", "basis", "mult_table", "u", "numeric"}


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6, 7, 8])
def test_conjugation_table_is_a_numeric_involution(q):
    ctx = cyclotomic_context(q)
    for j in range(ctx.dim):
        beta = ctx.basis_element(j)
        conj = beta.conjugate()
        assert abs(conj.numeric() - beta.numeric().conjugate()) < 1e-9, (q, j)
        assert (conj.conjugate() - beta).is_zero(), (q, j)
