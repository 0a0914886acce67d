"""Tests for the exponential-polynomial function ring and the star product.

Frozen oracles are hand computed for the constant Poisson structure
with Lambda(a, z) = 1/2 and Lambda restricted to the v block equal to
the standard symplectic matrix.
"""
from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from ballquant.formal_star import (
    CoefFn,
    NuSeries,
    PoissonStructure,
    c_operator,
    check_poisson_covariance,
    coef_from_json,
    coef_to_json,
    half_commutator,
    moyal,
    poisson,
    series_from_json,
    series_to_json,
    star_commutator,
)
from ballquant.lie_core import LieAlgebra


def std_structure(nv: int, p=F(1, 2), vv=F(1)) -> PoissonStructure:
    dim = nv + 2
    m = [[F(0)] * dim for _ in range(dim)]
    m[0][dim - 1] = p
    m[dim - 1][0] = -p
    half = nv // 2
    for i in range(half):
        m[1 + i][1 + half + i] = vv
        m[1 + half + i][1 + i] = -vv
    return PoissonStructure(nv, m)


def mono(nv, p=0, k=None, alpha=0, q=0, c=F(1)):
    return CoefFn.monomial(nv, p, tuple(k or [0] * nv), alpha, q, c)


def rand_fn(nv, rng, terms=3):
    f = CoefFn.zero(nv)
    for _ in range(terms):
        k = tuple(rng.randint(0, 2) for _ in range(nv))
        t = mono(nv, rng.randint(-2, 2), k, 0, rng.randint(0, 2), F(rng.randint(-3, 3)))
        f = f.add(t)
    return f


def test_coef_arithmetic_and_diff():
    f = mono(2, p=-1, k=(1, 0))  # e^{-a} v1
    g = mono(2, q=2)  # z^2
    fg = f.mul(g)
    assert fg.terms == {(-1, (1, 0), 0, 2): F(1)}
    assert fg.diff_a().terms == {(-1, (1, 0), 0, 2): F(-1)}
    assert fg.diff_z().terms == {(-1, (1, 0), 0, 1): F(2)}
    assert fg.diff_v(0).terms == {(-1, (0, 0), 0, 2): F(1)}
    assert fg.diff_v(1).is_zero()
    assert f.add(f.neg()).is_zero()


def test_alpha_bookkeeping():
    f = mono(2, k=(1, 0), alpha=1)  # alpha v1
    g = mono(2, q=1, alpha=1)  # alpha z
    assert f.mul(g).terms == {(0, (1, 0), 2, 1): F(1)}
    assert f.mul(g).substitute_alpha(F(2)).terms == {(0, (1, 0), 0, 1): F(4)}


def test_origin_part():
    f = (
        mono(2, p=2, c=F(3))
        .add(mono(2, k=(1, 0), q=1))
        .add(mono(2, alpha=1, c=F(5)))
        .add(mono(2, c=F(2)))
    )
    assert f.origin_part().terms == {(0, (0, 0), 0, 0): F(5), (0, (0, 0), 1, 0): F(5)}


def test_antiderivatives():
    f = mono(2, p=-2, k=(2, 1), q=3, c=F(6))
    assert f.antiderivative_z().diff_z().terms == f.terms
    assert f.antiderivative_v(0).diff_v(0).terms == f.terms
    assert f.antiderivative_a().diff_a().terms == f.terms
    with pytest.raises(ValueError):
        mono(2, p=0, c=F(1)).antiderivative_a()


def test_poisson_frozen_values():
    P = std_structure(2)
    z = mono(2, q=1)
    e2a = mono(2, p=-2)
    assert poisson(z, e2a, P).terms == {(-2, (0, 0), 0, 0): F(1)}
    f1 = mono(2, p=-1, k=(1, 0))
    f2 = mono(2, p=-1, k=(0, 1))
    assert poisson(f1, f2, P).terms == {(-2, (0, 0), 0, 0): F(1)}
    assert poisson(f2, f1, P).terms == {(-2, (0, 0), 0, 0): F(-1)}


def test_c_operator_antisymmetry_pattern():
    rng = random.Random(7)
    P = std_structure(2)
    for _ in range(6):
        f, g = rand_fn(2, rng), rand_fn(2, rng)
        for m in range(4):
            lhs = c_operator(f, g, P, m)
            rhs = c_operator(g, f, P, m)
            if m % 2:
                assert lhs.add(rhs).is_zero()
            else:
                assert lhs.sub(rhs).is_zero()


def test_moyal_flat_pair_frozen():
    P = std_structure(2)
    v1 = mono(2, k=(1, 0))
    v2 = mono(2, k=(0, 1))
    s = moyal(NuSeries.from_coef(v1, 2), NuSeries.from_coef(v2, 2), P, 2)
    assert s.exact
    assert s.coeffs[0].terms == {(0, (1, 1), 0, 0): F(1)}
    assert s.coeffs[1].terms == {(0, (0, 0), 0, 0): F(1)}
    assert s.coeffs[2].is_zero()
    comm = star_commutator(NuSeries.from_coef(v1, 2), NuSeries.from_coef(v2, 2), P, 2)
    assert comm.coeffs[0].is_zero() and comm.coeffs[2].is_zero()
    assert comm.coeffs[1].terms == {(0, (0, 0), 0, 0): F(2)}


def test_moyal_exponential_pair_frozen():
    P = std_structure(2)
    z2 = mono(2, q=2)
    e2a = mono(2, p=-2)
    s = moyal(NuSeries.from_coef(z2, 3), NuSeries.from_coef(e2a, 3), P, 3)
    assert s.exact
    assert s.coeffs[0].terms == {(-2, (0, 0), 0, 2): F(1)}
    assert s.coeffs[1].terms == {(-2, (0, 0), 0, 1): F(2)}
    assert s.coeffs[2].terms == {(-2, (0, 0), 0, 0): F(1)}
    assert s.coeffs[3].is_zero()


def test_moyal_exactness_flag_is_sharp():
    P = std_structure(2)
    z2 = mono(2, q=2)
    # every higher operator vanishes because d/da z^2 = 0
    s = moyal(NuSeries.from_coef(z2, 0), NuSeries.from_coef(z2, 0), P, 0)
    assert s.exact
    assert s.coeffs[0].terms == {(0, (0, 0), 0, 4): F(1)}
    # here C_1 is nonzero and gets truncated away
    z = mono(2, q=1)
    e2a = mono(2, p=-2)
    t = moyal(NuSeries.from_coef(z, 0), NuSeries.from_coef(e2a, 0), P, 0)
    assert not t.exact


def test_moyal_associativity_random():
    rng = random.Random(23)
    P = std_structure(2)
    K = 5
    for _ in range(4):
        f = NuSeries.from_coef(rand_fn(2, rng), K)
        g = NuSeries.from_coef(rand_fn(2, rng), K)
        h = NuSeries.from_coef(rand_fn(2, rng), K)
        left = moyal(moyal(f, g, P, K), h, P, K)
        right = moyal(f, moyal(g, h, P, K), P, K)
        for i in range(K + 1):
            assert left.coeffs[i].sub(right.coeffs[i]).is_zero()


def test_half_commutator():
    rng = random.Random(5)
    P = std_structure(2)
    for _ in range(5):
        f, g = rand_fn(2, rng), rand_fn(2, rng)
        h = half_commutator(NuSeries.from_coef(f, 4), NuSeries.from_coef(g, 4), P, 4)
        assert h.coeffs[0].sub(poisson(f, g, P)).is_zero()


def test_nu_series_truncation():
    one = CoefFn.const(2, F(1))
    z = mono(2, q=1)
    plus = NuSeries(1, [one, z], True)
    minus = NuSeries(1, [one, z.neg()], True)
    prod = plus.mul(minus)
    assert prod.coeffs[0].terms == one.terms and prod.coeffs[1].is_zero()
    assert not prod.exact
    plus2 = NuSeries(2, [one, z, CoefFn.zero(2)], True)
    minus2 = NuSeries(2, [one, z.neg(), CoefFn.zero(2)], True)
    prod2 = plus2.mul(minus2)
    assert prod2.exact
    assert prod2.coeffs[2].terms == {(0, (0, 0), 0, 2): F(-1)}


def test_poisson_covariance_check():
    heis = LieAlgebra(3, ["X", "Y", "Z"], {(0, 1): {2: F(1)}})
    P = std_structure(2)
    good = [mono(2, k=(1, 0)), mono(2, k=(0, 1)), CoefFn.const(2, F(1))]
    rep = check_poisson_covariance(heis, good, P)
    assert rep.ok and rep.checked == 3
    bad = [good[0], good[1], CoefFn.const(2, F(1)).add(mono(2, k=(1, 0)))]
    rep = check_poisson_covariance(heis, bad, P)
    assert not rep.ok and (0, 1) in rep.failures


def test_json_roundtrips():
    rng = random.Random(3)
    f = rand_fn(2, rng).add(mono(2, alpha=2, c=F(7, 3)))
    f2 = coef_from_json(coef_to_json(f))
    assert f2.nv == f.nv and f2.terms == f.terms
    s = NuSeries(2, [f, CoefFn.zero(2), f.neg()], False)
    s2 = series_from_json(series_to_json(s))
    assert s2.order == 2 and s2.exact is False
    assert all(a.terms == b.terms for a, b in zip(s.coeffs, s2.coeffs))


def test_poisson_structure_validation():
    with pytest.raises(ValueError):
        PoissonStructure(2, [[F(0)] * 3 for _ in range(3)])
    m = [[F(0)] * 4 for _ in range(4)]
    m[0][3] = F(1, 2)
    with pytest.raises(ValueError):
        PoissonStructure(2, m)
