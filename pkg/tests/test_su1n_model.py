"""Tests for the rank one pseudo-unitary model.

Frozen oracles:
  * Killing form on the restricted-root generator H0: kappa(H0, H0) = 4(N+1),
    so 8, 12, 16 for N = 1, 2, 3 (ad_H0 eigenvalues are +-2 once, +-1 with
    multiplicity 2(N-1), and 0 on the centralizer).
  * restricted-root space dimensions (1, 2(N-1), 1 + (N-1)^2, 2(N-1), 1).
  * the normalizer of the nilpotent part is s + m (dimension 5 at N = 2).
  * the echelon generator of the highest root space at N = 1 is D0 - Q1.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction as F

from ballquant.lie_core import normalizer, span_subspace
from ballquant.su1n_model import (
    beta_sigma_gram,
    build_su1n,
    iwasawa_project,
    model_to_json,
    root_table_json,
    verify_m_orthocomplement,
    verify_sigma_pairing,
)
from ballquant.linalg import is_zero_vec, leading_principal_minors, vec_add, vec_scale


def test_dimensions():
    for n in (1, 2, 3):
        model = build_su1n(n)
        dim = (n + 1) ** 2 - 1
        assert model.algebra.dim == dim
        assert model.k_space.dim == n * n
        assert model.p_space.dim == 2 * n
        assert model.a_space.dim == 1
        assert model.m_space.dim == (n - 1) ** 2
        assert model.n_space.dim == 2 * n - 1
        assert model.s_space.dim == 2 * n


def test_killing_on_a_generator_frozen():
    for n, expected in ((1, 8), (2, 12), (3, 16)):
        model = build_su1n(n)
        assert model.beta_H0 == F(expected)


def test_sigma_is_bracket_involution():
    rng = random.Random(23)
    for n in (1, 2):
        model = build_su1n(n)
        g = model.algebra
        for _ in range(20):
            x = [F(rng.randint(-3, 3)) for _ in range(g.dim)]
            y = [F(rng.randint(-3, 3)) for _ in range(g.dim)]
            sx = model.apply_sigma(x)
            assert model.apply_sigma(sx) == x
            lhs = model.apply_sigma(g.bracket(x, y))
            rhs = g.bracket(sx, model.apply_sigma(y))
            assert lhs == rhs


def test_cartan_split():
    for n in (1, 2, 3):
        model = build_su1n(n)
        for b in model.k_space.basis:
            assert model.apply_sigma(b) == b
        for b in model.p_space.basis:
            assert model.apply_sigma(b) == [-x for x in b]


def test_root_space_dimensions_and_eigenvalue_property():
    for n in (1, 2, 3):
        model = build_su1n(n)
        vals = [r.lambda_of_H[0] for r in model.roots]
        if n == 1:
            assert vals == [F(2), F(0), F(-2)]
            assert [r.space.dim for r in model.roots] == [1, 1, 1]
        else:
            assert vals == [F(2), F(1), F(0), F(-1), F(-2)]
            assert [r.space.dim for r in model.roots] == [
                1, 2 * (n - 1), 1 + (n - 1) ** 2, 2 * (n - 1), 1]
        for r in model.roots:
            for x in r.space.basis:
                got = model.algebra.bracket(model.H0, x)
                assert got == vec_scale(x, r.lambda_of_H[0])
            # the coroot represents the root functional through the Killing form
            assert model.beta_form(r.H_lambda, model.H0) == r.lambda_of_H[0]


def test_highest_root_generator_frozen_n1():
    model = build_su1n(1)
    top = model.roots[0]
    # basis order (D0, P1, Q1); echelon generator is D0 - Q1
    assert top.space.basis == [[F(1), F(0), F(-1)]]


def test_sigma_pairing_identity():
    for n in (1, 2, 3):
        rep = verify_sigma_pairing(build_su1n(n))
        assert rep.ok
        assert rep.checked == (2 if n == 1 else 2 + 4 * (n - 1))
        assert rep.failures == []


def test_m_orthocomplement_identity():
    for n in (1, 2, 3):
        rep = verify_m_orthocomplement(build_su1n(n))
        assert rep.ok


def test_beta_sigma_positive_definite():
    for n in (1, 2, 3):
        model = build_su1n(n)
        minors = leading_principal_minors(beta_sigma_gram(model))
        assert all(m > 0 for m in minors)


def test_normalizer_of_n_is_s_plus_m():
    for n, expected_dim in ((2, 5), (3, 10)):
        model = build_su1n(n)
        nz = normalizer(model.algebra, model.n_space)
        sm = span_subspace(model.algebra, model.s_space.basis + model.m_space.basis)
        assert nz == sm
        assert nz.dim == expected_dim


def test_m_centralizes_a_and_top_root():
    model = build_su1n(2)
    g = model.algebra
    top = model.roots[0].space.basis[0]
    for y in model.m_space.basis:
        assert is_zero_vec(g.bracket(y, model.H0))
        assert is_zero_vec(g.bracket(y, top))
    # frozen central generator at N = 2: i diag(1,1,-2) = D0 + 2 D1
    assert model.m_space.basis == [[F(1), F(2)] + [F(0)] * 6]


def test_iwasawa_projection():
    rng = random.Random(4)
    for n in (1, 2):
        model = build_su1n(n)
        g = model.algebra
        for _ in range(15):
            x = [F(rng.randint(-4, 4)) for _ in range(g.dim)]
            xs, xk = iwasawa_project(model, x)
            assert vec_add(xs, xk) == x
            assert model.s_space.contains(xs)
            assert model.k_space.contains(xk)
        # frozen example: the opposite top root projects to minus the top root
        e = model.roots[0].space.basis[0]
        se = model.apply_sigma(e)
        xs, xk = iwasawa_project(model, se)
        assert xs == [-c for c in e]
        assert xk == vec_add(e, se)


def test_s_is_spanned_by_projected_k_brackets():
    # s = span of [[X, Y]]_s over X in s, Y in k
    for n in (1, 2):
        model = build_su1n(n)
        g = model.algebra
        vecs = []
        for x in model.s_space.basis:
            for y in model.k_space.basis:
                xs, _ = iwasawa_project(model, g.bracket(x, y))
                vecs.append(xs)
        assert span_subspace(g, vecs) == model.s_space


def test_json_exports():
    model = build_su1n(2)
    table = json.loads(root_table_json(model))
    assert len(table["roots"]) == 5
    assert table["roots"][0]["lambda"] == ["2/1"]
    blob = json.loads(model_to_json(model))
    assert blob["N"] == 2
    assert blob["algebra"]["dim"] == 8
    assert len(blob["sigma_diagonal"]) == 8
