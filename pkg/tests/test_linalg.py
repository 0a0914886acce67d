"""Exact linear algebra kernel tests."""
from __future__ import annotations

import random
from fractions import Fraction as F

from ballquant.linalg import (
    identity_matrix,
    leading_principal_minors,
    mat_inverse,
    mat_mul,
    nullspace,
    rank_sparse,
    rref,
    solve_linear,
)


def frand(rng, lo=-6, hi=6):
    return F(rng.randint(lo, hi), rng.randint(1, 4))


def test_rref_canonical():
    rows = [[F(2), F(4), F(0)], [F(1), F(2), F(1)]]
    red, pivots = rref(rows)
    assert red == [[F(1), F(2), F(0)], [F(0), F(0), F(1)]]
    assert pivots == [0, 2]


def test_rref_drops_zero_rows():
    rows = [[F(1), F(1)], [F(2), F(2)], [F(0), F(0)]]
    red, pivots = rref(rows)
    assert red == [[F(1), F(1)]]
    assert pivots == [0]


def test_rref_idempotent_random():
    rng = random.Random(11)
    for _ in range(30):
        m = rng.randint(1, 5)
        n = rng.randint(1, 6)
        rows = [[frand(rng) for _ in range(n)] for _ in range(m)]
        red, _ = rref(rows)
        again, _ = rref([r[:] for r in red])
        assert again == red


def test_nullspace_orthogonal_to_rows():
    rng = random.Random(7)
    for _ in range(25):
        m = rng.randint(1, 4)
        n = rng.randint(2, 6)
        rows = [[frand(rng) for _ in range(n)] for _ in range(m)]
        null = nullspace(rows, n)
        red, _ = rref(rows)
        assert len(null) == n - len(red)
        for v in null:
            for r in rows:
                assert sum(a * b for a, b in zip(r, v)) == 0


def test_solve_linear_consistent_and_inconsistent():
    a = [[F(1), F(2)], [F(3), F(4)]]
    x = solve_linear(a, [F(5), F(11)])
    assert x == [F(1), F(2)]
    # rank-deficient inconsistent system
    b = [[F(1), F(1)], [F(2), F(2)]]
    assert solve_linear(b, [F(1), F(3)]) is None
    # rank-deficient consistent system returns some solution
    x2 = solve_linear(b, [F(1), F(2)])
    assert x2 is not None and x2[0] + x2[1] == F(1)


def test_mat_inverse_roundtrip():
    rng = random.Random(3)
    for _ in range(15):
        n = rng.randint(1, 5)
        while True:
            m = [[frand(rng) for _ in range(n)] for _ in range(n)]
            try:
                inv = mat_inverse(m)
                break
            except ValueError:
                continue
        assert mat_mul(m, inv) == identity_matrix(n)


def test_rank_sparse_matches_dense():
    rng = random.Random(19)
    for _ in range(25):
        m = rng.randint(1, 7)
        n = rng.randint(1, 7)
        rows = [[F(rng.randint(-3, 3)) if rng.random() < 0.4 else F(0) for _ in range(n)] for _ in range(m)]
        dense_rank = len(rref(rows)[0])
        sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
        assert rank_sparse(sparse) == dense_rank


def test_leading_principal_minors():
    m = [[F(2), F(1)], [F(1), F(3)]]
    assert leading_principal_minors(m) == [F(2), F(5)]
    m3 = [[F(1), F(0), F(0)], [F(0), F(4), F(2)], [F(0), F(2), F(2)]]
    assert leading_principal_minors(m3) == [F(1), F(4), F(4)]
