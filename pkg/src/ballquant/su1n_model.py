"""Rank one pseudo-unitary Lie algebra model.

Builds su(1, N) as a real Lie algebra with exact rational structure
constants.  Elements are trace-free complex matrices X with
X^* J + J X = 0 for J = diag(-1, 1, ..., 1).  The Cartan involution is
conjugation by J; its +1 eigenspace k is the maximal compact part and
the -1 eigenspace p contains the restricted-root generator
H0 = E_01 + E_10, whose adjoint action has rational eigenvalues
(+-2, +-1, 0).  All subspaces of the restricted-root decomposition are
computed exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lie_core import (
    LieAlgebra,
    Subspace,
    centralizer,
    span_subspace,
    subalgebra,
    subspace_intersection,
)
from .linalg import is_zero_vec, nullspace, solve_in_span, vec_scale, zeros
from .scalars import G_ZERO, GScalar, frac_str


def _gmat_zero(n: int):
    return [[G_ZERO for _ in range(n)] for _ in range(n)]


def _gmat_unit(n: int, i: int, j: int, value: GScalar):
    m = _gmat_zero(n)
    m[i][j] = value
    return m


def _gmat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _gmat_mul(a, b):
    n = len(a)
    out = _gmat_zero(n)
    for i in range(n):
        for k in range(n):
            x = a[i][k]
            if not x.is_zero():
                for j in range(n):
                    if not b[k][j].is_zero():
                        out[i][j] = out[i][j] + x * b[k][j]
    return out


def _gmat_comm(a, b):
    ab = _gmat_mul(a, b)
    ba = _gmat_mul(b, a)
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(ab, ba)]


def _flatten(m) -> list:
    out = []
    for row in m:
        out.extend(e.re for e in row)
    for row in m:
        out.extend(e.im for e in row)
    return out


def _check_su1n(m) -> bool:
    n = len(m)
    tr = GScalar.of(0)
    for i in range(n):
        tr = tr + m[i][i]
    if not tr.is_zero():
        return False
    # X^* J + J X = 0 with J = diag(-1, 1, ..., 1)
    for i in range(n):
        for j in range(n):
            ji = Fraction(-1) if i == 0 else Fraction(1)
            jj = Fraction(-1) if j == 0 else Fraction(1)
            val = m[j][i].conj().scale(jj) + m[i][j].scale(ji)
            if not val.is_zero():
                return False
    return True


def _basis_matrices(N: int):
    n = N + 1
    one = GScalar.of(1)
    im = GScalar.of(0, 1)
    mats, labels, signs = [], [], []
    for j in range(N):
        m = _gmat_add(_gmat_unit(n, j, j, im), _gmat_unit(n, j + 1, j + 1, -im))
        mats.append(m)
        labels.append(f"D{j}")
        signs.append(Fraction(1))
    for k in range(1, N + 1):
        mats.append(_gmat_add(_gmat_unit(n, 0, k, one), _gmat_unit(n, k, 0, one)))
        labels.append(f"P{k}")
        signs.append(Fraction(-1))
    for k in range(1, N + 1):
        mats.append(_gmat_add(_gmat_unit(n, 0, k, im), _gmat_unit(n, k, 0, -im)))
        labels.append(f"Q{k}")
        signs.append(Fraction(-1))
    for j in range(1, N + 1):
        for k in range(j + 1, N + 1):
            mats.append(_gmat_add(_gmat_unit(n, j, k, one), _gmat_unit(n, k, j, -one)))
            labels.append(f"R{j}_{k}")
            signs.append(Fraction(1))
            mats.append(_gmat_add(_gmat_unit(n, j, k, im), _gmat_unit(n, k, j, im)))
            labels.append(f"S{j}_{k}")
            signs.append(Fraction(1))
    return mats, labels, signs


@dataclass
class RootDatum:
    """One restricted-root space with its coroot.

    lambda_of_H lists the root value on each basis vector of a (here a is
    one dimensional).  H_lambda is the unique element of a representing
    the root functional through the Killing form.
    """

    lambda_of_H: list
    space: Subspace
    H_lambda: list


@dataclass
class Su1nModel:
    N: int
    algebra: LieAlgebra
    sigma_diagonal: list
    k_space: Subspace
    p_space: Subspace
    a_space: Subspace
    n_space: Subspace
    m_space: Subspace
    s_space: Subspace
    roots: list
    H0: list
    beta: list
    beta_H0: Fraction
    matrices: list

    def apply_sigma(self, x: list) -> list:
        return [s * xi for s, xi in zip(self.sigma_diagonal, x)]

    def beta_form(self, x: list, y: list) -> Fraction:
        return self.algebra.killing(x, y, _form=self.beta)

    def beta_sigma(self, x: list, y: list) -> Fraction:
        return -self.beta_form(x, self.apply_sigma(y))


@lru_cache(maxsize=None)
def build_su1n(N: int) -> Su1nModel:
    """Construct the su(1, N) model; results are cached and must be
    treated as immutable by callers."""
    if N < 1:
        raise ValueError("N must be at least 1")
    mats, labels, signs = _basis_matrices(N)
    for m in mats:
        if not _check_su1n(m):
            raise AssertionError("basis matrix leaves su(1,N)")
    flat = [_flatten(m) for m in mats]
    dim = len(mats)
    structure = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            coords = solve_in_span(flat, _flatten(_gmat_comm(mats[i], mats[j])))
            if coords is None:
                raise AssertionError("commutator left the spanned space")
            kept = {k: c for k, c in enumerate(coords) if c}
            if kept:
                structure[(i, j)] = kept
    algebra = LieAlgebra(dim, labels, structure)

    h0_index = N  # label P1
    H0 = algebra.basis_vector(h0_index)
    beta = algebra.killing_form()
    beta_H0 = beta[h0_index][h0_index]

    k_space = span_subspace(algebra, [algebra.basis_vector(i) for i in range(dim) if signs[i] == 1])
    p_space = span_subspace(algebra, [algebra.basis_vector(i) for i in range(dim) if signs[i] == -1])
    a_space = span_subspace(algebra, [H0])

    ad_h0 = algebra.ad(H0)
    eigenvalues = [Fraction(2), Fraction(1), Fraction(0), Fraction(-1), Fraction(-2)]
    if N == 1:
        eigenvalues = [Fraction(2), Fraction(0), Fraction(-2)]
    roots = []
    total = 0
    for t in eigenvalues:
        shifted = [[ad_h0[i][j] - (t if i == j else 0) for j in range(dim)] for i in range(dim)]
        space = span_subspace(algebra, nullspace(shifted, dim))
        coroot = vec_scale(H0, t / beta_H0)
        roots.append(RootDatum([t], space, coroot))
        total += space.dim
    if total != dim:
        raise AssertionError("restricted-root spaces do not fill the algebra")

    positive = [r for r in roots if r.lambda_of_H[0] > 0]
    n_vecs = []
    for r in positive:
        n_vecs.extend(r.space.basis)
    n_space = span_subspace(algebra, n_vecs)
    s_space = span_subspace(algebra, a_space.basis + n_space.basis)
    m_space = subspace_intersection(centralizer(algebra, a_space), k_space)

    return Su1nModel(
        N=N,
        algebra=algebra,
        sigma_diagonal=signs,
        k_space=k_space,
        p_space=p_space,
        a_space=a_space,
        n_space=n_space,
        m_space=m_space,
        s_space=s_space,
        roots=roots,
        H0=H0,
        beta=beta,
        beta_H0=beta_H0,
        matrices=mats,
    )


def _rational_sqrt(x: Fraction) -> Fraction:
    from math import isqrt

    if x <= 0:
        raise ValueError("square root of a nonpositive rational requested")
    pn, qd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn != x.numerator or qd * qd != x.denominator:
        raise ValueError(f"{x} has no rational square root")
    return Fraction(pn, qd)


def adapted_s_basis(model: Su1nModel):
    """Chart basis (H, V pairs, E) of the solvable part s.

    H is the restricted-root generator (eigenvalues 1 on the short root
    space and 2 on the top).  E spans the top root space, rescaled so
    that -beta(E, sigma E) = 2 beta(H, H).  The short root space is put
    into symplectic normal form for the bracket pairing [x, y] = b(x, y) E,
    ordered split-half so the pairing matrix is [[0, I], [-I, 0]].
    """
    top = [r for r in model.roots if r.lambda_of_H[0] == 2][0]
    e_raw = top.space.basis[0]
    scale = _rational_sqrt(2 * model.beta_H0 / model.beta_sigma(e_raw, e_raw))
    E = vec_scale(e_raw, scale)

    short = [r for r in model.roots if r.lambda_of_H[0] == 1]
    rem = [v[:] for v in short[0].space.basis] if short else []

    def bform(x, y):
        coeff = solve_in_span([E], model.algebra.bracket(x, y))
        if coeff is None:
            raise AssertionError("short-root bracket left the top root line")
        return coeff[0]

    xs, ys = [], []
    while rem:
        x = rem.pop(0)
        partner = next(i for i, w in enumerate(rem) if bform(x, w) != 0)
        w = rem.pop(partner)
        y = vec_scale(w, 1 / bform(x, w))
        reduced = []
        for u in rem:
            bu, bv = bform(x, u), bform(y, u)
            u2 = [ui - bu * yi + bv * xi for ui, yi, xi in zip(u, y, x)]
            if is_zero_vec(u2):
                raise AssertionError("symplectic reduction collapsed a basis vector")
            reduced.append(u2)
        rem = reduced
        xs.append(x)
        ys.append(y)
    fs = xs + ys
    m = len(xs)
    for i, fi in enumerate(fs):
        for j, fj in enumerate(fs):
            want = Fraction(0)
            if j == i + m:
                want = Fraction(1)
            elif i == j + m:
                want = Fraction(-1)
            if bform(fi, fj) != want:
                raise AssertionError("symplectic normal form check failed")
    return model.H0, fs, E


@dataclass
class CheckReport:
    ok: bool
    checked: int
    failures: list


def verify_sigma_pairing(model: Su1nModel) -> CheckReport:
    """Check [X, sigma X] = beta(X, sigma X) H_lambda on every root basis.

    Also asserts the strict negativity beta(X, sigma X) < 0 for nonzero
    root vectors, which is what makes -beta(., sigma .) positive there.
    """
    failures = []
    checked = 0
    for r in model.roots:
        if r.lambda_of_H[0] == 0:
            continue
        for x in r.space.basis:
            checked += 1
            sx = model.apply_sigma(x)
            val = model.beta_form(x, sx)
            got = model.algebra.bracket(x, sx)
            want = vec_scale(r.H_lambda, val)
            if got != want:
                failures.append(("pairing", r.lambda_of_H[0], x))
            if val >= 0:
                failures.append(("sign", r.lambda_of_H[0], x))
    return CheckReport(not failures, checked, failures)


def verify_m_orthocomplement(model: Su1nModel) -> CheckReport:
    """Check [m, X] = orthocomplement of X inside its short root space.

    Orthogonality is with respect to the positive form -beta(., sigma .).
    Checked on the echelon basis and on a few fixed combinations.
    """
    failures = []
    checked = 0
    short = [r for r in model.roots if r.lambda_of_H[0] == 1]
    if not short:
        return CheckReport(True, 0, [])
    space = short[0].space
    basis = space.basis
    samples = [b[:] for b in basis]
    if len(basis) >= 2:
        samples.append([a + b for a, b in zip(basis[0], basis[1])])
        samples.append([2 * a - 3 * b for a, b in zip(basis[0], basis[1])])
    for x in samples:
        checked += 1
        bracket_span = span_subspace(
            model.algebra, [model.algebra.bracket(y, x) for y in model.m_space.basis]
        )
        row = [model.beta_sigma(x, b) for b in basis]
        coeffs = nullspace([row], len(basis))
        ortho_vecs = []
        for c in coeffs:
            v = zeros(model.algebra.dim)
            for w, b in zip(c, basis):
                if w:
                    v = [vi + w * bi for vi, bi in zip(v, b)]
            ortho_vecs.append(v)
        ortho = span_subspace(model.algebra, ortho_vecs)
        if bracket_span != ortho:
            failures.append(("orthocomplement", x))
    return CheckReport(not failures, checked, failures)


def iwasawa_project(model: Su1nModel, x: list):
    """Split x = x_s + x_k along the direct sum g = s + k."""
    spanning = model.s_space.basis + model.k_space.basis
    coords = solve_in_span(spanning, x)
    if coords is None:
        raise ValueError("vector outside the algebra span")
    ns = len(model.s_space.basis)
    xs = zeros(model.algebra.dim)
    xk = zeros(model.algebra.dim)
    for i, c in enumerate(coords):
        if not c:
            continue
        target = xs if i < ns else xk
        b = spanning[i]
        for t in range(model.algebra.dim):
            target[t] += c * b[t]
    return xs, xk


@dataclass
class SSubmodel:
    """The solvable part a + n as a Lie algebra in its own coordinates.

    embedding rows express the submodel basis inside the parent algebra;
    H is the restricted-root generator, and each entry of roots is a pair
    (root value on H, root space basis) in submodel coordinates.
    """

    algebra: LieAlgebra
    embedding: list
    H: list
    roots: list
    beta_H0: Fraction

    def to_sub(self, x: list) -> list:
        coords = solve_in_span(self.embedding, x)
        if coords is None:
            raise ValueError("vector does not lie in the solvable part")
        return coords


_S_SUBMODELS: dict = {}


def s_submodel(model: Su1nModel) -> SSubmodel:
    if model.N in _S_SUBMODELS:
        return _S_SUBMODELS[model.N]
    sub, embedding = subalgebra(
        model.algebra,
        model.s_space,
        labels=[f"s{i}" for i in range(model.s_space.dim)],
    )
    to_sub = lambda x: solve_in_span(embedding, x)
    roots = []
    for r in model.roots:
        if r.lambda_of_H[0] <= 0:
            continue
        roots.append((r.lambda_of_H[0], [to_sub(b) for b in r.space.basis]))
    out = SSubmodel(
        algebra=sub,
        embedding=embedding,
        H=to_sub(model.H0),
        roots=roots,
        beta_H0=model.beta_H0,
    )
    _S_SUBMODELS[model.N] = out
    return out


def beta_sigma_gram(model: Su1nModel) -> list:
    dim = model.algebra.dim
    return [
        [-model.beta[i][j] * model.sigma_diagonal[j] for j in range(dim)]
        for i in range(dim)
    ]


def root_table_json(model: Su1nModel) -> str:
    rows = []
    for r in model.roots:
        rows.append(
            {
                "lambda": [frac_str(t) for t in r.lambda_of_H],
                "dim": r.space.dim,
                "H_lambda": [frac_str(c) for c in r.H_lambda],
            }
        )
    return json.dumps({"roots": rows}, sort_keys=True)


def model_to_json(model: Su1nModel) -> str:
    def basis_json(space):
        return [[frac_str(c) for c in row] for row in space.basis]

    payload = {
        "N": model.N,
        "algebra": json.loads(model.algebra.to_json()),
        "sigma_diagonal": [frac_str(s) for s in model.sigma_diagonal],
        "subspaces": {
            "k": basis_json(model.k_space),
            "p": basis_json(model.p_space),
            "a": basis_json(model.a_space),
            "n": basis_json(model.n_space),
            "m": basis_json(model.m_space),
            "s": basis_json(model.s_space),
        },
        "roots": json.loads(root_table_json(model))["roots"],
    }
    return json.dumps(payload, sort_keys=True)
