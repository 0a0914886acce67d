"""Radial reduction of the quantized action.

The sigma-fixed subalgebra k acts on chart functions through the
operators

    D_X = (1/(2 nu)) [mu_X, - ]_star,

which are honest differential operators with nu-series coefficients
because every Moyal term differentiates the polynomial moment mu_X.
For X in m the corrections vanish and D_X is the fundamental field, so
m-invariant functions are exactly the functions of (a, r^2, z) with
r^2 = (v|v); radial_reduce rewrites them in that form.

After a partial Fourier transform in z the operator for sigma(v0),
applied to a radial symbol theta(a, r, xi), closes on coefficients
generated by e^{ka}, integer powers of r and xi, and half powers of
1 - nu^2 xi^2.  XiFn implements that coefficient calculus exactly and
radial_pde_residual evaluates the operator, split along the two
covectors (w|v) and Omega(w, v) of the direction vector w.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .ball_quantization import (
    BallChart,
    QmmTable,
    fundamental_field,
    inner_square,
    resolve_truncation_order,
)
from .formal_star import CoefFn, NuSeries
from .lie_core import span_subspace
from .linalg import solve_in_span, solve_linear, vec_add
from .scalars import GScalar, frac_str, parse_frac
from .su1n_model import Su1nModel


def _binom(e: Fraction, t: int) -> Fraction:
    """Binomial coefficient with an arbitrary rational top entry."""
    out = Fraction(1)
    for s in range(t):
        out *= e - s
    return out / factorial(t)


def _merge(acc: dict, key: tuple, val: GScalar) -> None:
    cur = acc.get(key)
    cur = val if cur is None else cur + val
    if cur.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = cur


@dataclass
class XiFn:
    """Coefficient function of (a, r, xi) in the radial calculus.

    terms maps (k, m, n, h, j) to a Gaussian rational multiplying

        e^{k a} r^m xi^n (1 - nu^2 xi^2)^{h/2} nu^j,

    with m, n, h integers of either sign.  The representation is not
    unique because even powers of the square root factor expand; use
    canonical or is_zero for comparisons.
    """

    terms: dict

    def add(self, other: XiFn) -> XiFn:
        acc = dict(self.terms)
        for key, val in other.terms.items():
            _merge(acc, key, val)
        return XiFn(acc)

    def neg(self) -> XiFn:
        return XiFn({key: -val for key, val in self.terms.items()})

    def sub(self, other: XiFn) -> XiFn:
        return self.add(other.neg())

    def scale(self, c: GScalar) -> XiFn:
        if c.is_zero():
            return XiFn({})
        return XiFn({key: val * c for key, val in self.terms.items()})

    def mul(self, other: XiFn) -> XiFn:
        acc: dict = {}
        for (k1, m1, n1, h1, j1), c1 in self.terms.items():
            for (k2, m2, n2, h2, j2), c2 in other.terms.items():
                _merge(acc, (k1 + k2, m1 + m2, n1 + n2, h1 + h2, j1 + j2), c1 * c2)
        return XiFn(acc)

    def diff_a(self) -> XiFn:
        acc: dict = {}
        for (k, m, n, h, j), c in self.terms.items():
            if k:
                _merge(acc, (k, m, n, h, j), c.scale(Fraction(k)))
        return XiFn(acc)

    def diff_r(self) -> XiFn:
        acc: dict = {}
        for (k, m, n, h, j), c in self.terms.items():
            if m:
                _merge(acc, (k, m - 1, n, h, j), c.scale(Fraction(m)))
        return XiFn(acc)

    def diff_xi(self) -> XiFn:
        """d/dxi; the square root factor differentiates to
        -h nu^2 xi (1 - nu^2 xi^2)^{(h-2)/2}."""
        acc: dict = {}
        for (k, m, n, h, j), c in self.terms.items():
            if n:
                _merge(acc, (k, m, n - 1, h, j), c.scale(Fraction(n)))
            if h:
                _merge(acc, (k, m, n + 1, h - 2, j + 2), c.scale(Fraction(-h)))
        return XiFn(acc)

    def canonical(self) -> XiFn:
        """Push every even half-power to a common exponent and every odd
        one likewise, multiplying the difference out as a polynomial."""
        odd = [h for (_, _, _, h, _) in self.terms if h % 2]
        even = [h for (_, _, _, h, _) in self.terms if h % 2 == 0]
        target_odd = min(odd) if odd else 0
        target_even = min([0] + even)
        acc: dict = {}
        for (k, m, n, h, j), c in self.terms.items():
            target = target_odd if h % 2 else target_even
            d = (h - target) // 2
            for t in range(d + 1):
                coeff = c.scale(_binom(Fraction(d), t) * (-1) ** t)
                if not coeff.is_zero():
                    _merge(acc, (k, m, n + 2 * t, target, j + 2 * t), coeff)
        return XiFn(acc)

    def is_zero(self) -> bool:
        return not self.canonical().terms

    def expand_nu(self, order: int) -> XiFn:
        """Expand the square root factors into nu series, truncated past
        nu^order.  Integer powers terminate on their own."""
        acc: dict = {}
        for (k, m, n, h, j), c in self.terms.items():
            if j > order:
                continue
            if h == 0:
                _merge(acc, (k, m, n, 0, j), c)
                continue
            e = Fraction(h, 2)
            t = 0
            while j + 2 * t <= order:
                coeff = c.scale(_binom(e, t) * (-1) ** t)
                if not coeff.is_zero():
                    _merge(acc, (k, m, n + 2 * t, 0, j + 2 * t), coeff)
                t += 1
        return XiFn(acc)


def xifn_to_json(f: XiFn) -> dict:
    terms = [
        [k, m, n, h, j, frac_str(c.re), frac_str(c.im)]
        for (k, m, n, h, j), c in sorted(f.terms.items())
    ]
    return {"terms": terms}


def xifn_from_json(data: dict) -> XiFn:
    acc = {}
    for k, m, n, h, j, re, im in data["terms"]:
        acc[(k, m, n, h, j)] = GScalar(parse_frac(re), parse_frac(im))
    return XiFn(acc)


@dataclass
class ClosureReport:
    ok: bool
    dim_w: int
    dim_filled: int
    failures: list


def check_reduction_closure(model: Su1nModel) -> ClosureReport:
    """Check the subspace geometry behind the radial reduction.

    W = s + m + (root space of the negative short root) must be stable
    under the adjoint action of the solvable part, and W + [W, W] must
    fill the whole algebra.
    """
    algebra = model.algebra
    w_vecs = [list(v) for v in model.s_space.basis + model.m_space.basis]
    for r in model.roots:
        if r.lambda_of_H[0] == -1:
            w_vecs.extend(list(v) for v in r.space.basis)
    w = span_subspace(algebra, w_vecs)
    failures = []
    for i, z in enumerate(model.s_space.basis):
        for j, x in enumerate(w.basis):
            if not w.contains(algebra.bracket(z, x)):
                failures.append((i, j))
    brackets = [
        algebra.bracket(x, y)
        for a, x in enumerate(w.basis)
        for y in w.basis[a + 1 :]
    ]
    filled = span_subspace(algebra, w.basis + brackets)
    ok = not failures and filled.dim == algebra.dim
    return ClosureReport(ok, w.dim, filled.dim, failures)


def m_invariance_residuals(chart: BallChart, f: CoefFn) -> list:
    """Lie derivatives of f along the m fundamental fields, one per
    generator; all zero exactly when f is m-invariant."""
    out = []
    for y in chart.m_basis:
        comps = fundamental_field(chart, y)
        r = CoefFn.zero(chart.nv)
        for coord, comp in enumerate(comps):
            if not comp.is_zero():
                r = r.add(comp.mul(f.diff_coord(coord)))
        out.append(r)
    return out


def radial_reduce(chart: BallChart, f: CoefFn) -> dict:
    """Write an m-invariant chart polynomial as a sum of
    c e^{p a} (v|v)^s z^q, returned as {(p, s, q): c}.

    Raises ValueError when f is not m-invariant or (for the trivial m of
    low rank charts) not a polynomial in the squared radius.
    """
    for r in m_invariance_residuals(chart, f):
        if not r.is_zero():
            raise ValueError("function is not m-invariant")
    nv = chart.nv
    u = inner_square(chart)
    groups: dict = {}
    for (p, k, apow, q), c in f.terms.items():
        if apow:
            raise ValueError("the alpha parameter is not supported here")
        groups.setdefault((p, q), {})[k] = c
    out: dict = {}
    for (p, q), vterms in sorted(groups.items()):
        deg = max(sum(k) for k in vterms)
        if deg % 2:
            raise ValueError("odd v-degree part cannot be radial")
        powers = [CoefFn.const(nv, Fraction(1))]
        for _ in range(deg // 2):
            powers.append(powers[-1].mul(u))
        monos = {k for pw in powers for (_, k, _, _) in pw.terms}
        monos.update(vterms)
        rows = []
        rhs = []
        for k in sorted(monos):
            rows.append([pw.terms.get((0, k, 0, 0), Fraction(0)) for pw in powers])
            rhs.append(vterms.get(k, Fraction(0)))
        sol = solve_linear(rows, rhs)
        if sol is None:
            raise ValueError("not a polynomial in the squared radius")
        for s, c in enumerate(sol):
            if c:
                out[(p, s, q)] = c
    return out


def k_basis(chart: BallChart):
    """Basis of the sigma-fixed subalgebra adapted to the chart: the m
    generators, then f_i + sigma f_i, then E + sigma E."""
    model = chart.model
    labels = [f"m{i + 1}" for i in range(len(chart.m_basis))]
    vecs = [y[:] for y in chart.m_basis]
    for i, fvec in enumerate(chart.fs):
        labels.append(f"kf{i + 1}")
        vecs.append(vec_add(fvec, model.apply_sigma(fvec)))
    labels.append("kE")
    vecs.append(vec_add(chart.E, model.apply_sigma(chart.E)))
    return labels, vecs


def retract_operator(table: QmmTable, x: list, order: int | None = None) -> dict:
    """The action (1/(2 nu)) [mu_x, - ]_star as a differential operator.

    Keys are derivative multi-indices over the chart coordinates
    (a, v_1 .. v_nv, z); values are the NuSeries coefficients, exact up
    to the requested truncation order.  Only odd Moyal terms survive the
    commutator, and the term of order m contributes at nu^{m-1}, so the
    sum below is finite.
    """
    order = resolve_truncation_order(order)
    coords = solve_in_span(table.basis, [Fraction(c) for c in x])
    if coords is None:
        raise ValueError("vector lies outside the moment table")
    nv = table.chart.nv
    mu = NuSeries.zero(nv, 2)
    for c, mom in zip(coords, table.moments):
        if c:
            mu = mu.add(mom.scale(c))
    pairs = table.P.directed_pairs
    buckets: dict = {}
    for m in range(1, order + 2, 2):
        for combo in combinations_with_replacement(range(len(pairs)), m):
            counts: dict = {}
            for idx in combo:
                counts[idx] = counts.get(idx, 0) + 1
            weight = Fraction(1)
            u_times = [0] * (nv + 2)
            w_key = [0] * (nv + 2)
            for idx, c in counts.items():
                u, w, val = pairs[idx]
                weight *= val**c / factorial(c)
                u_times[u] += c
                w_key[w] += c
            for i, coef in enumerate(mu.coeffs):
                t = i + m - 1
                if t > order or coef.is_zero():
                    continue
                d = coef
                for coord, times in enumerate(u_times):
                    if times and not d.is_zero():
                        d = d.diff_coord(coord, times)
                if d.is_zero():
                    continue
                key = tuple(w_key)
                if key not in buckets:
                    buckets[key] = [CoefFn.zero(nv) for _ in range(order + 1)]
                buckets[key][t] = buckets[key][t].add(d.scale(weight))
    out = {}
    for key, coeffs in buckets.items():
        if any(not c.is_zero() for c in coeffs):
            out[key] = NuSeries(order, coeffs, True)
    return out


def apply_operator(op: dict, theta: NuSeries, order: int | None = None) -> NuSeries:
    """Apply a differential operator from retract_operator to a series."""
    order = resolve_truncation_order(order)
    base = theta.resize(order)
    nv = base.coeffs[0].nv
    out = NuSeries.zero(nv, order)
    for key, series in op.items():
        dcoeffs = []
        for c in base.coeffs:
            for coord, times in enumerate(key):
                if times and not c.is_zero():
                    c = c.diff_coord(coord, times)
            dcoeffs.append(c)
        out = out.add(series.resize(order).mul(NuSeries(order, dcoeffs, base.exact)))
    return out


def _xt(k=0, m=0, n=0, h=0, j=0, re=0, im=0):
    return XiFn({(k, m, n, h, j): GScalar.of(re, im)})


def radial_pde_residual(theta: XiFn, n: int, order: int | None = None):
    """Radial operator for the direction sigma(v0) applied to theta.

    theta is a radial symbol theta(a, r, xi) and n the complex dimension
    of the domain.  Returns the exact pair of XiFn coefficients along
    (w|v) and Omega(w, v); pass order to expand the square root factors
    into truncated nu series instead.
    """
    th_a = theta.diff_a()
    th_r = theta.diff_r()
    th_rr = th_r.diff_r()
    th_rrr = th_rr.diff_r()
    th_xi = theta.diff_xi()
    th_ar = th_r.diff_a()
    th_xir = th_r.diff_xi()

    one_plus = _xt(re=1).add(_xt(h=1, re=1))
    s_minus = _xt(h=1, re=1).sub(_xt(re=1))
    n_weight = GScalar.of(2 * n - 3)

    wv = XiFn({})
    bulk = one_plus.mul(_xt(m=2, re=1)).add(_xt(re=2)).add(_xt(k=-1, n=1, im=2))
    wv = wv.add(_xt(k=1, n=1, im=1).mul(bulk).mul(theta))
    front = _xt(k=1, n=-1, im=1).mul(s_minus)
    radial_pair = th_rr.add(_xt(m=-1, re=1).scale(n_weight).mul(th_r))
    wv = wv.sub(front.mul(radial_pair))
    wv = wv.add(front.scale(GScalar.of(2)).mul(th_rr))
    wv = wv.sub(front.scale(GScalar.of(2)).mul(_xt(m=-1, re=1)).mul(th_r))
    wv = wv.sub(front.scale(GScalar.of(2)).mul(_xt(m=-1, re=1)).mul(th_ar))
    wv = wv.sub(_xt(k=1, m=-1, h=1, im=4).mul(th_xir))

    om = XiFn({})
    om = om.sub(_xt(k=1, re=1).mul(one_plus).mul(theta))
    om = om.sub(_xt(k=1, re=1).mul(one_plus).mul(th_a))
    drag = _xt(k=1, re=1).mul(s_minus).sub(_xt(k=-1, m=-1, re=1))
    om = om.add(drag.mul(_xt(m=1, re=1)).mul(th_r))
    lift = one_plus.mul(_xt(m=2, re=1)).add(_xt(re=2))
    om = om.add(_xt(k=1, re=1).mul(lift).mul(_xt(m=-1, re=Fraction(1, 2))).mul(th_r))
    om = om.sub(_xt(k=1, n=1, h=1, re=2).mul(th_xi))
    tail = _xt(m=-1, re=1).scale(n_weight).mul(th_rr)
    tail = tail.sub(_xt(m=-2, re=1).scale(n_weight).mul(th_r))
    tail = tail.add(th_rrr)
    om = om.sub(
        _xt(k=1, n=-2, re=1).mul(s_minus).mul(_xt(m=-1, re=Fraction(1, 2))).mul(tail)
    )

    if order is not None:
        return wv.expand_nu(order), om.expand_nu(order)
    return wv, om
