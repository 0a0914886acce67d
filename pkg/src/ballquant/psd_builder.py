"""Builder for iterated semidirect sums of elementary solvable blocks.

A block of size n has basis (H, v_1 .. v_{2(n-1)}, E) with
[H, v] = v, [H, E] = 2E, [v, v'] = Omega(v, v') E and Omega the standard
symplectic matrix in split-half order.  Block r is outermost; an outer
block may act on the V part of any inner block through a prescribed
linear map into the symplectic Lie algebra of that V.  The assembled
structure table goes through full Jacobi validation, so inconsistent
cross actions are rejected at construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .lie_core import LieAlgebra
from .linalg import is_zero_vec, vec_sub
from .scalars import frac_str, parse_frac
from .su1n_model import Su1nModel, adapted_s_basis


@dataclass
class PsdSpec:
    r: int
    n: list
    cross_actions: dict = field(default_factory=dict)


@dataclass
class PsdAlgebra:
    spec: PsdSpec
    algebra: LieAlgebra
    blocks: dict  # block number -> {"H": idx, "V": [idx...], "E": idx}


def _block_roles(nj: int):
    roles = ["H"] + [f"v{i}" for i in range(1, 2 * (nj - 1) + 1)] + ["E"]
    return roles


def build_psd(spec: PsdSpec) -> PsdAlgebra:
    if spec.r < 1 or len(spec.n) != spec.r or any(nj < 1 for nj in spec.n):
        raise ValueError("spec needs r >= 1 and r block sizes >= 1")
    labels = []
    blocks = {}
    for j in range(spec.r, 0, -1):
        nj = spec.n[j - 1]
        h_idx = len(labels)
        labels.append(f"H{j}")
        v_idx = []
        for i in range(1, 2 * (nj - 1) + 1):
            v_idx.append(len(labels))
            labels.append(f"v{j}_{i}")
        e_idx = len(labels)
        labels.append(f"E{j}")
        blocks[j] = {"H": h_idx, "V": v_idx, "E": e_idx}
    dim = len(labels)

    structure = {}

    def put(i, j, k, coeff):
        if i == j:
            raise AssertionError("diagonal bracket entry")
        key, sign = ((i, j), coeff) if i < j else ((j, i), -coeff)
        structure.setdefault(key, {})
        structure[key][k] = structure[key].get(k, Fraction(0)) + sign

    for j in range(1, spec.r + 1):
        b = blocks[j]
        half = len(b["V"]) // 2
        for v in b["V"]:
            put(b["H"], v, v, Fraction(1))
        put(b["H"], b["E"], b["E"], Fraction(2))
        for a in range(half):
            put(b["V"][a], b["V"][half + a], b["E"], Fraction(1))

    for (j, k), maps in (spec.cross_actions or {}).items():
        if not (1 <= j < k <= spec.r):
            raise ValueError(f"cross action {(j, k)} must map an outer block to an inner one")
        inner = blocks[j]
        nv = len(inner["V"])
        outer_roles = _block_roles(spec.n[k - 1])
        for role, mat in maps.items():
            if role not in outer_roles:
                raise ValueError(f"unknown role {role!r} in block {k}")
            if len(mat) != nv or any(len(row) != nv for row in mat):
                raise ValueError("cross action matrix has the wrong shape")
            src = blocks[k][role[0].upper()] if role in ("H", "E") else blocks[k]["V"][int(role[1:]) - 1]
            for col, v in enumerate(inner["V"]):
                for row in range(nv):
                    c = Fraction(mat[row][col])
                    if c:
                        put(src, v, inner["V"][row], c)

    algebra = LieAlgebra(dim, labels, structure)
    return PsdAlgebra(spec, algebra, blocks)


def psd_spec_to_json(spec: PsdSpec) -> str:
    actions = []
    for (j, k) in sorted(spec.cross_actions or {}):
        maps = {
            role: [[frac_str(Fraction(x)) for x in row] for row in mat]
            for role, mat in sorted(spec.cross_actions[(j, k)].items())
        }
        actions.append({"inner": j, "outer": k, "maps": maps})
    return json.dumps({"r": spec.r, "n": list(spec.n), "cross_actions": actions}, sort_keys=True)


def psd_spec_from_json(blob: str) -> PsdSpec:
    data = json.loads(blob)
    actions = {}
    for item in data.get("cross_actions", []):
        maps = {
            role: [[parse_frac(x) for x in row] for row in mat]
            for role, mat in item["maps"].items()
        }
        actions[(item["inner"], item["outer"])] = maps
    return PsdSpec(data["r"], list(data["n"]), actions)


@dataclass
class MatchReport:
    ok: bool
    checked: int
    failures: list


def match_iwasawa(psd: PsdAlgebra, model: Su1nModel) -> MatchReport:
    """Match a single block against the solvable part of the ball model.

    Maps H to the restricted-root generator, the block V to the
    symplectic chart basis of the short root space and E to the
    normalized top root vector, then compares every structure constant.
    """
    if psd.spec.r != 1 or psd.spec.n != [model.N]:
        return MatchReport(False, 0, [("shape", psd.spec.r, psd.spec.n, model.N)])
    H, fs, E = adapted_s_basis(model)
    images = [H] + fs + [E]
    g, s = psd.algebra, model.algebra
    failures = []
    checked = 0
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            checked += 1
            lhs = s.bracket(images[i], images[j])
            coeffs = g.bracket(g.basis_vector(i), g.basis_vector(j))
            rhs = [Fraction(0)] * s.dim
            for t, c in enumerate(coeffs):
                if c:
                    rhs = [r + c * x for r, x in zip(rhs, images[t])]
            if not is_zero_vec(vec_sub(lhs, rhs)):
                failures.append((g.labels[i], g.labels[j]))
    return MatchReport(not failures, checked, failures)
