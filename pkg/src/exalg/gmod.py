"""
Finitely generated graded right modules over the exterior algebra.

A module is a graded dimension vector plus, for every generator x_i and
every degree d, the matrix of right multiplication M_d -> M_{d+1} in the
row-vector convention (v acting by v @ X_i[d]).  The exterior relations
become matrix identities:

    X_i[d] @ X_i[d+1] = 0
    X_i[d] @ X_j[d+1] + X_j[d] @ X_i[d+1] = 0   (i != j)

Degree-zero homomorphisms are per-degree blocks commuting with every
action matrix.  The Hom solver sweeps the grading one degree at a time,
carrying a parametrized partial solution, which keeps every elimination
at per-degree size instead of one monolithic kernel computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import exterior, linalg
from .linalg import (
    Subspace,
    kernel_basis,
    left_kernel_basis,
    matmul_mod,
    rref,
    subspace_from_rows,
    zero_subspace,
    zeros,
)


class ModulusMismatch(ValueError):
    pass


def _check_compatible(a: "GradedModule", b: "GradedModule") -> None:
    if a.p != b.p:
        raise ModulusMismatch(f"moduli differ: {a.p} vs {b.p}")
    if a.n_plus_1 != b.n_plus_1:
        raise ValueError(f"variable counts differ: {a.n_plus_1} vs {b.n_plus_1}")


class GradedModule:
    """Graded dimensions plus per-degree right-action matrices."""

    def __init__(self, n_plus_1: int, p: int, dims: dict[int, int], actions):
        self.n_plus_1 = int(n_plus_1)
        self.p = int(p)
        if self.p < 5 or not linalg.is_prime(self.p):
            raise ValueError(f"modulus must be a prime >= 5, got {self.p}")
        self.dims = {int(d): int(c) for d, c in dims.items() if int(c) > 0}
        acts: list[dict[int, np.ndarray]] = []
        for i in range(self.n_plus_1):
            given = actions[i] if i < len(actions) else {}
            block: dict[int, np.ndarray] = {}
            for d, mat in given.items():
                d = int(d)
                rows = self.dims.get(d, 0)
                cols = self.dims.get(d + 1, 0)
                m = np.asarray(mat, dtype=np.int64) % self.p
                if m.shape != (rows, cols):
                    raise ValueError(
                        f"action x_{i} at degree {d}: shape {m.shape}, expected {(rows, cols)}"
                    )
                if rows and cols:
                    block[d] = m
            acts.append(block)
        self.actions = acts

    # -- basic accessors -------------------------------------------------

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def min_deg(self) -> int | None:
        return min(self.dims) if self.dims else None

    @property
    def max_deg(self) -> int | None:
        return max(self.dims) if self.dims else None

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def action(self, i: int, d: int) -> np.ndarray:
        got = self.actions[i].get(d)
        if got is not None:
            return got
        return zeros(self.dim(d), self.dim(d + 1))

    def form_action(self, form, d: int) -> np.ndarray:
        """Right multiplication by the linear form sum_i form[i] x_i."""
        out = zeros(self.dim(d), self.dim(d + 1))
        for i, c in enumerate(form):
            c = int(c) % self.p
            if c:
                out = (out + c * self.action(i, d)) % self.p
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedModule):
            return NotImplemented
        if (self.n_plus_1, self.p, self.dims) != (other.n_plus_1, other.p, other.dims):
            return False
        for i in range(self.n_plus_1):
            for d in self.dims:
                if not np.array_equal(self.action(i, d), other.action(i, d)):
                    return False
        return True

    def __repr__(self) -> str:
        return f"GradedModule(n_plus_1={self.n_plus_1}, dims={dict(sorted(self.dims.items()))})"


@dataclass
class ModuleMap:
    """Degree-zero homomorphism: one block per degree, row-vector action."""

    source: GradedModule
    target: GradedModule
    blocks: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        _check_compatible(self.source, self.target)
        norm: dict[int, np.ndarray] = {}
        for d, mat in self.blocks.items():
            d = int(d)
            rows = self.source.dim(d)
            cols = self.target.dim(d)
            m = np.asarray(mat, dtype=np.int64) % self.source.p
            if m.shape != (rows, cols):
                raise ValueError(f"map block at degree {d}: shape {m.shape} != {(rows, cols)}")
            if rows and cols:
                norm[d] = m
        self.blocks = norm

    def block(self, d: int) -> np.ndarray:
        got = self.blocks.get(d)
        if got is not None:
            return got
        return zeros(self.source.dim(d), self.target.dim(d))

    def is_zero(self) -> bool:
        return all(not b.any() for b in self.blocks.values())

    def commutes(self) -> bool:
        p = self.source.p
        for i in range(self.source.n_plus_1):
            for d in set(self.source.dims) | set(self.target.dims):
                lhs = matmul_mod(self.source.action(i, d), self.block(d + 1), p)
                rhs = matmul_mod(self.block(d), self.target.action(i, d), p)
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def apply(self, d: int, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64).reshape(1, -1)
        return matmul_mod(v, self.block(d), self.source.p).ravel()

    def degreewise_bijective(self) -> bool:
        if self.source.dims != self.target.dims:
            return False
        p = self.source.p
        for d, k in self.source.dims.items():
            if rref(self.block(d), p)[0] != k:
                return False
        return True


def map_compose(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    """First f, then g (row-vector order)."""
    if f.target is not g.source and f.target.dims != g.source.dims:
        raise ValueError("map composition mismatch")
    p = f.source.p
    blocks = {}
    for d in f.source.dims:
        if g.target.dim(d):
            blocks[d] = matmul_mod(f.block(d), g.block(d), p)
    return ModuleMap(f.source, g.target, blocks)


def map_add(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    p = f.source.p
    blocks = {d: (f.block(d) + g.block(d)) % p for d in set(f.blocks) | set(g.blocks)}
    return ModuleMap(f.source, f.target, blocks)


def map_scale(c: int, f: ModuleMap) -> ModuleMap:
    p = f.source.p
    return ModuleMap(f.source, f.target, {d: (c * b) % p for d, b in f.blocks.items()})


def identity_map(m: GradedModule) -> ModuleMap:
    return ModuleMap(m, m, {d: linalg.identity(k) for d, k in m.dims.items()})


def zero_map(a: GradedModule, b: GradedModule) -> ModuleMap:
    return ModuleMap(a, b, {})


# -- constructors ---------------------------------------------------------


def zero_module(n_plus_1: int, p: int) -> GradedModule:
    return GradedModule(n_plus_1, p, {}, [{} for _ in range(n_plus_1)])


def free_module(n_plus_1: int, p: int, generator_degrees) -> GradedModule:
    """Direct sum of one rank-one free module per listed generator degree."""
    gens = sorted(int(g) for g in generator_degrees)
    if not gens:
        return zero_module(n_plus_1, p)
    gen_mats = exterior.generator_matrices(n_plus_1, p)
    dims: dict[int, int] = {}
    for g in gens:
        for j in range(n_plus_1 + 1):
            dims[g + j] = dims.get(g + j, 0) + comb(n_plus_1, j)
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(n_plus_1)]
    lo, hi = gens[0], gens[-1] + n_plus_1
    for i in range(n_plus_1):
        for d in range(lo, hi):
            rows = dims.get(d, 0)
            cols = dims.get(d + 1, 0)
            if not rows or not cols:
                continue
            mat = zeros(rows, cols)
            r0 = 0
            c0 = 0
            for g in gens:
                br = exterior.algebra_dim(n_plus_1, d - g)
                bc = exterior.algebra_dim(n_plus_1, d + 1 - g)
                if br and bc:
                    mat[r0 : r0 + br, c0 : c0 + bc] = gen_mats[i][d - g]
                r0 += br
                c0 += bc
            actions[i][d] = mat
    return GradedModule(n_plus_1, p, dims, actions)


def free_basis_labels(n_plus_1: int, generator_degrees, degree: int):
    """(generator index, monomial) labels matching free_module's basis order."""
    gens = sorted(int(g) for g in generator_degrees)
    out = []
    for k, g in enumerate(gens):
        for mon in exterior.basis_of_degree(n_plus_1, degree - g):
            out.append((k, mon))
    return out


def simple_module(n_plus_1: int, p: int, degree: int = 0) -> GradedModule:
    """The one-dimensional module concentrated in a single degree."""
    return GradedModule(n_plus_1, p, {degree: 1}, [{} for _ in range(n_plus_1)])


# -- validation -----------------------------------------------------------


def validate(m: GradedModule) -> list[str]:
    """Check the graded-module axioms; returns one message per violation."""
    problems: list[str] = []
    p = m.p
    for d, c in m.dims.items():
        if c < 0:
            problems.append(f"negative dimension {c} in degree {d}")
    for i in range(m.n_plus_1):
        for d, mat in m.actions[i].items():
            if mat.min(initial=0) < 0 or mat.max(initial=0) >= p:
                problems.append(f"entries out of range in action x_{i} at degree {d}")
    degs = m.degrees
    for d in degs:
        for i in range(m.n_plus_1):
            sq = matmul_mod(m.action(i, d), m.action(i, d + 1), p)
            if sq.any():
                problems.append(f"square-zero violated: (i={i}, j={i}, d={d})")
        for i in range(m.n_plus_1):
            for j in range(i + 1, m.n_plus_1):
                anti = (
                    matmul_mod(m.action(i, d), m.action(j, d + 1), p)
                    + matmul_mod(m.action(j, d), m.action(i, d + 1), p)
                ) % p
                if anti.any():
                    problems.append(f"anticommutation violated: (i={i}, j={j}, d={d})")
    return problems


def is_square_zero(m: GradedModule) -> bool:
    """True when every length-two product of action matrices vanishes."""
    for d in m.degrees:
        for i in range(m.n_plus_1):
            for j in range(m.n_plus_1):
                if matmul_mod(m.action(i, d), m.action(j, d + 1), m.p).any():
                    return False
    return True


# -- structural operations -------------------------------------------------


def shift(m: GradedModule, i: int) -> GradedModule:
    """Graded shift: shift(m, i) has degree-j part equal to m's degree i+j."""
    if i == 0:
        return m
    dims = {d - i: c for d, c in m.dims.items()}
    actions = [{d - i: mat for d, mat in m.actions[k].items()} for k in range(m.n_plus_1)]
    return GradedModule(m.n_plus_1, m.p, dims, actions)


def dual(m: GradedModule) -> GradedModule:
    """Graded dual: dimensions reflect, actions transpose.

    The convention X'_i[-d-1] = transpose(X_i[d]) keeps all module axioms
    (transposing reverses products, and the signless identities are
    symmetric in the two factors), and dual(dual(m)) == m on the nose.
    """
    dims = {-d: c for d, c in m.dims.items()}
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(m.n_plus_1)]
    for i in range(m.n_plus_1):
        for d, mat in m.actions[i].items():
            actions[i][-d - 1] = mat.T
    return GradedModule(m.n_plus_1, m.p, dims, actions)


def dual_map(f: ModuleMap) -> ModuleMap:
    """Contravariant dual of a map: dual(target) -> dual(source)."""
    blocks = {-d: mat.T for d, mat in f.blocks.items()}
    return ModuleMap(dual(f.target), dual(f.source), blocks)


def transport(m: GradedModule, a: np.ndarray) -> GradedModule:
    """Twist by the linear substitution x_i -> sum_j a[i, j] x_j.

    The matrix must be invertible; the result is the same underlying graded
    space with action matrices recombined, and it satisfies the module
    axioms because the exterior relations are GL(V)-equivariant.
    """
    p = m.p
    a = np.asarray(a, dtype=np.int64) % p
    if a.shape != (m.n_plus_1, m.n_plus_1):
        raise ValueError("substitution matrix has wrong shape")
    if rref(a, p)[0] != m.n_plus_1:
        raise ValueError("substitution matrix is singular")
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(m.n_plus_1)]
    for i in range(m.n_plus_1):
        for d in m.degrees:
            if m.dim(d) and m.dim(d + 1):
                actions[i][d] = m.form_action(a[i], d)
    return GradedModule(m.n_plus_1, m.p, dict(m.dims), actions)


def direct_sum(a: GradedModule, b: GradedModule):
    """Block-diagonal sum with the four canonical maps.

    Returns (sum, (incl_a, incl_b), (proj_a, proj_b)).
    """
    _check_compatible(a, b)
    p = a.p
    dims = {d: a.dim(d) + b.dim(d) for d in set(a.dims) | set(b.dims)}
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(a.n_plus_1)]
    for i in range(a.n_plus_1):
        for d in dims:
            rows = dims.get(d, 0)
            cols = dims.get(d + 1, 0)
            if not rows or not cols:
                continue
            mat = zeros(rows, cols)
            mat[: a.dim(d), : a.dim(d + 1)] = a.action(i, d)
            mat[a.dim(d) :, a.dim(d + 1) :] = b.action(i, d)
            actions[i][d] = mat
    total = GradedModule(a.n_plus_1, p, dims, actions)
    inc_a, inc_b, pr_a, pr_b = {}, {}, {}, {}
    for d in dims:
        ia = zeros(a.dim(d), dims[d])
        ia[:, : a.dim(d)] = linalg.identity(a.dim(d))
        ib = zeros(b.dim(d), dims[d])
        ib[:, a.dim(d) :] = linalg.identity(b.dim(d))
        inc_a[d], inc_b[d] = ia, ib
        pr_a[d] = ia.T.copy()
        pr_b[d] = ib.T.copy()
    return (
        total,
        (ModuleMap(a, total, inc_a), ModuleMap(b, total, inc_b)),
        (ModuleMap(total, a, pr_a), ModuleMap(total, b, pr_b)),
    )


def direct_power(m: GradedModule, k: int):
    """k-fold direct sum with inclusion and projection maps per copy."""
    p = m.p
    if k == 0:
        z = zero_module(m.n_plus_1, p)
        return z, [], []
    dims = {d: k * c for d, c in m.dims.items()}
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(m.n_plus_1)]
    eye = np.eye(k, dtype=np.int64)
    for i in range(m.n_plus_1):
        for d, mat in m.actions[i].items():
            actions[i][d] = np.kron(eye, mat)
    total = GradedModule(m.n_plus_1, p, dims, actions)
    incs, projs = [], []
    for c in range(k):
        inc, proj = {}, {}
        for d, cnt in m.dims.items():
            ia = zeros(cnt, k * cnt)
            ia[:, c * cnt : (c + 1) * cnt] = linalg.identity(cnt)
            inc[d] = ia
            proj[d] = ia.T.copy()
        incs.append(ModuleMap(m, total, inc))
        projs.append(ModuleMap(total, m, proj))
    return total, incs, projs


def _closure_subspaces(m: GradedModule, seeds: dict[int, list[np.ndarray]]) -> dict[int, Subspace]:
    """Smallest action-stable graded subspace containing the seed vectors."""
    p = m.p
    rows: dict[int, list[np.ndarray]] = {d: [np.asarray(v) % p for v in vs] for d, vs in seeds.items()}
    if not rows:
        return {}
    lo = min(rows)
    hi = m.max_deg if m.dims else lo
    spans: dict[int, Subspace] = {}
    for d in range(lo, hi + 1):
        here = rows.get(d, [])
        mat = np.array(here, dtype=np.int64).reshape(len(here), m.dim(d))
        spans[d] = subspace_from_rows(mat, m.dim(d), p)
        if spans[d].dim and m.dim(d + 1):
            nxt = rows.setdefault(d + 1, [])
            for i in range(m.n_plus_1):
                img = matmul_mod(spans[d].basis, m.action(i, d), p)
                nxt.extend(img)
    return {d: s for d, s in spans.items() if s.dim}


def submodule_from_subspaces(m: GradedModule, spans: dict[int, Subspace]):
    """The module structure on an action-stable family of subspaces."""
    p = m.p
    dims = {d: s.dim for d, s in spans.items() if s.dim}
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(m.n_plus_1)]
    blocks = {}
    for d, s in spans.items():
        if not s.dim:
            continue
        blocks[d] = s.basis
        nxt = spans.get(d + 1)
        if nxt is None or not nxt.dim:
            continue
        piv = nxt.pivots
        for i in range(m.n_plus_1):
            img = matmul_mod(s.basis, m.action(i, d), p)
            actions[i][d] = img[:, piv]
    sub = GradedModule(m.n_plus_1, p, dims, actions)
    incl = ModuleMap(sub, m, blocks)
    return sub, incl


def quotient_by_subspaces(m: GradedModule, spans: dict[int, Subspace]):
    """Quotient by an action-stable family of subspaces, with projection."""
    p = m.p
    dims: dict[int, int] = {}
    proj_blocks: dict[int, np.ndarray] = {}
    nonpiv: dict[int, list[int]] = {}
    for d, total in m.dims.items():
        s = spans.get(d)
        r = s.dim if s else 0
        q = total - r
        dims[d] = q
        piv = s.pivots if s and s.dim else []
        npv = [c for c in range(total) if c not in set(piv)]
        nonpiv[d] = npv
        proj = linalg.identity(total)
        if r:
            e = zeros(total, r)
            for k, c in enumerate(piv):
                e[c, k] = 1
            proj = (proj - matmul_mod(e, s.basis, p)) % p
        proj_blocks[d] = proj[:, npv]
    actions: list[dict[int, np.ndarray]] = [{} for _ in range(m.n_plus_1)]
    for i in range(m.n_plus_1):
        for d in m.degrees:
            if dims.get(d, 0) and dims.get(d + 1, 0):
                sect = m.action(i, d)[nonpiv[d], :]
                actions[i][d] = matmul_mod(sect, proj_blocks[d + 1], p)
    quot = GradedModule(m.n_plus_1, p, {d: c for d, c in dims.items() if c}, actions)
    proj = ModuleMap(m, quot, {d: b for d, b in proj_blocks.items() if b.size})
    return quot, proj


def sub_quotient(m: GradedModule, generators: list[tuple[int, np.ndarray]]):
    """Submodule generated by homogeneous vectors, plus the quotient.

    Returns (sub, incl, quot, proj) with proj∘incl = 0 and degree-wise
    dimensions adding up.
    """
    seeds: dict[int, list[np.ndarray]] = {}
    for d, v in generators:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (m.dim(d),):
            raise ValueError(f"generator in degree {d} has wrong length")
        seeds.setdefault(int(d), []).append(v)
    spans = _closure_subspaces(m, seeds)
    sub, incl = submodule_from_subspaces(m, spans)
    quot, proj = quotient_by_subspaces(m, spans)
    return sub, incl, quot, proj


def radical_subspaces(m: GradedModule) -> dict[int, Subspace]:
    """The graded radical m·J as one subspace per degree."""
    p = m.p
    out: dict[int, Subspace] = {}
    for d in m.degrees:
        rows = []
        prev = m.dim(d - 1)
        if prev:
            for i in range(m.n_plus_1):
                rows.append(m.action(i, d - 1))
        if rows:
            out[d] = subspace_from_rows(np.vstack(rows), m.dim(d), p)
        else:
            out[d] = zero_subspace(m.dim(d), p)
    return out


def socle_radical(m: GradedModule):
    """(socle, radical, top_dims): kernels, images, and generator counts."""
    p = m.p
    socle: dict[int, Subspace] = {}
    for d in m.degrees:
        nxt = m.dim(d + 1)
        if nxt == 0:
            socle[d] = linalg.full_subspace(m.dim(d), p)
            continue
        stacked = np.hstack([m.action(i, d) for i in range(m.n_plus_1)])
        socle[d] = left_kernel_basis(stacked, p)
    radical = radical_subspaces(m)
    top = {d: m.dim(d) - radical[d].dim for d in m.degrees}
    return socle, radical, {d: c for d, c in top.items() if c}


def top_generators(m: GradedModule) -> list[tuple[int, np.ndarray]]:
    """A deterministic choice of minimal generators: one vector per top slot."""
    _, radical, top = socle_radical(m)
    gens: list[tuple[int, np.ndarray]] = []
    for d in sorted(top):
        piv = set(radical[d].pivots) if radical[d].dim else set()
        for c in range(m.dim(d)):
            if c not in piv:
                v = zeros(1, m.dim(d))[0]
                v[c] = 1
                gens.append((d, v))
    return gens


def square_truncate(m: GradedModule) -> GradedModule:
    """Quotient by all products of two radical layers (radical-square zero)."""
    p = m.p
    spans: dict[int, Subspace] = {}
    for d in m.degrees:
        rows = []
        for i in range(m.n_plus_1):
            for j in range(m.n_plus_1):
                a = m.action(i, d - 2)
                b = m.action(j, d - 1)
                if a.size and b.size:
                    rows.append(matmul_mod(a, b, p))
        if rows:
            spans[d] = subspace_from_rows(np.vstack(rows), m.dim(d), p)
    quot, _ = quotient_by_subspaces(m, spans)
    return quot


# -- Hom spaces ------------------------------------------------------------


def _blocks_layout(a: GradedModule, b: GradedModule) -> list[int]:
    return sorted(d for d in a.dims if b.dim(d))


def flatten_map(f: ModuleMap) -> np.ndarray:
    """Coordinates of a map in the canonical (degree-ascending) layout."""
    layout = _blocks_layout(f.source, f.target)
    if not layout:
        return zeros(1, 0)[0]
    return np.concatenate([f.block(d).ravel() for d in layout])


def map_from_flat(a: GradedModule, b: GradedModule, vec: np.ndarray) -> ModuleMap:
    layout = _blocks_layout(a, b)
    blocks = {}
    ofs = 0
    for d in layout:
        r, c = a.dim(d), b.dim(d)
        blocks[d] = np.asarray(vec[ofs : ofs + r * c], dtype=np.int64).reshape(r, c)
        ofs += r * c
    return ModuleMap(a, b, blocks)


def hom_space_dim_layout(a: GradedModule, b: GradedModule) -> int:
    return sum(a.dim(d) * b.dim(d) for d in _blocks_layout(a, b))


def _hom_space_dense(a: GradedModule, b: GradedModule) -> list[ModuleMap]:
    """Reference Hom solver: one kernel computation on the full system."""
    p = a.p
    layout = _blocks_layout(a, b)
    total = hom_space_dim_layout(a, b)
    if total == 0:
        return []
    offset = {}
    ofs = 0
    for d in layout:
        offset[d] = ofs
        ofs += a.dim(d) * b.dim(d)
    rows = []
    for i in range(a.n_plus_1):
        for d in set(a.dims):
            md, md1 = a.dim(d), a.dim(d + 1)
            nd, nd1 = b.dim(d), b.dim(d + 1)
            if md == 0 or nd1 == 0:
                continue
            eq = zeros(md * nd1, total)
            if md1 and (d + 1) in offset:
                o = offset[d + 1]
                eq[:, o : o + md1 * nd1] = np.kron(a.action(i, d), linalg.identity(nd1))
            if nd and d in offset:
                o = offset[d]
                eq[:, o : o + md * nd] = (
                    eq[:, o : o + md * nd] - np.kron(linalg.identity(md), b.action(i, d).T)
                ) % p
            if eq.any():
                rows.append(eq)
    if not rows:
        system = zeros(0, total)
    else:
        system = np.vstack(rows)
    ker = kernel_basis(system, p)
    return [map_from_flat(a, b, v) for v in ker.basis]


def _contract_params(tensors: dict[int, np.ndarray], basis: np.ndarray, p: int) -> dict[int, np.ndarray]:
    out = {}
    for d, t in tensors.items():
        tt, r, c = t.shape
        flat = matmul_mod(basis, t.reshape(tt, r * c), p)
        out[d] = flat.reshape(basis.shape[0], r, c)
    return out


def hom_space_maps(a: GradedModule, b: GradedModule) -> list[ModuleMap]:
    """Basis of the degree-zero Hom space, canonical up to the RREF layout.

    Sweeps degrees upward carrying a parametrized partial solution; each
    step solves one per-degree linear system, so the work stays at block
    scale.  The output equals the dense reference solver's basis exactly.
    """
    _check_compatible(a, b)
    p = a.p
    if a.is_zero() or b.is_zero():
        return []
    lo = min(min(a.dims), min(b.dims))
    hi = max(max(a.dims), max(b.dims))
    nparams = 0
    tensors: dict[int, np.ndarray] = {}  # degree -> (T, m_d, n_d)

    def add_free(d: int) -> None:
        nonlocal nparams, tensors
        md, nd = a.dim(d), b.dim(d)
        fresh = md * nd
        old = nparams
        nparams += fresh
        for e, t in list(tensors.items()):
            grown = np.zeros((nparams,) + t.shape[1:], dtype=np.int64)
            grown[:old] = t
            tensors[e] = grown
        block = np.zeros((nparams, md, nd), dtype=np.int64)
        for k in range(fresh):
            block[old + k].flat[k] = 1
        tensors[d] = block

    def cut(constraint: np.ndarray) -> None:
        # constraint is (T, q); keep the parameter combinations annihilating it
        nonlocal nparams, tensors
        if not constraint.any():
            return
        keep = left_kernel_basis(constraint, p)
        nparams = keep.dim
        tensors = _contract_params(tensors, keep.basis, p)

    for d in range(lo, hi + 2):
        md_prev, md = a.dim(d - 1), a.dim(d)
        nd_prev, nd = b.dim(d - 1), b.dim(d)
        has_constraints = md_prev > 0 and nd > 0
        if not has_constraints:
            if md and nd:
                add_free(d)
            continue
        # incoming equations: vstack_i X^a_i[d-1] @ B[d] = vstack_i B[d-1] @ X^b_i[d-1]
        rows_a = (a.n_plus_1) * md_prev

        def incoming_rhs() -> np.ndarray:
            if not (nd_prev and (d - 1) in tensors):
                return np.zeros((nparams, rows_a, nd), dtype=np.int64)
            tprev = tensors[d - 1]
            parts = []
            for i in range(a.n_plus_1):
                flat = matmul_mod(tprev.reshape(-1, nd_prev), b.action(i, d - 1), p)
                parts.append(flat.reshape(nparams, md_prev, nd))
            return np.concatenate(parts, axis=1)

        rhs = incoming_rhs()
        if md == 0:
            cut(rhs.reshape(nparams, rows_a * nd))
            continue
        amat = np.vstack([a.action(i, d - 1) for i in range(a.n_plus_1)])
        aug = np.hstack([amat, linalg.identity(rows_a)])
        r_aug, red, piv = rref(aug, p)
        rank_a = sum(1 for c in piv if c < md)
        ea = red[:rank_a, :md]
        pivots_a = [c for c in piv if c < md]
        u_top = red[:rank_a, md:]
        u_bot = red[rank_a:r_aug, md:]
        if u_bot.shape[0] and nparams:
            cons = matmul_mod(u_bot, rhs.transpose(1, 0, 2).reshape(rows_a, nparams * nd), p)
            cons = cons.reshape(u_bot.shape[0], nparams, nd).transpose(1, 0, 2)
            cut(cons.reshape(nparams, u_bot.shape[0] * nd))
            rhs = incoming_rhs()
        # particular solutions for surviving parameters
        part = np.zeros((nparams, md, nd), dtype=np.int64)
        if rank_a:
            ur = matmul_mod(u_top, rhs.transpose(1, 0, 2).reshape(rows_a, nparams * nd), p)
            ur = ur.reshape(rank_a, nparams, nd).transpose(1, 0, 2)
            part[:, pivots_a, :] = ur
        tensors[d] = part
        free_rows = [r for r in range(md) if r not in set(pivots_a)]
        if free_rows:
            old = nparams
            fresh = len(free_rows) * nd
            nparams += fresh
            for e, t in list(tensors.items()):
                grown = np.zeros((nparams,) + t.shape[1:], dtype=np.int64)
                grown[:old] = t
                tensors[e] = grown
            block = tensors[d]
            k = old
            for fi, fr in enumerate(free_rows):
                for c in range(nd):
                    block[k, fr, c] = 1
                    if rank_a:
                        block[k, pivots_a, c] = (-ea[:, fr]) % p
                    k += 1
    if nparams == 0:
        return []
    # canonicalize: RREF of the flattened solution space
    layout = _blocks_layout(a, b)
    flat = np.concatenate(
        [tensors[d].reshape(nparams, -1) for d in layout], axis=1
    ) if layout else zeros(nparams, 0)
    rank, red, _ = rref(flat, p)
    return [map_from_flat(a, b, red[k]) for k in range(rank)]


def hom_space_dim(a: GradedModule, b: GradedModule) -> int:
    return len(hom_space_maps(a, b))


# -- isomorphism testing ----------------------------------------------------


@dataclass
class IsoVerdict:
    kind: str  # "ISO" | "NOT_ISO" | "UNDECIDED"
    certificate: ModuleMap | None = None
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.kind == "ISO"


def iso_probable(a: GradedModule, b: GradedModule, seed: int = 0, trials: int = 24) -> IsoVerdict:
    """Randomized isomorphism test with a verified certificate.

    NOT_ISO is returned only with a structural witness (graded dimensions
    differ, or the Hom space is zero); ISO only with an explicit invertible
    commuting map.  Anything else is UNDECIDED after the given number of
    random samples from the Hom space.
    """
    _check_compatible(a, b)
    if a.dims != b.dims:
        bad = sorted(set(a.dims) ^ set(b.dims) | {d for d in a.dims if a.dim(d) != b.dim(d)})
        return IsoVerdict("NOT_ISO", witness=f"graded dimensions differ at degree {bad[0]}")
    if a.is_zero():
        return IsoVerdict("ISO", certificate=zero_map(a, b))
    basis = hom_space_maps(a, b)
    if not basis:
        return IsoVerdict("NOT_ISO", witness="Hom space is zero")
    p = a.p
    rng = np.random.default_rng(seed)
    flats = np.stack([flatten_map(f) for f in basis])
    for _ in range(max(1, trials)):
        coeffs = rng.integers(0, p, len(basis), dtype=np.int64)
        vec = matmul_mod(coeffs.reshape(1, -1), flats, p).ravel()
        f = map_from_flat(a, b, vec)
        if f.degreewise_bijective():
            if not f.commutes():  # pragma: no cover - linear combos always commute
                continue
            return IsoVerdict("ISO", certificate=f)
    return IsoVerdict("UNDECIDED")
