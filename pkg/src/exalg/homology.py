"""
Homological operators: minimal projective covers, syzygies and cosyzygies,
Betti tables, linearity and weak-Koszulness tests, regular sequences,
complexity estimates, and the translate Omega^2(-)(n+1).

Everything is exact.  Projective covers choose generators lifting the
standard complement of the radical, so resolutions are minimal by
construction and syzygies never acquire free summands.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gmod
from .gmod import GradedModule, ModuleMap
from .linalg import (
    Subspace,
    full_subspace,
    left_kernel_basis,
    matmul_mod,
    rref,
    solve,
    subspace_from_rows,
    subspace_intersection,
    zero_subspace,
    zeros,
)

DEFAULT_DEPTH = 12
REGULAR_SEARCH_TRIALS = 64


class FreeModuleError(ValueError):
    """Raised when an operation requires a module with no free behaviour."""


def generator_degrees(m: GradedModule) -> list[int]:
    """Degrees of a minimal generating set, with multiplicity, sorted."""
    _, _, top = gmod.socle_radical(m)
    out: list[int] = []
    for d in sorted(top):
        out.extend([d] * top[d])
    return out


def free_map_from_generators(
    free: GradedModule,
    gen_degrees: list[int],
    target: GradedModule,
    images: list[np.ndarray],
) -> ModuleMap:
    """The unique module map from a free module sending generators to images.

    The free basis is indexed by (generator, monomial); a monomial row is
    the row of its largest-variable predecessor pushed through that
    variable's action, which avoids any sign bookkeeping.
    """
    p = free.p
    blocks: dict[int, np.ndarray] = {}
    prev_rows: np.ndarray | None = None
    prev_index: dict[tuple[int, tuple[int, ...]], int] = {}
    for e in sorted(free.dims):
        labels = gmod.free_basis_labels(free.n_plus_1, gen_degrees, e)
        rows = zeros(len(labels), target.dim(e))
        by_last: dict[int, tuple[list[int], list[int]]] = {}
        for r, (k, mon) in enumerate(labels):
            if not mon:
                if target.dim(e):
                    rows[r] = np.asarray(images[k], dtype=np.int64) % p
            else:
                dst, src = by_last.setdefault(mon[-1], ([], []))
                dst.append(r)
                src.append(prev_index[(k, mon[:-1])])
        if target.dim(e):
            for i, (dst, src) in by_last.items():
                if prev_rows is None or prev_rows.shape[1] == 0:
                    continue
                rows[dst] = matmul_mod(prev_rows[src], target.action(i, e - 1), p)
        blocks[e] = rows
        prev_rows = rows if target.dim(e) else zeros(len(labels), target.dim(e))
        prev_index = {lab: r for r, lab in enumerate(labels)}
    return ModuleMap(free, target, blocks)


def projective_cover(m: GradedModule) -> tuple[GradedModule, ModuleMap]:
    """Minimal free cover: one generator per basis slot of m modulo radical."""
    if m.is_zero():
        z = gmod.zero_module(m.n_plus_1, m.p)
        return z, gmod.zero_map(z, m)
    gens = gmod.top_generators(m)
    degrees = [d for d, _ in gens]
    cover = gmod.free_module(m.n_plus_1, m.p, degrees)
    epi = free_map_from_generators(cover, degrees, m, [v for _, v in gens])
    return cover, epi


def kernel_submodule(f: ModuleMap) -> tuple[GradedModule, ModuleMap]:
    """The kernel of a module map with its inclusion."""
    spans: dict[int, Subspace] = {}
    for d in f.source.degrees:
        spans[d] = left_kernel_basis(f.block(d), f.source.p)
    sub, incl = gmod.submodule_from_subspaces(f.source, spans)
    return sub, incl


def syzygy_step(m: GradedModule) -> tuple[GradedModule, ModuleMap, GradedModule, ModuleMap]:
    """(syzygy, inclusion, cover, epi) for one minimal cover of m."""
    cover, epi = projective_cover(m)
    syz, incl = kernel_submodule(epi)
    return syz, incl, cover, epi


def syzygy(m: GradedModule, k: int = 1) -> GradedModule:
    """k-th syzygy by iterated minimal covers; free modules go to zero."""
    if k < 1:
        raise ValueError("syzygy order must be at least 1")
    cur = m
    for _ in range(k):
        cur = syzygy_step(cur)[0]
    return cur


def is_free(m: GradedModule) -> bool:
    return syzygy_step(m)[0].is_zero()


def injective_envelope(m: GradedModule) -> tuple[GradedModule, ModuleMap]:
    """Minimal injective envelope, built as the dual of a minimal cover."""
    cover, epi = projective_cover(gmod.dual(m))
    env = gmod.dual(cover)
    mono_raw = gmod.dual_map(epi)
    mono = ModuleMap(m, env, mono_raw.blocks)
    return env, mono


def cosyzygy_step(m: GradedModule) -> tuple[GradedModule, ModuleMap]:
    """(cosyzygy, projection): cokernel of the minimal injective envelope."""
    env, mono = injective_envelope(m)
    spans: dict[int, Subspace] = {}
    for d in env.degrees:
        spans[d] = subspace_from_rows(mono.block(d), env.dim(d), m.p)
    quot, proj = gmod.quotient_by_subspaces(env, spans)
    return quot, proj


def cosyzygy(m: GradedModule, k: int = 1) -> GradedModule:
    """k-th cosyzygy; any free summand disappears into the envelope."""
    if k < 1:
        raise ValueError("cosyzygy order must be at least 1")
    cur = m
    for _ in range(k):
        cur = cosyzygy_step(cur)[0]
    return cur


@dataclass
class BettiTable:
    """Generator degrees of each term of a minimal free resolution."""

    depth: int
    rows: list[list[int]]  # rows[i] = sorted degrees of the i-th free term

    @property
    def betti_numbers(self) -> list[int]:
        return [len(r) for r in self.rows]

    def degree_counts(self, i: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.rows[i]:
            out[d] = out.get(d, 0) + 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "betti": self.betti_numbers,
            "rows": [sorted(r) for r in self.rows],
        }

    def to_text(self) -> str:
        """Aligned table: column i, row r shows the rank of F^i in degree r+i."""
        if not self.rows:
            return "(empty)"
        cols = len(self.rows)
        slopes = sorted(
            {d - i for i, row in enumerate(self.rows) for d in row}
        ) or [0]
        header = ["      "] + [f"{i:>6}" for i in range(cols)]
        lines = ["".join(header)]
        totals = ["total:"] + [f"{len(row):>6}" for row in self.rows]
        lines.append("".join(totals))
        for s in slopes:
            cells = [f"{s:>5}:"]
            for i in range(cols):
                c = self.degree_counts(i).get(s + i, 0)
                cells.append(f"{c if c else '.':>6}")
            lines.append("".join(cells))
        return "\n".join(lines)


def minimal_resolution(m: GradedModule, depth: int = DEFAULT_DEPTH) -> BettiTable:
    """Generator degrees of the minimal free resolution up to F^depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rows: list[list[int]] = []
    cur = m
    for _ in range(depth + 1):
        rows.append(generator_degrees(cur))
        if cur.is_zero():
            continue
        cur = syzygy_step(cur)[0]
    return BettiTable(depth, rows)


def resolution_differentials(m: GradedModule, depth: int) -> list[ModuleMap]:
    """The chain maps F^{i+1} -> F^i of the minimal resolution."""
    out: list[ModuleMap] = []
    syz, incl, _, _ = syzygy_step(m)
    for _ in range(depth):
        syz2, incl2, _, epi2 = syzygy_step(syz)
        out.append(gmod.map_compose(epi2, incl))
        incl = incl2
        syz = syz2
    return out


def is_linear(m: GradedModule, depth: int = DEFAULT_DEPTH) -> bool:
    """True when row i of the resolution sits entirely in degree i.

    Strict: a module generated away from degree zero fails; use
    is_shifted_linear to test linearity up to a grading shift.
    """
    if m.is_zero():
        return True
    table = minimal_resolution(m, depth)
    return all(all(d == i for d in row) for i, row in enumerate(table.rows))


def is_shifted_linear(m: GradedModule, depth: int = DEFAULT_DEPTH) -> bool:
    """Linearity after shifting the lowest generators to degree zero."""
    if m.is_zero():
        return True
    return is_linear(gmod.shift(m, m.min_deg), depth)


def lowest_step(m: GradedModule):
    """Split off the submodule generated by the lowest-degree piece.

    Returns (L, incl, N, proj) with N = m/L.
    """
    if m.is_zero():
        raise ValueError("lowest_step of the zero module")
    d0 = m.min_deg
    gens = []
    for c in range(m.dim(d0)):
        v = zeros(1, m.dim(d0))[0]
        v[c] = 1
        gens.append((d0, v))
    sub, incl, quot, proj = gmod.sub_quotient(m, gens)
    return sub, incl, quot, proj


def _radical_power_family(m: GradedModule, spans: dict[int, Subspace]) -> dict[int, Subspace]:
    """One application of the radical to a graded subspace family of m."""
    p = m.p
    out: dict[int, Subspace] = {}
    for d in m.degrees:
        prev = spans.get(d - 1)
        rows = []
        if prev is not None and prev.dim and m.dim(d):
            for i in range(m.n_plus_1):
                rows.append(matmul_mod(prev.basis, m.action(i, d - 1), p))
        if rows:
            out[d] = subspace_from_rows(np.vstack(rows), m.dim(d), p)
        else:
            out[d] = zero_subspace(m.dim(d), p)
    return out


def is_relative_sub(m: GradedModule, incl: ModuleMap) -> bool:
    """Radical-compatibility of a submodule: mJ^k meets it in exactly LJ^k."""
    sub = incl.source
    p = m.p
    m_power = {d: full_subspace(m.dim(d), p) for d in m.degrees}
    l_power = {d: full_subspace(sub.dim(d), p) for d in sub.degrees}
    loewy = (m.max_deg - m.min_deg + 2) if m.dims else 0
    for _ in range(loewy + 1):
        for d in m.degrees:
            lp = l_power.get(d)
            if lp is not None and lp.dim:
                pushed = subspace_from_rows(
                    matmul_mod(lp.basis, incl.block(d), p), m.dim(d), p
                )
            else:
                pushed = zero_subspace(m.dim(d), p)
            image_l = subspace_from_rows(incl.block(d), m.dim(d), p)
            meet = subspace_intersection(m_power[d], image_l)
            if meet != pushed:
                return False
        m_power = _radical_power_family(m, m_power)
        l_power = _radical_power_family(sub, l_power)
    return True


def is_weakly_koszul(m: GradedModule, depth: int = DEFAULT_DEPTH) -> bool:
    """Iterated check: peel lowest-degree layers, each a shifted linear
    module sitting inside via a radical-compatible extension."""
    cur = m
    while not cur.is_zero():
        sub, incl, quot, _ = lowest_step(cur)
        if not is_shifted_linear(sub, depth):
            return False
        if not is_relative_sub(cur, incl):
            return False
        if sub.dims == cur.dims:
            return True
        cur = quot
    return True


def regular_element_test(m: GradedModule, form) -> bool:
    """Exactness of right multiplication by the form, degree by degree."""
    form = np.asarray(form, dtype=np.int64) % m.p
    if not form.any():
        raise ValueError("the zero form is never regular")
    if m.is_zero():
        return True
    lo, hi = m.min_deg, m.max_deg
    prev_rank = 0
    for d in range(lo, hi + 2):
        mat = m.form_action(form, d - 1) if m.dim(d - 1) else zeros(0, m.dim(d))
        img_rank = rref(mat, m.p)[0] if mat.size else 0
        cur = m.form_action(form, d)
        cur_rank = rref(cur, m.p)[0] if cur.size else 0
        ker = m.dim(d) - cur_rank
        if ker != img_rank:
            return False
    return True


def quotient_by_form_image(m: GradedModule, form) -> GradedModule:
    """m / (m·v) for a linear form v; the image family is action-stable."""
    p = m.p
    form = np.asarray(form, dtype=np.int64) % p
    spans: dict[int, Subspace] = {}
    for d in m.degrees:
        mat = m.form_action(form, d - 1) if m.dim(d - 1) else zeros(0, m.dim(d))
        spans[d] = subspace_from_rows(mat, m.dim(d), p)
    quot, _ = gmod.quotient_by_subspaces(m, spans)
    return quot


@dataclass
class ComplexityEstimate:
    """Two independent complexity measurements and their evidence."""

    cx_regseq: int
    cx_betti: int | None  # None means the Betti window did not settle
    depth_used: int
    regular_sequence: list[np.ndarray] = field(default_factory=list)
    betti_numbers: list[int] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.cx_betti is not None and self.cx_betti == self.cx_regseq

    def to_json_dict(self) -> dict:
        return {
            "cx_regseq": self.cx_regseq,
            "cx_betti": self.cx_betti if self.cx_betti is not None else "UNKNOWN",
            "depth_used": self.depth_used,
            "regular_sequence": [[int(x) for x in v] for v in self.regular_sequence],
            "betti": self.betti_numbers,
        }


def _betti_growth_degree(betti: list[int], depth: int, n_plus_1: int) -> int | None:
    window = betti[(depth + 1) // 2 :]
    if len(window) < 2:
        return None
    if all(b == 0 for b in window):
        return 0
    vals = window
    for g in range(n_plus_1):
        if len(vals) < 2:
            return None
        if all(v == vals[0] for v in vals):
            return g + 1
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return None


def complexity(
    m: GradedModule,
    depth: int = DEFAULT_DEPTH,
    seed: int = 0,
    trials: int = REGULAR_SEARCH_TRIALS,
) -> ComplexityEstimate:
    """Complexity via maximal regular sequences and via Betti growth.

    The regular-sequence search is greedy and randomized (seeded): at each
    step it samples linear forms and keeps the first one acting exactly on
    the current quotient.  Over a large field a generic form is regular
    whenever any form is, so the greedy length is the maximal one with
    overwhelming probability.
    """
    n1 = m.n_plus_1
    rng = np.random.default_rng(seed)
    cur = m
    seq: list[np.ndarray] = []
    while len(seq) < n1:
        if cur.is_zero():
            # every form is regular on the zero module
            v = np.zeros(n1, dtype=np.int64)
            v[0] = 1
            seq.append(v)
            continue
        found = None
        for _ in range(trials):
            v = rng.integers(0, m.p, n1, dtype=np.int64)
            if not v.any():
                continue
            if regular_element_test(cur, v):
                found = v
                break
        if found is None:
            break
        seq.append(found)
        cur = quotient_by_form_image(cur, found)
    table = minimal_resolution(m, depth)
    betti = table.betti_numbers
    return ComplexityEstimate(
        cx_regseq=n1 - len(seq),
        cx_betti=_betti_growth_degree(betti, depth, n1),
        depth_used=depth,
        regular_sequence=seq,
        betti_numbers=betti,
    )


def ar_translate(m: GradedModule) -> GradedModule:
    """Omega^2 of the module, shifted by the number of variables."""
    syz1, _, _, _ = syzygy_step(m)
    if syz1.is_zero():
        raise FreeModuleError("translate of a free module is undefined")
    syz2 = syzygy_step(syz1)[0]
    return gmod.shift(syz2, m.n_plus_1)


def lift_through_cover(f: ModuleMap, cover_degrees: list[int], epi: ModuleMap) -> ModuleMap:
    """Lift f through a surjection: f's free source maps into epi's source.

    f's source must be the free module on cover_degrees.  Each generator is
    sent to a solved preimage of its image, then extended freely, so the
    lift is a genuine module map with lift∘epi = f.
    """
    p = f.source.p
    # generators of the free source are exactly the rows with empty monomial
    images_by_slot: list[tuple[int, np.ndarray]] = []
    degrees_sorted = sorted(cover_degrees)
    for d in sorted(set(degrees_sorted)):
        labels = gmod.free_basis_labels(f.source.n_plus_1, degrees_sorted, d)
        for r, (kk, mon) in enumerate(labels):
            if mon:
                continue
            target_vec = f.block(d)[r] if f.source.dim(d) and f.target.dim(d) else zeros(1, f.target.dim(d))[0]
            pre = solve(epi.block(d).T, target_vec, p)
            if pre is None:
                raise ValueError("cannot lift through a non-surjective cover")
            images_by_slot.append((kk, pre))
    images_by_slot.sort(key=lambda t: t[0])
    return free_map_from_generators(
        f.source, degrees_sorted, epi.source, [v for _, v in images_by_slot]
    )


def syzygy_of_ses(incl: ModuleMap, proj: ModuleMap):
    """Induced maps on syzygies of a short exact sequence A -> B -> C.

    Returns (incl_s, proj_s, exact) where exact reports whether the induced
    sequence of syzygies is again short exact degree-wise.
    """
    a, b, c = incl.source, incl.target, proj.target
    p = a.p
    syz_a, incl_a, cover_a, epi_a = syzygy_step(a)
    syz_b, incl_b, cover_b, epi_b = syzygy_step(b)
    syz_c, incl_c, cover_c, epi_c = syzygy_step(c)
    degrees_a = generator_degrees(a)
    degrees_b = generator_degrees(b)
    # lift cover_a -> B through epi_b, and cover_b -> C through epi_c
    lift_ab = lift_through_cover(gmod.map_compose(epi_a, incl), degrees_a, epi_b)
    lift_bc = lift_through_cover(gmod.map_compose(epi_b, proj), degrees_b, epi_c)
    # restrict to kernels
    def restrict(big: ModuleMap, sub_incl: ModuleMap, tgt_sub: GradedModule, tgt_incl: ModuleMap) -> ModuleMap:
        blocks = {}
        for d in sub_incl.source.degrees:
            moved = matmul_mod(sub_incl.block(d), big.block(d), p)
            tgt_basis = tgt_incl.block(d)
            if tgt_sub.dim(d):
                piv = subspace_from_rows(tgt_basis, big.target.dim(d), p).pivots
                blocks[d] = moved[:, piv]
            else:
                if moved.any():
                    raise ValueError("restriction does not land in the target kernel")
        return ModuleMap(sub_incl.source, tgt_sub, blocks)

    incl_s = restrict(lift_ab, incl_a, syz_b, incl_b)
    proj_s = restrict(lift_bc, incl_b, syz_c, incl_c)
    # verify the restriction really lands where claimed
    for d in syz_a.degrees:
        lhs = matmul_mod(incl_a.block(d), lift_ab.block(d), p)
        rhs = matmul_mod(incl_s.block(d), incl_b.block(d), p)
        if not np.array_equal(lhs, rhs):
            raise ValueError("syzygy restriction failed")
    exact = True
    for d in set(syz_a.dims) | set(syz_b.dims) | set(syz_c.dims):
        if syz_a.dim(d) + syz_c.dim(d) != syz_b.dim(d):
            exact = False
        if rref(incl_s.block(d), p)[0] != syz_a.dim(d):
            exact = False
        if rref(proj_s.block(d), p)[0] != syz_c.dim(d):
            exact = False
    if not gmod.map_compose(incl_s, proj_s).is_zero():
        exact = False
    return incl_s, proj_s, exact
