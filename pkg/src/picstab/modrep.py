"""Modules over kG for a finite group G and a finite field k.

A module is stored as one invertible matrix per group generator; matrices
for all group elements are expanded at construction and every product
relation from the multiplication table is verified.  On top of that sit the
stable-category operations: syzygies, duals, tensor products, stable homs
(maps modulo those factoring through a projective), projective stripping,
stable isomorphism testing, endotriviality, and Tate H^0.

Everything is exact and deterministic; dimensions are capped so the worst
search (direct-sum decomposition via Fitting splittings of the endomorphism
ring) stays at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product as iproduct

import numpy as np

from .exactlin import (
    Fq,
    FqMatrix,
    column_space_basis,
    factorize,
    fq_make,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
    vstack,
)
from .groups import FiniteGroup, GroupMono, sylow_subgroup

DIM_CAP = 64


class GroupMismatch(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class SearchExhausted(RuntimeError):
    """The deterministic invertibility search hit its bound without an answer."""


class DimensionTooLarge(ValueError):
    pass


class GModule:
    """A kG-module: one invertible generator matrix per group generator."""

    __slots__ = ("group", "field", "dim", "gen_action", "label", "_cache")

    def __init__(self, group: FiniteGroup, field: Fq, gen_action, label="M", check=True):
        gen_action = tuple(gen_action)
        if len(gen_action) != len(group.generators):
            raise ValueError("need one matrix per group generator")
        if not gen_action:
            raise ValueError("group has no generators; use GModule.with_dim")
        dims = {a.rows for a in gen_action} | {a.cols for a in gen_action}
        if len(dims) != 1:
            raise ValueError("generator matrices must be square of equal size")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "gen_action", gen_action)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "dim", dims.pop())
        if check:
            self._element_action()  # expands all products and verifies relations

    def __setattr__(self, *a):
        raise AttributeError("GModule is immutable")

    @classmethod
    def with_dim(cls, group, field, gen_action, dim, label="M", check=True):
        """Constructor that also works for the trivial group (no generators)."""
        if group.generators:
            return cls(group, field, gen_action, label, check)
        self = object.__new__(cls)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "gen_action", ())
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "dim", dim)
        return self

    def _element_action(self) -> tuple[FqMatrix, ...]:
        acts = self._cache.get("elements")
        if acts is not None:
            return acts
        g = self.group
        n = g.order
        acts_l: list[FqMatrix | None] = [None] * n
        acts_l[0] = FqMatrix.identity(self.field, self.dim)
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for k, gi in enumerate(g.generators):
                y = g.mult[x][gi]
                if acts_l[y] is None:
                    acts_l[y] = acts_l[x] @ self.gen_action[k]
                    frontier.append(y)
        # every (element, generator) product: by induction this pins down all
        # products of the multiplication table
        for x in range(n):
            for k, gi in enumerate(g.generators):
                if acts_l[x] @ self.gen_action[k] != acts_l[g.mult[x][gi]]:
                    raise ValueError(
                        f"generator matrices violate the relation {x} * gen{k}"
                    )
        acts = tuple(acts_l)
        self._cache["elements"] = acts
        return acts

    def act(self, element: int) -> FqMatrix:
        return self._element_action()[element]

    def relabel(self, label: str) -> "GModule":
        out = GModule.with_dim(self.group, self.field, self.gen_action, self.dim, label, check=False)
        out._cache.update(self._cache)
        return out

    def __repr__(self) -> str:
        return f"GModule({self.label}, dim {self.dim} over F{self.field.q}{self.group.name})"


def _same_base(m: GModule, n: GModule) -> None:
    if m.group != n.group:
        raise GroupMismatch(f"{m.group.name} vs {n.group.name}")
    if m.field != n.field:
        raise FieldMismatch(f"F{m.field.q} vs F{n.field.q}")


def zero_module(group: FiniteGroup, field: Fq) -> GModule:
    z = FqMatrix.zeros(field, 0, 0)
    return GModule.with_dim(group, field, [z] * len(group.generators), 0, "0", check=False)


def trivial_module(group: FiniteGroup, field: Fq) -> GModule:
    one = FqMatrix.identity(field, 1)
    return GModule.with_dim(group, field, [one] * len(group.generators), 1, "k", check=False)


def regular_module(group: FiniteGroup, field: Fq) -> GModule:
    n = group.order
    mats = []
    for gi in group.generators:
        a = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            a[group.mult[gi][x], x] = 1
        mats.append(FqMatrix(field, a))
    return GModule.with_dim(group, field, mats, n, f"k{group.name}")


def character_module(group: FiniteGroup, field: Fq, scalars, label="chi") -> GModule:
    """Rank-1 module where generator i acts by the given unit scalar."""
    mats = [FqMatrix.from_rows(field, [[int(c)]]) for c in scalars]
    return GModule.with_dim(group, field, mats, 1, label)


def dual(m: GModule) -> GModule:
    g = m.group
    mats = [m.act(g.inv(gi)).t() for gi in g.generators]
    return GModule.with_dim(g, m.field, mats, m.dim, f"({m.label})*", check=False)


def tensor(m: GModule, n: GModule) -> GModule:
    _same_base(m, n)
    mats = [a.kron(b) for a, b in zip(m.gen_action, n.gen_action)]
    return GModule.with_dim(
        m.group, m.field, mats, m.dim * n.dim, f"{m.label}(x){n.label}", check=False
    )


def hom_k(m: GModule, n: GModule) -> GModule:
    """Hom_k(M, N) with the conjugation action, realised as M* tensor N."""
    return tensor(dual(m), n).relabel(f"Hom({m.label},{n.label})")


def direct_sum(group: FiniteGroup, field: Fq, mods) -> GModule:
    mods = list(mods)
    for x in mods:
        if x.group != group or x.field != field:
            raise GroupMismatch("direct summand over a different group or field")
    if not mods:
        return zero_module(group, field)
    dim = sum(x.dim for x in mods)
    mats = []
    for k in range(len(group.generators)):
        a = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for x in mods:
            a[off : off + x.dim, off : off + x.dim] = x.gen_action[k].a
            off += x.dim
        mats.append(FqMatrix(field, a))
    label = " + ".join(x.label for x in mods)
    return GModule.with_dim(group, field, mats, dim, label, check=False)


def restrict(m: GModule, mono: GroupMono) -> GModule:
    """Pull the action back along a monomorphism into m's group."""
    if mono.target != m.group:
        raise GroupMismatch("mono does not land in the module's group")
    mats = [m.act(mono(gi)) for gi in mono.source.generators]
    return GModule.with_dim(
        mono.source, m.field, mats, m.dim, f"{m.label}|{mono.source.name}"
    )


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class GMap:
    source: GModule
    target: GModule
    matrix: FqMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise ValueError("matrix shape does not match source/target")

    def check(self) -> "GMap":
        for a, b in zip(self.source.gen_action, self.target.gen_action):
            if self.matrix @ a != b @ self.matrix:
                raise ValueError("map does not intertwine the actions")
        return self

    def compose(self, inner: "GMap") -> "GMap":
        return GMap(inner.source, self.target, self.matrix @ inner.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def _vec(mat: FqMatrix) -> np.ndarray:
    return mat.a.reshape(-1)


def hom_space(m: GModule, n: GModule) -> list[GMap]:
    """A basis of Hom_kG(m, n), from the intertwining equations F A_g = B_g F."""
    _same_base(m, n)
    f = m.field
    nm = n.dim * m.dim
    if nm == 0:
        return []
    blocks = []
    eye_m = FqMatrix.identity(f, m.dim)
    eye_n = FqMatrix.identity(f, n.dim)
    for a, b in zip(m.gen_action, n.gen_action):
        blocks.append(eye_n.kron(a.t()) - b.kron(eye_m))
    system = vstack(blocks) if blocks else FqMatrix.zeros(f, 0, nm)
    basis = kernel_basis(system)
    out = []
    for j in range(basis.cols):
        mat = FqMatrix(f, basis.a[:, j].reshape(n.dim, m.dim))
        out.append(GMap(m, n, mat))
    return out


def submodule(m: GModule, basis: FqMatrix, label="S") -> tuple[GModule, GMap]:
    """The invariant subspace spanned by the basis columns, with its inclusion."""
    if basis.cols == 0:
        z = zero_module(m.group, m.field)
        return z, GMap(z, m, FqMatrix.zeros(m.field, m.dim, 0))
    mats = [solve(basis, a @ basis) for a in m.gen_action]
    sub = GModule.with_dim(m.group, m.field, mats, basis.cols, label)
    return sub, GMap(sub, m, basis)


def quotient_module(m: GModule, sub_basis: FqMatrix, label="Q") -> tuple[GModule, GMap]:
    """m / span(sub_basis), with the projection map."""
    f = m.field
    k = sub_basis.cols
    if k == 0:
        return m, GMap(m, m, FqMatrix.identity(f, m.dim))
    aug = hstack([sub_basis, FqMatrix.identity(f, m.dim)])
    _, pivots, _ = rref(aug)
    comp_cols = [p - k for p in pivots if p >= k]
    comp = FqMatrix(f, np.eye(m.dim, dtype=np.int64)[:, comp_cols])
    t_mat = hstack([sub_basis, comp])
    t_inv = inverse(t_mat)
    pi = FqMatrix(f, t_inv.a[k:, :])
    mats = [pi @ a @ comp for a in m.gen_action]
    quot = GModule.with_dim(m.group, m.field, mats, len(comp_cols), label)
    return quot, GMap(m, quot, pi)


# ---------------------------------------------------------------------------
# radical


def _act_of_algebra_element(m: GModule, coeffs) -> FqMatrix:
    """Action of sum_g coeffs[g] * g on m."""
    f = m.field
    out = FqMatrix.zeros(f, m.dim, m.dim)
    for g, c in enumerate(coeffs):
        if c:
            out = out + m.act(g).scale(int(c))
    return out


def radical(m: GModule, method: str = "auto") -> FqMatrix:
    """Basis (columns) of J(kG) . m.

    With a normal Sylow p-subgroup P the radical of kG is the ideal generated
    by the augmentation ideal of kP, so J.m is spanned by (t - 1).m over
    t in P.  The generic path computes J(kG) itself from the group algebra
    and is kept for explicit tables whose Sylow subgroup is not normal.
    """
    f = m.field
    if m.dim == 0:
        return FqMatrix.zeros(f, 0, 0)
    g = m.group
    if g.order % f.p:
        return FqMatrix.zeros(f, m.dim, 0)
    syl = sylow_subgroup(g, f.p)
    if method == "auto":
        method = "sylow" if syl.is_normal() else "generic"
    if method == "sylow":
        if not syl.is_normal():
            raise ValueError("Sylow subgroup is not normal; use method='generic'")
        eye = FqMatrix.identity(f, m.dim)
        spans = [m.act(t) - eye for t in syl.sorted_elements() if t != 0]
        return column_space_basis(hstack(spans))
    if method != "generic":
        raise ValueError(f"unknown radical method {method!r}")
    jbasis = jacobson_radical(g, f)
    if not jbasis:
        return FqMatrix.zeros(f, m.dim, 0)
    spans = [_act_of_algebra_element(m, v) for v in jbasis]
    return column_space_basis(hstack(spans))


def jacobson_radical(group: FiniteGroup, field: Fq) -> list[tuple[int, ...]]:
    """F_q-spanning set of J(kG), as coefficient vectors over the group basis.

    Uses the trace-form chain of Cohen-Ivanyos-Wales on the regular
    representation restricted to F_p: starting from the full algebra, cut by
    the bilinear forms f_i(x, y) = p^-i tr((XY)^(p^i)) computed on integer
    lifts, for i = 0 .. log_p(dim).  The final subspace is the radical.
    """
    n = group.order
    p, e = field.p, field.e
    dim = n * e
    if dim > 32:
        raise DimensionTooLarge(
            "generic radical computation is capped at group order x degree <= 32"
        )
    red = field._reduction_matrix()  # (2e-1) x e, entries 0..p-1
    # integer left-multiplication matrices for the F_p-basis g * x^j
    basis_mats = []
    for g in range(n):
        for j in range(e):
            mat = np.zeros((dim, dim), dtype=np.int64)
            for h in range(n):
                gh = group.mult[g][h]
                for i in range(e):
                    for s in range(e):
                        c = red[i + j, s]
                        if c:
                            mat[gh * e + s, h * e + i] = c
            basis_mats.append(mat)
    basis_mats = np.array(basis_mats)

    space = np.eye(dim, dtype=np.int64)  # columns: F_p coords of current subspace
    steps = 1
    while p**steps < dim:
        steps += 1
    for i in range(steps + 1):
        mdim = space.shape[1]
        if mdim == 0:
            break
        modulus = p ** (i + 1)
        mats = np.tensordot(space.T, basis_mats, axes=(1, 0)) % modulus
        gram = np.zeros((mdim, mdim), dtype=np.int64)
        power = p**i
        for s in range(mdim):
            for t in range(mdim):
                prod_st = (mats[s] @ mats[t]) % modulus
                tr = int(np.trace(_int_matrix_power(prod_st, power, modulus))) % modulus
                assert tr % (p**i) == 0, "trace-form scaling failed"
                gram[s, t] = (tr // p**i) % p
        ker = kernel_basis(FqMatrix(fq_make(p, 1), gram.T % p))
        space = (space @ ker.a) % p
    out = []
    for j in range(space.shape[1]):
        coeffs = []
        for g in range(n):
            code = 0
            for jj in range(e):
                code += int(space[g * e + jj, j]) * field.p**jj
            coeffs.append(code)
        out.append(tuple(coeffs))
    return out


def _int_matrix_power(a: np.ndarray, n: int, modulus: int) -> np.ndarray:
    out = np.eye(a.shape[0], dtype=np.int64)
    base = a % modulus
    while n:
        if n & 1:
            out = (out @ base) % modulus
        base = (base @ base) % modulus
        n >>= 1
    return out


# ---------------------------------------------------------------------------
# indecomposable summands and projective covers


def _power_stabilize(mat: FqMatrix, dim: int) -> FqMatrix:
    """mat^(2^t) for the first power 2^t >= dim (Fitting: kernel and image split)."""
    out = mat
    steps = max(1, math.ceil(math.log2(max(dim, 2))))
    for _ in range(steps):
        out = out @ out
    return out


def _fitting_candidates(end_maps: list[GMap], field: Fq, dim: int):
    eye = FqMatrix.identity(field, dim)
    mats = [h.matrix for h in end_maps]
    shifts = [eye.scale(c) for c in range(field.q)]
    for m in mats:
        for s in shifts:
            yield m + s
    for a, b in combinations(mats, 2):
        for s in shifts:
            yield a + b + s
    for a, b in iproduct(mats, mats):
        for s in shifts:
            yield (a @ b) + s


def indecomposable_summands(m: GModule) -> list[GModule]:
    """Complete direct-sum decomposition via Fitting splittings of End(m).

    Endomorphisms that are idempotent modulo nilpotents stabilise under
    repeated squaring; the stabilised power splits m into its kernel and
    image, both submodules.  Scalar shifts of basis elements, pair sums and
    pair products are tried in a fixed order, so the result is deterministic.
    """
    if m.dim > DIM_CAP:
        raise DimensionTooLarge(f"dimension {m.dim} exceeds cap {DIM_CAP}")
    if m.dim == 0:
        return []
    ends = hom_space(m, m)
    if len(ends) == 1:
        return [m]
    for cand in _fitting_candidates(ends, m.field, m.dim):
        s = _power_stabilize(cand, m.dim)
        ker = kernel_basis(s)
        if 0 < ker.cols < m.dim:
            im = column_space_basis(s)
            left, _ = submodule(m, ker, f"{m.label}'")
            right, _ = submodule(m, im, f"{m.label}''")
            return indecomposable_summands(left) + indecomposable_summands(right)
    return [m]


_PIM_CACHE: dict = {}


def pims(group: FiniteGroup, field: Fq) -> tuple[GModule, ...]:
    """The projective indecomposables, from decomposing the regular module."""
    key = (group, field)
    got = _PIM_CACHE.get(key)
    if got is not None:
        return got
    reg = regular_module(group, field)
    parts = indecomposable_summands(reg)
    reps: list[GModule] = []
    for part in parts:
        if not any(module_iso(part, r) is not None for r in reps):
            reps.append(part.relabel(f"P{len(reps)}({group.name})"))
    reps.sort(key=lambda x: x.dim)
    out = tuple(reps)
    _PIM_CACHE[key] = out
    return out


def projective_cover(m: GModule) -> tuple[GModule, GMap]:
    """Minimal projective cover (P, P ->> m): kernel inside rad(P)."""
    g, f = m.group, m.field
    if m.dim == 0:
        z = zero_module(g, f)
        return z, GMap(z, m, FqMatrix.zeros(f, 0, 0))
    top, pi = quotient_module(m, radical(m), label=f"top({m.label})")
    chosen: list[tuple[GModule, GMap]] = []
    im = FqMatrix.zeros(f, top.dim, 0)
    for p_i in pims(g, f):
        if im.cols == top.dim:
            break
        for fmap in hom_space(p_i, top):
            if fmap.is_zero():
                continue
            grown = hstack([im, fmap.matrix])
            if rank(grown) > im.cols:
                im = column_space_basis(grown)
                chosen.append((p_i, fmap))
                if im.cols == top.dim:
                    break
    if im.cols != top.dim:
        raise AssertionError("projective indecomposables failed to cover the top")
    lifts = []
    for p_i, fmap in chosen:
        homs = hom_space(p_i, m)
        cols = hstack([FqMatrix(f, _vec(pi.matrix @ h.matrix).reshape(-1, 1)) for h in homs])
        coeffs = solve(cols, FqMatrix(f, _vec(fmap.matrix).reshape(-1, 1)))
        lift = FqMatrix.zeros(f, m.dim, p_i.dim)
        for j, h in enumerate(homs):
            c = int(coeffs.a[j, 0])
            if c:
                lift = lift + h.matrix.scale(c)
        lifts.append(lift)
    cover_mod = direct_sum(g, f, [p for p, _ in chosen])
    cover_map = GMap(cover_mod, m, hstack(lifts))
    if rank(cover_map.matrix) != m.dim:
        raise AssertionError("cover map is not surjective")
    return cover_mod, cover_map


def _omega_label(label: str, step: int = 1) -> str:
    if label.startswith("Omega^") and "(" in label:
        head, rest = label.split("(", 1)
        try:
            power = int(head[len("Omega^") :])
            return f"Omega^{power + step}({rest[:-1]})" if rest.endswith(")") else label
        except ValueError:
            pass
    return f"Omega^{step}({label})"


def syzygy(m: GModule) -> GModule:
    """Omega m: the kernel of a minimal projective cover."""
    cover_mod, cover_map = projective_cover(m)
    ker = kernel_basis(cover_map.matrix)
    sub, _ = submodule(cover_mod, ker, _omega_label(m.label))
    return sub


def cosyzygy(m: GModule) -> GModule:
    """Omega^-1 m, computed as dual(syzygy(dual(m))) via self-injectivity."""
    out = dual(syzygy(dual(m)))
    return out.relabel(f"Omega^-1({m.label})")


# ---------------------------------------------------------------------------
# stable homs


@dataclass(frozen=True)
class StableHomSpace:
    """Hom(m, n), the subspace through projectives, and quotient data."""

    source: GModule
    target: GModule
    full: tuple[GMap, ...]
    phom_reduced: FqMatrix  # RREF rows: PHom coordinates in the full basis
    phom_pivots: tuple[int, ...]

    @property
    def full_dim(self) -> int:
        return len(self.full)

    @property
    def phom_dim(self) -> int:
        return self.phom_reduced.rows

    @property
    def quotient_dim(self) -> int:
        return self.full_dim - self.phom_dim

    @property
    def phom(self) -> list[GMap]:
        """A basis of the maps factoring through a projective."""
        out = []
        for i in range(self.phom_reduced.rows):
            mat = FqMatrix.zeros(self.source.field, self.target.dim, self.source.dim)
            for j in range(self.full_dim):
                c = int(self.phom_reduced.a[i, j])
                if c:
                    mat = mat + self.full[j].matrix.scale(c)
            out.append(GMap(self.source, self.target, mat))
        return out

    @property
    def quotient(self) -> list[GMap]:
        """Coset representatives spanning Hom / PHom."""
        return self.quotient_reps()

    def quotient_reps(self) -> list[GMap]:
        return [self.full[j] for j in range(self.full_dim) if j not in self.phom_pivots]

    def coordinates(self, gmap: GMap) -> FqMatrix:
        cols = hstack(
            [FqMatrix(self.source.field, _vec(h.matrix).reshape(-1, 1)) for h in self.full]
        )
        return solve(cols, FqMatrix(self.source.field, _vec(gmap.matrix).reshape(-1, 1)))

    def class_vector(self, gmap: GMap) -> np.ndarray:
        """Canonical coset representative of the map's class modulo PHom."""
        f = self.source.field
        c = self.coordinates(gmap).a[:, 0].copy()
        for i, piv in enumerate(self.phom_pivots):
            ci = c[piv]
            if ci:
                c = f.vsub(c, f.vmul(np.int64(ci), self.phom_reduced.a[i]))
        return c

    def is_stably_zero(self, gmap: GMap) -> bool:
        return not np.any(self.class_vector(gmap))


def stable_hom(m: GModule, n: GModule) -> StableHomSpace:
    """Hom(m, n) together with the subspace of maps factoring through a projective.

    Any map through a projective lifts along the projective cover of the
    target, so PHom(m, n) is the image of Hom(m, P(n)) under composition with
    the cover map.
    """
    f = m.field
    full = hom_space(m, n)
    p_n, cover = projective_cover(n)
    through = hom_space(m, p_n)
    if full:
        cols = hstack([FqMatrix(f, _vec(h.matrix).reshape(-1, 1)) for h in full])
        coords = []
        for h in through:
            composed = cover.matrix @ h.matrix
            coords.append(solve(cols, FqMatrix(f, _vec(composed).reshape(-1, 1))))
        if coords:
            ph = hstack(coords).t()
            red, pivots, _ = rref(ph)
            red = FqMatrix(f, red.a[: len(pivots), :])
        else:
            red, pivots = FqMatrix.zeros(f, 0, len(full)), ()
    else:
        red, pivots = FqMatrix.zeros(f, 0, 0), ()
    return StableHomSpace(m, n, tuple(full), red, tuple(pivots))


# ---------------------------------------------------------------------------
# stripping projective summands


def _is_p_group(group: FiniteGroup, p: int) -> bool:
    return set(factorize(group.order)) <= {p}


def _strip_free_once(m: GModule) -> GModule | None:
    """Split off one free summand of a module over a p-group in char p.

    Over a p-group the socle of kG is spanned by the norm element, so kG.v is
    free exactly when norm.v != 0, and freeness makes the inclusion split; the
    retraction is Sigma_g lam(g^-1 x) g for a functional lam that is 1 at v
    and 0 on the rest of the orbit.
    """
    g, f = m.group, m.field
    norm = FqMatrix.zeros(f, m.dim, m.dim)
    for x in range(g.order):
        norm = norm + m.act(x)
    nz = np.nonzero(norm.a.any(axis=0))[0]
    if nz.size == 0:
        return None
    v = FqMatrix(f, np.eye(m.dim, dtype=np.int64)[:, [int(nz[0])]])
    orbit = hstack([m.act(g.inv(x)) @ v for x in range(g.order)])
    lam = solve(orbit.t(), FqMatrix(f, np.eye(g.order, dtype=np.int64)[:, [0]]))
    retraction = vstack([(lam.t() @ m.act(g.inv(x))) for x in range(g.order)])
    comp = kernel_basis(retraction)
    if comp.cols != m.dim - g.order:
        raise AssertionError("free-summand retraction has wrong rank")
    sub, _ = submodule(m, comp, m.label)
    return sub


def strip_projectives(m: GModule) -> tuple[GModule, GModule]:
    """m = core + projective part, with the core free of projective summands."""
    g, f = m.group, m.field
    core = m
    split: list[GModule] = []
    if g.order % f.p:
        # semisimple group algebra: everything is projective
        return zero_module(g, f), m
    if _is_p_group(g, f.p) and g.order > 1:
        reg = regular_module(g, f)
        while core.dim:
            nxt = _strip_free_once(core)
            if nxt is None:
                break
            core = nxt
            split.append(reg)
    else:
        while core.dim:
            found = False
            for p_i in pims(g, f):
                in_maps = hom_space(p_i, core)
                out_maps = hom_space(core, p_i)
                for fin in in_maps:
                    for fout in out_maps:
                        comp = fout.matrix @ fin.matrix
                        if is_invertible(comp):
                            idem = fin.matrix @ inverse(comp) @ fout.matrix
                            comp_basis = kernel_basis(idem)
                            core, _ = submodule(core, comp_basis, core.label)
                            split.append(p_i)
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if not found:
                break
    projpart = direct_sum(g, f, split) if split else zero_module(g, f)
    return core.relabel(f"core({m.label})"), projpart


# ---------------------------------------------------------------------------
# isomorphism testing


def module_iso(m: GModule, n: GModule) -> GMap | None:
    """An isomorphism m -> n, or None.

    Searches single hom-basis elements, then sums of two and three; for
    fields with at most 4 elements and hom dimension at most 12 it falls back
    to exhaustive search (first nonzero coefficient normalised to 1), and
    otherwise raises SearchExhausted rather than guessing.
    """
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return GMap(m, n, FqMatrix.zeros(m.field, 0, 0))
    homs = hom_space(m, n)
    if not homs:
        return None
    mats = [h.matrix for h in homs]
    for a in mats:
        if is_invertible(a):
            return GMap(m, n, a)
    for a, b in combinations(mats, 2):
        c = a + b
        if is_invertible(c):
            return GMap(m, n, c)
    for a, b, c in combinations(mats, 3):
        d = a + b + c
        if is_invertible(d):
            return GMap(m, n, d)
    q, h = m.field.q, len(mats)
    if q <= 4 and h <= 12:
        for lead in range(h):
            for tail in iproduct(range(q), repeat=h - 1 - lead):
                cand = mats[lead]
                for k, coef in enumerate(tail):
                    if coef:
                        cand = cand + mats[lead + 1 + k].scale(coef)
                if is_invertible(cand):
                    return GMap(m, n, cand)
        return None
    raise SearchExhausted(f"no invertible map found within search bounds (hom dim {h})")


def stable_iso(m: GModule, n: GModule) -> bool:
    """Stable isomorphism: the projective-free cores are isomorphic."""
    _same_base(m, n)
    core_m, _ = strip_projectives(m)
    core_n, _ = strip_projectives(n)
    return module_iso(core_m, core_n) is not None


def is_endotrivial(m: GModule) -> bool:
    """Whether m tensor m* is stably the trivial module."""
    if m.dim == 0:
        raise ValueError("the zero module is not a candidate")
    return stable_iso(tensor(m, dual(m)), trivial_module(m.group, m.field))


def ev_map(m: GModule) -> GMap:
    """Evaluation m tensor m* -> k."""
    t = tensor(m, dual(m))
    row = np.zeros((1, m.dim * m.dim), dtype=np.int64)
    for i in range(m.dim):
        row[0, i * m.dim + i] = 1
    return GMap(t, trivial_module(m.group, m.field), FqMatrix(m.field, row)).check()


# ---------------------------------------------------------------------------
# Tate cohomology in degree zero


@dataclass(frozen=True)
class TateH0:
    """H-hat^0(G; k) = fixed points of k modulo the image of the norm."""

    group: FiniteGroup
    field: Fq
    dim: int

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def ring_name(self) -> str:
        return f"F{self.field.q}" if self.dim else "0"

    @property
    def unit_group_order(self) -> int:
        return self.field.q - 1 if self.dim else 1

    def __str__(self) -> str:
        return self.ring_name


def tate_h0(group: FiniteGroup, field: Fq) -> TateH0:
    """For the trivial module: k^G = k and the norm acts by |G|, so k / |G|k."""
    norm_value = group.order % field.p
    return TateH0(group, field, 0 if norm_value else 1)
