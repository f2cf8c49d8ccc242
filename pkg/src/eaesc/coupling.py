"""Constructive equivalence after extension (EAE) and Schur coupling (SC).

Operators are :class:`~eaesc.seq_operator.BlockOp` values.  ``U`` acts on the
shape ``X`` and ``V`` on ``Y``; a witness ``(S, T)`` has ``S: Y -> X`` and
``T: X -> Y``.  Every construction ends in an exact identity check, so a
returned object is always certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import (ComputationError, IndexMismatch, IndexObstruction, NotEAE,
                     NotFredholm, NotInvertible, NotRepresentable, ShapeMismatch,
                     ZeroIndexInput)
from .exact_linalg import rref
from .seq_operator import (BlockOp, FredholmData, Fin, Seq, SpaceShape,
                           apply_vec, as_block, block_diag, block_scale,
                           block_identity, block_permute, block_zero, compose_symbol_maps, finite_op,
                           from_columns, fredholm_data, head_tail_iso, index,
                           inverse_symbol_map, invert, is_fredholm, is_identity,
                           monomial_band, range_alignment_iso, shift, solve_preimages,
                           symbol_map)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Witness:
    s: BlockOp  # Y -> X
    t: BlockOp  # X -> Y

    def __post_init__(self):
        s, t = as_block(self.s), as_block(self.t)
        if s.codomain != t.domain or s.domain != t.codomain:
            raise ShapeMismatch("witness maps do not fit together")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def x_shape(self) -> SpaceShape:
        return self.t.domain

    @property
    def y_shape(self) -> SpaceShape:
        return self.s.domain

    def product(self) -> BlockOp:
        """``I_X - S T``."""
        return block_identity(self.x_shape) - self.s @ self.t

    def dual_product(self) -> BlockOp:
        """``I_Y - T S``."""
        return block_identity(self.y_shape) - self.t @ self.s

    def index(self) -> int:
        return index(self.product())


@dataclass(frozen=True)
class SchurCouple:
    a: BlockOp
    a_inv: BlockOp
    b: BlockOp
    c: BlockOp
    d: BlockOp
    d_inv: BlockOp

    def u(self) -> BlockOp:
        return self.a - self.b @ self.d_inv @ self.c

    def v(self) -> BlockOp:
        return self.d - self.c @ self.a_inv @ self.b


@dataclass(frozen=True)
class Extension:
    e: BlockOp
    e_inv: BlockOp
    f: BlockOp
    f_inv: BlockOp
    x0: SpaceShape
    y0: SpaceShape


@dataclass(frozen=True)
class Compression:
    b1: BlockOp  # X -> Y, supported on the range factors
    b2: BlockOp  # Y -> X
    discrepancy: BlockOp  # T S - b1 b2, finite rank
    index: int


# --- helpers ------------------------------------------------------------------------

def _data(t) -> FredholmData:
    if isinstance(t, FredholmData):
        return t
    return fredholm_data(as_block(t), "exact")


def _pivot_basis(vectors: Sequence[Mapping]) -> tuple[list, list]:
    """Reduced basis with pivots at the lowest coordinates; returns (vectors, pivots)."""
    if not vectors:
        return [], []
    coords = sorted({c for v in vectors for c in v})
    rows, piv = rref([[v.get(c, ZERO) for c in coords] for v in vectors])
    basis = [{c: x for c, x in zip(coords, row) if x} for row in rows[:len(piv)]]
    return basis, [coords[p] for p in piv]


def _finite_block(domain: SpaceShape, codomain: SpaceShape, entries: Mapping) -> BlockOp:
    """Finite-rank operator from ``{((g, r), (f, c)): value}``."""
    parts: dict = {}
    for ((g, r), (f, c)), v in entries.items():
        cell = parts.setdefault((g, f), {})
        cell[(r, c)] = cell.get((r, c), ZERO) + v
    return BlockOp(domain, codomain,
                   tuple(tuple(finite_op(parts.get((g, f), {})) for f in range(len(domain)))
                         for g in range(len(codomain))))


def _fin_maps(shape: SpaceShape, functionals: Sequence, targets: Sequence):
    """``Q: shape -> Fin(m)`` reading coordinates and ``J: Fin(m) -> shape``."""
    fin = SpaceShape.of(Fin(len(functionals)))
    q = _finite_block(shape, fin, {((0, j), c): ONE
                                   for j, c in enumerate(functionals, start=1)})
    jmap = _finite_block(fin, shape, {(rc, (0, j)): v
                                      for j, vec in enumerate(targets, start=1)
                                      for rc, v in vec.items()})
    return q, jmap


# --- EAE test and kernel perturbation ------------------------------------------------

def eae_check(u_data, v_data) -> bool:
    """Two Fredholm operators are EAE exactly when their nullities and defects agree."""
    a, b = _data(u_data), _data(v_data)
    return a.alpha == b.alpha and a.beta == b.beta


def perturb_kernel(t, m: int) -> BlockOp:
    """Finite-rank ``R`` with ``α(t + R) = m``; needs ``m >= max(index(t), 0)``."""
    t = as_block(t)
    data = _data(t)
    if m < data.index:
        raise IndexObstruction(f"kernel dimension {m} is below the index {data.index}")
    if m < 0:
        raise IndexObstruction("kernel dimension must be nonnegative")
    entries: dict = {}
    if data.alpha > m:
        # send n kernel directions onto n independent range-complement directions
        n = data.alpha - m
        _, piv = _pivot_basis(data.kernel_basis)
        for p, z in zip(piv[:n], data.range_complement[:n]):
            for r, v in z.items():
                entries[(r, p)] = entries.get((r, p), ZERO) + v
        r_op = _finite_block(t.domain, t.codomain, entries)
    elif data.alpha < m:
        # enlarge the kernel to W = ker t + coordinate directions, then R = -t P_W
        basis, piv = _pivot_basis(data.kernel_basis)
        extra = [c for c in t.domain.coords(data.window + m) if c not in set(piv)]
        need = m - data.alpha
        if len(extra) < need:
            raise NotRepresentable("domain too small for the requested kernel")
        w_basis, w_piv = _pivot_basis(list(basis) + [{c: ONE} for c in extra[:need]])
        proj = {}
        for vec, p in zip(w_basis, w_piv):
            for c, v in vec.items():
                proj[(c, p)] = v
        p_op = _finite_block(t.domain, t.domain, proj)
        r_op = -(t @ p_op)
    else:
        r_op = block_zero(t.domain, t.codomain)
    got = _data(t + r_op)
    if got.alpha != m or got.index != data.index:
        raise ComputationError(f"kernel perturbation reached α = {got.alpha}, wanted {m}")
    return r_op


def _append_fin_iso(y: SpaceShape, w: int) -> tuple[BlockOp, BlockOp]:
    """Isomorphism ``Y -> Y + [Fin(w)]`` peeling ``w`` coordinates off a Seq factor."""
    q = next((k for k, f in enumerate(y) if isinstance(f, Seq)), None)
    if q is None:
        raise NotRepresentable("Y has no sequence factor to absorb a finite block")
    front = [q] + [k for k in range(len(y)) if k != q]
    p0 = block_permute(y, front)
    p0_inv = block_permute(p0.codomain, [front.index(k) for k in range(len(y))])
    ht, ht_inv = head_tail_iso(p0.codomain, w)
    # after head_tail the factor Y[k] sits at 1 + front.index(k); Fin(w) at 0
    order = [1 + front.index(k) for k in range(len(y))] + [0]
    p1 = block_permute(ht.codomain, order)
    p1_inv = block_permute(p1.codomain, [order.index(k) for k in range(len(order))])
    return p1 @ ht @ p0, p0_inv @ ht_inv @ p1_inv


def perturb_witness(w: Witness, m: int) -> Witness:
    """New witness differing by finite rank with ``α(I - S T) = m``."""
    k = w.index()
    if k == 0:
        raise ZeroIndexInput("witness perturbation needs a nonzero index")
    if m < max(k, 0):
        raise IndexObstruction(f"kernel dimension {m} is below the index {k}")
    u1 = w.product()
    r = perturb_kernel(u1, m)
    if r == block_zero(r.domain, r.codomain):
        return w
    # factor R = J R0 through Fin(size) using the rows R touches
    rows = sorted({(g, i) for g in range(len(r.codomain)) for f in range(len(r.domain))
                   for (i, _), _ in r.entries[g][f].correction.entries})
    fin = SpaceShape.of(Fin(len(rows)))
    j_map = _finite_block(fin, w.x_shape, {(rc, (0, n)): ONE
                                           for n, rc in enumerate(rows, start=1)})
    r0 = _finite_block(w.x_shape, fin, {
        ((0, n), (f, c)): v
        for n, (g, i) in enumerate(rows, start=1)
        for f in range(len(r.domain))
        for (i2, c), v in r.entries[g][f].correction.entries if i2 == i})
    # S1 T1 - R = [S1, -J] [T1; R0]
    y_ext = w.y_shape + fin
    s_ext = BlockOp(y_ext, w.x_shape, tuple(
        tuple(w.s.entries[g]) + (-(j_map.entries[g][0]),) for g in range(len(w.x_shape))))
    t_ext = BlockOp(w.x_shape, y_ext, tuple(w.t.entries) + tuple(r0.entries))
    lmap, lmap_inv = _append_fin_iso(w.y_shape, len(rows))
    out = Witness(s_ext @ lmap, lmap_inv @ t_ext)
    got = _data(out.product())
    if got.alpha != m or got.index != k:
        raise ComputationError("witness perturbation missed its kernel target")
    return out


# --- lifts through a Fredholm operator ------------------------------------------------

def _lift(u: BlockOp, p: BlockOp, match_kernels: bool) -> BlockOp:
    """Operator ``L`` with ``u L = p``, built column by column.

    Columns are the preimages avoiding the kernel pivots of ``u``.  With
    ``match_kernels`` the kernel of ``p`` is sent onto the kernel of ``u``, which
    makes ``L`` invertible when the ranges and nullities agree.
    """
    du = _data(u)
    ku, piv_u = _pivot_basis(du.kernel_basis)
    band = max(monomial_band(u) or 0, monomial_band(p) or 0)
    head = max(u.bound, p.bound, du.window) + 4 * band + 4
    coords = p.domain.coords(head)
    targets = [apply_vec(p, {c: ONE}) for c in coords]
    cols = {}
    for c, got in zip(coords, solve_preimages(u, targets, exclude=piv_u)):
        if got is None:
            raise NotRepresentable(f"column {c} leaves the range")
        cols[c] = got[0]
    if match_kernels:
        dp = _data(p)
        if dp.alpha != du.alpha:
            raise NotEAE("kernels of different dimension")
        _, piv_p = _pivot_basis(dp.kernel_basis)
        for vec, c in zip(ku, piv_p):
            col = dict(cols.get(c, {}))
            for key, v in vec.items():
                col[key] = col.get(key, ZERO) + v
            cols[c] = {key: v for key, v in col.items() if v}
    sym = compose_symbol_maps(inverse_symbol_map(u), symbol_map(p))
    out = from_columns(p.domain, u.domain, sym, cols)
    if u @ out != p:
        raise ComputationError("lifted operator failed its exact check")
    return out


def _left_inverse(u: BlockOp) -> BlockOp:
    """``L`` with ``L u = I`` for injective ``u``; range-complement directions go to 0."""
    du = _data(u)
    if du.alpha:
        raise NotInvertible("a left inverse needs a trivial kernel")
    band = monomial_band(u) or 0
    head = max(u.bound, du.window) + 4 * band + 4
    coords = u.codomain.coords(head)
    cols = {}
    got = solve_preimages(u, [{c: ONE} for c in coords], extra=du.range_complement)
    for c, sol in zip(coords, got):
        if sol is None:
            raise ComputationError("range complement does not span the cokernel")
        cols[c] = sol[0]
    out = from_columns(u.codomain, u.domain, inverse_symbol_map(u), cols)
    if not is_identity(out @ u):
        raise ComputationError("left inverse failed its exact check")
    return out


def _range_projection(u: BlockOp, du: FredholmData) -> BlockOp:
    """Projection onto ``ran u`` along the range-complement vectors."""
    shape = u.codomain
    coords = shape.coords(du.window)
    entries = {}
    sols = solve_preimages(u, [{c: ONE} for c in coords], extra=du.range_complement)
    for c, sol in zip(coords, sols):
        for lam, z in zip(sol[1], du.range_complement):
            for rc, v in z.items():
                if lam * v:
                    entries[(rc, c)] = entries.get((rc, c), ZERO) + lam * v
    return block_identity(shape) - _finite_block(shape, shape, entries)


# --- Schur couples -------------------------------------------------------------------

def couple_from_MN(m, n, w: Witness) -> SchurCouple:
    """Translate ``U M = I - S T`` and ``V N = I - T S`` into a Schur couple."""
    m, n = as_block(m), as_block(n)
    a = invert(m)
    d = invert(n)
    return SchurCouple(a=a, a_inv=m, b=w.s @ d, c=w.t @ a, d=d, d_inv=n)


def _index_zero_couple(u: BlockOp, v: BlockOp, du: FredholmData,
                       dv: FredholmData) -> SchurCouple:
    _, pu = _pivot_basis(du.kernel_basis)
    _, pv = _pivot_basis(dv.kernel_basis)
    qu, ju = _fin_maps(u.domain, pu, du.range_complement)
    qv, jv = _fin_maps(v.domain, pv, dv.range_complement)
    a = u + ju @ qu
    d = v + jv @ qv
    return SchurCouple(a=a, a_inv=invert(a), b=ju @ qv, c=jv @ qu, d=d, d_inv=invert(d))


def sc_construct(w: Witness | None, u, v) -> SchurCouple:
    """Schur couple for an EAE pair, following the range-alignment route.

    ``w`` must satisfy ``index(I - S T) = index(u)``; for index 0 it is ignored.
    """
    u, v = as_block(u), as_block(v)
    for t, name in ((u, "u"), (v, "v")):
        if t.domain != t.codomain:
            raise ShapeMismatch(f"{name} must act on a single shape")
    du, dv = _data(u), _data(v)
    if not eae_check(du, dv):
        raise NotEAE(f"(α, β) = {(du.alpha, du.beta)} versus {(dv.alpha, dv.beta)}")
    k = du.index
    if k == 0:
        couple = _index_zero_couple(u, v, du, dv)
    else:
        if w is None:
            raise IndexMismatch(f"index {k} needs a witness")
        if w.x_shape != u.domain or w.y_shape != v.domain:
            raise ShapeMismatch("witness shapes differ from the operator shapes")
        kw = w.index()
        if kw != k:
            raise IndexMismatch(f"witness index {kw} differs from operator index {k}")
        w2 = perturb_witness(w, du.alpha)
        a, a_inv = range_alignment_iso(w2.product(), u)
        b, b_inv = range_alignment_iso(w2.dual_product(), v)
        w3 = Witness(a @ w2.s @ b_inv, b @ w2.t @ a_inv)
        m = _lift(u, w3.product(), True)
        n = _lift(v, w3.dual_product(), True)
        couple = couple_from_MN(m, n, w3)
    if not sc_verify(u, v, couple, 8):
        raise ComputationError("constructed couple failed verification")
    return couple


def _agree(p: BlockOp, q: BlockOp, n: int) -> bool:
    if p.domain != q.domain or p.codomain != q.codomain:
        return False
    for c in p.domain.coords(n):
        if apply_vec(p, {c: ONE}) != apply_vec(q, {c: ONE}):
            return False
    return p == q


def sc_verify(u, v, sc: SchurCouple, n: int) -> bool:
    """Both Schur-complement identities and both inverse certificates, exactly."""
    u, v = as_block(u), as_block(v)
    x, y = u.domain, v.domain
    shapes = [(sc.a, x, x), (sc.a_inv, x, x), (sc.d, y, y), (sc.d_inv, y, y),
              (sc.b, y, x), (sc.c, x, y)]
    for op, dom, cod in shapes:
        if op.domain != dom or op.codomain != cod:
            raise ShapeMismatch("couple shapes do not match the operators")
    ix, iy = block_identity(x), block_identity(y)
    checks = [(sc.a @ sc.a_inv, ix), (sc.a_inv @ sc.a, ix),
              (sc.d @ sc.d_inv, iy), (sc.d_inv @ sc.d, iy),
              (sc.u(), u), (sc.v(), v)]
    return all(_agree(p, q, n) for p, q in checks)


def sc_extend_blockdiag(sc: SchurCouple, x1: SpaceShape, y1: SpaceShape) -> SchurCouple:
    """Couple for ``(I + U, I + V)`` on ``(X1 + X2, Y1 + Y2)``."""
    ix, iy = block_identity(x1), block_identity(y1)
    return SchurCouple(a=block_diag(ix, sc.a), a_inv=block_diag(ix, sc.a_inv),
                       b=block_diag(block_zero(y1, x1), sc.b),
                       c=block_diag(block_zero(x1, y1), sc.c),
                       d=block_diag(iy, sc.d), d_inv=block_diag(iy, sc.d_inv))


# --- witnesses ---------------------------------------------------------------------

def _stack(top: BlockOp, bottom: BlockOp) -> BlockOp:
    return BlockOp(top.domain, top.codomain + bottom.codomain, top.entries + bottom.entries)


def _beside(left: BlockOp, right: BlockOp) -> BlockOp:
    return BlockOp(left.domain + right.domain, left.codomain,
                   tuple(a + b for a, b in zip(left.entries, right.entries)))


def _blocks2(p: BlockOp, q: BlockOp, r: BlockOp, s: BlockOp) -> BlockOp:
    """``[[p, q], [r, s]]`` as one operator."""
    return _stack(_beside(p, q), _beside(r, s))


def witness_from_complemented(r, z_shape: SpaceShape | None = None) -> Witness:
    """``S = [I - R; 0]``, ``T = [I 0]`` so that ``I - S T = diag(R, I_Z)``."""
    r = as_block(r)
    if r.domain != r.codomain:
        raise ShapeMismatch("R must act on a single shape")
    if not is_fredholm(r):
        raise NotFredholm("R is not Fredholm")
    y = r.domain
    iy = block_identity(y)
    if z_shape is None:
        return Witness(iy - r, iy)
    s = _stack(iy - r, block_zero(y, z_shape))
    t = _beside(iy, block_zero(z_shape, y))
    return Witness(s, t)


def _binomial(w: Witness, m: int) -> Witness:
    x = w.x_shape
    neg_st = -(w.s @ w.t)
    power = block_identity(x)
    acc = block_zero(x, x)
    for j in range(1, m + 1):
        acc = acc + block_scale(comb(m, j), power)
        power = power @ neg_st
    return Witness(w.s, w.t @ acc)


def _negate_index(w: Witness, k: int) -> Witness:
    x = w.x_shape
    if k > 0:
        w2 = perturb_witness(w, k)
        rr = _lift(w2.product(), block_identity(x), False)
        return Witness(-w2.s, w2.t @ rr)
    w2 = perturb_witness(w, 0)
    ll = _left_inverse(w2.product())
    return Witness(-(ll @ w2.s), w2.t)


def witness_power(w: Witness, m: int) -> Witness:
    """Witness whose index is ``m`` times the index of ``w``."""
    k = w.index()
    if m == 1:
        return w
    if m == 0:
        return Witness(block_zero(w.y_shape, w.x_shape), block_zero(w.x_shape, w.y_shape))
    if k == 0 and m < 0:
        return w
    out = _binomial(w, m) if m > 0 else _negate_index(w, k)
    if m < -1:
        out = _binomial(out, -m)
    if out.index() != k * m:
        raise ComputationError(f"power witness has index {out.index()}, wanted {k * m}")
    return out


def witness_compress(w: Witness, u, v) -> Compression:
    """Compress the witness onto ``ran U`` and ``ran V``."""
    u, v = as_block(u), as_block(v)
    if u.domain != w.x_shape or v.domain != w.y_shape:
        raise ShapeMismatch("witness shapes differ from the operator shapes")
    if not is_fredholm(w.dual_product()):
        raise NotFredholm("I - T S is not Fredholm")
    qu = _range_projection(u, _data(u))
    qv = _range_projection(v, _data(v))
    b1 = qv @ w.t @ qu
    b2 = qu @ w.s @ qv
    disc = w.t @ w.s - b1 @ b2
    return Compression(b1, b2, disc, index(block_identity(w.y_shape) - b1 @ b2))


# --- equivalence after extension ------------------------------------------------------

def _swap(x: SpaceShape, y: SpaceShape) -> tuple[BlockOp, BlockOp]:
    """``Pi: X + Y -> Y + X`` and its inverse."""
    nx, ny = len(x), len(y)
    order = [nx + i for i in range(ny)] + list(range(nx))
    pi = block_permute(x + y, order)
    back = [ny + i for i in range(nx)] + list(range(ny))
    return pi, block_permute(y + x, back)


def _seq_shift_op(y: SpaceShape, k: int) -> BlockOp:
    q = next(i for i, f in enumerate(y) if isinstance(f, Seq))
    ident = block_identity(y)
    rows = [tuple(shift(-k) if (i == j == q) else ident.entries[i][j]
                  for j in range(len(y))) for i in range(len(y))]
    return BlockOp(y, y, tuple(rows))


def eae_construct(u, v) -> Extension:
    """Invertible ``E, F`` with ``diag(U, I_Y) = E diag(V, I_X) F``."""
    u, v = as_block(u), as_block(v)
    du, dv = _data(u), _data(v)
    if not eae_check(du, dv):
        raise NotEAE(f"(α, β) = {(du.alpha, du.beta)} versus {(dv.alpha, dv.beta)}")
    x, y = u.domain, v.domain
    k = du.index
    pi, pi_inv = _swap(x, y)
    ix, iy = block_identity(x), block_identity(y)
    prefix = len(y) <= len(x) and tuple(x.factors[:len(y)]) == y.factors
    if k == 0 or (prefix and y.seq_count):
        if k == 0:
            w = None
        else:
            rest = SpaceShape(x.factors[len(y):]) if len(x) > len(y) else None
            w = witness_from_complemented(_seq_shift_op(y, k), rest)
        sc = sc_construct(w, u, v)
        zy, zx = block_zero(y, x), block_zero(x, y)
        bdi = sc.b @ sc.d_inv
        ca = sc.c @ sc.a_inv
        aib = sc.a_inv @ sc.b
        dic = sc.d_inv @ sc.c
        e0 = _blocks2(ix, -bdi, zx, iy) @ _blocks2(ix, zy, ca, iy)
        e0_inv = _blocks2(ix, zy, -ca, iy) @ _blocks2(ix, bdi, zx, iy)
        f0 = _blocks2(ix, aib, zx, iy) @ _blocks2(ix, zy, -dic, iy)
        f0_inv = _blocks2(ix, zy, dic, iy) @ _blocks2(ix, -aib, zx, iy)
        e = e0 @ pi_inv
        e_inv = pi @ e0_inv
        f = pi @ block_diag(sc.a, iy) @ f0 @ block_diag(ix, sc.d_inv)
        f_inv = block_diag(ix, sc.d) @ f0_inv @ block_diag(sc.a_inv, iy) @ pi_inv
    else:
        g1 = block_diag(u, iy)
        g2 = pi_inv @ block_diag(v, ix) @ pi
        a, a_inv = range_alignment_iso(g2, g1)
        m = _lift(g1, a @ g2, True)
        m_inv = invert(m)
        e, e_inv = a @ pi_inv, pi @ a_inv
        f, f_inv = pi @ m_inv, m @ pi_inv
    ext = Extension(e, e_inv, f, f_inv, x0=y, y0=x)
    if not eae_verify(u, v, ext, 8):
        raise ComputationError("constructed extension failed verification")
    return ext


def eae_verify(u, v, ext: Extension, n: int) -> bool:
    u, v = as_block(u), as_block(v)
    lhs = block_diag(u, block_identity(ext.x0))
    mid = block_diag(v, block_identity(ext.y0))
    if ext.e.domain != mid.codomain or ext.f.codomain != mid.domain \
            or ext.e.codomain != lhs.codomain or ext.f.domain != lhs.domain:
        raise ShapeMismatch("extension shapes do not match the operators")
    checks = [(ext.e @ ext.e_inv, block_identity(ext.e.codomain)),
              (ext.e_inv @ ext.e, block_identity(ext.e.domain)),
              (ext.f @ ext.f_inv, block_identity(ext.f.codomain)),
              (ext.f_inv @ ext.f, block_identity(ext.f.domain)),
              (ext.e @ mid @ ext.f, lhs)]
    return all(_agree(p, q, n) for p, q in checks)
