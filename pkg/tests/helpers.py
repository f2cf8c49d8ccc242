"""Random operators, shapes and witnesses shared by the test modules."""

import random
from fractions import Fraction

import numpy as np

from eaesc import (BlockOp, Correction, Fin, LaurentSymbol, Seq, SeqOp, SpaceShape, Witness,
                   block_diag, block_identity, fredholm_data, perturb_kernel, shift,
                   witness_from_complemented)

SEQ1 = SpaceShape.of(Seq())


def frac(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
        if v or not nonzero:
            return v


def corr(rng, rows: int, cols: int, nnz: int) -> Correction:
    if rows < 1 or cols < 1:
        return Correction()
    return Correction.from_map({(rng.randint(1, rows), rng.randint(1, cols)): frac(rng)
                                for _ in range(nnz)})


def seq_op(rng, d: int, size: int = 3, nnz: int = 2) -> SeqOp:
    """``c z**d`` plus a random correction inside a ``size`` square."""
    return SeqOp(LaurentSymbol.monomial(frac(rng, nonzero=True), d), corr(rng, size, size, nnz))


def degrees_for(rng, seq_count: int, k: int) -> list:
    """Shift degrees on ``seq_count`` diagonal positions with total index ``k``."""
    if seq_count == 1:
        return [-k]
    ds = [rng.randint(-2, 2) for _ in range(seq_count - 1)]
    return ds + [-k - sum(ds)]


def block_op(rng, shape: SpaceShape, k: int, size: int = 3) -> BlockOp:
    """Square block operator of index ``k``: monomials on the Seq diagonal, random elsewhere."""
    seq_pos = [i for i, f in enumerate(shape) if isinstance(f, Seq)]
    degs = dict(zip(seq_pos, degrees_for(rng, len(seq_pos), k)))
    rows = []
    for i, fi in enumerate(shape):
        row = []
        for j, fj in enumerate(shape):
            if i == j and isinstance(fi, Seq):
                row.append(seq_op(rng, degs[i], size))
            elif isinstance(fi, Seq) and isinstance(fj, Seq):
                row.append(SeqOp(LaurentSymbol(), corr(rng, size, size, rng.randint(0, 1))))
            else:
                r = fi.n if isinstance(fi, Fin) else size
                c = fj.n if isinstance(fj, Fin) else size
                row.append(SeqOp(LaurentSymbol(), corr(rng, r, c, rng.randint(0, 2))))
        rows.append(tuple(row))
    return BlockOp(shape, shape, tuple(rows))


def eae_pair(rng, x: SpaceShape, y: SpaceShape, k: int):
    """Random ``u`` on x and ``v`` on y of index ``k`` with matching kernel dimensions."""
    u, v = block_op(rng, x, k), block_op(rng, y, k)
    du, dv = fredholm_data(u), fredholm_data(v)
    if du.alpha < dv.alpha:
        u = u + perturb_kernel(u, dv.alpha)
    elif dv.alpha < du.alpha:
        v = v + perturb_kernel(v, du.alpha)
    return u, v


def complemented_witness(x: SpaceShape, y: SpaceShape, r_x, r_y) -> Witness:
    """Witness X <-> Y from an index-k operator on the smaller side.

    Needs ``x = y + z`` or ``y = x + z`` for a shape ``z`` (or equal shapes).
    """
    if len(x) >= len(y):
        z = SpaceShape(x.factors[len(y):]) if len(x) > len(y) else None
        if x.factors[:len(y)] != y.factors:
            raise ValueError("y is not a leading summand of x")
        return witness_from_complemented(r_y, z)
    z = SpaceShape(y.factors[len(x):])
    if y.factors[:len(x)] != x.factors:
        raise ValueError("x is not a leading summand of y")
    w = witness_from_complemented(r_x, z)
    return Witness(w.t, w.s)


def shift_block(shape: SpaceShape, k: int) -> BlockOp:
    """``shift(-k)`` on the first factor, identity on the rest."""
    if len(shape) == 1:
        return block_diag(shift(-k))
    return block_diag(shift(-k), block_identity(SpaceShape(shape.factors[1:])))


def finite_noise(rng, dom: SpaceShape, cod: SpaceShape) -> BlockOp:
    rows = []
    for g in cod:
        r = g.n if isinstance(g, Fin) else 3
        rows.append(tuple(SeqOp(correction=corr(rng, r, f.n if isinstance(f, Fin) else 3, 2))
                          for f in dom))
    return BlockOp(dom, cod, tuple(rows))


def random_witness(rng, x: SpaceShape, y: SpaceShape, k: int) -> Witness:
    """Complemented witness of index k, then finite-rank noise on S and T."""
    r_small = block_op(rng, x if len(x) <= len(y) else y, k)
    w = complemented_witness(x, y, r_small, r_small)
    return Witness(w.s + finite_noise(rng, y, x), w.t + finite_noise(rng, x, y))


def dense_alpha(t: BlockOp, n: int = 24) -> int:
    """Kernel dimension from a float section of ``n`` columns per Seq factor.

    Independent of the library's exact path; valid for monomial symbols once
    ``n`` exceeds the correction support plus the shift degree.
    """
    cols = t.domain.coords(n)
    rows = t.codomain.coords(n + 8)
    a = np.zeros((len(rows), len(cols)))
    pos = {c: i for i, c in enumerate(rows)}
    for j, (f, c) in enumerate(cols):
        for g in range(len(t.codomain)):
            for r in range(1, (t.codomain[g].n if isinstance(t.codomain[g], Fin) else n + 8) + 1):
                v = t.entries[g][f].entry(r, c)
                if v:
                    a[pos[(g, r)], j] = float(v)
    return len(cols) - int(np.linalg.matrix_rank(a))
