"""Realizing space-level verdicts with concrete operators.

Atoms whose Fredholm-index ideal is all of Z are modelled by one ``Seq``
factor each.  An ``EqualNonempty`` verdict at index ``k`` is then backed by
an explicit Schur coupling built and checked in that model.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coupling import Witness, sc_construct, sc_verify, witness_from_complemented
from .seq_operator import Seq, SpaceShape, block_diag, block_identity, shift
from .space_calculus import atoms_of


@dataclass(frozen=True)
class Realization:
    k: int
    x_shape: SpaceShape
    y_shape: SpaceShape
    verified: bool
    window: int


def shift_realizable(x, y) -> bool:
    return all(a.iphi == 1 for a in atoms_of(x) + atoms_of(y))


def _model_op(shape: SpaceShape, k: int):
    """``shift(-k) ⊕ I``, Fredholm of index ``k``."""
    head = shift(-k)
    if len(shape) == 1:
        return block_diag(head)
    return block_diag(head, block_identity(SpaceShape(shape.factors[1:])))


def _witness(xs: SpaceShape, ys: SpaceShape, k: int) -> Witness:
    nx, ny = len(xs), len(ys)
    if nx >= ny:
        z = SpaceShape.of(*[Seq()] * (nx - ny)) if nx > ny else None
        return witness_from_complemented(_model_op(ys, k), z)
    # X is the smaller side: build on Y and swap, using ker(I - ST) ≅ ker(I - TS)
    z = SpaceShape.of(*[Seq()] * (ny - nx))
    w = witness_from_complemented(_model_op(xs, k), z)
    return Witness(w.t, w.s)


def realize_sc(x, y, k: int, window: int = 50) -> Realization:
    """Build and verify a Schur coupling of index ``k`` between the models of x and y."""
    xs = SpaceShape.of(*[Seq()] * len(atoms_of(x)))
    ys = SpaceShape.of(*[Seq()] * len(atoms_of(y)))
    u, v = _model_op(xs, k), _model_op(ys, k)
    w = _witness(xs, ys, k)
    couple = sc_construct(w, u, v)
    return Realization(k, xs, ys, sc_verify(u, v, couple, window), window)
