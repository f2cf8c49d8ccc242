"""Exact computations with equivalence after extension and Schur coupling.

Operators live on direct sums of one-sided sequence spaces and finite
blocks; every number is an exact rational unless a report says otherwise.
"""

from .errors import (BackendDisagreement, BetaMismatch, ComputationError, DependentInput,
                     EaescError, IndexMismatch, IndexObstruction, NotEAE, NotFredholm,
                     NotInvertible, NotRepresentable, SchemaError, ShapeMismatch,
                     ZeroIndexInput)
from .exact_linalg import (Mat, NO_SOLUTION, complement_basis, inverse, null_space, rank,
                           rref, solve)
from .symbol import LaurentSymbol, roots_inside_disk, symbol_det
from .seq_operator import (SEQ, BlockOp, Correction, Fin, FredholmData, Seq, SeqOp,
                           SpaceShape, apply, block_add, block_compose, block_diag,
                           block_identity, block_permute, block_scale, block_zero,
                           finite_op, fredholm_data, head_tail_iso, identity_op, index,
                           invert, is_fredholm, matrix_op, op_add, op_compose, op_scale,
                           range_alignment_iso, shift, zero_op)
from .coupling import (Compression, Extension, SchurCouple, Witness, couple_from_MN,
                       eae_check, eae_construct, eae_verify, perturb_kernel, perturb_witness,
                       sc_construct, sc_extend_blockdiag, sc_verify, witness_compress,
                       witness_from_complemented, witness_power)
from .space_calculus import (Atom, IdealBounds, IdealZ, IscBounds, RelationTable, Sum,
                             Verdict, VerdictKind, builtin_scenario, builtin_scenarios,
                             direct_sum, eae_index, ideal_contains, ideal_intersect,
                             ideal_sum, iphi_of, isc_bounds, sc_index, verdict)

__version__ = "0.1.0"
