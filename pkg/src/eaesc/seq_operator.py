"""Banded Toeplitz-plus-finite-rank operators on the one-sided sequence space.

Matrix convention: ``T[i, j] = a[i - j] + F[i, j]`` with 1-based indices, so the
symbol ``z**d`` is the forward shift ``e_n -> e_{n+d}`` and has index ``-d``.

Block operators act between direct sums of sequence copies (``Seq``) and
finite-dimensional factors (``Fin(n)``).  Every block entry is a :class:`SeqOp`;
entries touching a ``Fin`` factor have a zero symbol and a correction bounded by
the factor dimension.  Vectors are sparse dicts ``{(factor, coord): Fraction}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (BackendDisagreement, BetaMismatch, NotFredholm, NotInvertible,
                     NotRepresentable, ShapeMismatch)
from .exact_linalg import (Mat, as_scalar, column_basis, complement_basis, inverse,
                           null_space, solve_multi, NO_SOLUTION)
from .symbol import LaurentSymbol, symbol_det

ZERO = Fraction(0)
ONE = Fraction(1)

NUMERIC_TOLERANCE = 1e-9
RECHECK_MARGIN = 5


# --- corrections and single operators ---------------------------------------------

@dataclass(frozen=True)
class Correction:
    """Sparse finite matrix ``{(row, col): value}`` with 1-based indices."""

    entries: tuple = ()  # sorted ((row, col), Fraction) pairs, values nonzero
    _map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _cols: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        acc: dict = {}
        for (r, c), v in self.entries:
            r, c = int(r), int(c)
            if r < 1 or c < 1:
                raise ShapeMismatch(f"correction index ({r}, {c}) below 1")
            acc[(r, c)] = acc.get((r, c), ZERO) + as_scalar(v)
        items = tuple(sorted((k, v) for k, v in acc.items() if v))
        object.__setattr__(self, "entries", items)
        object.__setattr__(self, "_map", dict(items))
        cols: dict = {}
        for (r, c), v in items:
            cols.setdefault(c, []).append((r, v))
        object.__setattr__(self, "_cols", cols)

    @classmethod
    def from_map(cls, m: Mapping) -> "Correction":
        return cls(tuple(m.items()))

    def get(self, r: int, c: int) -> Fraction:
        return self._map.get((r, c), ZERO)

    def column(self, c: int) -> list:
        return self._cols.get(c, [])

    def as_dict(self) -> dict:
        return dict(self._map)

    @property
    def support_bound(self) -> int:
        return max((max(r, c) for (r, c), _ in self.entries), default=0)

    @property
    def max_row(self) -> int:
        return max((r for (r, _), _ in self.entries), default=0)

    @property
    def max_col(self) -> int:
        return max((c for (_, c), _ in self.entries), default=0)

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class SeqOp:
    symbol: LaurentSymbol = LaurentSymbol()
    correction: Correction = Correction()

    def entry(self, i: int, j: int) -> Fraction:
        return self.symbol.get(i - j) + self.correction.get(i, j)

    def column(self, j: int) -> dict:
        out: dict = {}
        for s, a in self.symbol.coeffs:
            if j + s >= 1:
                out[j + s] = a
        for r, v in self.correction.column(j):
            out[r] = out.get(r, ZERO) + v
        return {r: v for r, v in out.items() if v}

    @property
    def is_zero(self) -> bool:
        return self.symbol.is_zero and not self.correction

    @property
    def bound(self) -> int:
        return self.correction.support_bound

    def __add__(self, other: "SeqOp") -> "SeqOp":
        corr = self.correction.as_dict()
        for k, v in other.correction.entries:
            corr[k] = corr.get(k, ZERO) + v
        return SeqOp(self.symbol + other.symbol, Correction.from_map(corr))

    def __neg__(self) -> "SeqOp":
        return self.scale(-1)

    def __sub__(self, other: "SeqOp") -> "SeqOp":
        return self + (-other)

    def scale(self, c) -> "SeqOp":
        c = as_scalar(c)
        return SeqOp(self.symbol.scale(c),
                     Correction(tuple((k, c * v) for k, v in self.correction.entries)))

    def __matmul__(self, other: "SeqOp") -> "SeqOp":
        return op_compose(self, other)

    def __str__(self) -> str:
        s = f"symbol {self.symbol}"
        if self.correction:
            s += f", correction rank<= {len(self.correction.entries)} within {self.bound}"
        return s


def shift(d: int) -> SeqOp:
    """Forward shift by ``d`` (backward for negative ``d``); symbol ``z**d``."""
    return SeqOp(LaurentSymbol.monomial(1, d))


def identity_op() -> SeqOp:
    return shift(0)


def zero_op() -> SeqOp:
    return SeqOp()


def finite_op(entries: Mapping) -> SeqOp:
    """Pure finite-rank operator from ``{(row, col): value}``."""
    return SeqOp(LaurentSymbol(), Correction.from_map(entries))


def op_add(a: SeqOp, b: SeqOp) -> SeqOp:
    return a + b


def op_scale(c, a: SeqOp) -> SeqOp:
    return a.scale(c)


def op_compose(a: SeqOp, b: SeqOp) -> SeqOp:
    """Exact ``a ∘ b``; the correction collects one-sided boundary terms and cross terms."""
    corr: dict = {}

    def put(r, c, v):
        corr[(r, c)] = corr.get((r, c), ZERO) + v

    # Toeplitz(a) Toeplitz(b) = Toeplitz(ab) minus the sum over indices k <= 0
    for s, av in a.symbol.coeffs:
        for t, bv in b.symbol.coeffs:
            for k in range(max(1 - s, 1 + t), 1):
                put(k + s, k - t, -av * bv)
    for (r, c), g in b.correction.entries:
        for s, av in a.symbol.coeffs:
            if r + s >= 1:
                put(r + s, c, av * g)
    for (r, c), f in a.correction.entries:
        for t, bv in b.symbol.coeffs:
            if c - t >= 1:
                put(r, c - t, f * bv)
    # F G
    rows_of_b: dict = {}
    for (r, c), g in b.correction.entries:
        rows_of_b.setdefault(r, []).append((c, g))
    for (r, c), f in a.correction.entries:
        for c2, g in rows_of_b.get(c, []):
            put(r, c2, f * g)
    return SeqOp(a.symbol * b.symbol, Correction.from_map(corr))


# --- shapes and block operators ---------------------------------------------------

@dataclass(frozen=True)
class Seq:
    def __str__(self) -> str:
        return "Seq"


@dataclass(frozen=True)
class Fin:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ShapeMismatch("finite factor of negative dimension")

    def __str__(self) -> str:
        return f"Fin({self.n})"


@dataclass(frozen=True)
class SpaceShape:
    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise ShapeMismatch("a shape needs at least one factor")
        if not all(isinstance(f, (Seq, Fin)) for f in fs):
            raise ShapeMismatch("shape factors must be Seq or Fin")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def of(cls, *factors) -> "SpaceShape":
        return cls(tuple(factors))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def __add__(self, other: "SpaceShape") -> "SpaceShape":
        return SpaceShape(self.factors + other.factors)

    @property
    def seq_count(self) -> int:
        return sum(isinstance(f, Seq) for f in self.factors)

    @property
    def fin_dim(self) -> int:
        return sum(f.n for f in self.factors if isinstance(f, Fin))

    def coords(self, w: int) -> list:
        """Coordinates ``(factor, index)``: ``1..w`` on Seq factors, all of each Fin."""
        out = []
        for k, f in enumerate(self.factors):
            top = w if isinstance(f, Seq) else f.n
            out.extend((k, i) for i in range(1, top + 1))
        return out

    def __str__(self) -> str:
        return "[" + ", ".join(str(f) for f in self.factors) + "]"


SEQ = SpaceShape.of(Seq())


def _check_entry(op: SeqOp, src, dst, where: str):
    if isinstance(src, Seq) and isinstance(dst, Seq):
        return
    if not op.symbol.is_zero:
        raise ShapeMismatch(f"{where}: entry touching a finite factor has a symbol")
    if isinstance(dst, Fin) and op.correction.max_row > dst.n:
        raise ShapeMismatch(f"{where}: row beyond Fin({dst.n})")
    if isinstance(src, Fin) and op.correction.max_col > src.n:
        raise ShapeMismatch(f"{where}: column beyond Fin({src.n})")


@dataclass(frozen=True)
class BlockOp:
    domain: SpaceShape
    codomain: SpaceShape
    entries: tuple  # entries[i][j]: domain factor j -> codomain factor i

    def __post_init__(self):
        grid = tuple(tuple(row) for row in self.entries)
        if len(grid) != len(self.codomain) or any(len(r) != len(self.domain) for r in grid):
            raise ShapeMismatch("block grid does not match the shapes")
        for i, row in enumerate(grid):
            for j, op in enumerate(row):
                if not isinstance(op, SeqOp):
                    raise ShapeMismatch(f"block ({i}, {j}) is not an operator")
                _check_entry(op, self.domain[j], self.codomain[i], f"block ({i}, {j})")
        object.__setattr__(self, "entries", grid)

    def __getitem__(self, ij) -> SeqOp:
        i, j = ij
        return self.entries[i][j]

    @property
    def bound(self) -> int:
        return max((op.bound for row in self.entries for op in row), default=0)

    def symbol_grid(self) -> list:
        """Symbols of the Seq -> Seq entries, indexed by Seq-factor positions."""
        di = [j for j, f in enumerate(self.domain) if isinstance(f, Seq)]
        ci = [i for i, f in enumerate(self.codomain) if isinstance(f, Seq)]
        return [[self.entries[i][j].symbol for j in di] for i in ci]

    def __matmul__(self, other: "BlockOp") -> "BlockOp":
        return block_compose(self, other)

    def __add__(self, other: "BlockOp") -> "BlockOp":
        return block_add(self, other)

    def __sub__(self, other: "BlockOp") -> "BlockOp":
        return block_add(self, block_scale(-1, other))

    def __neg__(self) -> "BlockOp":
        return block_scale(-1, self)

    def __str__(self) -> str:
        return f"BlockOp {self.domain} -> {self.codomain}"


def as_block(t) -> BlockOp:
    if isinstance(t, BlockOp):
        return t
    if isinstance(t, SeqOp):
        return BlockOp(SEQ, SEQ, ((t,),))
    raise TypeError(f"expected SeqOp or BlockOp, got {type(t).__name__}")


def block_zero(domain: SpaceShape, codomain: SpaceShape) -> BlockOp:
    return BlockOp(domain, codomain,
                   tuple(tuple(SeqOp() for _ in domain) for _ in codomain))


def block_identity(shape: SpaceShape) -> BlockOp:
    rows = []
    for i, f in enumerate(shape):
        row = []
        for j in range(len(shape)):
            if i != j:
                row.append(SeqOp())
            elif isinstance(f, Seq):
                row.append(identity_op())
            else:
                row.append(finite_op({(k, k): 1 for k in range(1, f.n + 1)}))
        rows.append(tuple(row))
    return BlockOp(shape, shape, tuple(rows))


def block_compose(a, b) -> BlockOp:
    a, b = as_block(a), as_block(b)
    if a.domain != b.codomain:
        raise ShapeMismatch(f"cannot compose {a} after {b}")
    rows = []
    for i in range(len(a.codomain)):
        row = []
        for j in range(len(b.domain)):
            acc = SeqOp()
            for k in range(len(a.domain)):
                x, y = a.entries[i][k], b.entries[k][j]
                if not x.is_zero and not y.is_zero:
                    acc = acc + op_compose(x, y)
            row.append(acc)
        rows.append(tuple(row))
    return BlockOp(b.domain, a.codomain, tuple(rows))


def block_add(a, b) -> BlockOp:
    a, b = as_block(a), as_block(b)
    if a.domain != b.domain or a.codomain != b.codomain:
        raise ShapeMismatch(f"cannot add {a} and {b}")
    return BlockOp(a.domain, a.codomain,
                   tuple(tuple(x + y for x, y in zip(ra, rb))
                         for ra, rb in zip(a.entries, b.entries)))


def block_scale(c, a) -> BlockOp:
    a = as_block(a)
    return BlockOp(a.domain, a.codomain,
                   tuple(tuple(x.scale(c) for x in row) for row in a.entries))


def block_diag(*ops) -> BlockOp:
    """Operators on the diagonal, zeros elsewhere."""
    ops = [as_block(o) for o in ops]
    if not ops:
        raise ShapeMismatch("block_diag of nothing")
    dom = SpaceShape(tuple(f for o in ops for f in o.domain))
    cod = SpaceShape(tuple(f for o in ops for f in o.codomain))
    rows = []
    col0 = 0
    for o in ops:
        for r in o.entries:
            row = [SeqOp()] * len(dom)
            row[col0:col0 + len(o.domain)] = r
            rows.append(tuple(row))
        col0 += len(o.domain)
    return BlockOp(dom, cod, tuple(rows))


def block_permute(shape: SpaceShape, order: Sequence[int]) -> BlockOp:
    """Reorders factors: factor ``order[i]`` of ``shape`` becomes factor ``i``."""
    order = list(order)
    if sorted(order) != list(range(len(shape))):
        raise ShapeMismatch(f"{order} is not a permutation of {len(shape)} factors")
    ident = block_identity(shape)
    cod = SpaceShape(tuple(shape[k] for k in order))
    rows = []
    for k in order:
        rows.append(tuple(ident.entries[k][j] if j == k else SeqOp()
                          for j in range(len(shape))))
    return BlockOp(shape, cod, tuple(rows))


def block_from_grid(domain: SpaceShape, codomain: SpaceShape, grid) -> BlockOp:
    return BlockOp(domain, codomain, tuple(tuple(r) for r in grid))


def matrix_op(m) -> SeqOp:
    """Finite matrix (Mat or rows) as a correction-only entry."""
    rows = m.to_rows() if isinstance(m, Mat) else [[as_scalar(x) for x in r] for r in m]
    return finite_op({(i + 1, j + 1): v for i, r in enumerate(rows)
                      for j, v in enumerate(r) if v})


def head_tail_iso(shape: SpaceShape, j: int) -> tuple[BlockOp, BlockOp]:
    """``x -> ((x_1..x_j), tail shifted down by j)`` on the leading Seq factor.

    Returns ``(L, L_inverse)`` with ``L: shape -> [Fin(j)] + shape``.
    """
    if j < 0:
        raise ShapeMismatch("negative head size")
    if not isinstance(shape[0], Seq):
        raise ShapeMismatch("head_tail_iso needs a leading Seq factor")
    cod = SpaceShape((Fin(j),) + shape.factors)
    head = finite_op({(i, i): 1 for i in range(1, j + 1)})
    ident = block_identity(shape)
    n = len(shape)
    fwd = [tuple([head] + [SeqOp()] * (n - 1))]
    back_cols = [head]
    for i in range(n):
        row = list(ident.entries[i])
        if i == 0:
            row[0] = shift(-j)
        fwd.append(tuple(row))
    inv = []
    for i in range(n):
        row = [back_cols[0] if i == 0 else SeqOp()] + list(ident.entries[i])
        if i == 0:
            row[1] = shift(j)
        inv.append(tuple(row))
    return BlockOp(shape, cod, tuple(fwd)), BlockOp(cod, shape, tuple(inv))


# --- vectors ------------------------------------------------------------------------

def _as_vector(x, shape: SpaceShape) -> dict:
    if isinstance(x, Mapping):
        out = {}
        for k, v in x.items():
            if isinstance(k, tuple):
                f, i = k
            elif len(shape) == 1:
                f, i = 0, k
            else:
                raise ShapeMismatch("vector keys must be (factor, coord) pairs")
            out[(int(f), int(i))] = as_scalar(v)
    elif len(shape) == 1:
        out = {(0, i + 1): as_scalar(v) for i, v in enumerate(x)}
    else:
        out = {(f, i + 1): as_scalar(v) for f, part in enumerate(x)
               for i, v in enumerate(part)}
    for (f, i), _ in out.items():
        if not 0 <= f < len(shape) or i < 1:
            raise ShapeMismatch(f"coordinate {(f, i)} outside {shape}")
        if isinstance(shape[f], Fin) and i > shape[f].n:
            raise ShapeMismatch(f"coordinate {(f, i)} outside {shape}")
    return {k: v for k, v in out.items() if v}


def apply_vec(t, x) -> dict:
    """Full image ``T x`` of a finitely supported vector."""
    t = as_block(t)
    x = _as_vector(x, t.domain)
    out: dict = {}
    for (f, j), v in x.items():
        for g in range(len(t.codomain)):
            for r, a in t.entries[g][f].column(j).items():
                out[(g, r)] = out.get((g, r), ZERO) + a * v
    return {k: v for k, v in out.items() if v}


def apply(t, x, n: int):
    """First ``n`` coordinates of ``T x`` (all coordinates of Fin factors)."""
    if n < 1:
        raise ShapeMismatch("prefix length must be at least 1")
    single = isinstance(t, SeqOp)
    t = as_block(t)
    y = apply_vec(t, x)
    parts = []
    for g, f in enumerate(t.codomain):
        top = n if isinstance(f, Seq) else f.n
        parts.append(tuple(y.get((g, i), ZERO) for i in range(1, top + 1)))
    return parts[0] if single else tuple(parts)


def window_matrix(t, cols: list, rows: list) -> list:
    """Rows of the section of ``t`` on the given coordinate lists."""
    t = as_block(t)
    pos = {c: i for i, c in enumerate(rows)}
    m = [[ZERO] * len(cols) for _ in rows]
    for j, (f, c) in enumerate(cols):
        for g in range(len(t.codomain)):
            for r, a in t.entries[g][f].column(c).items():
                i = pos.get((g, r))
                if i is not None:
                    m[i][j] = a
    return m


# --- Fredholm theory ----------------------------------------------------------------

def _square_symbol(t: BlockOp) -> list | None:
    grid = t.symbol_grid()
    if t.domain.seq_count != t.codomain.seq_count:
        return None
    return grid


def is_fredholm(t) -> bool:
    """Exact test that the symbol (its determinant, for blocks) avoids the unit circle."""
    if isinstance(t, SeqOp):
        return not t.symbol.vanishes_on_circle()
    grid = _square_symbol(t)
    if grid is None:
        return False
    if not grid:
        return True
    return not symbol_det(grid).vanishes_on_circle()


def index(t) -> int:
    """Minus the winding number of the symbol, plus the finite-dimension balance."""
    if not is_fredholm(t):
        raise NotFredholm("symbol vanishes on the unit circle")
    if isinstance(t, SeqOp):
        return -t.symbol.winding()
    grid = _square_symbol(t)
    wind = symbol_det(grid).winding() if grid else 0
    return -wind + t.domain.fin_dim - t.codomain.fin_dim


def monomial_band(t) -> int | None:
    """Largest shift in a monomial-permutation symbol, or None outside that class."""
    t = as_block(t)
    grid = _square_symbol(t)
    if grid is None:
        return None
    n = len(grid)
    used_cols = set()
    band = 0
    for row in grid:
        nz = [j for j, s in enumerate(row) if not s.is_zero]
        if len(nz) != 1 or not row[nz[0]].is_monomial or nz[0] in used_cols:
            return None
        used_cols.add(nz[0])
        band = max(band, row[nz[0]].width)
    return band if len(used_cols) == n else None


def band_width(t) -> int:
    t = as_block(t)
    return max((op.symbol.width for row in t.entries for op in row), default=0)


@dataclass(frozen=True)
class FredholmData:
    alpha: int
    beta: int
    index: int
    kernel_basis: tuple  # sparse vectors {(factor, coord): Fraction}
    range_complement: tuple
    window: int
    certified: bool = True
    backend: str = "exact"

    def summary(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "index": self.index,
                "window": self.window,
                "status": "exact" if self.certified else "non-certified"}


def _to_sparse(vec, coords) -> dict:
    return {c: v for c, v in zip(coords, vec) if v}


def _exact_sections(t: BlockOp, w: int, band: int):
    kcols = t.domain.coords(w)
    krows = t.codomain.coords(w + band)
    kernel = null_space(window_matrix(t, kcols, krows)) if kcols else []
    hrows = t.codomain.coords(w)
    hcols = t.domain.coords(w + band)
    head = window_matrix(t, hcols, hrows)
    basis = column_basis(head) if hrows and hcols else []
    comp = complement_basis(basis, len(hrows))
    return ([_to_sparse(v, kcols) for v in kernel],
            [_to_sparse(v, hrows) for v in comp])


def exact_window(t) -> int:
    t = as_block(t)
    band = monomial_band(t)
    return t.bound + (band or 0) + 1


def fredholm_data(t, backend: str = "auto", tolerance: float = NUMERIC_TOLERANCE) -> FredholmData:
    """α, β, index, kernel basis and range complement.

    The exact backend covers monomial-permutation symbols, where kernels are finitely
    supported and the range contains every coordinate past the window.  Other
    Fredholm symbols fall back to singular-value counts on finite sections.
    """
    t = as_block(t)
    if not is_fredholm(t):
        raise NotFredholm("symbol vanishes on the unit circle")
    ind = index(t)
    band = monomial_band(t)
    if backend == "numeric" or (band is None and backend == "auto"):
        return _numeric_data(t, ind, tolerance)
    if band is None:
        raise NotRepresentable("exact Fredholm data needs a monomial symbol")
    w = t.bound + band + 1
    kernel, comp = _exact_sections(t, w, band)
    k2, c2 = _exact_sections(t, w + RECHECK_MARGIN, band)
    if (len(kernel), len(comp)) != (len(k2), len(c2)):
        raise BackendDisagreement(
            f"window {w} gives (α, β) = {(len(kernel), len(comp))}, "
            f"window {w + RECHECK_MARGIN} gives {(len(k2), len(c2))}")
    if len(kernel) - len(comp) != ind:
        raise BackendDisagreement("window counts contradict the symbol index")
    return FredholmData(len(kernel), len(comp), ind, tuple(kernel), tuple(comp), w)


def _numeric_window(t: BlockOp) -> int:
    grid = _square_symbol(t)
    base = 2 * (t.bound + band_width(t) + 1)
    if not grid:
        return max(base, 8)
    det = symbol_det(grid)
    p = det.numerator()
    if len(p) < 2:
        return max(base, 64)
    roots = np.roots([float(c) for c in reversed(p)])
    # slowest geometric decay among recurrence solutions sets the section size
    rho = max(min(abs(r), 1 / abs(r)) if abs(r) > 0 else 0.0 for r in roots)
    need = 64 if rho <= 0 else int(math.ceil(math.log(1e-13) / math.log(rho)))
    return max(base, 64, min(need + base, 4000))


def _numeric_counts(t: BlockOp, n: int, band: int, tolerance: float):
    def small(mat, cols_side: bool):
        a = np.array([[float(v) for v in r] for r in mat], dtype=float)
        if a.size == 0:
            return 0, a, None
        u, s, vt = np.linalg.svd(a)
        smax = s[0] if s.size else 0.0
        big = int(np.sum(s > tolerance * max(smax, 1.0)))
        return big, u, vt

    kcols = t.domain.coords(n)
    krows = t.codomain.coords(n + band)
    big_k, _, vt = small(window_matrix(t, kcols, krows), True)
    alpha = len(kcols) - big_k
    hrows = t.codomain.coords(n)
    hcols = t.domain.coords(n + band)
    big_r, u, _ = small(window_matrix(t, hcols, hrows), False)
    beta = len(hrows) - big_r
    kern = [] if vt is None else [vt[-(i + 1)] for i in range(alpha)]
    comp = [] if u is None or not hcols else [u[:, -(i + 1)] for i in range(beta)]
    return alpha, beta, (kern, kcols), (comp, hrows)


def _approx(vecs, coords) -> tuple:
    out = []
    for v in vecs:
        out.append({c: Fraction(float(x)).limit_denominator(10 ** 12)
                    for c, x in zip(coords, v) if abs(x) > 1e-12})
    return tuple(out)


def _numeric_data(t: BlockOp, ind: int, tolerance: float) -> FredholmData:
    band = band_width(t)
    n1 = _numeric_window(t)
    n2 = 2 * n1
    a1, b1, (k1, kc), (c1, hr) = _numeric_counts(t, n1, band, tolerance)
    a2, b2, _, _ = _numeric_counts(t, n2, band, tolerance)
    if (a1, b1) != (a2, b2):
        raise BackendDisagreement(
            f"sections {n1} and {n2} give (α, β) = {(a1, b1)} and {(a2, b2)}")
    if a1 - b1 != ind:
        raise BackendDisagreement(
            f"numeric (α, β) = {(a1, b1)} contradicts the exact index {ind}")
    return FredholmData(a1, b1, ind, _approx(k1, kc), _approx(c1, hr), n1,
                        certified=False, backend="numeric")


# --- exact solves, inverses and isomorphisms ------------------------------------------

def _max_seq_coord(v: Mapping, shape: SpaceShape) -> int:
    return max((i for (f, i) in v if isinstance(shape[f], Seq)), default=0)


def solve_preimages(t, ys: Sequence[Mapping], exclude: Iterable = (),
                    extra: Sequence = ()) -> list:
    """Exact ``x`` with ``T x + sum c_i extra_i = y`` for each ``y``, or None.

    Only for monomial-permutation symbols, where preimages of finitely supported
    vectors stay inside a computable window.  Items are ``(x, coefficients)``.
    """
    t = as_block(t)
    band = monomial_band(t)
    if band is None:
        raise NotRepresentable("exact preimages need a monomial symbol")
    top = max([t.bound] + [_max_seq_coord(y, t.codomain) for y in ys]
              + [_max_seq_coord(e, t.codomain) for e in extra]) + band + 2
    skip = set(exclude)
    cols = [c for c in t.domain.coords(top) if c not in skip]
    rows = t.codomain.coords(top + band)
    rowset = set(rows)
    m = window_matrix(t, cols, rows)
    for e in extra:
        for i, r in enumerate(rows):
            m[i].append(e.get(r, ZERO))
    rhs = []
    for y in ys:
        if any(c not in rowset for c, v in y.items() if v):
            raise ShapeMismatch("right-hand side outside the codomain")
        rhs.append([y.get(r, ZERO) for r in rows])
    if not cols and not extra:
        return [None if any(b) else ({}, ()) for b in rhs]
    out = []
    for sol in solve_multi(m, rhs):
        if sol is NO_SOLUTION:
            out.append(None)
        else:
            out.append(({c: v for c, v in zip(cols, sol) if v}, tuple(sol[len(cols):])))
    return out


def solve_preimage(t, y: Mapping, exclude: Iterable = (), extra: Sequence = ()):
    return solve_preimages(t, [y], exclude, extra)[0]


def toeplitz_column(s: LaurentSymbol, j: int) -> dict:
    return {j + d: a for d, a in s.coeffs if j + d >= 1}


def from_columns(domain: SpaceShape, codomain: SpaceShape, symbols: Mapping,
                 columns: Mapping) -> BlockOp:
    """Operator with Seq-to-Seq symbols ``symbols[(i, j)]`` whose listed columns equal
    ``columns[(factor, coord)]``; every other column is the pure Toeplitz one."""
    corr = {(i, j): {} for i in range(len(codomain)) for j in range(len(domain))}
    for (f, c), vec in columns.items():
        want: dict = {}
        for (g, r), v in vec.items():
            want.setdefault(g, {})[r] = v
        for g in range(len(codomain)):
            base = toeplitz_column(symbols.get((g, f), LaurentSymbol()), c)
            col = want.get(g, {})
            for r in set(base) | set(col):
                diff = col.get(r, ZERO) - base.get(r, ZERO)
                if diff:
                    corr[(g, f)][(r, c)] = diff
    grid = [[SeqOp(symbols.get((i, j), LaurentSymbol()), Correction.from_map(corr[(i, j)]))
             for j in range(len(domain))] for i in range(len(codomain))]
    return BlockOp(domain, codomain, tuple(tuple(r) for r in grid))


def seq_positions(shape: SpaceShape) -> list:
    return [k for k, f in enumerate(shape) if isinstance(f, Seq)]


def symbol_map(t: BlockOp) -> dict:
    return {(i, j): t.entries[i][j].symbol for i in range(len(t.codomain))
            for j in range(len(t.domain)) if not t.entries[i][j].symbol.is_zero}


def inverse_symbol_map(t: BlockOp) -> dict:
    """Symbols of the inverse of a monomial-permutation operator."""
    if monomial_band(t) is None:
        raise NotRepresentable("symbol inverse needs a monomial symbol")
    return {(j, i): s.inverse_monomial() for (i, j), s in symbol_map(t).items()}


def compose_symbol_maps(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for (i, k), s in a.items():
        for (k2, j), t in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), LaurentSymbol()) + s * t
    return {k: v for k, v in out.items() if not v.is_zero}


def is_identity(t: BlockOp) -> bool:
    return t.domain == t.codomain and t == block_identity(t.domain)


def invert(t) -> BlockOp:
    """Exact two-sided inverse, certified by composing both ways."""
    single = isinstance(t, SeqOp)
    t = as_block(t)
    band = monomial_band(t)
    if band is None:
        raise NotInvertible("only monomial-symbol operators are inverted exactly")
    if t.domain.fin_dim != t.codomain.fin_dim or not is_fredholm(t) or index(t) != 0:
        raise NotInvertible("operator is not invertible")
    head = t.bound + 2 * band + 2
    coords = t.codomain.coords(head)
    columns = {}
    for c, got in zip(coords, solve_preimages(t, [{c: ONE} for c in coords])):
        if got is None:
            raise NotInvertible(f"coordinate {c} is not in the range")
        columns[c] = got[0]
    inv = from_columns(t.codomain, t.domain, inverse_symbol_map(t), columns)
    if not (is_identity(t @ inv) and is_identity(inv @ t)):
        raise NotInvertible("operator has a kernel")
    return inv.entries[0][0] if single else inv


def _head_range(t: BlockOp, h: int):
    band = monomial_band(t)
    if band is None:
        raise NotRepresentable("range alignment needs monomial symbols")
    rows = t.codomain.coords(h)
    cols = t.domain.coords(h + band)
    basis = column_basis(window_matrix(t, cols, rows)) if rows and cols else []
    return rows, basis


def head_iso(shape: SpaceShape, h: int, g: Mat) -> BlockOp:
    """Identity on the tail, ``g`` on the head coordinates ``shape.coords(h)``."""
    coords = shape.coords(h)
    cols = {}
    for j, c in enumerate(coords):
        cols[c] = {coords[i]: g[i, j] for i in range(len(coords)) if g[i, j]}
    syms = {(k, k): LaurentSymbol.one() for k in seq_positions(shape)}
    return from_columns(shape, shape, syms, cols)


def range_alignment_iso(t1, t2) -> tuple[BlockOp, BlockOp]:
    """Invertible ``A`` with ``A[ran t1] = ran t2``; returns ``(A, A_inverse)``.

    Both ranges contain every coordinate past a finite head, so ``A`` is the
    identity there and maps a head basis of ``ran t1`` plus its greedy complement
    onto the same data for ``t2``.
    """
    t1, t2 = as_block(t1), as_block(t2)
    if t1.codomain != t2.codomain:
        raise ShapeMismatch("range alignment needs a common codomain")
    d1, d2 = fredholm_data(t1, "exact"), fredholm_data(t2, "exact")
    if d1.beta != d2.beta:
        raise BetaMismatch(f"β = {d1.beta} versus β = {d2.beta}")
    h = max(d1.window, d2.window)
    rows, b1 = _head_range(t1, h)
    _, b2 = _head_range(t2, h)
    assert len(b1) == len(b2), "tail-containing ranges must have equal head rank"
    n = len(rows)
    if n == 0:
        ident = block_identity(t1.codomain)
        return ident, ident
    src = b1 + complement_basis(b1, n)
    dst = b2 + complement_basis(b2, n)
    src_m = Mat.from_rows([[v[i] for v in src] for i in range(n)])
    dst_m = Mat.from_rows([[v[i] for v in dst] for i in range(n)])
    g = dst_m @ inverse(src_m)
    a = head_iso(t1.codomain, h, g)
    a_inv = head_iso(t1.codomain, h, inverse(g))
    if not (is_identity(a @ a_inv) and is_identity(a_inv @ a)):
        raise NotInvertible("range alignment failed its inverse certificate")
    return a, a_inv


def in_range(t, y: Mapping) -> bool:
    return solve_preimage(t, y) is not None
