"""Laurent-polynomial symbols and exact root location relative to the unit circle.

A symbol ``a(z) = sum_j a_j z**j`` is written as ``z**low * P(z)`` with ``P`` an
ordinary polynomial.  Zeros of ``P`` on, inside and outside the unit circle are
located exactly over the rationals: the Cayley map ``w = (z - 1)/(z + 1)`` sends
the open disk to the open left half-plane, where a Cauchy index computed with a
signed remainder sequence counts the roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .exact_linalg import as_scalar

ZERO = Fraction(0)
ONE = Fraction(1)


# --- dense polynomials, coefficient lists low -> high -------------------------------

def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p: list) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def _padd(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO)
                  for i in range(n)])


def _pmul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return _trim(out)


def _pdivmod(p: list, q: list) -> tuple[list, list]:
    q = _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim(p)
    quo = [ZERO] * max(len(r) - len(q) + 1, 0)
    lead = q[-1]
    while len(r) >= len(q):
        shift = len(r) - len(q)
        f = r[-1] / lead
        quo[shift] = f
        for i, c in enumerate(q):
            r[i + shift] -= f * c
        r = _trim(r)
    return _trim(quo), r


def _pgcd(p: list, q: list) -> list:
    a, b = _trim(p), _trim(q)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _pderiv(p: list) -> list:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _sign_at_inf(p: list, negative: bool) -> int:
    if not p:
        return 0
    s = 1 if p[-1] > 0 else -1
    if negative and _deg(p) % 2:
        s = -s
    return s


def _variations(seq: Iterable[int]) -> int:
    signs = [s for s in seq if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_index(num: list, den: list) -> int:
    """Cauchy index of ``num/den`` over the whole real line."""
    f0, f1 = _trim(den), _trim(num)
    if not f1 or not f0:
        return 0
    chain = [f0, f1]
    while chain[-1]:
        r = _pdivmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    minus = _variations(_sign_at_inf(p, True) for p in chain)
    plus = _variations(_sign_at_inf(p, False) for p in chain)
    return minus - plus


def count_real_roots(p: list) -> int:
    """Number of distinct real roots, via the Sturm sequence of ``p``."""
    p = _trim(p)
    if _deg(p) < 1:
        return 0
    return cauchy_index(_pderiv(p), p)


def _cayley(p: list) -> list:
    """Coefficients of ``(1 - w)**n * p((1 + w)/(1 - w))`` with ``n = deg p``."""
    n = _deg(p)
    out: list = []
    for k, c in enumerate(p):
        if not c:
            continue
        plus = [Fraction(comb(k, i)) for i in range(k + 1)]
        minus = [Fraction(comb(n - k, i) * (-1) ** i) for i in range(n - k + 1)]
        out = _padd(out, [c * x for x in _pmul(plus, minus)])
    return out


def _imag_axis_parts(q: list) -> tuple[list, list]:
    """Real and imaginary parts of ``q(i y)`` as real polynomials in ``y``."""
    re = [ZERO] * len(q)
    im = [ZERO] * len(q)
    for j, c in enumerate(q):
        sign = -1 if (j // 2) % 2 else 1
        if j % 2 == 0:
            re[j] = sign * c
        else:
            im[j] = sign * c
    return _trim(re), _trim(im)


def _eval(p: list, x: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def has_unit_circle_root(p: list) -> bool:
    p = _trim(p)
    if _deg(p) < 1:
        return False
    if _eval(p, ONE) == 0 or _eval(p, -ONE) == 0:
        return True
    g = _pgcd(p, list(reversed(p)))
    if _deg(g) < 1:
        return False
    # unit-circle roots of g are imaginary-axis roots after the Cayley map
    re, im = _imag_axis_parts(_cayley(g))
    common = _pgcd(re, im)
    return count_real_roots(common) > 0


def roots_inside_disk(p: list) -> int:
    """Zeros of ``p`` strictly inside the unit disk, with multiplicity.

    Requires that ``p`` has no zeros on the unit circle.
    """
    p = _trim(p)
    n = _deg(p)
    if n < 1:
        return 0
    q = _cayley(p)
    if _deg(q) != n:
        raise ValueError("polynomial vanishes at z = -1")
    re, im = _imag_axis_parts(q)
    # argument change of q(iy) over the real line is pi * (left - right)
    if n % 2 == 0:
        diff = -cauchy_index(im, re)
    else:
        diff = cauchy_index(re, im)
    left = (n + diff) // 2
    return left


# --- Laurent symbols ---------------------------------------------------------------

@dataclass(frozen=True)
class LaurentSymbol:
    """Finitely many nonzero coefficients ``a_j``, stored sorted by offset."""

    coeffs: tuple = ()  # ((offset, Fraction), ...)

    def __post_init__(self):
        items = tuple(sorted((int(j), as_scalar(c)) for j, c in self.coeffs if c != 0))
        if len({j for j, _ in items}) != len(items):
            raise ValueError("repeated offset in symbol")
        object.__setattr__(self, "coeffs", items)

    @classmethod
    def from_map(cls, m: Mapping[int, object]) -> "LaurentSymbol":
        return cls(tuple(m.items()))

    @classmethod
    def monomial(cls, c, d: int) -> "LaurentSymbol":
        return cls(((d, as_scalar(c)),))

    @classmethod
    def zero(cls) -> "LaurentSymbol":
        return cls()

    @classmethod
    def one(cls) -> "LaurentSymbol":
        return cls(((0, ONE),))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def get(self, j: int) -> Fraction:
        for k, c in self.coeffs:
            if k == j:
                return c
        return ZERO

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def low(self) -> int:
        return self.coeffs[0][0] if self.coeffs else 0

    @property
    def high(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    @property
    def width(self) -> int:
        """Largest absolute offset carrying a nonzero coefficient."""
        return max((abs(j) for j, _ in self.coeffs), default=0)

    def __add__(self, other: "LaurentSymbol") -> "LaurentSymbol":
        d = self.as_dict()
        for j, c in other.coeffs:
            d[j] = d.get(j, ZERO) + c
        return LaurentSymbol(tuple(d.items()))

    def __neg__(self) -> "LaurentSymbol":
        return LaurentSymbol(tuple((j, -c) for j, c in self.coeffs))

    def __sub__(self, other: "LaurentSymbol") -> "LaurentSymbol":
        return self + (-other)

    def scale(self, s) -> "LaurentSymbol":
        s = as_scalar(s)
        return LaurentSymbol(tuple((j, s * c) for j, c in self.coeffs))

    def __mul__(self, other: "LaurentSymbol") -> "LaurentSymbol":
        d: dict = {}
        for j, a in self.coeffs:
            for k, b in other.coeffs:
                d[j + k] = d.get(j + k, ZERO) + a * b
        return LaurentSymbol(tuple(d.items()))

    def inverse_monomial(self) -> "LaurentSymbol":
        if not self.is_monomial:
            raise ValueError("only monomial symbols are invertible in the Laurent ring")
        (d, c), = self.coeffs
        return LaurentSymbol(((-d, 1 / c),))

    def numerator(self) -> list:
        """``P`` with ``a(z) = z**low * P(z)``, low -> high."""
        if not self.coeffs:
            return []
        lo = self.low
        p = [ZERO] * (self.high - lo + 1)
        for j, c in self.coeffs:
            p[j - lo] = c
        return p

    def vanishes_on_circle(self) -> bool:
        if self.is_zero:
            return True
        return has_unit_circle_root(self.numerator())

    def winding(self) -> int:
        """Winding number about 0 of the symbol along the unit circle."""
        return roots_inside_disk(self.numerator()) + self.low

    def __call__(self, z):
        return sum((c * z ** j for j, c in self.coeffs), ZERO)

    def to_json(self) -> list:
        return [[j, str(c)] for j, c in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in self.coeffs:
            term = str(c) if j == 0 else (("" if c == 1 else "-" if c == -1 else f"{c}*")
                                          + ("z" if j == 1 else f"z^{j}"))
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


def symbol_det(grid: list) -> LaurentSymbol:
    """Determinant of a square matrix of symbols (cofactor expansion)."""
    n = len(grid)
    if n == 0:
        return LaurentSymbol.one()
    if n == 1:
        return grid[0][0]
    total = LaurentSymbol.zero()
    for j in range(n):
        if grid[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in grid[1:]]
        term = grid[0][j] * symbol_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total
