"""Ideal arithmetic and rule evaluation over Banach-space descriptors.

Spaces are direct sums of named atoms.  Each atom carries the generator of
its Fredholm-index ideal (or ``None`` when unknown), and a relation table
records declared incomparability, isomorphism and complementation facts.
From these the engine derives certified bounds on the Fredholm-index
ideals, on the set of indices at which Schur coupling is possible, and a
verdict per index.  Gaps in knowledge are reported as ``Unknown``.

Trail strings name the published result each step relies on; they are
runtime data meant for readers cross-checking a report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import ComputationError


class InconsistentFacts(ComputationError):
    """Declared facts imply a lower bound outside a certified upper bound."""


# --- ideals of Z --------------------------------------------------------------------

@dataclass(frozen=True)
class IdealZ:
    """The ideal ``generator * Z``; generator 0 is ``{0}``, generator 1 is ``Z``."""

    generator: int

    def __post_init__(self):
        object.__setattr__(self, "generator", abs(int(self.generator)))

    def contains(self, k: int) -> bool:
        g = self.generator
        return k == 0 if g == 0 else k % g == 0

    def subset(self, other: "IdealZ") -> bool:
        return other.contains(self.generator)

    def intersect(self, other: "IdealZ") -> "IdealZ":
        return IdealZ(lcm(self.generator, other.generator))

    def sum(self, other: "IdealZ") -> "IdealZ":
        return IdealZ(gcd(self.generator, other.generator))

    def __str__(self) -> str:
        g = self.generator
        return "{0}" if g == 0 else "Z" if g == 1 else f"{g}Z"


ZERO_IDEAL = IdealZ(0)
WHOLE = IdealZ(1)


def ideal_intersect(a: IdealZ, b: IdealZ) -> IdealZ:
    return a.intersect(b)


def ideal_sum(a: IdealZ, b: IdealZ) -> IdealZ:
    return a.sum(b)


def ideal_contains(a: IdealZ, k: int) -> bool:
    return a.contains(k)


@dataclass(frozen=True)
class IdealBounds:
    """Certified ``lower ⊆ I ⊆ upper`` for an unknown ideal ``I``."""

    lower: IdealZ
    upper: IdealZ

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.lower.generator if self.exact else None

    def __str__(self) -> str:
        if self.exact:
            return str(self.lower)
        return f"{self.lower} ⊆ . ⊆ {self.upper}"


# --- descriptors --------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str
    iphi: int | None  # generator of I_Φ, None when not known
    complemented_square: bool = False  # contains a complemented copy of itself ⊕ itself
    citation: str = ""

    def __post_init__(self):
        if self.iphi is not None:
            object.__setattr__(self, "iphi", abs(int(self.iphi)))


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a direct sum needs at least one summand")
        object.__setattr__(self, "parts", parts)


SpaceDesc = Union[Atom, Sum]


def direct_sum(*parts: SpaceDesc) -> SpaceDesc:
    return parts[0] if len(parts) == 1 else Sum(parts)


def atoms_of(x: SpaceDesc) -> list:
    """Atoms of ``x`` in order, repeated summands kept."""
    if isinstance(x, Atom):
        return [x]
    out = []
    for p in x.parts:
        out.extend(atoms_of(p))
    return out


def describe_space(x) -> str:
    atoms = atoms_of(x) if isinstance(x, (Atom, Sum)) else list(x)
    return " ⊕ ".join(a.name for a in atoms) if atoms else "0"


# --- relation table -----------------------------------------------------------------

class Rel(IntEnum):
    UNKNOWN = 0
    PROJ = 1  # projectively incomparable
    ESS = 2   # essentially incomparable
    TOT = 3   # totally incomparable


RELATION_NAMES = {
    "TotallyIncomparable": Rel.TOT,
    "EssentiallyIncomparable": Rel.ESS,
    "ProjectivelyIncomparable": Rel.PROJ,
    "Unknown": Rel.UNKNOWN,
}
ISOMORPHIC = "Isomorphic"


@dataclass(frozen=True)
class ComplementedFact:
    atom: str
    within: tuple  # atom names, a multiset
    citation: str = ""


@dataclass(frozen=True)
class ScFact:
    """``SC_k(X', Y') ≠ ∅`` for the sums of the listed atoms."""

    x: tuple
    y: tuple
    k: int
    citation: str = ""


class RelationTable:
    """Symmetric facts between atoms, closed under Tot ⇒ Ess ⇒ Proj and isomorphism."""

    def __init__(self):
        self._levels: dict = {}
        self._parent: dict = {}
        self._iso_edges: list = []
        self.declared: list = []  # (a, b, relation name, citation) in declaration order
        self.citations: dict = {}
        self.complemented: list = []
        self.sc_facts: list = []

    def copy(self) -> "RelationTable":
        t = RelationTable()
        t._levels = dict(self._levels)
        t._parent = dict(self._parent)
        t._iso_edges = list(self._iso_edges)
        t.declared = list(self.declared)
        t.citations = dict(self.citations)
        t.complemented = list(self.complemented)
        t.sc_facts = list(self.sc_facts)
        return t

    def _root(self, a: str) -> str:
        while self._parent.get(a, a) != a:
            a = self._parent[a]
        return a

    def isomorphic(self, a: str, b: str) -> bool:
        return a == b or self._root(a) == self._root(b)

    def declare(self, a: str, b: str, relation: str | Rel, citation: str = "") -> None:
        if relation == ISOMORPHIC:
            if self.level(a, b) > Rel.UNKNOWN:
                raise ValueError(f"{a} and {b} are declared incomparable, not isomorphic")
            ra, rb = self._root(a), self._root(b)
            if ra != rb:
                self._parent[max(ra, rb)] = min(ra, rb)
            self._iso_edges.append((a, b))
        else:
            lvl = RELATION_NAMES[relation] if isinstance(relation, str) else Rel(relation)
            if lvl and self.isomorphic(a, b):
                raise ValueError(f"{a} and {b} are isomorphic, so they cannot be incomparable")
            key = frozenset((a, b))
            self._levels[key] = max(self._levels.get(key, Rel.UNKNOWN), lvl)
        name = relation if isinstance(relation, str) else Rel(relation).name
        self.declared.append((a, b, name, citation))
        if citation:
            self.citations[(a, b, name)] = citation

    def level(self, a: str, b: str) -> Rel:
        """Strongest declared relation between the isomorphism classes of ``a`` and ``b``."""
        ra, rb = self._root(a), self._root(b)
        best = Rel.UNKNOWN
        for key, lvl in self._levels.items():
            p, q = tuple(key) if len(key) == 2 else (next(iter(key)),) * 2
            rp, rq = self._root(p), self._root(q)
            if {rp, rq} == {ra, rb} and lvl > best:
                best = lvl
        return best

    def ess(self, a: str, b: str) -> bool:
        return self.level(a, b) >= Rel.ESS

    def add_complemented(self, atom: str, within: Sequence[str], citation: str = "") -> None:
        self.complemented.append(ComplementedFact(atom, tuple(within), citation))

    def add_sc_fact(self, x: Sequence[str], y: Sequence[str], k: int, citation: str = "") -> None:
        self.sc_facts.append(ScFact(tuple(x), tuple(y), int(k), citation))

    def iso_used(self) -> bool:
        return bool(self._iso_edges)


# --- I_Φ and eae --------------------------------------------------------------------

def _atom_list(x) -> list:
    return atoms_of(x) if isinstance(x, (Atom, Sum)) else list(x)


def _pairwise_ess(atoms: list, rel: RelationTable) -> bool:
    return all(rel.ess(a.name, b.name)
               for i, a in enumerate(atoms) for b in atoms[i + 1:])


def iphi_of(x, rel: RelationTable) -> IdealBounds:
    """Bounds on ``I_Φ(x)``.

    Summands always contribute the sum of their ideals from below.  The
    upper bound equals that sum only when every two summands are
    essentially incomparable; otherwise nothing beyond ``Z`` is certified.
    """
    atoms = _atom_list(x)
    if len(atoms) == 1:
        a = atoms[0]
        if a.iphi is None:
            return IdealBounds(ZERO_IDEAL, WHOLE)
        return IdealBounds(IdealZ(a.iphi), IdealZ(a.iphi))
    parts = [iphi_of([a], rel) for a in atoms]
    lower = ZERO_IDEAL
    upper = ZERO_IDEAL
    for b in parts:
        lower = lower.sum(b.lower)
        upper = upper.sum(b.upper)
    if not _pairwise_ess(atoms, rel):
        upper = WHOLE
    return IdealBounds(lower, upper)


def eae_bounds(x, y, rel: RelationTable) -> IdealBounds:
    """Bounds on ``I_Φ(x) ∩ I_Φ(y) = eae(x, y) Z``."""
    bx, by = iphi_of(x, rel), iphi_of(y, rel)
    return IdealBounds(bx.lower.intersect(by.lower), bx.upper.intersect(by.upper))


@dataclass(frozen=True)
class IndexRange:
    """``lo <= value <= hi`` (``hi`` None for unbounded), value a multiple of ``step``.

    ``may_be_zero`` allows the value 0 in addition to the range.
    """

    lo: int
    hi: int | None
    step: int
    may_be_zero: bool = False

    def __str__(self) -> str:
        hi = "inf" if self.hi is None else str(self.hi)
        s = f"[{self.lo}, {hi}] in {self.step}N"
        return ("0 or " + s) if self.may_be_zero else s


def eae_index(x, y, rel: RelationTable) -> int | IndexRange:
    b = eae_bounds(x, y, rel)
    if b.exact:
        return b.lower.generator
    # eae divides lower.generator and is a multiple of upper.generator
    lo, up = b.lower.generator, b.upper.generator
    if lo == 0:
        return IndexRange(up, None, up, may_be_zero=True)
    return IndexRange(up, lo, up)


# --- I_SC ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IscBounds:
    """Certified bounds on ``I_SC(X, Y)``.

    ``members`` lists generators ``g`` with ``gZ ⊆ I_SC``.  Their union is
    what is known from below; it is only an ideal when ``closed`` records
    that ``I_SC`` is closed under addition.  ``lower`` is the largest single
    member ideal.
    """

    lower: IdealZ
    upper: IdealZ
    exact: bool
    members: tuple
    closed: bool
    trail: tuple

    def certainly_contains(self, k: int) -> bool:
        return any(IdealZ(g).contains(k) for g in self.members)


def _match(p: list, q: list, rel: RelationTable) -> list:
    """Maximal pairing of atoms of ``p`` with isomorphic atoms of ``q``."""
    used = [False] * len(q)
    pairs = []
    for a in p:
        for j, b in enumerate(q):
            if not used[j] and rel.isomorphic(a.name, b.name):
                used[j] = True
                pairs.append((a, b))
                break
    return pairs


def _names_within(names: Sequence[str], atoms: list, rel: RelationTable) -> bool:
    used = [False] * len(atoms)
    for n in names:
        j = next((j for j, a in enumerate(atoms)
                  if not used[j] and rel.isomorphic(n, a.name)), None)
        if j is None:
            return False
        used[j] = True
    return True


def _remove(atoms: list, taken: list) -> list:
    rest = list(atoms)
    for a in taken:
        rest.remove(a)
    return rest


def _all_ess(ps: list, qs: list, rel: RelationTable) -> bool:
    return all(rel.ess(a.name, b.name) for a in ps for b in qs)


class _Collector:
    def __init__(self, upper: IdealZ):
        self.members: dict = {0: "Lemma 5.1(i): 0 ∈ I_SC"}
        self.upper = upper
        self.trail: list = []

    def member(self, g: int, why: str) -> None:
        g = abs(g)
        if g not in self.members:
            self.members[g] = why
            self.trail.append(f"{why}: {IdealZ(g)} ⊆ I_SC")

    def cap(self, ideal: IdealZ, why: str) -> None:
        new = self.upper.intersect(ideal)
        if new != self.upper:
            self.upper = new
            self.trail.append(f"{why}: I_SC ⊆ {new}")


def _pair_rules(p: list, q: list, rel: RelationTable, acc: _Collector) -> None:
    """Rules whose conclusions hold for ``I_SC(p, q)``."""
    sp, sq = describe_space(p), describe_space(q)
    pairs = _match(p, q, rel)
    if pairs:
        cp = [a for a, _ in pairs]
        via_iso = any(a.name != b.name for a, b in pairs)
        tag = " + Lemma 5.2" if via_iso else ""
        common = iphi_of(cp, rel)
        acc.member(common.lower.generator,
                   f"Prop 5.5 + Lemma 5.8(i){tag}: common summand {describe_space(cp)}")
        if len(pairs) == len(q):
            acc.cap(iphi_of(q, rel).upper,
                    f"Prop 5.5{tag}: {sq} complemented in {sp}, I_SC = I_Φ({sq})")
        elif len(pairs) == len(p):
            acc.cap(iphi_of(p, rel).upper,
                    f"Prop 5.5{tag} (roles exchanged): {sp} complemented in {sq}, "
                    f"I_SC = I_Φ({sp})")
        else:
            p1 = _remove(p, cp)
            q1 = _remove(q, [b for _, b in pairs])
            if (_all_ess(p1, cp, rel) and _all_ess(p1, q1, rel)
                    and _all_ess(cp, q1, rel)):
                acc.member(common.lower.generator, f"Prop 1.10{tag}: shared {describe_space(cp)}")
                acc.cap(common.upper, f"Prop 1.10{tag}: I_SC = I_Φ({describe_space(cp)})")
    for fact in rel.complemented:
        cite = f" [{fact.citation}]" if fact.citation else ""
        for small, big, swapped in ((q, p, False), (p, q, True)):
            hit = next((a for a in small if rel.isomorphic(a.name, fact.atom)), None)
            if hit is None or not _names_within(fact.within, big, rel):
                continue
            g = iphi_of([hit], rel)
            side = " (roles exchanged)" if swapped else ""
            acc.member(g.lower.generator,
                       f"Prop 5.5 + Lemma 5.8(i){side}: {fact.atom} complemented in "
                       f"{' ⊕ '.join(fact.within)}{cite}")
            if len(small) == 1 and len(big) == len(fact.within):
                acc.cap(g.upper, f"Prop 5.5{side}: {fact.atom} complemented in "
                                 f"{' ⊕ '.join(fact.within)}{cite}")
    for fact in rel.sc_facts:
        cite = f" [{fact.citation}]" if fact.citation else ""
        for xs, ys, swapped in ((p, q, False), (q, p, True)):
            if _names_within(fact.x, xs, rel) and _names_within(fact.y, ys, rel):
                side = " (roles exchanged)" if swapped else ""
                acc.member(fact.k, f"declared SC_{fact.k}({' ⊕ '.join(fact.x)}, "
                                   f"{' ⊕ '.join(fact.y)}) ≠ ∅{cite} + Lemma 5.8(i){side} "
                                   f"+ Lemma 5.1(iii)")


def isc_bounds(x, y, rel: RelationTable) -> IscBounds:
    xs, ys = _atom_list(x), _atom_list(y)
    eae = eae_bounds(xs, ys, rel)
    acc = _Collector(eae.upper)
    acc.trail.append("Lemma 5.1(i): 0 ∈ I_SC")
    acc.trail.append(f"Prop 1.6(ii): I_SC ⊆ eae·Z ⊆ {eae.upper}")

    x1 = [a for a in xs if all(rel.ess(a.name, b.name) for b in ys)]
    y1 = [b for b in ys if all(rel.ess(a.name, b.name) for a in xs)]
    pairs = [(xs, ys)]
    if len(x1) == len(xs):
        # then every atom of y is essentially incomparable to all of x as well;
        # declared facts still run below so contradictions surface
        acc.upper = ZERO_IDEAL
        acc.trail.append("Thm 1.7(i): X and Y essentially incomparable, I_SC = {0}")
    elif x1 or y1:
        x2, y2 = _remove(xs, x1), _remove(ys, y1)
        acc.trail.append(f"Lemma 5.8(ii): I_SC(X,Y) = I_SC({describe_space(x2)}, "
                         f"{describe_space(y2)})")
        red = eae_bounds(x2, y2, rel)
        acc.cap(red.upper, "Prop 1.6(ii) on the reduced pair")
        pairs.append((x2, y2))
    for p, q in pairs:
        _pair_rules(p, q, rel, acc)

    closed = (all(a.complemented_square for a in xs)
              or all(b.complemented_square for b in ys))
    members = sorted(acc.members)
    if closed:
        g = 0
        for m in members:
            g = gcd(g, m)
        if g not in acc.members:
            acc.trail.append(f"Prop 5.4 + Remark 5.6: complemented square present, "
                             f"I_SC closed under addition, {IdealZ(g)} ⊆ I_SC")
        members = [g]
    for m in members:
        if not IdealZ(m).subset(acc.upper):
            raise InconsistentFacts(
                f"facts give {IdealZ(m)} ⊆ I_SC but I_SC ⊆ {acc.upper}")
    positive = [m for m in members if m]
    lower = IdealZ(min(positive)) if positive else ZERO_IDEAL
    exact = lower == acc.upper
    if not exact:
        acc.trail.append("Question 5.10: the gap between the bounds is not decided")
    return IscBounds(lower, acc.upper, exact, tuple(sorted(set(members))), closed,
                     tuple(acc.trail))


def sc_index(x, y, rel: RelationTable, bounds: IscBounds | None = None) -> int | IndexRange:
    b = bounds or isc_bounds(x, y, rel)
    if b.exact:
        return b.lower.generator
    step = b.upper.generator
    positive = [m for m in b.members if m]
    if positive:
        return IndexRange(step, min(positive), step)
    return IndexRange(step, None, step, may_be_zero=True)


# --- verdicts -----------------------------------------------------------------------

class VerdictKind(str, Enum):
    EQUAL_NONEMPTY = "EqualNonempty"
    EQUAL_EMPTY = "EqualEmpty"
    STRICTLY_CONTAINED = "StrictlyContained"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    k: int
    kind: VerdictKind
    trail: tuple = field(default=())


def verdict(x, y, rel: RelationTable, k: int, bounds: IscBounds | None = None) -> Verdict:
    """Compare ``SC_k(X, Y)`` with ``EAE_k(X, Y)``."""
    eae = eae_bounds(x, y, rel)
    b = bounds or isc_bounds(x, y, rel)
    if not eae.upper.contains(k):
        return Verdict(k, VerdictKind.EQUAL_EMPTY,
                       (f"Thm 1.5(iii): {k} ∉ {eae.upper} ⊇ I_Φ(X) ∩ I_Φ(Y), "
                        "both sets empty",))
    if k == 0:
        return Verdict(k, VerdictKind.EQUAL_NONEMPTY, ("Eq. (1.6): SC_0 = EAE_0 ≠ ∅",))
    if b.certainly_contains(k):
        g = next(m for m in b.members if IdealZ(m).contains(k))
        return Verdict(k, VerdictKind.EQUAL_NONEMPTY,
                       (f"Thm 1.5(ii): {k} ∈ {IdealZ(g)} ⊆ I_SC",))
    if eae.lower.contains(k) and not b.upper.contains(k):
        return Verdict(k, VerdictKind.STRICTLY_CONTAINED,
                       (f"Thm 1.5(i)+(ii): {k} ∈ eae·Z so EAE_{k} ≠ ∅, but {k} ∉ {b.upper} ⊇ I_SC",))
    return Verdict(k, VerdictKind.UNKNOWN,
                   (f"Question 5.10: {k} lies between the certified bounds",))


# --- builtin scenarios --------------------------------------------------------------

@dataclass(frozen=True)
class SpaceScenario:
    name: str
    x: SpaceDesc
    y: SpaceDesc
    rel: RelationTable
    ks: tuple
    expected: dict  # eae, sc, isc generators; None where nothing is claimed
    citation: str = ""

    def expected_verdicts(self) -> dict:
        """Verdict per k implied by exact expected eae and I_SC generators."""
        eae, isc = self.expected.get("eae"), self.expected.get("isc")
        if eae is None or isc is None:
            return {}
        out = {}
        for k in self.ks:
            if not IdealZ(eae).contains(k):
                out[k] = VerdictKind.EQUAL_EMPTY
            elif IdealZ(isc).contains(k):
                out[k] = VerdictKind.EQUAL_NONEMPTY
            else:
                out[k] = VerdictKind.STRICTLY_CONTAINED
        return out


DEFAULT_KS = tuple(range(-6, 7))
DEFAULT_K0 = 3

L1 = Atom("l1", 1, True, "l1 ≅ l1 ⊕ l1")
L2 = Atom("l2", 1, True, "Hilbert space")
C0 = Atom("c0", 1, True, "c0 ≅ c0 ⊕ c0")
XG = Atom("X_G", 0, False, "Thm 6.3: not isomorphic to any proper subspace")
Y2 = Atom("Y2", None, False, "Lemma 6.2(ii): subspace of X_GM(k0)")


def _gm(k0: int, name: str | None = None) -> Atom:
    return Atom(name or f"GM({k0})", k0, False, f"Thm 6.1(iv): I_Φ = {IdealZ(k0)}")


def _table(*facts) -> RelationTable:
    rel = RelationTable()
    for a, b, r, *cite in facts:
        rel.declare(a.name, b.name, r, cite[0] if cite else "")
    return rel


TOT = "TotallyIncomparable"
ESS = "EssentiallyIncomparable"
PROJ = "ProjectivelyIncomparable"


def _lp_lq(_k0):
    lp, lq = Atom("lp", 1, True), Atom("lq", 1, True)
    rel = _table((lp, lq, ESS, "Thm 1.2(ii)"))
    return lp, lq, rel, dict(eae=1, sc=0, isc=0), "Thm 1.2(ii)"


def _gm_vs_l2(k0):
    gm = _gm(k0)
    rel = _table((gm, L2, TOT, "Thm 1.7(ii)"))
    return gm, L2, rel, dict(eae=k0, sc=0, isc=0), "Thm 1.7"


def _improj_equal(k0):
    gm = _gm(k0)
    rel = _table((gm, L2, TOT), (L2, Y2, TOT), (gm, Y2, PROJ, "Thm 1.9(i)"))
    rel.add_sc_fact([gm.name], [Y2.name], k0, "Lemma 6.2(ii)")
    return gm, Sum((L2, Y2)), rel, dict(eae=k0, sc=k0, isc=k0), "Thm 1.9(i)"


def _improj_k0(k0):
    gm = _gm(k0)
    rel = _table((L1, C0, TOT), (L1, Y2, TOT), (L1, gm, TOT), (gm, C0, TOT),
                 (C0, Y2, TOT), (gm, Y2, PROJ, "Thm 1.9(ii)"))
    rel.add_sc_fact([gm.name], [Y2.name], k0, "Lemma 6.2(ii)")
    return Sum((L1, gm)), Sum((C0, Y2)), rel, dict(eae=1, sc=k0, isc=k0), "Thm 1.9(ii)"


def _united_i(k0):
    gm = _gm(k0)
    rel = _table((gm, XG, TOT), (C0, XG, TOT), (Y2, XG, TOT), (gm, C0, TOT),
                 (C0, Y2, TOT), (gm, Y2, PROJ, "Thm 1.11(i)"))
    rel.add_sc_fact([gm.name], [Y2.name], k0, "Lemma 6.2(ii)")
    return (Sum((gm, XG)), Sum((C0, Y2, XG)), rel,
            dict(eae=k0, sc=k0, isc=k0), "Thm 1.11(i)")


def _united_ii(k0):
    gm = _gm(k0)
    rel = _table((gm, XG, TOT), (C0, XG, TOT), (Y2, XG, TOT), (gm, C0, TOT),
                 (C0, Y2, TOT), (gm, Y2, PROJ, "Thm 1.11(ii)"),
                 (L1, C0, TOT), (L1, Y2, TOT), (L1, XG, TOT), (L1, gm, TOT))
    rel.add_sc_fact([gm.name], [Y2.name], k0, "Lemma 6.2(ii)")
    return (Sum((L1, gm, XG)), Sum((C0, Y2, XG)), rel,
            dict(eae=1, sc=k0, isc=k0), "Thm 1.11(ii)")


def _beyond_proj(k0):
    gm, gm2 = _gm(k0), _gm(k0, f"GM({k0})'")
    rel = _table((gm, gm2, ISOMORPHIC), (L1, gm, TOT), (L1, C0, TOT), (gm, C0, TOT))
    return (Sum((L1, gm)), Sum((C0, gm2)), rel,
            dict(eae=1, sc=k0, isc=k0), "Prop 1.10")


def _james_triple(_k0):
    jp, jq = Atom("J_p", 1), Atom("J_q", 1)
    rel = _table((jp, jq, ESS, "Ex. 5.9"))
    return (Sum((jp, jp, jq)), Sum((jp, jq, jq)), rel,
            dict(eae=1, sc=1, isc=1), "Ex. 5.9")


def _gm_hyperplane(k0):
    gm = _gm(k0)
    rel = _table((gm, XG, TOT, "Thm 1.11 proof"))
    return gm, XG, rel, dict(eae=0, sc=0, isc=0), "Thm 1.7(i) + Thm 6.3"


_BUILDERS = {
    "lp-lq": (_lp_lq, None),
    "gm-vs-l2": (_gm_vs_l2, DEFAULT_K0),
    "improj-equal": (_improj_equal, DEFAULT_K0),
    "improj-k0": (_improj_k0, DEFAULT_K0),
    "united-i": (_united_i, DEFAULT_K0),
    "united-ii": (_united_ii, DEFAULT_K0),
    "beyond-proj": (_beyond_proj, DEFAULT_K0),
    "james-triple": (_james_triple, None),
    "gm-hyperplane": (_gm_hyperplane, DEFAULT_K0),
}
# families whose parameter must be positive
_POSITIVE_K0 = {"improj-equal", "improj-k0", "united-i", "united-ii", "beyond-proj"}


def builtin_names() -> list:
    return sorted(_BUILDERS)


def builtin_scenario(name: str, ks: Iterable[int] = DEFAULT_KS) -> SpaceScenario:
    """Look up ``name`` or ``name:K`` (``K`` the family parameter k0)."""
    base, _, arg = name.partition(":")
    if base not in _BUILDERS:
        raise KeyError(f"unknown builtin scenario {name!r}")
    build, default = _BUILDERS[base]
    if arg:
        if default is None:
            raise KeyError(f"builtin {base!r} takes no parameter")
        try:
            k0 = int(arg)
        except ValueError:
            raise KeyError(f"parameter of {base!r} must be an integer, got {arg!r}") from None
    else:
        k0 = default
    if k0 is not None and (k0 < 0 or (base in _POSITIVE_K0 and k0 == 0)):
        raise KeyError(f"parameter {k0} out of range for {base!r}")
    x, y, rel, expected, cite = build(k0)
    return SpaceScenario(name, x, y, rel, tuple(ks), expected, cite)


def builtin_scenarios() -> list:
    """The default library: each family once, plus ``gm-vs-l2:K`` for K = 0..5."""
    names = [n for n in builtin_names() if n != "gm-vs-l2"]
    names += [f"gm-vs-l2:{k}" for k in range(6)]
    return [builtin_scenario(n) for n in sorted(names)]
