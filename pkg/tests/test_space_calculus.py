import pytest
from hypothesis import given, strategies as st

from eaesc import (Atom, IdealZ, RelationTable, Sum, VerdictKind, builtin_scenario,
                   builtin_scenarios, eae_index, ideal_intersect, ideal_sum, iphi_of,
                   isc_bounds, sc_index, verdict)
from eaesc.space_calculus import (InconsistentFacts, IndexRange, RELATION_NAMES,
                                  builtin_names, eae_bounds)

GENS = st.integers(0, 12)
WINDOW = range(-40, 41)


def members(g):
    return {k for k in WINDOW if IdealZ(g).contains(k)}


def gm(k0, name=None):
    return Atom(name or f"GM({k0})", k0)


L2 = Atom("l2", 1, True)


# --- ideals ----------------------------------------------------------------------

def test_intersect_and_sum_examples():
    assert ideal_intersect(IdealZ(4), IdealZ(6)) == IdealZ(12)
    assert ideal_sum(IdealZ(4), IdealZ(6)) == IdealZ(2)
    assert str(IdealZ(0)) == "{0}" and str(IdealZ(1)) == "Z" and str(IdealZ(-3)) == "3Z"


@given(GENS, GENS)
def test_ideal_ops_match_set_operations(a, b):
    assert members(ideal_intersect(IdealZ(a), IdealZ(b)).generator) == members(a) & members(b)
    # a + b is the smallest ideal holding both; on a window its members are the sums
    def multiples(g):
        return [g * i for i in range(-200, 201)] if g else [0]
    sums = {x + y for x in multiples(a) for y in multiples(b)} & set(WINDOW)
    assert members(ideal_sum(IdealZ(a), IdealZ(b)).generator) == sums


@given(GENS, GENS, GENS)
def test_ideal_lattice_laws(a, b, c):
    A, B, C = IdealZ(a), IdealZ(b), IdealZ(c)
    assert A.intersect(B) == B.intersect(A) and A.sum(B) == B.sum(A)
    assert A.intersect(B.intersect(C)) == A.intersect(B).intersect(C)
    assert A.sum(A.intersect(B)) == A  # absorption
    assert A.intersect(B).subset(A) and A.subset(A.sum(B))


# --- I_Φ and eae -------------------------------------------------------------------

def test_sum_of_essentially_incomparable_gm_spaces():
    rel = RelationTable()
    rel.declare("GM(4)", "GM(6)", "EssentiallyIncomparable")
    b = iphi_of(Sum((gm(4), gm(6))), rel)
    assert b.exact and b.value == 2


def test_sum_without_relation_has_bounds():
    b = iphi_of(Sum((gm(4), gm(6))), RelationTable())
    assert b.lower == IdealZ(2) and b.upper == IdealZ(1)
    assert isinstance(eae_index(Sum((gm(4), gm(6))), L2, RelationTable()), IndexRange)


def test_unknown_iphi_atom():
    b = iphi_of(Atom("Y", None), RelationTable())
    assert b.lower == IdealZ(0) and b.upper == IdealZ(1)


def test_hilbert_space_with_itself():
    rel = RelationTable()
    assert eae_index(L2, L2, rel) == 1
    assert sc_index(L2, L2, rel) == 1
    assert isc_bounds(L2, L2, rel).upper == IdealZ(1)


def test_gm_vs_l2_at_three_is_empty():
    s = builtin_scenario("gm-vs-l2:2")
    v = verdict(s.x, s.y, s.rel, 3)
    assert v.kind is VerdictKind.EQUAL_EMPTY
    assert v.trail[0].startswith("Thm 1.5(iii)")


# --- I_SC ----------------------------------------------------------------------------

def test_unknown_verdict_without_facts():
    a, b = Atom("A", 1), Atom("B", 1)
    rel = RelationTable()
    v = verdict(a, b, rel, 1)
    assert v.kind is VerdictKind.UNKNOWN
    assert sc_index(a, b, rel) == IndexRange(1, None, 1, may_be_zero=True)
    assert verdict(a, b, rel, 0).kind is VerdictKind.EQUAL_NONEMPTY


def test_contradictory_sc_fact_is_reported():
    rel = RelationTable()
    rel.declare("GM(2)", "l2", "TotallyIncomparable")
    rel.add_sc_fact(["GM(2)"], ["l2"], 2)
    with pytest.raises(InconsistentFacts):
        isc_bounds(gm(2), L2, rel)


def test_relation_conflicts():
    rel = RelationTable()
    rel.declare("A", "B", "Isomorphic")
    with pytest.raises(ValueError):
        rel.declare("A", "B", "EssentiallyIncomparable")
    rel2 = RelationTable()
    rel2.declare("A", "B", "TotallyIncomparable")
    assert rel2.ess("B", "A")
    with pytest.raises(ValueError):
        rel2.declare("B", "A", "Isomorphic")


def test_isomorphism_transfers_relations():
    rel = RelationTable()
    rel.declare("A", "A'", "Isomorphic")
    rel.declare("A", "B", "TotallyIncomparable")
    assert rel.ess("A'", "B")


# --- builtin library ----------------------------------------------------------------

@pytest.mark.parametrize("scenario", builtin_scenarios(), ids=lambda s: s.name)
def test_builtin_tables(scenario):
    s = scenario
    b = isc_bounds(s.x, s.y, s.rel)
    assert eae_index(s.x, s.y, s.rel) == s.expected["eae"]
    assert sc_index(s.x, s.y, s.rel, b) == s.expected["sc"]
    assert b.exact and b.upper == IdealZ(s.expected["isc"])
    got = {k: verdict(s.x, s.y, s.rel, k, b).kind for k in s.ks}
    assert got == s.expected_verdicts()


def test_builtin_parameter_validation():
    assert builtin_scenario("united-i:5").expected["sc"] == 5
    for bad in ("nope", "lp-lq:2", "united-i:0", "gm-vs-l2:x", "gm-vs-l2:-1"):
        with pytest.raises(KeyError):
            builtin_scenario(bad)
    assert "james-triple" in builtin_names()


# --- invariants over random descriptors ---------------------------------------------

ATOM_POOL = [Atom("A", 1, True), Atom("B", 2), Atom("C", 3), Atom("D", 0), Atom("E", None),
             Atom("F", 1)]
REL_NAMES = ["TotallyIncomparable", "EssentiallyIncomparable", "ProjectivelyIncomparable",
             "Unknown"]

sides = st.lists(st.sampled_from(ATOM_POOL), min_size=1, max_size=3)
facts = st.lists(st.tuples(st.sampled_from("ABCDEF"), st.sampled_from("ABCDEF"),
                           st.sampled_from(REL_NAMES)), max_size=6)


def table(fs):
    rel = RelationTable()
    for a, b, r in fs:
        if a != b:
            rel.declare(a, b, r)
    return rel


def space(atoms):
    return atoms[0] if len(atoms) == 1 else Sum(tuple(atoms))


def _within(inner: IdealZ, outer: IdealZ) -> bool:
    return inner.subset(outer)


@given(sides, sides, facts)
def test_sc_ideal_sits_inside_eae_ideal(xs, ys, fs):
    x, y, rel = space(xs), space(ys), table(fs)
    e = eae_bounds(x, y, rel)
    b = isc_bounds(x, y, rel)
    assert _within(b.lower, b.upper) and _within(e.lower, e.upper)
    assert _within(b.upper, e.upper)
    for g in b.members:
        assert _within(IdealZ(g), b.upper)
    if e.exact and b.exact:
        # divisibility: sc is a multiple of eae
        assert IdealZ(e.value).contains(b.upper.generator)


@given(sides, sides, facts, facts)
def test_more_facts_never_widen_bounds(xs, ys, fs, more):
    x, y = space(xs), space(ys)
    rel, rel2 = table(fs), table(fs + more)
    e1, e2 = eae_bounds(x, y, rel), eae_bounds(x, y, rel2)
    assert _within(e1.lower, e2.lower) and _within(e2.upper, e1.upper)
    b1, b2 = isc_bounds(x, y, rel), isc_bounds(x, y, rel2)
    assert _within(b2.upper, b1.upper)
    for g in b1.members:
        assert b2.certainly_contains(g)


@given(sides, sides, facts, st.integers(-8, 8))
def test_verdicts_agree_with_bounds(xs, ys, fs, k):
    x, y, rel = space(xs), space(ys), table(fs)
    e, b = eae_bounds(x, y, rel), isc_bounds(x, y, rel)
    v = verdict(x, y, rel, k, b)
    if v.kind is VerdictKind.EQUAL_NONEMPTY:
        assert k == 0 or b.certainly_contains(k)
    elif v.kind is VerdictKind.EQUAL_EMPTY:
        assert not e.upper.contains(k)
    elif v.kind is VerdictKind.STRICTLY_CONTAINED:
        assert e.lower.contains(k) and not b.upper.contains(k)
    assert v.trail


@given(sides, sides, facts)
def test_symmetry_of_eae_and_sc(xs, ys, fs):
    x, y, rel = space(xs), space(ys), table(fs)
    assert eae_bounds(x, y, rel) == eae_bounds(y, x, rel)
    b1, b2 = isc_bounds(x, y, rel), isc_bounds(y, x, rel)
    assert (b1.lower, b1.upper) == (b2.lower, b2.upper)


def test_relation_names_cover_levels():
    assert set(RELATION_NAMES) == set(REL_NAMES)
