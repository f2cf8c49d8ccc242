"""Walk through the library: Fredholm data, a Schur coupling and a space verdict.

Run with ``python3 demos/walkthrough.py``.
"""

from eaesc import (Fin, SpaceShape, Witness, block_diag, block_identity, eae_check,
                   fredholm_data, sc_construct, sc_verify, shift, witness_from_complemented,
                   witness_power)
from eaesc.seq_operator import finite_op
from eaesc.space_calculus import builtin_scenario, isc_bounds, verdict


def operators():
    # u: backward shift on one sequence space (index 1)
    u = block_diag(shift(-1))
    # v: backward shift plus a corner entry, next to a 2x2 identity block
    fin2 = SpaceShape.of(Fin(2))
    v = block_diag(shift(-1) + finite_op({(1, 1): "1/2"}), block_identity(fin2))
    for name, t in (("u", u), ("v", v)):
        d = fredholm_data(t)
        print(f"{name}: alpha={d.alpha} beta={d.beta} index={d.index}")
    print("EAE by (alpha, beta):", eae_check(u, v))

    # witness on [Seq] x [Seq, Fin(2)] of index 1, built on the smaller side and swapped
    w0 = witness_from_complemented(block_diag(shift(-1)), fin2)
    w = Witness(w0.t, w0.s)
    couple = sc_construct(w, u, v)
    print("Schur coupling verified on 50 coordinates:", sc_verify(u, v, couple, 50))
    print("index of the cubed witness:", witness_power(w, 3).index())


def spaces():
    s = builtin_scenario("improj-k0:4")
    b = isc_bounds(s.x, s.y, s.rel)
    print(f"\n{s.name}: I_SC between {b.lower} and {b.upper}, exact={b.exact}")
    for k in range(-1, 6):
        v = verdict(s.x, s.y, s.rel, k, b)
        print(f"  k={k:2}: {v.kind.value:18} {v.trail[0]}")
    print("rule trail:")
    for step in b.trail:
        print("  ", step)


if __name__ == "__main__":
    operators()
    spaces()
