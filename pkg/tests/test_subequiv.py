import pytest

from dyncu import (INF, Budgets, ContractError, LscFun, ModelError, OpenSet, apply_witness,
                   brute_force_subequiv, compose_witnesses, decide_subequiv)
from dyncu.lsc import lsc_add
from dyncu.states import find_invariant_state
from dyncu.subequiv import TransportWitness, WitnessEntry, identity_witness

from conftest import cyl, rotation, vals


def test_pointwise_order_gives_identity_witness(z3):
    F, H = vals(z3, 1, 0, 2), vals(z3, 1, 1, 3)
    d = decide_subequiv(F, H, z3)
    assert d.yes and {e.mover.name for e in d.witness.entries} == {"1"}
    assert apply_witness(d.witness, F, H)


def test_o2_doubling(o2):
    two, one = LscFun.constant(o2.space, 2), LscFun.constant(o2.space)
    d = decide_subequiv(two, one, o2)
    assert d.yes
    assert d.to_json()["witness"] == [{"piece": [""], "mover": "s0", "mult": 1},
                                      {"piece": [""], "mover": "s1", "mult": 1}]
    assert apply_witness(d.witness, two, one)
    assert brute_force_subequiv(two, one, o2).yes


def test_z3_mass_certificate(z3):
    F, H = vals(z3, 2, 0, 0), vals(z3, 0, 1, 0)
    d = decide_subequiv(F, H, z3)
    assert d.outcome == "No" and d.unconditional
    cert = d.certificate
    assert cert["kind"] == "orbit mass" and cert["nu_F"] == "2" and cert["nu_H"] == "1"
    assert d.state.nu(F) > d.state.nu(H)
    assert brute_force_subequiv(F, H, z3).outcome == "No"


def test_z3_transport(z3):
    F, H = vals(z3, 2, 0, 0), vals(z3, 0, 1, 1)
    d = decide_subequiv(F, H, z3)
    assert d.yes and apply_witness(d.witness, F, H)


def test_single_loop_no_is_certified(loop):
    d = decide_subequiv(LscFun.constant(loop.space, 2), LscFun.constant(loop.space), loop)
    assert d.outcome == "No" and d.unconditional and d.certificate["kind"] == "state"


def test_uncertified_no_carries_budgets(o2):
    # a single cylinder of depth 3 cannot be moved onto X by pieces of depth <= 1
    # using one-letter movers, and O_2 has no invariant state to certify
    b = Budgets(depth=1, len=1, mult=1)
    F, H = LscFun.constant(o2.space, 3), LscFun.from_cylinders(o2.space, [("000", 1)])
    d = decide_subequiv(F, H, o2, b)
    assert d.outcome == "No" and not d.unconditional
    assert d.to_json()["budgets"]["depth"] == 1


def test_node_limit_gives_unknown(o2):
    b = Budgets(nodes=1)
    d = decide_subequiv(LscFun.constant(o2.space, 2), LscFun.constant(o2.space), o2, b)
    assert d.outcome == "Unknown"


def test_infinite_values_finite_space(z3):
    d = decide_subequiv(vals(z3, "inf", 0, 0), vals(z3, 0, "inf", 0), z3)
    assert d.yes and d.witness.entries[0].mult is INF
    assert apply_witness(d.witness, vals(z3, "inf", 0, 0), vals(z3, 0, "inf", 0))
    assert decide_subequiv(vals(z3, "inf", 0, 0), vals(z3, 0, 5, 0), z3).outcome == "No"


def test_infinite_values_path_space(o2, loop):
    F = LscFun.constant(o2.space, INF)
    H = cyl(o2, **{"0": INF})
    d = decide_subequiv(F, H, o2)
    assert d.yes and apply_witness(d.witness, F, H)
    d = decide_subequiv(LscFun.constant(loop.space, INF), LscFun.constant(loop.space, 7), loop)
    assert d.outcome == "No" and d.unconditional


def test_reflexive_and_additive(o2, z3):
    for m, F in ((z3, vals(z3, 1, 2, 0)), (o2, cyl(o2, **{"0": 2, "11": 1}))):
        assert decide_subequiv(F, F, m).yes
    F1, H1 = LscFun.constant(o2.space, 2), LscFun.constant(o2.space)
    F2, H2 = cyl(o2, **{"0": 1}), cyl(o2, **{"1": 1})
    d1, d2 = decide_subequiv(F1, H1, o2), decide_subequiv(F2, H2, o2)
    assert d1.yes and d2.yes
    assert apply_witness(d1.witness + d2.witness, lsc_add(F1, F2), lsc_add(H1, H2))


def test_mover_invariance(o2):
    for s in o2.semigroup.nonzero():
        for w in o2.space.cylinders_upto(1):
            V = OpenSet.from_atoms(o2.space, [w])
            if not V <= s.dom():
                continue
            img = s.image(V)
            assert decide_subequiv(V.indicator(), img.indicator(), o2).yes
            assert decide_subequiv(img.indicator(), V.indicator(), o2, Budgets(depth=3)).yes
            assert s.push(V.indicator()) == img.indicator()


def test_apply_witness_failures(o2):
    one = LscFun.constant(o2.space)
    s0 = o2.generators[0]
    X = OpenSet.whole(o2.space)
    w = TransportWitness([WitnessEntry(X, s0, 1), WitnessEntry(X, s0, 1)])
    res = apply_witness(w, LscFun.constant(o2.space, 2), one)
    assert not res and "Z(0)" in res.failure
    assert apply_witness(TransportWitness([]), LscFun.zero(o2.space), one)
    short = TransportWitness([WitnessEntry(X, s0, 1)])
    res = apply_witness(short, LscFun.constant(o2.space, 2), one)
    assert not res and res.failure.startswith("coverage")


def test_compose_with_identity(z3):
    F, G = vals(z3, 2, 0, 0), vals(z3, 0, 1, 1)
    w1 = decide_subequiv(F, G, z3).witness
    w = compose_witnesses(w1, identity_witness(G, z3), F, G, G)
    assert apply_witness(w, F, G)
    assert sorted(e.mover.key for e in w.entries) == sorted(e.mover.key for e in w1.entries)


def test_compose_single_moves(z3):
    F, G, H = vals(z3, 1, 0, 0), vals(z3, 0, 1, 0), vals(z3, 0, 0, 1)
    w = compose_witnesses(decide_subequiv(F, G, z3).witness, decide_subequiv(G, H, z3).witness, F, G, H)
    assert len(w.entries) == 1 and w.entries[0].mover.apply(0) == 2


def test_compose_o2_chain(o2):
    four, two, one = (LscFun.constant(o2.space, k) for k in (4, 2, 1))
    w1 = decide_subequiv(four, two, o2).witness
    w2 = decide_subequiv(two, one, o2).witness
    w = compose_witnesses(w1, w2, four, two, one)
    assert apply_witness(w, four, one)


def test_compose_rejects_bad_input(z3):
    F, G = vals(z3, 1, 0, 0), vals(z3, 0, 1, 0)
    with pytest.raises(ContractError):
        compose_witnesses(TransportWitness([]), identity_witness(G, z3), F, G, G)


def test_mismatched_spaces(z3, o2):
    with pytest.raises(ModelError):
        decide_subequiv(LscFun.constant(o2.space), LscFun.constant(o2.space), z3)


def test_budgets_must_be_positive():
    with pytest.raises(ValueError):
        Budgets(depth=0)


def test_oracle_refuses_large_instances(o2):
    with pytest.raises(ContractError):
        brute_force_subequiv(LscFun.constant(o2.space, 2), LscFun.constant(o2.space), o2, Budgets(depth=3))
    big = rotation(7)
    with pytest.raises(ContractError):
        brute_force_subequiv(vals(big, *[1] * 7), vals(big, *[1] * 7), big)
    with pytest.raises(ContractError):
        brute_force_subequiv(LscFun.constant(o2.space, INF), LscFun.constant(o2.space), o2)


def test_yes_is_monotone_under_states(z3, loop):
    for m, F, H in ((z3, vals(z3, 2, 0, 0), vals(z3, 0, 1, 1)),
                    (loop, LscFun.constant(loop.space), LscFun.constant(loop.space, 2))):
        assert decide_subequiv(F, H, m).yes
        st = find_invariant_state(m)
        assert st.nu(F) <= st.nu(H)
