import itertools

import pytest

from dyncu import ActionModel, Budgets, FiniteSpace, OpenSet, PartialBijection, PrefixExchange, validate_action
from dyncu.movers import natural_leq
from dyncu.semigroup import closure, ideal_support

from conftest import cuntz2, rotation


def px(sp, q, p, name=None, restrict=None):
    return PrefixExchange(sp, q, p, restrict, name or f"{q}>{p}")


def test_compose_with_inverse_is_identity_on_range(o2):
    sp = o2.space
    m = px(sp, "0", "1")
    e = m.compose(m.inverse())
    assert e.is_idempotent() and e.dom() == m.ran() == OpenSet.parse(sp, ["1"])


def test_exchange_round_trip(o2):
    sp = o2.space
    back = px(sp, "0", "1").compose(px(sp, "1", "0"))
    assert back.is_idempotent()
    assert back.dom() == OpenSet.parse(sp, ["1"])
    assert back.apply_word("101") == "101"


def test_disjoint_composite_is_zero(o2):
    assert px(o2.space, "1", "1").compose(px(o2.space, "", "0")).is_zero()
    X = FiniteSpace(("a", "b"))
    f = PartialBijection(X, ((0, 0),))
    g = PartialBijection(X, ((1, 1),))
    assert f.compose(g).is_zero()


def test_prefix_composition_rules(o2):
    s0, s1 = o2.generators
    c = s1.compose(s0)  # first prepend 0, then prepend 1
    assert (c.q, c.p) == ("", "10")
    assert c.apply_word("11") == "1011"
    d = s0.inverse().compose(s1)
    assert d.is_zero()


def test_natural_leq(o2):
    sp = o2.space
    t = px(sp, "", "0")
    s = t.restrict_to(OpenSet.parse(sp, ["1"]))
    assert natural_leq(s, t) and not natural_leq(t, s)
    one = PrefixExchange.identity(sp)
    e = one.restrict_to(OpenSet.parse(sp, ["01"]))
    assert e.is_idempotent() and natural_leq(e, one)
    assert not natural_leq(px(sp, "0", "1"), px(sp, "1", "0"))


def test_closure_of_rotation():
    S = rotation(3).semigroup
    assert len(S.nonzero()) == 3 and S.saturated
    assert {s.name for s in S.nonzero()} >= {"1", "r"}


def test_closure_of_o2_contains_expected(o2):
    S = o2.semigroup
    shapes = {(s.q, s.p) for s in S.nonzero() if s.restrict is None}
    assert ("0", "1") in shapes and ("00", "") in shapes
    assert not S.saturated


def test_empty_generators_give_unit():
    X = FiniteSpace(("p", "q"))
    S = closure([], X)
    assert [s.name for s in S.nonzero()] == ["1"]


def test_ideal_support():
    m = rotation(2)
    S = m.semigroup
    assert ideal_support(S.unit, S) == OpenSet.whole(m.space)
    swap = S.by_name("r")
    assert ideal_support(swap, S).is_empty()
    X = FiniteSpace(("p", "q"))
    e = PartialBijection(X, ((0, 0),), name="e")
    S2 = closure([e], X)
    assert OpenSet.from_atoms(X, [0]) <= ideal_support(S2.by_name("e"), S2)


def test_validate_action_passes():
    for m in (rotation(4), cuntz2()):
        rep = validate_action(m)
        assert rep["ok"], rep


def test_validate_action_catches_non_injective():
    X = FiniteSpace(("a", "b", "c"))
    bad = PartialBijection(X, ((0, 2), (1, 2)), name="bad")
    rep = validate_action(ActionModel(X, [bad]))
    assert not rep["ok"]
    assert rep["counterexample"]["check"] == "injective"


@pytest.mark.parametrize("model", [rotation(3), cuntz2()], ids=["z3", "o2"])
def test_inverse_semigroup_laws(model):
    S = model.semigroup
    for s in S.nonzero():
        assert s.compose(s.inverse()).compose(s).key == s.key
        assert s.inverse().compose(s).compose(s.inverse()).key == s.inverse().key
    idem = S.idempotents()
    for e, f in itertools.product(idem, repeat=2):
        assert e.compose(f).key == f.compose(e).key


def test_order_implies_domain_inclusion(o2):
    S = o2.semigroup
    for s, t in itertools.product(S.nonzero(), repeat=2):
        if natural_leq(s, t):
            assert s.dom() <= t.dom() and s.ran() <= t.ran()


def test_budget_parsing():
    b = Budgets.parse("depth=3, mult=1")
    assert (b.depth, b.len, b.mult) == (3, 2, 1)
    with pytest.raises(ValueError):
        Budgets.parse("depth=0")
    with pytest.raises(ValueError):
        Budgets.parse("speed=2")
