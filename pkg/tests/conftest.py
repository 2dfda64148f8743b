from pathlib import Path

import pytest

from dyncu import ActionModel, FiniteSpace, LscFun, PartialBijection, PathSpace, PrefixExchange

MODELS = Path(__file__).resolve().parents[1] / "models"


def cuntz2():
    sp = PathSpace(("v",), (("0", "v", "v"), ("1", "v", "v")))
    gens = [PrefixExchange(sp, "", "0", None, "s0"), PrefixExchange(sp, "", "1", None, "s1")]
    return ActionModel(sp, gens, name="cuntz2")


def single_loop():
    sp = PathSpace(("v",), (("x", "v", "v"),))
    return ActionModel(sp, [PrefixExchange(sp, "", "x", None, "s")], name="single_loop")


def rotation(n):
    X = FiniteSpace(tuple(f"x{i}" for i in range(1, n + 1)))
    r = PartialBijection(X, tuple((i, (i + 1) % n) for i in range(n)), name="r")
    return ActionModel(X, [r], name=f"z{n}")


@pytest.fixture
def o2():
    return cuntz2()


@pytest.fixture
def loop():
    return single_loop()


@pytest.fixture
def z3():
    return rotation(3)


@pytest.fixture(params=sorted(p.name for p in MODELS.glob("*.json")))
def shipped(request):
    return MODELS / request.param


def vals(model, *v):
    return LscFun.from_values(model.space, list(v))


def cyl(model, **pairs):
    """cyl(m, **{"0": 1}) -> LscFun over a path space."""
    return LscFun.from_cylinders(model.space, list(pairs.items()))
