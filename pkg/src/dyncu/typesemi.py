"""Classes of the retracted type semigroup, paradoxes and the Tarski test."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContractError, InconsistencyError
from .groupoid import NO, UNKNOWN, YES, finite_orbits
from .lsc import LscFun, OpenSet, lsc_add
from .semigroup import ActionModel, Budgets
from .states import Infeasible, StateWitness, find_invariant_state, verify_state
from .subequiv import Decision, apply_witness, decide_subequiv


def _require_finite_nonzero(F: LscFun, what="element"):
    if not F.is_finite():
        raise ContractError(f"{what} must be finite-valued")


def _memo(model) -> dict:
    return model.__dict__.setdefault("_subequiv_memo", {})


def cached_decision(F, H, model, budgets=None) -> Decision:
    key = (F, H, budgets or model.budgets)
    memo = _memo(model)
    if key not in memo:
        memo[key] = decide_subequiv(F, H, model, budgets)
    return memo[key]


@dataclass(frozen=True)
class TypeClass:
    representative: LscFun
    model: ActionModel = field(compare=False, repr=False)
    key: tuple | None = None  # orbit mass vector, finite spaces only

    def __add__(self, other):
        return class_add(self, other)

    def to_json(self):
        d = {"representative": self.representative.to_json()}
        if self.key is not None:
            d["orbit_mass"] = list(self.key)
        return d


def class_of(F: LscFun, model: ActionModel) -> TypeClass:
    _require_finite_nonzero(F)
    if model.is_finite:
        key = tuple(sum(F.data[x] for x in O) for O in finite_orbits(model))
        return TypeClass(F, model, key)
    return TypeClass(F, model)


def class_leq(a: TypeClass, b: TypeClass, budgets=None) -> str:
    """Yes / No / Unknown for [a] <= [b]."""
    if a.key is not None and b.key is not None:
        return YES if all(x <= y for x, y in zip(a.key, b.key)) else NO
    d = cached_decision(a.representative, b.representative, a.model, budgets)
    if d.outcome == NO and not d.unconditional:
        return UNKNOWN
    return d.outcome


def class_eq(a: TypeClass, b: TypeClass, budgets=None) -> str:
    if a.key is not None and b.key is not None:
        return YES if a.key == b.key else NO
    r1, r2 = class_leq(a, b, budgets), class_leq(b, a, budgets)
    if NO in (r1, r2):
        return NO
    return YES if r1 == r2 == YES else UNKNOWN


def class_add(a: TypeClass, b: TypeClass) -> TypeClass:
    return class_of(lsc_add(a.representative, b.representative), a.model)


def is_kl_paradoxical(F: LscFun, k: int, l: int, model: ActionModel, budgets=None) -> Decision:
    if not (k > l > 0):
        raise ContractError(f"need k > l > 0, got k={k}, l={l}")
    _require_finite_nonzero(F)
    if F.is_zero():
        raise ContractError("the zero element is excluded")
    return cached_decision(F.scale(k), F.scale(l), model, budgets)


@dataclass
class TarskiResult:
    kind: str  # StateExists | Paradoxical | Unknown
    state: StateWitness | None = None
    n: int | None = None
    decision: Decision | None = None
    infeasible: Infeasible | None = None
    budgets: Budgets | None = None

    def to_json(self):
        d = {"result": self.kind}
        if self.state is not None:
            d["state"] = self.state.to_json()
        if self.n is not None:
            d["n"] = self.n
            d["paradox"] = self.decision.to_json()
        if self.kind == "Unknown":
            d["budgets"] = self.budgets.to_json()
            if self.infeasible is not None:
                d["lp"] = "infeasible"
        return d


def _verified_state(model, F):
    res = find_invariant_state(model, F)
    if isinstance(res, Infeasible):
        if not res.verify():
            raise InconsistencyError("Farkas certificate failed to verify")
        return None, res
    errs = verify_state(model, res)
    if errs:
        raise InconsistencyError("state failed re-verification: " + "; ".join(errs))
    return res, None


def tarski_test(F: LscFun, model: ActionModel, n_max=None, budgets=None, cross_check=False) -> TarskiResult:
    """A normalized invariant state at F, or an (n+1, n)-paradox with n <= n_max.

    The LP runs first. With cross_check the paradox search runs regardless and
    finding both certificates raises InconsistencyError."""
    _require_finite_nonzero(F)
    if F.is_zero():
        raise ContractError("the zero element is excluded")
    budgets = budgets or model.budgets
    n_max = n_max or budgets.nmax
    state, infeasible = _verified_state(model, F)
    if state is not None and not cross_check:
        return TarskiResult("StateExists", state=state)
    for n in range(1, n_max + 1):
        d = is_kl_paradoxical(F, n + 1, n, model, budgets)
        if d.yes:
            if not apply_witness(d.witness, F.scale(n + 1), F.scale(n)):
                raise InconsistencyError("paradox witness failed re-verification")
            if state is not None:
                raise InconsistencyError(f"both a normalized state and an ({n + 1},{n})-paradox verified")
            return TarskiResult("Paradoxical", n=n, decision=d)
    if state is not None:
        return TarskiResult("StateExists", state=state)
    return TarskiResult("Unknown", infeasible=infeasible, budgets=budgets)


@dataclass
class ParadoxReport:
    element: LscFun
    pairs: list  # (k, l, Decision)
    plain: str | None
    budgets: Budgets

    def to_json(self):
        return {
            "element": self.element.to_json(),
            "pairs": [{"k": k, "l": l, **d.to_json()} for k, l, d in self.pairs],
            "plain_paradoxes": self.plain,
            "budgets": self.budgets.to_json(),
        }


def paradox_report(F, k, l, model, budgets=None) -> ParadoxReport:
    budgets = budgets or model.budgets
    d = is_kl_paradoxical(F, k, l, model, budgets)
    pairs = [(k, l, d)]
    plain = None
    if d.yes and k == l + 1 and (k, l) != (2, 1):
        d21 = is_kl_paradoxical(F, 2, 1, model, budgets)
        pairs.append((2, 1, d21))
        plain = YES if d21.yes else (NO if d21.unconditional else UNKNOWN)
    elif d.yes and (k, l) == (2, 1):
        plain = YES
    return ParadoxReport(F, pairs, plain, budgets)


def default_samples(model) -> list:
    if model.samples:
        return list(model.samples)
    sp = model.space
    out = [model.f0()]
    if model.is_finite:
        out += [OpenSet.from_atoms(sp, [i]).indicator() for i in range(len(sp))]
    else:
        out += [OpenSet.from_atoms(sp, [w]).indicator() for w in sp.words(1)]
    return out


def plain_paradox_probe(model: ActionModel, samples=None, n_max=None, budgets=None) -> dict:
    """For each sample paradoxical at some (n+1, n), check that it is (2,1)-paradoxical."""
    budgets = budgets or model.budgets
    n_max = n_max or budgets.nmax
    samples = default_samples(model) if samples is None else samples
    rows, status = [], YES
    for F in samples:
        if F.is_zero() or not F.is_finite():
            continue
        row = {"element": F.to_json()}
        state, _ = _verified_state(model, F)
        if state is not None:
            row["paradoxical_at"] = None
            row["reason"] = "normalized state"
            rows.append(row)
            continue
        found = None
        for n in range(1, n_max + 1):
            if is_kl_paradoxical(F, n + 1, n, model, budgets).yes:
                found = n
                break
        row["paradoxical_at"] = found
        if found is None:
            row["reason"] = "no paradox within budget"
        else:
            d = is_kl_paradoxical(F, 2, 1, model, budgets)
            row["two_one"] = d.outcome
            if not d.yes:
                row["violation"] = True
                status = NO if (d.unconditional and d.outcome == NO) else (UNKNOWN if status == YES else status)
        rows.append(row)
    return {"status": status, "samples": rows, "n_max": n_max, "budgets": budgets.to_json()}
