"""Hypothesis gates and the stably finite / purely infinite verdict."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InconsistencyError, ModelError
from .groupoid import NO, UNKNOWN, YES, GateResult, is_closed_action, is_minimal, is_topologically_free
from .semigroup import ActionModel, Budgets, validate_action
from .states import Infeasible, StateWitness, find_invariant_state, verify_state
from .subequiv import apply_witness
from .typesemi import is_kl_paradoxical, plain_paradox_probe, tarski_test

STABLY_FINITE = "StablyFinite"
PURELY_INFINITE = "PurelyInfinite"
NOT_MET = "HypothesesNotMet"
INCONCLUSIVE = "Inconclusive"

GATES = ("minimal", "topologically_free", "closed_action", "plain_paradoxes_probe")

CLOSEDNESS_NOTE = ("reduced = essential crossed product is checked through closedness of the "
                   "action, a sufficient condition for these commutative models")
STATE_FAMILY_NOTE = ("path-space states are searched among vertex-weight (graph-harmonic) measures "
                     "only; an empty family is not by itself evidence of paradoxicality")


@dataclass
class Verdict:
    model: str
    budgets: Budgets
    hypotheses: dict  # gate name -> GateResult
    outcome: str
    state: StateWitness | None = None
    witness: object = None  # Decision for 2*F0 <= F0
    reasons: list = field(default_factory=list)
    validation: dict = field(default_factory=dict)
    path_model: bool = False

    def to_json(self):
        d = {
            "model": self.model,
            "budgets": self.budgets.to_json(),
            "validation": self.validation,
            "hypotheses": {k: v.to_json() for k, v in self.hypotheses.items()},
            "notes": [CLOSEDNESS_NOTE] + ([STATE_FAMILY_NOTE] if self.path_model else []),
            "outcome": self.outcome,
        }
        if self.state is not None:
            d["state"] = self.state.to_json()
        if self.witness is not None:
            d["paradox"] = self.witness.to_json()
        if self.reasons:
            d["reasons"] = self.reasons
        return d

    def dumps(self) -> str:
        return dumps(self.to_json())

    def summary(self) -> str:
        lines = [f"model {self.model}: {self.outcome}"]
        for k in GATES:
            lines.append(f"  {k}: {self.hypotheses[k].status}")
        for r in self.reasons:
            lines.append(f"  - {r}")
        if self.state is not None:
            lines.append("  state: " + ", ".join(f"{k}={v}" for k, v in self.state.to_json()["weights"].items()))
        if self.witness is not None:
            lines.append(f"  (2,1) witness with {len(self.witness.witness.entries)} pieces")
        return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _checked_state(model, st: StateWitness):
    errs = verify_state(model, st)
    if errs:
        raise InconsistencyError("state failed re-verification: " + "; ".join(errs))
    return st


def analyze(model: ActionModel, budgets: Budgets | None = None) -> Verdict:
    if budgets is not None and budgets != model.budgets:
        model = model.with_budgets(budgets)
    budgets = model.budgets
    val = validate_action(model)
    if not val["ok"]:
        raise ModelError(f"action validation failed: {val['counterexample']}")
    validation = {"ok": True, "checks": val["checks"]}

    hyp = {
        "minimal": is_minimal(model),
        "topologically_free": is_topologically_free(model),
        "closed_action": is_closed_action(model),
        "plain_paradoxes_probe": _probe_gate(model),
    }
    F0 = model.f0()

    def verdict(outcome, **kw):
        return Verdict(model.name, budgets, hyp, outcome, validation=validation,
                       path_model=not model.is_finite, **kw)

    if model.is_finite and hyp["minimal"].status == YES:
        st = find_invariant_state(model, F0)
        if isinstance(st, Infeasible):
            raise InconsistencyError("minimal finite model without a normalized state")
        return verdict(STABLY_FINITE, state=_checked_state(model, st),
                       reasons=["finite minimal model: orbit mass is conserved"])

    failed = [k for k in GATES if hyp[k].status == NO]
    if failed:
        return verdict(NOT_MET, reasons=[f"{k} fails" for k in failed])
    unknown = [k for k in GATES if hyp[k].status == UNKNOWN]
    if unknown:
        return verdict(INCONCLUSIVE, reasons=[f"{k} undecided within budgets" for k in unknown])

    res = tarski_test(F0, model, budgets=budgets)
    if res.kind == "StateExists":
        return verdict(STABLY_FINITE, state=_checked_state(model, res.state))
    if res.kind == "Paradoxical":
        d = res.decision if res.n == 1 else is_kl_paradoxical(F0, 2, 1, model, budgets)
        if d.yes:
            if not apply_witness(d.witness, F0.scale(2), F0):
                raise InconsistencyError("(2,1) witness failed re-verification")
            return verdict(PURELY_INFINITE, witness=d)
        return verdict(INCONCLUSIVE, reasons=[f"({res.n + 1},{res.n})-paradoxical but no (2,1) witness within budgets"])
    return verdict(INCONCLUSIVE, reasons=["neither a normalized state nor a paradox within budgets"])


def _probe_gate(model) -> GateResult:
    rep = plain_paradox_probe(model)
    return GateResult(rep["status"], {"samples": rep["samples"], "n_max": rep["n_max"]})
