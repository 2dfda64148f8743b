"""Dynamical comparison and the type semigroup of finite action models.

The main entry points are :func:`decide_subequiv`, :func:`tarski_test` and
:func:`analyze`; ``dyncu`` on the command line wraps them.
"""

from .errors import ContractError, DyncuError, InconsistencyError, ModelError
from .extnat import INF
from .lsc import LscFun, OpenSet
from .model import load_model, model_from_dict, parse_lsc
from .movers import PartialBijection, PrefixExchange
from .semigroup import ActionModel, Budgets, validate_action
from .spaces import FiniteSpace, PathSpace
from .states import StateWitness, find_invariant_state
from .subequiv import apply_witness, brute_force_subequiv, compose_witnesses, decide_subequiv
from .typesemi import class_of, is_kl_paradoxical, plain_paradox_probe, tarski_test
from .verdict import analyze

__all__ = [
    "INF", "ActionModel", "Budgets", "ContractError", "DyncuError", "FiniteSpace",
    "InconsistencyError", "LscFun", "ModelError", "OpenSet", "PartialBijection", "PathSpace",
    "PrefixExchange", "StateWitness", "analyze", "apply_witness", "brute_force_subequiv",
    "class_of", "compose_witnesses", "decide_subequiv", "find_invariant_state",
    "is_kl_paradoxical", "load_model", "model_from_dict", "parse_lsc", "plain_paradox_probe",
    "tarski_test", "validate_action",
]
