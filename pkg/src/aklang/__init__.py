"""Reasoning with the action language A_k: sensing, non-determinism, loops,
and translation to epistemic logic programs."""

from .domain import (
    Act, Domain, EffectProp, If, KnowledgeLaw, Literal, NonDetProp, Query,
    ValidationReport, ValueProp, While, knowledge_precondition, lit,
    potential_sensing_effects, validate_domain,
)
from .elp import (
    Atom, BodyLiteral, Fn, Program, Rule, belief_sets, elp_entails, modal_reduct,
    objective_reduct, world_views,
)
from .engine import Answer, Evaluator, Mode, Verdict, entails, exhaustive_no_sequence
from .errors import *  # noqa: F401,F403
from .parser import parse_domain, parse_elp, parse_query, render
from .semantics import Semantics, ThreeValued
from .translator import crosscheck, ground, translate_domain, translate_query_rules

__version__ = "0.1.0"
