"""Explaining plans by reconciling the planner's model with a human's model."""
from .explainers import (EXPLAINERS, Explanation, MrpInstance, NoExplanation, NotOptimal,
                         SearchSpaceTooLarge, Unsolvable, check_completeness, check_monotonicity,
                         enumerate_mmes, explain, mce_approx, mce_exact, mme, mpe, ppe)
from .grounding import GroundTask, ground, parse_plan, plan_cost, progress, validate
from .model_space import Edit, ModelFeature, gamma, gamma_inverse, model_delta
from .pddl import LiftedModel, emit_pddl, load_model, parse_domain, parse_problem
from .perturb import FaultSpec, inject, run_matrix
from .planner import Budget, BudgetExceeded, Planner, optimal_cost, optimal_plan

__version__ = "0.1.0"

__all__ = [
    "EXPLAINERS", "Explanation", "MrpInstance", "NoExplanation", "NotOptimal", "SearchSpaceTooLarge", "Unsolvable",
    "check_completeness", "check_monotonicity", "enumerate_mmes", "explain", "mce_approx", "mce_exact", "mme",
    "mpe", "ppe", "GroundTask", "ground", "parse_plan", "plan_cost", "progress", "validate", "Edit",
    "ModelFeature", "gamma", "gamma_inverse", "model_delta", "LiftedModel", "emit_pddl", "load_model",
    "parse_domain", "parse_problem", "FaultSpec", "inject", "run_matrix", "Budget", "BudgetExceeded", "Planner",
    "optimal_cost", "optimal_plan",
]
