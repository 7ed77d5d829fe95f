"""Evolve walking programs for a two-servo walker with a steady-state GA."""
from .fitness import Evaluation, FALL_PENALTY, SimEvaluator, evaluate_manual, evaluate_sim, to_fitness
from .ga import GaConfig, Individual, IterationRecord, Population, RunLog, evolve, step
from .genome import (
    Gene,
    Genome,
    ValidationLimits,
    ValidationReport,
    format_genome,
    parse_genome,
    random_genome,
    validate,
)
from .sim import SimConfig, SimOutcome, execute, trace

__version__ = "0.1.0"
