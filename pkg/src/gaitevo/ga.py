"""Steady-state genetic algorithm over control-program genomes.

One child per iteration: the two fittest members are crossed, the child is
mutated, filtered by the existence conditions, evaluated, and kept only if
there is room or it beats the weaker parent. A random, fitness-blind
catastrophe occasionally thins the population.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .fitness import Evaluation, Evaluator, to_fitness
from .genome import (
    MUTABLE_POSITIONS,
    Genome,
    ValidationLimits,
    random_gene,
    random_genome,
    validate,
)
from .sim import SimConfig


class PopulationTooSmall(ValueError):
    pass


class EvaluatorFailure(RuntimeError):
    def __init__(self, iteration: int, cause: BaseException):
        super().__init__(f"evaluation failed at iteration {iteration}: {cause}")
        self.iteration = iteration
        self.cause = cause


@dataclass(frozen=True)
class GaConfig:
    capacity: int = 5
    p_mut: float = 0.2
    p_cat: float = 0.1
    cat_count: int = 2
    limits: ValidationLimits = field(default_factory=ValidationLimits)
    max_child_retries: int = 20
    n_iterations: int = 20
    seed: int | None = None

    def __post_init__(self):
        if self.capacity < 2:
            raise ValueError("capacity must be at least 2")
        for name in ("p_mut", "p_cat"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.cat_count < 0:
            raise ValueError("cat_count must be >= 0")
        if self.max_child_retries < 1:
            raise ValueError("max_child_retries must be >= 1")
        if self.n_iterations < 0:
            raise ValueError("n_iterations must be >= 0")


@dataclass(frozen=True)
class Individual:
    id: int
    genome: Genome
    fitness: float
    fell: bool
    born_iteration: int


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    catastrophe_removed: tuple[int, ...]
    child_genome: Genome | None
    child_fitness: float | None
    child_fell: bool | None
    child_id: int | None
    accepted: bool
    replaced_id: int | None
    best_cm: float
    mean_cm: float
    population_size: int
    member_ids: tuple[int, ...]


@dataclass
class RunLog:
    ga: GaConfig
    sim: SimConfig | None
    backend: dict
    initial_population: list[Individual]
    records: list[IterationRecord] = field(default_factory=list)


class Population:
    def __init__(self, capacity: int = 5, members: list[Individual] | None = None):
        self.capacity = capacity
        self.members: list[Individual] = list(members or [])
        self._next_id = max((m.id for m in self.members), default=0) + 1

    def __len__(self) -> int:
        return len(self.members)

    def new_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i

    def add(self, ind: Individual):
        if len(self.members) >= self.capacity:
            raise ValueError("population is full")
        self.members.append(ind)

    def remove(self, ind_id: int):
        self.members = [m for m in self.members if m.id != ind_id]

    def best(self) -> float:
        return max(m.fitness for m in self.members)

    def mean(self) -> float:
        return math.fsum(m.fitness for m in self.members) / len(self.members)

    def ids(self) -> tuple[int, ...]:
        return tuple(m.id for m in self.members)


def select_parents(pop: Population) -> tuple[Individual, Individual]:
    """The two fittest members, best first; ties go to the older (smaller) id."""
    if len(pop) < 2:
        raise PopulationTooSmall(f"need at least 2 members, have {len(pop)}")
    ranked = sorted(pop.members, key=lambda m: (-m.fitness, m.id))
    return ranked[0], ranked[1]


def crossover(pa: Genome, pb: Genome, rng: random.Random) -> Genome:
    k = rng.randint(1, len(pa) - 1)
    return Genome(pa.genes[:k] + pb.genes[k:])


def mutate(g: Genome, rng: random.Random, p_mut: float) -> Genome:
    genes = list(g.genes)
    for i in range(MUTABLE_POSITIONS):
        if rng.random() < p_mut:
            genes[i] = random_gene(rng)
    return Genome(tuple(genes))


def catastrophe(pop: Population, rng: random.Random, cat_count: int) -> list[int]:
    """Remove random members regardless of fitness, always leaving two."""
    k = max(0, min(cat_count, len(pop) - 2))
    victims = rng.sample(pop.ids(), k)
    for v in victims:
        pop.remove(v)
    return victims


def _evaluate(evaluate: Evaluator, g: Genome, iteration: int) -> Evaluation:
    try:
        return evaluate(g)
    except Exception as exc:
        raise EvaluatorFailure(iteration, exc) from exc


def make_child(pa: Genome, pb: Genome, rng: random.Random, config: GaConfig) -> Genome | None:
    for _ in range(config.max_child_retries):
        child = mutate(crossover(pa, pb, rng), rng, config.p_mut)
        if validate(child, config.limits).ok:
            return child
    return None


def step(pop: Population, rng: random.Random, iteration: int, evaluate: Evaluator,
         config: GaConfig) -> IterationRecord:
    """Run one steady-state iteration in place and describe what happened."""
    removed: list[int] = []
    if rng.random() < config.p_cat:
        removed = catastrophe(pop, rng, config.cat_count)

    pa, pb = select_parents(pop)
    child_genome = make_child(pa.genome, pb.genome, rng, config)

    child = None
    accepted = False
    replaced = None
    if child_genome is not None:
        ev = _evaluate(evaluate, child_genome, iteration)
        child = Individual(pop.new_id(), child_genome, to_fitness(ev), ev.fell, iteration)
        if len(pop) < pop.capacity:
            pop.add(child)
            accepted = True
        elif child.fitness > min(pa.fitness, pb.fitness):
            replaced = pb.id
            pop.remove(pb.id)
            pop.add(child)
            accepted = True

    return IterationRecord(
        iteration=iteration,
        catastrophe_removed=tuple(removed),
        child_genome=child_genome,
        child_fitness=child.fitness if child else None,
        child_fell=child.fell if child else None,
        child_id=child.id if child else None,
        accepted=accepted,
        replaced_id=replaced,
        best_cm=pop.best(),
        mean_cm=pop.mean(),
        population_size=len(pop),
        member_ids=pop.ids(),
    )


def initial_population(rng: random.Random, evaluate: Evaluator, config: GaConfig) -> Population:
    pop = Population(config.capacity)
    genomes = [random_genome(rng, config.limits) for _ in range(config.capacity)]
    for g in genomes:
        ev = _evaluate(evaluate, g, 0)
        pop.add(Individual(pop.new_id(), g, to_fitness(ev), ev.fell, 0))
    return pop


def evolve(config: GaConfig, evaluate: Evaluator, sim: SimConfig | None = None,
           backend: dict | None = None,
           on_record: Callable[[object], None] | None = None) -> RunLog:
    """Run a full seeded evolution.

    ``on_record`` is called with the initial individuals and then each
    iteration record as soon as they exist, so callers can append to a log
    file while a slow hardware run is in progress.
    """
    if config.seed is None:
        raise ValueError("a seed is required")
    rng = random.Random(config.seed)
    pop = initial_population(rng, evaluate, config)
    log = RunLog(config, sim, dict(backend or {"name": "sim"}), list(pop.members))
    if on_record:
        for ind in log.initial_population:
            on_record(ind)
    for it in range(1, config.n_iterations + 1):
        rec = step(pop, rng, it, evaluate, config)
        log.records.append(rec)
        if on_record:
            on_record(rec)
    return log


def alive_members(log: RunLog) -> list[Individual]:
    """Individuals in the population after the last logged iteration."""
    known = {ind.id: ind for ind in log.initial_population}
    for rec in log.records:
        if rec.child_id is not None:
            known[rec.child_id] = Individual(
                rec.child_id, rec.child_genome, rec.child_fitness, rec.child_fell, rec.iteration)
    if not log.records:
        return list(log.initial_population)
    return [known[i] for i in log.records[-1].member_ids]


def best_member(log: RunLog) -> Individual:
    return min(alive_members(log), key=lambda m: (-m.fitness, m.id))
