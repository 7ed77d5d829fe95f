"""Fitness evaluation backends.

Every backend turns a genome into an :class:`Evaluation` (signed displacement
in cm plus a fall flag). :func:`to_fitness` collapses that into the scalar the
GA ranks on. The GA only ever sees a ``Callable[[Genome], Evaluation]``.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, TextIO

from .genome import Genome, ValidationLimits, format_genome
from .sim import SimConfig, execute

FALL_PENALTY = -9.0
PROMPT = "measured displacement cm (or FALL): "


@dataclass(frozen=True)
class Evaluation:
    displacement_cm: float
    fell: bool = False


Evaluator = Callable[[Genome], Evaluation]


class ConsoleClosed(EOFError):
    pass


def to_fitness(e: Evaluation) -> float:
    if e.fell:
        return FALL_PENALTY
    return e.displacement_cm


def evaluate_sim(g: Genome, cfg: SimConfig | None = None, limits: ValidationLimits | None = None) -> Evaluation:
    out = execute(g, cfg, limits)
    return Evaluation(out.displacement_cm, out.fell)


class SimEvaluator:
    def __init__(self, cfg: SimConfig | None = None, limits: ValidationLimits | None = None):
        self.cfg = cfg or SimConfig()
        self.limits = limits

    def __call__(self, g: Genome) -> Evaluation:
        return evaluate_sim(g, self.cfg, self.limits)


def parse_measurement(text: str) -> Evaluation | None:
    """Operator reply -> Evaluation, or None if the reply makes no sense."""
    text = text.strip()
    if text.upper() == "FALL":
        return Evaluation(0.0, True)
    try:
        value = float(text)
    except ValueError:
        return None
    if value != value or value in (float("inf"), float("-inf")):
        return None
    return Evaluation(value, False)


def evaluate_manual(g: Genome, stdin: TextIO | None = None, stdout: TextIO | None = None) -> Evaluation:
    """Ask a human to run the program on the robot and type what happened."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    print(format_genome(g), file=stdout)
    while True:
        stdout.write(PROMPT)
        stdout.flush()
        line = stdin.readline()
        if not line:
            raise ConsoleClosed("console closed while waiting for a measurement")
        result = parse_measurement(line)
        if result is not None:
            return result
        print(f"could not read {line.strip()!r}; enter a number like -1.4 or FALL", file=stdout)


class ManualEvaluator:
    def __init__(self, stdin: TextIO | None = None, stdout: TextIO | None = None):
        self.stdin = stdin
        self.stdout = stdout

    def __call__(self, g: Genome) -> Evaluation:
        return evaluate_manual(g, self.stdin, self.stdout)
