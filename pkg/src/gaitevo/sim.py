"""Surrogate kinematics for the two-servo paperclip walker.

The model is deliberately crude. Time advances in 1 ms steps and each servo
slews toward its commanded angle at a fixed rate. When exactly one servo moves
during a step, the other leg acts as the anchor and the body slides:

    d = c_power * max(0, -dtheta) - c_slip * max(0, +dtheta)

A negative-going rotation is the power stroke; a positive-going one drags the
body back by a smaller amount. If both servos move in the same step neither
leg is anchored and nothing happens. Front strokes turn the heading one way,
back strokes the other, by ``c_turn`` degrees per cm.

Commanding the two servos more than ``fall_split`` degrees apart scissors the
legs and the walker falls; execution stops right there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .genome import Genome, ValidationLimits, validate

DT_MS = 1
# a servo within this many degrees of its target has arrived; absorbs the
# rounding left over from repeated slew steps
ARRIVE_EPS = 1e-9


class InvalidGenome(ValueError):
    def __init__(self, report):
        kinds = ", ".join(f"{v.kind}@{v.gene_index}" for v in report.violations)
        super().__init__(f"genome fails validation: {kinds}")
        self.report = report


@dataclass(frozen=True)
class SimConfig:
    slew_rate: float = 0.6
    c_power: float = 0.06
    c_slip: float = 0.024
    c_turn: float = 2.0
    fall_split: float = 95.0

    def __post_init__(self):
        if self.slew_rate <= 0:
            raise ValueError("slew_rate must be positive")
        if not 0 <= self.c_slip < self.c_power:
            raise ValueError("need 0 <= c_slip < c_power")
        if self.fall_split <= 0:
            raise ValueError("fall_split must be positive")


@dataclass(frozen=True)
class WalkerState:
    t: int
    theta_f: float
    theta_b: float
    target_f: float
    target_b: float
    x: float
    y: float
    heading: float


@dataclass(frozen=True)
class SimOutcome:
    displacement_cm: float
    deviation_deg: float
    fell: bool
    duration_ms: int
    heading_deg: float = 0.0
    y_cm: float = 0.0


def _approach(theta: float, target: float, slew: float) -> float:
    diff = target - theta
    if abs(diff) <= slew + ARRIVE_EPS:
        return target
    return theta + slew if diff > 0 else theta - slew


class _Walker:
    def __init__(self, cfg: SimConfig, samples: list | None):
        self.cfg = cfg
        self.samples = samples
        self.t = 0
        self.theta_f = self.theta_b = 0.0
        self.target_f = self.target_b = 0.0
        self.x = self.y = self.heading = 0.0
        self.fell = False
        self._sample()

    def _sample(self):
        if self.samples is not None:
            self.samples.append(WalkerState(
                self.t, self.theta_f, self.theta_b, self.target_f, self.target_b,
                self.x, self.y, self.heading))

    def command(self, opcode: str, value: int) -> bool:
        if opcode == "F":
            self.target_f = float(value)
        else:
            self.target_b = float(value)
        if abs(self.target_f - self.target_b) >= self.cfg.fall_split:
            self.fell = True
        return self.fell

    def wait(self, ms: int):
        cfg = self.cfg
        end = self.t + ms
        while self.t < end:
            if self.samples is None and self.theta_f == self.target_f and self.theta_b == self.target_b:
                # idle: nothing changes for the rest of the delay
                self.t = end
                return
            new_f = _approach(self.theta_f, self.target_f, cfg.slew_rate * DT_MS)
            new_b = _approach(self.theta_b, self.target_b, cfg.slew_rate * DT_MS)
            d_f = new_f - self.theta_f
            d_b = new_b - self.theta_b
            self.theta_f, self.theta_b = new_f, new_b
            if d_f != 0 and d_b == 0:
                d = cfg.c_power * max(0.0, -d_f) - cfg.c_slip * max(0.0, d_f)
                sign = 1.0
            elif d_b != 0 and d_f == 0:
                d = cfg.c_power * max(0.0, -d_b) - cfg.c_slip * max(0.0, d_b)
                sign = -1.0
            else:
                d = 0.0
                sign = 0.0
            if d != 0.0:
                rad = math.radians(self.heading)
                self.x += d * math.cos(rad)
                self.y += d * math.sin(rad)
                self.heading += sign * cfg.c_turn * d
            self.t += DT_MS
            self._sample()

    def outcome(self) -> SimOutcome:
        return SimOutcome(
            displacement_cm=self.x,
            deviation_deg=abs(self.heading),
            fell=self.fell,
            duration_ms=self.t,
            heading_deg=self.heading,
            y_cm=self.y,
        )


def _run(g: Genome, cfg: SimConfig, limits: ValidationLimits | None, samples: list | None) -> _Walker:
    report = validate(g, limits)
    if not report.ok:
        raise InvalidGenome(report)
    walker = _Walker(cfg, samples)
    for gene in g.genes:
        if gene.opcode == "E":
            break
        if gene.opcode == "D":
            walker.wait(gene.value)
        elif walker.command(gene.opcode, gene.value):
            break
    return walker


def execute(g: Genome, cfg: SimConfig | None = None, limits: ValidationLimits | None = None) -> SimOutcome:
    """Run a genome on the surrogate walker and return where it ended up."""
    return _run(g, cfg or SimConfig(), limits, None).outcome()


def trace(g: Genome, cfg: SimConfig | None = None, limits: ValidationLimits | None = None) -> list[WalkerState]:
    """Per-millisecond walker states, ``duration_ms + 1`` samples including t=0."""
    samples: list[WalkerState] = []
    _run(g, cfg or SimConfig(), limits, samples)
    return samples
