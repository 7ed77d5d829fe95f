"""Run logs, config files and CSV reports.

A run log is JSON Lines: one config record, one record per initial individual,
then one record per iteration. Lines are written as soon as they exist so a
crashed hardware session still leaves a readable prefix behind.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .ga import GaConfig, Individual, IterationRecord, RunLog
from .genome import GenomeError, ValidationLimits, format_genome, parse_genome
from .sim import SimConfig, WalkerState

CSV_HEADER = "iteration,best_cm,mean_cm,population_size"
BACKENDS = ("sim", "manual", "serial")
BACKEND_KEYS = {"name", "port", "baud", "timeout"}


class MalformedRecord(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class ConfigError(ValueError):
    pass


# -- config ------------------------------------------------------------------

@dataclass
class Settings:
    ga: GaConfig = field(default_factory=GaConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    backend: dict = field(default_factory=lambda: {"name": "sim"})


def _section(cls, data, name: str, skip=()):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be an object")
    allowed = {f.name for f in dataclasses.fields(cls)} - set(skip)
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {name!r}: {', '.join(sorted(unknown))}")
    return data


def settings_from_dict(doc: dict) -> Settings:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - {"ga", "sim", "limits", "backend"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    try:
        limits = ValidationLimits(**_section(ValidationLimits, doc.get("limits"), "limits"))
        ga = GaConfig(limits=limits, **_section(GaConfig, doc.get("ga"), "ga", skip=("limits",)))
        sim = SimConfig(**_section(SimConfig, doc.get("sim"), "sim"))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    backend = dict(doc.get("backend") or {})
    backend.setdefault("name", "sim")
    unknown = set(backend) - BACKEND_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s) in 'backend': {', '.join(sorted(unknown))}")
    if backend["name"] not in BACKENDS:
        raise ConfigError(f"unknown backend {backend['name']!r}")
    return Settings(ga, sim, backend)


def load_config(path) -> Settings:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return settings_from_dict(doc)


def settings_to_dict(s: Settings) -> dict:
    ga = dataclasses.asdict(s.ga)
    limits = ga.pop("limits")
    return {"ga": ga, "limits": limits, "sim": dataclasses.asdict(s.sim), "backend": dict(s.backend)}


# -- run log -----------------------------------------------------------------

def config_record(log: RunLog) -> dict:
    ga = dataclasses.asdict(log.ga)
    limits = ga.pop("limits")
    return {
        "kind": "config",
        "ga": ga,
        "limits": limits,
        "sim": dataclasses.asdict(log.sim) if log.sim is not None else None,
        "backend": log.backend,
    }


def individual_record(ind: Individual) -> dict:
    return {
        "kind": "individual",
        "id": ind.id,
        "genome": format_genome(ind.genome),
        "fitness": ind.fitness,
        "fell": ind.fell,
        "born_iteration": ind.born_iteration,
    }


def iteration_record(rec: IterationRecord) -> dict:
    return {
        "kind": "iteration",
        "iteration": rec.iteration,
        "catastrophe_removed": list(rec.catastrophe_removed),
        "child_genome": format_genome(rec.child_genome) if rec.child_genome is not None else None,
        "child_fitness": rec.child_fitness,
        "child_fell": rec.child_fell,
        "child_id": rec.child_id,
        "accepted": rec.accepted,
        "replaced_id": rec.replaced_id,
        "best_cm": rec.best_cm,
        "mean_cm": rec.mean_cm,
        "population_size": rec.population_size,
        "member_ids": list(rec.member_ids),
    }


def encode(obj) -> str:
    if isinstance(obj, Individual):
        obj = individual_record(obj)
    elif isinstance(obj, IterationRecord):
        obj = iteration_record(obj)
    elif isinstance(obj, RunLog):
        obj = config_record(obj)
    return json.dumps(obj, allow_nan=False) + "\n"


def dump_log(log: RunLog) -> str:
    parts = [encode(log)]
    parts += [encode(ind) for ind in log.initial_population]
    parts += [encode(rec) for rec in log.records]
    return "".join(parts)


def save_log(log: RunLog, path):
    Path(path).write_text(dump_log(log))


class LogWriter:
    """Append-as-you-go writer; pass :meth:`write` as ``evolve(on_record=...)``."""

    def __init__(self, path, ga: GaConfig, sim: SimConfig | None, backend: dict):
        self._fh = open(path, "w")
        self._fh.write(encode(RunLog(ga, sim, backend, [])))
        self._fh.flush()

    def write(self, item):
        self._fh.write(encode(item))
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(f"expected a number, got {v!r}")
    return float(v)


def _opt(v, conv):
    return None if v is None else conv(v)


def _decode_individual(d: dict) -> Individual:
    return Individual(
        id=int(d["id"]),
        genome=parse_genome(d["genome"]),
        fitness=_float(d["fitness"]),
        fell=bool(d["fell"]),
        born_iteration=int(d["born_iteration"]),
    )


def _decode_iteration(d: dict) -> IterationRecord:
    return IterationRecord(
        iteration=int(d["iteration"]),
        catastrophe_removed=tuple(int(i) for i in d["catastrophe_removed"]),
        child_genome=_opt(d["child_genome"], parse_genome),
        child_fitness=_opt(d["child_fitness"], _float),
        child_fell=_opt(d["child_fell"], bool),
        child_id=_opt(d["child_id"], int),
        accepted=bool(d["accepted"]),
        replaced_id=_opt(d["replaced_id"], int),
        best_cm=_float(d["best_cm"]),
        mean_cm=_float(d["mean_cm"]),
        population_size=int(d["population_size"]),
        member_ids=tuple(int(i) for i in d["member_ids"]),
    )


def parse_log(text: str) -> RunLog:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        # last line lacks its newline: the file was cut mid-write
        raise MalformedRecord(len(lines), "truncated record (no trailing newline)")

    def load(i: int, kind: str) -> dict:
        if i >= len(lines):
            raise MalformedRecord(i + 1, f"missing {kind} record")
        try:
            d = json.loads(lines[i])
        except json.JSONDecodeError as exc:
            raise MalformedRecord(i + 1, f"invalid JSON: {exc}") from None
        if not isinstance(d, dict) or d.get("kind") != kind:
            raise MalformedRecord(i + 1, f"expected a {kind} record")
        return d

    head = load(0, "config")
    try:
        limits = ValidationLimits(**head["limits"])
        ga = GaConfig(limits=limits, **head["ga"])
        sim = SimConfig(**head["sim"]) if head["sim"] is not None else None
        backend = dict(head["backend"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(1, f"bad config record: {exc}") from None

    def decode(i: int, kind: str, fn):
        d = load(i, kind)
        try:
            return fn(d)
        except (KeyError, TypeError, ValueError, GenomeError) as exc:
            raise MalformedRecord(i + 1, f"bad {kind} record: {exc}") from None

    initial = [decode(1 + k, "individual", _decode_individual) for k in range(ga.capacity)]
    first = 1 + ga.capacity
    records = [decode(first + k, "iteration", _decode_iteration) for k in range(ga.n_iterations)]
    if len(lines) > first + ga.n_iterations:
        raise MalformedRecord(first + ga.n_iterations + 1, "unexpected extra record")
    return RunLog(ga, sim, backend, initial, records)


def load_log(path) -> RunLog:
    return parse_log(Path(path).read_text())


# -- reports -----------------------------------------------------------------

def _cm(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def population_stats(individuals) -> tuple[float, float]:
    fits = [ind.fitness for ind in individuals]
    return max(fits), math.fsum(fits) / len(fits)


def report_rows(log: RunLog) -> list[tuple[int, float, float, int]]:
    best, mean = population_stats(log.initial_population)
    rows = [(0, best, mean, len(log.initial_population))]
    rows += [(r.iteration, r.best_cm, r.mean_cm, r.population_size) for r in log.records]
    return rows


def report_csv(log: RunLog) -> str:
    """Best and mean fitness per iteration; row 0 is the initial population."""
    out = [CSV_HEADER]
    for it, best, mean, size in report_rows(log):
        out.append(f"{it},{_cm(best)},{_cm(mean)},{size}")
    return "\n".join(out) + "\n"


TRACE_HEADER = "t_ms,theta_f,theta_b,target_f,target_b,x_cm,y_cm,heading_deg"


def trace_csv(states: list[WalkerState]) -> str:
    out = [TRACE_HEADER]
    for s in states:
        out.append(",".join([str(s.t)] + [f"{v:.4f}" for v in (
            s.theta_f, s.theta_b, s.target_f, s.target_b, s.x, s.y, s.heading)]))
    return "\n".join(out) + "\n"
