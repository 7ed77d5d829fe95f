"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 device/backend failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import random
import sys

from . import __version__
from .fitness import ManualEvaluator, SimEvaluator
from .ga import EvaluatorFailure, best_member, evolve
from .genome import GenomeError, format_genome, parse_genome, random_genome, validate
from .serial_link import SerialClient, SerialLinkError, SerialSettings
from .sim import execute, trace
from .store import (
    ConfigError,
    LogWriter,
    MalformedRecord,
    Settings,
    load_config,
    load_log,
    report_csv,
    trace_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_BACKEND = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _cm(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _settings(path) -> Settings:
    return load_config(path) if path else Settings()


def _read_genomes(path) -> list[tuple[int, str]]:
    with open(path) as fh:
        return [(n, line.strip()) for n, line in enumerate(fh, 1) if line.strip()]


def cmd_evolve(args) -> int:
    settings = _settings(args.config)
    ga = settings.ga
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.iterations is not None:
        overrides["n_iterations"] = args.iterations
    if overrides:
        ga = dataclasses.replace(ga, **overrides)
    if ga.seed is None:
        raise UsageError("a seed is required (--seed or ga.seed in the config)")
    backend = dict(settings.backend)
    if args.backend:
        backend["name"] = args.backend
    if args.port:
        backend["port"] = args.port
    if args.timeout is not None:
        backend["timeout"] = args.timeout

    client = None
    name = backend["name"]
    if name == "sim":
        evaluator = SimEvaluator(settings.sim, ga.limits)
    elif name == "manual":
        evaluator = ManualEvaluator()
    else:
        if "port" not in backend:
            raise UsageError("the serial backend needs a port (--port or backend.port)")
        link = SerialSettings(backend["port"], backend.get("baud", 115200), backend.get("timeout", 30.0))
        client = SerialClient.open(link)
        try:
            client.ping()
        except SerialLinkError:
            client.close()
            raise
        evaluator = client

    sim = settings.sim if name == "sim" else None
    try:
        with LogWriter(args.out, ga, sim, backend) as writer:
            log = evolve(ga, evaluator, sim=sim, backend=backend, on_record=writer.write)
    finally:
        if client is not None:
            client.close()

    best = best_member(log)
    print(f"best_cm={_cm(best.fitness)}")
    print(f"genome={format_genome(best.genome)}")
    return EXIT_OK


def cmd_run(args) -> int:
    settings = _settings(args.config)
    genomes = _read_genomes(args.genome_file)
    if args.trace and len(genomes) != 1:
        raise UsageError("--trace needs a file holding exactly one genome")
    parsed = []
    for line_no, text in genomes:
        try:
            g = parse_genome(text)
        except GenomeError as exc:
            raise UsageError(f"line {line_no}: {exc}") from None
        report = validate(g, settings.ga.limits)
        if not report.ok:
            for v in report.violations:
                print(f"line {line_no}: {v.kind} at index {v.gene_index}", file=sys.stderr)
            return EXIT_INPUT
        parsed.append(g)
    for g in parsed:
        out = execute(g, settings.sim, settings.ga.limits)
        print(f"displacement_cm={_cm(out.displacement_cm)} deviation_deg={_cm(out.deviation_deg)} "
              f"fell={'true' if out.fell else 'false'}")
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace_csv(trace(parsed[0], settings.sim, settings.ga.limits)))
    return EXIT_OK


def cmd_validate(args) -> int:
    limits = _settings(args.config).ga.limits
    bad = False
    for line_no, text in _read_genomes(args.genome_file):
        try:
            g = parse_genome(text)
        except GenomeError as exc:
            print(f"line {line_no}: {exc}")
            bad = True
            continue
        for v in validate(g, limits).violations:
            print(f"line {line_no}: {v.kind} at index {v.gene_index}")
            bad = True
    if bad:
        return EXIT_INPUT
    print("OK")
    return EXIT_OK


def cmd_rand(args) -> int:
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    limits = _settings(args.config).ga.limits
    rng = random.Random(args.seed)
    for _ in range(args.count):
        print(format_genome(random_genome(rng, limits)))
    return EXIT_OK


def cmd_report(args) -> int:
    text = report_csv(load_log(args.log_file))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gaitevo", description="Evolve walking programs for a two-servo robot.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("evolve", help="run the genetic algorithm")
    e.add_argument("--config")
    e.add_argument("--seed", type=int)
    e.add_argument("--iterations", type=int)
    e.add_argument("--backend", choices=["sim", "manual", "serial"])
    e.add_argument("--port", help="serial port or pyserial URL")
    e.add_argument("--timeout", type=float, help="serial reply timeout in seconds")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_evolve)

    r = sub.add_parser("run", help="execute genomes on the simulator")
    r.add_argument("genome_file")
    r.add_argument("--backend", choices=["sim"], default="sim")
    r.add_argument("--config")
    r.add_argument("--trace", help="write a per-ms trace CSV here")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("validate", help="check genomes against the existence conditions")
    v.add_argument("genome_file")
    v.add_argument("--config")
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("rand", help="print random valid genomes")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--config")
    g.set_defaults(func=cmd_rand)

    rep = sub.add_parser("report", help="convergence CSV from a run log")
    rep.add_argument("log_file")
    rep.add_argument("--csv")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, MalformedRecord, GenomeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SerialLinkError, EvaluatorFailure, EOFError) as exc:
        print(f"backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
