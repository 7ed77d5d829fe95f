"""Exit criteria for the build, one test per criterion.

Each test logs a PASS/FAIL line that is echoed in the terminal summary:

    pytest tests/test_acceptance.py -v
"""
import contextlib
import random
import statistics
import time
from collections import Counter
from pathlib import Path

import pytest
from scipy import stats

from gaitevo.cli import main
from gaitevo.fitness import FALL_PENALTY, Evaluation, SimEvaluator, to_fitness
from gaitevo.ga import GaConfig, Individual, Population, catastrophe, evolve, mutate
from gaitevo.genome import (
    GENOME_LENGTH,
    Gene,
    Genome,
    ValidationLimits,
    ValueOutOfRange,
    format_genome,
    parse_genome,
    random_genome,
    validate,
)
from gaitevo.mockdevice import MockDevice
from gaitevo.serial_link import DeviceNack, DeviceTimeout, ProtocolError, SerialSettings, evaluate_serial
from gaitevo.sim import SimConfig, execute
from gaitevo.store import report_csv

import conftest
from conftest import FIG_EXAMPLE, padded
from sim_oracle import reference_run

GOLDEN = Path(__file__).parent / "golden" / "seed42.log"


@contextlib.contextmanager
def criterion(number, title):
    notes: list[str] = []
    try:
        yield notes
    except BaseException:
        conftest.ACCEPTANCE_LINES.append(f"FAIL  {number}. {title}")
        raise
    else:
        conftest.ACCEPTANCE_LINES.append(f"PASS  {number}. {title}")
    finally:
        conftest.ACCEPTANCE_LINES.extend(f"      {n}" for n in notes)


def test_1_core_constants():
    with criterion(1, "fall fitness -9, 15 genes, population 5, gene ranges"):
        assert to_fitness(Evaluation(12.0, True)) == -9
        assert FALL_PENALTY == -9
        assert GENOME_LENGTH == 15 and len(parse_genome(FIG_EXAMPLE)) == 15
        log = evolve(GaConfig(seed=0, n_iterations=0), SimEvaluator())
        assert len(log.initial_population) == 5 == GaConfig().capacity
        for ok in ["D0", "D1000", "B-90", "B90", "F-90", "F90", "E0"]:
            parse_genome(padded(f"{ok} E0"))
        for bad in ["D-1", "D1001", "B-91", "B91", "F-91", "F91", "E1"]:
            with pytest.raises(ValueOutOfRange):
                parse_genome(padded(f"{bad} E0"))
        fell = [m for seed in range(20)
                for m in evolve(GaConfig(seed=seed, n_iterations=0), SimEvaluator()).initial_population
                if m.fell]
        assert fell and all(m.fitness == -9 for m in fell)


def test_2_convergence_on_simulator():
    with criterion(2, "median best after 20 iterations >= 4.0 cm and >= 2x initial (100 seeds)") as notes:
        start = time.perf_counter()
        evaluator = SimEvaluator()
        initial, final = [], []
        for seed in range(100):
            log = evolve(GaConfig(seed=seed), evaluator)
            assert log.ga.p_cat == 0.1 and log.ga.n_iterations == 20
            initial.append(max(m.fitness for m in log.initial_population))
            final.append(log.records[-1].best_cm)
        elapsed = time.perf_counter() - start
        med_initial, med_final = statistics.median(initial), statistics.median(final)
        notes.append(
            f"median initial best {med_initial:.2f} cm, median final best {med_final:.2f} cm, "
            f"{elapsed:.1f} s")
        assert med_final >= 4.0
        assert med_final >= 2 * med_initial
        assert elapsed < 10


@pytest.mark.slow
def test_3_elitism_sweep():
    with criterion(3, "best_cm non-decreasing with p_cat = 0 over 1000 seeds"):
        evaluator = SimEvaluator()
        violations = 0
        for seed in range(1000):
            csv = report_csv(evolve(GaConfig(seed=seed, p_cat=0.0), evaluator))
            best = [float(row.split(",")[1]) for row in csv.splitlines()[1:]]
            violations += any(b < a for a, b in zip(best, best[1:]))
        assert violations == 0


def test_4_determinism(tmp_path):
    with criterion(4, "evolve --backend sim with a fixed seed is byte-identical (incl. golden file)"):
        a, b = tmp_path / "a.log", tmp_path / "b.log"
        for out in (a, b):
            assert main(["evolve", "--backend", "sim", "--seed", "42", "--iterations", "20",
                         "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes() == GOLDEN.read_bytes()


def test_5_dsl_round_trip():
    with criterion(5, "parse/format round trip on 1000 random genomes and the published example"):
        rng = random.Random(5)
        for _ in range(1000):
            g = random_genome(rng)
            text = format_genome(g)
            assert parse_genome(text) == g
            assert format_genome(parse_genome(text)) == text
        fig = parse_genome(FIG_EXAMPLE)
        assert validate(fig).ok
        assert format_genome(fig) == FIG_EXAMPLE


def test_6_existence_filter():
    with criterion(6, "crafted invalid children rejected with the right kinds; example accepted"):
        limits = ValidationLimits(delay_threshold=1000)
        corpus = [
            (parse_genome(padded("D50 F30 F-30 E0")), "OppositePair"),
            (parse_genome(padded("B-45 B45 D10 E0")), "OppositePair"),
            (parse_genome(padded("D1000 F10 E0")), "DelayTooLong"),
            (Genome(tuple(parse_genome(FIG_EXAMPLE).genes[:14])), "WrongLength"),
            (Genome(parse_genome(FIG_EXAMPLE).genes + (Gene("E", 0),)), "WrongLength"),
        ]
        for g, kind in corpus:
            report = validate(g, limits)
            assert not report.ok and kind in report.kinds(), (g, report)
        at_custom = parse_genome(padded("D300 E0"))
        assert validate(at_custom, ValidationLimits(300)).kinds() == {"DelayTooLong"}
        assert validate(parse_genome(FIG_EXAMPLE), limits).ok


def test_7_operator_statistics():
    with criterion(7, "mutation ~ Binomial(14, p_mut), catastrophe uniform (chi-square p > 0.001)") as notes:
        sentinel = Genome(tuple(Gene("D", 5000) for _ in range(14)) + (Gene("E", 0),))
        rng = random.Random(7)
        counts = Counter(sum(x.value != 5000 for x in mutate(sentinel, rng, 0.05).genes[:14])
                         for _ in range(10_000))
        dist = stats.binom(14, 0.05)
        expected = [dist.pmf(k) * 10_000 for k in range(4)] + [dist.sf(3) * 10_000]
        observed = [counts[k] for k in range(4)] + [sum(c for k, c in counts.items() if k >= 4)]
        p_mut = stats.chisquare(observed, expected).pvalue

        g = parse_genome(FIG_EXAMPLE)
        rng = random.Random(8)
        hits = Counter()
        for _ in range(10_000):
            pop = Population(5, [Individual(i, g, float(f), f == -9, 0)
                                 for i, f in zip(range(1, 6), [9, 5, 0, -1, -9])])
            hits.update(catastrophe(pop, rng, 2))
        p_cat = stats.chisquare([hits[i] for i in range(1, 6)], [4000] * 5).pvalue
        notes.append(f"mutation p = {p_mut:.3f}, catastrophe p = {p_cat:.3f}")
        assert p_mut > 0.001
        assert p_cat > 0.001


def test_8_simulator_oracle():
    with criterion(8, "simulator matches the hand-stepped oracle to 1e-9; swap symmetry; straightness"):
        hand = SimConfig(slew_rate=0.6, c_power=0.02, c_slip=0.008, c_turn=0.0, fall_split=120)
        cases = [("F-60 D200 E0", 1.20), ("F-60 D200 F0 D200 E0", 0.72), ("F-60 D50 E0", 0.60)]
        for text, expected in cases:
            g = parse_genome(padded(text))
            out = execute(g, hand)
            ref = reference_run([(x.opcode, x.value) for x in g.genes], 0.6, 0.02, 0.008, 0.0, 120)
            assert abs(out.displacement_cm - expected) <= 1e-9
            assert abs(out.displacement_cm - ref[0]) <= 1e-9
        assert execute(parse_genome(padded("F80 B-80 E0")), hand).fell

        swap = {"F": "B", "B": "F"}
        rng = random.Random(88)
        straight = SimConfig(c_turn=0.0)
        for _ in range(1000):
            g = random_genome(rng)
            h = Genome(tuple(Gene(swap.get(x.opcode, x.opcode), x.value) for x in g.genes))
            a, b = execute(g), execute(h)
            assert abs(a.displacement_cm - b.displacement_cm) <= 1e-9
            assert abs(a.heading_deg + b.heading_deg) <= 1e-9
            assert abs(a.deviation_deg - b.deviation_deg) <= 1e-9
            s = execute(g, straight)
            assert abs(s.y_cm) <= 1e-9 and s.deviation_deg <= 1e-9


def test_9_serial_conformance():
    with criterion(9, "serial client conformance against the mock device"):
        g = parse_genome(FIG_EXAMPLE)
        vectors = [
            ({"GO": "DIST 3.5"}, Evaluation(3.5, False)),
            ({"GO": "FALL"}, Evaluation(0.0, True)),
            ({"PROG": "ERR 1"}, DeviceNack),
            ({"PROG": "ERR 2"}, DeviceNack),
            ({"PROG": "ERR 3"}, DeviceNack),
            ({"PROG": "HUH"}, ProtocolError),
            ({"GO": "DIST x"}, ProtocolError),
            ({"GO": "!!"}, ProtocolError),
            ({"PROG": None}, DeviceTimeout),
            ({"GO": None}, DeviceTimeout),
        ]
        passed = 0
        for replies, expected in vectors:
            with MockDevice(replies=replies) as dev:
                settings = SerialSettings(dev.url, timeout=0.3)
                if isinstance(expected, Evaluation):
                    assert evaluate_serial(g, settings) == expected
                else:
                    with pytest.raises(expected):
                        evaluate_serial(g, settings)
            passed += 1
        assert passed == len(vectors)
