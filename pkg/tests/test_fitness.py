import io

import pytest

from gaitevo.fitness import (
    FALL_PENALTY,
    PROMPT,
    ConsoleClosed,
    Evaluation,
    SimEvaluator,
    evaluate_manual,
    evaluate_sim,
    to_fitness,
)
from gaitevo.genome import parse_genome
from gaitevo.sim import InvalidGenome, SimConfig

from conftest import FIG_EXAMPLE, padded


@pytest.mark.parametrize("ev,expected", [
    (Evaluation(8.0, False), 8.0),
    (Evaluation(-1.4, False), -1.4),
    (Evaluation(12.0, True), -9),
    (Evaluation(-30.0, True), -9),
    (Evaluation(0.0, True), -9),
])
def test_to_fitness(ev, expected):
    assert to_fitness(ev) == expected


def test_fall_penalty_is_exact():
    assert FALL_PENALTY == -9
    assert to_fitness(Evaluation(3.3, True)) == -9.0


def test_evaluate_sim(all_delay):
    assert evaluate_sim(all_delay) == Evaluation(0.0, False)
    assert evaluate_sim(parse_genome(padded("F80 B-80 E0"))).fell
    ev = evaluate_sim(parse_genome(padded("F-60 D200 E0")),
                      SimConfig(c_power=0.02, c_slip=0.008, c_turn=0.0))
    assert ev.displacement_cm == pytest.approx(1.20, abs=1e-9) and not ev.fell


def test_evaluate_sim_rejects_invalid():
    with pytest.raises(InvalidGenome):
        evaluate_sim(parse_genome(padded("B45 B-45 E0")))


def test_sim_evaluator_is_deterministic(fig_genome):
    ev = SimEvaluator()
    assert ev(fig_genome) == ev(fig_genome) == evaluate_sim(fig_genome)


def _manual(answers: str):
    out = io.StringIO()
    result = evaluate_manual(parse_genome(FIG_EXAMPLE), io.StringIO(answers), out)
    return result, out.getvalue()


def test_manual_number():
    result, shown = _manual("8.0\n")
    assert result == Evaluation(8.0, False)
    assert shown.startswith(FIG_EXAMPLE + "\n")
    assert PROMPT.strip() == "measured displacement cm (or FALL):"
    assert shown.count(PROMPT) == 1


@pytest.mark.parametrize("word", ["fall", "FALL", "Fall", "  fall  "])
def test_manual_fall(word):
    result, _ = _manual(word + "\n")
    assert result == Evaluation(0.0, True)
    assert to_fitness(result) == -9


def test_manual_reprompts():
    result, shown = _manual("abc\n\nnan\n-1.4\n")
    assert result == Evaluation(-1.4, False)
    assert shown.count(PROMPT) == 4


def test_manual_console_closed():
    with pytest.raises(ConsoleClosed):
        _manual("abc\n")
