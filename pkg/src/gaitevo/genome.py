"""Control-program genomes: genes, canonical text format, generation, validation.

A genome is a fixed sequence of 15 genes. Each gene is an opcode letter and
an integer value:

    D  0..1000   wait the given number of milliseconds
    B  -90..90   move the back servo to the given angle (degrees)
    F  -90..90   move the front servo to the given angle (degrees)
    E  0         stop execution

The canonical text form is 15 space-separated tokens such as ``D50 F-10 ... E0``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterator

GENOME_LENGTH = 15
MUTABLE_POSITIONS = GENOME_LENGTH - 1
OPCODES = ("D", "B", "F", "E")
MOVE_OPCODES = ("D", "B", "F")
VALUE_RANGES = {"D": (0, 1000), "B": (-90, 90), "F": (-90, 90), "E": (0, 0)}

_TOKEN = re.compile(r"^([A-Za-z])(-?\d+)$")


class GenomeError(ValueError):
    """Raised when genome text cannot be turned into a genome."""


class UnknownOpcode(GenomeError):
    pass


class ValueOutOfRange(GenomeError):
    def __init__(self, index: int, token: str):
        super().__init__(f"value out of range at index {index}: {token!r}")
        self.index = index


class WrongTokenCount(GenomeError):
    pass


class MalformedToken(GenomeError):
    pass


@dataclass(frozen=True)
class Gene:
    opcode: str
    value: int = 0

    def __str__(self) -> str:
        return f"{self.opcode}{self.value}"


TERMINATOR = Gene("E", 0)


@dataclass(frozen=True)
class Genome:
    genes: tuple[Gene, ...]

    def __post_init__(self):
        object.__setattr__(self, "genes", tuple(self.genes))

    def __len__(self) -> int:
        return len(self.genes)

    def __iter__(self) -> Iterator[Gene]:
        return iter(self.genes)

    def __getitem__(self, i):
        return self.genes[i]

    def __str__(self) -> str:
        return format_genome(self)

    @property
    def effective_length(self) -> int:
        """Number of genes executed before the first ``E`` (all of them if none)."""
        for i, gene in enumerate(self.genes):
            if gene.opcode == "E":
                return i
        return len(self.genes)


@dataclass(frozen=True)
class ValidationLimits:
    delay_threshold: int = 1000
    forbid_opposite_pairs: bool = True

    def __post_init__(self):
        if not 0 < self.delay_threshold <= 1000:
            raise ValueError(f"delay_threshold must be in (0, 1000], got {self.delay_threshold}")


@dataclass(frozen=True)
class Violation:
    gene_index: int
    kind: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def parse_gene(token: str, index: int = 0) -> Gene:
    m = _TOKEN.match(token)
    if m is None:
        raise MalformedToken(f"malformed token at index {index}: {token!r}")
    opcode, value = m.group(1), int(m.group(2))
    if opcode not in OPCODES:
        raise UnknownOpcode(f"unknown opcode at index {index}: {token!r}")
    lo, hi = VALUE_RANGES[opcode]
    if not lo <= value <= hi:
        raise ValueOutOfRange(index, token)
    return Gene(opcode, value)


def parse_genome(text: str) -> Genome:
    """Parse canonical genome text. Any whitespace separates tokens."""
    tokens = text.split()
    if len(tokens) != GENOME_LENGTH:
        raise WrongTokenCount(f"expected {GENOME_LENGTH} tokens, got {len(tokens)}")
    return Genome(tuple(parse_gene(tok, i) for i, tok in enumerate(tokens)))


def format_genome(g: Genome) -> str:
    return " ".join(str(gene) for gene in g.genes)


def is_opposite(a: Gene, b: Gene) -> bool:
    """Same servo commanded to exactly negated nonzero angles."""
    return a.opcode == b.opcode and a.opcode in ("B", "F") and a.value != 0 and b.value == -a.value


def random_gene(rng: random.Random, max_delay: int = 1000) -> Gene:
    """Draw one non-terminator gene; D values are uniform in ``[0, max_delay]``."""
    opcode = rng.choice(MOVE_OPCODES)
    if opcode == "D":
        return Gene("D", rng.randint(0, max_delay))
    return Gene(opcode, rng.randint(-90, 90))


def random_genome(rng: random.Random, limits: ValidationLimits | None = None) -> Genome:
    limits = limits or ValidationLimits()
    genes: list[Gene] = []
    for _ in range(MUTABLE_POSITIONS):
        gene = random_gene(rng, limits.delay_threshold - 1)
        while limits.forbid_opposite_pairs and genes and is_opposite(genes[-1], gene):
            gene = random_gene(rng, limits.delay_threshold - 1)
        genes.append(gene)
    genes.append(TERMINATOR)
    return Genome(tuple(genes))


def validate(g: Genome, limits: ValidationLimits | None = None) -> ValidationReport:
    """Check the existence conditions; problems come back as report entries."""
    limits = limits or ValidationLimits()
    last = GENOME_LENGTH - 1
    found: list[Violation] = []
    if len(g.genes) != GENOME_LENGTH:
        found.append(Violation(last, "WrongLength"))
    for i, gene in enumerate(g.genes):
        if gene.opcode not in OPCODES:
            found.append(Violation(i, "BadOpcode"))
            continue
        lo, hi = VALUE_RANGES[gene.opcode]
        if not lo <= gene.value <= hi:
            found.append(Violation(i, "OutOfRangeValue"))
        elif gene.opcode == "D" and gene.value >= limits.delay_threshold:
            found.append(Violation(i, "DelayTooLong"))
    if limits.forbid_opposite_pairs:
        for i in range(len(g.genes) - 1):
            if is_opposite(g.genes[i], g.genes[i + 1]):
                found.append(Violation(i, "OppositePair"))
    if not any(gene.opcode == "E" for gene in g.genes):
        found.append(Violation(last, "MissingTerminator"))
    found.sort(key=lambda v: v.gene_index)
    return ValidationReport(tuple(found))
