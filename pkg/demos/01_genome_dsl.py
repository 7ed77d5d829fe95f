# %% [markdown]
# # Control programs as genomes
#
# A walking program is 15 instructions. `D` waits, `B`/`F` point the back or
# front servo at an angle, `E` stops. This is the text form the rest of the
# package reads and writes.

# %%
import random

from gaitevo.genome import ValidationLimits, format_genome, parse_genome, random_genome, validate

program = parse_genome("D50 B0 F0 D50 F-10 D50 B10 D50 F0 B0 D50 F10 D50 B-10 E0")
print(program.genes[:4])
print("executes", program.effective_length, "instructions before E")

# %% [markdown]
# Children that break the existence conditions never reach the robot.
# Two rules: every delay stays below a threshold, and a servo is never sent
# straight back to the mirror angle it was just given.

# %%
for text in [
    "D50 F30 F-30 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 E0",
    "D999 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0 E0",
]:
    g = parse_genome(text)
    for limits in (ValidationLimits(), ValidationLimits(delay_threshold=500)):
        report = validate(g, limits)
        print(limits.delay_threshold, "ok" if report.ok else [(v.gene_index, v.kind) for v in report.violations])

# %% [markdown]
# Random programs come from an explicit, seeded generator, so the same seed
# always gives the same population.

# %%
rng = random.Random(7)
for _ in range(5):
    print(format_genome(random_genome(rng)))
