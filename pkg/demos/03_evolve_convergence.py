# %% [markdown]
# # Learning to walk
#
# Five random programs, then twenty steady-state iterations: cross the best
# two, mutate, filter, evaluate, keep the child if it beats the weaker parent.

# %%
import io
import statistics

from gaitevo.fitness import SimEvaluator
from gaitevo.ga import GaConfig, best_member, evolve
from gaitevo.store import report_csv

log = evolve(GaConfig(seed=42), SimEvaluator())
print(report_csv(log))
best = best_member(log)
print(f"best {best.fitness:.2f} cm:", best.genome)

# %% [markdown]
# One run is noisy. Over 100 seeds the median best distance roughly
# quintuples within the twenty iterations.

# %%
initial, final = [], []
for seed in range(100):
    run = evolve(GaConfig(seed=seed), SimEvaluator())
    initial.append(max(m.fitness for m in run.initial_population))
    final.append(run.records[-1].best_cm)
print(f"median initial best {statistics.median(initial):.2f} cm")
print(f"median final best   {statistics.median(final):.2f} cm")

# %% [markdown]
# The CSV is meant for plotting: distance against iteration.

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    rows = np.loadtxt(io.StringIO(report_csv(log)), delimiter=",", skiprows=1)
    plt.figure(figsize=(6, 3.5))
    plt.plot(rows[:, 0], rows[:, 1], "o-", label="best")
    plt.plot(rows[:, 0], rows[:, 2], "s--", label="mean")
    plt.xlabel("iteration")
    plt.ylabel("walking distance [cm]")
    plt.legend()
    plt.tight_layout()
    plt.savefig("convergence.png", dpi=100)
    print("wrote convergence.png")
except ImportError:
    pass
