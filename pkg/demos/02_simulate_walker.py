# %% [markdown]
# # The surrogate walker
#
# Stand-in for the tape measure: run a program on a 1 ms kinematic model and
# read off how far the robot got, how much it turned and whether it fell.

# %%
from gaitevo.genome import parse_genome
from gaitevo.sim import SimConfig, execute, trace

stroke = parse_genome("F-60 D200 F0 D200 E0 D0 D0 D0 D0 D0 D0 D0 D0 D0 D0")
print(execute(stroke))

# %% [markdown]
# With the coefficients from the hand calculation (power 0.02, slip 0.008 cm
# per degree, no turning) the front leg's 60 degree power stroke gains
# 1.20 cm and the return costs 0.48 cm.

# %%
hand = SimConfig(c_power=0.02, c_slip=0.008, c_turn=0.0, fall_split=120)
print(round(execute(stroke, hand).displacement_cm, 6))

# %% [markdown]
# A program that splays the legs too far apart falls, whatever comes after.

# %%
print(execute(parse_genome("F-30 D100 F70 B-40 D500 E0 D0 D0 D0 D0 D0 D0 D0 D0 D0")))

# %% [markdown]
# Servo angles and position over time for an alternating gait.

# %%
gait = parse_genome("F-60 D120 B-60 D120 F20 B20 D150 F-60 D120 B-60 D120 E0 D0 D0 D0")
samples = trace(gait)
print(execute(gait))
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = [s.t for s in samples]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    ax1.plot(t, [s.theta_f for s in samples], label="front")
    ax1.plot(t, [s.theta_b for s in samples], label="back")
    ax1.set_ylabel("servo [deg]")
    ax1.legend()
    ax2.plot(t, [s.x for s in samples])
    ax2.set_ylabel("x [cm]")
    ax2.set_xlabel("t [ms]")
    fig.savefig("walker_trace.png", dpi=100)
    print("wrote walker_trace.png")
except ImportError:
    pass
