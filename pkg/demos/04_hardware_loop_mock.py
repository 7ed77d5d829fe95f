# %% [markdown]
# # Evaluating on a robot over a serial line
#
# The real robot answers `PROG`/`GO` with a measured distance. Here the
# bundled mock device plays the robot over a local socket; point
# `SerialSettings` at `/dev/ttyUSB0` (or similar) for hardware.

# %%
from gaitevo.ga import GaConfig, best_member, evolve
from gaitevo.mockdevice import MockDevice
from gaitevo.serial_link import DeviceNack, SerialClient, SerialSettings
from gaitevo.genome import parse_genome

with MockDevice() as device:
    with SerialClient.open(SerialSettings(device.url, timeout=2)) as robot:
        robot.ping()
        log = evolve(GaConfig(seed=1, n_iterations=10), robot, backend={"name": "serial", "port": device.url})
    print("commands seen by the device:", len(device.received))
best = best_member(log)
print(f"best {best.fitness:.2f} cm:", best.genome)

# %% [markdown]
# Errors from the device surface as typed exceptions.

# %%
with MockDevice(replies={"PROG": "ERR 3"}) as busy:
    with SerialClient.open(SerialSettings(busy.url, timeout=1)) as robot:
        try:
            robot.evaluate(parse_genome("D50 B0 F0 D50 F-10 D50 B10 D50 F0 B0 D50 F10 D50 B-10 E0"))
        except DeviceNack as exc:
            print("device said no:", exc.code)
