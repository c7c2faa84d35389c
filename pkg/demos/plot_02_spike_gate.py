"""
Spike gates
===========

SPIRAL multiplies each training input by ``clip(1 - nu, 0, 1)`` where ``nu``
is drawn around the current weights with a variance equal to the item's
confidence relative to the largest confidence seen so far.
"""

# %%
import numpy as np

from spiral.core import rng_new
from spiral.spike import SpikeState, sample_gate, update_running_max

rng = rng_new(0)

# %%
# With zero weights and full relative confidence the gate is
# clip(1 - Z, 0, 1) for standard normal Z; its mean is about 0.6844.
g = sample_gate(np.zeros(200_000), 1.0, rng)
print("mean gate", g.mean())
print("fraction fully dropped", (g == 0).mean(), "fully kept", (g == 1).mean())

# %%
# The ratio fed to the sampler: the first item always saturates it, later
# items are measured against the running maximum.
state = SpikeState()
for v in (4.0, 1.0, 8.0, 2.0):
    state, rho = update_running_max(state, v)
    print(f"confidence {v:4.1f}  running max {state.v_max:4.1f}  ratio {rho:.2f}")

# %%
# Large positive weights push the gate to zero: the corresponding input is
# dropped during training, regardless of the noise level.
mu = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
gates = np.array([sample_gate(mu, 0.25, rng) for _ in range(5000)])
for m, mean in zip(mu, gates.mean(0)):
    print(f"weight {m:+.1f}  mean gate {mean:.3f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    plt.hist(g, bins=50)
    plt.xlabel("gate value")
    plt.title("clip(1 - Z, 0, 1)")
    plt.savefig("spike_gate.png")
