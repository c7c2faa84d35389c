"""
Fitting random labels
=====================

A learner's practical capacity: relabel the training data with fair coins,
train, and measure how far below 50% its error on those same labels gets.
"""

# %%
from pathlib import Path

from spiral.data import load_mnist, make_binary_tasks
from spiral.evaluation import rademacher_estimate, rademacher_report
from spiral.learners import LearnerConfig

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
train_set = make_binary_tasks(
    load_mnist(DATA / "mnist4k-images-idx3-ubyte.gz", DATA / "mnist4k-labels-idx1-ubyte.gz"),
    digits=[0])[0].train

# %%
# Ten relabelings, shared across algorithms for the same seed.  The
# "constant" learner ignores its input and sits at the 0.5 baseline.
entries = [rademacher_estimate(LearnerConfig(algo), train_set, n_relabelings=10,
                               master_seed=3)
           for algo in ("constant", "perceptron", "arow", "spiral")]
for e in entries:
    print(f"{e.algorithm:12s} mean error {e.mean_error:.4f}"
          f"  error reduction {100 * e.error_reduction:5.2f}%")

print(rademacher_report(entries))
