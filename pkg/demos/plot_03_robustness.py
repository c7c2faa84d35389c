"""
Deleting features at test time
==============================

Train on clean MNIST one-vs-rest tasks, then score each model on test images
where only a random fraction of the pixels is kept.

Uses the 4000-image fixture shipped in ``tests/data``; point ``IMAGES`` and
``LABELS`` at ``train-images-idx3-ubyte`` / ``train-labels-idx1-ubyte`` to
run on full MNIST.
"""

# %%
from pathlib import Path

from spiral.data import load_mnist, make_binary_tasks
from spiral.evaluation import SweepConfig, robustness_sweep

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
IMAGES = DATA / "mnist4k-images-idx3-ubyte.gz"
LABELS = DATA / "mnist4k-labels-idx1-ubyte.gz"

# %%
# Ten digit-vs-rest problems; odd positions train, even positions test.
# Two tasks keep the demo short.
tasks = make_binary_tasks(load_mnist(IMAGES, LABELS), digits=[0, 1])

cfg = SweepConfig(algorithms=("perceptron", "averaged-perceptron", "arow", "spiral"),
                  repeats=3, master_seed=1)
table = robustness_sweep(tasks, cfg, jobs=2)

# %%
# Mean accuracy over the mask repeats, one line per algorithm.
for task in tasks:
    print(task.name, "keep", " ".join(f"{k:5.1f}" for k in cfg.keep_grid))
    for algo in cfg.algorithms:
        accs = [table.mean_accuracy(task.name, algo, k) for k in cfg.keep_grid]
        print(f"  {algo:20s}", " ".join(f"{a:5.3f}" for a in accs))

Path("robustness.csv").write_text(table.to_csv())

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, axes = plt.subplots(1, len(tasks), figsize=(5 * len(tasks), 4), sharey=True)
    for ax, task in zip(axes, tasks):
        for algo in cfg.algorithms:
            ax.plot(cfg.keep_grid,
                    [table.mean_accuracy(task.name, algo, k) for k in cfg.keep_grid],
                    marker="o", label=algo)
        ax.set_title(task.name)
        ax.set_xlabel("fraction of features kept")
    axes[0].set_ylabel("accuracy")
    axes[0].legend()
    fig.savefig("robustness.png")
