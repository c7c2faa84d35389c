"""Robustness sweeps under test-time feature deletion, and random-label fitting."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Dataset, derive_seed, rng_derive
from .data import BinaryTask, corrupt_dataset, random_relabel
from .learners import ALGORITHMS, LearnerConfig, predict_many, train

DEFAULT_KEEP_GRID = tuple(round(0.1 * i, 10) for i in range(1, 11))
RESULT_HEADER = ("task", "algorithm", "keep_fraction", "repeat", "accuracy")


@dataclass
class SweepConfig:
    algorithms: tuple = ("perceptron", "arow", "spiral")
    keep_grid: tuple = DEFAULT_KEEP_GRID
    repeats: int = 5
    master_seed: int = 0
    learner: LearnerConfig = field(default_factory=LearnerConfig)

    def __post_init__(self):
        grid = list(self.keep_grid)
        if not grid or any(not 0 < k <= 1 for k in grid):
            raise ValueError("keep_grid values must lie in (0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("keep_grid must be strictly ascending")
        if self.repeats < 1:
            raise ValueError("repeats must be positive")


@dataclass(frozen=True)
class ResultRow:
    task: str
    algorithm: str
    keep_fraction: float
    repeat: int
    accuracy: float


class ResultTable(list):
    """List of ``ResultRow``; ``to_csv`` emits rows in canonical order."""

    def sorted_rows(self):
        return sorted(self, key=lambda r: (r.task, r.algorithm, r.keep_fraction, r.repeat))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULT_HEADER)
        for r in self.sorted_rows():
            w.writerow([r.task, r.algorithm, f"{r.keep_fraction:.6f}", r.repeat,
                        f"{r.accuracy:.6f}"])
        return buf.getvalue()

    def mean_accuracy(self, task, algorithm, keep_fraction):
        accs = [r.accuracy for r in self
                if r.task == task and r.algorithm == algorithm
                and abs(r.keep_fraction - keep_fraction) < 1e-9]
        return float(np.mean(accs))


def accuracy(model, test: Dataset) -> float:
    if len(test) == 0:
        raise ValueError("empty test set")
    return float(np.mean(predict_many(model, test.X) == test.y))


def _keep_tag(keep):
    return f"keep{keep:.6g}"


def train_for_cell(cfg: SweepConfig, task_name: str, algorithm: str, data: Dataset):
    seed = derive_seed(cfg.master_seed, [task_name, algorithm, "train"])
    return train(replace(cfg.learner, algorithm=algorithm, seed=seed), data)


def corrupted_test(cfg: SweepConfig, task_name: str, test: Dataset, keep, repeat) -> Dataset:
    """Test split corrupted for one (keep, repeat) cell; shared by all algorithms."""
    tags = [task_name, _keep_tag(keep), f"rep{repeat}"]
    return corrupt_dataset(test, keep, cfg.master_seed, tags)


def sweep_task(task: BinaryTask, cfg: SweepConfig) -> list[ResultRow]:
    models = {a: train_for_cell(cfg, task.name, a, task.train) for a in cfg.algorithms}
    rows = []
    for keep in cfg.keep_grid:
        for rep in range(cfg.repeats):
            test = corrupted_test(cfg, task.name, task.test, keep, rep)
            for algo, model in models.items():
                rows.append(ResultRow(task.name, algo, float(keep), rep, accuracy(model, test)))
    return rows


def robustness_sweep(tasks, cfg: SweepConfig, jobs: int = 1) -> ResultTable:
    """Train once per (task, algorithm) on clean data, then score every
    (keep_fraction, repeat) cell on freshly masked test data.

    Cells are seeded independently, so ``jobs > 1`` (one process per task)
    produces the same table.
    """
    tasks = list(tasks)
    if not tasks:
        raise ValueError("no tasks to sweep")
    table = ResultTable()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rows in pool.map(sweep_task, tasks, [cfg] * len(tasks)):
                table.extend(rows)
    else:
        for task in tasks:
            table.extend(sweep_task(task, cfg))
    return ResultTable(table.sorted_rows())


def error_reduction(err: float, baseline: float = 0.5) -> float:
    if baseline <= 0:
        raise ValueError("baseline error must be positive")
    return (baseline - err) / baseline


@dataclass
class RademacherEntry:
    algorithm: str
    mean_error: float
    error_reduction: float
    n_relabelings: int
    errors: list = field(default_factory=list)


def rademacher_estimate(learner_cfg: LearnerConfig, data: Dataset,
                        n_relabelings: int = 10, master_seed: int = 0) -> RademacherEntry:
    """Average ability to fit fair random labels of ``data``.

    Each relabeling trains a fresh model and measures its error on the same
    relabeled data; the reduction is taken against the 0.5 error of guessing.
    Relabelings are shared across algorithms for a given seed.
    """
    if n_relabelings < 1:
        raise ValueError("n_relabelings must be at least 1")
    errors = []
    for i in range(n_relabelings):
        relabeled = random_relabel(data, rng_derive(master_seed, ["relabel", i]))
        seed = derive_seed(master_seed, ["rademacher", learner_cfg.algorithm, i])
        model = train(replace(learner_cfg, seed=seed), relabeled)
        errors.append(1.0 - accuracy(model, relabeled))
    mean_error = float(np.mean(errors))
    return RademacherEntry(learner_cfg.algorithm, mean_error,
                           error_reduction(mean_error, 0.5), n_relabelings, errors)


def rademacher_report(entries) -> str:
    doc = {e.algorithm: {"mean_error": e.mean_error,
                         "error_reduction": e.error_reduction,
                         "n_relabelings": e.n_relabelings}
           for e in entries}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

