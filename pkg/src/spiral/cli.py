"""``spiral`` command line: synth, train, eval, sweep, rademacher.

Exit status is 0 on success, 1 on runtime failures (I/O, parsing) and 2 on
usage errors.  Any flag can also come from ``--config file.json`` (keys are
the flag names with dashes replaced by underscores); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import Dataset
from .data import (BinaryTask, CorruptionSpec, corrupt_dataset, load_mnist,
                   make_binary_tasks, read_csv, synth_blobs, write_csv)
from .evaluation import (DEFAULT_KEEP_GRID, SweepConfig, accuracy, rademacher_estimate,
                         rademacher_report, robustness_sweep)
from .learners import (ALGORITHMS, BASELINES, COVARIANCE_FORMS, LearnerConfig,
                       load_model, save_model, train)


REQUIRED = {"synth": ["out"], "train": ["out"], "eval": ["model"],
            "sweep": ["out"], "rademacher": ["out"]}


class UsageError(Exception):
    pass


def parse_keep_grid(text: str):
    """``start:stop:step`` (both ends inclusive) or a comma list."""
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise UsageError(f"bad keep grid {text!r}; expected start:stop:step")
        if step <= 0:
            raise UsageError("keep grid step must be positive")
        grid, i = [], 0
        while start + i * step <= stop + 1e-9:
            grid.append(round(start + i * step, 10))
            i += 1
    else:
        try:
            grid = [float(p) for p in text.split(",") if p]
        except ValueError:
            raise UsageError(f"bad keep grid {text!r}")
    return tuple(grid)


def parse_algos(text, allowed):
    algos = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in algos if a not in allowed]
    if bad or not algos:
        raise UsageError(f"unknown algorithm {', '.join(bad) or text!r}; "
                         f"valid names: {', '.join(allowed)}")
    return tuple(algos)


def _learner_flags(p):
    p.add_argument("--r", type=float, default=0.1, help="AROW smoothing constant")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--cov-form", choices=COVARIANCE_FORMS, default="standard")
    p.add_argument("--spike-scale", choices=("variance", "std"), default="variance")
    p.add_argument("--no-spike", action="store_true", help="disable SPIRAL's gating")


def _data_flags(p):
    p.add_argument("--data", help="CSV dataset")
    p.add_argument("--images", help="IDX image file (may be .gz)")
    p.add_argument("--labels", help="IDX label file (may be .gz)")
    p.add_argument("--limit", type=int, help="use only the first N IDX items")


def build_parser():
    parser = argparse.ArgumentParser(prog="spiral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="JSON file with default flag values")
        p.add_argument("--seed", type=int, help="master seed (required)")
        return p

    p = add("synth", "write a two-blob CSV dataset")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--separation", type=float, default=5.0)
    p.add_argument("--out")

    p = add("train", "train a model and save it as JSON")
    p.add_argument("--algo", default="spiral")
    _learner_flags(p)
    _data_flags(p)
    p.add_argument("--task", type=int, help="digit for IDX input (train split)")
    p.add_argument("--out")

    p = add("eval", "score a saved model, optionally on corrupted data")
    p.add_argument("--model")
    _data_flags(p)
    p.add_argument("--task", type=int, help="digit for IDX input (test split)")
    p.add_argument("--keep-fraction", type=float)

    p = add("sweep", "accuracy versus fraction of test features kept")
    p.add_argument("--algos", default="perceptron,arow,spiral")
    p.add_argument("--keep", default="0.1:1.0:0.1")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--tasks", help="comma list of digits (default: all ten)")
    p.add_argument("--jobs", type=int, default=1)
    _learner_flags(p)
    _data_flags(p)
    p.add_argument("--out")

    p = add("rademacher", "error reduction when fitting random labels")
    p.add_argument("--algos", default="perceptron,spiral")
    p.add_argument("--relabelings", type=int, default=10)
    p.add_argument("--task", type=int, default=0, help="digit for IDX input (train split)")
    _learner_flags(p)
    _data_flags(p)
    p.add_argument("--out")
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        try:
            with open(args.config) as f:
                file_defaults = json.load(f)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        known = {a.dest for a in sub._actions}
        unknown = set(file_defaults) - known
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        sub.set_defaults(**file_defaults)
        args = parser.parse_args(argv)
    if args.seed is None and not (args.command == "eval" and args.keep_fraction is None):
        parser.error("--seed is required")
    for dest in REQUIRED[args.command]:
        if getattr(args, dest) is None:
            parser.error(f"--{dest} is required")
    return parser, args


def learner_config(args, algorithm):
    return LearnerConfig(
        algorithm=algorithm, r=args.r, epochs=args.epochs, seed=args.seed,
        covariance_update_form=args.cov_form,
        spike_scale_is_variance=args.spike_scale == "variance",
        spike_enabled=not args.no_spike,
    )


def _single_task(args, split) -> Dataset:
    if args.data:
        return read_csv(args.data, name=Path(args.data).stem)
    if args.images and args.labels:
        if args.task is None:
            raise UsageError("--task DIGIT is required with IDX input")
        raw = load_mnist(args.images, args.labels, args.limit)
        task = make_binary_tasks(raw, [args.task])[0]
        return getattr(task, split)
    raise UsageError("give --data CSV or --images and --labels")


def cmd_synth(args):
    if args.n < 2 or args.n % 2:
        raise UsageError(f"--n must be a positive even number, got {args.n}")
    if args.d < 1:
        raise UsageError(f"--d must be at least 1, got {args.d}")
    write_csv(args.out, synth_blobs(args.n, args.d, args.separation, args.seed))


def cmd_train(args):
    config = learner_config(args, parse_algos(args.algo, ALGORITHMS + BASELINES)[0])
    data = _single_task(args, "train")
    model = train(config, data)
    save_model(args.out, model, config)
    print(f"train_accuracy={accuracy(model, data):.6f}")


def cmd_eval(args):
    model, _ = load_model(args.model)
    data = _single_task(args, "test")
    if data.dim != model.dim:
        raise ValueError(f"dimension mismatch: model has d={model.dim}, data has d={data.dim}")
    if args.keep_fraction is not None:
        spec = CorruptionSpec(args.keep_fraction, args.seed)
        data = corrupt_dataset(data, spec.keep_fraction, spec.seed, ["eval"])
    print(f"accuracy={accuracy(model, data):.6f}")


def _sweep_tasks(args):
    if args.data:
        data = read_csv(args.data)
        half = Dataset(data.X[1::2], data.y[1::2]), Dataset(data.X[0::2], data.y[0::2])
        return [BinaryTask(0, *half, name=Path(args.data).stem)]
    if not (args.images and args.labels):
        raise UsageError("give --data CSV or --images and --labels")
    digits = range(10)
    if args.tasks:
        try:
            digits = [int(t) for t in args.tasks.split(",")]
        except ValueError:
            raise UsageError(f"bad --tasks {args.tasks!r}")
        if any(not 0 <= t <= 9 for t in digits):
            raise UsageError("--tasks digits must be 0-9")
    return make_binary_tasks(load_mnist(args.images, args.labels, args.limit), digits)


def cmd_sweep(args):
    algos = parse_algos(args.algos, ALGORITHMS + BASELINES)
    grid = parse_keep_grid(args.keep)
    try:
        cfg = SweepConfig(algos, grid, args.repeats, args.seed, learner_config(args, algos[0]))
    except ValueError as exc:
        raise UsageError(str(exc))
    table = robustness_sweep(_sweep_tasks(args), cfg, jobs=args.jobs)
    Path(args.out).write_text(table.to_csv())


def cmd_rademacher(args):
    algos = parse_algos(args.algos, ALGORITHMS + BASELINES)
    if args.relabelings < 1:
        raise UsageError("--relabelings must be at least 1")
    data = _single_task(args, "train")
    entries = [rademacher_estimate(learner_config(args, a), data, args.relabelings, args.seed)
               for a in algos]
    Path(args.out).write_text(rademacher_report(entries))


COMMANDS = {"synth": cmd_synth, "train": cmd_train, "eval": cmd_eval,
            "sweep": cmd_sweep, "rademacher": cmd_rademacher}


def main(argv=None) -> int:
    parser, args = parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError) as exc:
        print(f"spiral {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
