"""Online linear learners: perceptron, averaged perceptron, AROW and SPIRAL.

Every learner state exposes ``learn_one(x, y)`` (mutates in place, returns
``self``) and ``weights()`` (the vector used at prediction time).  None of
the learners has a bias term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import spike
from .core import Dataset, RngStream, check_dims, rng_new

ALGORITHMS = ("perceptron", "averaged-perceptron", "arow", "spiral")
# Data-blind baseline (always predicts +1); only meant for sanity runs.
BASELINES = ("constant",)
COVARIANCE_FORMS = ("standard", "paper-literal")
FORMAT_VERSION = 1


@dataclass
class LearnerConfig:
    algorithm: str = "spiral"
    r: float = 0.1
    epochs: int = 1
    seed: int = 0
    covariance_update_form: str = "standard"
    spike_scale_is_variance: bool = True
    spike_enabled: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS + BASELINES:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; "
                f"choose from {', '.join(ALGORITHMS + BASELINES)}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r!r}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ValueError(f"epochs must be a positive integer, got {self.epochs!r}")
        if self.covariance_update_form not in COVARIANCE_FORMS:
            raise ValueError(
                f"unknown covariance form {self.covariance_update_form!r}; "
                f"choose from {', '.join(COVARIANCE_FORMS)}")


def _as_vector(x, d):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != d:
        raise ValueError(f"dimension mismatch: expected {d}, got {x.shape}")
    return x


@dataclass
class PerceptronState:
    w: np.ndarray
    w_sum: np.ndarray
    n_updates_seen: int = 0
    averaged: bool = False

    @classmethod
    def zeros(cls, d, averaged=False):
        return cls(np.zeros(d), np.zeros(d), 0, averaged)

    @property
    def dim(self):
        return self.w.shape[0]

    def learn_one(self, x, y):
        x = _as_vector(x, self.dim)
        # zero margin counts as a mistake
        if y * float(self.w @ x) <= 0:
            self.w += y * x
        self.w_sum += self.w
        self.n_updates_seen += 1
        return self

    def weights(self):
        return averaged_weights(self) if self.averaged else self.w


def perceptron_learn_one(state: PerceptronState, x, y) -> PerceptronState:
    return state.learn_one(x, y)


def averaged_weights(state: PerceptronState) -> np.ndarray:
    if state.n_updates_seen == 0:
        raise ValueError("no examples seen; averaged weights are undefined")
    return state.w_sum / state.n_updates_seen


@dataclass
class ArowState:
    mu: np.ndarray
    sigma: np.ndarray
    r: float = 0.1
    covariance_update_form: str = "standard"

    @classmethod
    def initial(cls, d, r=0.1, covariance_update_form="standard"):
        return cls(np.zeros(d), np.eye(d), r, covariance_update_form)

    @property
    def dim(self):
        return self.mu.shape[0]

    def learn_one(self, x, y):
        x = _as_vector(x, self.dim)
        margin = float(self.mu @ x)
        if margin * y >= 1:
            return self
        sx = self.sigma @ x
        beta = float(x @ sx) + self.r
        alpha = max(0.0, 1.0 - y * margin) / beta
        self.mu += (alpha * y) * sx
        # outer(sx, sx) is bitwise symmetric, so Sigma stays exactly symmetric
        # and (Sigma + Sigma.T) / 2 would be a no-op.
        rank_one = np.outer(sx, sx)
        if self.covariance_update_form == "standard":
            rank_one /= beta
            self.sigma -= rank_one
        else:
            self.sigma -= rank_one
            self.sigma /= beta
        return self

    def weights(self):
        return self.mu


def arow_alpha(state: ArowState, x, y) -> float:
    """Adaptive step ``max(0, 1 - y x.mu) / (x' Sigma x + r)``."""
    x = _as_vector(x, state.dim)
    hinge = max(0.0, 1.0 - y * float(x @ state.mu))
    return hinge / (float(x @ (state.sigma @ x)) + state.r)


def arow_learn_one(state: ArowState, x, y) -> ArowState:
    return state.learn_one(x, y)


@dataclass
class SpiralState:
    """AROW whose training inputs are gated by sampled spikes.

    With ``spike_enabled`` false this is exactly AROW.
    """

    arow: ArowState
    spike: spike.SpikeState = field(default_factory=spike.SpikeState)
    rng: RngStream = field(default_factory=lambda: rng_new(0))
    spike_enabled: bool = True

    @property
    def dim(self):
        return self.arow.dim

    def gated(self, x):
        """Spike-gated copy of ``x``; advances the running max and the rng."""
        v_t = spike.confidence(x, self.arow.sigma)
        _, rho = spike.update_running_max(self.spike, v_t)
        g = spike.sample_gate(self.arow.mu, rho, self.rng, self.spike.scale_is_variance)
        return spike.apply_gate(x, g)

    def learn_one(self, x, y):
        x = _as_vector(x, self.dim)
        if self.spike_enabled:
            x = self.gated(x)
        self.arow.learn_one(x, y)
        return self

    def weights(self):
        return self.arow.mu


def spiral_learn_one(state: SpiralState, x, y) -> SpiralState:
    return state.learn_one(x, y)


@dataclass
class ConstantState:
    d: int

    @property
    def dim(self):
        return self.d

    def learn_one(self, x, y):
        _as_vector(x, self.d)
        return self

    def weights(self):
        return np.zeros(self.d)


def predict(model, x) -> int:
    """sign(w . x) with the model's inference weights; sign(0) is +1."""
    w = model.weights()
    x = _as_vector(x, w.shape[0])
    return 1 if float(w @ x) >= 0 else -1


def predict_many(model, X) -> np.ndarray:
    w = model.weights()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != w.shape[0]:
        raise ValueError(
            f"dimension mismatch: model has d={w.shape[0]}, data has shape {X.shape}")
    return np.where(X @ w >= 0, 1, -1)


def init_state(config: LearnerConfig, d: int):
    algo = config.algorithm
    if algo in ("perceptron", "averaged-perceptron"):
        return PerceptronState.zeros(d, averaged=algo == "averaged-perceptron")
    if algo == "constant":
        return ConstantState(d)
    arow = ArowState.initial(d, config.r, config.covariance_update_form)
    if algo == "arow":
        return arow
    return SpiralState(
        arow,
        spike.SpikeState(0.0, config.spike_scale_is_variance),
        rng_new(config.seed),
        config.spike_enabled,
    )


def fit(state, data: Dataset, epochs: int = 1):
    """Run ``epochs`` ordered passes of ``learn_one`` over ``data``."""
    for _ in range(epochs):
        for x, y in zip(data.X, data.y):
            state.learn_one(x, int(y))
    return state


def train(config: LearnerConfig, data: Dataset):
    if len(data) == 0:
        raise ValueError("cannot train on an empty dataset")
    return fit(init_state(config, data.dim), data, config.epochs)


# -- persistence -------------------------------------------------------------

def _floats(a):
    return [float(v) for v in np.ravel(a)]


def model_to_dict(model, config: LearnerConfig) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "algorithm": config.algorithm,
        "d": int(model.dim),
        "r": config.r,
        "epochs": config.epochs,
        "seed": config.seed,
        "covariance_update_form": config.covariance_update_form,
    }
    if isinstance(model, PerceptronState):
        doc.update(w=_floats(model.w), w_sum=_floats(model.w_sum),
                   n_updates_seen=model.n_updates_seen)
    elif isinstance(model, (ArowState, SpiralState)):
        arow = model.arow if isinstance(model, SpiralState) else model
        doc.update(mu=_floats(arow.mu), sigma=_floats(arow.sigma))
        if isinstance(model, SpiralState):
            doc["spike"] = {
                "v_max": model.spike.v_max,
                "enabled": model.spike_enabled,
                "scale_is_variance": model.spike.scale_is_variance,
            }
    return doc


def model_from_dict(doc: dict):
    """Rebuild ``(model, config)``.  A restored SPIRAL rng restarts from its seed."""
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {doc.get('format_version')!r}")
    spike_doc = doc.get("spike", {})
    config = LearnerConfig(
        algorithm=doc["algorithm"], r=doc["r"], epochs=doc["epochs"], seed=doc["seed"],
        covariance_update_form=doc.get("covariance_update_form", "standard"),
        spike_scale_is_variance=spike_doc.get("scale_is_variance", True),
        spike_enabled=spike_doc.get("enabled", True),
    )
    d = doc["d"]
    model = init_state(config, d)
    if isinstance(model, PerceptronState):
        model.w = np.array(doc["w"], dtype=np.float64)
        model.w_sum = np.array(doc["w_sum"], dtype=np.float64)
        model.n_updates_seen = doc["n_updates_seen"]
    elif isinstance(model, (ArowState, SpiralState)):
        arow = model.arow if isinstance(model, SpiralState) else model
        arow.mu = np.array(doc["mu"], dtype=np.float64)
        arow.sigma = np.array(doc["sigma"], dtype=np.float64).reshape(d, d)
        if isinstance(model, SpiralState):
            model.spike.v_max = spike_doc.get("v_max", 0.0)
    if model.weights().shape[0] != d:
        raise ValueError("model weights do not match declared dimension d")
    return model, config


def save_model(path, model, config: LearnerConfig):
    with open(path, "w") as f:
        json.dump(model_to_dict(model, config), f)
        f.write("\n")


def load_model(path):
    with open(path) as f:
        return model_from_dict(json.load(f))
