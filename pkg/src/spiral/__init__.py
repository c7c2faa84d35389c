"""Online linear classifiers with spike-regularized confidence weighting.

Four learners share one contract (``learn_one`` / ``weights``):

perceptron, averaged-perceptron
    mistake-driven baselines
arow
    adaptive regularization of weight vectors (full covariance)
spiral
    AROW trained on inputs gated by Gaussian "spikes" whose variance is the
    item's confidence relative to the largest confidence seen so far

``spiral.evaluation`` holds the test-time feature-deletion sweep and the
random-relabeling (practical Rademacher) experiment.
"""

from .core import Dataset, RngStream, dot, rng_derive, rng_new, sample_standard_normal
from .learners import (ALGORITHMS, ArowState, LearnerConfig, PerceptronState, SpiralState,
                       arow_alpha, averaged_weights, predict, train)

__version__ = "0.1.0"
