"""
Four online learners on two Gaussian blobs
==========================================

Train the perceptron, the averaged perceptron, AROW and SPIRAL on a small
synthetic problem and look at what each one stores.
"""

# %%
# Two unit-variance blobs, 5 standard deviations apart along the first axis.
# Labels alternate +1, -1, +1, ... so the stream is balanced from the start.
import numpy as np

from spiral.data import synth_blobs
from spiral.evaluation import accuracy
from spiral.learners import ArowState, LearnerConfig, arow_alpha, train

train_set = synth_blobs(400, 5, 1.5, seed=1)
test_set = synth_blobs(400, 5, 1.5, seed=2)

# %%
# One pass over the data per learner.  SPIRAL draws its spikes from the
# seed in the config, so rerunning gives identical weights.
for algo in ("perceptron", "averaged-perceptron", "arow", "spiral"):
    model = train(LearnerConfig(algo, seed=7), train_set)
    print(f"{algo:20s} test accuracy {accuracy(model, test_set):.3f}"
          f"  weights {np.round(model.weights(), 3)}")

# %%
# A single AROW step by hand: from mu = 0, Sigma = I, the example e1 with
# label +1 gives step size 1 / (1 + r) and shrinks the variance along e1.
state = ArowState.initial(3)
x = np.array([1.0, 0.0, 0.0])
print("alpha", arow_alpha(state, x, 1))
state.learn_one(x, 1)
print("mu", state.mu)
print("diag(Sigma)", np.diag(state.sigma))

# %%
# The typeset variant divides the whole matrix, which zeroes the variance
# along e1 and scales every other direction by 1 / (1 + r).
literal = ArowState.initial(3, covariance_update_form="paper-literal").learn_one(x, 1)
print("diag(Sigma), literal form", np.diag(literal.sigma))
