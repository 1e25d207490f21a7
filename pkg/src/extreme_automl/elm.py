"""Single extreme learning machine: random hidden layer plus linear readout.

Training never iterates: the hidden layer is drawn from a seeded generator
and the output weights come from one regularized least-squares solve.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .solvers import ridge_solve
from .validation import as_float_matrix, as_float_vector, check_same_rows

_MAX_SEED = 1 << 64


@dataclass(frozen=True)
class Activation:
    """A bounded, monotonic, smooth hidden-layer nonlinearity."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]


_ACTIVATIONS = {
    "tanh": Activation("tanh", np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
}


def get_activation(name):
    try:
        return _ACTIVATIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown activation {name!r}; available: {sorted(_ACTIVATIONS)}"
        ) from None


def activation_names():
    return sorted(_ACTIVATIONS)


@dataclass(frozen=True)
class ElmConfig:
    """Hyperparameters of a single ELM.

    ``weight_scale`` is the half-width of the uniform distribution that both
    input weights and hidden biases are drawn from.
    """

    neurons: int
    alpha: float
    activation: str = "tanh"
    weight_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.neurons < 1:
            raise ValueError(f"neurons must be >= 1, got {self.neurons}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.weight_scale <= 0:
            raise ValueError(f"weight_scale must be positive, got {self.weight_scale}")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")
        get_activation(self.activation)


@dataclass(frozen=True)
class ElmModel:
    """A trained ELM: fixed random hidden layer and solved output weights."""

    weights: np.ndarray  # n_inputs x neurons
    biases: np.ndarray  # neurons
    beta: np.ndarray  # neurons x n_outputs
    activation: str

    def __post_init__(self):
        if self.weights.shape[1] != self.biases.shape[0]:
            raise ValueError("weights and biases disagree on neuron count")
        if self.beta.shape[0] != self.weights.shape[1]:
            raise ValueError("beta and weights disagree on neuron count")
        for part, name in ((self.weights, "weights"), (self.biases, "biases"), (self.beta, "beta")):
            if not np.isfinite(part).all():
                raise ValueError(f"{name} contains non-finite entries")

    @property
    def n_inputs(self):
        return self.weights.shape[0]

    @property
    def n_neurons(self):
        return self.weights.shape[1]

    @property
    def n_outputs(self):
        return self.beta.shape[1]


def init_hidden_layer(config, n_inputs):
    """Draw the random input weights and biases of a hidden layer.

    Entries are i.i.d. uniform on ``[-weight_scale, +weight_scale]`` from a
    counter-based Philox generator keyed by ``config.seed``, so repeated calls
    with identical arguments are bitwise identical.

    Returns
    -------
    (weights, biases) : (ndarray of shape (n_inputs, neurons), ndarray of shape (neurons,))
    """
    if n_inputs < 1:
        raise ValueError(f"n_inputs must be >= 1, got {n_inputs}")
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    scale = config.weight_scale
    weights = rng.uniform(-scale, scale, size=(n_inputs, config.neurons))
    biases = rng.uniform(-scale, scale, size=config.neurons)
    return weights, biases


def hidden_map(x, weights, biases, activation="tanh"):
    """Hidden-layer response ``g(x @ weights + biases)`` for every sample."""
    x = as_float_matrix(x, "x")
    weights = as_float_matrix(weights, "weights")
    biases = as_float_vector(biases, "biases")
    if x.shape[1] != weights.shape[0]:
        raise ValueError(
            f"x has {x.shape[1]} features but weights expect {weights.shape[0]}"
        )
    if biases.shape[0] != weights.shape[1]:
        raise ValueError(
            f"biases length {biases.shape[0]} does not match {weights.shape[1]} neurons"
        )
    return get_activation(activation).fn(x @ weights + biases)


def train_elm(x, y, config):
    """Train one ELM on ``(x, y)``.

    The hidden layer is drawn from ``config.seed`` and the output weights are
    the ridge solution of the hidden responses against ``y``. Deterministic
    for fixed inputs.
    """
    x = as_float_matrix(x, "x")
    y = as_float_matrix(y, "y")
    if x.shape[0] < 1:
        raise ValueError("cannot train on an empty sample")
    check_same_rows(x, y, "x", "y")
    weights, biases = init_hidden_layer(config, x.shape[1])
    h = hidden_map(x, weights, biases, config.activation)
    beta = ridge_solve(h, y, config.alpha)
    return ElmModel(weights, biases, beta, config.activation)


def predict_elm(model, x):
    """Raw output scores ``g(x W + b) @ beta``; no thresholding or decoding."""
    x = as_float_matrix(x, "x")
    if x.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} features, got {x.shape[1]}")
    return hidden_map(x, model.weights, model.biases, model.activation) @ model.beta
