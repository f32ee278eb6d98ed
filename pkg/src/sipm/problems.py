"""Objectives with exact gradients and mini-batch stochastic gradient oracles.

Three models: a synthetic separable quadratic, binary logistic regression,
and a one-hidden-layer tanh network with a sigmoid output trained under
cross-entropy.  Every model exposes ``value``, ``gradient``, and
``stochastic_gradient(x, batch)`` where the batch is an index set into the
samples; averaging the stochastic gradient over all batches of a fixed size
reproduces the full gradient exactly because batches are uniform subsets
drawn without replacement.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from .errors import BatchTooLarge, DimensionMismatch, NotBinary


class Objective:
    """Interface shared by all models: dimension n, sample count, oracles."""

    n = 0
    sample_count = 1

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def stochastic_gradient(self, x, batch):
        raise NotImplementedError


def _check_dim(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def map_labels(labels):
    """Map the two distinct raw label values to -1/+1 by sorted order."""
    labels = np.asarray(labels, dtype=float)
    values = np.unique(labels)
    if values.size != 2:
        raise NotBinary(f"need exactly two distinct label values, got {values.size}")
    return np.where(labels == values[0], -1.0, 1.0)


def _as_arrays(dataset):
    """Accept a (features, labels) pair or anything with a to_arrays method."""
    if hasattr(dataset, "to_arrays"):
        return dataset.to_arrays()
    features, labels = dataset
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if features.ndim != 2 or labels.shape != (features.shape[0],):
        raise DimensionMismatch("features must be (m, n_f) with one label per row")
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        labels = map_labels(labels)
    return features, labels


class QuadraticObjective(Objective):
    """f(x) = 0.5 * sum_i curvature_i * (x_i - center_i)**2.

    The stochastic oracle perturbs the exact gradient with per-sample noise
    vectors that are bounded by ``noise_level`` and sum to zero, so uniform
    without-replacement batches stay exactly unbiased.
    """

    def __init__(self, center, curvature, noise_level=0.0, sample_count=1, seed=0):
        self.center = np.asarray(center, dtype=float)
        self.curvature = np.asarray(curvature, dtype=float)
        if self.center.shape != self.curvature.shape or self.center.ndim != 1:
            raise DimensionMismatch("center and curvature must be equal-length vectors")
        if np.any(self.curvature <= 0.0):
            raise ValueError("curvature entries must be positive")
        self.n = self.center.size
        self.sample_count = int(sample_count)
        noise = np.zeros((self.sample_count, self.n))
        if noise_level > 0.0 and self.sample_count > 1:
            rng = np.random.default_rng(seed)
            noise = rng.uniform(-1.0, 1.0, size=(self.sample_count, self.n))
            noise -= noise.mean(axis=0)
            peak = np.max(np.abs(noise))
            if peak > 0.0:
                noise *= noise_level / peak
        self._noise = noise

    def value(self, x):
        x = _check_dim(x, self.n)
        return 0.5 * float(np.sum(self.curvature * (x - self.center) ** 2))

    def gradient(self, x):
        x = _check_dim(x, self.n)
        return self.curvature * (x - self.center)

    def stochastic_gradient(self, x, batch):
        batch = np.asarray(batch, dtype=int)
        return self.gradient(x) + self._noise[batch].mean(axis=0)


class LogisticObjective(Objective):
    """Mean logistic loss over labeled rows, parameterized as [weights, bias]."""

    def __init__(self, features, labels):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=float)
        self.sample_count, self.n_features = self.features.shape
        if self.labels.shape != (self.sample_count,):
            raise DimensionMismatch("one label per sample row is required")
        self.n = self.n_features + 1

    def _margins(self, x, rows):
        w, b = x[:-1], x[-1]
        return self.features[rows] @ w + b

    def value(self, x):
        x = _check_dim(x, self.n)
        t = self.labels * self._margins(x, slice(None))
        return float(np.mean(np.logaddexp(0.0, -t)))

    def _batch_gradient(self, x, rows, y):
        t = y * self._margins(x, rows)
        coef = -y * expit(-t)
        g = np.empty(self.n)
        g[:-1] = self.features[rows].T @ coef / coef.size
        g[-1] = coef.mean()
        return g

    def gradient(self, x):
        x = _check_dim(x, self.n)
        return self._batch_gradient(x, slice(None), self.labels)

    def stochastic_gradient(self, x, batch):
        x = _check_dim(x, self.n)
        rows = np.asarray(batch, dtype=int)
        return self._batch_gradient(x, rows, self.labels[rows])


class OneHiddenLayerObjective(Objective):
    """tanh hidden layer of width h, sigmoid output, mean cross-entropy loss.

    The flat parameter vector packs [W1.ravel(), b1, w2, b2] for W1 of shape
    (h, n_f), giving dimension (n_f + 2) * h + 1.  Gradients come from exact
    backpropagation through the stabilized softplus form of the loss.
    """

    def __init__(self, features, labels, hidden):
        self.features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=float)
        self.sample_count, self.n_features = self.features.shape
        if labels.shape != (self.sample_count,):
            raise DimensionMismatch("one label per sample row is required")
        if hidden < 1:
            raise ValueError("hidden width must be at least 1")
        self.hidden = int(hidden)
        self.y01 = 0.5 * (labels + 1.0)  # {-1,+1} -> {0,1}
        self.n = (self.n_features + 2) * self.hidden + 1

    def _unpack(self, x):
        h, nf = self.hidden, self.n_features
        w1 = x[: h * nf].reshape(h, nf)
        b1 = x[h * nf: h * nf + h]
        w2 = x[h * nf + h: h * nf + 2 * h]
        b2 = x[-1]
        return w1, b1, w2, b2

    def _forward(self, x, rows):
        w1, b1, w2, b2 = self._unpack(x)
        z = np.tanh(self.features[rows] @ w1.T + b1)
        s = z @ w2 + b2
        return z, s

    def value(self, x):
        x = _check_dim(x, self.n)
        _, s = self._forward(x, slice(None))
        # -[y log p + (1-y) log(1-p)] with p = sigmoid(s) is softplus(s) - y*s
        return float(np.mean(np.logaddexp(0.0, s) - self.y01 * s))

    def _batch_gradient(self, x, rows, y01):
        w1, b1, w2, b2 = self._unpack(x)
        a = self.features[rows]
        z, s = self._forward(x, rows)
        ds = (expit(s) - y01) / y01.size
        g_w2 = z.T @ ds
        g_b2 = float(np.sum(ds))
        d_pre = np.outer(ds, w2) * (1.0 - z ** 2)
        g_w1 = d_pre.T @ a
        g_b1 = d_pre.sum(axis=0)
        return np.concatenate([g_w1.ravel(), g_b1, g_w2, [g_b2]])

    def gradient(self, x):
        x = _check_dim(x, self.n)
        return self._batch_gradient(x, slice(None), self.y01)

    def stochastic_gradient(self, x, batch):
        x = _check_dim(x, self.n)
        rows = np.asarray(batch, dtype=int)
        return self._batch_gradient(x, rows, self.y01[rows])


def quadratic_objective(center, curvature, noise_level=0.0, sample_count=1, seed=0):
    return QuadraticObjective(center, curvature, noise_level=noise_level,
                              sample_count=sample_count, seed=seed)


def logistic_objective(dataset):
    features, labels = _as_arrays(dataset)
    return LogisticObjective(features, labels)


def nn_objective(dataset, hidden=None):
    features, labels = _as_arrays(dataset)
    if hidden is None:
        hidden = default_hidden_width(features.shape[1])
    return OneHiddenLayerObjective(features, labels, hidden)


def default_hidden_width(n_features):
    """Hidden width max(2, min(ceil(n_f / 2), 100))."""
    return max(2, min(math.ceil(n_features / 2), 100))


def logistic_dimension(n_features):
    """Number of logistic parameters: features plus one bias."""
    return n_features + 1


def nn_dimension(n_features, hidden=None):
    """Number of network parameters (n_f + 2) * h + 1."""
    if hidden is None:
        hidden = default_hidden_width(n_features)
    return (n_features + 2) * hidden + 1


def finite_difference_gradient(objective, x, step):
    """Central differences (f(x + h e_i) - f(x - h e_i)) / (2 h) per coordinate."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (objective.value(x + e) - objective.value(x - e)) / (2.0 * step)
    return g


def batch_sampler(m, batch_size, seed):
    """Endless stream of uniform random index subsets drawn without replacement.

    Reproducible under the seed; every draw is an independent sorted subset of
    size ``batch_size`` from range(m).
    """
    if not 1 <= batch_size <= m:
        raise BatchTooLarge(f"batch_size={batch_size} outside [1, {m}]")
    rng = np.random.default_rng(seed)

    def draws():
        while True:
            yield np.sort(rng.choice(m, size=batch_size, replace=False))

    return draws()


def synthetic_classification(m, n_features, seed=0):
    """A small labeled dataset with a noisy linear decision boundary.

    Features are uniform in [-1, 1]; labels are the signs of a random linear
    score plus Gaussian noise, with one label flipped if a class is missing.
    Returns (features, labels in {-1, +1}).
    """
    rng = np.random.default_rng(seed)
    features = rng.uniform(-1.0, 1.0, size=(m, n_features))
    w = rng.normal(size=n_features)
    scores = features @ w + 0.3 * rng.normal(size=m)
    labels = np.where(scores >= 0.0, 1.0, -1.0)
    if np.all(labels == labels[0]):
        labels[0] = -labels[0]
    return features, labels
