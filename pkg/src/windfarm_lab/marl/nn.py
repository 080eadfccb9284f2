"""Feed-forward networks and the Adam optimizer on top of the autograd engine."""

import numpy as np

from ..errors import ContractViolation
from .autograd import Tensor, parameter


def orthogonal(rng, n_in, n_out, gain=1.0):
    """(n_in, n_out) matrix with orthonormal rows or columns, times ``gain``."""
    a = rng.standard_normal((max(n_in, n_out), min(n_in, n_out)))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if n_in < n_out:
        q = q.T
    return gain * q[:n_in, :n_out]


class MLP:
    """tanh multilayer perceptron; ``weights[i]`` is (n_in, n_out).

    Hidden layers use gain sqrt(2), the output layer ``out_gain``; biases
    start at zero.
    """

    def __init__(self, sizes, rng, out_gain=1.0):
        self.sizes = tuple(sizes)
        self.weights, self.biases = [], []
        for i, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
            last = i == len(sizes) - 2
            self.weights.append(parameter(orthogonal(rng, n_in, n_out, out_gain if last else np.sqrt(2))))
            self.biases.append(parameter(np.zeros(n_out)))

    @property
    def parameters(self):
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def __call__(self, x):
        x = x if isinstance(x, Tensor) else Tensor(x)
        if x.shape[-1] != self.sizes[0]:
            raise ContractViolation(f"network expects input width {self.sizes[0]}, got {x.shape[-1]}")
        n = len(self.weights)
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            x = x @ w + b
            if i < n - 1:
                x = x.tanh()
        return x

    def forward_numpy(self, x):
        """Same map without recording a graph (for acting)."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.sizes[0]:
            raise ContractViolation(f"network expects input width {self.sizes[0]}, got {x.shape[-1]}")
        n = len(self.weights)
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            x = x @ w.data + b.data
            if i < n - 1:
                x = np.tanh(x)
        return x


def clip_grad_norm(params, max_norm):
    """Scale gradients so their global L2 norm is at most ``max_norm``; returns the norm."""
    grads = [p.grad for p in params if p.grad is not None]
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))
    if norm > max_norm:
        scale = max_norm / (norm + 1e-6)
        for p in params:
            if p.grad is not None:
                p.grad = p.grad * scale
    return norm


class Adam:
    def __init__(self, params, lr=3e-4, betas=(0.9, 0.999), eps=1e-5):
        self.params = list(params)
        self.lr = lr
        self.b1, self.b2 = betas
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p.data) for p in self.params]
        self.v = [np.zeros_like(p.data) for p in self.params]

    def zero_grad(self):
        for p in self.params:
            p.grad = None

    def step(self):
        self.t += 1
        c1 = 1.0 - self.b1**self.t
        c2 = 1.0 - self.b2**self.t
        for p, m, v in zip(self.params, self.m, self.v):
            if p.grad is None:
                continue
            m *= self.b1
            m += (1.0 - self.b1) * p.grad
            v *= self.b2
            v += (1.0 - self.b2) * p.grad**2
            p.data -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
