"""A small reverse-mode automatic differentiation engine over numpy arrays."""

import numpy as np


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` (undoing numpy broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


class Tensor:
    """An array that records the operations applied to it.

    Leaves created with ``requires_grad=True`` accumulate ``.grad`` when
    :meth:`backward` is called on a scalar result.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False, _parents=(), _backward=None):
        self.data = np.asarray(data, dtype=float)
        self.grad = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in _parents)
        self._parents = _parents
        self._backward = _backward

    @property
    def shape(self):
        return self.data.shape

    def __repr__(self):
        return f"Tensor({self.data!r})"

    def _make(self, data, parents, backward):
        parents = tuple(parents)
        if not any(p.requires_grad for p in parents):
            return Tensor(data)
        return Tensor(data, _parents=parents, _backward=backward)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = as_tensor(other)
        return self._make(self.data + other.data, (self, other),
                          lambda g: (_unbroadcast(g, self.shape), _unbroadcast(g, other.shape)))

    __radd__ = __add__

    def __neg__(self):
        return self._make(-self.data, (self,), lambda g: (-g,))

    def __sub__(self, other):
        return self + (-as_tensor(other))

    def __rsub__(self, other):
        return as_tensor(other) + (-self)

    def __mul__(self, other):
        other = as_tensor(other)
        a, b = self.data, other.data
        return self._make(a * b, (self, other),
                          lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_tensor(other)
        a, b = self.data, other.data
        return self._make(a / b, (self, other),
                          lambda g: (_unbroadcast(g / b, a.shape),
                                     _unbroadcast(-g * a / b**2, b.shape)))

    def __rtruediv__(self, other):
        return as_tensor(other) / self

    def __matmul__(self, other):
        other = as_tensor(other)
        a, b = self.data, other.data
        return self._make(a @ b, (self, other), lambda g: (g @ b.T, a.T @ g))

    # elementwise ------------------------------------------------------
    def tanh(self):
        y = np.tanh(self.data)
        return self._make(y, (self,), lambda g: (g * (1.0 - y * y),))

    def exp(self):
        y = np.exp(self.data)
        return self._make(y, (self,), lambda g: (g * y,))

    def log(self):
        x = self.data
        return self._make(np.log(x), (self,), lambda g: (g / x,))

    def square(self):
        x = self.data
        return self._make(x * x, (self,), lambda g: (2.0 * g * x,))

    def clip(self, low, high):
        """Clamp; the gradient passes only where ``low < x < high``."""
        x = self.data
        inside = (x > low) & (x < high)
        return self._make(np.clip(x, low, high), (self,), lambda g: (g * inside,))

    def minimum(self, other):
        """Elementwise min; ties send the gradient to ``self``."""
        other = as_tensor(other)
        pick = self.data <= other.data
        return self._make(np.where(pick, self.data, other.data), (self, other),
                          lambda g: (_unbroadcast(g * pick, self.shape),
                                     _unbroadcast(g * ~pick, other.shape)))

    def maximum(self, other):
        """Elementwise max; ties send the gradient to ``self``."""
        other = as_tensor(other)
        pick = self.data >= other.data
        return self._make(np.where(pick, self.data, other.data), (self, other),
                          lambda g: (_unbroadcast(g * pick, self.shape),
                                     _unbroadcast(g * ~pick, other.shape)))

    # reductions -------------------------------------------------------
    def sum(self, axis=None):
        shape = self.shape

        def back(g):
            if axis is not None:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape).copy(),)

        return self._make(self.data.sum(axis=axis), (self,), back)

    def mean(self, axis=None):
        n = self.data.size if axis is None else self.shape[axis]
        return self.sum(axis) * (1.0 / n)

    def reshape(self, *shape):
        old = self.shape
        return self._make(self.data.reshape(*shape), (self,), lambda g: (g.reshape(old),))

    # backward pass ----------------------------------------------------
    def backward(self):
        """Accumulate d(self)/d(leaf) into every leaf's ``.grad``."""
        if self.data.size != 1:
            raise ValueError("backward() needs a scalar output")
        if not np.isfinite(self.data).all():
            raise FloatingPointError(f"non-finite loss {float(self.data)}")
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            stack.extend((p, False) for p in node._parents if p.requires_grad)
        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(order):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node._backward is None:
                node.grad = g if node.grad is None else node.grad + g
                continue
            for parent, pg in zip(node._parents, node._backward(g)):
                if parent.requires_grad:
                    key = id(parent)
                    grads[key] = pg if key not in grads else grads[key] + pg


def parameter(data):
    return Tensor(data, requires_grad=True)
