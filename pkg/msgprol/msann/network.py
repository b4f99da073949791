"""Fully connected sigmoid autoencoder: forward pass, MSE loss, backprop.

Parameters are a flat list in canonical order W0, b0, W1, b1, ...;
activations are row-major batches, a_{i+1} = sigmoid(a_i W_i + b_i).
"""
from typing import List, Sequence

import numpy as np
from scipy.special import expit

from msgprol.core.errors import ShapeError


def layer_count(theta: Sequence[np.ndarray]) -> int:
    return len(theta) // 2


def forward(theta: Sequence[np.ndarray], x: np.ndarray) -> List[np.ndarray]:
    """Returns [a_0 = x, a_1, ..., a_n]."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if len(theta) % 2:
        raise ShapeError(f"Parameter list must alternate weights and biases, got {len(theta)} tensors.")
    if x.shape[1] != theta[0].shape[0]:
        raise ShapeError(f"Input width {x.shape[1]} does not match layer 0 width {theta[0].shape[0]}.")
    activations = [x]
    for i in range(layer_count(theta)):
        w, b = theta[2 * i], theta[2 * i + 1]
        activations.append(expit(activations[-1] @ w + b))
    return activations


def loss_mse(output: np.ndarray, target: np.ndarray) -> float:
    output = np.asarray(output, dtype=float)
    target = np.asarray(target, dtype=float)
    if output.shape != target.shape:
        raise ShapeError(f"Output shape {output.shape} differs from target shape {target.shape}.")
    return float(np.mean((output - target) ** 2))


def backprop_fine(theta: Sequence[np.ndarray], x: np.ndarray, target: np.ndarray) -> List[np.ndarray]:
    """Exact gradients of loss_mse(forward(theta, x)[-1], target) per tensor."""
    activations = forward(theta, x)
    output = activations[-1]
    target = np.atleast_2d(np.asarray(target, dtype=float))
    if output.shape != target.shape:
        raise ShapeError(f"Output shape {output.shape} differs from target shape {target.shape}.")

    grads: List[np.ndarray] = [None] * len(theta)
    delta = 2.0 * (output - target) / output.size * output * (1.0 - output)
    for i in reversed(range(layer_count(theta))):
        grads[2 * i] = activations[i].T @ delta
        grads[2 * i + 1] = delta.sum(axis=0)
        if i:
            a = activations[i]
            delta = (delta @ theta[2 * i].T) * a * (1.0 - a)
    return grads


def reconstruction_error(theta: Sequence[np.ndarray], x: np.ndarray, target: np.ndarray) -> float:
    return loss_mse(forward(theta, x)[-1], target)
