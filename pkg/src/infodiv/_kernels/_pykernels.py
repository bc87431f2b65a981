"""Pure-Python entropy kernels, same API as the compiled module.

Sums go through :func:`math.fsum` so results agree with the compiled
Neumaier accumulation to within a few ulps.
"""
from __future__ import annotations

import math

import numpy as np


def entropy_flat(p) -> float:
    return math.fsum(-v * math.log(v) for v in np.asarray(p, dtype=np.float64).ravel().tolist() if v > 0.0)


def _marg(table: np.ndarray, axis: int) -> list[float]:
    moved = np.moveaxis(table, axis, 0)
    return [math.fsum(row.ravel().tolist()) for row in moved]


def pair_entropies(p):
    p = np.asarray(p, dtype=np.float64)
    return (
        entropy_flat(_marg(p, 0)),
        entropy_flat(_marg(p, 1)),
        entropy_flat(p),
    )


def triple_entropies(p):
    p = np.asarray(p, dtype=np.float64)
    a, b, c = p.shape
    xy = np.array([[math.fsum(p[i, j, :].tolist()) for j in range(b)] for i in range(a)]).reshape(a, b)
    xz = np.array([[math.fsum(p[i, :, k].tolist()) for k in range(c)] for i in range(a)]).reshape(a, c)
    yz = np.array([[math.fsum(p[:, j, k].tolist()) for k in range(c)] for j in range(b)]).reshape(b, c)
    hx, hy, hxy = pair_entropies(xy)
    hz = entropy_flat(_marg(xz, 1))
    return hx, hy, hz, hxy, entropy_flat(xz), entropy_flat(yz), entropy_flat(p)


def batch_pair_entropies(p):
    p = np.asarray(p, dtype=np.float64)
    out = np.empty((p.shape[0], 3), dtype=np.float64)
    for t in range(p.shape[0]):
        out[t] = pair_entropies(p[t])
    return out


def batch_triple_entropies(p):
    p = np.asarray(p, dtype=np.float64)
    out = np.empty((p.shape[0], 7), dtype=np.float64)
    for t in range(p.shape[0]):
        out[t] = triple_entropies(p[t])
    return out
