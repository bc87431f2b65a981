"""Seeded flat-Dirichlet sampling of joint tables.

Every draw is a deterministic function of ``(seed, shape, count)``.
"""
from __future__ import annotations

from typing import Callable, Iterator, NamedTuple

import numpy as np

from .. import _kernels
from ..distribution import JointDistribution, TripleDistribution


def dirichlet_tables(seed: int, shape: tuple[int, ...], count: int) -> np.ndarray:
    """``count`` tables of ``shape`` drawn uniformly from the simplex.

    Returns a C-contiguous array of shape ``(count, *shape)``.
    """
    shape = tuple(int(s) for s in shape)
    if any(s < 1 for s in shape):
        raise ValueError(f"sizes must be >= 1, got {shape}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = np.random.default_rng(seed)
    n = int(np.prod(shape))
    flat = rng.dirichlet(np.ones(n), size=count) if n > 1 else np.ones((count, 1))
    return np.ascontiguousarray(flat.reshape((count,) + shape))


def sample_triples(seed: int, shape: tuple[int, int, int], count: int) -> Iterator[TripleDistribution]:
    """Stream of ``count`` random triple laws of the given shape."""
    for p in dirichlet_tables(seed, shape, count):
        yield TripleDistribution.from_probs(p)


def sample_joints(seed: int, shape: tuple[int, int], count: int) -> Iterator[JointDistribution]:
    for p in dirichlet_tables(seed, shape, count):
        yield JointDistribution.from_probs(p)


def pair_entropy_batch(tables: np.ndarray) -> np.ndarray:
    """Rows of ``(H(X), H(Y), H(X,Y))`` for a stack of 2-d tables."""
    return _kernels.batch_pair_entropies(np.ascontiguousarray(tables, dtype=np.float64))


def triple_entropy_batch(tables: np.ndarray) -> np.ndarray:
    """Rows of ``(H(X), H(Y), H(Z), H(X,Y), H(X,Z), H(Y,Z), H(X,Y,Z))``."""
    return _kernels.batch_triple_entropies(np.ascontiguousarray(tables, dtype=np.float64))


class QualifiedSample(NamedTuple):
    tables: np.ndarray
    entropies: np.ndarray
    drawn: int
    accepted: int

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.drawn if self.drawn else 0.0


def sample_qualifying(
    seed: int,
    shape: tuple[int, ...],
    quota: int,
    accept: Callable[[np.ndarray], np.ndarray],
    batch: int = 4096,
    max_draws: int = 10_000_000,
) -> QualifiedSample:
    """Draw batches until ``quota`` tables pass ``accept``.

    ``accept`` maps the entropy rows of a batch (see :func:`pair_entropy_batch`
    and :func:`triple_entropy_batch`) to a boolean mask. Rejected tables are
    discarded, never rescaled.

    Returns
    -------
    QualifiedSample
        The first ``quota`` accepted tables (fewer if ``max_draws`` ran
        out), their entropy rows, and the drawn and accepted totals.
    """
    rng = np.random.default_rng(seed)
    n = int(np.prod(shape))
    kernel = pair_entropy_batch if len(shape) == 2 else triple_entropy_batch
    kept_t, kept_h, got, drawn = [], [], 0, 0
    while got < quota and drawn < max_draws:
        size = min(batch, max_draws - drawn)
        tables = rng.dirichlet(np.ones(n), size=size).reshape((size,) + tuple(shape))
        drawn += size
        ent = kernel(tables)
        mask = np.asarray(accept(ent), dtype=bool)
        kept_t.append(tables[mask])
        kept_h.append(ent[mask])
        got += int(mask.sum())
    tables = np.concatenate(kept_t)[:quota] if kept_t else np.empty((0,) + tuple(shape))
    ent = np.concatenate(kept_h)[:quota] if kept_h else np.empty((0, 3 if len(shape) == 2 else 7))
    return QualifiedSample(np.ascontiguousarray(tables), ent, drawn, got)
