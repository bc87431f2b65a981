"""Constructed distributions with prescribed entropies.

Used to reproduce counterexamples to the complexity-side triangle condition
and to the entropy-ordering property of the joint-entropy complexity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..distribution import JointDistribution, TripleDistribution, triple_entropies
from ..errors import InvalidSpec

BISECT_TOL = 1e-10


def _head_entropy(p: float, k: int) -> float:
    # one atom of mass p, the rest spread evenly over k - 1 atoms
    rest = (1.0 - p) / (k - 1)
    h = -p * math.log(p) if p > 0.0 else 0.0
    if rest > 0.0:
        h -= (1.0 - p) * math.log(rest)
    return h


def distribution_with_entropy(h: float, atoms: int | None = None) -> np.ndarray:
    """Probability vector with entropy ``h`` nats.

    One atom carries mass ``p`` and the others share ``1 - p`` evenly; ``p``
    is found by bisection to 1e-10. With two atoms this is binary-entropy
    inversion. ``atoms`` defaults to the fewest that can reach ``h``.
    """
    if h < 0.0 or not math.isfinite(h):
        raise InvalidSpec(f"entropy must be finite and nonnegative, got {h}")
    if atoms is None:
        atoms = max(2, math.floor(math.exp(h)) + 1)
    k = int(atoms)
    if h > math.log(k) + 1e-15:
        raise InvalidSpec(f"entropy {h} exceeds log({k})")
    if h == 0.0:
        return np.eye(1, k).ravel()
    lo, hi = 1.0 / k, 1.0  # entropy decreases from log(k) to 0 on this range
    for _ in range(200):  # runs to adjacent floats, well inside the 1e-10 target
        mid = 0.5 * (lo + hi)
        if _head_entropy(mid, k) > h:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    return np.array([p] + [(1.0 - p) / (k - 1)] * (k - 1))


def equal_pair_table(h: float) -> np.ndarray:
    """Joint table of ``X = Y`` with common entropy ``h``."""
    return np.diag(distribution_with_entropy(h))


def product_triple(xy: np.ndarray, z: np.ndarray) -> TripleDistribution:
    """Triple with ``Z`` independent of the pair ``(X, Y)``."""
    p = np.asarray(xy)[:, :, None] * np.asarray(z)[None, None, :]
    return TripleDistribution.from_probs(p / p.sum())


@dataclass(frozen=True)
class Witness:
    """A constructed triple with the entropies it was built to realize."""

    name: str
    triple: TripleDistribution
    targets: dict

    def achieved(self) -> dict:
        hx, hy, hz, *_ = triple_entropies(self.triple)
        return {"h_x": hx, "h_y": hy, "h_z": hz}

    def max_target_error(self) -> float:
        got = self.achieved()
        return max(abs(got[k] - v) for k, v in self.targets.items())

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "targets": dict(self.targets),
            "achieved": self.achieved(),
            "probs": self.triple.probs.tolist(),
        }


def arithmetic_witness(alpha: float, h: float = 0.6, h_z: float = 0.3) -> Witness:
    """``H(X) = H(Y) = h`` with ``H(Z) < h``: the arithmetic condition fails
    for ``alpha > 1/2`` by ``(2 alpha - 1)(h - H(Z))``."""
    if not h_z < h:
        raise InvalidSpec("need H(Z) < H(X)")
    triple = product_triple(equal_pair_table(h), distribution_with_entropy(h_z))
    return Witness(f"arithmetic[{alpha}]", triple, {"h_x": h, "h_y": h, "h_z": h_z})


def harmonic_witness(alpha: float, h: float = 0.2) -> Witness:
    """Independent ``Z`` with ``H(Z) = (1 + alpha)/alpha * h`` and ``H(X) = H(Y) = h``.

    Then ``C(X,Z) = C(Y,Z) = H(Z)/2`` so the condition sum is exactly zero,
    below ``C(X,Y) = h``.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidSpec("alpha must lie in (0, 1)")
    h_z = (1.0 + alpha) / alpha * h
    triple = product_triple(equal_pair_table(h), distribution_with_entropy(h_z))
    return Witness(f"harmonic[{alpha}]", triple, {"h_x": h, "h_y": h, "h_z": h_z})


def harmonic_witness_relaxed(alpha: float, c: float, h: float = 0.1) -> Witness:
    """Independent ``Z`` with ``alpha H(Z) + (1 - alpha) h = 3 c h``.

    Each ``c C(., Z)`` equals ``H(Z)/3``, so the relaxed condition quantity is
    ``-H(Z)/3`` for every ``c >= 1``.
    """
    if not 0.0 < alpha < 1.0 or c < 1.0:
        raise InvalidSpec("need alpha in (0, 1) and c >= 1")
    h_z = (3.0 * c - (1.0 - alpha)) * h / alpha
    triple = product_triple(equal_pair_table(h), distribution_with_entropy(h_z))
    return Witness(f"harmonic_relaxed[{alpha},c={c}]", triple, {"h_x": h, "h_y": h, "h_z": h_z})


def geometric_witness(alpha: float, c: float = 1.0, h_z: float = 1.5) -> Witness:
    """Independent ``Z`` with ``H(X) = H(Y) = (1/(3c))**(1/alpha) * H(Z)``.

    Each ``c C(., Z)`` equals ``H(Z)/3``, so the relaxed condition quantity is
    ``-H(Z)/3``.
    """
    if not 0.0 < alpha < 1.0 or c < 1.0:
        raise InvalidSpec("need alpha in (0, 1) and c >= 1")
    h = (1.0 / (3.0 * c)) ** (1.0 / alpha) * h_z
    if h > math.log(2):
        raise InvalidSpec("target H(X) exceeds a binary variable; lower h_z")
    triple = product_triple(equal_pair_table(h), distribution_with_entropy(h_z))
    return Witness(f"geometric[{alpha},c={c}]", triple, {"h_x": h, "h_y": h, "h_z": h_z})


def entropy_order_reversal_witness(h_x2: float = 0.5) -> tuple[JointDistribution, JointDistribution]:
    """Two (Y, X) laws where the joint-entropy complexity reverses the entropy order.

    ``Y`` is a uniform bit. ``X1 = Y`` has entropy ``log 2`` while ``X2`` is
    independent of ``Y`` with smaller entropy ``h_x2``; yet ``H(Y, X1) < H(Y, X2)``.
    """
    y = np.array([0.5, 0.5])
    x2 = distribution_with_entropy(h_x2, 2)
    return (
        JointDistribution(("y0", "y1"), ("a0", "a1"), np.diag(y)),
        JointDistribution(("y0", "y1"), ("b0", "b1"), np.outer(y, x2)),
    )
