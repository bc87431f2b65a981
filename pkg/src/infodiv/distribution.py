"""Exact categorical joint laws and their entropic summaries.

All entropies are in nats. Probability tables are validated on construction
and stored as read-only float64 arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import EmptySample, DataFormatError, NegativeMass, NotNormalized

NORM_TOL = 1e-9
NEG_TOL = 1e-12
ZERO_TOL = 1e-12


def _validated(probs, ndim: int | None = None) -> np.ndarray:
    arr = np.array(probs, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise DataFormatError(f"expected a {ndim}-dimensional table, got shape {arr.shape}")
    if arr.size == 0:
        raise DataFormatError("probability table is empty")
    if not np.all(np.isfinite(arr)):
        raise DataFormatError("probability table contains non-finite values")
    if arr.min() < -NEG_TOL:
        raise NegativeMass(f"negative probability {arr.min():.3g}")
    arr[arr < 0.0] = 0.0
    total = math.fsum(arr.ravel().tolist())
    if abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"probabilities sum to {total!r}")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _labels(labels, n: int, axis: str) -> tuple:
    if labels is None:
        return tuple(str(i) for i in range(n))
    labels = tuple(str(v) for v in labels)
    if len(labels) != n:
        raise DataFormatError(f"{len(labels)} labels for {n} {axis}-categories")
    if len(set(labels)) != n:
        raise DataFormatError(f"duplicate {axis}-labels")
    return labels


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of a categorical pair; rows index X, columns index Y."""

    labels_x: tuple
    labels_y: tuple
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = _validated(self.probs, ndim=2)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels_x", _labels(self.labels_x, p.shape[0], "x"))
        object.__setattr__(self, "labels_y", _labels(self.labels_y, p.shape[1], "y"))

    @classmethod
    def from_probs(cls, probs) -> "JointDistribution":
        """Build with positional labels ``"0", "1", ...``."""
        return cls(None, None, probs)

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def transpose(self) -> "JointDistribution":
        return JointDistribution(self.labels_y, self.labels_x, self.probs.T)

    def to_dict(self) -> dict:
        return {
            "labels_x": list(self.labels_x),
            "labels_y": list(self.labels_y),
            "probs": self.probs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JointDistribution":
        try:
            return cls(data.get("labels_x"), data.get("labels_y"), data["probs"])
        except (KeyError, TypeError) as exc:
            raise DataFormatError(f"malformed joint distribution: {exc}") from exc

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return (
            self.labels_x == other.labels_x
            and self.labels_y == other.labels_y
            and np.array_equal(self.probs, other.probs)
        )

    __hash__ = None


@dataclass(frozen=True)
class TripleDistribution:
    """Joint law of a categorical triple (X, Y, Z) as a 3-d array."""

    labels_x: tuple
    labels_y: tuple
    labels_z: tuple
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = _validated(self.probs, ndim=3)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels_x", _labels(self.labels_x, p.shape[0], "x"))
        object.__setattr__(self, "labels_y", _labels(self.labels_y, p.shape[1], "y"))
        object.__setattr__(self, "labels_z", _labels(self.labels_z, p.shape[2], "z"))

    @classmethod
    def from_probs(cls, probs) -> "TripleDistribution":
        return cls(None, None, None, probs)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.probs.shape

    def to_dict(self) -> dict:
        return {
            "labels_x": list(self.labels_x),
            "labels_y": list(self.labels_y),
            "labels_z": list(self.labels_z),
            "probs": self.probs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TripleDistribution":
        try:
            return cls(data.get("labels_x"), data.get("labels_y"), data.get("labels_z"), data["probs"])
        except (KeyError, TypeError) as exc:
            raise DataFormatError(f"malformed triple distribution: {exc}") from exc

    def __eq__(self, other):
        if not isinstance(other, TripleDistribution):
            return NotImplemented
        return (
            (self.labels_x, self.labels_y, self.labels_z)
            == (other.labels_x, other.labels_y, other.labels_z)
            and np.array_equal(self.probs, other.probs)
        )

    __hash__ = None


@dataclass(frozen=True)
class InfoSummary:
    """The six entropic quantities of a pair, in nats.

    Attributes
    ----------
    h_x, h_y : float
        Marginal entropies.
    h_joint : float
        Joint entropy.
    h_x_given_y, h_y_given_x : float
        Conditional entropies.
    mi : float
        Mutual information.
    """

    h_x: float
    h_y: float
    h_joint: float
    h_x_given_y: float
    h_y_given_x: float
    mi: float

    def __post_init__(self):
        vals = (self.h_x, self.h_y, self.h_joint, self.h_x_given_y, self.h_y_given_x, self.mi)
        if any(not math.isfinite(v) for v in vals):
            raise DataFormatError("entropies must be finite")
        if min(vals) < 0.0:
            raise DataFormatError("entropies must be nonnegative")
        tol = 1e-9
        if abs(self.h_joint - self.h_x - self.h_y_given_x) > tol or abs(self.h_joint - self.h_y - self.h_x_given_y) > tol:
            raise DataFormatError("chain rule violated")
        if abs(self.mi - (self.h_x + self.h_y - self.h_joint)) > tol:
            raise DataFormatError("mutual information inconsistent with entropies")
        if self.mi > min(self.h_x, self.h_y) + tol:
            raise DataFormatError("mutual information exceeds a marginal entropy")

    @classmethod
    def from_entropies(cls, h_x: float, h_y: float, h_joint: float) -> "InfoSummary":
        """Derive the remaining fields from marginal and joint entropies.

        Mutual information is clamped to ``[0, min(h_x, h_y)]`` and the
        conditional entropies at 0, so cancellation never yields negative
        information.
        """
        h_x, h_y, h_joint = max(float(h_x), 0.0), max(float(h_y), 0.0), max(float(h_joint), 0.0)
        mi = min(max(h_x + h_y - h_joint, 0.0), min(h_x, h_y))
        return cls(
            h_x=h_x,
            h_y=h_y,
            h_joint=h_joint,
            h_x_given_y=max(h_joint - h_y, 0.0),
            h_y_given_x=max(h_joint - h_x, 0.0),
            mi=mi,
        )

    def swapped(self) -> "InfoSummary":
        """Summary of the pair with the roles of X and Y exchanged."""
        return InfoSummary(self.h_y, self.h_x, self.h_joint, self.h_y_given_x, self.h_x_given_y, self.mi)

    @property
    def h_min(self) -> float:
        return min(self.h_x, self.h_y)

    @property
    def h_max(self) -> float:
        return max(self.h_x, self.h_y)

    def as_dict(self) -> dict:
        return {
            "h_x": self.h_x,
            "h_y": self.h_y,
            "h_joint": self.h_joint,
            "h_x_given_y": self.h_x_given_y,
            "h_y_given_x": self.h_y_given_x,
            "mi": self.mi,
        }


def entropy(probs) -> float:
    """Shannon entropy in nats of a probability vector (any shape is flattened).

    Raises
    ------
    NegativeMass
        If an entry is below -1e-12.
    NotNormalized
        If the entries do not sum to 1 within 1e-9.
    """
    p = _validated(probs)
    return max(float(_kernels.entropy_flat(p.ravel())), 0.0)


def summarize(joint: JointDistribution) -> InfoSummary:
    """All six entropic quantities of ``joint``."""
    hx, hy, hxy = _kernels.pair_entropies(joint.probs)
    return InfoSummary.from_entropies(hx, hy, hxy)


def marginal_x(joint: JointDistribution) -> np.ndarray:
    return np.array([math.fsum(row) for row in joint.probs.tolist()])


def marginal_y(joint: JointDistribution) -> np.ndarray:
    return np.array([math.fsum(col) for col in joint.probs.T.tolist()])


def pairwise_marginals(triple: TripleDistribution) -> tuple[JointDistribution, JointDistribution, JointDistribution]:
    """The (X,Y), (X,Z) and (Y,Z) marginal laws of ``triple``."""
    p = triple.probs
    xy = JointDistribution(triple.labels_x, triple.labels_y, p.sum(axis=2))
    xz = JointDistribution(triple.labels_x, triple.labels_z, p.sum(axis=1))
    yz = JointDistribution(triple.labels_y, triple.labels_z, p.sum(axis=0))
    return xy, xz, yz


def entropy_of_triple(triple: TripleDistribution) -> float:
    """Joint entropy H(X,Y,Z) in nats."""
    return max(float(_kernels.entropy_flat(triple.probs.ravel())), 0.0)


def triple_entropies(triple: TripleDistribution) -> tuple[float, ...]:
    """(H(X), H(Y), H(Z), H(X,Y), H(X,Z), H(Y,Z), H(X,Y,Z)) in one kernel pass."""
    return tuple(max(float(v), 0.0) for v in _kernels.triple_entropies(triple.probs))


def triple_summaries(triple: TripleDistribution) -> tuple[InfoSummary, InfoSummary, InfoSummary]:
    """Summaries of the (X,Y), (X,Z) and (Y,Z) pairs."""
    hx, hy, hz, hxy, hxz, hyz, _ = triple_entropies(triple)
    return (
        InfoSummary.from_entropies(hx, hy, hxy),
        InfoSummary.from_entropies(hx, hz, hxz),
        InfoSummary.from_entropies(hy, hz, hyz),
    )


def from_samples(rows: Iterable[Sequence[str]]) -> JointDistribution:
    """Plug-in estimate of the joint law from observed (x, y) pairs.

    Categories are ordered by first appearance.

    Raises
    ------
    EmptySample
        If ``rows`` is empty.
    """
    xs: dict[str, int] = {}
    ys: dict[str, int] = {}
    counts: dict[tuple[int, int], int] = {}
    n = 0
    for k, row in enumerate(rows):
        if len(row) != 2:
            raise DataFormatError(f"observation {k} has {len(row)} fields, expected 2")
        x, y = str(row[0]), str(row[1])
        if not x or not y:
            raise DataFormatError(f"observation {k} has an empty category")
        key = (xs.setdefault(x, len(xs)), ys.setdefault(y, len(ys)))
        counts[key] = counts.get(key, 0) + 1
        n += 1
    if n == 0:
        raise EmptySample("no observations")
    table = np.zeros((len(xs), len(ys)))
    for (i, j), c in counts.items():
        table[i, j] = c / n
    return JointDistribution(tuple(xs), tuple(ys), table)


def is_equivalent(summary: InfoSummary) -> bool:
    """True when each variable determines the other (both conditionals vanish)."""
    return summary.h_x_given_y <= ZERO_TOL and summary.h_y_given_x <= ZERO_TOL
