"""Bound constants for the weighted complexity kinds.

Comparability constants relate a raw divergence to the information distance
``D_I`` on an entropy interval ``[c1, c2]`` with ratio ``rho = c2/c1``.
Redundancy constants bound how much two near-equivalent covariates can differ
in divergence to a target. Notation: ``a_min = min(alpha, 1-alpha)`` and
``a_max = max(alpha, 1-alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..divergence import WEIGHTED_KINDS
from ..errors import InvalidGamma, InvalidSpec, InvalidTheta, UnsupportedKind


@dataclass(frozen=True)
class ThetaInterval:
    """Entropy interval ``[c1, c2]`` in nats with ``0 < c1 <= c2 < inf``."""

    c1: float
    c2: float

    def __post_init__(self):
        c1, c2 = float(self.c1), float(self.c2)
        if not (math.isfinite(c1) and math.isfinite(c2)) or not (0.0 < c1 <= c2):
            raise InvalidTheta(f"need 0 < c1 <= c2 < inf, got [{self.c1}, {self.c2}]")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @property
    def rho(self) -> float:
        return self.c2 / self.c1

    def contains(self, h: float) -> bool:
        return self.c1 <= h <= self.c2


def _present(value: float | None) -> float | None:
    # a constant is reported only where it gives a usable bound
    if value is None or not math.isfinite(value) or not 0.0 < value <= 1.0:
        return None
    return value


@dataclass(frozen=True)
class BoundConstants:
    """Lower constants ``k1_*`` and upper constant ``k2`` of ``k1 D_I <= IB <= k2 D_I``.

    ``k1_a`` applies where both entropies and the mutual information lie in
    the interval; ``k1_b`` and ``k1_c`` need only the two entropies there.
    Absent constants are None.
    """

    k1_a: float | None
    k1_b: float | None
    k1_c: float | None
    k2: float = 1.0

    def __post_init__(self):
        for name in ("k1_a", "k1_b", "k1_c"):
            v = getattr(self, name)
            if v is not None and not (0.0 < v <= self.k2):
                raise InvalidSpec(f"{name}={v} outside (0, {self.k2}]")

    def as_dict(self) -> dict:
        return {"k1_a": self.k1_a, "k1_b": self.k1_b, "k1_c": self.k1_c, "k2": self.k2}


def _check_alpha(alpha: float, upper_open: bool = True) -> float:
    a = float(alpha)
    if math.isnan(a) or a < 0.0 or a > 1.0 or (upper_open and a >= 1.0):
        raise InvalidSpec(f"alpha must lie in [0, 1), got {alpha!r}")
    return a


def p3bis_constants(kind: str, alpha: float, theta: ThetaInterval | None = None) -> BoundConstants:
    """Tabulated comparability constants for weighted ``kind`` at ``alpha``.

    Parameters
    ----------
    theta : ThetaInterval or None
        Entropy interval; None means the whole half-line.

    Raises
    ------
    InvalidTheta
        If the kind needs a bounded interval (P, D) and none is given.
    """
    if kind not in WEIGHTED_KINDS:
        raise UnsupportedKind(f"no comparability constants for kind {kind!r}")
    a = _check_alpha(alpha)
    a_min = min(a, 1.0 - a)
    if kind == "S":
        return BoundConstants(_present(a_min), _present(1.0 - a), None)
    if theta is None:
        if kind == "R":
            return BoundConstants(None, None, _present((1.0 - a) ** 2))
        raise InvalidTheta(f"kind {kind} needs a bounded entropy interval")
    rho = theta.rho
    if kind == "R":
        k1_b = 1.0 - a * math.sqrt(rho) if rho * a * a < 1.0 else None
        k1_c = (1.0 - a) * (1.0 - a / (1.0 + 1.0 / math.sqrt(rho)) ** 2)
        return BoundConstants(_present(a_min / math.sqrt(rho)), _present(k1_b), _present(k1_c))
    if kind == "P":
        k1_b = 1.0 - a * rho if rho * a < 1.0 else None
        k1_c = a if rho == 1.0 else (rho ** a - 1.0) / (rho - 1.0)
        return BoundConstants(_present(a_min / rho), _present(k1_b), _present(k1_c))
    k1_b = 1.0 - a * rho * rho if rho * rho * a < 1.0 else None
    k1_c = 1.0 / (1.0 + rho * a / (1.0 - a))
    return BoundConstants(_present(a_min / rho ** 2), _present(k1_b), _present(k1_c))


def sharp_power_k1c(alpha: float, rho: float) -> float:
    """Best constant ``k`` with ``IB_P >= k * D_I`` when both entropies lie in
    an interval of ratio ``rho``.

    The ratio ``IB_P / D_I`` is smallest when one variable determines the
    other and the entropy ratio equals ``rho``, which gives
    ``(rho**(1-alpha) - 1) / (rho - 1)``.
    """
    a = _check_alpha(alpha)
    if rho < 1.0:
        raise InvalidTheta("rho must be at least 1")
    if rho == 1.0:
        return 1.0 - a
    return (rho ** (1.0 - a) - 1.0) / (rho - 1.0)


def p6bis_constant(kind: str, alpha: float | None = None, normalized: bool = False) -> float:
    """Multiplier ``c`` of the relaxed triangle ``d(X,Y) <= c (d(X,Z) + d(Z,Y))``.

    ``kind`` may be ``"D-normalized"`` as shorthand for ``("D", normalized=True)``.

    Raises
    ------
    UnsupportedKind
        For the geometric kind and the raw harmonic kind, which have no known
        global constant.
    """
    if kind == "D-normalized":
        kind, normalized = "D", True
    if kind in ("E", "I"):
        return 1.0
    if kind not in WEIGHTED_KINDS:
        raise UnsupportedKind(f"no relaxed-triangle constant for kind {kind!r}")
    a = _check_alpha(alpha)
    if kind == "S":
        if normalized:
            return 1.0 / (1.0 - a)
        return 1.0 if a <= 0.5 else a / (1.0 - a)
    if kind == "R":
        if normalized or a > 0.5:
            return 1.0 / (1.0 - a) ** 2
        return 1.0 / (a * a + (1.0 - a) ** 2)
    if kind == "D" and normalized:
        a_min = min(a, 1.0 - a)
        # alpha = 0 is the normalized information distance, a metric
        return 1.0 if a_min == 0.0 else 1.0 / a_min
    raise UnsupportedKind(f"no global relaxed-triangle constant for {'normalized ' if normalized else ''}{kind}")


@dataclass(frozen=True)
class RedundancyConstants:
    """Constants of the redundancy bound for covariates whose entropies lie
    in ``[gamma1, gamma2]`` times the target entropy.

    The raw bound is ``(1 + kappa1) D_I(X1, X2)`` and the normalized bound
    ``(1 + kappa1) / kappa2 * d_I(X1, X2)``.
    """

    kappa1: float
    kappa2: float
    gamma1: float
    gamma2: float
    gamma12: float

    def __post_init__(self):
        if not self.kappa1 >= 0.0 or not self.kappa2 > 0.0:
            raise InvalidGamma("kappa1 must be >= 0 and kappa2 > 0")
        if abs(self.gamma12 - min(self.gamma1, 1.0 / self.gamma2)) > 1e-15:
            raise InvalidGamma("gamma12 must equal min(gamma1, 1/gamma2)")

    @property
    def raw_factor(self) -> float:
        return 1.0 + self.kappa1

    @property
    def normalized_factor(self) -> float:
        return (1.0 + self.kappa1) / self.kappa2

    def as_dict(self) -> dict:
        return {
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "gamma12": self.gamma12,
        }


def redundancy_constants(kind: str, alpha: float, gamma1: float, gamma2: float) -> RedundancyConstants:
    """Tabulated redundancy constants for weighted ``kind``.

    Raises
    ------
    InvalidGamma
        Unless ``0 < gamma1 <= gamma2 < inf``.
    """
    if kind not in WEIGHTED_KINDS:
        raise UnsupportedKind(f"no redundancy constants for kind {kind!r}")
    g1, g2 = float(gamma1), float(gamma2)
    if not (math.isfinite(g1) and math.isfinite(g2)) or not (0.0 < g1 <= g2):
        raise InvalidGamma(f"need 0 < gamma1 <= gamma2 < inf, got ({gamma1}, {gamma2})")
    a = _check_alpha(alpha)
    a_min, a_max = min(a, 1.0 - a), max(a, 1.0 - a)
    g12 = min(g1, 1.0 / g2)
    if kind == "S":
        k1, k2 = a_max, (1.0 - a) + a * g12
    elif kind == "R":
        k1, k2 = a_max ** 2 + a * (1.0 - a) / math.sqrt(g1), ((1.0 - a) + a * math.sqrt(g12)) ** 2
    elif kind == "P":
        k1 = max((1.0 - a) / g1 ** a, a / g1 ** (1.0 - a), 1.0 if g1 <= 1.0 else 0.0)
        k2 = g12 ** a
    else:
        if a_min == 0.0:
            raise InvalidSpec("harmonic redundancy constants need alpha in (0, 1)")
        k1 = (a_max / a_min ** 2) / (1.0 + g12) ** 2
        k2 = 1.0 / (a / g12 + (1.0 - a))
    return RedundancyConstants(k1, k2, g1, g2, g12)
