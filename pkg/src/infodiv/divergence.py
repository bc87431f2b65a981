"""Complexity terms and the divergences built from them.

A divergence pairs a symmetric complexity ``C >= I(X;Y)`` with the mutual
information: the raw form is ``C - I`` and the normalized form ``1 - I/C``.
The classical entropy distance and information distance are the raw forms for
``C = H(X,Y)`` and ``C = max(H(X), H(Y))``.

With ``m = min(H(X), H(Y))`` and ``M = max(H(X), H(Y))`` the weighted kinds
are generalized means of ``(m, M)`` with weight ``alpha`` on ``m``::

    S  arithmetic   alpha*m + (1-alpha)*M
    R  root         (alpha*sqrt(m) + (1-alpha)*sqrt(M))**2
    P  geometric    m**alpha * M**(1-alpha)
    D  harmonic     1 / (alpha/m + (1-alpha)/M)
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .distribution import ZERO_TOL, InfoSummary, is_equivalent
from .errors import DegenerateEntropy, InvalidSpec, WeightMismatch

WEIGHTED_KINDS = ("S", "R", "P", "D")
KINDS = ("E", "I", "Min") + WEIGHTED_KINDS + ("GMean", "Convex")
WEIGHT_TOL = 1e-12
PROBE_POINTS = 16
CROSS_CHECK_TOL = 1e-9
ENTROPY_ROUNDOFF = 1e-13  # bound on absolute error of a computed entropy

# generator functions g, g^-1 whose generalized mean reproduces each weighted kind
NAMED_G: dict[str, tuple[Callable[[float], float], Callable[[float], float]]] = {
    "S": (lambda x: x, lambda y: y),
    "R": (math.sqrt, lambda y: y * y),
    "P": (math.log, math.exp),
    "D": (lambda x: 1.0 / x, lambda y: 1.0 / y),
}


@dataclass(frozen=True)
class ComplexitySpec:
    """Declarative description of a complexity term.

    Use the factories :func:`simple`, :func:`gmean` and :func:`convex` or
    :func:`parse_spec` rather than the constructor.

    Attributes
    ----------
    kind : str
        One of ``E, I, Min, S, R, P, D, GMean, Convex``.
    alpha : float or None
        Weight on the smaller marginal entropy (weighted kinds and GMean).
    g, g_inv : callable or None
        Generator and its inverse for GMean.
    g_name : str or None
        Display name of ``g``.
    weights : tuple of float
        Convex weights.
    children : tuple of ComplexitySpec
        Convex children.
    harmonic : bool
        Convex only. If True the children are combined so that the normalized
        divergence is the weighted mean of the children's normalized
        divergences; otherwise complexities are averaged arithmetically.
    """

    kind: str
    alpha: float | None = None
    g: Callable[[float], float] | None = None
    g_inv: Callable[[float], float] | None = None
    g_name: str | None = None
    weights: tuple = ()
    children: tuple = ()
    harmonic: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}")
        if self.kind in WEIGHTED_KINDS or self.kind == "GMean":
            if self.alpha is None:
                raise InvalidSpec(f"kind {self.kind} needs alpha")
            a = float(self.alpha)
            if not (0.0 <= a <= 1.0) or math.isnan(a):
                raise InvalidSpec(f"alpha must lie in [0, 1], got {self.alpha!r}")
            if self.kind == "GMean" and a >= 1.0:
                raise InvalidSpec("GMean needs alpha in [0, 1)")
            object.__setattr__(self, "alpha", a)
        elif self.alpha is not None:
            raise InvalidSpec(f"kind {self.kind} takes no alpha")
        if self.kind == "GMean" and not (callable(self.g) and callable(self.g_inv)):
            raise InvalidSpec("GMean needs callable g and g_inv")
        if self.kind == "Convex":
            weights = tuple(float(w) for w in self.weights)
            children = tuple(self.children)
            if len(weights) != len(children):
                raise WeightMismatch(f"{len(weights)} weights for {len(children)} children")
            if not children:
                raise WeightMismatch("convex combination needs at least one child")
            if any(not isinstance(c, ComplexitySpec) for c in children):
                raise InvalidSpec("convex children must be ComplexitySpec")
            if any(w < 0.0 or math.isnan(w) for w in weights):
                raise WeightMismatch("weights must be nonnegative")
            if abs(math.fsum(weights) - 1.0) > WEIGHT_TOL:
                raise WeightMismatch(f"weights sum to {math.fsum(weights)!r}, not 1")
            object.__setattr__(self, "weights", weights)
            object.__setattr__(self, "children", children)
        elif self.weights or self.children:
            raise InvalidSpec(f"kind {self.kind} takes no children")

    @property
    def satisfies_definition(self) -> bool:
        """Whether ``C = I`` holds exactly on equivalent pairs.

        The min-entropy term fails this (a variable that is a function of the
        other already attains ``C = I``), and so does any weighted kind at
        ``alpha = 1``.
        """
        if self.kind in ("E", "I"):
            return True
        if self.kind == "Min":
            return False
        if self.kind == "Convex":
            return any(w > 0.0 and c.satisfies_definition for w, c in zip(self.weights, self.children))
        return self.alpha < 1.0

    def __str__(self) -> str:
        return format_spec(self)


def simple(kind: str, alpha: float | None = None) -> ComplexitySpec:
    """Spec for ``E``, ``I``, ``Min`` or a weighted kind ``S/R/P/D`` at ``alpha``."""
    return ComplexitySpec(kind, alpha)


def gmean(g: Callable, g_inv: Callable, alpha: float, name: str | None = None) -> ComplexitySpec:
    """Generalized-mean spec ``g_inv(alpha*g(m) + (1-alpha)*g(M))``."""
    return ComplexitySpec("GMean", alpha, g=g, g_inv=g_inv, g_name=name)


def named_gmean(kind: str, alpha: float) -> ComplexitySpec:
    """GMean spec using the generator that reproduces weighted ``kind``."""
    g, g_inv = NAMED_G[kind]
    return gmean(g, g_inv, alpha, name=kind)


def convex(weights: Sequence[float], children: Sequence[ComplexitySpec], harmonic: bool = False) -> ComplexitySpec:
    return ComplexitySpec("Convex", weights=tuple(weights), children=tuple(children), harmonic=harmonic)


@dataclass(frozen=True)
class DivergenceResult:
    """Complexity, information and both divergence forms for one pair.

    ``degenerate_convention_applied`` is set when the complexity is at most
    1e-12, in which case ``nib`` is 0 by convention.
    """

    complexity: float
    information: float
    ib: float
    nib: float
    is_equivalent_pair: bool
    degenerate_convention_applied: bool
    satisfies_definition: bool = True

    def as_dict(self) -> dict:
        return {
            "complexity": self.complexity,
            "information": self.information,
            "ib": self.ib,
            "nib": self.nib,
            "is_equivalent_pair": self.is_equivalent_pair,
            "degenerate_convention_applied": self.degenerate_convention_applied,
            "satisfies_definition": self.satisfies_definition,
        }


def _probe_gmean(spec: ComplexitySpec, m: float, M: float) -> None:
    hi = M if M - m > ZERO_TOL else m + max(m, 1.0)
    grid = np.linspace(m, hi, PROBE_POINTS).tolist()
    try:
        vals = [float(spec.g(x)) for x in grid]
        back = [float(spec.g_inv(v)) for v in vals]
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise DegenerateEntropy(f"g is undefined on [{m}, {hi}]: {exc}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise DegenerateEntropy(f"g is not finite on [{m}, {hi}]")
    steps = [b - a for a, b in zip(vals, vals[1:])]
    if not (all(d > 0 for d in steps) or all(d < 0 for d in steps)):
        raise InvalidSpec("g is not strictly monotone on the probe grid")
    if any(abs(b - x) > 1e-9 * max(1.0, abs(x)) for x, b in zip(grid, back)):
        raise InvalidSpec("g_inv does not invert g on the probe grid")


def complexity(spec: ComplexitySpec, s: InfoSummary) -> float:
    """Complexity term of ``spec`` for the pair summarized by ``s``, in nats.

    Raises
    ------
    DegenerateEntropy
        For kind ``D`` with ``alpha > 0`` when the smaller entropy is at most
        1e-12, or for GMean when ``g`` is undefined at the entropies in use.
    """
    m, M = s.h_min, s.h_max
    kind = spec.kind
    if kind == "E":
        return s.h_joint
    if kind == "I":
        return M
    if kind == "Min":
        return m
    if kind == "Convex":
        vals = [complexity(c, s) for c in spec.children]
        if not spec.harmonic:
            return math.fsum(w * v for w, v in zip(spec.weights, vals))
        if any(w > 0.0 and v <= ZERO_TOL for w, v in zip(spec.weights, vals)):
            return 0.0
        return 1.0 / math.fsum(w / v for w, v in zip(spec.weights, vals) if w > 0.0)
    a = spec.alpha
    if kind == "GMean":
        _probe_gmean(spec, m, M)
        if m == M:
            return m
        return float(spec.g_inv(a * spec.g(m) + (1.0 - a) * spec.g(M)))
    if a == 0.0:
        return M
    if kind == "S":
        return a * m + (1.0 - a) * M
    if kind == "R":
        return (a * math.sqrt(m) + (1.0 - a) * math.sqrt(M)) ** 2
    if kind == "P":
        # m**alpha vanishes at m = 0 for alpha > 0: the continuous extension
        return m ** a * M ** (1.0 - a)
    # harmonic mean
    if m <= ZERO_TOL:
        raise DegenerateEntropy("harmonic complexity needs both entropies positive")
    return m * M / (a * M + (1.0 - a) * m)


def closed_form(spec: ComplexitySpec, s: InfoSummary) -> tuple[float | None, float | None]:
    """Divergence from conditional entropies alone, without forming ``C - I``.

    Returns ``(ib, nib)`` where either entry is None if no such expression
    exists for the kind. Used as an independent route against :func:`evaluate`.
    """
    lo = min(s.h_x_given_y, s.h_y_given_x)
    hi = max(s.h_x_given_y, s.h_y_given_x)
    kind = spec.kind
    if kind == "E":
        return s.h_x_given_y + s.h_y_given_x, _nib_ratio_e(s)
    if kind == "I":
        return hi, normalized_information_distance_ratio(s)
    if kind == "Min":
        return lo, None
    if kind == "S":
        return spec.alpha * lo + (1.0 - spec.alpha) * hi, None
    if kind == "D" and s.h_min > ZERO_TOL:
        # weighted mean of the two per-variable conditional ratios
        a = spec.alpha
        cond_min = s.h_x_given_y if s.h_x <= s.h_y else s.h_y_given_x
        cond_max = s.h_y_given_x if s.h_x <= s.h_y else s.h_x_given_y
        return None, a * cond_min / s.h_min + (1.0 - a) * cond_max / s.h_max
    if kind == "Convex":
        parts = [closed_form(c, s) for c in spec.children]
        if spec.harmonic:
            if all(p[1] is not None for p in parts):
                return None, math.fsum(w * p[1] for w, p in zip(spec.weights, parts))
        elif all(p[0] is not None for p in parts):
            return math.fsum(w * p[0] for w, p in zip(spec.weights, parts)), None
    return None, None


def _nib_ratio_e(s: InfoSummary) -> float:
    if s.h_joint <= ZERO_TOL:
        return 0.0
    return (s.h_x_given_y + s.h_y_given_x) / s.h_joint


def _cross_check_enabled(flag: bool | None) -> bool:
    if flag is not None:
        return flag
    return os.environ.get("INFODIV_CROSS_CHECK", "").strip().lower() in ("1", "true", "yes", "on")


def evaluate(spec: ComplexitySpec, s: InfoSummary, cross_check: bool | None = None) -> DivergenceResult:
    """Raw and normalized divergence of ``spec`` on ``s``.

    Parameters
    ----------
    cross_check : bool, optional
        Compare against :func:`closed_form` and raise ``ArithmeticError`` on
        disagreement beyond 1e-9. Defaults to the ``INFODIV_CROSS_CHECK``
        environment variable.
    """
    c = complexity(spec, s)
    info = s.mi
    degenerate = c <= ZERO_TOL
    if degenerate:
        nib = 0.0
    elif spec.kind == "Convex" and spec.harmonic:
        nib = math.fsum(w * evaluate(ch, s, cross_check=False).nib for w, ch in zip(spec.weights, spec.children) if w > 0.0)
    else:
        nib = 1.0 - info / c
    result = DivergenceResult(
        complexity=c,
        information=info,
        ib=c - info,
        nib=nib,
        is_equivalent_pair=is_equivalent(s),
        degenerate_convention_applied=degenerate,
        satisfies_definition=spec.satisfies_definition,
    )
    if _cross_check_enabled(cross_check):
        ib2, nib2 = closed_form(spec, s)
        if ib2 is not None and abs(ib2 - result.ib) > CROSS_CHECK_TOL:
            raise ArithmeticError(f"{format_spec(spec)}: ib routes disagree ({result.ib!r} vs {ib2!r})")
        # normalized routes divide absolute entropy roundoff by entropies as small as h_min
        denom = s.h_min if s.h_min > ZERO_TOL else s.h_max
        nib_tol = CROSS_CHECK_TOL + ENTROPY_ROUNDOFF / max(denom, ZERO_TOL)
        if nib2 is not None and not degenerate and abs(nib2 - result.nib) > nib_tol:
            raise ArithmeticError(f"{format_spec(spec)}: nib routes disagree ({result.nib!r} vs {nib2!r})")
    return result


def entropy_distance(s: InfoSummary) -> float:
    """Sum of the two conditional entropies."""
    return s.h_x_given_y + s.h_y_given_x


def information_distance(s: InfoSummary) -> float:
    """Larger of the two conditional entropies."""
    return max(s.h_x_given_y, s.h_y_given_x)


def normalized_entropy_distance(s: InfoSummary) -> float:
    """``1 - I/H(X,Y)``, or 0 when the joint entropy vanishes."""
    if s.h_joint <= ZERO_TOL:
        return 0.0
    return 1.0 - s.mi / s.h_joint


def normalized_information_distance(s: InfoSummary) -> float:
    """``1 - I/max(H(X), H(Y))``, or 0 when both entropies vanish."""
    if s.h_max <= ZERO_TOL:
        return 0.0
    return 1.0 - s.mi / s.h_max


def _ratio(num: float, den: float) -> float:
    # a conditional entropy is bounded by its marginal, so 0/0 reads as 0 and
    # roundoff above 1 is clamped
    return 0.0 if den <= ZERO_TOL else min(num / den, 1.0)


def normalized_information_distance_ratio(s: InfoSummary) -> float:
    """The same quantity as :func:`normalized_information_distance`, as the
    larger of the relative conditional entropies ``H(X|Y)/H(X)`` and ``H(Y|X)/H(Y)``."""
    return max(_ratio(s.h_x_given_y, s.h_x), _ratio(s.h_y_given_x, s.h_y))


def h_mean_divergences(s: InfoSummary) -> tuple[float, float]:
    """Mean relative conditional entropy and pooled relative conditional entropy.

    Returns
    -------
    h_e : float
        ``(H(X|Y)/H(X) + H(Y|X)/H(Y)) / 2``.
    h_s : float
        ``(H(X|Y) + H(Y|X)) / (H(X) + H(Y))``, 0 when both entropies vanish.

    Raises
    ------
    DegenerateEntropy
        If either marginal entropy is at most 1e-12.
    """
    if s.h_min <= ZERO_TOL:
        raise DegenerateEntropy("both marginal entropies must be positive")
    h_e = 0.5 * (s.h_x_given_y / s.h_x + s.h_y_given_x / s.h_y)
    h_s = (s.h_x_given_y + s.h_y_given_x) / (s.h_x + s.h_y)
    return h_e, h_s


def convex_combination(
    weights: Sequence[float],
    specs: Sequence[ComplexitySpec],
    s: InfoSummary,
    normalized: bool = False,
) -> DivergenceResult:
    """Evaluate a convex mixture of divergences.

    With ``normalized=False`` the complexities are averaged, so the raw
    divergence is the weighted mean of the children's raw divergences. With
    ``normalized=True`` the normalized divergence is the weighted mean of the
    children's normalized divergences and the complexity is the matching
    weighted harmonic mean.

    Raises
    ------
    WeightMismatch
        If lengths differ or the weights are not a probability vector.
    """
    if len(weights) != len(specs):
        raise WeightMismatch(f"{len(weights)} weights for {len(specs)} specs")
    return evaluate(convex(weights, specs, harmonic=normalized), s)


_ALPHA_RE = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_SIMPLE_RE = re.compile(rf"^\s*(E|I|Min|min|S|R|P|D)\s*(?::\s*({_ALPHA_RE}))?\s*$")
_TERM_RE = re.compile(rf"^\s*({_ALPHA_RE})\s*\*\s*(.+?)\s*$")


def _parse_simple(text: str, default_alpha: float) -> ComplexitySpec:
    m = _SIMPLE_RE.match(text)
    if not m:
        raise InvalidSpec(f"cannot parse complexity spec {text!r}")
    kind = "Min" if m.group(1) in ("Min", "min") else m.group(1)
    alpha = m.group(2)
    if kind in WEIGHTED_KINDS:
        return simple(kind, float(alpha) if alpha is not None else default_alpha)
    if alpha is not None:
        raise InvalidSpec(f"kind {kind} takes no alpha")
    return simple(kind)


def parse_spec(text: str, default_alpha: float = 0.5) -> ComplexitySpec:
    """Parse the compact spec grammar.

    Examples: ``"E"``, ``"I"``, ``"Min"``, ``"S:0.5"``, ``"D"`` (uses
    ``default_alpha``), ``"convex:0.3*E+0.7*I"`` (complexities averaged) and
    ``"nconvex:0.3*E+0.7*I"`` (normalized divergences averaged).
    """
    if not isinstance(text, str):
        raise InvalidSpec("spec must be a string")
    head, sep, body = text.strip().partition(":")
    if sep and head.strip().lower() in ("convex", "nconvex"):
        weights, children = [], []
        for term in body.split("+"):
            m = _TERM_RE.match(term)
            if not m:
                raise InvalidSpec(f"cannot parse convex term {term!r}")
            weights.append(float(m.group(1)))
            children.append(_parse_simple(m.group(2), default_alpha))
        return convex(weights, children, harmonic=head.strip().lower() == "nconvex")
    return _parse_simple(text, default_alpha)


def format_spec(spec: ComplexitySpec) -> str:
    """Inverse of :func:`parse_spec` for parseable specs."""
    if spec.kind in ("E", "I", "Min"):
        return spec.kind
    if spec.kind in WEIGHTED_KINDS:
        return f"{spec.kind}:{spec.alpha!r}"
    if spec.kind == "GMean":
        return f"GMean[{spec.g_name or 'g'}]:{spec.alpha!r}"
    head = "nconvex" if spec.harmonic else "convex"
    return head + ":" + "+".join(f"{w!r}*{format_spec(c)}" for w, c in zip(spec.weights, spec.children))
