"""Named inequality checks over sampled or constructed distributions.

Every check reduces to a slack ``rhs - lhs`` per trial; a trial violates the
check when its slack is below ``-tol``. Reports merge associatively so trials
can be split across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from ..distribution import (
    InfoSummary,
    JointDistribution,
    TripleDistribution,
    summarize,
    triple_entropies,
)
from ..divergence import ComplexitySpec, complexity, evaluate, simple
from ..errors import DegenerateEntropy, DomainViolation
from .constants import RedundancyConstants, ThetaInterval

TOL = 1e-9
MAX_WITNESSES = 3
STATUSES = ("proved", "finding", "open")


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one named check.

    Attributes
    ----------
    status : str
        ``proved`` for established results (violations are bugs), ``finding``
        for statements expected to fail, ``open`` for unresolved questions.
    max_slack, min_slack : float or None
        Largest and smallest observed ``rhs - lhs``; the minimum shows how
        tight the bound came.
    witnesses : tuple of dict
        Up to three violating trials, lowest trial index first.
    skipped : int
        Trials where the quantity was undefined (degenerate entropy).
    """

    name: str
    status: str = "proved"
    trials: int = 0
    violations: int = 0
    max_slack: float | None = None
    min_slack: float | None = None
    witnesses: tuple = ()
    skipped: int = 0
    notes: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if not 0 <= self.violations <= self.trials:
            raise ValueError("violations must lie in [0, trials]")

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def merge(self, other: "CheckReport") -> "CheckReport":
        if (self.name, self.status) != (other.name, other.status):
            raise ValueError("can only merge reports of the same check")
        wit = tuple(sorted(self.witnesses + other.witnesses, key=lambda w: w.get("trial", 0))[:MAX_WITNESSES])
        return replace(
            self,
            trials=self.trials + other.trials,
            violations=self.violations + other.violations,
            max_slack=_opt(max, self.max_slack, other.max_slack),
            min_slack=_opt(min, self.min_slack, other.min_slack),
            witnesses=wit,
            skipped=self.skipped + other.skipped,
            notes=self.notes or other.notes,
        )

    def with_notes(self, notes: str) -> "CheckReport":
        return replace(self, notes=notes)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "trials": self.trials,
            "violations": self.violations,
            "max_slack": self.max_slack,
            "min_slack": self.min_slack,
            "skipped": self.skipped,
            "witnesses": list(self.witnesses),
            "notes": self.notes,
        }


def _opt(fn, a, b):
    if a is None:
        return b
    if b is None:
        return a
    return fn(a, b)


@dataclass
class _Accumulator:
    name: str
    status: str
    tol: float
    trials: int = 0
    violations: int = 0
    max_slack: float | None = None
    min_slack: float | None = None
    skipped: int = 0
    witnesses: list = field(default_factory=list)

    def add(self, trial: int, slack: float, payload: Callable[[], dict] | None = None) -> None:
        self.trials += 1
        self.max_slack = slack if self.max_slack is None else max(self.max_slack, slack)
        self.min_slack = slack if self.min_slack is None else min(self.min_slack, slack)
        if slack < -self.tol:
            self.violations += 1
            if len(self.witnesses) < MAX_WITNESSES:
                w = {"trial": trial, "slack": slack}
                if payload is not None:
                    w.update(payload())
                self.witnesses.append(w)

    def skip(self) -> None:
        self.trials += 1
        self.skipped += 1

    def report(self, notes: str = "") -> CheckReport:
        return CheckReport(
            name=self.name,
            status=self.status,
            trials=self.trials,
            violations=self.violations,
            max_slack=self.max_slack,
            min_slack=self.min_slack,
            witnesses=tuple(self.witnesses),
            skipped=self.skipped,
            notes=notes,
        )


# ---------------------------------------------------------------- helpers

def pair_summaries(rows: np.ndarray) -> list[InfoSummary]:
    """Summaries from ``(H(X), H(Y), H(X,Y))`` rows."""
    return [InfoSummary.from_entropies(hx, hy, hxy) for hx, hy, hxy in np.asarray(rows).tolist()]


def triple_summaries_from_rows(rows: np.ndarray) -> list[tuple[InfoSummary, InfoSummary, InfoSummary, float]]:
    """``(s_xy, s_xz, s_yz, H(Z))`` from seven-entropy rows."""
    out = []
    for hx, hy, hz, hxy, hxz, hyz, _ in np.asarray(rows).tolist():
        out.append((
            InfoSummary.from_entropies(hx, hy, hxy),
            InfoSummary.from_entropies(hx, hz, hxz),
            InfoSummary.from_entropies(hy, hz, hyz),
            hz,
        ))
    return out


def _triple_parts(triple) -> tuple[InfoSummary, InfoSummary, InfoSummary, float]:
    if isinstance(triple, TripleDistribution):
        hx, hy, hz, hxy, hxz, hyz, _ = triple_entropies(triple)
        return (
            InfoSummary.from_entropies(hx, hy, hxy),
            InfoSummary.from_entropies(hx, hz, hxz),
            InfoSummary.from_entropies(hy, hz, hyz),
            hz,
        )
    return tuple(triple)


def _as_summary(item) -> InfoSummary:
    if isinstance(item, InfoSummary):
        return item
    if isinstance(item, JointDistribution):
        return summarize(item)
    raise TypeError(f"expected InfoSummary or JointDistribution, got {type(item).__name__}")


def _payload(item) -> Callable[[], dict] | None:
    if isinstance(item, (TripleDistribution, JointDistribution)):
        return lambda: {"probs": item.probs.tolist()}
    if isinstance(item, np.ndarray):
        return lambda: {"probs": item.tolist()}
    return None


def divergence_value(spec: ComplexitySpec, s: InfoSummary, normalized: bool) -> float:
    r = evaluate(spec, s)
    return r.nib if normalized else r.ib


def in_upsilon(rows: np.ndarray, theta: ThetaInterval) -> np.ndarray:
    """Mask of pair rows whose two entropies and mutual information lie in ``theta``."""
    rows = np.asarray(rows)
    hx, hy, hxy = rows[:, 0], rows[:, 1], rows[:, 2]
    mi = np.clip(hx + hy - hxy, 0.0, None)
    return _within(hx, theta) & _within(hy, theta) & _within(mi, theta)


def in_gamma2(rows: np.ndarray, theta: ThetaInterval) -> np.ndarray:
    """Mask of pair rows whose two entropies lie in ``theta``."""
    rows = np.asarray(rows)
    return _within(rows[:, 0], theta) & _within(rows[:, 1], theta)


def _within(h: np.ndarray, theta: ThetaInterval) -> np.ndarray:
    return (h >= theta.c1) & (h <= theta.c2)


def ratio_mask(rows: np.ndarray, gamma1: float, gamma2: float) -> np.ndarray:
    """Mask of triple rows (target first) whose covariate entropies lie in
    ``[gamma1, gamma2]`` times the target entropy."""
    rows = np.asarray(rows)
    hy, h1, h2 = rows[:, 0], rows[:, 1], rows[:, 2]
    lo, hi = gamma1 * hy, gamma2 * hy
    return (hy > 0) & (h1 >= lo) & (h1 <= hi) & (h2 >= lo) & (h2 <= hi)


# ---------------------------------------------------------------- identities

def check_identities(sample: Iterable, name: str = "entropy_identities", tol: float = TOL) -> CheckReport:
    """Chain rule and mutual-information identity on each joint law.

    The mutual information is recomputed independently as the KL divergence
    of the joint from the product of its marginals.
    """
    acc = _Accumulator(name, "proved", tol)
    for i, item in enumerate(sample):
        p = item.probs if isinstance(item, JointDistribution) else np.asarray(item)
        s = summarize(item) if isinstance(item, JointDistribution) else summarize(JointDistribution.from_probs(p))
        px, py = p.sum(axis=1), p.sum(axis=0)
        kl = math.fsum(
            v * math.log(v / (px[a] * py[b]))
            for (a, b), v in np.ndenumerate(p)
            if v > 0.0
        )
        residual = max(
            abs(s.h_joint - s.h_x - s.h_y_given_x),
            abs(s.h_joint - s.h_y - s.h_x_given_y),
            abs(s.mi - (s.h_x + s.h_y - s.h_joint)),
            abs(s.mi - kl),
            max(0.0, s.mi - min(s.h_x, s.h_y)),
        )
        acc.add(i, -residual, _payload(p))
    return acc.report()


def check_entropy_lemma(sample: Iterable, name: str = "triple_entropy_lemma", tol: float = TOL) -> CheckReport:
    """``H(X,Y) <= H(X,Z) + H(Y,Z) - H(Z)`` and its mutual-information form."""
    acc = _Accumulator(name, "proved", tol)
    for i, item in enumerate(sample):
        if isinstance(item, TripleDistribution):
            hx, hy, hz, hxy, hxz, hyz, _ = triple_entropies(item)
        else:
            hx, hy, hz, hxy, hxz, hyz, _ = item
        joint_slack = hxz + hyz - hz - hxy
        mi = lambda a, b, ab: a + b - ab
        info_slack = mi(hx, hy, hxy) - (mi(hx, hz, hxz) + mi(hy, hz, hyz) - hz)
        acc.add(i, min(joint_slack, info_slack), _payload(item))
    return acc.report()


# ---------------------------------------------------------------- divergence axioms

def check_axioms(spec: ComplexitySpec, sample: Iterable, name: str | None = None, tol: float = TOL) -> CheckReport:
    """Symmetry, nonnegativity and zero-iff-equivalent for ``spec``."""
    acc = _Accumulator(name or f"axioms[{spec}]", "proved", tol)
    for i, item in enumerate(sample):
        s = _as_summary(item)
        try:
            r, rs = evaluate(spec, s), evaluate(spec, s.swapped())
        except DegenerateEntropy:
            acc.skip()
            continue
        slack = min(
            -abs(r.ib - rs.ib),
            -abs(r.nib - rs.nib),
            r.ib,
            r.nib,
            1.0 - r.nib,
        )
        if (r.ib <= tol) != r.is_equivalent_pair:
            slack = min(slack, -1.0)
        acc.add(i, slack, _payload(item))
    return acc.report()


# ---------------------------------------------------------------- comparability

def check_p3bis(
    spec: ComplexitySpec,
    sample: Iterable,
    k1: float,
    k2: float = 1.0,
    name: str | None = None,
    status: str = "proved",
    tol: float = TOL,
) -> CheckReport:
    """``k1 D_I <= IB <= k2 D_I`` on every pair of ``sample``.

    ``sample`` holds InfoSummary or JointDistribution items, already
    restricted to the domain where the constants apply.
    """
    acc = _Accumulator(name or f"p3bis[{spec}]", status, tol)
    for i, item in enumerate(sample):
        s = _as_summary(item)
        try:
            ib = evaluate(spec, s).ib
        except DegenerateEntropy:
            acc.skip()
            continue
        d_i = max(s.h_x_given_y, s.h_y_given_x)
        acc.add(i, min(ib - k1 * d_i, k2 * d_i - ib), _payload(item))
    return acc.report()


def min_ratio_to_information_distance(spec: ComplexitySpec, sample: Iterable) -> float | None:
    """Smallest observed ``IB / D_I`` over pairs with ``D_I > 1e-12``."""
    best = None
    for item in sample:
        s = _as_summary(item)
        d_i = max(s.h_x_given_y, s.h_y_given_x)
        if d_i <= 1e-12:
            continue
        r = evaluate(spec, s).ib / d_i
        best = r if best is None else min(best, r)
    return best


# ---------------------------------------------------------------- triangles

def triangle_slack(
    spec: ComplexitySpec,
    parts: tuple[InfoSummary, InfoSummary, InfoSummary, float],
    c: float = 1.0,
    normalized: bool = False,
) -> float:
    """Smallest ``c (d_b + d_c) - d_a`` over the three rotations of a triple."""
    s_xy, s_xz, s_yz = parts[:3]
    d_xy = divergence_value(spec, s_xy, normalized)
    d_xz = divergence_value(spec, s_xz, normalized)
    d_yz = divergence_value(spec, s_yz, normalized)
    return min(
        c * (d_xz + d_yz) - d_xy,
        c * (d_xy + d_yz) - d_xz,
        c * (d_xy + d_xz) - d_yz,
    )


def check_triangle(
    spec: ComplexitySpec,
    triple,
    c: float = 1.0,
    normalized: bool = False,
    trial: int = 0,
    name: str | None = None,
    status: str = "proved",
    tol: float = TOL,
) -> CheckReport:
    """Relaxed triangle inequality with multiplier ``c`` on one triple."""
    acc = _Accumulator(name or _triangle_name(spec, c, normalized), status, tol)
    _triangle_trial(acc, spec, triple, c, normalized, trial)
    return acc.report()


def _triangle_name(spec, c, normalized) -> str:
    return f"triangle[{'n' if normalized else ''}{spec},c={c!r}]"


def _triangle_trial(acc, spec, triple, c, normalized, trial):
    try:
        slack = triangle_slack(spec, _triple_parts(triple), c, normalized)
    except DegenerateEntropy:
        acc.skip()
        return
    acc.add(trial, slack, _payload(triple))


def check_triangles(
    spec: ComplexitySpec,
    triples: Iterable,
    c: float = 1.0,
    normalized: bool = False,
    name: str | None = None,
    status: str = "proved",
    tol: float = TOL,
    payloads: Sequence | None = None,
) -> CheckReport:
    """:func:`check_triangle` over many triples.

    Items are TripleDistribution objects or precomputed
    ``(s_xy, s_xz, s_yz, H(Z))`` tuples; ``payloads`` optionally supplies the
    tables to attach to witnesses.
    """
    acc = _Accumulator(name or _triangle_name(spec, c, normalized), status, tol)
    for i, triple in enumerate(triples):
        try:
            slack = triangle_slack(spec, _triple_parts(triple), c, normalized)
        except DegenerateEntropy:
            acc.skip()
            continue
        payload = _payload(payloads[i]) if payloads is not None else _payload(triple)
        acc.add(i, slack, payload)
    return acc.report()


def complexity_condition_slack(spec: ComplexitySpec, triple, c: float = 1.0) -> float:
    """``c C(X,Z) + c C(Y,Z) - H(Z) - (c-1)(I(X;Z) + I(Y;Z)) - C(X,Y)``.

    At ``c = 1`` this is the complexity-side sufficient condition for the
    triangle inequality; a negative value means the condition fails.
    """
    s_xy, s_xz, s_yz, hz = _triple_parts(triple)
    a = c * complexity(spec, s_xz) + c * complexity(spec, s_yz) - hz - (c - 1.0) * (s_xz.mi + s_yz.mi)
    return a - complexity(spec, s_xy)


def check_complexity_triangle_condition(spec: ComplexitySpec, triple, c: float = 1.0, tol: float = TOL) -> bool:
    """True when the complexity-side triangle condition holds on ``triple``."""
    return complexity_condition_slack(spec, triple, c) >= -tol


# ---------------------------------------------------------------- redundancy

def redundancy_slacks(
    spec: ComplexitySpec,
    triple,
    constants: RedundancyConstants,
) -> tuple[float, float, float]:
    """Slacks of the redundancy bounds on a triple ordered (Y, X1, X2).

    Returns the raw-bound slack, the normalized-bound slack and the slack of
    ``|I(Y;X1) - I(Y;X2)| <= D_I(X1, X2)``.

    Raises
    ------
    DomainViolation
        If a covariate entropy falls outside ``[gamma1, gamma2] * H(Y)``.
    """
    s_y1, s_y2, s_12, _ = _triple_parts(triple)
    hy, h1, h2 = s_y1.h_x, s_y1.h_y, s_y2.h_y
    lo, hi = constants.gamma1 * hy, constants.gamma2 * hy
    eps = 1e-12 * max(1.0, hy)
    if not (lo - eps <= h1 <= hi + eps and lo - eps <= h2 <= hi + eps):
        raise DomainViolation(
            f"covariate entropies ({h1:.6g}, {h2:.6g}) outside [{lo:.6g}, {hi:.6g}]"
        )
    r1, r2 = evaluate(spec, s_y1), evaluate(spec, s_y2)
    d_raw = max(s_12.h_x_given_y, s_12.h_y_given_x)
    d_norm = evaluate(simple("I"), s_12).nib
    raw = constants.raw_factor * d_raw - abs(r1.ib - r2.ib)
    norm = constants.normalized_factor * d_norm - abs(r1.nib - r2.nib)
    info = d_raw - abs(s_y1.mi - s_y2.mi)
    return raw, norm, info


def check_redundancy_bound(
    spec: ComplexitySpec,
    triple,
    constants: RedundancyConstants,
    trial: int = 0,
    name: str | None = None,
    tol: float = TOL,
) -> CheckReport:
    """Raw and normalized redundancy bounds on one (Y, X1, X2) triple."""
    acc = _Accumulator(name or f"redundancy[{spec}]", "proved", tol)
    raw, norm, _ = redundancy_slacks(spec, triple, constants)
    acc.add(trial, min(raw, norm), _payload(triple))
    return acc.report()


def check_redundancy_bounds(
    spec: ComplexitySpec,
    triples: Iterable,
    constants: RedundancyConstants,
    form: str = "both",
    name: str | None = None,
    tol: float = TOL,
    payloads: Sequence | None = None,
) -> CheckReport:
    """Redundancy bounds over many triples; ``form`` is ``raw``, ``normalized``,
    ``both`` or ``information``."""
    idx = {"raw": (0,), "normalized": (1,), "both": (0, 1), "information": (2,)}[form]
    acc = _Accumulator(name or f"redundancy[{spec},{form}]", "proved", tol)
    for i, triple in enumerate(triples):
        try:
            slacks = redundancy_slacks(spec, triple, constants)
        except DegenerateEntropy:
            acc.skip()
            continue
        payload = _payload(payloads[i]) if payloads is not None else _payload(triple)
        acc.add(i, min(slacks[k] for k in idx), payload)
    return acc.report()


# ---------------------------------------------------------------- orderings

CHAIN = ("D", "P", "R", "S")


def chain_values(s: InfoSummary, alpha: float) -> list[float]:
    """Complexities ``[D, P, R, S, I, E]`` at ``alpha``, expected nondecreasing."""
    vals = []
    for kind in CHAIN:
        if kind == "D" and s.h_min <= 1e-12 and alpha > 0.0:
            vals.append(0.0)  # the harmonic term tends to 0 with the smaller entropy
        else:
            vals.append(complexity(simple(kind, alpha), s))
    vals.append(complexity(simple("I"), s))
    vals.append(complexity(simple("E"), s))
    return vals


def check_ordering_chain(
    sample: Iterable,
    alphas: Sequence[float],
    name: str = "complexity_ordering",
    tol: float = 1e-12,
) -> CheckReport:
    """``C_D <= C_P <= C_R <= C_S <= C_I <= C_E`` at each alpha."""
    acc = _Accumulator(name, "proved", tol)
    t = 0
    for item in sample:
        s = _as_summary(item)
        for a in alphas:
            v = chain_values(s, a)
            acc.add(t, min(b - a_ for a_, b in zip(v, v[1:])), lambda s=s, a=a: {"summary": s.as_dict(), "alpha": a})
            t += 1
    return acc.report()


def check_alpha_monotonicity(
    sample: Iterable,
    alphas: Sequence[float],
    kinds: Sequence[str] = CHAIN,
    increasing: bool = True,
    name: str | None = None,
    status: str = "proved",
    tol: float = 1e-12,
) -> CheckReport:
    """Compare ``C(alpha)`` with ``C(alpha')`` for consecutive ``alpha < alpha'``.

    With ``increasing=True`` the check asserts ``C(alpha) <= C(alpha')``;
    otherwise ``C(alpha) >= C(alpha')``. Weight ``alpha`` sits on the smaller
    entropy, so the complexities actually decrease in ``alpha``.
    """
    grid = sorted(alphas)
    label = "increasing" if increasing else "decreasing"
    acc = _Accumulator(name or f"alpha_monotonicity[{label}]", status, tol)
    t = 0
    for item in sample:
        s = _as_summary(item)
        for kind in kinds:
            if kind == "D" and s.h_min <= 1e-12:
                continue
            vals = [complexity(simple(kind, a), s) for a in grid]
            diffs = [b - a for a, b in zip(vals, vals[1:])]
            slack = min(diffs) if increasing else min(-d for d in diffs)
            acc.add(t, slack, lambda s=s, kind=kind: {"summary": s.as_dict(), "kind": kind})
            t += 1
    return acc.report()


def check_bijection_invariance(sample: Iterable, seed: int = 0, name: str = "bijection_invariance", tol: float = 1e-12) -> CheckReport:
    """Relabeling categories leaves every summary field unchanged."""
    rng = np.random.default_rng(seed)
    acc = _Accumulator(name, "proved", tol)
    for i, item in enumerate(sample):
        joint = item if isinstance(item, JointDistribution) else JointDistribution.from_probs(item)
        p = joint.probs
        q = p[rng.permutation(p.shape[0])][:, rng.permutation(p.shape[1])]
        a, b = summarize(joint), summarize(JointDistribution.from_probs(q))
        acc.add(i, -max(abs(x - y) for x, y in zip(a.as_dict().values(), b.as_dict().values())), _payload(joint))
    return acc.report()
