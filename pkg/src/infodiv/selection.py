"""Divergence-driven covariate comparison, forward selection and redundancy.

Covariate sets are joined into a single categorical variable whose categories
are the observed tuples of values. All probabilities are plug-in estimates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .distribution import ZERO_TOL, InfoSummary
from .divergence import ComplexitySpec, DivergenceResult, evaluate, simple
from .errors import (
    DataFormatError,
    DegenerateEntropy,
    EmptySample,
    InvalidSpec,
    NotARefinement,
    UnknownColumn,
)
from .io import read_csv_table
from .properties.constants import redundancy_constants

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Dataset:
    """Rectangular table of categorical strings with unique column names."""

    columns: tuple
    rows: tuple
    _codes: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        cols = tuple(str(c) for c in self.columns)
        if not cols:
            raise DataFormatError("dataset needs at least one column")
        if len(set(cols)) != len(cols):
            raise DataFormatError("column names must be unique")
        rows = tuple(tuple(str(v) for v in r) for r in self.rows)
        if not rows:
            raise EmptySample("dataset needs at least one row")
        for i, r in enumerate(rows):
            if len(r) != len(cols):
                raise DataFormatError(f"row {i}: expected {len(cols)} values, got {len(r)}")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_csv(cls, source) -> "Dataset":
        header, rows = read_csv_table(source)
        return cls(header, rows)

    @classmethod
    def from_columns(cls, data: dict[str, Sequence]) -> "Dataset":
        names = list(data)
        lengths = {len(data[n]) for n in names}
        if len(lengths) > 1:
            raise DataFormatError("columns differ in length")
        return cls(names, list(zip(*(data[n] for n in names))))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def index(self, column: str) -> int:
        try:
            return self.columns.index(column)
        except ValueError:
            raise UnknownColumn(f"unknown column {column!r}") from None

    def column(self, column: str) -> tuple:
        j = self.index(column)
        return tuple(r[j] for r in self.rows)

    def categories(self, column: str) -> tuple:
        """Distinct values of ``column`` in order of first appearance."""
        return tuple(dict.fromkeys(self.column(column)))

    def codes(self, column: str) -> np.ndarray:
        """Integer codes of ``column`` (first-appearance order)."""
        if column not in self._codes:
            lookup: dict[str, int] = {}
            arr = np.fromiter((lookup.setdefault(v, len(lookup)) for v in self.column(column)), dtype=np.int64, count=self.n_rows)
            arr.setflags(write=False)
            self._codes[column] = arr
        return self._codes[column]


def _joined_codes(data: Dataset, columns: Sequence[str]) -> np.ndarray:
    if not columns:
        return np.zeros(data.n_rows, dtype=np.int64)
    if len(columns) == 1:
        return data.codes(columns[0])
    stacked = np.stack([data.codes(c) for c in columns], axis=1)
    _, inverse = np.unique(stacked, axis=0, return_inverse=True)
    return inverse.ravel().astype(np.int64)


def _entropy_of_codes(codes: np.ndarray) -> float:
    counts = np.bincount(codes)
    p = counts[counts > 0] / codes.size
    return max(float(_kernels.entropy_flat(np.ascontiguousarray(p, dtype=np.float64))), 0.0)


def pair_summary(data: Dataset, target: str, covariates: str | Sequence[str]) -> InfoSummary:
    """Plug-in summary of ``(target, covariates)``; the target is the first variable."""
    covs = [covariates] if isinstance(covariates, str) else list(covariates)
    for c in [target] + covs:
        data.index(c)
    y = data.codes(target)
    x = _joined_codes(data, covs)
    joint = y * (int(x.max()) + 1) + x
    return InfoSummary.from_entropies(_entropy_of_codes(y), _entropy_of_codes(x), _entropy_of_codes(joint))


def _score(result: DivergenceResult, normalized: bool) -> float:
    return result.nib if normalized else result.ib


@dataclass(frozen=True)
class ComparisonVerdict:
    """Which of two candidates predicts the target better, and why.

    ``case`` is 1 when the second candidate is strictly better, else 2.
    ``subcase`` classifies the signs of the complexity and information deltas
    (second minus first):

    case 1: (1) simpler and at least as informative; (2) equally complex and
    more informative; (3) simpler and less informative, complexity drop larger
    than information loss; (4) more complex and more informative, information
    gain larger than complexity increase.

    case 2: (1) at least as complex and at most as informative; (2) simpler
    and less informative, information loss at least the complexity drop;
    (3) more complex and more informative, complexity increase at least the
    information gain.
    """

    chosen: str
    case: int
    subcase: int
    delta_complexity: float
    delta_information: float
    relative_delta_complexity: float | None
    relative_delta_information: float | None
    divergence_x1: float
    divergence_x2: float
    normalized: bool
    metadata: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "chosen": self.chosen,
            "case": self.case,
            "subcase": self.subcase,
            "delta_complexity": self.delta_complexity,
            "delta_information": self.delta_information,
            "relative_delta_complexity": self.relative_delta_complexity,
            "relative_delta_information": self.relative_delta_information,
            "divergence_x1": self.divergence_x1,
            "divergence_x2": self.divergence_x2,
            "normalized": self.normalized,
            "metadata": dict(self.metadata),
        }


def _sign(x: float) -> int:
    return 0 if abs(x) <= TIE_TOL else (1 if x > 0 else -1)


def _subcase(case: int, dc: float, di: float) -> int:
    sc, si = _sign(dc), _sign(di)
    if case == 1:
        if sc < 0 and si >= 0:
            return 1
        if sc == 0:
            return 2
        return 3 if sc < 0 else 4
    if sc >= 0 and si <= 0:
        return 1
    return 2 if sc < 0 else 3


def _ratio_or_none(num: float, den: float) -> float | None:
    return None if abs(den) <= ZERO_TOL else num / den


def compare_candidates(
    spec: ComplexitySpec,
    data: Dataset,
    target: str,
    x1: str | Sequence[str],
    x2: str | Sequence[str],
    normalized: bool = False,
) -> ComparisonVerdict:
    """Compare two candidate covariates (or covariate sets) for ``target``.

    The candidate with the smaller divergence is chosen; differences within
    1e-12 are a tie, which keeps the first candidate.

    Raises
    ------
    UnknownColumn
        If a column is missing.
    """
    s1, s2 = pair_summary(data, target, x1), pair_summary(data, target, x2)
    r1, r2 = evaluate(spec, s1), evaluate(spec, s2)
    v1, v2 = _score(r1, normalized), _score(r2, normalized)
    diff = v2 - v1
    if abs(diff) <= TIE_TOL:
        chosen, case = "tie", 2
    elif diff < 0:
        chosen, case = "X2", 1
    else:
        chosen, case = "X1", 2
    dc = r2.complexity - r1.complexity
    di = r2.information - r1.information
    return ComparisonVerdict(
        chosen=chosen,
        case=case,
        subcase=_subcase(case, dc, di),
        delta_complexity=dc,
        delta_information=di,
        relative_delta_complexity=_ratio_or_none(dc, r1.complexity),
        relative_delta_information=_ratio_or_none(di, r1.information),
        divergence_x1=v1,
        divergence_x2=v2,
        normalized=normalized,
    )


def compare_quantizations(
    spec: ComplexitySpec,
    data: Dataset,
    target: str,
    coarse: str,
    fine: str,
    normalized: bool = False,
) -> ComparisonVerdict:
    """Compare a coarse quantization with a finer one of the same quantity.

    Raises
    ------
    NotARefinement
        If some category of ``fine`` co-occurs with two categories of ``coarse``.
    """
    c, f = data.codes(coarse), data.codes(fine)
    mapping: dict[int, int] = {}
    for fc, cc in zip(f.tolist(), c.tolist()):
        if mapping.setdefault(fc, cc) != cc:
            raise NotARefinement(f"{coarse!r} is not a function of {fine!r}")
    verdict = compare_candidates(spec, data, target, coarse, fine, normalized)
    meta = {
        "refinement": True,
        "coarse_categories": len(set(c.tolist())),
        "fine_categories": len(mapping),
    }
    return replace(verdict, metadata=meta)


@dataclass(frozen=True)
class SelectionStep:
    column: str
    divergence: float
    accepted: bool
    improvement: float

    def as_dict(self) -> dict:
        return {
            "column": self.column,
            "divergence": _json_float(self.divergence),
            "accepted": self.accepted,
            "improvement": _json_float(self.improvement),
        }


STOP_REASONS = ("max_features", "no_candidate_improves", "zero_divergence", "exhausted")


@dataclass(frozen=True)
class SelectionTrace:
    """Greedy selection history.

    ``baseline`` is the divergence to a constant covariate (nothing selected);
    ``steps`` lists each round's best candidate, the last one rejected when
    the search stopped for lack of improvement.
    """

    target: str
    selected: tuple
    steps: tuple
    baseline: float
    stopping_reason: str
    normalized: bool

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "selected": list(self.selected),
            "baseline": _json_float(self.baseline),
            "steps": [s.as_dict() for s in self.steps],
            "stopping_reason": self.stopping_reason,
            "normalized": self.normalized,
        }


def _json_float(x: float):
    return x if math.isfinite(x) else None


def _divergence_or_inf(spec, s, normalized) -> float:
    try:
        return _score(evaluate(spec, s), normalized)
    except DegenerateEntropy:
        return math.inf


def forward_select(
    spec: ComplexitySpec,
    data: Dataset,
    target: str,
    max_features: int | None = None,
    min_improvement: float = 1e-12,
    normalized: bool = False,
    candidates: Sequence[str] | None = None,
) -> SelectionTrace:
    """Greedy ascending selection of covariates for ``target``.

    Each round adds the candidate whose join with the already selected
    columns gives the smallest divergence, ties going to the leftmost column.
    The search stops when ``max_features`` columns are selected, when the best
    improvement falls below ``min_improvement``, when the divergence reaches
    zero, or when no candidates remain. Improvements are measured on the
    normalized divergence when ``normalized`` is set, in nats otherwise.
    """
    data.index(target)
    pool = [c for c in (candidates if candidates is not None else data.columns) if c != target]
    for c in pool:
        data.index(c)
    pool.sort(key=data.index)
    if max_features is not None and max_features < 0:
        raise InvalidSpec("max_features must be nonnegative")
    if min_improvement < 0:
        raise InvalidSpec("min_improvement must be nonnegative")

    selected: list[str] = []
    steps: list[SelectionStep] = []
    current = _divergence_or_inf(spec, pair_summary(data, target, []), normalized)
    if normalized and math.isinf(current):
        current = 1.0  # the normalized scale tops out at 1
    baseline = current
    reason = None
    if current <= ZERO_TOL:
        reason = "zero_divergence"
    while reason is None:
        if max_features is not None and len(selected) >= max_features:
            reason = "max_features"
            break
        remaining = [c for c in pool if c not in selected]
        if not remaining:
            reason = "exhausted"
            break
        best_col, best_val = None, math.inf
        for c in remaining:
            v = _divergence_or_inf(spec, pair_summary(data, target, selected + [c]), normalized)
            if best_col is None or v < best_val:
                best_col, best_val = c, v
        improvement = current - best_val if math.isfinite(best_val) else -math.inf
        if not improvement >= min_improvement:
            steps.append(SelectionStep(best_col, best_val, False, improvement))
            reason = "no_candidate_improves"
            break
        selected.append(best_col)
        steps.append(SelectionStep(best_col, best_val, True, improvement))
        current = best_val
        if current <= ZERO_TOL:
            reason = "zero_divergence"
    return SelectionTrace(target, tuple(selected), tuple(steps), baseline, reason, normalized)


@dataclass(frozen=True)
class RedundantPair:
    """Two covariates whose mutual normalized divergence is under the threshold.

    ``bound`` caps how far their normalized divergences to the target can
    differ; it is None when no constant applies.
    """

    col_a: str
    col_b: str
    divergence: float
    information_distance: float
    bound: float | None

    def as_dict(self) -> dict:
        return {
            "col_a": self.col_a,
            "col_b": self.col_b,
            "divergence": self.divergence,
            "bound": self.bound,
        }


def _bound_factor(spec: ComplexitySpec, h_y: float | None, h_a: float, h_b: float) -> float | None:
    if spec.kind == "I":
        return 1.0
    if spec.kind == "E":
        # the normalized entropy distance is a metric bounded by twice the information one
        return 2.0
    if spec.kind not in ("S", "R", "P", "D") or h_y is None or h_y <= ZERO_TOL:
        return None
    lo, hi = min(h_a, h_b), max(h_a, h_b)
    if lo <= ZERO_TOL:
        return None
    try:
        k = redundancy_constants(spec.kind, spec.alpha, lo / h_y, hi / h_y)
    except (InvalidSpec, ValueError):
        return None
    return k.normalized_factor


def detect_redundant(
    spec: ComplexitySpec,
    data: Dataset,
    threshold: float,
    target: str | None = None,
    columns: Iterable[str] | None = None,
) -> list[RedundantPair]:
    """Covariate pairs whose normalized divergence is at most ``threshold``.

    Pairs are scanned in column order. When ``target`` is given it is left out
    of the scan, and each reported pair carries a bound on how much the two
    columns' normalized divergences to the target can differ, computed from
    the observed entropy ratios.
    """
    if threshold < 0 or math.isnan(threshold):
        raise InvalidSpec("threshold must be nonnegative")
    cols = list(columns) if columns is not None else list(data.columns)
    for c in cols:
        data.index(c)
    if target is not None:
        data.index(target)
        cols = [c for c in cols if c != target]
    cols.sort(key=data.index)
    h_y = pair_summary(data, target, []).h_x if target is not None else None
    d_i_spec = simple("I")
    out = []
    for i, a in enumerate(cols):
        for b in cols[i + 1:]:
            s = pair_summary(data, a, b)
            try:
                score = evaluate(spec, s).nib
            except DegenerateEntropy:
                continue
            if score > threshold:
                continue
            d_i = evaluate(d_i_spec, s).nib
            factor = _bound_factor(spec, h_y, s.h_x, s.h_y)
            out.append(RedundantPair(a, b, score, d_i, None if factor is None else factor * d_i))
    return out
