import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infodiv.divergence import complexity, evaluate, parse_spec, simple
from infodiv.errors import DataFormatError, EmptySample, NotARefinement, UnknownColumn
from infodiv.selection import (
    Dataset,
    compare_candidates,
    compare_quantizations,
    detect_redundant,
    forward_select,
    pair_summary,
)

from datasets import (
    duplicate_dataset,
    equal_information_dataset,
    independent_uniform_dataset,
    informative_refinement_dataset,
    equal_information_ladder,
    recoded_dataset,
    useless_refinement_dataset,
    xor_dataset,
)

LN2 = math.log(2.0)


@st.composite
def datasets(draw):
    n_cols = draw(st.integers(2, 4))
    n_rows = draw(st.integers(1, 12))
    cols = [draw(st.lists(st.sampled_from("abc"), min_size=n_rows, max_size=n_rows)) for _ in range(n_cols)]
    return Dataset.from_columns({f"c{i}": col for i, col in enumerate(cols)})


# ---------------------------------------------------------------- dataset

def test_dataset_validation():
    with pytest.raises(DataFormatError):
        Dataset(("a", "a"), [("1", "2")])
    with pytest.raises(DataFormatError):
        Dataset(("a", "b"), [("1",)])
    with pytest.raises(EmptySample):
        Dataset(("a",), [])
    with pytest.raises(UnknownColumn):
        xor_dataset().column("Z")


def test_pair_summary_of_xor():
    d = xor_dataset()
    s = pair_summary(d, "Y", "X1")
    assert s.mi == pytest.approx(0.0, abs=1e-15)
    assert s.h_x == pytest.approx(LN2)
    joint = pair_summary(d, "Y", ["X1", "X2"])
    assert joint.h_x_given_y == pytest.approx(0.0, abs=1e-15)  # Y is determined by the pair
    assert joint.h_y_given_x == pytest.approx(LN2)  # the pair is not determined by Y


# ---------------------------------------------------------------- comparisons

def test_same_column_is_a_tie():
    v = compare_candidates(simple("S", 0.5), xor_dataset(), "Y", "X1", "X1")
    assert v.chosen == "tie" and v.delta_complexity == 0.0 and v.delta_information == 0.0


def test_copy_of_target_beats_independent_column():
    v = compare_candidates(simple("I"), duplicate_dataset(), "Y", "N", "Ycopy")
    assert v.chosen == "X2" and v.case == 1
    assert v.divergence_x2 == pytest.approx(0.0, abs=1e-15)
    s = pair_summary(duplicate_dataset(), "Y", "N")
    assert v.divergence_x1 == pytest.approx(max(s.h_x_given_y, s.h_y_given_x))


def test_equal_information_prefers_simpler_covariate():
    d = equal_information_dataset()
    s1, s2 = pair_summary(d, "Y", "X1"), pair_summary(d, "Y", "X2")
    assert s1.mi == pytest.approx(s2.mi, abs=1e-15) and s1.h_y < s2.h_y
    v = compare_candidates(simple("S", 0.5), d, "Y", "X1", "X2")
    assert v.chosen == "X1" and (v.case, v.subcase) == (2, 1)
    assert v.delta_complexity == pytest.approx(0.5 * LN2)


def test_equal_complexity_prefers_more_information():
    # under spec I with all entropies equal, the covariate closer to Y wins
    y = list("abcdabcd")
    d = Dataset.from_columns({"Y": y, "X1": y, "X2": list("abcdbadc")})
    v = compare_candidates(simple("I"), d, "Y", "X2", "X1")
    assert v.delta_complexity == pytest.approx(0.0, abs=1e-12)
    assert v.chosen == "X2" and (v.case, v.subcase) == (1, 2)


@pytest.mark.parametrize("dc, di, case, sub", [
    (-0.2, 0.1, 1, 1), (0.0, 0.1, 1, 2), (-0.3, -0.1, 1, 3), (0.1, 0.3, 1, 4),
    (0.2, -0.1, 2, 1), (-0.1, -0.3, 2, 2), (0.3, 0.1, 2, 3),
])
def test_subcase_taxonomy(dc, di, case, sub):
    from infodiv.selection import _subcase

    assert _subcase(case, dc, di) == sub


@settings(max_examples=60)
@given(d=datasets(), normalized=st.booleans(), text=st.sampled_from(["E", "I", "S:0.3", "R:0.7"]))
def test_verdict_consistent_with_divergences(d, normalized, text):
    spec = parse_spec(text)
    v = compare_candidates(spec, d, "c0", "c1", d.columns[-1], normalized=normalized)
    diff = v.divergence_x2 - v.divergence_x1
    expected = "tie" if abs(diff) <= 1e-12 else ("X2" if diff < 0 else "X1")
    assert v.chosen == expected
    assert v.case == (1 if expected == "X2" else 2)
    # the divergence difference is the complexity change minus the information change
    if not normalized:
        assert diff == pytest.approx(v.delta_complexity - v.delta_information, abs=1e-12)


def test_compare_unknown_column():
    with pytest.raises(UnknownColumn):
        compare_candidates(simple("I"), xor_dataset(), "Y", "X1", "nope")


# ---------------------------------------------------------------- quantizations

def test_identical_quantizations_tie():
    d = useless_refinement_dataset()
    v = compare_quantizations(simple("S", 0.5), d, "Y", "Fine", "Fine")
    assert v.chosen == "tie" and v.metadata["refinement"]


@pytest.mark.parametrize("text", ["E", "I", "S:0.3", "R:0.5", "P:0.5", "D:0.5"])
def test_useless_refinement_loses(text):
    d = useless_refinement_dataset()
    s1, s2 = pair_summary(d, "Y", "Coarse"), pair_summary(d, "Y", "Fine")
    assert s1.mi == pytest.approx(s2.mi, abs=1e-12) and s1.h_y < s2.h_y
    v = compare_quantizations(parse_spec(text), d, "Y", "Coarse", "Fine")
    assert v.chosen == "X1"
    assert v.metadata == {"refinement": True, "coarse_categories": 2, "fine_categories": 4}


def test_informative_refinement_depends_on_spec():
    d = informative_refinement_dataset()
    s1, s2 = pair_summary(d, "Y", "Coarse"), pair_summary(d, "Y", "Fine")
    assert s2.mi == pytest.approx(s2.h_x) and s1.mi < s1.h_x
    assert compare_quantizations(simple("I"), d, "Y", "Coarse", "Fine").chosen == "X1"
    assert compare_quantizations(simple("S", 0.9), d, "Y", "Coarse", "Fine").chosen == "X2"


def test_not_a_refinement():
    with pytest.raises(NotARefinement):
        compare_quantizations(simple("I"), useless_refinement_dataset(), "Y", "Fine", "Coarse")


# ---------------------------------------------------------------- equal information ordering

@pytest.mark.parametrize("kind", ["S", "R", "P", "D"])
@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.5, 0.9])
def test_complexity_follows_covariate_entropy_at_equal_information(kind, alpha):
    ladder = [pair_summary(d, "Y", "X") for d in equal_information_ladder()]
    spec = simple(kind, alpha)
    for a in ladder:
        for b in ladder:
            assert a.mi == pytest.approx(b.mi, abs=1e-12)
            assert (complexity(spec, a) <= complexity(spec, b) + 1e-12) == (a.h_y <= b.h_y + 1e-12)


@pytest.mark.parametrize("text", ["E", "I"])
def test_forward_direction_for_joint_and_max(text):
    ladder = [pair_summary(d, "Y", "X") for d in equal_information_ladder()]
    spec = parse_spec(text)
    for a, b in zip(ladder, ladder[1:]):
        assert a.h_y < b.h_y
        assert complexity(spec, a) <= complexity(spec, b)


# ---------------------------------------------------------------- forward selection

def test_duplicate_target_selected_first():
    t = forward_select(simple("I"), duplicate_dataset(), "Y")
    assert t.selected == ("Ycopy",)
    assert t.steps[0].divergence == pytest.approx(0.0, abs=1e-15)
    assert t.stopping_reason == "zero_divergence"


def test_independent_covariates_stop_at_first_step():
    d = Dataset.from_columns({"Y": list("aabb"), "A": list("abab"), "B": list("cddc")})
    t = forward_select(simple("I"), d, "Y", min_improvement=1e-9)
    assert t.selected == () and t.stopping_reason == "no_candidate_improves"
    assert len(t.steps) == 1 and not t.steps[0].accepted


def test_xor_greedy_stop():
    d = xor_dataset()
    t = forward_select(simple("I"), d, "Y")
    assert t.baseline == pytest.approx(LN2)
    assert t.selected == () and t.stopping_reason == "no_candidate_improves"
    assert t.steps[0].column == "X1" and t.steps[0].improvement == pytest.approx(0.0, abs=1e-15)
    # the pair determines Y, yet the information distance to the pair stays at ln 2
    # because the pair carries one bit that Y does not
    joint = pair_summary(d, "Y", ["X1", "X2"])
    assert joint.h_x_given_y == pytest.approx(0.0, abs=1e-15)
    assert evaluate(simple("I"), joint).ib == pytest.approx(LN2)


def test_max_features():
    d = duplicate_dataset()
    t = forward_select(simple("E"), d, "Y", max_features=0)
    assert t.selected == () and t.stopping_reason == "max_features"


def test_exhausted_pool():
    d = Dataset.from_columns({"Y": list("aabbcc"), "A": list("aabbcd"), "B": list("abcabc")})
    t = forward_select(simple("S", 0.3), d, "Y", min_improvement=0.0, candidates=["A"])
    assert t.selected == ("A",) and t.stopping_reason == "exhausted"


def test_ties_go_to_leftmost_column():
    y = list("aabb")
    d = Dataset.from_columns({"Y": y, "B": y, "A": y})
    assert forward_select(simple("I"), d, "Y").selected == ("B",)


def test_unknown_target():
    with pytest.raises(UnknownColumn):
        forward_select(simple("I"), xor_dataset(), "Z")


@settings(max_examples=60)
@given(d=datasets(), text=st.sampled_from(["E", "I", "S:0.3", "R:0.7", "D:0.5"]), normalized=st.booleans())
def test_selection_divergence_non_increasing(d, text, normalized):
    t = forward_select(parse_spec(text), d, "c0", normalized=normalized)
    assert t.stopping_reason in ("max_features", "no_candidate_improves", "zero_divergence", "exhausted")
    vals = [t.baseline] + [s.divergence for s in t.steps if s.accepted]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    assert t == forward_select(parse_spec(text), d, "c0", normalized=normalized)


def test_trace_serialization():
    t = forward_select(simple("I"), xor_dataset(), "Y")
    out = t.as_dict()
    assert out["steps"][0] == {"column": "X1", "divergence": pytest.approx(LN2), "accepted": False, "improvement": 0.0}


# ---------------------------------------------------------------- redundancy

def test_duplicate_columns_reported():
    pairs = detect_redundant(simple("I"), duplicate_dataset(), 0.0)
    assert [(p.col_a, p.col_b) for p in pairs] == [("Y", "Ycopy")]
    assert pairs[0].divergence == 0.0


@pytest.mark.parametrize("text", ["E", "I", "S:0.5", "R:0.3", "D:0.5"])
def test_recoded_column_is_redundant(text):
    pairs = detect_redundant(parse_spec(text), recoded_dataset(), 1e-12, target="Y")
    assert [(p.col_a, p.col_b) for p in pairs] == [("A", "B")]
    assert pairs[0].divergence == pytest.approx(0.0, abs=1e-15)
    assert pairs[0].bound == pytest.approx(0.0, abs=1e-15)


def test_independent_columns_not_reported():
    d = independent_uniform_dataset()
    s = pair_summary(d, "U", "V")
    assert evaluate(simple("I"), s).nib == pytest.approx(1.0)
    assert detect_redundant(simple("I"), d, 0.99) == []
    assert len(detect_redundant(simple("I"), d, 1.0)) == 1


def test_redundancy_bound_caps_target_divergence_gap():
    rng = np.random.default_rng(3)
    n = 400
    y = rng.integers(0, 3, n)
    a = (y + (rng.random(n) < 0.2)) % 3
    b = np.where(rng.random(n) < 0.1, (a + 1) % 3, a)
    d = Dataset.from_columns({"Y": y.astype(str), "A": a.astype(str), "B": b.astype(str)})
    for text in ("I", "E", "S:0.3", "R:0.5", "P:0.5", "D:0.5"):
        spec = parse_spec(text)
        pairs = detect_redundant(spec, d, 1.0, target="Y")
        assert len(pairs) == 1 and pairs[0].bound is not None
        gap = abs(evaluate(spec, pair_summary(d, "Y", "A")).nib - evaluate(spec, pair_summary(d, "Y", "B")).nib)
        assert gap <= pairs[0].bound + 1e-9


def test_redundancy_invariant_under_relabeling():
    d = recoded_dataset()
    relabeled = Dataset.from_columns({c: [v + "'" for v in d.column(c)] if c == "C" else list(d.column(c)) for c in d.columns})
    for text in ("I", "S:0.4"):
        a = detect_redundant(parse_spec(text), d, 0.9)
        b = detect_redundant(parse_spec(text), relabeled, 0.9)
        assert a == b


def test_redundancy_rejects_negative_threshold():
    from infodiv.errors import InvalidSpec

    with pytest.raises(InvalidSpec):
        detect_redundant(simple("I"), xor_dataset(), -0.1)
