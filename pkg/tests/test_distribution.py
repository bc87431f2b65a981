import math

import numpy as np
import pytest
from hypothesis import given, settings

from infodiv import (
    InfoSummary,
    JointDistribution,
    TripleDistribution,
    entropy,
    entropy_of_triple,
    from_samples,
    is_equivalent,
    marginal_x,
    marginal_y,
    pairwise_marginals,
    summarize,
)
from infodiv.distribution import triple_entropies, triple_summaries
from infodiv.errors import DataFormatError, EmptySample, NegativeMass, NotNormalized
from infodiv.io import read_csv_text, read_joint_json, read_triple_json
from infodiv.properties.sampling import dirichlet_tables

from strategies import joint_tables, triple_tables

LN2 = math.log(2.0)

# 40-digit reference values, computed once with mpmath and frozen here
ENTROPY_040_035_025 = 1.0805276266041718717
MI_SYMMETRIC_TABLE = 0.19274475702175742988
COND_SYMMETRIC_TABLE = 0.50040242353818787953


def _kl_mi(p):
    px, py = p.sum(axis=1), p.sum(axis=0)
    return math.fsum(v * math.log(v / (px[i] * py[j])) for (i, j), v in np.ndenumerate(p) if v > 0)


def _direct_cond(p):
    # H(X|Y) straight from p(x|y)
    py = p.sum(axis=0)
    return -math.fsum(v * math.log(v / py[j]) for (i, j), v in np.ndenumerate(p) if v > 0)


# ---------------------------------------------------------------- entropy

def test_entropy_uniform_binary():
    assert entropy([0.5, 0.5]) == pytest.approx(LN2, abs=1e-15)


def test_entropy_point_mass_is_zero():
    assert entropy([1.0, 0.0]) == 0.0


def test_entropy_matches_high_precision_reference():
    assert entropy([0.4, 0.35, 0.25]) == pytest.approx(ENTROPY_040_035_025, abs=1e-15)


def test_entropy_rejects_negative_mass():
    with pytest.raises(NegativeMass):
        entropy([1.1, -0.1])


def test_entropy_tolerates_tiny_negative_roundoff():
    assert entropy([1.0 + 1e-13, -1e-13]) == 0.0


def test_entropy_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        entropy([0.5, 0.4])


def test_entropy_normalization_tolerance():
    entropy([0.5, 0.5 + 5e-10])
    with pytest.raises(NotNormalized):
        entropy([0.5, 0.5 + 5e-9])


@given(joint_tables)
def test_entropy_bounds(p):
    h = entropy(p)
    assert -1e-15 <= h <= math.log(p.size) + 1e-12


# ---------------------------------------------------------------- summarize

def test_summarize_diagonal():
    s = summarize(JointDistribution.from_probs([[0.5, 0], [0, 0.5]]))
    for v in (s.h_x, s.h_y, s.h_joint, s.mi):
        assert v == pytest.approx(LN2, abs=1e-15)
    assert s.h_x_given_y == 0.0 and s.h_y_given_x == 0.0


def test_summarize_independent_uniform():
    s = summarize(JointDistribution.from_probs(np.full((2, 2), 0.25)))
    assert s.mi == pytest.approx(0.0, abs=1e-15)
    assert s.h_joint == pytest.approx(2 * LN2, abs=1e-15)


def test_summarize_against_kl_form():
    p = np.array([[0.4, 0.1], [0.1, 0.4]])
    s = summarize(JointDistribution.from_probs(p))
    assert s.mi == pytest.approx(_kl_mi(p), abs=1e-12)
    assert s.mi == pytest.approx(MI_SYMMETRIC_TABLE, abs=1e-14)
    assert s.h_x_given_y == pytest.approx(COND_SYMMETRIC_TABLE, abs=1e-14)


@given(joint_tables)
def test_summary_identities(p):
    s = summarize(JointDistribution.from_probs(p))
    assert min(s.as_dict().values()) >= 0.0
    assert s.h_joint == pytest.approx(s.h_x + s.h_y_given_x, abs=1e-9)
    assert s.h_joint == pytest.approx(s.h_y + s.h_x_given_y, abs=1e-9)
    assert s.mi == pytest.approx(s.h_x + s.h_y - s.h_joint, abs=1e-9)
    assert s.mi <= min(s.h_x, s.h_y) + 1e-9
    assert s.mi == pytest.approx(_kl_mi(p), abs=1e-9)
    assert s.h_x_given_y == pytest.approx(_direct_cond(p), abs=1e-9)


@given(joint_tables)
def test_mutual_information_zero_iff_product(p):
    s = summarize(JointDistribution.from_probs(p))
    prod = np.outer(p.sum(axis=1), p.sum(axis=0))
    is_product = np.allclose(p, prod, atol=1e-9, rtol=0)
    if is_product:
        assert s.mi <= 1e-9
    else:
        assert s.mi > 0.0


@given(joint_tables)
def test_mutual_information_vanishes_on_products(p):
    prod = np.outer(p.sum(axis=1), p.sum(axis=0))
    assert summarize(JointDistribution.from_probs(prod / prod.sum())).mi <= 1e-9


@given(joint_tables)
def test_permutation_invariance(p):
    rng = np.random.default_rng(0)
    q = p[rng.permutation(p.shape[0])][:, rng.permutation(p.shape[1])]
    a, b = summarize(JointDistribution.from_probs(p)), summarize(JointDistribution.from_probs(q))
    for k, v in a.as_dict().items():
        assert getattr(b, k) == pytest.approx(v, abs=1e-12)


@given(joint_tables)
def test_transpose_swaps_roles(p):
    j = JointDistribution.from_probs(p)
    s, t = summarize(j), summarize(j.transpose())
    assert t.h_x == pytest.approx(s.h_y, abs=1e-12)
    assert t.h_x_given_y == pytest.approx(s.h_y_given_x, abs=1e-12)


def test_info_summary_rejects_inconsistent_fields():
    with pytest.raises(DataFormatError):
        InfoSummary(1.0, 1.0, 1.5, 0.5, 0.5, 0.7)


def test_from_entropies_clamps_cancellation():
    s = InfoSummary.from_entropies(0.3, 0.3, 0.3 - 1e-14)
    assert s.h_x_given_y == 0.0 and s.mi == 0.3


# ---------------------------------------------------------------- marginals

def test_marginals():
    j = JointDistribution.from_probs([[0.2, 0.3], [0.1, 0.4]])
    np.testing.assert_allclose(marginal_x(j), [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(marginal_y(j), [0.3, 0.7], atol=1e-15)
    np.testing.assert_array_equal(marginal_x(JointDistribution.from_probs([[1.0]])), [1.0])
    np.testing.assert_allclose(marginal_x(JointDistribution.from_probs([[0.4, 0.1], [0.1, 0.4]])), [0.5, 0.5])


def test_pairwise_marginals_independent_bits():
    xy, xz, yz = pairwise_marginals(TripleDistribution.from_probs(np.full((2, 2, 2), 0.125)))
    for m in (xy, xz, yz):
        np.testing.assert_allclose(m.probs, np.full((2, 2), 0.25))


def test_pairwise_marginals_copies():
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 1, 1] = 0.5
    for m in pairwise_marginals(TripleDistribution.from_probs(p)):
        np.testing.assert_allclose(m.probs, [[0.5, 0], [0, 0.5]])


@given(triple_tables)
def test_pairwise_marginals_match_axis_sums(p):
    xy, xz, yz = pairwise_marginals(TripleDistribution.from_probs(p))
    for got, axis in ((xy, 2), (xz, 1), (yz, 0)):
        ref = np.zeros(got.shape)
        for idx, v in np.ndenumerate(p):
            ref[tuple(i for k, i in enumerate(idx) if k != axis)] += v
        np.testing.assert_allclose(got.probs, ref, atol=1e-15)


# ---------------------------------------------------------------- triples

def test_triple_entropy_examples():
    assert entropy_of_triple(TripleDistribution.from_probs(np.full((2, 2, 2), 0.125))) == pytest.approx(3 * LN2)
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 1, 1] = 0.5
    assert entropy_of_triple(TripleDistribution.from_probs(p)) == pytest.approx(LN2)


@given(triple_tables)
def test_triple_entropy_is_flattened_entropy(p):
    t = TripleDistribution.from_probs(p)
    flat = -math.fsum(v * math.log(v) for v in p.ravel() if v > 0)
    assert entropy_of_triple(t) == pytest.approx(flat, abs=1e-13)
    assert triple_entropies(t)[6] == pytest.approx(flat, abs=1e-13)


@given(triple_tables)
def test_entropy_lemma(p):
    hx, hy, hz, hxy, hxz, hyz, _ = triple_entropies(TripleDistribution.from_probs(p))
    assert hxy <= hxz + hyz - hz + 1e-9
    assert hx + hy - hxy >= (hx + hz - hxz) + (hy + hz - hyz) - hz - 1e-9


@given(triple_tables)
def test_triple_summaries_match_marginals(p):
    t = TripleDistribution.from_probs(p)
    for a, m in zip(triple_summaries(t), pairwise_marginals(t)):
        b = summarize(m)
        for k, v in a.as_dict().items():
            assert getattr(b, k) == pytest.approx(v, abs=1e-12)


# ---------------------------------------------------------------- samples

def test_from_samples_point_mass():
    j = from_samples([("a", "b"), ("a", "b")])
    assert j.labels_x == ("a",) and j.labels_y == ("b",)
    np.testing.assert_array_equal(j.probs, [[1.0]])


def test_from_samples_uniform_and_order():
    j = from_samples([("a", "b"), ("a", "c"), ("d", "b"), ("d", "c")])
    assert j.labels_x == ("a", "d") and j.labels_y == ("b", "c")
    np.testing.assert_array_equal(j.probs, np.full((2, 2), 0.25))


def test_from_samples_empty():
    with pytest.raises(EmptySample):
        from_samples([])


def test_from_samples_rejects_empty_category():
    with pytest.raises(DataFormatError):
        from_samples([("a", "")])


def test_from_samples_recovers_truth():
    truth = np.array([[0.4, 0.1], [0.1, 0.4]])
    rng = np.random.default_rng(7)
    idx = rng.choice(4, size=10_000, p=truth.ravel())
    rows = [(f"x{i // 2}", f"y{i % 2}") for i in idx]
    j = from_samples(rows)
    est = np.zeros((2, 2))
    for (a, b), v in np.ndenumerate(j.probs):
        est[int(j.labels_x[a][1]), int(j.labels_y[b][1])] = v
    assert np.abs(est - truth).sum() < 0.05
    assert summarize(j) == summarize(from_samples(rows))


# ---------------------------------------------------------------- equivalence

def test_equivalence_examples():
    assert is_equivalent(summarize(JointDistribution.from_probs([[0.5, 0], [0, 0.5]])))
    assert not is_equivalent(summarize(JointDistribution.from_probs(np.full((2, 2), 0.25))))
    p = np.array([[0, 0.5], [0.5, 0]])
    assert _direct_cond(p) == 0.0 and _direct_cond(p.T) == 0.0
    assert is_equivalent(summarize(JointDistribution.from_probs(p)))


# ---------------------------------------------------------------- validation and io

def test_tables_are_read_only():
    j = JointDistribution.from_probs([[0.5, 0.5]])
    with pytest.raises(ValueError):
        j.probs[0, 0] = 1.0


def test_labels_must_match_shape():
    with pytest.raises(DataFormatError):
        JointDistribution(("a",), ("b", "c"), [[0.5], [0.5]])


def test_joint_json_round_trip(tmp_path):
    j = JointDistribution(("a", "b"), ("u", "v"), [[0.1, 0.2], [0.3, 0.4]])
    path = tmp_path / "j.json"
    import json

    path.write_text(json.dumps(j.to_dict()))
    assert read_joint_json(path) == j


def test_triple_json_round_trip(tmp_path):
    import json

    t = TripleDistribution.from_probs(dirichlet_tables(3, (2, 3, 2), 1)[0])
    path = tmp_path / "t.json"
    path.write_text(json.dumps(t.to_dict()))
    assert read_triple_json(path) == t


def test_json_errors_name_the_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "probs": [[0.5, 0.5]\n')
    with pytest.raises(DataFormatError, match="line"):
        read_joint_json(path)


@pytest.mark.parametrize("text, line", [
    ("a,b\n1,2\n3\n", 3),
    ("a,b\n1,2\n3,\n", 3),
    ("a,a\n1,2\n", 1),
    ("a,b\n1,2\n\n3,4\n", 3),
])
def test_csv_errors_name_the_line(text, line):
    with pytest.raises(DataFormatError, match=f"line {line}"):
        read_csv_text(text)


def test_csv_without_rows():
    with pytest.raises(EmptySample):
        read_csv_text("a,b\n")


# ---------------------------------------------------------------- kernels

def test_backends_agree(backend):
    from infodiv._kernels import get_backend

    ref = get_backend("python")
    pairs = dirichlet_tables(5, (3, 4), 50)
    triples = dirichlet_tables(6, (2, 3, 2), 50)
    np.testing.assert_allclose(backend.batch_pair_entropies(pairs), ref.batch_pair_entropies(pairs), atol=1e-13, rtol=0)
    np.testing.assert_allclose(backend.batch_triple_entropies(triples), ref.batch_triple_entropies(triples), atol=1e-13, rtol=0)
    for p in triples[:5]:
        np.testing.assert_allclose(backend.triple_entropies(p), ref.triple_entropies(p), atol=1e-13, rtol=0)
    assert backend.entropy_flat(np.array([0.5, 0.5, 0.0])) == pytest.approx(LN2, abs=1e-16)


@settings(max_examples=50)
@given(joint_tables)
def test_backend_pair_entropies_match_direct_sum(p):
    from infodiv._kernels import AVAILABLE, get_backend

    h = lambda q: -math.fsum(v * math.log(v) for v in np.ravel(q) if v > 0)
    ref = (h(p.sum(axis=1)), h(p.sum(axis=0)), h(p))
    for name in AVAILABLE:
        got = get_backend(name).pair_entropies(np.ascontiguousarray(p))
        np.testing.assert_allclose(got, ref, atol=1e-13, rtol=0)
