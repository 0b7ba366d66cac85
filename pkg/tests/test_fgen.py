import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divbound.consts import GeneratorName
from divbound.errors import AlignmentError, DomainError, ValidationError
from divbound.fgen import (
    DiscreteDist,
    align,
    bhattacharyya,
    binary_entropy,
    binary_pair,
    catalog,
    chi_squared,
    f_divergence,
    get_generator,
    hellinger_squared,
    js_divergence,
    kl_divergence,
    moments,
    symmetrized_divergence,
    total_variation,
    triangular_discrimination,
)


@st.composite
def dist_pairs(draw, max_size=6):
    k = draw(st.integers(min_value=2, max_value=max_size))
    weights = st.lists(
        st.integers(min_value=0, max_value=1000), min_size=k, max_size=k
    ).filter(sum)
    p = np.array(draw(weights), dtype=float)
    q = np.array(draw(weights), dtype=float)
    support = np.arange(k, dtype=float)
    return DiscreteDist(support, p / p.sum()), DiscreteDist(support, q / q.sum())


def test_catalog_order():
    assert [gen.name for gen in catalog()] == ["td", "kl", "hellinger", "js", "chi2"]


def test_get_generator():
    assert get_generator("KL") is get_generator(GeneratorName.kl)

    with pytest.raises(ValidationError):
        get_generator("renyi")


def test_g_at_1():
    res = {gen.name: gen.g_at_1 for gen in catalog()}
    assert res == {
        "td": 1.0,
        "kl": math.inf,
        "hellinger": 1.0,
        "js": pytest.approx(math.log(2.0)),
        "chi2": math.inf,
    }


@pytest.mark.parametrize(
    "support, mass",
    [
        ([0, 1], [0.5, 0.4]),
        ([0, 1], [1.2, -0.2]),
        ([1, 0], [0.5, 0.5]),
        ([0, 0], [0.5, 0.5]),
        ([0, 1, 2], [0.5, 0.5]),
        ([], []),
        ([0, math.inf], [0.5, 0.5]),
    ],
)
def test_dist_rejects(support, mass):
    with pytest.raises(ValidationError):
        DiscreteDist(support=support, mass=mass)


def test_dist_from_json_sorts():
    res = DiscreteDist.from_json({"support": [2, 0, 1], "mass": [0.5, 0.2, 0.3]})
    assert res.support.tolist() == [0.0, 1.0, 2.0]
    assert res.mass.tolist() == [0.2, 0.3, 0.5]

    with pytest.raises(ValidationError):
        DiscreteDist.from_json({"support": [0, 1]})


def test_dist_is_readonly():
    P = DiscreteDist(support=[0, 1], mass=[0.5, 0.5])
    with pytest.raises(ValueError):
        P.mass[0] = 1.0


def test_kl_binary_pair():
    P, Q = binary_pair(0.6)
    res = symmetrized_divergence(get_generator("kl"), P, Q)
    assert res == pytest.approx(0.6 * math.log(4.0))


def test_binary_pair_domain():
    with pytest.raises(DomainError):
        binary_pair(1.5)


def test_disjoint_supports():
    P = DiscreteDist(support=[0, 1], mass=[1.0, 0.0])
    Q = DiscreteDist(support=[0, 1], mass=[0.0, 1.0])

    assert kl_divergence(P, Q) == math.inf
    assert chi_squared(P, Q) == math.inf
    assert triangular_discrimination(P, Q) == pytest.approx(1.0)
    assert hellinger_squared(P, Q) == pytest.approx(1.0)
    assert js_divergence(P, Q) == pytest.approx(math.log(2.0))
    assert total_variation(P, Q) == 1.0
    assert bhattacharyya(P, Q) == 0.0


def test_zero_over_zero_cells():
    P = DiscreteDist(support=[0, 1, 2], mass=[0.5, 0.5, 0.0])
    for gen in catalog():
        res = f_divergence(gen, P, P)
        assert res == pytest.approx(0.0, abs=1e-15)


def test_alignment():
    P = DiscreteDist(support=[0, 1], mass=[0.25, 0.75])
    Q = DiscreteDist(support=[0, 2], mass=[0.5, 0.5])

    with pytest.raises(AlignmentError):
        f_divergence(get_generator("td"), P, Q)

    P2, Q2 = align(P, Q)
    assert P2.support.tolist() == [0.0, 1.0, 2.0]
    assert P2.mass.tolist() == [0.25, 0.75, 0.0]
    assert Q2.mass.tolist() == [0.5, 0.0, 0.5]
    assert kl_divergence(P2, Q2) == math.inf


def test_moments():
    P = DiscreteDist(support=[-1, 1], mass=[0.5, 0.5])
    assert moments(P) == (0.0, 1.0)


def test_binary_named_values():
    t = 0.6
    P, Q = binary_pair(t)
    assert total_variation(P, Q) == pytest.approx(t)
    assert bhattacharyya(P, Q) == pytest.approx(math.sqrt(1 - t ** 2))
    assert triangular_discrimination(P, Q) == pytest.approx(t ** 2)


def test_binary_entropy():
    assert binary_entropy(0.0) == pytest.approx(math.log(2.0))
    assert binary_entropy(1.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(dist_pairs())
def test_divergences_symmetric_and_nonnegative(pair):
    P, Q = pair
    for gen in catalog():
        forward = symmetrized_divergence(gen, P, Q)
        assert forward >= -1e-12
        assert forward == pytest.approx(symmetrized_divergence(gen, Q, P))

    assert 0.0 <= triangular_discrimination(P, Q) <= 1.0 + 1e-12


@settings(max_examples=100, deadline=None)
@given(dist_pairs(), st.data())
def test_divergences_ignore_relabelling(pair, data):
    P, Q = pair
    order = np.array(data.draw(st.permutations(range(len(P)))))
    P_perm = DiscreteDist(P.support, P.mass[order])
    Q_perm = DiscreteDist(Q.support, Q.mass[order])
    for gen in catalog():
        expected = f_divergence(gen, P, Q)
        relabelled = f_divergence(gen, P_perm, Q_perm)
        assert relabelled == pytest.approx(expected, rel=1e-12, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(dist_pairs(), st.floats(min_value=-100.0, max_value=100.0))
def test_divergences_ignore_shift(pair, shift):
    P, Q = pair
    P_shift = DiscreteDist(P.support + shift, P.mass)
    Q_shift = DiscreteDist(Q.support + shift, Q.mass)
    for gen in catalog():
        expected = f_divergence(gen, P, Q)
        assert f_divergence(gen, P_shift, Q_shift) == pytest.approx(expected)


@settings(max_examples=100, deadline=None)
@given(dist_pairs())
def test_divergences_vanish_only_on_equal(pair):
    P, Q = pair
    for gen in catalog():
        assert f_divergence(gen, P, P) == pytest.approx(0.0, abs=1e-15)
        if np.max(np.abs(P.mass - Q.mass)) > 1e-3:
            assert f_divergence(gen, P, Q) > 0


@pytest.mark.parametrize("t", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_kl_of_binary_pair(t):
    expected = t * math.log((1 + t) / (1 - t))
    assert f_divergence(get_generator("kl"), *binary_pair(t)) == pytest.approx(
        expected, rel=1e-12
    )
