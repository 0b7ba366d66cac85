import math

import numpy as np
import pytest

from divbound.errors import DomainError, ValidationError
from divbound.fgen import DiscreteDist, binary_pair
from divbound.inequalities import (
    INEQUALITIES,
    bhattacharyya_relation,
    binary_sweep,
    hellinger_td_bound,
    js_linear_minorant_check,
    js_td_bound,
)
from divbound.sampling import random_pair


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_equality_on_binary_pairs(t):
    P, Q = binary_pair(t)
    for name, ineq in INEQUALITIES.items():
        res = ineq(P, Q)
        assert res.slack == pytest.approx(0.0, abs=1e-12), name


def test_hellinger_forms_agree():
    P, Q = binary_pair(0.3)
    res = hellinger_td_bound(P, Q)
    assert res.rhs == pytest.approx(res.alt_rhs, rel=1e-12)
    assert res.prior_rhs == pytest.approx(0.09 / 2)


def test_js_forms_agree():
    P, Q = binary_pair(0.7)
    res = js_td_bound(P, Q)
    assert res.rhs == pytest.approx(res.alt_rhs, rel=1e-12)


def test_bhattacharyya_strict():
    P = DiscreteDist(support=[0, 1, 2], mass=[0.5, 0.5, 0.0])
    Q = DiscreteDist(support=[0, 1, 2], mass=[0.0, 0.5, 0.5])
    res = bhattacharyya_relation(P, Q)
    assert res.rhs == pytest.approx(0.75)
    assert res.slack == pytest.approx(0.25)


def test_bhattacharyya_equality_cases():
    P = DiscreteDist(support=[0, 1], mass=[0.3, 0.7])
    assert bhattacharyya_relation(P, P).slack == pytest.approx(0.0, abs=1e-12)

    P = DiscreteDist(support=[0, 1], mass=[1.0, 0.0])
    Q = DiscreteDist(support=[0, 1], mass=[0.0, 1.0])
    assert bhattacharyya_relation(P, Q).slack == pytest.approx(0.0, abs=1e-12)


def test_random_pairs_improve_prior_bounds():
    rng = np.random.default_rng(3)
    for _ in range(300):
        P, Q = random_pair(rng)
        for res in (hellinger_td_bound(P, Q), js_td_bound(P, Q)):
            assert res.slack >= -1e-10
            assert res.improvement >= -1e-10
        assert bhattacharyya_relation(P, Q).slack >= -1e-10


def test_report_json():
    res = js_td_bound(*binary_pair(0.5)).to_json()
    assert set(res) == {
        "name",
        "lhs",
        "rhs",
        "slack",
        "prior_rhs",
        "improvement",
        "alt_rhs",
    }
    assert res["name"] == "js"


def test_js_linear_minorant():
    assert js_linear_minorant_check()

    with pytest.raises(DomainError):
        js_linear_minorant_check(grid_size=10)


def test_binary_sweep():
    res = binary_sweep("hellinger", points=11)
    assert len(res) == 11
    assert res[0] == dict(t=0.0, lhs=0.0, rhs=0.0, prior_rhs=0.0)
    assert res[-1]["t"] == 1.0
    assert res[-1]["rhs"] == pytest.approx(1.0)
    assert all(row["rhs"] >= row["prior_rhs"] for row in res)

    with pytest.raises(ValidationError):
        binary_sweep("renyi")
