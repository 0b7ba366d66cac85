import math

import numpy as np
import pytest

from divbound.binary import BinaryDivergence, make_binary
from divbound.bounds import (
    MomentSpec,
    lemma3_pair,
    theorem1_bound,
    theorem2_bound,
    theorem2_s,
    tv_bound,
)
from divbound.errors import DomainError, PreconditionError, ValidationError
from divbound.fgen import (
    catalog,
    get_generator,
    moments,
    symmetrized_divergence,
    triangular_discrimination,
)
from divbound.sampling import random_pair


def hellinger():
    return make_binary(get_generator("hellinger"))


def test_theorem1_hellinger():
    res = theorem1_bound(hellinger(), 0.36)
    assert res.bound_value == pytest.approx(0.2)
    assert res.argument == pytest.approx(0.6)
    assert res.tight
    assert res.kind == "theorem1"

    P, Q = res.attained_pair
    assert triangular_discrimination(P, Q) == pytest.approx(0.36, abs=1e-12)


def test_theorem1_tight_for_catalog():
    for gen in catalog():
        bd = make_binary(gen)
        for d in (0.01, 0.1, 0.25, 0.5, 0.81):
            res = theorem1_bound(bd, d)
            P, Q = res.attained_pair
            value = symmetrized_divergence(gen, P, Q)
            assert value == pytest.approx(res.bound_value, rel=1e-10)


def test_theorem1_nondecreasing_in_d():
    grid = np.linspace(0.0, 1.0, 101)
    for gen in catalog():
        bd = make_binary(gen)
        if not bd.certificate.satisfied:
            continue
        values = [theorem1_bound(bd, d).bound_value for d in grid]
        assert all(a <= b for a, b in zip(values, values[1:])), gen.name


def test_theorem1_edges():
    res = theorem1_bound(hellinger(), 0.0)
    assert res.bound_value == 0.0
    P, Q = res.attained_pair
    assert P.mass.tolist() == Q.mass.tolist()

    assert theorem1_bound(make_binary(get_generator("kl")), 1.0).bound_value == math.inf


@pytest.mark.parametrize("d", [-0.1, 1.5])
def test_theorem1_domain(d):
    with pytest.raises(DomainError):
        theorem1_bound(hellinger(), d)


def test_theorem1_precondition():
    bd = BinaryDivergence.from_functions(
        g=np.sqrt,
        g1=lambda t: 0.5 / np.sqrt(t),
        g2=lambda t: -0.25 * np.asarray(t, dtype=float) ** -1.5,
        g_at_1=1.0,
    )
    with pytest.raises(PreconditionError) as exc:
        theorem1_bound(bd, 0.25)
    assert not exc.value.certificate.satisfied


def test_tv_bound():
    res = tv_bound(make_binary(get_generator("kl")), 0.6)
    assert res.bound_value == pytest.approx(0.6 * math.log(4.0))
    assert res.remark_based
    assert res.to_json()["kind"] == "tv"


def test_theorem2_s():
    spec = MomentSpec(m_P=1.0, sigma_P=1.0, m_Q=0.0, sigma_Q=2.0)
    assert theorem2_s(spec) ** 2 == pytest.approx(1.0 / 11.0)
    assert theorem2_s(spec.shifted(123.25)) == theorem2_s(spec)
    assert theorem2_s(MomentSpec(m_P=3.0, sigma_P=0.0, m_Q=3.0, sigma_Q=0.0)) == 0.0
    assert theorem2_s(MomentSpec(m_P=1.0, sigma_P=0.0, m_Q=0.0, sigma_Q=0.0)) == 1.0


def test_theorem2_tightness():
    spec = MomentSpec(m_P=1.0, sigma_P=1.0, m_Q=-1.0, sigma_Q=1.0)
    res = theorem2_bound(hellinger(), spec)
    assert res.tight
    assert res.argument == pytest.approx(1.0 / math.sqrt(2.0))

    P, Q = res.attained_pair
    assert symmetrized_divergence(get_generator("hellinger"), P, Q) == pytest.approx(
        res.bound_value
    )

    spec = MomentSpec(m_P=1.0, sigma_P=1.0, m_Q=0.0, sigma_Q=2.0)
    res = theorem2_bound(hellinger(), spec)
    assert not res.tight
    assert res.attained_pair is None
    assert res.to_json()["attained_pair"] is None


@pytest.mark.parametrize(
    "m_p, m_q, sigma", [(1.0, -0.5, 0.7), (-2.0, 1.0, 1.5), (0.5, 0.5, 1.0)]
)
def test_lemma3_pair_moments(m_p, m_q, sigma):
    P, Q = lemma3_pair(MomentSpec(m_P=m_p, sigma_P=sigma, m_Q=m_q, sigma_Q=sigma))
    assert moments(P) == pytest.approx((m_p, sigma ** 2), abs=1e-10)
    assert moments(Q) == pytest.approx((m_q, sigma ** 2), abs=1e-10)
    assert P.support.tolist() == Q.support.tolist()


def test_lemma3_pair_degenerate():
    P, Q = lemma3_pair(MomentSpec(m_P=2.0, sigma_P=0.0, m_Q=2.0, sigma_Q=0.0))
    assert P.support.tolist() == [2.0]
    assert Q.mass.tolist() == [1.0]


def test_lemma3_pair_unequal():
    with pytest.raises(PreconditionError):
        lemma3_pair(MomentSpec(m_P=0.0, sigma_P=1.0, m_Q=0.0, sigma_Q=2.0))


@pytest.mark.parametrize("sigma", [-1.0, math.nan, math.inf])
def test_moment_spec_rejects(sigma):
    with pytest.raises(ValidationError):
        MomentSpec(m_P=0.0, sigma_P=sigma, m_Q=0.0, sigma_Q=1.0)


def test_moment_spec_from_dists():
    P, Q = lemma3_pair(MomentSpec(m_P=1.0, sigma_P=2.0, m_Q=0.0, sigma_Q=2.0))
    res = MomentSpec.from_dists(P, Q)
    assert res.a == pytest.approx(1.0)
    assert res.sigma_P == pytest.approx(2.0)
    assert res.sigma_Q == pytest.approx(2.0)


def test_bounds_hold_on_random_pairs():
    rng = np.random.default_rng(11)
    bds = [(gen, make_binary(gen)) for gen in catalog()]

    for _ in range(200):
        P, Q = random_pair(rng)
        t1 = math.sqrt(min(1.0, triangular_discrimination(P, Q)))
        s = theorem2_s(MomentSpec.from_dists(P, Q))
        for gen, bd in bds:
            value = symmetrized_divergence(gen, P, Q)
            assert value >= bd(t1) - 1e-10 * max(1.0, bd(t1))
            assert value >= bd(s) - 1e-10 * max(1.0, bd(s))
