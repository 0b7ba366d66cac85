import math

import numpy as np
import pytest

from divbound.errors import (
    DegenerateSystemError,
    DomainError,
    StepSizeError,
    ValidationError,
)
from divbound.fgen import kl_divergence
from divbound.thermo import (
    MarkovSystem,
    evolve,
    path_measures,
    random_system,
    stationary,
    step_rates,
    thermo_report,
    tku_bound,
)


def biased_ring(**kwargs):
    return MarkovSystem.ring(3, forward=2.0, backward=1.0, **kwargs)


def test_stationary_ring():
    res = stationary(biased_ring().rates)
    assert res == pytest.approx([1 / 3, 1 / 3, 1 / 3])


def test_ring_values():
    res = thermo_report(biased_ring())
    assert res.sigma == pytest.approx(math.log(2.0), abs=1e-6)
    assert res.activity == pytest.approx(3.0, abs=1e-6)
    assert res.sigma_ps == pytest.approx(2.0 / 3.0, abs=1e-6)
    assert abs(res.bound_slack) <= 1e-8


def test_heterogeneous_ring_is_strict():
    res = thermo_report(MarkovSystem.ring(3, forward=[5.0, 2.0, 3.0], backward=1.0))
    assert res.bound_slack > 0


def test_identity_gaps_shrink_with_dt():
    def gaps(dt):
        system = MarkovSystem.ring(
            3, forward=[5.0, 2.0, 3.0], backward=1.0, p0=[0.6, 0.3, 0.1], dt=dt
        )
        res = thermo_report(system)
        return res.kl_identity_gap, res.td_identity_gap

    coarse, fine = gaps(0.02), gaps(0.01)
    for before, after in zip(coarse, fine):
        assert after <= before / 3.0


def test_random_systems_respect_bound():
    rng = np.random.default_rng(5)
    for _ in range(20):
        res = thermo_report(random_system(rng, dt=1e-2))
        assert res.bound_slack >= -1e-8


def test_one_way_transitions():
    res = thermo_report(MarkovSystem.ring(3, forward=2.0, backward=0.0))
    assert res.sigma == math.inf
    assert res.kl_identity_gap == 0.0
    assert res.bound_slack == 0.0


def test_evolve_keeps_probability():
    system = biased_ring(p0=[1.0, 0.0, 0.0], dt=0.01)
    res = evolve(system)
    assert res.shape == (101, 3)
    assert np.allclose(res.sum(axis=1), 1.0)
    assert np.all(res >= 0)


def test_evolve_step_size():
    system = MarkovSystem.ring(
        3, forward=1000.0, backward=1000.0, p0=[1.0, 0.0, 0.0], dt=0.1
    )
    with pytest.raises(StepSizeError):
        evolve(system)


def test_path_measures_swap():
    system = biased_ring(p0=[0.5, 0.5, 0.0], dt=0.05)
    P, P_dagger, swap = path_measures(system)
    assert np.array_equal(swap[swap], np.arange(swap.size))
    assert P_dagger.mass.tolist() == P.mass[swap].tolist()
    assert kl_divergence(P, P_dagger) > 0


def test_evolve_two_states():
    system = MarkovSystem(
        rates=[[-1.0, 2.0], [1.0, -2.0]], p0=[1.0, 0.0], tau=1.0, dt=1e-3
    )
    res = evolve(system)
    assert res[-1][0] == pytest.approx(2 / 3 + math.exp(-3.0) / 3, abs=1e-8)


def test_path_measures_are_normalised_and_swap_symmetric():
    system = MarkovSystem.ring(
        3, forward=[5.0, 2.0, 3.0], backward=1.0, p0=[0.6, 0.3, 0.1], dt=0.01
    )
    P, P_dagger, _ = path_measures(system)
    assert P.mass.sum() == pytest.approx(1.0, abs=1e-10)
    assert P_dagger.mass.sum() == pytest.approx(1.0, abs=1e-10)
    assert kl_divergence(P, P_dagger) == pytest.approx(
        kl_divergence(P_dagger, P), rel=1e-12
    )


def test_empty_initial_state():
    system = biased_ring(p0=[1.0, 0.0, 0.0], dt=0.01)
    res = thermo_report(system)
    assert res.sigma == math.inf
    assert res.kl_identity_gap == 0.0
    assert res.bound_slack == math.inf

    rows = step_rates(system)
    assert rows[0]["sigma_rate"] == math.inf
    assert math.isfinite(rows[1]["sigma_rate"])


def test_step_rates_rows():
    res = step_rates(biased_ring(dt=0.1))
    assert len(res) == 11
    assert set(res[0]) == {"t", "sigma_rate", "activity_rate", "sigma_ps_rate"}
    assert res[0]["activity_rate"] == pytest.approx(3.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(rates=[[-1.0, 1.0], [1.0, 1.0]], p0=[0.5, 0.5]),
        dict(rates=[[-1.0, 1.0], [1.0, -1.0]], p0=[0.5, 0.5, 0.0]),
        dict(rates=[[-1.0, 1.0], [1.0, -1.0]], p0=[0.7, 0.7]),
        dict(rates=[[1.0, -1.0], [-1.0, 1.0]], p0=[0.5, 0.5]),
        dict(rates=[[-1.0, 1.0], [1.0, -1.0]], p0=[0.5, 0.5], tau=1.0, dt=0.3),
    ],
)
def test_system_rejects(kwargs):
    with pytest.raises(ValidationError):
        MarkovSystem(**kwargs)


def test_system_json():
    res = MarkovSystem.from_json(
        {
            "n_states": 2,
            "rates": [[-1.0, 2.0], [1.0, -2.0]],
            "p0": "stationary",
            "tau": 0.5,
        }
    )
    assert res.p0 == pytest.approx([2 / 3, 1 / 3])
    assert res.n_steps == 500
    assert res.to_json()["n_states"] == 2

    with pytest.raises(ValidationError):
        MarkovSystem.from_json({"n_states": 3, "rates": [[-1.0, 2.0], [1.0, -2.0]]})

    with pytest.raises(ValidationError):
        MarkovSystem.from_json({"rates": [[-1.0, 2.0], [1.0, -2.0]], "p0": "uniform"})


def test_degenerate_systems():
    with pytest.raises(DegenerateSystemError):
        thermo_report(biased_ring(tau=0.0))

    frozen = MarkovSystem.from_transition_rates(np.zeros((3, 3)), p0=[1.0, 0.0, 0.0])
    with pytest.raises(DegenerateSystemError):
        thermo_report(frozen)


@pytest.mark.parametrize("sigma_ps, activity", [(0.5, 0.0), (-0.1, 1.0), (3.0, 1.0)])
def test_tku_bound_domain(sigma_ps, activity):
    with pytest.raises(DomainError):
        tku_bound(sigma_ps, activity)
