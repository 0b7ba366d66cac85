import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divbound.binary import (
    BinaryDivergence,
    check_condition,
    concavity_check_G_squared,
    derivative_lower_bound,
    binary_derivative,
    inverse_G,
    make_binary,
)
from divbound.errors import DomainError, EvaluationError, PreconditionError
from divbound.fgen import FGenerator, catalog, get_generator

GRID = np.linspace(0.05, 0.95, 19)


def sqrt_g() -> BinaryDivergence:
    return BinaryDivergence.from_functions(
        g=np.sqrt,
        g1=lambda t: 0.5 / np.sqrt(t),
        g2=lambda t: -0.25 * np.asarray(t, dtype=float) ** -1.5,
        g_at_1=1.0,
        name="sqrt",
    )


def test_closed_forms():
    t = 0.5
    assert make_binary(get_generator("td"))(t) == pytest.approx(0.25)
    assert make_binary(get_generator("kl"))(t) == pytest.approx(0.5 * math.log(3.0))
    assert make_binary(get_generator("chi2"))(t) == pytest.approx(4.0 / 3.0)
    assert make_binary(get_generator("hellinger"))(t) == pytest.approx(
        1.0 - math.sqrt(0.75)
    )


def test_edges():
    for gen in catalog():
        bd = make_binary(gen)
        assert bd(0.0) == pytest.approx(0.0, abs=1e-15)
        assert bd(1.0) == gen.g_at_1


def test_analytic_derivatives_match_generic():
    for gen in catalog():
        bd = make_binary(gen)
        expected = binary_derivative(gen, GRID)
        assert np.allclose(bd.g1(GRID), expected, rtol=1e-8, atol=1e-10)


def test_generic_second_derivative():
    kl = get_generator("kl")
    bare = FGenerator(
        name="custom",
        f=kl.f,
        f1=kl.f1,
        f2=kl.f2,
        f_at_0=kl.f_at_0,
        slope_at_inf=kl.slope_at_inf,
    )
    res = make_binary(bare)
    assert not res.exact_derivatives
    assert np.allclose(res.g2(GRID), make_binary(kl).g2(GRID), rtol=1e-10)


def test_derivative_lower_bound():
    for gen in catalog():
        lower = derivative_lower_bound(gen, GRID)
        assert np.all(lower > 0)
        assert np.all(lower < make_binary(gen).g1(GRID))


def test_certificates():
    for gen in catalog():
        res = check_condition(make_binary(gen))
        assert res.satisfied
        assert res.ratio_monotone
        assert res.min_margin >= -1e-9
        assert len(res.grid) == 1000


def test_certificate_negative_control():
    res = check_condition(sqrt_g())
    assert not res.satisfied
    assert res.min_margin < 0
    assert 0.0 < res.witness < 1.0
    assert "grid" not in res.to_json()
    assert len(res.to_json(include_grid=True)["grid"]) == 1000


def test_certificate_is_cached():
    bd = make_binary(get_generator("js"))
    assert bd.certificate is bd.certificate


def test_certificate_grid_size():
    with pytest.raises(DomainError):
        check_condition(make_binary(get_generator("td")), grid_size=50)


def test_certificate_names_bad_node():
    bd = BinaryDivergence.from_functions(
        g=lambda t: np.asarray(t) ** 2,
        g1=lambda t: 2.0 * np.asarray(t),
        g2=lambda t: np.where(np.asarray(t) > 0.5, np.nan, 2.0),
        g_at_1=1.0,
    )
    with pytest.raises(EvaluationError) as exc:
        check_condition(bd)
    assert exc.value.t > 0.5


def test_finite_difference_second_derivative():
    bd = BinaryDivergence.from_functions(
        g=lambda t: np.asarray(t) ** 2, g1=lambda t: 2.0 * np.asarray(t), g_at_1=1.0
    )
    assert not bd.exact_derivatives
    assert np.allclose(bd.g2(GRID), 2.0)
    assert check_condition(bd).satisfied


def test_inverse_simple():
    bd = make_binary(get_generator("td"))
    assert inverse_G(bd, 0.0) == 0.0
    assert inverse_G(bd, 0.25) == pytest.approx(0.5, abs=1e-12)
    assert inverse_G(bd, 1.0) == 1.0
    assert inverse_G(bd, 7.0) == 1.0


@pytest.mark.parametrize("T", [-0.1, math.nan])
def test_inverse_domain(T):
    with pytest.raises(DomainError):
        inverse_G(make_binary(get_generator("td")), T)


def test_inverse_round_trip():
    for gen in catalog():
        bd = make_binary(gen)
        for T in np.linspace(0.0, bd(0.99), 25):
            assert abs(bd(inverse_G(bd, T)) - T) <= 1e-10


def test_inverse_unbounded():
    bd = make_binary(get_generator("kl"))
    low, high = inverse_G(bd, 10.0), inverse_G(bd, 20.0)
    assert 0.99 < low < high < 1.0


def test_inverse_warns_on_residual(caplog):
    bd = BinaryDivergence.from_functions(
        g=lambda t: np.where(np.asarray(t) < 0.5, t, np.asarray(t) + 0.1),
        g1=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        g2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        g_at_1=1.1,
        name="jump",
    )
    with caplog.at_level("WARNING", logger="divbound"):
        assert inverse_G(bd, 0.55) == pytest.approx(0.5, abs=1e-9)

    assert any(
        rec.levelname == "WARNING" and "residual" in rec.getMessage()
        for rec in caplog.records
    )


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=0.9),
    st.floats(min_value=0.0, max_value=0.9),
)
def test_inverse_monotone(a, b):
    bd = make_binary(get_generator("hellinger"))
    lo, hi = sorted((a, b))
    assert inverse_G(bd, lo) <= inverse_G(bd, hi) + 1e-12


def test_concavity_of_inverse_squared():
    for name in ("td", "kl"):
        bd = make_binary(get_generator(name))
        assert concavity_check_G_squared(bd, grid_size=100)


def test_concavity_of_inverse_squared_needs_condition():
    with pytest.raises(PreconditionError) as exc:
        concavity_check_G_squared(sqrt_g(), grid_size=100)
    assert not exc.value.certificate.satisfied
