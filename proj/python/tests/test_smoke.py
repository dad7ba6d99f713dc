import math

import pytest

import ilfd


@pytest.fixture(scope="module")
def cycle():
    return ilfd.find_limit_cycle(5.0, 4.0)


def test_limit_cycle_period(cycle):
    assert cycle.T0 == pytest.approx(3.698939867513906, rel=1e-10)
    assert cycle.U0 == pytest.approx(0.979106186033891, rel=1e-10)


def test_invalid_params():
    with pytest.raises(ValueError, match="alpha > beta > 1"):
        ilfd.SystemParams(alpha=4.0, beta=5.0)


def test_first_order_width():
    assert ilfd.first_order_width(p=2) == pytest.approx(0.7557, rel=1e-3)


def test_selection_rule_empty_for_odd_rho():
    assert ilfd.selection_rule(ilfd.Resonance(1, 1), ilfd.Forcing.harmonic()) == []
    assert ilfd.selection_rule(ilfd.Resonance(2, 1), ilfd.Forcing.harmonic()) == [(1, -1), (1, 1)]


def test_forcing_parse():
    f = ilfd.Forcing.parse("poisson:lambda=2")
    t = 0.7
    assert f(t) == pytest.approx(3 * math.sin(t) / (5 - 4 * math.cos(t)), rel=1e-12)
    with pytest.raises(ilfd.Error):
        ilfd.Forcing.parse("cosine")


def test_fit_monomial_exact():
    data = [(0.01 * 1.3**i, 2.0 * (0.01 * 1.3**i) ** 3) for i in range(12)]
    r = ilfd.fit_monomial(data)
    assert r.a == pytest.approx(2.0, rel=1e-9)
    assert r.b == pytest.approx(3.0, abs=1e-9)


def test_is_locked_inside_2_1(cycle):
    locked, residual, ratio = ilfd.is_locked(cycle, ilfd.Forcing.harmonic(), ilfd.Resonance(2, 1), 0.1,
                                             2 * cycle.Omega0)
    assert locked
    assert ratio == pytest.approx(2.0, abs=1e-6)


def test_scan_tongue_2_1(cycle):
    res = ilfd.scan_tongue(cycle, ilfd.Forcing.harmonic(), ilfd.Resonance(2, 1), [0.02])
    (mu, width), = res.widths()
    assert width / mu == pytest.approx(0.7557, rel=0.02)
