import math

import numpy as np
import pytest

from probdel.analysis import (
    EPSILON, FIGURE_SWEEPS, SweepSpec, SweepVariable, build_table1, build_table2,
    crossover_ab, crossover_ab_exact, f2_difference_from_pb, figure_sweeps, max_f2,
    minimax_f2, optimal_q, optimum, optimum_curve, oracle_spot_check, real_amplitudes, sweep,
)
from probdel.exceptions import ProbDelDomainError
from probdel.fidelity import f2_real
from probdel.published import (
    KNOWN_DISCREPANCIES, LOCATION_TOLERANCE, PUBLISHED_CROSSOVER_HALF_P, PUBLISHED_MINIMAX,
    PUBLISHED_TABLE1, PUBLISHED_TABLE2, SD_TOLERANCE, VALUE_TOLERANCE, published_row,
)

MINIMAX_VALUE = 0.957106781186548


@pytest.fixture(scope='module')
def table1():
    return build_table1()


@pytest.fixture(scope='module')
def table2():
    return build_table2()


def test_real_amplitudes():
    for ab in (-0.5, -0.25, 0.0, 0.1, 0.5):
        a, b = real_amplitudes(ab)
        assert a * b == pytest.approx(ab, abs=1e-15)
        assert a ** 2 + b ** 2 == pytest.approx(1.0, abs=1e-15)
        assert a >= abs(b)

    a, b = real_amplitudes(np.array([-0.2, 0.3]))
    assert a.shape == (2, )
    np.testing.assert_allclose(a * b, [-0.2, 0.3])

    with pytest.raises(ProbDelDomainError):
        real_amplitudes(0.6)


def test_sweep_spec_validation():
    with pytest.raises(ProbDelDomainError, match="p = 0 never deletes"):
        SweepSpec.over_p(0.0, 1.0)
    with pytest.raises(ProbDelDomainError, match="out of order"):
        SweepSpec.over_p(0.9, 0.1)
    with pytest.raises(ProbDelDomainError, match="ab grid"):
        SweepSpec.over_ab(-0.6, 0.5)
    with pytest.raises(ProbDelDomainError, match="Fixed p"):
        SweepSpec.over_ab(p=0.0)
    with pytest.raises(ProbDelDomainError, match="fixed amplitudes"):
        SweepSpec(SweepVariable.P, 0.1, 1.0, 10)

    spec = SweepSpec('ab', -0.5, 0.5, 11, p=0.5)
    assert spec.variable is SweepVariable.AB
    assert spec.grid()[5] == 0.0


def test_sweep_over_p(plus_state):
    result = sweep(SweepSpec.over_p(EPSILON, 1.0, 1000))
    assert len(result.rows) == 1000
    assert result.x[0] == EPSILON
    assert result.x[-1] == 1.0

    q = np.sqrt(1 - result.x ** 2)
    np.testing.assert_allclose(result.f2, 0.75 + 0.5 * q - 0.25 * q ** 2, atol=1e-12)
    np.testing.assert_allclose(result.f1, 0.5 + 0.5 * q, atol=1e-12)
    np.testing.assert_allclose(result.delta, result.f2 - result.f1)

    # |+> loses deletion fidelity as the machine deletes more often
    assert np.all(np.diff(result.f2) < 0)


def test_sweep_over_a():
    result = sweep(SweepSpec.over_a(0.0, 1.0, 101, p=1.0))
    row = result.rows[0]
    assert row.x == 0.0
    assert row.f2 == pytest.approx(1.0)
    assert max(result.f2) <= 1 + 1e-12


def test_pati_braunstein_sweep():
    result = figure_sweeps(201, names=['pb-deletion-vs-ab'])['pb-deletion-vs-ab']
    np.testing.assert_allclose(result.f2, 1 - result.x ** 2, atol=1e-12)
    assert result.f2[100] == pytest.approx(1.0)


def test_figure_sweeps():
    sweeps = figure_sweeps(51)
    assert list(sweeps) == list(FIGURE_SWEEPS)
    assert all(len(r.x) == 51 for r in sweeps.values())

    tilted = figure_sweeps(2001, names=['tilted-state-vs-p'])['tilted-state-vs-p']
    assert max(tilted.f2) == pytest.approx(0.9625, abs=1e-5)

    with pytest.raises(ProbDelDomainError, match="Unknown figure sweep"):
        figure_sweeps(11, names=['bogus'])


def test_oracle_spot_check(rng):
    for spec in (SweepSpec.over_p(steps=1000), SweepSpec.over_ab(p=0.5)):
        assert oracle_spot_check(sweep(spec), rng) <= 1e-10


def test_optimal_q():
    assert optimal_q(0.25) == pytest.approx(0.25 / 0.875)
    assert optimal_q(-0.25) == pytest.approx(-0.25 / 0.875)
    assert optimal_q(0) == 0

    with pytest.raises(ProbDelDomainError, match="p = 0"):
        optimal_q(0.5)


def test_optimal_q_is_maximiser():
    for ab in (-0.4, -0.1, 0.1, 0.25, 0.45):
        a, b = real_amplitudes(ab)
        q_star = optimal_q(ab)
        qs = np.linspace(-1, 1, 20001)
        assert f2_real(a, b, q_star) >= np.max(f2_real(a, b, qs)) - 1e-12


def test_max_f2():
    assert max_f2(0.25) == pytest.approx(0.973214285714286, abs=1e-12)
    assert max_f2(0.0) == 1.0

    best = optimum(0.25)
    assert best.q == pytest.approx(0.285714285714286)
    assert best.p == pytest.approx(math.sqrt(1 - best.q ** 2))
    assert best.f2 == max_f2(0.25)


def test_minimax():
    result = minimax_f2()
    assert result.value == pytest.approx(MINIMAX_VALUE, abs=1e-12)
    assert result.A_star == pytest.approx(0.146446609406726, abs=1e-12)
    assert result.a_star == pytest.approx(0.906530, abs=1e-6)
    assert result.ab_star ** 2 == pytest.approx(result.A_star)
    assert abs(result.grid_value - result.value) <= 1e-9
    assert round(result.value, 4) == PUBLISHED_MINIMAX


def test_minimax_is_lower_bound():
    ab = np.linspace(-0.5, 0.5, 100001)[1:-1]
    a, b = real_amplitudes(ab)
    best = f2_real(a, b, ab / (1 - 2 * ab ** 2))
    assert np.min(best) >= MINIMAX_VALUE - 1e-9

    for x in (-0.49, -0.3827, 0.2, 0.3827):
        assert max_f2(x) >= MINIMAX_VALUE - 1e-9


def test_optimum_curve():
    rows = optimum_curve(99)
    assert len(rows) == 99
    assert not any(row.limit for row in rows)
    assert min(row.f2 for row in rows) >= MINIMAX_VALUE - 1e-9
    for row in rows:
        assert row.p ** 2 + row.q ** 2 == pytest.approx(1.0)


def test_crossover():
    assert crossover_ab(0.5) == pytest.approx(0.335521, abs=1e-6)
    assert crossover_ab(0.5) == pytest.approx(crossover_ab_exact(0.5), abs=1e-8)
    assert crossover_ab(0.9) == pytest.approx(0.200434, abs=1e-6)
    assert abs(crossover_ab(0.5) - PUBLISHED_CROSSOVER_HALF_P) < VALUE_TOLERANCE

    assert crossover_ab(1.0) is None
    assert crossover_ab_exact(1.0) is None

    with pytest.raises(ProbDelDomainError):
        crossover_ab(0)


def test_difference_from_pati_braunstein():
    x = np.linspace(-0.5, 0.5, 11)
    np.testing.assert_array_equal(f2_difference_from_pb(x, 1.0), 0)

    root = crossover_ab_exact(0.5)
    assert f2_difference_from_pb(root - 1e-3, 0.5) < 0
    assert f2_difference_from_pb(root + 1e-3, 0.5) > 0


def test_table1_keys(table1):
    assert [row.key for row in table1] == [row.key for row in PUBLISHED_TABLE1]


@pytest.mark.parametrize("ref", PUBLISHED_TABLE1, ids=lambda ref: "ab={}".format(ref.key))
def test_table1_matches_published(table1, ref):
    row = published_row(table1, ref.key)
    assert abs(row.f2_min - ref.f2_min) <= VALUE_TOLERANCE
    assert abs(row.f2_max - ref.f2_max) <= VALUE_TOLERANCE
    assert abs(row.x_at_max - ref.x_at_max) <= LOCATION_TOLERANCE
    assert abs(row.f2_sd - ref.f2_sd) <= SD_TOLERANCE
    assert row.min_is_limit == ref.min_is_limit
    assert row.max_is_limit == ref.max_is_limit


def test_table1_rows(table1):
    row = published_row(table1, 0.25)
    assert row.f2_min == pytest.approx(0.75, abs=1e-12)
    assert row.x_at_min == 0.0
    assert row.f2_max == pytest.approx(0.973214285714286, abs=1e-12)
    assert row.x_at_max == pytest.approx(0.958314847499910, abs=1e-9)
    assert row.f2_sd == pytest.approx(0.07623, abs=1e-4)

    row = published_row(table1, 0.40)
    assert row.f2_min == pytest.approx(0.84, abs=1e-12)
    assert row.x_at_min == 1.0
    assert not row.min_is_limit

    row = published_row(table1, -0.25)
    assert row.f2_max == pytest.approx(0.9375, abs=1e-12)
    assert row.x_at_max == 1.0


def test_table2_matches_published(table2):
    assert [row.key for row in table2] == [row.key for row in PUBLISHED_TABLE2]
    for row in table2:
        ref = published_row(PUBLISHED_TABLE2, row.key)
        assert abs(row.f2_min - ref.f2_min) <= VALUE_TOLERANCE
        assert row.x_at_min == ref.x_at_min
        assert abs(row.x_at_max - ref.x_at_max) <= LOCATION_TOLERANCE
        assert row.max_is_limit == ref.max_is_limit
        if ('table2', row.key) in KNOWN_DISCREPANCIES:
            assert abs(row.f2_max - ref.f2_max) > VALUE_TOLERANCE
        else:
            assert abs(row.f2_max - ref.f2_max) <= VALUE_TOLERANCE


def test_table2_rows(table2):
    for row in table2:
        q = math.sqrt(1 - row.key ** 2)
        assert row.f2_min == pytest.approx(0.75 - q ** 2 / 4 - q / 2, abs=1e-12)

    row = published_row(table2, 0.9)
    assert row.x_at_max == pytest.approx(math.sqrt(0.19) / 1.62, abs=1e-12)
    assert row.f2_max == pytest.approx(1 - 0.095 + 0.19 / 3.24, abs=1e-12)

    row = published_row(table2, 1.0)
    assert row.f2_max == 1.0
    assert row.x_at_max == 0.0
    assert row.max_is_limit
    assert row.symmetric_min

    assert not published_row(table2, 0.5).symmetric_min
