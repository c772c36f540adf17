import numpy as np
import pytest

from cascade_jcm.core import (
    AtomicLevel,
    DomainError,
    JcmParams,
    PopulationSeries,
    SemiclassicalParams,
    ThreeLevelAmplitudes,
    TimeGrid,
    bare_state,
    norm_squared,
    require_normalized,
    spin_one_ops,
)


def test_spin_one_matrices():
    ops = spin_one_ops()
    assert ops.i_plus.tolist() == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert (ops.i_minus == ops.i_plus.T).all()
    assert ops.i_z.tolist() == [[1, 0, 0], [0, 0, 0], [0, 0, -1]]


def test_spin_one_commutators_exact():
    ops = spin_one_ops()
    assert ops.i_plus.dtype.kind == "i"
    # literal identities on the stored integer matrices
    comm_pm = ops.i_plus @ ops.i_minus - ops.i_minus @ ops.i_plus
    comm_zp = ops.i_z @ ops.i_plus - ops.i_plus @ ops.i_z
    assert (comm_zp == ops.i_plus).all()
    assert comm_pm.tolist() == np.diag([1, 0, -1]).tolist()


def test_level_ordering_matches_iz():
    ops = spin_one_ops()
    assert AtomicLevel.UPPER > AtomicLevel.MIDDLE > AtomicLevel.LOWER
    for level in AtomicLevel:
        vec = bare_state(level).as_vector().real
        assert vec @ ops.i_z @ vec == int(level)


@pytest.mark.parametrize(
    "level, expected",
    [(AtomicLevel.UPPER, (1, 0, 0)), (AtomicLevel.MIDDLE, (0, 1, 0)), (AtomicLevel.LOWER, (0, 0, 1))],
)
def test_bare_state(level, expected):
    state = bare_state(level)
    assert state.as_vector().tolist() == [complex(x) for x in expected]
    assert norm_squared(state) == 1.0


def test_bare_states_orthonormal():
    vecs = np.array([bare_state(lev).as_vector() for lev in AtomicLevel])
    assert np.array_equal(vecs.conj() @ vecs.T, np.eye(3))


def test_norm_squared():
    assert norm_squared(ThreeLevelAmplitudes(1, 0, 0)) == 1.0
    assert norm_squared(ThreeLevelAmplitudes(0, 0, 0)) == 0.0
    r = 1 / np.sqrt(2)
    assert norm_squared(ThreeLevelAmplitudes(r, 1j * r, 0)) == pytest.approx(1.0, abs=1e-15)


def test_require_normalized():
    require_normalized(ThreeLevelAmplitudes(1, 0, 1e-6))
    with pytest.raises(DomainError):
        require_normalized(ThreeLevelAmplitudes(1, 0, 1e-3))


def test_param_validation():
    with pytest.raises(DomainError):
        SemiclassicalParams(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        SemiclassicalParams(-1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        JcmParams(0.1, 0.0, -1)
    with pytest.raises(DomainError):
        JcmParams(0.0, 0.0, 1)
    with pytest.raises(DomainError):
        JcmParams(0.1, 0.0, 1.5)
    assert JcmParams(0.1, 0.0, 4).rabi == pytest.approx(0.3)


def test_time_grid():
    grid = TimeGrid(0.0, 2.0, 5)
    assert grid.times().tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert TimeGrid(3.0, 3.0, 1).times().tolist() == [3.0]
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.0, 10)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 0)


def test_population_series_shapes():
    t = np.linspace(0, 1, 4)
    s = PopulationSeries(t, t, 1 - t, 0 * t)
    assert len(s) == 4
    assert s.column(AtomicLevel.MIDDLE) is s.p_middle
    assert np.allclose(s.row_sums(), 1)
    with pytest.raises(ValueError):
        PopulationSeries(t, t[:2], t, t)


def test_level_parse():
    assert AtomicLevel.parse(" Middle ") is AtomicLevel.MIDDLE
    with pytest.raises(ValueError):
        AtomicLevel.parse("excited")
