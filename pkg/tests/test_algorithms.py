import numpy as np
import pytest

from splitgrad import algorithms
from splitgrad.algorithms import (
    ALGORITHM_NAMES,
    IterState,
    StoppingRule,
    default_theta,
    init_state,
    make_stepper,
    run,
    step_nag_velocity,
)
from splitgrad.objectives import Objective, f1, f2
from splitgrad.schedules import make_schedule

S = 0.01
X0 = [1.0, 0.0]


def _iterates(name, n_steps=5, **kw):
    stepper = make_stepper(name, S, **kw)
    traj, _ = run(stepper, f1(), X0, S, StoppingRule("max_iter"), max_iter=n_steps)
    return traj.xs


def _assert_rows(xs, start, want):
    for k, row in enumerate(want):
        got = tuple(xs[start + k])
        assert got == row, f"row {start + k}: {got} != {row}"


def test_bootstrap():
    st = init_state(f1(), X0, S)
    assert st.n == 1
    assert np.array_equal(st.x_prev, [1.0, 0.0])
    assert np.array_equal(st.x_curr, [0.98, -0.02])
    assert np.array_equal(st.grad_prev, [2.0, 2.0])
    assert np.array_equal(st.y_last, [1.0, 0.0])


def test_agm2_iterates():
    _assert_rows(_iterates("agm2"), 2, [
        (0.9992, -0.0008000000000000021),
        (0.970016, -0.029984000000000004),
        (0.95121536, -0.048784640000000004),
        (0.9286545919999999, -0.071345408),
    ])


def test_pim_iterates():
    _assert_rows(_iterates("pim", gamma=1.0), 2, [
        (0.9428, -0.0572),
        (0.891608, -0.10839199999999999),
        (0.82987088, -0.17012912),
        (0.7611126368000001, -0.2388873632),
    ])


def test_polyak_igahd_iterates():
    _assert_rows(_iterates("polyak_igahd", beta=1.0), 2, [
        (0.8168000000000001, -0.1832),
        (0.8876480000000001, -0.11235200000000002),
        (0.7921164800000001, -0.20788352000000004),
        (0.7655499008000002, -0.23445009920000004),
    ])


def test_igahd_iterates():
    _assert_rows(_iterates("igahd", beta=1.0), 2, [
        (0.8225600000000001, -0.17744000000000001),
        (0.8837542400000001, -0.11624576000000002),
        (0.7957849395200001, -0.20421506048000004),
        (0.7682257670144, -0.23177423298560004),
    ])


def test_lt_se1_iterates():
    xs = _iterates("lt_se1")
    _assert_rows(xs, 2, [
        (1.0552640000000002, 0.055263999999999994),
        (1.0297983488, 0.029798348799999996),
    ])
    # the outgoing and incoming corrections cancel the move entirely here
    assert np.array_equal(xs[4], xs[3])
    _assert_rows(xs, 5, [(1.02471228465152, 0.024712284651519995)])


def test_lt_sv2_iterates():
    _assert_rows(_iterates("lt_sv2"), 2, [
        (1.0272320000000001, 0.027232),
        (0.9990774272, -0.0009225728000000002),
        (0.989095878656, -0.010904121344000001),
        (0.9745707292147712, -0.0254292707852288),
    ])


def test_ardm_iterates():
    _assert_rows(_iterates("ardm"), 2, [
        (1.017632, 0.017632),
        (0.9689248256, -0.031075174400000002),
        (0.93216111927296, -0.06783888072704),
        (0.8853076512584499, -0.11469234874155007),
    ])


def test_lt_se3_iterates():
    _assert_rows(_iterates("lt_se3"), 2, [
        (1.0552640000000002, 0.055263999999999994),
        (1.0186930688, 0.018693068799999994),
        (1.004861253632, 0.0048612536319999925),
        (0.9847802243710978, -0.015219775628902414),
    ])


def test_lt_s_igahd_iterates():
    sch = make_schedule("e25", s=S, beta=0.1, b=2.0, mu=0.1)
    _assert_rows(_iterates("lt_s_igahd", schedule=sch), 2, [
        (0.954656, -0.04534399999999999),
        (0.9368482304, -0.0631517696),
        (0.9133801793945601, -0.08661982060543999),
        (0.8886248931570485, -0.11137510684295168),
    ])


def test_theta_default():
    assert [default_theta(n) for n in (0, 1, 2, 3)] == [1.0, 1.0, 0.5, 1.0 / 3.0]


def test_nag_standard_clock_matches_agm2():
    for obj in (f1(), f2()):
        st_nag = make_stepper("nag", S)
        st_agm = make_stepper("agm2", S)
        t_nag, _ = run(st_nag, obj, [1.0, -2.0], S, StoppingRule("max_iter"), max_iter=50)
        t_agm, _ = run(st_agm, obj, [1.0, -2.0], S, StoppingRule("max_iter"), max_iter=50)
        assert np.max(np.abs(t_nag.xs - t_agm.xs)) <= 1e-12


def test_nag_shifted_clock_differs_but_converges():
    obj = f2()
    st = make_stepper("nag", S, clock="shifted")
    traj, res = run(st, obj, [1.0, -2.0], S, StoppingRule("known_min_f", 1e-8),
                    max_iter=20000)
    assert res.termination == "tolerance_met"
    st_std = make_stepper("nag", S)
    traj_std, _ = run(st_std, obj, [1.0, -2.0], S, StoppingRule("max_iter"), max_iter=20)
    assert np.max(np.abs(traj.xs[:21] - traj_std.xs)) > 1e-6


def test_nag_guards():
    st = init_state(f1(), X0, S)
    zero_clock = IterState(0, st.x_prev, st.x_curr, st.grad_prev, st.grad_curr)
    with pytest.raises(ValueError):
        step_nag_velocity(zero_clock, f1(), S)
    with pytest.raises(ValueError):
        step_nag_velocity(st, f1(), S, clock="bogus")


def test_stopping_rule_validation():
    with pytest.raises(ValueError):
        StoppingRule("until_tired")
    with pytest.raises(ValueError):
        StoppingRule("consecutive_f", epsilon=0.0)
    StoppingRule("max_iter")


def test_stop_fires_from_stationary_start():
    # start on the minimizing line of f1: the bootstrap does not move,
    # so consecutive values agree at n = 1 already
    traj, res = run(make_stepper("agm2", S), f1(), [1.5, -1.5], S,
                    StoppingRule("consecutive_f", 1e-10))
    assert res.termination == "tolerance_met"
    assert res.n_final == 1
    assert traj.xs.shape == (2, 2)


def test_stop_threshold_delays_firing():
    rule = StoppingRule("consecutive_f", 1e-10, n_threshold=5)
    _, res = run(make_stepper("agm2", S), f1(), [1.5, -1.5], S, rule)
    assert res.n_final == 6


def test_known_min_requires_f_min():
    plain = Objective(name="plain", dim=1, value=lambda x: float(x[0] ** 2),
                      gradient=lambda x: 2.0 * x, lipschitz=2.0)
    with pytest.raises(ValueError):
        run(make_stepper("agm2", S), plain, [1.0], S, StoppingRule("known_min_f", 1e-8))


def test_max_iter_termination_and_error():
    traj, res = run(make_stepper("agm2", S), f2(), [1.0, -2.0], S,
                    StoppingRule("max_iter"), max_iter=7)
    assert res.termination == "max_iter"
    assert res.n_final == 7
    assert traj.xs.shape == (8, 2)
    assert res.error_final == float(traj.fs[-1] - 2.0)


def test_divergence_keeps_finite_trajectory():
    with np.errstate(over="ignore"):
        traj, res = run(make_stepper("agm2", 10.0), f1(), X0, 10.0,
                        StoppingRule("max_iter"), max_iter=10000)
    assert res.termination == "diverged"
    assert np.all(np.isfinite(traj.xs))
    assert np.all(np.isfinite(traj.fs))


def test_run_rejects_nonfinite_start():
    with pytest.raises(ValueError):
        run(make_stepper("agm2", S), f1(), [np.nan, 0.0], S, StoppingRule("max_iter"))


def test_trajectory_helpers():
    traj, _ = run(make_stepper("agm2", S), f2(), [1.0, -2.0], S,
                  StoppingRule("max_iter"), max_iter=10, record_y=True)
    v = traj.velocities(S)
    assert np.array_equal(v[0], [0.0, 0.0])
    assert np.allclose(v[1], (traj.xs[1] - traj.xs[0]) / 0.1)
    assert np.allclose(traj.grad_norms(), np.linalg.norm(traj.grads, axis=1))
    assert np.all(traj.fgaps() >= 0.0)
    assert np.array_equal(traj.fgaps(0.0), traj.fs)
    assert traj.ys.shape == traj.xs.shape
    assert np.array_equal(traj.ys[0], [1.0, -2.0])


def test_fgaps_needs_reference():
    plain = Objective(name="plain", dim=1, value=lambda x: float(x[0] ** 2),
                      gradient=lambda x: 2.0 * x, lipschitz=2.0)
    traj, _ = run(make_stepper("agm2", S), plain, [1.0], S,
                  StoppingRule("max_iter"), max_iter=3)
    with pytest.raises(ValueError):
        traj.fgaps()


def test_make_stepper_errors():
    with pytest.raises(ValueError):
        make_stepper("sgd", S)
    with pytest.raises(ValueError):
        make_stepper("lt_s_igahd", S)   # schedule required
    sch = make_schedule("e25", s=0.04, beta=0.1, b=2.0)
    stepper = make_stepper("lt_s_igahd", S, schedule=sch)  # s mismatch
    with pytest.raises(ValueError):
        run(stepper, f1(), X0, S, StoppingRule("max_iter"), max_iter=2)


def test_algorithm_name_registry():
    assert set(ALGORITHM_NAMES) == {
        "agm2", "lt_s_igahd", "lt_se1", "lt_sv2", "ardm", "lt_se3", "pim",
        "polyak_igahd", "igahd", "nag",
    }
    for name in ALGORITHM_NAMES:
        assert callable(getattr(algorithms, "step_" + ("nag_velocity" if name == "nag" else name)))
