import numpy as np
import pytest

from splitgrad.splitting import (
    HamiltonianSystem,
    SplitSystem,
    SubFlow,
    euler_advance,
    forward_euler_hamiltonian,
    lie_trotter_compose,
    rk4_step,
    stormer_verlet,
    strang_compose,
    symplectic_euler,
)


def _oscillator(dissipation=0.0):
    return HamiltonianSystem(kinetic=lambda v: 0.5 * float(np.dot(v, v)),
                             potential=lambda x: 0.5 * float(np.dot(x, x)),
                             grad_kinetic=lambda v: v,
                             grad_potential=lambda x: x,
                             dissipation=dissipation)


START = (np.array([1.0]), np.array([0.0]))
H = 0.1


def test_symplectic_euler_one_step_oracles():
    hs = _oscillator()
    x, v = symplectic_euler(hs, START, H, "se1")
    assert (float(x[0]), float(v[0])) == (1.0, -0.1)
    assert hs.energy(x, v) == 0.505
    x, v = symplectic_euler(hs, START, H, "se2")
    assert (float(x[0]), float(v[0])) == (0.99, -0.1)
    assert hs.energy(x, v) == 0.49505
    x, v = symplectic_euler(hs, (x, v), H, "se2")
    assert (float(x[0]), float(v[0])) == (0.9701, -0.199)


def test_stormer_verlet_one_step_oracles():
    hs = _oscillator()
    x, v = stormer_verlet(hs, START, H, "sv1")
    assert (float(x[0]), float(v[0])) == (0.995, -0.1)
    assert hs.energy(x, v) == 0.5000125
    x, v = stormer_verlet(hs, START, H, "sv2")
    assert (float(x[0]), float(v[0])) == (0.995, -0.09975)
    assert hs.energy(x, v) == 0.49998753125


def test_se2_with_negative_step_inverts_se1():
    hs = _oscillator()
    state = (np.array([0.7, -0.3]), np.array([0.2, 0.9]))
    fwd = symplectic_euler(hs, state, H, "se1")
    back = symplectic_euler(hs, fwd, -H, "se2")
    assert np.max(np.abs(back[0] - state[0])) <= 1e-15
    assert np.max(np.abs(back[1] - state[1])) <= 1e-15


def _march(stepfn, state, h, t_end, **kw):
    x, v = state
    for _ in range(int(round(t_end / h))):
        x, v = stepfn((x, v), h, **kw)
    return x, v


def _oscillator_error(stepfn, h, t_end=1.0, **kw):
    x, v = _march(stepfn, START, h, t_end, **kw)
    return abs(float(x[0]) - np.cos(t_end)) + abs(float(v[0]) + np.sin(t_end))


def test_stormer_verlet_is_second_order():
    hs = _oscillator()
    for variant in ("sv1", "sv2"):
        step = lambda st, h: stormer_verlet(hs, st, h, variant)
        ratio = _oscillator_error(step, 0.01) / _oscillator_error(step, 0.005)
        assert 3.6 < ratio < 4.4


def test_symplectic_euler_is_first_order():
    hs = _oscillator()
    step = lambda st, h: symplectic_euler(hs, st, h, "se1")
    ratio = _oscillator_error(step, 0.01) / _oscillator_error(step, 0.005)
    assert 1.8 < ratio < 2.2


def _drift_kick_split(full=None):
    drift = SubFlow.euler(lambda t, x, v: (v, np.zeros_like(v)), autonomous=True)
    kick = SubFlow.euler(lambda t, x, v: (np.zeros_like(x), -x), autonomous=True)
    return SplitSystem([drift, kick], full_field=full)


def test_lie_trotter_equals_se1_on_drift_kick():
    # Euler is the exact flow of either frozen sub-field, so the sequential
    # composition reproduces the symplectic Euler map bit for bit
    split = _drift_kick_split()
    hs = _oscillator()
    state = (np.array([0.4, -1.1]), np.array([0.6, 0.2]))
    xa, va = lie_trotter_compose(split, state, 0.0, H)
    xb, vb = symplectic_euler(hs, state, H, "se1")
    assert np.array_equal(xa, xb) and np.array_equal(va, vb)


def test_strang_equals_stormer_verlet_on_drift_kick():
    split = _drift_kick_split()
    hs = _oscillator()
    state = (np.array([0.4, -1.1]), np.array([0.6, 0.2]))
    xa, va = strang_compose(split, state, 0.0, H)
    xb, vb = stormer_verlet(hs, state, H, "sv1")
    assert np.array_equal(xa, xb) and np.array_equal(va, vb)


def test_strang_is_second_order_with_exact_subflows():
    # drift and kick do not commute, yet their Euler advances are the exact
    # sub-flows, so the palindromic composition gains an order
    split = _drift_kick_split()
    step = lambda st, h: strang_compose(split, st, 0.0, h)
    ratio = _oscillator_error(step, 0.01) / _oscillator_error(step, 0.005)
    assert 3.6 < ratio < 4.4


def test_lie_trotter_is_first_order_on_noncommuting_pair():
    split = _drift_kick_split()
    step = lambda st, h: lie_trotter_compose(split, st, 0.0, h)
    ratio = _oscillator_error(step, 0.01) / _oscillator_error(step, 0.005)
    assert 1.8 < ratio < 2.2


def test_lie_trotter_on_commuting_fields_is_plain_euler():
    # decoupled decays commute; the composite is Euler on the sum, order 1
    split = SplitSystem([
        SubFlow.euler(lambda t, x, v: (-x, np.zeros_like(v)), autonomous=True),
        SubFlow.euler(lambda t, x, v: (np.zeros_like(x), -2.0 * v), autonomous=True),
    ])
    state = (np.array([1.0]), np.array([1.0]))

    def err(h):
        x, v = _march(lambda st, hh: lie_trotter_compose(split, st, 0.0, hh),
                      state, h, 1.0)
        return abs(float(x[0]) - np.exp(-1.0)) + abs(float(v[0]) - np.exp(-2.0))

    ratio = err(0.01) / err(0.005)
    assert 1.8 < ratio < 2.2


def test_strang_single_flow_takes_one_full_step():
    flow = SubFlow.euler(lambda t, x, v: (-x, np.zeros_like(v)), autonomous=True)
    split = SplitSystem([flow])
    state = (np.array([2.0]), np.array([0.0]))
    xs, vs = strang_compose(split, state, 0.0, H)
    xe, ve = flow.advance(0.0, state[0], state[1], H)
    assert np.array_equal(xs, xe) and np.array_equal(vs, ve)


def test_field_defect():
    full = lambda t, x, v: (v, -x)
    split = _drift_kick_split(full=full)
    x = np.array([0.3, 1.7])
    v = np.array([-0.2, 0.5])
    assert split.field_defect(0.0, x, v) == 0.0
    wrong = _drift_kick_split(full=lambda t, x, v: (v, -1.5 * x))
    assert wrong.field_defect(0.0, x, v) > 0.1
    with pytest.raises(ValueError):
        _drift_kick_split().field_defect(0.0, x, v)


def test_split_system_requires_subflows():
    with pytest.raises(ValueError):
        SplitSystem([])


def test_compose_rejects_nonpositive_step():
    split = _drift_kick_split()
    state = START
    with pytest.raises(ValueError):
        lie_trotter_compose(split, state, 0.0, 0.0)
    with pytest.raises(ValueError):
        strang_compose(split, state, 0.0, -0.1)


def test_hamiltonian_system_contracts():
    with pytest.raises(ValueError):
        _oscillator(dissipation=-1.0)
    damped = _oscillator(dissipation=0.5)
    dx, dv = damped.field(0.0, np.array([1.0]), np.array([2.0]))
    assert float(dx[0]) == 2.0
    assert float(dv[0]) == -1.0 - 0.5 * 2.0
    bare = HamiltonianSystem(kinetic=lambda v: 0.0, potential=lambda x: 0.0)
    with pytest.raises(NotImplementedError):
        bare.field(0.0, np.array([1.0]), np.array([1.0]))
    with pytest.raises(NotImplementedError):
        symplectic_euler(bare, START, H)
    with pytest.raises(NotImplementedError):
        stormer_verlet(bare, START, H)


def test_unknown_variants_rejected():
    hs = _oscillator()
    with pytest.raises(ValueError):
        symplectic_euler(hs, START, H, "se3")
    with pytest.raises(ValueError):
        stormer_verlet(hs, START, H, "leapfrog")


def test_symplectic_maps_ignore_dissipation_by_contract():
    # the damped field is split elsewhere; the conservative maps must not
    # silently absorb the friction term
    plain = _oscillator()
    damped = _oscillator(dissipation=3.0)
    a = symplectic_euler(plain, START, H, "se2")
    b = symplectic_euler(damped, START, H, "se2")
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_forward_euler_uses_damped_field_and_grows_energy():
    damped = _oscillator(dissipation=0.5)
    x, v = forward_euler_hamiltonian(damped, (np.array([1.0]), np.array([2.0])), H)
    assert float(x[0]) == 1.0 + H * 2.0
    assert float(v[0]) == 2.0 + H * (-1.0 - 0.5 * 2.0)

    plain = _oscillator()
    x, v = START
    for _ in range(100):
        x, v = forward_euler_hamiltonian(plain, (x, v), H)
    assert plain.energy(x, v) > 2.0 * plain.energy(*START)


def test_free_flight_conserves_velocity_and_energy():
    free = HamiltonianSystem(kinetic=lambda v: 0.5 * float(np.dot(v, v)),
                             potential=lambda x: 0.0,
                             grad_kinetic=lambda v: v,
                             grad_potential=lambda x: np.zeros_like(x))
    x, v = np.array([0.0, 1.0]), np.array([0.5, -0.25])
    e0 = free.energy(x, v)
    for _ in range(50):
        x, v = symplectic_euler(free, (x, v), H, "se1")
    assert np.array_equal(v, [0.5, -0.25])
    assert free.energy(x, v) == e0
    assert np.allclose(x, [0.0 + 5.0 * 0.5, 1.0 - 5.0 * 0.25], atol=1e-13)


def test_rk4_is_fourth_order():
    field = lambda t, x, v: (v, -x)

    def err(h):
        x, v = START
        for _ in range(int(round(1.0 / h))):
            x, v = rk4_step(field, 0.0, x, v, h)
        return abs(float(x[0]) - np.cos(1.0)) + abs(float(v[0]) + np.sin(1.0))

    ratio = err(0.05) / err(0.025)
    assert 14.0 < ratio < 18.0


def test_euler_advance_shape():
    adv = euler_advance(lambda t, x, v: (v, -x))
    x, v = adv(0.0, np.array([1.0]), np.array([0.0]), H)
    assert float(x[0]) == 1.0 and float(v[0]) == -0.1
