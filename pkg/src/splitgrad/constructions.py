"""Splitting-derived realizations of the discrete algorithms, plus the
continuous reference systems they discretize.

Each *_construction assembles the underlying continuous system's split,
advances it with the stated one-step maps (explicit Euler on non-potential
parts, a symplectic map on the Hamiltonian part), and returns the x-iterates.
Pointwise agreement with the direct steppers in `algorithms` is the central
anti-drift property of the test suite: the two code paths share no update
formulas, only the common bootstrap x1 = x0 - h^2 grad f(x0).

Conventions: the discretization clock is t_n = n*h; composite step n maps
(x_n, v_n) to (x_{n+1}, v_{n+1}) for n = 1, 2, .... Every construction
accepts v0, the auxiliary velocity entering the first composite step; pass
None to select the value that reproduces the discrete method.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algorithms import default_theta
from .objectives import Objective
from .schedules import Schedule
from .splitting import (HamiltonianSystem, SplitSystem, SubFlow,
                        lie_trotter_compose, rk4_step, symplectic_euler,
                        stormer_verlet)

Array = np.ndarray


def _check_run(alpha: float, h: float, n_steps: int) -> None:
    if alpha <= 1.0:
        raise ValueError(f"inertia exponent must exceed 1, got {alpha}")
    if h <= 0.0:
        raise ValueError(f"stepsize must be positive, got {h}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be nonnegative, got {n_steps}")


def _bootstrap(obj: Objective, x0, h: float):
    x0 = np.asarray(x0, dtype=float)
    x1 = x0 - (h * h) * obj.grad(x0)
    return x0, x1


def _unit_mass_system(obj: Objective, potential_scale: float = 1.0) -> HamiltonianSystem:
    """T(v) = ||v||^2/2 with U = scale * f; the kinetic gradient is the
    identity, so the symplectic maps reduce to drift/kick form."""
    if potential_scale == 1.0:
        pot, gpot = obj.eval, obj.grad
    else:
        def pot(x, c=potential_scale):
            return c * obj.eval(x)

        def gpot(x, c=potential_scale):
            return c * obj.grad(x)
    return HamiltonianSystem(kinetic=lambda v: 0.5 * float(np.dot(v, v)),
                             potential=pot, grad_kinetic=lambda v: v,
                             grad_potential=gpot)


def nesterov_lie_trotter(obj: Objective, x0, v0, alpha: float, h: float,
                         n_steps: int, beta: Optional[float] = None) -> Array:
    """Sequential splitting of the first-order averaged system

        x' = ((alpha-1)/t)(v - x) - beta grad f(x),
        v' = -(t/(alpha-1)) grad f(x)

    into three sub-fields (x-drift, v-kick, gradient flow), each advanced by
    one explicit Euler step at the shared time t_n = n*h. With beta = h (the
    default) the returned x-iterates coincide with the accelerated-gradient
    stepper at stepsize s = h^2. beta = 0 drops the gradient-flow leg, which
    is the two-field ablation.
    """
    _check_run(alpha, h, n_steps)
    b = h if beta is None else beta
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    v = np.asarray(v0, dtype=float) if v0 is not None else x0.copy()

    def drift(t, x, vv):
        return ((alpha - 1.0) / t) * (vv - x), np.zeros_like(vv)

    def kick(t, x, vv):
        return np.zeros_like(x), -(t / (alpha - 1.0)) * obj.grad(x)

    def grad_flow(t, x, vv):
        return -b * obj.grad(x), np.zeros_like(vv)

    def full(t, x, vv):
        return (((alpha - 1.0) / t) * (vv - x) - b * obj.grad(x),
                -(t / (alpha - 1.0)) * obj.grad(x))

    split = SplitSystem([SubFlow.euler(drift), SubFlow.euler(kick),
                         SubFlow.euler(grad_flow)], full_field=full)
    xs = [x0, x1]
    x = x1
    for n in range(1, n_steps):
        x, v = lie_trotter_compose(split, (x, v), n * h, h)
        xs.append(x)
    return np.asarray(xs)


def igahd_construction(obj: Objective, x0, v0, alpha: float, beta: float,
                       h: float, n_steps: int) -> Array:
    """Two-way split of the Hessian-damped inertial system: the
    non-potential part (inertial averaging plus the Hessian-drive terms)
    advanced by explicit Euler, then the kinetic-plus-potential part by the
    kick-then-drift symplectic Euler map. The Hessian-velocity product is
    replaced by the consecutive-gradient quotient
    (grad f(x) - grad f(x - h v)) / h, which keeps the whole step first
    order in gradient calls. Matches the stepper variant whose vanishing
    correction uses grad f(x_n)."""
    _check_run(alpha, h, n_steps)
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h
    hs = _unit_mass_system(obj)
    xs = [x0, x1]
    x = x1
    g = obj.grad(x1)
    for n in range(1, n_steps):
        t_n = n * h
        a_n = (n - alpha) / n
        hess_v = (g - obj.grad(x - h * v)) / h
        y = x + h * a_n * v - beta * h * h * hess_v - (beta * h * h / t_n) * g
        v_half = (a_n * v - beta * h * hess_v - (beta * h / t_n) * g
                  + h * g - h * obj.grad(y))
        x, v = symplectic_euler(hs, (x, v_half), h, "se2")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


def lt_s_igahd_construction(obj: Objective, x0, v0, alpha: float,
                            schedule: Schedule, h: float, n_steps: int) -> Array:
    """The general scheduled form of igahd_construction: the non-potential
    Euler leg carries the per-step coefficients (lambda_n, omega_n, gamma_n)
    sampled from the schedule at t_n, and the potential leg is the same
    kick-then-drift map. Output equals the four-coefficient stepper."""
    _check_run(alpha, h, n_steps)
    s = h * h
    if abs(s - schedule.s) > 8.0 * np.finfo(float).eps * abs(schedule.s):
        raise ValueError(f"h^2 = {s} disagrees with the schedule's s = {schedule.s}")
    if alpha != schedule.alpha:
        raise ValueError(f"alpha = {alpha} disagrees with the schedule's {schedule.alpha}")
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h
    hs = _unit_mass_system(obj)
    xs = [x0, x1]
    x = x1
    g = obj.grad(x1)
    for n in range(1, n_steps):
        a_n, lam, om, gam = schedule.coeffs_at(n)
        hess_v = (g - obj.grad(x - h * v)) / h
        y = x + h * a_n * v - h * lam * hess_v - om * g
        v_half = (a_n * v - lam * hess_v - (om / h) * g + (gam / h) * g
                  + h * g - h * obj.grad(y))
        x, v = symplectic_euler(hs, (x, v_half), h, "se2")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


def ardm_construction(obj: Objective, x0, v0, alpha: float, h: float,
                      n_steps: int) -> Array:
    """Split of the relaxed dynamical system whose damping acts through an
    extra gradient term: Euler on the non-potential part, kick-then-drift
    on the potential part."""
    _check_run(alpha, h, n_steps)
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h
    hs = _unit_mass_system(obj)
    xs = [x0, x1]
    x = x1
    g = obj.grad(x1)
    for n in range(1, n_steps):
        a_n = (n - alpha) / n
        y = x + h * a_n * v - h * h * (1.0 + a_n) * g
        v_half = a_n * v - h * (1.0 + a_n) * g + h * g - h * obj.grad(y)
        x, v = symplectic_euler(hs, (x, v_half), h, "se2")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


def pim_construction(obj: Objective, x0, v0, gamma: float, h: float,
                     n_steps: int) -> Array:
    """Momentum as a dissipative/conservative split of the damped
    Hamiltonian flow: Euler on the friction field (0, -gamma v), then
    kick-then-drift symplectic Euler on the conservative field. gamma = 0
    leaves the bare symplectic map."""
    if gamma < 0.0:
        raise ValueError(f"friction must be nonnegative, got {gamma}")
    if h <= 0.0:
        raise ValueError(f"stepsize must be positive, got {h}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be nonnegative, got {n_steps}")
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h
    # The damped system owns the full field; the symplectic leg integrates
    # only its conservative part, the friction leg the rest.
    hs = HamiltonianSystem(kinetic=lambda vv: 0.5 * float(np.dot(vv, vv)),
                           potential=obj.eval, grad_kinetic=lambda vv: vv,
                           grad_potential=obj.grad, dissipation=gamma)
    friction = SubFlow.euler(lambda t, x, vv: (np.zeros_like(x), -gamma * vv),
                             autonomous=True)
    conservative = SubFlow(field=lambda t, x, vv: (vv, -obj.grad(x)),
                           advance=lambda t, x, vv, hh: symplectic_euler(hs, (x, vv), hh, "se2"),
                           autonomous=True)
    split = SplitSystem([friction, conservative], full_field=hs.field)
    xs = [x0, x1]
    x = x1
    for n in range(1, n_steps):
        x, v = lie_trotter_compose(split, (x, v), n * h, h)
        xs.append(x)
    return np.asarray(xs)


def lt_se1_construction(obj: Objective, x0, v0, alpha: float, h: float,
                        n_steps: int) -> Array:
    """Split with the drift-then-kick symplectic Euler map on the potential
    part. The auxiliary velocity carries a gradient perturbation,
    v_n = (x_n - x_{n-1})/h - h grad f(x_n), maintained exactly by the
    composite step."""
    _check_run(alpha, h, n_steps)
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    g = obj.grad(x1)
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h - h * g
    hs = _unit_mass_system(obj)
    xs = [x0, x1]
    x = x1
    for n in range(1, n_steps):
        a_n = (n - alpha) / n
        v_half = a_n * v - h * obj.grad(x + h * a_n * v) + h * g
        x, v = symplectic_euler(hs, (x, v_half), h, "se1")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


def lt_sv2_construction(obj: Objective, x0, v0, alpha: float, h: float,
                        n_steps: int) -> Array:
    """As lt_se1_construction with the potential part advanced by the
    kick-drift-kick second-order map instead; the velocity perturbation is
    halved accordingly, v_n = (x_n - x_{n-1})/h - (h/2) grad f(x_n)."""
    _check_run(alpha, h, n_steps)
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    g = obj.grad(x1)
    v = np.asarray(v0, dtype=float) if v0 is not None else (x1 - x0) / h - 0.5 * h * g
    hs = _unit_mass_system(obj)
    xs = [x0, x1]
    x = x1
    for n in range(1, n_steps):
        a_n = (n - alpha) / n
        v_half = a_n * v - h * obj.grad(x + h * a_n * v) + h * g
        x, v = stormer_verlet(hs, (x, v_half), h, "sv2")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


def lt_se3_construction(obj: Objective, x0, v0, alpha: float, h: float,
                        n_steps: int,
                        theta: Callable[[int], float] = default_theta) -> Array:
    """Time-rescaled variant of lt_se1_construction: the potential entering
    the symplectic leg at step n is theta_n * f, so the gradient
    perturbation in the velocity decays with theta. theta identically 1
    recovers lt_se1_construction."""
    _check_run(alpha, h, n_steps)
    x0, x1 = _bootstrap(obj, x0, h)
    if n_steps == 0:
        return np.asarray([x0])
    g = obj.grad(x1)
    v = (np.asarray(v0, dtype=float) if v0 is not None
         else (x1 - x0) / h - h * theta(0) * g)
    xs = [x0, x1]
    x = x1
    for n in range(1, n_steps):
        a_n = (n - alpha) / n
        th = theta(n)
        v_half = a_n * v - h * obj.grad(x + h * a_n * v) + h * th * g
        x, v = symplectic_euler(_unit_mass_system(obj, th), (x, v_half), h, "se1")
        xs.append(x)
        g = obj.grad(x)
    return np.asarray(xs)


@dataclass(frozen=True)
class ContinuousTrajectory:
    """Sampled solution of one of the reference systems: ts on a uniform
    grid, xs the primary variable, vs the companion (auxiliary average or
    time derivative, depending on the system)."""

    ts: Array
    xs: Array
    vs: Array


def _time_grid(t0: float, t1: float, dt: float):
    if t0 <= 0.0:
        raise ValueError(f"initial time must be positive, got {t0}")
    if t1 <= t0:
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = max(1, int(round((t1 - t0) / dt)))
    return n, (t1 - t0) / n


def integrate_first_order_vd(obj: Objective, x0, v0, alpha: float, beta: float,
                             t0: float, t1: float, dt: float) -> ContinuousTrajectory:
    """Reference integration of the averaged first-order system

        x' = ((alpha-1)/t)(v - x) - beta grad f(x),
        v' = -(t/(alpha-1)) grad f(x)

    with the classical 4-stage one-step method at fixed dt (dt is rounded
    so the grid hits t1 exactly)."""
    if alpha <= 1.0:
        raise ValueError(f"inertia exponent must exceed 1, got {alpha}")
    n, dt_eff = _time_grid(t0, t1, dt)
    x = np.asarray(x0, dtype=float)
    v = np.asarray(v0, dtype=float)

    def field(t, xx, vv):
        g = obj.grad(xx)
        return ((alpha - 1.0) / t) * (vv - xx) - beta * g, -(t / (alpha - 1.0)) * g

    ts = t0 + dt_eff * np.arange(n + 1)
    xs, vs = [x], [v]
    for k in range(n):
        x, v = rk4_step(field, float(ts[k]), x, v, dt_eff)
        xs.append(x)
        vs.append(v)
    return ContinuousTrajectory(ts=ts, xs=np.asarray(xs), vs=np.asarray(vs))


def integrate_second_order_hessian_vd(obj: Objective, x0, xdot0, alpha: float,
                                      beta: float, t0: float, t1: float,
                                      dt: float) -> ContinuousTrajectory:
    """Reference integration of the Hessian-damped second-order system

        x'' + (alpha/t) x' + beta hess f(x) x' = -(1 + beta/t) grad f(x)

    as a first-order system in (x, x'). Needs an objective with an exact
    Hessian-vector product. The returned vs field holds x'."""
    if alpha <= 1.0:
        raise ValueError(f"inertia exponent must exceed 1, got {alpha}")
    n, dt_eff = _time_grid(t0, t1, dt)
    x = np.asarray(x0, dtype=float)
    w = np.asarray(xdot0, dtype=float)

    def field(t, xx, ww):
        return ww, (-(alpha / t) * ww - beta * obj.hess_vec(xx, ww)
                    - (1.0 + beta / t) * obj.grad(xx))

    ts = t0 + dt_eff * np.arange(n + 1)
    xs, ws = [x], [w]
    for k in range(n):
        x, w = rk4_step(field, float(ts[k]), x, w, dt_eff)
        xs.append(x)
        ws.append(w)
    return ContinuousTrajectory(ts=ts, xs=np.asarray(xs), vs=np.asarray(ws))


def v_from_x(obj: Objective, x, xdot, t: float, alpha: float, beta: float) -> Array:
    """Change of variables sending a second-order state to the averaged
    auxiliary variable: v = x + (t/(alpha-1))(x' + beta grad f(x))."""
    x = np.asarray(x, dtype=float)
    return x + (t / (alpha - 1.0)) * (np.asarray(xdot, dtype=float) + beta * obj.grad(x))


def xdot_from_v(obj: Objective, x, v, t: float, alpha: float, beta: float) -> Array:
    """Inverse change of variables: x' = ((alpha-1)/t)(v - x) - beta grad f(x)."""
    x = np.asarray(x, dtype=float)
    return ((alpha - 1.0) / t) * (np.asarray(v, dtype=float) - x) - beta * obj.grad(x)
