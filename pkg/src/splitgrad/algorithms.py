"""Discrete inertial gradient algorithms as a uniform stepper family.

Every stepper is a pure function (state, objective, params) -> state over a
shared IterState carrying the two most recent iterates and their cached
gradients. All methods share the same bootstrap: x1 = x0 - s*grad(x0),
y0 = x0, and the main recursion runs from n = 1. Iterations are counted
from n = 0, so a trajectory that stops at index M holds M + 1 points.

Gradient economy: the cache makes grad(x_n) and grad(x_{n-1}) free inside a
step, so the inertial-plus-correction methods spend exactly one fresh
gradient on y_n and one on x_{n+1} (which seeds the next step's cache);
the methods whose final update reuses grad(x_n) spend only the latter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .objectives import Objective
from .schedules import Schedule

Array = np.ndarray


@dataclass(frozen=True)
class IterState:
    """Rolling two-point state of a run: x_{n-1}, x_n and their gradients,
    plus the latest inertial point and, for velocity-form methods, the
    auxiliary velocity."""

    n: int
    x_prev: Array
    x_curr: Array
    grad_prev: Array
    grad_curr: Array
    y_last: Optional[Array] = None
    v_aux: Optional[Array] = None


@dataclass(frozen=True)
class StoppingRule:
    """kind is one of "consecutive_f" (|f(x_n) - f(x_{n-1})| <= epsilon),
    "known_min_f" (f(x_n) - f_min <= epsilon), or "max_iter". When
    n_threshold is set, tolerance-based stops additionally require
    n > n_threshold."""

    kind: str = "consecutive_f"
    epsilon: float = 1e-10
    n_threshold: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("consecutive_f", "known_min_f", "max_iter"):
            raise ValueError(f"unknown stopping kind {self.kind!r}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def init_state(obj: Objective, x0, s: float) -> IterState:
    """Bootstrap: one explicit gradient step produces x1."""
    x0 = np.asarray(x0, dtype=float)
    g0 = obj.grad(x0)
    x1 = x0 - s * g0
    return IterState(n=1, x_prev=x0, x_curr=x1, grad_prev=g0, grad_curr=obj.grad(x1),
                     y_last=x0.copy())


def step_agm2(state: IterState, obj: Objective, s: float, alpha: float = 3.0) -> IterState:
    """y_n = x_n + alpha_n (x_n - x_{n-1}); x_{n+1} = y_n - s grad(y_n)."""
    n = state.n
    a_n = (n - alpha) / n
    y = state.x_curr + a_n * (state.x_curr - state.x_prev)
    x_next = y - s * obj.grad(y)
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_lt_s_igahd(state: IterState, obj: Objective, s: float,
                    schedule: Schedule) -> IterState:
    """The general four-coefficient step:

    y_n     = x_n + alpha_n (x_n - x_{n-1}) - lambda_n [grad(x_n) - grad(x_{n-1})]
              - omega_n grad(x_n)
    x_{n+1} = y_n - s grad(y_n) + gamma_n grad(x_n)

    Three gradient values per step, with grad(x_n) taken from the cache.
    """
    if s != schedule.s:
        raise ValueError(f"stepsize {s} disagrees with the schedule's s = {schedule.s}")
    n = state.n
    a_n, lam, om, gam = schedule.coeffs_at(n)
    y = (state.x_curr + a_n * (state.x_curr - state.x_prev)
         - lam * (state.grad_curr - state.grad_prev) - om * state.grad_curr)
    x_next = y - s * obj.grad(y) + gam * state.grad_curr
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_lt_se1(state: IterState, obj: Objective, s: float, alpha: float = 3.0) -> IterState:
    """y_n = x_n + alpha_n (x_n - x_{n-1}) - s alpha_n grad(x_n);
    x_{n+1} = y_n - s grad(y_n) + s grad(x_n)."""
    n = state.n
    a_n = (n - alpha) / n
    y = state.x_curr + a_n * (state.x_curr - state.x_prev) - s * a_n * state.grad_curr
    x_next = y - s * obj.grad(y) + s * state.grad_curr
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_lt_sv2(state: IterState, obj: Objective, s: float, alpha: float = 3.0) -> IterState:
    """As step_lt_se1 with both gradient corrections halved."""
    n = state.n
    a_n = (n - alpha) / n
    y = state.x_curr + a_n * (state.x_curr - state.x_prev) - 0.5 * s * a_n * state.grad_curr
    x_next = y - s * obj.grad(y) + 0.5 * s * state.grad_curr
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_ardm(state: IterState, obj: Objective, s: float, alpha: float = 3.0) -> IterState:
    """y_n = x_n + alpha_n (x_n - x_{n-1}) - s (1 + alpha_n) grad(x_n);
    x_{n+1} = y_n - s grad(y_n)."""
    n = state.n
    a_n = (n - alpha) / n
    y = (state.x_curr + a_n * (state.x_curr - state.x_prev)
         - s * (1.0 + a_n) * state.grad_curr)
    x_next = y - s * obj.grad(y)
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def default_theta(n: int) -> float:
    """1/n extended to the bootstrap index: theta(0) = theta(1) = 1."""
    return 1.0 / max(n, 1)


def step_lt_se3(state: IterState, obj: Objective, s: float, alpha: float = 3.0,
                theta: Callable[[int], float] = default_theta) -> IterState:
    """Damped-correction variant: the outgoing correction is scaled by
    theta_{n-1} and the incoming one by theta_n, so both vanish when
    theta_n -> 0.

    y_n     = x_n + alpha_n (x_n - x_{n-1}) - s alpha_n theta_{n-1} grad(x_n)
    x_{n+1} = y_n - s grad(y_n) + s theta_n grad(x_n)
    """
    n = state.n
    a_n = (n - alpha) / n
    y = (state.x_curr + a_n * (state.x_curr - state.x_prev)
         - s * a_n * theta(n - 1) * state.grad_curr)
    x_next = y - s * obj.grad(y) + s * theta(n) * state.grad_curr
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_pim(state: IterState, obj: Objective, s: float, gamma: float) -> IterState:
    """Constant-friction momentum: y_n = x_n + (1 - h*gamma)(x_n - x_{n-1})
    with h = sqrt(s); x_{n+1} = y_n - s grad(x_n). Note the gradient is
    taken at x_n, not y_n, so each step costs one fresh gradient."""
    h = float(np.sqrt(s))
    y = state.x_curr + (1.0 - h * gamma) * (state.x_curr - state.x_prev)
    x_next = y - s * state.grad_curr
    return IterState(state.n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_polyak_igahd(state: IterState, obj: Objective, s: float, alpha: float = 3.0,
                      beta: float = 0.0) -> IterState:
    """Gradient-correction variant whose final update also uses grad(x_n):

    y_n     = x_n + alpha_n (x_n - x_{n-1}) - beta h [grad(x_n) - grad(x_{n-1})]
              - (beta h / n) grad(x_n)
    x_{n+1} = y_n - s grad(x_n)
    """
    h = float(np.sqrt(s))
    n = state.n
    a_n = (n - alpha) / n
    y = (state.x_curr + a_n * (state.x_curr - state.x_prev)
         - beta * h * (state.grad_curr - state.grad_prev)
         - (beta * h / n) * state.grad_curr)
    x_next = y - s * state.grad_curr
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def step_igahd(state: IterState, obj: Objective, s: float, alpha: float = 3.0,
               beta: float = 0.0, omega_grad_at: str = "curr") -> IterState:
    """Hessian-correction method with the gradient step taken at y_n.

    omega_grad_at selects the evaluation point of the vanishing correction
    term (beta h / n): "curr" uses grad(x_n) (the default), "prev" the
    classical grad(x_{n-1}) variant.
    """
    if omega_grad_at not in ("curr", "prev"):
        raise ValueError(f"omega_grad_at must be 'curr' or 'prev', got {omega_grad_at!r}")
    h = float(np.sqrt(s))
    n = state.n
    a_n = (n - alpha) / n
    g_omega = state.grad_curr if omega_grad_at == "curr" else state.grad_prev
    y = (state.x_curr + a_n * (state.x_curr - state.x_prev)
         - beta * h * (state.grad_curr - state.grad_prev)
         - (beta * h / n) * g_omega)
    x_next = y - s * obj.grad(y)
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y)


def _clock_time(n: int, h: float, alpha: float, clock: str) -> float:
    if clock == "standard":
        return n * h
    if clock == "shifted":
        return h * (n + alpha)
    raise ValueError(f"unknown clock {clock!r}; use 'standard' or 'shifted'")


def step_nag_velocity(state: IterState, obj: Objective, s: float, alpha: float = 3.0,
                      clock: str = "standard") -> IterState:
    """Velocity form of the accelerated method on the clock t_n = n*h
    (or h*(n + alpha) with clock="shifted"):

    y_n     = x_n + (h(alpha-1)/t_n)(v_n - x_n)
    x_{n+1} = y_n - s grad(y_n)
    v_{n+1} = v_n - (h t_n/(alpha-1)) grad(y_n)

    When v_aux is unset the velocity is recovered from the position pair,
    v_n = x_{n-1} + (t_{n-1}/(h(alpha-1)))(x_n - x_{n-1}); on the standard
    clock this gives v_1 = x_0.
    """
    h = float(np.sqrt(s))
    n = state.n
    t_n = _clock_time(n, h, alpha, clock)
    if t_n == 0.0:
        raise ValueError(f"clock time vanishes at n = {n}")
    v = state.v_aux
    if v is None:
        t_prev = _clock_time(n - 1, h, alpha, clock)
        v = state.x_prev + (t_prev / (h * (alpha - 1.0))) * (state.x_curr - state.x_prev)
    w = (h * (alpha - 1.0) / t_n) * (v - state.x_curr)
    y = state.x_curr + w
    gy = obj.grad(y)
    x_next = y - s * gy
    v_next = v - (h * t_n / (alpha - 1.0)) * gy
    return IterState(n + 1, state.x_curr, x_next, state.grad_curr, obj.grad(x_next),
                     y_last=y, v_aux=v_next)


@dataclass
class Trajectory:
    """Recorded run: iterates x_0..x_M with values, gradients and optional
    inertial points. Velocities are derived on demand."""

    obj: Objective
    xs: Array            # (M+1, dim)
    fs: Array            # (M+1,)
    grads: Array         # (M+1, dim)
    ys: Optional[Array] = None

    @property
    def n_final(self) -> int:
        return self.xs.shape[0] - 1

    def grad_norms(self) -> Array:
        return np.linalg.norm(self.grads, axis=1)

    def fgaps(self, f_star: Optional[float] = None) -> Array:
        if f_star is None:
            f_star = self.obj.f_min
        if f_star is None:
            raise ValueError("no reference minimum available for this objective")
        return self.fs - f_star

    def velocities(self, s: float) -> Array:
        """Discrete velocity v_n = (x_n - x_{n-1})/sqrt(s); the n = 0 row
        is zero by convention."""
        h = float(np.sqrt(s))
        v = np.zeros_like(self.xs)
        v[1:] = (self.xs[1:] - self.xs[:-1]) / h
        return v


@dataclass(frozen=True)
class RunResult:
    termination: str              # "tolerance_met" | "max_iter" | "diverged"
    n_final: int
    error_final: float


def _stop_error(rule: StoppingRule, fs, f_star: Optional[float]) -> float:
    if rule.kind == "consecutive_f":
        return abs(fs[-1] - fs[-2])
    if rule.kind == "known_min_f":
        if f_star is None:
            raise ValueError("known_min_f stopping needs an objective with known minimum")
        return fs[-1] - f_star
    return float("nan")


def run(stepper: Callable[[IterState, Objective], IterState], obj: Objective, x0,
        s: float, stopping: StoppingRule, max_iter: int = 50000,
        record_y: bool = False):
    """Drive a stepper from the common bootstrap until the stopping rule
    fires, max_iter is reached, or an iterate goes non-finite (divergence:
    the trajectory keeps the last finite state).

    Returns (Trajectory, RunResult).
    """
    x0 = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    f_star = obj.f_min
    state = init_state(obj, x0, s)
    xs = [state.x_prev, state.x_curr]
    fs = [obj.eval(state.x_prev), obj.eval(state.x_curr)]
    grads = [state.grad_prev, state.grad_curr]
    ys = [state.x_prev.copy(), state.y_last]

    termination = "max_iter"
    while True:
        if stopping.kind != "max_iter":
            err = _stop_error(stopping, fs, f_star)
            past_threshold = (stopping.n_threshold is None
                              or state.n > stopping.n_threshold)
            if past_threshold and err <= stopping.epsilon:
                termination = "tolerance_met"
                break
        if state.n >= max_iter:
            break
        new_state = stepper(state, obj)
        f_new = obj.eval(new_state.x_curr)
        if not (np.all(np.isfinite(new_state.x_curr)) and np.isfinite(f_new)):
            termination = "diverged"
            break
        xs.append(new_state.x_curr)
        fs.append(f_new)
        grads.append(new_state.grad_curr)
        ys.append(new_state.y_last)
        state = new_state

    traj = Trajectory(obj=obj, xs=np.asarray(xs), fs=np.asarray(fs),
                      grads=np.asarray(grads),
                      ys=np.asarray(ys) if record_y else None)
    error_final = _stop_error(stopping, fs, f_star) if stopping.kind != "max_iter" \
        else float(fs[-1] - f_star) if f_star is not None else float("nan")
    return traj, RunResult(termination=termination, n_final=traj.n_final,
                           error_final=float(error_final))


def make_stepper(name: str, s: float, alpha: float = 3.0,
                 schedule: Optional[Schedule] = None, beta: float = 1.0,
                 gamma: float = 1.0, theta: Callable[[int], float] = default_theta,
                 clock: str = "standard",
                 omega_grad_at: str = "curr") -> Callable[[IterState, Objective], IterState]:
    """Bind a named algorithm to its parameters; the result has the
    (state, obj) -> state shape that `run` expects."""
    name = name.lower()
    if name == "agm2":
        return lambda st, ob: step_agm2(st, ob, s, alpha)
    if name == "lt_s_igahd":
        if schedule is None:
            raise ValueError("lt_s_igahd needs a schedule")
        return lambda st, ob: step_lt_s_igahd(st, ob, s, schedule)
    if name == "lt_se1":
        return lambda st, ob: step_lt_se1(st, ob, s, alpha)
    if name == "lt_sv2":
        return lambda st, ob: step_lt_sv2(st, ob, s, alpha)
    if name == "ardm":
        return lambda st, ob: step_ardm(st, ob, s, alpha)
    if name == "lt_se3":
        return lambda st, ob: step_lt_se3(st, ob, s, alpha, theta)
    if name == "pim":
        return lambda st, ob: step_pim(st, ob, s, gamma)
    if name == "polyak_igahd":
        return lambda st, ob: step_polyak_igahd(st, ob, s, alpha, beta)
    if name == "igahd":
        return lambda st, ob: step_igahd(st, ob, s, alpha, beta, omega_grad_at)
    if name == "nag":
        return lambda st, ob: step_nag_velocity(st, ob, s, alpha, clock)
    raise ValueError(f"unknown algorithm {name!r}")


ALGORITHM_NAMES = ("agm2", "lt_s_igahd", "lt_se1", "lt_sv2", "ardm", "lt_se3",
                   "pim", "polyak_igahd", "igahd", "nag")
