"""Operator splitting and geometric one-step integrators on phase space.

Phase-space states are plain (x, v) pairs of arrays. Vector fields have the
signature field(t, x, v) -> (dx, dv); autonomous fields simply ignore t.
Composite steps follow the non-autonomous convention that every sub-flow
inside one step is evaluated at the same discretization time t_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

Array = np.ndarray
Phase = Tuple[Array, Array]
Field = Callable[[float, Array, Array], Phase]
Advance = Callable[[float, Array, Array, float], Phase]


def euler_advance(field: Field) -> Advance:
    """One explicit Euler step of a phase-space field."""

    def advance(t: float, x: Array, v: Array, h: float) -> Phase:
        dx, dv = field(t, x, v)
        return x + h * dx, v + h * dv

    return advance


@dataclass(frozen=True)
class SubFlow:
    """One summand of a split field together with the map used to advance
    it. `advance` may be the exact flow (when available in closed form) or
    any one-step integrator; `autonomous` is informational."""

    field: Field
    advance: Advance
    autonomous: bool = False

    @classmethod
    def euler(cls, field: Field, autonomous: bool = False) -> "SubFlow":
        return cls(field=field, advance=euler_advance(field), autonomous=autonomous)


@dataclass(frozen=True)
class SplitSystem:
    """An ordered decomposition F = F1 + ... + Fm. The list order is the
    application order for the sequential composition."""

    sub_flows: Tuple[SubFlow, ...]
    full_field: Optional[Field] = None

    def __init__(self, sub_flows: Sequence[SubFlow], full_field: Optional[Field] = None):
        object.__setattr__(self, "sub_flows", tuple(sub_flows))
        object.__setattr__(self, "full_field", full_field)
        if not self.sub_flows:
            raise ValueError("a split system needs at least one sub-flow")

    def field_sum(self, t: float, x: Array, v: Array) -> Phase:
        dx = np.zeros_like(np.asarray(x, dtype=float))
        dv = np.zeros_like(np.asarray(v, dtype=float))
        for sf in self.sub_flows:
            fx, fv = sf.field(t, x, v)
            dx = dx + fx
            dv = dv + fv
        return dx, dv

    def field_defect(self, t: float, x: Array, v: Array) -> float:
        """Largest componentwise gap between the summed sub-fields and the
        full field, relative to the field magnitude. Decompositions built
        here are exact, so anything beyond a few ulps means a wrong split."""
        if self.full_field is None:
            raise ValueError("no full field attached to compare against")
        sx, sv = self.field_sum(t, x, v)
        fx, fv = self.full_field(t, x, v)
        gap = max(np.max(np.abs(sx - fx), initial=0.0),
                  np.max(np.abs(sv - fv), initial=0.0))
        scale = max(np.max(np.abs(fx), initial=0.0),
                    np.max(np.abs(fv), initial=0.0), 1.0)
        return float(gap / scale)


def lie_trotter_compose(split: SplitSystem, state: Phase, t_n: float, h: float) -> Phase:
    """Sequential (Lie-Trotter) composite step: apply each sub-flow's
    integrator for a full step h, in list order, all evaluated at t_n.
    Reversing the list gives the adjoint composition."""
    if h <= 0.0:
        raise ValueError(f"stepsize must be positive, got {h}")
    x, v = state
    for sf in split.sub_flows:
        x, v = sf.advance(t_n, x, v, h)
    return x, v


def strang_compose(split: SplitSystem, state: Phase, t_n: float, h: float) -> Phase:
    """Palindromic (Strang) composite step: half-steps of the leading
    sub-flows around a full step of the last one, then the half-steps
    replayed in reverse. Swapping the two fields of a pair yields the
    symmetric variant."""
    if h <= 0.0:
        raise ValueError(f"stepsize must be positive, got {h}")
    flows = split.sub_flows
    x, v = state
    if len(flows) == 1:
        return flows[0].advance(t_n, x, v, h)
    for sf in flows[:-1]:
        x, v = sf.advance(t_n, x, v, 0.5 * h)
    x, v = flows[-1].advance(t_n, x, v, h)
    for sf in reversed(flows[:-1]):
        x, v = sf.advance(t_n, x, v, 0.5 * h)
    return x, v


@dataclass(frozen=True)
class HamiltonianSystem:
    """Separable H(x, v) = T(v) + U(x), optionally damped: the evolution
    is x' = grad T(v), v' = -grad U(x) - dissipation * grad T(v)."""

    kinetic: Callable[[Array], float]
    potential: Callable[[Array], float]
    grad_kinetic: Optional[Callable[[Array], Array]] = None
    grad_potential: Optional[Callable[[Array], Array]] = None
    dissipation: float = 0.0

    def __post_init__(self):
        if self.dissipation < 0.0:
            raise ValueError(f"dissipation must be nonnegative, got {self.dissipation}")

    def energy(self, x: Array, v: Array) -> float:
        return float(self.kinetic(np.asarray(v)) + self.potential(np.asarray(x)))

    def _require_grads(self, op: str) -> None:
        if self.grad_kinetic is None or self.grad_potential is None:
            raise NotImplementedError(
                f"{op} needs explicit grad_kinetic and grad_potential "
                "(only separable systems with both gradients are supported)")

    def field(self, t: float, x: Array, v: Array) -> Phase:
        """The damped Hamiltonian vector field; t is unused (autonomous)."""
        self._require_grads("field evaluation")
        gT = self.grad_kinetic(v)
        return gT, -self.grad_potential(x) - self.dissipation * gT


def symplectic_euler(hs: HamiltonianSystem, state: Phase, h: float,
                     variant: str = "se1") -> Phase:
    """The two explicit symplectic Euler maps of a separable system:

    se1: x+ = x + h grad T(v);   v+ = v - h grad U(x+)
    se2: v+ = v - h grad U(x);   x+ = x + h grad T(v+)

    Dissipation is not part of these maps; damped systems are handled by
    splitting the friction into its own sub-flow.
    """
    hs._require_grads("symplectic_euler")
    x, v = state
    if variant == "se1":
        x_new = x + h * hs.grad_kinetic(v)
        v_new = v - h * hs.grad_potential(x_new)
    elif variant == "se2":
        v_new = v - h * hs.grad_potential(x)
        x_new = x + h * hs.grad_kinetic(v_new)
    else:
        raise ValueError(f"unknown symplectic Euler variant {variant!r}")
    return x_new, v_new


def stormer_verlet(hs: HamiltonianSystem, state: Phase, h: float,
                   variant: str = "sv1") -> Phase:
    """Stormer-Verlet, second order:

    sv1 (drift-kick-drift): half drift in x, full kick in v, half drift.
    sv2 (kick-drift-kick): half kick in v, full drift in x, half kick.
    """
    hs._require_grads("stormer_verlet")
    x, v = state
    if variant == "sv1":
        x_half = x + 0.5 * h * hs.grad_kinetic(v)
        v_new = v - h * hs.grad_potential(x_half)
        x_new = x_half + 0.5 * h * hs.grad_kinetic(v_new)
    elif variant == "sv2":
        v_half = v - 0.5 * h * hs.grad_potential(x)
        x_new = x + h * hs.grad_kinetic(v_half)
        v_new = v_half - 0.5 * h * hs.grad_potential(x_new)
    else:
        raise ValueError(f"unknown Stormer-Verlet variant {variant!r}")
    return x_new, v_new


def forward_euler_hamiltonian(hs: HamiltonianSystem, state: Phase, h: float) -> Phase:
    """Non-symplectic comparator: explicit Euler on the (possibly damped)
    Hamiltonian field. On the undamped oscillator its energy error grows
    without bound, unlike the symplectic maps."""
    x, v = state
    dx, dv = hs.field(0.0, x, v)
    return x + h * dx, v + h * dv


def rk4_step(field: Field, t: float, x: Array, v: Array, dt: float) -> Phase:
    """Classical 4-stage one-step method on a phase-space field. Used as
    the high-accuracy reference for the continuous systems."""
    k1x, k1v = field(t, x, v)
    k2x, k2v = field(t + 0.5 * dt, x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
    k3x, k3v = field(t + 0.5 * dt, x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
    k4x, k4v = field(t + dt, x + dt * k3x, v + dt * k3v)
    x_new = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v_new = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return x_new, v_new
