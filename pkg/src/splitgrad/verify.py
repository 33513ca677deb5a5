"""Named verification suites shared by the command line and the test bed.

Every suite returns a list of CheckResult rows; a suite passes when every
row does. The suites are deliberately end-to-end: they run the actual
steppers, constructions, and analysis ops against each other rather than
re-deriving any formula locally, so a silent regression in one route is
caught by the other.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from . import algorithms, analysis, constructions, schedules
from .cases import all_cases
from .objectives import Objective, f1, f2, quadratic
from .splitting import HamiltonianSystem, forward_euler_hamiltonian, symplectic_euler

DEFAULT_SEED = 20260818

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _both_objectives():
    return (("f1", f1()), ("f2", f2()))


def _stepper_iterates(obj: Objective, name: str, s: float, n_steps: int, **kw):
    st = algorithms.make_stepper(name, s, **kw)
    traj, _ = algorithms.run(st, obj, [1.0, -2.0], s,
                             algorithms.StoppingRule("max_iter"), max_iter=n_steps)
    return traj.xs


def _max_rel_gap(xs_a, xs_b) -> float:
    d = np.max(np.abs(xs_a - xs_b), axis=1)
    m = np.maximum(1.0, np.max(np.abs(xs_b), axis=1))
    return float(np.max(d / m))


def suite_nesterov_split(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Three-field sequential split vs the direct accelerated stepper."""
    out = []
    s = 0.025
    h = float(np.sqrt(s))
    for tag, obj in _both_objectives():
        xs_split = constructions.nesterov_lie_trotter(obj, [1.0, -2.0], None, 3.0, h, 1000)
        xs_step = _stepper_iterates(obj, "agm2", s, 1000, alpha=3.0)
        gap = _max_rel_gap(xs_split, xs_step)
        out.append(CheckResult(f"nesterov-split/{tag}", gap <= 1e-12,
                               f"max relative gap {gap:.3e} over 1000 steps"))
    return out


def suite_constructions(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Each splitting construction against its direct stepper, both test
    objectives, 1000 steps."""
    out = []
    h = 0.1
    s = h * h
    n = 1000
    x0 = [1.0, -2.0]
    e25 = schedules.make_schedule("e25", s=s, beta=0.1, b=2.0, mu=0.1)
    for tag, obj in _both_objectives():
        pairs = (
            ("igahd", constructions.igahd_construction(obj, x0, None, 3.0, 1.0, h, n),
             _stepper_iterates(obj, "igahd", s, n, alpha=3.0, beta=1.0)),
            ("lt_s_igahd", constructions.lt_s_igahd_construction(obj, x0, None, 3.0, e25, h, n),
             _stepper_iterates(obj, "lt_s_igahd", s, n, schedule=e25)),
            ("pim", constructions.pim_construction(obj, x0, None, 1.0, h, n),
             _stepper_iterates(obj, "pim", s, n, gamma=1.0)),
            ("ardm", constructions.ardm_construction(obj, x0, None, 3.0, h, n),
             _stepper_iterates(obj, "ardm", s, n, alpha=3.0)),
            ("lt_se1", constructions.lt_se1_construction(obj, x0, None, 3.0, h, n),
             _stepper_iterates(obj, "lt_se1", s, n, alpha=3.0)),
            ("lt_sv2", constructions.lt_sv2_construction(obj, x0, None, 3.0, h, n),
             _stepper_iterates(obj, "lt_sv2", s, n, alpha=3.0)),
            ("lt_se3", constructions.lt_se3_construction(obj, x0, None, 3.0, h, n),
             _stepper_iterates(obj, "lt_se3", s, n, alpha=3.0)),
        )
        for name, xs_c, xs_s in pairs:
            gap = _max_rel_gap(xs_c, xs_s)
            out.append(CheckResult(f"construction/{name}/{tag}", gap <= 1e-12,
                                   f"max relative gap {gap:.3e} over {n} steps"))
    return out


def suite_ode(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """First-order averaged system vs second-order Hessian-damped system
    after the change of variables; the gap must shrink at the reference
    integrator's order."""
    obj = f1()
    alpha, beta, t0, t1 = 3.0, 0.1, 1.0, 10.0
    x0 = np.array([1.0, -2.0])
    v0 = np.zeros(2)
    xdot0 = constructions.xdot_from_v(obj, x0, v0, t0, alpha, beta)
    gaps = []
    for dt in (1e-2, 5e-3, 2.5e-3):
        tr1 = constructions.integrate_first_order_vd(obj, x0, v0, alpha, beta, t0, t1, dt)
        tr2 = constructions.integrate_second_order_hessian_vd(obj, x0, xdot0, alpha, beta,
                                                              t0, t1, dt)
        v_rec = np.array([constructions.v_from_x(obj, tr2.xs[k], tr2.vs[k],
                                                 float(tr2.ts[k]), alpha, beta)
                          for k in range(len(tr2.ts))])
        gaps.append(max(float(np.max(np.abs(tr1.xs - tr2.xs))),
                        float(np.max(np.abs(tr1.vs - v_rec)))))
    out = [CheckResult("ode/gaps-shrink", gaps[0] > gaps[1] > gaps[2],
                       f"sup gaps {gaps[0]:.3e} -> {gaps[1]:.3e} -> {gaps[2]:.3e}")]
    orders = [float(np.log2(gaps[i] / gaps[i + 1])) for i in range(2)]
    out.append(CheckResult("ode/order", min(orders) >= 3.5,
                           f"observed orders {orders[0]:.2f}, {orders[1]:.2f}"))
    return out


def _energy_configs(s: float):
    return (("e24", dict(a=4.0, b=10.0, mu=1e-2)),
            ("e25", dict(beta=0.1 * 2.0 * float(np.sqrt(s)), b=1.0, mu=0.1)),
            ("e26", dict(a=1.25, b=5.5, mu=1e-3)))


def suite_energy(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Lyapunov energy non-increase beyond the admissibility threshold for
    one admissible parameter set per coefficient family."""
    obj = f2()
    lip = obj.lipschitz_constant()
    s = 0.5 / lip
    x_star = np.zeros(2)
    out = []
    for label, params in _energy_configs(s):
        sch = schedules.make_schedule(label, s=s, alpha=3.0, lipschitz=lip, **params)
        st = algorithms.make_stepper("lt_s_igahd", s, schedule=sch)
        traj, res = algorithms.run(st, obj, [1.0, -2.0], s,
                                   algorithms.StoppingRule("known_min_f", 1e-10),
                                   max_iter=20000)
        rep = schedules.check_assumptions(sch, lip, n_max=max(traj.n_final + 2, 1000))
        series = analysis.energy_series(traj, s, 3.0, sch, x_star=x_star)
        from_n = int(np.floor(rep.n_threshold)) + 1
        tol = 1e-12 * float(np.max(series.e_seq))
        mono = analysis.check_monotone(series, from_n, tol)
        out.append(CheckResult(
            f"energy/{label}", res.termination == "tolerance_met" and mono.ok,
            f"N={rep.n_threshold:.3f} checked n in [{from_n}, {traj.n_final - 1}] "
            f"violations={'none' if mono.ok else mono.first_violation} "
            f"max increase={mono.max_increase:.3e}"))
    return out


def suite_rate(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Fitted decay exponent and the explicit Lyapunov tail bound."""
    obj = f2()
    lip = obj.lipschitz_constant()
    s = 0.025
    alpha = 3.0
    x_star = np.zeros(2)
    e25 = schedules.make_schedule("e25", s=s, beta=0.1 * 2.0 * float(np.sqrt(s)),
                                  b=1.0, mu=0.1)
    runs = (("agm2", None), ("lt_s_igahd", e25))
    out = []
    for name, sch in runs:
        kw = {"schedule": sch} if sch is not None else {}
        st = algorithms.make_stepper(name, s, alpha=alpha, **kw)
        traj, _ = algorithms.run(st, obj, [1.0, -2.0], s,
                                 algorithms.StoppingRule("max_iter"), max_iter=2200)
        fgaps = traj.fgaps()
        slope, _ = analysis.fit_rate(fgaps, (50, 2000), f_scale=obj.f_min)
        out.append(CheckResult(f"rate/slope/{name}", slope <= -1.8,
                               f"log-log slope {slope:.3f} over n in [50, 2000]"))
        if sch is None:
            # no coefficient schedule: only the inertia floor applies
            n_from = int(np.floor(alpha - 1.0)) + 1
        else:
            rep = schedules.check_assumptions(sch, lip, n_max=2200)
            n_from = int(np.floor(rep.n_threshold)) + 1
        e_ref = analysis.energy(traj, n_from, s, alpha, sch, x_star)
        viol = analysis.rate_bound_first_violation(fgaps, e_ref, alpha, n_from)
        out.append(CheckResult(
            f"rate/tail-bound/{name}", viol is None,
            f"fgap(n) <= {e_ref:.3e}*(alpha-1)^2/(n-1)^2 from n={n_from}: "
            f"{'holds' if viol is None else f'violated at n={viol}'}"))
    return out


def _random_family_draws(rng, n_draws: int):
    """Admissible (label, params, s, lipschitz) tuples for the three
    coefficient families."""
    draws = []
    for _ in range(n_draws):
        lip = rng.uniform(0.8, 4.0)
        s = rng.uniform(0.2, 0.95) / lip
        draws.append(("e24", dict(a=rng.uniform(0.0, 20.0), b=rng.uniform(1e-3, 20.0),
                                  mu=rng.uniform(0.0, 2.0)), s, lip))
        draws.append(("e25", dict(beta=rng.uniform(0.05, 0.95) * 2.0 * float(np.sqrt(s)),
                                  b=rng.uniform(0.1, 10.0), mu=rng.uniform(0.0, 1.0)),
                      s, lip))
        draws.append(("e26", dict(a=rng.uniform(0.0, 10.0), b=rng.uniform(0.1, 10.0),
                                  mu=rng.uniform(0.0, 1.0)), s, lip))
    return draws


def suite_assumption_exact(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """The coefficient-coupling identity must hold to a few ulps for
    every family at every n."""
    rng = np.random.default_rng(seed)
    counts: Dict[str, int] = {"e24": 0, "e25": 0, "e26": 0}
    fails: Dict[str, int] = {"e24": 0, "e25": 0, "e26": 0}
    for label, params, s, lip in _random_family_draws(rng, 20):
        sch = schedules.make_schedule(label, s=s, alpha=3.0, lipschitz=lip, **params)
        rep = schedules.check_assumptions(sch, lip, n_max=10_000)
        counts[label] += 1
        if not rep.assumption_ii_exact:
            fails[label] += 1
    return [CheckResult(f"assumption-exact/{label}", fails[label] == 0,
                        f"{counts[label] - fails[label]}/{counts[label]} draws exact "
                        f"over n = 1..10000")
            for label in ("e24", "e25", "e26")]


def suite_threshold_scan(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Closed-form readiness thresholds vs brute-force scans of the strict
    coupling inequality."""
    rng = np.random.default_rng(seed)
    counts: Dict[str, int] = {"e24": 0, "e25": 0, "e26": 0}
    fails: Dict[str, list] = {"e24": [], "e25": [], "e26": []}
    for label, params, s, lip in _random_family_draws(rng, 20):
        sch = schedules.make_schedule(label, s=s, alpha=3.0, lipschitz=lip, **params)
        npr = schedules.n_prime(label, params, s, 3.0, lip)
        scan_to = min(int(10 * np.ceil(max(npr, 0.0)) + 100), 100_000)
        rep = schedules.check_assumptions(sch, lip, n_max=scan_to)
        counts[label] += 1
        if rep.assumption_i_holds_from > max(1, int(np.floor(npr)) + 1):
            fails[label].append((params, npr, rep.assumption_i_holds_from))
    return [CheckResult(f"threshold-scan/{label}", not fails[label],
                        f"{counts[label] - len(fails[label])}/{counts[label]} draws: "
                        f"no violation beyond the closed form")
            for label in ("e24", "e25", "e26")]


def suite_lemmas(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Randomized nonnegativity sweeps for the smoothness inequalities and
    the quadratic sign lemmas."""
    rng = np.random.default_rng(seed)
    n_desc = 0
    desc_viol = 0
    worst = np.inf
    for _ in range(50):
        dim = int(rng.integers(2, 6))
        m = rng.normal(size=(dim, dim))
        obj = quadratic(m.T @ m + np.diag(rng.uniform(0.0, 1.0, dim)),
                        rng.normal(size=dim))
        lip = obj.lipschitz_constant()
        for _ in range(70):
            x, y, z = rng.normal(scale=2.0, size=(3, dim))
            s = rng.uniform(0.05, 1.0) / lip
            gam = rng.uniform(0.0, s)
            scale = max(1.0, abs(obj.eval(x)), abs(obj.eval(y)), abs(obj.eval(z)),
                        lip * float(x @ x + y @ y + z @ z))
            for var, kw in (("dl", {}), ("edl", {"s": s}),
                            ("eedl", {"s": s, "gamma": gam, "z": z})):
                r = analysis.check_descent_lemma(obj, x, y, var, **kw)
                n_desc += 1
                worst = min(worst, r)
                if r < -8.0 * _EPS * scale:
                    desc_viol += 1
    out = [CheckResult("lemmas/descent-family", desc_viol == 0,
                       f"{n_desc} samples, {desc_viol} violations, "
                       f"worst residual {worst:.3e}")]

    sign_viol = 0
    for _ in range(50_000):
        a = rng.uniform(0.1, 5.0)
        b = float(rng.normal(scale=2.0))
        c = b * b / (4.0 * a) + rng.uniform(0.0, 5.0)
        if not analysis.check_quadratic_lemma(a, b, c, float(rng.normal(scale=3.0)), "l17"):
            sign_viol += 1
    for _ in range(50_000):
        a = rng.uniform(0.1, 5.0)
        b = float(rng.normal(scale=2.0))
        c = b * b / (4.0 * a) - rng.uniform(1e-12, 5.0)
        root = float(np.sqrt(b * b - 4.0 * a * c))
        off = rng.uniform(0.0, 3.0)
        x = ((-b + root) / (2.0 * a) + off if rng.random() < 0.5
             else (-b - root) / (2.0 * a) - off)
        if not analysis.check_quadratic_lemma(a, b, c, x, "l18"):
            sign_viol += 1
    out.append(CheckResult("lemmas/sign-family", sign_viol == 0,
                           f"100000 samples, {sign_viol} violations"))
    return out


def suite_fixed_points(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Stationarity diagnostics: zero residual at minimizers, strictly
    positive away from them."""
    s = 0.01
    at_min = (("f1", f1(), [0.0, 0.0]), ("f1", f1(), [1.5, -1.5]),
              ("f2", f2(), [0.0, 0.0]))
    out = []
    for var in ("eq1", "eq2", "eq3"):
        worst = max(analysis.spurious_root_residual(o, xm, 0.05, s, var)
                    for _, o, xm in at_min)
        out.append(CheckResult(f"fixed-points/{var}/at-minimizers", worst <= 1e-14,
                               f"max residual {worst:.3e} over {len(at_min)} minimizers"))
    obj = f2()
    for var in ("eq1", "eq2", "eq3"):
        r = analysis.spurious_root_residual(obj, [1.0, 0.0], 0.05, s, var)
        out.append(CheckResult(f"fixed-points/{var}/off-minimizer", r > 1e-3,
                               f"residual {r:.3e} at (1, 0)"))
    return out


def suite_tables(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """All recorded benchmark rows terminate at tolerance, and the
    readiness thresholds split into the expected heuristic families."""
    s = 0.1
    objs = {"f1": f1(), "f2": f2()}
    out = []
    npr_by_group: Dict[str, list] = {}
    for case in all_cases():
        obj = objs[case.objective]
        sch = schedules.make_schedule(case.schedule, s=s, alpha=3.0,
                                      **case.schedule_params())
        st = algorithms.make_stepper("lt_s_igahd", s, schedule=sch)
        kind = "consecutive_f" if case.objective == "f1" else "known_min_f"
        traj, res = algorithms.run(st, obj, [1.0, -2.0], s,
                                   algorithms.StoppingRule(kind, case.epsilon),
                                   max_iter=30_000)
        ok = res.termination == "tolerance_met" and (res.error_final <= case.epsilon
                                                     or res.error_final < 1e-15)
        out.append(CheckResult(f"table/{case.label}", ok,
                               f"{res.termination} at n={res.n_final}, "
                               f"error {res.error_final:.3e}"))
        npr = schedules.n_prime(case.schedule, case.schedule_params(), s, 3.0,
                                objs[case.objective].lipschitz_constant())
        npr_by_group.setdefault(case.group[0], []).append(npr)
    slow = npr_by_group["B"]
    fast = [v for g, vals in npr_by_group.items() if g != "B" for v in vals]
    pattern_ok = min(slow) > 3.0 > max(fast) and min(slow) > max(fast)
    out.append(CheckResult(
        "table/threshold-pattern", pattern_ok,
        f"N' in [{min(fast):.2f}, {max(fast):.2f}] for small-mu rows vs "
        f"[{min(slow):.2f}, {max(slow):.2f}] for the heavy-mu family"))
    return out


def suite_symplectic(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    """Long-run oscillator energy: bounded band for the symplectic map,
    unbounded growth for explicit Euler."""
    hs = HamiltonianSystem(kinetic=lambda v: 0.5 * float(np.dot(v, v)),
                           potential=lambda x: 0.5 * float(np.dot(x, x)),
                           grad_kinetic=lambda v: v, grad_potential=lambda x: x)
    h, n_steps = 0.01, 100_000
    x, v = np.array([1.0]), np.array([0.0])
    e0 = hs.energy(x, v)
    drift = 0.0
    for _ in range(n_steps):
        x, v = symplectic_euler(hs, (x, v), h, "se2")
        drift = max(drift, abs(hs.energy(x, v) - e0))
    x, v = np.array([1.0]), np.array([0.0])
    for _ in range(n_steps):
        x, v = forward_euler_hamiltonian(hs, (x, v), h)
    growth = hs.energy(x, v) / e0
    return [
        CheckResult("symplectic/bounded-band", drift <= 0.05 * e0,
                    f"max |H - H0| = {drift:.3e} ({drift / e0:.2%} of H0) "
                    f"over {n_steps} steps"),
        CheckResult("symplectic/euler-grows", growth >= 100.0,
                    f"explicit Euler energy grew {growth:.0f}x"),
    ]


SUITES: Dict[str, Callable[[int], List[CheckResult]]] = {
    "nesterov-split": suite_nesterov_split,
    "constructions": suite_constructions,
    "ode": suite_ode,
    "energy": suite_energy,
    "rate": suite_rate,
    "assumption-exact": suite_assumption_exact,
    "threshold-scan": suite_threshold_scan,
    "lemmas": suite_lemmas,
    "fixed-points": suite_fixed_points,
    "tables": suite_tables,
    "symplectic": suite_symplectic,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> List[CheckResult]:
    if name == "all":
        results = []
        for key in SUITES:
            results.extend(SUITES[key](seed))
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{', '.join(list(SUITES) + ['all'])}")
    return SUITES[name](seed)


def format_report(results: List[CheckResult], elapsed: float = float("nan")) -> str:
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
    n_pass = sum(r.passed for r in results)
    tail = f"{n_pass}/{len(results)} checks passed"
    if np.isfinite(elapsed):
        tail += f" in {elapsed:.2f}s"
    lines.append(tail)
    return "\n".join(lines)


def run_and_format(name: str, seed: int = DEFAULT_SEED) -> str:
    t0 = time.monotonic()
    results = run_suite(name, seed)
    return format_report(results, time.monotonic() - t0)
