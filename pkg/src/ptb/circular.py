"""Circular orbits of central models.

For a model with no ytil2 or zy dependence the radial equilibrium follows
from d(ztil.ytil)/dlambda = 0 at ztil.ytil = 0:

    |eta|^2 = 2 (dV/dztil2) rho^2,      l2 = rho^2 |eta|^2,

so the radius solves 2 dV/dztil2(rho) rho^4 = l2 and the angular rate is
Omega = sqrt(2 dV/dztil2).  On such an orbit all five scalars and both
quadrature rates are constant, and T is linear in lambda with slope
dT/dlambda, giving the T-period (2 pi / Omega) dT/dlambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BadParameter, DegenerateOrbit, DomainError, NoRoot, NotCentral
from .kinematics import ScalarQuintet
from .mass_shell import MassShell
from .potentials import PotentialSpec
from .reduced import (
    IntegratorOptions,
    ReducedState,
    dT_dlambda,
    integrate,
    rest_quintet,
    synchronize,
)

__all__ = [
    "CircularOrbit",
    "ConstancyReport",
    "PeriodicityReport",
    "find_circular",
    "verify_constancy",
    "verify_periodicity",
]


@dataclass(frozen=True)
class CircularOrbit:
    rho: float
    speed2: float          # |eta|^2 on the orbit
    Omega: float           # angular rate in lambda
    l2: float
    F: float
    G: float
    dTdlambda: float
    period_lambda: float
    period_T: float

    def initial_state(self) -> ReducedState:
        return ReducedState(
            lambda_=0.0,
            ztil=np.array([self.rho, 0.0, 0.0]),
            ytil=np.array([0.0, math.sqrt(self.speed2), 0.0]),
        )


def _orbit_quintet(rho: float, l2: float, shell: MassShell) -> ScalarQuintet:
    """Quintet on a candidate circular orbit: speed fixed by l2 = rho^2 |eta|^2."""
    return ScalarQuintet(
        P2=shell.M2,
        ztil2=-rho * rho,
        ytil2=-l2 / (rho * rho),
        zy=0.0,
        w=shell.nu ** 2 / shell.M2,
        yP=shell.nu,
    )


def find_circular(model: PotentialSpec, shell: MassShell, l2: float) -> CircularOrbit:
    """Radius, rate and clock data of the circular orbit with angular
    momentum squared l2.

    Scans a log-spaced radius bracket for a sign change of the equilibrium
    residual 2 dV/dztil2 rho^4 - l2 and refines with Brent's method; raises
    NoRoot when the model admits no circular orbit at this l2 (for example
    any repulsive model).
    """
    if not model.central:
        raise NotCentral(f"{model.name!r} does not declare the central structure")
    if not (l2 > 0.0):
        raise BadParameter(f"need l2 > 0, got {l2!r}")

    def residual(rho: float) -> float:
        ev = model.evaluate(_orbit_quintet(rho, l2, shell))
        return 2.0 * ev.dztil2 * rho ** 4 - l2

    grid = np.logspace(-6.0, 6.0, 241)
    vals = np.full(grid.shape, math.nan)
    for i, rho in enumerate(grid):
        try:
            vals[i] = residual(float(rho))
        except DomainError:
            continue
    bracket = None
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0.0:
            bracket = (grid[i], grid[i])
            break
        if a * b < 0.0:
            bracket = (grid[i], grid[i + 1])
            break
    if bracket is None:
        raise NoRoot(f"no circular-orbit radius for l2 = {l2!r} in [1e-6, 1e6]")
    if bracket[0] == bracket[1]:
        rho = float(bracket[0])
    else:
        rho = float(brentq(residual, bracket[0], bracket[1], xtol=1e-15, rtol=8.9e-16))

    ev = model.evaluate(_orbit_quintet(rho, l2, shell))
    if abs(1.0 + 2.0 * ev.dytil2) <= 1e-12:
        raise DegenerateOrbit(
            "orbit sits at 1 + 2 dV/dytil2 = 0; lambda does not advance zeta")
    Omega = math.sqrt(2.0 * ev.dztil2)
    speed2 = l2 / (rho * rho)
    F = 2.0 * shell.M2 * ev.dP2
    G = 2.0 * shell.nu * ev.dw
    rate = dT_dlambda(F, G, shell)
    period_lambda = 2.0 * math.pi / Omega
    return CircularOrbit(
        rho=rho, speed2=speed2, Omega=Omega, l2=float(l2), F=F, G=G,
        dTdlambda=rate, period_lambda=period_lambda,
        period_T=period_lambda * rate,
    )


@dataclass(frozen=True)
class ConstancyReport:
    """Relative variation of each conserved quantity over one period."""

    variations: dict
    max_variation: float

    def ok(self, bound: float = 1e-9) -> bool:
        return self.max_variation <= bound


_QUANTITIES = ("P2", "ztil2", "ytil2", "zy", "w", "F", "G")


def _scales(q0: ScalarQuintet, F0: float, G0: float) -> dict:
    """Per-quantity normalization; exact zeros fall back to a quantity of
    the same dimension so the ratio stays meaningful."""
    zy_scale = math.sqrt(abs(q0.ztil2 * q0.ytil2)) or 1.0
    return {
        "P2": abs(q0.P2),
        "ztil2": abs(q0.ztil2) or 1.0,
        "ytil2": abs(q0.ytil2) or 1.0,
        "zy": max(abs(q0.zy), zy_scale),
        "w": max(abs(q0.w), abs(q0.ytil2), 1e-300),
        "F": max(abs(F0), abs(q0.P2)),
        "G": max(abs(G0), abs(F0), abs(q0.P2)),
    }


def verify_constancy(orbit: CircularOrbit, model: PotentialSpec, shell: MassShell,
                 tol: float = 1e-10, n_samples: int = 400) -> ConstancyReport:
    """Integrate one period and measure how constant the five scalars and
    the quadrature rates stay."""
    opts = IntegratorOptions(tol=tol, sample_interval=orbit.period_lambda / n_samples)
    traj = integrate(orbit.initial_state(), shell, model, orbit.period_lambda, opts)
    series = {name: [] for name in _QUANTITIES}
    for s in traj.samples:
        q = rest_quintet(s.state.ztil, s.state.ytil, shell)
        series["P2"].append(q.P2)
        series["ztil2"].append(q.ztil2)
        series["ytil2"].append(q.ytil2)
        series["zy"].append(q.zy)
        series["w"].append(q.w)
        series["F"].append(s.F)
        series["G"].append(s.G)
    q0 = rest_quintet(traj.samples[0].state.ztil, traj.samples[0].state.ytil, shell)
    scales = _scales(q0, traj.samples[0].F, traj.samples[0].G)
    variations = {}
    for name in _QUANTITIES:
        arr = np.array(series[name])
        variations[name] = float((arr.max() - arr.min()) / scales[name])
    return ConstancyReport(variations=variations,
                           max_variation=max(variations.values()))


@dataclass(frozen=True)
class PeriodicityReport:
    closure_ztil: float
    closure_ytil: float
    T_advance_error: float
    linear_residual: float

    def ok(self, closure: float = 1e-8, linear: float = 1e-10) -> bool:
        return (self.closure_ztil <= closure and self.closure_ytil <= closure
                and self.T_advance_error <= closure
                and self.linear_residual <= linear)


def verify_periodicity(orbit: CircularOrbit, model: PotentialSpec, shell: MassShell,
                       tol: float = 1e-10, n_samples: int = 200) -> PeriodicityReport:
    """Close the orbit over one lambda-period and check the clock.

    Closure compares zeta and eta with their starting values; the clock must
    advance by period_T and stay linear in lambda (largest least-squares
    fit residual).
    """
    opts = IntegratorOptions(tol=tol, sample_interval=orbit.period_lambda / n_samples)
    traj = synchronize(integrate(orbit.initial_state(), shell, model,
                                 orbit.period_lambda, opts))
    first = traj.samples[0]
    last = traj.samples[-1]
    closure_z = float(np.max(np.abs(last.state.ztil - first.state.ztil)))
    closure_y = float(np.max(np.abs(last.state.ytil - first.state.ytil)))
    T_err = abs((last.T - first.T) - orbit.period_T)
    lams = np.array([s.state.lambda_ for s in traj.samples])
    Ts = np.array([s.T for s in traj.samples])
    coeffs = np.polyfit(lams, Ts, 1)
    resid = float(np.max(np.abs(Ts - np.polyval(coeffs, lams))))
    return PeriodicityReport(closure_ztil=closure_z, closure_ytil=closure_y,
                             T_advance_error=T_err, linear_residual=resid)
