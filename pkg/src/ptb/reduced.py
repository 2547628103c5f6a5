"""Reduced relative dynamics in the rest frame of the total momentum.

The internal motion collapses to a six-dimensional system for the spatial
parts (zeta, eta) of the projected separation and momentum, driven by the
collective parameter lambda = tau1 + tau2:

    dzeta/dlambda = (1 + 2 dV/dytil2) eta + (dV/dzy) zeta
    deta/dlambda  = -2 (dV/dztil2) zeta - (dV/dzy) eta

Two quadratures ride along as extra state components,

    F = 2 P^2 dV/dP2,      G = 2 (y.P) dV/dw,

and feed the equal-time synchronization: the slice z.P = 0 fixes
tau1 - tau2, and the center-of-mass clock is T = Q.P / M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .dopri import DenseSegment, solve_dopri5
from .errors import NonMonotoneTime, NotSynchronized, OutOfRange
from .kinematics import ScalarQuintet
from .mass_shell import MassShell
from .potentials import PotentialSpec

__all__ = [
    "IntegratorOptions",
    "ReducedState",
    "TrajectorySample",
    "Trajectory",
    "rest_quintet",
    "rhs",
    "dT_dlambda",
    "integrate",
    "synchronize",
]


@dataclass(frozen=True)
class IntegratorOptions:
    """tol is the error target per unit lambda (absolute and relative alike),
    so end-to-end deviations scale like tol times the integrated span.

    sample_interval = None emits every accepted step.  strict_time makes a
    non-positive dT/dlambda abort with NonMonotoneTime instead of flagging.
    """

    tol: float = 1e-10
    max_step: float = math.inf
    sample_interval: Optional[float] = None
    strict_time: bool = False


@dataclass(frozen=True)
class ReducedState:
    """Rest-frame internal state at one value of lambda.

    ztil and ytil hold the spatial parts; the four-vector scalars follow the
    sign map ztil2 = -|ztil|^2 etc.  intF and intG are the accumulated
    quadratures from lambda = 0.
    """

    lambda_: float
    ztil: np.ndarray
    ytil: np.ndarray
    intF: float = 0.0
    intG: float = 0.0


@dataclass(frozen=True)
class TrajectorySample:
    state: ReducedState
    F: float
    G: float
    zdotP: float = math.nan
    QdotP: float = math.nan
    tau1: float = math.nan
    tau2: float = math.nan
    T: float = math.nan
    dTdlambda: float = math.nan
    flagged: bool = False


@dataclass(frozen=True)
class Trajectory:
    shell: MassShell
    model: PotentialSpec
    samples: tuple[TrajectorySample, ...]
    segments: tuple[DenseSegment, ...]
    n_accepted: int
    n_rejected: int
    opts: IntegratorOptions
    synchronized: bool = False
    monotone: Optional[bool] = None
    _seg_starts: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def lambda_span(self) -> tuple[float, float]:
        return self.samples[0].state.lambda_, self.samples[-1].state.lambda_

    def state_at(self, lam: float) -> ReducedState:
        """Dense-output evaluation anywhere in the integrated span."""
        lo, hi = self.lambda_span
        if not (lo <= lam <= hi):
            raise OutOfRange(f"lambda = {lam!r} outside [{lo!r}, {hi!r}]")
        if not self.segments:
            s = self.samples[0].state
            return replace(s, lambda_=lam)
        i = int(np.searchsorted(self._seg_starts, lam, side="right")) - 1
        i = min(max(i, 0), len(self.segments) - 1)
        u = self.segments[i](lam)
        return _state_from_vector(lam, u)

    def sample_at(self, lam: float) -> TrajectorySample:
        """Fully synchronized sample at an arbitrary lambda."""
        state = self.state_at(lam)
        F, G = quadrature_rates(state, self.shell, self.model)
        return _synchronized_sample(state, F, G, self.shell)


def _state_from_vector(lam: float, u: np.ndarray) -> ReducedState:
    return ReducedState(lambda_=lam, ztil=u[0:3].copy(), ytil=u[3:6].copy(),
                        intF=float(u[6]), intG=float(u[7]))


def _vector_from_state(s: ReducedState) -> np.ndarray:
    u = np.empty(8)
    u[0:3] = s.ztil
    u[3:6] = s.ytil
    u[6] = s.intF
    u[7] = s.intG
    return u


def rest_quintet(ztil: np.ndarray, ytil: np.ndarray, shell: MassShell) -> ScalarQuintet:
    """Scalar quintet of a rest-frame state; y.P is the first integral nu."""
    z2 = float(ztil @ ztil)
    y2 = float(ytil @ ytil)
    zy = float(ztil @ ytil)
    return ScalarQuintet(
        P2=shell.M2,
        ztil2=-z2,
        ytil2=-y2,
        zy=-zy,
        w=shell.nu * shell.nu / shell.M2,
        yP=shell.nu,
    )


def rhs(state: ReducedState, shell: MassShell, model: PotentialSpec):
    """Right-hand side (dzeta, deta, F, G).

    Depends on lambda only through the state itself; tau1 and tau2 never
    appear separately.
    """
    ev = model.evaluate(rest_quintet(state.ztil, state.ytil, shell))
    dz = (1.0 + 2.0 * ev.dytil2) * state.ytil + ev.dzy * state.ztil
    dy = -2.0 * ev.dztil2 * state.ztil - ev.dzy * state.ytil
    F = 2.0 * shell.M2 * ev.dP2
    G = 2.0 * shell.nu * ev.dw
    return dz, dy, F, G


def quadrature_rates(state: ReducedState, shell: MassShell, model: PotentialSpec):
    """(F, G) at a state, without the vector part of the right-hand side."""
    ev = model.evaluate(rest_quintet(state.ztil, state.ytil, shell))
    return 2.0 * shell.M2 * ev.dP2, 2.0 * shell.nu * ev.dw


def dT_dlambda(F: float, G: float, shell: MassShell) -> float:
    """Clock rate M/4 - nu^2/M^3 - nu G/M^3 + F/M of the equal-time slice."""
    M = shell.M
    M3 = M * shell.M2
    return 0.25 * M - shell.nu ** 2 / M3 - shell.nu * G / M3 + F / M


def _sample_grid(span: float, interval: Optional[float]) -> Optional[np.ndarray]:
    if interval is None:
        return None
    if not (interval > 0.0):
        raise ValueError(f"sample_interval must be positive, got {interval!r}")
    n = int(math.floor(span / interval + 1e-9))
    grid = [i * interval for i in range(n + 1)]
    if span - grid[-1] > 1e-12 * span:
        grid.append(span)
    else:
        grid[-1] = span
    return np.array(grid)


def integrate(initial: ReducedState, shell: MassShell, model: PotentialSpec,
              span: float, opts: IntegratorOptions = IntegratorOptions()) -> Trajectory:
    """Advance the reduced system over lambda in [0, span].

    The quadratures are co-integrated, so they share the step-error control
    of the vector part.  In strict mode the run aborts as soon as the clock
    rate dT/dlambda fails to be positive at an accepted step.
    """
    if not (span > 0.0):
        raise ValueError(f"span must be positive, got {span!r}")
    lam0 = initial.lambda_
    if lam0 != 0.0:
        raise ValueError("integration starts at lambda = 0 by convention")

    def f(lam: float, u: np.ndarray) -> np.ndarray:
        dz, dy, F, G = rhs(_state_from_vector(lam, u), shell, model)
        out = np.empty(8)
        out[0:3] = dz
        out[3:6] = dy
        out[6] = F
        out[7] = G
        return out

    def on_step(lam: float, u: np.ndarray, du: np.ndarray) -> None:
        if opts.strict_time:
            rate = dT_dlambda(float(du[6]), float(du[7]), shell)
            if not (rate > 0.0):
                raise NonMonotoneTime(
                    f"dT/dlambda = {rate!r} at lambda = {lam!r} (strict mode)")

    grid = _sample_grid(span, opts.sample_interval)
    sol = solve_dopri5(f, (0.0, span), _vector_from_state(initial),
                       tol=opts.tol, max_step=opts.max_step,
                       t_eval=grid, on_step=on_step)

    samples = []
    for lam, u in zip(sol.t, sol.y):
        state = _state_from_vector(float(lam), u)
        F, G = quadrature_rates(state, shell, model)
        samples.append(TrajectorySample(state=state, F=F, G=G))

    seg_starts = np.array([s.t0 for s in sol.segments])
    return Trajectory(
        shell=shell, model=model, samples=tuple(samples),
        segments=tuple(sol.segments), n_accepted=sol.n_accepted,
        n_rejected=sol.n_rejected, opts=opts, _seg_starts=seg_starts,
    )


def _synchronized_sample(state: ReducedState, F: float, G: float,
                         shell: MassShell) -> TrajectorySample:
    M, M2, nu = shell.M, shell.M2, shell.nu
    lam = state.lambda_
    # z.P = 0 along the whole slice pins tau1 - tau2; constants vanish at
    # lambda = 0 where both quadratures start from zero.
    delta = -(2.0 / M2) * (nu * lam + state.intG)
    tau1 = 0.5 * (lam + delta)
    tau2 = 0.5 * (lam - delta)
    QdotP = 0.5 * nu * delta + 0.25 * M2 * lam + state.intF
    T = QdotP / M
    rate = dT_dlambda(F, G, shell)
    return TrajectorySample(
        state=state, F=F, G=G, zdotP=0.0, QdotP=QdotP,
        tau1=tau1, tau2=tau2, T=T, dTdlambda=rate,
        flagged=not (rate > 0.0),
    )


def synchronize(traj: Trajectory) -> Trajectory:
    """Fill tau1, tau2, T and the clock rate on every sample.

    Returns a new trajectory; the monotone flag records whether T is
    strictly increasing with a positive rate throughout.  Strict-mode
    trajectories raise NonMonotoneTime instead of carrying flags.
    """
    if traj.synchronized:
        return traj
    new_samples = []
    monotone = True
    prev_T = None
    for s in traj.samples:
        ns = _synchronized_sample(s.state, s.F, s.G, traj.shell)
        if ns.flagged:
            monotone = False
        if prev_T is not None and not (ns.T > prev_T):
            monotone = False
        prev_T = ns.T
        new_samples.append(ns)
    if traj.opts.strict_time and not monotone:
        worst = min(ns.dTdlambda for ns in new_samples)
        raise NonMonotoneTime(f"min dT/dlambda = {worst!r} (strict mode)")
    return replace(traj, samples=tuple(new_samples), synchronized=True,
                   monotone=monotone)


def require_synchronized(traj: Trajectory) -> None:
    if not traj.synchronized:
        raise NotSynchronized("call synchronize(trajectory) first")
