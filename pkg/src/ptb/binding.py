"""Self-consistent collective mass.

The shell fixes M from (m1, m2, lambda); an orbit fixes lambda from its
state, lambda = |eta|^2 - 2 V, with V evaluated at P2 = M^2.  Closing the
loop is a one-dimensional fixed point in M.  Plain iteration converges for
every model we ship; a bracketing fallback covers the rest.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Tuple

from scipy.optimize import brentq

from .circular import CircularOrbit, find_circular
from .errors import NoRoot
from .kinematics import ScalarQuintet
from .mass_shell import MassShell, lambda_from_M2, mass_shell_from_lambda
from .potentials import PotentialSpec

__all__ = [
    "lambda_shell",
    "binding_energy",
    "self_consistent_M",
    "self_consistent_shell",
    "self_consistent_circular",
]


def lambda_shell(m1: float, m2: float, M: float) -> float:
    """Interaction strength the shell needs to produce collective mass M."""
    return lambda_from_M2(m1, m2, M * M)


def binding_energy(shell: MassShell) -> float:
    """m1 + m2 - M; positive for bound configurations."""
    from .mass_shell import mass_excess
    return -mass_excess(shell.m1, shell.m2, shell.lambda_)


def self_consistent_M(m1: float, m2: float,
                      lambda_of_M: Callable[[float], float], *,
                      rtol: float = 1e-13, max_iter: int = 100) -> float:
    """Solve M = M_shell(m1, m2, lambda_of_M(M)).

    Fixed-point iteration with mild damping after the first few sweeps;
    falls back to bracketing the residual on a log grid around m1 + m2.
    """
    M = m1 + m2
    for k in range(max_iter):
        try:
            M_new = mass_shell_from_lambda(m1, m2, lambda_of_M(M)).M
        except Exception:
            break
        if abs(M_new - M) <= rtol * M_new:
            return M_new
        M = M_new if k < 8 else 0.5 * (M + M_new)
    return _bracketed_M(m1, m2, lambda_of_M)


def _bracketed_M(m1, m2, lambda_of_M):
    def g(M):
        return mass_shell_from_lambda(m1, m2, lambda_of_M(M)).M - M

    scale = m1 + m2
    grid = [scale * math.exp(u) for u in
            [x * 0.1 for x in range(-40, 41)]]
    prev = None
    for M in grid:
        try:
            val = g(M)
        except Exception:
            prev = None
            continue
        if val == 0.0:
            return M
        if prev is not None and prev[1] * val < 0.0:
            return brentq(g, prev[0], M, xtol=1e-15, rtol=8.9e-16)
        prev = (M, val)
    raise NoRoot("no self-consistent collective mass found near m1 + m2")


def _state_lambda(model: PotentialSpec, nu: float,
                  zeta0: Sequence[float], eta0: Sequence[float]) -> Callable[[float], float]:
    z2 = sum(c * c for c in zeta0)
    e2 = sum(c * c for c in eta0)
    ze = sum(a * b for a, b in zip(zeta0, eta0))

    def lam(M: float) -> float:
        M2 = M * M
        q = ScalarQuintet(P2=M2, ztil2=-z2, ytil2=-e2, zy=-ze,
                          w=nu * nu / M2, yP=nu)
        return e2 - 2.0 * model.evaluate(q).value

    return lam


def self_consistent_shell(m1: float, m2: float, model: PotentialSpec,
                          zeta0: Sequence[float], eta0: Sequence[float],
                          **kw) -> MassShell:
    """Shell whose lambda matches the orbit constraint at the given state."""
    nu = 0.5 * (m1 * m1 - m2 * m2)
    lam = _state_lambda(model, nu, zeta0, eta0)
    if model.p2_independent and model.w_independent:
        # lambda does not feed back into itself; one pass is exact
        return mass_shell_from_lambda(m1, m2, lam(m1 + m2))
    M = self_consistent_M(m1, m2, lam, **kw)
    return mass_shell_from_lambda(m1, m2, lam(M))


def self_consistent_circular(m1: float, m2: float, model: PotentialSpec,
                             l2: float, **kw) -> Tuple[MassShell, CircularOrbit]:
    """Circular orbit whose radius, shell and lambda agree simultaneously."""
    nu = 0.5 * (m1 * m1 - m2 * m2)

    def lam(M: float) -> float:
        M2 = M * M
        shell_M = mass_shell_from_lambda(m1, m2, lambda_from_M2(m1, m2, M2))
        orbit = find_circular(model, shell_M, l2)
        q = ScalarQuintet(P2=M2, ztil2=-orbit.rho * orbit.rho,
                          ytil2=-l2 / (orbit.rho * orbit.rho), zy=0.0,
                          w=nu * nu / M2, yP=nu)
        return orbit.speed2 - 2.0 * model.evaluate(q).value

    M = self_consistent_M(m1, m2, lam, **kw)
    shell = mass_shell_from_lambda(m1, m2, lam(M))
    return shell, find_circular(model, shell, l2)
