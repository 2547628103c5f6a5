"""Mass-shell algebra for the two-body system.

Given constituent masses m1 <= m2 and the binding first integral lambda,
the collective mass M solves the quartic

    M^4 - 4 (mu + lambda) M^2 + 4 nu^2 = 0,

with mu = (m1^2 + m2^2)/2 and nu = (m1^2 - m2^2)/2 <= 0.  Only the plus
root is physical: the minus root always violates the strict positivity of
the individual energies E_a = M/2 +- nu/M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    BadParameter,
    EnergyConditionViolation,
    LambdaBoundViolation,
    MassBoundViolation,
)

__all__ = [
    "MassShell",
    "mass_shell_from_lambda",
    "lambda_from_M2",
    "mass_excess",
    "nonrel_check",
    "individual_energy_limits",
]

_REL_SLACK = 1e-12


@dataclass(frozen=True)
class MassShell:
    """Frozen result of the shell solve.

    lambda_ is the binding first integral (-N on trajectories); E1 and E2
    are the individual rest-frame energies, E1 <= E2 for m1 <= m2.
    """

    m1: float
    m2: float
    mu: float
    nu: float
    lambda_: float
    M2: float
    M: float
    E1: float
    E2: float

    def quartic_residual(self) -> float:
        return self.M2 * self.M2 - 4.0 * (self.mu + self.lambda_) * self.M2 + 4.0 * self.nu ** 2


def _check_masses(m1: float, m2: float) -> tuple[float, float]:
    if not (math.isfinite(m1) and math.isfinite(m2)):
        raise BadParameter("masses must be finite")
    if not (0.0 < m1 <= m2):
        raise BadParameter(f"masses must satisfy 0 < m1 <= m2, got ({m1!r}, {m2!r})")
    mu = 0.5 * (m1 * m1 + m2 * m2)
    nu = 0.5 * (m1 * m1 - m2 * m2)
    return mu, nu


def mass_shell_from_lambda(m1: float, m2: float, lambda_: float) -> MassShell:
    """Solve the shell for M given (m1, m2, lambda).

    Raises LambdaBoundViolation when m1^2 + lambda <= 0 (for sorted masses
    this is the same inequality as mu + lambda > |nu|, so it also covers the
    reality of the square root).  The energy condition M^2 > 2|nu| then holds
    automatically; it is asserted defensively.
    """
    mu, nu = _check_masses(m1, m2)
    lam = float(lambda_)
    slack = _REL_SLACK * max(m1 * m1, abs(lam))
    if not (m1 * m1 + lam > slack):
        raise LambdaBoundViolation(
            f"requires m1^2 + lambda > 0, got {m1 * m1 + lam!r}")
    s = mu + lam
    r = math.sqrt(s * s - nu * nu)
    M2 = 2.0 * (s + r)
    if not (M2 > 2.0 * abs(nu) + _REL_SLACK * M2):
        # unreachable once the lambda bound holds; kept as a tripwire
        raise EnergyConditionViolation(
            f"requires M^2 > 2|nu|, got M^2 = {M2!r}, 2|nu| = {2.0 * abs(nu)!r}")
    M = math.sqrt(M2)
    return MassShell(
        m1=float(m1), m2=float(m2), mu=mu, nu=nu, lambda_=lam,
        M2=M2, M=M, E1=0.5 * M + nu / M, E2=0.5 * M - nu / M,
    )


def lambda_from_M2(m1: float, m2: float, M2: float) -> float:
    """Invert the shell: lambda = M^2/4 + nu^2/M^2 - mu.

    The two preconditions M^2 > 2|nu| and M^2 > m2^2 - m1^2 coincide for
    sorted masses; their violation raises MassBoundViolation.
    """
    mu, nu = _check_masses(m1, m2)
    M2 = float(M2)
    if not (M2 > 2.0 * abs(nu) + _REL_SLACK * max(M2, m2 * m2)):
        raise MassBoundViolation(
            f"requires M^2 > m2^2 - m1^2 = 2|nu|, got M^2 = {M2!r}, 2|nu| = {2.0 * abs(nu)!r}")
    return 0.25 * M2 + nu * nu / M2 - mu


def mass_excess(m1: float, m2: float, lambda_: float) -> float:
    """M - m1 - m2, computed without cancellation.

    Uses M^2 - (m1+m2)^2 = 2 lambda (1 + (2 mu + lambda)/(r + m1 m2)) with
    r = sqrt((mu+lambda)^2 - nu^2), which keeps full precision down to
    lambda = 0 where the excess vanishes.
    """
    mu, nu = _check_masses(m1, m2)
    shell = mass_shell_from_lambda(m1, m2, lambda_)
    lam = float(lambda_)
    r = math.sqrt((mu + lam) ** 2 - nu * nu)
    diff2 = 2.0 * lam * (1.0 + (2.0 * mu + lam) / (r + m1 * m2))
    return diff2 / (shell.M + m1 + m2)


def nonrel_check(m1: float, m2: float, lambda_: float) -> float:
    """Ratio (M - m1 - m2) * 2 m0 / lambda with m0 the reduced mass.

    Tends to 1 as lambda -> 0.  The cancellation-free form factors out
    lambda, so the value at lambda = 0 is exactly the limit and no division
    guard is needed.
    """
    mu, nu = _check_masses(m1, m2)
    shell = mass_shell_from_lambda(m1, m2, lambda_)
    lam = float(lambda_)
    m0 = m1 * m2 / (m1 + m2)
    r = math.sqrt((mu + lam) ** 2 - nu * nu)
    return 4.0 * m0 * (1.0 + (2.0 * mu + lam) / (r + m1 * m2)) / (shell.M + m1 + m2)


def individual_energy_limits(m1: float, m2: float, lambda_: float) -> tuple[float, float]:
    """(E1 - m1, E2 - m2): how far each energy sits from its rest mass.

    Both vanish at lambda = 0 and their sum is the mass excess.
    """
    shell = mass_shell_from_lambda(m1, m2, lambda_)
    return shell.E1 - m1, shell.E2 - m2
