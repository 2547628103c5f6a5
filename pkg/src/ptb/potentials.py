"""Unipotential interaction models.

A model is a scalar function V(P^2, ztil^2, ytil^2, ztil.ytil, w) together
with its five analytic partial derivatives.  The sign convention follows the
reduced equations of motion: the nonrelativistic potential corresponding to
V is -V, so an attractive inverse-power model needs g < 0 in
CentralPowerPotential (dV/dztil2 > 0 is what makes orbits turn).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadParameter, DomainError
from .kinematics import ScalarQuintet

__all__ = [
    "PotentialEval",
    "PotentialSpec",
    "FreePotential",
    "HarmonicPotential",
    "CentralPowerPotential",
    "builtin",
]


@dataclass(frozen=True)
class PotentialEval:
    """Value of V and its partials with respect to the five scalars."""

    value: float
    dP2: float
    dztil2: float
    dytil2: float
    dzy: float
    dw: float


class PotentialSpec:
    """Interface for interaction models.

    Flags describe structure the solvers rely on:
      central        - dV/dytil2 == 0 and dV/dzy == 0 identically
      p2_independent - dV/dP2 == 0 identically (F quadrature vanishes)
      w_independent  - dV/dw == 0 identically (G quadrature vanishes)
    """

    name: str = "potential"
    central: bool = False
    p2_independent: bool = False
    w_independent: bool = False

    def evaluate(self, q: ScalarQuintet) -> PotentialEval:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.name}

    def __repr__(self) -> str:
        params = {k: v for k, v in self.describe().items() if k != "kind"}
        inner = ", ".join(f"{k}={v}" for k, v in params.items())
        return f"{type(self).__name__}({inner})"


class FreePotential(PotentialSpec):
    """V = 0; both particles move freely."""

    name = "free"
    central = True
    p2_independent = True
    w_independent = True

    def evaluate(self, q: ScalarQuintet) -> PotentialEval:
        return PotentialEval(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


class HarmonicPotential(PotentialSpec):
    """V = chi * sqrt(P^2) * ztil2 with chi > 0.

    chi is a plain number in natural units (an inverse length times the
    collective mass scale); since ztil2 < 0 for spacelike separations the
    value is negative, i.e. the nonrelativistic counterpart -V is the usual
    attractive spring.
    """

    name = "harmonic"
    central = True
    w_independent = True

    def __init__(self, chi: float):
        chi = float(chi)
        if not math.isfinite(chi) or chi <= 0.0:
            raise BadParameter(f"harmonic model needs chi > 0, got {chi!r}")
        self.chi = chi

    def evaluate(self, q: ScalarQuintet) -> PotentialEval:
        if q.P2 <= 0.0:
            raise DomainError(f"harmonic model requires P2 > 0, got {q.P2!r}")
        root = math.sqrt(q.P2)
        return PotentialEval(
            value=self.chi * root * q.ztil2,
            dP2=self.chi * q.ztil2 / (2.0 * root),
            dztil2=self.chi * root,
            dytil2=0.0,
            dzy=0.0,
            dw=0.0,
        )

    def describe(self) -> dict:
        return {"kind": self.name, "chi": self.chi}


class CentralPowerPotential(PotentialSpec):
    """V = -g * sqrt(P^2) / rho**n with rho = sqrt(-ztil2) and integer n >= 1.

    With this sign convention g < 0 is the attractive case (circular orbits
    exist); g > 0 is repulsive.
    """

    name = "central_power"
    central = True
    w_independent = True

    def __init__(self, g: float, n: int):
        g = float(g)
        if not math.isfinite(g) or g == 0.0:
            raise BadParameter(f"central_power needs finite nonzero g, got {g!r}")
        if int(n) != n or n < 1:
            raise BadParameter(f"central_power needs integer n >= 1, got {n!r}")
        self.g = g
        self.n = int(n)

    def evaluate(self, q: ScalarQuintet) -> PotentialEval:
        if q.P2 <= 0.0:
            raise DomainError(f"central_power requires P2 > 0, got {q.P2!r}")
        rho2 = -q.ztil2
        if rho2 <= 0.0:
            raise DomainError(
                f"central_power requires spacelike separation ztil2 < 0, got {q.ztil2!r}")
        value = -self.g * math.sqrt(q.P2) * rho2 ** (-0.5 * self.n)
        return PotentialEval(
            value=value,
            dP2=value / (2.0 * q.P2),
            dztil2=0.5 * self.n * value / rho2,
            dytil2=0.0,
            dzy=0.0,
            dw=0.0,
        )

    def describe(self) -> dict:
        return {"kind": self.name, "g": self.g, "n": self.n}


_BUILTINS = {"free", "harmonic", "central_power"}


def builtin(name: str, **params) -> PotentialSpec:
    """Construct a builtin model by name; unknown names or stray parameters
    raise BadParameter."""
    if name == "free":
        extra = set(params)
    elif name == "harmonic":
        if "chi" not in params:
            raise BadParameter("harmonic model needs parameter chi")
        extra = set(params) - {"chi"}
    elif name == "central_power":
        missing = {"g", "n"} - set(params)
        if missing:
            raise BadParameter(f"central_power needs parameters {sorted(missing)}")
        extra = set(params) - {"g", "n"}
    else:
        raise BadParameter(f"unknown potential {name!r}, expected one of {sorted(_BUILTINS)}")
    if extra:
        raise BadParameter(f"unexpected parameters for {name!r}: {sorted(extra)}")
    if name == "free":
        return FreePotential()
    if name == "harmonic":
        return HarmonicPotential(params["chi"])
    return CentralPowerPotential(params["g"], params["n"])
