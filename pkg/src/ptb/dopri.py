"""Adaptive Dormand-Prince 5(4) integrator.

Embedded explicit Runge-Kutta pair with FSAL, PI step-size control
(Lund stabilization) and the quartic dense-output interpolant.  The driver
lands exactly on requested sample points, so emitted samples are genuine
solution points rather than interpolated ones; the dense segments are kept
for root finding between samples.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import OutOfRange, StepFailure

__all__ = ["DenseSegment", "DopriResult", "solve_dopri5"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = tuple(np.array(row) for row in (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
))
# fifth-order weights coincide with the last A row (FSAL)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference to the embedded fourth-order solution
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
               -17253 / 339200, 22 / 525, -1 / 40])
# dense-output weights for the deviation polynomial
_D = np.array([
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
])

# controller constants; the estimate is compared against tol * h (error per
# unit t), so the controlled quantity err/h scales like h^4 and the PI
# exponent follows the effective order 4
_SAFETY = 0.9
_BETA = 0.04
_EXPO1 = 0.25 - _BETA * 0.75
_FAC_SHRINK = 5.0   # step never shrinks by more than this factor at once
_FAC_GROW = 10.0    # nor grows by more


@dataclass(frozen=True)
class DenseSegment:
    """Quartic interpolant over one accepted step [t0, t0 + h]."""

    t0: float
    h: float
    r: np.ndarray  # (5, n)

    def __call__(self, t: float) -> np.ndarray:
        theta = (t - self.t0) / self.h
        th1 = 1.0 - theta
        r1, r2, r3, r4, r5 = self.r
        return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)))


@dataclass
class DopriResult:
    t: np.ndarray            # emitted sample times
    y: np.ndarray            # (len(t), n) sample states
    t_steps: np.ndarray      # accepted step endpoints including t0
    segments: list[DenseSegment]
    n_accepted: int
    n_rejected: int

    def __call__(self, t: float) -> np.ndarray:
        """Dense evaluation anywhere in the integrated span."""
        if not self.segments:
            raise OutOfRange("empty solution")
        lo = self.segments[0].t0
        hi = self.segments[-1].t0 + self.segments[-1].h
        if not (lo <= t <= hi):
            raise OutOfRange(f"t = {t!r} outside integrated span [{lo!r}, {hi!r}]")
        starts = self._starts
        i = min(max(bisect.bisect_right(starts, t) - 1, 0), len(self.segments) - 1)
        return self.segments[i](t)

    @property
    def _starts(self) -> list[float]:
        cached = getattr(self, "_starts_cache", None)
        if cached is None:
            cached = [s.t0 for s in self.segments]
            object.__setattr__(self, "_starts_cache", cached)
        return cached


def _initial_step(f, t0, y0, f0, tol, max_step, span):
    """Classic two-probe heuristic for the first step size."""
    sc = tol + tol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((y0 / sc) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span, max_step)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.25
    return min(100.0 * h0, h1, span, max_step)


def solve_dopri5(
    f: Callable[[float, np.ndarray], np.ndarray],
    t_span: tuple[float, float],
    y0,
    *,
    tol: float = 1e-10,
    max_step: float = math.inf,
    t_eval: Sequence[float] | None = None,
    on_step: Callable[[float, np.ndarray, np.ndarray], None] | None = None,
    max_steps: int = 10_000_000,
) -> DopriResult:
    """Integrate y' = f(t, y) from t_span[0] to t_span[1].

    tol is the error target per unit t, applied absolutely and relatively
    alike, so the accumulated deviation scales like tol times span.  When
    t_eval is given (sorted, inside the span) the stepper shortens steps to
    land exactly on each entry and emits the propagated state there;
    otherwise every accepted step is emitted.  on_step(t, y, dy) runs after
    each accepted step with the fresh derivative (FSAL stage), which is how
    callers watch derived quantities without extra evaluations.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError(f"need t1 > t0, got {t_span!r}")
    y = np.asarray(y0, dtype=float).copy()
    if y.ndim != 1:
        raise ValueError("y0 must be one-dimensional")

    eval_pts: list[float] | None = None
    if t_eval is not None:
        eval_pts = [float(t) for t in t_eval]
        if any(b <= a for a, b in zip(eval_pts, eval_pts[1:])):
            raise ValueError("t_eval must be strictly increasing")
        if eval_pts and (eval_pts[0] < t0 or eval_pts[-1] > t1 * (1 + 1e-15) + 1e-300):
            raise ValueError("t_eval must lie within t_span")

    out_t: list[float] = []
    out_y: list[np.ndarray] = []
    eval_idx = 0

    def emit(tc: float, yc: np.ndarray):
        out_t.append(tc)
        out_y.append(yc.copy())

    if eval_pts is None:
        emit(t0, y)
    else:
        while eval_idx < len(eval_pts) and eval_pts[eval_idx] <= t0:
            emit(t0, y)
            eval_idx += 1

    t = t0
    k1 = np.asarray(f(t, y), dtype=float)
    h = _initial_step(f, t0, y, k1, tol, max_step, t1 - t0)
    facold = 1e-4
    just_rejected = False
    segments: list[DenseSegment] = []
    t_steps = [t0]
    n_accepted = 0
    n_rejected = 0
    K = np.empty((7, y.size))

    while t < t1:
        if n_accepted + n_rejected >= max_steps:
            raise StepFailure(f"step budget {max_steps} exhausted at t = {t!r}")
        if h < 1e-14 * max(abs(t), 1.0):
            raise StepFailure(f"step size underflow at t = {t!r} (h = {h!r})")

        # shorten to land exactly on the next target (sample point or t1)
        target = t1
        if eval_pts is not None and eval_idx < len(eval_pts):
            target = min(target, eval_pts[eval_idx])
        h_try = min(h, max_step, target - t)
        landed = h_try >= target - t
        t_new = target if landed else t + h_try
        h_used = t_new - t

        K[0] = k1
        for i in range(1, 7):
            yi = y + h_used * (_A[i] @ K[:i])
            K[i] = f(t + _C[i] * h_used, yi)
        y_new = y + h_used * (_B @ K)
        # the 7th stage sits at t_new with argument y_new already (FSAL)
        err_vec = h_used * (_E @ K)
        sc = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        # error per unit step: global drift stays proportional to tol * span
        err = math.sqrt(float(np.mean((err_vec / sc) ** 2))) / h_used

        if err <= 1.0:
            # dense-output coefficients for this step
            ydiff = y_new - y
            bspl = h_used * K[0] - ydiff
            r = np.empty((5, y.size))
            r[0] = y
            r[1] = ydiff
            r[2] = bspl
            r[3] = ydiff - h_used * K[6] - bspl
            r[4] = h_used * (_D @ K)
            segments.append(DenseSegment(t, h_used, r))
            t_steps.append(t_new)
            n_accepted += 1
            if on_step is not None:
                on_step(t_new, y_new, K[6])
            if eval_pts is None:
                emit(t_new, y_new)
            else:
                while eval_idx < len(eval_pts) and eval_pts[eval_idx] <= t_new:
                    emit(t_new, y_new)
                    eval_idx += 1
            t = t_new
            y = y_new
            k1 = K[6].copy()
            # PI update (Lund stabilization)
            fac11 = err ** _EXPO1
            fac = fac11 / facold ** _BETA
            fac = max(1.0 / _FAC_GROW, min(_FAC_SHRINK, fac / _SAFETY))
            h_next = h_used / fac
            if just_rejected:
                h_next = min(h_next, h_used)
            facold = max(err, 1e-4)
            h = h_next
            just_rejected = False
        else:
            n_rejected += 1
            fac11 = err ** _EXPO1
            h = h_used / min(_FAC_SHRINK, fac11 / _SAFETY)
            just_rejected = True

    return DopriResult(
        t=np.array(out_t),
        y=np.array(out_y) if out_y else np.empty((0, y.size)),
        t_steps=np.array(t_steps),
        segments=segments,
        n_accepted=n_accepted,
        n_rejected=n_rejected,
    )
