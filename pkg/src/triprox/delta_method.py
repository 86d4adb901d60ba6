"""Smooth weights and the divisor-kernel h behind the delta-symbol expansion.

The Kronecker delta of an integer l admits the expansion

    delta_l = c_Q * Q^-2 * sum_{q>=1} c_q(l) * h(q/Q, l/Q^2),

where c_q(l) is a Ramanujan sum, c_Q = 1 + O_N(Q^-N), and h is built from a
bump rescaled to have support in (1/2, 1).  The q-sum is finite: h(x, y)
vanishes for x > max(1, 2|y|), so only q up to max(Q, 2|l|/Q) contribute.

``delta_series`` returns the raw sum (delta_l / c_Q), which should be close
to 1 at l = 0 and vanishes identically for l != 0; c_Q itself has no closed
form and is only ever estimated empirically as 1/raw(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad

from .arith import ramanujan_sum


def bump(x: float) -> float:
    """The standard C-infinity bump: exp(-1/(1-x^2)) for |x| < 1, else 0."""
    if abs(x) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - x * x))


def bump_integral(tol: float = 1e-12) -> float:
    """Integral of the bump over the real line, by adaptive quadrature on [-1, 1]."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    value, err = quad(bump, -1.0, 1.0, epsabs=tol, limit=200)
    if not math.isfinite(value) or err > max(tol * 100.0, 1e-9):
        raise ArithmeticError(f"quadrature did not converge: value={value}, err={err}")
    return value


@lru_cache(maxsize=None)
def _c0(tol: float = 1e-12) -> float:
    return bump_integral(tol)


def window(x: float, c0: float | None = None) -> float:
    """Unit-mass window supported in (1/2, 1): 4/c0 * bump(4x - 3)."""
    if c0 is None:
        c0 = _c0()
    return 4.0 / c0 * bump(4.0 * x - 3.0)


def kernel_h(x: float, y: float, c0: float | None = None) -> float:
    """h(x, y) = sum_{j>0} (1/(xj)) * (window(xj) - window(|y|/(xj))), for x > 0.

    Evaluated as an exact finite sum: window has support in (1/2, 1), so only
    j with xj in (1/2, 1) or |y|/(xj) in (1/2, 1) -- two explicit integer
    windows -- can contribute.  In particular h(x, y) = 0 whenever
    x > max(1, 2|y|).
    """
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if c0 is None:
        c0 = _c0()
    ay = abs(y)
    lo1 = max(1, math.floor(0.5 / x) - 1)
    hi1 = math.ceil(1.0 / x) + 1
    js = set(range(lo1, hi1 + 1))
    if ay > 0:
        lo2 = max(1, math.floor(ay / x) - 1)
        hi2 = math.ceil(2.0 * ay / x) + 1
        js.update(range(lo2, hi2 + 1))
    total = 0.0
    for j in sorted(js):
        xj = x * j
        total += (window(xj, c0) - window(ay / xj, c0)) / xj
    return total


@dataclass(frozen=True)
class KernelConfig:
    """Shared constants for delta-series evaluations."""

    c0: float
    quadrature_abs_tol: float
    Q: float
    q_max: int

    @classmethod
    def build(cls, Q: float, tol: float = 1e-12, q_max: int | None = None) -> "KernelConfig":
        if Q < 2:
            raise ValueError(f"Q must be >= 2, got {Q}")
        if q_max is None:
            q_max = math.ceil(2 * Q)
        if q_max < Q:
            raise ValueError(f"q_max={q_max} must be >= Q={Q}")
        c0 = _c0(tol)
        if c0 <= 0:
            raise ArithmeticError("bump integral must be positive")
        return cls(c0=c0, quadrature_abs_tol=tol, Q=float(Q), q_max=q_max)


def delta_series(l: int, Q: float | None = None, q_max: int | None = None,
                 config: KernelConfig | None = None) -> float:
    """raw(l) = Q^-2 * sum_{q=1..q_max} c_q(l) * h(q/Q, l/Q^2).

    The unit sum over d mod q is collapsed to the Ramanujan closed form, so
    no floating-point phase summation enters.  raw(l) equals delta_l / c_Q;
    the default q_max = ceil(2Q) is exhaustive for |l| <= Q^2 / 2.
    """
    if config is None:
        if Q is None:
            raise ValueError("provide either Q or a KernelConfig")
        config = KernelConfig.build(Q, q_max=q_max)
    Qf = config.Q
    total = 0.0
    for q in range(1, config.q_max + 1):
        cq = ramanujan_sum(q, l)
        if cq != 0:
            total += cq * kernel_h(q / Qf, l / Qf**2, config.c0)
    return total / Qf**2
