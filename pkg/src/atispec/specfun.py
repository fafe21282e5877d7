"""Special functions for two-harmonic phase modulation problems.

Provides the ordinary Bessel function J_n(x), the complex three-argument
generalized Bessel function J_n(u, v, delta) that arises when a plane-wave
phase carries both sin(theta) and sin(2*theta) harmonics, the Airy function
Ai(x), and the large-order Airy approximation of J_N(x).

Two independent evaluation routes are kept for the generalized function:
a truncated bilinear series over ordinary Bessel factors, and a trapezoid
quadrature of the defining oscillatory integral (spectrally accurate for
periodic integrands).  The quadrature route is the validation oracle and
never shares code with the series route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "BesselRangeError",
    "SeriesConvergenceError",
    "SeriesControl",
    "GenBesselArgs",
    "DEFAULT_CONTROL",
    "ordinary_bessel",
    "gen_bessel",
    "gen_bessel_real",
    "gen_bessel_orders",
    "gen_bessel_quadrature",
    "airy_ai",
    "airy_ai_asymptotic",
    "bessel_airy_approx",
    "set_bessel_fault",
]

# supported box for the ordinary Bessel function
MAX_ORDER = 2000
MAX_ARGUMENT = 5000.0


class BesselRangeError(ValueError):
    """Order or argument outside the supported evaluation box."""


class SeriesConvergenceError(RuntimeError):
    """Series truncation failed to converge; carries the residual estimate."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class SeriesControl:
    """Truncation and quadrature knobs.

    rel_tol     relative truncation tolerance for the series tail
    abs_floor   values below this magnitude are treated as zero
    max_terms   hard cap on one-sided series length
    quad_points minimum number of quadrature nodes (even)
    """

    rel_tol: float = 1e-12
    abs_floor: float = 1e-12
    max_terms: int = 40000
    quad_points: int = 256

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise ValueError(f"rel_tol must be in (0, 1e-6], got {self.rel_tol}")
        if self.quad_points < 64 or self.quad_points % 2:
            raise ValueError(f"quad_points must be even and >= 64, got {self.quad_points}")
        if self.abs_floor <= 0.0:
            raise ValueError("abs_floor must be positive")
        if self.max_terms < 16:
            raise ValueError("max_terms too small")


DEFAULT_CONTROL = SeriesControl()


def _reduce_angle(delta: float) -> float:
    # reduce to (-pi, pi]
    d = math.remainder(delta, 2.0 * math.pi)
    if d <= -math.pi:
        d += 2.0 * math.pi
    return d


def phase_exp(m, delta: float):
    """exp(i m delta) for integer m, exact at the special angles 0, +-pi,
    +-pi/2 (the angles produced by pure linear/circular polarization, where
    spurious phase roundoff would otherwise leak into real quantities)."""
    m = np.asarray(m)
    if delta == 0.0:
        out = np.ones(m.shape)
    elif abs(delta) == math.pi:
        out = np.where(m % 2 == 0, 1.0, -1.0)
    elif abs(delta) == math.pi / 2:
        sign = 1.0 if delta > 0 else -1.0
        table = np.array([1 + 0j, sign * 1j, -1 + 0j, -sign * 1j])
        out = table[np.asarray(m) % 4]
    else:
        out = np.exp(1j * m * delta)
    return out if out.ndim else out[()]


@dataclass(frozen=True)
class GenBesselArgs:
    """Argument bundle (n, u, v, delta) with delta reduced to (-pi, pi]."""

    n: int
    u: float
    v: float
    delta: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.u, self.v, self.delta)):
            raise ValueError("generalized Bessel arguments must be finite")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "delta", _reduce_angle(float(self.delta)))


# --------------------------------------------------------------------------
# ordinary Bessel function

_FAULT_EPS = 0.0


def set_bessel_fault(eps: float) -> None:
    """Testing hook: perturb J_n(x) by a relative, order/argument-dependent
    amount ~eps.  Used by the self-test to prove the identity checks trip.
    Never enable outside of fault-injection tests."""
    global _FAULT_EPS
    _FAULT_EPS = float(eps)


def _jn(n, x):
    """J_n(x) for integer order(s); internal primitive shared by the series
    route (so that an injected fault propagates everywhere it should)."""
    val = sp.jv(n, x)
    if _FAULT_EPS != 0.0:
        val = val * (1.0 + _FAULT_EPS * np.cos(1.3 * np.asarray(n, dtype=float) + 0.7 * np.asarray(x, dtype=float)))
    return val


def ordinary_bessel(n: int, x: float) -> float:
    """Ordinary Bessel function J_n(x) of integer order.

    Supported box: |n| <= 2000, |x| <= 5000.  Double precision throughout;
    accuracy is at machine level relative to the oscillation envelope
    sqrt(2/(pi x)), which near isolated zeros of J_n at |x| >~ 2000 amounts
    to ~11 significant digits of the point value.
    """
    if not math.isfinite(x):
        raise BesselRangeError(f"argument must be finite, got {x}")
    n = int(n)
    if abs(n) > MAX_ORDER or abs(x) > MAX_ARGUMENT:
        raise BesselRangeError(
            f"J_{n}({x}) outside supported box |n|<={MAX_ORDER}, |x|<={MAX_ARGUMENT}"
        )
    return float(_jn(n, x))


# --------------------------------------------------------------------------
# generalized Bessel function: series route

def _series_k_start(v: float) -> int:
    av = abs(v)
    return int(math.ceil(av + 10.0 * av ** (1.0 / 3.0) + 10.0))


def gen_bessel_orders(
    n_lo: int,
    n_hi: int,
    u: float,
    v: float,
    delta: float,
    control: SeriesControl | None = None,
) -> np.ndarray:
    """J_n(u, v, delta) for all integer n in [n_lo, n_hi] at once.

    Evaluates the bilinear series sum_k exp(-2ik delta) J_{n-2k}(u) J_k(v),
    truncated at |k| <= K.  K starts at ceil(|v| + 10|v|^(1/3) + 10) and is
    enlarged until the tail bound drops below rel_tol of the running sums
    (with abs_floor as the small-value cutoff).  One truncation index is
    shared by the whole order range; the tail bound max_n |J_{n-2k}(u)| <= 1
    makes it independent of n and u.
    """
    ctl = control or DEFAULT_CONTROL
    args = GenBesselArgs(0, u, v, delta)  # validate/normalize
    u, v, delta = args.u, args.v, args.delta
    n_lo, n_hi = int(n_lo), int(n_hi)
    if n_hi < n_lo:
        raise ValueError("empty order range")

    k_cap = max((ctl.max_terms - 1) // 2, 1)
    K = min(_series_k_start(v), k_cap)
    while True:
        ks = np.arange(-K, K + 1)
        jk = _jn(ks, v)
        orders = np.arange(n_lo - 2 * K, n_hi + 2 * K + 1)
        if orders[0] < -2 * MAX_ORDER or orders[-1] > 2 * MAX_ORDER:
            raise BesselRangeError("series requires ordinary-Bessel orders beyond the supported box")
        ju = _jn(orders, u)
        ns = np.arange(n_lo, n_hi + 1)
        idx = (ns[:, None] - 2 * ks[None, :]) - orders[0]
        weights = jk * phase_exp(-2 * ks, delta)
        out = (ju[idx] * weights[None, :]).sum(axis=1)

        tail = 2.0 * (abs(_jn(K + 1, v)) + abs(_jn(K + 2, v)))
        bound = ctl.rel_tol * max(float(np.max(np.abs(out))), ctl.abs_floor)
        if tail <= bound:
            return out.astype(complex, copy=False)
        if K >= k_cap:
            raise SeriesConvergenceError(
                f"generalized Bessel series not converged within max_terms={ctl.max_terms}",
                tail,
            )
        K = min(int(K * 1.5) + 8, k_cap)


def gen_bessel(
    n: int, u: float, v: float, delta: float, control: SeriesControl | None = None
) -> complex:
    """Complex generalized Bessel function J_n(u, v, delta).

    Reduces exactly to J_n(u) at v = 0 and, at u = 0, to
    exp(-i n delta) J_{n/2}(v) for even n (zero for odd n).
    """
    return complex(gen_bessel_orders(int(n), int(n), u, v, delta, control)[0])


def gen_bessel_real(
    n: int, u: float, v: float, control: SeriesControl | None = None
) -> float:
    """Real generalized Bessel function J_n(u, v) = J_n(u, v, 0).

    At delta = 0 every series term is real; the imaginary part is exactly
    zero and an assertion guards the abs_floor contract.
    """
    ctl = control or DEFAULT_CONTROL
    z = gen_bessel(n, u, v, 0.0, ctl)
    if abs(z.imag) > ctl.abs_floor:
        raise SeriesConvergenceError("real generalized Bessel has nonzero imaginary part", abs(z.imag))
    return z.real


# --------------------------------------------------------------------------
# generalized Bessel function: quadrature oracle

def quadrature_points(n: int, u: float, v: float, minimum: int = 64) -> int:
    """Node count giving spectral accuracy for the periodic integrand."""
    m = 2 * (abs(int(n)) + math.ceil(abs(u)) + 2 * math.ceil(abs(v))) + max(minimum, 64)
    return m + (m % 2)


def gen_bessel_quadrature(
    n: int, u: float, v: float, delta: float, control: SeriesControl | None = None
) -> complex:
    """Oracle evaluation of J_n(u, v, delta) by trapezoid quadrature of

        (2 pi)^-1 integral_{-pi}^{pi} exp[i(u sin(t + delta)
                                            + v sin 2t - n(t + delta))] dt.

    The integrand is entire and 2*pi periodic, so the equispaced trapezoid
    rule converges faster than any power of the node count once the node
    count exceeds the integrand bandwidth; the node formula is
    2(|n| + ceil|u| + 2 ceil|v|) + max(quad_points, 64).
    """
    ctl = control or DEFAULT_CONTROL
    args = GenBesselArgs(n, u, v, delta)
    n, u, v, delta = args.n, args.u, args.v, args.delta
    m = quadrature_points(n, u, v, ctl.quad_points)
    t = -np.pi + 2.0 * np.pi * np.arange(m) / m
    phase = u * np.sin(t + delta) + v * np.sin(2.0 * t) - n * (t + delta)
    return complex(np.exp(1j * phase).mean())


# --------------------------------------------------------------------------
# Airy function and the large-order Bessel approximation

def airy_ai(x):
    """Airy function Ai(x); scalar in, scalar out (arrays pass through)."""
    val = sp.airy(x)[0]
    if np.ndim(x) == 0:
        return float(val)
    return val


def airy_ai_asymptotic(x):
    """Leading large-x decay branch x^(-1/4) exp(-2 x^(3/2) / 3) / (2 sqrt(pi)).

    Within 0.5% of Ai(x) for x >= 8; used for tunneling-limit checks.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("asymptotic branch defined for x > 0")
    val = x ** -0.25 * np.exp(-2.0 * x ** 1.5 / 3.0) / (2.0 * np.sqrt(np.pi))
    return float(val) if val.ndim == 0 else val


def bessel_airy_approx(n: int, x: float) -> float:
    """Large-order approximation J_N(x) ~ (2/N)^(1/3) Ai[(N/2)^(2/3) (1 - x^2/N^2)].

    Valid near and below the turning point x ~ N; accuracy is a few percent
    for N >= 50 and x/N in [0.8, 1).  A small overshoot past x = N is
    allowed since the Airy argument just goes negative there.
    """
    n = int(n)
    if n < 1:
        raise ValueError("order must be >= 1")
    if not (0.0 <= x < 1.1 * n):
        raise ValueError(f"argument {x} outside [0, 1.1*N) for N={n}")
    arg = (n / 2.0) ** (2.0 / 3.0) * (1.0 - (x / n) ** 2)
    return (2.0 / n) ** (1.0 / 3.0) * airy_ai(arg)
