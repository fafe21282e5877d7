"""Laser-field / atom parameterization and per-channel relativistic kinematics.

Natural units throughout: hbar = c = 1, electron mass m = 1, e^2 = alpha.
The wave propagates along +z; the polarization unit vectors are e1 = x and
e2 = y, so a direction is (theta, phi) with polar angle theta measured from
the wave vector and azimuth phi from e1.

An electron dressed by a plane wave of invariant intensity xi carries the
cycle-averaged quasimomentum Pi = p + k Z (1 + zeta^2) with
Z = xi^2 m^2 / (4 k.p) and moves on the shifted shell Pi^2 = m*^2 with the
effective mass m* = sqrt(1 + xi^2 (1 + zeta^2) / 2).  A channel that
absorbed N photons has quasienergy Pi0 = eps0 + N omega and hands the
recoil three-momentum g = Pi - N k to the atomic remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import E_CHARGE, FINE_STRUCTURE

__all__ = [
    "BelowThresholdError",
    "ChannelExplosionError",
    "LaserField",
    "Atom",
    "DerivedParams",
    "ChannelKinematics",
    "effective_mass",
    "threshold_n",
    "derive_params",
    "channel_kinematics",
]

DEFAULT_CHANNEL_CAP = 10_000_000


class BelowThresholdError(ValueError):
    """Requested channel lies below the photon-number threshold."""

    def __init__(self, n, n_min):
        super().__init__(f"channel N={n} below threshold N0={n_min}")
        self.n = n
        self.n_min = n_min


class ChannelExplosionError(RuntimeError):
    """Parameters produce intractably many open channels."""


@dataclass(frozen=True)
class LaserField:
    """Plane-wave laser field.

    omega  photon energy in electron-mass units
    xi     invariant intensity parameter e*A0/m (dimensionless)
    zeta   polarization parameter: 0 linear, +-1 circular, else elliptic
    """

    omega: float
    xi: float
    zeta: float

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not (self.xi >= 0.0 and math.isfinite(self.xi)):
            raise ValueError(f"xi must be >= 0, got {self.xi}")
        if not abs(self.zeta) <= 1.0:
            raise ValueError(f"|zeta| must be <= 1, got {self.zeta}")

    @classmethod
    def circular(cls, omega, xi):
        return cls(omega, xi, 1.0)

    @classmethod
    def linear(cls, omega, xi):
        return cls(omega, xi, 0.0)


@dataclass(frozen=True)
class Atom:
    """Hydrogen-like initial state.

    z_a        nuclear charge number
    e_b        binding energy in electron-mass units
    hydrogenic True when e_b was derived as z_a^2 alpha^2 / 2
    """

    z_a: int
    e_b: float
    hydrogenic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "z_a", int(self.z_a))
        if self.z_a < 1:
            raise ValueError("z_a must be a positive integer")
        if not (0.0 < self.e_b < 1.0):
            raise ValueError(f"binding energy must be in (0, 1) mass units, got {self.e_b}")

    @classmethod
    def from_charge(cls, z_a: int) -> "Atom":
        """Ground-state binding energy z_a^2 alpha^2 / 2."""
        return cls(z_a, z_a**2 * FINE_STRUCTURE**2 / 2.0, hydrogenic=True)

    @classmethod
    def with_binding(cls, z_a: int, e_b: float) -> "Atom":
        """Explicit binding energy; clears the hydrogenic flag."""
        return cls(z_a, float(e_b), hydrogenic=False)

    @property
    def epsilon0(self) -> float:
        """Bound-state energy 1 - E_B."""
        return 1.0 - self.e_b

    @property
    def a(self) -> float:
        """Bound-state radius, 2 E_B a^2 = 1."""
        return 1.0 / math.sqrt(2.0 * self.e_b)


def effective_mass(field: LaserField) -> float:
    return math.sqrt(1.0 + field.xi**2 * (1.0 + field.zeta**2) / 2.0)


def threshold_n(field: LaserField, atom: Atom) -> int:
    """Smallest photon number with eps0 + N omega >= m*."""
    return int(math.ceil((effective_mass(field) - atom.epsilon0) / field.omega))


@dataclass(frozen=True)
class DerivedParams:
    """Field/atom derived quantities.

    m_star      effective mass
    alpha_prime xi^2 m^2 / (4 omega eps0)
    n0          threshold photon number
    f0          laser electric field strength omega m xi / e
    f_at        atomic field strength z_a^3 m^2 e^5
    born_ratio  z_a alpha / v at the spectral peak = z_a alpha sqrt(1+xi^2)/xi
    v_mean      peak photoelectron speed xi / sqrt(1 + xi^2)
    born_ok     True when born_ratio is below the configured limit
    """

    m_star: float
    alpha_prime: float
    n0: int
    f0: float
    f_at: float
    born_ratio: float
    v_mean: float
    born_ok: bool


def derive_params(
    field: LaserField,
    atom: Atom,
    born_limit: float = 0.2,
    n0_cap: int = DEFAULT_CHANNEL_CAP,
) -> DerivedParams:
    """Populate DerivedParams; raises ChannelExplosionError when the
    threshold photon number exceeds n0_cap."""
    m_star = effective_mass(field)
    n0 = threshold_n(field, atom)
    if n0 > n0_cap:
        raise ChannelExplosionError(
            f"threshold photon number {n0} exceeds cap {n0_cap}"
        )
    xi = field.xi
    alpha_prime = xi**2 / (4.0 * field.omega * atom.epsilon0)
    f0 = field.omega * xi / E_CHARGE
    f_at = atom.z_a**3 * E_CHARGE**5
    if xi > 0.0:
        v_mean = xi / math.sqrt(1.0 + xi**2)
        born_ratio = atom.z_a * FINE_STRUCTURE / v_mean
    else:
        v_mean = 0.0
        born_ratio = math.inf
    return DerivedParams(
        m_star=m_star,
        alpha_prime=alpha_prime,
        n0=n0,
        f0=f0,
        f_at=f_at,
        born_ratio=born_ratio,
        v_mean=v_mean,
        born_ok=born_ratio <= born_limit,
    )


@dataclass(frozen=True)
class ChannelKinematics:
    """Per-channel kinematics for emission direction (theta, phi).

    n           net absorbed photon number (continuous values allowed for
                saddle/steepest-descent work; physical channels are integers)
    pi0         quasienergy eps0 + N omega
    pi_abs      |Pi| = sqrt(pi0^2 - m*^2)
    k_dot_pi    omega (pi0 - |Pi| cos theta)
    big_z       Z = xi^2 m^2 / (4 k.Pi)
    g_sq        |Pi - N k|^2, squared recoil momentum
    alpha_amp   field-electron coupling amplitude
                xi |Pi| sin(theta) sqrt(cos^2 phi + zeta^2 sin^2 phi) / k.Pi
    phase_angle atan2(zeta |Pi| sin theta sin phi, |Pi| sin theta cos phi)
    """

    n: float
    theta: float
    phi: float
    pi0: float
    pi_abs: float
    k_dot_pi: float
    big_z: float
    g_sq: float
    alpha_amp: float
    phase_angle: float


def channel_kinematics(
    field: LaserField, atom: Atom, n: float, theta: float, phi: float
) -> ChannelKinematics:
    """Kinematics of the channel (n, theta, phi).

    Raises BelowThresholdError when n is below the threshold photon number;
    the spectra layer catches this and reports an explicit zero instead.
    """
    n0 = threshold_n(field, atom)
    if n < n0:
        raise BelowThresholdError(n, n0)
    m_star = effective_mass(field)
    omega, xi = field.omega, field.xi
    pi0 = atom.epsilon0 + n * omega
    pi_abs = math.sqrt(max(pi0**2 - m_star**2, 0.0))
    ct, st = math.cos(theta), math.sin(theta)
    k_dot_pi = omega * (pi0 - pi_abs * ct)
    big_z = xi**2 / (4.0 * k_dot_pi)
    g_sq = pi_abs**2 - 2.0 * n * omega * pi_abs * ct + (n * omega) ** 2
    proj = math.sqrt(math.cos(phi) ** 2 + field.zeta**2 * math.sin(phi) ** 2)
    alpha_amp = xi * pi_abs * st * proj / k_dot_pi
    phase_angle = math.atan2(
        field.zeta * pi_abs * st * math.sin(phi), pi_abs * st * math.cos(phi)
    )
    return ChannelKinematics(
        n=n,
        theta=theta,
        phi=phi,
        pi0=pi0,
        pi_abs=pi_abs,
        k_dot_pi=k_dot_pi,
        big_z=big_z,
        g_sq=g_sq,
        alpha_amp=alpha_amp,
        phase_angle=phase_angle,
    )
