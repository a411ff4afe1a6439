"""Classicalizing-kick distributions, mass geometries, and elementary rates.

The modification is parametrized by an isotropic Gaussian phase-space kick
distribution for a reference particle (the electron): position kicks with
per-component standard deviation sigma_s, momentum kicks with sigma_q, and
a coherence time parameter tau_e.  A point particle of mass M sees the
rescaled parameters tau = tau_e (m_e/M)^2 and sigma_s_eff = (m_e/M) sigma_s.

For a rigid compound the center-of-mass rate is reduced by the mean squared
normalized structure factor <|rho~(q)/M|^2> taken over the momentum-kick
Gaussian.  All such averages are evaluated here through exact
autocorrelation representations, which turn every oscillatory Fourier
average into a smooth one-dimensional integral:

  - cuboid edge / disc thickness:  <sinc^2(q b/2hbar) e^{iqx/hbar}> =
        int_{-1}^{1} (1-|t|) exp(-(a t - xh)^2/2) dt,
    with a = sigma_q b/hbar and xh = sigma_q x/hbar;
  - sphere and disc cross sections: the Fourier transform of |F|^2 is the
    body's self-overlap (lens) volume, so the Gaussian average becomes a
    radial integral of the overlap fraction against a Gaussian kernel.

Coherence losses (1 - gtilde) are computed directly in expm1-stable form;
the exponents can be as small as 1e-15 and would vanish in a naive
subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .constants import HBAR, M_ELECTRON
from .errors import DomainError
from .numerics import (
    DEFAULT_REL_TOL,
    bessel_i0e,
    bessel_i1e,
    bessel_j1,
    erf,
    integrate_1d,
    sinc,
)

__all__ = [
    "KickParams",
    "ParameterBounds",
    "DEFAULT_BOUNDS",
    "SQUID_BOUNDS",
    "Point",
    "Sphere",
    "Cuboid",
    "Disc",
    "MassGeometry",
    "EffectivePointParams",
    "rescale_to_mass",
    "structure_factor",
    "mean_sq_structure",
    "effective_tau",
    "gamma_cube",
    "disc_rate",
    "gtilde_1d",
    "one_minus_gtilde",
    "free_flight_blur",
    "free_flight_decay_exponent",
    "position_decoherence_rate",
    "energy_gain_rate",
]


@dataclass(frozen=True)
class KickParams:
    """Kick distribution parameters for the reference particle.

    sigma_s, sigma_q are per-Cartesian-component standard deviations of the
    position and momentum kicks; tau_e is the coherence time parameter.
    The reference mass defaults to the electron mass and exists as a field
    only because physical predictions must not depend on its choice.
    """

    sigma_s: float          # [m]
    sigma_q: float          # [kg m/s]
    tau_e: float            # [s]
    ref_mass: float = M_ELECTRON

    def __post_init__(self):
        if self.sigma_s < 0 or self.sigma_q < 0:
            raise DomainError("kick standard deviations must be >= 0")
        if not self.tau_e > 0:
            raise DomainError("tau_e must be positive")
        if not self.ref_mass > 0:
            raise DomainError("reference mass must be positive")

    @property
    def critical_length(self) -> float:
        """hbar/sigma_q; superpositions wider than this decohere at full rate."""
        return HBAR / self.sigma_q if self.sigma_q > 0 else math.inf


@dataclass(frozen=True)
class ParameterBounds:
    """Admissible-parameter region used when maximizing the excluded tau_e."""

    sigma_s_max: float            # [m]
    hbar_over_sigma_q_min: float  # [m]
    preset: str = "custom"

    def __post_init__(self):
        if not (self.sigma_s_max > 0 and self.hbar_over_sigma_q_min > 0):
            raise DomainError("bounds must be positive")


# Nuclear structure enters below ~10 fm momentum resolution and ~20 pm
# nucleon-rescaled displacements; the SQUID analysis uses the 1 A variant.
DEFAULT_BOUNDS = ParameterBounds(2.0e-11, 1.0e-14, preset="default")
SQUID_BOUNDS = ParameterBounds(1.0e-10, 1.0e-10, preset="squid")


def _positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive")
    return float(value)


@dataclass(frozen=True)
class Point:
    mass: float

    def __post_init__(self):
        _positive("mass", self.mass)

    @property
    def characteristic_size(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Sphere:
    mass: float
    radius: float

    def __post_init__(self):
        _positive("mass", self.mass)
        _positive("radius", self.radius)

    @property
    def characteristic_size(self) -> float:
        return self.radius


@dataclass(frozen=True)
class Cuboid:
    """Homogeneous cuboid; edge_a lies along the 1D interference axis."""

    mass: float
    edge_a: float
    edge_b: float
    edge_c: float

    def __post_init__(self):
        _positive("mass", self.mass)
        for e in (self.edge_a, self.edge_b, self.edge_c):
            _positive("edge", e)

    @property
    def characteristic_size(self) -> float:
        return min(self.edge_a, self.edge_b, self.edge_c)


@dataclass(frozen=True)
class Disc:
    """Homogeneous disc; the symmetry axis is the 1D motion axis."""

    mass: float
    radius: float
    thickness: float

    def __post_init__(self):
        _positive("mass", self.mass)
        _positive("radius", self.radius)
        _positive("thickness", self.thickness)

    @property
    def characteristic_size(self) -> float:
        return self.thickness


MassGeometry = Union[Point, Sphere, Cuboid, Disc]


@dataclass(frozen=True)
class EffectivePointParams:
    tau: float
    sigma_s_eff: float
    sigma_q: float
    mass: float


def rescale_to_mass(kick: KickParams, mass: float) -> EffectivePointParams:
    """Point-particle rescaling to mass M: tau_e (m_e/M)^2, (m_e/M) sigma_s."""
    if not mass > 0:
        raise DomainError("mass must be positive")
    ratio = kick.ref_mass / mass
    return EffectivePointParams(
        tau=kick.tau_e * ratio * ratio,
        sigma_s_eff=kick.sigma_s * ratio,
        sigma_q=kick.sigma_q,
        mass=mass,
    )


# --- structure factors -------------------------------------------------------

def _ball_form_factor(u):
    """3 (sin u - u cos u)/u^3, the normalized sphere transform."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-3
    us = np.where(small, 1.0, u)
    series = 1.0 - u * u / 10.0 + u ** 4 / 280.0
    exact = 3.0 * (np.sin(us) - us * np.cos(us)) / us ** 3
    out = np.where(small, series, exact)
    return float(out) if out.ndim == 0 else out


def _disc_radial_form_factor(u):
    """2 J1(u)/u, the normalized transform of a uniform disc cross-section."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-6
    us = np.where(small, 1.0, u)
    out = np.where(small, 1.0 - u * u / 8.0, 2.0 * bessel_j1(us) / us)
    return float(out) if out.ndim == 0 else out


def structure_factor(geom: MassGeometry, q_vec) -> float:
    """Normalized mass-density Fourier transform rho~(q)/M at momentum q.

    q_vec is a 3-component momentum [kg m/s]; cuboid edges lie along the
    coordinate axes (edge_a along x) and the disc axis along z.
    """
    q = np.asarray(q_vec, dtype=float)
    if q.shape != (3,):
        raise DomainError("q_vec must have 3 components")
    if isinstance(geom, Point):
        return 1.0
    if isinstance(geom, Sphere):
        return float(_ball_form_factor(np.linalg.norm(q) * geom.radius / HBAR))
    if isinstance(geom, Cuboid):
        args = q * np.array([geom.edge_a, geom.edge_b, geom.edge_c]) / (2 * HBAR)
        return float(np.prod(sinc(args)))
    if isinstance(geom, Disc):
        axial = sinc(q[2] * geom.thickness / (2 * HBAR))
        qr = math.hypot(q[0], q[1])
        return float(axial * _disc_radial_form_factor(qr * geom.radius / HBAR))
    raise DomainError(f"unknown geometry {type(geom).__name__}")


# --- Gaussian averages via autocorrelation kernels ---------------------------

def _lncosh(y):
    """log cosh(y); series below 0.05 avoids cancellation against log 2."""
    y = np.abs(np.asarray(y, dtype=float))
    small = y < 0.05
    ys = np.where(small, 0.0, y)
    y2 = y * y
    series = y2 / 2.0 - y2 * y2 / 12.0 + y2 ** 3 / 45.0
    big = ys + np.log1p(np.exp(-2.0 * ys)) - math.log(2.0)
    return np.where(small, series, big)


def _ln_sinhc(rho):
    """log(sinh(rho)/rho), stable for all rho >= 0."""
    rho = np.asarray(rho, dtype=float)
    small = rho < 0.05
    rs = np.where(small, 1.0, rho)
    r2 = rho * rho
    series = r2 / 6.0 - r2 * r2 / 180.0
    big = rs + np.log1p(-np.exp(-2.0 * rs)) - math.log(2.0) - np.log(rs)
    return np.where(small, series, big)


def _edge_points(a, xhat):
    """Initial split points for the triangle-kernel integral."""
    pts = []
    if a > 3.0:
        center = xhat / a
        for off in (-8.0, -3.0, 0.0, 3.0, 8.0):
            p = center + off / a
            if 0.0 < p < 1.0:
                pts.append(p)
        if not 0.0 < center < 1.0 and 8.0 / a < 1.0:
            pts.append(8.0 / a)
    return pts


def _edge_kernel(a: float, xhat: float, rel_tol=DEFAULT_REL_TOL) -> float:
    """<sinc^2(q b/2hbar) cos(q x/hbar)> under the Gaussian momentum marginal.

    Equal to int_{-1}^{1} (1-|t|) exp(-(a t - xhat)^2 / 2) dt with
    a = sigma_q b / hbar, xhat = sigma_q x / hbar.
    """
    if a == 0.0:
        return math.exp(-0.5 * xhat * xhat)

    def integrand(t):
        u = a * t
        return (1.0 - t) * (np.exp(-0.5 * (u - xhat) ** 2)
                            + np.exp(-0.5 * (u + xhat) ** 2))

    res = integrate_1d(integrand, 0.0, 1.0, rel_tol, points=_edge_points(a, xhat))
    return res.value


def _edge_one_minus_chi(a: float, xhat: float, norm: float,
                        rel_tol=DEFAULT_REL_TOL) -> float:
    """1 - <sinc^2 cos(qx/hbar)>/<sinc^2>, stable for tiny exponents."""
    if xhat == 0.0:
        return 0.0
    if a == 0.0:
        return -math.expm1(-0.5 * xhat * xhat)

    def integrand(t):
        u = a * t
        base = -0.5 * u * u
        y = u * xhat
        # exp(base) - exp(base)*cosh(y)*exp(-xhat^2/2), organised so that
        # neither branch cancels: expm1 handles the nearly-equal case, the
        # explicit two-Gaussian difference the well-resolved one.
        arg = _lncosh(y) - 0.5 * xhat * xhat
        resolved = (arg > 30.0) | (y > 1e6)
        with np.errstate(over="ignore", invalid="ignore"):
            near = np.exp(base) * (-np.expm1(np.where(resolved, 0.0, arg)))
        far = np.exp(base) - 0.5 * (np.exp(-0.5 * (u - xhat) ** 2)
                                    + np.exp(-0.5 * (u + xhat) ** 2))
        return 2.0 * (1.0 - t) * np.where(resolved, far, near)

    res = integrate_1d(integrand, 0.0, 1.0, rel_tol, points=_edge_points(a, xhat))
    return res.value / norm


def _sphere_overlap(r, radius):
    """Self-overlap volume fraction of a ball displaced by r."""
    x = np.asarray(r, dtype=float) / radius
    return np.where(x < 2.0, 1.0 - 0.75 * x + x ** 3 / 16.0, 0.0)


def _disc_overlap(r, radius):
    """Self-overlap area fraction of a disc cross-section displaced by r."""
    rho = np.clip(np.asarray(r, dtype=float) / (2.0 * radius), 0.0, 1.0)
    return (2.0 / math.pi) * (np.arccos(rho) - rho * np.sqrt(1.0 - rho * rho))


def _sphere_mean_sq(radius: float, length: float,
                    rel_tol=DEFAULT_REL_TOL) -> float:
    """<F_ball^2> over the isotropic Gaussian; length = hbar/sigma_q."""
    R = radius

    def integrand(r):
        return (3.0 / R ** 3) * r * r * _sphere_overlap(r, R) * \
            np.exp(-0.5 * (r / length) ** 2)

    hi = min(2.0 * R, 9.5 * length)
    if hi <= 0.0:
        return 1.0
    res = integrate_1d(integrand, 0.0, hi, rel_tol)
    return res.value


def _sphere_one_minus_chi(radius: float, length: float, x: float,
                          rel_tol=DEFAULT_REL_TOL) -> float:
    """1 - <F^2 cos(q_x x/hbar)>/<F^2> for a sphere.

    In the resolved limit x >> hbar/sigma_q the characteristic function
    tends to the sphere's self-overlap fraction at displacement x, so for
    separations below the diameter it does not vanish.
    """
    if x == 0.0:
        return 0.0
    R = radius
    L = length
    L2 = L * L
    norm = _sphere_mean_sq(radius, length, rel_tol)

    def integrand(r):
        rho = r * x / L2
        arg = _ln_sinhc(rho) - 0.5 * x * x / L2
        base = -0.5 * r * r / L2
        resolved = (arg > 30.0) | (rho > 1e6)
        with np.errstate(over="ignore", invalid="ignore"):
            near = np.exp(base) * (-np.expm1(np.where(resolved, 0.0, arg)))
            # kernel written as exp(-(r-x)^2/2L^2)(1-e^{-2rho})/(2rho), whose
            # exponents stay accurate when rho overflows the lncosh route
            far = np.exp(base) - np.exp(
                -0.5 * ((r - x) / L) ** 2
                + np.log1p(-np.exp(-2.0 * np.where(resolved, rho, 1.0)))
                - np.log(2.0 * np.where(resolved, rho, 1.0)))
        diff = np.where(resolved, far, near)
        return (3.0 / R ** 3) * r * r * _sphere_overlap(r, R) * diff

    hi = 2.0 * R
    pts = [p for p in (x - 6 * L, x - 2 * L, x, x + 2 * L, x + 6 * L,
                       9.5 * L) if 0.0 < p < hi]
    res = integrate_1d(integrand, 0.0, hi, rel_tol, points=pts)
    return res.value / norm


def _disc_radial_mean_sq(radius: float, length: float,
                         rel_tol=DEFAULT_REL_TOL) -> float:
    """<(2 J1/u)^2> over the in-plane Gaussian; length = hbar/sigma_q."""
    R = radius

    def integrand(r):
        return (2.0 / R ** 2) * r * _disc_overlap(r, R) * \
            np.exp(-0.5 * (r / length) ** 2)

    hi = min(2.0 * R, 9.5 * length)
    if hi <= 0.0:
        return 1.0
    res = integrate_1d(integrand, 0.0, hi, rel_tol)
    return res.value


def gamma_cube(a: float) -> float:
    """Geometry factor <sinc^2(q b/2hbar)> for one cuboid edge, a = sigma_q b/hbar.

    gamma = (2/a^2) [exp(-a^2/2) + sqrt(pi/2) a erf(a/sqrt(2)) - 1],
    with the Taylor limit 1 - a^2/12 + a^4/120 near a = 0.
    """
    if a < 0:
        raise DomainError("a must be >= 0")
    if a < 1e-3:
        a2 = a * a
        return 1.0 - a2 / 12.0 + a2 * a2 / 120.0
    a2 = a * a
    return (2.0 / a2) * (math.exp(-0.5 * a2)
                         + math.sqrt(math.pi / 2.0) * a * erf(a / math.sqrt(2.0))
                         - 1.0)


def _disc_bracket(z: float) -> float:
    """(2/z) [1 - e^-z I0(z) - e^-z I1(z)] with its small-z limit."""
    if z < 1e-5:
        return 1.0 - 0.5 * z + (5.0 / 24.0) * z * z
    return 2.0 * (1.0 - bessel_i0e(z) - bessel_i1e(z)) / z


def mean_sq_structure(geom: MassGeometry, kick: KickParams) -> float:
    """<|rho~(q)/M|^2> under the isotropic Gaussian momentum kicks."""
    if isinstance(geom, Point) or kick.sigma_q == 0.0:
        return 1.0
    L = kick.critical_length
    if isinstance(geom, Sphere):
        return _sphere_mean_sq(geom.radius, L)
    if isinstance(geom, Cuboid):
        out = 1.0
        for edge in (geom.edge_a, geom.edge_b, geom.edge_c):
            out *= _edge_kernel(edge / L, 0.0)
        return out
    if isinstance(geom, Disc):
        return _edge_kernel(geom.thickness / L, 0.0) * \
            _disc_radial_mean_sq(geom.radius, L)
    raise DomainError(f"unknown geometry {type(geom).__name__}")


def effective_tau(geom: MassGeometry, kick: KickParams) -> float:
    """Effective coherence time of the compound's center of mass.

    1/tau = (1/tau_e) (M/m_e)^2 <|rho~(q)/M|^2>; the average is evaluated by
    quadrature of the defining reduction, so closed-form rates (gamma_cube,
    disc_rate) can be cross-checked against it.
    """
    ratio = kick.ref_mass / geom.mass
    return kick.tau_e * ratio * ratio / mean_sq_structure(geom, kick)


def disc_rate(geom: Disc, kick: KickParams) -> float:
    """Disc coherence time from the closed scaled-Bessel form.

    1/tau = (2 gamma / tau_e)(M/m_e)^2 z^-1 [1 - i0e(z) - i1e(z)] with
    z = (sigma_q R / hbar)^2 and gamma the thickness geometry factor.
    """
    ratio = kick.ref_mass / geom.mass
    base = kick.tau_e * ratio * ratio
    if kick.sigma_q == 0.0:
        return base
    L = kick.critical_length
    z = (geom.radius / L) ** 2
    gamma = gamma_cube(geom.thickness / L)
    return base / (gamma * _disc_bracket(z))


# --- reduced 1D transforms and coherence losses ------------------------------

def _chi_axis(geom: MassGeometry, kick: KickParams, x: float) -> float:
    """Characteristic function of the 1D momentum-kick marginal at x."""
    if kick.sigma_q == 0.0:
        return 1.0
    L = kick.critical_length
    xhat = x / L
    if isinstance(geom, Point):
        return math.exp(-0.5 * xhat * xhat)
    if isinstance(geom, Sphere):
        return 1.0 - _sphere_one_minus_chi(geom.radius, L, x)
    if isinstance(geom, Cuboid):
        a = geom.edge_a / L
        return _edge_kernel(a, xhat) / _edge_kernel(a, 0.0)
    if isinstance(geom, Disc):
        a = geom.thickness / L
        return _edge_kernel(a, xhat) / _edge_kernel(a, 0.0)
    raise DomainError(f"unknown geometry {type(geom).__name__}")


def _one_minus_chi_axis(geom: MassGeometry, kick: KickParams, x: float) -> float:
    """1 - chi, computed without cancellation for tiny exponents."""
    if kick.sigma_q == 0.0 or x == 0.0:
        return 0.0
    L = kick.critical_length
    xhat = x / L
    if isinstance(geom, Point):
        return -math.expm1(-0.5 * xhat * xhat)
    if isinstance(geom, Sphere):
        return _sphere_one_minus_chi(geom.radius, L, x)
    if isinstance(geom, Cuboid):
        a = geom.edge_a / L
        return _edge_one_minus_chi(a, xhat, _edge_kernel(a, 0.0))
    if isinstance(geom, Disc):
        a = geom.thickness / L
        return _edge_one_minus_chi(a, xhat, _edge_kernel(a, 0.0))
    raise DomainError(f"unknown geometry {type(geom).__name__}")


def _p_exponent(geom: MassGeometry, kick: KickParams, p: float) -> float:
    """Exponent of the position-kick factor, m_e^2 sigma_s^2 p^2 / 2 M^2 hbar^2."""
    y = kick.ref_mass * kick.sigma_s * p / (geom.mass * HBAR)
    return 0.5 * y * y


def gtilde_1d(geom: MassGeometry, kick: KickParams, x: float, p: float) -> float:
    """Reduced Fourier transform g~_1D(x, p) of the effective kick distribution.

    Real and bounded by 1 in modulus; equals 1 at (0, 0).  The 1D axis is
    the cuboid's edge_a or the disc's symmetry axis.
    """
    return math.exp(-_p_exponent(geom, kick, p)) * _chi_axis(geom, kick, x)


def one_minus_gtilde(geom: MassGeometry, kick: KickParams,
                     x: float, p: float) -> float:
    """1 - g~_1D(x, p) in cancellation-free form."""
    omc = _one_minus_chi_axis(geom, kick, x)
    pexp = _p_exponent(geom, kick, p)
    if pexp == 0.0:
        return omc
    return omc + (1.0 - omc) * (-math.expm1(-pexp))


def free_flight_decay_exponent(x: float, T1: float, T2: float,
                               geom: MassGeometry, kick: KickParams) -> float:
    """Exponent D in the blur factor R(x) = exp(-D) for two flight segments.

    D = sum_i (T_i/tau) int_0^1 [1 - g~_1D(x z, M x / T_i)] dz, where the
    path separation opens linearly to x over each segment.
    """
    if T1 <= 0 or T2 <= 0:
        raise DomainError("flight times must be positive")
    if kick.sigma_q == 0.0 and kick.sigma_s == 0.0:
        return 0.0
    tau = effective_tau(geom, kick)
    M = geom.mass
    L = kick.critical_length
    total = 0.0
    for T in (T1, T2):
        p = M * x / T
        if x == 0.0:
            total += (T / tau) * one_minus_gtilde(geom, kick, 0.0, p)
            continue

        def integrand(z):
            return np.array([one_minus_gtilde(geom, kick, x * zi, p)
                             for zi in np.atleast_1d(z)])

        pts = [v for v in (0.3 * L / abs(x), 3.0 * L / abs(x), 9.0 * L / abs(x))
               if 0.0 < v < 1.0]
        res = integrate_1d(integrand, 0.0, 1.0, DEFAULT_REL_TOL, points=pts)
        total += (T / tau) * res.value
    return total


def free_flight_blur(x: float, T1: float, T2: float,
                     geom: MassGeometry, kick: KickParams) -> float:
    """Interference blur factor R(x) in (0, 1]."""
    return math.exp(-free_flight_decay_exponent(x, T1, T2, geom, kick))


def position_decoherence_rate(geom: MassGeometry, kick: KickParams,
                              dx: float) -> float:
    """Decay rate of a static superposition separated by dx (diffusion neglected).

    Gamma = (1/tau) [1 - <cos(q dx/hbar)>] under the effective distribution.
    """
    if dx < 0:
        raise DomainError("dx must be >= 0")
    if dx == 0.0 or kick.sigma_q == 0.0:
        return 0.0
    return _one_minus_chi_axis(geom, kick, dx) / effective_tau(geom, kick)


def energy_gain_rate(mass: float, omega: float, kick: KickParams) -> float:
    """Mean energy gain per unit time of a (1D) harmonically bound particle.

    (sigma_q^2/2M + M omega^2 sigma_s_eff^2/2)/tau with the mass-rescaled
    sigma_s_eff and tau; omega = 0 gives the free-particle heating rate.
    """
    if omega < 0:
        raise DomainError("omega must be >= 0")
    eff = rescale_to_mass(kick, mass)
    per_kick = kick.sigma_q ** 2 / (2.0 * mass) \
        + 0.5 * mass * omega ** 2 * eff.sigma_s_eff ** 2
    return per_kick / eff.tau
