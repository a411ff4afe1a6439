"""Experiment records and their excluded-time-parameter maps.

Each record class knows how to convert an observed coherence fraction (or
coherence time, or heating bound) into the greatest excluded tau_e at given
kick widths (sigma_s, sigma_q).  Except for the membrane, whose 0/1-phonon
coherence decays algebraically, every class follows the common contract

    predicted coherence fraction = exp(-D / tau_e),

so the excluded time parameter is tau_e* = D / |ln f| with D evaluated at
tau_e = 1 s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .constants import E_CHARGE, HBAR, M_ELECTRON, PLANCK_H
from .errors import ConfigurationError, DomainError, ValidationError
from .kicks import (
    Cuboid,
    Disc,
    KickParams,
    MassGeometry,
    Point,
    Sphere,
    disc_rate,
    effective_tau,
    free_flight_decay_exponent,
    gamma_cube,
    gtilde_1d,
    one_minus_gtilde,
    position_decoherence_rate,
)
from .numerics import integrate_1d
from .squid import (
    ALUMINIUM,
    NIOBIUM,
    BcsAmplitudes,
    SquidGamma,
    SuperconductorMaterial,
    squid_gamma_hat,
)

__all__ = [
    "PointInterference",
    "GratingDiffraction",
    "TalbotLau",
    "Micromirror",
    "Membrane",
    "Squid",
    "GasHeating",
    "CatSuperposition",
    "ExperimentRecord",
    "mu_point",
    "excluded_tau_point",
    "interference_excluded_tau",
    "diffraction_pattern",
    "micromirror_excluded_tau",
    "membrane_excluded_tau",
    "squid_excluded_tau",
    "gas_heating_excluded_tau",
    "cat_excluded_tau",
    "excluded_tau",
    "SquidGamma",
    "squid_gamma_hat",
    "BcsAmplitudes",
    "SuperconductorMaterial",
    "NIOBIUM",
    "ALUMINIUM",
]


def _check_fraction(f):
    if not (0.0 < f < 1.0):
        raise ValidationError(f"coherence fraction must lie in (0,1), got {f}")


def _check_positive(name, value):
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class PointInterference:
    """Interferometer treated as a point mass holding coherence for a time.

    Covers Mach-Zehnder and Ramsey-Borde interferometers and BEC fringe
    experiments (whose classicalization reduces to a single-atom rate).
    ``separation`` is the maximum path separation, needed only for
    sigma_q-resolved exclusion curves; the path is modeled as a symmetric
    diamond that opens and closes linearly.
    """

    mass: float
    coherence_time: float
    fraction: float
    separation: Optional[float] = None

    def __post_init__(self):
        _check_positive("mass", self.mass)
        _check_positive("coherence_time", self.coherence_time)
        _check_fraction(self.fraction)
        if self.separation is not None:
            _check_positive("separation", self.separation)


@dataclass(frozen=True)
class GratingDiffraction:
    """Grating or double-slit diffraction with full signal-model parameters.

    Flight times may be given directly (T1, T2) or via distances and the
    mean speed.  ``fixed_separation`` pins the coherence separation used in
    the blur factor (e.g. the slit distance for the nanosphere double slit);
    otherwise the first-order path separation h*T2/(M*d) is used.
    """

    geometry: MassGeometry
    slit_count: int
    period: float
    fraction: float
    T1: Optional[float] = None
    T2: Optional[float] = None
    L1: Optional[float] = None
    L2: Optional[float] = None
    mean_speed: Optional[float] = None
    speed_fwhm: Optional[float] = None
    open_fraction: Optional[float] = None
    source_width: Optional[float] = None
    detector_width: Optional[float] = None
    fixed_separation: Optional[float] = None

    def __post_init__(self):
        if self.slit_count < 2:
            raise ValidationError("slit_count must be at least 2")
        _check_positive("period", self.period)
        _check_fraction(self.fraction)
        t1, t2 = self.flight_times
        _check_positive("T1", t1)
        _check_positive("T2", t2)

    @property
    def flight_times(self) -> tuple[float, float]:
        if self.T1 is not None and self.T2 is not None:
            return self.T1, self.T2
        if None in (self.L1, self.L2, self.mean_speed):
            raise ValidationError(
                "need either (T1, T2) or (L1, L2, mean_speed)")
        return self.L1 / self.mean_speed, self.L2 / self.mean_speed

    @property
    def mass(self) -> float:
        return self.geometry.mass


@dataclass(frozen=True)
class TalbotLau:
    """Symmetric Talbot-Lau interferometer (equal intervals T around the grating)."""

    geometry: MassGeometry
    pulse_separation: float
    period: float
    fraction: float

    def __post_init__(self):
        _check_positive("pulse_separation", self.pulse_separation)
        _check_positive("period", self.period)
        _check_fraction(self.fraction)

    @property
    def mass(self) -> float:
        return self.geometry.mass


@dataclass(frozen=True)
class Micromirror:
    """Photon-entangled oscillating micromirror (cube of edge b)."""

    edge: float
    density: float
    omega_m: float
    ground_amplitude: float
    coupling: float
    fidelity: float

    def __post_init__(self):
        for name in ("edge", "density", "omega_m", "ground_amplitude",
                     "coupling"):
            _check_positive(name, getattr(self, name))
        _check_fraction(self.fidelity)

    @property
    def mass(self) -> float:
        return self.density * self.edge ** 3

    @property
    def geometry(self) -> Cuboid:
        return Cuboid(self.mass, self.edge, self.edge, self.edge)


@dataclass(frozen=True)
class Membrane:
    """Oscillating micromembrane modeled as an axially vibrating disc."""

    radius: float
    thickness: float
    density: float
    omega_m: float
    cycles: float
    fidelity: float

    def __post_init__(self):
        for name in ("radius", "thickness", "density", "omega_m", "cycles"):
            _check_positive(name, getattr(self, name))
        _check_fraction(self.fidelity)

    @property
    def mass(self) -> float:
        return self.density * math.pi * self.radius ** 2 * self.thickness

    @property
    def geometry(self) -> Disc:
        return Disc(self.mass, self.radius, self.thickness)

    @property
    def ground_amplitude(self) -> float:
        """x0 = sqrt(2 hbar / M omega_m)."""
        return math.sqrt(2.0 * HBAR / (self.mass * self.omega_m))


@dataclass(frozen=True)
class Squid:
    """Persistent-current superposition in a superconducting loop."""

    material: SuperconductorMaterial
    loop_length: float
    cross_section: float
    coherence_time: float
    current_difference: float = 3e-6  # [A]

    def __post_init__(self):
        for name in ("loop_length", "cross_section", "coherence_time"):
            _check_positive(name, getattr(self, name))
        if self.current_difference < 0:
            raise ValidationError("current difference must be >= 0")

    @property
    def volume(self) -> float:
        return self.loop_length * self.cross_section

    @property
    def electron_number(self) -> float:
        return self.material.electron_density * self.volume

    @property
    def delta_k(self) -> float:
        """Fermi-sphere displacement difference [1/m] from the current difference."""
        current_density = self.current_difference / self.cross_section
        return M_ELECTRON * current_density / (
            HBAR * self.material.electron_density * E_CHARGE)


@dataclass(frozen=True)
class GasHeating:
    """Upper bound on the classicalization heating of a dilute gas."""

    mass: float
    energy_rate_bound: float  # [J/s] per atom

    def __post_init__(self):
        _check_positive("mass", self.mass)
        _check_positive("energy_rate_bound", self.energy_rate_bound)


@dataclass(frozen=True)
class CatSuperposition:
    """Spatial superposition of a water-sphere 'cat'."""

    mass: float
    separation: float
    hold_time: float
    density: float = 1000.0

    def __post_init__(self):
        _check_positive("mass", self.mass)
        _check_positive("separation", self.separation)
        _check_positive("hold_time", self.hold_time)
        _check_positive("density", self.density)

    @property
    def radius(self) -> float:
        return (3.0 * self.mass / (4.0 * math.pi * self.density)) ** (1.0 / 3.0)

    @property
    def geometry(self) -> Sphere:
        return Sphere(self.mass, self.radius)


ExperimentRecord = Union[
    PointInterference, GratingDiffraction, TalbotLau, Micromirror,
    Membrane, Squid, GasHeating, CatSuperposition,
]


# --- closed-form point treatment ---------------------------------------------

def excluded_tau_point(mass: float, t: float, fraction: float) -> float:
    """Resolved-path excluded time parameter |1/ln f| (M/m_e)^2 t."""
    _check_positive("mass", mass)
    _check_positive("t", t)
    if not (0.0 < fraction < 1.0):
        raise DomainError("fraction must lie in (0,1)")
    ratio = mass / M_ELECTRON
    return abs(1.0 / math.log(fraction)) * ratio * ratio * t


def mu_point(mass: float, t: float, fraction: float) -> float:
    """Macroscopicity of a point-particle interference experiment."""
    return math.log10(excluded_tau_point(mass, t, fraction))


# --- interference-class exclusion --------------------------------------------

def _unit_kick(sigma_s: float, sigma_q: float) -> KickParams:
    return KickParams(sigma_s=sigma_s, sigma_q=sigma_q, tau_e=1.0)


def interference_excluded_tau(record, sigma_s: float, sigma_q: float) -> float:
    """Excluded tau_e for free-flight interference (point, grating, Talbot-Lau)."""
    kick = _unit_kick(sigma_s, sigma_q)
    if isinstance(record, PointInterference):
        if record.separation is None:
            raise ConfigurationError(
                "record carries no path separation; the sigma_q-resolved "
                "exclusion curve is undefined")
        geom = Point(record.mass)
        half = 0.5 * record.coherence_time
        x = record.separation
        T1 = T2 = half
    elif isinstance(record, GratingDiffraction):
        geom = record.geometry
        T1, T2 = record.flight_times
        x = record.fixed_separation
        if x is None:
            x = PLANCK_H * T2 / (record.mass * record.period)
    elif isinstance(record, TalbotLau):
        geom = record.geometry
        T1 = T2 = record.pulse_separation
        x = PLANCK_H * record.pulse_separation / (record.mass * record.period)
    else:
        raise DomainError(f"not an interference record: {type(record).__name__}")
    exponent = free_flight_decay_exponent(x, T1, T2, geom, kick)
    return exponent / abs(math.log(record.fraction))


def micromirror_excluded_tau(record: Micromirror, sigma_s: float,
                             sigma_q: float) -> float:
    """Excluded tau_e from photon-interference fidelity after one mirror period.

    The entangled mirror follows x(xi) = 2 kappa x0 sin^2(xi/2) with momentum
    splitting p(xi) = (2 hbar kappa / x0) sin(xi); the fringe visibility
    after one period is reduced by exp(-D/tau_e) with
    D = (tau_e/tau)(1/omega_m) int_0^2pi [1 - g~_1D(x(xi), p(xi))] dxi.
    """
    kick = _unit_kick(sigma_s, sigma_q)
    geom = record.geometry
    tau = effective_tau(geom, kick)
    x0, kappa = record.ground_amplitude, record.coupling

    def integrand(xi):
        return np.array([
            one_minus_gtilde(geom, kick,
                             2.0 * kappa * x0 * math.sin(0.5 * z) ** 2,
                             (2.0 * HBAR * kappa / x0) * math.sin(z))
            for z in np.atleast_1d(xi)])

    # integrand is symmetric about xi = pi
    half = integrate_1d(integrand, 0.0, math.pi, 1e-6).value
    exponent = 2.0 * half / (record.omega_m * tau)
    return exponent / abs(math.log(record.fidelity))


def membrane_excluded_tau(record: Membrane, sigma_s: float,
                          sigma_q: float) -> float:
    """Excluded tau_e from 0/1-phonon coherence surviving n cycles.

    The momentum kicks act on the oscillator as an additive Gaussian noise
    channel; with nbar = (t/tau) (hbar/M omega_m) [1 - e^{-sigma_q^2 b^2 /
    2 hbar^2}] / (gamma b^2) added phonons, the 0/1 coherence decays by
    (1 + nbar)^-2, so the survival condition (1+nbar)^-2 >= f inverts to
    tau_e* = (tau_e/tau) t (x0^2 / 2 gamma b^2) [1 - e^{-sigma_q^2 b^2 /
    2 hbar^2}] / (f^{-1/2} - 1).  The position spread sigma_s is negligible
    at these masses and amplitudes.
    """
    if sigma_q == 0.0:
        return 0.0
    kick = _unit_kick(sigma_s, sigma_q)
    geom = record.geometry
    tau = disc_rate(geom, kick)
    b = record.thickness
    length = kick.critical_length
    gamma = gamma_cube(b / length)
    t = 2.0 * math.pi * record.cycles / record.omega_m
    x0 = record.ground_amplitude
    nbar_coeff = (t / tau) * (x0 ** 2 / (2.0 * gamma * b ** 2)) \
        * (-math.expm1(-0.5 * (b / length) ** 2))
    return nbar_coeff / (record.fidelity ** -0.5 - 1.0)


def squid_excluded_tau(record: Squid, sigma_s: float, sigma_q: float) -> float:
    """Excluded tau_e = Gamma*tau_e * T2 (parameters with Gamma > 1/T2 ruled out)."""
    return squid_gamma_hat(record, sigma_s, sigma_q).total * record.coherence_time


def gas_heating_excluded_tau(record: GasHeating, sigma_q: float) -> float:
    """Excluded tau_e from a bound on free-gas heating; independent of sigma_s."""
    ratio = record.mass / M_ELECTRON
    rate_at_unit_tau = ratio * ratio * sigma_q ** 2 / (2.0 * record.mass)
    return rate_at_unit_tau / record.energy_rate_bound


def cat_excluded_tau(record: CatSuperposition, sigma_q: float,
                     sigma_s: float = 0.0) -> float:
    """Excluded tau_e for the gedanken cat (position diffusion neglected)."""
    kick = _unit_kick(sigma_s, sigma_q)
    rate = position_decoherence_rate(record.geometry, kick, record.separation)
    return record.hold_time * rate


def excluded_tau(record: ExperimentRecord, sigma_s: float,
                 sigma_q: float) -> float:
    """Dispatch to the record class's excluded-tau operation."""
    if isinstance(record, (PointInterference, GratingDiffraction, TalbotLau)):
        return interference_excluded_tau(record, sigma_s, sigma_q)
    if isinstance(record, Micromirror):
        return micromirror_excluded_tau(record, sigma_s, sigma_q)
    if isinstance(record, Membrane):
        return membrane_excluded_tau(record, sigma_s, sigma_q)
    if isinstance(record, Squid):
        return squid_excluded_tau(record, sigma_s, sigma_q)
    if isinstance(record, GasHeating):
        return gas_heating_excluded_tau(record, sigma_q)
    if isinstance(record, CatSuperposition):
        return cat_excluded_tau(record, sigma_q, sigma_s)
    raise DomainError(f"unknown record class {type(record).__name__}")


# --- full diffraction signal model -------------------------------------------

def _dirichlet(alpha_d: np.ndarray, n: int) -> np.ndarray:
    """sin(n y/2)/sin(y/2) with y = alpha*d, the slit-pair lattice sum."""
    y = 0.5 * alpha_d
    small = np.abs(np.sin(y)) < 1e-12
    ys = np.where(small, 1.0, y)
    return np.where(small, float(n), np.sin(n * ys) / np.sin(ys))


def _sinc_half(z: np.ndarray) -> np.ndarray:
    small = np.abs(z) < 1e-12
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0, np.sin(zs) / zs)


def diffraction_pattern(record: GratingDiffraction, kick: KickParams,
                        screen_x, n_speed: int = 8,
                        nodes_per_band: int = 0) -> np.ndarray:
    """Paraxial diffraction intensity on the screen with classicalization blur.

    Writing the two-point signal in pair coordinates u = x1 - x2 makes the
    aperture integral closed-form for top-hat slits: pairs at slit offset m
    contribute a triangular window times a Dirichlet lattice factor, and
    the classicalization multiplies each order by the blur R(|m| d).  The
    remaining 1D u-integral is done on a fixed grid per band, the signal is
    averaged over the longitudinal speed distribution, and finally smeared
    by the projected source and detector windows.
    """
    screen_x = np.asarray(screen_x, dtype=float)
    geom = record.geometry
    mass = record.mass
    d = record.period
    w = (record.open_fraction if record.open_fraction else 0.5) * d
    n_slits = record.slit_count

    if record.mean_speed is not None and record.speed_fwhm and n_speed > 1:
        sigma_v = record.speed_fwhm * record.mean_speed / 2.3548200450309493
        nodes, weights = np.polynomial.hermite_e.hermegauss(n_speed)
        speeds = np.clip(record.mean_speed + sigma_v * nodes,
                         0.05 * record.mean_speed, None)
        weights = weights / weights.sum()
        times = [(record.L1 / v, record.L2 / v) for v in speeds]
    else:
        times = [record.flight_times]
        weights = np.ones(1)

    x_max = float(np.max(np.abs(screen_x))) if screen_x.size else 0.0
    total = np.zeros_like(screen_x)
    for (T1, T2), wt in zip(times, weights):
        T = T1 * T2 / (T1 + T2)
        k_screen = mass * screen_x / (HBAR * T2)      # u-frequency per x
        if nodes_per_band:
            n_u = nodes_per_band
        else:
            osc = (mass * x_max * 2 * w / (HBAR * T2)
                   + n_slits * mass * d * 2 * w / (HBAR * T)) / (2 * math.pi)
            n_u = int(min(4001, max(81, 14 * osc)))
            n_u += (n_u + 1) % 2  # odd count for Simpson
        intensity = np.zeros_like(screen_x)
        for m in range(0, n_slits):
            blur = 1.0 if m == 0 else math.exp(-free_flight_decay_exponent(
                m * d, T1, T2, geom, kick))
            du = np.linspace(-w, w, n_u)
            u = m * d + du
            window = w - np.abs(du)
            alpha = mass * u / (HBAR * T)
            band = window * _sinc_half(0.5 * alpha * window) \
                * _dirichlet(alpha * d, n_slits - m)
            # cos couples band +m with -m; m = 0 counts once
            fold = 1.0 if m == 0 else 2.0
            phases = np.cos(np.outer(k_screen, u))
            simpson = np.ones(n_u)
            simpson[1:-1:2] = 4.0
            simpson[2:-1:2] = 2.0
            simpson *= (du[1] - du[0]) / 3.0
            intensity += fold * blur * phases @ (band * simpson)
        total += wt * intensity

    total = np.maximum(total, 0.0)

    # incoherent source (projected by T2/T1) and detector windows
    if screen_x.size > 2:
        dx = abs(screen_x[1] - screen_x[0])
        widths = [
            (record.source_width or 0.0) * record.flight_times[1]
            / record.flight_times[0],
            record.detector_width or 0.0,
        ]
        for width in widths:
            n_kernel = int(round(width / dx))
            if n_kernel >= 2:
                kernel = np.ones(n_kernel) / n_kernel
                total = np.convolve(total, kernel, mode="same")
    return total
