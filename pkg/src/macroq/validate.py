"""Deterministic validation suite pairing each analytic rate with its oracle.

Every check row reports the analytic value, the independent estimate, and
the criterion; the suite is seeded, so repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import ATOMIC_MASS, HBAR, M_ELECTRON
from .experiments import (
    NIOBIUM,
    Membrane,
    Micromirror,
    Squid,
    SuperconductorMaterial,
    squid_gamma_hat,
)
from .kicks import (
    Disc,
    KickParams,
    Point,
    disc_rate,
    energy_gain_rate,
    free_flight_decay_exponent,
    mean_sq_structure,
    one_minus_gtilde,
    rescale_to_mass,
)
from .numerics import bessel_i0e, erf, integrate_1d, mc_integrate, sinc
from .oracle import (
    JumpProcessSpec,
    mc_energy_gain,
    mc_path_dephasing,
    mc_squid_gamma,
    mc_structure_average,
    mc_visibility_decay,
    numeric_gtilde_check,
)

__all__ = ["ValidationRow", "run_validation", "format_validation_table"]


@dataclass(frozen=True)
class ValidationRow:
    name: str
    value: float
    reference: float
    criterion: str
    passed: bool


def _within_sigmas(value, reference, std_error, n_sigma=3.0):
    return abs(value - reference) <= n_sigma * std_error


def _erf_series(x: float) -> float:
    total, term, n = 0.0, x, 0
    while abs(term) > 1e-18:
        total += term / (2 * n + 1)
        n += 1
        term *= -x * x / n
    return 2.0 / math.sqrt(math.pi) * total


def run_validation(seed: int = 42) -> list[ValidationRow]:
    rows = []

    # special functions against independent representations
    v = erf(1.0)
    ref = _erf_series(1.0)
    rows.append(ValidationRow("erf(1) vs power series", float(v), ref,
                              "|dev| < 1e-12", abs(v - ref) < 1e-12))
    theta = np.linspace(0.0, math.pi, 200001)
    ref = float(np.trapezoid(np.exp(50.0 * (np.cos(theta) - 1.0)), theta)
                / math.pi)
    v = bessel_i0e(50.0)
    rows.append(ValidationRow("i0e(50) vs integral representation", v, ref,
                              "rel dev < 1e-10", abs(v / ref - 1.0) < 1e-10))
    v = sinc(0.3 * math.pi)
    rows.append(ValidationRow("sinc(0.3 pi)", float(v), 0.8584,
                              "|dev| < 5e-5", abs(v - 0.8584) < 5e-5))

    # Monte Carlo backbone: Gaussian characteristic function
    sigma_q = HBAR / 1e-9

    def sampler(rng, n):
        q = rng.normal(0.0, sigma_q, n)
        return np.cos(q * 1e-9 / HBAR)

    est = mc_integrate(sampler, 200000, seed)
    ref = math.exp(-0.5)
    rows.append(ValidationRow(
        "<cos(q dx/hbar)> at dx = hbar/sigma_q", est.mean, ref,
        "within 3 std errors",
        _within_sigmas(est.mean, ref, est.std_error)))

    # reduced transforms, alternate reduction order
    from .kicks import Cuboid, Sphere
    geoms = [
        ("point", Point(ATOMIC_MASS), 1e-9),
        ("cuboid", Cuboid(2.3e-12, 1e-5, 1e-5, 1e-5), 1e-5),
        ("sphere", Sphere(7.4e-20, 2e-8), 2e-8),
        ("disc", Disc(4.8e-14, 7.5e-6, 1e-7), 1e-7),
    ]
    for name, geom, scale in geoms:
        kick = KickParams(2e-11, HBAR / scale, 1.0)
        pts = [(0.0, 0.0), (0.7 * scale, 0.0),
               (2.0 * scale, 1e-3 * HBAR / scale)]
        dev = numeric_gtilde_check(geom, kick, pts)
        rows.append(ValidationRow(
            f"gtilde_1d {name} vs direct quadrature", dev, 0.0,
            "max |dev| < 1e-6", dev < 1e-6))

    # free-flight blur against the trajectory unraveling
    mass = ATOMIC_MASS
    kick = KickParams(2e-11, HBAR / 1e-9, 2e5)
    T = 23.1e-3
    exponent = free_flight_decay_exponent(107e-6, T, T, Point(mass), kick)
    spec = JumpProcessSpec(mass=mass, kick=kick, separation=107e-6,
                           duration=2 * T, trajectories=40000,
                           seed=seed + 1, mode="diamond")
    est = mc_visibility_decay(spec)
    ref = math.exp(-exponent)
    rows.append(ValidationRow(
        "neutron free-flight blur vs jump MC", est.mean, ref,
        "within 3 std errors", _within_sigmas(est.mean, ref, est.std_error)))

    # micromirror cycle-averaged dephasing
    mirror = Micromirror(edge=10e-6, density=2300.0,
                         omega_m=2 * math.pi * 500.0,
                         ground_amplitude=170e-15, coupling=1.63, fidelity=0.5)
    kick = KickParams(2e-11, HBAR / 3e-6, 1.0)
    geom = mirror.geometry
    x0, kappa, om = mirror.ground_amplitude, mirror.coupling, mirror.omega_m

    def dx_of(t):
        return 2 * kappa * x0 * np.sin(0.5 * om * t) ** 2

    def dp_of(t):
        return (2 * HBAR * kappa / x0) * np.sin(om * t)

    est = mc_path_dephasing(geom, kick, dx_of, dp_of, 2 * math.pi / om,
                            150000, seed + 2)
    ana = integrate_1d(
        lambda xi: np.array([one_minus_gtilde(
            geom, kick, 2 * kappa * x0 * math.sin(0.5 * z) ** 2,
            (2 * HBAR * kappa / x0) * math.sin(z))
            for z in np.atleast_1d(xi)]),
        0.0, 2 * math.pi, 1e-6).value / (2 * math.pi)
    rows.append(ValidationRow(
        "micromirror cycle dephasing vs kick MC", est.mean, ana,
        "within 3 std errors", _within_sigmas(est.mean, ana, est.std_error)))

    # membrane disc rate via pair-sampled structure average
    membrane = Membrane(radius=7.5e-6, thickness=100e-9, density=2700.0,
                        omega_m=2 * math.pi * 10.56e6, cycles=1000,
                        fidelity=0.5)
    disc = membrane.geometry
    kick = KickParams(0.0, HBAR / 1e-9, 1.0)
    closed = disc.mass ** 2 / (M_ELECTRON ** 2 * disc_rate(disc, kick))
    est = mc_structure_average(disc, HBAR / 1e-9, 500000, seed + 3)
    rows.append(ValidationRow(
        "membrane disc rate vs pair-sampling MC", est.mean, closed,
        "within 3 std errors", _within_sigmas(est.mean, closed, est.std_error)))

    # harmonic energy gain with both heating terms equal
    mass = 132.9 * ATOMIC_MASS
    kick = KickParams(2e-11, 1e-26, 3e4)
    omega = kick.sigma_q / (M_ELECTRON * kick.sigma_s)
    ana = energy_gain_rate(mass, omega, kick)
    eff = rescale_to_mass(kick, mass)
    spec = JumpProcessSpec(mass=mass, kick=kick, separation=0.0,
                           duration=25 * eff.tau, trajectories=25000,
                           seed=seed + 4, mode="static", omega=omega)
    est = mc_energy_gain(spec)
    rows.append(ValidationRow(
        "harmonic energy gain vs trajectory MC", est.mean, ana,
        "within 3 std errors", _within_sigmas(est.mean, ana, est.std_error)))

    # SQUID rates
    friedman = Squid(NIOBIUM, 560e-6, 5e-12, 1e-9)
    strong = squid_gamma_hat(friedman, 0.0,
                             HBAR * 20 * NIOBIUM.k_fermi).gamma_diff
    rows.append(ValidationRow(
        "SQUID strong-kick saturation (Gamma/N)",
        strong / friedman.electron_number, 1.0, "rel dev < 5e-2",
        abs(strong / friedman.electron_number - 1.0) < 0.05))

    step_material = SuperconductorMaterial(
        k_fermi=NIOBIUM.k_fermi, gap=NIOBIUM.debye_energy * 1e-12,
        debye_energy=NIOBIUM.debye_energy)
    step_squid = Squid(step_material, 560e-6, 5e-12, 1e-9)
    gq = squid_gamma_hat(step_squid, 0.0, HBAR / 1e-10).gamma_diff
    est = mc_squid_gamma(step_squid, 0.0, HBAR / 1e-10, 400000, seed + 5)
    rows.append(ValidationRow(
        "SQUID sharp-step Gamma_diff vs MC", est.mean, gq,
        "within 3 std errors", _within_sigmas(est.mean, gq, est.std_error)))

    gq = squid_gamma_hat(friedman, 2e-11, HBAR / 1e-10).gamma_diff
    est = mc_squid_gamma(friedman, 2e-11, HBAR / 1e-10, 400000, seed + 6)
    rows.append(ValidationRow(
        "SQUID Nb Gamma_diff at 1 A vs MC", est.mean, gq,
        "within 3 std errors", _within_sigmas(est.mean, gq, est.std_error)))

    return rows


def format_validation_table(rows: list[ValidationRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<{width}}  value={r.value:.9g}  "
                     f"reference={r.reference:.9g}  ({r.criterion})")
    n_fail = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return "\n".join(lines) + "\n"
