"""Independent brute-force validators for the analytic rates.

Every analytic decoherence factor has a cross-check here that shares no
code path with it: trajectory-level Monte Carlo unravelings of the kick
process, pair-sampling estimators of structure-factor averages, and
direct quadratures of defining integrals in a different reduction order.

Per-trajectory randomness is derived deterministically from (seed, index),
so any parallel schedule would reproduce the serial ensemble mean
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import HBAR, M_ELECTRON
from .errors import DomainError
from .kicks import (
    Cuboid,
    Disc,
    KickParams,
    MassGeometry,
    Point,
    Sphere,
    gtilde_1d,
    rescale_to_mass,
)
from .numerics import McEstimate, integrate_1d
from .squid import BcsAmplitudes

__all__ = [
    "JumpProcessSpec",
    "mc_visibility_decay",
    "mc_energy_gain",
    "mc_path_dephasing",
    "mc_structure_average",
    "numeric_gtilde_check",
    "mc_squid_gamma",
]


@dataclass(frozen=True)
class JumpProcessSpec:
    """A simulated superposition exposed to the classicalizing jump process.

    ``mode`` selects the separation history over ``duration``:
      - "static":   constant separation, zero momentum splitting;
      - "diamond":  opens linearly to ``separation`` at half time, closes;
      - "harmonic": separation*sin^2(omega t/2) with momentum splitting
                    momentum_amplitude*sin(omega t), one mirror period.
    """

    mass: float
    kick: KickParams
    separation: float
    duration: float
    trajectories: int
    seed: int
    mode: str = "static"
    omega: float = 0.0
    momentum_amplitude: float = 0.0
    geometry: Optional[MassGeometry] = None

    def __post_init__(self):
        if self.trajectories < 1:
            raise DomainError("need at least one trajectory")
        if self.duration <= 0:
            raise DomainError("duration must be positive")
        if self.mode not in ("static", "diamond", "harmonic"):
            raise DomainError(f"unknown mode {self.mode!r}")

    def body(self) -> MassGeometry:
        return self.geometry if self.geometry is not None else Point(self.mass)

    def paths(self):
        """(dx(t), dp(t)) callables for vectorized jump times."""
        if self.mode == "static":
            return (lambda t: np.full_like(t, self.separation),
                    lambda t: np.zeros_like(t))
        if self.mode == "diamond":
            half = 0.5 * self.duration
            slope = self.mass * self.separation / half

            def dx(t):
                return self.separation * np.where(
                    t < half, t / half, (self.duration - t) / half)

            def dp(t):
                return np.where(t < half, slope, -slope)

            return dx, dp
        om = self.omega

        def dx(t):
            return self.separation * np.sin(0.5 * om * t) ** 2

        def dp(t):
            return self.momentum_amplitude * np.sin(om * t)

        return dx, dp


def _traj_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((seed, index))))


def _f2_samples(geom: MassGeometry, q: np.ndarray) -> np.ndarray:
    """Squared normalized structure factor for an (n,3) array of kicks."""
    from .kicks import _ball_form_factor, _disc_radial_form_factor
    from .numerics import sinc

    if isinstance(geom, Point):
        return np.ones(q.shape[0])
    if isinstance(geom, Sphere):
        u = np.linalg.norm(q, axis=1) * geom.radius / HBAR
        return _ball_form_factor(u) ** 2
    if isinstance(geom, Cuboid):
        edges = np.array([geom.edge_a, geom.edge_b, geom.edge_c])
        return np.prod(sinc(q * edges / (2.0 * HBAR)), axis=1) ** 2
    if isinstance(geom, Disc):
        axial = sinc(q[:, 2] * geom.thickness / (2.0 * HBAR))
        qr = np.hypot(q[:, 0], q[:, 1])
        return (axial * _disc_radial_form_factor(qr * geom.radius / HBAR)) ** 2
    raise DomainError(f"unknown geometry {type(geom).__name__}")


def mc_visibility_decay(spec: JumpProcessSpec) -> McEstimate:
    """Ensemble coherence fraction of the separated superposition.

    Jumps arrive at the point-mass rate (M/m_e)^2/tau_e and are thinned
    with probability |rho~(q)/M|^2, which realizes the compound master
    equation exactly.  Each accepted jump multiplies the coherence by
    exp(i (q_x dx(t) - dp(t) s_x)/hbar).
    """
    kick = spec.kick
    eff = rescale_to_mass(kick, spec.mass)
    rate = 1.0 / eff.tau
    mean_jumps = rate * spec.duration
    if mean_jumps > 5e5:
        raise DomainError(
            f"raw jump count ~{mean_jumps:.3g} per trajectory is not "
            "simulable; rescale tau_e")
    geom = spec.body()
    dx_of, dp_of = spec.paths()
    weights = np.empty(spec.trajectories)
    for i in range(spec.trajectories):
        rng = _traj_rng(spec.seed, i)
        n_j = rng.poisson(mean_jumps)
        if n_j == 0:
            weights[i] = 1.0
            continue
        t_j = rng.uniform(0.0, spec.duration, n_j)
        q = rng.normal(0.0, kick.sigma_q, (n_j, 3)) if kick.sigma_q > 0 \
            else np.zeros((n_j, 3))
        keep = rng.uniform(0.0, 1.0, n_j) < _f2_samples(geom, q)
        if not np.any(keep):
            weights[i] = 1.0
            continue
        t_j, q = t_j[keep], q[keep]
        s_x = rng.normal(0.0, eff.sigma_s_eff, t_j.size) \
            if kick.sigma_s > 0 else np.zeros(t_j.size)
        phase = (q[:, 0] * dx_of(t_j) - dp_of(t_j) * s_x) / HBAR
        weights[i] = math.cos(float(np.sum(phase)))
    mean = float(weights.mean())
    std = float(weights.std(ddof=1) / math.sqrt(spec.trajectories)) \
        if spec.trajectories > 1 else 0.0
    return McEstimate(mean, std, spec.trajectories, spec.seed)


def mc_path_dephasing(geom: MassGeometry, kick: KickParams,
                      dx_of: Callable, dp_of: Callable, t_max: float,
                      n: int, seed: int) -> McEstimate:
    """Path-averaged per-jump coherence loss E[1 - cos(phase)].

    Samples a jump time uniformly over the path, a kick from the accepted
    compound distribution (Gaussian thinned by the structure factor), and
    evaluates 1 - cos via 2 sin^2(phase/2), which stays exact for the
    ~1e-15 losses of heavy compounds.  The analytic counterpart is the
    path average of 1 - g~_1D.
    """
    rng = _traj_rng(seed, 0)
    eff = rescale_to_mass(kick, geom.mass)
    values = np.empty(n)
    filled = 0
    while filled < n:
        batch = max(1024, min(1 << 16, 4 * (n - filled)))
        q = rng.normal(0.0, kick.sigma_q, (batch, 3))
        keep = rng.uniform(0.0, 1.0, batch) < _f2_samples(geom, q)
        q = q[keep]
        take = min(q.shape[0], n - filled)
        if take == 0:
            continue
        q = q[:take]
        t_j = rng.uniform(0.0, t_max, take)
        s_x = rng.normal(0.0, eff.sigma_s_eff, take) \
            if kick.sigma_s > 0 else np.zeros(take)
        phase = (q[:, 0] * dx_of(t_j) - dp_of(t_j) * s_x) / HBAR
        values[filled:filled + take] = 2.0 * np.sin(0.5 * phase) ** 2
        filled += take
    mean = float(values.mean())
    std = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean, std, n, seed)


def mc_energy_gain(spec: JumpProcessSpec) -> McEstimate:
    """Mean energy slope dE/dt of a kicked 1D trajectory ensemble."""
    kick = spec.kick
    eff = rescale_to_mass(kick, spec.mass)
    rate = 1.0 / eff.tau
    mean_jumps = rate * spec.duration
    if mean_jumps > 5e5:
        raise DomainError("raw jump count too high; rescale tau_e")
    om = spec.omega
    M = spec.mass
    energies = np.empty(spec.trajectories)
    for i in range(spec.trajectories):
        rng = _traj_rng(spec.seed, i)
        n_j = rng.poisson(mean_jumps)
        t_j = np.sort(rng.uniform(0.0, spec.duration, n_j))
        qs = rng.normal(0.0, kick.sigma_q, n_j)
        ss = rng.normal(0.0, eff.sigma_s_eff, n_j) if kick.sigma_s > 0 \
            else np.zeros(n_j)
        x, v, t_prev = 0.0, 0.0, 0.0
        for t_k, q_k, s_k in zip(t_j, qs, ss):
            dt = t_k - t_prev
            if om > 0:
                c, s = math.cos(om * dt), math.sin(om * dt)
                x, v = x * c + (v / om) * s, -x * om * s + v * c
            x += s_k
            v += q_k / M
            t_prev = t_k
        energies[i] = 0.5 * M * (v * v + (om * x) ** 2)
    slopes = energies / spec.duration
    mean = float(slopes.mean())
    std = float(slopes.std(ddof=1) / math.sqrt(spec.trajectories)) \
        if spec.trajectories > 1 else 0.0
    return McEstimate(mean, std, spec.trajectories, spec.seed)


# --- structure-factor average by pair sampling --------------------------------

def _uniform_points(geom: MassGeometry, rng: np.random.Generator,
                    n: int) -> np.ndarray:
    if isinstance(geom, Sphere):
        direc = rng.normal(size=(n, 3))
        direc /= np.linalg.norm(direc, axis=1)[:, None]
        r = geom.radius * rng.uniform(0.0, 1.0, n) ** (1.0 / 3.0)
        return direc * r[:, None]
    if isinstance(geom, Cuboid):
        edges = np.array([geom.edge_a, geom.edge_b, geom.edge_c])
        return rng.uniform(-0.5, 0.5, (n, 3)) * edges
    if isinstance(geom, Disc):
        phi = rng.uniform(0.0, 2.0 * math.pi, n)
        r = geom.radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        z = rng.uniform(-0.5, 0.5, n) * geom.thickness
        return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))
    raise DomainError("uniform sampling needs an extended geometry")


def _volume(geom: MassGeometry) -> float:
    if isinstance(geom, Sphere):
        return 4.0 / 3.0 * math.pi * geom.radius ** 3
    if isinstance(geom, Cuboid):
        return geom.edge_a * geom.edge_b * geom.edge_c
    if isinstance(geom, Disc):
        return math.pi * geom.radius ** 2 * geom.thickness
    raise DomainError("volume needs an extended geometry")


def mc_structure_average(geom: MassGeometry, sigma_q: float,
                         n: int, seed: int) -> McEstimate:
    """<|rho~(q)/M|^2> by Gaussian-shifted pair sampling.

    The average equals E[exp(-sigma_q^2 |P1-P2|^2 / 2 hbar^2)] over point
    pairs drawn uniformly from the body; importance-sampling the
    displacement from the Gaussian kernel itself turns this into
    (2 pi L^2)^{3/2}/V times the probability that a kernel-displaced
    interior point stays inside, which stays efficient even when the
    average is ~1e-10.
    """
    if isinstance(geom, Point):
        return McEstimate(1.0, 0.0, n, seed)
    rng = _traj_rng(seed, 1)
    length = HBAR / sigma_q
    vol = _volume(geom)
    p1 = _uniform_points(geom, rng, n)
    delta = rng.normal(0.0, length, (n, 3))
    p2 = p1 + delta
    inside = _contains(geom, p2)
    pref = (2.0 * math.pi * length * length) ** 1.5 / vol
    values = pref * inside.astype(float)
    mean = float(values.mean())
    std = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean, std, n, seed)


def _contains(geom: MassGeometry, pts: np.ndarray) -> np.ndarray:
    if isinstance(geom, Sphere):
        return np.linalg.norm(pts, axis=1) <= geom.radius
    if isinstance(geom, Cuboid):
        edges = np.array([geom.edge_a, geom.edge_b, geom.edge_c])
        return np.all(np.abs(pts) <= 0.5 * edges, axis=1)
    if isinstance(geom, Disc):
        rad = np.hypot(pts[:, 0], pts[:, 1])
        return (rad <= geom.radius) & (np.abs(pts[:, 2]) <= 0.5 * geom.thickness)
    raise DomainError("containment needs an extended geometry")


# --- direct quadrature of the reduced transform -------------------------------

def _gtilde_direct(geom: MassGeometry, kick: KickParams,
                   x: float, p: float) -> float:
    """g~_1D by a different reduction order than the production path."""
    sigma_q = kick.sigma_q
    eff = rescale_to_mass(kick, geom.mass)
    sse = eff.sigma_s_eff
    if sse > 0:
        p_fac = integrate_1d(
            lambda s: np.exp(-0.5 * (s / sse) ** 2) * np.cos(p * s / HBAR)
            / (math.sqrt(2 * math.pi) * sse), -9 * sse, 9 * sse, 1e-9).value
    else:
        p_fac = 1.0
    if sigma_q == 0.0:
        return p_fac

    if isinstance(geom, Point):
        def marginal(q):
            return np.exp(-0.5 * (q / sigma_q) ** 2) \
                / (math.sqrt(2 * math.pi) * sigma_q)
    elif isinstance(geom, (Cuboid, Disc)):
        b = geom.edge_a if isinstance(geom, Cuboid) else geom.thickness

        def marginal(q):
            arg = q * b / (2 * HBAR)
            small = np.abs(arg) < 1e-8
            args = np.where(small, 1.0, arg)
            snc2 = np.where(small, 1.0, (np.sin(args) / args) ** 2)
            return snc2 * np.exp(-0.5 * (q / sigma_q) ** 2) \
                / (math.sqrt(2 * math.pi) * sigma_q)
    else:  # Sphere: integrate out the two perpendicular components
        R = geom.radius

        def marginal(q):
            out = np.empty_like(q)
            for i, qi in enumerate(q):
                def perp(qp):
                    qq = np.sqrt(qi * qi + qp * qp)
                    u = qq * R / HBAR
                    small = np.abs(u) < 1e-3
                    us = np.where(small, 1.0, u)
                    f = np.where(small, 1.0 - u * u / 10.0,
                                 3.0 * (np.sin(us) - us * np.cos(us)) / us ** 3)
                    return qp / sigma_q ** 2 * np.exp(-0.5 * (qp / sigma_q) ** 2) \
                        * f * f
                out[i] = integrate_1d(perp, 0.0, 9.3 * sigma_q, 1e-9).value
            return out * np.exp(-0.5 * (q / sigma_q) ** 2) \
                / (math.sqrt(2 * math.pi) * sigma_q)

    hi = 9.3 * sigma_q
    norm = integrate_1d(marginal, -hi, hi, 1e-9).value
    num = integrate_1d(lambda q: marginal(q) * np.cos(q * x / HBAR),
                       -hi, hi, 1e-9).value
    return p_fac * num / norm


def numeric_gtilde_check(geom: MassGeometry, kick: KickParams,
                         points) -> float:
    """Max |g~_1D(production) - g~_1D(direct)| over (x, p) sample points."""
    worst = 0.0
    for x, p in points:
        a = gtilde_1d(geom, kick, x, p)
        b = _gtilde_direct(geom, kick, x, p)
        worst = max(worst, abs(a - b))
    return worst


# --- SQUID Monte Carlo ---------------------------------------------------------

def mc_squid_gamma(record, sigma_s: float, sigma_q: float,
                   n: int, seed: int) -> McEstimate:
    """Gamma_diff * tau_e by importance-sampled Monte Carlo.

    Kicks q are drawn from the 3D Gaussian; the occupied momentum K = k + q
    is drawn uniformly from the Fermi ball for the redistribution term and
    from the Debye shell annulus for the pair term.
    """
    bcs = BcsAmplitudes(record.material)
    volume = record.volume
    q_min = math.pi / volume ** (1.0 / 3.0)
    sigma_k = sigma_q / HBAR
    rng = _traj_rng(seed, 2)

    q = rng.normal(0.0, sigma_k, (n, 3))
    qn = np.linalg.norm(q, axis=1)
    live = qn > q_min

    # redistribution: K uniform in the ball of radius k_outer
    direc = rng.normal(size=(n, 3))
    direc /= np.linalg.norm(direc, axis=1)[:, None]
    K = direc * (bcs.k_outer * rng.uniform(0.0, 1.0, n) ** (1.0 / 3.0))[:, None]
    k_back = np.linalg.norm(K - q, axis=1)
    v_ball = 4.0 / 3.0 * math.pi * bcs.k_outer ** 3
    term1 = v_ball * bcs.u2(k_back) * bcs.v2(np.linalg.norm(K, axis=1))

    # pair term: K uniform in the shell annulus
    direc2 = rng.normal(size=(n, 3))
    direc2 /= np.linalg.norm(direc2, axis=1)[:, None]
    r3 = bcs.k_inner ** 3 + rng.uniform(0.0, 1.0, n) \
        * (bcs.k_outer ** 3 - bcs.k_inner ** 3)
    K2 = direc2 * (r3 ** (1.0 / 3.0))[:, None]
    K2n = np.linalg.norm(K2, axis=1)
    k2_back = np.linalg.norm(K2 - q, axis=1)
    v_shell = 4.0 / 3.0 * math.pi * (bcs.k_outer ** 3 - bcs.k_inner ** 3)
    expo = -0.5 * sigma_s ** 2 * np.maximum(
        2.0 * k2_back ** 2 + 2.0 * K2n ** 2 - qn ** 2, 0.0)
    term2 = v_shell * bcs.uv(k2_back) * bcs.uv(K2n) * np.exp(expo)

    pref = 2.0 * volume / (2.0 * math.pi) ** 3
    values = pref * live * (term1 + term2)
    mean = float(values.mean())
    std = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean, std, n, seed)
