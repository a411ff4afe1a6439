"""Classicalization-induced decay of persistent-current superpositions.

The two branches of a SQUID superposition are modeled as Fermi spheres of
Cooper-paired electrons displaced by hbar*delta_k.  Classicalization
destroys the coherence through (i) momentum redistribution of electrons
between the spheres (Gamma_diff) and (ii) dephasing by position kicks at
momentum transfers too small to redistribute anything (Gamma_deph).

Gamma_diff is reduced analytically: the position-kick integral gives the
factor exp(-sigma_s^2 |2k+q|^2 / 2), and isotropy collapses the remaining
six-fold integral to (|k|, |q|, cos(theta)).  The angular variable is then
traded for K = |k+q| (k dk K dK = ... dcos), which makes the occupation
integrals piecewise exact in the BCS amplitudes and factorizes the
sigma_s suppression; what is evaluated numerically is a single adaptive
quadrature over |q| with closed-form or tabulated inner profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE, HBAR, M_ELECTRON
from .errors import DomainError
from .numerics import erf, integrate_1d

__all__ = [
    "SuperconductorMaterial",
    "NIOBIUM",
    "ALUMINIUM",
    "BcsAmplitudes",
    "SquidGamma",
    "squid_gamma_hat",
    "reduced_diffusion_integrand",
]


@dataclass(frozen=True)
class SuperconductorMaterial:
    """Fermi wave number [1/m], pairing gap [J], Debye energy hbar*omega_D [J]."""

    k_fermi: float
    gap: float
    debye_energy: float

    def __post_init__(self):
        if not (self.k_fermi > 0 and self.gap > 0 and self.debye_energy > 0):
            raise DomainError("material constants must be positive")
        if not self.gap < self.debye_energy:
            raise DomainError("pairing gap must lie below the Debye energy")

    @property
    def electron_density(self) -> float:
        """Conduction electron density k_F^3 / 3 pi^2 (two spin states)."""
        return self.k_fermi ** 3 / (3.0 * math.pi ** 2)


NIOBIUM = SuperconductorMaterial(
    k_fermi=1.18e10, gap=1.44e-3 * E_CHARGE, debye_energy=23.7e-3 * E_CHARGE)
ALUMINIUM = SuperconductorMaterial(
    k_fermi=1.74e10, gap=0.17e-3 * E_CHARGE, debye_energy=36.9e-3 * E_CHARGE)


class BcsAmplitudes:
    """BCS occupation amplitudes v_k^2 (and u_k^2 = 1 - v_k^2).

    The pairing energy is the zero-temperature gap inside the Debye shell
    |k^2 - k_F^2| <= 2 m_e omega_D / hbar and zero outside, so v_k^2 is a
    smoothed step of width ~delta = 2 m_e Delta / hbar^2 around k_F.
    """

    def __init__(self, material: SuperconductorMaterial):
        self.material = material
        self.k_fermi = material.k_fermi
        self.shell_halfwidth = 2.0 * M_ELECTRON * material.debye_energy / HBAR ** 2
        self.delta = 2.0 * M_ELECTRON * material.gap / HBAR ** 2
        kf2 = self.k_fermi ** 2
        if self.shell_halfwidth >= kf2:
            raise DomainError("Debye shell extends below k = 0")
        self.k_inner = math.sqrt(kf2 - self.shell_halfwidth)
        self.k_outer = math.sqrt(kf2 + self.shell_halfwidth)

    def v2(self, k):
        """Pair occupation probability at wave number k."""
        w = np.asarray(k, dtype=float) ** 2 - self.k_fermi ** 2
        W, d = self.shell_halfwidth, self.delta
        inside = np.abs(w) <= W
        smooth = 0.5 * (1.0 - w / np.sqrt(w * w + d * d))
        out = np.where(inside, smooth, np.where(w < 0.0, 1.0, 0.0))
        return float(out) if out.ndim == 0 else out

    def u2(self, k):
        return 1.0 - self.v2(k)

    def uv(self, k):
        """u_k v_k, supported only inside the Debye shell."""
        w = np.asarray(k, dtype=float) ** 2 - self.k_fermi ** 2
        W, d = self.shell_halfwidth, self.delta
        inside = np.abs(w) <= W
        val = 0.5 * d / np.sqrt(w * w + d * d) if d > 0 else np.zeros_like(w)
        out = np.where(inside, val, 0.0)
        return float(out) if out.ndim == 0 else out

    def _v2_antiderivative(self, w):
        """Continuous antiderivative of v^2 with respect to w = K^2 - k_F^2."""
        W, d = self.shell_halfwidth, self.delta
        c = 0.5 * (W - math.hypot(W, d))
        inner = 0.5 * (w - np.hypot(w, d))
        return np.where(w < -W, w + c, np.where(w > W, c, inner))

    def occupied_weight(self, k_lo, k_hi):
        """int_{k_lo}^{k_hi} K v_K^2 dK, exact and vectorized."""
        k_lo = np.maximum(np.asarray(k_lo, dtype=float), 0.0)
        k_hi = np.maximum(np.asarray(k_hi, dtype=float), 0.0)
        kf2 = self.k_fermi ** 2
        return 0.5 * (self._v2_antiderivative(k_hi ** 2 - kf2)
                      - self._v2_antiderivative(k_lo ** 2 - kf2))


@dataclass(frozen=True)
class SquidGamma:
    """Decay-rate components in units of 1/tau_e (i.e. Gamma * tau_e)."""

    gamma_diff: float
    gamma_deph: float

    @property
    def total(self) -> float:
        return self.gamma_diff + self.gamma_deph


class _PairShellTable:
    """Cumulative integral of K u_K v_K e^{-sigma_s^2 K^2} over the shell."""

    def __init__(self, bcs: BcsAmplitudes, sigma_s: float, n: int = 12001):
        self.bcs = bcs
        W = bcs.shell_halfwidth
        kf2 = bcs.k_fermi ** 2
        w = np.linspace(-W, W, n)
        d = bcs.delta
        if d > 0:
            dens = 0.25 * d / np.sqrt(w * w + d * d) \
                * np.exp(-sigma_s ** 2 * (kf2 + w))
        else:
            dens = np.zeros_like(w)
        self.w = w
        self.cum = np.concatenate(([0.0], np.cumsum(
            0.5 * (dens[1:] + dens[:-1]) * np.diff(w))))
        self.total = float(self.cum[-1])

    def between(self, k_lo, k_hi):
        """int K u v e^{-sigma_s^2 K^2} dK over [k_lo, k_hi] (clipped to shell)."""
        kf2 = self.bcs.k_fermi ** 2
        W = self.bcs.shell_halfwidth
        w_lo = np.clip(np.asarray(k_lo, dtype=float) ** 2 - kf2, -W, W)
        w_hi = np.clip(np.asarray(k_hi, dtype=float) ** 2 - kf2, -W, W)
        c_lo = np.interp(w_lo, self.w, self.cum)
        c_hi = np.interp(w_hi, self.w, self.cum)
        return np.maximum(c_hi - c_lo, 0.0)


def _maxwell_cdf(a: float, sigma: float) -> float:
    """P(|q| <= a) for an isotropic Gaussian with per-component sigma."""
    if sigma == 0.0:
        return 1.0
    x = a / sigma
    if x < 1e-4:
        return math.sqrt(2.0 / math.pi) * x ** 3 / 3.0
    return erf(x / math.sqrt(2.0)) \
        - math.sqrt(2.0 / math.pi) * x * math.exp(-0.5 * x * x)


def _diffusion_q_profile(bcs: BcsAmplitudes, q: float, sigma_s: float,
                         table: _PairShellTable, rel_tol: float = 1e-7):
    """Inner occupation integrals A(q) and B(q) of the reduced rate.

    I(q) = (2 pi / q) [A(q) + e^{sigma_s^2 q^2 / 2} B(q)] where
    A(q) = int dk k u_k^2 int_{|k-q|}^{k+q} dK K v_K^2 (redistribution) and
    B(q) is the same double integral over the pair amplitudes u v with the
    factorized position-kick suppression e^{-sigma_s^2 (k^2 + K^2)}.
    """
    k_in, k_out = bcs.k_inner, bcs.k_outer
    k_hi = q + k_out

    def integrand_a(k):
        return k * bcs.u2(k) * bcs.occupied_weight(np.abs(k - q), k + q)

    pts = sorted({p for p in (
        k_out, abs(q - k_in), abs(q - k_out), q + k_in, q - k_in, q - k_out)
        if k_in < p < k_hi})
    a_val = integrate_1d(integrand_a, k_in, k_hi, rel_tol, points=pts).value

    if table.total == 0.0:
        return a_val, 0.0

    def integrand_b(k):
        return k * bcs.uv(k) * np.exp(-sigma_s ** 2 * k * k) \
            * table.between(np.abs(k - q), k + q)

    pts_b = sorted({p for p in (abs(q - k_in), abs(q - k_out))
                    if k_in < p < k_out})
    b_val = integrate_1d(integrand_b, k_in, k_out, rel_tol, points=pts_b).value
    return a_val, b_val


def squid_gamma_hat(record, sigma_s: float, sigma_q: float) -> SquidGamma:
    """Superposition decay rate Gamma * tau_e for a SQUID record.

    Momentum transfers below the elementary unit pi/V^(1/3) contribute only
    to the dephasing term, which is evaluated in the quadratic approximation
    of 1 - cos(delta_k . s) and scales with the squared occupation
    difference of the displaced Fermi spheres.
    """
    if sigma_s < 0 or sigma_q < 0:
        raise DomainError("kick widths must be >= 0")
    bcs = BcsAmplitudes(record.material)
    volume = record.volume
    q_min = math.pi / volume ** (1.0 / 3.0)
    sigma_k = sigma_q / HBAR

    gamma_diff = 0.0
    if sigma_k > 0.0:
        table = _PairShellTable(bcs, sigma_s)
        norm = (2.0 * math.pi * sigma_k ** 2) ** -1.5

        def outer(q_arr):
            out = np.empty_like(q_arr)
            for i, q in enumerate(q_arr):
                a_val, b_val = _diffusion_q_profile(bcs, q, sigma_s, table)
                gauss = norm * math.exp(-0.5 * (q / sigma_k) ** 2)
                # the pair term carries exp(+sigma_s^2 q^2/2) from the
                # factorization; it is supported only below 2 k_outer, so
                # the combination stays bounded
                out[i] = q * gauss * (
                    a_val + b_val * math.exp(0.5 * (sigma_s * q) ** 2))
            return out

        q_hi = max(q_min + 9.6 * sigma_k, min(2.05 * bcs.k_outer,
                                              q_min + 40.0 * sigma_k))
        pts = sorted({p for p in (
            2.0 * bcs.k_inner, 2.0 * bcs.k_outer, bcs.k_outer,
            q_min + 3.0 * sigma_k) if q_min < p < q_hi})
        res = integrate_1d(outer, q_min, q_hi, 1e-5, points=pts,
                           max_evals=60_000)
        gamma_diff = (2.0 * volume / math.pi) * res.value

    gamma_deph = _gamma_dephasing(record, bcs, sigma_s, sigma_k, q_min)
    return SquidGamma(gamma_diff=gamma_diff, gamma_deph=gamma_deph)


def _fermi_sea_transform(bcs: BcsAmplitudes, s: float) -> float:
    """v~(s) = 4 pi int k^2 v_k^2 sinc(k s) dk, the occupied-state transform."""
    def integrand(k):
        ks = k * s
        small = np.abs(ks) < 1e-8
        kss = np.where(small, 1.0, ks)
        snc = np.where(small, 1.0, np.sin(kss) / kss)
        return 4.0 * math.pi * k * k * bcs.v2(k) * snc

    res = integrate_1d(integrand, 0.0, bcs.k_outer, 1e-8,
                       points=[bcs.k_inner, bcs.k_fermi])
    return res.value


def _gamma_dephasing(record, bcs: BcsAmplitudes, sigma_s: float,
                     sigma_k: float, q_min: float) -> float:
    """Quadratic-order dephasing rate from position kicks below the IR cutoff."""
    delta_k = record.delta_k
    if sigma_s == 0.0 or delta_k == 0.0:
        return 0.0
    p_below = _maxwell_cdf(q_min, sigma_k)
    if p_below == 0.0:
        return 0.0

    def integrand(s_arr):
        out = np.empty_like(s_arr)
        for i, s in enumerate(s_arr):
            vt = _fermi_sea_transform(bcs, s)
            gs = (2.0 * math.pi * sigma_s ** 2) ** -1.5 \
                * math.exp(-0.5 * (s / sigma_s) ** 2)
            out[i] = 4.0 * math.pi * s ** 4 * gs * vt * vt
        return out

    s_hi = 9.5 * sigma_s
    j_s = integrate_1d(integrand, 0.0, s_hi, 1e-5, max_evals=40_000).value
    volume = record.volume
    return (4.0 * volume ** 2 / (2.0 * math.pi) ** 6) * p_below \
        * (delta_k ** 2 / 6.0) * j_s


def reduced_diffusion_integrand(record, sigma_s: float, sigma_q: float):
    """The reduced 3D integrand of Gamma_diff over (|q|, |k|, cos theta).

    Returns (f, box) with f vectorized over an (m, 3) array of points, such
    that integrating f over the box yields Gamma_diff * tau_e up to the
    sharp infrared cutoff (applied inside f).  Used for cross-checks of the
    multidimensional quadrature and Monte Carlo engines.
    """
    bcs = BcsAmplitudes(record.material)
    volume = record.volume
    q_min = math.pi / volume ** (1.0 / 3.0)
    sigma_k = sigma_q / HBAR
    norm = (2.0 * math.pi * sigma_k ** 2) ** -1.5
    pref = 2.0 * volume / (2.0 * math.pi) ** 3

    def f(pts):
        pts = np.asarray(pts, dtype=float)
        q, k, mu = pts[:, 0], pts[:, 1], pts[:, 2]
        kq = np.sqrt(np.maximum(k * k + q * q + 2.0 * k * q * mu, 0.0))
        gauss = norm * np.exp(-0.5 * (q / sigma_k) ** 2)
        two_kq = 2.0 * k * k + 2.0 * kq * kq - q * q
        cross = bcs.uv(k) * bcs.uv(kq) * np.exp(-0.5 * sigma_s ** 2 * two_kq)
        body = bcs.u2(k) * bcs.v2(kq) + cross
        jac = (4.0 * math.pi * q * q) * (2.0 * math.pi * k * k)
        return pref * jac * gauss * body * (q > q_min)

    box = [(q_min, q_min + 9.0 * sigma_k), (0.0, 2.0 * bcs.k_outer), (-1.0, 1.0)]
    return f, box
