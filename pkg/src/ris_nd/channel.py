"""Geometric Rician channel generation for RIS-assisted links.

The BS-RIS link G (N x M) and the RIS-user rows h_k^H (K x N) are drawn as

    G = sqrt(kappa/(1+kappa)) * Gbar + sqrt(1/(1+kappa)) * Gtilde,

with a deterministic LoS part built from array steering vectors and an
i.i.d. circular-Gaussian NLoS part whose per-entry variance equals the
link path loss.  Normalized entry amplitudes are then Rice distributed
with nu = sqrt(kappa/(1+kappa)), sigma = sqrt(1/(2(1+kappa))).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from numpy.random import Generator


@dataclass(frozen=True)
class Geometry:
    """Array geometry and placement. Spacings are in carrier wavelengths."""

    M: int
    N_x: int
    N_y: int
    delta_a_over_lambda: float = 0.5
    delta_0_over_lambda: float = 0.5
    d_t: float = 50.0
    d_r: tuple[float, ...] = (30.0,)
    psi_D: float = 0.0
    phi_A: float = 0.0
    varphi_A: float = 0.0
    phi_Dk: tuple[float, ...] = (0.0,)
    varphi_Dk: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if self.M < 1 or self.N_x < 1 or self.N_y < 1:
            raise ValueError("antenna/element counts must be >= 1")
        if self.delta_a_over_lambda <= 0 or self.delta_0_over_lambda <= 0:
            raise ValueError("element spacings must be > 0")
        if self.d_t <= 0 or any(d <= 0 for d in self.d_r):
            raise ValueError("distances must be > 0")

    @property
    def N(self) -> int:
        return self.N_x * self.N_y


@dataclass(frozen=True)
class FadingParams:
    """Rician factors (linear), path-loss law and impairment knobs."""

    kappa_g: float = 0.0
    kappa_h: tuple[float, ...] = (0.0,)
    C0: float = 1.0
    alpha_t: float = 2.2
    alpha_r: float = 2.2
    sigma_h_sq: float = 0.0
    d_ref_over_lambda: float = 0.0   # 0 disables spatial correlation
    corr_base: float = 0.7           # correlation at distance d_ref

    def __post_init__(self):
        if self.kappa_g < 0 or any(k < 0 for k in self.kappa_h):
            raise ValueError("Rician factors must be >= 0")
        if self.C0 <= 0 or self.alpha_t <= 0 or self.alpha_r <= 0:
            raise ValueError("C0 and path-loss exponents must be > 0")
        if self.sigma_h_sq < 0:
            raise ValueError("CSI error variance must be >= 0")


@dataclass(frozen=True)
class ChannelRealization:
    """One coherence interval: G (N x M), H (K x N, rows h_k^H), path losses.

    LoS/NLoS parts are kept so correlation can recolor only the NLoS
    component.  G = G_los + G_nlos holds exactly, same for H.
    """

    G: np.ndarray
    H: np.ndarray
    rho_t: float
    rho_r: np.ndarray
    G_los: np.ndarray = field(repr=False, default=None)
    G_nlos: np.ndarray = field(repr=False, default=None)
    H_los: np.ndarray = field(repr=False, default=None)
    H_nlos: np.ndarray = field(repr=False, default=None)


def path_loss(C0: float, d: float, alpha: float) -> float:
    """Distance power law C0 * d^-alpha (all linear scale)."""
    return C0 * d ** (-alpha)


def steering_ula(M: int, spacing: float, psi: float) -> np.ndarray:
    """ULA response row, entry m = exp(-j*2*pi*spacing*m*sin(psi))."""
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(M)
    return np.exp(-2j * np.pi * spacing * m * np.sin(psi))


def steering_urpa(N_x: int, N_y: int, spacing: float, phi: float, varphi: float) -> np.ndarray:
    """URPA response, entry (n_x, n_y) = exp(-j*2*pi*spacing*(n_x sin(phi)cos(varphi) + n_y cos(phi))).

    Flattened row-major in (n_x, n_y): index = n_x*N_y + n_y.
    """
    if N_x < 1 or N_y < 1:
        raise ValueError("grid dims must be >= 1")
    nx = np.arange(N_x)[:, None]
    ny = np.arange(N_y)[None, :]
    phase = nx * np.sin(phi) * np.cos(varphi) + ny * np.cos(phi)
    return np.exp(-2j * np.pi * spacing * phase).ravel()


def _cn(rng: Generator, shape, variance: float) -> np.ndarray:
    s = np.sqrt(variance / 2.0)
    return rng.normal(0.0, s, shape) + 1j * rng.normal(0.0, s, shape)


def sample_channels(geom: Geometry, fading: FadingParams, K: int, rng: Generator) -> ChannelRealization:
    """Draw one Rician realization of (G, H) for K users."""
    if K <= 0:
        raise ValueError("K must be >= 1")
    N = geom.N
    rho_t = path_loss(fading.C0, geom.d_t, fading.alpha_t)
    d_r = np.asarray(geom.d_r, float)
    if d_r.size == 1 and K > 1:
        d_r = np.full(K, d_r[0])
    if d_r.size != K:
        raise ValueError("d_r must have one entry per user")
    rho_r = fading.C0 * d_r ** (-fading.alpha_r)

    kg = fading.kappa_g
    f_ris = steering_urpa(geom.N_x, geom.N_y, geom.delta_0_over_lambda, geom.phi_A, geom.varphi_A)
    f_bs = steering_ula(geom.M, geom.delta_a_over_lambda, geom.psi_D)
    G_los = np.sqrt(kg / (1.0 + kg)) * np.sqrt(rho_t) * np.outer(f_ris, f_bs)
    G_nlos = np.sqrt(1.0 / (1.0 + kg)) * _cn(rng, (N, geom.M), rho_t)

    kh = np.asarray(fading.kappa_h, float)
    if kh.size == 1 and K > 1:
        kh = np.full(K, kh[0])
    phi_Dk = np.resize(np.asarray(geom.phi_Dk, float), K)
    varphi_Dk = np.resize(np.asarray(geom.varphi_Dk, float), K)
    H_los = np.zeros((K, N), complex)
    H_nlos = np.zeros((K, N), complex)
    for k in range(K):
        row = steering_urpa(geom.N_x, geom.N_y, geom.delta_0_over_lambda, phi_Dk[k], varphi_Dk[k])
        H_los[k] = np.sqrt(kh[k] / (1.0 + kh[k])) * np.sqrt(rho_r[k]) * row
        H_nlos[k] = np.sqrt(1.0 / (1.0 + kh[k])) * _cn(rng, N, rho_r[k])

    return ChannelRealization(
        G=G_los + G_nlos, H=H_los + H_nlos, rho_t=rho_t, rho_r=rho_r,
        G_los=G_los, G_nlos=G_nlos, H_los=H_los, H_nlos=H_nlos,
    )


def element_positions(geom: Geometry) -> np.ndarray:
    """RIS element (x, y) coordinates in wavelengths, flattened like steering_urpa."""
    nx = np.arange(geom.N_x)[:, None]
    ny = np.arange(geom.N_y)[None, :]
    x = np.broadcast_to(nx, (geom.N_x, geom.N_y)).ravel() * geom.delta_0_over_lambda
    y = np.broadcast_to(ny, (geom.N_x, geom.N_y)).ravel() * geom.delta_0_over_lambda
    return np.stack([x, y], axis=1)


def correlation_matrix(geom: Geometry, fading: FadingParams) -> np.ndarray:
    """Exponential model: R[p, q] = r ** (d(p, q) / d_ref), on-grid distances."""
    pos = element_positions(geom)
    d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=2)
    return fading.corr_base ** (d / fading.d_ref_over_lambda)


def _coloring_root(R: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root; raises if R has negative eigenvalues."""
    R = 0.5 * (R + R.T)
    w, U = np.linalg.eigh(R)
    if w[0] < -1e-10 * max(1.0, w[-1]):
        raise ValueError(f"correlation matrix not PSD (min eigenvalue {w[0]:.3e})")
    return (U * np.sqrt(np.clip(w, 0.0, None))) @ U.T


def apply_correlation(real: ChannelRealization, geom: Geometry, fading: FadingParams) -> ChannelRealization:
    """Recolor the NLoS parts across RIS elements; LoS parts untouched.

    L = R^{1/2} preserves the per-element marginal variance exactly since
    diag(L L^H) = diag(R) = 1.
    """
    if fading.d_ref_over_lambda <= 0:
        return real
    L = _coloring_root(correlation_matrix(geom, fading))
    G_nlos = L @ real.G_nlos
    H_nlos = (L @ real.H_nlos.conj().T).conj().T
    return replace(real, G=real.G_los + G_nlos, H=real.H_los + H_nlos,
                   G_nlos=G_nlos, H_nlos=H_nlos)


def corrupt_csi(real: ChannelRealization, sigma_h_sq: float, rng: Generator) -> ChannelRealization:
    """Return the estimated channels; the caller keeps `real` as ground truth.

    Error entries are CN(0, sigma_h_sq * rho) per link, i.e. sigma_h_sq is
    relative to the per-entry channel variance (identical to the literal
    absolute reading at unit path loss).
    """
    if sigma_h_sq < 0:
        raise ValueError("sigma_h_sq must be >= 0")
    if sigma_h_sq == 0:
        return real
    G = real.G + _cn(rng, real.G.shape, sigma_h_sq * real.rho_t)
    H = real.H.copy()
    for k in range(H.shape[0]):
        H[k] += _cn(rng, H.shape[1], sigma_h_sq * real.rho_r[k])
    return replace(real, G=G, H=H)


def trial_rng(seed: int, *indices: int) -> Generator:
    """Independent substream for (seed, sweep index, trial index, ...)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, indices)]))
