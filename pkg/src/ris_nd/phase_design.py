"""Diagonal and non-diagonal (permuted) RIS phase configurations and beamformers.

A non-diagonal configuration is stored as two permutations plus a phase
vector and expands to Theta = J_r diag(e^{j theta}) J_t, which has exactly
one unit-modulus entry per row and per column.  The conventional diagonal
architecture is the identity-permutation special case.

Convention: user-side channels enter as the conjugated row hH = h^H of the
system model y = hH Theta g (this is what ChannelRealization.H stores).
With normalized amplitudes a = |g|/sqrt(rho_t), b = |hH|/sqrt(rho_r), the
coherently aligned gains are

    diagonal:     rho_t*rho_r*(sum_i a_i b_i)^2          (EGC-like pairing)
    non-diagonal: rho_t*rho_r*(sum_i a_(i) b_(i))^2      (sorted, MRC-like)

where (i) denotes the i-th smallest amplitude.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sdp import SdpProblem, recover_q, solve_unit_diag_sdp


@dataclass(frozen=True)
class NonDiagonalPhase:
    """perm_in/perm_out are 0-based index arrays: (J_t g)_i = g[perm_in[i]],
    (hH J_r)_i = hH[perm_out[i]].  theta[i] is the phase applied between
    incident element perm_in[i] and reflecting element perm_out[i]."""

    perm_in: np.ndarray
    perm_out: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        n = len(self.theta)
        for p in (self.perm_in, self.perm_out):
            if sorted(p) != list(range(n)):
                raise ValueError("perm_in/perm_out must be permutations of 0..N-1")

    @property
    def N(self) -> int:
        return len(self.theta)

    def expand(self) -> np.ndarray:
        """Dense N x N matrix Theta = J_r diag(e^{j theta}) J_t."""
        T = np.zeros((self.N, self.N), complex)
        T[self.perm_out, self.perm_in] = np.exp(1j * self.theta)
        return T

    def bijection(self) -> np.ndarray:
        """mapping[i] = i' (0-based): signal hitting element i leaves element i'."""
        m = np.empty(self.N, int)
        m[self.perm_in] = self.perm_out
        return m

    @classmethod
    def diagonal(cls, theta: np.ndarray) -> "NonDiagonalPhase":
        n = len(theta)
        ident = np.arange(n)
        return cls(perm_in=ident, perm_out=ident.copy(), theta=np.asarray(theta, float))


@dataclass(frozen=True)
class BeamformingSolution:
    """Transmit beamformer columns w_k (unit norm), power split lambda, RIS config."""

    W: np.ndarray
    lam: np.ndarray
    phase: NonDiagonalPhase


def _safe_angle(x: np.ndarray) -> np.ndarray:
    # zero-magnitude entries contribute phase 0 by convention
    return np.where(np.abs(x) > 0, np.angle(x), 0.0)


def diag_phases_siso(g: np.ndarray, hH: np.ndarray) -> NonDiagonalPhase:
    """Coherent diagonal design: theta_i = -(angle(hH_i) + angle(g_i)) mod 2pi."""
    theta = np.mod(-(_safe_angle(hH) + _safe_angle(g)), 2 * np.pi)
    return NonDiagonalPhase.diagonal(theta)


def sort_permutations(g: np.ndarray, hH: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stable ascending-amplitude orders of g (for J_t) and hH (for J_r)."""
    return (np.argsort(np.abs(g), kind="stable"),
            np.argsort(np.abs(hH), kind="stable"))


def nondiag_siso(g: np.ndarray, hH: np.ndarray) -> NonDiagonalPhase:
    """Sorted-amplitude pairing with coherent phases:
    theta_i = -(angle([hH J_r]_i) + angle([J_t g]_i))."""
    perm_in, perm_out = sort_permutations(g, hH)
    theta = np.mod(-(_safe_angle(hH[perm_out]) + _safe_angle(g[perm_in])), 2 * np.pi)
    return NonDiagonalPhase(perm_in=perm_in, perm_out=perm_out, theta=theta)


def channel_gain(hH: np.ndarray, phase: NonDiagonalPhase, g: np.ndarray) -> float:
    """|hH Theta g|^2, computed by expanding Theta."""
    if len(hH) != phase.N or len(g) != phase.N:
        raise ValueError("dimension mismatch")
    return float(np.abs(hH @ phase.expand() @ g) ** 2)


def _initial_w(G: np.ndarray, hH: np.ndarray, init: str, rng=None) -> np.ndarray:
    N, M = G.shape
    if init == "spectral":
        # phase-unconstrained relaxation of the sorted problem: dominant right
        # singular vector of diag(hH sorted) G_sorted; shortest convergence tail
        oh = np.argsort(np.abs(hH), kind="stable")
        og = np.argsort(np.abs(G).mean(axis=1), kind="stable")
        D = hH[oh][:, None] * G[og, :]
        _, _, Vh = np.linalg.svd(D, full_matrices=False)
        return Vh.conj().T[:, 0]
    if init == "mean-column":
        v = G.mean(axis=0)
        return v / np.linalg.norm(v)
    if init == "first-column":
        w = np.zeros(M, complex)
        w[0] = 1.0
        return w
    if init == "random":
        if rng is None:
            rng = np.random.default_rng(0)
        v = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        return v / np.linalg.norm(v)
    raise ValueError(f"unknown init {init!r}")


def alt_opt_miso(G: np.ndarray, hH: np.ndarray, eps: float = 1e-4, max_iter: int = 50,
                 rng=None, init: str = "spectral", sort_perms: bool = True):
    """Alternating optimization for single-user MISO.

    Repeats (re-sort J_t by |G w|; coherent theta; MRT w) with J_r fixed from
    |hH| once.  Stops when the gain increment drops below eps*max(1, gain) or
    after max_iter passes.  With sort_perms=False this is the conventional
    diagonal baseline (identity permutations).

    Returns (phase, w, trace) where trace is the per-iteration objective
    |hH Theta G w|^2 (non-decreasing).
    """
    if eps <= 0 or max_iter < 1:
        raise ValueError("eps must be > 0 and max_iter >= 1")
    N, M = G.shape
    order_h = (np.argsort(np.abs(hH), kind="stable") if sort_perms else np.arange(N))
    hp = hH[order_h]
    w = _initial_w(G, hH, init, rng)
    prev = -np.inf
    trace: list[float] = []
    order_g = np.arange(N)
    theta = np.zeros(N)
    for _ in range(max_iter):
        gw = G @ w
        if sort_perms:
            order_g = np.argsort(np.abs(gw), kind="stable")
        theta = np.mod(-(_safe_angle(hp) + _safe_angle(gw[order_g])), 2 * np.pi)
        row = (hp * np.exp(1j * theta)) @ G[order_g, :]
        nrm = np.linalg.norm(row)
        if nrm == 0:
            raise ValueError("zero effective channel; cannot beamform")
        w = row.conj() / nrm
        obj = float(np.abs(row @ w) ** 2)
        trace.append(obj)
        if obj - prev < eps * max(1.0, abs(obj)):
            break
        prev = obj
    phase = NonDiagonalPhase(perm_in=order_g, perm_out=order_h, theta=theta)
    return phase, w, trace


def mu_permutations(G: np.ndarray, H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Multi-user sorting rule on entrywise amplitude means:
    g' = mean_m |g_m|, h' = mean_k |h_k| (both length N)."""
    g_mean = np.abs(G).mean(axis=1)
    h_mean = np.abs(H).mean(axis=0)
    return (np.argsort(g_mean, kind="stable"), np.argsort(h_mean, kind="stable"))


def build_phi(H: np.ndarray, G: np.ndarray, perms: tuple[np.ndarray, np.ndarray]) -> list[np.ndarray]:
    """Phi_k = diag(h_k^H J_r) J_t G, so that q^H Phi_k Phi_k^H q = ||h_k^H Theta G||^2.

    H rows are the h_k^H rows, as stored in ChannelRealization.H.
    """
    perm_in, perm_out = perms
    N, M = G.shape
    if H.shape[1] != N or len(perm_in) != N or len(perm_out) != N:
        raise ValueError("dimension mismatch")
    Gp = G[perm_in, :]
    return [(H[k, :][perm_out])[:, None] * Gp for k in range(H.shape[0])]


def water_filling(s: np.ndarray, snr: float) -> np.ndarray:
    """Power split lambda_k = max(0, mu - 1/(snr*s_k^2)) with sum(lambda) = 1.

    mu is bracketed by bisection and then set exactly on the resolved active
    set, so active entries share one water level to machine precision.
    """
    s = np.asarray(s, float)
    if snr <= 0:
        raise ValueError("snr must be > 0")
    if np.all(s <= 0):
        raise ValueError("all singular values are zero; no usable channel")
    with np.errstate(divide="ignore"):
        c = np.where(s > 0, 1.0 / (snr * s ** 2), np.inf)
    lo = float(np.min(c))
    hi = lo + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.sum(np.maximum(0.0, mid - c)) < 1.0:
            lo = mid
        else:
            hi = mid
    active = c < 0.5 * (lo + hi)
    ca = c[active]
    n = ca.size
    lam = np.zeros_like(s)
    # lambda_k = (1 + sum_j (c_j - c_k)) / n, stable against a common offset in c
    lam[active] = (1.0 + (np.sum(ca) - n * ca)) / n
    return lam


@dataclass(frozen=True)
class TwoStageResult:
    solution: BeamformingSolution
    rate: float
    sdp_objective: float
    recovered_objective: float
    sdp_gap: float
    singular_values: np.ndarray


def two_stage_mimo(G: np.ndarray, H: np.ndarray, Pt: float, sigma_n_sq: float,
                   sort_perms: bool = True, tol: float = 1e-6) -> TwoStageResult:
    """Two-stage multi-user design.

    Stage I maximizes sum_k ||h_k^H Theta G||^2 via the unit-diagonal SDR of
    q^H (sum_k Phi_k Phi_k^H) q followed by leading-eigenvector recovery and
    unit-modulus projection.  Stage II puts W on the first K right singular
    vectors of H_equ = H Theta G and water-fills the power split.
    """
    N, M = G.shape
    K = H.shape[0]
    if K > M:
        raise ValueError("requires K <= M")
    if Pt <= 0 or sigma_n_sq <= 0:
        raise ValueError("Pt and sigma_n_sq must be > 0")
    perms = mu_permutations(G, H) if sort_perms else (np.arange(N), np.arange(N))
    phis = build_phi(H, G, perms)
    A = np.zeros((N, N), complex)
    for Phi in phis:
        A += Phi @ Phi.conj().T
    # solver tolerance is relative, so the path-loss scale of A is immaterial
    Q, sdp_obj, _gap = solve_unit_diag_sdp(SdpProblem(A=A, tol=tol))
    q = recover_q(Q)
    rec_obj = float(np.real(q.conj() @ A @ q))
    # q holds e^{-j theta_i}; diag(q^H) is the diagonal factor of Theta
    theta = np.mod(-np.angle(q), 2 * np.pi)
    phase = NonDiagonalPhase(perm_in=perms[0], perm_out=perms[1], theta=theta)

    H_equ = H @ phase.expand() @ G
    _, s, Vh = np.linalg.svd(H_equ, full_matrices=False)
    W = Vh.conj().T[:, :K]
    lam = water_filling(s[:K], Pt / sigma_n_sq)
    sol = BeamformingSolution(W=W, lam=lam, phase=phase)

    C = W @ np.diag(lam) @ W.conj().T
    Mat = np.eye(K) + (Pt / sigma_n_sq) * (H_equ @ C @ H_equ.conj().T)
    rate = float(np.linalg.slogdet(Mat)[1].real / np.log(2))
    rel_gap = (sdp_obj - rec_obj) / max(abs(sdp_obj), 1e-300)
    return TwoStageResult(solution=sol, rate=rate, sdp_objective=sdp_obj,
                          recovered_objective=rec_obj, sdp_gap=rel_gap,
                          singular_values=s[:K])


def baseline_gains(g: np.ndarray, hH: np.ndarray, group_size: int) -> tuple[float, float]:
    """Reference-architecture gains from raw amplitudes.

    fully-connected:  (sum a_i^2)(sum b_i^2)
    group-connected:  (sum over groups sqrt((sum_grp a_i^2)(sum_grp b_i^2)))^2
    with consecutive element groups of the given size.
    """
    a2 = np.abs(g) ** 2
    b2 = np.abs(hH) ** 2
    N = a2.size
    if N % group_size != 0:
        raise ValueError("group size must divide N")
    fully = float(a2.sum() * b2.sum())
    ga = a2.reshape(-1, group_size).sum(axis=1)
    gb = b2.reshape(-1, group_size).sum(axis=1)
    group = float(np.sum(np.sqrt(ga * gb)) ** 2)
    return fully, group
