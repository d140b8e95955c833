"""Unit-diagonal complex SDP:  maximize Tr(A Q)  s.t.  Q >= 0, Q_ii = 1.

Solved by block-coordinate ascent on the low-rank factorization Q = V V^H
with unit-norm rows (the "mixing" iteration): row i is re-aimed at
c_i = sum_{j != i} A_ij v_j, which is the exact maximizer of the objective
over that row.  The primal objective is therefore non-decreasing sweep by
sweep, and the method stays feasible throughout (Q_ii = 1, Q >= 0 exactly).

Certificate: at any iterate, y_i = ||c_i|| + A_ii gives S = diag(y) - A with
S V = 0 at critical points; shifting by the most negative eigenvalue of S
makes diag(y) + max(0, -lambda_min) I - A >= 0, a feasible dual point, so

    dual = sum_i y_i + N * max(0, -lambda_min(S)) >= optimum >= primal.

The reported gap is (dual - primal) / |dual|; it vanishes at rank-deficient
global optima, which is how the solve is certified.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _permutations
from math import factorial

import numpy as np


class SdpNonConvergence(RuntimeError):
    """Raised when the certified gap fails to reach tol; carries the best iterate."""

    def __init__(self, msg, Q=None, objective=None, gap=None):
        super().__init__(msg)
        self.Q = Q
        self.objective = objective
        self.gap = gap


@dataclass(frozen=True)
class SdpProblem:
    A: np.ndarray
    tol: float = 1e-6
    max_iter: int = 500

    def __post_init__(self):
        A = np.asarray(self.A, complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise ValueError("A must be square, N >= 1")
        scale = max(1.0, float(np.abs(A).max()))
        if np.abs(A - A.conj().T).max() > 1e-10 * scale:
            raise ValueError("A must be Hermitian within 1e-10")
        if not (0.0 < self.tol < 1.0):
            raise ValueError("tol must be in (0, 1)")
        object.__setattr__(self, "A", 0.5 * (A + A.conj().T))


def _factor_rank(N: int) -> int:
    # Burer-Monteiro style rank; full rank + 1 for small N, ~sqrt(2N) beyond
    return N + 1 if N <= 16 else int(np.ceil(np.sqrt(2.0 * N))) + 4


def _initial_factor(A: np.ndarray, r: int) -> np.ndarray:
    N = A.shape[0]
    w, U = np.linalg.eigh(A)
    V = U[:, ::-1][:, :r] * np.sqrt(np.clip(w[::-1][:r], 0.0, None))
    if V.shape[1] < r:
        V = np.pad(V, ((0, 0), (0, r - V.shape[1])))
    # deterministic perturbation breaks symmetric saddles (e.g. A = c*I)
    pr = np.random.default_rng(0x5D9)
    V = V + 1e-3 * (pr.standard_normal((N, r)) + 1j * pr.standard_normal((N, r)))
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def _certificate(A: np.ndarray, V: np.ndarray):
    d = np.real(np.diag(A))
    AV = A @ V
    primal = float(np.real(np.vdot(V, AV)))
    C = AV - d[:, None] * V
    y = np.linalg.norm(C, axis=1) + d
    lam_min = float(np.linalg.eigvalsh(np.diag(y) - A)[0])
    dual = float(np.sum(y) + A.shape[0] * max(0.0, -lam_min))
    gap = (dual - primal) / max(abs(dual), 1e-300)
    return primal, dual, max(gap, 0.0)


def solve_unit_diag_sdp(prob: SdpProblem):
    """Returns (Q, objective, gap) with Q_ii = 1 and relative gap <= tol.

    Raises SdpNonConvergence (carrying the best iterate and its gap) if the
    certificate does not reach tol within max_iter sweeps.
    """
    A = prob.A
    N = A.shape[0]
    if N == 1:
        return np.ones((1, 1), complex), float(A[0, 0].real), 0.0
    V = _initial_factor(A, _factor_rank(N))
    best = None
    for sweep in range(prob.max_iter):
        for i in range(N):
            c = A[i, :] @ V - A[i, i] * V[i, :]
            n = np.linalg.norm(c)
            if n > 1e-300:
                V[i, :] = c / n
        primal, dual, gap = _certificate(A, V)
        if best is None or primal > best[0]:
            best = (primal, gap, V.copy())
        if gap <= prob.tol:
            Q = V @ V.conj().T
            np.fill_diagonal(Q, 1.0)
            return Q, primal, gap
    primal, gap, V = best
    raise SdpNonConvergence(
        f"gap {gap:.3e} > tol {prob.tol:.1e} after {prob.max_iter} sweeps",
        Q=V @ V.conj().T, objective=primal, gap=gap,
    )


def solver_trace(prob: SdpProblem) -> list[float]:
    """Per-sweep primal objectives (non-decreasing); diagnostic twin of the solver."""
    A = prob.A
    N = A.shape[0]
    if N == 1:
        return [float(A[0, 0].real)]
    V = _initial_factor(A, _factor_rank(N))
    out = []
    for _ in range(prob.max_iter):
        for i in range(N):
            c = A[i, :] @ V - A[i, i] * V[i, :]
            n = np.linalg.norm(c)
            if n > 1e-300:
                V[i, :] = c / n
        primal, _, gap = _certificate(A, V)
        out.append(primal)
        if gap <= prob.tol:
            break
    return out


def recover_q(Q: np.ndarray) -> np.ndarray:
    """Entrywise unit-modulus projection of the leading eigenvector of Q.

    Global phase fixed by making the first non-negligible entry real-positive;
    zero entries project to 1 by convention.
    """
    Q = np.asarray(Q, complex)
    _, U = np.linalg.eigh(0.5 * (Q + Q.conj().T))
    v = U[:, -1]
    mags = np.abs(v)
    k = int(np.argmax(mags > 1e-12 * max(mags.max(), 1e-300)))
    v = v * np.exp(-1j * np.angle(v[k])) if mags[k] > 0 else v
    q = np.ones(v.shape, complex)
    nz = np.abs(v) > 1e-300
    q[nz] = v[nz] / np.abs(v[nz])
    return q


def brute_force_phases(A: np.ndarray, levels: int, with_permutations: bool = False):
    """Exhaustive maximum of q^H A q over the uniform phase grid.

    With with_permutations=True the search also runs over all relabelings
    P^T A P and returns (q, perm, objective); note that for a full phase grid
    the optimal value is permutation-invariant (the grid maps to itself under
    index permutation), so the flag exercises the permutation path rather
    than changing the optimum.
    """
    A = np.asarray(A, complex)
    N = A.shape[0]
    if N > 6 or levels > 16:
        raise ValueError("instance too large for brute force (N <= 6, levels <= 16)")
    if with_permutations and levels ** N * factorial(N) > 10 ** 8:
        raise ValueError("instance too large with permutations enabled")
    ph = np.exp(2j * np.pi * np.arange(levels) / levels)
    grids = np.meshgrid(*([ph] * N), indexing="ij")
    Qs = np.stack([g.ravel() for g in grids], axis=1)          # (levels^N, N)

    def grid_max(mat):
        vals = np.einsum("ki,ij,kj->k", Qs.conj(), mat, Qs).real
        k = int(np.argmax(vals))
        return float(vals[k]), Qs[k]

    if not with_permutations:
        val, q = grid_max(A)
        return q, val
    best = (-np.inf, None, None)
    for perm in _permutations(range(N)):
        p = np.asarray(perm)
        val, q = grid_max(A[np.ix_(p, p)])
        if val > best[0]:
            best = (val, q, p)
    return best[1], best[2], best[0]
