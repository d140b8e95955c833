import numpy as np
import pytest

from ris_nd.sdp import (SdpNonConvergence, SdpProblem, brute_force_phases,
                        recover_q, solve_unit_diag_sdp, solver_trace)


def _rand_psd(rng, n, r=6):
    B = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return B @ B.conj().T


def test_problem_validation():
    with pytest.raises(ValueError):
        SdpProblem(A=np.array([[0.0, 1.0], [0.0, 0.0]]))  # not Hermitian
    with pytest.raises(ValueError):
        SdpProblem(A=np.eye(2), tol=2.0)


def test_n1():
    Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=np.array([[3.5 + 0j]])))
    assert Q[0, 0] == 1.0 and obj == 3.5 and gap == 0.0


def test_identity_objective_is_n():
    for n in (2, 5, 17):
        Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=np.eye(n, dtype=complex)))
        assert obj == pytest.approx(n, rel=1e-9)
        assert gap <= 1e-6
        assert np.allclose(np.diag(Q), 1.0, atol=1e-8)


def test_rank_one_unit_modulus_instance():
    # A = v v^H with |v_i| = 1: optimum N^2 at q aligned with v
    rng = np.random.default_rng(0)
    n = 6
    v = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=np.outer(v, v.conj())))
    assert obj == pytest.approx(n * n, rel=2e-6)  # certified to the 1e-6 gap
    q = recover_q(Q)
    assert abs(np.abs(np.vdot(v, q)) - n) < 1e-6


def test_feasibility_and_certificate():
    rng = np.random.default_rng(1)
    for _ in range(20):
        A = _rand_psd(rng, 8)
        Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=A))
        w = np.linalg.eigvalsh(Q)
        assert w[0] >= -1e-8
        assert np.max(np.abs(np.diag(Q) - 1.0)) < 1e-8
        assert gap <= 1e-6
        assert obj == pytest.approx(np.trace(A @ Q).real, abs=1e-8 * max(1, obj))
        # trace objective is real (A Hermitian)
        assert abs(np.trace(A @ Q).imag) < 1e-10 * max(1, obj)


def test_monotone_sweep_objectives():
    rng = np.random.default_rng(2)
    A = _rand_psd(rng, 12)
    tr = solver_trace(SdpProblem(A=A))
    assert all(b >= a - 1e-9 * max(1, abs(a)) for a, b in zip(tr, tr[1:]))


def test_determinism_bitwise():
    rng = np.random.default_rng(3)
    A = _rand_psd(rng, 10)
    Q1, o1, g1 = solve_unit_diag_sdp(SdpProblem(A=A))
    Q2, o2, g2 = solve_unit_diag_sdp(SdpProblem(A=A))
    assert np.array_equal(Q1, Q2) and o1 == o2 and g1 == g2


def test_nonconvergence_carries_best_iterate():
    rng = np.random.default_rng(4)
    A = _rand_psd(rng, 10)
    with pytest.raises(SdpNonConvergence) as exc:
        solve_unit_diag_sdp(SdpProblem(A=A, tol=1e-12, max_iter=2))
    assert exc.value.Q is not None and exc.value.gap > 0


class TestRecoverQ:
    def test_exact_rank_one(self):
        rng = np.random.default_rng(5)
        v = np.exp(1j * rng.uniform(0, 2 * np.pi, 7))
        q = recover_q(np.outer(v, v.conj()))
        assert np.allclose(np.abs(q), 1.0, atol=1e-12)
        assert abs(np.abs(np.vdot(v, q)) - 7) < 1e-9

    def test_identity_convention(self):
        q = recover_q(np.eye(5, dtype=complex))
        assert np.allclose(np.abs(q), 1.0, atol=1e-12)

    def test_phase_convention_deterministic(self):
        rng = np.random.default_rng(6)
        Q = _rand_psd(rng, 6)
        assert np.array_equal(recover_q(Q), recover_q(Q))

    def test_recovered_below_certified_bound(self):
        # feasible rank-one value may exceed a near-optimal primal iterate,
        # but never the dual bound obj/(1 - gap)
        rng = np.random.default_rng(7)
        for _ in range(20):
            A = _rand_psd(rng, 6)
            Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=A))
            q = recover_q(Q)
            assert np.allclose(np.abs(q), 1.0, atol=1e-12)
            rec = float(np.real(q.conj() @ A @ q))
            assert rec <= obj / (1.0 - gap) + 1e-9 * max(1.0, obj)


class TestBruteForce:
    def test_identity(self):
        q, val = brute_force_phases(np.eye(2, dtype=complex), 4)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            brute_force_phases(np.eye(8, dtype=complex), 4)
        with pytest.raises(ValueError):
            brute_force_phases(np.eye(2, dtype=complex), 32)

    def test_relaxation_dominance_n3(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            A = _rand_psd(rng, 3)
            _, bf = brute_force_phases(A, 8)
            _, obj, _ = solve_unit_diag_sdp(SdpProblem(A=A))
            assert obj >= bf - 1e-9

    def test_with_permutations_consistent(self):
        # full grid: permuted optimum equals the plain optimum
        rng = np.random.default_rng(9)
        A = _rand_psd(rng, 3)
        _, val = brute_force_phases(A, 4)
        q, perm, valp = brute_force_phases(A, 4, with_permutations=True)
        assert valp == pytest.approx(val, rel=1e-12)
        assert sorted(perm) == [0, 1, 2]
