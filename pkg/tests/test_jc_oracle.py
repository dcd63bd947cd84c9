import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from jcsim.dispersive import AtomFieldState
from jcsim.errors import InvalidArgumentError, ShapeError, TruncationError
from jcsim.fock import FockVector
from jcsim.jc_oracle import (
    JCParams,
    block_propagator,
    compare_dispersive,
    dressed_block,
    evolve_exact,
    verify_commutators,
)


def dense_hamiltonian(p: JCParams) -> np.ndarray:
    """Textbook JC Hamiltonian on (g, e) x field, built without the package."""
    d = p.cutoff + 1
    a = np.zeros((d, d))
    for n in range(1, d):
        a[n - 1, n] = math.sqrt(n)
    sm = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e| in (g, e) order
    sz = np.diag([-1.0, 1.0])
    eye2, eyef = np.eye(2), np.eye(d)
    A = np.kron(eye2, a)
    Sm = np.kron(sm, eyef)
    return (p.omega * A.T @ A + 0.5 * p.omega0 * np.kron(sz, eyef)
            + p.coupling * (Sm.T @ A + A.T @ Sm))


def to_dense(state: AtomFieldState) -> np.ndarray:
    return np.concatenate([state.g_branch.to_dense(), state.e_branch.to_dense()])


def from_dense(vec: np.ndarray) -> AtomFieldState:
    half = len(vec) // 2
    return AtomFieldState(FockVector.from_dense(vec[:half]), FockVector.from_dense(vec[half:]))


def random_state(rng, cutoff):
    """Random joint state with no amplitude on |e, cutoff>."""
    vec = rng.normal(size=2 * (cutoff + 1)) + 1j * rng.normal(size=2 * (cutoff + 1))
    vec[-1] = 0.0
    return from_dense(vec / np.linalg.norm(vec))


params_strategy = st.builds(
    JCParams,
    omega=st.floats(0.1, 5.0),
    omega0=st.floats(0.1, 5.0),
    coupling=st.floats(0.05, 2.0),
    cutoff=st.integers(2, 8),
)


class TestEvolveExact:
    def test_vacuum_rabi_swap(self):
        lam = 0.7
        p = JCParams(1.0, 1.0, lam, cutoff=3)
        initial = AtomFieldState(FockVector({}, 3), FockVector({0: 1.0}, 3))
        out = evolve_exact(p, initial, math.pi / (2 * lam))
        assert out.g_branch.probability(1) == pytest.approx(1.0, abs=1e-14)
        # oracle: dense exponential of the same Hamiltonian
        ref = expm(-1j * dense_hamiltonian(p) * math.pi / (2 * lam)) @ to_dense(initial)
        assert abs(np.vdot(ref, to_dense(out))) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_ground_state_phase(self):
        p = JCParams(1.3, 2.1, 0.4, cutoff=2)
        initial = AtomFieldState(FockVector({0: 1.0}, 2), FockVector({}, 2))
        out = evolve_exact(p, initial, 2.5)
        assert out.g_branch[0] == pytest.approx(np.exp(0.5j * 2.1 * 2.5), abs=1e-14)
        assert out.e_branch.norm_sq() == 0.0

    def test_identity_at_zero(self):
        rng = np.random.default_rng(1)
        p = JCParams(1.0, 1.4, 0.3, cutoff=5)
        s = random_state(rng, 5)
        assert np.allclose(to_dense(evolve_exact(p, s, 0.0)), to_dense(s), atol=1e-15)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_dense_expm(self, seed):
        rng = np.random.default_rng(seed)
        cutoff = int(rng.integers(1, 9))
        p = JCParams(rng.uniform(0.5, 3), rng.uniform(0.5, 3), rng.uniform(0.1, 1.5), cutoff)
        s = random_state(rng, cutoff)
        t = rng.uniform(0, 20)
        ref = expm(-1j * dense_hamiltonian(p) * t) @ to_dense(s)
        out = to_dense(evolve_exact(p, s, t))
        assert abs(np.vdot(ref, out)) ** 2 >= 1 - 1e-10
        assert np.allclose(ref, out, atol=1e-10)

    @given(params_strategy, st.floats(0, 50), st.integers(0, 2 ** 32 - 1))
    def test_unitarity_and_excitation_number(self, p, t, seed):
        s = random_state(np.random.default_rng(seed), p.cutoff)
        out = evolve_exact(p, s, t)
        assert abs(out.norm_sq() - 1.0) <= 1e-12

        def excitation_distribution(st_):
            probs = np.zeros(p.cutoff + 2)
            for n, a in st_.g_branch:
                probs[n] += abs(a) ** 2
            for n, a in st_.e_branch:
                probs[n + 1] += abs(a) ** 2
            return probs

        assert np.allclose(excitation_distribution(out), excitation_distribution(s), atol=1e-12)

    def test_truncation_error(self):
        p = JCParams(1.0, 1.0, 1.0, cutoff=3)
        with pytest.raises(TruncationError):
            evolve_exact(p, AtomFieldState(FockVector({}, 3), FockVector({3: 1.0}, 3)), 1.0)

    def test_cutoff_mismatch(self):
        p = JCParams(1.0, 1.0, 1.0, cutoff=3)
        with pytest.raises(ShapeError):
            evolve_exact(p, AtomFieldState(FockVector({0: 1.0}, 4), FockVector({}, 4)), 1.0)

    def test_interaction_frame_block(self):
        p = JCParams(2.0, 2.5, 0.3, cutoff=4)
        lab = block_propagator(p, 1, 3.0, frame="lab")
        inter = block_propagator(p, 1, 3.0, frame="interaction")
        h0 = np.diag([2.0 * 1 + 1.25, 2.0 * 2 - 1.25])
        assert np.allclose(expm(1j * h0 * 3.0) @ lab, inter, atol=1e-13)
        with pytest.raises(InvalidArgumentError):
            block_propagator(p, 1, 3.0, frame="rotating")


class TestDressedBlock:
    @given(params_strategy, st.integers(0, 20))
    def test_rabi_at_least_detuning(self, p, n):
        b = dressed_block(p, n)
        assert b.rabi_frequency >= abs(p.detuning)
        assert b.rabi_frequency == pytest.approx(
            math.sqrt(p.detuning ** 2 + 4 * p.coupling ** 2 * (n + 1)))

    def test_resonant_mixing(self):
        assert dressed_block(JCParams(1, 1, 1, 3), 0).mixing_angle == pytest.approx(math.pi / 4)


class TestCommutators:
    def test_resonance(self):
        c, cp = verify_commutators(JCParams(1.0, 1.0, 0.5, cutoff=6))
        assert c < 1e-12 and cp < 1e-12

    def test_near_resonance(self):
        c, cp = verify_commutators(JCParams(1.0, 1.25, 0.5, cutoff=6))
        assert c > 1e-3 and cp < 1e-12

    def test_far_detuned(self):
        _, cp = verify_commutators(JCParams(1.0, 51.0, 0.5, cutoff=6))
        assert cp < 1e-12

    def test_commutator_value(self):
        # [H0, V] = detuning * coupling * (sigma_+ a - a^dag sigma_-); on complete blocks
        # its norm is detuning * coupling * sqrt(cutoff)
        p = JCParams(1.0, 1.7, 0.4, cutoff=5)
        c, _ = verify_commutators(p)
        assert c == pytest.approx(0.7 * 0.4 * math.sqrt(5), rel=1e-12)

    def test_small_cutoff(self):
        with pytest.raises(InvalidArgumentError):
            verify_commutators(JCParams(1.0, 1.0, 1.0, cutoff=1))


class TestCompareDispersive:
    def test_leakage_bound(self):
        p = JCParams.from_ratio(100, cutoff=7)
        cmp = compare_dispersive(p, 5, t=1.0)
        for n, leak in zip(cmp.ns, cmp.leakages):
            assert leak <= 4 * (n + 1) / 100 ** 2 + 1e-12
        # peak transfer 4 (n+1) (lambda/detuning)^2 stays below 1e-3 only for n <= 1
        assert cmp.leakages[:2].max() <= 1e-3
        assert cmp.population_leakage <= 1e-2

    def test_leakage_against_expm(self):
        p = JCParams.from_ratio(20, cutoff=4)
        t = 0.37
        cmp = compare_dispersive(p, 2, t)
        H = dense_hamiltonian(p)
        d = p.cutoff + 1
        times = np.linspace(0, t, 2001)
        for n in range(3):
            psi0 = np.zeros(2 * d, dtype=complex)
            psi0[d + n] = 1.0
            worst = max(1 - abs((expm(-1j * H * tau) @ psi0)[d + n]) ** 2 for tau in times[::50])
            assert cmp.leakages[n] >= worst - 1e-9

    def test_fidelity_increases_with_ratio(self):
        fids = [compare_dispersive(JCParams.from_ratio(r, cutoff=7), 5, 1.0).fidelities
                for r in (20, 50, 100)]
        assert np.all(fids[1] > fids[0]) and np.all(fids[2] > fids[1])

    def test_phase_slope(self):
        p = JCParams.from_ratio(100, cutoff=7)
        cmp = compare_dispersive(p, 5, 1.0)
        assert cmp.phase_slope == pytest.approx(p.lambda_eff, rel=0.05)
        # exact excited shift is lambda_eff * (n + 1): the intercept carries the +1
        assert cmp.phase_offset == pytest.approx(p.lambda_eff, rel=0.05)

    def test_eigenphase_oracle(self):
        # slope from the exact dressed energies (Omega_n - detuning)/2, fitted over n
        p = JCParams.from_ratio(100, cutoff=7)
        shifts = [(dressed_block(p, n).rabi_frequency - p.detuning) / 2 for n in range(6)]
        slope = np.polyfit(np.arange(6), shifts, 1)[0]
        assert compare_dispersive(p, 5, 1.0).phase_slope == pytest.approx(slope, rel=1e-2)

    def test_summary(self):
        cmp = compare_dispersive(JCParams.from_ratio(50, cutoff=4), 2, 1.0)
        leak, slope, fid = cmp.summary()
        assert leak == cmp.leakages.max() and fid == cmp.fidelities.min()
        assert cmp.lambda_eff_theory == pytest.approx(1 / 50)

    @pytest.mark.parametrize("kwargs,err", [
        (dict(ratio=2, n=2, cutoff=5), InvalidArgumentError),
        (dict(ratio=20, n=4, cutoff=5), TruncationError),
        (dict(ratio=20, n=0, cutoff=5), InvalidArgumentError),
    ])
    def test_preconditions(self, kwargs, err):
        p = JCParams.from_ratio(kwargs["ratio"], cutoff=kwargs["cutoff"])
        with pytest.raises(err):
            compare_dispersive(p, kwargs["n"], 1.0)
