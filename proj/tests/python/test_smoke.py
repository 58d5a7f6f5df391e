import os
import tempfile

import numpy as np
import pytest

import dfslogic as dl


def test_cnb_hamiltonian_is_hermitian_and_conserves_fz():
    sys = dl.cnb_nominal()
    assert sys.n_spins == 4
    h = dl.internal_hamiltonian(sys)
    assert h.shape == (16, 16)
    assert np.allclose(h, h.conj().T)
    fz = dl.total_fz(4)
    assert np.abs(h @ fz - fz @ h).max() < 1e-9


def test_exact_entangler_has_unit_fidelity_and_no_leakage():
    u = dl.embed_logical_unitary(dl.u_ent())
    assert dl.logical_gate_fidelity(u, dl.u_ent()) == pytest.approx(1.0, abs=1e-14)
    assert dl.leakage(u) == pytest.approx(0.0, abs=1e-14)


def test_logical_states_survive_collective_dephasing():
    e = dl.logical_basis()
    psi = e @ (np.array([1, 0, 0, -1]) / np.sqrt(2))
    rho = np.outer(psi, psi.conj())
    for s in (0.1, 1.0, 10.0):
        assert np.abs(dl.collective_dephasing(rho, s) - rho).max() < 1e-12


def test_gradient_matches_finite_difference():
    sys = dl.cnb_nominal()
    rng = np.random.default_rng(0)
    amps = rng.uniform(-1500, 1500, size=(6, 2))
    f0, g = dl.gradient(amps, 1e-5, sys)
    h = 0.1
    bumped = amps.copy()
    bumped[2, 1] += h
    up = dl.gradient(bumped, 1e-5, sys)[0]
    bumped[2, 1] -= 2 * h
    down = dl.gradient(bumped, 1e-5, sys)[0]
    assert (up - down) / (2 * h) == pytest.approx(g[2, 1], rel=1e-6)


def test_ideal_tomography_round_trip():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho_l = m @ m.conj().T
    rho_l /= np.trace(rho_l)
    e = dl.logical_basis()
    rec, residual, cond = dl.ideal_round_trip(e @ rho_l @ e.conj().T)
    assert np.abs(rec - rho_l).max() < 1e-10
    assert cond < 100
    assert dl.correlation(rec, rho_l) == pytest.approx(1.0)


def test_mrev8_scaling_near_half():
    assert 0.45 <= dl.mrev8_shift_scale(dl.cnb_nominal(), 15e-6) <= 0.55


def test_short_synthesis_improves_and_round_trips_through_a_file():
    res = dl.synthesize("spin_cnot", n_steps=40, max_iters=30, single_member=True)
    assert res["trace"][-1] >= res["trace"][0]
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "p.pulse")
        dl.write_pulse_file(path, res["amps"], res["dt"], "spin_cnot")
        back = dl.read_pulse_file(path)
        assert back["target"] == "spin_cnot"
        assert np.array_equal(back["amps"], res["amps"])


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        dl.collective_dephasing(np.eye(16), -1.0)
    with pytest.raises(ValueError):
        dl.synthesize("no_such_target", n_steps=5, max_iters=1)
