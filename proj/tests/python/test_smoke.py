"""Smoke tests for the qst python extension."""

import math

import numpy as np

import qst


def test_operator_construction():
    a = qst.annihilation(4)
    expected = np.zeros((4, 4), dtype=complex)
    for n in range(1, 4):
        expected[n - 1, n] = math.sqrt(n)
    assert np.allclose(a, expected, atol=0)

    raise_eg = qst.qutrit_transition(qst.Level.g, qst.Level.e)
    assert raise_eg[1, 0] == 1.0 and np.count_nonzero(raise_eg) == 1

    layout = qst.SpaceLayout(2)
    assert layout.dim == 36
    n_op = a[:2, :2].conj().T @ a[:2, :2]
    embedded = qst.embed(n_op, qst.Factor.res_a, layout)
    assert embedded.shape == (36, 36)
    assert abs(np.trace(embedded) - np.trace(n_op) * 18) < 1e-12


def test_schedule_numbers():
    s = qst.schedule()
    assert abs(s["lambda1_mhz"] - 10.0) < 1e-9
    assert abs(s["t1_ns"] - 25.0) < 1e-9
    assert abs(s["t2_ns"] - 5.0) < 1e-9
    assert abs(s["lambda2_over_lambda1"] - 1.0) < 1e-12


def test_config_round_trip():
    defaults = qst.default_config()
    assert defaults["kappa_inv_us"] == "0.10000000000000001"
    assert defaults["constraint_mode"] == "strict_eq10"
    # unknown keys are rejected
    try:
        qst.run_transfer({"not_a_key": "1"})
    except Exception as e:
        assert "not_a_key" in str(e)
    else:
        raise AssertionError("unknown key was accepted")


def test_small_transfer_run():
    # coarse but honest run: truncated Fock space and a larger step
    result = qst.run_transfer({"n_ph": "2", "dt_ps": "4", "spectrum_checks": "false"})
    assert 0.9 < result["fidelity"] <= 1.0
    assert result["max_trace_error"] < 1e-8
    assert abs(result["schedule"]["total_ns"] - 30.0) < 1e-9
    assert result["peak_photon"] < 0.05


def test_dark_state_is_exact():
    result = qst.run_transfer(
        {
            "n_ph": "2",
            "dt_ps": "4",
            "spectrum_checks": "false",
            "state_gamma": "0",
            "state_theta_rad": "0",
            "state_amplitudes": "true",
            "alpha_re": "1",
            "beta_re": "0",
            "gamma_re": "0",
        }
    )
    assert abs(result["fidelity"] - 1.0) < 1e-7


def test_tiny_sweep():
    result = qst.sweep_detuning(
        {
            "n_ph": "2",
            "dt_ps": "4",
            "spectrum_checks": "false",
            "sweep_D_min": "10",
            "sweep_D_max": "10",
            "sweep_D_count": "1",
            "sweep_kappa_inv_us": "0.1",
        }
    )
    assert result["kind"] == "detuning"
    assert len(result["rows"]) == 1
    d, kappa, fidelity = result["rows"][0][:3]
    assert d == 10.0 and kappa == 0.1
    assert 0.9 < fidelity <= 1.0
    assert result["min_fidelity"] == fidelity == result["max_fidelity"]


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} python smoke tests passed (qst {qst.__version__})")


if __name__ == "__main__":
    main()
