"""Smoke tests for the python bindings (run against the build tree)."""

import math

import pytest

import subdiff


def test_import_and_metadata():
    assert subdiff.__version__
    families = subdiff.builtin_families()
    assert "uniform" in families
    assert "two_atom" in families


def test_precision_control():
    assert subdiff.precision_bits() >= 64
    subdiff.set_precision_bits(128)
    assert subdiff.precision_bits() == 128
    subdiff.set_precision_bits(256)
    with pytest.raises(ValueError):
        subdiff.set_precision_bits(32)


def test_moments_uniform():
    delta = 0.1
    m = subdiff.moments("uniform", delta, 4)
    assert m[0] == pytest.approx(1.0, rel=1e-12)
    assert m[1] == pytest.approx(0.0, abs=1e-15)
    assert m[2] == pytest.approx(delta**2 / 3.0, rel=1e-12)
    assert m[4] == pytest.approx(delta**4 / 5.0, rel=1e-12)


def test_quantum_bound_report():
    rep = subdiff.quantum_bound("uniform", 0.1, 1, n_photons=1e5)
    # Frozen reference value for the uniform object at delta = 0.1.
    assert rep["gram"] == pytest.approx(0.000832417525003306801047, rel=1e-10)
    assert rep["dot_beta"] == pytest.approx(0.1 / math.sqrt(3.0), rel=1e-12)
    expected = rep["dot_beta"] ** 2 / (1e5 * 4.0 * rep["gram"])
    assert rep["bound_lower"] == pytest.approx(expected, rel=1e-9)
    assert rep["truncation_order"] >= 1


def test_spade_constants_gaussian():
    c = subdiff.spade_constants("gaussian", 3)
    assert c["closed_form_gaussian"]
    # r_n = 1 / (4^n n!) for the gaussian demultiplexer.
    assert c["r"][0] == pytest.approx(1.0, rel=1e-12)
    assert c["r"][1] == pytest.approx(0.25, rel=1e-12)
    assert c["r"][2] == pytest.approx(1.0 / 32.0, rel=1e-12)


def test_mode_probabilities_sum():
    probs = subdiff.mode_probabilities("uniform", 0.05, n_max=4)
    assert sum(probs["pad"]) <= 1.0 + 1e-12
    assert probs["pad"][0] == pytest.approx(1.0, abs=1e-2)


def test_simulate_spade_deterministic():
    kwargs = dict(m_modes=10**5, epsilon=0.01, seed=42, mode="even", order=1)
    a = subdiff.simulate_spade("uniform", 0.1, **kwargs)
    b = subdiff.simulate_spade("uniform", 0.1, **kwargs)
    assert a["pad_counts"] == b["pad_counts"]
    assert a["other_count"] == b["other_count"]
    orders = [e["order"] for e in a["entries"]]
    assert orders == [0, 2]
    c = subdiff.simulate_spade("uniform", 0.1, stream=1, **kwargs)
    assert a["pad_counts"] != c["pad_counts"]


def test_direct_fisher_gaussian():
    rep = subdiff.direct_fisher("gaussian", "uniform", 0.1, 1)
    # Frozen reference value for the uniform object at delta = 0.1.
    assert rep["fisher"] == pytest.approx(0.003322267878752095, rel=1e-9)
    assert rep["tail_bound"] <= 1e-10 * rep["fisher"]
    assert not rep["experimental"]


def test_check_domination():
    ok = subdiff.check_domination("gaussian", 0.5, 2)
    assert ok["pass"]
    assert ok["integral_score"] > 0
    bad = subdiff.check_domination("sinc2", 0.1, 1)
    assert not bad["pass"]


def test_sweep_fit_slope():
    fit = subdiff.sweep_fit("bound", order=2, grid=[0.02, 0.045, 0.1])
    assert fit["theory"] == pytest.approx(2.0)
    assert abs(fit["slope"] - 2.0) <= 0.15
    assert fit["pass"]


def test_run_cli_exit_codes():
    assert subdiff.run_cli(["--version"]) == 0
    assert subdiff.run_cli(["bogus-subcommand"]) == 2
