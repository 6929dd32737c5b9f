"""Smoke tests for the python bindings (built extension on PYTHONPATH)."""

import json
import math

import numpy as np
import pytest

import sdring


def make_params(**kwargs):
    defaults = dict(N=8, T_bath=200.0)
    defaults.update(kwargs)
    return sdring.ModelParams(**defaults)


def test_derived_scales():
    p = make_params(N=32, sigma_f=0.01, f_bias=0.003)
    d = sdring.derive_scales(p)
    assert d.sigma_E == pytest.approx(2.0)
    assert d.eta == pytest.approx(0.0025)
    assert d.E_bias == pytest.approx(0.6)


def test_rate_matrix_columns_sum_to_zero():
    p = make_params(N=16, sigma_f=0.02, sigma_nu=0.05, f_bias=0.003, seed=4)
    real = sdring.sample_realization(p)
    w = sdring.build_rate_matrix(real)
    assert np.abs(w.sum(axis=0)).max() < 1e-14
    wp, wm = sdring.transition_rates(real)
    assert np.allclose(wp * wm, real.nu_x**2)


def test_eigendecompose_clean_ring():
    p = make_params(N=8, seed=1)
    w = sdring.build_rate_matrix(sdring.sample_realization(p)).astype(complex)
    values, vectors, residual = sdring.eigendecompose(w)
    assert residual < 1e-9
    expected = sorted(-2.0 * (1.0 - math.cos(2.0 * math.pi * k / 8)) for k in range(8))
    assert np.allclose(sorted(values.real), expected, atol=1e-12)
    assert np.abs(values.imag).max() < 1e-12


def test_pauli_reduction_small_ring():
    p = make_params(N=6, sigma_f=0.02, sigma_nu=0.05, gamma=3.0, seed=9)
    real = sdring.sample_realization(p)
    sup = sdring.build_lindbladian(real, p)
    w_eigs = sdring.eigenvalues_only(sdring.build_rate_matrix(real).astype(complex))
    l_eigs = sdring.eigenvalues_only(sup)
    for ev in w_eigs:
        assert np.abs(l_eigs - ev).min() < 1e-10


def test_spectrum_report_classification():
    p = make_params(N=6, gamma=5.0, seed=2)
    real = sdring.sample_realization(p)
    modes = sdring.spectrum_report(sdring.build_lindbladian(real, p), "lindblad", 6)
    branches = [m["branch"] for m in modes]
    assert branches.count("relaxation") == 6
    assert branches.count("decoherence") == 30


def test_critical_bias_estimate():
    assert sdring.critical_bias_estimate(0.02, "box") == pytest.approx(0.02**2 / 48)
    assert sdring.critical_bias_estimate(0.02, "gaussian") == pytest.approx(1e-4)


def test_threshold_on_clean_ring():
    p = make_params(N=12, seed=3)
    real = sdring.sample_realization(p)
    value, no_transition, monotone = sdring.threshold_fc(real, p, "stochastic", 0.05, 1e-6)
    assert not no_transition
    assert value < 1e-5


def test_json_roundtrip():
    p = make_params(N=16, c=0.5, gamma=5.0, sigma_f=0.01, seed=11)
    text = sdring.params_to_json(p)
    parsed = json.loads(text)
    assert set(parsed) == {
        "N", "nu", "c", "gamma", "f_bias", "sigma_f", "sigma_nu",
        "T_bath", "dist_shape", "seed",
    }
    q = sdring.params_from_json(text)
    assert q.N == p.N and q.c == p.c and q.seed == p.seed


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        sdring.ModelParams(N=2)
    with pytest.raises(ValueError):
        sdring.params_from_json("{}")


def test_clean_relaxation_rate_limit():
    p = make_params(N=8)
    for k in range(8):
        q = 2.0 * math.pi * k / 8
        lam = sdring.clean_relaxation_rate(q, p)
        assert lam == pytest.approx(2.0 * (1.0 - math.cos(q)), abs=1e-12)
