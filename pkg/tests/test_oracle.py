import math

import numpy as np
import pytest
from scipy.special import genlaguerre

from catwitness import (
    VACUUM,
    CoherentSuperposition,
    FockState,
    Mixture,
    ProductState,
    ThermalState,
    cat_state,
    decohere,
    entangled_cat,
)
from catwitness.oracle import (
    TruncationError,
    apply_damping,
    displacement_matrix,
    expval,
    initial_dim,
    laguerre,
    oracle_chi,
    oracle_chi2,
    oracle_chi_normal,
    state_to_matrix,
)


def test_laguerre_against_scipy():
    rng = np.random.default_rng(21)
    for _ in range(50):
        n = int(rng.integers(0, 12))
        k = int(rng.integers(0, 8))
        x = float(rng.uniform(0.0, 10.0))
        assert laguerre(n, k, x) == pytest.approx(
            float(genlaguerre(n, k)(x)), rel=1e-10, abs=1e-10)


def test_displacement_matrix_small_entries():
    # <m|D(alpha)|n> closed forms for the 2x2 corner
    a = 0.7 - 0.4j
    x = abs(a) ** 2
    d = displacement_matrix(a, 6).entries
    g = math.exp(-x / 2.0)
    assert d[0, 0] == pytest.approx(g, abs=1e-12)
    assert d[1, 0] == pytest.approx(g * a, abs=1e-12)
    assert d[0, 1] == pytest.approx(-g * a.conjugate(), abs=1e-12)
    assert d[1, 1] == pytest.approx(g * (1 - x), abs=1e-12)
    assert d[2, 1] == pytest.approx(g * a * math.sqrt(2) * (1 - x / 2),
                                    abs=1e-12)


def test_displacement_matrix_unitary_block():
    # the top block is unitary up to truncation leakage
    d = displacement_matrix(1.0 + 0.5j, 40).entries
    block = (d.conj().T @ d)[:12, :12]
    assert np.max(np.abs(block - np.eye(12))) < 1e-9


def test_displacement_composition_phase():
    # D(a) D(b) = e^{i Im(a b*)} D(a+b)
    a, b = 0.6 + 0.2j, -0.3 + 0.5j
    dim = 36
    left = displacement_matrix(a, dim).entries @ displacement_matrix(b, dim).entries
    phase = np.exp(1j * (a * b.conjugate()).imag)
    right = phase * displacement_matrix(a + b, dim).entries
    assert np.max(np.abs(left - right)[:10, :10]) < 1e-9


def test_state_to_matrix_trace_and_purity():
    dim = 40
    for state in [cat_state(1.5, 0.0), FockState(3), ThermalState(1.0),
                  Mixture(((0.5, VACUUM), (0.5, FockState(2))))]:
        rho = state_to_matrix(state, dim).entries
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-8)
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
    pure = state_to_matrix(cat_state(1.5, 0.0), dim).entries
    assert np.trace(pure @ pure).real == pytest.approx(1.0, abs=1e-8)


def test_state_to_matrix_truncation_error():
    with pytest.raises(TruncationError):
        state_to_matrix(CoherentSuperposition(((1.0, 4.0),)), 8)
    with pytest.raises(TruncationError):
        state_to_matrix(FockState(10), 8)


def test_decohered_thermal_bath_has_no_matrix_path():
    with pytest.raises(ValueError):
        state_to_matrix(decohere(VACUUM, 0.5, 2.0), 30)


def test_damping_matches_closed_form():
    # pure-loss channel on a cat state, checked against the analytic chi_N
    state = cat_state(1.5, 0.0)
    gamma_t = 0.6
    dim = 48
    rho = apply_damping(state_to_matrix(state, dim), gamma_t)
    closed = decohere(state, gamma_t, 0.0)
    for a in (0.5, 1.0 + 0.3j, -0.8j):
        got = expval(displacement_matrix(a, dim), rho)
        assert got == pytest.approx(closed.chi(a), abs=1e-9)


def test_oracle_chi_matches_closed_forms():
    cases = [
        (cat_state(2.0, 0.0), 2.0),
        (cat_state(1.0, 0.7), 0.5 - 0.8j),
        (FockState(3), 1.1 + 0.2j),
        (ThermalState(2.0), 0.7 + 0.2j),
        (Mixture(((0.3, FockState(1)), (0.7, VACUUM))), 1.5),
        (decohere(cat_state(1.0, 0.0), 0.4, 0.0), 0.9),
    ]
    for state, a in cases:
        assert oracle_chi(state, a) == pytest.approx(state.chi(a), abs=1e-9)
    assert oracle_chi(cat_state(2.0, 0.0), 2.0) == pytest.approx(
        0.5597491982622725, abs=1e-9)


def test_oracle_chi_normal_scaling():
    state = cat_state(1.0, 0.0)
    a = 1.2
    assert oracle_chi_normal(state, a) == pytest.approx(
        math.exp(abs(a) ** 2 / 2) * oracle_chi(state, a), abs=1e-12)


def test_oracle_chi2_matches_closed_forms():
    cases = [
        (entangled_cat(1.0, +1), 0.4, -0.3j),
        (entangled_cat(1.5, -1), 0.2 + 0.5j, 0.7),
        (ProductState(cat_state(1.0, 0.0), ThermalState(0.5)), 0.6, 0.9j),
    ]
    for state, a, b in cases:
        assert oracle_chi2(state, a, b) == pytest.approx(
            state.chi2(a, b), abs=1e-9)


def test_oracle_thermal_needs_extra_dim():
    # the amplitude-based initial dim truncates the thermal tail; the
    # adaptive loop must recover by doubling
    state = ThermalState(2.0)
    assert initial_dim(state, 0.7 + 0.2j) < 40
    assert oracle_chi(state, 0.7 + 0.2j) == pytest.approx(
        0.26580295908892654, abs=1e-9)


def test_fock_chi_zero_point():
    # tr{D(1)|1><1|} = 0 exactly
    assert abs(oracle_chi(FockState(1), 1.0)) < 1e-9
