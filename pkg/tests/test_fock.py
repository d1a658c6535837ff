import numpy as np
import pytest

from cvwitness.exceptions import CutoffTooSmallError
from cvwitness.fock import (destroy, displacement_element, displacement_matrix,
                            fock_cm, fock_mean, gaussian_op_fock,
                            partial_trace, quadrature_ops, seesaw_lambda)
from cvwitness.standard_form import Family
from cvwitness.symplectic import CovMatrix
from cvwitness.witness import DetectorSpec, detector_from_cm, lambda_closed_form

from conftest import tmsv_form


def test_destroy_commutator():
    c = 12
    a = destroy(c)
    comm = a @ a.T - a.T @ a
    # canonical commutator holds away from the truncation edge
    assert np.allclose(comm[:-1, :-1], np.eye(c - 1))


def test_displacement_element_matches_expm():
    c = 30
    mu = 0.4 - 0.3j
    d = displacement_matrix(mu, c)
    for m, k in [(0, 0), (1, 0), (2, 3), (5, 5)]:
        assert abs(displacement_element(m, k, mu) - d[m, k]) < 1e-10


def test_gaussian_op_vacuum():
    rho = gaussian_op_fock(CovMatrix(np.eye(2) / 2), 10)
    expect = np.zeros((10, 10))
    expect[0, 0] = 1.0
    assert np.allclose(rho, expect, atol=1e-10)


def test_gaussian_op_thermal_diagonal():
    nbar = 0.8
    rho = gaussian_op_fock(CovMatrix((nbar + 0.5) * np.eye(2)), 40)
    ns = np.arange(40)
    expect = (nbar / (nbar + 1)) ** ns / (nbar + 1)
    assert np.allclose(np.diag(rho).real, expect, atol=1e-10)
    assert np.allclose(rho, np.diag(np.diag(rho)), atol=1e-10)


def test_gaussian_op_below_vacuum_eigenvalue():
    # symplectic eigenvalue below 1/2: a valid non-positive Gaussian kernel
    gamma = CovMatrix(np.diag([0.3, 0.4]))
    rho = gaussian_op_fock(gamma, 30)
    mu = 0.35 - 0.2j
    z = np.array([np.sqrt(2) * mu.imag, -np.sqrt(2) * mu.real])
    ref = np.exp(-0.5 * z @ gamma.mat @ z)
    val = np.trace(rho @ displacement_matrix(mu, 30))
    assert abs(val - ref) < 1e-8
    assert np.min(np.linalg.eigvalsh(rho)) < -1e-3  # genuinely non-positive


def test_fock_cm_roundtrip():
    gamma = tmsv_form(0.4).to_cm()
    rho = gaussian_op_fock(gamma, 26)
    back = fock_cm(rho, 2, 26)
    assert np.max(np.abs(back - gamma.mat)) < 1e-9


def test_cutoff_too_small_raises():
    nbar = 30.0
    with pytest.raises(CutoffTooSmallError):
        gaussian_op_fock(CovMatrix((nbar + 0.5) * np.eye(2)), 6)


def test_fock_mean_single_photon_thermal():
    # <1|rho_th(nbar=1)|1> = nbar^n/(nbar+1)^{n+1} at n=1 -> 1/4
    rho = gaussian_op_fock(CovMatrix(1.5 * np.eye(2)), 25)
    op = np.zeros((25, 25))
    op[1, 1] = 1.0
    assert abs(fock_mean(rho, op) - 0.25) < 1e-10


def test_partial_trace_of_product():
    c = 6
    rho_a = np.diag(np.arange(1.0, c + 1))
    rho_a /= np.trace(rho_a)
    rho_b = np.eye(c) / c
    rho = np.kron(rho_a, rho_b)
    assert np.allclose(partial_trace(rho, (c, c), keep=0), rho_a, atol=1e-12)
    assert np.allclose(partial_trace(rho, (c, c), keep=1), rho_b, atol=1e-12)


def test_seesaw_vacuum_detector():
    d = DetectorSpec(Family.TWO_MODE, 0.5, 0.5, 0.5, 0.5, 0.0, 0.0)
    rho = gaussian_op_fock(d.to_cm(), 12)
    res = seesaw_lambda(rho, (12, 12), restarts=2)
    assert res.converged
    assert abs(res.value - 1.0) < 1e-10


def test_seesaw_matches_closed_form_tmsv():
    d = detector_from_cm(tmsv_form(0.5).to_cm())
    rho = gaussian_op_fock(d.to_cm(), 20)
    res = seesaw_lambda(rho, (20, 20), restarts=3)
    lam, _ = lambda_closed_form(d)
    assert abs(res.value - lam) < 1e-8


def test_seesaw_optimizer_state_is_product_gaussian():
    # the optimizer of a thermal-product detector is the vacuum
    d = DetectorSpec(Family.TWO_MODE, 1.5, 1.5, 1.5, 1.5, 0.0, 0.0)
    rho = gaussian_op_fock(d.to_cm(), 15)
    res = seesaw_lambda(rho, (15, 15), restarts=2)
    assert abs(abs(res.vec_a[0]) - 1.0) < 1e-6
    assert abs(abs(res.vec_b[0]) - 1.0) < 1e-6
