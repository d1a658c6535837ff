"""Photon-added/subtracted states on Gaussian kernels.

A state rho = N a^{k dag} a^m rho_G a^{m dag} a^k is handled through the
generating operator Q(xi, eta) = e^{xi a^dag} e^{-eta* a} rho_G e^{eta a^dag}
e^{-xi* a}: every trace against a Gaussian detector is a mixed derivative of an
explicit quadratic exponential, extracted exactly as a multivariate Taylor
coefficient.
"""

from dataclasses import dataclass, field
from math import factorial

import numpy as np
import scipy.linalg as la

from .criteria import CriterionReport, decide_separability
from .exceptions import (DegeneratePreparationError, DimensionMismatchError,
                         OrderTooHighError, SingularSumError)
from .fock import destroy, gaussian_op_fock, mode_op
from .symplectic import CovMatrix, cm_to_ccm
from .witness import DetectorSpec

#: maximum total number of ladder operators |k| + |m|.
MAX_ORDER = 8


def _ladder_shift(n: int) -> np.ndarray:
    """(sigma_1 (x) I_n) / 2 in the (mu, mu*) ordering.

    This is the commutator shift between the two ladder orderings; the factor
    1/2 matches the vacuum-variance-1/2 convention used throughout (the
    variance-1 convention would make it sigma_1 (x) I_n).
    """
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return np.kron(sx, np.eye(n)) / 2


@dataclass(frozen=True, eq=False)
class NonGaussState:
    """Gaussian kernel plus per-mode photon additions k and subtractions m."""

    kernel: CovMatrix
    add: tuple[int, ...]
    subtract: tuple[int, ...]
    norm: float = field(init=False)

    def __post_init__(self):
        n = self.kernel.n_modes
        add = tuple(int(v) for v in self.add)
        sub = tuple(int(v) for v in self.subtract)
        if len(add) != n or len(sub) != n:
            raise DimensionMismatchError(
                f"ladder indices must have length {n}, got {len(add)} and {len(sub)}")
        if min(add + sub, default=0) < 0:
            raise DimensionMismatchError("ladder indices must be nonnegative")
        if sum(add) + sum(sub) > MAX_ORDER:
            raise OrderTooHighError(
                f"|k| + |m| = {sum(add) + sum(sub)} exceeds {MAX_ORDER}")
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "subtract", sub)
        object.__setattr__(self, "norm", normalization_raw(self.kernel, add, sub))

    @property
    def order(self) -> int:
        return sum(self.add) + sum(self.subtract)

    def ccm_plus(self) -> np.ndarray:
        return cm_to_ccm(self.kernel).mat + _ladder_shift(self.kernel.n_modes)

    def ccm_minus(self) -> np.ndarray:
        return cm_to_ccm(self.kernel).mat - _ladder_shift(self.kernel.n_modes)


def q_char(kernel: CovMatrix, xi: np.ndarray, eta: np.ndarray,
           mu: np.ndarray) -> complex:
    """Characteristic function of the generating operator Q(xi, eta) at mu."""
    n = kernel.n_modes
    xi = np.asarray(xi, dtype=complex).reshape(n)
    eta = np.asarray(eta, dtype=complex).reshape(n)
    mu = np.asarray(mu, dtype=complex).reshape(n)
    g = cm_to_ccm(kernel).mat
    gp = g + _ladder_shift(n)
    gm = g - _ladder_shift(n)
    u = np.concatenate([xi, xi.conj()])
    v = np.concatenate([eta, eta.conj()])
    w = np.concatenate([mu, mu.conj()])
    at_zero = np.exp(-0.5 * u @ gp @ u - u @ gm @ v - 0.5 * v @ gm @ v)
    return at_zero * np.exp(-0.5 * w @ g @ w - u @ gp @ w - v @ gm @ w)


def _quadratic_coeff_extract(q: np.ndarray, target: tuple[int, ...]) -> complex:
    """Taylor coefficient of prod t_i^{target_i} in exp(1/2 t q t^T).

    The exponent is homogeneous quadratic, so only the power
    p = sum(target) / 2 of the series contributes; the expansion is pruned to
    exponent vectors dominated by the target.
    """
    total = sum(target)
    if total % 2 == 1:
        return 0.0
    p = total // 2
    if p == 0:
        return 1.0
    d = len(target)
    # terms of the quadratic E = 1/2 t q t^T as monomial dict
    e_terms: dict[tuple[int, ...], complex] = {}
    for i in range(d):
        for j in range(i, d):
            c = q[i, i] / 2 if i == j else (q[i, j] + q[j, i]) / 2
            if c == 0:
                continue
            expo = [0] * d
            expo[i] += 1
            expo[j] += 1
            key = tuple(expo)
            if all(k <= t for k, t in zip(key, target)):
                e_terms[key] = e_terms.get(key, 0.0) + c
    poly: dict[tuple[int, ...], complex] = {tuple([0] * d): 1.0}
    for _ in range(p):
        nxt: dict[tuple[int, ...], complex] = {}
        for expo, c in poly.items():
            for de, dc in e_terms.items():
                ne = tuple(a + b for a, b in zip(expo, de))
                if any(a > t for a, t in zip(ne, target)):
                    continue
                nxt[ne] = nxt.get(ne, 0.0) + c * dc
        poly = nxt
        if not poly:
            return 0.0
    return poly.get(target, 0.0) / factorial(p)


def _derivative_value(q: np.ndarray, add: tuple[int, ...],
                      sub: tuple[int, ...]) -> float:
    """Apply the ladder-derivative operator to exp(1/2 t q t^T) at t = 0.

    Variables are ordered (xi, xi*, eta, eta*); the operator takes k_j
    derivatives in xi_j and xi*_j and m_j in eta_j and eta*_j, with overall
    sign (-1)^{|k|+|m|}.
    """
    n = len(add)
    target = tuple(list(add) + list(add) + list(sub) + list(sub))
    coeff = _quadratic_coeff_extract(q, target)
    fact = 1.0
    for kj in add:
        fact *= factorial(kj) ** 2
    for mj in sub:
        fact *= factorial(mj) ** 2
    val = (-1) ** (sum(add) + sum(sub)) * coeff * fact
    if abs(np.imag(val)) > 1e-8 * max(1.0, abs(np.real(val))):
        raise DimensionMismatchError(f"derivative value is not real: {val:g}")
    return float(np.real(val))


def _zero_quadratic(kernel: CovMatrix) -> np.ndarray:
    """Quadratic form of log chi_Q(0, xi, eta) over t = (xi, xi*, eta, eta*)."""
    n = kernel.n_modes
    g = cm_to_ccm(kernel).mat
    gp = g + _ladder_shift(n)
    gm = g - _ladder_shift(n)
    d = 2 * n
    q = np.zeros((2 * d, 2 * d), dtype=complex)
    q[:d, :d] = -gp
    q[d:, d:] = -gm
    q[:d, d:] = -gm
    q[d:, :d] = -gm.T
    return q


def normalization_raw(kernel: CovMatrix, add: tuple[int, ...],
                      sub: tuple[int, ...]) -> float:
    """1 / (derivative of chi_Q(0, xi, eta)); trace-one normalization."""
    denom = _derivative_value(_zero_quadratic(kernel), add, sub)
    if denom <= 1e-12:
        raise DegeneratePreparationError(
            f"ladder pattern annihilates the kernel (derivative {denom:g})")
    return 1.0 / denom


def normalization(s: NonGaussState) -> float:
    return s.norm


def mean_on_detector(s: NonGaussState, d: DetectorSpec | CovMatrix) -> float:
    """Tr(rho M) via the exact mixed-derivative formula."""
    kernel = s.kernel
    n = kernel.n_modes
    gm_cm = d if isinstance(d, CovMatrix) else d.to_cm()
    if gm_cm.dim != kernel.dim:
        raise DimensionMismatchError(
            f"dimension mismatch: {kernel.dim} vs {gm_cm.dim}")
    g = cm_to_ccm(kernel).mat
    g_m = cm_to_ccm(gm_cm).mat
    gp = g + _ladder_shift(n)
    gmn = g - _ladder_shift(n)
    total = g + g_m
    det = la.det(total)
    if abs(det) < 1e-12:
        raise SingularSumError(f"det(ccm_G + ccm_M) = {det:g} is singular")
    w = la.inv(total)
    # f(xi, eta) = 1/2 (u gp + v gmn) W (gp u^T + gmn v^T)
    vmat = np.vstack([gp, gmn])
    vmat2 = np.vstack([gp.T, gmn.T])
    mf = vmat @ w @ vmat2.T
    q = _zero_quadratic(kernel) + mf
    deriv = _derivative_value(q, s.add, s.subtract)
    return s.norm * deriv / np.sqrt(abs(la.det(kernel.mat + gm_cm.mat)))


def asymptotic_check(s: NonGaussState, d0: DetectorSpec,
                     scales=(10.0, 100.0, 1000.0)) -> list[float]:
    """Residuals |Tr(rho M_t) sqrt|det(gamma_G + t gamma_M0)| - 1| along t."""
    out = []
    for t in scales:
        dt = d0.scaled(float(t))
        mean = mean_on_detector(s, dt)
        det = la.det(s.kernel.mat + dt.to_cm().mat)
        out.append(abs(mean * np.sqrt(abs(det)) - 1.0))
    return out


def decide_separability_nongauss(s: NonGaussState,
                                 partition: list[int] | None = None) -> CriterionReport:
    """Separability of the photon-added/subtracted state.

    Local ladder operations neither create nor destroy entanglement across the
    partition, so the verdict is that of the Gaussian kernel.
    """
    report = decide_separability(s.kernel, partition)
    note = "kernel-level decision; ladder operations are local"
    if report.note:
        note = report.note + "; " + note
    return CriterionReport(
        verdict=report.verdict, lhs_value=report.lhs_value,
        criterion_name=report.criterion_name, certificate=report.certificate,
        ppt=report.ppt, bound_entangled=report.bound_entangled, note=note)


def build_fock_state(s: NonGaussState, cutoff: int) -> np.ndarray:
    """Normalized density matrix of the photon-added/subtracted state."""
    n = s.kernel.n_modes
    rho_g = gaussian_op_fock(s.kernel, cutoff)
    a = destroy(cutoff)
    left = np.eye(cutoff ** n)
    for j in range(n):
        for _ in range(s.subtract[j]):
            left = mode_op(a, j, n, cutoff) @ left
    for j in range(n):
        for _ in range(s.add[j]):
            left = mode_op(a.T, j, n, cutoff) @ left
    rho = left @ rho_g @ left.conj().T
    tr = float(np.real(np.trace(rho)))
    if tr <= 1e-12:
        raise DegeneratePreparationError(f"Fock trace {tr:g} vanishes")
    return rho / tr


def fock_direct_trace(s: NonGaussState, d: DetectorSpec | CovMatrix,
                      cutoff: int) -> float:
    """Oracle for mean_on_detector: explicit Fock matrices, plain trace."""
    rho = build_fock_state(s, cutoff)
    gm_cm = d if isinstance(d, CovMatrix) else d.to_cm()
    m_op = gaussian_op_fock(gm_cm, cutoff)
    return float(np.real(np.sum(rho.T * m_op)))
