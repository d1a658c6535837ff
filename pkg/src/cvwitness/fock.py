"""Truncated Fock-space oracle.

Everything here is independent of the closed-form machinery: Gaussian operators
are built from their covariance matrices by Williamson plus Bloch-Messiah in a
per-mode-truncated Fock basis, means are plain traces, and the product-state
maximum is found by an alternating eigenvector seesaw.
"""

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .exceptions import (CutoffTooSmallError, DimensionMismatchError,
                         OptimizerStalledError)
from .symplectic import (CovMatrix, orthogonal_symplectic_to_unitary,
                         polar_bloch_messiah, williamson)

_MAX_FACT = 512
_LOG_FACT = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, _MAX_FACT + 1)))))


def destroy(cutoff: int) -> np.ndarray:
    """Single-mode annihilation operator truncated at `cutoff` levels."""
    return np.diag(np.sqrt(np.arange(1, cutoff)), k=1)


def mode_op(op: np.ndarray, mode: int, n_modes: int, cutoff: int) -> np.ndarray:
    """Embed a single-mode operator at position `mode` of an n-mode register."""
    mats = [np.eye(cutoff)] * n_modes
    mats[mode] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def quadrature_ops(n_modes: int, cutoff: int) -> list[np.ndarray]:
    """x_j = (a + a^dag)/sqrt(2), p_j = i(a^dag - a)/sqrt(2), interleaved."""
    a = destroy(cutoff)
    x = (a + a.T) / np.sqrt(2)
    p = 1j * (a.T - a) / np.sqrt(2)
    ops = []
    for j in range(n_modes):
        ops.append(mode_op(x, j, n_modes, cutoff))
        ops.append(mode_op(p, j, n_modes, cutoff))
    return ops


def fock_cm(rho: np.ndarray, n_modes: int, cutoff: int) -> np.ndarray:
    """Covariance matrix of a (zero-mean) Fock-space density operator.

    Uses gamma_ij = Re Tr(rho R_i R_j), valid for Hermitian rho and R, so only
    one dense product per quadrature is needed.
    """
    ops = quadrature_ops(n_modes, cutoff)
    d = 2 * n_modes
    prods = [rho @ op for op in ops]
    gamma = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            val = float(np.real(np.sum(prods[i].T * ops[j])))
            gamma[i, j] = gamma[j, i] = val
    return gamma


def displacement_element(m: int, k: int, mu: complex) -> complex:
    """<m|D(mu)|k> via the two-index Hermite polynomial expansion."""
    if m >= _MAX_FACT or k >= _MAX_FACT:
        raise DimensionMismatchError(f"indices up to {_MAX_FACT - 1} supported")
    mu = complex(mu)
    total = 0.0 + 0.0j
    for l in range(min(m, k) + 1):
        log_coeff = (_LOG_FACT[m] + _LOG_FACT[k] - _LOG_FACT[m - l]
                     - _LOG_FACT[k - l] - _LOG_FACT[l])
        total += (-1) ** l * np.exp(log_coeff) * mu ** (m - l) * np.conj(mu) ** (k - l)
    pref = (-1) ** k * np.exp(-abs(mu) ** 2 / 2 - (_LOG_FACT[m] + _LOG_FACT[k]) / 2)
    return pref * total


def displacement_matrix(mu: complex, cutoff: int) -> np.ndarray:
    """Truncated D(mu) = exp(mu a^dag - mu* a)."""
    a = destroy(cutoff)
    return la.expm(mu * a.T - np.conj(mu) * a)


def _passive_unitary(o: np.ndarray, cutoff: int) -> np.ndarray:
    """Fock representation of an orthogonal symplectic (number conserving).

    Built sector by sector in total photon number, which keeps the expm cost
    at the sector sizes instead of the full register dimension.
    """
    n = o.shape[0] // 2
    u = orthogonal_symplectic_to_unitary(o)
    h = la.logm(u)
    basis = list(itertools.product(range(cutoff), repeat=n))
    index = {b: i for i, b in enumerate(basis)}
    dim = cutoff ** n
    out = np.zeros((dim, dim), dtype=complex)
    sectors: dict[int, list[int]] = {}
    for i, b in enumerate(basis):
        sectors.setdefault(sum(b), []).append(i)
    for idxs in sectors.values():
        local = {gi: li for li, gi in enumerate(idxs)}
        g = np.zeros((len(idxs), len(idxs)), dtype=complex)
        for gi in idxs:
            b = basis[gi]
            for j in range(n):
                for k in range(n):
                    if h[j, k] == 0 or b[k] == 0:
                        continue
                    nb = list(b)
                    nb[k] -= 1
                    nb[j] += 1
                    if nb[j] >= cutoff:
                        continue
                    amp = h[j, k] * np.sqrt(b[k] * nb[j])
                    g[local[index[tuple(nb)]], local[gi]] += amp
        us = la.expm(g)
        for li, gi in enumerate(idxs):
            for lj, gj in enumerate(idxs):
                out[gi, gj] = us[li, lj]
    return out


def _squeezer_unitary(r: float, cutoff: int) -> np.ndarray:
    """Single-mode unitary sending x -> e^r x, p -> e^{-r} p."""
    a = destroy(cutoff)
    return la.expm((r / 2) * (a.T @ a.T - a @ a))


def _thermal_diagonal(nbar: float, cutoff: int) -> np.ndarray:
    """Diagonal (1 - t) t^n with t = nbar / (nbar + 1).

    Negative nbar > -1/2 is allowed: the diagonal then alternates in sign,
    which is what a Gaussian kernel with symplectic eigenvalue below 1/2
    (a non-positive operator, e.g. a witness kernel) requires.
    """
    if nbar <= -0.5:
        raise DimensionMismatchError(
            f"symplectic eigenvalue {nbar + 0.5:g} is not representable")
    if abs(nbar) < 1e-14:
        p = np.zeros(cutoff)
        p[0] = 1.0
        return p
    ns = np.arange(cutoff)
    return (1.0 / (nbar + 1.0)) * (nbar / (nbar + 1.0)) ** ns


def gaussian_op_fock(gamma: CovMatrix, cutoff: int,
                     tail_tol: float = 5e-2) -> np.ndarray:
    """Trace-one Gaussian operator with covariance matrix `gamma`.

    Route: Williamson gamma = S nu S^T, thermal core for nu, then the
    Bloch-Messiah factors of S as Fock unitaries.  Raises CutoffTooSmallError
    when the truncated trace drops below 1 - tail_tol.
    """
    n = gamma.n_modes
    s, nu = williamson(gamma)
    o1, d_diag, o2 = polar_bloch_messiah(s)
    p = _thermal_diagonal(nu[0] - 0.5, cutoff)
    for j in range(1, n):
        p = np.kron(p, _thermal_diagonal(nu[j] - 0.5, cutoff))
    u = _passive_unitary(o1, cutoff)
    sq = _squeezer_unitary(np.log(d_diag[0, 0]), cutoff)
    for j in range(1, n):
        sq = np.kron(sq, _squeezer_unitary(np.log(d_diag[2 * j, 2 * j]), cutoff))
    u = u @ sq @ _passive_unitary(o2, cutoff)
    rho = (u * p) @ u.conj().T
    trace = float(np.real(np.trace(rho)))
    if trace < 1.0 - tail_tol:
        raise CutoffTooSmallError(
            f"truncated trace {trace:g} below 1 - {tail_tol:g}; raise the cutoff")
    return rho


def fock_mean(rho: np.ndarray, op: np.ndarray) -> float:
    """Re Tr(rho op)."""
    if rho.shape != op.shape:
        raise DimensionMismatchError(f"shape mismatch {rho.shape} vs {op.shape}")
    return float(np.real(np.sum(rho.T * op)))


def partial_trace(op: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator."""
    da, db = dims
    t = op.reshape(da, db, da, db)
    if keep == 0:
        return np.trace(t, axis1=1, axis2=3)
    return np.trace(t, axis1=0, axis2=2)


def apply_detector_fock(m_op: np.ndarray, rho_b: np.ndarray,
                        dims: tuple[int, int]) -> np.ndarray:
    """Output operator Tr_B(M (I_A x rho_B)) of the measurement-induced map."""
    da, db = dims
    t = m_op.reshape(da, db, da, db)
    return np.einsum("ijkl,lj->ik", t, rho_b)


@dataclass(frozen=True)
class SeesawResult:
    value: float
    vec_a: np.ndarray
    vec_b: np.ndarray
    iterations: int
    converged: bool


def _top_eigvec(h: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = la.eigh(h)
    return float(w[-1]), v[:, -1]


def seesaw_lambda(m_op: np.ndarray, dims: tuple[int, int], restarts: int = 5,
                  seed: int = 0, max_iter: int = 200,
                  tol: float = 1e-12) -> SeesawResult:
    """max <a,b| M |a,b> over product pure states by alternating eigensolves.

    The objective is monotonically nondecreasing along the alternation; each
    restart begins from a random product state, plus one vacuum start.
    """
    da, db = dims
    if m_op.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"operator shape {m_op.shape} does not match dims {dims}")
    m_op = (m_op + m_op.conj().T) / 2
    t = m_op.reshape(da, db, da, db)
    rng = np.random.default_rng(seed)

    def rand_vec(d):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        return v / la.norm(v)

    vac = np.zeros(db, dtype=complex)
    vac[0] = 1.0
    starts = [vac] + [rand_vec(db) for _ in range(restarts)]
    best = None
    for b in starts:
        val_prev = -np.inf
        converged = False
        iters = 0
        a = None
        for iters in range(1, max_iter + 1):
            ha = np.einsum("ijkl,j,l->ik", t, np.conj(b), b)
            val_a, a = _top_eigvec(ha)
            hb = np.einsum("ijkl,i,k->jl", t, np.conj(a), a)
            val, b = _top_eigvec(hb)
            assert val >= val_a - 1e-10 and val >= val_prev - 1e-10, \
                "seesaw objective decreased"
            if val - val_prev <= tol * max(1.0, abs(val)):
                converged = True
                val_prev = val
                break
            val_prev = val
        res = SeesawResult(value=float(val_prev), vec_a=a, vec_b=b,
                           iterations=iters, converged=converged)
        if best is None or res.value > best.value:
            best = res
    if best is None:
        raise OptimizerStalledError("seesaw produced no iterate")
    return best
