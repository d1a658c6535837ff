"""Covariance-matrix core: symplectic form, validity checks, CM/CCM conversion,
Gaussian overlaps and the Williamson / Bloch-Messiah decompositions.

Quadrature ordering is (x1, p1, x2, p2, ...) throughout, with vacuum
variance 1/2 on the diagonal.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .exceptions import DimensionMismatchError, SingularSumError

#: PSD tolerance on the minimum eigenvalue of gamma + i*sigma/2.
TOL_PSD = 1e-10

_SYMMETRY_TOL = 1e-12


def symplectic_form(n_modes: int) -> np.ndarray:
    """2n x 2n symplectic form, block-diagonal [[0, 1], [-1, 0]] per mode."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j)


def _check_even_square(mat: np.ndarray) -> int:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] % 2 != 0:
        raise DimensionMismatchError(f"matrix size {mat.shape[0]} is odd")
    return mat.shape[0] // 2


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Real symmetric covariance matrix of an n-mode state or detector."""

    mat: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        n = _check_even_square(mat)
        asym = np.max(np.abs(mat - mat.T))
        if asym > _SYMMETRY_TOL:
            raise DimensionMismatchError(f"matrix is not symmetric (max asymmetry {asym:g})")
        mat = (mat + mat.T) / 2.0
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "n_modes", n)

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    def is_physical(self, tol: float = TOL_PSD) -> bool:
        return validate_cm(self, tol=tol).is_physical


@dataclass(frozen=True, eq=False)
class ComplexCovMatrix:
    """Second moments over complex mode variables, ordered (mu_1..mu_n, mu*_1..mu*_n)."""

    mat: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        n = _check_even_square(np.real(mat))
        mat = (mat + mat.T) / 2.0
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "n_modes", n)


@dataclass(frozen=True)
class ValidityReport:
    is_symmetric: bool
    min_eig: float
    is_physical: bool


def validate_cm(gamma: CovMatrix | np.ndarray, tol: float = TOL_PSD) -> ValidityReport:
    """Bona-fide check: gamma + i*sigma/2 must be positive semidefinite."""
    if isinstance(gamma, CovMatrix):
        mat = gamma.mat
        n = gamma.n_modes
    else:
        mat = np.asarray(gamma, dtype=float)
        n = _check_even_square(mat)
    is_sym = np.max(np.abs(mat - mat.T)) <= _SYMMETRY_TOL
    h = mat + 0.5j * symplectic_form(n)
    min_eig = float(np.min(la.eigvalsh(h)))
    return ValidityReport(is_symmetric=is_sym, min_eig=min_eig, is_physical=min_eig >= -tol)


def _ccm_transform(n_modes: int) -> np.ndarray:
    """Matrix T with (mu, mu*) = T z for mu_j = (-z_{2j} + i z_{2j-1}) / sqrt(2)."""
    t = np.zeros((2 * n_modes, 2 * n_modes), dtype=complex)
    for j in range(n_modes):
        t[j, 2 * j] = 1j / np.sqrt(2)
        t[j, 2 * j + 1] = -1.0 / np.sqrt(2)
        t[n_modes + j, 2 * j] = -1j / np.sqrt(2)
        t[n_modes + j, 2 * j + 1] = -1.0 / np.sqrt(2)
    return t


def cm_to_ccm(gamma: CovMatrix) -> ComplexCovMatrix:
    """Re-express the quadratic form of the characteristic function over (mu, mu*)."""
    t_inv = la.inv(_ccm_transform(gamma.n_modes))
    return ComplexCovMatrix(t_inv.T @ gamma.mat @ t_inv)


def ccm_to_cm(gamma_c: ComplexCovMatrix) -> CovMatrix:
    t = _ccm_transform(gamma_c.n_modes)
    mat = t.T @ gamma_c.mat @ t
    imag = np.max(np.abs(mat.imag))
    if imag > 1e-9:
        raise DimensionMismatchError(f"CCM does not correspond to a real CM (imag residue {imag:g})")
    return CovMatrix(mat.real)


def gaussian_overlap(gamma_1: CovMatrix, gamma_2: CovMatrix, tol: float = 1e-12) -> float:
    """Tr(rho_1 rho_2) for zero-mean Gaussians: 1 / sqrt(|det(gamma_1 + gamma_2)|)."""
    if gamma_1.dim != gamma_2.dim:
        raise DimensionMismatchError(
            f"dimension mismatch: {gamma_1.dim} vs {gamma_2.dim}")
    det = la.det(gamma_1.mat + gamma_2.mat)
    if abs(det) < tol:
        raise SingularSumError(f"det(gamma_1 + gamma_2) = {det:g} is singular")
    return 1.0 / np.sqrt(abs(det))


def symplectic_eigenvalues(gamma: CovMatrix | np.ndarray) -> np.ndarray:
    """Williamson spectrum: moduli of eigenvalues of i*sigma*gamma, one per mode."""
    mat = gamma.mat if isinstance(gamma, CovMatrix) else np.asarray(gamma, dtype=float)
    n = _check_even_square(mat)
    eigs = la.eigvals(1j * symplectic_form(n) @ mat)
    nu = np.sort(np.abs(eigs.real))
    # eigenvalues come in +/- pairs; keep one of each
    return nu[::2][:n] if len(nu) == 2 * n else nu[:n]


def williamson(gamma: CovMatrix | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decompose a positive definite CM as gamma = S diag(nu_1, nu_1, ...) S^T.

    Returns (S, nu) with S symplectic and nu the symplectic eigenvalues.
    """
    mat = gamma.mat if isinstance(gamma, CovMatrix) else np.asarray(gamma, dtype=float)
    n = _check_even_square(mat)
    sigma = symplectic_form(n)
    root = la.sqrtm(mat).real
    m = root @ sigma @ root  # antisymmetric
    # Real Schur form of an antisymmetric matrix: 2x2 blocks [[0, nu], [-nu, 0]].
    t, q = la.schur(m, output="real")
    nu = np.empty(n)
    for j in range(n):
        b = t[2 * j, 2 * j + 1]
        if b < 0:
            # flip block orientation by swapping the column pair
            q[:, [2 * j, 2 * j + 1]] = q[:, [2 * j + 1, 2 * j]]
            b = -b
        nu[j] = b
    if np.any(nu <= 0):
        raise DimensionMismatchError("CM is not positive definite; Williamson undefined")
    scale = np.repeat(1.0 / np.sqrt(nu), 2)
    s = root @ q @ np.diag(scale)
    return s, nu


def is_symplectic(s: np.ndarray, tol: float = 1e-10) -> bool:
    n = _check_even_square(s)
    sigma = symplectic_form(n)
    return np.max(np.abs(s @ sigma @ s.T - sigma)) <= tol


def polar_bloch_messiah(s: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factor a symplectic S as O1 @ D @ O2 with O1, O2 orthogonal symplectic
    and D = diag(e^{r_1}, e^{-r_1}, ...) single-mode squeezers."""
    s = np.asarray(s, dtype=float)
    n = _check_even_square(s)
    sigma = symplectic_form(n)
    p = la.sqrtm(s.T @ s).real  # symmetric positive definite symplectic
    w = s @ la.inv(p)  # orthogonal symplectic
    evals, evecs = la.eigh(p)
    # Pair each eigenvector v (eigenvalue lam >= 1) with -sigma v (eigenvalue 1/lam).
    cols = []
    order = np.argsort(evals)[::-1]
    mode = 0
    for idx in order:
        if mode == n:
            break
        v = evecs[:, idx]
        # Project out directions already consumed (handles degenerate eigenvalues
        # and skips eigenvectors that were claimed as a partner -sigma v).
        for c in cols:
            v = v - c * (c @ v)
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            continue
        v = v / nv
        wv = -sigma @ v
        for c in cols:
            wv = wv - c * (c @ wv)
        wv = wv / np.linalg.norm(wv)
        cols.extend([v, wv])
        mode += 1
    o = np.column_stack(cols)
    d_mat = o.T @ p @ o
    # off-diagonal residue should vanish; keep the diagonal
    d_diag = np.diag(np.diag(d_mat))
    return w @ o, d_diag, o.T


def orthogonal_symplectic_to_unitary(o: np.ndarray) -> np.ndarray:
    """Mode-space unitary u with a' = u a for an orthogonal symplectic O."""
    n = _check_even_square(o)
    a = np.zeros((n, 2 * n), dtype=complex)
    for j in range(n):
        a[j, 2 * j] = 1.0 / np.sqrt(2)
        a[j, 2 * j + 1] = 1j / np.sqrt(2)
    return a @ o @ a.conj().T


@dataclass(frozen=True, eq=False)
class LocalSymplectic:
    """Block-diagonal symplectic acting separately on party A and party B."""

    mat: np.ndarray
    n_modes_a: int

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        n = _check_even_square(mat)
        if not 0 < self.n_modes_a < n:
            raise DimensionMismatchError(
                f"party A must hold between 1 and {n - 1} modes, got {self.n_modes_a}")
        da = 2 * self.n_modes_a
        if np.max(np.abs(mat[:da, da:])) > 1e-10 or np.max(np.abs(mat[da:, :da])) > 1e-10:
            raise DimensionMismatchError("matrix does not respect the bipartition")
        if not is_symplectic(mat, tol=1e-10):
            raise DimensionMismatchError("matrix is not symplectic")
        mat = np.array(mat)
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    def apply(self, gamma: CovMatrix) -> CovMatrix:
        return CovMatrix(self.mat @ gamma.mat @ self.mat.T)
