"""Matched-witness machinery: the product-state maximum of a Gaussian detector,
the detection ratio, and the min-max search for the matched detector.

For both supported detector families the determinant of gamma_M + gamma_A (+)
gamma_B factorizes into two scalar factors g1, g2; all optimizations below work
on that factorization.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.optimize as opt

from .exceptions import (DimensionMismatchError, NonPositiveDeterminantError,
                         NotEntangledError, OptimizerStalledError)
from .standard_form import (Family, TwoModeStandardForm, WernerWolfForm,
                            detect_family, reduce_to_standard_form)
from .symplectic import CovMatrix, gaussian_overlap

#: boundary band on |ell - 1| below which no binary verdict is issued.
TOL_ELL_BOUNDARY = 1e-9


@dataclass(frozen=True)
class DetectorSpec:
    """Gaussian detector with family-patterned CM, parameters M1..M6."""

    family: Family
    m1: float
    m2: float
    m3: float
    m4: float
    m5: float
    m6: float

    @property
    def params(self) -> tuple[float, ...]:
        return (self.m1, self.m2, self.m3, self.m4, self.m5, self.m6)

    def to_cm(self) -> CovMatrix:
        if self.family is Family.TWO_MODE:
            m = np.diag([self.m1, self.m2, self.m3, self.m4])
            m[0, 2] = m[2, 0] = self.m5
            m[1, 3] = m[3, 1] = -self.m6
            return CovMatrix(m)
        return WernerWolfForm(self.m1, self.m2, self.m3, self.m4,
                              self.m5, self.m6).to_cm()

    def scaled(self, t: float) -> "DetectorSpec":
        return DetectorSpec(self.family, *(t * p for p in self.params))

    @property
    def n_modes(self) -> int:
        return 2 if self.family is Family.TWO_MODE else 4


def detector_from_cm(gamma: CovMatrix) -> DetectorSpec:
    """Read detector parameters off a family-patterned CM (no reduction)."""
    family = detect_family(gamma)
    form, s = reduce_to_standard_form(gamma, family)
    if np.max(np.abs(s.mat - np.eye(gamma.dim))) > 1e-8:
        raise DimensionMismatchError("CM is not already in the family pattern")
    if family is Family.TWO_MODE:
        m = gamma.mat
        return DetectorSpec(family, m[0, 0], m[1, 1], m[2, 2], m[3, 3],
                            m[0, 2], -m[1, 3])
    return DetectorSpec(family, form.A, form.B, form.C, form.D, form.E, form.F)


def _det_factors(d: DetectorSpec, x: float, y: float) -> tuple[float, float]:
    g1 = (d.m1 + x / 2) * (d.m3 + y / 2) - d.m5 ** 2
    g2 = (d.m2 + 1 / (2 * x)) * (d.m4 + 1 / (2 * y)) - d.m6 ** 2
    return g1, g2


def _min_det_factors(d: DetectorSpec, tol: float = 1e-14,
                     max_iter: int = 200) -> tuple[float, tuple[float, float]]:
    """Minimize g1(x, y) * g2(x, y) over x, y > 0.

    Coordinate updates are closed-form: for fixed y the product is
    (alpha + beta x)(gamma + delta / x), minimized at x = sqrt(alpha delta /
    (beta gamma)).  A coarse log grid seeds the alternation.
    """
    xs = np.exp(np.linspace(-3, 3, 13))
    xg, yg = np.meshgrid(xs, xs, indexing="ij")
    g1 = (d.m1 + xg / 2) * (d.m3 + yg / 2) - d.m5 ** 2
    g2 = (d.m2 + 1 / (2 * xg)) * (d.m4 + 1 / (2 * yg)) - d.m6 ** 2
    prod = g1 * g2
    if np.min(prod) <= 0:
        raise NonPositiveDeterminantError(
            "det(gamma_M + gamma_A (+) gamma_B) is non-positive on the grid")
    i, j = np.unravel_index(np.argmin(prod), prod.shape)
    x, y = float(xs[i]), float(xs[j])
    val = float(prod[i, j])
    for _ in range(max_iter):
        u = d.m3 + y / 2
        alpha, beta = d.m1 * u - d.m5 ** 2, u / 2
        v = d.m4 + 1 / (2 * y)
        gam, delta = d.m2 * v - d.m6 ** 2, v / 2
        if min(alpha, gam) <= 0:
            break
        x = np.sqrt(alpha * delta / (beta * gam))
        u = d.m1 + x / 2
        alpha, beta = d.m3 * u - d.m5 ** 2, u / 2
        v = d.m2 + 1 / (2 * x)
        gam, delta = d.m4 * v - d.m6 ** 2, v / 2
        if min(alpha, gam) <= 0:
            break
        y = np.sqrt(alpha * delta / (beta * gam))
        g1, g2 = _det_factors(d, x, y)
        new_val = g1 * g2
        if abs(new_val - val) <= tol * max(1.0, abs(val)):
            val = new_val
            break
        val = new_val
    if val <= 0:
        raise NonPositiveDeterminantError("determinant minimum is non-positive")
    return val, (x, y)


def lambda_closed_form(d: DetectorSpec) -> tuple[float, tuple[float, float]]:
    """Maximal detector mean over product pure states and the minimizing (x, y)."""
    val, xy = _min_det_factors(d)
    if d.family is Family.TWO_MODE:
        return 1.0 / np.sqrt(val), xy
    # four-mode determinant is the square of the factor product
    return 1.0 / val, xy


def ell_ratio(gamma: CovMatrix, d: DetectorSpec) -> float:
    """sqrt(det(gamma + gamma_M) / min_{x,y} det(gamma_A (+) gamma_B + gamma_M))."""
    gm = d.to_cm()
    if gm.dim != gamma.dim:
        raise DimensionMismatchError(f"dimension mismatch: {gamma.dim} vs {gm.dim}")
    num = la.det(gamma.mat + gm.mat)
    if num <= 0:
        raise NonPositiveDeterminantError("det(gamma + gamma_M) is non-positive")
    val, _ = _min_det_factors(d)
    den = val ** 2 if d.family is Family.WERNER_WOLF else val
    return float(np.sqrt(num / den))


def ell_factorized(form, d: DetectorSpec) -> float:
    """Detection ratio for a standard-form state via the f1*f2 factorization
    (max over x, y); agrees with ell_ratio on family inputs."""
    if isinstance(form, TwoModeStandardForm):
        a1, b1, c1 = form.a, form.b, form.c1
        a2, b2, c2 = form.a, form.b, form.c2
        power = 0.5
    else:
        a1, b1, c1 = form.A, form.C, form.E
        a2, b2, c2 = form.B, form.D, form.F
        power = 1.0
    num1 = (d.m1 + a1) * (d.m3 + b1) - (d.m5 + c1) ** 2
    num2 = (d.m2 + a2) * (d.m4 + b2) - (d.m6 + c2) ** 2
    if num1 <= 0 or num2 <= 0:
        raise NonPositiveDeterminantError("det(gamma + gamma_M) factor is non-positive")
    val, _ = _min_det_factors(d)
    return float((num1 * num2 / val) ** power)


def _limit_objective(form) -> tuple:
    """Coefficients of the asymptotic detection ratio over cone detectors.

    On the degenerate cone m5^2 = m1 m3, m6^2 = m2 m4 the large-scale limit of
    the ratio is 4 n1 n2 / (u + 1/u)^2 with u = sqrt(w1 w2), where w1 = m1/m3
    and w2 = m2/m4 fix the detector direction.
    """
    if isinstance(form, TwoModeStandardForm):
        return (form.a, form.b, abs(form.c1)), (form.a, form.b, abs(form.c2)), 0.5
    return (form.A, form.C, abs(form.E)), (form.B, form.D, abs(form.F)), 1.0


def _limit_ratio(form, w1: float, w2: float) -> float:
    (a1, b1, c1), (a2, b2, c2), _ = _limit_objective(form)
    n1 = w1 * b1 + a1 / w1 - 2 * c1
    n2 = w2 * b2 + a2 / w2 - 2 * c2
    u = np.sqrt(w1 * w2)
    return 4 * n1 * n2 / (u + 1 / u) ** 2


@dataclass(frozen=True)
class WitnessReport:
    lam: float
    ell: float
    ell_limit: float
    matched_params: DetectorSpec
    argmax_xy: tuple[float, float]
    trace_mean: float
    scaling_audit: tuple[tuple[float, float], ...]
    entangled: bool
    boundary: bool
    form: object = field(repr=False, default=None)


def minmax_optimize(gamma: CovMatrix, restarts: int = 5, seed: int = 0,
                    budget: int = 10_000, scales=(1e2, 1e3, 1e4)) -> WitnessReport:
    """Minimize the detection ratio over detectors of the state's family.

    The outer search runs over detector directions on the degenerate cone
    (log w1, log w2) with Nelder-Mead restarts; the asymptotic ratio there is
    closed-form.  The matched detector is realized at finite scales t and the
    ratio convergence along t is reported as the scaling audit.
    """
    family = detect_family(gamma)
    form, _ = reduce_to_standard_form(gamma, family)
    gamma_std = form.to_cm()
    rng = np.random.default_rng(seed)

    def objective(v):
        return _limit_ratio(form, np.exp(v[0]), np.exp(v[1]))

    starts = [np.zeros(2)] + [rng.uniform(-2, 2, 2) for _ in range(restarts)]
    best = None
    evals = 0
    for v0 in starts:
        res = opt.minimize(objective, v0, method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-14,
                                    "maxfev": budget // len(starts)})
        evals += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    if best is None or not np.isfinite(best.fun):
        raise OptimizerStalledError("outer minimization failed",
                                    diagnostics={"evals": evals})
    w1, w2 = np.exp(best.x)
    (_, _, c1), (_, _, c2), power = _limit_objective(form)
    s5 = np.sign(_signed_c(form)[0]) or 1.0
    s6 = np.sign(_signed_c(form)[1]) or 1.0
    ell_limit = float(best.fun ** power)

    direction = DetectorSpec(family, w1, w2, 1 / w1, 1 / w2, s5, s6)
    audit = []
    for t in scales:
        audit.append((float(t), ell_ratio(gamma_std, direction.scaled(t))))
    matched = direction.scaled(scales[-1])
    lam, xy = lambda_closed_form(matched)
    trace = gaussian_overlap(gamma_std, matched.to_cm())
    ell = lam / trace
    boundary = abs(ell - 1) <= TOL_ELL_BOUNDARY or abs(ell_limit - 1) <= TOL_ELL_BOUNDARY
    return WitnessReport(
        lam=float(lam), ell=float(ell), ell_limit=ell_limit,
        matched_params=matched, argmax_xy=(float(xy[0]), float(xy[1])),
        trace_mean=float(trace), scaling_audit=tuple(audit),
        entangled=(not boundary) and ell < 1, boundary=boundary, form=form)


def _signed_c(form) -> tuple[float, float]:
    if isinstance(form, TwoModeStandardForm):
        return form.c1, form.c2
    return form.E, form.F


def matched_witness(gamma: CovMatrix, **kwargs) -> tuple[float, DetectorSpec, float]:
    """(Lambda, matched detector, violation) with violation = Lambda - Tr(rho M*)."""
    report = minmax_optimize(gamma, **kwargs)
    if not report.entangled:
        raise NotEntangledError(f"state has ell = {report.ell:.6g} >= 1")
    violation = report.lam - report.trace_mean
    return report.lam, report.matched_params, float(violation)
