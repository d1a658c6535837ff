"""Shared samplers and helpers for the test suite."""

import numpy as np
import pytest

from cvwitness.criteria import WWFamilyParams, simon_lhs
from cvwitness.standard_form import Family, TwoModeStandardForm
from cvwitness.witness import DetectorSpec


def tmsv_form(r: float) -> TwoModeStandardForm:
    """Two-mode squeezed vacuum in standard form (x correlated, p anti:
    the CM builder carries the sign flip on c2)."""
    a = np.cosh(2 * r) / 2
    c = np.sinh(2 * r) / 2
    return TwoModeStandardForm(a, a, c, c)


def sample_two_mode_detector(rng: np.random.Generator,
                             physical: bool = True) -> DetectorSpec:
    """Random two-mode detector with moderate occupancy."""
    while True:
        m1, m2, m3, m4 = rng.uniform(0.6, 1.8, 4)
        m5 = rng.uniform(-0.6, 0.6)
        m6 = rng.uniform(-0.6, 0.6)
        d = DetectorSpec(Family.TWO_MODE, m1, m2, m3, m4, m5, m6)
        if not physical or d.to_cm().is_physical():
            return d


def sample_ww_detector(rng: np.random.Generator) -> DetectorSpec:
    """Random physical four-mode detector in the Werner-Wolf pattern."""
    while True:
        m1, m2, m3, m4 = rng.uniform(0.7, 1.5, 4)
        m5 = rng.uniform(-0.5, 0.5)
        m6 = rng.uniform(-0.5, 0.5)
        d = DetectorSpec(Family.WERNER_WOLF, m1, m2, m3, m4, m5, m6)
        if d.to_cm().is_physical():
            return d


def sample_standard_form(rng: np.random.Generator,
                         exclude_band: float = 0.0) -> TwoModeStandardForm:
    """Random physical two-mode standard form, optionally away from the
    criterion boundary."""
    while True:
        a, b = rng.uniform(0.5, 2.0, 2)
        c1 = rng.uniform(-1.0, 1.0)
        c2 = rng.uniform(-1.0, 1.0)
        f = TwoModeStandardForm(a, b, c1, c2)
        if not f.to_cm().is_physical():
            continue
        if exclude_band and abs(simon_lhs(f)) <= exclude_band:
            continue
        return f


def sample_ww_family_params(rng: np.random.Generator) -> WWFamilyParams:
    """Random valid five-parameter Werner-Wolf family point."""
    while True:
        a, b, c, d, e = rng.uniform(0.2, 3.0, size=5)
        if a * d - b * c > 1e-3 and c * e - a > 1e-3:
            return WWFamilyParams(a, b, c, d, e)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
