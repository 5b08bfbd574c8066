import cmath
import itertools
import math

import numpy as np
import pytest

from symproj.core import SpectrumSpec
from symproj.indicator import KINDS, IndicatorForm, indicator_value

SPIN = SpectrumSpec.declared([-0.5, 0.5])
THREE = SpectrumSpec.declared([-1.0, 0.0, 1.0])


def test_lagrange_two_point():
    form = IndicatorForm("lagrange")
    assert indicator_value(form, 0.5, 0.5, SPIN) == 1.0
    assert indicator_value(form, -0.5, 0.5, SPIN) == 0.0


def test_unit_circle_real_eight_nodes():
    # direct summation of the 8 roots of unity raised to the offset 1
    expected = sum(cmath.exp(2j * math.pi * m / 8) for m in range(8)) / 8
    got = indicator_value(IndicatorForm("unit_circle_real", nodes=8), 1.0, 0.0, THREE)
    assert abs(got - expected) <= 1e-15
    assert abs(got) <= 1e-12


def test_logistic_at_target():
    # 1/(1+e^-a) - 1/(1+e^a) = (1 - e^-a)/(1 + e^-a) with a = k*eps, k = 1e4, eps = 0.5
    k, eps = 1e4, 0.5
    expected = (1 - math.exp(-k * eps)) / (1 + math.exp(-k * eps))
    got = indicator_value(IndicatorForm("logistic_difference", steepness=k),
                          0.0, 0.0, SpectrumSpec.declared([0.0, 1.0]))
    assert got == pytest.approx(expected, abs=1e-15)
    assert abs(got - 1) <= 1e-6


TOLERANCE = {
    "unit_circle_real": 1e-12,
    "unit_circle_complex": 1e-12,
    "lagrange": 1e-12,
    "resolvent_contour": 1e-12,
    "logistic_difference": 1e-6,
    "bump": 0.0,
}


def _form(kind):
    return IndicatorForm(kind, steepness=1e4 if kind == "logistic_difference" else None)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("spectrum", [THREE, SPIN, SpectrumSpec.declared([0, 1, 2, 3, 4])],
                         ids=["three", "spin", "five"])
def test_kronecker_at_spectrum_points(kind, spectrum):
    form = _form(kind)
    for x, t in itertools.product(spectrum.values, repeat=2):
        val = indicator_value(form, x, t, spectrum)
        assert abs(val - (x == t)) <= TOLERANCE[kind], (x, t, val)


@pytest.mark.parametrize("kind", ["lagrange", "resolvent_contour", "logistic_difference", "bump"])
def test_real_valued_forms(kind):
    assert isinstance(indicator_value(_form(kind), 0.3, 0.0, THREE), float)


def test_bump_support():
    form = IndicatorForm("bump", epsilon=0.25)
    assert indicator_value(form, 0.49, 0.0, THREE) > 0
    assert indicator_value(form, 0.5, 0.0, THREE) == 0.0


def test_lagrange_overshoots_between_nodes():
    # no [0, 1] band is enforced between eigenvalues
    spec = SpectrumSpec.declared([0, 1, 2, 3])
    vals = [indicator_value(IndicatorForm("lagrange"), x, 0.0, spec) for x in np.linspace(0, 3, 61)]
    assert min(vals) < 0


def test_resolvent_sign_is_plus_one_inside():
    val = indicator_value(IndicatorForm("resolvent_contour", radius=0.3), 0.1, 0.0, THREE)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_complex_branch_matches_real_at_integers():
    for x in (-1.0, 0.0, 1.0):
        a = indicator_value(IndicatorForm("unit_circle_real", nodes=5), x, 1.0, THREE)
        b = indicator_value(IndicatorForm("unit_circle_complex", nodes=5), x, 1.0, THREE)
        assert abs(a - b) <= 1e-13


class TestErrors:
    def test_target_not_in_spectrum(self):
        with pytest.raises(ValueError, match="not in spectrum"):
            indicator_value(IndicatorForm("lagrange"), 0.0, 0.25, THREE)

    def test_non_integer_gap(self):
        spec = SpectrumSpec.declared([0.0, 1.0, 2.5])
        with pytest.raises(ValueError, match="2.5"):
            indicator_value(IndicatorForm("unit_circle_real"), 0.0, 0.0, spec)

    def test_too_few_nodes(self):
        with pytest.raises(ValueError, match="spread of 2"):
            indicator_value(IndicatorForm("unit_circle_real", nodes=2), 0.0, 0.0, THREE)

    def test_x_on_contour(self):
        with pytest.raises(ValueError, match="contour"):
            indicator_value(IndicatorForm("resolvent_contour", radius=0.5), 0.5, 0.0, THREE)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown indicator"):
            IndicatorForm("gaussian")

    def test_nonpositive_params(self):
        with pytest.raises(ValueError, match="strictly positive"):
            IndicatorForm("bump", epsilon=0.0)

    def test_logistic_needs_steepness(self):
        with pytest.raises(ValueError, match="steepness"):
            IndicatorForm("logistic_difference")
