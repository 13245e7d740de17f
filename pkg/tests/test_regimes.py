import math
from fractions import Fraction

import numpy as np
import pytest

from insdel.errors import ConstructionFailure, InvalidInputError, ParameterError
from insdel.innersearch import CodeTable
from insdel.regimes import (
    build_highnoise,
    build_kary,
    concatenate,
    highnoise_slack,
    kary_gamma,
    kary_slack,
    lcs_bound_violations,
    verify_code,
)


def test_highnoise_slack_positive():
    for eps in np.linspace(1e-4, 0.5 - 1e-4, 500):
        assert highnoise_slack(float(eps)) > 0


def test_kary_slack_at_half():
    assert kary_gamma(0.5) == pytest.approx(2e-4)
    assert 4 * (kary_gamma(0.5) / 2) ** 0.25 == pytest.approx(0.4)
    assert kary_slack(0.5, 3) == pytest.approx(0.5 - 0.4 - 0.00005)


def test_highnoise_paper_mode_limits():
    with pytest.raises(InvalidInputError):
        build_highnoise(Fraction(1, 2), 64, "paper")
    with pytest.raises(ParameterError):
        build_highnoise(Fraction(1, 4), 64, "paper")


def test_highnoise_explicit_example():
    spec = build_highnoise(Fraction(1, 2), 2, "explicit", k=8, m=8)
    assert spec.inner.verified_radius >= math.floor((1 - Fraction(1, 8)) * 8)
    assert spec.inner.check() == []


def test_kary_binary_example():
    spec = build_kary(2, Fraction(1, 4), 2, "explicit", m=9, margin=Fraction(1, 9))
    assert spec.inner.verified_radius >= math.floor((Fraction(1, 3) - Fraction(1, 9)) * 9)


def test_kary_no_fraction_left():
    with pytest.raises(InvalidInputError):
        build_kary(2, Fraction(1, 3), 4, "explicit", m=6, margin=Fraction(1, 20))


def test_kary_reports_best_fraction():
    with pytest.raises(ConstructionFailure, match="largest achievable fraction"):
        build_kary(2, Fraction(1, 4), 4, "explicit", m=4, margin=Fraction(1, 100))


def test_tiny_concatenation_bound():
    # outer code over GF(4)-sized alphabet of length 3, inner m = 3
    inner = [(0, 0, 1), (0, 1, 1), (1, 1, 0), (1, 0, 0)]
    outer = [(0, 1, 2), (1, 2, 3), (2, 3, 0), (3, 0, 1), (0, 2, 1)]
    assert lcs_bound_violations(outer, inner) == []
    assert concatenate((1, 0), inner) == (0, 1, 1, 0, 0, 1)
    assert concatenate((1, 0), inner, pad=(0, 0)) == (0, 1, 1, 0, 0, 0, 0, 1)


def test_report_for_highnoise():
    spec = build_highnoise(Fraction(1, 2), 2, "explicit", k=8, m=8)
    report = verify_code(spec)
    assert report.check("inner_radius").passed
    assert report.check("lcs_bound").passed
    assert report.check("invariants").passed
    rate = spec.outer.d * math.log(spec.q) / (spec.length * math.log(spec.k))
    assert report.rate == pytest.approx(rate)
    assert "regime=concat" in report.dumps()


def test_tampered_header_flagged():
    spec = build_highnoise(Fraction(1, 2), 2, "explicit", k=8, m=8)
    fake = CodeTable(spec.inner.words, spec.k, verified_radius=spec.inner.verified_radius + 1)
    tampered = type(spec)(spec.outer, fake, spec.delta, spec.gamma)
    report = verify_code(tampered)
    assert not report.check("inner_radius").passed
    assert not report.passed


def test_report_for_highrate(small_highrate):
    report = verify_code(small_highrate, effort=5)
    assert report.passed, report.dumps()
    assert report.regime == "highrate"
