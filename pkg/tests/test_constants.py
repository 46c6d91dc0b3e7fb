import math
import time

import mpmath
import numpy as np
import pytest

from bernlab.constants import (
    L1_SERIES,
    L2_COMPLEX,
    L2_REAL,
    LINF_LOG,
    PROVENANCES,
    BernsteinConstant,
    bernstein_l1,
    bernstein_l2,
    bernstein_l2_real,
    bernstein_linf_log,
    dirichlet_beta,
    dirichlet_beta_direct,
    mu_constant,
    mu_equation,
    reference_constant,
)
from bernlab.errors import DomainError
from bernlab.numerics import PNorm


def l1_oracle(alpha):
    s = alpha + 2
    series = mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1) ** s, [0, mpmath.inf])
    return float(8 * abs(mpmath.sin(alpha * mpmath.pi / 2)) * mpmath.gamma(alpha + 1) / mpmath.pi * series)


def l2_oracle(alpha, beta):
    s = mpmath.mpc(alpha, beta)
    return float(2 * abs(mpmath.sin(s * mpmath.pi / 2) * mpmath.gamma(s + 1)) / mpmath.sqrt(mpmath.pi * (2 * alpha + 1)))


class TestL1:
    def test_alpha_one(self):
        c = bernstein_l1(1.0)
        assert c.value == pytest.approx(math.pi**2 / 4, abs=1e-12)
        assert c.provenance == L1_SERIES

    def test_alpha_half(self):
        v = bernstein_l1(0.5).value
        # 1.595769 * 0.94862; the four-digit value 1.5139 is only good to about 2e-4
        assert v == pytest.approx(1.5139, abs=2e-4)
        assert v / (8 * math.sin(math.pi / 4) * math.gamma(1.5) / math.pi) == pytest.approx(0.948622, abs=1e-6)
        assert v == pytest.approx(l1_oracle(0.5), rel=1e-13)

    @pytest.mark.parametrize("alpha", [-0.95, -0.5, 0.01, 0.5, 1.3, 2.5, 3.0, 7.25])
    def test_against_mpmath(self, alpha):
        assert bernstein_l1(alpha).value == pytest.approx(l1_oracle(alpha), rel=1e-12)

    def test_even_integers_vanish_exactly(self):
        assert bernstein_l1(2.0).value == 0.0
        assert bernstein_l1(4.0).value == 0.0
        assert bernstein_l1(0.0).value == 0.0

    def test_continuous_through_two(self):
        assert abs(bernstein_l1(2 - 1e-6).value) < 1e-4
        assert abs(bernstein_l1(2 + 1e-6).value) < 1e-4

    def test_domain(self):
        with pytest.raises(DomainError):
            bernstein_l1(-1.0)


@pytest.mark.parametrize("s", [1.05, 1.5, 2.0, 2.5, 3.0, 6.0])
def test_euler_transform_matches_slow_direct_sum(s):
    value, terms = dirichlet_beta(s)
    assert terms < 100
    # plain summation with a half-term tail correction is O(N^-(s+1)) accurate
    assert value == pytest.approx(dirichlet_beta_direct(s, 200000), abs=1e-10)


def test_catalan_constant():
    assert dirichlet_beta(2.0)[0] == pytest.approx(0.915965594177219015, abs=1e-15)
    assert dirichlet_beta(3.0)[0] == pytest.approx(math.pi**3 / 32, abs=1e-15)


class TestL2:
    def test_half_is_exactly_half(self):
        c = bernstein_l2(0.5, 0.0)
        assert c.value == pytest.approx(0.5, abs=1e-12)
        assert c.provenance == L2_REAL

    def test_log_power(self):
        c = bernstein_l2(0.0, 1.0)
        assert c.value == pytest.approx(math.sqrt(2 * math.tanh(math.pi / 2)), abs=1e-10)
        assert c.provenance == L2_COMPLEX

    def test_even_integer_vanishes(self):
        assert bernstein_l2(2.0).value == 0.0

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 1.5])
    def test_two_code_paths_agree(self, alpha):
        complex_path = 2 * abs(np.sin(alpha * np.pi / 2) * math.gamma(alpha + 1)) / math.sqrt(math.pi * (2 * alpha + 1))
        assert bernstein_l2(alpha).value == pytest.approx(bernstein_l2_real(alpha), abs=1e-12)
        assert bernstein_l2(alpha, 1e-300).value == pytest.approx(complex_path, abs=1e-12)

    @pytest.mark.parametrize("alpha,beta", [(0.5, 1.0), (0.0, 4.0), (1.7, -3.0), (-0.3, 10.0), (2.0, 40.0)])
    def test_against_mpmath(self, alpha, beta):
        assert bernstein_l2(alpha, beta).value == pytest.approx(l2_oracle(alpha, beta), rel=1e-12)

    @pytest.mark.parametrize("beta", [0.5, 2.0, 17.0])
    def test_even_in_beta(self, beta):
        assert bernstein_l2(0.7, beta).value == bernstein_l2(0.7, -beta).value

    def test_domain(self):
        with pytest.raises(DomainError):
            bernstein_l2(-0.5)
        with pytest.raises(DomainError):
            bernstein_l2(0.5, 41.0)


class TestLinf:
    @pytest.mark.parametrize("beta,sigma", [(4.0, 1.0), (4.0, 17.0), (-2.0, 1.0)])
    def test_value_one(self, beta, sigma):
        c = bernstein_linf_log(beta, sigma)
        assert c.value == 1.0
        assert c.provenance == LINF_LOG
        assert c.p.is_inf

    @pytest.mark.parametrize("variant", ["full", "cos", "sin"])
    def test_all_variants(self, variant):
        assert bernstein_linf_log(3.0, 2.0, variant).value == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bernstein_linf_log(0.0)
        with pytest.raises(DomainError):
            bernstein_linf_log(1.0, 0.0)


class TestMu:
    def test_value_and_residual(self):
        start = time.perf_counter()
        x = mu_constant(1e-12)
        assert time.perf_counter() - start < 1.0
        assert x == pytest.approx(1.508879, abs=1e-6)
        assert abs(mu_equation(x)) <= 1e-12
        assert 1.5 < x < 1.51

    def test_against_mpmath(self):
        root = mpmath.findroot(lambda x: mpmath.sqrt(x * x + 1) / x - mpmath.log(mpmath.sqrt(x * x + 1) + x), 1.5)
        assert mu_constant(1e-13) == pytest.approx(float(root), abs=1e-12)

    def test_loose_tolerance(self):
        x = mu_constant(1e-6)
        assert abs(mu_equation(x)) <= 1e-6

    @pytest.mark.parametrize("tol", [0.0, -1e-9, 1e-5])
    def test_bad_tolerance(self, tol):
        with pytest.raises(DomainError):
            mu_constant(tol)


def test_constant_record():
    c = bernstein_l1(1.0)
    assert c.to_dict() == {"p": "1.0", "alpha": 1.0, "beta": 0.0, "value": c.value, "provenance": L1_SERIES}
    assert float(c) == c.value
    with pytest.raises(DomainError):
        BernsteinConstant(-1.0, PNorm(1), 0.5)
    with pytest.raises(DomainError):
        BernsteinConstant(1.0, PNorm(1), 0.5, provenance="folklore")
    assert "none" in PROVENANCES


def test_reference_lookup():
    assert reference_constant(0.5, 0.0, 1).provenance == L1_SERIES
    assert reference_constant(0.5, 1.0, 2).provenance == L2_COMPLEX
    assert reference_constant(0.0, 4.0, "inf", "cos_part").value == 1.0
    assert reference_constant(0.5, 1.0, 1) is None
    assert reference_constant(0.5, 0.0, 3) is None
    assert reference_constant(0.5, 1.0, 2, "cos_part") is None
