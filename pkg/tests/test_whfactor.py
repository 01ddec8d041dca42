"""Cauchy machinery and quarter factors against closed-form oracles."""

import numpy as np
import pytest

from qpdiff import specfun as sf
from qpdiff import whfactor as wf
from qpdiff.contour import ShiftedContour, contour_point
from qpdiff.errors import BranchCrossingError, DomainError, WindingError


@pytest.fixture(scope="module")
def shifted_pair(contour3=None):
    from qpdiff.contour import default_contour
    spec = default_contour(3.0)
    return spec, ShiftedContour(spec, -0.35), ShiftedContour(spec, +0.35)


class TestCauchySplit:
    """Oracle: partial fractions of f = 1/((z-3i)(z+3i)).

    The pole below the contour belongs to the plus part, the pole above
    to the minus part:  f = [-1/(6i(z+3i))] + [1/(6i(z-3i))].
    """

    def plus_exact(self, t):
        return -1.0 / (6j * (t + 3j))

    def minus_exact(self, t):
        return 1.0 / (6j * (t - 3j))

    def f(self, z):
        return 1.0 / (z ** 2 + 9.0)

    def test_plus_part_at_origin(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        val = wf.cauchy_split(self.f, 0.0, "plus", below, cfg)
        assert val == pytest.approx(1.0 / 18.0, abs=1e-9)

    def test_both_parts_at_contour_targets(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        for s in np.linspace(-4, 4, 10):
            t = contour_point(spec, s)
            assert wf.cauchy_split(self.f, t, "plus", below, cfg) == \
                pytest.approx(self.plus_exact(t), abs=1e-9)
            assert wf.cauchy_split(self.f, t, "minus", above, cfg) == \
                pytest.approx(self.minus_exact(t), abs=1e-9)

    def test_one_sided_function_has_zero_minus_part(self, shifted_pair, cfg):
        # poles only below the contour: already a plus function
        spec, below, above = shifted_pair
        val = wf.cauchy_split(lambda z: 1.0 / ((z + 3j) * (z + 4j)),
                              contour_point(spec, 0.4), "minus", above, cfg)
        assert abs(val) < 1e-8

    def test_sum_reconstruction_on_contour(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        for s in np.linspace(-9, 9, 20):
            t = contour_point(spec, s)
            total = (wf.cauchy_split(self.f, t, "plus", below, cfg)
                     + wf.cauchy_split(self.f, t, "minus", above, cfg))
            assert total == pytest.approx(self.f(t), abs=1e-9)

    def test_wrong_shift_direction_rejected(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        with pytest.raises(DomainError):
            wf.cauchy_split(self.f, 0.0, "plus", above, cfg)
        with pytest.raises(DomainError):
            wf.cauchy_split(self.f, 0.0, "minus", below, cfg)

    def test_target_hugging_shifted_contour_rejected(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        target = contour_point(spec, 0.7) - 0.34j  # 0.01 off the shifted line
        with pytest.raises(DomainError):
            wf.cauchy_split(self.f, target, "plus", below, cfg)


class TestCauchyFactorize:
    """Oracle: rational factorisation of g = (z^2+4)/(z^2+9)."""

    def g(self, z):
        return (z ** 2 + 4.0) / (z ** 2 + 9.0)

    def plus_exact(self, t):
        return (t + 2j) / (t + 3j)

    def minus_exact(self, t):
        return (t - 2j) / (t - 3j)

    def test_factors_match_closed_form(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        for s in np.linspace(-4, 4, 10):
            t = contour_point(spec, s)
            assert wf.cauchy_factorize(self.g, t, "plus", below, cfg) == \
                pytest.approx(self.plus_exact(t), abs=1e-9)
            assert wf.cauchy_factorize(self.g, t, "minus", above, cfg) == \
                pytest.approx(self.minus_exact(t), abs=1e-9)

    def test_identity_function(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        t = contour_point(spec, 0.5)
        assert wf.cauchy_factorize(lambda z: np.ones_like(z), t, "plus",
                                   below, cfg) == pytest.approx(1.0, abs=1e-10)
        assert wf.cauchy_factorize(lambda z: np.ones_like(z), t, "minus",
                                   above, cfg) == pytest.approx(1.0, abs=1e-10)

    def test_product_reconstruction(self, shifted_pair, cfg):
        spec, below, above = shifted_pair
        for s in np.linspace(-9, 9, 20):
            t = contour_point(spec, s)
            prod = (wf.cauchy_factorize(self.g, t, "plus", below, cfg)
                    * wf.cauchy_factorize(self.g, t, "minus", above, cfg))
            assert abs(prod - self.g(t)) < 1e-8

    def test_winding_detected(self, shifted_pair, cfg):
        # (z - i)/(z + i) winds once around the origin along the contour
        spec, below, above = shifted_pair
        with pytest.raises(WindingError):
            wf.cauchy_factorize(lambda z: (z - 1j) / (z + 1j),
                                contour_point(spec, 0.5), "plus", below, cfg)


class TestFactorLabel:
    def test_tags_and_domains(self):
        assert wf.PP.sign1 == +1 and wf.PP.side2 == +1
        assert wf.MM.sign1 == -1 and wf.MM.side2 == -1
        assert wf.MP.flip1() == wf.PP
        assert wf.MP.flip2() == wf.MM
        with pytest.raises(DomainError):
            wf.FactorLabel("xy")


class TestQuarterFactor:
    def test_zero_alpha1_collapses_to_prefactor(self, contour3, cfg, k3):
        # the log term vanishes identically, no quadrature error at all
        for label, sign in ((wf.MP, +1), (wf.PP, +1), (wf.MM, -1), (wf.PM, -1)):
            a2 = 1.0 + 1.0j if label.side2 > 0 else -1.0 - 1.0j
            expected = 1.0 / sf.fourth_root_down(k3 + label.side2 * a2)
            assert wf.quarter_factor(label, 0.0, a2, k3, contour3, cfg) == \
                pytest.approx(expected, abs=0)

    def test_half_factor_products(self, contour3, cfg, k3):
        # K_p? pairs multiply to K_+o, K_m? pairs to K_-o, on each
        # label's shared natural domain (alpha2 on the contour)
        a2 = contour_point(contour3, 1.7)
        a1_up, a1_dn = 0.8 + 0.9j, -0.8 + 0.2j
        kpp = wf.quarter_factor(wf.PP, a1_up, a2, k3, contour3, cfg)
        kpm = wf.quarter_factor(wf.PM, a1_up, a2, k3, contour3, cfg)
        assert kpp * kpm == pytest.approx(
            sf.half_factor("+o", a1_up, a2, k3), rel=1e-8)
        kmp = wf.quarter_factor(wf.MP, a1_dn, a2, k3, contour3, cfg)
        kmm = wf.quarter_factor(wf.MM, a1_dn, a2, k3, contour3, cfg)
        assert kmp * kmm == pytest.approx(
            sf.half_factor("-o", a1_dn, a2, k3), rel=1e-8)

    def test_four_factor_reconstruction_on_contours(self, contour3, cfg, k3):
        for s1, s2 in [(0.0, 0.0), (1.3, -2.1), (-3.3, 0.6), (5.0, 4.0)]:
            a1 = contour_point(contour3, s1)
            a2 = contour_point(contour3, s2)
            prod = 1.0 + 0.0j
            for label in wf.ALL_LABELS:
                prod *= wf.quarter_factor(label, a1, a2, k3, contour3, cfg)
            kv = sf.big_k(a1, a2, k3)
            assert abs(prod - kv) / abs(kv) < 1e-6

    def test_eps_independence(self, contour3, cfg, k3):
        a1, a2 = 0.8 + 0.9j, contour_point(contour3, 1.7)
        for label in (wf.PP, wf.PM):
            v1 = wf.quarter_factor(label, a1, a2, k3, contour3, cfg, eps=0.05)
            v2 = wf.quarter_factor(label, a1, a2, k3, contour3, cfg, eps=0.025)
            assert abs(v1 - v2) / abs(v1) < 10 * cfg.rel_tol

    def test_out_of_domain_rejected(self, contour3, cfg, k3):
        # alpha2 = -1.2 lies below the contour: not PP territory
        with pytest.raises(DomainError):
            wf.quarter_factor(wf.PP, 0.8 + 0.9j, -1.2, k3, contour3, cfg)
        # alpha1 = -1.2 lies below the contour: not P? territory
        with pytest.raises(DomainError):
            wf.quarter_factor(wf.PP, -1.2, 1.0 + 1.0j, k3, contour3, cfg)


class TestContinuation:
    def test_dispatch_matches_direct_in_natural_domain(self, contour3, cfg, k3):
        a1, a2 = 0.8 + 0.9j, 1.0 + 1.2j
        direct = wf.quarter_factor(wf.PP, a1, a2, k3, contour3, cfg)
        value, route = wf.continue_factor(wf.PP, a1, a2, k3, contour3, cfg,
                                          with_route=True)
        assert route == "direct"
        assert abs(value - direct) < 1e-10 * abs(direct)

    def test_alpha2_division_route(self, contour3, cfg, k3):
        # alpha2 real in (-k, 0): below the contour near the indentation
        a1, a2 = 0.8 + 0.9j, -1.2
        value, route = wf.continue_factor(wf.PP, a1, a2, k3, contour3, cfg,
                                          with_route=True)
        assert route == "alpha2-div"
        # four-factor product still reconstructs the kernel there
        prod = 1.0 + 0.0j
        for label in wf.ALL_LABELS:
            prod *= wf.continue_factor(label, a1, a2, k3, contour3, cfg)
        kv = sf.big_k(a1, a2, k3)
        assert abs(prod - kv) / abs(kv) < 1e-6

    def test_overlap_agreement_direct_vs_division(self, contour3, cfg, k3):
        # both the integral and the division are valid for alpha2 on the
        # contour; they must agree to much better than 1e-6
        a1 = 0.8 + 0.9j
        worst = 0.0
        for s2 in np.linspace(-6.0, 6.0, 20):
            a2 = contour_point(contour3, s2)
            direct = wf.quarter_factor(wf.PP, a1, a2, k3, contour3, cfg)
            division = (sf.half_factor("+o", a1, a2, k3)
                        / wf.quarter_factor(wf.PM, a1, a2, k3, contour3, cfg))
            worst = max(worst, abs(direct - division) / abs(direct))
        assert worst < 1e-6

    def test_alpha1_route_constant_is_unimodular(self, contour3, cfg, k3):
        for label in wf.ALL_LABELS:
            c = wf.continuation_constant(label, k3, contour3, cfg)
            assert abs(abs(c) - 1.0) < 1e-6
            # empirically the swapped half-plane factors split with unit
            # constant on the overlap region
            assert c == pytest.approx(1.0, abs=1e-6)

    def test_four_factor_reconstruction_fully_continued(self, contour3, cfg,
                                                        k3, rng):
        for _ in range(6):
            a1 = rng.uniform(-2.7, 2.7)
            a2 = rng.uniform(-2.7, 2.7)
            prod = 1.0 + 0.0j
            for label in wf.ALL_LABELS:
                prod *= wf.continue_factor(label, a1, a2, k3, contour3, cfg)
            kv = sf.big_k(a1, a2, k3)
            assert abs(prod - kv) / abs(kv) < 1e-6


def test_log_track_crossing_detection():
    # synthetic sample track that walks across the negative real axis
    good = np.array([1.0 + 0.5j, 0.8 + 0.2j, 0.9 - 0.3j, 1.1 - 0.1j])
    wf._check_log_track(good)  # crossing on the right half-plane: fine
    bad = np.array([-1.0 + 0.2j, -1.0 - 0.2j])
    with pytest.raises(BranchCrossingError):
        wf._check_log_track(bad)
