"""Far-field layer: incidence, forcing term, candidate, residual, sweeps."""

import csv
import io
import math

import numpy as np
import pytest

from qpdiff import farfield as ff
from qpdiff.errors import DomainError
from qpdiff.quadrature import QuadratureConfig


@pytest.fixture(scope="module")
def inc12():
    # the reference incidence with both spectral constants negative
    return ff.make_incidence(math.pi / 4, -3 * math.pi / 4, 3.0)


@pytest.fixture(scope="module")
def ev12(inc12):
    return ff.AnsatzEvaluator(inc12)


class TestIncidence:
    def test_reference_incidence(self, inc12):
        assert inc12.a1 == pytest.approx(-1.5, abs=1e-12)
        assert inc12.a2 == pytest.approx(-1.5, abs=1e-12)
        assert inc12.a3 == pytest.approx(3.0 / math.sqrt(2), abs=1e-12)
        # no shift applied: both constants negative
        assert inc12.a1.imag == 0.0 and inc12.a2.imag == 0.0

    def test_positive_constants_get_shifted(self):
        inc = ff.make_incidence(math.pi / 4, math.pi / 8, 3.0)
        assert inc.a1.real > 0 and inc.a2.real > 0
        assert inc.a1.imag == -inc.eps_shift
        assert inc.a2.imag == -inc.eps_shift

    def test_normal_incidence_degenerate(self):
        inc = ff.make_incidence(0.0, 0.0, 3.0)
        assert inc.a1 == 0 and inc.a2 == 0 and inc.a3 == 3.0
        assert inc.is_degenerate

    def test_pythagoras_before_shift(self, rng):
        for _ in range(20):
            theta0 = rng.uniform(0, math.pi / 2)
            phi0 = rng.uniform(-3 * math.pi / 4, math.pi / 4)
            k = rng.uniform(0.5, 5.0)
            inc = ff.make_incidence(theta0, phi0, k)
            total = inc.a1.real ** 2 + inc.a2.real ** 2 + inc.a3 ** 2
            assert total == pytest.approx(k * k, rel=1e-12)

    @pytest.mark.parametrize("theta0,phi0", [
        (-0.1, 0.0), (math.pi / 2 + 0.1, 0.0),
        (0.5, math.pi / 4 + 0.1), (0.5, -3 * math.pi / 4 - 0.1),
    ])
    def test_angle_ranges_enforced(self, theta0, phi0):
        with pytest.raises(DomainError):
            ff.make_incidence(theta0, phi0, 3.0)

    def test_observation_ranges(self):
        with pytest.raises(DomainError):
            ff.Observation(theta=math.pi / 2 + 0.01, phi=0.0)
        with pytest.raises(DomainError):
            ff.Observation(theta=0.3, phi=2 * math.pi)
        obs = ff.Observation(theta=0.4, phi=1.0)
        assert obs.xi == pytest.approx(math.cos(1.0) * math.sin(0.4))
        assert obs.eta == pytest.approx(math.sin(1.0) * math.sin(0.4))


class TestForcingTerm:
    def test_unit_offsets(self, inc12):
        val = ff.g_pp(inc12.a1 + 1.0, inc12.a2 + 1.0, inc12)
        assert val == pytest.approx(1.0, abs=1e-15)

    def test_rational_residue_structure(self, inc12):
        # (alpha1 - a1) g is exactly 1/(alpha2 - a2) at any offset; the
        # tolerance only covers the h-cancellation roundoff
        for h in (1.0, 1e-3, 1e-5):
            beta = 0.7 + 0.4j
            val = ff.g_pp(inc12.a1 + h, beta, inc12) * h
            assert val == pytest.approx(1.0 / (beta - inc12.a2), rel=1e-9)

    def test_large_alpha2_decay(self, inc12):
        mags = [abs(ff.g_pp(0.5, r * 1j, inc12)) for r in (1e2, 1e3, 1e4)]
        assert mags[0] / mags[1] == pytest.approx(10.0, rel=1e-2)
        assert mags[1] / mags[2] == pytest.approx(10.0, rel=1e-2)

    def test_pole_rejected(self, inc12):
        with pytest.raises(DomainError):
            ff.g_pp(inc12.a1, 0.3, inc12)


class TestCandidate:
    def test_pole_transmission_in_alpha1(self, ev12, inc12):
        # |F| * |alpha1 - a1| tends to a finite nonzero limit
        beta = 0.8 + 0.6j
        scaled = [abs(ev12.fpp(inc12.a1 + d * np.exp(0.4j), beta)) * d
                  for d in (1e-2, 1e-3)]
        assert scaled[0] == pytest.approx(scaled[1], rel=0.05)
        assert scaled[1] > 0

    def test_matches_functional_form(self, inc12):
        val_a = ff.radlow_fpp(0.5 + 0.5j, 0.7 + 0.2j, inc12)
        ev = ff.AnsatzEvaluator(inc12)
        val_b = ev.fpp(0.5 + 0.5j, 0.7 + 0.2j)
        assert val_a == pytest.approx(val_b, rel=1e-12)


class TestResidual:
    def test_exact_cancellation_on_the_diagonal(self, ev12, inc12, rng):
        for _ in range(10):
            a1 = rng.uniform(-2.5, 2.5) + 1j * rng.uniform(-1, 1)
            assert ev12.compatibility_residual(a1, inc12.a2) == 0.0

    def test_generically_nonzero(self, ev12, inc12):
        for a1, a2 in [(0.5 + 0.8j, 1.0 + 0.5j), (1.5, -0.7)]:
            r = ev12.compatibility_residual(a1, a2)
            g = ff.g_pp(a1, a2, inc12)
            assert abs(r) > 1e-3 * abs(g)

    def test_first_order_taylor_approach(self, ev12, inc12):
        # the residual approaches its diagonal limit linearly in the
        # offset (the forcing pole eats one order of the bracket zero)
        a1 = 0.9 + 0.4j
        deltas = np.array([1e-1, 1e-2, 1e-3])
        vals = np.array([ev12.compatibility_residual(a1, inc12.a2 + d * np.exp(0.3j))
                         for d in deltas])
        limit = ev12.compatibility_residual(a1, inc12.a2 + 1e-6 * np.exp(0.3j))
        slope = np.polyfit(np.log(deltas), np.log(np.abs(vals - limit)), 1)[0]
        assert slope == pytest.approx(1.0, abs=0.1)


class TestDiffraction:
    def test_oasis_point_is_purely_imaginary(self, ev12):
        val = ev12.diffraction(ff.Observation(theta=0.6, phi=math.pi))
        assert val.flag == "ok"
        assert abs(val.value.real) < 1e-6 * abs(val.value.imag)

    def test_near_pole_flagged(self, ev12, inc12):
        # xi = -xi0 exactly: the forcing pole direction
        xi = -inc12.xi0
        eta = 0.2
        theta = math.asin(math.hypot(xi, eta))
        phi = math.atan2(eta, xi) % (2 * math.pi)
        val = ev12.diffraction(ff.Observation(theta=theta, phi=phi))
        assert val.flag == "near_pole"

    def test_k_invariance_spot_check(self):
        obs = ff.Observation(theta=0.7, phi=3.0)
        vals = []
        for k in (1.0, 3.0):
            inc = ff.make_incidence(math.pi / 4, -3 * math.pi / 4, k)
            vals.append(ff.AnsatzEvaluator(inc).diffraction(obs).value)
        assert abs(vals[0] - vals[1]) / abs(vals[1]) < 1e-5


class TestArcSweep:
    def test_two_point_arc_hits_endpoints(self, ev12):
        res = ev12.arc_sweep(math.pi, 2)
        assert res.thetas[0] == 0.0
        assert res.thetas[-1] == pytest.approx(math.pi / 2)
        assert len(res.values) == 2 and len(res.flags) == 2

    def test_minimum_rows_enforced(self, ev12):
        with pytest.raises(DomainError):
            ev12.arc_sweep(math.pi, 1)

    def test_oasis_arc_all_ok(self, ev12):
        res = ev12.arc_sweep(math.pi, 21)
        assert res.all_ok
        assert (np.max(np.abs(res.values.real))
                / np.max(np.abs(res.values.imag))) < 1e-3

    def test_workers_do_not_change_results(self, inc12):
        ev_a = ff.AnsatzEvaluator(inc12)
        ev_b = ff.AnsatzEvaluator(inc12)
        res1 = ev_a.arc_sweep(2.0, 9, workers=1)
        res2 = ev_b.arc_sweep(2.0, 9, workers=3)
        assert np.array_equal(res1.values, res2.values)
        assert res1.flags == res2.flags

    def test_csv_wire_format(self, ev12, tmp_path):
        res = ev12.arc_sweep(math.pi, 5)
        path = tmp_path / "arc.csv"
        res.to_csv(str(path))
        text = path.read_text()
        lines = text.strip().split("\n")
        assert lines[0] == "theta,phi,theta0,phi0,k,re_fd,im_fd,flag"
        assert len(lines) == 6
        rows = list(csv.DictReader(io.StringIO(text)))
        for i, row in enumerate(rows):
            assert float(row["theta"]) == pytest.approx(res.thetas[i])
            assert float(row["re_fd"]) == res.values[i].real
            assert float(row["im_fd"]) == res.values[i].imag
            assert row["flag"] in ("ok", "near_pole", "continued", "real_branch")
        # full double precision round-trip
        assert float(rows[2]["im_fd"]) == res.values[2].imag

    def test_csv_deterministic(self, ev12, tmp_path):
        res = ev12.arc_sweep(math.pi, 5)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        res.to_csv(str(p1))
        res.to_csv(str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestShiftRobustness:
    def test_halving_changes_below_pipeline_noise(self):
        cfg = QuadratureConfig(s_max=1e5)
        inc_a = ff.make_incidence(math.pi / 4, math.pi / 8, 3.0)
        inc_b = ff.make_incidence(math.pi / 4, math.pi / 8, 3.0,
                                  eps_shift=inc_a.eps_shift / 2)
        ev_a = ff.AnsatzEvaluator(inc_a, cfg=cfg)
        ev_b = ff.AnsatzEvaluator(inc_b, cfg=cfg)
        for i in range(3):
            obs = ff.Observation(theta=0.3 + 0.3 * i, phi=1.2 + 0.7 * i)
            va = ev_a.diffraction(obs).value
            vb = ev_b.diffraction(obs).value
            assert abs(va - vb) / abs(va) < 1e-6


class TestFunctionalWrappers:
    def test_diffraction_coefficient_function(self, inc12):
        obs = ff.Observation(theta=0.6, phi=math.pi)
        point = ff.diffraction_coefficient(obs, inc12)
        ev_val = ff.AnsatzEvaluator(inc12).diffraction(obs)
        assert point.value == pytest.approx(ev_val.value, rel=1e-12)
        assert point.flag == ev_val.flag

    def test_arc_sweep_function(self, inc12):
        res = ff.arc_sweep(inc12, 2.0, 5)
        ev_res = ff.AnsatzEvaluator(inc12).arc_sweep(2.0, 5)
        assert np.allclose(res.values, ev_res.values, rtol=1e-12)

    def test_compatibility_residual_function(self, inc12):
        val = ff.compatibility_residual(0.5 + 0.8j, 1.0 + 0.5j, inc12)
        ev_val = ff.AnsatzEvaluator(inc12).compatibility_residual(
            0.5 + 0.8j, 1.0 + 0.5j)
        assert val == pytest.approx(ev_val, rel=1e-12)


def test_threshold_flagged_pole_row_is_finite_and_large(inc12):
    # just inside the near-pole band but off the exact pole: the shift
    # keeps the value finite while the magnitude blows up
    ev = ff.AnsatzEvaluator(inc12)
    xi = -inc12.xi0 - 5e-4
    eta = 0.2
    theta = math.asin(math.hypot(xi, eta))
    phi = math.atan2(eta, xi) % (2 * math.pi)
    point = ev.diffraction(ff.Observation(theta=theta, phi=phi))
    assert point.flag == "near_pole"
    assert np.isfinite(point.value)
    assert abs(point.value) > 10.0
