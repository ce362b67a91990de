"""Error estimators, lift-off and discontinuity diagnostics, NDJSON rows."""
import json
import math

import numpy as np
import pytest

from fluxlag.densities import make_density
from fluxlag.dynamics import SchemeParams, run
from fluxlag.mesh import build_uniform_mesh
from fluxlag.metrics import (
    CONTACT_ANGLE_THRESHOLD,
    MetricsRecord,
    _liftoff_from_psi,
    bulk_max_psi_eta,
    discontinuity_indicator,
    l1_error_paper,
    l1_error_quadrature,
    liftoff_indicator,
    metrics_record,
    rate_fit,
)
from fluxlag.transform import init_pseudo_inverse, reconstruct


class _FakeRef:
    kind = "fake"

    def __init__(self, dens=None, integ=None):
        self._dens = dens or (lambda x, t: np.zeros_like(x))
        self._integ = integ or (lambda a, b, t: 0.0)

    def density(self, x, t):
        return self._dens(np.asarray(x, float), t)

    def integral(self, a, b, t):
        return self._integ(a, b, t)


def sample_of(preset, n):
    return reconstruct(init_pseudo_inverse(make_density(preset), build_uniform_mesh(n)))


class TestL1Estimators:
    def test_paper_estimator_is_node_average(self):
        sample = sample_of("indicator", 50)
        # [TRIVIAL] against a zero reference the estimator is mean |u|
        got = l1_error_paper(sample, _FakeRef(), 0.0)
        assert got == pytest.approx(np.abs(sample.u).mean(), rel=1e-14)

    def test_identical_reference_gives_zero(self):
        sample = sample_of("indicator", 50)
        ref = _FakeRef(
            dens=lambda x, t: np.interp(x, sample.x, sample.u),
            integ=lambda a, b, t: 1.0,  # all reference mass inside the sample
        )
        assert l1_error_paper(sample, ref, 0.0) == 0.0
        assert l1_error_quadrature(sample, ref, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_quadrature_counts_mass_outside_sample(self):
        # [DERIVED] zero reference inside, unit reference mass elsewhere:
        # L1 distance = sample mass + 1 ~ 2
        sample = sample_of("triangle", 200)
        got = l1_error_quadrature(sample, _FakeRef(), 0.0)
        assert got == pytest.approx(2.0, abs=5 / 200)

    def test_quadrature_never_negative_outside_mass(self):
        sample = sample_of("indicator", 20)
        ref = _FakeRef(integ=lambda a, b, t: 1.5)  # over-unit inside mass
        got = l1_error_quadrature(sample, ref, 0.0)
        assert got >= 0.0


class TestRateFit:
    def test_recovers_exact_power_law(self):
        ts = np.geomspace(1.0, 100.0, 12)
        errs = 3.7 * ts ** (-1.0 / 3.0)
        slope, intercept = rate_fit(ts, errs, (1.0, 100.0))
        assert slope == pytest.approx(-1.0 / 3.0, abs=1e-12)
        assert intercept == pytest.approx(math.log(3.7), abs=1e-12)

    def test_window_filters_points(self):
        ts = np.array([0.1, 1.0, 2.0, 4.0, 8.0, 100.0])
        errs = 2.0 * ts**-0.5
        errs[0] = errs[-1] = 1e9  # junk outside the window
        slope, _ = rate_fit(ts, errs, (1.0, 8.0))
        assert slope == pytest.approx(-0.5, abs=1e-12)

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            rate_fit([1.0, 2.0], [1.0, 0.5], (0.5, 3.0))
        with pytest.raises(ValueError):
            rate_fit([1.0, 2.0, 3.0], [1.0, 0.5, 0.1], (10.0, 20.0))


class TestLiftoff:
    def test_critical_exponent_is_scale_free(self):
        # [DERIVED] psi = (eta + 1/2)^(1/q) makes psi^q linear, so the
        # discrete boundary derivative equals 1 at every resolution
        for m in (1.0, 3.0):
            q = m + 1.0
            for n in (50, 200):
                eta = np.linspace(-0.5, 0.5, n)
                d = np.diff(eta)
                psi = np.minimum(eta + 0.5, 0.5 - eta) ** (1.0 / q)
                left, right = _liftoff_from_psi(psi, d, m)
                assert left == pytest.approx(1.0, rel=1e-10)
                assert right == pytest.approx(1.0, rel=1e-10)

    def test_subcritical_diverges_supercritical_vanishes(self):
        # p < 1/(m+1): indicator grows under refinement; p > 1/(m+1): shrinks
        m, q = 1.0, 2.0
        vals = {}
        for p in (0.2, 0.8):
            out = []
            for n in (100, 400):
                eta = np.linspace(-0.5, 0.5, n)
                psi = np.minimum(eta + 0.5, 0.5 - eta) ** p
                out.append(_liftoff_from_psi(psi, np.diff(eta), m)[0])
            vals[p] = out
        assert vals[0.2][1] > 2.0 * vals[0.2][0]
        assert vals[0.8][1] < 0.5 * vals[0.8][0]

    def test_triangle_oracle_through_public_api(self):
        # [DERIVED] triangle, m = 1: phi = -1 + sqrt(2(eta + 1/2)) on the left,
        # so psi_i^2 = (d/2)(2i + 1 + 2 sqrt(i(i+1))) and the discrete
        # indicator equals 1 + sqrt(6) - sqrt(2) at every resolution
        want = 1.0 + math.sqrt(6.0) - math.sqrt(2.0)
        for n in (100, 800):
            state = init_pseudo_inverse(make_density("triangle"), build_uniform_mesh(n))
            left, right = liftoff_indicator(state, SchemeParams(m=1.0))
            assert left == pytest.approx(want, rel=1e-7)
            assert right == pytest.approx(want, rel=1e-7)


class TestBulkDiagnostics:
    def test_contact_angle_nodes_are_excluded(self):
        # indicator: huge psi_eta only at the first/last interior segment
        sample = sample_of("indicator", 400)
        full = np.abs(sample.psi_eta[1:-1]).max()
        bulk, _ = bulk_max_psi_eta(sample)
        assert full > CONTACT_ANGLE_THRESHOLD
        assert bulk < 1e-6

    def test_interior_jump_is_reported_with_location(self):
        sample = sample_of("composite_step", 400)
        bulk, x = bulk_max_psi_eta(sample)
        assert bulk > 10.0
        assert abs(abs(x) - 0.5) < 0.05  # the datum jumps at x = +-1/2

    def test_time_series_aligns_with_snapshots(self):
        state = init_pseudo_inverse(make_density("triangle"), build_uniform_mesh(32))
        traj = run(state, SchemeParams(), [0.005, 0.01], 0.01)
        ts, vals, locs = discontinuity_indicator(traj)
        assert list(ts) == [s.t for s in traj.snapshots]
        assert vals.shape == locs.shape == ts.shape
        assert np.all(vals >= 0)


class TestMetricsRecord:
    KEYS = [
        "t",
        "l1_paper",
        "l1_quadrature",
        "support_left",
        "support_right",
        "u_max",
        "max_interior_abs_psi_eta",
        "liftoff_left",
        "liftoff_right",
        "w_max",
    ]

    def test_json_key_order_is_fixed(self):
        state = init_pseudo_inverse(make_density("triangle"), build_uniform_mesh(32))
        rec = metrics_record(state, SchemeParams(), None)
        line = rec.to_json()
        assert list(json.loads(line).keys()) == self.KEYS
        assert "\n" not in line

    def test_null_errors_without_reference(self):
        state = init_pseudo_inverse(make_density("triangle"), build_uniform_mesh(32))
        rec = metrics_record(state, SchemeParams(), None)
        assert rec.l1_paper is None and rec.l1_quadrature is None
        assert json.loads(rec.to_json())["l1_paper"] is None

    def test_fields_match_sample(self):
        state = init_pseudo_inverse(make_density("triangle"), build_uniform_mesh(64))
        params = SchemeParams()
        rec = metrics_record(state, params, None)
        sample = reconstruct(state, params.psi_eta_cap)
        assert rec.t == 0.0
        assert rec.support_left == pytest.approx(-1.0)
        assert rec.support_right == pytest.approx(1.0)
        assert rec.u_max == pytest.approx(sample.u_max)
        assert rec.w_max == pytest.approx(float(np.abs(sample.w).max()))

    def test_round_trip_values(self):
        rec = MetricsRecord(1.0, 0.5, 0.25, -1.0, 1.0, 0.9, 3.0, 2.0, 2.0, 1.1)
        back = json.loads(rec.to_json())
        assert back["l1_quadrature"] == 0.25 and back["w_max"] == 1.1
