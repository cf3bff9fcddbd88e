import pytest

from relgas import (Covector1D, FrameMap2D, GasState1D, GasState2D,
                    OrbitLeftDomain, SuperluminalState,
                    check_annihilation, flow_1d, flow_2d, generator_1d,
                    generator_2d, invariants_1d, invariants_2d, limit_scan_c,
                    transform_form_1param, transform_frame_1param_2d,
                    transform_state_1param, transform_state_1param_2d)
from relgas.lie import ExtendedState1D, ExtendedState2D, FlowSettings


def ext1(state, dt=1.0, dx=0.0):
    return ExtendedState1D(state, Covector1D(dt, dx))


def ext2(state, frame=None):
    return ExtendedState2D(state, frame or FrameMap2D.identity())


# --- generators ---------------------------------------------------------------


def test_generator_1d_state_a(state_a, constants):
    t = generator_1d(ext1(state_a), constants)
    assert t.d_rho == pytest.approx(-1.0, rel=1e-14)
    assert t.d_v == pytest.approx(-0.5, rel=1e-14)
    assert t.d_p == pytest.approx(-1.0, rel=1e-14)
    assert t.d_e == pytest.approx(-5.0 / 3.0, rel=1e-14)
    assert t.d_dt == pytest.approx(7.0 / 3.0, rel=1e-14)
    assert t.d_dx == 0.0


def test_generator_1d_rest(constants):
    t = generator_1d(ext1(GasState1D(1.0, 0.0, 1.0, 3.0)), constants)
    assert t.d_rho == 0.0
    assert t.d_v == 0.0
    assert t.d_e == pytest.approx(1.0, rel=1e-15)  # c^2 p^2 / c^2 at c = 1


def test_generator_1d_zero_pressure_directions(constants):
    t = generator_1d(ext1(GasState1D(1.0, 0.3, 0.0, 3.0)), constants)
    assert t.d_v == 0.0
    assert t.d_p == 0.0


def test_generator_2d_state_b(state_b, constants):
    t = generator_2d(ext2(state_b), constants)
    assert t.d_rho == pytest.approx(-1.0, rel=1e-14)
    assert t.d_u == pytest.approx(-0.3, rel=1e-14)
    assert t.d_v == pytest.approx(-0.4, rel=1e-14)
    assert t.d_p == pytest.approx(-1.0, rel=1e-14)
    assert t.d_e == pytest.approx(-5.0 / 3.0, rel=1e-14)
    assert t.d_frame.xx == pytest.approx(1.8533333333333333, rel=1e-14)
    assert t.d_frame.xy == pytest.approx(-0.64, rel=1e-14)
    assert t.d_frame.yx == pytest.approx(-0.64, rel=1e-14)
    assert t.d_frame.yy == pytest.approx(1.48, rel=1e-14)


def test_generator_2d_rest(constants):
    t = generator_2d(ext2(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0)), constants)
    assert t.d_rho == 0.0
    assert t.d_u == 0.0
    assert t.d_v == 0.0
    assert t.d_frame.xx == pytest.approx(1.0, rel=1e-15)  # p dx at c = 1
    assert t.d_frame.xy == 0.0


def _fd_tangent_1d(state, form, constants, h=1e-6):
    up_s = transform_state_1param(state, h, constants)
    dn_s = transform_state_1param(state, -h, constants)
    up_f = transform_form_1param(state, h, constants, form)
    dn_f = transform_form_1param(state, -h, constants, form)
    return ((up_s.rho - dn_s.rho) / (2 * h), (up_s.v - dn_s.v) / (2 * h),
            (up_s.p - dn_s.p) / (2 * h), (up_s.e - dn_s.e) / (2 * h),
            (up_f.dt - dn_f.dt) / (2 * h), (up_f.dx - dn_f.dx) / (2 * h))


def test_generator_matches_map_derivative(suite_1d, constants):
    form = Covector1D(1.0, 0.4)
    for s in suite_1d[:40]:
        t = generator_1d(ExtendedState1D(s, form), constants)
        fd = _fd_tangent_1d(s, form, constants)
        got = (t.d_rho, t.d_v, t.d_p, t.d_e, t.d_dt, t.d_dx)
        for a, b in zip(fd, got):
            assert a == pytest.approx(b, rel=1e-6, abs=1e-9)


def test_generator_2d_matches_map_derivative(suite_2d, constants):
    h = 1e-6
    for s in suite_2d[:40]:
        t = generator_2d(ext2(s), constants)
        up = transform_state_1param_2d(s, h, constants)
        dn = transform_state_1param_2d(s, -h, constants)
        for field, rate in (("rho", t.d_rho), ("u", t.d_u), ("v", t.d_v),
                            ("p", t.d_p), ("e", t.d_e)):
            fd = (getattr(up, field) - getattr(dn, field)) / (2 * h)
            assert fd == pytest.approx(rate, rel=1e-6, abs=1e-9)
        mu = transform_frame_1param_2d(s, h, constants)
        md = transform_frame_1param_2d(s, -h, constants)
        for field in ("xx", "xy", "yx", "yy"):
            fd = (getattr(mu, field) - getattr(md, field)) / (2 * h)
            assert fd == pytest.approx(getattr(t.d_frame, field),
                                       rel=1e-6, abs=1e-9)


# --- flows ---------------------------------------------------------------------


def test_flow_1d_identity(state_a, constants):
    ext = ext1(state_a)
    res = flow_1d(ext, 0.0, FlowSettings(), constants)
    assert res.endpoint == ext
    assert res.error_estimate == 0.0


def test_flow_1d_matches_closed_form(state_a, constants):
    res = flow_1d(ext1(state_a), 0.1, FlowSettings(step_count=64), constants)
    end = res.endpoint
    assert end.state.rho == pytest.approx(0.91732771613389952, rel=1e-10)
    assert end.state.v == pytest.approx(0.45454545454545453, rel=1e-10)
    assert end.state.p == pytest.approx(0.90909090909090906, rel=1e-10)
    assert end.state.e == pytest.approx(2.8648648648648649, rel=1e-10)
    assert end.form.dt == pytest.approx(1.2333333333333334, rel=1e-10)


def test_flow_1d_dt_rate_constancy(state_a, constants):
    # (p* + S* v*^2) dt* - S* v* dx* stays equal to its eps = 0 value
    def rate(ext):
        st = ext.state
        s = (st.e + st.p) / (constants.c ** 2 - st.v ** 2)
        return ((st.p + s * st.v ** 2) * ext.form.dt
                - s * st.v * ext.form.dx)

    start = ext1(state_a)
    assert rate(start) == pytest.approx(7.0 / 3.0, rel=1e-15)
    end = flow_1d(start, 0.1, FlowSettings(step_count=128), constants).endpoint
    assert rate(end) == pytest.approx(7.0 / 3.0, rel=1e-9)


def test_flow_2d_matches_closed_form(state_b, constants):
    res = flow_2d(ext2(state_b), 0.1, FlowSettings(step_count=128), constants)
    end = res.endpoint
    ref = transform_state_1param_2d(state_b, 0.1, constants)
    for field in ("rho", "u", "v", "p", "e"):
        assert getattr(end.state, field) == pytest.approx(
            getattr(ref, field), rel=1e-10)
    mref = transform_frame_1param_2d(state_b, 0.1, constants)
    for field in ("xx", "xy", "yx", "yy"):
        assert getattr(end.frame, field) == pytest.approx(
            getattr(mref, field), rel=1e-10)


def test_flow_2d_restricts_to_1d(constants):
    s1 = GasState1D(1.3, 0.5, 0.8, 2.0)
    s2 = GasState2D(1.3, 0.5, 0.0, 0.8, 2.0)
    e1 = flow_1d(ext1(s1), 0.1, FlowSettings(step_count=128), constants).endpoint
    e2 = flow_2d(ext2(s2), 0.1, FlowSettings(step_count=128), constants).endpoint
    assert e2.state.rho == pytest.approx(e1.state.rho, rel=1e-12)
    assert e2.state.u == pytest.approx(e1.state.v, rel=1e-12)
    assert e2.state.p == pytest.approx(e1.state.p, rel=1e-12)
    assert e2.state.e == pytest.approx(e1.state.e, rel=1e-12)


def test_flow_adaptive(state_a, constants):
    settings = FlowSettings(method="adaptive", tolerance=1e-12)
    res = flow_1d(ext1(state_a), 0.2, settings, constants)
    ref = transform_state_1param(state_a, 0.2, constants)
    assert res.endpoint.state.e == pytest.approx(ref.e, rel=1e-9)
    assert res.steps > 0


def test_flow_orbit_left_domain(constants):
    # p* blows up as eps p + 1 -> 0 along the backward orbit
    state = GasState1D(1.0, 0.1, 1.0, 3.0)
    with pytest.raises(OrbitLeftDomain) as err:
        flow_1d(ext1(state), -1.5, FlowSettings(step_count=512), constants)
    assert err.value.last_valid_eps is not None
    assert -1.5 <= err.value.last_valid_eps <= 0.0


# --- invariants -----------------------------------------------------------------


def test_invariants_1d_state_a(state_a, constants):
    inv = invariants_1d(ext1(state_a), constants)
    assert inv.j1 == pytest.approx(-1.0 / 15.0, rel=1e-12)
    assert inv.j2 == pytest.approx(0.2309401076758503, rel=1e-12)
    assert inv.j3 == pytest.approx(2.5, rel=1e-12)


def test_invariants_1d_rest(constants):
    inv = invariants_1d(ext1(GasState1D(1.0, 0.0, 1.0, 3.0)), constants)
    assert inv.j1 == 1.0
    assert inv.j3 == 0.0


def test_invariants_1d_zero_numerator(constants):
    inv = invariants_1d(ext1(GasState1D(1.0, 0.5, 1.0, 2.0)), constants)
    assert inv.j1 == 0.0


def test_invariants_2d_state_b(state_b, constants):
    inv = invariants_2d(ext2(state_b), constants)
    assert inv.j1 == pytest.approx(0.3, rel=1e-14)
    assert inv.j2 == pytest.approx(0.4, rel=1e-14)
    assert inv.j3 == pytest.approx(-1.0 / 15.0, rel=1e-12)
    assert inv.j4 == pytest.approx(0.4618802153517006, rel=1e-12)
    assert inv.j4_printed == pytest.approx(0.53333333333333333, rel=1e-12)


def test_invariants_2d_rest(constants):
    inv = invariants_2d(ext2(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0)), constants)
    assert inv.j1 == 0.0
    assert inv.j2 == 0.0
    assert inv.j3 == 1.0


def test_invariants_constant_along_orbit(state_b, constants):
    base = invariants_2d(ext2(state_b), constants)
    out = transform_state_1param_2d(state_b, 0.1, constants)
    got = invariants_2d(ext2(out), constants)
    for field in ("j1", "j2", "j3", "j4"):
        assert getattr(got, field) == pytest.approx(getattr(base, field),
                                                    abs=1e-6)


def test_annihilation_1d(state_a, constants):
    ext = ext1(state_a)
    assert abs(check_annihilation("J1", ext, 1e-5, constants)) < 1e-8
    assert abs(check_annihilation("J2", ext, 1e-5, constants)) < 1e-7
    assert abs(check_annihilation("J3", ext, 1e-5, constants)) < 1e-7


def test_annihilation_j4_printed_negative_control(state_b, constants):
    res = check_annihilation("J4_printed", ext2(state_b), 1e-5, constants)
    assert res == pytest.approx(-0.17777777777777778, abs=1e-6)
    assert abs(res) > 1e-2


def test_annihilation_j4_corrected(state_b, constants):
    assert abs(check_annihilation("J4", ext2(state_b), 1e-5, constants)) < 1e-7


def test_annihilation_unknown_invariant(state_a, constants):
    with pytest.raises(ValueError):
        check_annihilation("J9", ext1(state_a), 1e-5, constants)


# --- limit scan -----------------------------------------------------------------


def test_limit_scan_state_a_fields(constants):
    state = GasState1D(1.0, 0.5, 1.0, 3.0)
    report = limit_scan_c(state, 0.1, (10.0, 100.0, 1000.0))
    assert report.certified
    for comp in ("rho", "e"):
        assert comp not in report.skipped
        for ratio in report.ratios[comp]:
            assert 80.0 <= ratio <= 120.0
    # v and p never depend on c
    assert "v" in report.skipped
    assert "p" in report.skipped


def test_limit_scan_rest_state():
    report = limit_scan_c(GasState1D(1.0, 0.0, 1.0, 3.0), 0.1,
                          (10.0, 100.0, 1000.0))
    assert set(report.skipped) == {"rho", "v", "p", "e"}
    assert all(d == 0.0 for d in report.diffs["rho"])
    assert report.certified


def test_limit_scan_single_c():
    report = limit_scan_c(GasState1D(1.0, 0.5, 1.0, 3.0), 0.1, (10.0,))
    assert report.expected_ratios == ()
    assert all(not r for r in report.ratios.values())


def test_limit_scan_superluminal():
    with pytest.raises(SuperluminalState):
        limit_scan_c(GasState1D(1.0, 12.0, 1.0, 3.0), 0.1, (10.0, 100.0))


def test_limit_scan_2d(state_b):
    report = limit_scan_c(state_b, 0.1, (10.0, 100.0, 1000.0))
    assert report.certified
    assert "rho" not in report.skipped
