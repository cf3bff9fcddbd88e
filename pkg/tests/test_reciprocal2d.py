import math

import pytest

from relgas import (DegenerateJacobian, FrameMap2D, GasState2D,
                    SingularDenominator, delta_4param_2d,
                    jacobian_condition_2d, params_from_epsilon,
                    transform_frame_1param_2d, transform_frame_4param_2d,
                    transform_state_1param_2d, transform_state_4param_2d,
                    transform_state_1param)
from relgas.reciprocal1d import ReciprocalParams

EPS_SET = (0.05, -0.05, 0.1, -0.1)


def test_state_map_fixture_b(state_b, constants):
    out = transform_state_1param_2d(state_b, 0.1, constants)
    assert out.u == pytest.approx(0.27272727272727271, rel=1e-14)
    assert out.v == pytest.approx(0.36363636363636365, rel=1e-14)
    assert out.p == pytest.approx(0.90909090909090906, rel=1e-14)
    assert out.rho == pytest.approx(0.91732771613389952, rel=1e-14)
    assert out.e == pytest.approx(2.8648648648648649, rel=1e-14)


def test_state_map_identity(state_b, constants):
    assert transform_state_1param_2d(state_b, 0.0, constants) == state_b


def test_rest_state_reduction(constants):
    out = transform_state_1param_2d(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0), 1.0,
                                    constants)
    assert out.rho == pytest.approx(1.0, rel=1e-15)
    assert out.e == pytest.approx(3.5, rel=1e-15)
    assert out.p == pytest.approx(0.5, rel=1e-15)


def test_4param_zero_velocity_fixed(constants):
    out = transform_state_4param_2d(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0),
                                    ReciprocalParams(-2.0, 1.5, 1.0, 1.0),
                                    constants)
    assert out.u == 0.0
    assert out.v == 0.0


def test_4param_singular(state_b, constants):
    with pytest.raises(SingularDenominator):
        transform_state_4param_2d(state_b, ReciprocalParams(1.0, -1.0, 1.0, 1.0),
                                  constants)


def test_frame_fixture_b(state_b, constants):
    m = transform_frame_1param_2d(state_b, 0.1, constants)
    assert m.xx == pytest.approx(1.1853333333333333, rel=1e-14)
    assert m.xy == pytest.approx(-0.064, rel=1e-14)
    assert m.yx == pytest.approx(-0.064, rel=1e-14)
    assert m.yy == pytest.approx(1.148, rel=1e-14)
    assert m.det == pytest.approx(1.3566666666666667, rel=1e-14)


def test_frame_identity(state_b, constants):
    assert transform_frame_1param_2d(state_b, 0.0, constants) == FrameMap2D.identity()


def test_frame_diagonal_rest(constants):
    m = transform_frame_4param_2d(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0),
                                  ReciprocalParams(-1.0, 1.0, 1.0, 1.0),
                                  constants)
    assert (m.xx, m.xy, m.yx, m.yy) == (-2.0, 0.0, 0.0, -2.0)


def test_frame_degenerate(constants):
    with pytest.raises(DegenerateJacobian):
        transform_frame_4param_2d(GasState2D(1.0, 0.0, 0.0, 1.0, 3.0),
                                  ReciprocalParams(-1.0, -1.0, 1.0, 1.0),
                                  constants)


def test_jacobian_condition(state_b, constants):
    rep = jacobian_condition_2d(FrameMap2D.identity())
    assert rep.det == 1.0 and rep.ok
    m = transform_frame_1param_2d(state_b, 0.1, constants)
    rep = jacobian_condition_2d(m)
    assert rep.det == pytest.approx(1.3566666666666667, rel=1e-14)
    assert rep.ok
    assert not jacobian_condition_2d(FrameMap2D(0.0, 0.0, 0.0, 0.0)).ok


def test_delta_specialization(state_b, constants):
    # with the eps parameters the radicand becomes 1 - q^2/(c^2 (eps p + 1)^2)
    delta = delta_4param_2d(state_b, params_from_epsilon(0.1), constants)
    assert delta.delta == pytest.approx(1.0 - 0.25 / 1.21, rel=1e-14)
    assert delta.delta > 0


def test_determinant_factorization(suite_2d, constants):
    for s in suite_2d:
        q_sq = s.u * s.u + s.v * s.v
        big_s = (s.e + s.p) / (constants.c ** 2 - q_sq)
        for eps in EPS_SET:
            m = transform_frame_1param_2d(s, eps, constants)
            want = (1.0 + eps * s.p) * (1.0 + eps * (s.p + big_s * q_sq))
            assert m.det == pytest.approx(want, rel=1e-12)


def test_specialization_2d(suite_2d, constants):
    for s in suite_2d:
        for eps in EPS_SET:
            params = params_from_epsilon(eps)
            a = transform_state_4param_2d(s, params, constants)
            b = transform_state_1param_2d(s, eps, constants)
            for field in ("rho", "u", "v", "p", "e"):
                assert getattr(a, field) == pytest.approx(
                    getattr(b, field), rel=1e-13, abs=1e-13)
            ma = transform_frame_4param_2d(s, params, constants, scaled=True)
            mb = transform_frame_1param_2d(s, eps, constants)
            for field in ("xx", "xy", "yx", "yy"):
                assert getattr(ma, field) == pytest.approx(
                    getattr(mb, field), rel=1e-13, abs=1e-13)


def test_group_laws_2d(suite_2d, constants):
    for s in suite_2d:
        for e1 in EPS_SET:
            mid = transform_state_1param_2d(s, e1, constants)
            add = transform_state_1param_2d(mid, 0.05, constants)
            ref = transform_state_1param_2d(s, e1 + 0.05, constants)
            for field in ("rho", "u", "v", "p", "e"):
                assert getattr(add, field) == pytest.approx(
                    getattr(ref, field), rel=1e-12, abs=1e-12)
            back = transform_state_1param_2d(mid, -e1, constants)
            for field in ("rho", "u", "v", "p", "e"):
                assert getattr(back, field) == pytest.approx(
                    getattr(s, field), rel=1e-12)


def test_frame_composition_law(suite_2d, constants):
    for s in suite_2d[:30]:
        for e1, e2 in ((0.05, 0.1), (-0.05, 0.1)):
            mid_state = transform_state_1param_2d(s, e1, constants)
            m1 = transform_frame_1param_2d(s, e1, constants)
            m2 = transform_frame_1param_2d(mid_state, e2, constants)
            ref = transform_frame_1param_2d(s, e1 + e2, constants)
            got = m2.compose(m1)
            for field in ("xx", "xy", "yx", "yy"):
                assert getattr(got, field) == pytest.approx(
                    getattr(ref, field), rel=1e-12, abs=1e-12)


def test_restriction_to_1d(suite_1d, constants):
    for s in suite_1d[:40]:
        if abs(s.v) < 1e-3:
            continue
        s2 = GasState2D(s.rho, s.v, 0.0, s.p, s.e)
        for eps in EPS_SET:
            a = transform_state_1param_2d(s2, eps, constants)
            b = transform_state_1param(s, eps, constants)
            assert a.rho == pytest.approx(b.rho, rel=1e-13)
            assert a.u == pytest.approx(b.v, rel=1e-13)
            assert a.v == 0.0
            assert a.p == pytest.approx(b.p, rel=1e-13)
            assert a.e == pytest.approx(b.e, rel=1e-13)


def test_speed_law(suite_2d, constants):
    for s in suite_2d:
        for eps in EPS_SET:
            out = transform_state_1param_2d(s, eps, constants)
            q_in = math.hypot(s.u, s.v)
            q_out = math.hypot(out.u, out.v)
            assert q_out == pytest.approx(q_in / (eps * s.p + 1.0), rel=1e-13)


def test_rotational_equivariance(suite_2d, constants):
    theta = 0.7
    ct, st_ = math.cos(theta), math.sin(theta)
    for s in suite_2d[:40]:
        rot = GasState2D(s.rho, ct * s.u - st_ * s.v, st_ * s.u + ct * s.v,
                         s.p, s.e)
        for eps in (0.1, -0.1):
            a = transform_state_1param_2d(rot, eps, constants)
            b = transform_state_1param_2d(s, eps, constants)
            assert a.u == pytest.approx(ct * b.u - st_ * b.v, abs=1e-12)
            assert a.v == pytest.approx(st_ * b.u + ct * b.v, abs=1e-12)
            assert a.rho == pytest.approx(b.rho, rel=1e-12)
            assert a.e == pytest.approx(b.e, rel=1e-12)
            # frames conjugate by the rotation
            ma = transform_frame_1param_2d(rot, eps, constants)
            mb = transform_frame_1param_2d(s, eps, constants)
            conj = (FrameMap2D(ct, -st_, st_, ct)
                    .compose(mb)
                    .compose(FrameMap2D(ct, st_, -st_, ct)))
            for field in ("xx", "xy", "yx", "yy"):
                assert getattr(ma, field) == pytest.approx(
                    getattr(conj, field), abs=1e-12)
