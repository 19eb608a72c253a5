# -*- coding: utf-8 -*-

from math import pi

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jmm.core import ConfigError, ValidationError, DomainError
from jmm.profiles import (Primitive, ElbowVariant, ForearmDirection, EvalMode, MotionPrimitive,
                          SigmoidCoefficients, PolyCoefficients, ProfileParams, ProfileSet,
                          SHOULDER_SIGMOID, ELBOW_POLY, SMOOTHSTEP_POLY, eval_sigmoid, eval_poly7,
                          shoulder_flexion_angle, elbow_angle, forearm_angle, evaluate_primitive,
                          normalized_curve)

ALL_PRIMITIVES = [MotionPrimitive(Primitive.SHOULDER_FLEXION),
                  MotionPrimitive(Primitive.SHOULDER_ADDUCTION),
                  MotionPrimitive(Primitive.ELBOW_FLEXION, variant=ElbowVariant.V1),
                  MotionPrimitive(Primitive.ELBOW_FLEXION, variant=ElbowVariant.V2),
                  MotionPrimitive(Primitive.FOREARM_ROTATION, direction=ForearmDirection.SUPINATION)]

DENSE_U = np.linspace(0.0, 1.0, 100001)

angles = st.floats(min_value=-pi, max_value=pi, allow_nan=False)
durations = st.floats(min_value=0.1, max_value=5.0, allow_nan=False)

###########
# Sigmoid #
###########

@pytest.mark.parametrize('u, expected', [(0.0, 9.041e-4), (0.5, 0.3628), (1.0, 1.0130)])
def test_sigmoid_anchors(u, expected):
    assert eval_sigmoid(SHOULDER_SIGMOID, u) == pytest.approx(expected, abs=1e-3)

def test_sigmoid_increasing():
    assert np.all(np.diff(eval_sigmoid(SHOULDER_SIGMOID, DENSE_U)) > 0.0)

def test_sigmoid_scalar_in_scalar_out():
    assert isinstance(eval_sigmoid(SHOULDER_SIGMOID, 0.25), float)
    assert eval_sigmoid(SHOULDER_SIGMOID, [0.0, 1.0]).shape == (2,)

@pytest.mark.parametrize('u', [-0.01, 1.01, float('nan')])
def test_sigmoid_domain(u):
    with pytest.raises(DomainError):
        eval_sigmoid(SHOULDER_SIGMOID, u)

###########
# Poly7   #
###########

def test_poly_intercept_exact():
    assert eval_poly7(ELBOW_POLY[ElbowVariant.V1], 0.0) == 1.0
    assert eval_poly7(ELBOW_POLY[ElbowVariant.V2], 0.0) == 1.0

@pytest.mark.parametrize('variant, expected', [(ElbowVariant.V1, 0.3), (ElbowVariant.V2, 0.1)])
def test_poly_end_values(variant, expected):
    assert eval_poly7(ELBOW_POLY[variant], 1.0) == pytest.approx(expected, abs=1e-9)

def test_poly_derivative_at_ends():
    coef = ELBOW_POLY[ElbowVariant.V1]
    deriv = np.polynomial.polynomial.polyder(coef.coefs)
    assert np.polynomial.polynomial.polyval(0.0, deriv) == pytest.approx(-1.7)
    assert np.polynomial.polynomial.polyval(1.0, deriv) == pytest.approx(2.3)

def test_v1_geometry():
    f = eval_poly7(ELBOW_POLY[ElbowVariant.V1], DENSE_U)
    i_min = np.argmin(f)
    assert 0.55 <= DENSE_U[i_min] <= 0.65
    assert f[i_min] <= 0.10
    assert f[-1] - f[i_min] >= 0.15
    assert eval_poly7(ELBOW_POLY[ElbowVariant.V1], 0.6) == pytest.approx(0.080, abs=0.01)

def test_v2_geometry():
    f = eval_poly7(ELBOW_POLY[ElbowVariant.V2], DENSE_U)
    i_min = np.argmin(f)
    # the published coefficients bottom out at u ~ 0.75 (not at the end), with a
    # shallow rebound
    assert 0.70 <= DENSE_U[i_min] <= 0.80
    assert f[i_min] == pytest.approx(0.0826, abs=1e-3)
    assert f[-1] - f[i_min] <= 0.05
    assert eval_poly7(ELBOW_POLY[ElbowVariant.V2], 0.9) == pytest.approx(0.097, abs=1e-3)

def test_poly_domain():
    with pytest.raises(DomainError):
        eval_poly7(ELBOW_POLY[ElbowVariant.V1], [0.5, 1.5])

################
# Domain Types #
################

def test_coefficient_validation():
    with pytest.raises(ValidationError):
        SigmoidCoefficients(0.001, -0.001, 12.0)
    with pytest.raises(ValidationError):
        PolyCoefficients((1.0, 2.0))
    with pytest.raises(ValidationError):
        PolyCoefficients((1.0, float('inf'), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))

def test_profile_params_validation():
    with pytest.raises(ValidationError):
        ProfileParams(0.0, 1.0, 0.0)
    with pytest.raises(ValidationError):
        ProfileParams(0.0, 1.0, 1.0, rc=0.0)
    with pytest.raises(ValidationError):
        ProfileParams(float('nan'), 1.0, 1.0)

def test_motion_primitive_qualifiers():
    with pytest.raises(ValidationError):
        MotionPrimitive(Primitive.ELBOW_FLEXION)
    with pytest.raises(ValidationError):
        MotionPrimitive(Primitive.SHOULDER_FLEXION, variant=ElbowVariant.V1)
    with pytest.raises(ValidationError):
        MotionPrimitive(Primitive.FOREARM_ROTATION)
    assert str(ALL_PRIMITIVES[2]) == 'elbow_flexion(v1)'

######################
# Joint-Angle Models #
######################

def test_endpoint_anchoring_randomized():
    rng = np.random.default_rng(2024)
    for j0, je, te in zip(rng.uniform(-pi, pi, 1000), rng.uniform(-pi, pi, 1000), rng.uniform(0.1, 5.0, 1000)):
        p = ProfileParams(j0, je, te)
        for prim in ALL_PRIMITIVES:
            start, end = evaluate_primitive(prim, p, [0.0, te])
            assert abs(start - j0) <= 1e-9
            assert abs(end - je) <= 1e-9

@settings(max_examples=50, deadline=None)
@given(j0=angles, je=angles, te=durations, s=st.floats(min_value=0.0, max_value=1.0))
def test_time_scaling(j0, je, te, s):
    for prim in ALL_PRIMITIVES:
        short = evaluate_primitive(prim, ProfileParams(j0, je, te), s * te)
        long = evaluate_primitive(prim, ProfileParams(j0, je, 2.0 * te), min(2.0 * s * te, 2.0 * te))
        assert short == pytest.approx(long, abs=1e-9)

@settings(max_examples=50, deadline=None)
@given(j0=angles, je=angles, rc=st.floats(min_value=0.05, max_value=1.0), s=st.floats(min_value=0.0, max_value=1.0))
def test_rc_linearity(j0, je, rc, s):
    for prim in ALL_PRIMITIVES:
        full = evaluate_primitive(prim, ProfileParams(j0, je, 1.0), s)
        damped = evaluate_primitive(prim, ProfileParams(j0, je, 1.0, rc=rc), s)
        # the anchored elbow form scales its excursion about the end angle
        anchor = je if prim.kind == Primitive.ELBOW_FLEXION else j0
        assert damped - anchor == pytest.approx(rc * (full - anchor), abs=1e-9)

def test_time_domain():
    p = ProfileParams(0.0, 1.0, 1.2)
    with pytest.raises(DomainError):
        shoulder_flexion_angle(p, 1.3)
    with pytest.raises(DomainError):
        elbow_angle(p, ElbowVariant.V1, -0.1)

def test_literal_shoulder():
    p = ProfileParams(0.2, 1.0, 1.2, mode=EvalMode.LITERAL)
    c = SHOULDER_SIGMOID
    u = 0.5
    expected = c.a * 0.8 / (c.b + np.exp(-c.c * u)) + 0.2
    assert shoulder_flexion_angle(p, 0.6) == pytest.approx(expected, abs=1e-12)
    # literal start is offset by f(0)
    assert shoulder_flexion_angle(p, 0.0) == pytest.approx(0.2 + 0.8 * 9.0419e-4, abs=1e-6)

def test_literal_elbow():
    p = ProfileParams(0.5, 0.9, 1.0, mode=EvalMode.LITERAL)
    # j0 + (j0 - je) * f(u)
    assert elbow_angle(p, ElbowVariant.V1, 0.0) == pytest.approx(0.5 + (0.5 - 0.9) * 1.0)
    assert elbow_angle(p, ElbowVariant.V1, 1.0) == pytest.approx(0.5 + (0.5 - 0.9) * 0.3)

def test_anchored_elbow_v1_dips_past_end():
    p = ProfileParams(1.0, 0.5, 1.0)
    theta = elbow_angle(p, ElbowVariant.V1, DENSE_U)
    assert theta.min() < 0.5
    assert theta[-1] == pytest.approx(0.5, abs=1e-12)

def test_forearm_direction_does_not_change_values():
    p = ProfileParams(0.0, 1.0, 1.0)
    sup = forearm_angle(p, SMOOTHSTEP_POLY, ForearmDirection.SUPINATION, 0.3)
    pro = forearm_angle(p, SMOOTHSTEP_POLY, ForearmDirection.PRONATION, 0.3)
    assert sup == pro

def test_normalized_curves():
    for prim in ALL_PRIMITIVES:
        curve = normalized_curve(prim, DENSE_U)
        assert curve[0] == pytest.approx(0.0, abs=1e-12)
        assert curve[-1] == pytest.approx(1.0, abs=1e-12)
    v1 = normalized_curve(ALL_PRIMITIVES[2], DENSE_U)
    assert v1.max() > 1.0
    forearm = ALL_PRIMITIVES[4]
    assert normalized_curve(forearm, 0.5) == pytest.approx(0.5, abs=1e-12)

##############
# ProfileSet #
##############

def test_profile_set_from_config_matches_builtin():
    profiles = ProfileSet.from_config()
    assert profiles.shoulder_flexion == SHOULDER_SIGMOID
    assert profiles.elbow_flexion[ElbowVariant.V1] == ELBOW_POLY[ElbowVariant.V1]
    assert profiles.elbow_flexion[ElbowVariant.V2] == ELBOW_POLY[ElbowVariant.V2]
    assert profiles.forearm_rotation == SMOOTHSTEP_POLY

def test_profile_set_overrides():
    profiles = ProfileSet.from_config({'shoulder_flexion': {'a': 1.0, 'b': 1.0, 'c': 5.0},
                                       'elbow_flexion':    {'v2': [1.0, -1.0, 0, 0, 0, 0, 0, 0]}})
    assert profiles.shoulder_flexion == SigmoidCoefficients(1.0, 1.0, 5.0)
    assert profiles.elbow_flexion[ElbowVariant.V1] == ELBOW_POLY[ElbowVariant.V1]
    assert profiles.elbow_flexion[ElbowVariant.V2].as_list()[:2] == [1.0, -1.0]

def test_profile_set_bad_entry():
    with pytest.raises(ConfigError):
        ProfileSet.from_config({'elbow_flexion': {'v1': [1.0, 2.0]}})
    with pytest.raises(ConfigError):
        ProfileSet.from_config({'shoulder_flexion': {'a': 1.0, 'b': -1.0, 'c': 5.0}})
    with pytest.raises(ConfigError):
        ProfileSet.from_config({'elbow_flexion': [1.0, 2.0]})

def test_evaluate_primitive_uses_profile_set():
    profiles = ProfileSet(shoulder_flexion=SigmoidCoefficients(1.0, 1.0, 5.0))
    p = ProfileParams(0.0, 1.0, 1.0)
    prim = MotionPrimitive(Primitive.SHOULDER_FLEXION)
    assert evaluate_primitive(prim, p, 0.5, profiles) != evaluate_primitive(prim, p, 0.5)
