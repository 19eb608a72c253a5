# -*- coding: utf-8 -*-

import json
from math import pi, radians

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jmm.core import ConfigError, ValidationError, DataError
from jmm.profiles import Primitive
from jmm.kinematics import (JointSpec, RobotModel, JointMap, PrimitiveMapping, parse_robot, builtin_robot,
                            get_robot, clamp_to_limits, map_primitives, forward_kinematics)

PLANAR_DEF = {
    'name':   'planar-2',
    'joints': [{'name': 'j1', 'axis': [0, 0, 1], 'offset': [0, 0, 0], 'limits_deg': [-180, 180]},
               {'name': 'j2', 'axis': [0, 0, 1], 'offset': [1, 0, 0], 'limits_deg': [-180, 180]}],
    'ee_offset': [1, 0, 0],
    'mapping': {'shoulder_flexion': {'joint': 0}, 'elbow_flexion': {'joint': 1, 'sign': -1}}
}

@pytest.fixture
def planar():
    return parse_robot(PLANAR_DEF)

############
# Loading  #
############

def test_builtin_robots():
    humanoid, h_map = builtin_robot('humanoid-arm')
    assert humanoid.dof == 4
    assert set(h_map.primitives) == set(Primitive)
    arm, a_map = builtin_robot('arm-5dof')
    assert arm.dof == 5
    assert a_map[Primitive.ELBOW_FLEXION].joint == 3
    assert arm.rest_angles[1] == pytest.approx(radians(20.0))
    assert arm.upper_limits[0] == pytest.approx(radians(169.0))

def test_unknown_robot():
    with pytest.raises(ConfigError):
        builtin_robot('nao')
    with pytest.raises(ConfigError):
        get_robot('/no/such/robot.json')

def test_robot_from_file(tmp_path):
    path = tmp_path / 'planar.json'
    path.write_text(json.dumps(PLANAR_DEF))
    robot, mapping = get_robot(str(path))
    assert robot.name == 'planar-2'
    assert mapping[Primitive.ELBOW_FLEXION] == JointMap(1, -1, 1.0)

def test_robot_file_not_json(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"name": ')
    with pytest.raises(ConfigError):
        get_robot(str(path))

@pytest.mark.parametrize('change', [
    lambda d: d['joints'][0].update(axis=[0, 0, 2]),
    lambda d: d['joints'][0].update(limits_deg=[10, -10]),
    lambda d: d['joints'][1].update(name='j1'),
    lambda d: d['mapping'].update(forearm_rotation={'joint': 1}),
    lambda d: d['mapping'].update(forearm_rotation={'joint': 5}),
    lambda d: d['mapping']['elbow_flexion'].update(sign=2),
    lambda d: d['mapping']['elbow_flexion'].update(rc=0.0),
    lambda d: d.pop('joints'),
])
def test_bad_robot_definition(change):
    data = json.loads(json.dumps(PLANAR_DEF))
    change(data)
    with pytest.raises(ConfigError):
        parse_robot(data)

def test_joint_spec_validation():
    with pytest.raises(ValidationError):
        JointSpec('j', (1.0, 0.0, 0.0), (0.0, 0.0, 0.0), (-1.0, 1.0), rest=2.0)
    with pytest.raises(ValidationError):
        RobotModel('empty', ())

######
# FK #
######

def test_fk_planar(planar):
    robot, _ = planar
    assert forward_kinematics(robot, [0.0, 0.0]) == pytest.approx([2.0, 0.0, 0.0], abs=1e-12)
    assert forward_kinematics(robot, [pi / 2, 0.0]) == pytest.approx([0.0, 2.0, 0.0], abs=1e-12)
    assert forward_kinematics(robot, [0.0, pi / 2]) == pytest.approx([1.0, 1.0, 0.0], abs=1e-12)

def test_fk_humanoid_zero_pose():
    robot, _ = builtin_robot('humanoid-arm')
    assert forward_kinematics(robot, np.zeros(4)) == pytest.approx([0.0, 0.0, -0.38], abs=1e-12)

def test_fk_humanoid_elbow_raises_forearm():
    robot, _ = builtin_robot('humanoid-arm')
    ee = forward_kinematics(robot, [0.0, 0.0, pi / 2, 0.0])
    # forearm swings forward (+x) when the elbow flexes
    assert ee == pytest.approx([0.20, 0.0, -0.18], abs=1e-12)

def test_fk_dimension_mismatch(planar):
    robot, _ = planar
    with pytest.raises(DataError):
        forward_kinematics(robot, [0.0, 0.0, 0.0])

joint_vectors = st.lists(st.floats(min_value=-pi, max_value=pi, allow_nan=False), min_size=5, max_size=5)

@settings(max_examples=50, deadline=None)
@given(q1=joint_vectors, q2=joint_vectors)
def test_fk_lipschitz(q1, q2):
    robot, _ = builtin_robot('arm-5dof')
    dist = np.linalg.norm(forward_kinematics(robot, q1) - forward_kinematics(robot, q2))
    assert dist <= robot.reach * np.sum(np.abs(np.subtract(q1, q2))) + 1e-12

@pytest.mark.parametrize('twist', [-2.5, -0.4, 1.1, 2.9])
def test_fk_last_twist_keeps_tool_point(twist):
    robot, _ = builtin_robot('arm-5dof')
    q = np.array([0.3, 0.2, -0.7, 0.9, 0.0])
    turned = q.copy()
    turned[4] = twist
    assert forward_kinematics(robot, turned) == pytest.approx(forward_kinematics(robot, q), abs=1e-12)

###########
# Mapping #
###########

@settings(max_examples=50, deadline=None)
@given(q=st.lists(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False), min_size=4, max_size=4))
def test_clamp_idempotent(q):
    robot, _ = builtin_robot('humanoid-arm')
    once = clamp_to_limits(robot, q)
    twice = clamp_to_limits(robot, once.q)
    assert np.array_equal(once.q, twice.q)
    assert not twice.clamped.any()
    assert np.all(once.q >= robot.lower_limits) and np.all(once.q <= robot.upper_limits)

def test_clamp_shape(planar):
    robot, _ = planar
    with pytest.raises(DataError):
        clamp_to_limits(robot, [0.0])

def test_map_primitives_sign_and_rest(planar):
    robot, mapping = planar
    cmd = map_primitives(mapping, {Primitive.ELBOW_FLEXION: 0.5}, robot)
    assert cmd.q == pytest.approx([0.0, -0.5])
    assert not cmd.clamped.any()

def test_map_primitives_clamps():
    robot, mapping = builtin_robot('humanoid-arm')
    cmd = map_primitives(mapping, {Primitive.ELBOW_FLEXION: radians(150.0)}, robot)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    assert cmd.q[elbow] == pytest.approx(radians(120.0))
    assert cmd.clamped[elbow]
    assert cmd.clamped.sum() == 1

def test_map_primitives_unmapped():
    robot, _ = builtin_robot('humanoid-arm')
    mapping = PrimitiveMapping({Primitive.SHOULDER_FLEXION: JointMap(0, 1, 1.0)})
    with pytest.raises(ValidationError):
        map_primitives(mapping, {Primitive.ELBOW_FLEXION: 0.1}, robot)

def test_map_adduction_moves_only_base_joint():
    robot, mapping = builtin_robot('arm-5dof')
    angles = {Primitive.SHOULDER_FLEXION: 0.4, Primitive.ELBOW_FLEXION: 0.6, Primitive.FOREARM_ROTATION: 0.2,
              Primitive.SHOULDER_ADDUCTION: 0.0}
    before = map_primitives(mapping, angles, robot).q
    after = map_primitives(mapping, angles | {Primitive.SHOULDER_ADDUCTION: 0.8}, robot).q
    moved = np.flatnonzero(after != before)
    assert moved.tolist() == [0]
    assert after[0] == pytest.approx(0.8)
