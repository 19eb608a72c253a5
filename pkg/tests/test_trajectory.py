# -*- coding: utf-8 -*-

from math import radians

import numpy as np
import pytest

from jmm.core import ValidationError, DataError
from jmm.profiles import Primitive, ElbowVariant, EvalMode
from jmm.kinematics import builtin_robot, map_primitives
from jmm.trajectory import (HandoverSpec, Trajectory, sample_times, generate_jmm, generate_ljst, metrics,
                            compare, write_csv, read_csv)

START = {Primitive.SHOULDER_FLEXION:   radians(0.0),
         Primitive.SHOULDER_ADDUCTION: radians(0.0),
         Primitive.ELBOW_FLEXION:      radians(30.0),
         Primitive.FOREARM_ROTATION:   radians(0.0)}
END   = {Primitive.SHOULDER_FLEXION:   radians(50.0),
         Primitive.SHOULDER_ADDUCTION: radians(15.0),
         Primitive.ELBOW_FLEXION:      radians(50.0),
         Primitive.FOREARM_ROTATION:   radians(45.0)}

ROBOTS = ['humanoid-arm', 'arm-5dof']

def make_spec(**kwargs) -> HandoverSpec:
    params = {'start': START, 'end': END, 'duration': 1.2} | kwargs
    return HandoverSpec(**params)

################
# HandoverSpec #
################

def test_spec_validation():
    with pytest.raises(ValidationError):
        make_spec(duration=0.0)
    with pytest.raises(ValidationError):
        make_spec(end={Primitive.ELBOW_FLEXION: 1.0})
    with pytest.raises(ValidationError):
        make_spec(windows={Primitive.ELBOW_FLEXION: (0.5, 2.0)})
    with pytest.raises(ValidationError):
        HandoverSpec(start={}, end={}, duration=1.0)

################
# Sample Times #
################

def test_sample_times():
    t = sample_times(1.2, 100.0)
    assert len(t) == 121
    assert t[0] == 0.0
    assert t[-1] == 1.2
    assert np.diff(t) == pytest.approx(np.full(120, 0.01))

def test_rate_below_minimum():
    with pytest.raises(ValidationError):
        sample_times(1.2, 5.0)

def test_rate_minimum_override():
    with pytest.raises(ValidationError):
        sample_times(1.2, 50.0, min_rate=100.0)
    assert len(sample_times(1.2, 5.0, min_rate=1.0)) == 7

def test_too_short_for_two_frames():
    with pytest.raises(ValidationError):
        sample_times(0.04, 10.0)
    robot, mapping = builtin_robot('humanoid-arm')
    with pytest.raises(ValidationError):
        generate_jmm(make_spec(duration=0.04), robot, mapping, 10.0)
    with pytest.raises(ValidationError):
        generate_ljst(make_spec(duration=0.04), robot, mapping, 10.0)

##############
# Generation #
##############

@pytest.mark.parametrize('robot_name', ROBOTS)
def test_jmm_hits_endpoints(robot_name):
    robot, mapping = builtin_robot(robot_name)
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    assert len(traj) == 121
    assert traj.model == 'jmm'
    assert traj.q[0] == pytest.approx(map_primitives(mapping, START, robot).q, abs=1e-9)
    assert traj.q[-1] == pytest.approx(map_primitives(mapping, END, robot).q, abs=1e-9)
    assert traj.ee.shape == (121, 3)
    assert traj.joint_names == tuple(robot.joint_names)

def test_trajectory_arrays_read_only():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    with pytest.raises(ValueError):
        traj.q[0, 0] = 1.0

def test_frames():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(duration=0.5), robot, mapping, 20.0)
    frames = traj.frames
    assert len(frames) == 11
    assert frames[-1].t == pytest.approx(0.5)
    assert np.array_equal(frames[3].q, traj.q[3])

def test_rate_doubling_shares_frames():
    robot, mapping = builtin_robot('humanoid-arm')
    slow = generate_jmm(make_spec(), robot, mapping, 100.0)
    fast = generate_jmm(make_spec(), robot, mapping, 200.0)
    assert len(fast) == 2 * len(slow) - 1
    assert np.array_equal(fast.t[::2], slow.t)
    np.testing.assert_allclose(fast.q[::2], slow.q, rtol=0.0, atol=1e-12)

def test_unmapped_primitive():
    robot, mapping = builtin_robot('humanoid-arm')
    from jmm.kinematics import PrimitiveMapping
    partial = PrimitiveMapping({Primitive.SHOULDER_FLEXION: mapping[Primitive.SHOULDER_FLEXION]})
    with pytest.raises(ValidationError):
        generate_jmm(make_spec(), robot, partial, 100.0)

def test_window_holds_outside():
    robot, mapping = builtin_robot('humanoid-arm')
    spec = make_spec(windows={Primitive.ELBOW_FLEXION: (0.4, 1.0)})
    traj = generate_jmm(spec, robot, mapping, 100.0)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    before = traj.t <= 0.4
    after = traj.t >= 1.0
    assert traj.q[before, elbow] == pytest.approx(np.full(before.sum(), radians(30.0)), abs=1e-9)
    assert traj.q[after, elbow] == pytest.approx(np.full(after.sum(), radians(50.0)), abs=1e-9)

def test_literal_mode_elbow_offset():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(mode=EvalMode.LITERAL), robot, mapping, 100.0)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    # j0 + (j0 - je) * f(1), with f(1) = 0.3 for V1
    assert traj.q[-1, elbow] == pytest.approx(radians(30.0 + (30.0 - 50.0) * 0.3), abs=1e-9)

def test_variant_changes_interior_only():
    robot, mapping = builtin_robot('humanoid-arm')
    v1 = generate_jmm(make_spec(), robot, mapping, 100.0)
    v2 = generate_jmm(make_spec(elbow_variant=ElbowVariant.V2), robot, mapping, 100.0)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    assert v1.q[-1] == pytest.approx(v2.q[-1], abs=1e-9)
    assert np.max(np.abs(v1.q[:, elbow] - v2.q[:, elbow])) > 1e-3

def test_v1_elbow_overshoots_and_returns():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    elbow = traj.q[:, mapping[Primitive.ELBOW_FLEXION].joint]
    steps = np.diff(elbow)
    assert np.any(steps > 0.0) and np.any(steps < 0.0)
    # farthest from the start is past the end angle, a little after mid-motion
    i_ext = int(np.argmax(np.abs(elbow - elbow[0])))
    assert 0 < i_ext < len(traj) - 1
    assert abs(elbow[i_ext] - elbow[0]) > abs(elbow[-1] - elbow[0])
    assert 0.5 <= traj.t[i_ext] / traj.duration <= 0.7

def test_clamping_reported():
    robot, mapping = builtin_robot('humanoid-arm')
    end = END | {Primitive.ELBOW_FLEXION: radians(150.0)}
    traj = generate_jmm(make_spec(end=end), robot, mapping, 100.0)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    assert traj.q[:, elbow].max() == pytest.approx(radians(120.0))
    assert traj.clamped[:, elbow].any()

@pytest.mark.parametrize('robot_name', ROBOTS)
def test_ljst_is_linear(robot_name):
    robot, mapping = builtin_robot(robot_name)
    traj = generate_ljst(make_spec(), robot, mapping, 100.0)
    for j in range(traj.dof):
        coefs = np.polyfit(traj.t, traj.q[:, j], 1)
        resid = traj.q[:, j] - np.polyval(coefs, traj.t)
        assert np.max(np.abs(resid)) <= 1e-9

###########
# Metrics #
###########

def test_metrics_single_linear_joint():
    robot, mapping = builtin_robot('humanoid-arm')
    spec = HandoverSpec(start={Primitive.SHOULDER_FLEXION: 0.0},
                        end={Primitive.SHOULDER_FLEXION: 0.5},
                        duration=1.2)
    traj = generate_ljst(spec, robot, mapping, 100.0)
    rep = metrics(traj)
    joint = mapping[Primitive.SHOULDER_FLEXION].joint
    assert rep.max_angular_velocity[joint] == pytest.approx(0.5 / 1.2, abs=1e-6)
    others = [j for j in range(robot.dof) if j != joint]
    assert np.all(rep.max_angular_velocity[others] == 0.0)
    assert np.all(rep.mean_squared_jerk < 1e-6)
    assert np.all(rep.endpoint_error <= 1e-12)

def test_metrics_jmm_smoother_than_nothing():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    rep = metrics(traj)
    assert rep.ee_path_length > 0.0
    assert np.all(rep.mean_squared_jerk >= 0.0)
    assert np.all(rep.endpoint_error <= 1e-9)

def test_metrics_too_few_frames():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(duration=0.1), robot, mapping, 30.0)
    assert len(traj) == 4
    with pytest.raises(ValidationError):
        metrics(traj)

def test_metrics_cubic_jerk():
    t = np.arange(101) / 100.0
    traj = Trajectory(rate=100.0, joint_names=('j1',), t=t, q=(t ** 3)[:, np.newaxis], ee=np.zeros((101, 3)))
    rep = metrics(traj)
    assert rep.mean_squared_jerk[0] == pytest.approx(36.0, rel=0.02)
    assert rep.ee_path_length == 0.0
    assert rep.max_angular_velocity[0] == pytest.approx(3.0, rel=0.02)

def test_metrics_constant_trajectory():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(end=START), robot, mapping, 100.0)
    rep = metrics(traj)
    assert np.all(rep.mean_squared_jerk == 0.0)
    assert np.all(rep.max_angular_velocity == 0.0)
    assert np.all(rep.endpoint_error == 0.0)
    assert rep.ee_path_length == 0.0

def test_metrics_min_frames_override():
    robot, mapping = builtin_robot('humanoid-arm')
    traj = generate_jmm(make_spec(duration=0.1), robot, mapping, 100.0)
    assert len(traj) == 11
    metrics(traj)
    with pytest.raises(ValidationError):
        metrics(traj, min_frames=20)

##############
# Comparison #
##############

def test_compare_self():
    robot, mapping = builtin_robot('arm-5dof')
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    comp = compare(traj, traj)
    assert np.all(comp.max_difference == 0.0)
    assert np.all(comp.endpoint_difference == 0.0)

@pytest.mark.parametrize('robot_name', ROBOTS)
def test_compare_jmm_vs_ljst(robot_name):
    robot, mapping = builtin_robot(robot_name)
    jmm = generate_jmm(make_spec(), robot, mapping, 100.0)
    ljst = generate_ljst(make_spec(), robot, mapping, 100.0)
    comp = compare(jmm, ljst)
    elbow = mapping[Primitive.ELBOW_FLEXION].joint
    assert np.all(comp.endpoint_difference <= 1e-9)
    assert comp.max_difference[elbow] > 0.0

def test_compare_different_rates():
    robot, mapping = builtin_robot('humanoid-arm')
    a = generate_jmm(make_spec(), robot, mapping, 100.0)
    b = generate_jmm(make_spec(), robot, mapping, 50.0)
    comp = compare(a, b)
    # linear interpolation of the coarser trajectory only
    assert np.all(comp.max_difference < radians(1.0))

def test_compare_dof_mismatch():
    humanoid, h_map = builtin_robot('humanoid-arm')
    arm, a_map = builtin_robot('arm-5dof')
    with pytest.raises(DataError):
        compare(generate_ljst(make_spec(), humanoid, h_map, 100.0),
                generate_ljst(make_spec(), arm, a_map, 100.0))

#######
# CSV #
#######

def test_csv_roundtrip(tmp_path):
    robot, mapping = builtin_robot('arm-5dof')
    traj = generate_jmm(make_spec(), robot, mapping, 100.0)
    path = tmp_path / 'traj.csv'
    write_csv(traj, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == 't,' + ','.join(robot.joint_names) + ',ee_x,ee_y,ee_z'
    assert len(lines) == 122

    back = read_csv(str(path))
    assert back.joint_names == traj.joint_names
    assert back.t == pytest.approx(traj.t, abs=1e-6)
    assert back.q == pytest.approx(traj.q, abs=1e-7)
    assert back.ee == pytest.approx(traj.ee, abs=1e-6)
    assert back.model == 'file'

def test_csv_bad_header(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('time,a,b\n0,1,2\n0.1,1,2\n')
    with pytest.raises(ValidationError):
        read_csv(str(path))

def test_csv_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        read_csv(str(tmp_path / 'nope.csv'))
