# -*- coding: utf-8 -*-

import os.path
import json
from typing import NamedTuple
from dataclasses import dataclass
from math import isfinite, radians

import numpy as np
from numpy.typing import ArrayLike
from scipy.spatial.transform import Rotation

from .core import cfg, log, ConfigFile, CONFIG_DIR, ConfigError, ValidationError, DataError
from .profiles import Primitive

ROBOTS_KEY     = 'robots'
DFLT_ROBOT_DIR = 'robots'
DFLT_BUILTIN   = ['humanoid-arm', 'arm-5dof']
AXIS_TOL       = 1e-9

Vec3 = tuple[float, float, float]

#############
# JointSpec #
#############

@dataclass(frozen=True)
class JointSpec:
    """Single revolute joint of a serial chain; `axis` is expressed in the parent
    frame, `offset` (meters) is the translation from the parent joint, `limits`
    and `rest` are in radians
    """
    name:   str
    axis:   Vec3
    offset: Vec3
    limits: tuple[float, float]
    rest:   float = 0.0

    def __post_init__(self):
        if len(self.axis) != 3 or len(self.offset) != 3:
            raise ValidationError(f"Joint '{self.name}': axis and offset must be 3-vectors")
        if abs(np.linalg.norm(self.axis) - 1.0) > AXIS_TOL:
            raise ValidationError(f"Joint '{self.name}': axis {self.axis} is not a unit vector")
        lo, hi = self.limits
        if not lo < hi:
            raise ValidationError(f"Joint '{self.name}': bad limits {self.limits}")
        if not lo <= self.rest <= hi:
            raise ValidationError(f"Joint '{self.name}': rest angle {self.rest} outside limits")

##############
# RobotModel #
##############

@dataclass(frozen=True)
class RobotModel:
    """Serial-chain arm description (tool point given by `ee_offset` from the
    last joint)
    """
    name:      str
    joints:    tuple[JointSpec, ...]
    ee_offset: Vec3 = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.joints:
            raise ValidationError(f"Robot '{self.name}' needs at least one joint")
        names = [j.name for j in self.joints]
        if len(set(names)) != len(names):
            raise ValidationError(f"Robot '{self.name}' has duplicate joint names: {names}")
        if len(self.ee_offset) != 3:
            raise ValidationError(f"Robot '{self.name}': ee_offset must be a 3-vector")

    @property
    def dof(self) -> int:
        return len(self.joints)

    @property
    def joint_names(self) -> list[str]:
        return [j.name for j in self.joints]

    @property
    def rest_angles(self) -> np.ndarray:
        return np.array([j.rest for j in self.joints])

    @property
    def lower_limits(self) -> np.ndarray:
        return np.array([j.limits[0] for j in self.joints])

    @property
    def upper_limits(self) -> np.ndarray:
        return np.array([j.limits[1] for j in self.joints])

    @property
    def reach(self) -> float:
        """Sum of link lengths (used as a Lipschitz bound for FK)
        """
        return float(sum(np.linalg.norm(j.offset) for j in self.joints) + np.linalg.norm(self.ee_offset))

####################
# PrimitiveMapping #
####################

class JointMap(NamedTuple):
    joint: int    # index into `RobotModel.joints`
    sign:  int    # +1 or -1
    rc:    float  # robot constant for the primitive on this joint

@dataclass(frozen=True)
class PrimitiveMapping:
    """Assignment of motion primitives to robot joints; primitives the robot cannot
    express are simply left out
    """
    entries: dict[Primitive, JointMap]

    def __contains__(self, prim: Primitive) -> bool:
        return prim in self.entries

    def __getitem__(self, prim: Primitive) -> JointMap:
        return self.entries[prim]

    @property
    def primitives(self) -> list[Primitive]:
        return list(self.entries)

    def validate(self, robot: RobotModel) -> None:
        """:raises ConfigError: if the mapping is not consistent with `robot`
        """
        seen = set()
        for prim, jmap in self.entries.items():
            if not 0 <= jmap.joint < robot.dof:
                raise ConfigError(f"'{prim.value}' mapped to invalid joint index {jmap.joint}")
            if jmap.joint in seen:
                raise ConfigError(f"Joint index {jmap.joint} mapped more than once")
            if jmap.sign not in (1, -1):
                raise ConfigError(f"'{prim.value}': sign must be +1 or -1, got {jmap.sign}")
            if not isfinite(jmap.rc) or jmap.rc <= 0.0:
                raise ConfigError(f"'{prim.value}': robot constant must be positive, got {jmap.rc}")
            seen.add(jmap.joint)

class JointCommand(NamedTuple):
    q:       np.ndarray  # joint angles (radians), after clamping
    clamped: np.ndarray  # per-joint flag, `True` if the limit was applied

##############
# Robot Defs #
##############

def _vec3(value, what: str) -> Vec3:
    try:
        vec = tuple(float(x) for x in value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Bad {what}: {value}") from e
    if len(vec) != 3:
        raise ConfigError(f"Bad {what}, expected 3-vector: {value}")
    return vec

def parse_robot(data: dict) -> tuple[RobotModel, PrimitiveMapping]:
    """Build robot model and mapping from a robot definition (see `load_robot` for
    the layout); degrees in the definition, radians in the returned objects

    :raises ConfigError: if the definition is malformed or inconsistent
    """
    try:
        joints = []
        for jdata in data['joints']:
            lo, hi = jdata['limits_deg']
            joints.append(JointSpec(name=str(jdata['name']),
                                    axis=_vec3(jdata['axis'], 'axis'),
                                    offset=_vec3(jdata['offset'], 'offset'),
                                    limits=(radians(lo), radians(hi)),
                                    rest=radians(jdata.get('rest_deg', 0.0))))
        robot = RobotModel(name=str(data['name']),
                           joints=tuple(joints),
                           ee_offset=_vec3(data.get('ee_offset', [0.0, 0.0, 0.0]), 'ee_offset'))
        entries = {}
        for prim_name, mdata in (data.get('mapping') or {}).items():
            entries[Primitive(prim_name)] = JointMap(int(mdata['joint']),
                                                     int(mdata.get('sign', 1)),
                                                     float(mdata.get('rc', 1.0)))
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise ConfigError(f"Bad robot definition: {e!r}") from e

    mapping = PrimitiveMapping(entries)
    mapping.validate(robot)
    return robot, mapping

def load_robot(path: str) -> tuple[RobotModel, PrimitiveMapping]:
    """Load a robot definition file (JSON):

      {"name", "joints": [{"name", "axis": [x,y,z], "offset": [x,y,z],
                           "limits_deg": [lo, hi], "rest_deg": r}, ...],
       "ee_offset": [x,y,z],
       "mapping": {"shoulder_flexion": {"joint": i, "sign": 1, "rc": 1.0}, ...}}

    :raises ConfigError: if the file cannot be read or parsed
    """
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not load robot definition '{path}': {e}") from e
    robot, mapping = parse_robot(data)
    log.debug(f"Loaded robot '{robot.name}' ({robot.dof} joints) from '{path}'")
    return robot, mapping

def _robot_sources(profile: str = None) -> tuple[str, list[str]]:
    """(robot_dir, builtin names) from the `robots` config section

    :raises ConfigError: if `profile` is not loaded
    """
    try:
        robots_cfg = cfg.config(ROBOTS_KEY, profile)
    except RuntimeError as e:
        raise ConfigError(str(e)) from e
    return robots_cfg.get('robot_dir') or DFLT_ROBOT_DIR, robots_cfg.get('builtin') or DFLT_BUILTIN

def builtin_robot(name: str, profile: str = None) -> tuple[RobotModel, PrimitiveMapping]:
    """Return one of the shipped robot definitions ("humanoid-arm" or "arm-5dof",
    or others listed for the config profile)

    :raises ConfigError: if `name` is not a builtin robot
    """
    robot_dir, builtin = _robot_sources(profile)
    if name not in builtin:
        raise ConfigError(f"Unknown robot '{name}' (builtin: {', '.join(builtin)})")
    return load_robot(ConfigFile(f"{name}.json", os.path.join(CONFIG_DIR, robot_dir)))

def get_robot(source: str, profile: str = None) -> tuple[RobotModel, PrimitiveMapping]:
    """Resolve a robot source, which is either a builtin name or a file path
    """
    if source in _robot_sources(profile)[1]:
        return builtin_robot(source, profile)
    if os.path.exists(source):
        return load_robot(source)
    raise ConfigError(f"Robot '{source}' is neither builtin nor an existing file")

###########
# Mapping #
###########

def clamp_to_limits(robot: RobotModel, q: ArrayLike) -> JointCommand:
    """Clamp joint angles to the robot limits, flagging each joint that was moved
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (robot.dof,):
        raise DataError(f"Expected {robot.dof} joint angles, got shape {q.shape}")
    q_clamped = np.clip(q, robot.lower_limits, robot.upper_limits)
    return JointCommand(q_clamped, q_clamped != q)

def map_primitives(m: PrimitiveMapping, angles: dict[Primitive, float], robot: RobotModel) -> JointCommand:
    """Turn primitive angles (radians) into a joint-angle vector: mapped joints get
    `sign * angle`, unmapped joints hold their rest angle, and everything is
    clamped to the joint limits (clamping is reported, not rejected)

    :raises ValidationError: if a primitive in `angles` is not in the mapping
    """
    q = robot.rest_angles
    for prim, angle in angles.items():
        if prim not in m:
            raise ValidationError(f"Primitive '{prim.value}' is not mapped on robot '{robot.name}'")
        jmap = m[prim]
        q[jmap.joint] = jmap.sign * angle
    cmd = clamp_to_limits(robot, q)
    if cmd.clamped.any():
        names = [n for n, c in zip(robot.joint_names, cmd.clamped) if c]
        log.debug(f"Clamped joints on '{robot.name}': {names}")
    return cmd

######
# FK #
######

def forward_kinematics(robot: RobotModel, q: ArrayLike) -> np.ndarray:
    """End-effector position (meters) for joint angles `q` (radians): for each
    joint in order, translate by its offset then rotate by q_i about its axis;
    finally translate by `ee_offset`

    :raises DataError: if `q` does not match the number of joints
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (robot.dof,):
        raise DataError(f"Expected {robot.dof} joint angles, got shape {q.shape}")
    rotvecs = np.array([j.axis for j in robot.joints]) * q[:, np.newaxis]
    rots = Rotation.from_rotvec(rotvecs).as_matrix()

    pos = np.zeros(3)
    frame = np.eye(3)
    for joint, rot in zip(robot.joints, rots):
        pos = pos + frame @ np.asarray(joint.offset)
        frame = frame @ rot
    return pos + frame @ np.asarray(robot.ee_offset)
