# -*- coding: utf-8 -*-

from typing import NamedTuple
from dataclasses import dataclass, field
from math import isfinite

import numpy as np
import pandas as pd

from .core import cfg, log, ConfigError, ValidationError, DataError
from .profiles import (Primitive, ElbowVariant, ForearmDirection, EvalMode, MotionPrimitive,
                       ProfileParams, ProfileSet, evaluate_primitive)
from .kinematics import RobotModel, PrimitiveMapping, map_primitives, forward_kinematics

TRAJ_KEY        = 'trajectory'
DFLT_MIN_RATE   = 10.0
DFLT_MIN_FRAMES = 5
JERK_STENCIL    = 5  # samples spanned by the third-order central difference

SPACING_TOL = 1e-5  # seconds, loose enough for the 6-decimal CSV format
EE_COLS     = ['ee_x', 'ee_y', 'ee_z']
TIME_COL    = 't'
CSV_FLOAT   = '%.6f'

################
# HandoverSpec #
################

@dataclass(frozen=True)
class HandoverSpec:
    """Carry-phase request, in primitive space (angles in radians).  `windows`
    optionally restricts a primitive to [t_start, t_end] within the duration
    (sequential execution); primitives without a window span the full duration.
    """
    start:             dict[Primitive, float]
    end:               dict[Primitive, float]
    duration:          float
    elbow_variant:     ElbowVariant     = ElbowVariant.V1
    forearm_direction: ForearmDirection = ForearmDirection.SUPINATION
    mode:              EvalMode         = EvalMode.ANCHORED
    windows:           dict[Primitive, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if not isfinite(self.duration) or self.duration <= 0.0:
            raise ValidationError(f"Duration must be positive, got {self.duration}")
        if set(self.start) != set(self.end):
            raise ValidationError("Start and end poses must cover the same primitives")
        if not self.start:
            raise ValidationError("Handover needs at least one primitive")
        for prim, (t0, t1) in self.windows.items():
            if prim not in self.start:
                raise ValidationError(f"Window given for unused primitive '{prim.value}'")
            if not 0.0 <= t0 < t1 <= self.duration:
                raise ValidationError(f"Bad window [{t0}, {t1}] for '{prim.value}'")

    @property
    def primitives(self) -> list[Primitive]:
        return list(self.start)

    def motion_primitive(self, kind: Primitive) -> MotionPrimitive:
        if kind == Primitive.ELBOW_FLEXION:
            return MotionPrimitive(kind, variant=self.elbow_variant)
        if kind == Primitive.FOREARM_ROTATION:
            return MotionPrimitive(kind, direction=self.forearm_direction)
        return MotionPrimitive(kind)

    def window(self, kind: Primitive) -> tuple[float, float]:
        return self.windows.get(kind, (0.0, self.duration))

##############
# Trajectory #
##############

class Frame(NamedTuple):
    t:  float       # seconds
    q:  np.ndarray  # joint angles (radians)
    ee: np.ndarray  # end-effector position (meters)

@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled joint-space trajectory, uniformly spaced in time from 0 to the
    duration (both included).  Arrays are read-only once constructed.

    `target_start`/`target_end` are the commanded joint vectors; if absent (e.g.
    for trajectories read back from file), the first and last frames stand in.
    """
    rate:         float
    joint_names:  tuple[str, ...]
    t:            np.ndarray  # (n,)
    q:            np.ndarray  # (n, dof)
    ee:           np.ndarray  # (n, 3)
    model:        str = ''
    clamped:      np.ndarray | None = None  # (n, dof)
    target_start: np.ndarray | None = None
    target_end:   np.ndarray | None = None

    def __post_init__(self):
        for name in ('t', 'q', 'ee', 'clamped', 'target_start', 'target_end'):
            value = getattr(self, name)
            if value is None:
                continue
            arr = np.array(value, dtype=bool if name == 'clamped' else float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        n = len(self.t)
        if n < 2:
            raise ValidationError("Trajectory needs at least two frames")
        if self.q.shape != (n, len(self.joint_names)) or self.ee.shape != (n, 3):
            raise ValidationError(f"Inconsistent trajectory shapes: t {self.t.shape}, "
                                  f"q {self.q.shape}, ee {self.ee.shape}")
        if self.t[0] != 0.0:
            raise ValidationError(f"First frame must be at t=0, got {self.t[0]}")
        dt = np.diff(self.t)
        if np.any(dt <= 0.0):
            raise ValidationError("Frame times must be strictly increasing")
        if np.max(np.abs(dt - 1.0 / self.rate)) > SPACING_TOL:
            raise ValidationError(f"Frame spacing is not uniform at rate {self.rate}")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def dof(self) -> int:
        return len(self.joint_names)

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    @property
    def frames(self) -> list[Frame]:
        return [Frame(float(t), q, ee) for t, q, ee in zip(self.t, self.q, self.ee)]

    @property
    def start_target(self) -> np.ndarray:
        return self.q[0] if self.target_start is None else self.target_start

    @property
    def end_target(self) -> np.ndarray:
        return self.q[-1] if self.target_end is None else self.target_end

##############
# Generators #
##############

def trajectory_setting(key: str, dflt, profile: str = None):
    """Value from the `trajectory` config section, looked up at call time (files
    loaded after import, and named profiles, are honored)

    :raises ConfigError: if `profile` is not loaded
    """
    try:
        return cfg.config(TRAJ_KEY, profile).get(key) or dflt
    except RuntimeError as e:
        raise ConfigError(str(e)) from e

def sample_times(duration: float, rate: float, min_rate: float = None) -> np.ndarray:
    """Sample times including both endpoints; the frame count is fixed to
    round(duration * rate) + 1 and the spacing adjusted to fit

    :raises ValidationError: if the rate is below `min_rate` (configured minimum
                             if not given), or there would be fewer than two frames
    """
    if min_rate is None:
        min_rate = trajectory_setting('min_rate', DFLT_MIN_RATE)
    if not isfinite(rate) or rate < min_rate:
        raise ValidationError(f"Rate must be at least {min_rate} Hz, got {rate}")
    if not isfinite(duration) or duration <= 0.0:
        raise ValidationError(f"Duration must be positive, got {duration}")
    nframes = int(round(duration * rate)) + 1
    if nframes < 2:
        raise ValidationError(f"Duration {duration} s at {rate} Hz gives fewer than two frames")
    # computed as duration * i / (n - 1) so that the last sample is exactly `duration`
    return duration * np.arange(nframes) / (nframes - 1)

def _check_mapped(spec: HandoverSpec, robot: RobotModel, mapping: PrimitiveMapping) -> None:
    missing = [p.value for p in spec.primitives if p not in mapping]
    if missing:
        raise ValidationError(f"Primitives not mapped on robot '{robot.name}': {missing}")

def _build(model: str, t: np.ndarray, qs: list, clamps: list, robot: RobotModel,
           q_start: np.ndarray, q_end: np.ndarray) -> Trajectory:
    ee = [forward_kinematics(robot, q) for q in qs]
    return Trajectory(rate=(len(t) - 1) / t[-1],
                      joint_names=tuple(robot.joint_names),
                      t=t,
                      q=np.array(qs),
                      ee=np.array(ee),
                      model=model,
                      clamped=np.array(clamps),
                      target_start=q_start,
                      target_end=q_end)

def generate_jmm(spec: HandoverSpec, robot: RobotModel, mapping: PrimitiveMapping, rate: float,
                 profiles: ProfileSet = None, min_rate: float = None) -> Trajectory:
    """Joint motion model trajectory: every primitive follows its own profile
    (in parallel, each over its window), then is mapped onto the robot joints
    """
    _check_mapped(spec, robot, mapping)
    t = sample_times(spec.duration, rate, min_rate)

    angles = {}
    for kind in spec.primitives:
        t0, t1 = spec.window(kind)
        params = ProfileParams(j0=spec.start[kind],
                               je=spec.end[kind],
                               te=t1 - t0,
                               rc=mapping[kind].rc,
                               mode=spec.mode)
        # outside of the window the primitive holds its first/last value
        local_t = np.clip(t - t0, 0.0, t1 - t0)
        angles[kind] = evaluate_primitive(spec.motion_primitive(kind), params, local_t, profiles)

    qs, clamps = [], []
    for i in range(len(t)):
        cmd = map_primitives(mapping, {k: float(v[i]) for k, v in angles.items()}, robot)
        qs.append(cmd.q)
        clamps.append(cmd.clamped)
    nclamped = int(np.any(clamps, axis=0).sum())
    if nclamped:
        log.info(f"JMM on '{robot.name}': {nclamped} joint(s) hit their limits")

    q_start = map_primitives(mapping, spec.start, robot).q
    q_end   = map_primitives(mapping, spec.end, robot).q
    log.debug(f"Generated JMM trajectory, {len(t)} frames, variant {spec.elbow_variant.value}, "
              f"mode {spec.mode.value}")
    return _build('jmm', t, qs, clamps, robot, q_start, q_end)

def generate_ljst(spec: HandoverSpec, robot: RobotModel, mapping: PrimitiveMapping,
                  rate: float, min_rate: float = None) -> Trajectory:
    """Linear joint space baseline: every joint interpolates linearly from its
    start to its end angle over the full duration (windows do not apply)
    """
    _check_mapped(spec, robot, mapping)
    t = sample_times(spec.duration, rate, min_rate)

    start = map_primitives(mapping, spec.start, robot)
    end   = map_primitives(mapping, spec.end, robot)
    s = t / spec.duration
    q = start.q + (end.q - start.q) * s[:, np.newaxis]
    clamps = [start.clamped | end.clamped] * len(t)
    log.debug(f"Generated LJST trajectory, {len(t)} frames")
    return _build('ljst', t, list(q), clamps, robot, start.q, end.q)

###########
# Metrics #
###########

class MetricsReport(NamedTuple):
    mean_squared_jerk:    np.ndarray  # per joint, rad^2/s^6
    ee_path_length:       float       # meters
    max_angular_velocity: np.ndarray  # per joint, rad/s
    endpoint_error:       np.ndarray  # per joint, radians

def metrics(traj: Trajectory, min_frames: int = None) -> MetricsReport:
    """Smoothness and accuracy figures for a trajectory: jerk by third-order
    central differences, velocity by first differences

    :raises ValidationError: if there are fewer than `min_frames` frames (never
                             below the jerk stencil length)
    """
    if min_frames is None:
        min_frames = trajectory_setting('min_frames', DFLT_MIN_FRAMES)
    min_frames = max(int(min_frames), JERK_STENCIL)
    n = len(traj)
    if n < min_frames:
        raise ValidationError(f"Need at least {min_frames} frames for metrics, got {n}")
    q = traj.q
    dt = (traj.t[-1] - traj.t[0]) / (n - 1)

    vel  = np.abs(np.diff(q, axis=0)) / dt
    jerk = (q[4:] - 2.0 * q[3:-1] + 2.0 * q[1:-3] - q[:-4]) / (2.0 * dt ** 3)
    path = np.linalg.norm(np.diff(traj.ee, axis=0), axis=1).sum()
    endpoint = np.maximum(np.abs(q[0] - traj.start_target), np.abs(q[-1] - traj.end_target))

    return MetricsReport(mean_squared_jerk=np.mean(jerk ** 2, axis=0),
                         ee_path_length=float(path),
                         max_angular_velocity=vel.max(axis=0),
                         endpoint_error=endpoint)

##############
# Comparison #
##############

class Comparison(NamedTuple):
    joint_names:         tuple[str, ...]
    metrics_a:           MetricsReport
    metrics_b:           MetricsReport
    max_difference:      np.ndarray  # per joint, radians, over the common grid
    endpoint_difference: np.ndarray  # per joint, radians, max over first/last frame

def compare(a: Trajectory, b: Trajectory, min_frames: int = None) -> Comparison:
    """Side-by-side metrics, plus the per-joint maximum angle difference over the
    common time span (both trajectories resampled by linear interpolation onto
    the union of their sample times)

    :raises DataError: if the joint counts differ
    """
    if a.dof != b.dof:
        raise DataError(f"Cannot compare trajectories with {a.dof} and {b.dof} joints")
    t_end = min(a.duration, b.duration)
    grid = np.union1d(a.t[a.t <= t_end], b.t[b.t <= t_end])

    diff = np.zeros(a.dof)
    for j in range(a.dof):
        qa = np.interp(grid, a.t, a.q[:, j])
        qb = np.interp(grid, b.t, b.q[:, j])
        diff[j] = np.max(np.abs(qa - qb))
    endpoint = np.maximum(np.abs(a.q[0] - b.q[0]), np.abs(a.q[-1] - b.q[-1]))

    return Comparison(joint_names=a.joint_names,
                      metrics_a=metrics(a, min_frames),
                      metrics_b=metrics(b, min_frames),
                      max_difference=diff,
                      endpoint_difference=endpoint)

#######
# CSV #
#######

def write_csv(traj: Trajectory, path: str) -> None:
    """Write trajectory as CSV: `t,<joint names...>,ee_x,ee_y,ee_z`, angles in
    degrees, positions in meters, one row per frame
    """
    df = pd.DataFrame(np.degrees(traj.q), columns=list(traj.joint_names))
    df.insert(0, TIME_COL, traj.t)
    for i, col in enumerate(EE_COLS):
        df[col] = traj.ee[:, i]
    df.to_csv(path, index=False, float_format=CSV_FLOAT, lineterminator='\n')
    log.debug(f"Wrote {len(df)} frames to '{path}'")

def read_csv(path: str) -> Trajectory:
    """Read a trajectory written by `write_csv()` (commanded targets are not part
    of the file format)

    :raises ValidationError: if the file is missing or does not match the format
    """
    try:
        df = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Could not read trajectory '{path}': {e}") from e
    cols = list(df.columns)
    if len(cols) < 5 or cols[0] != TIME_COL or cols[-3:] != EE_COLS:
        raise ValidationError(f"Bad trajectory header in '{path}': {cols}")
    if len(df) < 2 or df.isna().any().any():
        raise ValidationError(f"Trajectory '{path}' needs at least two complete rows")
    joint_names = tuple(cols[1:-3])
    t = df[TIME_COL].to_numpy(dtype=float)
    try:
        return Trajectory(rate=(len(t) - 1) / (t[-1] - t[0]),
                          joint_names=joint_names,
                          t=t,
                          q=np.radians(df[list(joint_names)].to_numpy(dtype=float)),
                          ee=df[EE_COLS].to_numpy(dtype=float),
                          model='file')
    except ValidationError as e:
        raise ValidationError(f"Bad trajectory in '{path}': {e}") from e
