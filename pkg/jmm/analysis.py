# -*- coding: utf-8 -*-

import json
from typing import NamedTuple
from dataclasses import dataclass
from enum import Enum
from math import isfinite

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.signal import savgol_filter

from .core import cfg, log, ConfigError, ValidationError, DataError, NumericError
from .profiles import Primitive, ElbowVariant

ANLY_KEY = 'analysis'

DFLT_KEYPOINTS = {'shoulder':       'r_shoulder',
                  'elbow':          'r_elbow',
                  'wrist':          'r_wrist',
                  'hip':            'r_hip',
                  'other_shoulder': 'l_shoulder'}

DEGEN_NORM   = 1e-9
AMPLITUDE_EPS = 1e-12

############
# Settings #
############

class AnalysisSettings(NamedTuple):
    """Analysis parameters from the `analysis` config section; defaults here
    stand in for entries the config leaves out
    """
    keypoints:           dict[str, str]          = DFLT_KEYPOINTS
    lateral_axis:        tuple[float, ...]       = (0.0, 0.0, 1.0)
    track_max_gap:       int                     = 3
    track_radius_factor: float                   = 1.0
    sg_bands:            tuple[tuple, ...]       = ((60.0, 11, 3), (0.0, 5, 2))
    sg_mode:             str                     = 'interp'
    segment:             bool                    = True
    segment_speed_frac:  float                   = 0.05
    segment_min_samples: int                     = 20
    min_peak_speed:      float                   = 1e-3
    norm_samples:        int                     = 101
    variant_u_min_max:   float                   = 0.75
    variant_rebound_min: float                   = 0.10

    @classmethod
    def from_config(cls, profile: str = None) -> 'AnalysisSettings':
        """:raises ConfigError: if `profile` is not loaded, or an entry is malformed
        """
        try:
            anly_cfg = cfg.config(ANLY_KEY, profile)
        except RuntimeError as e:
            raise ConfigError(str(e)) from e
        dflt = cls()
        segment = anly_cfg.get('segment')
        try:
            return cls(keypoints=dflt.keypoints | (anly_cfg.get('keypoints') or {}),
                       lateral_axis=tuple(float(x) for x in anly_cfg.get('lateral_axis') or dflt.lateral_axis),
                       track_max_gap=int(anly_cfg.get('track_max_gap') or dflt.track_max_gap),
                       track_radius_factor=float(anly_cfg.get('track_radius_factor') or dflt.track_radius_factor),
                       sg_bands=tuple((float(f), int(w), int(o))
                                      for f, w, o in anly_cfg.get('sg_bands') or dflt.sg_bands),
                       sg_mode=str(anly_cfg.get('sg_mode') or dflt.sg_mode),
                       segment=dflt.segment if segment is None else bool(segment),
                       segment_speed_frac=float(anly_cfg.get('segment_speed_frac') or dflt.segment_speed_frac),
                       segment_min_samples=int(anly_cfg.get('segment_min_samples') or dflt.segment_min_samples),
                       min_peak_speed=float(anly_cfg.get('min_peak_speed') or dflt.min_peak_speed),
                       norm_samples=int(anly_cfg.get('norm_samples') or dflt.norm_samples),
                       variant_u_min_max=float(anly_cfg.get('variant_u_min_max') or dflt.variant_u_min_max),
                       variant_rebound_min=float(anly_cfg.get('variant_rebound_min') or dflt.variant_rebound_min))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Bad analysis settings: {e}") from e

#############
# Keypoints #
#############

class Keypoint(NamedTuple):
    x:    float
    y:    float
    z:    float | None  # no depth for plain RGB recordings
    conf: float

    @property
    def has_depth(self) -> bool:
        return self.z is not None

    def coords(self) -> np.ndarray:
        return np.array([self.x, self.y] if self.z is None else [self.x, self.y, self.z])

Skeleton = dict[str, Keypoint]

class KeypointFrame(NamedTuple):
    t:         float           # seconds
    skeletons: list[Skeleton]

def _parse_keypoint(value) -> Keypoint:
    """[x, y, conf] or [x, y, z, conf]
    """
    vals = [float(v) for v in value]
    if len(vals) == 3:
        x, y, conf = vals
        z = None
    elif len(vals) == 4:
        x, y, z, conf = vals
    else:
        raise ValueError(f"keypoint needs 3 or 4 values, got {value}")
    if not 0.0 <= conf <= 1.0:
        raise ValueError(f"confidence {conf} outside [0, 1]")
    return Keypoint(x, y, z, conf)

def parse_keypoints(data: dict) -> tuple[float, list[KeypointFrame]]:
    """Parse the keypoint document:

      {"fps": number,
       "frames": [{"t": s, "skeletons": [{"points": {"r_shoulder": [x, y, z?, conf], ...}}]}]}

    :return: tuple of (fps, frames)
    :raises ValidationError: if the document does not follow this layout
    """
    try:
        fps = float(data['fps'])
        frames = []
        for fdata in data['frames']:
            skeletons = []
            for sdata in fdata['skeletons']:
                points = {name: _parse_keypoint(val) for name, val in sdata['points'].items()}
                skeletons.append(points)
            frames.append(KeypointFrame(float(fdata['t']), skeletons))
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"Bad keypoint data: {e!r}") from e
    if not isfinite(fps) or fps <= 0.0:
        raise ValidationError(f"Bad frame rate {fps}")
    if not frames:
        raise ValidationError("Keypoint data has no frames")
    times = np.array([f.t for f in frames])
    if np.any(np.diff(times) <= 0.0):
        raise ValidationError("Keypoint frame times must be strictly increasing")
    return fps, frames

def load_keypoints(path: str) -> tuple[float, list[KeypointFrame]]:
    """Load keypoint JSON file (see `parse_keypoints()` for layout)
    """
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"Could not read keypoints '{path}': {e}") from e
    fps, frames = parse_keypoints(data)
    log.debug(f"Loaded {len(frames)} frames at {fps} fps from '{path}'")
    return fps, frames

############
# Tracking #
############

class TrackSeed(Enum):
    LEFTMOST  = 'leftmost'
    RIGHTMOST = 'rightmost'
    REGION    = 'region'

def centroid(skel: Skeleton) -> np.ndarray:
    """Image-plane centroid of all keypoints of a skeleton
    """
    if not skel:
        raise DataError("Empty skeleton")
    return np.mean([[kp.x, kp.y] for kp in skel.values()], axis=0)

def _torso_length(skel: Skeleton, names: dict[str, str]) -> float | None:
    shoulder = skel.get(names['shoulder'])
    hip = skel.get(names['hip'])
    if not shoulder or not hip:
        return None
    return float(np.hypot(shoulder.x - hip.x, shoulder.y - hip.y))

def track_person(frames: list[KeypointFrame], seed: TrackSeed = TrackSeed.LEFTMOST,
                 region: tuple[float, float, float, float] = None, radius: float = None,
                 max_gap: int = None, settings: AnalysisSettings = None) -> list[KeypointFrame]:
    """Follow one person through a multi-person keypoint sequence.  The seed
    skeleton is picked in the first frame, after which each frame takes the
    skeleton nearest to the last accepted centroid.  Frames with nothing inside
    `radius` are bridged (holding the last skeleton) for up to `max_gap` frames.

    :param region: (x0, y0, x1, y1) box, required for `TrackSeed.REGION`
    :param radius: association radius; defaults to the seed torso length times
                   the configured factor
    :param max_gap: defaults to the configured gap limit
    :return: frames with exactly one skeleton each
    :raises ValidationError: if the first frame has no skeleton, or a region seed
                             comes without region
    :raises DataError: if the track is lost for more than `max_gap` frames
    """
    if not frames or not frames[0].skeletons:
        raise ValidationError("First frame must contain at least one skeleton")
    settings = settings or AnalysisSettings.from_config()
    if max_gap is None:
        max_gap = settings.track_max_gap
    first = frames[0].skeletons
    centroids = [centroid(s) for s in first]
    match seed:
        case TrackSeed.LEFTMOST:
            cur = int(np.argmin([c[0] for c in centroids]))
        case TrackSeed.RIGHTMOST:
            cur = int(np.argmax([c[0] for c in centroids]))
        case TrackSeed.REGION:
            if region is None:
                raise ValidationError("Region seed requires a region")
            x0, y0, x1, y1 = region
            inside = [i for i, c in enumerate(centroids) if x0 <= c[0] <= x1 and y0 <= c[1] <= y1]
            if not inside:
                raise DataError(f"No skeleton inside seed region {region}")
            center = np.array([(x0 + x1) / 2.0, (y0 + y1) / 2.0])
            cur = min(inside, key=lambda i: np.linalg.norm(centroids[i] - center))

    skel = first[cur]
    last_c = centroids[cur]
    if radius is None:
        torso = _torso_length(skel, settings.keypoints)
        radius = torso * settings.track_radius_factor if torso else np.inf

    tracked = [KeypointFrame(frames[0].t, [skel])]
    gap = 0
    for frame in frames[1:]:
        best, best_dist = None, np.inf
        for cand in frame.skeletons:
            dist = np.linalg.norm(centroid(cand) - last_c)
            if dist < best_dist:
                best, best_dist = cand, dist
        if best is not None and best_dist <= radius:
            skel = best
            last_c = centroid(best)
            gap = 0
        else:
            gap += 1
            if gap > max_gap:
                raise DataError(f"Lost track at t={frame.t} (no skeleton within {radius:.4g} "
                                f"for {gap} frames)")
            log.info(f"Bridging tracking gap at t={frame.t}")
        tracked.append(KeypointFrame(frame.t, [skel]))
    return tracked

####################
# Angle Extraction #
####################

def _coords(*points) -> list[np.ndarray]:
    """Bring points to a common dimension (3D only if all points have depth)
    """
    arrs = [p.coords() if isinstance(p, Keypoint) else np.asarray(p, dtype=float) for p in points]
    for a in arrs:
        if a.shape not in ((2,), (3,)) or not np.all(np.isfinite(a)):
            raise DataError(f"Bad point {a}")
    if any(len(a) == 2 for a in arrs):
        return [a[:2] for a in arrs]
    return arrs

def _unit(v: np.ndarray, what: str) -> np.ndarray:
    n = np.linalg.norm(v)
    if n < DEGEN_NORM:
        raise DataError(f"Degenerate {what} (norm {n:.3g})")
    return v / n

def _angle_between(v1: np.ndarray, v2: np.ndarray) -> float:
    """Unsigned angle in [0, pi], via atan2 of |cross| and dot (accurate near 0 and pi)
    """
    if np.linalg.norm(v1) < DEGEN_NORM or np.linalg.norm(v2) < DEGEN_NORM:
        raise DataError("Degenerate limb vector")
    if len(v1) == 2:
        v1 = np.append(v1, 0.0)
        v2 = np.append(v2, 0.0)
    return float(np.arctan2(np.linalg.norm(np.cross(v1, v2)), np.dot(v1, v2)))

def elbow_angle_from_points(shoulder, elbow, wrist) -> float:
    """Interior elbow angle (radians, 180 deg for a straight arm)
    """
    s, e, w = _coords(shoulder, elbow, wrist)
    return _angle_between(s - e, w - e)

def shoulder_flexion_from_points(hip, shoulder, elbow, lateral: ArrayLike = None) -> float:
    """Angle between the downward torso vector and the upper arm (0 = arm
    hanging).  For 3D points both vectors are first projected onto the sagittal
    plane, whose normal is the torso lateral axis (`lateral`, or the configured
    default, looked up per call).
    """
    h, s, e = _coords(hip, shoulder, elbow)
    torso, arm = h - s, e - s
    if len(torso) == 3:
        if lateral is None:
            lateral = AnalysisSettings.from_config().lateral_axis
        n = _unit(np.asarray(lateral, dtype=float), 'lateral axis')
        torso = torso - np.dot(torso, n) * n
        arm = arm - np.dot(arm, n) * n
    return _angle_between(torso, arm)

def adduction_from_points(hip, shoulder, elbow, lateral: ArrayLike = None) -> float:
    """Horizontal adduction: angle of the upper arm projected onto the transverse
    plane, measured from straight forward toward the body midline (`lateral`
    points from the shoulder toward the midline).  Abduction comes out negative.

    :raises DataError: if any point has no depth
    """
    pts = [hip, shoulder, elbow]
    if any(len(p.coords() if isinstance(p, Keypoint) else p) < 3 for p in pts):
        raise DataError("Adduction needs depth (3D keypoints)")
    h, s, e = _coords(*pts)
    up = _unit(s - h, 'torso vector')
    if lateral is None:
        lateral = AnalysisSettings.from_config().lateral_axis
    mid = np.asarray(lateral, dtype=float)
    mid = _unit(mid - np.dot(mid, up) * up, 'lateral axis')
    fwd = np.cross(mid, up)
    arm = e - s
    arm = arm - np.dot(arm, up) * up
    if np.linalg.norm(arm) < DEGEN_NORM:
        raise DataError("Upper arm is vertical, adduction undefined")
    return float(np.arctan2(np.dot(arm, mid), np.dot(arm, fwd)))

###############
# AngleSeries #
###############

@dataclass(frozen=True, eq=False)
class AngleSeries:
    """Joint-angle time series for one primitive (seconds, radians)
    """
    t:         np.ndarray
    theta:     np.ndarray
    primitive: Primitive

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        theta = np.array(self.theta, dtype=float)
        if t.ndim != 1 or t.shape != theta.shape:
            raise ValidationError(f"Time and angle arrays must match, got {t.shape} and {theta.shape}")
        if np.any(np.diff(t) <= 0.0):
            raise ValidationError("Series time must be strictly increasing")
        object.__setattr__(self, 't', t)
        object.__setattr__(self, 'theta', theta)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def fps(self) -> float:
        return (len(self.t) - 1) / (self.t[-1] - self.t[0])

def extract_angles(frames: list[KeypointFrame], primitive: Primitive,
                   settings: AnalysisSettings = None) -> AngleSeries:
    """Compute the primitive angle for every frame of a tracked sequence (one
    skeleton per frame).  The lateral axis comes from the opposite shoulder when
    it is present with depth, otherwise from the settings.

    :raises ValidationError: if the primitive cannot be measured from keypoints
    :raises DataError: if a required keypoint is missing or degenerate
    """
    settings = settings or AnalysisSettings.from_config()
    names = settings.keypoints
    if primitive == Primitive.FOREARM_ROTATION:
        raise ValidationError("Forearm rotation cannot be measured from arm keypoints")

    def point(skel: Skeleton, key: str, t: float) -> Keypoint:
        kp = skel.get(names[key])
        if kp is None:
            raise DataError(f"Keypoint '{names[key]}' missing at t={t}")
        return kp

    theta = []
    for frame in frames:
        skel = frame.skeletons[0]
        if primitive == Primitive.ELBOW_FLEXION:
            theta.append(elbow_angle_from_points(point(skel, 'shoulder', frame.t),
                                                 point(skel, 'elbow', frame.t),
                                                 point(skel, 'wrist', frame.t)))
            continue
        hip = point(skel, 'hip', frame.t)
        shoulder = point(skel, 'shoulder', frame.t)
        elbow = point(skel, 'elbow', frame.t)
        other = skel.get(names.get('other_shoulder', ''))
        lateral = settings.lateral_axis
        if other is not None and other.has_depth and shoulder.has_depth:
            lateral = other.coords() - shoulder.coords()
        if primitive == Primitive.SHOULDER_FLEXION:
            theta.append(shoulder_flexion_from_points(hip, shoulder, elbow, lateral))
        else:
            theta.append(adduction_from_points(hip, shoulder, elbow, lateral))

    return AngleSeries(np.array([f.t for f in frames]), np.array(theta), primitive)

#############
# Smoothing #
#############

def sg_params(fps: float, bands: tuple[tuple, ...] = None) -> tuple[int, int]:
    """Default (window, order) for the frame rate: the first of `bands`
    ([min_fps, window, order], configured bands if not given) that fits
    """
    if bands is None:
        bands = AnalysisSettings.from_config().sg_bands
    for min_fps, window, order in bands:
        if fps >= min_fps:
            return int(window), int(order)
    raise ValidationError(f"No smoothing defaults for {fps} fps")

def smooth_sg(series: AngleSeries, window: int, order: int, mode: str = None) -> AngleSeries:
    """Savitzky-Golay smoothing (least-squares polynomial convolution).  With the
    default `interp` edges, polynomials up to `order` pass through unchanged at
    every sample; `mirror` and `wrap` (periodic extension) are available too.

    :raises ValidationError: on bad window/order, or a series shorter than the window
    """
    if window < 5 or window % 2 == 0:
        raise ValidationError(f"Window must be odd and at least 5, got {window}")
    if not 0 <= order < window:
        raise ValidationError(f"Order must be below the window length, got {order}")
    if len(series) < window:
        raise ValidationError(f"Series of {len(series)} samples is shorter than window {window}")
    smoothed = savgol_filter(series.theta, window, order, mode=mode or AnalysisSettings.from_config().sg_mode)
    return AngleSeries(series.t, smoothed, series.primitive)

################
# Segmentation #
################

def segment_motion(series: AngleSeries, speed_frac: float = None,
                   settings: AnalysisSettings = None) -> tuple[float, float]:
    """Find the motion interval: where the angular speed exceeds `speed_frac` of
    its peak (configured fraction if not given), widened on both sides down to
    the enclosing local speed minima

    :return: (t_start, t_end)
    :raises ValidationError: if the series is too short
    :raises DataError: if there is no discernible motion
    """
    settings = settings or AnalysisSettings.from_config()
    if speed_frac is None:
        speed_frac = settings.segment_speed_frac
    n = len(series)
    if n < settings.segment_min_samples:
        raise ValidationError(f"Need at least {settings.segment_min_samples} samples to segment, got {n}")
    speed = np.abs(np.gradient(series.theta, series.t))
    peak = speed.max()
    if peak < settings.min_peak_speed:
        raise DataError(f"No motion (peak speed {peak:.3g} rad/s)")

    moving = np.flatnonzero(speed > speed_frac * peak)
    i0, i1 = int(moving[0]), int(moving[-1])
    while i0 > 0 and speed[i0 - 1] < speed[i0]:
        i0 -= 1
    while i1 < n - 1 and speed[i1 + 1] < speed[i1]:
        i1 += 1
    log.debug(f"Segmented {series.primitive.value}: samples {i0}..{i1} of {n}")
    return float(series.t[i0]), float(series.t[i1])

def crop(series: AngleSeries, t_start: float, t_end: float) -> AngleSeries:
    """Sub-series within [t_start, t_end] (inclusive)
    """
    keep = (series.t >= t_start) & (series.t <= t_end)
    if keep.sum() < 2:
        raise DataError(f"Interval [{t_start}, {t_end}] holds fewer than two samples")
    return AngleSeries(series.t[keep], series.theta[keep], series.primitive)

#################
# Normalization #
#################

class NormConvention(Enum):
    SHOULDER_START0 = 'shoulder_start0'  # 0 at the start, 1 at the end
    ELBOW_MIN0      = 'elbow_min0'       # 1 at the start, 0 at the minimum
    TIME_ONLY       = 'time_only'        # time standardized, angles kept (radians)

class NormalizedSeries(NamedTuple):
    u:          np.ndarray  # uniform samples of [0, 1]
    v:          np.ndarray
    convention: NormConvention | None = None

def normalize(series: AngleSeries, convention: NormConvention,
              samples: int = None) -> NormalizedSeries:
    """Standardize a (segmented) series in time, resampled by linear interpolation
    onto `samples` uniform points of [0, 1] (configured count if not given), and
    in amplitude per `convention`

    :raises DataError: if the amplitude is zero
    """
    if len(series) < 2:
        raise ValidationError("Need at least two samples to normalize")
    if samples is None:
        samples = AnalysisSettings.from_config().norm_samples
    tn = (series.t - series.t[0]) / (series.t[-1] - series.t[0])
    u = np.linspace(0.0, 1.0, samples)
    v = np.interp(u, tn, series.theta)

    match convention:
        case NormConvention.SHOULDER_START0:
            amp = v[-1] - v[0]
            if abs(amp) < AMPLITUDE_EPS:
                raise DataError("Zero amplitude, cannot normalize")
            v = (v - v[0]) / amp
        case NormConvention.ELBOW_MIN0:
            vmin = v.min()
            amp = v[0] - vmin
            if amp < AMPLITUDE_EPS:
                raise DataError("Zero amplitude (series never drops below its start)")
            v = (v - vmin) / amp
        case NormConvention.TIME_ONLY:
            pass
    return NormalizedSeries(u, v, convention)

def default_convention(primitive: Primitive) -> NormConvention:
    if primitive == Primitive.ELBOW_FLEXION:
        return NormConvention.ELBOW_MIN0
    return NormConvention.SHOULDER_START0

##################
# Classification #
##################

class VariantLabel(NamedTuple):
    label:   ElbowVariant
    u_min:   float  # location of the global minimum
    rebound: float  # v_end - v_min

def classify_variant(n: NormalizedSeries, u_min_max: float = None,
                     rebound_min: float = None) -> VariantLabel:
    """V1 if the global minimum comes early enough and the curve climbs back far
    enough by the end, V2 otherwise (no sharp boundary exists between the two, so
    both thresholds are configurable)
    """
    if u_min_max is None or rebound_min is None:
        settings = AnalysisSettings.from_config()
        u_min_max = settings.variant_u_min_max if u_min_max is None else u_min_max
        rebound_min = settings.variant_rebound_min if rebound_min is None else rebound_min
    if n.convention not in (NormConvention.ELBOW_MIN0, None):
        raise ValidationError(f"Variant classification needs the elbow convention, got {n.convention}")
    i_min = int(np.argmin(n.v))
    u_min = float(n.u[i_min])
    rebound = float(n.v[-1] - n.v[i_min])
    label = ElbowVariant.V1 if u_min <= u_min_max and rebound >= rebound_min else ElbowVariant.V2
    return VariantLabel(label, u_min, rebound)

############
# Pipeline #
############

class StageError(DataError):
    """Pipeline failure, tagged with the stage it happened in
    """
    stage: str

    def __init__(self, stage: str, msg: str):
        super().__init__(f"stage '{stage}': {msg}")
        self.stage = stage

class AnalysisResult(NamedTuple):
    raw:        AngleSeries
    smoothed:   AngleSeries
    interval:   tuple[float, float]
    normalized: NormalizedSeries
    variant:    VariantLabel | None  # elbow only

def analyze_series(raw: AngleSeries, fps: float = None, window: int = None, order: int = None,
                   segment: bool = None, convention: NormConvention = None,
                   settings: AnalysisSettings = None) -> AnalysisResult:
    """smooth -> segment -> normalize -> classify, for an angle series already
    extracted (e.g. read back with `read_angles_csv()`).  `fps` defaults to the
    series' own sample rate; `segment` to the configured setting.

    :raises StageError: if a stage fails on the data
    """
    settings = settings or AnalysisSettings.from_config()
    primitive = raw.primitive
    convention = convention or default_convention(primitive)
    segment = settings.segment if segment is None else segment
    stage = 'smooth'
    try:
        dflt_window, dflt_order = sg_params(fps or raw.fps, settings.sg_bands)
        smoothed = smooth_sg(raw, window or dflt_window, dflt_order if order is None else order,
                             settings.sg_mode)
        stage = 'segment'
        if segment:
            interval = segment_motion(smoothed, settings=settings)
        else:
            interval = (float(smoothed.t[0]), float(smoothed.t[-1]))
        stage = 'normalize'
        normalized = normalize(crop(smoothed, *interval), convention, settings.norm_samples)
        stage = 'classify'
        variant = None
        if primitive == Primitive.ELBOW_FLEXION and convention == NormConvention.ELBOW_MIN0:
            variant = classify_variant(normalized, settings.variant_u_min_max, settings.variant_rebound_min)
    except (DataError, NumericError) as e:
        raise StageError(stage, str(e)) from e

    log.info(f"Analyzed {primitive.value}: interval {interval[0]:.3f}-{interval[1]:.3f} s"
             + (f", variant {variant.label.value}" if variant else ""))
    return AnalysisResult(raw, smoothed, interval, normalized, variant)

def run_pipeline(frames: list[KeypointFrame], fps: float, primitive: Primitive,
                 seed: TrackSeed = TrackSeed.LEFTMOST, region: tuple = None, window: int = None,
                 order: int = None, segment: bool = None, convention: NormConvention = None,
                 settings: AnalysisSettings = None) -> AnalysisResult:
    """track -> angles -> smooth -> segment -> normalize -> classify (elbow
    series in the elbow convention only).  Smoothing defaults follow the frame
    rate; the normalization convention follows the primitive.  All thresholds
    come from `settings` (the default config profile if not given).

    :raises StageError: if a stage fails on the data
    """
    settings = settings or AnalysisSettings.from_config()
    stage = 'track'
    try:
        tracked = track_person(frames, seed, region, settings=settings)
        stage = 'angles'
        raw = extract_angles(tracked, primitive, settings)
    except (DataError, NumericError) as e:
        raise StageError(stage, str(e)) from e
    return analyze_series(raw, fps, window, order, segment, convention, settings)

#######
# CSV #
#######

def write_angles_csv(series: AngleSeries, path: str) -> None:
    """`t,theta_deg` per sample
    """
    df = pd.DataFrame({'t': series.t, 'theta_deg': np.degrees(series.theta)})
    df.to_csv(path, index=False, float_format='%.6f', lineterminator='\n')

def read_angles_csv(path: str, primitive: Primitive) -> AngleSeries:
    try:
        df = pd.read_csv(path)
        return AngleSeries(df['t'].to_numpy(dtype=float),
                           np.radians(df['theta_deg'].to_numpy(dtype=float)),
                           primitive)
    except (OSError, KeyError, ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Could not read angle series '{path}': {e}") from e

def write_normalized_csv(n: NormalizedSeries, path: str) -> None:
    """`u,v` per sample
    """
    df = pd.DataFrame({'u': n.u, 'v': n.v})
    df.to_csv(path, index=False, float_format='%.15g', lineterminator='\n')

def read_normalized_csv(path: str, convention: NormConvention = None) -> NormalizedSeries:
    try:
        df = pd.read_csv(path)
        u = df['u'].to_numpy(dtype=float)
        v = df['v'].to_numpy(dtype=float)
    except (OSError, KeyError, ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Could not read normalized series '{path}': {e}") from e
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValidationError(f"Non-numeric values in '{path}'")
    return NormalizedSeries(u, v, convention)

#############
# Synthesis #
#############

# 2-link sagittal arm used to render synthetic recordings (meters)
UPPER_ARM_LEN  = 0.30
FOREARM_LEN    = 0.25
TORSO_LEN      = 0.50
SHOULDER_WIDTH = 0.35
PERSON_SPACING = 1.5
CAMERA_DEPTH   = 2.0

def synthesize_keypoints(t: ArrayLike, shoulder_flexion: ArrayLike, elbow_interior: ArrayLike,
                         jitter: float = 0.0, seed: int = None, depth: bool = True,
                         extra_people: int = 0, names: dict[str, str] = None) -> dict:
    """Render keypoint data (in the `parse_keypoints()` layout) for a planar
    2-link arm moving in the sagittal plane.  Camera frame has y pointing down
    and z as depth, which is also the lateral axis of the synthetic body.

    :param shoulder_flexion: angle between torso (downward) and upper arm, radians
    :param elbow_interior: interior elbow angle (pi for a straight arm), radians
    :param jitter: standard deviation of angle noise per frame, radians
    :param seed: seed for the noise generator
    :param extra_people: number of additional (static) skeletons, placed to the
                         right of the moving one
    :param names: keypoint names to write (configured names if not given)
    """
    t = np.asarray(t, dtype=float)
    phi = np.asarray(shoulder_flexion, dtype=float)
    theta = np.asarray(elbow_interior, dtype=float)
    if not (t.shape == phi.shape == theta.shape) or t.ndim != 1 or len(t) < 2:
        raise ValidationError("Time and angle arrays must be matching 1-D arrays")
    if np.any(np.diff(t) <= 0.0):
        raise ValidationError("Frame times must be strictly increasing")
    names = names or AnalysisSettings.from_config().keypoints
    if jitter:
        rng = np.random.default_rng(seed)
        phi = phi + rng.normal(0.0, jitter, phi.shape)
        theta = theta + rng.normal(0.0, jitter, theta.shape)

    def skeleton(base: np.ndarray, phi_i: float, theta_i: float) -> dict:
        shoulder = base
        elbow = shoulder + UPPER_ARM_LEN * np.array([np.sin(phi_i), np.cos(phi_i), 0.0])
        fore = phi_i + np.pi - theta_i
        points = {'shoulder':       shoulder,
                  'elbow':          elbow,
                  'wrist':          elbow + FOREARM_LEN * np.array([np.sin(fore), np.cos(fore), 0.0]),
                  'hip':            shoulder + np.array([0.0, TORSO_LEN, 0.0]),
                  'other_shoulder': shoulder + np.array([0.0, 0.0, SHOULDER_WIDTH])}
        coords = slice(None) if depth else slice(0, 2)
        return {'points': {names[k]: [round(float(x), 9) for x in p[coords]] + [1.0]
                           for k, p in points.items()}}

    bases = [np.array([PERSON_SPACING * k, 0.0, CAMERA_DEPTH]) for k in range(extra_people + 1)]
    frames = []
    for i, t_i in enumerate(t):
        skels = [skeleton(bases[0], phi[i], theta[i])]
        skels += [skeleton(b, phi[0], theta[0]) for b in bases[1:]]
        frames.append({'t': round(float(t_i), 9), 'skeletons': skels})
    fps = (len(t) - 1) / (t[-1] - t[0])
    return {'fps': round(float(fps), 6), 'frames': frames}
