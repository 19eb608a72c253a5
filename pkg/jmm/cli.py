# -*- coding: utf-8 -*-

import sys
import os.path
import json
import argparse
from dataclasses import dataclass, replace
from math import radians, degrees

import numpy as np
import yaml

from .core import cfg, log, set_debug, ConfigError, ValidationError, DataError, NumericError, LogicError
from .utils import parse_assignments
from .profiles import (Primitive, ElbowVariant, ForearmDirection, EvalMode, MotionPrimitive,
                       SigmoidCoefficients, ProfileSet, normalized_curve)
from .kinematics import get_robot
from .trajectory import (DFLT_MIN_RATE, DFLT_MIN_FRAMES, HandoverSpec, MetricsReport, generate_jmm,
                         generate_ljst, metrics, compare, write_csv, read_csv)
from .analysis import (AnalysisSettings, TrackSeed, NormConvention, load_keypoints, run_pipeline,
                       analyze_series, write_angles_csv, read_angles_csv, write_normalized_csv,
                       read_normalized_csv, synthesize_keypoints)
from .fitting import (FitSettings, FitModel, fit_sigmoid, fit_poly7, mean_series, write_report,
                      read_report)

EXIT_OK      = 0
EXIT_RUNTIME = 1
EXIT_USAGE   = 2

PRIMITIVE_ALIASES = {'shoulder':  Primitive.SHOULDER_FLEXION,
                     'adduction': Primitive.SHOULDER_ADDUCTION,
                     'elbow':     Primitive.ELBOW_FLEXION,
                     'forearm':   Primitive.FOREARM_ROTATION} | {p.value: p for p in Primitive}

POLY_INTERCEPT = 1.0

#############
# RunConfig #
#############

@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for a command (config file values, overridden by
    command line flags where given)
    """
    profile:    str | None
    robot:      str
    profiles:   ProfileSet
    duration:   float
    rate:       float
    min_rate:   float
    min_frames: int
    mode:       EvalMode
    variant:    ElbowVariant
    forearm:    ForearmDirection
    poses:      dict[str, dict]
    analysis:   AnalysisSettings
    fitting:    FitSettings

    @classmethod
    def resolve(cls, profile: str = None) -> 'RunConfig':
        """:raises ConfigError: if a config entry is missing or malformed
        """
        try:
            traj = cfg.config('trajectory', profile)
            poses = cfg.config('handover_poses', profile)
        except RuntimeError as e:
            raise ConfigError(str(e)) from e
        try:
            return cls(profile=profile,
                       robot=traj.get('robot') or 'humanoid-arm',
                       profiles=ProfileSet.from_config(profile=profile),
                       duration=float(traj.get('duration') or 1.2),
                       rate=float(traj.get('rate') or 100.0),
                       min_rate=float(traj.get('min_rate') or DFLT_MIN_RATE),
                       min_frames=int(traj.get('min_frames') or DFLT_MIN_FRAMES),
                       mode=EvalMode(traj.get('mode') or 'anchored'),
                       variant=ElbowVariant(traj.get('variant') or 'v1'),
                       forearm=ForearmDirection(traj.get('forearm') or 'supination'),
                       poses=poses,
                       analysis=AnalysisSettings.from_config(profile),
                       fitting=FitSettings.from_config(profile))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Bad trajectory defaults: {e}") from e

    def pose(self, robot: str) -> tuple[dict[Primitive, float], dict[Primitive, float]]:
        """Default start/end primitive angles (radians) for the robot
        """
        entry = self.poses.get(robot) or self.poses.get('default')
        if not entry:
            raise ConfigError(f"No handover pose configured for '{robot}' (and no default)")
        try:
            start = {Primitive(k): radians(float(v)) for k, v in entry['start'].items()}
            end = {Primitive(k): radians(float(v)) for k, v in entry['end'].items()}
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Bad handover pose for '{robot}': {e!r}") from e
        return start, end

###########
# Helpers #
###########

def parse_primitive(name: str) -> Primitive:
    if name not in PRIMITIVE_ALIASES:
        raise argparse.ArgumentTypeError(f"unknown primitive '{name}'")
    return PRIMITIVE_ALIASES[name]

def parse_angles(tokens: list[str]) -> dict[Primitive, float]:
    """`primitive=deg` tokens to radians by primitive
    """
    try:
        assigns = parse_assignments(tokens or [])
        return {PRIMITIVE_ALIASES[k]: radians(float(v)) for k, v in assigns.items()}
    except KeyError as e:
        raise ValidationError(f"Unknown primitive {e}") from e
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Bad angle assignment: {e}") from e

def parse_windows(tokens: list[str]) -> dict[Primitive, tuple[float, float]]:
    """`primitive=t0:t1` tokens (seconds)
    """
    windows = {}
    try:
        for key, val in parse_assignments(tokens or []).items():
            t0, t1 = str(val).split(':')
            windows[PRIMITIVE_ALIASES[key]] = (float(t0), float(t1))
    except KeyError as e:
        raise ValidationError(f"Unknown primitive {e}") from e
    except ValueError as e:
        raise ValidationError(f"Bad window (expected primitive=t0:t1): {e}") from e
    return windows

def parse_floats(value: str) -> list[float]:
    try:
        return [float(x) for x in value.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{value}'")

def metrics_dict(m: MetricsReport) -> dict:
    return {'mean_squared_jerk_deg2_s6': np.degrees(np.degrees(m.mean_squared_jerk)).tolist(),
            'ee_path_length_m':          m.ee_path_length,
            'max_angular_velocity_deg_s': np.degrees(m.max_angular_velocity).tolist(),
            'endpoint_error_deg':        np.degrees(m.endpoint_error).tolist()}

def print_metrics(joint_names: tuple[str, ...], m: MetricsReport, file=None) -> None:
    file = file or sys.stdout
    print(f"{'joint':<16} {'max vel (deg/s)':>16} {'msq jerk (deg^2/s^6)':>22} {'endpoint err (deg)':>19}",
          file=file)
    for j, name in enumerate(joint_names):
        print(f"{name:<16} {degrees(m.max_angular_velocity[j]):>16.3f} "
              f"{degrees(degrees(m.mean_squared_jerk[j])):>22.4g} "
              f"{degrees(m.endpoint_error[j]):>19.6f}", file=file)
    print(f"end-effector path length: {m.ee_path_length:.4f} m", file=file)

def write_json(data: dict, path: str) -> None:
    with open(path, 'w') as f:
        json.dump(data, f, indent=2)
        f.write('\n')

############
# generate #
############

def apply_fit_reports(profiles: ProfileSet, paths: list[str], variant: ElbowVariant) -> ProfileSet:
    """Replace profile coefficients with fitted ones: a sigmoid report takes over
    the shoulder flexion curve, a poly7 report the elbow curve of `variant`
    """
    for path in paths or []:
        report = read_report(path)
        if not report.converged:
            log.warning(f"Fit report '{path}' did not converge, using its coefficients anyway")
        if report.model == FitModel.SIGMOID:
            profiles = replace(profiles, shoulder_flexion=report.coefficients)
            target = Primitive.SHOULDER_FLEXION.value
        else:
            profiles = replace(profiles, elbow_flexion=profiles.elbow_flexion | {variant: report.coefficients})
            target = f"{Primitive.ELBOW_FLEXION.value}({variant.value})"
        log.info(f"Profile for {target} taken from '{path}'")
    return profiles

def cmd_generate(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """Write a JMM or LJST trajectory CSV and print its metrics
    """
    robot, mapping = get_robot(args.robot or run_cfg.robot, run_cfg.profile)
    start, end = run_cfg.pose(robot.name)
    start |= parse_angles(args.start)
    end |= parse_angles(args.end)

    unmapped = [p for p in start if p not in mapping]
    if unmapped:
        log.info(f"Skipping primitives not mapped on '{robot.name}': {[p.value for p in unmapped]}")
    start = {p: a for p, a in start.items() if p in mapping}
    end = {p: a for p, a in end.items() if p in mapping}

    spec = HandoverSpec(start=start,
                        end=end,
                        duration=run_cfg.duration if args.duration is None else args.duration,
                        elbow_variant=ElbowVariant(args.variant) if args.variant else run_cfg.variant,
                        forearm_direction=(ForearmDirection(args.forearm) if args.forearm
                                           else run_cfg.forearm),
                        mode=EvalMode(args.mode) if args.mode else run_cfg.mode,
                        windows=parse_windows(args.window))
    rate = run_cfg.rate if args.rate is None else args.rate
    if args.model == 'ljst':
        traj = generate_ljst(spec, robot, mapping, rate, run_cfg.min_rate)
    else:
        profiles = apply_fit_reports(run_cfg.profiles, args.fit_report, spec.elbow_variant)
        traj = generate_jmm(spec, robot, mapping, rate, profiles, run_cfg.min_rate)

    write_csv(traj, args.out)
    log.info(f"Wrote {args.model} trajectory ({len(traj)} frames) for '{robot.name}' to '{args.out}'")
    print(f"{args.model} trajectory, {len(traj)} frames, {traj.duration:.3f} s -> {args.out}")
    print_metrics(traj.joint_names, metrics(traj, run_cfg.min_frames))
    return EXIT_OK

###########
# analyze #
###########

def cmd_analyze(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """track -> angles -> smooth -> segment -> normalize -> classify, writing each
    artifact into the output directory.  With `--angles`, a previously written
    angle series CSV is taken up from the smoothing stage on.
    """
    prim = args.primitive
    convention = NormConvention(args.convention) if args.convention else None
    segment = False if args.no_segment else None
    if args.angles:
        if not os.path.exists(args.angles):
            raise ValidationError(f"Angle series file '{args.angles}' not found")
        res = analyze_series(read_angles_csv(args.angles, prim),
                             window=args.sg_window,
                             order=args.sg_order,
                             segment=segment,
                             convention=convention,
                             settings=run_cfg.analysis)
    else:
        fps, frames = load_keypoints(args.input)
        seed = TrackSeed(args.seed_mode)
        if seed == TrackSeed.REGION and (not args.region or len(args.region) != 4):
            raise ValidationError("Region seed requires --region x0,y0,x1,y1")
        res = run_pipeline(frames, fps, prim,
                           seed=seed,
                           region=tuple(args.region) if args.region else None,
                           window=args.sg_window,
                           order=args.sg_order,
                           segment=segment,
                           convention=convention,
                           settings=run_cfg.analysis)

    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, prim.value)
    write_angles_csv(res.smoothed, f"{base}_angles.csv")
    write_normalized_csv(res.normalized, f"{base}_norm.csv")
    print(f"{prim.value}: {len(res.raw)} frames, motion {res.interval[0]:.3f}-{res.interval[1]:.3f} s")
    print(f"  angles     -> {base}_angles.csv")
    print(f"  normalized -> {base}_norm.csv")
    if res.variant:
        write_json({'label':   res.variant.label.value,
                    'u_min':   res.variant.u_min,
                    'rebound': res.variant.rebound}, f"{base}_variant.json")
        print(f"  variant {res.variant.label.value} (u_min {res.variant.u_min:.3f}, "
              f"rebound {res.variant.rebound:.3f}) -> {base}_variant.json")
    return EXIT_OK

#######
# fit #
#######

def cmd_fit(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """Fit a normalized series, writing the FitReport JSON; exit code 1 (with the
    report still written) if the fit did not converge
    """
    if not os.path.exists(args.input):
        raise ValidationError(f"Input file '{args.input}' not found")
    data = read_normalized_csv(args.input)
    model = FitModel(args.profile)
    if model == FitModel.SIGMOID:
        if args.init and len(args.init) != 3:
            raise ValidationError(f"Sigmoid init needs a,b,c, got {args.init}")
        init = SigmoidCoefficients(*args.init) if args.init else run_cfg.fitting.sigmoid_init
        report = fit_sigmoid(data, init, run_cfg.fitting)
    else:
        report = fit_poly7(data, args.fix_intercept, run_cfg.fitting)

    if args.out:
        write_report(report, args.out)
    else:
        print(json.dumps(report.to_dict(), indent=2))
    log.info(f"Fitted {model.value} to '{args.input}': sse {report.sse:.4g}, r2 {report.r_squared:.6f}")
    print(f"{model.value}: sse {report.sse:.6g}, r2 {report.r_squared:.6f}, "
          f"{report.iterations} iterations, converged {report.converged}", file=sys.stderr)
    return EXIT_OK if report.converged else EXIT_RUNTIME

###########
# compare #
###########

def cmd_compare(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """Per-joint differences and side-by-side metrics of two trajectory files
    """
    traj_a = read_csv(args.traj_a)
    traj_b = read_csv(args.traj_b)
    if traj_a.dof != traj_b.dof:
        raise ValidationError(f"Joint counts differ: {traj_a.dof} vs {traj_b.dof}")
    comp = compare(traj_a, traj_b, run_cfg.min_frames)

    print(f"{'joint':<16} {'max diff (deg)':>15} {'endpoint diff (deg)':>20}")
    for j, name in enumerate(comp.joint_names):
        print(f"{name:<16} {degrees(comp.max_difference[j]):>15.6f} "
              f"{degrees(comp.endpoint_difference[j]):>20.6f}")
    if args.out:
        write_json({'joints':                  list(comp.joint_names),
                    'max_difference_deg':      np.degrees(comp.max_difference).tolist(),
                    'endpoint_difference_deg': np.degrees(comp.endpoint_difference).tolist(),
                    'a':                       {'file': args.traj_a} | metrics_dict(comp.metrics_a),
                    'b':                       {'file': args.traj_b} | metrics_dict(comp.metrics_b)},
                   args.out)
    return EXIT_OK

##########
# derive #
##########

def cmd_derive(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """Derive profile coefficients from a set of recordings: elbow recordings are
    classified and averaged per variant (polynomial fit with c0 pinned to 1),
    shoulder recordings are averaged and fitted with the sigmoid.  Output is a
    config file holding a `profiles` section under profile `--name`.
    """
    if not args.elbow and not args.shoulder:
        raise ValidationError("Nothing to derive, give --elbow and/or --shoulder recordings")
    profiles = {}
    converged = True

    by_variant = {v: [] for v in ElbowVariant}
    for path in args.elbow or []:
        fps, frames = load_keypoints(path)
        res = run_pipeline(frames, fps, Primitive.ELBOW_FLEXION, settings=run_cfg.analysis)
        if res.variant is None:
            raise LogicError(f"Elbow analysis of '{path}' returned no variant label")
        by_variant[res.variant.label].append(res.normalized)
        print(f"{path}: {res.variant.label.value}")
    elbow = {}
    for variant, series in by_variant.items():
        if not series:
            continue
        report = fit_poly7(mean_series(series), POLY_INTERCEPT, run_cfg.fitting)
        elbow[variant.value] = report.coefficients.as_list()
        print(f"elbow {variant.value}: {len(series)} recordings, sse {report.sse:.4g}, "
              f"r2 {report.r_squared:.6f}")
    if elbow:
        profiles[Primitive.ELBOW_FLEXION.value] = elbow

    shoulder = []
    for path in args.shoulder or []:
        fps, frames = load_keypoints(path)
        res = run_pipeline(frames, fps, Primitive.SHOULDER_FLEXION, settings=run_cfg.analysis)
        shoulder.append(res.normalized)
    if shoulder:
        report = fit_sigmoid(mean_series(shoulder), settings=run_cfg.fitting)
        converged = report.converged
        coefs = report.coefficients
        profiles[Primitive.SHOULDER_FLEXION.value] = {'a': coefs.a, 'b': coefs.b, 'c': coefs.c}
        print(f"shoulder: {len(shoulder)} recordings, sse {report.sse:.4g}, "
              f"r2 {report.r_squared:.6f}, converged {report.converged}")

    with open(args.out, 'w') as f:
        yaml.safe_dump({args.name: {'profiles': profiles}}, f, sort_keys=False)
    print(f"profile '{args.name}' -> {args.out}")
    return EXIT_OK if converged else EXIT_RUNTIME

#########
# synth #
#########

# (start, end, held joint) in degrees; elbow angles are interior angles
SYNTH_DEFAULTS = {Primitive.ELBOW_FLEXION:    (160.0, 100.0, 0.0),
                  Primitive.SHOULDER_FLEXION: (0.0, 50.0, 150.0)}

def cmd_synth(args: argparse.Namespace, run_cfg: RunConfig) -> int:
    """Write a synthetic keypoint recording of the chosen primitive, following its
    profile curve over the whole recording (the other joint held still)
    """
    prim = args.primitive
    if prim not in SYNTH_DEFAULTS:
        raise ValidationError(f"Cannot synthesize '{prim.value}' with a sagittal arm")
    if args.fps <= 0.0 or args.duration <= 0.0:
        raise ValidationError("Frame rate and duration must be positive")
    nframes = int(round(args.duration * args.fps)) + 1
    u = np.arange(nframes) / (nframes - 1)
    t = u * args.duration

    dflt_start, dflt_end, dflt_hold = SYNTH_DEFAULTS[prim]
    j0 = radians(dflt_start if args.start is None else args.start)
    je = radians(dflt_end if args.end is None else args.end)
    held = np.full(nframes, radians(dflt_hold if args.hold is None else args.hold))
    if prim == Primitive.ELBOW_FLEXION:
        variant = ElbowVariant(args.variant) if args.variant else run_cfg.variant
        shape = normalized_curve(MotionPrimitive(prim, variant=variant), u, run_cfg.profiles)
        shoulder, elbow = held, j0 + (je - j0) * shape
    else:
        shape = normalized_curve(MotionPrimitive(prim), u, run_cfg.profiles)
        shoulder, elbow = j0 + (je - j0) * shape, held

    data = synthesize_keypoints(t, shoulder, elbow, jitter=radians(args.jitter), seed=args.seed,
                                depth=not args.no_depth, extra_people=args.extra_people,
                                names=run_cfg.analysis.keypoints)
    write_json(data, args.out)
    print(f"{prim.value} ({nframes} frames at {args.fps:g} fps) -> {args.out}")
    return EXIT_OK

##########
# parser #
##########

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='jmm', description="Human-like handover arm trajectories "
                                     "(joint motion model): generate, analyze, fit, compare")
    parser.add_argument('--config', help="additional YAML/JSON config file, loaded on top of the defaults")
    parser.add_argument('--config-profile', help="named config profile to use")
    parser.add_argument('--debug', type=int, choices=[0, 1, 2], help="log level: 1 debug, 2 debug echoed to stderr")
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('generate', help="write a trajectory CSV (angles in degrees)")
    gen.add_argument('--robot', help="builtin robot name or robot definition file")
    gen.add_argument('--model', choices=['jmm', 'ljst'], default='jmm')
    gen.add_argument('--variant', choices=[v.value for v in ElbowVariant])
    gen.add_argument('--forearm', choices=[d.value for d in ForearmDirection])
    gen.add_argument('--mode', choices=[m.value for m in EvalMode])
    gen.add_argument('--duration', type=float, help="seconds")
    gen.add_argument('--rate', type=float, help="Hz")
    gen.add_argument('--start', nargs='*', metavar='PRIM=DEG', help="start angles, degrees")
    gen.add_argument('--end', nargs='*', metavar='PRIM=DEG', help="end angles, degrees")
    gen.add_argument('--window', nargs='*', metavar='PRIM=T0:T1', help="time window per primitive, seconds")
    gen.add_argument('--fit-report', nargs='*', metavar='FILE',
                     help="fit report JSON to take profile coefficients from (sigmoid: shoulder flexion, "
                     "poly7: elbow flexion of the selected variant)")
    gen.add_argument('--out', required=True)
    gen.set_defaults(func=cmd_generate)

    anl = sub.add_parser('analyze', help="extract, segment and normalize angles from keypoints")
    src = anl.add_mutually_exclusive_group(required=True)
    src.add_argument('--input', help="keypoint JSON file")
    src.add_argument('--angles', help="angle series CSV (t,theta_deg), skips tracking and angle extraction")
    anl.add_argument('--primitive', type=parse_primitive, default=Primitive.ELBOW_FLEXION)
    anl.add_argument('--seed-mode', choices=[s.value for s in TrackSeed], default=TrackSeed.LEFTMOST.value,
                     help="how to pick the tracked person in the first frame")
    anl.add_argument('--region', type=parse_floats, help="x0,y0,x1,y1 for the region seed")
    anl.add_argument('--sg-window', type=int)
    anl.add_argument('--sg-order', type=int)
    anl.add_argument('--no-segment', action='store_true')
    anl.add_argument('--convention', choices=[c.value for c in NormConvention])
    anl.add_argument('--out-dir', default='.')
    anl.set_defaults(func=cmd_analyze)

    fit = sub.add_parser('fit', help="fit a profile function to a normalized series CSV")
    fit.add_argument('--profile', choices=[m.value for m in FitModel], required=True)
    fit.add_argument('--input', required=True, help="normalized series CSV (u,v)")
    fit.add_argument('--fix-intercept', type=float)
    fit.add_argument('--init', type=parse_floats, help="a,b,c for the sigmoid")
    fit.add_argument('--out', help="report JSON file (printed if not given)")
    fit.set_defaults(func=cmd_fit)

    cmp = sub.add_parser('compare', help="compare two trajectory CSV files")
    cmp.add_argument('traj_a')
    cmp.add_argument('traj_b')
    cmp.add_argument('--out', help="comparison JSON file")
    cmp.set_defaults(func=cmd_compare)

    der = sub.add_parser('derive', help="derive profile coefficients from keypoint recordings")
    der.add_argument('--elbow', nargs='*', help="elbow keypoint JSON files")
    der.add_argument('--shoulder', nargs='*', help="shoulder keypoint JSON files")
    der.add_argument('--name', default='derived', help="config profile name to write")
    der.add_argument('--out', required=True)
    der.set_defaults(func=cmd_derive)

    syn = sub.add_parser('synth', help="write synthetic keypoints for a profile curve")
    syn.add_argument('--primitive', type=parse_primitive, default=Primitive.ELBOW_FLEXION)
    syn.add_argument('--variant', choices=[v.value for v in ElbowVariant])
    syn.add_argument('--start', type=float, help="degrees (elbow: interior angle)")
    syn.add_argument('--end', type=float, help="degrees")
    syn.add_argument('--hold', type=float, help="degrees, angle of the joint held still")
    syn.add_argument('--duration', type=float, default=1.2, help="seconds")
    syn.add_argument('--fps', type=float, default=100.0)
    syn.add_argument('--jitter', type=float, default=0.0, help="angle noise per frame, degrees")
    syn.add_argument('--seed', type=int, default=0)
    syn.add_argument('--no-depth', action='store_true', help="write 2D keypoints")
    syn.add_argument('--extra-people', type=int, default=0)
    syn.add_argument('--out', required=True)
    syn.set_defaults(func=cmd_synth)
    return parser

########
# main #
########

def main(argv: list[str] = None) -> int:
    """Entry point for the `jmm` command

    Exit codes: 0 success; 1 failure at runtime (bad data, unwritable output,
    fits that do not converge); 2 bad usage, config or input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.debug is not None:
        set_debug(args.debug)
    try:
        if args.config:
            if not os.path.exists(args.config):
                raise ConfigError(f"Config file '{args.config}' not found")
            try:
                cfg.load(os.path.realpath(args.config))
            except RuntimeError as e:
                raise ConfigError(f"Could not load config '{args.config}': {e}") from e
        run_cfg = RunConfig.resolve(args.config_profile)
        log.info(f"Running '{args.command}'")
        return args.func(args, run_cfg)
    except (ConfigError, ValidationError) as e:
        log.error(f"{args.command}: {e}")
        print(f"jmm {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NumericError, LogicError, OSError) as e:
        log.error(f"{args.command}: {e}")
        print(f"jmm {args.command}: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

if __name__ == '__main__':
    sys.exit(main())
