# -*- coding: utf-8 -*-

from dataclasses import dataclass, field
from enum import Enum
from math import isfinite

import numpy as np
from numpy.typing import ArrayLike
from numpy.polynomial import polynomial as npoly

from .core import cfg, log, ConfigError, ValidationError, DataError, DomainError

PROFILES_KEY = 'profiles'

#########
# Enums #
#########

class Primitive(Enum):
    """Elementary joint motions making up the carry phase of a handover
    """
    SHOULDER_FLEXION   = 'shoulder_flexion'
    SHOULDER_ADDUCTION = 'shoulder_adduction'
    ELBOW_FLEXION      = 'elbow_flexion'
    FOREARM_ROTATION   = 'forearm_rotation'

class ElbowVariant(Enum):
    """V1 pulls the object in mid-motion and re-extends at the end; V2 flexes
    (nearly) monotonically
    """
    V1 = 'v1'
    V2 = 'v2'

class ForearmDirection(Enum):
    PRONATION  = 'pronation'
    SUPINATION = 'supination'

class EvalMode(Enum):
    """`ANCHORED` renormalizes a profile so that it starts and ends exactly at the
    commanded angles (for `rc == 1`); `LITERAL` evaluates the joint-angle formula
    as published, offsets and overshoot included
    """
    ANCHORED = 'anchored'
    LITERAL  = 'literal'

###################
# Primitive Types #
###################

@dataclass(frozen=True)
class MotionPrimitive:
    """Primitive kind, plus the variant (elbow) or direction (forearm) qualifier
    where the kind requires one
    """
    kind:      Primitive
    variant:   ElbowVariant | None     = None
    direction: ForearmDirection | None = None

    def __post_init__(self):
        needs_variant   = self.kind == Primitive.ELBOW_FLEXION
        needs_direction = self.kind == Primitive.FOREARM_ROTATION
        if (self.variant is not None) != needs_variant:
            raise ValidationError(f"Variant must be given exactly for elbow flexion (kind '{self.kind.value}')")
        if (self.direction is not None) != needs_direction:
            raise ValidationError(f"Direction must be given exactly for forearm rotation (kind '{self.kind.value}')")

    def __str__(self) -> str:
        qual = self.variant or self.direction
        return f"{self.kind.value}({qual.value})" if qual else self.kind.value

@dataclass(frozen=True)
class SigmoidCoefficients:
    """Coefficients for f(u) = a / (b + exp(-c*u))
    """
    a: float
    b: float
    c: float  # steepness

    def __post_init__(self):
        for name in ('a', 'b', 'c'):
            value = getattr(self, name)
            if not isfinite(value) or value <= 0.0:
                raise ValidationError(f"Sigmoid coefficient '{name}' must be positive, got {value}")

    def as_list(self) -> list[float]:
        return [self.a, self.b, self.c]

@dataclass(frozen=True)
class PolyCoefficients:
    """Coefficients c0..c7 (ascending powers, c0 being the constant term) for a
    degree-7 polynomial on the normalized interval
    """
    coefs: tuple[float, ...]

    NUM_COEFS = 8

    def __post_init__(self):
        if len(self.coefs) != self.NUM_COEFS:
            raise ValidationError(f"Expected {self.NUM_COEFS} polynomial coefficients, got {len(self.coefs)}")
        if not all(isfinite(c) for c in self.coefs):
            raise ValidationError(f"Polynomial coefficients must be finite: {self.coefs}")
        # normalize to a tuple of floats, so that equality is well-behaved
        object.__setattr__(self, 'coefs', tuple(float(c) for c in self.coefs))

    @property
    def c0(self) -> float:
        return self.coefs[0]

    def as_list(self) -> list[float]:
        return list(self.coefs)

@dataclass(frozen=True)
class ProfileParams:
    """Per-joint boundary data for evaluating a profile in time (angles in
    radians, `te` in seconds)
    """
    j0:   float
    je:   float
    te:   float
    rc:   float    = 1.0
    mode: EvalMode = EvalMode.ANCHORED

    def __post_init__(self):
        if not (isfinite(self.j0) and isfinite(self.je)):
            raise ValidationError(f"Start/end angles must be finite ({self.j0}, {self.je})")
        if not isfinite(self.te) or self.te <= 0.0:
            raise ValidationError(f"Duration must be positive, got {self.te}")
        if not isfinite(self.rc) or self.rc <= 0.0:
            raise ValidationError(f"Robot constant must be positive, got {self.rc}")

############################
# Builtin Coefficient Sets #
############################

SHOULDER_SIGMOID = SigmoidCoefficients(0.000905, 0.0008908, 12.87)

ELBOW_POLY = {ElbowVariant.V1: PolyCoefficients((1.0, -1.7, 27.2, -157.3, 314.6, -240.9, 34.2, 23.2)),
              ElbowVariant.V2: PolyCoefficients((1.0, 0.5, -6.7, 53.1, -240.1, 454.1, -376.9, 115.1))}

# no measured adduction coefficients exist, the profile shape matches flexion
ADDUCTION_SIGMOID = SHOULDER_SIGMOID

# not measured either: quintic smoothstep, zero velocity/acceleration at both ends
SMOOTHSTEP_POLY = PolyCoefficients((0.0, 0.0, 0.0, 10.0, -15.0, 6.0, 0.0, 0.0))

@dataclass(frozen=True)
class ProfileSet:
    """Complete set of profile coefficients, one entry per primitive
    """
    shoulder_flexion:   SigmoidCoefficients = SHOULDER_SIGMOID
    shoulder_adduction: SigmoidCoefficients = ADDUCTION_SIGMOID
    elbow_flexion:      dict[ElbowVariant, PolyCoefficients] = field(default_factory=lambda: dict(ELBOW_POLY))
    forearm_rotation:   PolyCoefficients = SMOOTHSTEP_POLY

    @classmethod
    def from_config(cls, params: dict = None, profile: str = None) -> 'ProfileSet':
        """Build from a `profiles` config section (read from the module-level config
        if `params` is not given); entries that are absent fall back to the builtin
        coefficients.  Angles do not appear here, all coefficients are dimensionless.

        :raises ConfigError: if an entry is malformed or violates its invariants
        """
        if params is None:
            params = cfg.config(PROFILES_KEY, profile)

        def sigmoid(key: str, dflt: SigmoidCoefficients) -> SigmoidCoefficients:
            entry = params.get(key)
            if not entry:
                return dflt
            try:
                if isinstance(entry, dict):
                    return SigmoidCoefficients(float(entry['a']), float(entry['b']), float(entry['c']))
                return SigmoidCoefficients(*(float(x) for x in entry))
            except (KeyError, TypeError, ValueError, ValidationError) as e:
                raise ConfigError(f"Bad sigmoid coefficients for '{key}': {e}") from e

        def poly(key: str, entry: list | None, dflt: PolyCoefficients) -> PolyCoefficients:
            if not entry:
                return dflt
            try:
                return PolyCoefficients(tuple(float(x) for x in entry))
            except (TypeError, ValueError, ValidationError) as e:
                raise ConfigError(f"Bad polynomial coefficients for '{key}': {e}") from e

        elbow_params = params.get(Primitive.ELBOW_FLEXION.value) or {}
        if not isinstance(elbow_params, dict):
            raise ConfigError(f"'{Primitive.ELBOW_FLEXION.value}' must map variants to coefficient lists")
        elbow = {v: poly(f"elbow_flexion.{v.value}", elbow_params.get(v.value), ELBOW_POLY[v])
                 for v in ElbowVariant}

        return cls(shoulder_flexion=sigmoid(Primitive.SHOULDER_FLEXION.value, SHOULDER_SIGMOID),
                   shoulder_adduction=sigmoid(Primitive.SHOULDER_ADDUCTION.value, ADDUCTION_SIGMOID),
                   elbow_flexion=elbow,
                   forearm_rotation=poly(Primitive.FOREARM_ROTATION.value,
                                         params.get(Primitive.FOREARM_ROTATION.value),
                                         SMOOTHSTEP_POLY))

###################
# Profile Helpers #
###################

def _as_result(value: np.ndarray) -> float | np.ndarray:
    """Hand back a plain float for scalar input, the array otherwise
    """
    return float(value) if np.ndim(value) == 0 else value

def _check_unit(u: ArrayLike) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise DomainError(f"Normalized time outside of [0, 1]: {u}")
    return u

def _unit_time(p: ProfileParams, t: ArrayLike) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0.0) or np.any(t > p.te):
        raise DomainError(f"Time outside of [0, {p.te}]: {t}")
    return t / p.te

def _rise(f: np.ndarray, f0: float, f1: float) -> np.ndarray:
    """Affine renormalization mapping f0 -> 0 and f1 -> 1
    """
    if f1 == f0:
        raise DataError("Degenerate profile, f(0) == f(1)")
    return (f - f0) / (f1 - f0)

#########################
# Normalized Evaluation #
#########################

def eval_sigmoid(coef: SigmoidCoefficients, u: ArrayLike) -> float | np.ndarray:
    """Evaluate a / (b + exp(-c*u)) on the normalized interval

    :raises DomainError: if any `u` lies outside [0, 1]
    """
    u = _check_unit(u)
    return _as_result(coef.a / (coef.b + np.exp(-coef.c * u)))

def eval_poly7(coef: PolyCoefficients, u: ArrayLike) -> float | np.ndarray:
    """Evaluate sum(c_k * u^k) on the normalized interval (Horner scheme)

    :raises DomainError: if any `u` lies outside [0, 1]
    """
    u = _check_unit(u)
    return _as_result(npoly.polyval(u, coef.coefs))

######################
# Joint-Angle Models #
######################

def _sigmoid_angle(p: ProfileParams, coef: SigmoidCoefficients, t: ArrayLike) -> float | np.ndarray:
    u = _unit_time(p, t)
    if p.mode is EvalMode.LITERAL:
        return _as_result(coef.a * (p.je - p.j0) * p.rc / (coef.b + np.exp(-coef.c * u)) + p.j0)
    f = np.asarray(eval_sigmoid(coef, u))
    g = _rise(f, eval_sigmoid(coef, 0.0), eval_sigmoid(coef, 1.0))
    return _as_result(p.j0 + (p.je - p.j0) * p.rc * g)

def shoulder_flexion_angle(p: ProfileParams, t: ArrayLike,
                           coef: SigmoidCoefficients = SHOULDER_SIGMOID) -> float | np.ndarray:
    """Shoulder flexion angle (radians) at time `t` (seconds, within [0, te])

    :raises DomainError: if `t` lies outside [0, te]
    """
    return _sigmoid_angle(p, coef, t)

def adduction_angle(p: ProfileParams, coef: SigmoidCoefficients, t: ArrayLike) -> float | np.ndarray:
    """Shoulder adduction angle (radians); same contract as shoulder flexion, with
    caller-supplied coefficients
    """
    return _sigmoid_angle(p, coef, t)

def elbow_angle(p: ProfileParams, variant: ElbowVariant, t: ArrayLike,
                coef: PolyCoefficients = None) -> float | np.ndarray:
    """Elbow angle (radians) at time `t`.  Note the reversed amplitude sign of the
    literal form, j0 + (j0 - je) * rc * f(u), which only lands on `je` for
    coefficient sets with f(0) = 0 and f(1) = -1; the anchored form maps f(0) to
    `j0` and f(1) to `je`, keeping the interior shape (V1 dips past `je` and
    comes back).

    :raises DomainError: if `t` lies outside [0, te]
    """
    coef = coef or ELBOW_POLY[variant]
    u = _unit_time(p, t)
    f = np.asarray(eval_poly7(coef, u))
    if p.mode is EvalMode.LITERAL:
        return _as_result(p.j0 + (p.j0 - p.je) * p.rc * f)
    # falls from 1 at u=0 to 0 at u=1
    n = _rise(f, eval_poly7(coef, 1.0), eval_poly7(coef, 0.0))
    return _as_result(p.je + (p.j0 - p.je) * p.rc * n)

def forearm_angle(p: ProfileParams, coef: PolyCoefficients, direction: ForearmDirection,
                  t: ArrayLike) -> float | np.ndarray:
    """Forearm rotation angle (radians).  Always anchored, there is no literal
    formula for this primitive.  The direction only documents intent: supination
    is taken as increasing angle, and the caller picks `j0`/`je` to match.

    :raises DomainError: if `t` lies outside [0, te]
    """
    if p.mode is EvalMode.LITERAL:
        log.debug("Forearm rotation has no literal form, evaluating anchored")
    if (p.je - p.j0) * (1.0 if direction is ForearmDirection.SUPINATION else -1.0) < 0.0:
        log.debug(f"Forearm {direction.value} with amplitude {p.je - p.j0:.4f} rad runs against convention")
    u = _unit_time(p, t)
    f = np.asarray(eval_poly7(coef, u))
    g = _rise(f, eval_poly7(coef, 0.0), eval_poly7(coef, 1.0))
    return _as_result(p.j0 + (p.je - p.j0) * p.rc * g)

def evaluate_primitive(prim: MotionPrimitive, p: ProfileParams, t: ArrayLike,
                       profiles: ProfileSet = None) -> float | np.ndarray:
    """Dispatch to the joint-angle model for `prim`, using coefficients from
    `profiles` (builtin set if not given)
    """
    profiles = profiles or ProfileSet()
    match prim.kind:
        case Primitive.SHOULDER_FLEXION:
            return shoulder_flexion_angle(p, t, profiles.shoulder_flexion)
        case Primitive.SHOULDER_ADDUCTION:
            return adduction_angle(p, profiles.shoulder_adduction, t)
        case Primitive.ELBOW_FLEXION:
            return elbow_angle(p, prim.variant, t, profiles.elbow_flexion[prim.variant])
        case Primitive.FOREARM_ROTATION:
            return forearm_angle(p, profiles.forearm_rotation, prim.direction, t)
    raise ValidationError(f"Unknown primitive '{prim}'")

def normalized_curve(prim: MotionPrimitive, u: ArrayLike, profiles: ProfileSet = None) -> float | np.ndarray:
    """Anchored profile shape on the unit square (starts at 0, ends at 1; the V1
    elbow curve overshoots 1 in between)
    """
    return evaluate_primitive(prim, ProfileParams(0.0, 1.0, 1.0), u, profiles)
