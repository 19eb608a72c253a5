# -*- coding: utf-8 -*-

import json
from typing import NamedTuple
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import qr, solve, solve_triangular, LinAlgError

from .core import cfg, log, ConfigError, ValidationError, DataError, NumericError
from .profiles import SigmoidCoefficients, PolyCoefficients
from .analysis import NormalizedSeries

FIT_KEY = 'fitting'

SIGMOID_MIN_POINTS = 10
POLY_DEGREE        = PolyCoefficients.NUM_COEFS - 1
DIAG_FLOOR         = 1e-12  # relative floor for Marquardt scaling

###############
# FitSettings #
###############

class FitSettings(NamedTuple):
    """Solver parameters from the `fitting` config section
    """
    sigmoid_init:   SigmoidCoefficients = SigmoidCoefficients(1.0, 1.0, 10.0)
    lm_lambda0:     float = 1e-3
    lm_lambda_up:   float = 10.0
    lm_lambda_down: float = 10.0
    lm_lambda_max:  float = 1e16
    lm_max_iter:    int   = 200
    lm_rel_tol:     float = 1e-12
    lm_grad_tol:    float = 1e-5
    poly_rank_tol:  float = 1e-10

    @classmethod
    def from_config(cls, profile: str = None) -> 'FitSettings':
        """Read at call time, entries absent from the config keep the defaults above

        :raises ConfigError: if `profile` is not loaded, or an entry is malformed
        """
        try:
            fit_cfg = cfg.config(FIT_KEY, profile)
        except RuntimeError as e:
            raise ConfigError(str(e)) from e
        dflt = cls()
        try:
            init = fit_cfg.get('sigmoid_init')
            return cls(sigmoid_init=SigmoidCoefficients(*(float(x) for x in init)) if init else dflt.sigmoid_init,
                       lm_lambda0=float(fit_cfg.get('lm_lambda0') or dflt.lm_lambda0),
                       lm_lambda_up=float(fit_cfg.get('lm_lambda_up') or dflt.lm_lambda_up),
                       lm_lambda_down=float(fit_cfg.get('lm_lambda_down') or dflt.lm_lambda_down),
                       lm_lambda_max=float(fit_cfg.get('lm_lambda_max') or dflt.lm_lambda_max),
                       lm_max_iter=int(fit_cfg.get('lm_max_iter') or dflt.lm_max_iter),
                       lm_rel_tol=float(fit_cfg.get('lm_rel_tol') or dflt.lm_rel_tol),
                       lm_grad_tol=float(fit_cfg.get('lm_grad_tol') or dflt.lm_grad_tol),
                       poly_rank_tol=float(fit_cfg.get('poly_rank_tol') or dflt.poly_rank_tol))
        except (TypeError, ValueError, ValidationError) as e:
            raise ConfigError(f"Bad fitting settings: {e}") from e

#############
# FitReport #
#############

class FitModel(Enum):
    SIGMOID = 'sigmoid'
    POLY7   = 'poly7'

class FitReport(NamedTuple):
    model:        FitModel
    coefficients: SigmoidCoefficients | PolyCoefficients
    sse:          float
    r_squared:    float
    iterations:   int
    converged:    bool
    rmse:         float
    grad_norm:    float               # gradient of SSE/2 at the solution (fit parameters)
    sse_trace:    tuple[float, ...] = ()  # SSE at start and after each accepted step

    def to_dict(self) -> dict:
        return {'model':        self.model.value,
                'coefficients': self.coefficients.as_list(),
                'sse':          self.sse,
                'r2':           self.r_squared,
                'iterations':   self.iterations,
                'converged':    self.converged,
                'rmse':         self.rmse}

    @classmethod
    def from_dict(cls, data: dict) -> 'FitReport':
        """:raises ValidationError: if `data` is not a valid report
        """
        try:
            model = FitModel(data['model'])
            coefs = [float(c) for c in data['coefficients']]
            if model == FitModel.SIGMOID:
                coefficients = SigmoidCoefficients(*coefs)
            else:
                coefficients = PolyCoefficients(tuple(coefs))
            return cls(model, coefficients, float(data['sse']), float(data['r2']),
                       int(data['iterations']), bool(data['converged']),
                       float(data.get('rmse', np.nan)), np.nan)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Bad fit report: {e!r}") from e

def write_report(report: FitReport, path: str) -> None:
    with open(path, 'w') as f:
        json.dump(report.to_dict(), f, indent=2)
        f.write('\n')

def read_report(path: str) -> FitReport:
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"Could not read fit report '{path}': {e}") from e
    return FitReport.from_dict(data)

###########
# Helpers #
###########

def _series_arrays(data: NormalizedSeries) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(data.u, dtype=float)
    v = np.asarray(data.v, dtype=float)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValidationError(f"Sample arrays must match, got {u.shape} and {v.shape}")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValidationError("Samples must be finite")
    return u, v

def r_squared(data: np.ndarray, model: np.ndarray) -> float:
    """Coefficient of determination, 1 - SSE/SStot

    :raises DataError: if `data` has zero variance
    """
    data = np.asarray(data, dtype=float)
    model = np.asarray(model, dtype=float)
    if data.shape != model.shape or data.ndim != 1 or len(data) < 2:
        raise ValidationError(f"Need equal-length arrays of at least 2 values, got "
                              f"{data.shape} and {model.shape}")
    ss_tot = float(np.sum((data - data.mean()) ** 2))
    if ss_tot == 0.0:
        raise DataError("Zero variance in data, R^2 undefined")
    ss_res = float(np.sum((data - model) ** 2))
    return 1.0 - ss_res / ss_tot

def mean_series(series: list[NormalizedSeries]) -> NormalizedSeries:
    """Arithmetic mean of normalized series sharing the same u grid

    :raises ValidationError: if the list is empty or the grids differ
    """
    if not series:
        raise ValidationError("No series to average")
    u = series[0].u
    for s in series[1:]:
        if s.u.shape != u.shape or not np.allclose(s.u, u, rtol=0.0, atol=1e-12):
            raise ValidationError("Series must share the same u grid to be averaged")
    v = np.mean([s.v for s in series], axis=0)
    return NormalizedSeries(u, v, series[0].convention)

###########
# Sigmoid #
###########

def _sigmoid_model(params: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Model values and Jacobian w.r.t. log-parameters (alpha, beta, gamma) =
    log(a, b, c)
    """
    a, b, c = np.exp(params)
    e = np.exp(-c * u)
    d = b + e
    m = a / d
    jac = np.column_stack([m, -m * b / d, m * c * u * e / d])
    return m, jac

def fit_sigmoid(data: NormalizedSeries, init: SigmoidCoefficients = None,
                settings: FitSettings = None) -> FitReport:
    """Levenberg-Marquardt fit of a / (b + exp(-c*u)), with Marquardt (diagonal)
    scaling of the damping term.  Parameters are fitted as logarithms, which
    keeps a, b and c positive.  Stops when an accepted step changes SSE by less
    than the relative tolerance, at the iteration limit, or when no acceptable
    step is found before damping reaches its maximum.  Not converging is
    reported (`converged=False`), never raised.

    `init` defaults to the configured starting point, `settings` to the config.

    :raises ValidationError: if there are fewer than 10 points
    :raises NumericError: if the damped normal equations cannot be solved at all
    """
    u, v = _series_arrays(data)
    if len(u) < SIGMOID_MIN_POINTS:
        raise ValidationError(f"Need at least {SIGMOID_MIN_POINTS} points for a sigmoid fit, got {len(u)}")
    settings = settings or FitSettings.from_config()
    init = init or settings.sigmoid_init

    params = np.log(init.as_list())
    m, jac = _sigmoid_model(params, u)
    resid = v - m
    sse = float(resid @ resid)
    trace = [sse]
    lam = settings.lm_lambda0
    iters = 0
    done = False

    while iters < settings.lm_max_iter and sse > 0.0:
        jtj = jac.T @ jac
        grad = jac.T @ resid
        diag = np.diag(jtj)
        scale = np.maximum(diag, DIAG_FLOOR * max(diag.max(), 1.0))

        accepted = False
        solved = False
        while lam <= settings.lm_lambda_max:
            try:
                step = solve(jtj + lam * np.diag(scale), grad, assume_a='pos')
                solved = True
            except LinAlgError:
                lam *= settings.lm_lambda_up
                continue
            with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
                new_params = params + step
                new_m, new_jac = _sigmoid_model(new_params, u)
                new_resid = v - new_m
                new_sse = float(new_resid @ new_resid)
            if np.isfinite(new_sse) and np.all(np.isfinite(new_jac)) and new_sse < sse:
                accepted = True
                break
            lam *= settings.lm_lambda_up

        if not accepted:
            if not solved:
                raise NumericError("Singular normal equations in sigmoid fit")
            log.debug(f"LM stalled after {iters} iterations (sse {sse:.3g})")
            done = True
            break

        iters += 1
        rel_change = (sse - new_sse) / sse
        params, jac, resid, sse = new_params, new_jac, new_resid, new_sse
        trace.append(sse)
        lam /= settings.lm_lambda_down
        if rel_change < settings.lm_rel_tol:
            done = True
            break

    if sse == 0.0:
        done = True
    grad_norm = float(np.linalg.norm(jac.T @ resid))
    converged = done and grad_norm <= settings.lm_grad_tol
    if not converged:
        log.info(f"Sigmoid fit not converged after {iters} iterations (|grad| {grad_norm:.3g})")

    coefs = SigmoidCoefficients(*(float(x) for x in np.exp(params)))
    report = FitReport(model=FitModel.SIGMOID,
                       coefficients=coefs,
                       sse=sse,
                       r_squared=r_squared(v, v - resid),
                       iterations=iters,
                       converged=converged,
                       rmse=float(np.sqrt(sse / len(u))),
                       grad_norm=grad_norm,
                       sse_trace=tuple(trace))
    log.debug(f"Sigmoid fit: {coefs.as_list()}, sse {sse:.4g}, r2 {report.r_squared:.6f}")
    return report

#########
# Poly7 #
#########

def fit_poly7(data: NormalizedSeries, fix_intercept: float = None,
              settings: FitSettings = None) -> FitReport:
    """Linear least-squares fit of the degree-7 polynomial, solved by
    column-pivoted QR of the Vandermonde matrix.  If `fix_intercept` is given,
    c0 is pinned to that value and only c1..c7 are fitted.

    :raises ValidationError: if there are too few points
    :raises NumericError: if the system is rank-deficient (degenerate u grid)
    """
    u, v = _series_arrays(data)
    fixed = fix_intercept is not None
    num_free = POLY_DEGREE if fixed else POLY_DEGREE + 1
    if len(u) < num_free + 1:
        raise ValidationError(f"Need at least {num_free + 1} points for the polynomial fit, got {len(u)}")

    vander = np.vander(u, POLY_DEGREE + 1, increasing=True)
    if fixed:
        vander = vander[:, 1:]
        target = v - fix_intercept
    else:
        target = v

    rank_tol = (settings or FitSettings.from_config()).poly_rank_tol
    q, r, piv = qr(vander, mode='economic', pivoting=True)
    rdiag = np.abs(np.diag(r))
    if rdiag[0] == 0.0 or rdiag.min() < rank_tol * rdiag[0]:
        raise NumericError(f"Rank-deficient polynomial system (|R| diagonal {rdiag.min():.3g} "
                           f"vs {rdiag[0]:.3g})")
    sol = np.empty(num_free)
    sol[piv] = solve_triangular(r, q.T @ target)

    coefs = ([fix_intercept] if fixed else []) + sol.tolist()
    resid = v - npoly.polyval(u, coefs)
    sse = float(resid @ resid)
    report = FitReport(model=FitModel.POLY7,
                       coefficients=PolyCoefficients(tuple(coefs)),
                       sse=sse,
                       r_squared=r_squared(v, v - resid),
                       iterations=1,
                       converged=True,
                       rmse=float(np.sqrt(sse / len(u))),
                       grad_norm=float(np.linalg.norm(vander.T @ resid)))
    log.debug(f"Poly7 fit: {coefs}, sse {sse:.4g}, r2 {report.r_squared:.6f}")
    return report
