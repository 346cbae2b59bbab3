"""Damped least-squares (Levenberg-Marquardt) curve fitting.

The engine consumes :class:`CurveModel` objects that supply analytic
Jacobians; no finite differencing happens inside the loop.  Damping starts
at 1e-3, divides by 10 on accepted steps and multiplies by 10 on rejected
ones.  Convergence requires either a relative residual-norm reduction below
1e-10 over an accepted step or a scaled gradient norm below 1e-10.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, RankDeficiencyError

_LAMBDA_START = 1e-3
_LAMBDA_MAX = 1e12
_LAMBDA_MIN = 1e-14
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class CurveModel:
    """A parametric curve with an analytic Jacobian.

    Attributes
    ----------
    name : str
        Identifier used in fit reports.
    n_params : int
        Parameter vector length.
    value : callable
        ``value(x, params) -> y``.
    value_and_jacobian : callable
        ``value_and_jacobian(x, params) -> (y, J)`` with ``J`` of shape
        ``(len(x), n_params)``.
    """

    name: str
    n_params: int
    value: callable
    value_and_jacobian: callable


@dataclass
class FitResult:
    """Outcome of a least-squares fit.

    ``covariance`` is ``sigma^2 (J^T W J)^+`` at the solution, symmetric
    positive semi-definite; ``residual_norm`` is the square root of the
    weighted sum of squared residuals.
    """

    params: np.ndarray
    covariance: np.ndarray
    residual_norm: float
    n_iterations: int
    converged: bool
    model_name: str = ""
    warnings: list = field(default_factory=list)

    def param_uncertainties(self):
        """One-sigma parameter uncertainties (square roots of the covariance diagonal)."""
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))


def _psd_inverse(a, cond_limit=_COND_LIMIT):
    """Pseudo-inverse of a symmetric PSD matrix; returns (inverse, ill_conditioned)."""
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    top = np.max(w) if w.size else 0.0
    if top <= 0.0:
        raise RankDeficiencyError("normal equations have no positive curvature")
    cutoff = top / cond_limit
    ill = np.min(w) < cutoff
    inv_w = np.where(w > cutoff, 1.0 / np.maximum(w, cutoff), 0.0)
    return (v * inv_w) @ v.T, ill


def fit_least_squares(model, x, y, init, weights=None, max_iterations=500):
    """Fit ``model`` to ``(x, y)`` by Levenberg-Marquardt.

    Parameters
    ----------
    model : CurveModel
        Curve with analytic Jacobian.
    x, y : array_like
        Data; must be non-empty and of equal length.
    init : array_like
        Starting parameter vector, length ``model.n_params``.
    weights : array_like, optional
        Per-point weights (inverse variances); default is unit weights.
    max_iterations : int
        Outer-iteration cap; exhausting it returns ``converged=False``.

    Raises
    ------
    RankDeficiencyError
        If the normal equations are structurally singular (a parameter with
        an identically zero Jacobian column) or unsolvable at maximum damping.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    p = np.array(init, dtype=np.float64)
    if x.size == 0 or x.shape != y.shape:
        raise InvalidParameterError("x and y must be non-empty and of equal length")
    if p.shape != (model.n_params,):
        raise InvalidParameterError(
            f"init must have length {model.n_params}, got shape {p.shape}"
        )
    if weights is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != y.shape or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidParameterError("weights must be non-negative, finite, match y")

    def cost_of(params):
        f = model.value(x, params)
        r = y - f
        c = float(np.sum(w * r * r))
        return c if np.isfinite(c) else np.inf

    lam = _LAMBDA_START
    cost = cost_of(p)
    if not np.isfinite(cost):
        raise InvalidParameterError("model is non-finite at the initial parameters")
    converged = False
    notes = []
    n_iter = 0
    rtol, gtol = 1e-10, 1e-10

    for n_iter in range(1, max_iterations + 1):
        f, jac = model.value_and_jacobian(x, p)
        r = y - f
        if not np.all(np.isfinite(jac)):
            notes.append("model Jacobian became non-finite; fit abandoned")
            break
        grad = jac.T @ (w * r)
        a = (jac.T * w) @ jac
        norm = np.sqrt(cost)
        if n_iter == 1 and np.any(np.diag(a) == 0.0):
            raise RankDeficiencyError(
                f"model '{model.name}' has a parameter with zero sensitivity on this data"
            )
        if np.max(np.abs(grad)) <= gtol * (1.0 + norm):
            converged = True
            break

        accepted = False
        while lam <= _LAMBDA_MAX:
            damped = a + lam * np.diag(np.diag(a))
            try:
                step = np.linalg.solve(damped, grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            if not np.all(np.isfinite(step)):
                lam *= 10.0
                continue
            trial = p + step
            trial_cost = cost_of(trial)
            if trial_cost < cost:
                rel_drop = (np.sqrt(cost) - np.sqrt(trial_cost)) / max(np.sqrt(cost), 1e-300)
                p = trial
                cost = trial_cost
                lam = max(lam / 10.0, _LAMBDA_MIN)
                accepted = True
                if rel_drop < rtol:
                    converged = True
                break
            lam *= 10.0
        if converged:
            break
        if not accepted:
            if np.sqrt(cost) <= 1e-300 or np.max(np.abs(grad)) <= 1e-8 * (1.0 + np.sqrt(cost)):
                converged = True
            else:
                notes.append("no acceptable step at maximum damping")
            break

    # Covariance from the undamped normal equations at the final parameters.
    f, jac = model.value_and_jacobian(x, p)
    r = y - f
    a = (jac.T * w) @ jac
    n, n_par = y.size, model.n_params
    dof = n - n_par
    sigma2 = float(np.sum(w * r * r)) / dof if dof > 0 else 1.0
    try:
        if not np.all(np.isfinite(a)):
            raise RankDeficiencyError("normal equations are non-finite")
        inv, ill = _psd_inverse(a)
    except RankDeficiencyError:
        if converged:
            raise
        inv, ill = np.full((n_par, n_par), np.nan), True
    if ill:
        notes.append("covariance is ill-conditioned; degenerate parameter directions")
    covariance = sigma2 * inv

    return FitResult(
        params=p,
        covariance=covariance,
        residual_norm=float(np.sqrt(cost)),
        n_iterations=n_iter,
        converged=converged,
        model_name=model.name,
        warnings=notes,
    )
