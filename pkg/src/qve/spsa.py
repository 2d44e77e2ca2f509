"""Simultaneous Perturbation Stochastic Approximation with calibration.

Evaluation accounting per run: calibration_evals up front, then per iteration
two gradient evaluations plus one tracking evaluation, plus one final
evaluation (50 + 3*maxiter + 1 = 1251 at the defaults).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import EstimatorResult, derive_rng


class SPSAError(ValueError):
    pass


class CalibrationError(SPSAError):
    pass


@dataclass(frozen=True)
class SPSAConfig:
    alpha: float = 0.602
    gamma: float = 0.101
    big_a: float = 0.0
    c: float = 0.2
    a: float | None = None  # set by calibration when None
    maxiter: int = 400
    calibration_evals: int = 50
    target_first_step: float = 2.0 * np.pi / 10.0

    def __post_init__(self):
        if self.alpha <= 0 or self.gamma <= 0 or self.c <= 0:
            raise SPSAError("alpha, gamma, c must be positive")
        if self.maxiter < 1:
            raise SPSAError("maxiter must be >= 1")
        if self.calibration_evals % 2:
            raise SPSAError("calibration_evals must be even")


@dataclass(frozen=True)
class IterationRecord:
    k: int  # 1-based iteration index
    theta: np.ndarray = field(hash=False)
    energy: EstimatorResult
    function_evals_so_far: int


def _mean(value) -> float:
    return float(value.mean) if isinstance(value, EstimatorResult) else float(value)


def _as_result(value, shots=0, seed=0) -> EstimatorResult:
    if isinstance(value, EstimatorResult):
        return value
    return EstimatorResult(float(value), 0.0, shots, seed)


def gain_sequences(cfg: SPSAConfig, k: int) -> tuple[float, float]:
    """(a_k, c_k) for 1-based iteration k."""
    if k < 1:
        raise SPSAError("gain sequences are defined for k >= 1")
    if cfg.a is None:
        raise SPSAError("a is unset; run calibrate first")
    a_k = cfg.a / (cfg.big_a + k) ** cfg.alpha
    c_k = cfg.c / k ** cfg.gamma
    return a_k, c_k


def spsa_gradient(cost, theta: np.ndarray, c_k: float, delta: np.ndarray):
    """Two-sided simultaneous-perturbation gradient estimate (2 evaluations)."""
    if not np.all(np.abs(delta) == 1):
        raise SPSAError("perturbation must be a +-1 vector")
    e_plus = _mean(cost(theta + c_k * delta))
    e_minus = _mean(cost(theta - c_k * delta))
    return (e_plus - e_minus) / (2.0 * c_k) / delta


def calibrate(cost, theta0: np.ndarray, cfg: SPSAConfig,
              rng: np.random.Generator) -> float:
    """Set the a gain so the first update step has the target magnitude."""
    c1 = cfg.c
    mags = []
    for _ in range(cfg.calibration_evals // 2):
        delta = rng.integers(0, 2, size=theta0.shape[0]) * 2 - 1
        e_plus = _mean(cost(theta0 + c1 * delta))
        e_minus = _mean(cost(theta0 - c1 * delta))
        mags.append(abs(e_plus - e_minus) / (2.0 * c1))
    mean_mag = float(np.mean(mags))
    if mean_mag == 0.0:
        raise CalibrationError("all calibration gradient estimates are zero")
    return cfg.target_first_step * (cfg.big_a + 1) ** cfg.alpha / mean_mag


@dataclass(frozen=True)
class SPSAResult:
    theta: np.ndarray = field(hash=False)
    history: list[IterationRecord] = field(hash=False)
    final_energy: EstimatorResult = None
    n_evaluations: int = 0

    def __iter__(self):  # allows `theta, history = minimize(...)`
        return iter((self.theta, self.history))


def minimize(cost, theta0, cfg: SPSAConfig, seed: int, callback=None) -> SPSAResult:
    """SPSA descent; unpacks as (final theta, per-iteration history).

    `cost` maps a parameter vector to an EstimatorResult or a float. The run
    is deterministic for a fixed seed: perturbations come from the stream
    derived from (seed,). After the last iteration one extra evaluation is
    made at the final theta and reported as final_energy.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    if theta.ndim != 1 or theta.size == 0:
        raise SPSAError("theta0 must be a non-empty vector")
    rng = derive_rng(seed)
    if cfg.a is None:
        a = calibrate(cost, theta, cfg, rng)
        cfg = SPSAConfig(cfg.alpha, cfg.gamma, cfg.big_a, cfg.c, a,
                         cfg.maxiter, cfg.calibration_evals, cfg.target_first_step)
        evals = cfg.calibration_evals
    else:
        evals = 0
    history: list[IterationRecord] = []
    for k in range(1, cfg.maxiter + 1):
        a_k, c_k = gain_sequences(cfg, k)
        delta = rng.integers(0, 2, size=theta.size) * 2 - 1
        grad = spsa_gradient(cost, theta, c_k, delta)
        evals += 2
        theta = theta - a_k * grad
        tracked = _as_result(cost(theta))
        evals += 1
        record = IterationRecord(k, theta.copy(), tracked, evals)
        history.append(record)
        if callback is not None:
            callback(record)
    final = _as_result(cost(theta))
    evals += 1
    return SPSAResult(theta, history, final, evals)
