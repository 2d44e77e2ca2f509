"""Zero-noise extrapolation: global circuit folding and fits to the zero-noise
limit. Only mean energies are fitted; standard errors are carried for
reporting, not weighting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .circuit import Circuit, EstimatorResult, NoiseModel, estimate, inverse_circuit
from .pauli import PauliSum


class ZNEError(ValueError):
    pass


@dataclass(frozen=True)
class ZNEPoint:
    fold: int
    energy: EstimatorResult


@dataclass(frozen=True)
class FitResult:
    model: str
    e_zero: float
    params: tuple[float, ...]
    residual: float
    fallback: bool = False


@dataclass(frozen=True)
class ZNEResult:
    raw: float
    points: list[ZNEPoint] = field(hash=False)
    fits: dict[str, FitResult] = field(hash=False)


def fold_circuit(c: Circuit, n: int) -> Circuit:
    """Global fold C (C^dagger C)^((n-1)/2); noiselessly identical to C."""
    if n < 1 or n % 2 == 0:
        raise ZNEError(f"fold factor must be an odd positive integer, got {n}")
    if n == 1:
        return c.copy()
    inv = inverse_circuit(c)
    out = c.copy()
    for _ in range((n - 1) // 2):
        out.extend(inv.gates)
        out.extend(c.gates)
    return out


FIT_MODELS = ("linear", "quadratic", "exponential")


def extrapolate(points: list[ZNEPoint], model: str) -> FitResult:
    """Least-squares fit of mean energy vs fold; evaluate at zero noise."""
    lam = np.array([p.fold for p in points], dtype=float)
    e = np.array([p.energy.mean for p in points])
    if len(set(lam)) != len(lam):
        raise ZNEError("duplicate fold factors")
    need = 2 if model == "linear" else 3
    if len(lam) < need:
        raise ZNEError(f"{model} fit needs at least {need} points, got {len(lam)}")
    if model == "linear":
        coeffs = np.polyfit(lam, e, 1)
        resid = float(np.sum((np.polyval(coeffs, lam) - e) ** 2))
        return FitResult(model, float(np.polyval(coeffs, 0.0)), tuple(coeffs), resid)
    if model == "quadratic":
        coeffs = np.polyfit(lam, e, 2)
        resid = float(np.sum((np.polyval(coeffs, lam) - e) ** 2))
        return FitResult(model, float(np.polyval(coeffs, 0.0)), tuple(coeffs), resid)
    if model == "exponential":
        # a + b exp(-c lam), c >= 0; initial guess from successive differences
        # when they look geometric, otherwise from the linear fit
        order = np.argsort(lam)
        ls, es = lam[order], e[order]
        p0 = None
        if len(ls) >= 3 and abs(ls[1] - ls[0] - (ls[2] - ls[1])) < 1e-12:
            d1, d2 = es[1] - es[0], es[2] - es[1]
            if d1 != 0 and d2 / d1 > 0:
                c0 = -np.log(d2 / d1) / (ls[1] - ls[0])
                if c0 > 0:
                    b0 = d1 / (np.exp(-c0 * ls[0]) * (np.exp(-c0 * (ls[1] - ls[0])) - 1.0))
                    p0 = [float(es[0] - b0 * np.exp(-c0 * ls[0])), float(b0), float(c0)]
        if p0 is None:
            lin = np.polyfit(lam, e, 1)
            p0 = [float(np.polyval(lin, 0.0)), float(lin[0]) or 1e-3, 0.1]

        def f(x, a, b, c):
            return a + b * np.exp(-c * x)

        try:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                popt, _ = curve_fit(
                    f, lam, e, p0=p0,
                    bounds=([-np.inf, -np.inf, 0.0], [np.inf, np.inf, np.inf]),
                    maxfev=10000)
            resid = float(np.sum((f(lam, *popt) - e) ** 2))
            return FitResult(model, float(f(0.0, *popt)), tuple(popt), resid)
        except (RuntimeError, ValueError):
            quad = extrapolate(points, "quadratic")
            return FitResult(model, quad.e_zero, quad.params, quad.residual, fallback=True)
    raise ZNEError(f"unknown extrapolation model {model!r}")


def run_zne(c: Circuit, bindings, h: PauliSum, folds: list[int], shots: int,
            seed: int, noise: NoiseModel, models=FIT_MODELS) -> ZNEResult:
    """Measure every fold under the same noise model and extrapolate.

    Every fold is measured with the same seed and noise model, mirroring a
    single measurement session.
    """
    if sorted(folds) != list(folds) or not folds or folds[0] != 1:
        raise ZNEError("folds must be ascending and include 1")
    points = []
    for f in folds:
        folded = fold_circuit(c, f)
        points.append(ZNEPoint(f, estimate(folded, bindings, h, shots, seed, noise=noise)))
    fits = {}
    for model in models:
        need = 2 if model == "linear" else 3
        if len(points) >= need:
            fits[model] = extrapolate(points, model)
    return ZNEResult(points[0].energy.mean, points, fits)
