"""Power iteration, deflated second eigenpair, eigengap and the
leading-eigenvector perturbation bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (AffinityMatrix, BreakdownError, DegenerateInputError, DimensionError,
                   DomainError, SpectralScores)

Callback = Callable[[int, np.ndarray], None]


@dataclass(frozen=True)
class PowerConfig:
    """Stopping rule of the power method.

    Iteration stops once ``max|x_k - x_{k-1}| < tolerance`` or after
    ``max_iterations`` steps. ``initial_vector=None`` starts from all ones.
    """

    tolerance: float = 1e-4
    max_iterations: int = 1000
    initial_vector: Optional[Sequence[float]] = None

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        if int(self.max_iterations) < 1:
            raise DomainError("max_iterations must be at least 1")


@dataclass(frozen=True)
class EigenPairEstimate:
    vector: SpectralScores
    value: float


def _iterate(matvec: Callable[[np.ndarray], np.ndarray], x: np.ndarray, cfg: PowerConfig,
             signed: bool, callback: Optional[Callback]) -> tuple[np.ndarray, int, bool, float]:
    # signed=False divides by max(z) (Perron direction); signed=True divides by the
    # entry of largest magnitude so negative eigenvalues do not make the sign flip.
    converged = False
    k = 0
    scale = np.nan
    for k in range(1, int(cfg.max_iterations) + 1):
        z = matvec(x)
        if signed:
            scale = z[int(np.argmax(np.abs(z)))]
            if scale == 0 or not np.isfinite(scale):
                raise BreakdownError(f"iterate vanished at step {k}")
        else:
            scale = z.max()
            if not scale > 0 or not np.isfinite(scale):
                raise BreakdownError(f"max(W x) = {scale} at step {k}")
        x_new = z / scale
        step = np.max(np.abs(x_new - x))
        x = x_new
        if callback is not None:
            callback(k, x)
        if step < cfg.tolerance:
            converged = True
            break
    return x, k, converged, float(scale)


def _start_vector(n: int, cfg: PowerConfig) -> np.ndarray:
    if cfg.initial_vector is None:
        return np.ones(n)
    x = np.array(cfg.initial_vector, dtype=np.float64)
    if x.shape != (n,):
        raise DimensionError(f"initial vector has shape {x.shape}, expected ({n},)")
    return x


def power_method(a: AffinityMatrix, cfg: PowerConfig = PowerConfig(),
                 callback: Optional[Callback] = None) -> SpectralScores:
    """Max-normalised power iteration ``x <- A x / max(A x)``.

    Returns the final iterate (its maximum is exactly 1) together with
    ``mu = max(A x)`` evaluated at that iterate. Hitting ``max_iterations`` is
    reported through ``converged=False``, not raised.
    """
    if a.is_zero():
        raise DegenerateInputError("power method on the zero matrix")
    x, k, ok, _ = _iterate(a.matvec, _start_vector(a.order, cfg), cfg, False, callback)
    mu = float(np.max(a.matvec(x)))
    return SpectralScores(values=x, dominant_value=mu, iterations=k, converged=ok)


def rayleigh_quotient(a: AffinityMatrix, x: np.ndarray) -> float:
    return float(x @ a.matvec(x) / (x @ x))


def leading_eigenpair(a: AffinityMatrix, cfg: PowerConfig = PowerConfig()) -> EigenPairEstimate:
    s = power_method(a, cfg)
    return EigenPairEstimate(vector=s, value=rayleigh_quotient(a, s.values))


def _weyl_vector(n: int) -> np.ndarray:
    # deterministic, generic start: fractional parts of multiples of the golden ratio
    g = (math.sqrt(5.0) - 1.0) / 2.0
    return np.mod(np.arange(1, n + 1) * g, 1.0) - 0.5


def second_eigenpair(a: AffinityMatrix, first: EigenPairEstimate,
                     cfg: PowerConfig = PowerConfig(), *, which: str = "magnitude",
                     callback: Optional[Callback] = None) -> EigenPairEstimate:
    """Second eigenpair by power iteration on the deflated operator.

    The operator is ``v -> A v - lam1 (u.v) u`` with ``u`` the unit leading
    vector; each iterate is also projected onto the complement of ``u``.
    ``which="magnitude"`` converges to the remaining eigenvalue of largest
    modulus (possibly negative). ``which="algebraic"`` shifts the operator by
    ``|lam1|`` so the algebraically second largest eigenvalue dominates.
    The returned vector is normalised by its largest-magnitude entry, hence
    its maximum is 1; the value is the Rayleigh quotient.
    """
    n = a.order
    if n < 2:
        raise DegenerateInputError("a second eigenpair needs order >= 2")
    if a.is_zero():
        raise DegenerateInputError("second eigenpair of the zero matrix")
    if which not in ("magnitude", "algebraic"):
        raise ValueError(f"unknown which={which!r}")
    phi = np.asarray(first.vector.values, dtype=np.float64)
    u = phi / np.linalg.norm(phi)
    lam1 = float(first.value)
    shift = abs(lam1) if which == "algebraic" else 0.0

    def op(v: np.ndarray) -> np.ndarray:
        z = a.matvec(v) - lam1 * (u @ v) * u + shift * v
        return z - (u @ z) * u

    x0 = _weyl_vector(n) if cfg.initial_vector is None else _start_vector(n, cfg)
    x0 = x0 - (u @ x0) * u
    if not np.any(np.abs(x0) > 1e-300):
        raise BreakdownError("start vector is parallel to the leading eigenvector")
    x, k, ok, _ = _iterate(op, x0, cfg, True, callback)
    value = rayleigh_quotient(a, x)
    return EigenPairEstimate(
        vector=SpectralScores(values=x, dominant_value=value, iterations=k, converged=ok),
        value=value)


def eigengap(a: AffinityMatrix, cfg: PowerConfig = PowerConfig()) -> float:
    """``lam1 - lam2`` for the two algebraically largest eigenvalues of ``a``."""
    first = leading_eigenpair(a, cfg)
    second = second_eigenpair(a, first, cfg, which="algebraic")
    return max(first.value - second.value, 0.0)


def perturbation_bound(e_frobenius: float, rho: float) -> Optional[float]:
    """Bound on ``||phi - phi~||_2`` for unit leading eigenvectors of ``A`` and
    ``A + E`` given ``||E||_F`` and the eigengap ``rho`` of ``A``.

    Returns ``None`` when ``sqrt(2) ||E||_F > rho / 2``, where the bound does
    not apply.
    """
    if e_frobenius < 0 or not math.isfinite(e_frobenius):
        raise DomainError("||E||_F must be finite and non-negative")
    if not rho > 0 or not math.isfinite(rho):
        raise DomainError("eigengap must be positive")
    s = math.sqrt(2.0) * e_frobenius
    if s > rho / 2:
        return None
    return 4.0 * e_frobenius / (rho - s)


def unit_aligned(reference: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2-normalise both vectors and flip ``v`` to maximise their inner product."""
    r = np.asarray(reference, dtype=np.float64)
    w = np.asarray(v, dtype=np.float64)
    r = r / np.linalg.norm(r)
    w = w / np.linalg.norm(w)
    if r @ w < 0:
        w = -w
    return r, w
