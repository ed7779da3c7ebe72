"""End-to-end graph matchers: LiSA, SM and SM-KB.

``a`` is the source graph (``n`` nodes) and ``b`` the target graph
(``m >= n`` nodes); every result maps source nodes to target nodes.

Vectorisation convention: ``vec`` stacks columns, so an ``n x m`` matrix ``X``
becomes ``X.ravel(order="F")``. With that convention the pair affinity is
``W = B (x) A`` and ``W @ vec(X) == vec(A @ X @ B)`` for symmetric factors.
The profit entry for pair ``(i, j)`` is the same under either convention.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg.blas import dsymv

from .assign import greedy_discretize, one_dim_assign
from .core import (AffinityMatrix, BreakdownError, DegenerateInputError, DimensionError,
                   Matching, SizeLimitError, SpectralScores)
from .spectral import PowerConfig, _iterate, power_method

SM_DEFAULT_CAP = 150 * 150
ALGORITHMS = ("lisa", "sm", "smkb")


@dataclass(frozen=True)
class MatchResult:
    matching: Matching
    iterations: int
    converged: bool
    wall_seconds: float
    algorithm: str


def _check_inputs(a: AffinityMatrix, b: AffinityMatrix) -> None:
    if a.order > b.order:
        raise DimensionError(f"source graph has {a.order} nodes, target only {b.order}")
    if a.is_zero() or b.is_zero():
        raise DegenerateInputError("cannot match against an all-zero affinity matrix")


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).ravel(order="F")


def unvec(v: np.ndarray, n: int, m: int) -> np.ndarray:
    return np.asarray(v).reshape((n, m), order="F")


def kron_affinity(a: AffinityMatrix, b: AffinityMatrix):
    """Materialise ``W = B (x) A`` (order ``n*m``); sparse iff both inputs are."""
    n, m = a.order, b.order
    if a.is_sparse and b.is_sparse:
        return sp.kron(b.to_csr(), a.to_csr(), format="csr")
    ad, bd = a.to_dense(), b.to_dense()
    w = np.empty((n * m, n * m))
    blocks = w.reshape(m, n, m, n)
    for j in range(m):
        # block row j: blocks[j, i, l, k] = B[j, l] * A[i, k]
        np.multiply(ad[:, None, :], bd[j][None, :, None], out=blocks[j])
    return w


def _kron_upper_operator(a: AffinityMatrix, b: AffinityMatrix):
    """Dense ``W`` in symmetric storage: only the upper triangle is filled and
    the product uses BLAS ``symv``, which never reads the other half."""
    n, m = a.order, b.order
    ad, bd = a.to_dense(), b.to_dense()
    w = np.empty((n * m, n * m))
    blocks = w.reshape(m, n, m, n)
    for j in range(m):
        np.multiply(ad[:, None, :], bd[j, j:][None, :, None], out=blocks[j, :, j:, :])
    del blocks
    # the transpose is Fortran-ordered, so BLAS sees our upper triangle as its lower one
    wt = w.T
    return lambda x: dsymv(1.0, wt, x, lower=1)


def sm_relaxation(a: AffinityMatrix, b: AffinityMatrix, cfg: PowerConfig = PowerConfig(), *,
                  cap: int = SM_DEFAULT_CAP,
                  callback: Optional[Callable[[int, np.ndarray], None]] = None,
                  ) -> tuple[np.ndarray, SpectralScores]:
    """Leading eigenvector of the materialised ``W``, reshaped to ``n x m``."""
    n, m = a.order, b.order
    if n * m > cap:
        raise SizeLimitError(
            f"SM materialises a {n * m}x{n * m} affinity matrix; n*m = {n * m} exceeds the cap "
            f"of {cap} (default {SM_DEFAULT_CAP}, i.e. 150x150 nodes)")
    if a.is_sparse and b.is_sparse:
        matvec = kron_affinity(a, b).dot
    else:
        matvec = _kron_upper_operator(a, b)
    x0 = np.ones(n * m) if cfg.initial_vector is None else np.array(cfg.initial_vector, float)
    # dominant value is the last normaliser max(W x_{k-1}); saves one O((nm)^2) product
    x, k, ok, mu = _iterate(matvec, x0, cfg, False, callback)
    del matvec
    return unvec(x, n, m), SpectralScores(values=x, dominant_value=mu, iterations=k, converged=ok)


def _right_mul(x: np.ndarray, b: AffinityMatrix) -> np.ndarray:
    # X @ B computed as (B @ X^T)^T, valid because B is symmetric
    if b.is_sparse:
        return np.asarray(b.to_csr() @ x.T).T
    return x @ b.to_dense()


def smkb_relaxation(a: AffinityMatrix, b: AffinityMatrix, cfg: PowerConfig = PowerConfig(), *,
                    callback: Optional[Callable[[int, np.ndarray], None]] = None,
                    ) -> tuple[np.ndarray, int, bool]:
    """Matrix fixed point ``X <- A X B / max(A X B)`` from ``11^T / (n m)``."""
    n, m = a.order, b.order
    x = np.full((n, m), 1.0 / (n * m))
    converged = False
    k = 0
    for k in range(1, int(cfg.max_iterations) + 1):
        z = _right_mul(a.matmat(x), b)
        top = z.max()
        if not top > 0 or not np.isfinite(top):
            raise BreakdownError(f"max(A X B) = {top} at step {k}")
        x_new = z / top
        step = np.max(np.abs(x_new - x))
        x = x_new
        if callback is not None:
            callback(k, x)
        if step < cfg.tolerance:
            converged = True
            break
    return x, k, converged


def lisa_match(a: AffinityMatrix, b: AffinityMatrix, cfg: PowerConfig = PowerConfig(), *,
               parallel: bool = False) -> MatchResult:
    """Lightning spectral assignment.

    Computes the max-normalised leading eigenvectors of both graphs and pairs
    nodes by descending score. Nothing of size ``n x m`` is ever allocated.
    ``iterations`` is the sum over the two eigenvector computations.
    """
    t0 = time.perf_counter()
    _check_inputs(a, b)
    if parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fa = pool.submit(power_method, a, cfg)
            fb = pool.submit(power_method, b, cfg)
            sa, sb = fa.result(), fb.result()
    else:
        sa = power_method(a, cfg)
        sb = power_method(b, cfg)
    matching = one_dim_assign(sa.values, sb.values)
    return MatchResult(matching, sa.iterations + sb.iterations, sa.converged and sb.converged,
                       time.perf_counter() - t0, "lisa")


def sm_match(a: AffinityMatrix, b: AffinityMatrix, cfg: PowerConfig = PowerConfig(), *,
             cap: int = SM_DEFAULT_CAP) -> MatchResult:
    """Classic spectral matching: power method on the full ``W``, greedy rounding."""
    t0 = time.perf_counter()
    _check_inputs(a, b)
    profit, scores = sm_relaxation(a, b, cfg, cap=cap)
    matching = greedy_discretize(profit)
    return MatchResult(matching, scores.iterations, scores.converged,
                       time.perf_counter() - t0, "sm")


def smkb_match(a: AffinityMatrix, b: AffinityMatrix,
               cfg: PowerConfig = PowerConfig()) -> MatchResult:
    t0 = time.perf_counter()
    _check_inputs(a, b)
    profit, k, ok = smkb_relaxation(a, b, cfg)
    matching = greedy_discretize(profit)
    return MatchResult(matching, k, ok, time.perf_counter() - t0, "smkb")


MATCHERS = {"lisa": lisa_match, "sm": sm_match, "smkb": smkb_match}


def run_matcher(name: str, a: AffinityMatrix, b: AffinityMatrix,
                cfg: PowerConfig = PowerConfig(), **options) -> MatchResult:
    try:
        fn = MATCHERS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}") from None
    return fn(a, b, cfg, **options)
