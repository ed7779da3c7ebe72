"""Discretisation back-ends: sorting assignment, greedy rounding and an
exhaustive linear-assignment oracle."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .core import DimensionError, DomainError, Matching, SizeLimitError

BRUTE_FORCE_LIMIT = 9


def _descending_order(v: np.ndarray) -> np.ndarray:
    # stable: equal values keep ascending index order
    return np.argsort(-v, kind="stable")


def one_dim_assign(phi, phi_t) -> Matching:
    """Match two score vectors by rank.

    Both vectors are sorted in descending order and the k-th largest entry of
    ``phi`` is paired with the k-th largest of ``phi_t``. By the rearrangement
    inequality this maximises ``sum_i phi[i] * phi_t[m(i)]`` over all
    injections, including the unbalanced case ``len(phi) < len(phi_t)`` where
    only the top ``len(phi)`` targets are used. Runs in ``O(m log m)``.
    """
    x = np.asarray(phi, dtype=np.float64).ravel()
    y = np.asarray(phi_t, dtype=np.float64).ravel()
    n, m = x.size, y.size
    if n < 1:
        raise DimensionError("empty source vector")
    if n > m:
        raise DimensionError(f"cannot inject {n} sources into {m} targets")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("non-finite score")
    assignment = np.empty(n, dtype=np.int64)
    assignment[_descending_order(x)] = _descending_order(y)[:n]
    return Matching(tuple(assignment.tolist()), m)


def greedy_discretize(x) -> Matching:
    """Greedy rounding of a profit matrix.

    Takes the largest remaining entry, fixes that pair and removes its row and
    column, ``n`` times. Ties go to the smallest row, then smallest column.
    Dense ``O(n * n * m)`` scan; no heap.
    """
    p = np.array(x, dtype=np.float64, order="C")
    if p.ndim != 2 or p.size == 0:
        raise DimensionError(f"profit matrix must be a non-empty 2-D array, got shape {p.shape}")
    n, m = p.shape
    if n > m:
        raise DimensionError(f"cannot inject {n} rows into {m} columns")
    if np.any(np.isnan(p)):
        raise DomainError("profit matrix contains NaN")
    assignment = [0] * n
    flat = p.reshape(-1)  # view: masking below must show through
    for _ in range(n):
        k = int(np.argmax(flat))
        i, j = divmod(k, m)
        assignment[i] = j
        p[i, :] = -np.inf
        p[:, j] = -np.inf
    return Matching(tuple(assignment), m)


@lru_cache(maxsize=32)
def _injections(n: int, m: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(m), n)), dtype=np.int64).reshape(-1, n)


def brute_force_lap(x) -> tuple[Matching, float]:
    """Exact maximum-profit injection by enumeration (test oracle, ``m <= 9``).

    Returns the first optimum in lexicographic enumeration order.
    """
    p = np.asarray(x, dtype=np.float64)
    if p.ndim != 2 or p.size == 0:
        raise DimensionError("profit matrix must be a non-empty 2-D array")
    n, m = p.shape
    if n > m:
        raise DimensionError(f"cannot inject {n} rows into {m} columns")
    if m > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(f"brute force limited to {BRUTE_FORCE_LIMIT} columns, got {m}")
    cand = _injections(n, m)
    totals = p[np.arange(n), cand].sum(axis=1)
    best = int(np.argmax(totals))
    return Matching(tuple(cand[best].tolist()), m), float(totals[best])


def assignment_objective(phi, phi_t, m: Matching) -> float:
    """``sum_i phi[i] * phi_t[m(i)]``."""
    x = np.asarray(phi, dtype=np.float64)
    y = np.asarray(phi_t, dtype=np.float64)
    return float(np.sum(x * y[m.as_array()]))
