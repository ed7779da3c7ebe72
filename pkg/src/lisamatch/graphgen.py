"""Synthetic matching instances: random points, dense Euclidean graphs,
Delaunay-sparse graphs, random relabelling and edge noise."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rng
from .core import (AffinityMatrix, DomainError, GraphInstance, GraphKind, Matching, PointSet)
from .delaunay import delaunay_edges


@dataclass(frozen=True)
class NoiseSpec:
    """``B_ij <- |B_ij + level * eps|`` on ``edges_perturbed`` random edges,
    ``eps`` uniform on the open interval ``epsilon_range``.

    ``edges_perturbed=None`` means one edge per node.
    """

    level: float
    epsilon_range: tuple[float, float] = (-0.01, 0.01)
    edges_perturbed: Optional[int] = None

    def __post_init__(self) -> None:
        lo, hi = self.epsilon_range
        if self.level < 0:
            raise DomainError("noise level must be non-negative")
        if not lo < hi or lo != -hi:
            raise DomainError("epsilon range must be an interval symmetric about 0")
        if self.edges_perturbed is not None and self.edges_perturbed < 0:
            raise DomainError("edges_perturbed must be non-negative")


def gen_points(n: int, seed: int) -> PointSet:
    if n < 1:
        raise DomainError("need at least one point")
    return PointSet(rng.stream(seed, rng.POINTS).random((n, 2)))


def dense_euclidean(p: PointSet) -> AffinityMatrix:
    xy = p.coordinates
    if len(xy) < 2:
        raise DomainError("a dense graph needs at least 2 points")
    d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    return AffinityMatrix.from_dense(d, check=False)


def sparse_weighted(p: PointSet) -> AffinityMatrix:
    xy = p.coordinates
    e = delaunay_edges(xy)
    w = np.hypot(*(xy[e[:, 0]] - xy[e[:, 1]]).T)
    return AffinityMatrix.from_edges(len(xy), e[:, 0], e[:, 1], w)


def sparse_binary(p: PointSet) -> AffinityMatrix:
    e = delaunay_edges(p.coordinates)
    return AffinityMatrix.from_edges(len(p), e[:, 0], e[:, 1])


GENERATORS = {
    GraphKind.DENSE_WEIGHTED: dense_euclidean,
    GraphKind.SPARSE_WEIGHTED: sparse_weighted,
    GraphKind.SPARSE_BINARY: sparse_binary,
}


def apply_permutation(a: AffinityMatrix, perm) -> AffinityMatrix:
    """Relabel node ``i`` as ``perm[i]``: ``B[perm[i], perm[j]] = A[i, j]``."""
    return a.relabeled(perm)


def permute_instance(a: AffinityMatrix, seed: int) -> tuple[AffinityMatrix, Matching]:
    """Uniformly random relabelling of ``a``; the matching is the ground truth
    ``source i -> target perm[i]``."""
    perm = rng.stream(seed, rng.PERMUTATION).permutation(a.order)
    return apply_permutation(a, perm), Matching(tuple(perm.tolist()), a.order)


def _open_uniform(gen: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    u = gen.random(size)
    while np.any(u == 0.0):
        u[u == 0.0] = gen.random(int(np.sum(u == 0.0)))
    return lo + (hi - lo) * u


def perturb(a: AffinityMatrix, spec: NoiseSpec, seed: int) -> AffinityMatrix:
    """Add symmetric noise to randomly chosen undirected edges.

    Dense matrices draw among all off-diagonal pairs, sparse ones among their
    stored off-diagonal edges, so the sparsity pattern never changes.
    """
    n = a.order
    k = n if spec.edges_perturbed is None else int(spec.edges_perturbed)
    gen = rng.stream(seed, rng.NOISE)
    if a.is_sparse:
        r, c, w = a.upper_entries()
        candidates = np.flatnonzero(r != c)
    else:
        r, c = np.triu_indices(n, 1)
        candidates = np.arange(r.size)
    if k > candidates.size:
        raise DomainError(f"cannot perturb {k} edges, only {candidates.size} available")
    chosen = candidates[gen.choice(candidates.size, size=k, replace=False)]
    eps = _open_uniform(gen, *spec.epsilon_range, k)
    if a.is_sparse:
        w = w.copy()
        w[chosen] = np.abs(w[chosen] + spec.level * eps)
        return a.with_weights(w)
    d = a.to_dense().copy()
    i, j = r[chosen], c[chosen]
    new = np.abs(d[i, j] + spec.level * eps)
    d[i, j] = new
    d[j, i] = new
    return AffinityMatrix.from_dense(d, check=False)


def make_instance(kind, n: int, seed: int, noise: Optional[NoiseSpec] = None) -> GraphInstance:
    """Source graph from points, relabelled twin, then optional noise on the twin."""
    kind = GraphKind.parse(kind)
    if kind not in GENERATORS:
        raise DomainError(f"cannot generate graphs of kind {kind.value}")
    points = gen_points(n, seed)
    a = GENERATORS[kind](points)
    b, truth = permute_instance(a, seed)
    level = 0.0
    if noise is not None:
        b = perturb(b, noise, seed)
        level = float(noise.level)
    return GraphInstance(a=a, b=b, ground_truth=truth, kind=kind, noise_level=level,
                         seed=seed, points=points)
