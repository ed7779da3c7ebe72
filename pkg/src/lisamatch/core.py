"""Shared domain types: affinity matrices, matchings, point sets and instances.

Indices are 0-based throughout. A matching is stored as an index sequence,
``assignment[i]`` being the target node matched to source node ``i``; it is
never expanded to a 0/1 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.sparse as sp

SYMMETRY_TOL = 1e-12


class GraphMatchingError(Exception):
    """Base class for all library errors."""


class DimensionError(GraphMatchingError, ValueError):
    pass


class DomainError(GraphMatchingError, ValueError):
    pass


class DegenerateInputError(GraphMatchingError, ValueError):
    pass


class BreakdownError(GraphMatchingError, ArithmeticError):
    """Raised when an iteration produces a non-positive normaliser."""


class SizeLimitError(GraphMatchingError, MemoryError):
    pass


class ParseError(GraphMatchingError, ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class AffinityMatrix:
    """Symmetric, non-negative affinity matrix of an undirected graph.

    Two storages are supported. Dense matrices keep the full ``n x n`` array.
    Sparse matrices keep each undirected entry once, as an upper-triangle
    coordinate list sorted by ``(row, col)``; the full symmetric CSR matrix
    used for products is derived on first use.

    Build instances with :meth:`from_dense` or :meth:`from_edges`.
    """

    __slots__ = ("_n", "_dense", "_rows", "_cols", "_weights", "_csr")

    def __init__(self) -> None:
        raise TypeError("use AffinityMatrix.from_dense or AffinityMatrix.from_edges")

    @classmethod
    def from_dense(cls, array, *, check: bool = True) -> "AffinityMatrix":
        a = np.array(array, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionError(f"affinity matrix must be square and non-empty, got shape {a.shape}")
        if check:
            if not np.all(np.isfinite(a)):
                raise DomainError("affinity matrix has non-finite entries")
            if np.any(a < 0):
                raise DomainError("affinity matrix has negative entries")
            if np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
                raise DomainError("affinity matrix is not symmetric")
        obj = object.__new__(cls)
        obj._n = a.shape[0]
        obj._dense = _frozen(a)
        obj._rows = obj._cols = obj._weights = None
        obj._csr = None
        return obj

    @classmethod
    def from_edges(cls, n: int, rows, cols, weights=None) -> "AffinityMatrix":
        """Sparse matrix from an edge list; each unordered pair may occur once."""
        n = int(n)
        if n < 1:
            raise DimensionError("order must be positive")
        r = np.asarray(rows, dtype=np.int64).ravel()
        c = np.asarray(cols, dtype=np.int64).ravel()
        if r.shape != c.shape:
            raise DimensionError("rows and cols differ in length")
        w = (np.ones(r.shape[0]) if weights is None
             else np.asarray(weights, dtype=np.float64).ravel().copy())
        if w.shape != r.shape:
            raise DimensionError("weights differ in length from rows")
        if r.size and (r.min() < 0 or c.min() < 0 or r.max() >= n or c.max() >= n):
            raise DimensionError("edge index out of range")
        if not np.all(np.isfinite(w)):
            raise DomainError("non-finite edge weight")
        if np.any(w < 0):
            raise DomainError("negative edge weight")
        lo, hi = np.minimum(r, c), np.maximum(r, c)
        order = np.lexsort((hi, lo))
        lo, hi, w = lo[order], hi[order], w[order]
        if lo.size > 1:
            dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
            if np.any(dup):
                k = int(np.argmax(dup))
                raise DomainError(f"duplicate entry ({lo[k]}, {hi[k]})")
        obj = object.__new__(cls)
        obj._n = n
        obj._dense = None
        obj._rows, obj._cols, obj._weights = _frozen(lo), _frozen(hi), _frozen(w)
        obj._csr = None
        return obj

    # -- structure -----------------------------------------------------
    @property
    def order(self) -> int:
        return self._n

    @property
    def is_sparse(self) -> bool:
        return self._dense is None

    @property
    def nnz(self) -> int:
        """Number of stored entries (upper triangle, diagonal included)."""
        if self.is_sparse:
            return int(self._weights.size)
        return self._n * (self._n + 1) // 2

    def upper_entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(rows, cols, weights)`` of the stored upper triangle, ``rows <= cols``."""
        if self.is_sparse:
            return self._rows, self._cols, self._weights
        r, c = np.triu_indices(self._n)
        return r, c, self._dense[r, c]

    def to_dense(self) -> np.ndarray:
        if not self.is_sparse:
            return self._dense
        out = np.zeros((self._n, self._n))
        out[self._rows, self._cols] = self._weights
        out[self._cols, self._rows] = self._weights
        return out

    def to_csr(self) -> sp.csr_matrix:
        """Full symmetric CSR matrix (cached)."""
        if self._csr is None:
            if self.is_sparse:
                off = self._rows != self._cols
                r = np.concatenate([self._rows, self._cols[off]])
                c = np.concatenate([self._cols, self._rows[off]])
                w = np.concatenate([self._weights, self._weights[off]])
                m = sp.csr_matrix((w, (r, c)), shape=(self._n, self._n))
            else:
                m = sp.csr_matrix(self._dense)
            m.sort_indices()
            self._csr = m
        return self._csr

    def get(self, i: int, j: int) -> float:
        if not self.is_sparse:
            return float(self._dense[i, j])
        return float(self.to_csr()[i, j])

    def is_zero(self) -> bool:
        if self.is_sparse:
            return not np.any(self._weights)
        return not np.any(self._dense)

    def frobenius_norm(self) -> float:
        if not self.is_sparse:
            return float(np.linalg.norm(self._dense))
        w = self._weights
        off = self._rows != self._cols
        return float(np.sqrt(np.sum(w * w) + np.sum(w[off] * w[off])))

    # -- products ------------------------------------------------------
    def matvec(self, x: np.ndarray) -> np.ndarray:
        if self.is_sparse:
            return self.to_csr() @ x
        return self._dense @ x

    def matmat(self, x: np.ndarray) -> np.ndarray:
        """``A @ X`` for a dense ``X``; returns a dense array."""
        if self.is_sparse:
            return np.asarray(self.to_csr() @ x)
        return self._dense @ x

    # -- derived matrices ----------------------------------------------
    def relabeled(self, perm) -> "AffinityMatrix":
        """Matrix ``B`` with ``B[perm[i], perm[j]] = A[i, j]``."""
        p = np.asarray(perm, dtype=np.int64)
        if p.shape != (self._n,):
            raise DimensionError("permutation length differs from matrix order")
        if not self.is_sparse:
            inv = np.empty_like(p)
            inv[p] = np.arange(self._n)
            return AffinityMatrix.from_dense(self._dense[np.ix_(inv, inv)], check=False)
        return AffinityMatrix.from_edges(self._n, p[self._rows], p[self._cols], self._weights)

    def with_weights(self, weights) -> "AffinityMatrix":
        """Sparse matrix with the same pattern and new stored weights."""
        if not self.is_sparse:
            raise TypeError("with_weights needs sparse storage")
        return AffinityMatrix.from_edges(self._n, self._rows, self._cols, weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffinityMatrix):
            return NotImplemented
        if self._n != other._n or self.is_sparse != other.is_sparse:
            return False
        if not self.is_sparse:
            return bool(np.array_equal(self._dense, other._dense))
        return (np.array_equal(self._rows, other._rows)
                and np.array_equal(self._cols, other._cols)
                and np.array_equal(self._weights, other._weights))

    __hash__ = None

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"AffinityMatrix(order={self._n}, {kind}, nnz={self.nnz})"


@dataclass(frozen=True)
class Matching:
    """Injective map from ``source_size`` nodes into ``target_size`` nodes.

    The constructor does not enforce injectivity; use :func:`validate_matching`.
    """

    assignment: tuple[int, ...]
    target_size: int = -1

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(int(j) for j in self.assignment))
        if self.target_size < 0:
            object.__setattr__(self, "target_size", len(self.assignment))

    @property
    def source_size(self) -> int:
        return len(self.assignment)

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls(tuple(range(n)), n)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)

    def inverse(self) -> "Matching":
        if self.source_size != self.target_size:
            raise DimensionError("only balanced matchings are invertible")
        inv = [0] * self.source_size
        for i, j in enumerate(self.assignment):
            inv[j] = i
        return Matching(tuple(inv), self.source_size)

    def __len__(self) -> int:
        return len(self.assignment)

    def __getitem__(self, i: int) -> int:
        return self.assignment[i]


@dataclass(frozen=True)
class SpectralScores:
    values: np.ndarray
    dominant_value: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PointSet:
    coordinates: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coordinates, dtype=np.float64)
        if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] < 1:
            raise DimensionError("a point set is a non-empty (n, 2) array")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite coordinate")
        object.__setattr__(self, "coordinates", _frozen(c))

    def __len__(self) -> int:
        return self.coordinates.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return bool(np.array_equal(self.coordinates, other.coordinates))

    __hash__ = None


class GraphKind(str, Enum):
    DENSE_WEIGHTED = "dense_weighted"
    SPARSE_WEIGHTED = "sparse_weighted"
    SPARSE_BINARY = "sparse_binary"
    EXTERNAL = "external"

    @classmethod
    def parse(cls, text: "str | GraphKind") -> "GraphKind":
        if isinstance(text, GraphKind):
            return text
        key = str(text).strip().lower().replace("-", "_")
        if key == "dense":
            key = "dense_weighted"
        return cls(key)


@dataclass(frozen=True)
class GraphInstance:
    a: AffinityMatrix
    b: AffinityMatrix
    ground_truth: Optional[Matching] = None
    kind: GraphKind = GraphKind.EXTERNAL
    noise_level: float = 0.0
    seed: int = 0
    points: Optional[PointSet] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        gt = self.ground_truth
        if gt is not None and (gt.source_size != self.a.order or gt.target_size != self.b.order):
            raise DimensionError("ground truth sizes differ from matrix orders")


def validate_matching(m: Matching) -> bool:
    """True iff ``m`` is injective with every target in ``[0, target_size)``."""
    a = m.assignment
    if len(a) > m.target_size:
        return False
    seen = set()
    for j in a:
        if j < 0 or j >= m.target_size or j in seen:
            return False
        seen.add(j)
    return True


def _check_pair(a: AffinityMatrix, b: AffinityMatrix, m: Matching) -> np.ndarray:
    if m.source_size != a.order or m.target_size != b.order:
        raise DimensionError(
            f"matching maps {m.source_size}->{m.target_size} nodes, "
            f"matrices have orders {a.order} and {b.order}")
    return m.as_array()


def _pulled_back(b: AffinityMatrix, idx: np.ndarray):
    """``B[idx][:, idx]`` in b's storage kind."""
    if b.is_sparse:
        return b.to_csr()[idx][:, idx]
    return b.to_dense()[np.ix_(idx, idx)]


def kb_discrepancy(a: AffinityMatrix, b: AffinityMatrix, m: Matching) -> float:
    """Koopmans-Beckmann objective ``sum_ij (A_ij - B_{m(i) m(j)})**2``."""
    idx = _check_pair(a, b, m)
    if a.order != b.order:
        raise DimensionError("kb_discrepancy needs equally sized graphs")
    pb = _pulled_back(b, idx)
    if a.is_sparse and b.is_sparse:
        d = (a.to_csr() - pb).tocsr()
        return float(np.sum(d.data * d.data))
    pb = pb.toarray() if sp.issparse(pb) else pb
    d = a.to_dense() - pb
    return float(np.sum(d * d))


def affinity_score(a: AffinityMatrix, b: AffinityMatrix, m: Matching) -> float:
    """Lawler objective for ``W = A (x) B``: ``sum_ij A_ij * B_{m(i) m(j)}``."""
    idx = _check_pair(a, b, m)
    if a.is_sparse:
        r, c, w = a.upper_entries()
        if b.is_sparse:
            bv = np.asarray(b.to_csr()[idx[r], idx[c]]).ravel()
        else:
            bv = b.to_dense()[idx[r], idx[c]]
        contrib = w * bv
        off = r != c
        return float(np.sum(contrib) + np.sum(contrib[off]))
    pb = _pulled_back(b, idx)
    pb = pb.toarray() if sp.issparse(pb) else pb
    return float(np.sum(a.to_dense() * pb))
