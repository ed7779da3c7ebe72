"""Independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, sweeps: int = 100):
    """Cyclic Jacobi rotations; eigenvalues ascending, eigenvectors as columns."""
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * max(1.0, np.linalg.norm(a)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    w = np.diag(a)
    order = np.argsort(w)
    return w[order], v[:, order]


def max_normalized(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v / v.max()


# -- Delaunay by exhaustion ---------------------------------------------------

def _det4(rows) -> Fraction:
    m = [list(r) for r in rows]
    n = 4
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for k in range(col, n):
                m[r][k] -= f * m[col][k]
    return det


def _lifted(p, bump=0):
    x, y = Fraction(p[0]), Fraction(p[1])
    return [x, y, x * x + y * y + bump, Fraction(1)]


def _inside_exact(tri, d, pts, rank) -> bool:
    """d strictly inside the circumcircle of ccw triangle ``tri`` under the
    lexicographic lifting perturbation."""
    idx = list(tri) + [d]
    det = _det4([_lifted(pts[i]) for i in idx])
    if det != 0:
        return det > 0
    for v in sorted(idx, key=lambda i: rank[i]):
        rows = [_lifted(pts[i], 1 if i == v else 0) for i in idx]
        coeff = _det4(rows) - det
        if coeff != 0:
            return coeff > 0
    raise AssertionError("coincident points")


def _orient_fraction(p, q, r) -> Fraction:
    px, py, qx, qy, rx, ry = (Fraction(v) for v in (*p, *q, *r))
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def brute_delaunay_edges(points) -> set[tuple[int, int]]:
    """Edges of all triangles with empty (perturbed) circumcircles, O(n^4)."""
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    rank = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: tuple(pts[i])))}
    tris = np.array(list(itertools.combinations(range(n), 3)))
    a, b, c = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    area = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    # orient every triangle counter-clockwise (exact sign when the float one is unsure)
    for t in np.flatnonzero(np.abs(area) < 1e-12):
        area[t] = float(np.sign(_orient_fraction(*pts[tris[t]])))
    keep = area != 0
    tris, area = tris[keep], area[keep]
    flip = area < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    p, q, r = (pts[tris[:, k]][:, None, :] for k in range(3))
    ad, bd, cd = p - pts[None], q - pts[None], r - pts[None]
    det = ((ad ** 2).sum(-1) * (bd[..., 0] * cd[..., 1] - cd[..., 0] * bd[..., 1])
           + (bd ** 2).sum(-1) * (cd[..., 0] * ad[..., 1] - ad[..., 0] * cd[..., 1])
           + (cd ** 2).sum(-1) * (ad[..., 0] * bd[..., 1] - bd[..., 0] * ad[..., 1]))
    det[np.arange(len(tris))[:, None], tris] = -np.inf  # own vertices
    edges: set[tuple[int, int]] = set()
    for t in np.flatnonzero(~np.any(det > 1e-9, axis=1)):
        tri = tuple(int(v) for v in tris[t])
        unsure = np.flatnonzero(np.abs(det[t]) <= 1e-9)
        if any(_inside_exact(tri, int(x), pts, rank) for x in unsure):
            continue
        i, j, k = tri
        edges.update({(min(i, j), max(i, j)), (min(j, k), max(j, k)), (min(i, k), max(i, k))})
    return edges


class UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)

    def components(self) -> int:
        return len({self.find(x) for x in range(len(self.parent))})
