"""Incremental Delaunay triangulation (Bowyer-Watson) with exact predicates.

Predicates are evaluated in floating point behind Shewchuk's static error
bounds and fall back to exact rational arithmetic when the sign is uncertain.
Exactly cocircular quadruples are resolved by symbolic perturbation of the
lifting map: point ``p`` is lifted to ``|p|^2 + eps**rank(p)`` where ``rank``
orders points lexicographically by ``(x, y)``. The result is the unique
triangulation of the perturbed configuration, independent of insertion order.

The hull is closed with ghost triangles ``(a, b, GHOST)`` (a vertex at
infinity) instead of a finite super-triangle, so hull edges are exact too.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import DegenerateInputError

GHOST = -1

_EPS = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)


def orient2d(a, b, c) -> int:
    """Sign of the signed area of ``(a, b, c)``: +1 counter-clockwise."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    left = (ax - cx) * (by - cy)
    right = (ay - cy) * (bx - cx)
    det = left - right
    if abs(det) > _CCW_BOUND * (abs(left) + abs(right)):
        return 1 if det > 0 else -1
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _incircle_exact(a, b, c, d) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = map(Fraction, (*a, *b, *c, *d))
    adx, ady, bdx, bdy, cdx, cdy = ax - dx, ay - dy, bx - dx, by - dy, cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def incircle(a, b, c, d) -> int:
    """+1 if ``d`` is strictly inside the circle through ccw ``a, b, c``."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bc = bdx * cdy - cdx * bdy
    ca = cdx * ady - adx * cdy
    ab = adx * bdy - bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * bc + blift * ca + clift * ab
    perm = ((abs(bdx * cdy) + abs(cdx * bdy)) * alift
            + (abs(cdx * ady) + abs(adx * cdy)) * blift
            + (abs(adx * bdy) + abs(bdx * ady)) * clift)
    if abs(det) > _ICC_BOUND * perm:
        return 1 if det > 0 else -1
    return _incircle_exact(a, b, c, d)


def incircle_perturbed(pts, rank, ia: int, ib: int, ic: int, id_: int) -> int:
    """In-circle sign with the lexicographic lifting perturbation; never 0
    for four distinct points of which ``a, b, c`` are not collinear."""
    a, b, c, d = pts[ia], pts[ib], pts[ic], pts[id_]
    s = incircle(a, b, c, d)
    if s != 0:
        return s
    # derivative of the in-circle determinant with respect to each lift height
    coeff = {
        ia: lambda: orient2d(b, c, d),
        ib: lambda: orient2d(c, a, d),
        ic: lambda: orient2d(a, b, d),
        id_: lambda: -orient2d(a, b, c),
    }
    for v in sorted(coeff, key=rank.__getitem__):
        s = coeff[v]()
        if s != 0:
            return s
    raise DegenerateInputError("in-circle test on coincident points")


def _hilbert_order(xy: np.ndarray, bits: int = 16) -> np.ndarray:
    lo = xy.min(axis=0)
    span = float(np.max(xy.max(axis=0) - lo)) or 1.0
    side = 1 << bits
    q = np.minimum(((xy - lo) / span * (side - 1)).astype(np.int64), side - 1)
    x, y = q[:, 0].copy(), q[:, 1].copy()
    d = np.zeros(len(xy), dtype=np.int64)
    s = side >> 1
    while s > 0:
        rx = (x & s) > 0
        ry = (y & s) > 0
        d += s * s * ((3 * rx) ^ ry)
        # rotate quadrant
        flip = ~ry & rx
        x = np.where(flip, side - 1 - x, x)
        y = np.where(flip, side - 1 - y, y)
        swap = ~ry
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        s >>= 1
    return np.argsort(d, kind="stable")


class _Triangulation:
    def __init__(self, pts: list[tuple[float, float]]) -> None:
        self.pts = pts
        order = sorted(range(len(pts)), key=pts.__getitem__)
        self.rank = [0] * len(pts)
        for r, i in enumerate(order):
            self.rank[i] = r
        self.tri: list[list[int]] = []
        self.nbr: list[list[int]] = []
        self.alive: list[bool] = []
        self.last = 0

    def _new(self, v) -> int:
        self.tri.append(list(v))
        self.nbr.append([-1, -1, -1])
        self.alive.append(True)
        return len(self.tri) - 1

    def _link_all(self, ids) -> None:
        edge = {}
        for t in ids:
            v = self.tri[t]
            for i in range(3):
                edge[(v[(i + 1) % 3], v[(i + 2) % 3])] = (t, i)
        for (u, w), (t, i) in edge.items():
            self.nbr[t][i] = edge[(w, u)][0]

    def start(self, a: int, b: int, c: int) -> None:
        if orient2d(self.pts[a], self.pts[b], self.pts[c]) < 0:
            b, c = c, b
        ids = [self._new((a, b, c)), self._new((b, a, GHOST)),
               self._new((c, b, GHOST)), self._new((a, c, GHOST))]
        self._link_all(ids)
        self.last = ids[0]

    def _conflict(self, t: int, p: int) -> bool:
        v = self.tri[t]
        pts = self.pts
        if GHOST in v:
            k = v.index(GHOST)
            a, b = v[(k + 1) % 3], v[(k + 2) % 3]
            o = orient2d(pts[a], pts[b], pts[p])
            if o != 0:
                return o > 0
            # collinear with the hull edge: conflict iff strictly inside the segment
            (ax, ay), (bx, by), (px, py) = pts[a], pts[b], pts[p]
            if ax != bx:
                return min(ax, bx) < px < max(ax, bx)
            return min(ay, by) < py < max(ay, by)
        return incircle_perturbed(pts, self.rank, v[0], v[1], v[2], p) > 0

    def _locate(self, p: int) -> int:
        pts = self.pts
        pp = pts[p]
        t = self.last
        if not self.alive[t]:
            t = next(i for i in range(len(self.tri) - 1, -1, -1) if self.alive[i])
        if GHOST in self.tri[t]:
            k = self.tri[t].index(GHOST)
            t = self.nbr[t][k]
        while True:
            v = self.tri[t]
            if GHOST in v:
                return t
            for i in range(3):
                a, b = v[(i + 1) % 3], v[(i + 2) % 3]
                if orient2d(pts[a], pts[b], pp) < 0:
                    t = self.nbr[t][i]
                    break
            else:
                return t

    def insert(self, p: int) -> None:
        t0 = self._locate(p)
        cavity = {t0}
        stack = [t0]
        tested = {}
        boundary = []
        while stack:
            t = stack.pop()
            v = self.tri[t]
            for i in range(3):
                nb = self.nbr[t][i]
                if nb in cavity:
                    continue
                hit = tested.get(nb)
                if hit is None:
                    hit = tested[nb] = self._conflict(nb, p)
                    if hit:
                        cavity.add(nb)
                        stack.append(nb)
                        continue
                if not hit:
                    boundary.append((v[(i + 1) % 3], v[(i + 2) % 3], nb, t))
        by_b, by_c = {}, {}
        for u, w, outer, old in boundary:
            nt = self._new((p, u, w))
            self.nbr[nt][0] = outer
            on = self.nbr[outer]
            on[on.index(old)] = nt
            by_b[u] = nt
            by_c[w] = nt
        for nt in by_b.values():
            _, u, w = self.tri[nt]
            self.nbr[nt][1] = by_b[w]
            self.nbr[nt][2] = by_c[u]
        for t in cavity:
            self.alive[t] = False
        self.last = nt

    def triangles(self) -> np.ndarray:
        out = [v for v, ok in zip(self.tri, self.alive) if ok and GHOST not in v]
        return np.array(out, dtype=np.int64).reshape(-1, 3)


def triangulate(points) -> np.ndarray:
    """Counter-clockwise Delaunay triangles, as rows of point indices."""
    xy = np.asarray(points, dtype=np.float64)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise DegenerateInputError("points must be an (n, 2) array")
    n = xy.shape[0]
    if n < 3:
        raise DegenerateInputError(f"a triangulation needs at least 3 points, got {n}")
    if not np.all(np.isfinite(xy)):
        raise DegenerateInputError("non-finite coordinate")
    pts = [(float(x), float(y)) for x, y in xy]
    if len(set(pts)) != n:
        raise DegenerateInputError("duplicate points")
    order = _hilbert_order(xy).tolist()
    a, b = order[0], order[1]
    c_pos = next((k for k in range(2, n)
                  if orient2d(pts[a], pts[b], pts[order[k]]) != 0), None)
    if c_pos is None:
        raise DegenerateInputError("all points are collinear")
    tr = _Triangulation(pts)
    tr.start(a, b, order[c_pos])
    for k in range(2, n):
        if k != c_pos:
            tr.insert(order[k])
    return tr.triangles()


def edges_of(triangles: np.ndarray) -> np.ndarray:
    """Sorted unique undirected edges ``(i, j)``, ``i < j``."""
    t = np.asarray(triangles, dtype=np.int64)
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    e = np.sort(e, axis=1)
    return np.unique(e, axis=0)


def delaunay_edges(points) -> np.ndarray:
    return edges_of(triangulate(points))
