"""Plain-text and JSON file formats.

Matrix file::

    gm-matrix v1 <n> <nnz> <dense|sparse>
    i j w            # one line per stored upper-triangle entry, 0-based

Points file::

    gm-points v1 <n>
    x y

Matching file: JSON ``{"n", "m", "pairs", "algorithm", "seconds"}``.

Floats are written with ``repr`` (shortest round-trip decimal), so every
format reloads bit-exactly. All files are UTF-8 with LF line endings; ``#``
starts a comment line.
"""

from __future__ import annotations

import json
import os
import warnings
from typing import Iterator, Optional

import numpy as np

from .core import (AffinityMatrix, DegenerateInputError, DomainError, Matching, ParseError,
                   PointSet)


def _data_lines(path) -> Iterator[tuple[int, list[str]]]:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            yield lineno, s.split()


def _write(path, lines: list[str]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {os.fspath(path)}: {exc.strerror or exc}") from exc


def _int(tok: str, path, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: expected an integer, got {tok!r}") from None


def _float(tok: str, path, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"{path}:{lineno}: expected a number, got {tok!r}") from None


# -- matrices -----------------------------------------------------------------

def save_matrix(a: AffinityMatrix, path) -> None:
    r, c, w = a.upper_entries()
    kind = "sparse" if a.is_sparse else "dense"
    lines = [f"gm-matrix v1 {a.order} {len(w)} {kind}"]
    lines.extend(f"{i} {j} {x!r}" for i, j, x in zip(r.tolist(), c.tolist(), w.tolist()))
    _write(path, lines)


def load_matrix(path) -> AffinityMatrix:
    it = _data_lines(path)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError(f"{path}: empty file") from None
    if len(head) != 5 or head[:2] != ["gm-matrix", "v1"] or head[4] not in ("dense", "sparse"):
        raise ParseError(f"{path}:{lineno}: bad header {' '.join(head)!r}")
    n, nnz = _int(head[2], path, lineno), _int(head[3], path, lineno)
    if n < 1:
        raise ParseError(f"{path}:{lineno}: order must be positive")
    rows, cols, weights = [], [], []
    for lineno, tok in it:
        if len(tok) != 3:
            raise ParseError(f"{path}:{lineno}: expected 'i j w'")
        rows.append(_int(tok[0], path, lineno))
        cols.append(_int(tok[1], path, lineno))
        weights.append(_float(tok[2], path, lineno))
    if len(weights) != nnz:
        raise ParseError(f"{path}: header declares {nnz} entries, found {len(weights)}")
    if head[4] == "sparse":
        return AffinityMatrix.from_edges(n, rows, cols, weights)
    r, c = np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)
    if r.size and (r.min() < 0 or c.min() < 0 or r.max() >= n or c.max() >= n):
        raise ParseError(f"{path}: index out of range for order {n}")
    d = np.zeros((n, n))
    d[r, c] = weights
    d[c, r] = weights
    return AffinityMatrix.from_dense(d)


# -- points -------------------------------------------------------------------

def save_points(p: PointSet, path) -> None:
    lines = [f"gm-points v1 {len(p)}"]
    lines.extend(f"{x!r} {y!r}" for x, y in p.coordinates.tolist())
    _write(path, lines)


def load_points(path) -> PointSet:
    it = _data_lines(path)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError(f"{path}: empty file") from None
    if len(head) != 3 or head[:2] != ["gm-points", "v1"]:
        raise ParseError(f"{path}:{lineno}: bad header {' '.join(head)!r}")
    n = _int(head[2], path, lineno)
    coords = []
    for lineno, tok in it:
        if len(tok) != 2:
            raise ParseError(f"{path}:{lineno}: expected 'x y'")
        coords.append((_float(tok[0], path, lineno), _float(tok[1], path, lineno)))
    if len(coords) != n:
        raise ParseError(f"{path}: header declares {n} points, found {len(coords)}")
    return PointSet(np.array(coords))


# -- matchings ----------------------------------------------------------------

def matching_to_json(m: Matching, algorithm: Optional[str] = None,
                     seconds: Optional[float] = None) -> dict:
    return {
        "n": m.source_size,
        "m": m.target_size,
        "pairs": [[i, j] for i, j in enumerate(m.assignment)],
        "algorithm": algorithm,
        "seconds": seconds,
    }


def save_matching(m: Matching, path, algorithm: Optional[str] = None,
                  seconds: Optional[float] = None) -> None:
    _write(path, [json.dumps(matching_to_json(m, algorithm, seconds))])


def matching_from_json(obj: dict) -> Matching:
    try:
        n, m, pairs = int(obj["n"]), int(obj["m"]), obj["pairs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"matching JSON lacks a valid field: {exc}") from None
    assignment = [-1] * n
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"matching pair must be [src, tgt], got {pair!r}")
        i, j = int(pair[0]), int(pair[1])
        if not 0 <= i < n or assignment[i] != -1:
            raise ParseError(f"bad or repeated source index {i}")
        assignment[i] = j
    if -1 in assignment:
        raise ParseError("matching JSON does not cover every source node")
    return Matching(tuple(assignment), m)


def load_matching(path) -> Matching:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    return matching_from_json(obj)


# -- SNAP-style edge lists ----------------------------------------------------

def load_edge_list(path, *, base: int = 0, weighted: bool = False,
                   symmetrize: bool = True) -> AffinityMatrix:
    """Read a whitespace-separated ``u v [w]`` edge list into a sparse matrix.

    Node labels are integers ``>= base``; they are renumbered ``0..n-1`` in
    order of first appearance. With ``weighted=False`` every edge gets weight
    1; otherwise the third column is used where present (default 1).
    Self-loops are dropped with a warning. With ``symmetrize=True`` each line
    defines an undirected edge and later duplicates overwrite earlier ones.
    With ``symmetrize=False`` the file must list both directions of every edge
    with equal weights.
    """
    index: dict[int, int] = {}
    directed: dict[tuple[int, int], float] = {}
    loops = 0
    for lineno, tok in _data_lines(path):
        if len(tok) not in (2, 3):
            raise ParseError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {len(tok)} fields")
        u, v = _int(tok[0], path, lineno), _int(tok[1], path, lineno)
        if u < base or v < base:
            raise ParseError(f"{path}:{lineno}: node label below base {base}")
        w = _float(tok[2], path, lineno) if (weighted and len(tok) == 3) else 1.0
        if not np.isfinite(w):
            raise DomainError(f"{path}:{lineno}: non-finite weight")
        if w < 0:
            raise DomainError(f"{path}:{lineno}: negative weight {w}")
        iu = index.setdefault(u, len(index))
        iv = index.setdefault(v, len(index))
        if iu == iv:
            loops += 1
            continue
        if symmetrize:
            directed[(min(iu, iv), max(iu, iv))] = w
        else:
            directed[(iu, iv)] = w
    if loops:
        warnings.warn(f"{path}: dropped {loops} self-loop(s)", stacklevel=2)
    if not directed:
        raise DegenerateInputError(f"{path}: no edges")
    if not symmetrize:
        undirected = {}
        for (i, j), w in directed.items():
            if directed.get((j, i)) != w:
                raise DomainError(f"{path}: edge {i}-{j} is not mirrored with equal weight; "
                                  "pass symmetrize=True")
            undirected[(min(i, j), max(i, j))] = w
        directed = undirected
    keys = list(directed)
    rows = [i for i, _ in keys]
    cols = [j for _, j in keys]
    return AffinityMatrix.from_edges(len(index), rows, cols, [directed[k] for k in keys])


def save_edge_list(a: AffinityMatrix, path, *, base: int = 0) -> None:
    """Write stored off-diagonal entries as ``u v w`` lines."""
    r, c, w = a.upper_entries()
    lines = [f"{i + base} {j + base} {x!r}"
             for i, j, x in zip(r.tolist(), c.tolist(), w.tolist()) if i != j and x != 0]
    _write(path, lines)
