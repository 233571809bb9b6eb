"""Uniform bucket grid for candidate element pairs within a cutoff."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .geometry import BeamElement

EXCLUDE_MODES = ("adjacent", "same_fiber", "none")


def element_aabb(elem: BeamElement):
    """Box around the Bezier control polygon of the Hermite segment (it contains the curve)."""
    Q = elem.q.reshape(4, 3)
    l3 = elem.ref_length / 3.0
    ctrl = np.array([Q[0], Q[0] + l3 * Q[1], Q[2] - l3 * Q[3], Q[2]])
    return ctrl.min(axis=0), ctrl.max(axis=0)


@dataclass
class BucketGrid:
    cell_size: float
    inflate: float
    cells: dict = field(default_factory=lambda: defaultdict(list))
    boxes: list = field(default_factory=list)
    node_ids: list = field(default_factory=list)
    fibers: list = field(default_factory=list)

    def cell_range(self, lo, hi):
        a = np.floor(lo / self.cell_size).astype(int)
        b = np.floor(hi / self.cell_size).astype(int)
        return a, b


def build(elements, cell_size: float, cutoff: float | None = None, fibers=None) -> BucketGrid:
    """Register every element in all cells overlapped by its box inflated by ``R + cutoff/2``.

    ``cutoff`` defaults to ``cell_size``. ``fibers`` optionally labels each
    element with a body id for same-fiber exclusion.
    """
    if not cell_size > 0:
        raise ValueError("cell size must be positive")
    cutoff = cell_size if cutoff is None else cutoff
    grid = BucketGrid(cell_size, 0.5 * cutoff)
    for idx, elem in enumerate(elements):
        lo, hi = element_aabb(elem)
        pad = elem.radius + grid.inflate
        lo, hi = lo - pad, hi + pad
        grid.boxes.append((lo, hi))
        grid.node_ids.append(elem.node_ids)
        grid.fibers.append(None if fibers is None else fibers[idx])
        if not math.isfinite(pad):
            continue
        a, b = grid.cell_range(lo, hi)
        for cell in itertools.product(*(range(a[k], b[k] + 1) for k in range(3))):
            grid.cells[cell].append(idx)
    return grid


def _excluded(grid: BucketGrid, i: int, j: int, exclude: str) -> bool:
    if exclude == "none":
        return False
    if exclude == "same_fiber" and grid.fibers[i] is not None and grid.fibers[i] == grid.fibers[j]:
        return True
    ni, nj = grid.node_ids[i], grid.node_ids[j]
    return ni is not None and nj is not None and bool(set(ni) & set(nj))


def candidate_pairs(grid: BucketGrid, cutoff: float | None = None, exclude: str = "adjacent"):
    """Sorted element-id pairs ``(i, j)`` with ``i < j`` sharing at least one cell.

    ``exclude='adjacent'`` drops pairs sharing a node, ``'same_fiber'`` drops
    all pairs within one body as well, ``'none'`` keeps everything but
    self-pairs. An infinite cutoff returns every admissible pair.
    """
    if exclude not in EXCLUDE_MODES:
        raise ValueError(f"exclude must be one of {EXCLUDE_MODES}")
    cutoff = 2 * grid.inflate if cutoff is None else cutoff
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    n = len(grid.boxes)
    if math.isinf(cutoff) or math.isinf(grid.inflate):
        found = itertools.combinations(range(n), 2)
    else:
        found = set()
        for members in grid.cells.values():
            if len(members) > 1:
                found.update(itertools.combinations(sorted(members), 2))
    return sorted(p for p in found if not _excluded(grid, p[0], p[1], exclude))


def search(elements, cutoff: float, exclude: str = "adjacent", fibers=None, cell_size=None):
    """Build a grid with the default cell size and return candidate pairs."""
    if cell_size is None:
        cell_size = cutoff if math.isfinite(cutoff) else 4.0 * max(e.radius for e in elements)
    if cell_size <= 0:
        cell_size = 4.0 * max(e.radius for e in elements)
    grid = build(elements, cell_size, cutoff, fibers)
    return candidate_pairs(grid, cutoff, exclude)
