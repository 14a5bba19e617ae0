"""Brute-force ground truth for tiny instances.

Nothing here calls the simplex solver or the verifier.  Game values are
approximated from above by searching the simplex lattice {i/k}; the
left-hand side is computed by enumerating S and scanning the cycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceError
from .instance import Instance
from .l0 import Rv

MAX_FUNCTIONS = 5
MAX_POINTS = 5
MAX_ATOMS = 3
MAX_LATTICE = 3_000_000
MAX_SELECTIONS = 4096


@dataclass(frozen=True)
class GridSpec:
    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise DomainError(f"grid resolution must be >= 1, got {self.resolution}")


@lru_cache(maxsize=32)
def _lattice(k: int, r: int) -> np.ndarray:
    """All nonnegative integer vectors of length r summing to k (stars and bars)."""
    size = math.comb(k + r - 1, r - 1)
    if size > MAX_LATTICE:
        raise ResourceError(f"simplex lattice has {size} points, cap is {MAX_LATTICE}", required=size)
    if r == 1:
        return np.array([[k]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(k + r - 1), r - 1)), dtype=np.int64)
    edges = np.hstack(
        [np.full((len(bars), 1), -1, dtype=np.int64), bars, np.full((len(bars), 1), k + r - 1, dtype=np.int64)]
    )
    out = np.diff(edges, axis=1) - 1
    out.setflags(write=False)
    return out


def brute_game(matrix, grid: GridSpec) -> Fraction:
    """min over lattice weights i/k of the max over columns of the weighted rows."""
    rows = [[Fraction(v) for v in r] for r in matrix]
    if not rows or not rows[0]:
        raise DomainError("empty matrix")
    if len(rows) > MAX_FUNCTIONS or len(rows[0]) > MAX_POINTS:
        raise ResourceError(
            f"{len(rows)}x{len(rows[0])} matrix exceeds the oracle cap {MAX_FUNCTIONS}x{MAX_POINTS}"
        )
    k = grid.resolution
    denom = math.lcm(*(v.denominator for r in rows for v in r))
    ints = [[int(v * denom) for v in r] for r in rows]
    lat = _lattice(k, len(rows))
    bound = k * max(abs(v) for r in ints for v in r) * len(rows)
    if bound < 2**62:
        payoff = lat @ np.array(ints, dtype=np.int64)
        best = int(payoff.max(axis=1).min())
    else:
        payoff = lat.astype(object) @ np.array(ints, dtype=object)
        best = min(max(row) for row in payoff)
    return Fraction(best, k * denom)


def _distinct(instance: Instance) -> list:
    out = []
    for f in list(instance.functions.preamble) + list(instance.functions.cycle):
        if all(f.table != g.table for g in out):
            out.append(f)
    return out


def brute_rhs(instance: Instance, grid: GridSpec) -> Rv:
    fns = _distinct(instance)
    if len(fns) > MAX_FUNCTIONS or len(instance.base_points) > MAX_POINTS or instance.space.size > MAX_ATOMS:
        raise ResourceError(
            f"oracle handles at most {MAX_FUNCTIONS} functions, {MAX_POINTS} base points, "
            f"{MAX_ATOMS} atoms"
        )
    out = []
    for i in range(instance.space.size):
        matrix = [[f.table[b].values[i] for b in instance.base_points] for f in fns]
        out.append(brute_game(matrix, grid))
    return Rv(instance.space, tuple(out))


def brute_lhs(instance: Instance, cap: int = MAX_SELECTIONS) -> Rv:
    space = instance.space
    if instance.selections is None:
        count = len(instance.base_points) ** space.size
        if count > cap:
            raise ResourceError(f"{count} selections exceed the oracle cap {cap}", required=count)
        family = [tuple(p) for p in itertools.product(instance.base_points, repeat=space.size)]
    else:
        family = [z.points for z in instance.selections]
    best = [None] * space.size
    for z in family:
        for i, b in enumerate(z):
            # esslimsup of an eventually periodic sequence: scan one full cycle
            top = None
            for f in instance.functions.cycle:
                v = f.table[b].values[i]
                top = v if top is None or v > top else top
            if best[i] is None or top > best[i]:
                best[i] = top
    return Rv(space, tuple(best))


def entry_range(instance: Instance) -> Rv:
    """Per atom, max entry minus min entry over all functions and base points."""
    fns = _distinct(instance)
    out = []
    for i in range(instance.space.size):
        vals = [f.table[b].values[i] for f in fns for b in instance.base_points]
        out.append(max(vals) - min(vals))
    return Rv(instance.space, tuple(out))
