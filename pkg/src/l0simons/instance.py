"""Finite encoding of a Simons-type problem.

The domain ``E`` is the set of selections: maps from atoms to base
points.  A base function is a table ``base point -> Rv`` and acts on a
selection by ``f(X)(w) = table[X(w)](w)``.  The selection subset ``S``
is either every selection or an explicit list.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ResourceError, StructuralError
from .l0 import EventuallyPeriodicSeq, ProbSpace, Rv, ess_sup, in_ball
from .minimax import MixtureWeights, mix

DEFAULT_SELECTION_CAP = 4096

HOLDS = "HOLDS"
HOLDS_ON_SAMPLES = "HOLDS-ON-SAMPLES"
FAILS = "FAILS"


@dataclass(frozen=True)
class BaseFunction:
    table: Mapping[str, Rv]

    def __getitem__(self, point: str) -> Rv:
        return self.table[point]


@dataclass(frozen=True)
class Selection:
    """One base point per atom, stored in atom order."""

    points: tuple[str, ...]

    @classmethod
    def from_map(cls, space: ProbSpace, assignment: Mapping[str, str]) -> Selection:
        missing = [l for l in space.labels if l not in assignment]
        if missing:
            raise StructuralError(f"selection does not assign atoms {missing}")
        extra = set(assignment) - set(space.labels)
        if extra:
            raise StructuralError(f"selection assigns unknown atoms {sorted(extra)}")
        return cls(tuple(assignment[l] for l in space.labels))

    def as_map(self, space: ProbSpace) -> dict[str, str]:
        return dict(zip(space.labels, self.points))


@dataclass(frozen=True)
class Instance:
    space: ProbSpace
    base_points: tuple[str, ...]
    functions: EventuallyPeriodicSeq
    epsilon: Rv
    selections: tuple[Selection, ...] | None = None  # None means every selection

    @property
    def all_selections(self) -> bool:
        return self.selections is None

    def points_at(self, atom: int) -> list[str]:
        """Base points that some member of S takes at ``atom``, in base-point order."""
        if self.selections is None:
            return list(self.base_points)
        used = {z.points[atom] for z in self.selections}
        return [b for b in self.base_points if b in used]


@dataclass(frozen=True)
class DistinctFunctions:
    """The finite range of the function sequence, with stable ids f0, f1, ..."""

    tables: dict[str, BaseFunction]
    preamble_ids: tuple[str, ...]
    cycle_ids: tuple[str, ...]
    tail: dict[str, bool] = field(default_factory=dict)

    @property
    def ids(self) -> list[str]:
        return list(self.tables)

    @property
    def tail_ids(self) -> list[str]:
        return [i for i in self.tables if self.tail[i]]

    def ids_from(self, n: int) -> list[str]:
        """Distinct ids among the terms with index >= n (1-based), in id order."""
        wanted = set(self.preamble_ids[n - 1 :]) | set(self.cycle_ids)
        return [i for i in self.tables if i in wanted]

    def expand(self) -> EventuallyPeriodicSeq:
        return EventuallyPeriodicSeq(
            tuple(self.tables[i] for i in self.preamble_ids),
            tuple(self.tables[i] for i in self.cycle_ids),
        )


@dataclass(frozen=True)
class HypothesisVerdict:
    status: str
    detail: str
    witness: MixtureWeights | None = None

    @property
    def usable(self) -> bool:
        return self.status != FAILS


def validate(instance: Instance) -> list[str]:
    """Diagnostics for an instance; an empty list means it is valid."""
    out: list[str] = []
    space = instance.space
    total = sum(space.masses, Fraction(0))
    if total != 1:
        out.append(f"masses sum to {total} ≠ 1")
    if not instance.base_points:
        out.append("no base points")
    if len(set(instance.base_points)) != len(instance.base_points):
        out.append("base point labels are not unique")
    eps = instance.epsilon
    if eps.space != space:
        out.append("epsilon lives on a different probability space")
        return out
    if not eps.is_strictly_positive():
        bad = [l for l, v in zip(space.labels, eps.values) if v <= 0]
        out.append(f"epsilon is not strictly positive at atoms {bad}")
        return out
    segments = [("preamble", instance.functions.preamble), ("cycle", instance.functions.cycle)]
    for seg, items in segments:
        for k, f in enumerate(items):
            name = f"{seg}[{k}]"
            missing = [b for b in instance.base_points if b not in f.table]
            if missing:
                out.append(f"function {name} misses base points {missing}")
            extra = [b for b in f.table if b not in instance.base_points]
            if extra:
                out.append(f"function {name} mentions unknown base points {extra}")
            for b in instance.base_points:
                if b not in f.table:
                    continue
                val = f.table[b]
                if val.space != space:
                    out.append(f"function {name} at {b!r} lives on a different space")
                    continue
                if in_ball(val, eps):
                    continue
                for label, v, r in zip(space.labels, val.values, eps.values):
                    if abs(v) > r:
                        out.append(
                            f"ball violation: function {name} at base point {b!r}, "
                            f"atom {label!r}: |{v}| > {r}"
                        )
    if instance.selections is not None:
        if not instance.selections:
            out.append("explicit S is empty")
        for k, z in enumerate(instance.selections):
            if len(z.points) != space.size:
                out.append(f"selection S[{k}] does not assign every atom")
            bad = [b for b in z.points if b not in instance.base_points]
            if bad:
                out.append(f"selection S[{k}] uses unknown base points {bad}")
    return out


def enumerate_E(instance: Instance, cap: int = DEFAULT_SELECTION_CAP) -> list[Selection]:
    """All selections, lexicographic in (atom order, base-point order)."""
    count = len(instance.base_points) ** instance.space.size
    if count > cap:
        raise ResourceError(
            f"{count} selections exceed the cap of {cap}", required=count
        )
    return [
        Selection(p)
        for p in itertools.product(instance.base_points, repeat=instance.space.size)
    ]


def selections_of(instance: Instance, cap: int = DEFAULT_SELECTION_CAP) -> list[Selection]:
    if instance.selections is None:
        return enumerate_E(instance, cap)
    return list(instance.selections)


def evaluate(f: BaseFunction, x: Selection) -> Rv:
    first = next(iter(f.table.values()))
    space = first.space
    if len(x.points) != space.size:
        raise StructuralError("selection does not match the probability space")
    vals = []
    for i, b in enumerate(x.points):
        try:
            vals.append(f.table[b].values[i])
        except KeyError:
            raise StructuralError(f"unknown base point {b!r}") from None
    return Rv(space, tuple(vals))


def distinct_functions(seq: EventuallyPeriodicSeq) -> DistinctFunctions:
    tables: dict[str, BaseFunction] = {}

    def ident(f: BaseFunction) -> str:
        for key, g in tables.items():
            if g == f:
                return key
        key = f"f{len(tables)}"
        tables[key] = f
        return key

    pre = tuple(ident(f) for f in seq.preamble)
    cyc = tuple(ident(f) for f in seq.cycle)
    tail = {i: i in cyc for i in tables}
    return DistinctFunctions(tables, pre, cyc, tail)


def mixture_sup(instance: Instance, fns: DistinctFunctions, w: MixtureWeights) -> Rv:
    """Supremum over E of the mixture, i.e. the per-atom max over base points."""
    vals = []
    for i in range(instance.space.size):
        vals.append(
            max(
                sum(
                    (wj * fns.tables[j].table[b].values[i] for j, wj in zip(w.ids, w.weights[i])),
                    Fraction(0),
                )
                for b in instance.base_points
            )
        )
    return Rv(instance.space, tuple(vals))


def _mixture_at(fns: DistinctFunctions, w: MixtureWeights, z: Selection) -> Rv:
    return mix(w, {j: evaluate(fns.tables[j], z) for j in w.ids})


def _dominant_selection(instance: Instance, fns: DistinctFunctions) -> Selection | None:
    for z in instance.selections or ():
        ok = all(
            fns.tables[j].table[z.points[i]].values[i] >= fns.tables[j].table[b].values[i]
            for i in range(instance.space.size)
            for j in fns.ids
            for b in instance.base_points
        )
        if ok:
            return z
    return None


def check_hypothesis(
    instance: Instance, samples: int = 64, seed: int = 0
) -> HypothesisVerdict:
    """Check that strictly positive mixtures attain their sup over E inside S.

    Every selection is in S when ``instance.selections`` is None, and then the
    per-atom argmax is itself a member of S.  For an explicit S, a selection
    dominating every base point at every atom settles it exactly; otherwise
    ``samples`` random strictly positive per-atom weight vectors are tried.
    """
    if instance.selections is None:
        return HypothesisVerdict(HOLDS, "per-atom argmax selection lies in S")
    fns = distinct_functions(instance.functions)
    n_all = len(instance.base_points) ** instance.space.size
    if len(set(instance.selections)) == n_all:
        return HypothesisVerdict(HOLDS, "S lists every selection; per-atom argmax lies in S")
    z = _dominant_selection(instance, fns)
    if z is not None:
        return HypothesisVerdict(
            HOLDS, f"selection {list(z.points)} dominates every base point for every function"
        )
    rng = random.Random(seed)
    ids = fns.ids
    for k in range(samples):
        rows = []
        for _ in range(instance.space.size):
            raw = [rng.randint(1, 100) for _ in ids]
            s = sum(raw)
            rows.append(tuple(Fraction(r, s) for r in raw))
        w = MixtureWeights(instance.space, tuple(ids), tuple(rows))
        target = mixture_sup(instance, fns, w)
        if not any(_mixture_at(fns, w, z) == target for z in instance.selections):
            return HypothesisVerdict(
                FAILS, f"sample {k}: no member of S attains the supremum over E", witness=w
            )
    return HypothesisVerdict(
        HOLDS_ON_SAMPLES, f"{samples} strictly positive mixtures attained in S (seed {seed})"
    )


def witness_refutes(instance: Instance, w: MixtureWeights) -> bool:
    """Independent recheck of a FAILS witness by enumerating E and S."""
    fns = distinct_functions(instance.functions)
    sup_e = mixture_sup(instance, fns, w)
    best_e = ess_sup([_mixture_at(fns, w, x) for x in enumerate_E(instance)])
    if best_e != sup_e:
        return False
    return w.strictly_positive and all(
        _mixture_at(fns, w, z) != sup_e for z in instance.selections or ()
    )

