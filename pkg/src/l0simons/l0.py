"""Random variables on a finite atomic probability space.

Every atom carries positive mass, so an equivalence class of random
variables is a single vector of values and "almost surely" means "at
every atom".  All arithmetic is exact (``fractions.Fraction``).

>>> space = ProbSpace.uniform(["w1", "w2"])
>>> x = Rv.of(space, [1, 3])
>>> y = Rv.of(space, [2, 2])
>>> ess_sup([x, y]).values
(Fraction(2, 1), Fraction(3, 1))
>>> rv_leq(x, y) or rv_leq(y, x)
False
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Generic, Iterable, Sequence, TypeVar

from .errors import DomainError, StructuralError

T = TypeVar("T")


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and "p/q" strings; reject floats."""
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise DomainError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class ProbSpace:
    labels: tuple[str, ...]
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.labels) == 0:
            raise DomainError("a probability space needs at least one atom")
        if len(self.labels) != len(self.masses):
            raise StructuralError("labels and masses differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise DomainError(f"atom labels are not unique: {list(self.labels)}")
        for label, mass in zip(self.labels, self.masses):
            if mass <= 0:
                raise DomainError(f"atom {label!r} has non-positive mass {mass}")
        total = sum(self.masses, Fraction(0))
        if total != 1:
            raise DomainError(f"masses sum to {total} ≠ 1")

    @classmethod
    def of(cls, atoms: Iterable[tuple[str, object]]) -> ProbSpace:
        atoms = list(atoms)
        return cls(tuple(a for a, _ in atoms), tuple(to_fraction(p) for _, p in atoms))

    @classmethod
    def uniform(cls, labels: Sequence[str]) -> ProbSpace:
        n = len(labels)
        return cls(tuple(labels), tuple(Fraction(1, n) for _ in labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise StructuralError(f"unknown atom {label!r}") from None


@dataclass(frozen=True)
class Rv:
    """An element of L⁰: one exact rational per atom."""

    space: ProbSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.space.size:
            raise StructuralError(
                f"{len(self.values)} values for a space with {self.space.size} atoms"
            )

    @classmethod
    def of(cls, space: ProbSpace, values: Iterable[object]) -> Rv:
        return cls(space, tuple(to_fraction(v) for v in values))

    @classmethod
    def const(cls, space: ProbSpace, c) -> Rv:
        c = to_fraction(c)
        return cls(space, (c,) * space.size)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def _other(self, other) -> tuple[Fraction, ...]:
        if isinstance(other, Rv):
            _same_space(self, other)
            return other.values
        c = to_fraction(other)
        return (c,) * len(self.values)

    def __add__(self, other) -> Rv:
        o = self._other(other)
        return Rv(self.space, tuple(a + b for a, b in zip(self.values, o)))

    __radd__ = __add__

    def __sub__(self, other) -> Rv:
        o = self._other(other)
        return Rv(self.space, tuple(a - b for a, b in zip(self.values, o)))

    def __rsub__(self, other) -> Rv:
        o = self._other(other)
        return Rv(self.space, tuple(b - a for a, b in zip(self.values, o)))

    def __mul__(self, other) -> Rv:
        o = self._other(other)
        return Rv(self.space, tuple(a * b for a, b in zip(self.values, o)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Rv:
        o = self._other(other)
        if any(b == 0 for b in o):
            raise DomainError("division by a random variable with a zero value")
        return Rv(self.space, tuple(a / b for a, b in zip(self.values, o)))

    def __rtruediv__(self, other) -> Rv:
        return Rv(self.space, self._other(other)) / self

    def __neg__(self) -> Rv:
        return Rv(self.space, tuple(-a for a in self.values))

    def __abs__(self) -> Rv:
        return Rv(self.space, tuple(abs(a) for a in self.values))

    def __pow__(self, k: int) -> Rv:
        return Rv(self.space, tuple(a**k for a in self.values))

    def is_nonneg(self) -> bool:
        """Membership in L⁰₊."""
        return all(v >= 0 for v in self.values)

    def is_strictly_positive(self) -> bool:
        """Membership in L⁰₊₊."""
        return all(v > 0 for v in self.values)

    def expectation(self) -> Fraction:
        return sum((p * v for p, v in zip(self.space.masses, self.values)), Fraction(0))


@dataclass(frozen=True)
class Event:
    space: ProbSpace
    members: frozenset[str]

    def __post_init__(self):
        unknown = set(self.members) - set(self.space.labels)
        if unknown:
            raise StructuralError(f"event mentions unknown atoms {sorted(unknown)}")

    @classmethod
    def of(cls, space: ProbSpace, members: Iterable[str]) -> Event:
        return cls(space, frozenset(members))

    @classmethod
    def where(cls, space: ProbSpace, mask: Iterable[bool]) -> Event:
        return cls(space, frozenset(l for l, m in zip(space.labels, mask) if m))

    def complement(self) -> Event:
        return Event(self.space, frozenset(self.space.labels) - self.members)

    def indicator(self) -> Rv:
        return Rv(self.space, tuple(Fraction(l in self.members) for l in self.space.labels))

    def prob(self) -> Fraction:
        return sum(
            (p for l, p in zip(self.space.labels, self.space.masses) if l in self.members),
            Fraction(0),
        )


@dataclass(frozen=True)
class EventuallyPeriodicSeq(Generic[T]):
    """The sequence ``preamble[0], ..., preamble[-1], cycle[0], cycle[1], ...`` repeated."""

    preamble: tuple
    cycle: tuple

    def __post_init__(self):
        if len(self.cycle) == 0:
            raise StructuralError("the cycle of an eventually periodic sequence is empty")

    @classmethod
    def of(cls, preamble: Iterable[T] = (), cycle: Iterable[T] = ()) -> EventuallyPeriodicSeq[T]:
        return cls(tuple(preamble), tuple(cycle))

    def item(self, n: int) -> T:
        """The n-th term, counting from 1."""
        if n < 1:
            raise DomainError(f"sequence index starts at 1, got {n}")
        if n <= len(self.preamble):
            return self.preamble[n - 1]
        return self.cycle[(n - 1 - len(self.preamble)) % len(self.cycle)]

    def take(self, k: int) -> list[T]:
        return [self.item(n) for n in range(1, k + 1)]

    def tail_items(self, n: int) -> list[T]:
        """One representative of every position occurring in {item(p) : p >= n}."""
        if n < 1:
            raise DomainError(f"sequence index starts at 1, got {n}")
        return list(self.preamble[n - 1 :]) + list(self.cycle)


def _same_space(*rvs: Rv) -> ProbSpace:
    space = rvs[0].space
    for r in rvs[1:]:
        if r.space is not space and r.space != space:
            raise StructuralError("random variables live on different probability spaces")
    return space


def rv_leq(x: Rv, y: Rv) -> bool:
    _same_space(x, y)
    return all(a <= b for a, b in zip(x.values, y.values))


def rv_lt(x: Rv, y: Rv) -> bool:
    _same_space(x, y)
    return all(a < b for a, b in zip(x.values, y.values))


def rv_leq_on(x: Rv, y: Rv, event: Event) -> bool:
    space = _same_space(x, y)
    if event.space != space:
        raise StructuralError("event lives on a different probability space")
    if not event.members:
        raise DomainError("conditioning event is empty")
    return all(
        a <= b
        for label, a, b in zip(space.labels, x.values, y.values)
        if label in event.members
    )


def ess_sup(family: Sequence[Rv]) -> Rv:
    """Least upper bound of a nonempty family: the per-atom maximum."""
    family = list(family)
    if not family:
        raise DomainError("essential supremum of an empty family is -inf; not representable")
    space = _same_space(*family)
    return Rv(space, tuple(max(col) for col in zip(*(r.values for r in family))))


def ess_inf(family: Sequence[Rv]) -> Rv:
    family = list(family)
    if not family:
        raise DomainError("essential infimum of an empty family is +inf; not representable")
    space = _same_space(*family)
    return Rv(space, tuple(min(col) for col in zip(*(r.values for r in family))))


def ess_limsup(seq: EventuallyPeriodicSeq[Rv]) -> Rv:
    # every tail contains the whole cycle and nothing else recurs
    return ess_sup(seq.cycle)


def ess_liminf(seq: EventuallyPeriodicSeq[Rv]) -> Rv:
    return ess_inf(seq.cycle)


def concatenate(partition: Sequence[Event], rvs: Sequence[Rv]) -> Rv:
    """Glue ``rvs[k]`` on ``partition[k]`` into one random variable."""
    if len(partition) != len(rvs):
        raise StructuralError(f"{len(partition)} events but {len(rvs)} random variables")
    if not rvs:
        raise DomainError("empty partition")
    space = _same_space(*rvs)
    owner: dict[str, int] = {}
    for k, event in enumerate(partition):
        if event.space != space:
            raise StructuralError("event lives on a different probability space")
        for label in event.members:
            if label in owner:
                raise DomainError(
                    f"partition events {owner[label]} and {k} overlap at atom {label!r}"
                )
            owner[label] = k
    missing = [l for l in space.labels if l not in owner]
    if missing:
        raise DomainError(f"partition does not cover atoms {missing}")
    return Rv(space, tuple(rvs[owner[l]].values[i] for i, l in enumerate(space.labels)))


def in_ball(x: Rv, radius: Rv) -> bool:
    """Whether ``|x| <= radius`` at every atom."""
    _same_space(x, radius)
    if not radius.is_strictly_positive():
        raise DomainError("ball radius must be strictly positive at every atom")
    return all(abs(a) <= r for a, r in zip(x.values, radius.values))
