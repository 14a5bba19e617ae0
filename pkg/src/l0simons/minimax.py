"""L⁰-convex combinations and the exact minimax over them.

A mixture of finitely many functions with L⁰₊ coefficients summing to one
may use different coefficients at different atoms.  Minimising the
pointwise supremum of such a mixture therefore splits into one zero-sum
matrix game per atom, each solved exactly by a rational simplex method.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DomainError, StructuralError
from .l0 import ProbSpace, Rv

Matrix = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class MixtureWeights:
    """Per-atom convex weights over a list of function ids."""

    space: ProbSpace
    ids: tuple[str, ...]
    weights: tuple[tuple[Fraction, ...], ...]  # [atom][id]

    def __post_init__(self):
        if len(self.weights) != self.space.size:
            raise StructuralError("one weight vector per atom is required")
        for label, row in zip(self.space.labels, self.weights):
            if len(row) != len(self.ids):
                raise StructuralError(f"weight vector at {label!r} has wrong length")
            if any(w < 0 for w in row):
                raise DomainError(f"negative weight at atom {label!r}")
            if sum(row, Fraction(0)) != 1:
                raise DomainError(f"weights at atom {label!r} sum to {sum(row)} ≠ 1")

    @classmethod
    def constant(cls, space: ProbSpace, ids: Sequence[str], w: Sequence) -> MixtureWeights:
        row = tuple(Fraction(x) for x in w)
        return cls(space, tuple(ids), (row,) * space.size)

    @property
    def strictly_positive(self) -> bool:
        return all(w > 0 for row in self.weights for w in row)

    def coefficient(self, fid: str) -> Rv:
        j = self.ids.index(fid)
        return Rv(self.space, tuple(row[j] for row in self.weights))


@dataclass(frozen=True)
class PayoffMatrix:
    """Rows are function ids, columns are points; one matrix per atom."""

    space: ProbSpace
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]  # [atom][row][column]

    def __post_init__(self):
        if not self.rows or not self.columns:
            raise DomainError("payoff matrix must have at least one row and one column")
        if len(self.entries) != self.space.size:
            raise StructuralError("one matrix per atom is required")
        for table in self.entries:
            if len(table) != len(self.rows) or any(len(r) != len(self.columns) for r in table):
                raise StructuralError("payoff matrix is not rectangular")

    @classmethod
    def from_tables(
        cls, functions: Mapping[str, Mapping[str, Rv]], columns: Sequence[str]
    ) -> PayoffMatrix:
        rows = tuple(functions)
        if not rows:
            raise DomainError("empty function set")
        space = next(iter(functions.values()))[columns[0]].space if columns else None
        if space is None:
            raise DomainError("empty domain")
        try:
            entries = tuple(
                tuple(tuple(functions[j][b].values[i] for b in columns) for j in rows)
                for i in range(space.size)
            )
        except KeyError as exc:
            raise StructuralError(f"function table misses point {exc.args[0]!r}") from None
        return cls(space, rows, tuple(columns), entries)


def mix(w: MixtureWeights, values: Mapping[str, Rv]) -> Rv:
    """Σ_j w_j · values_j, atom by atom."""
    if set(values) != set(w.ids):
        raise StructuralError(
            f"weights cover {sorted(w.ids)} but values cover {sorted(values)}"
        )
    out = []
    for i in range(w.space.size):
        out.append(sum((wj * values[j].values[i] for j, wj in zip(w.ids, w.weights[i])), Fraction(0)))
    return Rv(w.space, tuple(out))


def _simplex_max_sum(a: list[list[Fraction]]) -> list[Fraction]:
    """Maximise Σx subject to a·x <= 1, x >= 0, for a matrix with positive entries.

    Bland's rule: lowest-index entering variable, lowest-index leaving
    basic variable among ratio ties.  Returns the optimal x.
    """
    n_cons, n_var = len(a), len(a[0])
    width = n_var + n_cons
    tab = [
        [Fraction(v) for v in row] + [Fraction(int(k == i)) for k in range(n_cons)] + [Fraction(1)]
        for i, row in enumerate(a)
    ]
    cost = [Fraction(1)] * n_var + [Fraction(0)] * n_cons
    basis = [n_var + i for i in range(n_cons)]
    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        # positive coefficients keep the feasible region bounded
        assert leave is not None
        prow = tab[leave]
        piv = prow[enter]
        prow = [v / piv for v in prow]
        tab[leave] = prow
        for i, row in enumerate(tab):
            if i != leave and row[enter] != 0:
                f = row[enter]
                tab[i] = [v - f * p for v, p in zip(row, prow)]
        f = cost[enter]
        cost = [c - f * p for c, p in zip(cost, prow[:-1])]
        basis[leave] = enter
    x = [Fraction(0)] * n_var
    for i, var in enumerate(basis):
        if var < n_var:
            x[var] = tab[i][-1]
    return x


def game_value(matrix: Matrix) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact ``min_w max_b Σ_j w_j·matrix[j][b]`` over the probability simplex.

    Returns the value and a weight vector attaining it.

    >>> game_value([[1, 0], [0, 1]])
    (Fraction(1, 2), (Fraction(1, 2), Fraction(1, 2)))
    """
    rows = [[Fraction(v) for v in r] for r in matrix]
    if not rows or not rows[0]:
        raise DomainError("empty payoff matrix")
    n_rows, n_cols = len(rows), len(rows[0])
    if n_rows == 1:
        return max(rows[0]), (Fraction(1),)
    if n_cols == 1:
        col = [r[0] for r in rows]
        best = min(col)
        k = col.index(best)
        return best, tuple(Fraction(int(j == k)) for j in range(n_rows))
    shift = 1 - min(min(r) for r in rows)
    # constraint per column b: Σ_j x_j·(a_jb + shift) <= 1
    cons = [[rows[j][b] + shift for j in range(n_rows)] for b in range(n_cols)]
    x = _simplex_max_sum(cons)
    total = sum(x, Fraction(0))
    shifted_value = 1 / total
    w = tuple(xj * shifted_value for xj in x)
    return shifted_value - shift, w


def game_value_per_atom(matrix: PayoffMatrix, atom: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    return game_value(matrix.entries[atom])


def essinf_over_hull(
    functions: Mapping[str, Mapping[str, Rv]], domain: Sequence[str]
) -> tuple[Rv, MixtureWeights]:
    """Essential infimum, over the L⁰-convex hull of ``functions``, of the sup over ``domain``.

    ``functions`` maps an id to a table point -> Rv.  The weights returned
    attain the infimum and may differ from atom to atom.
    """
    if not domain:
        raise DomainError("empty domain")
    matrix = PayoffMatrix.from_tables(functions, domain)
    values, weights = [], []
    for i in range(matrix.space.size):
        v, w = game_value_per_atom(matrix, i)
        values.append(v)
        weights.append(w)
    return Rv(matrix.space, tuple(values)), MixtureWeights(matrix.space, matrix.rows, tuple(weights))
