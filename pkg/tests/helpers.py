"""Independent reference computations used only by the tests.

None of these call the package's solver or verifier.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from l0simons.fileio import generate
from l0simons.instance import BaseFunction, Instance
from l0simons.l0 import EventuallyPeriodicSeq, ProbSpace, Rv


def solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; None when singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [aug[i][-1] for i in range(n)]


def game_vertices(matrix) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Vertices (w, t) of {w in simplex, Σ_j w_j a_jb <= t for all b}."""
    a = [[Fraction(v) for v in r] for r in matrix]
    r, c = len(a), len(a[0])
    cands = [("w", j) for j in range(r)] + [("col", b) for b in range(c)]
    out = []
    for active in itertools.combinations(cands, r):
        rows = [[Fraction(1)] * r + [Fraction(0)]]
        rhs = [Fraction(1)]
        for kind, idx in active:
            if kind == "w":
                rows.append([Fraction(int(j == idx)) for j in range(r)] + [Fraction(0)])
            else:
                rows.append([a[j][idx] for j in range(r)] + [Fraction(-1)])
            rhs.append(Fraction(0))
        sol = solve_linear(rows, rhs)
        if sol is None:
            continue
        w, t = tuple(sol[:r]), sol[r]
        if any(x < 0 for x in w):
            continue
        if any(sum(w[j] * a[j][b] for j in range(r)) > t for b in range(c)):
            continue
        out.append((w, t))
    return out


def vertex_game_value(matrix) -> Fraction:
    return min(t for _, t in game_vertices(matrix))


def scan_max(rvs: list[Rv]) -> list[Fraction]:
    out = []
    for i in range(len(rvs[0].values)):
        best = rvs[0].values[i]
        for r in rvs[1:]:
            if r.values[i] > best:
                best = r.values[i]
        out.append(best)
    return out


def classical_limsup(values_pre: list[Fraction], values_cyc: list[Fraction]) -> Fraction:
    """limsup of a real eventually periodic sequence from tail maxima over two periods."""
    seq = values_pre + values_cyc * 3
    horizon = len(values_pre) + len(values_cyc)
    tails = [max(seq[n:]) for n in range(horizon + 1)]
    return min(tails)


def classical_simons(inst: Instance) -> tuple[Fraction, Fraction]:
    """One-atom Simons: (max_{x in S} limsup f_n(x), min over real mixtures of max_x)."""
    assert inst.space.size == 1
    pts = (
        list(inst.base_points)
        if inst.selections is None
        else [z.points[0] for z in inst.selections]
    )
    lhs = max(
        classical_limsup(
            [f.table[x].values[0] for f in inst.functions.preamble],
            [f.table[x].values[0] for f in inst.functions.cycle],
        )
        for x in pts
    )
    rows = []
    for f in list(inst.functions.preamble) + list(inst.functions.cycle):
        row = [f.table[b].values[0] for b in inst.base_points]
        if row not in rows:
            rows.append(row)
    return lhs, vertex_game_value(rows)


def matching_pennies(eps=2, selections=None) -> Instance:
    space = ProbSpace.uniform(["w1"])
    one, zero = Rv.of(space, [1]), Rv.of(space, [0])
    f1 = BaseFunction({"a": one, "b": zero})
    f2 = BaseFunction({"a": zero, "b": one})
    return Instance(
        space,
        ("a", "b"),
        EventuallyPeriodicSeq.of([], [f1, f2]),
        Rv.const(space, eps),
        selections,
    )


def single_function(seed: int, shape=(3, 3, 0, 1)) -> Instance:
    """A generated instance whose sequence repeats one table."""
    inst = generate(seed, shape)
    f = inst.functions.cycle[0]
    pre = [f] * (seed % 3)
    cyc = [f] * (1 + seed % 2)
    return Instance(inst.space, inst.base_points, EventuallyPeriodicSeq.of(pre, cyc), inst.epsilon)


def two_atom_fixture() -> Instance:
    """Atom 1 is matching pennies, atom 2 has a dominated row."""
    space = ProbSpace.uniform(["w1", "w2"])
    f1 = BaseFunction({"a": Rv.of(space, [1, 1]), "b": Rv.of(space, [0, 1])})
    f2 = BaseFunction({"a": Rv.of(space, [0, 0]), "b": Rv.of(space, [1, 0])})
    return Instance(space, ("a", "b"), EventuallyPeriodicSeq.of([], [f1, f2]), Rv.const(space, 2))
