"""Both sides of the random Simons inequality, and a checked run of its proof.

For an instance with functions f_n valued in the ball of radius ``epsilon``
the inequality reads

    esssup_{Z in S} esslimsup_n f_n(Z)  >=  essinf_{f in co(f_n)} esssup_{X in E} f(X)

with the L⁰-convex hull on the right.  :func:`verify` evaluates both sides
exactly.  :func:`trace_proof` follows the constructive argument step by step:
it picks the mixing rate, builds near-optimal g_n by exact minimax, sums the
weighted series, extracts a maximiser Z0 and records the slack of every
intermediate inequality.  The series is cut after N terms; the remainder is
bounded by ``tau = epsilon * lam**N / (1 - lam)`` and every check that sees the
cut carries that allowance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DomainError, HypothesisFailed, ResourceError
from .instance import (
    FAILS,
    BaseFunction,
    DistinctFunctions,
    HypothesisVerdict,
    Instance,
    Selection,
    check_hypothesis,
    distinct_functions,
    evaluate,
)
from .l0 import EventuallyPeriodicSeq, Rv, ess_limsup, ess_sup
from .minimax import MixtureWeights, essinf_over_hull, game_value, mix

Table = Mapping[str, Rv]


@dataclass(frozen=True)
class VerifierResult:
    lhs: Rv
    rhs: Rv
    rhs_weights: MixtureWeights
    hypothesis: HypothesisVerdict
    holds: bool
    slack: Rv

    @property
    def applicable(self) -> bool:
        return self.hypothesis.status != FAILS


@dataclass(frozen=True)
class TraceStep:
    n: int
    ids: tuple[str, ...]
    weights: MixtureWeights
    gamma: Rv  # gamma_n(g_n), evaluated from the mixed table
    gamma_inf: Rv  # exact minimum of gamma_n over C_n
    optimality_gap: Rv  # gamma_inf - gamma; zero when the minimiser is exact
    optimality_margin: Rv  # delta * (lam/2)**n, the allowance the argument grants
    averaging_slack: Rv
    sup_s: Rv  # esssup over S of s_n
    telescope_slack: Rv
    tail_sum_slack: Rv
    g_at_z0_slack: Rv
    chain_slack: Rv  # esssup_{p>=n} f_p(Z0) - g_n(Z0)


@dataclass
class ProofTrace:
    delta: Rv
    lam: Rv
    m: Rv
    M: Rv
    rate_gap: Rv
    steps: int
    tail_bound: Rv
    base_slack: Rv  # esssup_S s_1 - m
    records: list[TraceStep]
    z0: Selection
    limsup_at_z0: Rv
    limsup_slack: Rv
    hypothesis: HypothesisVerdict
    all_coefficients_positive: bool
    notes: list[str] = field(default_factory=list)

    def slacks(self) -> dict[str, list[Rv]]:
        """Every recorded slack by name; all must be nonnegative for a pass."""
        out: dict[str, list[Rv]] = {
            "rate": [self.rate_gap],
            "base": [self.base_slack],
            "limsup": [self.limsup_slack],
        }
        for key, attr in (
            ("optimality", "optimality_gap"),
            ("averaging", "averaging_slack"),
            ("telescope", "telescope_slack"),
            ("tail_sum", "tail_sum_slack"),
            ("g_at_z0", "g_at_z0_slack"),
            ("chain", "chain_slack"),
        ):
            out[key] = [getattr(r, attr) for r in self.records]
        return out

    @property
    def passed(self) -> bool:
        if any(v != 0 for v in self.rate_gap):
            return False
        if any(v != 0 for r in self.records for v in r.optimality_gap):
            return False
        return all(v >= 0 for rvs in self.slacks().values() for r in rvs for v in r)


def _sup_over_s(instance: Instance, table: Table) -> Rv:
    """esssup over Z in S of the function given by ``table``."""
    if instance.selections is None:
        return Rv(
            instance.space,
            tuple(
                max(table[b].values[i] for b in instance.base_points)
                for i in range(instance.space.size)
            ),
        )
    f = BaseFunction(table)
    return ess_sup([evaluate(f, z) for z in instance.selections])


def _combine(tables: Sequence[tuple[Rv | Fraction, Table]], points: Sequence[str]) -> dict[str, Rv]:
    """Pointwise linear combination Σ c_k · table_k."""
    out = {}
    for b in points:
        acc = None
        for c, t in tables:
            term = t[b] * c
            acc = term if acc is None else acc + term
        out[b] = acc
    return out


def _mix_tables(w: MixtureWeights, fns: DistinctFunctions, points: Sequence[str]) -> dict[str, Rv]:
    return {b: mix(w, {j: fns.tables[j].table[b] for j in w.ids}) for b in points}


def compute_lhs(instance: Instance) -> Rv:
    """esssup over Z in S of esslimsup_n f_n(Z)."""
    cycle = instance.functions.cycle
    if instance.selections is None:
        # selections are chosen atom by atom, so the sup splits per atom
        return Rv(
            instance.space,
            tuple(
                max(f.table[b].values[i] for f in cycle for b in instance.base_points)
                for i in range(instance.space.size)
            ),
        )
    per_z = []
    for z in instance.selections:
        seq = EventuallyPeriodicSeq.of(
            [evaluate(f, z) for f in instance.functions.preamble],
            [evaluate(f, z) for f in cycle],
        )
        per_z.append(ess_limsup(seq))
    return ess_sup(per_z)


def compute_rhs(instance: Instance) -> tuple[Rv, MixtureWeights]:
    fns = distinct_functions(instance.functions)
    return essinf_over_hull(
        {j: f.table for j, f in fns.tables.items()}, list(instance.base_points)
    )


def compute_M(instance: Instance) -> Rv:
    fns = distinct_functions(instance.functions)
    return Rv(
        instance.space,
        tuple(
            max(f.table[b].values[i] for f in fns.tables.values() for b in instance.base_points)
            for i in range(instance.space.size)
        ),
    )


def rate_equation_gap(m: Rv, M: Rv, delta: Rv, lam: Rv) -> Rv:
    """(m - δ(1+λ) - Mλ) - (m - 2δ)(1 - λ)."""
    return (m - delta * (lam + 1) - M * lam) - (m - delta * 2) * (1 - lam)


def choose_lambda(m: Rv, M: Rv, delta: Rv) -> Rv:
    """The mixing rate δ / (M - m + 3δ), which makes the λ-inequality an equality."""
    if not delta.is_strictly_positive():
        raise DomainError("delta must be strictly positive at every atom")
    if any(a < b for a, b in zip(M.values, m.values)):
        raise DomainError("M must dominate m")
    return delta / (M - m + delta * 3)


def default_delta(m: Rv, M: Rv) -> Rv:
    return (M - m + 1) / 10


def gamma_n(
    n: int,
    prefix_gs: Sequence[Table],
    h: Table,
    instance: Instance,
    lam: Rv,
) -> Rv:
    """esssup over Z in S of Σ_{p<n} λ^{p-1} g_p(Z) + λ^{n-1} h(Z)."""
    if len(prefix_gs) != n - 1:
        raise DomainError(f"gamma_{n} needs {n - 1} earlier terms, got {len(prefix_gs)}")
    parts = [(lam ** (p - 1), g) for p, g in enumerate(prefix_gs, start=1)]
    parts.append((lam ** (n - 1), h))
    return _sup_over_s(instance, _combine(parts, instance.base_points))


def required_steps(instance: Instance, delta: Rv, lam: Rv) -> int:
    """Smallest N past the preamble with epsilon·λ^N/(1-λ) < δ at every atom."""
    n = len(instance.functions.preamble) + 1
    while True:
        tau = instance.epsilon * lam**n / (1 - lam)
        if all(t < d for t, d in zip(tau.values, delta.values)):
            return n
        n += 1


def construct_g_sequence(
    instance: Instance, delta: Rv, lam: Rv, N: int
) -> list[tuple[MixtureWeights, Rv, Rv, dict[str, Rv]]]:
    """Build g_1..g_N, each minimising gamma_n over C_n exactly.

    Returns, per n, the weights over the ids of C_n, gamma_n(g_n), the LP
    minimum of gamma_n over C_n, and the mixed table of g_n.  Per atom the
    minimisation is a matrix game whose columns are the base points S can
    reach there and whose entries are prefix(b) + λ^{n-1} f_j(b).
    """
    if N < 1:
        raise DomainError("need at least one step")
    fns = distinct_functions(instance.functions)
    space = instance.space
    points = instance.base_points
    zero = Rv.const(space, 0)
    prefix = {b: zero for b in points}
    gs: list[dict[str, Rv]] = []
    out = []
    for n in range(1, N + 1):
        ids = fns.ids_from(n)
        scale = lam ** (n - 1)
        values, weights = [], []
        for i in range(space.size):
            cols = instance.points_at(i)
            matrix = [
                [prefix[b].values[i] + scale.values[i] * fns.tables[j].table[b].values[i] for b in cols]
                for j in ids
            ]
            v, w = game_value(matrix)
            values.append(v)
            weights.append(w)
        w = MixtureWeights(space, tuple(ids), tuple(weights))
        g = _mix_tables(w, fns, points)
        gamma = gamma_n(n, gs, g, instance, lam)
        out.append((w, gamma, Rv(space, tuple(values)), g))
        gs.append(g)
        prefix = {b: prefix[b] + g[b] * scale for b in points}
    return out


def _argmax_selection(instance: Instance, table: Table) -> Selection:
    target = _sup_over_s(instance, table)
    if instance.selections is None:
        pts = []
        for i in range(instance.space.size):
            # lowest base-point index wins ties
            pts.append(next(b for b in instance.base_points if table[b].values[i] == target.values[i]))
        return Selection(tuple(pts))
    f = BaseFunction(table)
    for z in instance.selections:
        if evaluate(f, z) == target:
            return z
    raise HypothesisFailed("no single member of S attains the supremum of the truncated series")


def trace_proof(
    instance: Instance,
    delta: Rv | None = None,
    N: int | None = None,
    hypothesis: HypothesisVerdict | None = None,
) -> ProofTrace:
    if hypothesis is None:
        hypothesis = check_hypothesis(instance)
    if hypothesis.status == FAILS:
        raise HypothesisFailed(
            f"hypothesis fails: {hypothesis.detail}", witness=hypothesis.witness
        )
    space = instance.space
    fns = distinct_functions(instance.functions)
    m, _ = compute_rhs(instance)
    M = compute_M(instance)
    if delta is None:
        delta = default_delta(m, M)
    if not delta.is_strictly_positive():
        raise DomainError("delta must be strictly positive at every atom")
    lam = choose_lambda(m, M, delta)
    need = required_steps(instance, delta, lam)
    if N is None:
        N = need
    elif N < need:
        raise ResourceError(
            f"{N} steps leave a tail bound >= delta; at least {need} are required", required=need
        )
    tau = instance.epsilon * lam**N / (1 - lam)

    # one extra term so that the averaging inequality can be checked at n = N
    built = construct_g_sequence(instance, delta, lam, N + 1)
    points = instance.base_points
    zero = Rv.const(space, 0)
    s_tables = [{b: zero for b in points}]
    for n in range(1, N + 1):
        g = built[n - 1][3]
        s_tables.append({b: s_tables[-1][b] + g[b] * lam ** (n - 1) for b in points})
    sup_s = [_sup_over_s(instance, t) for t in s_tables]
    s_trunc = s_tables[N]
    z0 = _argmax_selection(instance, s_trunc)

    k_const = m - delta * (lam + 1)
    floor = m - delta * 2 - tau * 2
    gs = [b[3] for b in built]
    records = []
    positive = True
    for n in range(1, N + 1):
        w, gamma, gamma_inf, g = built[n - 1]
        positive = positive and w.strictly_positive and set(w.ids) == set(fns.ids_from(n))
        margin = delta * (lam / 2) ** n
        avg = _combine([(1 / (lam + 1), g), (lam / (lam + 1), gs[n])], points)
        averaged = gamma_n(n, gs[: n - 1], avg, instance, lam) + margin - gamma
        tele = (sup_s[n] - sup_s[n - 1]) / lam ** (n - 1) - k_const
        tail_sum = sup_s[N] - sup_s[n - 1] + tau - lam ** (n - 1) * k_const / (1 - lam)
        g_z0 = evaluate(BaseFunction(g), z0)
        tail_sup = ess_sup([evaluate(f, z0) for f in instance.functions.tail_items(n)])
        records.append(
            TraceStep(
                n=n,
                ids=w.ids,
                weights=w,
                gamma=gamma,
                gamma_inf=gamma_inf,
                optimality_gap=gamma_inf - gamma,
                optimality_margin=margin,
                averaging_slack=averaged,
                sup_s=sup_s[n],
                telescope_slack=tele,
                tail_sum_slack=tail_sum,
                g_at_z0_slack=g_z0 - floor,
                chain_slack=tail_sup - g_z0,
            )
        )
    limsup = ess_limsup(
        EventuallyPeriodicSeq.of(
            [evaluate(f, z0) for f in instance.functions.preamble],
            [evaluate(f, z0) for f in instance.functions.cycle],
        )
    )
    notes = []
    if not positive:
        notes.append(
            "some g_n puts zero weight on a function of C_n, so the series coefficients are "
            "not all strictly positive; Z0 is taken as the per-atom argmax of the truncated "
            "series instead of from the attainment hypothesis"
        )
    return ProofTrace(
        delta=delta,
        lam=lam,
        m=m,
        M=M,
        rate_gap=rate_equation_gap(m, M, delta, lam),
        steps=N,
        tail_bound=tau,
        base_slack=sup_s[1] - m,
        records=records,
        z0=z0,
        limsup_at_z0=limsup,
        limsup_slack=limsup - floor,
        hypothesis=hypothesis,
        all_coefficients_positive=positive,
        notes=notes,
    )


def verify(instance: Instance, hypothesis: HypothesisVerdict | None = None) -> VerifierResult:
    if hypothesis is None:
        hypothesis = check_hypothesis(instance)
    lhs = compute_lhs(instance)
    rhs, weights = compute_rhs(instance)
    slack = lhs - rhs
    return VerifierResult(
        lhs=lhs,
        rhs=rhs,
        rhs_weights=weights,
        hypothesis=hypothesis,
        holds=all(v >= 0 for v in slack),
        slack=slack,
    )
