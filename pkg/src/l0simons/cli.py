"""Command line entry point.

Exit codes: 0 when the requested check passes, 1 when it runs but fails,
2 on parse or validation errors, 3 when a size cap is hit.  Reports are
JSON on stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import oracle as orc
from .errors import DomainError, HypothesisFailed, ParseError, ResourceError
from .fileio import digest, dumps_instance, fmt, fmt_rv, generate, parse_instance
from .instance import (
    DEFAULT_SELECTION_CAP,
    HypothesisVerdict,
    Instance,
    check_hypothesis,
)
from .l0 import Rv
from .minimax import MixtureWeights
from .verifier import ProofTrace, VerifierResult, compute_lhs, compute_rhs, trace_proof, verify

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


def _weights(w: MixtureWeights) -> dict:
    return {
        "ids": list(w.ids),
        "per_atom": {l: [fmt(x) for x in row] for l, row in zip(w.space.labels, w.weights)},
    }


def _approx(x: Rv) -> list[float]:
    return [float(v) for v in x.values]


def hypothesis_report(h: HypothesisVerdict) -> dict:
    out = {"status": h.status, "detail": h.detail}
    if h.witness is not None:
        out["witness"] = _weights(h.witness)
    return out


def verify_report(inst: Instance, res: VerifierResult) -> dict:
    return {
        "mode": "verify",
        "instance": digest(inst),
        "hypothesis": hypothesis_report(res.hypothesis),
        "applicable": res.applicable,
        "status": "holds" if res.holds else "violated",
        "holds": res.holds,
        "lhs": fmt_rv(res.lhs),
        "rhs": fmt_rv(res.rhs),
        "slack": fmt_rv(res.slack),
        "rhs_weights": _weights(res.rhs_weights),
        "approx_float_summary": {"lhs": _approx(res.lhs), "rhs": _approx(res.rhs)},
    }


def trace_report(inst: Instance, t: ProofTrace) -> dict:
    steps = []
    for r in t.records:
        steps.append(
            {
                "n": r.n,
                "weights": _weights(r.weights),
                "gamma": fmt_rv(r.gamma),
                "gamma_min": fmt_rv(r.gamma_inf),
                "optimality_gap": fmt_rv(r.optimality_gap),
                "optimality_margin": fmt_rv(r.optimality_margin),
                "averaging_slack": fmt_rv(r.averaging_slack),
                "sup_s": fmt_rv(r.sup_s),
                "telescope_slack": fmt_rv(r.telescope_slack),
                "tail_sum_slack": fmt_rv(r.tail_sum_slack),
                "g_at_z0_slack": fmt_rv(r.g_at_z0_slack),
                "chain_slack": fmt_rv(r.chain_slack),
            }
        )
    return {
        "mode": "trace",
        "instance": digest(inst),
        "hypothesis": hypothesis_report(t.hypothesis),
        "passed": t.passed,
        "delta": fmt_rv(t.delta),
        "lambda": fmt_rv(t.lam),
        "m": fmt_rv(t.m),
        "M": fmt_rv(t.M),
        "rate_gap": fmt_rv(t.rate_gap),
        "steps": t.steps,
        "tail_bound": fmt_rv(t.tail_bound),
        "base_slack": fmt_rv(t.base_slack),
        "z0": t.z0.as_map(inst.space),
        "limsup_at_z0": fmt_rv(t.limsup_at_z0),
        "limsup_slack": fmt_rv(t.limsup_slack),
        "all_coefficients_positive": t.all_coefficients_positive,
        "notes": t.notes,
        "records": steps,
        "approx_float_summary": {"m": _approx(t.m), "tail_bound": _approx(t.tail_bound)},
    }


def oracle_report(inst: Instance, k: int, cap: int) -> dict:
    grid = orc.GridSpec(k)
    rhs, _ = compute_rhs(inst)
    brute = orc.brute_rhs(inst, grid)
    lhs = compute_lhs(inst)
    blhs = orc.brute_lhs(inst, cap)
    gap = brute - rhs
    allowed = orc.entry_range(inst) / k
    sandwich = all(0 <= g <= a for g, a in zip(gap.values, allowed.values))
    return {
        "mode": "oracle",
        "instance": digest(inst),
        "grid": k,
        "rhs_solver": fmt_rv(rhs),
        "rhs_brute": fmt_rv(brute),
        "rhs_gap": fmt_rv(gap),
        "rhs_gap_allowed": fmt_rv(allowed),
        "sandwich_holds": sandwich,
        "lhs_solver": fmt_rv(lhs),
        "lhs_brute": fmt_rv(blhs),
        "lhs_equal": lhs == blhs,
        "passed": sandwich and lhs == blhs,
    }


def _shape(text: str) -> tuple[int, int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("shape is atoms,base_points,preamble,cycle")
    return tuple(parts)


def _seeds(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("seed range is a..b")
    return range(int(lo), int(hi) + 1)


def _rational(text: str) -> Fraction:
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(f"write {text!r} as an exact p/q rational")
    return Fraction(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="l0simons", description="Exact checks of the random Simons inequality."
    )
    p.add_argument("--mode", choices=["verify", "trace", "oracle", "gen"], default="verify")
    p.add_argument("--instance", help="instance JSON file")
    p.add_argument("--delta", type=_rational, help="constant delta as p/q (default: per-atom (M-m+1)/10)")
    p.add_argument("--steps", type=int, help="truncation N (default: smallest allowed by the tail bound)")
    p.add_argument("--grid", type=int, default=200, help="oracle simplex lattice resolution")
    p.add_argument("--seed", type=int, default=0, help="generator seed / hypothesis sampling seed")
    p.add_argument("--shape", type=_shape, default=(2, 3, 1, 2), help="atoms,base_points,preamble,cycle")
    p.add_argument("--seeds", type=_seeds, help="batch over generated instances, e.g. 0..99")
    p.add_argument("--samples", type=int, default=64, help="hypothesis samples for explicit S")
    p.add_argument("--cap-selections", type=int, default=DEFAULT_SELECTION_CAP)
    p.add_argument("--out", help="write the report (or generated instance) here")
    return p


def _run_one(inst: Instance, args) -> tuple[int, dict]:
    if args.mode == "verify":
        hyp = check_hypothesis(inst, samples=args.samples, seed=args.seed)
        res = verify(inst, hyp)
        return (EXIT_OK if res.holds else EXIT_FAIL), verify_report(inst, res)
    if args.mode == "trace":
        hyp = check_hypothesis(inst, samples=args.samples, seed=args.seed)
        delta = None if args.delta is None else Rv.const(inst.space, args.delta)
        try:
            t = trace_proof(inst, delta, args.steps, hyp)
        except HypothesisFailed as exc:
            rep = {
                "mode": "trace",
                "instance": digest(inst),
                "refused": str(exc),
                "hypothesis": hypothesis_report(hyp),
            }
            return EXIT_FAIL, rep
        return (EXIT_OK if t.passed else EXIT_FAIL), trace_report(inst, t)
    rep = oracle_report(inst, args.grid, args.cap_selections)
    return (EXIT_OK if rep["passed"] else EXIT_FAIL), rep


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    def emit(text: str) -> None:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    try:
        if args.mode == "gen":
            emit(dumps_instance(generate(args.seed, args.shape)))
            return EXIT_OK
        if args.seeds is not None:
            instances = [generate(s, args.shape) for s in args.seeds]
        elif args.instance:
            instances = [parse_instance(args.instance)]
        else:
            print("error: --instance or --seeds is required", file=sys.stderr)
            return EXIT_PARSE
        codes, reports = [], []
        for inst in instances:
            code, rep = _run_one(inst, args)
            codes.append(code)
            reports.append(rep)
    except ParseError as exc:
        for d in exc.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    body = reports[0] if args.seeds is None else {"batch": reports, "passed": all(c == 0 for c in codes)}
    emit(json.dumps(body, indent=2, ensure_ascii=False) + "\n")
    return max(codes) if codes else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
