"""Instance files: parsing, serialisation and seeded generation.

An instance file is JSON::

    {
      "atoms": [["w1", "1/2"], ["w2", "1/2"]],
      "base_points": ["a", "b"],
      "epsilon": ["2/1", "2/1"],
      "functions": {
        "preamble": [],
        "cycle": [{"a": ["1", "0"], "b": ["0", "1"]}]
      },
      "S": "ALL"
    }

Every rational is a string "p/q" (or an integer string).  Decimal
notation is refused so that no value is silently rounded.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import DomainError, ParseError, ResourceError
from .instance import BaseFunction, Instance, Selection, validate
from .l0 import EventuallyPeriodicSeq, ProbSpace, Rv

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")
_DECIMAL = re.compile(r"^\s*-?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?\s*$")

MAX_GEN_ATOMS = 8
MAX_GEN_POINTS = 8
MAX_GEN_FUNCTIONS = 12


def fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fmt_rv(x: Rv) -> list[str]:
    return [fmt(v) for v in x.values]


class _Reader:
    def __init__(self):
        self.errors: list[str] = []

    def rational(self, raw: Any, where: str) -> Fraction | None:
        if not isinstance(raw, str):
            if isinstance(raw, (int, float)) and not isinstance(raw, bool):
                hint = Fraction(str(raw)) if isinstance(raw, float) else Fraction(raw)
                self.errors.append(
                    f"{where}: numbers must be quoted exact rationals, write \"{fmt(hint)}\""
                )
            else:
                self.errors.append(f"{where}: expected a \"p/q\" string, got {raw!r}")
            return None
        if _RATIONAL.match(raw):
            num, _, den = raw.partition("/")
            if den and int(den) == 0:
                self.errors.append(f"{where}: zero denominator in {raw!r}")
                return None
            return Fraction(raw.replace(" ", ""))
        if _DECIMAL.match(raw):
            self.errors.append(
                f"{where}: decimal {raw!r} is not accepted, write \"{fmt(Fraction(raw.strip()))}\""
            )
            return None
        self.errors.append(f"{where}: malformed rational {raw!r}")
        return None

    def key(self, obj: dict, name: str, where: str):
        if name not in obj:
            self.errors.append(f"{where}: missing key {name!r}")
            return None
        return obj[name]


def instance_from_dict(doc: Any) -> Instance:
    r = _Reader()
    if not isinstance(doc, dict):
        raise ParseError(["top level: expected an object"])
    atoms_raw = r.key(doc, "atoms", "top level")
    points_raw = r.key(doc, "base_points", "top level")
    eps_raw = r.key(doc, "epsilon", "top level")
    fns_raw = r.key(doc, "functions", "top level")
    s_raw = r.key(doc, "S", "top level")
    if r.errors:
        raise ParseError(r.errors)

    labels, masses = [], []
    if not isinstance(atoms_raw, list) or not atoms_raw:
        raise ParseError(["atoms: expected a nonempty list of [label, mass] pairs"])
    for k, pair in enumerate(atoms_raw):
        if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str)):
            r.errors.append(f"atoms[{k}]: expected [label, \"p/q\"]")
            continue
        labels.append(pair[0])
        masses.append(r.rational(pair[1], f"atoms[{k}] mass"))
    if r.errors:
        raise ParseError(r.errors)
    if len(set(labels)) != len(labels):
        raise ParseError([f"atoms: labels are not unique: {labels}"])
    bad_mass = [l for l, p in zip(labels, masses) if p <= 0]
    if bad_mass:
        raise ParseError([f"atoms: non-positive mass at {bad_mass}"])
    total = sum(masses, Fraction(0))
    if total != 1:
        raise ParseError([f"atoms: masses sum to {total} ≠ 1"])
    space = ProbSpace(tuple(labels), tuple(masses))
    n = space.size

    def rv(raw: Any, where: str) -> Rv | None:
        if not isinstance(raw, list) or len(raw) != n:
            r.errors.append(f"{where}: expected a list of {n} rationals")
            return None
        vals = [r.rational(v, f"{where}[{i}]") for i, v in enumerate(raw)]
        if any(v is None for v in vals):
            return None
        return Rv(space, tuple(vals))

    if not isinstance(points_raw, list) or not points_raw or not all(isinstance(b, str) for b in points_raw):
        r.errors.append("base_points: expected a nonempty list of labels")
        raise ParseError(r.errors)
    points = tuple(points_raw)
    eps = rv(eps_raw, "epsilon")

    def table(raw: Any, where: str) -> BaseFunction | None:
        if not isinstance(raw, dict):
            r.errors.append(f"{where}: expected an object mapping base point to values")
            return None
        out = {}
        for b, vals in raw.items():
            x = rv(vals, f"{where}.{b}")
            if x is not None:
                out[b] = x
        return BaseFunction(out)

    pre, cyc = [], []
    if not isinstance(fns_raw, dict):
        r.errors.append("functions: expected an object with 'preamble' and 'cycle'")
    else:
        for seg, dest in (("preamble", pre), ("cycle", cyc)):
            items = fns_raw.get(seg, [] if seg == "preamble" else None)
            if items is None:
                r.errors.append(f"functions: missing key {seg!r}")
                continue
            if not isinstance(items, list):
                r.errors.append(f"functions.{seg}: expected a list")
                continue
            for k, t in enumerate(items):
                f = table(t, f"functions.{seg}[{k}]")
                if f is not None:
                    dest.append(f)
        if isinstance(fns_raw.get("cycle"), list) and not fns_raw["cycle"]:
            r.errors.append("functions.cycle: must be nonempty")

    selections = None
    if s_raw == "ALL":
        pass
    elif isinstance(s_raw, list):
        selections = []
        for k, z in enumerate(s_raw):
            if not isinstance(z, dict):
                r.errors.append(f"S[{k}]: expected an object mapping atom to base point")
                continue
            missing = [l for l in labels if l not in z]
            extra = [a for a in z if a not in labels]
            if missing or extra:
                r.errors.append(f"S[{k}]: missing atoms {missing}, unknown atoms {extra}")
                continue
            selections.append(Selection.from_map(space, z))
        selections = tuple(selections)
    else:
        r.errors.append("S: expected \"ALL\" or a list of selections")
    if r.errors:
        raise ParseError(r.errors)

    inst = Instance(
        space, points, EventuallyPeriodicSeq.of(pre, cyc), eps, selections
    )
    diags = validate(inst)
    if diags:
        raise ParseError(diags)
    return inst


def parse_instance(path: str | Path) -> Instance:
    text = Path(path).read_text()
    return loads_instance(text)


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    return instance_from_dict(doc)


def instance_to_dict(inst: Instance) -> dict:
    def table(f: BaseFunction) -> dict:
        return {b: fmt_rv(f.table[b]) for b in inst.base_points}

    return {
        "atoms": [[l, fmt(p)] for l, p in zip(inst.space.labels, inst.space.masses)],
        "base_points": list(inst.base_points),
        "epsilon": fmt_rv(inst.epsilon),
        "functions": {
            "preamble": [table(f) for f in inst.functions.preamble],
            "cycle": [table(f) for f in inst.functions.cycle],
        },
        "S": "ALL"
        if inst.selections is None
        else [z.as_map(inst.space) for z in inst.selections],
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, ensure_ascii=False) + "\n"


def digest(inst: Instance) -> str:
    canon = json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def generate(seed: int, shape: tuple[int, int, int, int]) -> Instance:
    """A reproducible random instance with S = ALL.

    ``shape`` is (atoms, base points, preamble length, cycle length).
    Masses are normalised positive rationals, epsilon lies in [1, 3] per
    atom and every table value is uniform on a grid of [-epsilon, epsilon].
    """
    n_atoms, n_points, n_pre, n_cyc = shape
    if not (1 <= n_atoms <= MAX_GEN_ATOMS):
        raise ResourceError(f"atoms must be in 1..{MAX_GEN_ATOMS}, got {n_atoms}")
    if not (1 <= n_points <= MAX_GEN_POINTS):
        raise ResourceError(f"base points must be in 1..{MAX_GEN_POINTS}, got {n_points}")
    if n_pre < 0 or n_cyc < 1:
        raise DomainError("need preamble >= 0 and cycle >= 1")
    if n_pre + n_cyc > MAX_GEN_FUNCTIONS:
        raise ResourceError(f"at most {MAX_GEN_FUNCTIONS} functions, got {n_pre + n_cyc}")
    rng = random.Random(seed)
    raw = [rng.randint(1, 9) for _ in range(n_atoms)]
    space = ProbSpace(
        tuple(f"w{i + 1}" for i in range(n_atoms)), tuple(Fraction(x, sum(raw)) for x in raw)
    )
    points = tuple(f"b{i + 1}" for i in range(n_points))
    eps = Rv(space, tuple(Fraction(rng.randint(4, 12), 4) for _ in range(n_atoms)))

    def table() -> BaseFunction:
        return BaseFunction(
            {
                b: Rv(space, tuple(e * Fraction(rng.randint(-12, 12), 12) for e in eps.values))
                for b in points
            }
        )

    pre = [table() for _ in range(n_pre)]
    cyc = [table() for _ in range(n_cyc)]
    return Instance(space, points, EventuallyPeriodicSeq.of(pre, cyc), eps)
