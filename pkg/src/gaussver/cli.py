"""Command-line entry point: ``gaussver <command> ...``.

Exit codes: 0 verified, 1 mathematical counterexample, 2 usage or
configuration error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import gauss, kernels, report
from .core import Monomial
from .errors import GaussError
from .gauss import SearchStatus, validate_witness, WitnessStatus
from .jacobian import check_identity, theta_minor
from .known_witnesses import fixture_witnesses
from .polymatroid import exchange_check
from .sets import (
    MonomialSet,
    e_set,
    format_lines,
    mon,
    mon_star,
    orbit_representatives,
    read_lines,
    veronese,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    r: int | None = None
    mode: str | None = None
    threads: int | None = None
    budget: int | None = None
    output: str | None = None
    format: str = "json"
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.d is not None and self.d < 3:
            raise ConfigError("d must be >= 3")
        if self.r is not None and self.d is not None and self.r > self.d:
            raise ConfigError("r must be <= d")
        if self.budget is not None and self.budget <= 0:
            raise ConfigError("budget must be positive")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GAUSSVER_THREADS", "1")))
    except ValueError:
        return 1


def _write(cfg: RunConfig, rep: dict, default_name: str) -> Path:
    path = Path(cfg.output or default_name)
    path.write_text(report.render(rep, cfg.format))
    return path


def _config_dict(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items() if v is not None}


# --------------------------------------------------------------------------
# set expressions for `polymatroid --set`
# --------------------------------------------------------------------------

_FAMILIES = {
    "veronese": (veronese, 2),
    "mon": (mon, 3),
    "mon_star": (mon_star, 3),
    "e_set": (e_set, 1),
    "target": (gauss.target_set, 1),
}

_TOKEN = re.compile(r"\s*(?:(?P<name>[a-z_]+)\((?P<args>[^)]*)\)|\{(?P<lit>[^}]*)\}|@(?P<file>[^\s+\-]+)|(?P<op>[+-]))")


def parse_set_expression(text: str) -> MonomialSet:
    """Parse e.g. ``mon_star(4,10,5)-e_set(5)`` or ``mon(3,4,4)-{1,1,1,1}``.

    Literals hold one or more monomials separated by ``;``; ``@path`` reads a
    file in the line format. ``+`` is union and ``-`` difference, applied
    left to right.
    """
    pos = 0
    acc: MonomialSet | None = None
    op = None
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse set expression at {text[pos:]!r}")
        pos = m.end()
        if m.group("op"):
            if acc is None or op is not None:
                raise ValueError("operator without a left operand")
            op = m.group("op")
            continue
        if m.group("name"):
            name = m.group("name")
            if name not in _FAMILIES:
                raise ValueError(f"unknown set family {name!r}")
            fn, arity = _FAMILIES[name]
            args = [int(a) for a in m.group("args").split(",") if a.strip()]
            if len(args) != arity:
                raise ValueError(f"{name} takes {arity} arguments")
            term = fn(*args)
        elif m.group("lit") is not None:
            rows = [tuple(int(x) for x in part.split(",")) for part in m.group("lit").split(";") if part.strip()]
            dim = acc.dimension if acc is not None else None
            term = MonomialSet(rows, dimension=dim)
        else:
            term = read_lines(Path(m.group("file")).read_text())
        if acc is None:
            acc = term
        elif op == "-":
            acc = acc - term
        elif op == "+":
            acc = acc | term
        else:
            raise ValueError("missing operator between set terms")
        op = None
    if acc is None or op is not None:
        raise ValueError("incomplete set expression")
    return acc


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_sets(args) -> int:
    kind = args.kind
    if kind == "veronese":
        s = veronese(_need(args.r, "--r"), _need(args.d, "--d"))
    elif kind == "mon":
        s = mon(_need(args.t, "--t"), _need(args.r, "--r"), _need(args.d, "--d"))
    elif kind == "mon_star":
        s = mon_star(_need(args.t, "--t"), _need(args.r, "--r"), _need(args.d, "--d"))
    elif kind == "e_set":
        s = e_set(_need(args.d, "--d"))
    else:
        s = gauss.target_set(_need(args.d, "--d"))
    lines = format_lines(s)
    reps = orbit_representatives(s)
    summary = f"{len(s)} monomials, {len(reps)} orbit shapes: " + " ".join(
        "(" + ",".join(map(str, p)) + ")" for p in reps
    )
    if args.output:
        Path(args.output).write_text(lines)
        print(summary)
    else:
        sys.stdout.write(lines)
        print(summary, file=sys.stderr)
    return EXIT_OK


def _need(v, flag):
    if v is None:
        raise ConfigError(f"{flag} is required")
    return v


def cmd_verify(args) -> int:
    cfg = RunConfig("verify", d=args.d, r=3, mode=args.mode, threads=args.threads, budget=args.budget,
                    output=args.output, format=args.format, seed=args.seed)
    if not 5 <= args.d <= 7:
        raise ConfigError("verify covers 5 <= d <= 7; use `conjecture` for d >= 8")
    rep = gauss.verify_equality(args.d, args.mode, args.threads, args.budget, args.backend, args.cache_dir)
    summary = report.equality_summary(rep)
    out = report.make_report("verify", _config_dict(cfg), report.equality_results(rep),
                             {**rep.stats, "summary": summary, "threads": args.threads})
    path = _write(cfg, out, f"verify-d{args.d}-{args.mode}.{args.format}")
    print(f"d={args.d} mode={args.mode}: {summary['confirmed']}/{summary['orbits']} orbits confirmed, "
          f"{summary['missing']} missing, {summary['extra']} extra -> {path}")
    return EXIT_OK if rep.holds else EXIT_COUNTEREXAMPLE


def cmd_conjecture(args) -> int:
    cfg = RunConfig("conjecture", d=args.d, r=3, mode="witness", threads=args.threads, budget=args.budget,
                    output=args.output, format=args.format, seed=args.seed)
    if args.d < 8:
        raise ConfigError("conjecture mode needs d >= 8; smaller d is covered by `verify`")
    rep = gauss.conjecture_check(args.d, args.budget, args.threads, args.samples, args.seed,
                                 args.backend, args.cache_dir)
    summary = report.equality_summary(rep)
    out = report.make_report("conjecture", {**_config_dict(cfg), "samples": args.samples},
                             report.equality_results(rep),
                             {**rep.stats, "summary": summary, "threads": args.threads})
    path = _write(cfg, out, f"conjecture-d{args.d}.{args.format}")
    print(f"d={args.d}: {summary['confirmed']}/{summary['orbits']} orbits certified, "
          f"{summary['missing']} open, {summary['extra']} outside -> {path}")
    if rep.extra or any(s is SearchStatus.NO_WITNESS for _, s in rep.missing):
        return EXIT_COUNTEREXAMPLE
    if rep.missing:
        return EXIT_BUDGET
    return EXIT_OK


def violation_record(v) -> dict:
    return {
        "kind": "violation",
        "u": list(v.u.exps),
        "v": list(v.v.exps),
        "i": v.i,
        "tried": [{"j": j, "monomial": list(m.exps)} for j, m in v.tried],
    }


def cmd_polymatroid(args) -> int:
    cfg = RunConfig("polymatroid", output=args.output, format=args.format)
    try:
        s = parse_set_expression(args.set)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    t0 = time.perf_counter()
    v = exchange_check(s, args.backend)
    results = [] if v is None else [violation_record(v)]
    stats = {"size": len(s), "nodes": len(s), "wall_ms": (time.perf_counter() - t0) * 1e3}
    out = report.make_report("polymatroid", {**_config_dict(cfg), "set": args.set}, results, stats)
    if args.output:
        _write(cfg, out, args.output)
    rendered = report.to_text(out) if v is not None else f"exchange property holds for {len(s)} monomials\n"
    sys.stdout.write(rendered)
    return EXIT_OK if v is None else EXIT_COUNTEREXAMPLE


SELFCHECK_PAIRS = ((2, 4), (2, 5), (3, 5), (3, 6))


def cmd_selfcheck(args) -> int:
    cfg = RunConfig("selfcheck", output=args.output, format=args.format, seed=args.seed)
    fixtures = fixture_witnesses()
    if args.corrupt_fixture:
        w = fixtures[0]
        fixtures[0] = gauss.Witness(w.dimension, w.target, (w.generators[0],) * w.dimension, w.det, "corrupted")
    results = []
    failures = 0
    for w in fixtures:
        status = validate_witness(w)
        ok = status is WitnessStatus.OK and check_identity(w.generators, w.dimension) is None
        failures += not ok
        results.append({"kind": "fixture", "target": list(w.target.exps), "status": status.value, "identity": ok})
    rng = np.random.default_rng(args.seed)
    for r, d in SELFCHECK_PAIRS:
        gens = veronese(r, d)
        bad = nonzero = single = 0
        for _ in range(args.samples):
            idx = np.sort(rng.choice(len(gens), size=d, replace=False))
            sub = [gens[int(i)] for i in idx]
            if check_identity(sub, d) is not None:
                bad += 1
            tm = theta_minor(sub, d)
            if not tm.is_zero():
                nonzero += 1
                single += len(tm) == 1
        failures += bad + (nonzero - single)
        results.append({"kind": "random", "r": r, "d": d, "samples": args.samples,
                        "mismatches": bad, "nonzero": nonzero, "single_term": single})
    out = report.make_report("selfcheck", {**_config_dict(cfg), "samples": args.samples}, results,
                             {"nodes": len(results), "failures": failures})
    if args.output:
        _write(cfg, out, args.output)
    print(f"selfcheck: {len(fixtures)} fixtures, {len(SELFCHECK_PAIRS)}x{args.samples} random samples, "
          f"{failures} failures")
    return EXIT_OK if failures == 0 else EXIT_COUNTEREXAMPLE


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaussver", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, report_fmt=True):
        sp.add_argument("--output", "-o", help="output path")
        if report_fmt:
            sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--backend", choices=kernels.BACKENDS, default=None,
                        help="kernel backend (default from GAUSSVER_BACKEND)")

    sp = sub.add_parser("sets", help="write a monomial family in the line format")
    sp.add_argument("kind", choices=("veronese", "mon", "mon_star", "e_set", "target"))
    sp.add_argument("--t", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_sets)

    for name, func, helptext in (
        ("verify", cmd_verify, "compare the Gauss algebra of V_{3,d} with Mon*(4,2d) minus E_d, 5 <= d <= 7"),
        ("conjecture", cmd_conjecture, "certify the same equality orbit by orbit for d >= 8"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--d", type=int, required=True)
        if name == "verify":
            sp.add_argument("--mode", choices=("enumerate", "witness"), default="enumerate")
        else:
            sp.add_argument("--samples", type=int, default=1000, help="random subsets for the inclusion check")
        sp.add_argument("--threads", type=int, default=_default_threads())
        sp.add_argument("--budget", type=int, default=gauss.DEFAULT_BUDGET, help="node limit per target")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cache-dir", type=Path, default=None, help="witness table cache")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("polymatroid", help="check the exchange axiom on a set expression")
    sp.add_argument("--set", required=True, help="e.g. 'mon_star(4,10,5)-e_set(5)'")
    common(sp)
    sp.set_defaults(func=cmd_polymatroid)

    sp = sub.add_parser("selfcheck", help="Jacobian identity on fixtures and random subsets")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--corrupt-fixture", action="store_true", help=argparse.SUPPRESS)
    common(sp)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GaussError, ValueError) as exc:
        print(f"gaussver: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
