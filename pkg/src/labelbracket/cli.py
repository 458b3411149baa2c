"""Command-line entry point: ``labelbracket validate|bracket|equiv|certify|sweep``.

Exit status is a fixed contract: 0 success or Equal, 1 validation failure
(including incomplete rulesets and ring mismatches), 2 I/O or parse error,
3 Unknown.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .diagram import load_diagram, validate_diagram
from .engine import Equal, equivalent, trace_json
from .laurent import RingMismatch
from .moves import (APPLY, INVERSE, VARIANTS, Certified, MoveError, certify_invariance,
                    enumerate_move_sites, load_corpus, normalize_kind, sweep)
from .planar import ParseError
from .rules import DATA_DIR, RuleSet, load_ruleset
from .statesum import RulesetIncomplete, StateError, bracket, state_sum
from .sums import FormalSum

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_UNKNOWN = 0, 1, 2, 3
BUDGET_ENV = "LABELBRACKET_BUDGET"
DEFAULT_BUDGET = 10_000


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    rules: str | None = None
    normalize_budget: int = DEFAULT_BUDGET
    max_nodes: int = 100_000
    max_depth: int = 64
    workers: int = 1
    output: str = "text"
    deterministic: bool = False
    move: str | None = None
    variant: str | None = None
    site: int | None = None
    direction: str = APPLY
    moves: tuple = ()
    out: str | None = None

    def __post_init__(self):
        for name in ("normalize_budget", "max_nodes", "max_depth", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.replace('_', ' ')} must be positive")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _resolve_rules(name_or_path: str) -> RuleSet:
    path = Path(name_or_path)
    if not path.exists():
        bundled = DATA_DIR / f"{name_or_path}.rules"
        if not bundled.exists():
            raise _Fail(EXIT_IO, f"ruleset not found: {name_or_path}")
        path = bundled
    return load_ruleset(path)


def _read_diagram(path: str):
    if not Path(path).exists():
        raise _Fail(EXIT_IO, f"no such file: {path}")
    return load_diagram(path)


def _read_valid_diagram(path: str):
    d = _read_diagram(path)
    report = validate_diagram(d)
    if not report.ok:
        raise _Fail(EXIT_INVALID, f"{path}: invalid diagram\n{report}")
    return d


def _emit(cfg: RunConfig, payload: dict, text: str):
    if cfg.output == "json":
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def parse_moves(text: str) -> tuple:
    """``"Ω1..Ω5"`` or a comma list such as ``"Ω2,Ω3"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(normalize_kind(p)[1:]) for p in text.split(".."))
        return tuple(f"Ω{i}" for i in range(lo, hi + 1))
    return tuple(normalize_kind(p) for p in text.split(",") if p.strip())


# subcommands -------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    status = EXIT_OK
    for path in cfg.inputs:
        report = validate_diagram(_read_diagram(path))
        _emit(cfg, {"file": path, "valid": report.ok,
                    "violations": [str(v) for v in report.violations],
                    "warnings": list(map(str, report.warnings))},
              f"{path}: {report}")
        if not report.ok:
            status = EXIT_INVALID
    return status


def cmd_bracket(cfg: RunConfig) -> int:
    rs = _resolve_rules(cfg.rules)
    d = _read_valid_diagram(cfg.inputs[0])
    res = bracket(d, rs, cfg.normalize_budget, cfg.workers)
    _emit(cfg, {"ruleset": rs.name, "variables": list(rs.variables), "state_count": res.state_count,
                "terms": res.normalized.to_json(), "fixpoint": res.fixpoint},
          str(res.normalized) if res.fixpoint else f"{res.normalized}\n(normalization budget exhausted)")
    return EXIT_OK


def _read_sum(path: str, rs: RuleSet, workers: int) -> FormalSum:
    if Path(path).suffix == ".json":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise _Fail(EXIT_IO, str(exc)) from exc
        terms = data["terms"] if isinstance(data, dict) else data
        variables = data.get("variables", rs.variables) if isinstance(data, dict) else rs.variables
        return FormalSum.from_json(terms, variables, rs.reflect)
    return state_sum(_read_valid_diagram(path), rs, workers)[0]


def cmd_equiv(cfg: RunConfig) -> int:
    rs = _resolve_rules(cfg.rules)
    a, b = (_read_sum(p, rs, cfg.workers) for p in cfg.inputs)
    result = equivalent(a, b, rs, cfg.max_nodes, cfg.max_depth, cfg.workers)
    if cfg.output == "json":
        print(trace_json(result))
    elif isinstance(result, Equal):
        print(f"Equal ({len(result.trace)} steps)")
        for side, steps in (("a", result.trace.from_a), ("b", result.trace.from_b)):
            for s in steps:
                print(f"  {side}: {s.rule_id} {s.direction} term={s.term} nodes={list(s.site.nodes)}")
    else:
        print(f"Unknown: {result.reason} after {result.explored} sums")
    return EXIT_OK if isinstance(result, Equal) else EXIT_UNKNOWN


def _pick_variant(kind: str, variant: str | None) -> list:
    if variant is None:
        return list(VARIANTS[kind])
    if variant.isdigit():
        i = int(variant)
        if i >= len(VARIANTS[kind]):
            raise _Fail(EXIT_INVALID, f"{kind} has {len(VARIANTS[kind])} variants")
        return [VARIANTS[kind][i]]
    if variant not in VARIANTS[kind]:
        raise _Fail(EXIT_INVALID, f"unknown {kind} variant {variant!r}; choose from {VARIANTS[kind]}")
    return [variant]


def cmd_certify(cfg: RunConfig) -> int:
    rs = _resolve_rules(cfg.rules)
    d = _read_valid_diagram(cfg.inputs[0])
    kind = normalize_kind(cfg.move)
    sites = [m for v in _pick_variant(kind, cfg.variant)
             for m in enumerate_move_sites(d, kind, v, cfg.direction)]
    if cfg.site is not None:
        if not 0 <= cfg.site < len(sites):
            raise _Fail(EXIT_INVALID, f"site {cfg.site} out of range ({len(sites)} sites)")
        sites = [sites[cfg.site]]
    rows, status = [], EXIT_OK
    if not sites:
        # no site: the identity move, certified with an empty trace
        res = certify_invariance(d, None, rs, cfg.max_nodes, cfg.max_depth, cfg.workers)
        rows.append({"move": kind, "variant": None, "site": None, "outcome": "Certified",
                     "trace": res.trace.to_json()})
    for i, m in enumerate(sites):
        res = certify_invariance(d, m, rs, cfg.max_nodes, cfg.max_depth, cfg.workers)
        row = {"move": kind, "variant": m.variant, "direction": m.direction,
               "site": cfg.site if cfg.site is not None else i, "site_data": list(m.site)}
        if isinstance(res, Certified):
            row.update(outcome="Certified", trace=res.trace.to_json())
        else:
            row.update(outcome="Unknown", reason=res.reason, explored=res.explored)
            status = EXIT_UNKNOWN
        rows.append(row)
    if cfg.output == "json":
        print(json.dumps({"ruleset": rs.name, "rows": rows}, sort_keys=True, ensure_ascii=False))
    else:
        for r in rows:
            tail = f"{len(r['trace']['from_a']) + len(r['trace']['from_b'])} steps" \
                if r["outcome"] == "Certified" else r["reason"]
            print(f"{r['move']} {r['variant']} site {r['site']}: {r['outcome']} ({tail})")
    return status


def cmd_sweep(cfg: RunConfig) -> int:
    rs = _resolve_rules(cfg.rules)
    corpus_dir = Path(cfg.inputs[0])
    if not corpus_dir.is_dir():
        raise _Fail(EXIT_IO, f"no such corpus directory: {corpus_dir}")
    corpus = load_corpus(corpus_dir)
    for name, d in corpus:
        report = validate_diagram(d)
        if not report.ok:
            raise _Fail(EXIT_INVALID, f"{name}: invalid diagram\n{report}")
    rows = sweep(corpus, rs, cfg.moves, cfg.max_nodes, cfg.max_depth, cfg.workers, cfg.deterministic)
    report = {"ruleset": rs.name, "moves": list(cfg.moves),
              "corpus": [name for name, _ in corpus], "rows": rows}
    text = json.dumps(report, sort_keys=True, ensure_ascii=False, indent=1) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    if cfg.output == "json" and not cfg.out:
        sys.stdout.write(text)
    else:
        counts: dict = {}
        for r in rows:
            counts[r["outcome"]] = counts.get(r["outcome"], 0) + 1
        print(", ".join(f"{k}: {v}" for k, v in sorted(counts.items())) or "no cells")
    outcomes = {r["outcome"] for r in rows}
    if outcomes <= {"Certified"}:
        return EXIT_OK
    if "incomplete" in outcomes:
        return EXIT_INVALID
    return EXIT_UNKNOWN


COMMANDS = {"validate": cmd_validate, "bracket": cmd_bracket, "equiv": cmd_equiv,
            "certify": cmd_certify, "sweep": cmd_sweep}


# argument parsing ---------------------------------------------------------------

def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labelbracket",
                                     description="State-sum brackets of knotted trivalent graph diagrams.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, rules=True):
        if rules:
            p.add_argument("--rules", required=True, help="ruleset file or bundled name (kauffman, label-bracket)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--deterministic", action="store_true", help="omit wall times from reports")

    def search(p):
        p.add_argument("--budget", type=int, default=None,
                       help=f"equivalence search budget in sums (default ${BUDGET_ENV} or --max-nodes)")
        p.add_argument("--max-nodes", type=int, default=100_000)
        p.add_argument("--max-depth", type=int, default=64)

    p = sub.add_parser("validate", help="check diagram files")
    p.add_argument("diagrams", nargs="*")
    p.add_argument("--diagram", action="append", default=[])
    common(p, rules=False)

    p = sub.add_parser("bracket", help="compute the normalized bracket of a diagram")
    p.add_argument("--diagram", required=True)
    p.add_argument("--budget", type=int, default=None, help=f"normalization steps (default ${BUDGET_ENV})")
    common(p)

    p = sub.add_parser("equiv", help="decide equality of two sums or two diagrams' brackets")
    p.add_argument("a")
    p.add_argument("b")
    search(p)
    common(p)

    p = sub.add_parser("certify", help="certify invariance under one move")
    p.add_argument("--diagram", required=True)
    p.add_argument("--move", required=True)
    p.add_argument("--variant")
    p.add_argument("--site", type=int)
    p.add_argument("--inverse", action="store_true", help="use inverse-direction sites")
    search(p)
    common(p)

    p = sub.add_parser("sweep", help="certify every site of every move on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--moves", default="Ω1..Ω5")
    p.add_argument("--out")
    search(p)
    common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cmd = args.subcommand
    inputs = {"validate": lambda: list(args.diagrams) + list(args.diagram),
              "bracket": lambda: [args.diagram], "equiv": lambda: [args.a, args.b],
              "certify": lambda: [args.diagram], "sweep": lambda: [args.corpus]}[cmd]()
    budget = getattr(args, "budget", None)
    if cmd == "validate" and not inputs:
        raise _Fail(EXIT_IO, "no diagram given")
    kw = dict(subcommand=cmd, inputs=inputs, rules=getattr(args, "rules", None),
              workers=args.workers, output="json" if args.json else "text",
              deterministic=args.deterministic)
    if cmd == "bracket":
        kw["normalize_budget"] = budget or _default_budget()
    if cmd in ("equiv", "certify", "sweep"):
        kw["max_nodes"] = budget or (int(os.environ[BUDGET_ENV]) if os.environ.get(BUDGET_ENV)
                                     else args.max_nodes)
        kw["max_depth"] = args.max_depth
    if cmd == "certify":
        kw.update(move=args.move, variant=args.variant, site=args.site,
                  direction=INVERSE if args.inverse else APPLY)
    if cmd == "sweep":
        kw.update(moves=parse_moves(args.moves), out=args.out)
    return RunConfig(**kw)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RulesetIncomplete, StateError, RingMismatch, MoveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
