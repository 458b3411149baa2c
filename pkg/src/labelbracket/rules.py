"""Relation systems: fragments, rules and the line-oriented rule DSL.

A rule file looks like::

    ruleset kauffman
    ring A
    option orientation off
    vertexmap V+ Y
    vertexsig Y thick thick thick un un un
    smoothing RS.1 any:
      0: A * L0[1] L1[1] L2[2] L3[2]
      1: A^-1 * L0[1] L3[1] L1[2] L2[2]
    rule R2.1 both:
      lhs: TODO
      rhs: TODO
    scalar O[0] -> -A^2 - A^-2

Fragments use the node format of :mod:`labelbracket.planar`; ``L<i>[a]``
marks boundary leg ``i`` and ``empty`` is the empty fragment. Labels
starting with ``$`` are variables bound by matching.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .laurent import Laurent
from .planar import IN, OUT, THICK, THIN, UN, ParseError, PlanarMap, format_map, is_leg, leg_index, parse_map
from .trigraph import VertexSignature

log = logging.getLogger(__name__)

__all__ = [
    "Fragment", "RelationRule", "SmoothingRule", "RuleSet", "RuleError",
    "parse_ruleset", "serialize_ruleset", "load_ruleset", "bundled_rules",
]

CROSSING_CLASSES = ("any", "positive", "negative")
DATA_DIR = Path(__file__).with_name("data")


class RuleError(ParseError):
    """Structurally invalid rule (interface mismatch, unknown vertex type, ...)."""


@dataclass(frozen=True)
class Fragment:
    """An open trigraph with ordered boundary legs ``L0 .. L{k-1}``.

    ``todo`` marks a placeholder body that has not been transcribed yet.
    """

    map: PlanarMap = field(default_factory=PlanarMap.empty)
    todo: bool = False

    @classmethod
    def parse(cls, text: str, line: int | None = None) -> Fragment:
        text = text.strip()
        if text == "TODO":
            return cls(todo=True)
        if text == "empty":
            return cls()
        pm = parse_map(text, (line - 1) if line else 0)
        frag = cls(pm)
        legs = sorted(leg_index(pm.kinds[v]) for v in frag.leg_nodes)
        if legs != list(range(len(legs))):
            raise RuleError(f"legs must be numbered 0..k-1, got {legs}", line)
        return frag

    def __str__(self):
        if self.todo:
            return "TODO"
        if not self.map.num_nodes and not self.map.loops:
            return "empty"
        return format_map(self.map, one_per_line=False)

    @cached_property
    def leg_nodes(self) -> list[int]:
        """Node indices of the legs, ordered by leg number."""
        legs = [v for v, k in enumerate(self.map.kinds) if is_leg(k)]
        return sorted(legs, key=lambda v: leg_index(self.map.kinds[v]))

    @cached_property
    def interior(self) -> list[int]:
        return [v for v, k in enumerate(self.map.kinds) if not is_leg(k)]

    @property
    def num_legs(self) -> int:
        return len(self.leg_nodes)

    def leg_dart(self, i: int) -> int:
        return self.map.offsets[self.leg_nodes[i]]

    @cached_property
    def interface(self) -> tuple:
        """Per leg ``(edge kind, direction seen from inside the fragment)``."""
        out = []
        for i in range(self.num_legs):
            d = self.leg_dart(i)
            out.append((self.map.ekinds[d], -self.map.dirs[d]))
        return tuple(out)

    def through_arcs(self) -> tuple:
        """Pairs of legs joined directly by an arc."""
        return self._arcs

    @cached_property
    def _arcs(self) -> tuple:
        pairs = []
        for i in range(self.num_legs):
            m = self.map.mate[self.leg_dart(i)]
            j = self.map.node_of(m)
            if is_leg(self.map.kinds[j]) and i < leg_index(self.map.kinds[j]):
                pairs.append((i, leg_index(self.map.kinds[j])))
        return tuple(pairs)

    @cached_property
    def matchable(self) -> bool:
        """Whether occurrences can be located by anchored matching.

        Either a single bare arc between two legs (matched against host
        edges), or no leg-to-leg arcs and at most one interior component
        that touches the boundary.
        """
        if self.todo:
            return False
        arcs = self.through_arcs()
        if arcs:
            return not self.interior and len(arcs) == 1 and self.num_legs == 2
        inner = set(self.interior)
        touching = 0
        for comp in self.map.components():
            comp = [v for v in comp if v in inner]
            if not comp:
                continue
            if any(is_leg(self.map.kinds[self.map.node_of(self.map.mate[d])])
                   for v in comp for d in self.map.darts_of(v)):
                touching += 1
        return touching <= 1

    def node_kinds(self) -> set[str]:
        return {k for k in self.map.kinds if not is_leg(k)}


@dataclass(frozen=True)
class RelationRule:
    id: str
    lhs: Fragment
    rhs: tuple  # of (Laurent, Fragment)
    direction: str = "both"
    scalar: bool = False

    @property
    def todo(self) -> bool:
        return self.lhs.todo or any(f.todo for _, f in self.rhs)


@dataclass(frozen=True)
class SmoothingRule:
    id: str
    crossing_class: str
    choices: tuple  # two (Laurent, Fragment)

    @property
    def todo(self) -> bool:
        return any(f.todo for _, f in self.choices)


@dataclass(frozen=True)
class RuleSet:
    name: str
    variables: tuple = ()
    oriented: bool = True
    reflect: bool = False
    vertex_map: tuple = ()      # ((diagram kind, trigraph kind), ...)
    signatures: tuple = ()      # VertexSignature, ...
    smoothing: tuple = ()
    relations: tuple = ()

    @property
    def signature_table(self) -> dict[str, tuple]:
        table: dict[str, list] = {}
        for s in self.signatures:
            table.setdefault(s.kind, []).append(s)
        return {k: tuple(v) for k, v in table.items()}

    @property
    def scalar_rules(self) -> tuple:
        return tuple(r for r in self.relations if r.scalar)

    @property
    def relation_rules(self) -> tuple:
        return tuple(r for r in self.relations if not r.scalar)

    def rule(self, rule_id: str) -> RelationRule:
        for r in self.relations:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def incomplete(self) -> list[str]:
        """Ids of rules whose bodies are still TODO placeholders, smoothing rules first."""
        return [r.id for r in self.smoothing if r.todo] + [r.id for r in self.relations if r.todo]

    @property
    def complete(self) -> bool:
        return not self.incomplete()

    def zero(self) -> Laurent:
        return Laurent.constant(0, self.variables)

    def one(self) -> Laurent:
        return Laurent.constant(1, self.variables)


# parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\([^)]*\)|[^\s\[]+\[[^\]]*\]|\S+")
_NODE_TOKEN = re.compile(r"^~?[A-Za-z][\w.]*[+-]?(?:@\$?[\w.]+)?\[")
_DIR_WORDS = {"in": IN, "out": OUT, "un": UN, "any": None}


def _parse_sum(text: str, variables: tuple, line: int) -> list[tuple[Laurent, Fragment]]:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ParseError("empty rule body", line)
    if tokens == ["TODO"]:
        return [(Laurent.constant(1, variables), Fragment(todo=True))]
    terms = []
    i = 0
    sign = 1
    while i < len(tokens):
        if terms:
            if tokens[i] not in "+-":
                raise ParseError(f"expected '+' or '-' before {tokens[i]!r}", line)
            sign = 1 if tokens[i] == "+" else -1
            i += 1
        if i >= len(tokens):
            raise ParseError("dangling operator", line)
        if _NODE_TOKEN.match(tokens[i]) or tokens[i] == "empty":
            coeff = Laurent.constant(1, variables)
        else:
            try:
                coeff = Laurent.parse(tokens[i], variables)
            except ValueError as exc:
                raise ParseError(str(exc), line) from None
            i += 1
            if i >= len(tokens) or tokens[i] != "*":
                raise ParseError(f"expected '*' after coefficient {tokens[i - 1]!r}", line)
            i += 1
        frag_tokens = []
        while i < len(tokens) and tokens[i] not in "+-":
            frag_tokens.append(tokens[i])
            i += 1
        if not frag_tokens:
            raise ParseError("missing fragment after coefficient", line)
        if frag_tokens == ["empty"]:
            frag = Fragment()
        else:
            frag = Fragment.parse(" ".join(frag_tokens), line)
        terms.append((coeff * sign, frag))
    return terms


def parse_ruleset(text: str) -> RuleSet:
    name = None
    variables: tuple = ()
    oriented, reflect = True, False
    vmap: list = []
    sigs: list = []
    smoothing: list = []
    relations: list = []
    block = None  # (kind, id, header info, line, body dict)
    blocks = []

    lines = text.splitlines()
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0].isspace()
        stripped = line.strip()
        if indented:
            if block is None:
                raise ParseError("indented line outside a rule block", ln, 1)
            key, sep, rest = stripped.partition(":")
            if not sep:
                raise ParseError(f"expected 'key: value', got {stripped!r}", ln, len(line) - len(stripped) + 1)
            key = key.strip()
            if key in block[4]:
                raise ParseError(f"duplicate {key!r} in rule {block[1]}", ln, 1)
            block[4][key] = (rest.strip(), ln)
            continue
        block = None
        head, *args = stripped.split()
        if head == "ruleset":
            if len(args) != 1:
                raise ParseError("usage: ruleset NAME", ln, 1)
            name = args[0]
        elif head == "ring":
            variables = tuple(args)
            for v in variables:
                if not re.fullmatch(r"[A-Za-z_]\w*", v):
                    raise ParseError(f"bad variable name {v!r}", ln, 1)
        elif head == "option":
            if len(args) != 2 or args[0] not in ("orientation", "reflect") or args[1] not in ("on", "off"):
                raise ParseError("usage: option orientation|reflect on|off", ln, 1)
            if args[0] == "orientation":
                oriented = args[1] == "on"
            else:
                reflect = args[1] == "on"
        elif head == "vertexmap":
            if len(args) != 2 or args[0] not in ("V+", "V-"):
                raise ParseError("usage: vertexmap V+|V- KIND", ln, 1)
            vmap.append((args[0], args[1]))
        elif head == "vertexsig":
            if len(args) < 3 or (len(args) - 1) % 2:
                raise ParseError("usage: vertexsig KIND kinds... dirs...", ln, 1)
            kind, rest = args[0], args[1:]
            n = len(rest) // 2
            eks, dws = rest[:n], rest[n:]
            if any(e not in (THICK, THIN) for e in eks) or any(d not in _DIR_WORDS for d in dws):
                raise ParseError(f"bad vertexsig decoration {' '.join(rest)!r}", ln, 1)
            sigs.append(VertexSignature(kind, tuple(eks), tuple(_DIR_WORDS[d] for d in dws)))
        elif head in ("smoothing", "rule"):
            if not stripped.endswith(":"):
                raise ParseError(f"{head} header must end with ':'", ln, len(line))
            hdr = stripped[:-1].split()[1:]
            if not hdr:
                raise ParseError(f"{head} needs an id", ln, 1)
            rid, extra = hdr[0], hdr[1:]
            block = (head, rid, extra, ln, {})
            blocks.append(block)
        elif head == "scalar":
            body = stripped[len("scalar"):]
            frag_text, arrow, coeff_text = body.partition("->")
            if not arrow:
                raise ParseError("usage: scalar FRAGMENT -> COEFF", ln, 1)
            blocks.append(("scalar", None, [], ln, {"lhs": (frag_text.strip(), ln), "coeff": (coeff_text.strip(), ln)}))
        else:
            raise ParseError(f"unknown directive {head!r}", ln, 1)

    if name is None:
        raise ParseError("missing 'ruleset NAME' line", 1, 1)
    n_scalar = 0
    seen_ids = set()
    for kind, rid, extra, ln, body in blocks:
        if kind == "scalar":
            n_scalar += 1
            rid = f"scalar.{n_scalar}"
            frag_text, fl = body["lhs"]
            coeff_text, _ = body["coeff"]
            try:
                coeff = Laurent.parse(coeff_text, variables)
            except ValueError as exc:
                raise ParseError(str(exc), ln) from None
            lhs = Fragment.parse(frag_text, fl)
            if lhs.num_legs:
                raise RuleError(f"scalar fragment must be closed (no legs) in {rid}", ln)
            relations.append(RelationRule(rid, lhs, ((coeff, Fragment()),), "left_to_right", True))
        elif kind == "smoothing":
            cls = extra[0] if extra else "any"
            if cls not in CROSSING_CLASSES or len(extra) > 1:
                raise ParseError(f"crossing class must be one of {CROSSING_CLASSES}", ln)
            if not body:
                raise ParseError(f"empty rule body for {rid}", ln)
            if set(body) != {"0", "1"}:
                raise ParseError(f"smoothing {rid} needs exactly choices '0:' and '1:'", ln)
            choices = []
            for key in ("0", "1"):
                txt, bl = body[key]
                terms = _parse_sum(txt, variables, bl)
                if len(terms) != 1:
                    raise ParseError(f"smoothing choice {key} of {rid} must be a single term", bl)
                choices.append(terms[0])
            for _, frag in choices:
                if not frag.todo and frag.num_legs != 4:
                    raise RuleError(f"interface mismatch in {rid}: smoothing fragments need 4 legs", ln)
            smoothing.append(SmoothingRule(rid, cls, tuple(choices)))
        else:
            direction = {"both": "both", "ltr": "left_to_right", "left_to_right": "left_to_right"}.get(
                extra[0] if extra else "both")
            if direction is None or len(extra) > 1:
                raise ParseError(f"rule direction must be 'both' or 'ltr' in {rid}", ln)
            if not body:
                raise ParseError(f"empty rule body for {rid}", ln)
            if set(body) != {"lhs", "rhs"}:
                raise ParseError(f"rule {rid} needs 'lhs:' and 'rhs:' lines", ln)
            lt, ll = body["lhs"]
            if not lt:
                raise ParseError(f"empty rule body for {rid}", ll)
            lhs = Fragment.parse(lt, ll)
            rhs = _parse_sum(body["rhs"][0], variables, body["rhs"][1])
            relations.append(RelationRule(rid, lhs, tuple(rhs), direction))
        if rid in seen_ids:
            raise ParseError(f"duplicate rule id {rid}", ln)
        seen_ids.add(rid)

    rs = RuleSet(name, variables, oriented, reflect, tuple(vmap), tuple(sigs), tuple(smoothing), tuple(relations))
    _check_ruleset(rs, blocks)
    return rs


def _check_ruleset(rs: RuleSet, blocks) -> None:
    line_of = {}
    n_scalar = 0
    for kind, rid, _, ln, _ in blocks:
        if kind == "scalar":
            n_scalar += 1
            rid = f"scalar.{n_scalar}"
        line_of[rid] = ln
    table = rs.signature_table
    for dk, tk in rs.vertex_map:
        if tk not in table:
            raise RuleError(f"unknown vertex type {tk} in vertexmap {dk}")
    for r in rs.relations:
        frags = [r.lhs] + [f for _, f in r.rhs]
        live = [f for f in frags if not f.todo]
        ifaces = {f.interface for f in live}
        if len(ifaces) > 1:
            sizes = [f.num_legs for f in live]
            raise RuleError(f"interface mismatch in rule {r.id}: leg counts {sizes}"
                            if len(set(sizes)) > 1 else f"interface mismatch in rule {r.id}: leg types differ",
                            line_of.get(r.id))
        for f in live:
            for k in f.node_kinds():
                if k not in table:
                    raise RuleError(f"unknown vertex type {k} in rule {r.id}", line_of.get(r.id))
        if not r.lhs.todo and not r.lhs.matchable:
            log.warning("rule %s: lhs cannot be matched by anchored search; forward use disabled", r.id)
    for r in rs.smoothing:
        for _, f in r.choices:
            for k in f.node_kinds():
                if k not in table:
                    raise RuleError(f"unknown vertex type {k} in smoothing {r.id}", line_of.get(r.id))


def serialize_ruleset(rs: RuleSet) -> str:
    inv = {v: k for k, v in _DIR_WORDS.items()}
    out = [f"ruleset {rs.name}"]
    if rs.variables:
        out.append("ring " + " ".join(rs.variables))
    out.append(f"option orientation {'on' if rs.oriented else 'off'}")
    out.append(f"option reflect {'on' if rs.reflect else 'off'}")
    for dk, tk in rs.vertex_map:
        out.append(f"vertexmap {dk} {tk}")
    for s in rs.signatures:
        out.append(f"vertexsig {s.kind} {' '.join(s.edge_kinds)} {' '.join(inv[d] for d in s.dirs)}")

    def term(c, f):
        return str(f) if f.todo else f"({c}) * {f}"

    for r in rs.smoothing:
        out.append(f"smoothing {r.id} {r.crossing_class}:")
        for i, (c, f) in enumerate(r.choices):
            out.append(f"  {i}: {term(c, f)}")
    for r in rs.relations:
        if r.scalar:
            out.append(f"scalar {r.lhs} -> {r.rhs[0][0]}")
            continue
        out.append(f"rule {r.id} {'both' if r.direction == 'both' else 'ltr'}:")
        out.append(f"  lhs: {r.lhs}")
        if any(f.todo for _, f in r.rhs):
            out.append("  rhs: TODO")
        else:
            out.append("  rhs: " + " + ".join(term(c, f) for c, f in r.rhs))
    return "\n".join(out) + "\n"


def load_ruleset(path: str | Path) -> RuleSet:
    return parse_ruleset(Path(path).read_text())


def bundled_rules(name: str) -> RuleSet:
    """Load ``kauffman`` or ``label-bracket`` from the package data."""
    return load_ruleset(DATA_DIR / f"{name}.rules")
