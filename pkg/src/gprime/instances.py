"""Instance files: parsing, construction, report documents, witness replay.

An instance is a JSON object holding a groupoid table plus exactly one
ring-structure section:

    {"groupoid": {...}, "grading": {"ring": R, "components": {...}}}
    {"groupoid": {...}, "partial_action": {"parts": {...}, "ideals": ..., "maps": ...}}
    {"groupoid": {...}, "groupoid_ring": {"base": R}}

Ring constructors R are single-key objects:

    {"cyclic": 8}                      Z/8
    {"field": 2} | {"field": [2, 2]}   GF(p) and GF(p^k)
    {"matrix": {"base": R, "n": 2}}
    {"direct_sum": {"parts": [R, ...], "keys": ["e", "f"]}}
    {"group_ring": {"base": R, "group": H}}
    {"table": {"add": [[...]], "mul": [[...]]}}

with groups H one of {"trivial": {}}, {"cyclic": n}, {"klein_four": {}} or
{"labels": [...], "table": [[...]]}.

Ring elements appear as strings in a tiny expression grammar:

    expr   := term ('+' term)*
    term   := INT '*' factor | factor
    factor := INT | 'e' '(' i ',' j [',' c] ')' | 'at' '(' KEY ',' expr ')'
            | 'delta' '(' KEY ',' expr ')' | '(' expr ')'

A bare integer names an element by index, ``k * x`` is the k-fold sum,
``e(i, j[, c])`` a matrix unit with an optional coefficient index,
``at(key, x)`` the injection into a direct summand, and ``delta(label, x)``
a coefficient placed on a group element or morphism.  The maps of a partial
action are given per morphism as ``"identity"``, an explicit ``{"table":
{expr: expr}}``, or ``{"transport": "identity" | "frobenius"}``, which moves
the declared domain from the source fibre to the range fibre, twisting every
Galois-field digit by x -> x^p when asked.

Everything semantic reuses the library validators, so an instance that
builds has passed every axiom check those enforce.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .errors import (BoundExceeded, InternalDisagreement, MalformedInput,
                     ParseError, SchemaError)
from .grading import (Grading, invariant_closure, is_nearly_epsilon_strong,
                      is_support_hub, isotropy_component, support_groupoid,
                      validate_grading)
from .groupoid import (FiniteGroup, FiniteGroupoid, is_connected, isotropy,
                       validate_groupoid)
from .partial import (SKEW_RING_BOUND, PartialAction, build_groupoid_ring,
                      build_skew_ring, connell_check, is_A_G_prime, is_global,
                      is_group_type, restrict_to_isotropy, sigma_invariant_closure,
                      skew_prime_verdict, skew_support_hub,
                      sufficient_conditions_report, validate_partial_action)
from .primeness import equivalence_report, evaluate_condition, is_prime_oracle
from .rings import (CyclicRing, DirectSumRing, FiniteRing, GaloisField,
                    GroupRing, MatrixRing, TableRing, additive_closure,
                    is_prime_bruteforce, is_zero_product, principal_ideal)

__all__ = [
    "Instance", "BuiltInstance", "parse", "parse_data", "build_instance",
    "build_ring", "build_group", "parse_element", "instance_digest",
    "canonical_json", "validation_document", "analysis_document",
    "primeness_document", "equivalence_document", "render_report",
    "replay_witness", "verify_witnesses",
]

KINDS = ("grading", "partial_action", "groupoid_ring")


# ---------------------------------------------------------------------------
# canonical form and schema checks
# ---------------------------------------------------------------------------

def canonical_json(data) -> str:
    """The canonical serialization the digest is taken over."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True)


def instance_digest(data) -> str:
    return hashlib.sha256(canonical_json(data).encode("ascii")).hexdigest()


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise SchemaError(message)


def _expect_keys(obj: Mapping, where: str, required: Sequence[str],
                 optional: Sequence[str] = ()) -> None:
    _expect(isinstance(obj, dict), f"{where} must be a JSON object")
    missing = [k for k in required if k not in obj]
    _expect(not missing, f"{where} is missing {', '.join(missing)}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    _expect(not unknown, f"{where} has unknown keys {', '.join(unknown)}")


def _check_groupoid_section(sec) -> Tuple[str, ...]:
    """Reference-level checks only; the algebra is validate_groupoid's job.

    Returns all declared morphism names (identities included) for use by
    later label checks.
    """
    _expect_keys(sec, "groupoid", ("objects",), ("morphisms", "inverse", "compose"))
    objs = sec["objects"]
    _expect(isinstance(objs, list) and objs
            and all(isinstance(o, str) for o in objs),
            "groupoid.objects must be a non-empty list of strings")
    _expect(len(set(objs)) == len(objs), "groupoid.objects has duplicates")
    names = list(objs)
    for entry in sec.get("morphisms", []):
        _expect_keys(entry, "a morphism entry", ("name", "src", "rng"))
        _expect(all(isinstance(entry[k], str) for k in ("name", "src", "rng")),
                "morphism name, src and rng must be strings")
        for k in ("src", "rng"):
            _expect(entry[k] in objs,
                    f"morphism {entry['name']!r} references unknown object {entry[k]!r}")
        _expect(entry["name"] not in names,
                f"duplicate morphism name {entry['name']!r}")
        names.append(entry["name"])
    inverse = sec.get("inverse", {})
    _expect(isinstance(inverse, dict), "groupoid.inverse must be an object")
    for k, v in inverse.items():
        _expect(k in names and isinstance(v, str) and v in names,
                f"inverse entry {k!r} -> {v!r} references an undeclared morphism")
    for triple in sec.get("compose", []):
        _expect(isinstance(triple, list) and len(triple) == 3
                and all(isinstance(x, str) and x in names for x in triple),
                f"compose entry {triple!r} must be three declared morphism names")
    return tuple(names)


def _check_ring_spec(spec, where: str) -> None:
    if isinstance(spec, dict) and len(spec) == 1:
        key, arg = next(iter(spec.items()))
        if key == "cyclic":
            _expect(isinstance(arg, int) and arg >= 1, f"{where}: cyclic wants a positive modulus")
            return
        if key == "field":
            ok = (isinstance(arg, int) or
                  (isinstance(arg, list) and len(arg) == 2 and all(isinstance(x, int) for x in arg)))
            _expect(ok, f"{where}: field wants p or [p, k]")
            return
        if key == "matrix":
            _expect_keys(arg, f"{where}.matrix", ("base", "n"))
            _expect(isinstance(arg["n"], int) and arg["n"] >= 1, f"{where}: matrix size must be positive")
            _check_ring_spec(arg["base"], f"{where}.matrix.base")
            return
        if key == "direct_sum":
            _expect_keys(arg, f"{where}.direct_sum", ("parts",), ("keys",))
            _expect(isinstance(arg["parts"], list) and arg["parts"],
                    f"{where}: direct_sum wants a non-empty parts list")
            for i, part in enumerate(arg["parts"]):
                _check_ring_spec(part, f"{where}.direct_sum.parts[{i}]")
            if "keys" in arg:
                _expect(isinstance(arg["keys"], list)
                        and len(arg["keys"]) == len(arg["parts"])
                        and all(isinstance(k, str) for k in arg["keys"]),
                        f"{where}: keys must be one string per part")
            return
        if key == "group_ring":
            _expect_keys(arg, f"{where}.group_ring", ("base", "group"))
            _check_ring_spec(arg["base"], f"{where}.group_ring.base")
            _check_group_spec(arg["group"], f"{where}.group_ring.group")
            return
        if key == "table":
            _expect_keys(arg, f"{where}.table", ("add", "mul"), ("labels",))
            return
    raise SchemaError(f"{where} must be a single-key ring constructor, "
                      f"one of cyclic, field, matrix, direct_sum, group_ring, table")


def _check_group_spec(spec, where: str) -> None:
    _expect(isinstance(spec, dict), f"{where} must be an object")
    if "labels" in spec:
        _expect_keys(spec, where, ("labels", "table"))
        return
    _expect(len(spec) == 1, f"{where} must be a single-key group constructor")
    key, arg = next(iter(spec.items()))
    if key == "cyclic":
        _expect(isinstance(arg, int) and arg >= 1, f"{where}: cyclic wants a positive order")
    elif key not in ("trivial", "klein_four"):
        raise SchemaError(f"{where}: unknown group constructor {key!r}")


def _check_elements(value, where: str) -> None:
    _expect(isinstance(value, list) and all(isinstance(x, str) for x in value),
            f"{where} must be a list of element expressions")


def _check_label_map(sec, where: str, names: Tuple[str, ...]) -> None:
    _expect(isinstance(sec, dict), f"{where} must be an object")
    for label in sec:
        _expect(label in names, f"{where} references unknown morphism {label!r}")


@dataclass(frozen=True)
class Instance:
    """A parsed (but not yet built) instance file."""

    name: str
    kind: str
    digest: str
    raw: Dict


def parse_data(data, name: str = "<data>") -> Instance:
    """Schema-check an already-decoded JSON document."""
    _expect(isinstance(data, dict), "an instance must be a JSON object")
    present = [k for k in KINDS if k in data]
    _expect(len(present) == 1,
            f"exactly one of {', '.join(KINDS)} must be present, found "
            f"{', '.join(present) if present else 'none'}")
    kind = present[0]
    _expect_keys(data, "the instance", ("groupoid", kind), ("bounds", "description"))
    names = _check_groupoid_section(data["groupoid"])
    objects = tuple(data["groupoid"]["objects"])

    sec = data[kind]
    if kind == "grading":
        _expect_keys(sec, "grading", ("ring", "components"))
        _check_ring_spec(sec["ring"], "grading.ring")
        _check_label_map(sec["components"], "grading.components", names)
        for label, exprs in sec["components"].items():
            _check_elements(exprs, f"grading.components[{label!r}]")
    elif kind == "partial_action":
        _expect_keys(sec, "partial_action", ("parts",), ("ideals", "maps"))
        _expect(isinstance(sec["parts"], dict)
                and set(sec["parts"]) == set(objects),
                "partial_action.parts must give one ring per groupoid object")
        for obj, spec in sec["parts"].items():
            _check_ring_spec(spec, f"partial_action.parts[{obj!r}]")
        _check_label_map(sec.get("ideals", {}), "partial_action.ideals", names)
        for label, exprs in sec.get("ideals", {}).items():
            _check_elements(exprs, f"partial_action.ideals[{label!r}]")
        _check_label_map(sec.get("maps", {}), "partial_action.maps", names)
        for label, spec in sec.get("maps", {}).items():
            ok = (spec in ("identity", "transport")
                  or (isinstance(spec, dict) and len(spec) == 1
                      and (("table" in spec and isinstance(spec["table"], dict))
                           or ("transport" in spec
                               and spec["transport"] in ("identity", "frobenius")))))
            _expect(ok, f"partial_action.maps[{label!r}] must be \"identity\", "
                        "a {\"table\": ...} or a {\"transport\": ...} entry")
    else:
        _expect_keys(sec, "groupoid_ring", ("base",))
        _check_ring_spec(sec["base"], "groupoid_ring.base")

    if "bounds" in data:
        _expect_keys(data["bounds"], "bounds", (), ("max_ring",))
        if "max_ring" in data["bounds"]:
            _expect(isinstance(data["bounds"]["max_ring"], int)
                    and data["bounds"]["max_ring"] >= 1,
                    "bounds.max_ring must be a positive integer")
    return Instance(name=name, kind=kind, digest=instance_digest(data), raw=data)


def parse(path) -> Instance:
    """Read, decode and schema-check an instance file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return parse_data(data, name=str(path))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def build_group(spec) -> FiniteGroup:
    if "labels" in spec:
        return FiniteGroup(spec["labels"], spec["table"])
    key, arg = next(iter(spec.items()))
    if key == "trivial":
        return FiniteGroup.trivial()
    if key == "cyclic":
        return FiniteGroup.cyclic(arg)
    return FiniteGroup.klein_four()


def build_ring(spec) -> FiniteRing:
    key, arg = next(iter(spec.items()))
    if key == "cyclic":
        return CyclicRing(arg)
    if key == "field":
        return GaloisField(arg) if isinstance(arg, int) else GaloisField(arg[0], arg[1])
    if key == "matrix":
        return MatrixRing(build_ring(arg["base"]), arg["n"])
    if key == "direct_sum":
        return DirectSumRing([build_ring(p) for p in arg["parts"]], keys=arg.get("keys"))
    if key == "group_ring":
        return GroupRing(build_ring(arg["base"]), build_group(arg["group"]))
    return TableRing(arg["add"], arg["mul"], labels=arg.get("labels"))


# ---------------------------------------------------------------------------
# element expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_>]*)|([()+,*])|(\s+)|(.)")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    for m in _TOKEN.finditer(text):
        num, name, punct, space, bad = m.groups()
        if space is not None:
            continue
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", column=m.start() + 1)
        if num is not None:
            out.append(("int", num, m.start() + 1))
        elif name is not None:
            out.append(("name", name, m.start() + 1))
        else:
            out.append((punct, punct, m.start() + 1))
    return out


class _ElementParser:
    """Recursive descent over the element grammar, against a concrete ring."""

    def __init__(self, text: str, ring: FiniteRing):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, kind: Optional[str] = None) -> Tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of expression in {self.text!r}",
                             column=len(self.text) + 1)
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[1]!r}", column=tok[2])
        self.pos += 1
        return tok

    def parse(self) -> int:
        value = self._expr(self.ring)
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok[1]!r}", column=tok[2])
        return value

    def _expr(self, ring: FiniteRing) -> int:
        value = self._term(ring)
        while self._peek() is not None and self._peek()[0] == "+":
            self._take("+")
            value = ring.add(value, self._term(ring))
        return value

    def _term(self, ring: FiniteRing) -> int:
        tok = self._peek()
        if (tok is not None and tok[0] == "int"
                and self.pos + 1 < len(self.tokens)
                and self.tokens[self.pos + 1][0] == "*"):
            self._take("int")
            self._take("*")
            return _k_fold(ring, int(tok[1]), self._factor(ring))
        value = self._factor(ring)
        nxt = self._peek()
        if nxt is not None and nxt[0] == "*":
            raise ParseError("only integer scalars may multiply", column=nxt[2])
        return value

    def _factor(self, ring: FiniteRing) -> int:
        tok = self._take()
        kind, text, col = tok
        if kind == "(":
            value = self._expr(ring)
            self._take(")")
            return value
        if kind == "int":
            value = int(text)
            if not 0 <= value < ring.size:
                raise ParseError(f"element index {value} out of range for {ring.tag}",
                                 column=col)
            return value
        if kind != "name":
            raise ParseError(f"unexpected {text!r}", column=col)
        if text == "e":
            return self._matrix_unit(ring, col)
        if text == "at":
            return self._injection(ring, col)
        if text == "delta":
            return self._delta(ring, col)
        raise ParseError(f"unknown form {text!r}", column=col)

    def _matrix_unit(self, ring: FiniteRing, col: int) -> int:
        if not isinstance(ring, MatrixRing):
            raise ParseError(f"e(i, j) needs a matrix ring, not {ring.tag}", column=col)
        self._take("(")
        itok = self._take("int")
        self._take(",")
        jtok = self._take("int")
        i, j = int(itok[1]), int(jtok[1])
        for value, tok in ((i, itok), (j, jtok)):
            if not 0 <= value < ring.n:
                raise ParseError(f"matrix index {value} out of range for "
                                 f"{ring.tag}", column=tok[2])
        coeff = None
        if self._peek() is not None and self._peek()[0] == ",":
            self._take(",")
            ctok = self._take("int")
            coeff = int(ctok[1])
            if not 0 <= coeff < ring.base.size:
                raise ParseError(f"coefficient index {coeff} out of range "
                                 f"for {ring.base.tag}", column=ctok[2])
        self._take(")")
        return ring.unit(i, j, coeff)

    def _key(self) -> str:
        tok = self._take()
        if tok[0] not in ("int", "name"):
            raise ParseError(f"expected a label, got {tok[1]!r}", column=tok[2])
        return tok[1]

    def _injection(self, ring: FiniteRing, col: int) -> int:
        if not isinstance(ring, DirectSumRing):
            raise ParseError(f"at(key, x) needs a direct sum, not {ring.tag}", column=col)
        self._take("(")
        key = self._key()
        self._take(",")
        try:
            pos = ring.key_index(key)
        except MalformedInput as exc:
            raise ParseError(str(exc), column=col) from None
        value = self._expr(ring.parts[pos])
        self._take(")")
        return ring.inject(pos, value)

    def _delta(self, ring: FiniteRing, col: int) -> int:
        self._take("(")
        key = self._key()
        self._take(",")
        if isinstance(ring, GroupRing):
            if key not in ring.group.labels:
                raise ParseError(f"unknown group element {key!r}", column=col)
            pos = ring.group.labels.index(key)
            value = self._expr(ring.base)
        elif hasattr(ring, "action"):
            act = ring.action
            pos = act.groupoid.morphism_index(key)
            value = self._expr(act.ambient)
        else:
            raise ParseError(f"delta(g, x) needs a group or skew ring, not {ring.tag}",
                             column=col)
        self._take(")")
        return ring.inject(pos, value)


def _k_fold(ring: FiniteRing, k: int, x: int) -> int:
    out, step = 0, x
    while k:
        if k & 1:
            out = ring.add(out, step)
        step = ring.add(step, step)
        k >>= 1
    return out


def parse_element(text: str, ring: FiniteRing) -> int:
    """Evaluate one element expression against ``ring``."""
    return _ElementParser(text, ring).parse()


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

@dataclass
class BuiltInstance:
    instance: Instance
    groupoid: FiniteGroupoid
    grading: Optional[Grading] = None
    action: Optional[PartialAction] = None
    base: Optional[FiniteRing] = None

    @property
    def kind(self) -> str:
        return self.instance.kind


def _twist_value(part: FiniteRing, value: int, twist: str) -> int:
    if twist == "identity":
        return value
    if isinstance(part, GaloisField):
        return part.frobenius(value)
    if isinstance(part, DirectSumRing):
        return part.encode([_twist_value(r, d, twist)
                            for r, d in zip(part.parts, part.decode(value))])
    raise SchemaError(f"the frobenius twist needs Galois-field digits, got {part.tag}")


def _sigma_table(spec, g: int, amb: DirectSumRing, G: FiniteGroupoid,
                 gens: Dict[int, List[int]]) -> Dict[int, int]:
    domain_gens = gens.get(G.inv[g], [])
    domain = (additive_closure(amb, domain_gens).elements
              if domain_gens else frozenset({0}))
    if spec == "identity":
        return {x: x for x in domain}
    if isinstance(spec, dict) and "table" in spec:
        table = {parse_element(k, amb): parse_element(v, amb)
                 for k, v in spec["table"].items()}
        table.setdefault(0, 0)
        return table
    twist = spec["transport"] if isinstance(spec, dict) else "identity"
    src_pos, rng_pos = G.src[g], G.rng[g]
    part_src, part_rng = amb.parts[src_pos], amb.parts[rng_pos]
    if part_src.tag != part_rng.tag:
        raise SchemaError(
            f"transport along {G.morphisms[g]!r} needs identical fibres, got "
            f"{part_src.tag} at {G.objects[src_pos]!r} and {part_rng.tag} "
            f"at {G.objects[rng_pos]!r}")
    return {x: amb.inject(rng_pos,
                          _twist_value(part_src, amb.decode(x)[src_pos], twist))
            for x in domain}


def build_instance(instance: Instance, bound: int = SKEW_RING_BOUND) -> BuiltInstance:
    """Construct and fully validate the structures an instance describes."""
    G = validate_groupoid(instance.raw["groupoid"])
    sec = instance.raw[instance.kind]
    if instance.kind == "grading":
        ring = build_ring(sec["ring"])
        comps = {G.morphism_index(label): [parse_element(s, ring) for s in exprs]
                 for label, exprs in sec["components"].items()}
        return BuiltInstance(instance, G, grading=validate_grading(G, ring, comps))
    if instance.kind == "partial_action":
        amb = DirectSumRing([build_ring(sec["parts"][obj]) for obj in G.objects],
                            keys=G.objects)
        gens = {G.morphism_index(label): [parse_element(s, amb) for s in exprs]
                for label, exprs in sec.get("ideals", {}).items()}
        maps = {G.morphism_index(label): _sigma_table(spec, G.morphism_index(label), amb, G, gens)
                for label, spec in sec.get("maps", {}).items()}
        return BuiltInstance(instance, G,
                             action=validate_partial_action(G, amb, gens, maps))
    return BuiltInstance(instance, G, base=build_ring(sec["base"]))


def resolve_bound(instance: Instance, bound: Optional[int] = None) -> int:
    """The carrier bound for this instance: explicit argument, then the
    file's override, then the library default."""
    if bound is not None:
        return bound
    return instance.raw.get("bounds", {}).get("max_ring", SKEW_RING_BOUND)


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------

def _tool_section() -> Dict:
    return {"name": "gprime", "version": __version__}


def _instance_section(built: BuiltInstance) -> Dict:
    return {"name": built.instance.name, "kind": built.kind,
            "digest": built.instance.digest}


def _ring_facts(ring: FiniteRing) -> Dict:
    return {"tag": ring.tag, "size": ring.size, "unital": ring.one is not None}


def _groupoid_facts(G: FiniteGroupoid) -> Dict:
    return {"objects": list(G.objects),
            "morphisms": G.n_morphisms,
            "connected": is_connected(G),
            "isotropy_orders": {G.objects[e]: isotropy(G, e).order
                                for e in range(G.n_objects)}}


def carrier_grading(built: BuiltInstance, bound: int) -> Grading:
    """The graded product ring of the instance, built on demand."""
    if built.grading is not None:
        return built.grading
    if built.action is not None:
        return build_skew_ring(built.action, bound)
    return build_groupoid_ring(built.base, built.groupoid, bound)


def _pair_witness(space: str, closure: str, ring: FiniteRing,
                  a: int, b: int) -> Dict:
    return {"kind": "zero-ideal-pair", "space": space, "closure": closure,
            "a": a, "b": b, "a_label": ring.label(a), "b_label": ring.label(b)}


def validation_document(built: BuiltInstance, bound: int) -> Dict:
    doc = {"tool": _tool_section(), "instance": _instance_section(built),
           "valid": True, "groupoid": _groupoid_facts(built.groupoid)}
    if built.kind == "grading":
        doc["checks"] = ["groupoid", "grading"]
        doc["carrier"] = _ring_facts(built.grading.ring)
    elif built.kind == "partial_action":
        doc["checks"] = ["groupoid", "partial-action"]
        doc["ambient"] = _ring_facts(built.action.ambient)
    else:
        doc["checks"] = ["groupoid", "coefficient-ring"]
        doc["coefficients"] = _ring_facts(built.base)
    return doc


def analysis_document(built: BuiltInstance, bound: int) -> Dict:
    doc = {"tool": _tool_section(), "instance": _instance_section(built),
           "groupoid": _groupoid_facts(built.groupoid)}
    G = built.groupoid
    grading: Optional[Grading]
    try:
        grading = carrier_grading(built, bound)
        doc["carrier"] = _ring_facts(grading.ring)
    except BoundExceeded as exc:
        grading = None
        doc["carrier"] = {"built": False, "reason": str(exc)}
    if grading is not None:
        nes = is_nearly_epsilon_strong(grading)
        doc["nearly_epsilon_strong"] = {"holds": nes.holds,
                                        "units_certified": len(nes.certificate),
                                        "failures": list(nes.failures)}
        support = support_groupoid(grading, nes=True if nes.holds else None)
        doc["support"] = {
            "objects": [G.objects[e] for e in support.support_objects],
            "morphisms": len(support.subgroupoid.members)}
        doc["support_hubs"] = {G.objects[e]: is_support_hub(grading, e).is_hub
                               for e in support.support_objects}
    if built.action is not None:
        act = built.action
        transport = is_group_type(act)
        doc["partial_action"] = {
            "global": is_global(act),
            "group_type": {"holds": transport.holds,
                           "anchor": None if transport.anchor is None
                           else G.objects[transport.anchor],
                           "family": {G.objects[o]: G.morphisms[h]
                                      for o, h in transport.family.items()},
                           "reason": transport.reason},
            "alive_objects": [G.objects[e] for e in act.support_objects()],
            "ideal_sizes": {G.morphisms[g]: len(act.ideals[g])
                            for g in range(G.n_morphisms)}}
        if grading is None:
            doc["support_hubs"] = {G.objects[e]: skew_support_hub(act, e).is_hub
                                   for e in act.support_objects()}
    if built.base is not None:
        res = connell_check(built.base, G)
        doc["groupoid_ring"] = {"coefficients": _ring_facts(built.base),
                                "criterion": {"holds": res.holds,
                                              "connected": res.connected,
                                              "coefficients_prime": res.coefficients_prime,
                                              "isotropy_ok": res.isotropy_ok,
                                              "reasons": list(res.reasons)}}
    return doc


def _grading_primeness(built: BuiltInstance, grading: Grading, method: str,
                       bound: int, with_timings: bool) -> Dict:
    G = grading.groupoid
    doc: Dict = {}
    witnesses: List[Dict] = []
    if method == "oracle":
        res = is_prime_oracle(grading, bound=bound)
        doc.update(verdict=res.prime, method="oracle", degenerate=res.degenerate)
        if res.witness is not None:
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring,
                                           res.witness.a, res.witness.b))
    elif method == "theorem":
        value, evidence = evaluate_condition(grading, "vii", oracle_bound=bound)
        doc.update(verdict=value, method="theorem")
        doc["objects"] = {G.objects[e]: {"hub": ev.hub.is_hub,
                                         "isotropy_prime": ev.isotropy_prime.prime}
                          for e, ev in evidence["objects"].items()}
        for e, ev in evidence["objects"].items():
            w = ev.isotropy_prime.witness
            if w is not None:
                sub = isotropy_component(grading, e)
                witnesses.append(_pair_witness(f"isotropy:{G.objects[e]}", "ideal",
                                               sub.ring, w.a, w.b))
    else:
        rep = equivalence_report(grading, oracle_bound=bound,
                                 with_timings=with_timings)
        doc.update(verdict=rep.verdict, method=rep.method,
                   conditions=dict(rep.conditions), degenerate=rep.degenerate)
        doc["objects"] = {G.objects[e]: {"hub": ev.hub.is_hub,
                                         "isotropy_prime": ev.isotropy_prime.prime}
                          for e, ev in rep.per_object.items()}
        if rep.timings is not None:
            doc["timings"] = {k: round(v, 6) for k, v in rep.timings.items()}
        w = rep.witnesses
        if "oracle" in w:
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring,
                                           w["oracle"].a, w["oracle"].b))
        if "graded_ideal_pair" in w:
            a, b = w["graded_ideal_pair"][0], w["graded_ideal_pair"][1]
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring, a, b))
        if "invariant_ideal_pair" in w:
            a, b = w["invariant_ideal_pair"][0], w["invariant_ideal_pair"][1]
            witnesses.append(_pair_witness("carrier", "invariant", grading.ring, a, b))
        for e, pw in w.get("non_prime_isotropy", {}).items():
            if pw is not None:
                sub = isotropy_component(grading, e)
                witnesses.append(_pair_witness(f"isotropy:{G.objects[e]}", "ideal",
                                               sub.ring, pw.a, pw.b))
        if "support_hub" in w:
            doc["evidence"] = {"support_hub": G.objects[w["support_hub"]]}
        if "non_hub_objects" in w:
            doc["evidence"] = {
                "non_hub_objects": {
                    G.objects[e]: None if blk is None else
                    {"morphism": G.morphisms[blk[0]],
                     "element": grading.ring.label(blk[1])}
                    for e, blk in w["non_hub_objects"].items()}}
    doc["witnesses"] = witnesses
    return doc


def _isotropy_skew_witnesses(act: PartialAction, per: Mapping[int, bool],
                             bound: int) -> List[Dict]:
    """Zero pairs backing each non-prime isotropy reduction; the restricted
    actions and their product rings are cached, so this re-derivation is a
    lookup."""
    G = act.groupoid
    out = []
    for e, prime in sorted(per.items()):
        if prime:
            continue
        sub = build_skew_ring(restrict_to_isotropy(act, e), bound)
        res = is_prime_bruteforce(sub.ring)
        if res.witness is not None:
            out.append(_pair_witness(f"isotropy-skew:{G.objects[e]}", "ideal",
                                     sub.ring, res.witness.a, res.witness.b))
    return out


def _partial_primeness(built: BuiltInstance, method: str, bound: int) -> Dict:
    act = built.action
    G = act.groupoid
    doc: Dict = {}
    witnesses: List[Dict] = []
    if method == "oracle":
        grading = build_skew_ring(act, bound)
        res = is_prime_bruteforce(grading.ring, bound=max(bound, grading.ring.size))
        doc.update(verdict=res.prime, method="oracle")
        if res.witness is not None:
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring,
                                           res.witness.a, res.witness.b))
    elif method == "theorem":
        transport = is_group_type(act)
        if not transport.holds:
            raise MalformedInput("the isotropy reduction needs a transport "
                                 f"family: {transport.reason}")
        per = {e: is_prime_bruteforce(
                   build_skew_ring(restrict_to_isotropy(act, e), bound).ring).prime
               for e in act.support_objects()}
        doc.update(verdict=any(per.values()), method="theorem",
                   isotropy_prime={G.objects[e]: v for e, v in per.items()})
        witnesses.extend(_isotropy_skew_witnesses(act, per, bound))
    else:
        verdict = skew_prime_verdict(act, bound)
        doc.update(verdict=verdict.prime, method=verdict.method,
                   isotropy_prime={G.objects[e]: v
                                   for e, v in verdict.isotropy_prime.items()})
        if verdict.method == "group-type":
            witnesses.extend(_isotropy_skew_witnesses(act, verdict.isotropy_prime,
                                                      bound))
        if verdict.oracle is not None and verdict.oracle.witness is not None:
            grading = build_skew_ring(act, bound)
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring,
                                           verdict.oracle.witness.a,
                                           verdict.oracle.witness.b))
        try:
            pair = is_A_G_prime(act, bound)
            doc["coefficients_G_prime"] = pair.holds
            if pair.witness is not None:
                witnesses.append(_pair_witness("ambient", "sigma", act.ambient,
                                               pair.witness[0], pair.witness[1]))
        except BoundExceeded:
            doc["coefficients_G_prime"] = None
        try:
            rep = sufficient_conditions_report(act, bound)
            doc["sufficient_conditions"] = {
                "applicable": rep.applicable,
                "trivial_isotropy_at": None if rep.trivial_isotropy_at is None
                else G.objects[rep.trivial_isotropy_at],
                "intersection_at": None if rep.intersection_at is None
                else G.objects[rep.intersection_at],
                "maximal_commutative_at": None if rep.maximal_commutative_at is None
                else G.objects[rep.maximal_commutative_at],
                "guarantees_prime": rep.guarantees_prime}
        except BoundExceeded:
            doc["sufficient_conditions"] = None
    doc["witnesses"] = witnesses
    return doc


def _groupoid_ring_primeness(built: BuiltInstance, method: str, bound: int) -> Dict:
    doc: Dict = {}
    witnesses: List[Dict] = []
    criterion = connell_check(built.base, built.groupoid)
    crit_doc = {"holds": criterion.holds, "connected": criterion.connected,
                "coefficients_prime": criterion.coefficients_prime,
                "isotropy_ok": criterion.isotropy_ok,
                "reasons": list(criterion.reasons)}
    if method == "theorem":
        doc.update(verdict=criterion.holds, method="theorem", criterion=crit_doc)
    else:
        grading = carrier_grading(built, bound)
        res = is_prime_bruteforce(grading.ring, bound=max(bound, grading.ring.size))
        if res.witness is not None:
            witnesses.append(_pair_witness("carrier", "ideal", grading.ring,
                                           res.witness.a, res.witness.b))
        if method == "oracle":
            doc.update(verdict=res.prime, method="oracle")
        else:
            if res.prime != criterion.holds:
                raise InternalDisagreement(
                    "the three-part criterion disagrees with the oracle",
                    details={"criterion": criterion.holds, "oracle": res.prime})
            doc.update(verdict=res.prime, method="oracle", criterion=crit_doc)
    doc["witnesses"] = witnesses
    return doc


def primeness_document(built: BuiltInstance, method: str = "all",
                       bound: int = SKEW_RING_BOUND,
                       with_timings: bool = False) -> Dict:
    """The primeness verdict by the requested route(s), with replayable
    witnesses for every claimed zero product."""
    if method not in ("oracle", "theorem", "all"):
        raise MalformedInput(f"unknown method {method!r}; "
                             "expected oracle, theorem or all")
    doc = {"tool": _tool_section(), "instance": _instance_section(built)}
    if built.kind == "grading":
        doc.update(_grading_primeness(built, built.grading, method, bound,
                                      with_timings))
    elif built.kind == "partial_action":
        doc.update(_partial_primeness(built, method, bound))
    else:
        doc.update(_groupoid_ring_primeness(built, method, bound))
    return doc


def equivalence_document(built: BuiltInstance, bound: int = SKEW_RING_BOUND,
                         with_timings: bool = False) -> Dict:
    """The seven-way harness over the instance's product ring."""
    grading = carrier_grading(built, bound)
    doc = {"tool": _tool_section(), "instance": _instance_section(built)}
    doc.update(_grading_primeness(built, grading, "all", bound, with_timings))
    return doc


# ---------------------------------------------------------------------------
# witness replay
# ---------------------------------------------------------------------------

def replay_witness(built: BuiltInstance, witness: Mapping,
                   bound: int = SKEW_RING_BOUND) -> bool:
    """Recompute a reported zero-ideal pair from scratch.

    True only when both named elements are nonzero, their labels match the
    instance's rings, and the ideals they regenerate multiply to zero.
    """
    space, closure = witness["space"], witness["closure"]
    a, b = witness["a"], witness["b"]
    if a == 0 or b == 0:
        return False
    if space == "ambient":
        act = built.action
        if act is None or closure != "sigma":
            return False
        ring = act.ambient
        ia, ib = (sigma_invariant_closure(act, [a]),
                  sigma_invariant_closure(act, [b]))
    elif space.startswith("isotropy-skew:"):
        act = built.action
        if act is None:
            return False
        e = act.groupoid.object_index(space.split(":", 1)[1])
        ring = build_skew_ring(restrict_to_isotropy(act, e), bound).ring
        ia, ib = principal_ideal(ring, a), principal_ideal(ring, b)
    else:
        grading = carrier_grading(built, bound)
        if space.startswith("isotropy:"):
            label = space.split(":", 1)[1]
            e = grading.groupoid.object_index(label)
            ring = isotropy_component(grading, e).ring
            ia, ib = principal_ideal(ring, a), principal_ideal(ring, b)
        elif space == "carrier":
            ring = grading.ring
            if closure == "invariant":
                ia, ib = (invariant_closure(grading, [a]),
                          invariant_closure(grading, [b]))
            else:
                ia, ib = principal_ideal(ring, a), principal_ideal(ring, b)
        else:
            return False
    if witness.get("a_label") not in (None, ring.label(a)):
        return False
    if witness.get("b_label") not in (None, ring.label(b)):
        return False
    return (not ia.is_zero() and not ib.is_zero()
            and is_zero_product(ia, ib))


def verify_witnesses(built: BuiltInstance, doc: Mapping,
                     bound: int = SKEW_RING_BOUND) -> int:
    """Replay every witness in a report; raise the falsification alarm on
    the first one that does not reproduce.  Returns the number replayed."""
    replayed = 0
    for witness in doc.get("witnesses", []):
        if not replay_witness(built, witness, bound):
            raise InternalDisagreement(
                "a reported witness does not replay",
                details={"witness": dict(witness)})
        replayed += 1
    return replayed


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_report(doc: Mapping, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise MalformedInput(f"unknown output format {fmt!r}")
    lines: List[str] = []
    _render_into(lines, doc, 0)
    return "\n".join(lines) + "\n"


def _render_into(lines: List[str], value, depth: int, key: Optional[str] = None) -> None:
    pad = "  " * depth
    head = f"{pad}{key}: " if key is not None else pad
    if isinstance(value, Mapping):
        if key is not None:
            lines.append(f"{pad}{key}:")
        for k, v in value.items():
            _render_into(lines, v, depth + (key is not None), str(k))
    elif isinstance(value, (list, tuple)):
        if all(not isinstance(v, (Mapping, list, tuple)) for v in value):
            lines.append(head + (", ".join(_scalar(v) for v in value) or "(none)"))
        else:
            lines.append(f"{pad}{key}:")
            for v in value:
                item: List[str] = []
                _render_into(item, v, depth + 1)
                item[0] = f"{pad}- {item[0][len(pad) + 2:]}"
                lines.extend(item)
    else:
        lines.append(head + _scalar(value))


def _scalar(value) -> str:
    if value is True:
        return "yes"
    if value is False:
        return "no"
    if value is None:
        return "-"
    return str(value)
