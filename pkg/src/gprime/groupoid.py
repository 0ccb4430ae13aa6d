"""Finite groupoids, their subgroupoids, and finite (isotropy) groups.

A groupoid is stored as a dense table structure: objects and morphisms are
indexed by position, with identity morphisms created automatically from the
object labels and placed first, followed by the declared morphisms in input
order.  All iteration is in index order, so every search in the package
returns the same witness for the same input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import AxiomViolation, BoundExceeded, MalformedInput, UnknownMorphism, UnknownObject

__all__ = [
    "FiniteGroup",
    "FiniteGroupoid",
    "Subgroupoid",
    "validate_groupoid",
    "validate_subgroupoid",
    "pair_groupoid",
    "one_object_groupoid",
    "disjoint_union",
    "isotropy",
    "is_connected",
    "orbit",
    "subgroups",
    "is_normal",
    "has_nontrivial_finite_normal_subgroup",
    "is_torsion_free",
]

SUBGROUP_ORDER_BOUND = 24


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A finite group on elements 0..n-1 with 0 the identity."""

    def __init__(self, labels: Sequence[str], mul_table: Sequence[Sequence[int]],
                 parent_elements: Optional[Sequence[int]] = None, name: Optional[str] = None):
        self.labels: Tuple[str, ...] = tuple(labels)
        self.order = len(self.labels)
        if self.order == 0:
            raise MalformedInput("a group needs at least one element")
        self.name = name or f"grp{self.order}"
        self._mul: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in mul_table)
        self._check_table()
        self._inv: Tuple[int, ...] = tuple(self._mul[a].index(0) for a in range(self.order))
        #: element indices in an enclosing structure (e.g. morphism indices of
        #: a groupoid, or parent-group indices for a subgroup); None otherwise.
        self.parent_elements: Optional[Tuple[int, ...]] = (
            tuple(parent_elements) if parent_elements is not None else None)

    def _check_table(self) -> None:
        n = self.order
        if len(self._mul) != n or any(len(row) != n for row in self._mul):
            raise MalformedInput(f"multiplication table must be {n}x{n}")
        for a in range(n):
            if self._mul[0][a] != a or self._mul[a][0] != a:
                raise AxiomViolation("group-identity", f"element 0 is not an identity at {a}")
            if sorted(self._mul[a]) != list(range(n)) or sorted(r[a] for r in self._mul) != list(range(n)):
                raise AxiomViolation("group-cancellation", f"row/column {a} is not a permutation")
            if 0 not in self._mul[a]:
                raise AxiomViolation("group-inverse", f"element {a} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self._mul[self._mul[a][b]][c] != self._mul[a][self._mul[b][c]]:
                        raise AxiomViolation("group-associativity", f"({a}*{b})*{c} != {a}*({b}*{c})")

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self._mul[x][a]
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        return all(self._mul[a][b] == self._mul[b][a]
                   for a in range(self.order) for b in range(a + 1, self.order))

    @staticmethod
    def trivial(label: str = "1") -> "FiniteGroup":
        return FiniteGroup([label], [[0]], name="C1")

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        if n < 1:
            raise MalformedInput(f"cyclic group order must be positive, got {n}")
        labels = ["1"] + [f"t{'' if k == 1 else k}" for k in range(1, n)]
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return FiniteGroup(labels, table, name=f"C{n}")

    @staticmethod
    def klein_four() -> "FiniteGroup":
        table = [[b ^ a for b in range(4)] for a in range(4)]
        return FiniteGroup(["1", "a", "b", "ab"], table, name="V4")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# groupoids
# ---------------------------------------------------------------------------

class FiniteGroupoid:
    """A finite groupoid with identity morphisms first, declared ones after."""

    def __init__(self, objects: Sequence[str], morphisms: Sequence[str],
                 src: Sequence[int], rng: Sequence[int],
                 comp: Dict[Tuple[int, int], int], inv: Sequence[int]):
        self.objects: Tuple[str, ...] = tuple(objects)
        self.morphisms: Tuple[str, ...] = tuple(morphisms)
        self.src: Tuple[int, ...] = tuple(src)
        self.rng: Tuple[int, ...] = tuple(rng)
        self._comp: Dict[Tuple[int, int], int] = dict(comp)
        self.inv: Tuple[int, ...] = tuple(inv)
        self._object_index = {lab: i for i, lab in enumerate(self.objects)}
        self._morphism_index = {lab: i for i, lab in enumerate(self.morphisms)}

    # -- lookups ----------------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def object_index(self, label: str) -> int:
        try:
            return self._object_index[label]
        except KeyError:
            raise UnknownObject(f"unknown object {label!r}") from None

    def morphism_index(self, label: str) -> int:
        try:
            return self._morphism_index[label]
        except KeyError:
            raise UnknownMorphism(f"unknown morphism {label!r}") from None

    def identity(self, obj: int) -> int:
        """The identity morphism on object ``obj`` (these sit at indices 0..n_objects-1)."""
        return obj

    def is_identity(self, g: int) -> bool:
        return g < self.n_objects

    def composable(self, g: int, h: int) -> bool:
        """Whether the product g*h (g after h) is defined, i.e. src(g) == rng(h)."""
        return self.src[g] == self.rng[h]

    def compose(self, g: int, h: int) -> int:
        try:
            return self._comp[(g, h)]
        except KeyError:
            raise MalformedInput(
                f"morphisms {self.morphisms[g]!r} and {self.morphisms[h]!r} are not composable"
            ) from None

    def composable_pairs(self) -> Iterator[Tuple[int, int]]:
        for g in range(self.n_morphisms):
            for h in range(self.n_morphisms):
                if self.src[g] == self.rng[h]:
                    yield (g, h)

    def morphisms_from(self, e: int) -> List[int]:
        return [g for g in range(self.n_morphisms) if self.src[g] == e]

    def morphisms_into(self, e: int) -> List[int]:
        return [g for g in range(self.n_morphisms) if self.rng[g] == e]

    def __repr__(self) -> str:
        return f"FiniteGroupoid(objects={self.n_objects}, morphisms={self.n_morphisms})"


def validate_groupoid(raw: dict) -> FiniteGroupoid:
    """Build a groupoid from a raw description, checking every axiom.

    ``raw`` holds ``objects`` (labels), ``morphisms`` (entries with ``name``,
    ``src``, ``rng`` for the non-identity morphisms), ``compose`` (triples
    ``[g, h, g*h]`` covering at least every composable non-identity pair) and
    ``inverse`` (a map that, together with its mirror image, covers every
    non-identity morphism).  Identity morphisms are created from the object
    labels, and identity compositions are filled in automatically.

    Raises AxiomViolation carrying the full list of violations found.
    """
    if not isinstance(raw, dict):
        raise MalformedInput("groupoid description must be a mapping")
    objects = raw.get("objects")
    if not isinstance(objects, list) or not objects or not all(isinstance(o, str) for o in objects):
        raise MalformedInput("groupoid needs a non-empty list of object labels")
    if len(set(objects)) != len(objects):
        raise MalformedInput("duplicate object labels")

    decls = raw.get("morphisms", [])
    labels: List[str] = list(objects)
    src: List[int] = list(range(len(objects)))
    rng: List[int] = list(range(len(objects)))
    seen = set(objects)
    obj_index = {lab: i for i, lab in enumerate(objects)}
    for entry in decls:
        if not isinstance(entry, dict) or not {"name", "src", "rng"} <= set(entry):
            raise MalformedInput(f"morphism entry {entry!r} needs name/src/rng")
        name = entry["name"]
        if name in seen:
            raise MalformedInput(f"duplicate morphism label {name!r}")
        seen.add(name)
        for key in ("src", "rng"):
            if entry[key] not in obj_index:
                raise UnknownObject(f"morphism {name!r}: unknown object {entry[key]!r}")
        labels.append(name)
        src.append(obj_index[entry["src"]])
        rng.append(obj_index[entry["rng"]])

    n_obj = len(objects)
    n = len(labels)
    mor_index = {lab: i for i, lab in enumerate(labels)}
    violations: List[str] = []

    # inverses: identities are self-inverse; the declared map is symmetrized.
    inv: List[Optional[int]] = [i if i < n_obj else None for i in range(n)]
    for a_lab, b_lab in dict(raw.get("inverse", {})).items():
        for lab in (a_lab, b_lab):
            if lab not in mor_index:
                raise UnknownMorphism(f"inverse entry: unknown morphism {lab!r}")
        a, b = mor_index[a_lab], mor_index[b_lab]
        for x, y in ((a, b), (b, a)):
            if inv[x] is not None and inv[x] != y:
                violations.append(f"inverse: conflicting inverses for {labels[x]!r}")
            inv[x] = y
    for g in range(n):
        if inv[g] is None:
            violations.append(f"inverse: no inverse declared for {labels[g]!r}")
            inv[g] = g  # placeholder so later checks can proceed
        elif src[inv[g]] != rng[g] or rng[inv[g]] != src[g]:
            violations.append(f"inverse: {labels[inv[g]]!r} does not reverse {labels[g]!r}")

    # composition: declared entries, then identity compositions.
    comp: Dict[Tuple[int, int], int] = {}
    for entry in raw.get("compose", []):
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise MalformedInput(f"compose entry {entry!r} must be [g, h, result]")
        g_lab, h_lab, r_lab = entry
        for lab in (g_lab, h_lab, r_lab):
            if lab not in mor_index:
                raise UnknownMorphism(f"compose entry: unknown morphism {lab!r}")
        g, h, r = mor_index[g_lab], mor_index[h_lab], mor_index[r_lab]
        if src[g] != rng[h]:
            violations.append(
                f"composability: compose({g_lab!r}, {h_lab!r}) declared but "
                f"src({g_lab!r}) != rng({h_lab!r})")
            continue
        if comp.get((g, h), r) != r:
            violations.append(f"composition: conflicting products for ({g_lab!r}, {h_lab!r})")
        comp[(g, h)] = r
    for g in range(n):
        for pair, want in (((g, src[g]), g), ((rng[g], g), g)):
            if comp.get(pair, want) != want:
                violations.append(f"identity: {labels[g]!r} composed with an identity is wrong")
            comp[pair] = want

    for g in range(n):
        for h in range(n):
            if src[g] != rng[h]:
                continue
            if (g, h) not in comp:
                violations.append(f"totality: no product declared for ({labels[g]!r}, {labels[h]!r})")
                continue
            r = comp[(g, h)]
            if src[r] != src[h] or rng[r] != rng[g]:
                violations.append(f"composition: product of ({labels[g]!r}, {labels[h]!r}) has wrong endpoints")

    if not violations:
        for g in range(n):
            gi = inv[g]
            if comp.get((gi, g)) != src[g] or comp.get((g, gi)) != rng[g]:
                violations.append(f"inverse: {labels[gi]!r} * {labels[g]!r} is not the identity")
        for g in range(n):
            for h in range(n):
                if src[g] != rng[h]:
                    continue
                gh = comp[(g, h)]
                for k in range(n):
                    if src[h] != rng[k]:
                        continue
                    if comp[(gh, k)] != comp[(g, comp[(h, k)])]:
                        violations.append(
                            f"associativity: ({labels[g]!r}*{labels[h]!r})*{labels[k]!r} "
                            f"!= {labels[g]!r}*({labels[h]!r}*{labels[k]!r})")

    if violations:
        raise AxiomViolation("groupoid", violations[0], violations=violations)
    return FiniteGroupoid(objects, labels, src, rng, comp, [v for v in inv if v is not None])


# ---------------------------------------------------------------------------
# standard constructions
# ---------------------------------------------------------------------------

def pair_groupoid(object_labels: Sequence[str], group: Optional[FiniteGroup] = None) -> FiniteGroupoid:
    """The connected groupoid on the given objects with the given isotropy group.

    Morphisms are triples (target object, source object, group element); with a
    trivial group this is the groupoid with exactly one morphism between any
    two objects.  Composition is (i,j,a)*(j,k,b) = (i,k,ab).
    """
    group = group if group is not None else FiniteGroup.trivial()
    objs = list(object_labels)
    if not objs:
        raise MalformedInput("need at least one object")

    def name(i: int, j: int, a: int) -> str:
        if i == j and a == 0:
            return objs[i]
        tag = f"{objs[j]}>{objs[i]}"
        return tag if group.order == 1 else f"{tag}:{group.labels[a]}"

    morphisms = []
    for i, _ in enumerate(objs):
        for j, _ in enumerate(objs):
            for a in group.elements():
                if i == j and a == 0:
                    continue
                morphisms.append({"name": name(i, j, a), "src": objs[j], "rng": objs[i]})
    compose = []
    inverse = {}
    for i, _ in enumerate(objs):
        for j, _ in enumerate(objs):
            for a in group.elements():
                inverse[name(i, j, a)] = name(j, i, group.inv(a))
                for k, _ in enumerate(objs):
                    for b in group.elements():
                        compose.append([name(i, j, a), name(j, k, b), name(i, k, group.mul(a, b))])
    return validate_groupoid({"objects": objs, "morphisms": morphisms,
                              "compose": compose, "inverse": inverse})


def one_object_groupoid(group: FiniteGroup, object_label: Optional[str] = None) -> FiniteGroupoid:
    """The one-object groupoid whose morphisms form the given group.

    Morphisms keep the group's element labels; the identity is labeled by the
    object (defaulting to the group's identity label).
    """
    obj = object_label if object_label is not None else group.labels[0]
    names = [obj] + list(group.labels[1:])
    morphisms = [{"name": names[a], "src": obj, "rng": obj} for a in range(1, group.order)]
    compose = [[names[a], names[b], names[group.mul(a, b)]]
               for a in range(1, group.order) for b in range(1, group.order)]
    inverse = {names[a]: names[group.inv(a)] for a in range(1, group.order)}
    return validate_groupoid({"objects": [obj], "morphisms": morphisms,
                              "compose": compose, "inverse": inverse})


def disjoint_union(parts: Sequence[FiniteGroupoid]) -> FiniteGroupoid:
    """Disjoint union; labels are prefixed with the part number when they clash."""
    all_labels = [lab for p in parts for lab in p.morphisms]
    clash = len(set(all_labels)) != len(all_labels)

    def tag(i: int, lab: str) -> str:
        return f"c{i}.{lab}" if clash else lab

    objects: List[str] = []
    morphisms = []
    compose = []
    inverse = {}
    for i, p in enumerate(parts):
        objects.extend(tag(i, o) for o in p.objects)
        for g in range(p.n_morphisms):
            if not p.is_identity(g):
                morphisms.append({"name": tag(i, p.morphisms[g]),
                                  "src": tag(i, p.objects[p.src[g]]),
                                  "rng": tag(i, p.objects[p.rng[g]])})
            inverse[tag(i, p.morphisms[g])] = tag(i, p.morphisms[p.inv[g]])
        for (g, h) in p.composable_pairs():
            compose.append([tag(i, p.morphisms[g]), tag(i, p.morphisms[h]),
                            tag(i, p.morphisms[p.compose(g, h)])])
    return validate_groupoid({"objects": objects, "morphisms": morphisms,
                              "compose": compose, "inverse": inverse})


# ---------------------------------------------------------------------------
# subgroupoids and structure queries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroupoid:
    """A subset of morphisms closed under inverse and defined composition."""

    parent: FiniteGroupoid
    members: frozenset = field(default_factory=frozenset)

    def morphism_list(self) -> List[int]:
        return sorted(self.members)

    def object_list(self) -> List[int]:
        return sorted({self.parent.src[g] for g in self.members}
                      | {self.parent.rng[g] for g in self.members})


def validate_subgroupoid(parent: FiniteGroupoid, members: Iterable[int]) -> Subgroupoid:
    """Check non-emptiness and closure under inverse and defined composition."""
    mem = frozenset(members)
    if not mem:
        raise AxiomViolation("subgroupoid", "a subgroupoid must be non-empty")
    for g in sorted(mem):
        if parent.inv[g] not in mem:
            raise AxiomViolation("subgroupoid",
                                 f"not closed under inverse at {parent.morphisms[g]!r}",
                                 witness=g)
        for h in sorted(mem):
            if parent.composable(g, h) and parent.compose(g, h) not in mem:
                raise AxiomViolation("subgroupoid",
                                     f"not closed under composition at "
                                     f"({parent.morphisms[g]!r}, {parent.morphisms[h]!r})",
                                     witness=(g, h))
    return Subgroupoid(parent, mem)


def isotropy(groupoid: FiniteGroupoid, obj: int) -> FiniteGroup:
    """The group of morphisms from ``obj`` to itself, identity listed first."""
    members = [g for g in range(groupoid.n_morphisms)
               if groupoid.src[g] == obj and groupoid.rng[g] == obj]
    members.sort(key=lambda g: (not groupoid.is_identity(g), g))
    pos = {g: i for i, g in enumerate(members)}
    table = [[pos[groupoid.compose(a, b)] for b in members] for a in members]
    return FiniteGroup([groupoid.morphisms[g] for g in members], table,
                       parent_elements=members, name=f"iso({groupoid.objects[obj]})")


def orbit(groupoid: FiniteGroupoid, e: int) -> Tuple[int, ...]:
    """All objects reachable from ``e``: {rng(g) : src(g) == e}, in object order.

    Reachability in a groupoid is one-step (paths compose to single
    morphisms), so a direct scan suffices.
    """
    return tuple(sorted({groupoid.rng[g] for g in range(groupoid.n_morphisms)
                         if groupoid.src[g] == e} | {e}))


def is_connected(groupoid: FiniteGroupoid) -> bool:
    """Whether every pair of objects is joined by a morphism."""
    return len(orbit(groupoid, 0)) == groupoid.n_objects


# ---------------------------------------------------------------------------
# subgroup enumeration
# ---------------------------------------------------------------------------

def _closure(group: FiniteGroup, seed: Iterable[int]) -> frozenset:
    out = {0}
    work = [x for x in seed if x not in out]
    while work:
        x = work.pop()
        if x in out:
            continue
        out.add(x)
        work.append(group.inv(x))
        for y in list(out):
            work.append(group.mul(x, y))
            work.append(group.mul(y, x))
    return frozenset(out)


def subgroups(group: FiniteGroup, bound: int = SUBGROUP_ORDER_BOUND) -> List[FiniteGroup]:
    """All subgroups, found as closures of generated subsets.

    Starting from the trivial subgroup, repeatedly extend each known subgroup
    by one missing element and close; this reaches every subgroup because a
    subgroup is the closure of (any generating subset of) itself.  Results are
    sorted by (order, element tuple).  Refuses groups larger than ``bound``.
    """
    if group.order > bound:
        raise BoundExceeded(f"subgroup enumeration bounded at order {bound}, got {group.order}")
    found = {frozenset({0})}
    work = [frozenset({0})]
    while work:
        current = work.pop()
        for x in range(1, group.order):
            if x in current:
                continue
            bigger = _closure(group, current | {x})
            if bigger not in found:
                found.add(bigger)
                work.append(bigger)
    out = []
    for members in sorted(found, key=lambda s: (len(s), sorted(s))):
        ordered = sorted(members)
        pos = {g: i for i, g in enumerate(ordered)}
        table = [[pos[group.mul(a, b)] for b in ordered] for a in ordered]
        out.append(FiniteGroup([group.labels[g] for g in ordered], table,
                               parent_elements=ordered, name=f"{group.name}:sub{len(ordered)}"))
    return out


def is_normal(group: FiniteGroup, sub: FiniteGroup) -> bool:
    """Whether ``sub`` (given with parent_elements into ``group``) is normal."""
    if sub.parent_elements is None:
        raise MalformedInput("subgroup must carry parent_elements")
    members = set(sub.parent_elements)
    return all(group.mul(group.mul(g, x), group.inv(g)) in members
               for g in group.elements() for x in sub.parent_elements)


def has_nontrivial_finite_normal_subgroup(
        group: FiniteGroup, bound: int = SUBGROUP_ORDER_BOUND
) -> Tuple[bool, Optional[FiniteGroup]]:
    """Search for a normal subgroup other than {1}; returns (found, witness).

    The witness is the first hit in (order, element tuple) order, so for a
    non-trivial group there is always one (the group itself is normal); the
    point of the enumeration is to report the smallest.
    """
    for sub in subgroups(group, bound):
        if sub.order > 1 and is_normal(group, sub):
            return True, sub
    return False, None


def is_torsion_free(group: FiniteGroup) -> bool:
    """A finite group with any non-identity element has torsion, so: trivial or not."""
    return group.order == 1
