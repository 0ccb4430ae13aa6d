"""Primeness deciders for graded rings and the harness tying them together.

The carrier-level oracle is exhaustive and authoritative within its size
budget.  The component-level criteria -- invariant ideal pairs over the
identity components, graded ideal pairs, and support hubs paired with prime
isotropy components -- are each evaluated from their own definitions.  For a
nearly epsilon-strong grading they must all agree; the report constructor
treats any disagreement as a falsification alarm (InternalDisagreement) and
never reconciles it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, Optional

from .errors import (
    BoundExceeded,
    InternalDisagreement,
    MalformedInput,
    ObjectNotInSupport,
)
from .grading import (
    Grading,
    HubResult,
    is_G_prime_principal,
    is_graded_prime,
    is_nearly_epsilon_strong,
    is_support_hub,
    isotropy_component,
    support_groupoid,
)
from .groupoid import isotropy
from .rings import PRIME_ORACLE_BOUND, PrimeResult, SubRing, is_prime_bruteforce

#: the seven condition labels, in report order
CONDITION_LABELS = ("i", "ii", "iii", "iv", "v", "vi", "vii")


@dataclass(frozen=True)
class ObjectEvidence:
    """Per-object ingredients: hub status and primeness of the isotropy component."""

    obj: int
    hub: HubResult
    isotropy_prime: PrimeResult
    isotropy_size: int


@dataclass(frozen=True)
class PrimenessReport:
    verdict: bool
    method: str                      # "oracle" or "theorem" (oracle skipped)
    conditions: Dict[str, bool]      # labels i..vii; "i" absent when skipped
    witnesses: Dict[str, object]
    degenerate: bool
    per_object: Dict[int, ObjectEvidence]
    timings: Optional[Dict[str, float]] = None


def is_prime_oracle(grading: Grading, bound: int = PRIME_ORACLE_BOUND) -> PrimeResult:
    """Exhaustive primeness of the carrier, ignoring the grading entirely."""
    return is_prime_bruteforce(grading.ring, bound=bound)


def identity_component_ring(grading: Grading, e: int) -> SubRing:
    """The identity component at ``e`` as a standalone ring."""
    return SubRing(grading.ring,
                   grading.components[grading.groupoid.identity(e)].elements)


def _object_evidence(grading: Grading, e: int) -> ObjectEvidence:
    hub = is_support_hub(grading, e)
    restricted = isotropy_component(grading, e)
    prime = is_prime_bruteforce(restricted.ring)
    if prime.degenerate:
        # e is in the support, so its isotropy carrier contains the nonzero
        # identity component; a zero carrier here is an implementation bug
        raise InternalDisagreement(
            f"isotropy component at {grading.groupoid.objects[e]!r} collapsed "
            "to the zero ring although the object is in the support")
    return ObjectEvidence(e, hub, prime, restricted.ring.size)


def evaluate_condition(grading: Grading, label: str,
                       oracle_bound: int = PRIME_ORACLE_BOUND):
    """One of the seven primeness conditions, from its own definition.

    Returns (bool, evidence).  The caller is responsible for only applying
    this to nearly epsilon-strong gradings; nothing is rechecked here.
    """
    if label not in CONDITION_LABELS:
        raise MalformedInput(f"unknown condition label {label!r}; "
                             f"expected one of {', '.join(CONDITION_LABELS)}")
    support = support_groupoid(grading)
    objs = support.support_objects
    if label == "i":
        res = is_prime_oracle(grading, bound=oracle_bound)
        return res.prime, res
    if label in ("ii", "iii"):
        pair = is_G_prime_principal(grading)
        iso = {e: is_prime_bruteforce(isotropy_component(grading, e).ring) for e in objs}
        quantified = (all if label == "ii" else any)(r.prime for r in iso.values())
        return pair.holds and quantified, {"pair": pair, "isotropy": iso}
    if label in ("iv", "v"):
        pair = is_graded_prime(grading)
        iso = {e: is_prime_bruteforce(isotropy_component(grading, e).ring) for e in objs}
        quantified = (all if label == "iv" else any)(r.prime for r in iso.values())
        return pair.holds and quantified, {"pair": pair, "isotropy": iso}
    evidence = {e: _object_evidence(grading, e) for e in objs}
    quantifier = all if label == "vi" else any
    value = quantifier(ev.hub.is_hub and ev.isotropy_prime.prime
                       for ev in evidence.values())
    return value, {"objects": evidence}


def equivalence_report(grading: Grading,
                       oracle_bound: int = PRIME_ORACLE_BOUND,
                       with_timings: bool = False) -> PrimenessReport:
    """Evaluate all primeness conditions independently and insist they agree.

    The grading must be nearly epsilon-strong (rechecked here); all condition
    booleans must coincide, and the common value becomes the verdict.  When
    the carrier exceeds the oracle budget, condition (i) is skipped and the
    method is reported as "theorem"; everything else still runs, since the
    remaining conditions only touch components.
    """
    t_start = time.perf_counter()
    timings: Optional[Dict[str, float]] = {} if with_timings else None

    def clocked(name, fn):
        t0 = time.perf_counter()
        out = fn()
        if timings is not None:
            timings[name] = time.perf_counter() - t0
        return out

    nes = clocked("nearly_epsilon_strong", lambda: is_nearly_epsilon_strong(grading))
    if not nes.holds:
        raise MalformedInput(
            "the equivalence report needs a nearly epsilon-strong grading "
            f"(first failure: {nes.failures[0]})")
    support = support_groupoid(grading, nes=True)
    objs = support.support_objects

    oracle: Optional[PrimeResult]
    try:
        oracle = clocked("oracle", lambda: is_prime_bruteforce(grading.ring,
                                                               bound=oracle_bound))
    except BoundExceeded:
        oracle = None
    invariant_pairs = clocked("invariant_ideal_pairs",
                              lambda: is_G_prime_principal(grading))
    graded_pairs = clocked("graded_ideal_pairs", lambda: is_graded_prime(grading))
    per_object = clocked("objects",
                         lambda: {e: _object_evidence(grading, e) for e in objs})

    iso_all = all(ev.isotropy_prime.prime for ev in per_object.values())
    iso_any = any(ev.isotropy_prime.prime for ev in per_object.values())
    conditions: Dict[str, bool] = {}
    if oracle is not None:
        conditions["i"] = oracle.prime
    conditions["ii"] = invariant_pairs.holds and iso_all
    conditions["iii"] = invariant_pairs.holds and iso_any
    conditions["iv"] = graded_pairs.holds and iso_all
    conditions["v"] = graded_pairs.holds and iso_any
    conditions["vi"] = all(ev.hub.is_hub and ev.isotropy_prime.prime
                           for ev in per_object.values())
    conditions["vii"] = any(ev.hub.is_hub and ev.isotropy_prime.prime
                            for ev in per_object.values())

    values = set(conditions.values())
    if len(values) > 1:
        raise InternalDisagreement(
            "the equivalent primeness conditions disagree",
            details={"conditions": dict(conditions),
                     "oracle_witness": None if oracle is None else oracle.witness,
                     "invariant_pair": invariant_pairs.witness,
                     "graded_pair": graded_pairs.witness,
                     "objects": {e: (ev.hub.is_hub, ev.isotropy_prime.prime)
                                 for e, ev in per_object.items()}})
    verdict = values.pop()

    witnesses: Dict[str, object] = {}
    if verdict:
        witnesses["support_hub"] = next(e for e, ev in per_object.items()
                                        if ev.hub.is_hub and ev.isotropy_prime.prime)
    else:
        if oracle is not None and oracle.witness is not None:
            witnesses["oracle"] = oracle.witness
        if invariant_pairs.witness is not None:
            witnesses["invariant_ideal_pair"] = invariant_pairs.witness
        if graded_pairs.witness is not None:
            witnesses["graded_ideal_pair"] = graded_pairs.witness
        blocked = {e: ev.hub.blocking for e, ev in per_object.items()
                   if not ev.hub.is_hub}
        if blocked:
            witnesses["non_hub_objects"] = blocked
        bad_iso = {e: ev.isotropy_prime.witness for e, ev in per_object.items()
                   if not ev.isotropy_prime.prime}
        if bad_iso:
            witnesses["non_prime_isotropy"] = bad_iso

    if timings is not None:
        timings["total"] = time.perf_counter() - t_start
    return PrimenessReport(
        verdict=verdict,
        method="oracle" if oracle is not None else "theorem",
        conditions=conditions,
        witnesses=witnesses,
        degenerate=False if oracle is None else oracle.degenerate,
        per_object=per_object,
        timings=timings,
    )


def torsion_free_shortcut(grading: Grading, e: int) -> Optional[bool]:
    """Reduced test available at objects with trivial isotropy.

    When the isotropy group at ``e`` is trivial (the only torsion-free case
    among finite groups), primeness of the whole graded ring reduces to the
    identity component at ``e`` being prime together with the
    invariant-ideal-pair condition.  Returns None when the shortcut does not
    apply.
    """
    support = support_groupoid(grading)
    if e not in support.support_objects:
        raise ObjectNotInSupport(
            f"object {grading.groupoid.objects[e]!r} carries a zero identity component")
    if isotropy(grading.groupoid, e).order != 1:
        return None
    local = is_prime_bruteforce(identity_component_ring(grading, e))
    return local.prime and is_G_prime_principal(grading).holds
