"""Named builders and the two embedding constructions with verification.

build_capable_extension embeds its input in a capable group of the
restricted class; build_noncapable_extension embeds it in a non-capable
one.  Both return a self-contained report carrying the presentations, the
embedding, the recomputable verdicts, and the rank bounds
(+2/+3 respectively +6/+7 on the abelianized rank, by branch).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capability import (
    CAPABLE,
    NOT_CAPABLE,
    CapabilityVerdict,
    RpVerdict,
    capability_verdict,
    epicentre_in_derived,
    rp_membership,
)
from .errors import Nilp2Error, TrivialInput
from .group_core import (
    DEFAULT_ORDER_CAP,
    GeneratorMap,
    GroupPresentation,
    cyclic,
    hom_from_images,
    identity_map,
    is_monomorphism,
)
from .products import Identification, amalgamated_coproduct, central_product_identified, nilpotent2_product

__all__ = [
    "ExtensionReport",
    "VerificationOutcome",
    "build_capable_extension",
    "build_noncapable_extension",
    "extraspecial_p5",
    "heisenberg",
    "verify_extension",
]

BOUND_BY_BRANCH = {
    ("capable", "nonabelian_capable"): 2,
    ("capable", "augmented"): 3,
    ("noncapable", "nonabelian"): 6,
    ("noncapable", "abelian"): 7,
}


def heisenberg(p: int) -> GroupPresentation:
    """The relatively free rank-2 group of the variety: order p^3, one
    defining commutator."""
    return GroupPresentation(p, 2, 1, {(2, 1): (1,)}, label=f"heisenberg({p})")


def extraspecial_p5(p: int) -> GroupPresentation:
    """Extraspecial group of order p^5 and exponent p: two hyperbolic
    generator pairs sharing a single central commutator coordinate."""
    return GroupPresentation(
        p, 4, 1, {(2, 1): (1,), (4, 3): (1,)}, label=f"extraspecial_p5({p})"
    )


def _monic(vec, p: int) -> tuple:
    """Scale so that the first nonzero entry is 1 (echelon basis of the line)."""
    vals = [int(x) % p for x in vec]
    for x in vals:
        if x:
            inv = pow(x, -1, p)
            return tuple((inv * y) % p for y in vals)
    raise Nilp2Error("cannot normalize the zero vector")


def _least_nonzero_commutator(group: GroupPresentation) -> tuple:
    """Deterministic nontrivial derived element: the commutator vector of
    the lexicographically least nonzero pair, normalized monic."""
    if not group.c_items:
        raise Nilp2Error("presentation has no nonzero commutators")
    (_, vec) = group.c_items[0]
    return _monic(vec, group.p)


@dataclass(frozen=True)
class ExtensionReport:
    """Self-contained certificate for one embedding construction."""

    mode: str  # "capable" | "noncapable"
    branch: str
    input_group: GroupPresentation
    output_group: GroupPresentation
    embedding: GeneratorMap
    capability: CapabilityVerdict
    rp: RpVerdict
    rank_bound_claimed: int
    rank_bound_actual: int
    bound_ok: bool
    embedding_mono: bool
    identified_vector: tuple
    method_trail: tuple


def _finish_report(mode, branch, trail, source, target, embedding, identified, cap):
    mono = is_monomorphism(embedding, cap)
    verdict = capability_verdict(target, cap)
    rp = rp_membership(target, cap)
    claimed = BOUND_BY_BRANCH[(mode, branch)]
    actual = target.n - source.n
    return ExtensionReport(
        mode=mode,
        branch=branch,
        input_group=source,
        output_group=target,
        embedding=embedding,
        capability=verdict,
        rp=rp,
        rank_bound_claimed=claimed,
        rank_bound_actual=actual,
        bound_ok=target.n <= source.n + claimed,
        embedding_mono=mono.status == "mono",
        identified_vector=identified,
        method_trail=tuple(trail),
    )


def build_capable_extension(
    group: GroupPresentation, cap: int = DEFAULT_ORDER_CAP
) -> ExtensionReport:
    """Embed the input in a capable group of the restricted class.

    If the input is nonabelian with a definite capable verdict it is used
    directly (+2 rank bound); otherwise it is first coproduct-extended by
    one cyclic factor (+3).  Either way, the rank-2 free group is then
    glued along a derived line, which forces the commutator relation while
    keeping the epicentre trivial.
    """
    if group.order == 1:
        raise TrivialInput("the construction requires a nontrivial input")
    trail = []
    verdict_in = capability_verdict(group, cap)
    if not group.is_abelian and verdict_in.status == CAPABLE:
        base = group
        into_base = identity_map(group)
        branch = "nonabelian_capable"
        trail.append("base=input")
    else:
        stage = nilpotent2_product(group, cyclic(group.p))
        base = stage.group
        into_base = stage.embed_left
        branch = "augmented"
        trail.append("base=input*C_p")
    glued = _least_nonzero_commutator(base)
    free2 = heisenberg(group.p)
    ident = Identification(base, free2, (glued,), ((1,),))
    am = amalgamated_coproduct(base, free2, ident)
    trail.append("amalgamate_rank2_free")
    embedding = into_base.then(am.embed_left)
    identified = _monic(
        np.mod(am.embed_left.commutator_matrix @ np.array(glued, dtype=np.int64), group.p),
        group.p,
    )
    return _finish_report("capable", branch, trail, group, am.group, embedding, identified, cap)


def build_noncapable_extension(
    group: GroupPresentation, cap: int = DEFAULT_ORDER_CAP
) -> ExtensionReport:
    """Embed the input in a non-capable group of the restricted class.

    A chosen derived element is first glued centrally to the rank-2 free
    group, which places it in the epicentre; the result is then
    amalgamated with the extraspecial p^5 group along that element, so the
    glued line survives into the epicentre of the output.  Abelian inputs
    are first coproduct-extended by one cyclic factor to create a derived
    element (+7 rank bound instead of +6).
    """
    if group.order == 1:
        raise TrivialInput("the construction requires a nontrivial input")
    trail = []
    if group.is_abelian:
        stage = nilpotent2_product(group, cyclic(group.p))
        base = stage.group
        into_base = stage.embed_left
        branch = "abelian"
        trail.append("base=input*C_p")
    else:
        base = group
        into_base = identity_map(group)
        branch = "nonabelian"
        trail.append("base=input")
    glued = _least_nonzero_commutator(base)
    free2 = heisenberg(group.p)
    cp = central_product_identified(base, free2, Identification(base, free2, (glued,), ((1,),)))
    trail.append("central_product_rank2_free")
    into_mid = into_base.then(cp.embed_left)
    glued_mid = _monic(
        np.mod(cp.embed_left.commutator_matrix @ np.array(glued, dtype=np.int64), group.p),
        group.p,
    )
    wide = extraspecial_p5(group.p)
    am = amalgamated_coproduct(
        cp.group, wide, Identification(cp.group, wide, (glued_mid,), ((1,),))
    )
    trail.append("amalgamate_extraspecial_p5")
    embedding = into_mid.then(am.embed_left)
    identified = _monic(
        np.mod(am.embed_left.commutator_matrix @ np.array(glued_mid, dtype=np.int64), group.p),
        group.p,
    )
    return _finish_report("noncapable", branch, trail, group, am.group, embedding, identified, cap)


@dataclass(frozen=True)
class VerificationOutcome:
    passed: bool
    checks: tuple  # of (name, ok, detail)


def verify_extension(report: ExtensionReport, cap: int = DEFAULT_ORDER_CAP) -> VerificationOutcome:
    """Recompute every claim of a report from its stored presentations.

    Each check is named so tampering is pinpointed; any exception inside a
    check marks it failed rather than aborting the run.
    """
    checks = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - verification must not abort
            ok, detail = False, f"error: {exc}"
        checks.append((name, bool(ok), detail))

    def check_input_valid():
        rebuilt = GroupPresentation(
            report.input_group.p, report.input_group.n, report.input_group.m, report.input_group.c
        )
        return rebuilt == report.input_group, ""

    def check_output_valid():
        rebuilt = GroupPresentation(
            report.output_group.p, report.output_group.n, report.output_group.m, report.output_group.c
        )
        return rebuilt == report.output_group, ""

    def check_endpoints():
        ok = (
            report.embedding.domain == report.input_group
            and report.embedding.codomain == report.output_group
        )
        return ok, ""

    def check_embedding():
        fresh = hom_from_images(
            report.input_group, report.output_group, report.embedding.images
        )
        if not fresh.consistent:
            return False, "generator images admit no homomorphism"
        mono = is_monomorphism(fresh, cap)
        if mono.status != "mono":
            return False, f"injectivity status {mono.status}"
        return report.embedding_mono, ""

    def check_capability():
        fresh = capability_verdict(report.output_group, cap)
        expected = CAPABLE if report.mode == "capable" else NOT_CAPABLE
        ok = (
            fresh.status == report.capability.status == expected
            and fresh.method == report.capability.method
        )
        return ok, f"recomputed {fresh.status}/{fresh.method}"

    def check_rp():
        fresh = rp_membership(report.output_group, cap)
        ok = fresh.status == report.rp.status and fresh.status in (
            "member",
            "member_by_construction",
        )
        return ok, f"recomputed {fresh.status}"

    def check_identified():
        if report.mode != "noncapable":
            return True, "not applicable"
        epi = epicentre_in_derived(report.output_group)
        return epi.contains_vector(report.identified_vector), ""

    def check_bounds():
        claimed = BOUND_BY_BRANCH.get((report.mode, report.branch))
        if claimed is None or report.rank_bound_claimed != claimed:
            return False, f"claimed bound {report.rank_bound_claimed} is not the branch bound"
        actual = report.output_group.n - report.input_group.n
        if report.rank_bound_actual != actual:
            return False, f"stored actual {report.rank_bound_actual}, recomputed {actual}"
        ok = report.bound_ok == (report.output_group.n <= report.input_group.n + claimed)
        return ok and report.bound_ok, ""

    run("input_valid", check_input_valid)
    run("output_valid", check_output_valid)
    run("embedding_endpoints", check_endpoints)
    run("embedding_mono", check_embedding)
    run("capability_matches", check_capability)
    run("rp_matches", check_rp)
    run("identified_in_epicentre", check_identified)
    run("bounds", check_bounds)
    return VerificationOutcome(all(ok for _, ok, _ in checks), tuple(checks))
