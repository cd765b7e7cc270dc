"""Command-line surface.

Exit codes: 0 a verdict was computed, 1 usage error, 2 validation or parse
error, 3 verification failure.  Reports are `key = value` lines in a fixed
key order so identical inputs produce byte-identical output; subspace
bases print as echelon rows joined by commas.  The only recognized
environment variable is NILP2_MAX_ORDER, which overrides the subgroup
enumeration cap.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fileformats
from .capability import (
    capability_verdict,
    central_decomposition_search,
    epicentre_in_derived,
    rp_membership,
)
from .constructions import build_capable_extension, build_noncapable_extension
from .errors import Nilp2Error
from .group_core import DEFAULT_ORDER_CAP, center, is_monomorphism
from .products import (
    Identification,
    amalgamated_coproduct,
    central_product_identified,
    direct_product,
    nilpotent2_product,
)
from .selfcheck import run_all

REPORT_KEYS = (
    "verdict",
    "method",
    "epicentre_dim",
    "epicentre_basis",
    "n",
    "m",
    "order_exp",
    "rp_status",
    "rp_reasons",
    "bound_claimed",
    "bound_actual",
    "bound_ok",
    "embedding_ok",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise _UsageError(message)


def _bool_text(flag: bool) -> str:
    return "true" if flag else "false"


def _basis_text(rows) -> str:
    return ",".join(" ".join(str(x) for x in row) for row in rows)


def format_report(values: dict) -> str:
    lines = [f"{key} = {values[key]}" for key in REPORT_KEYS if key in values]
    return "\n".join(lines) + "\n"


def _emit(text: str, report_path=None):
    sys.stdout.write(text)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _order_cap() -> int:
    raw = os.environ.get("NILP2_MAX_ORDER")
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        return int(raw)
    except ValueError:
        raise Nilp2Error(f"NILP2_MAX_ORDER must be an integer, got {raw!r}") from None


def cmd_inspect(args) -> int:
    g = fileformats.parse_group_file(args.file)
    info = center(g)
    lines = [
        f"p = {g.p}",
        f"n = {g.n}",
        f"m = {g.m}",
        f"order_exp = {g.order_exp}",
        f"abelian = {_bool_text(g.is_abelian)}",
        f"center_equals_derived = {_bool_text(info.center_equals_derived)}",
        f"nonzero_commutators = {len(g.c_items)}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_capable(args) -> int:
    g = fileformats.parse_group_file(args.file)
    verdict = capability_verdict(g, _order_cap())
    values = {
        "verdict": verdict.status,
        "method": verdict.method,
        "n": g.n,
        "m": g.m,
        "order_exp": g.order_exp,
    }
    if "epicentre_dim" in verdict.evidence:
        values["epicentre_dim"] = verdict.evidence["epicentre_dim"]
        values["epicentre_basis"] = _basis_text(verdict.evidence["epicentre_basis"])
    _emit(format_report(values))
    return 0


def cmd_epicentre(args) -> int:
    g = fileformats.parse_group_file(args.file)
    epi = epicentre_in_derived(g)
    values = {
        "epicentre_dim": epi.dim,
        "epicentre_basis": _basis_text(epi.basis_tuples()),
        "n": g.n,
        "m": g.m,
        "order_exp": g.order_exp,
    }
    _emit(format_report(values))
    return 0


def cmd_rp_check(args) -> int:
    g = fileformats.parse_group_file(args.file)
    verdict = rp_membership(g, _order_cap())
    values = {
        "n": g.n,
        "m": g.m,
        "order_exp": g.order_exp,
        "rp_status": verdict.status,
        "rp_reasons": ";".join(verdict.reasons),
    }
    _emit(format_report(values))
    return 0


def cmd_product(args) -> int:
    a = fileformats.parse_group_file(args.left)
    b = fileformats.parse_group_file(args.right)
    ident = None
    if args.identify is not None:
        ident = fileformats.parse_identification_file(args.identify, a, b)
    if args.kind in ("direct", "nilpotent2") and ident is not None:
        raise _UsageError(f"--identify does not apply to --kind {args.kind}")
    if args.kind == "direct":
        result = direct_product(a, b)
    elif args.kind == "nilpotent2":
        result = nilpotent2_product(a, b)
    else:
        if ident is None:
            ident = Identification(a, b, (), ())
        if args.kind == "central":
            result = central_product_identified(a, b, ident)
        else:
            result = amalgamated_coproduct(a, b, ident)
    fileformats.write_group_file(args.output, result.group)
    if args.map_a:
        fileformats.write_map_file(args.map_a, result.embed_left)
    if args.map_b:
        fileformats.write_map_file(args.map_b, result.embed_right)
    values = {
        "n": result.group.n,
        "m": result.group.m,
        "order_exp": result.group.order_exp,
    }
    _emit(format_report(values))
    return 0


def cmd_extend(args) -> int:
    g = fileformats.parse_group_file(args.file)
    cap = _order_cap()
    if args.mode == "capable":
        report = build_capable_extension(g, cap)
    else:
        report = build_noncapable_extension(g, cap)
    fileformats.write_group_file(args.output, report.output_group)
    if args.map:
        fileformats.write_map_file(args.map, report.embedding)
    out = report.output_group
    values = {
        "verdict": report.capability.status,
        "method": report.capability.method,
        "n": out.n,
        "m": out.m,
        "order_exp": out.order_exp,
        "rp_status": report.rp.status,
        "rp_reasons": ";".join(report.rp.reasons),
        "bound_claimed": report.rank_bound_claimed,
        "bound_actual": report.rank_bound_actual,
        "bound_ok": _bool_text(report.bound_ok),
        "embedding_ok": _bool_text(report.embedding_mono),
    }
    if "epicentre_dim" in report.capability.evidence:
        values["epicentre_dim"] = report.capability.evidence["epicentre_dim"]
        values["epicentre_basis"] = _basis_text(report.capability.evidence["epicentre_basis"])
    _emit(format_report(values), args.report)
    return 0


def cmd_verify_embed(args) -> int:
    sub = fileformats.parse_group_file(args.sub)
    big = fileformats.parse_group_file(args.big)
    gmap = fileformats.parse_map_file(args.map, sub, big)
    if not gmap.consistent:
        _emit(format_report({"embedding_ok": _bool_text(False)}))
        return 3
    mono = is_monomorphism(gmap, _order_cap())
    ok = mono.status == "mono"
    _emit(format_report({"embedding_ok": _bool_text(ok)}))
    return 0 if ok else 3


def cmd_decompose(args) -> int:
    g = fileformats.parse_group_file(args.file)
    cap = args.max_order if args.max_order is not None else _order_cap()
    search = central_decomposition_search(g, cap)
    lines = [f"order_exp = {g.order_exp}"]
    if search.subgroup_count is not None:
        lines.append(f"subgroups = {search.subgroup_count}")
    status = {"witness": "found", "none": "none", "exceeds_cap": "exceeds_cap"}[search.status]
    lines.append(f"decomposition = {status}")
    if search.witness is not None:
        lines.append(f"witness_left_order = {search.witness.left.order}")
        lines.append(f"witness_right_order = {search.witness.right.order}")
        lines.append(f"derived_overlap_dim = {search.witness.derived_overlap_dim}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_selftest(args) -> int:
    results = run_all()
    for result in results:
        sys.stdout.write(result.line() + "\n")
    if all(r.passed for r in results):
        sys.stdout.write("selftest: ok\n")
        return 0
    sys.stdout.write("selftest: FAILED\n")
    return 3


def build_parser() -> _Parser:
    parser = _Parser(prog="nilp2", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_inspect = sub.add_parser("inspect", help="summarize a group file")
    p_inspect.add_argument("file")
    p_inspect.set_defaults(func=cmd_inspect)

    p_capable = sub.add_parser("capable", help="capability verdict")
    p_capable.add_argument("file")
    p_capable.set_defaults(func=cmd_capable)

    p_epi = sub.add_parser("epicentre", help="epicentre inside the derived subgroup")
    p_epi.add_argument("file")
    p_epi.set_defaults(func=cmd_epicentre)

    p_rp = sub.add_parser("rp-check", help="membership in the restricted class")
    p_rp.add_argument("file")
    p_rp.set_defaults(func=cmd_rp_check)

    p_prod = sub.add_parser("product", help="build a product of two groups")
    p_prod.add_argument("--kind", required=True, choices=("direct", "nilpotent2", "central", "amalgam"))
    p_prod.add_argument("left")
    p_prod.add_argument("right")
    p_prod.add_argument("--identify", default=None, help="identification file")
    p_prod.add_argument("-o", "--output", required=True)
    p_prod.add_argument("--map-a", default=None, help="write the left embedding map")
    p_prod.add_argument("--map-b", default=None, help="write the right embedding map")
    p_prod.set_defaults(func=cmd_product)

    p_ext = sub.add_parser("extend", help="embed into a capable or non-capable group")
    p_ext.add_argument("--mode", required=True, choices=("capable", "noncapable"))
    p_ext.add_argument("file")
    p_ext.add_argument("-o", "--output", required=True)
    p_ext.add_argument("--report", default=None)
    p_ext.add_argument("--map", default=None, help="write the embedding map")
    p_ext.set_defaults(func=cmd_extend)

    p_ver = sub.add_parser("verify-embed", help="check a stored embedding map")
    p_ver.add_argument("sub")
    p_ver.add_argument("big")
    p_ver.add_argument("--map", required=True)
    p_ver.set_defaults(func=cmd_verify_embed)

    p_dec = sub.add_parser("decompose", help="search for a central decomposition")
    p_dec.add_argument("file")
    p_dec.add_argument("--max-order", type=int, default=None)
    p_dec.set_defaults(func=cmd_decompose)

    p_self = sub.add_parser("selftest", help="run the acceptance battery")
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    except SystemExit as exc:  # --help and friends
        code = exc.code
        return int(code) if code else 0
    try:
        return args.func(args)
    except _UsageError:
        return 1
    except Nilp2Error as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
