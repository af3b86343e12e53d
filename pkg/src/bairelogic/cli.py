"""Command line front end: ``python -m bairelogic <command> ...``.

Every command produces a report with the fields command, status, payload and
diagnostics.  Exit codes: 0 ok, 1 fail (a refuted claim, with a witness in the
payload), 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import clopen_subalgebra, kappa_disconnected, kur_algebra_from_frame, verify_axioms
from .decision import (
    DEFAULT_BUDGET,
    Verdict,
    classify_scroggs,
    entails_global,
    s5_decide,
    s5n_decide,
    s5u_decide,
    valid_in_algebra,
)
from .errors import BaireLogicError
from .formula import DEFAULT_VARIABLE_BUDGET, bounded_width, modal_depth, parse, render, size, subformulas
from .frame import MAX_WORLDS, Frame, load_frame, maximal_clusters, popcount
from .maps import build_s5n_subalgebra, check_baire_map, embed_s5_frame, find_baire_resolution, load_map
from .quotient import build_quotient


@dataclass
class Report:
    command: str
    status: str = "ok"
    payload: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {"ok": 0, "fail": 1}.get(self.status, 2)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        }


def _human_lines(value, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                yield f"{pad}{k}:"
                yield from _human_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {_scalar(v)}"
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item and not _flat_list(item):
                yield f"{pad}-"
                yield from _human_lines(item, indent + 1)
            else:
                yield f"{pad}- {_scalar(item)}"
    else:
        yield pad + _scalar(value)


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    if isinstance(v, list):
        return "{" + ", ".join(str(x) for x in v) + "}"
    if isinstance(v, dict):
        return "{}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def report_render(r: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(r.as_dict(), separators=(",", ":"))
    lines = [f"{r.command}: {r.status}"]
    lines += list(_human_lines(r.payload, 1))
    lines += [f"diagnostic: {d}" for d in r.diagnostics]
    return "\n".join(lines)


# -- argument handling -----------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.add_argument("--max-worlds", type=int, default=MAX_WORLDS, help="largest frame accepted")
    p.add_argument("--max-vars", type=int, default=DEFAULT_VARIABLE_BUDGET, help="largest variable index")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest sweep (valuations or models)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="bairelogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    p.add_argument("formula")

    p = sub.add_parser("decide", parents=[common], help="S5, S5_n or S5U validity")
    p.add_argument("formula")
    p.add_argument("--logic", choices=["s5", "s5n", "s5u"], default="s5")
    p.add_argument("--n", type=int, help="cluster size for s5n")
    p.add_argument("--max-clusters", type=int, help="cluster count for s5u")

    p = sub.add_parser("classify", parents=[common], help="place S5 + f in the chain of S5 extensions")
    p.add_argument("formula")
    p.add_argument("--cap", type=int, default=8)

    for name, help_text in (("valid", "validity in one finite algebra"),
                            ("entails", "global consequence in one finite algebra")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("formula")
        where = p.add_mutually_exclusive_group(required=True)
        where.add_argument("--frame", help="Kuratowski algebra of a frame file")
        where.add_argument("--quotient-of-frame", help="quotient algebra of a frame file")
        if name == "entails":
            p.add_argument("--gamma", required=True, help="file with one premise per line")

    p = sub.add_parser("quotient", parents=[common], help="build the meager quotient of a frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--verify", choices=["closure", "monadic"])
    p.add_argument("--show-qmax", action="store_true")

    p = sub.add_parser("resolve", parents=[common], help="find a Baire k-resolution")
    p.add_argument("--frame", required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("disconnect", parents=[common], help="find k orthogonal clopens joining to 1")
    p.add_argument("--frame", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kuratowski", action="store_true", help="use the Kuratowski algebra, not the quotient")

    p = sub.add_parser("map-check", parents=[common], help="classify a partial map")
    p.add_argument("--map", required=True)

    p = sub.add_parser("embed", parents=[common], help="embed Kur(W) into a quotient")
    p.add_argument("--s5-frame", required=True)
    p.add_argument("--space", required=True)

    p = sub.add_parser("subalgebra-s5n", parents=[common], help="S5_n subalgebra of a quotient")
    p.add_argument("--frame", required=True)
    p.add_argument("--n", type=int, required=True)
    return parser


# -- commands --------------------------------------------------------------

def _formula(args):
    return parse(args.formula, budget=args.max_vars)


def _frame(args, path) -> Frame:
    return load_frame(path, max_worlds=args.max_worlds)


def _names(fr: Frame, mask: int) -> list[str]:
    return fr.names_of(mask)


def _verdict(report: Report, verdict: Verdict):
    report.payload["valid"] = verdict.valid
    if verdict.valid:
        report.payload.update({k: v for k, v in verdict.detail.items() if v is not None})
    else:
        report.status = "fail"
        report.payload["countermodel"] = verdict.countermodel.describe()


def cmd_parse(args, report):
    f = _formula(args)
    info = subformulas(f)
    report.payload.update(
        rendered=render(f),
        size=size(f),
        modal_depth=modal_depth(f),
        variables=[f"p{i}" for i in sorted(info.variables)],
        diamonds=info.diamonds,
        foralls=info.foralls,
    )


def cmd_decide(args, report):
    f = _formula(args)
    report.payload.update(formula=render(f), logic=args.logic)
    if args.logic == "s5":
        verdict = s5_decide(f, args.budget)
    elif args.logic == "s5n":
        if args.n is None:
            raise UsageError("--logic s5n needs --n")
        report.payload["n"] = args.n
        verdict = s5n_decide(f, args.n, args.budget)
    else:
        verdict = s5u_decide(f, args.max_clusters, args.budget)
    _verdict(report, verdict)


def cmd_classify(args, report):
    f = _formula(args)
    c = classify_scroggs(f, args.cap, args.budget)
    report.payload.update(formula=render(f), logic=str(c), kind=c.kind, n=c.n)


TRIVIAL_NOTE = "the quotient is trivial (the space is meager in itself)"


def _algebra(args):
    """The algebra named by --frame or --quotient-of-frame, with an optional note."""
    if args.frame:
        return kur_algebra_from_frame(_frame(args, args.frame)), None
    q = build_quotient(_frame(args, args.quotient_of_frame))
    return q.algebra, TRIVIAL_NOTE if q.trivial else None


def cmd_valid(args, report):
    f = _formula(args)
    alg, note = _algebra(args)
    if note:
        report.diagnostics.append(note)
    report.payload.update(formula=render(f), algebra=alg.name, carrier=alg.size)
    _verdict(report, valid_in_algebra(alg, f, args.budget))


def cmd_entails(args, report):
    f = _formula(args)
    try:
        lines = Path(args.gamma).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {args.gamma}: {exc.strerror}") from exc
    gamma = [parse(line, budget=args.max_vars) for line in lines if line.strip()]
    alg, note = _algebra(args)
    if note:
        report.diagnostics.append(note)
    premises = [valid_in_algebra(alg, g, args.budget).valid for g in gamma]
    holds = entails_global(alg, gamma, f, args.budget)
    report.payload.update(
        formula=render(f),
        algebra=alg.name,
        premises=[{"formula": render(g), "valid": ok} for g, ok in zip(gamma, premises)],
        entails=holds,
    )
    if not holds:
        report.status = "fail"
        report.payload["countermodel"] = valid_in_algebra(alg, f, args.budget).countermodel.describe()


def cmd_quotient(args, report):
    fr = _frame(args, args.frame)
    q = build_quotient(fr)
    report.payload.update(worlds=fr.size, carrier=1 << popcount(q.qmax), trivial=q.trivial)
    if q.trivial:
        report.diagnostics.append(TRIVIAL_NOTE)
    if args.show_qmax:
        report.payload["qmax"] = _names(fr, q.qmax)
    if args.verify:
        check = verify_axioms(q.algebra, args.verify)
        report.payload["verify"] = args.verify
        report.payload["result"] = check.description
        if not check.ok:
            report.status = "fail"
            report.payload["witness"] = [_names(fr, a) for a in check.elements]


def cmd_resolve(args, report):
    fr = _frame(args, args.frame)
    res = find_baire_resolution(fr, args.k)
    report.payload["k"] = args.k
    if res is None:
        report.status = "fail"
        report.payload["resolution"] = None
        maximal = [popcount(c) for c in maximal_clusters(fr)]
        report.payload["witness"] = {"maximal_cluster_sizes": maximal}
    else:
        report.payload["resolution"] = [_names(fr, A) for A in res.parts]


def cmd_disconnect(args, report):
    fr = _frame(args, args.frame)
    if args.kuratowski:
        alg = kur_algebra_from_frame(fr)
    else:
        alg = build_quotient(fr).algebra
    family = kappa_disconnected(alg, args.k)
    atoms = clopen_subalgebra(alg).atoms()
    report.payload.update(k=args.k, algebra=alg.name, clopen_atoms=len(atoms))
    if family is None:
        report.status = "fail"
        report.payload["family"] = None
    else:
        report.payload["family"] = [_names(fr, a) for a in family]


def cmd_map_check(args, report):
    f = load_map(args.map)
    rep = check_baire_map(f)
    report.payload.update(rep.as_dict())
    if not rep.is_baire_map:
        report.status = "fail"
        report.payload["witnesses"] = {k: f.source.names_of(v) if isinstance(v, int) else
                                       [f.source.names_of(x) if isinstance(x, int) else x for x in v]
                                       for k, v in rep.witnesses.items()}


def cmd_embed(args, report):
    W = _frame(args, args.s5_frame)
    sp = _frame(args, args.space)
    emb = embed_s5_frame(W, sp)
    if emb is None:
        report.status = "fail"
        report.payload["embedding"] = None
        return
    report.payload.update(
        injective=emb.hom.injective(),
        preserves_boolean=emb.hom.preserves_boolean(),
        preserves_closure=emb.hom.preserves_closure(),
        carriers=[_names(sp, c) for c in emb.carriers],
        worlds={W.names[w]: _names(sp, emb.hom(1 << w)) for w in range(W.size)},
    )


def cmd_subalgebra(args, report):
    fr = _frame(args, args.frame)
    sub = build_s5n_subalgebra(fr, args.n)
    report.payload["n"] = args.n
    if sub is None:
        report.status = "fail"
        report.payload["subalgebra"] = None
        return
    clopens = build_quotient(fr).algebra.clopens()
    report.payload.update(
        size=sub.size,
        atoms=[_names(fr, a) for a in sub.atoms()],
        contains_clopens=all(c in sub.carrier for c in clopens),
        validates_bd=valid_in_algebra(sub, bounded_width(args.n), args.budget).valid,
    )
    if args.n >= 2:
        report.payload["refutes_previous_bd"] = not valid_in_algebra(
            sub, bounded_width(args.n - 1), args.budget).valid


COMMANDS = {
    "parse": cmd_parse,
    "decide": cmd_decide,
    "classify": cmd_classify,
    "valid": cmd_valid,
    "entails": cmd_entails,
    "quotient": cmd_quotient,
    "resolve": cmd_resolve,
    "disconnect": cmd_disconnect,
    "map-check": cmd_map_check,
    "embed": cmd_embed,
    "subalgebra-s5n": cmd_subalgebra,
}


def dispatch(argv) -> tuple[Report, str]:
    fmt = "json" if "--format=json" in argv or _after(argv, "--format") == "json" else "human"
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return Report(_guess_command(argv), "error", {}, [str(exc)]), fmt
    if args.command is None:
        return Report("bairelogic", "error", {}, ["no command given"]), fmt
    report = Report(args.command)
    try:
        COMMANDS[args.command](args, report)
    except (BaireLogicError, UsageError, ValueError, OSError) as exc:
        report.status = "error"
        report.diagnostics.append(f"{type(exc).__name__}: {exc}")
    return report, args.format


def _after(argv, flag):
    for a, b in zip(argv, argv[1:]):
        if a == flag:
            return b
    return None


def _guess_command(argv):
    for a in argv:
        if a in COMMANDS:
            return a
    return "bairelogic"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report, fmt = dispatch(argv)
    print(report_render(report, fmt))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
