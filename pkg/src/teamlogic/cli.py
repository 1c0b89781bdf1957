"""The `tl` command line tool.

Exit codes: 0 success (true, Entails, accepted), 1 logical negative (false,
CounterModel, rejected proof), 2 inconclusive (bound exhausted, type cap hit),
64 usage error, 65 input data error.
"""
import argparse
import json
import sys

from . import decision
from .bisim import PointedModel, hintikka_world, prop_set, team_bisim_k
from .errors import DataError, ProofError, TeamLogicError, TypeExplosion
from .fo_inclusion import print_fo, st_translate
from .kripke import load_model, parse_team
from .normal_form import DEFAULT_CAP, normal_form
from .proof_kernel import check_derivation, load_proof
from .semantics import eval_team
from .syntax import Logic, check_logic, logic_of, parse_any, print_formula

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _formula(text, logic=None):
    f = parse_any(text)
    if logic is not None:
        check_logic(f, Logic.parse(logic))
    return f


def _logic_choice(text):
    try:
        return Logic.parse(text).value
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown logic {text!r}") from None


def _team(model, text, what):
    team = parse_team(text)
    unknown = sorted(w for w in team if w not in model.index)
    if unknown:
        raise DataError(f"{what}: unknown world {unknown[0]!r}")
    return team


def _nonnegative(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return value


def _positive(text):
    value = _nonnegative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer, got 0")
    return value


# ---------------------------------------------------------------- commands
# each returns (exit code, text lines, structured payload)

def cmd_parse(args):
    f = _formula(args.formula, args.logic)
    payload = {
        "formula": print_formula(f),
        "logic": logic_of(f).value,
        "depth": f.depth,
        "classical": f.classical,
    }
    return EXIT_OK, [print_formula(f)], payload


def cmd_eval(args):
    m = load_model(args.model)
    team = _team(m, args.team, "--team")
    f = _formula(args.formula)
    value = eval_team(m, team, f)
    return (EXIT_OK if value else EXIT_NEGATIVE), ["true" if value else "false"], {"value": value}


def cmd_bisim(args):
    left = load_model(args.model)
    right = load_model(args.model2) if args.model2 else left
    t1 = _team(left, args.left, "--left")
    t2 = _team(right, args.right, "--right")
    props = prop_set(args.props) if args.props is not None else tuple(sorted(set(left.signature) & set(right.signature)))
    value = team_bisim_k((left, t1), (right, t2), props, args.k)
    return (EXIT_OK if value else EXIT_NEGATIVE), ["true" if value else "false"], {"value": value}


def cmd_hintikka(args):
    m = load_model(args.model)
    if args.world not in m.index:
        raise DataError(f"--world: unknown world {args.world!r}")
    props = prop_set(args.props) if args.props is not None else m.signature
    chi = hintikka_world(PointedModel(m, args.world), props, args.k)
    return EXIT_OK, [print_formula(chi)], {"formula": print_formula(chi)}


def cmd_nf(args):
    f = _formula(args.formula)
    props = prop_set(args.props) if args.props is not None else tuple(sorted(f.props))
    depth = args.depth if args.depth is not None else f.depth
    nf = normal_form(f, props, depth, Logic.parse(args.logic), args.type_cap)
    return EXIT_OK, [print_formula(nf)], {"formula": print_formula(nf)}


def cmd_entail(args):
    premises = [_formula(p) for p in args.premise]
    conclusion = _formula(args.conclusion)
    props = prop_set(args.props) if args.props is not None else None
    if args.mode == "nf":
        verdict = decision.entails_nf(premises, conclusion, props, args.type_cap)
    else:
        verdict = decision.entails_bounded(premises, conclusion, args.max_worlds, props)
    code = {decision.ENTAILS: EXIT_OK, decision.COUNTERMODEL: EXIT_NEGATIVE}.get(verdict.status, EXIT_INCONCLUSIVE)
    lines = [verdict.status]
    if verdict.model is not None:
        lines.append("model: " + json.dumps(verdict.model.to_json(), sort_keys=True))
        lines.append("team: " + ",".join(sorted(verdict.team)))
    if verdict.note:
        lines.append(verdict.note)
    return code, lines, verdict.to_json()


def cmd_check(args):
    d, declared = load_proof(args.proof)
    system = args.system or declared.value
    try:
        conclusion, opens = check_derivation(d, system)
    except ProofError as exc:
        payload = {"accepted": False, "error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "footnote", None) is not None:
            payload["footnote"] = exc.footnote
        return EXIT_NEGATIVE, [f"rejected: {type(exc).__name__}: {exc}"], payload
    assumptions = sorted(print_formula(f) for f in opens)
    lines = [f"accepted: {print_formula(conclusion)}"]
    lines.extend(f"open: {a}" for a in assumptions)
    payload = {"accepted": True, "conclusion": print_formula(conclusion), "open_assumptions": assumptions}
    return EXIT_OK, lines, payload


def cmd_translate(args):
    g = st_translate(_formula(args.formula), args.var)
    return EXIT_OK, [print_fo(g)], {"formula": print_fo(g)}


def build_parser():
    parser = _Parser(prog="tl", description="Team-semantics modal logic toolkit.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("parse", parents=[common], help="parse and print a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--logic", type=_logic_choice)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula on a team")
    p.add_argument("--model", required=True)
    p.add_argument("--team", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("bisim", parents=[common], help="k-bisimilarity of two teams")
    p.add_argument("--model", required=True)
    p.add_argument("--model2")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--k", type=_nonnegative, required=True)
    p.add_argument("--props")
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("hintikka", parents=[common], help="Hintikka formula of a world")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--k", type=_nonnegative, required=True)
    p.add_argument("--props")
    p.set_defaults(run=cmd_hintikka)

    p = sub.add_parser("nf", parents=[common], help="normal form of a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--props")
    p.add_argument("--depth", type=_nonnegative)
    p.add_argument("--logic", type=_logic_choice, default="mlinc")
    p.add_argument("--type-cap", type=_positive, default=DEFAULT_CAP)
    p.set_defaults(run=cmd_nf)

    p = sub.add_parser("entail", parents=[common], help="decide or refute an entailment")
    p.add_argument("--premise", action="append", default=[])
    p.add_argument("--conclusion", required=True)
    p.add_argument("--mode", choices=["nf", "search"], default="nf")
    p.add_argument("--max-worlds", type=_positive, default=3)
    p.add_argument("--type-cap", type=_positive, default=DEFAULT_CAP)
    p.add_argument("--props")
    p.set_defaults(run=cmd_entail)

    p = sub.add_parser("check", parents=[common], help="check a derivation file")
    p.add_argument("--proof", required=True)
    p.add_argument("--system", choices=["mlinc", "mlmight", "mlsmight"])
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("translate", parents=[common], help="standard translation into FO(inclusion)")
    p.add_argument("--formula", required=True)
    p.add_argument("--var", default="x")
    p.set_defaults(run=cmd_translate)
    return parser


def _emit(out, fmt, lines, payload):
    if fmt == "structured":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        code, lines, payload = args.run(args)
    except TypeExplosion as exc:
        _emit(out, args.format, ["BoundExhausted", str(exc)], {"status": "BoundExhausted", "note": str(exc)})
        return EXIT_INCONCLUSIVE
    except OSError as exc:
        err.write(f"data error: cannot read {exc.filename}: {exc.strerror}\n")
        return EXIT_DATA
    except (DataError, TeamLogicError, ValueError) as exc:
        err.write(f"data error: {exc}\n")
        return EXIT_DATA
    _emit(out, args.format, lines, payload)
    return code


def main():
    sys.exit(run(sys.argv[1:]))
