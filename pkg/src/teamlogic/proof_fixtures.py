"""Worked derivations for the proof kernel.

`derived_fixtures()` expands a handful of derived inclusion and might facts
into primitive rule applications; `rule_fixtures(system)` gives one small
accepted instance of every rule.  The JSON files shipped in `fixtures/` are
dumps of `derived_fixtures()`.
"""
import itertools
import json
from pathlib import Path

from .proof_kernel import Derivation, System, assume, derivation_to_json, step
from .syntax import (
    BOT,
    TOP,
    And,
    Box,
    Dia,
    Inc,
    Might,
    Neg,
    Or,
    Prop,
    SMight,
    conjoin,
    disjoin,
    literal,
    parse_any,
    pattern_conj,
    sign_constants,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class Labels:
    """Fresh assumption labels."""

    def __init__(self, prefix="h"):
        self.prefix = prefix
        self.counter = itertools.count(1)

    def __call__(self):
        return f"{self.prefix}{next(self.counter)}"


def _f(text):
    return parse_any(text)


def rdt(d, signs):
    """From a derivation of a <= b, the redundancy form for the pattern `signs`."""
    inc = d.conclusion
    return step("SubRdt", Or(Neg(pattern_conj(inc.lhs, signs)), Inc(sign_constants(signs), inc.rhs)), d)


def commute_or(d, fresh):
    """From a derivation of A | B, a derivation of B | A."""
    left, right = d.conclusion.left, d.conclusion.right
    goal = Or(right, left)
    l1, l2 = fresh(), fresh()
    return step(
        "OrE",
        goal,
        d,
        step("OrI", goal, assume(l1, left)),
        step("OrI", goal, assume(l2, right)),
        discharges=(l1, l2),
    )


def _ext_goal(a, c, signs):
    return Or(Neg(pattern_conj(a, signs)), Inc(sign_constants(signs), c))


def _ext_close(a, c, cases):
    """Combine the per-pattern derivations (in product order) with AndI and SubExt."""
    conj = cases[0]
    for d in cases[1:]:
        conj = step("AndI", And(conj.conclusion, d.conclusion), conj, d)
    return step("SubExt", Inc(a, c), conj)


def inclusion_transitivity(a, b, c, fresh=None):
    """a <= b, b <= c derive a <= c, for term tuples of equal length."""
    fresh = fresh or Labels()
    a, b, c = tuple(a), tuple(b), tuple(c)
    h_ab = assume("ab", Inc(a, b))
    h_bc = assume("bc", Inc(b, c))
    cases = []
    for signs in itertools.product((True, False), repeat=len(a)):
        goal = _ext_goal(a, c, signs)
        xs = sign_constants(signs)
        outer = commute_or(rdt(h_ab, signs), fresh)  # x <= b | !a^x
        inner = commute_or(rdt(h_bc, signs), fresh)  # x <= c | !b^x
        l_xb, l_na, l_xc, l_nb = fresh(), fresh(), fresh(), fresh()
        xb = assume(l_xb, Inc(xs, b))
        via_b = step(
            "OrSubE",
            goal,
            inner,
            step("OrI", goal, assume(l_xc, Inc(xs, c))),
            step("SubNegE", goal, assume(l_nb, Neg(pattern_conj(b, signs))), xb),
            discharges=(l_xc, l_nb),
        )
        cases.append(
            step(
                "OrSubE",
                goal,
                outer,
                via_b,
                step("OrI", goal, assume(l_na, Neg(pattern_conj(a, signs)))),
                discharges=(l_xb, l_na),
            )
        )
    return _ext_close(a, c, cases)


def _from_pair_atom(c, d, x, y, source_label, goal, fresh):
    """Derive `goal` (= !a^x | x <= c) from the assumption xy <= cd."""
    cx, dy = literal(c, x), literal(d, y)
    base = commute_or(rdt(step("SubId", Inc((c,), (c,))), (x,)), fresh)  # x <= c | !c^x
    l_xc, l_ncx, l_cd = fresh(), fresh(), fresh()
    refute = step(
        "NegI",
        Neg(And(cx, dy)),
        step(
            "NegE",
            BOT,
            step("AndE", cx, assume(l_cd, And(cx, dy))),
            assume(l_ncx, Neg(cx)),
        ),
        discharges=(l_cd,),
    )
    pair = assume(source_label, Inc(sign_constants((x, y)), (c, d)))
    return step(
        "OrSubE",
        goal,
        base,
        step("OrI", goal, assume(l_xc, Inc(sign_constants((x,)), (c,)))),
        step("SubNegE", goal, refute, pair),
        discharges=(l_xc, l_ncx),
    )


def _from_both_negations(a, b, x, l_pos, l_neg, goal, fresh):
    """From !(a^x & b) and !(a^x & !b), derive `goal` through !a^x."""
    ax = literal(a, x)
    l_ax, l_nb = fresh(), fresh()
    has_b = step(
        "RAA",
        b,
        step(
            "NegE",
            BOT,
            step("AndI", And(ax, Neg(b)), assume(l_ax, ax), assume(l_nb, Neg(b))),
            assume(l_neg, Neg(And(ax, Neg(b)))),
        ),
        discharges=(l_nb,),
    )
    not_ax = step(
        "NegI",
        Neg(ax),
        step(
            "NegE",
            BOT,
            step("AndI", And(ax, b), assume(l_ax, ax), has_b),
            assume(l_pos, Neg(And(ax, b))),
        ),
        discharges=(l_ax,),
    )
    return step("OrI", goal, not_ax)


def inclusion_contraction(source, fresh=None):
    """From a derivation of a, b <= c, d (single terms), derive a <= c."""
    fresh = fresh or Labels()
    (a, b), (c, d) = source.conclusion.lhs, source.conclusion.rhs
    cases = []
    for x in (True, False):
        goal = _ext_goal((a,), (c,), (x,))
        splits = {}
        for y in (True, False):
            # xy <= cd | !(a^x & b^y)
            splits[y] = commute_or(rdt(source, (x, y)), fresh)
        l_t, l_pos, l_f, l_neg = fresh(), fresh(), fresh(), fresh()
        second = step(
            "OrSubE",
            goal,
            splits[False],
            _from_pair_atom(c, d, x, False, l_f, goal, fresh),
            _from_both_negations(a, b, x, l_pos, l_neg, goal, fresh),
            discharges=(l_f, l_neg),
        )
        cases.append(
            step(
                "OrSubE",
                goal,
                splits[True],
                _from_pair_atom(c, d, x, True, l_t, goal, fresh),
                second,
                discharges=(l_t, l_pos),
            )
        )
    return _ext_close((a,), (c,), cases)


def top_inclusion_intro(alpha, fresh=None):
    """alpha derives top <= alpha."""
    fresh = fresh or Labels()
    pair = step(
        "SubExp",
        Inc((TOP, TOP), (alpha, TOP)),
        assume("alpha", alpha),
        step("SubId", Inc((TOP,), (TOP,))),
    )
    return inclusion_contraction(pair, fresh)


def top_inclusion_exchange(alpha, x, fresh=None):
    """top <= alpha^x derives x <= alpha."""
    fresh = fresh or Labels()
    xs = sign_constants((x,))
    base = commute_or(rdt(step("SubId", Inc((alpha,), (alpha,))), (x,)), fresh)
    l_in, l_neg = fresh(), fresh()
    goal = Inc(xs, (alpha,))
    return step(
        "OrSubE",
        goal,
        base,
        assume(l_in, goal),
        step(
            "SubNegE",
            goal,
            assume(l_neg, Neg(literal(alpha, x))),
            assume("top", Inc((TOP,), (literal(alpha, x),))),
        ),
        discharges=(l_in, l_neg),
    )


def might_or_merge(op, phi, psi, fresh=None):
    """M phi | M psi derives M (phi | psi)."""
    fresh = fresh or Labels()
    goal = op(Or(phi, psi))
    l1, l2, l3, l4 = fresh(), fresh(), fresh(), fresh()
    left = step(
        "MightMon", goal, assume(l1, op(phi)), step("OrI", Or(phi, psi), assume(l2, phi)), discharges=(l2,)
    )
    right = step(
        "MightMon", goal, assume(l3, op(psi)), step("OrI", Or(phi, psi), assume(l4, psi)), discharges=(l4,)
    )
    return step("OrE", goal, assume("split", Or(op(phi), op(psi))), left, right, discharges=(l1, l3))


def might_or_split(op, phi, psi):
    """M (phi | psi) derives M phi | M psi."""
    return step("MightOrDistr", Or(op(phi), op(psi)), assume("joined", op(Or(phi, psi))))


def derived_fixtures():
    """name -> (system, derivation, expected conclusion, expected open assumptions)."""
    p, q, r = Prop("p"), Prop("q"), Prop("r")
    out = {
        "subid": (System.MLInc, step("SubId", _f("p, q <= p, q")), _f("p, q <= p, q"), set()),
        "subexp_pair": (
            System.MLInc,
            step("SubExp", _f("top, top <= a, top"), assume("a", Prop("a")), step("SubId", _f("top <= top"))),
            _f("top, top <= a, top"),
            {Prop("a")},
        ),
        "inclusion_transitivity": (
            System.MLInc,
            inclusion_transitivity((p,), (q,), (r,)),
            _f("p <= r"),
            {_f("p <= q"), _f("q <= r")},
        ),
        "inclusion_contraction": (
            System.MLInc,
            inclusion_contraction(assume("pair", _f("p, q <= r, p"))),
            _f("p <= r"),
            {_f("p, q <= r, p")},
        ),
        "top_inclusion_intro": (
            System.MLInc,
            top_inclusion_intro(_f("<>p")),
            _f("top <= <>p"),
            {_f("<>p")},
        ),
        "top_inclusion_exchange": (
            System.MLInc,
            top_inclusion_exchange(p, False),
            _f("bot <= p"),
            {_f("top <= !p")},
        ),
    }
    for system in (System.MLMight, System.MLSMight):
        op = system.might
        phi, psi = p, Dia(q)
        out[f"might_or_merge_{system.value}"] = (
            system,
            might_or_merge(op, phi, psi),
            op(Or(phi, psi)),
            {Or(op(phi), op(psi))},
        )
        out[f"might_or_split_{system.value}"] = (
            system,
            might_or_split(op, phi, psi),
            Or(op(phi), op(psi)),
            {op(Or(phi, psi))},
        )
    return out


# ------------------------------------------------------------ one instance per rule

def _classical_rules(fresh):
    p, q = Prop("p"), Prop("q")
    l = fresh
    a1, a2, a3, a4 = l(), l(), l(), l()
    return {
        "NegI": step(
            "NegI", Neg(p), step("NegE", BOT, assume(a1, p), assume("np", Neg(p))), discharges=(a1,)
        ),
        "RAA": step("RAA", p, step("NegE", BOT, assume("p", p), assume(a2, Neg(p))), discharges=(a2,)),
        "OrI": step("OrI", Or(p, q), assume("p", p)),
        "OrE": step(
            "OrE",
            Or(q, p),
            assume("pq", Or(p, q)),
            step("OrI", Or(q, p), assume(a3, p)),
            step("OrI", Or(q, p), assume(a4, q)),
            discharges=(a3, a4),
        ),
        "AndI": step("AndI", And(p, q), assume("p", p), assume("q", q)),
        "AndE": step("AndE", q, assume("pq", And(p, q))),
        "DiaBoxInter": step("DiaBoxInter", _f("<>!p"), assume("h", _f("![]p"))),
        "BoxDiaInter": step("BoxDiaInter", _f("![]p"), assume("h", _f("<>!p"))),
        "DiaOrDistr": step("DiaOrDistr", _f("<>p | <>q"), assume("h", _f("<>(p | q)"))),
    }


def _modal_mon(fresh):
    p, q = Prop("p"), Prop("q")
    b1, b2, d1 = fresh(), fresh(), fresh()
    return {
        "BoxMon": step(
            "BoxMon",
            _f("[](p & q)"),
            step("AndI", And(p, q), assume(b1, p), assume(b2, q)),
            assume("bp", _f("[]p")),
            assume("bq", _f("[]q")),
            discharges=(b1, b2),
        ),
        "DiaMon": step(
            "DiaMon",
            _f("<>(p | q)"),
            step("OrI", Or(p, q), assume(d1, p)),
            assume("dp", _f("<>p")),
            discharges=(d1,),
        ),
    }


def _inclusion_rules(fresh):
    c1, c2, e1, e2 = fresh(), fresh(), fresh(), fresh()
    return {
        "SubId": step("SubId", _f("p, q <= p, q")),
        "SubExp": step("SubExp", _f("bot, top <= p, q"), assume("np", _f("!p")), assume("h", _f("top <= q"))),
        "SubNegE": step("SubNegE", _f("<>r"), assume("n", _f("!(p & !q)")), assume("h", _f("top, bot <= p, q"))),
        "OrSubE": step(
            "OrSubE",
            _f("q | top <= p"),
            assume("h", _f("top <= p | q")),
            step("OrI", _f("q | top <= p"), assume(c1, _f("top <= p"))),
            step("OrI", _f("q | top <= p"), assume(c2, _f("q"))),
            discharges=(c1, c2),
        ),
        "SubExt": step("SubExt", _f("p <= q"), assume("h", _f("(!p | top <= q) & (!!p | bot <= q)"))),
        "SubRdt": step("SubRdt", _f("!!p | bot <= q"), assume("h", _f("p <= q"))),
        "SubDistr": step(
            "SubDistr",
            _f("(p | r | !p) & top <= r & bot <= p | q"),
            assume("h", _f("p | q")),
            assume("t", _f("top <= r")),
            assume("b", _f("bot <= p")),
        ),
        "DiaSubDistr": step("DiaSubDistr", _f("top <= <>(p & !q)"), assume("h", _f("<>(top, bot <= p, q)"))),
        "DiaBoxSubExc": step("DiaBoxSubExc", _f("[](top, bot <= p, q)"), assume("h", _f("top <= <>(p & !q)"))),
        "BoxDiaSubExc": step(
            "BoxDiaSubExc", _f("top <= <>!p"), assume("d", _f("top <= <>r")), assume("b", _f("[](bot <= p)"))
        ),
        "BoxOrSubE": step(
            "BoxOrSubE",
            _f("top <= <>p | []q"),
            assume("h", _f("[](top <= p | q)")),
            step("OrI", _f("top <= <>p | []q"), assume(e1, _f("top <= <>p"))),
            step("OrI", _f("top <= <>p | []q"), assume(e2, _f("[]q"))),
            discharges=(e1, e2),
        ),
        "SubDiaDistr": step(
            "SubDiaDistr",
            _f("<>((q | p | !r) & top <= p & bot <= r)"),
            assume("d", _f("<>q")),
            assume("t", _f("top <= <>p")),
            assume("b", _f("bot <= <>r")),
        ),
    }


def _might_rules(system, fresh):
    op = system.might
    p, q, r = Prop("p"), Prop("q"), Prop("r")
    m1, o1, o2, x1, x2 = fresh(), fresh(), fresh(), fresh(), fresh()
    out = {
        "MightMon": step(
            "MightMon", op(Or(p, q)), assume("mp", op(p)), step("OrI", Or(p, q), assume(m1, p)), discharges=(m1,)
        ),
        "MightOrDistr": step("MightOrDistr", Or(op(p), op(q)), assume("h", op(Or(p, q)))),
        "MightI": step("MightI", op(p), assume("p", p)),
        "MightNegE": step("MightNegE", Dia(q), assume("np", Neg(p)), assume("mp", op(p))),
        "OrMightE": step(
            "OrMightE",
            Or(q, op(p)),
            assume("h", Or(op(p), q)),
            step("OrI", Or(q, op(p)), assume(o1, op(p))),
            step("OrI", Or(q, op(p)), assume(o2, q)),
            discharges=(o1, o2),
        ),
        "MightDistr": step(
            "MightDistr",
            Or(conjoin([disjoin([p, r, Neg(p)]), op(r), op(Neg(p))]), q),
            assume("h", Or(p, q)),
            assume("mr", op(r)),
            assume("mn", op(Neg(p))),
        ),
        "BoxDiaMightExc": step(
            "BoxDiaMightExc", op(Dia(p)), assume("d", op(Dia(q))), assume("b", Box(op(p)))
        ),
        "DiaBoxMightExc": step("DiaBoxMightExc", Box(op(p)), assume("h", op(Dia(p)))),
        "BoxOrMightE": step(
            "BoxOrMightE",
            Or(op(Dia(p)), Box(q)),
            assume("h", Box(Or(op(p), q))),
            step("OrI", Or(op(Dia(p)), Box(q)), assume(x1, op(Dia(p)))),
            step("OrI", Or(op(Dia(p)), Box(q)), assume(x2, Box(q))),
            discharges=(x1, x2),
        ),
        "DiaMightDistr": step("DiaMightDistr", op(Dia(p)), assume("h", Dia(op(p)))),
        "MightDiaDistr": step(
            "MightDiaDistr",
            Dia(conjoin([disjoin([q, p, r]), op(p), op(r)])),
            assume("d", Dia(q)),
            assume("mp", op(Dia(p))),
            assume("mr", op(Dia(r))),
        ),
    }
    if system is System.MLMight:
        out["MightJoin"] = step(
            "MightJoin",
            Might(conjoin([Or(p, q), Might(p), Might(q)])),
            assume("mp", Might(p)),
            assume("mq", Might(q)),
        )
        out["MightE"] = step("MightE", Might(p), assume("h", Might(Might(p))))
    else:
        out["SMightAndSimpl"] = step(
            "SMightAndSimpl", SMight(And(p, q)), assume("h", SMight(And(SMight(p), q)))
        )
    return out


def rule_fixtures(system):
    """rule name -> an accepted derivation whose root applies that rule."""
    if isinstance(system, str):
        system = System.parse(system)
    fresh = Labels("d")
    out = _classical_rules(fresh)
    # ex falso into the system's own non-classical atom
    wild = _f("top <= q") if system is System.MLInc else system.might(Prop("q"))
    out["NegE"] = step("NegE", wild, assume("p", Prop("p")), assume("np", _f("!p")))
    out.update(_modal_mon(fresh))
    if system is System.MLInc:
        out.update(_inclusion_rules(fresh))
    else:
        out.update(_might_rules(system, fresh))
    return out


FREE_CONCLUSION = {"NegE", "SubNegE", "MightNegE"}


def near_miss(d):
    """A one-node mutation of d that its rule must reject.

    The root conclusion is doubled into a conjunction; rules whose conclusion
    is unconstrained get their first premise doubled instead.
    """
    if d.rule in FREE_CONCLUSION:
        first = d.premises[0]
        changed = Derivation(first.rule, And(first.conclusion, first.conclusion), first.premises, first.discharges, first.label)
        return Derivation(d.rule, d.conclusion, [changed] + d.premises[1:], d.discharges, d.label)
    return Derivation(d.rule, And(d.conclusion, d.conclusion), d.premises, d.discharges, d.label)


def _dump(path, d, system):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(derivation_to_json(d, system), fh, indent=1)
        fh.write("\n")


def write_fixture_files(directory=FIXTURE_DIR):
    """Derived results go to the top level, single-rule instances to rules/<system>/."""
    directory = Path(directory)
    for name, (system, d, _, _) in derived_fixtures().items():
        _dump(directory / f"{name}.json", d, system)
    for system in System:
        for name, d in rule_fixtures(system).items():
            _dump(directory / "rules" / system.value / f"{name}.json", d, system)


if __name__ == "__main__":
    write_fixture_files()
