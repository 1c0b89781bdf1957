"""Checker for natural-deduction derivations in the three team-logic systems.

Every node carries its full conclusion; the kernel checks that the node is an
instance of its rule, performs assumption discharge and enforces the side
conditions:

- CLASSICAL_OPEN: the open assumptions left in the listed subderivations
  (after this rule's own discharges) must be classical;
- CLOSED: the listed subderivation has no open assumptions other than the
  ones this rule discharges.
"""
import enum
import itertools
import json
from dataclasses import dataclass, field

from .errors import (
    DataError,
    DischargeError,
    ProofError,
    RuleNotInSystem,
    SchemaMismatch,
    SideConditionViolation,
    TeamLogicError,
)
from .syntax import (
    BOT,
    TOP,
    And,
    Box,
    Dia,
    Inc,
    Logic,
    Might,
    Neg,
    Or,
    SMight,
    conjoin,
    constant_signs,
    disjoin,
    literal,
    parse_formula,
    pattern_conj,
    print_formula,
    sign_constants,
)


class System(enum.Enum):
    MLInc = "mlinc"
    MLMight = "mlmight"
    MLSMight = "mlsmight"

    @classmethod
    def parse(cls, name):
        for member in cls:
            if name in (member.value, member.name):
                return member
        raise ValueError(f"unknown proof system {name!r}")

    @property
    def logic(self):
        return {System.MLInc: Logic.MLInc, System.MLMight: Logic.MLMight, System.MLSMight: Logic.MLSMight}[self]

    @property
    def might(self):
        """The might operator of the system (None for the inclusion system)."""
        return {System.MLInc: None, System.MLMight: Might, System.MLSMight: SMight}[self]


CLASSICAL_OPEN = 1
CLOSED = 2

ASSUME = "Assume"


@dataclass
class Derivation:
    rule: str
    conclusion: object
    premises: list = field(default_factory=list)
    discharges: tuple = ()
    label: str = None
    id: object = None

    def size(self):
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


def assume(label, formula):
    return Derivation(ASSUME, formula, label=label)


def step(rule, conclusion, *premises, discharges=()):
    return Derivation(rule, conclusion, list(premises), tuple(discharges))


@dataclass(frozen=True)
class Check:
    """What a rule instance requires beyond the schema match.

    discharge maps a premise index to the formulas that may be discharged in
    that subderivation; conditions lists (premise index, CLASSICAL_OPEN/CLOSED).
    """

    discharge: dict = field(default_factory=dict)
    conditions: tuple = ()


_NO_CHECK = Check()


@dataclass(frozen=True)
class Rule:
    name: str
    symbol: str
    arity: str
    discharges: str
    side_conditions: str
    systems: frozenset
    check: object


class _Mismatch(Exception):
    pass


def _need(cond, pattern):
    if not cond:
        raise _Mismatch(pattern)


def _arity(prems, n, pattern):
    _need(len(prems) == n, pattern)


def _is(f, kind):
    return isinstance(f, kind)


def _primitive(f):
    """(signs, terms) for a primitive inclusion atom x ⊆ a, else None."""
    if not isinstance(f, Inc):
        return None
    signs = constant_signs(f.lhs)
    if signs is None:
        return None
    return signs, f.rhs


def _top_atom(f):
    """The right-hand term of a unary top inclusion atom ⊤ ⊆ α, else None."""
    if isinstance(f, Inc) and len(f.lhs) == 1 and f.lhs[0] == TOP:
        return f.rhs[0]
    return None


def _flatten_and(f):
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


# ------------------------------------------------------------ classical rules

def _neg_intro(c, prems, op):
    pattern = "[a] ... bot / !a"
    _arity(prems, 1, pattern)
    _need(prems[0] == BOT and _is(c, Neg), pattern)
    return Check({0: {c.sub}}, ((0, CLASSICAL_OPEN),))


def _raa(c, prems, op):
    pattern = "[!a] ... bot / a"
    _arity(prems, 1, pattern)
    _need(prems[0] == BOT and c.classical, pattern)
    return Check({0: {Neg(c)}}, ((0, CLASSICAL_OPEN),))


def _neg_elim(c, prems, op):
    pattern = "a, !a / phi"
    _arity(prems, 2, pattern)
    _need(prems[0].classical and prems[1] == Neg(prems[0]), pattern)
    return _NO_CHECK


def _or_intro(c, prems, op):
    pattern = "phi / phi | psi  or  psi / phi | psi"
    _arity(prems, 1, pattern)
    _need(_is(c, Or) and prems[0] in (c.left, c.right), pattern)
    return _NO_CHECK


def _or_elim(c, prems, op):
    pattern = "phi | psi, [phi] ... chi, [psi] ... chi / chi"
    _arity(prems, 3, pattern)
    _need(_is(prems[0], Or) and prems[1] == c and prems[2] == c, pattern)
    return Check({1: {prems[0].left}, 2: {prems[0].right}}, ((1, CLASSICAL_OPEN), (2, CLASSICAL_OPEN)))


def _and_intro(c, prems, op):
    pattern = "phi, psi / phi & psi"
    _arity(prems, 2, pattern)
    _need(c == And(prems[0], prems[1]), pattern)
    return _NO_CHECK


def _and_elim(c, prems, op):
    pattern = "phi & psi / phi  or  phi & psi / psi"
    _arity(prems, 1, pattern)
    _need(_is(prems[0], And) and c in (prems[0].left, prems[0].right), pattern)
    return _NO_CHECK


def _dia_box_inter(c, prems, op):
    pattern = "![]a / <>!a"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Neg) and _is(p.sub, Box) and c == Dia(Neg(p.sub.sub)), pattern)
    return _NO_CHECK


def _box_dia_inter(c, prems, op):
    pattern = "<>!a / ![]a"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Dia) and _is(p.sub, Neg) and c == Neg(Box(p.sub.sub)), pattern)
    return _NO_CHECK


def _dia_or_distr(c, prems, op):
    pattern = "<>(phi | psi) / <>phi | <>psi"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Dia) and _is(p.sub, Or) and c == Or(Dia(p.sub.left), Dia(p.sub.right)), pattern)
    return _NO_CHECK


def _box_mon(c, prems, op):
    pattern = "[phi1..phin] ... psi, []phi1, ..., []phin / []psi"
    _need(len(prems) >= 1, pattern)
    _need(_is(c, Box) and prems[0] == c.sub, pattern)
    _need(all(_is(p, Box) for p in prems[1:]), pattern)
    return Check({0: {p.sub for p in prems[1:]}}, ((0, CLOSED),))


def _dia_mon(c, prems, op):
    pattern = "[phi] ... psi, <>phi / <>psi"
    _arity(prems, 2, pattern)
    _need(_is(c, Dia) and prems[0] == c.sub and _is(prems[1], Dia), pattern)
    return Check({0: {prems[1].sub}}, ((0, CLOSED),))


# ------------------------------------------------------------ inclusion rules

def _sub_id(c, prems, op):
    pattern = "/ a <= a"
    _arity(prems, 0, pattern)
    _need(_is(c, Inc) and c.lhs == c.rhs, pattern)
    return _NO_CHECK


def _sub_exp(c, prems, op):
    pattern = "a^x, b <= c / x b <= a c"
    _arity(prems, 2, pattern)
    _need(_is(c, Inc) and len(c.lhs) >= 2, pattern)
    signs = constant_signs(c.lhs[:1])
    _need(signs is not None, pattern)
    _need(prems[0] == literal(c.rhs[0], signs[0]), pattern)
    _need(prems[1] == Inc(c.lhs[1:], c.rhs[1:]), pattern)
    return _NO_CHECK


def _sub_neg_elim(c, prems, op):
    pattern = "!a^x, x <= a / phi"
    _arity(prems, 2, pattern)
    prim = _primitive(prems[1])
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(prems[0] == Neg(pattern_conj(terms, signs)), pattern)
    return _NO_CHECK


def _or_sub_elim(c, prems, op):
    pattern = "x <= a | psi, [x <= a] ... chi, [psi] ... chi / chi"
    _arity(prems, 3, pattern)
    major = prems[0]
    _need(_is(major, Or) and _primitive(major.left) is not None, pattern)
    _need(prems[1] == c and prems[2] == c, pattern)
    return Check({1: {major.left}, 2: {major.right}})


def _ext_conjuncts(lhs, rhs):
    out = []
    for signs in itertools.product((True, False), repeat=len(lhs)):
        out.append(Or(Neg(pattern_conj(lhs, signs)), Inc(sign_constants(signs), rhs)))
    return out


def _sub_ext(c, prems, op):
    pattern = "conjunction over all x of (!a^x | x <= b) / a <= b"
    _arity(prems, 1, pattern)
    _need(_is(c, Inc), pattern)
    required = _ext_conjuncts(c.lhs, c.rhs)
    given = _flatten_and(prems[0])
    _need(len(given) == len(required) and set(given) == set(required), pattern)
    return _NO_CHECK


def _sub_rdt(c, prems, op):
    pattern = "a <= b / !a^x | x <= b"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Inc) and _is(c, Or), pattern)
    prim = _primitive(c.right)
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(terms == p.rhs and len(signs) == len(p.lhs), pattern)
    _need(c.left == Neg(pattern_conj(p.lhs, signs)), pattern)
    return _NO_CHECK


def _sub_distr(c, prems, op):
    pattern = "phi | psi, x1 <= a1, ..., xn <= an / ((phi | a1^x1 | ... | an^xn) & x1 <= a1 & ... & xn <= an) | psi"
    _need(len(prems) >= 2 and _is(prems[0], Or), pattern)
    atoms = prems[1:]
    prims = [_primitive(a) for a in atoms]
    _need(all(p is not None for p in prims), pattern)
    phi, psi = prems[0].left, prems[0].right
    body = disjoin([phi] + [pattern_conj(terms, signs) for signs, terms in prims])
    _need(c == Or(conjoin([body] + atoms), psi), pattern)
    return _NO_CHECK


def _dia_sub_distr(c, prems, op):
    pattern = "<>(x <= a) / top <= <>a^x"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Dia), pattern)
    prim = _primitive(p.sub)
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(c == Inc((TOP,), (Dia(pattern_conj(terms, signs)),)), pattern)
    return _NO_CHECK


def _dia_box_sub_exc(c, prems, op):
    pattern = "top <= <>a^x / [](x <= a)"
    _arity(prems, 1, pattern)
    _need(_is(c, Box), pattern)
    prim = _primitive(c.sub)
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(prems[0] == Inc((TOP,), (Dia(pattern_conj(terms, signs)),)), pattern)
    return _NO_CHECK


def _box_dia_sub_exc(c, prems, op):
    pattern = "top <= <>b, [](x <= a) / top <= <>a^x"
    _arity(prems, 2, pattern)
    beta = _top_atom(prems[0])
    _need(beta is not None and _is(beta, Dia), pattern)
    _need(_is(prems[1], Box), pattern)
    prim = _primitive(prems[1].sub)
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(c == Inc((TOP,), (Dia(pattern_conj(terms, signs)),)), pattern)
    return _NO_CHECK


def _box_or_sub_elim(c, prems, op):
    pattern = "[](x <= a | psi), [top <= <>a^x] ... chi, [[]psi] ... chi / chi"
    _arity(prems, 3, pattern)
    major = prems[0]
    _need(_is(major, Box) and _is(major.sub, Or), pattern)
    prim = _primitive(major.sub.left)
    _need(prim is not None, pattern)
    signs, terms = prim
    _need(prems[1] == c and prems[2] == c, pattern)
    first = Inc((TOP,), (Dia(pattern_conj(terms, signs)),))
    return Check({1: {first}, 2: {Box(major.sub.right)}})


def _sub_dia_distr(c, prems, op):
    pattern = "<>phi, x1 <= <>a1, ..., xn <= <>an / <>((phi | a1^x1 | ... | an^xn) & x1 <= a1 & ... & xn <= an)"
    _need(len(prems) >= 2 and _is(prems[0], Dia), pattern)
    lits, atoms = [], []
    for p in prems[1:]:
        _need(_is(p, Inc) and len(p.lhs) == 1 and _is(p.rhs[0], Dia), pattern)
        signs = constant_signs(p.lhs)
        _need(signs is not None, pattern)
        alpha = p.rhs[0].sub
        lits.append(literal(alpha, signs[0]))
        atoms.append(Inc(p.lhs, (alpha,)))
    _need(c == Dia(conjoin([disjoin([prems[0].sub] + lits)] + atoms)), pattern)
    return _NO_CHECK


# ------------------------------------------------------------ might rules
# `op` is the might operator of the system (Might or SMight)

def _might_join(c, prems, op):
    pattern = "might phi, might psi / might ((phi | psi) & might phi & might psi)"
    _arity(prems, 2, pattern)
    _need(all(_is(p, Might) for p in prems), pattern)
    phi, psi = prems[0].sub, prems[1].sub
    _need(c == Might(conjoin([Or(phi, psi), prems[0], prems[1]])), pattern)
    return _NO_CHECK


def _might_elim(c, prems, op):
    pattern = "might might phi / might phi"
    _arity(prems, 1, pattern)
    _need(_is(prems[0], Might) and _is(prems[0].sub, Might) and c == prems[0].sub, pattern)
    return _NO_CHECK


def _smight_and_simpl(c, prems, op):
    pattern = "smight (smight phi & psi) / smight (phi & psi)"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, SMight) and _is(p.sub, And) and _is(p.sub.left, SMight), pattern)
    _need(c == SMight(And(p.sub.left.sub, p.sub.right)), pattern)
    return _NO_CHECK


def _bullet_mon(c, prems, op):
    pattern = "M phi, [phi] ... psi / M psi"
    _arity(prems, 2, pattern)
    _need(_is(prems[0], op) and c == op(prems[1]), pattern)
    return Check({1: {prems[0].sub}}, ((1, CLASSICAL_OPEN),))


def _bullet_or_distr(c, prems, op):
    pattern = "M (phi | psi) / M phi | M psi"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, op) and _is(p.sub, Or) and c == Or(op(p.sub.left), op(p.sub.right)), pattern)
    return _NO_CHECK


def _bullet_intro(c, prems, op):
    pattern = "a / M a  (a classical)"
    _arity(prems, 1, pattern)
    _need(prems[0].classical and c == op(prems[0]), pattern)
    return _NO_CHECK


def _bullet_neg_elim(c, prems, op):
    pattern = "!a, M a / phi"
    _arity(prems, 2, pattern)
    _need(_is(prems[0], Neg) and prems[1] == op(prems[0].sub), pattern)
    return _NO_CHECK


def _or_bullet_elim(c, prems, op):
    pattern = "M phi | psi, [M phi] ... chi, [psi] ... chi / chi"
    _arity(prems, 3, pattern)
    major = prems[0]
    _need(_is(major, Or) and _is(major.left, op), pattern)
    _need(prems[1] == c and prems[2] == c, pattern)
    return Check({1: {major.left}, 2: {major.right}})


def _bullet_distr(c, prems, op):
    pattern = "phi | psi, M chi1, ..., M chin / ((phi | chi1 | ... | chin) & M chi1 & ... & M chin) | psi"
    _need(len(prems) >= 2 and _is(prems[0], Or), pattern)
    _need(all(_is(p, op) for p in prems[1:]), pattern)
    body = disjoin([prems[0].left] + [p.sub for p in prems[1:]])
    _need(c == Or(conjoin([body] + prems[1:]), prems[0].right), pattern)
    return _NO_CHECK


def _box_dia_bullet_exc(c, prems, op):
    pattern = "M <>psi, []M phi / M <>phi"
    _arity(prems, 2, pattern)
    first, second = prems
    _need(_is(first, op) and _is(first.sub, Dia), pattern)
    _need(_is(second, Box) and _is(second.sub, op), pattern)
    _need(c == op(Dia(second.sub.sub)), pattern)
    return _NO_CHECK


def _dia_box_bullet_exc(c, prems, op):
    pattern = "M <>phi / []M phi"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, op) and _is(p.sub, Dia) and c == Box(op(p.sub.sub)), pattern)
    return _NO_CHECK


def _box_or_bullet_elim(c, prems, op):
    pattern = "[](M phi | psi), [M <>phi] ... chi, [[]psi] ... chi / chi"
    _arity(prems, 3, pattern)
    major = prems[0]
    _need(_is(major, Box) and _is(major.sub, Or) and _is(major.sub.left, op), pattern)
    _need(prems[1] == c and prems[2] == c, pattern)
    return Check({1: {op(Dia(major.sub.left.sub))}, 2: {Box(major.sub.right)}})


def _dia_bullet_distr(c, prems, op):
    pattern = "<>M phi / M <>phi"
    _arity(prems, 1, pattern)
    p = prems[0]
    _need(_is(p, Dia) and _is(p.sub, op) and c == op(Dia(p.sub.sub)), pattern)
    return _NO_CHECK


def _bullet_dia_distr(c, prems, op):
    pattern = "<>phi, M <>psi1, ..., M <>psin / <>((phi | psi1 | ... | psin) & M psi1 & ... & M psin)"
    _need(len(prems) >= 2 and _is(prems[0], Dia), pattern)
    psis = []
    for p in prems[1:]:
        _need(_is(p, op) and _is(p.sub, Dia), pattern)
        psis.append(p.sub.sub)
    body = disjoin([prems[0].sub] + psis)
    _need(c == Dia(conjoin([body] + [op(s) for s in psis])), pattern)
    return _NO_CHECK


# ------------------------------------------------------------ inventory

_ALL = frozenset(System)
_INC = frozenset({System.MLInc})
_MIGHTY = frozenset({System.MLMight, System.MLSMight})

_F1 = "(1) open assumptions of the minor subderivations are classical"
_F1M = "(1) open assumptions of the subderivation are classical"
_F2 = "(2) the first subderivation has no open assumptions besides the discharged ones"

RULES = [
    Rule("NegI", "¬I", "1", "[a] in D0", _F1M, _ALL, _neg_intro),
    Rule("RAA", "RAA", "1", "[!a] in D0", _F1M, _ALL, _raa),
    Rule("NegE", "¬E", "2", "", "", _ALL, _neg_elim),
    Rule("OrI", "∨I", "1", "", "", _ALL, _or_intro),
    Rule("OrE", "∨E", "3", "[phi] in D0, [psi] in D1", _F1, _ALL, _or_elim),
    Rule("AndI", "∧I", "2", "", "", _ALL, _and_intro),
    Rule("AndE", "∧E", "1", "", "", _ALL, _and_elim),
    Rule("DiaBoxInter", "◇□Inter", "1", "", "", _ALL, _dia_box_inter),
    Rule("BoxDiaInter", "□◇Inter", "1", "", "", _ALL, _box_dia_inter),
    Rule("DiaOrDistr", "◇∨Distr", "1", "", "", _ALL, _dia_or_distr),
    Rule("BoxMon", "□Mon", "1+n", "[phi1..phin] in D0", _F2, _ALL, _box_mon),
    Rule("DiaMon", "◇Mon", "2", "[phi] in D0", _F2, _ALL, _dia_mon),
    Rule("SubId", "⊆Id", "0", "", "", _INC, _sub_id),
    Rule("SubExp", "⊆Exp", "2", "", "", _INC, _sub_exp),
    Rule("SubNegE", "⊆¬E", "2", "", "", _INC, _sub_neg_elim),
    Rule("OrSubE", "∨⊆E", "3", "[x<=a] in D0, [psi] in D1", "", _INC, _or_sub_elim),
    Rule("SubExt", "⊆Ext", "1", "", "", _INC, _sub_ext),
    Rule("SubRdt", "⊆Rdt", "1", "", "", _INC, _sub_rdt),
    Rule("SubDistr", "⊆Distr", "1+n", "", "", _INC, _sub_distr),
    Rule("DiaSubDistr", "◇⊆Distr", "1", "", "", _INC, _dia_sub_distr),
    Rule("DiaBoxSubExc", "◇□⊆Exc", "1", "", "", _INC, _dia_box_sub_exc),
    Rule("BoxDiaSubExc", "□◇⊆Exc", "2", "", "", _INC, _box_dia_sub_exc),
    Rule("BoxOrSubE", "□∨⊆E", "3", "[top<=<>a^x] in D0, [[]psi] in D1", "", _INC, _box_or_sub_elim),
    Rule("SubDiaDistr", "⊆◇Distr", "1+n", "", "", _INC, _sub_dia_distr),
    Rule("MightJoin", "▽Join", "2", "", "", frozenset({System.MLMight}), _might_join),
    Rule("MightE", "▽E", "1", "", "", frozenset({System.MLMight}), _might_elim),
    Rule("SMightAndSimpl", "•̇∧Simpl", "1", "", "", frozenset({System.MLSMight}), _smight_and_simpl),
    Rule("MightMon", "•Mon", "2", "[phi] in D0", _F1M, _MIGHTY, _bullet_mon),
    Rule("MightOrDistr", "•∨Distr", "1", "", "", _MIGHTY, _bullet_or_distr),
    Rule("MightI", "•I", "1", "", "", _MIGHTY, _bullet_intro),
    Rule("MightNegE", "•¬E", "2", "", "", _MIGHTY, _bullet_neg_elim),
    Rule("OrMightE", "∨•E", "3", "[M phi] in D0, [psi] in D1", "", _MIGHTY, _or_bullet_elim),
    Rule("MightDistr", "•Distr", "1+n", "", "", _MIGHTY, _bullet_distr),
    Rule("BoxDiaMightExc", "□◇•Exc", "2", "", "", _MIGHTY, _box_dia_bullet_exc),
    Rule("DiaBoxMightExc", "◇□•Exc", "1", "", "", _MIGHTY, _dia_box_bullet_exc),
    Rule("BoxOrMightE", "□∨•E", "3", "[M <>phi] in D0, [[]psi] in D1", "", _MIGHTY, _box_or_bullet_elim),
    Rule("DiaMightDistr", "◇•Distr", "1", "", "", _MIGHTY, _dia_bullet_distr),
    Rule("MightDiaDistr", "•◇Distr", "1+n", "", "", _MIGHTY, _bullet_dia_distr),
]

RULES_BY_NAME = {r.name: r for r in RULES}


def list_rules(system):
    """(name, arity, discharges, side conditions) for every rule of the system."""
    if isinstance(system, str):
        system = System.parse(system)
    return [(r.name, r.arity, r.discharges, r.side_conditions) for r in RULES if system in r.systems]


# ------------------------------------------------------------ checking

class _Checker:
    def __init__(self, system):
        self.system = system
        self.label_formula = {}
        self.discharged = set()

    def run(self, node):
        """Open assumptions of node as a dict label -> formula."""
        if node.rule == ASSUME:
            return self._assumption(node)
        rule = RULES_BY_NAME.get(node.rule)
        if rule is None:
            raise RuleNotInSystem(f"unknown rule {node.rule!r}", node)
        if self.system not in rule.systems:
            raise RuleNotInSystem(f"rule {rule.name} ({rule.symbol}) is not part of {self.system.value}", node)
        opens = [self.run(p) for p in node.premises]
        prems = [p.conclusion for p in node.premises]
        try:
            check = rule.check(node.conclusion, prems, self.system.might)
        except _Mismatch as exc:
            raise SchemaMismatch(
                f"node {_name(node)}: {rule.name} ({rule.symbol}) expects {exc.args[0]}", node
            ) from None
        self._discharge(node, rule, check, opens)
        for index, kind in check.conditions:
            left = opens[index]
            if kind == CLASSICAL_OPEN:
                bad = [f for f in left.values() if not f.classical]
                if bad:
                    raise SideConditionViolation(
                        f"node {_name(node)}: {rule.name} needs classical open assumptions in premise {index}, "
                        f"found {print_formula(bad[0])!r}",
                        node,
                        footnote=1,
                    )
            elif kind == CLOSED and left:
                label = sorted(left)[0]
                raise SideConditionViolation(
                    f"node {_name(node)}: {rule.name} needs premise {index} free of open assumptions, "
                    f"found {label!r}: {print_formula(left[label])!r}",
                    node,
                    footnote=2,
                )
        out = {}
        for o in opens:
            out.update(o)
        return out

    def _assumption(self, node):
        if node.premises:
            raise SchemaMismatch(f"node {_name(node)}: an assumption has no premises", node)
        if not node.label:
            raise DischargeError(f"node {_name(node)}: assumption without a label", node)
        known = self.label_formula.get(node.label)
        if known is None:
            self.label_formula[node.label] = node.conclusion
        elif known != node.conclusion:
            raise DischargeError(
                f"node {_name(node)}: label {node.label!r} is used for two different formulas", node
            )
        return {node.label: node.conclusion}

    def _discharge(self, node, rule, check, opens):
        for label in node.discharges:
            if label in self.discharged:
                raise DischargeError(f"node {_name(node)}: label {label!r} is discharged twice", node)
            if not check.discharge:
                raise DischargeError(f"node {_name(node)}: {rule.name} discharges no assumptions", node)
            hit = False
            for index, allowed in check.discharge.items():
                formula = opens[index].get(label)
                if formula is not None and formula in allowed:
                    del opens[index][label]
                    hit = True
            if not hit:
                raise DischargeError(
                    f"node {_name(node)}: label {label!r} does not mark a dischargeable assumption "
                    f"in the designated subderivation",
                    node,
                )
            self.discharged.add(label)


def _name(node):
    return node.id if node.id is not None else node.rule


def check_derivation(d, system):
    """Check d; return (conclusion, set of open assumption formulas)."""
    if isinstance(system, str):
        system = System.parse(system)
    opens = _Checker(system).run(d)
    return d.conclusion, frozenset(opens.values())


# ------------------------------------------------------------ proof files

def derivation_from_json(data):
    """Build (derivation, system) from the proof file structure."""
    if not isinstance(data, dict):
        raise DataError("proof must be an object with fields system, nodes, root")
    for key in ("system", "nodes", "root"):
        if key not in data:
            raise DataError(f"proof is missing field {key!r}")
    try:
        system = System.parse(data["system"])
    except ValueError as exc:
        raise DataError(f"field 'system': {exc}") from None
    raw = {}
    for entry in data["nodes"]:
        if not isinstance(entry, dict):
            raise DataError(f"field 'nodes' has a malformed entry {entry!r}")
        for key in ("id", "rule", "conclusion"):
            if key not in entry:
                raise DataError(f"node entry is missing field {key!r}: {entry!r}")
        if entry["id"] in raw:
            raise DataError(f"duplicate node id {entry['id']!r}")
        raw[entry["id"]] = entry
    used = set()
    built = {}

    def build(node_id, trail):
        if node_id not in raw:
            raise DataError(f"unknown node id {node_id!r}")
        if node_id in trail:
            raise DataError(f"node {node_id!r} is its own ancestor")
        entry = raw[node_id]
        try:
            conclusion = parse_formula(entry["conclusion"], system.logic)
        except TeamLogicError as exc:
            raise DataError(f"node {node_id!r} field 'conclusion': {exc}") from None
        premises = []
        for child in entry.get("premises", []):
            if child in used:
                raise DataError(f"node {child!r} is used as a premise twice")
            used.add(child)
            premises.append(build(child, trail | {node_id}))
        node = Derivation(
            entry["rule"],
            conclusion,
            premises,
            tuple(entry.get("discharges", [])),
            entry.get("label"),
            node_id,
        )
        built[node_id] = node
        return node

    root = build(data["root"], frozenset())
    return root, system


def derivation_to_json(d, system):
    if isinstance(system, str):
        system = System.parse(system)
    nodes = []
    counter = itertools.count(1)

    def emit(node):
        ids = [emit(p) for p in node.premises]
        nid = next(counter)
        entry = {"id": nid, "rule": node.rule, "conclusion": print_formula(node.conclusion)}
        if node.rule == ASSUME:
            entry["label"] = node.label
        else:
            entry["premises"] = ids
            if node.discharges:
                entry["discharges"] = list(node.discharges)
        nodes.append(entry)
        return nid

    root = emit(d)
    return {"system": system.value, "nodes": nodes, "root": root}


def load_proof(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"proof file is not valid JSON: {exc}") from None
    return derivation_from_json(data)


__all__ = [
    "ProofError",
    "Derivation",
    "System",
    "assume",
    "check_derivation",
    "list_rules",
    "step",
]
