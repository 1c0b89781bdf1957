"""Formulas of modal team logics: AST, parser, printer and structural measures."""
import enum
import re
from dataclasses import dataclass

from .errors import (
    FormulaSyntaxError,
    InclusionArityError,
    LogicError,
    NegationError,
    NonClassicalSubstitution,
)


class Logic(enum.Enum):
    MLInc = "mlinc"
    MLMight = "mlmight"
    MLSMight = "mlsmight"
    MLClassical = "mlclassical"

    @classmethod
    def parse(cls, name):
        for member in cls:
            if name in (member.value, member.name):
                return member
        raise ValueError(f"unknown logic {name!r}")


class Formula:
    """Common behaviour of formula nodes.

    Nodes are immutable; the structural key, hash, classicality, modal depth and
    proposition set are computed once at construction.
    """

    def _seal(self, key, classical, depth, props):
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "classical", classical)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "props", props)

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self._key == other._key

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_formula(self)

    def children(self):
        return ()


_EMPTY = frozenset()


@dataclass(frozen=True, eq=False, repr=False)
class Prop(Formula):
    name: str

    def __post_init__(self):
        self._seal(("p", self.name), True, 0, frozenset((self.name,)))

    def __repr__(self):
        return f"Prop({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Bottom(Formula):
    def __post_init__(self):
        self._seal(("bot",), True, 0, _EMPTY)

    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, eq=False, repr=False)
class Neg(Formula):
    sub: Formula

    def __post_init__(self):
        if not self.sub.classical:
            raise NegationError(f"negation over non-classical formula {print_formula(self.sub)!r}")
        self._seal(("neg", self.sub), True, self.sub.depth, self.sub.props)

    def children(self):
        return (self.sub,)

    def __repr__(self):
        return f"Neg({self.sub!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        l, r = self.left, self.right
        self._seal(("or", l, r), l.classical and r.classical, max(l.depth, r.depth), l.props | r.props)

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        l, r = self.left, self.right
        self._seal(("and", l, r), l.classical and r.classical, max(l.depth, r.depth), l.props | r.props)

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Dia(Formula):
    sub: Formula

    def __post_init__(self):
        self._seal(("dia", self.sub), self.sub.classical, self.sub.depth + 1, self.sub.props)

    def children(self):
        return (self.sub,)

    def __repr__(self):
        return f"Dia({self.sub!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Box(Formula):
    sub: Formula

    def __post_init__(self):
        self._seal(("box", self.sub), self.sub.classical, self.sub.depth + 1, self.sub.props)

    def children(self):
        return (self.sub,)

    def __repr__(self):
        return f"Box({self.sub!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Inc(Formula):
    lhs: tuple
    rhs: tuple

    def __post_init__(self):
        lhs, rhs = tuple(self.lhs), tuple(self.rhs)
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)
        if not lhs or len(lhs) != len(rhs):
            raise InclusionArityError(f"inclusion sides have lengths {len(lhs)} and {len(rhs)}")
        for side in lhs + rhs:
            if not side.classical:
                raise InclusionArityError(f"non-classical term {print_formula(side)!r} inside an inclusion atom")
        sides = lhs + rhs
        props = frozenset().union(*(s.props for s in sides))
        self._seal(("inc", lhs, rhs), False, max(s.depth for s in sides), props)

    def children(self):
        return self.lhs + self.rhs

    def __repr__(self):
        return f"Inc({list(self.lhs)!r}, {list(self.rhs)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Might(Formula):
    sub: Formula

    def __post_init__(self):
        self._seal(("might", self.sub), False, self.sub.depth, self.sub.props)

    def children(self):
        return (self.sub,)

    def __repr__(self):
        return f"Might({self.sub!r})"


@dataclass(frozen=True, eq=False, repr=False)
class SMight(Formula):
    sub: Formula

    def __post_init__(self):
        self._seal(("smight", self.sub), False, self.sub.depth, self.sub.props)

    def children(self):
        return (self.sub,)

    def __repr__(self):
        return f"SMight({self.sub!r})"


BOT = Bottom()
TOP = Neg(BOT)
UNARY = (Neg, Dia, Box, Might, SMight)


def is_top(f):
    return f == TOP


def literal(a, positive):
    """a^x for x = top (positive) or bot (negative)."""
    return a if positive else Neg(a)


def conjoin(parts, empty=TOP):
    """Left-associated conjunction; `empty` for no parts."""
    parts = list(parts)
    if not parts:
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts, empty=BOT):
    parts = list(parts)
    if not parts:
        return empty
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def pattern_conj(terms, signs):
    """a^x: conjunction of the literals terms[i]^signs[i] (signs are booleans)."""
    return conjoin(literal(a, s) for a, s in zip(terms, signs))


def constant_signs(terms):
    """Read a tuple of top/bot constants as booleans; None if some term is not a constant."""
    out = []
    for t in terms:
        if t == TOP:
            out.append(True)
        elif t == BOT:
            out.append(False)
        else:
            return None
    return tuple(out)


def sign_constants(signs):
    return tuple(TOP if s else BOT for s in signs)


def modal_depth(f):
    return f.depth


def is_classical(f):
    return f.classical


def props_of(f):
    return f.props


def subformulas(f):
    """All distinct subformulas, children before parents."""
    seen = set()
    order = []
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if expanded:
            order.append(g)
            continue
        if g in seen:
            continue
        seen.add(g)
        stack.append((g, True))
        for c in reversed(g.children()):
            if c not in seen:
                stack.append((c, False))
    return order


def logic_of(f):
    """The smallest logic whose syntax contains f; mixed formulas get None."""
    kinds = {type(g) for g in subformulas(f)}
    extras = kinds & {Inc, Might, SMight}
    if not extras:
        return Logic.MLClassical
    if extras == {Inc}:
        return Logic.MLInc
    if extras == {Might}:
        return Logic.MLMight
    if extras == {SMight}:
        return Logic.MLSMight
    return None


_FORBIDDEN = {
    Logic.MLClassical: (Inc, Might, SMight),
    Logic.MLInc: (Might, SMight),
    Logic.MLMight: (Inc, SMight),
    Logic.MLSMight: (Inc, Might),
}

_NAMES = {Inc: "inclusion atom", Might: "might", SMight: "smight"}


def check_logic(f, logic):
    bad = _FORBIDDEN[logic]
    for g in subformulas(f):
        if isinstance(g, bad):
            raise LogicError(f"{_NAMES[type(g)]} is not a connective of {logic.value}")
    return f


def substitute_classical(f, sigma):
    for name, image in sigma.items():
        if not image.classical:
            raise NonClassicalSubstitution(f"image of {name} is not classical: {print_formula(image)}")
    memo = {}

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Prop):
            out = sigma.get(g.name, g)
        elif isinstance(g, Bottom):
            out = g
        elif isinstance(g, (Or, And)):
            out = type(g)(go(g.left), go(g.right))
        elif isinstance(g, Inc):
            out = Inc(tuple(go(a) for a in g.lhs), tuple(go(b) for b in g.rhs))
        else:
            out = type(g)(go(g.sub))
        memo[g] = out
        return out

    return go(f)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(<=|<>|\[\]|[!&|(),])|([a-z][a-zA-Z0-9_]*))")
_KEYWORDS = {"bot", "top", "might", "smight"}


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = text[pos:].lstrip()[:1]
            raise FormulaSyntaxError(f"unexpected character {bad!r} at offset {pos}")
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.peek()
        if got != tok:
            where = "end of formula" if got is None else repr(got)
            raise FormulaSyntaxError(f"expected {tok!r} but found {where}")
        self.i += 1

    def parse(self):
        f = self.disjunction()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r} at offset {self.tokens[self.i][1]}")
        return f

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.inclusion()
        while self.peek() == "&":
            self.take()
            f = And(f, self.inclusion())
        return f

    def inclusion(self):
        terms = [self.unary()]
        while self.peek() == ",":
            self.take()
            terms.append(self.unary())
        if self.peek() != "<=":
            if len(terms) > 1:
                raise FormulaSyntaxError("a comma-separated list must be followed by '<='")
            return terms[0]
        self.take()
        rhs = [self.unary()]
        while self.peek() == ",":
            self.take()
            rhs.append(self.unary())
        return Inc(tuple(terms), tuple(rhs))

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Neg(self.unary())
        if tok == "<>":
            self.take()
            return Dia(self.unary())
        if tok == "[]":
            self.take()
            return Box(self.unary())
        if tok == "might":
            self.take()
            return Might(self.unary())
        if tok == "smight":
            self.take()
            return SMight(self.unary())
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok == "(":
            f = self.disjunction()
            self.expect(")")
            return f
        if tok == "bot":
            return BOT
        if tok == "top":
            return TOP
        if tok[0].isalpha() and tok not in _KEYWORDS:
            return Prop(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}")


def parse_formula(text, logic=Logic.MLInc):
    if isinstance(logic, str):
        logic = Logic.parse(logic)
    f = _Parser(text).parse()
    return check_logic(f, logic)


def parse_any(text):
    """Parse without restricting the connectives to one logic."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing

_OR, _AND, _INC, _UNARY, _ATOM = 1, 2, 3, 4, 5


def _prec(f):
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Inc):
        return _INC
    if isinstance(f, (Prop, Bottom)) or f == TOP:
        return _ATOM
    return _UNARY


_PREFIX = {Neg: "!", Dia: "<>", Box: "[]", Might: "might ", SMight: "smight "}


def _render(f, need):
    text = _bare(f)
    return f"({text})" if _prec(f) < need else text


def _bare(f):
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Bottom):
        return "bot"
    if f == TOP:
        return "top"
    if isinstance(f, (Or, And)):
        # walk the left spine iteratively so long chains do not recurse deeply
        op, level = (" | ", _OR) if isinstance(f, Or) else (" & ", _AND)
        rights = []
        node = f
        while type(node) is type(f):
            rights.append(node.right)
            node = node.left
        parts = [_render(node, level)]
        parts.extend(_render(r, level + 1) for r in reversed(rights))
        return op.join(parts)
    if isinstance(f, Inc):
        lhs = ", ".join(_render(a, _UNARY) for a in f.lhs)
        rhs = ", ".join(_render(b, _UNARY) for b in f.rhs)
        return f"{lhs} <= {rhs}"
    return _PREFIX[type(f)] + _render(f.sub, _UNARY)


def print_formula(f):
    return _bare(f)
