"""First-order inclusion logic over finite structures, and the standard
translation of modal inclusion logic into it.

Formulas are in negation normal form: negation occurs only on identity and
relation atoms.  Teams are sets of assignments over a common tuple of
variables, stored as rows of values.

`fo_eval` works with maximal satisfying subteams, exactly as the modal
evaluator does: every formula is union closed and satisfied by the empty team,
so each team X has a largest subteam U(f, X) satisfying f, and X satisfies f
iff U(f, X) = X.  For the lax existential, X satisfies Ex.f iff every
assignment of X has some extension inside U(f, X[W/x]); the witness function
picks all such extensions.  `fo_eval_naive` follows the clauses literally
(team splits, choice functions) and is kept as the reference.
"""
import itertools
from dataclasses import dataclass

from .errors import BoundError, FreeVariableError, UnsupportedConnective
from .kripke import iter_bits
from .syntax import (
    Bottom,
    Box,
    Dia,
    Inc,
    Might,
    Neg,
    Prop,
    SMight,
    pattern_conj,
)
from .syntax import And as MAnd
from .syntax import Or as MOr


class FOFormula:
    pass


@dataclass(frozen=True)
class Eq(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class NegEq(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class Rel(FOFormula):
    name: str
    terms: tuple


@dataclass(frozen=True)
class NegRel(FOFormula):
    name: str
    terms: tuple


@dataclass(frozen=True)
class FOInc(FOFormula):
    xvars: tuple
    yvars: tuple

    def __post_init__(self):
        if len(self.xvars) != len(self.yvars) or not self.xvars:
            raise ValueError("inclusion atom sides must be nonempty and of equal length")


@dataclass(frozen=True)
class Or(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class And(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Exists(FOFormula):
    var: str
    sub: FOFormula


@dataclass(frozen=True)
class Forall(FOFormula):
    var: str
    sub: FOFormula


@dataclass(frozen=True)
class FOBot(FOFormula):
    """Falsum; printed as Forall(z, NotEq(z,z))."""


@dataclass(frozen=True)
class FOTop(FOFormula):
    """Verum; printed as Forall(z, Eq(z,z))."""


BOTTOM = FOBot()
TOP = FOTop()


def free_variables(f):
    if isinstance(f, (Eq, NegEq)):
        return {f.left, f.right}
    if isinstance(f, (Rel, NegRel)):
        return set(f.terms)
    if isinstance(f, FOInc):
        return set(f.xvars) | set(f.yvars)
    if isinstance(f, (Or, And)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.sub) - {f.var}
    return set()


# ---------------------------------------------------------------- printing

def print_fo(f):
    if isinstance(f, Eq):
        return f"Eq({f.left},{f.right})"
    if isinstance(f, NegEq):
        return f"NotEq({f.left},{f.right})"
    if isinstance(f, Rel):
        return f"{f.name}({','.join(f.terms)})"
    if isinstance(f, NegRel):
        return f"Not({f.name}({','.join(f.terms)}))"
    if isinstance(f, FOInc):
        return f"Inc([{','.join(f.xvars)}], [{','.join(f.yvars)}])"
    if isinstance(f, Or):
        return f"Or({print_fo(f.left)}, {print_fo(f.right)})"
    if isinstance(f, And):
        return f"And({print_fo(f.left)}, {print_fo(f.right)})"
    if isinstance(f, Exists):
        return f"Exists({f.var}, {print_fo(f.sub)})"
    if isinstance(f, Forall):
        return f"Forall({f.var}, {print_fo(f.sub)})"
    if isinstance(f, FOBot):
        return "Forall(z, NotEq(z,z))"
    if isinstance(f, FOTop):
        return "Forall(z, Eq(z,z))"
    raise TypeError(f"not a first-order formula: {f!r}")


# ---------------------------------------------------------------- structures and teams

def predicate_name(prop):
    return prop[:1].upper() + prop[1:]


ACCESS = "R"


@dataclass(frozen=True)
class FOStructure:
    domain: tuple
    relations: dict  # name -> frozenset of tuples

    @classmethod
    def from_kripke(cls, m):
        rels = {ACCESS: frozenset(m.relation)}
        for p, ws in m.valuation.items():
            rels[predicate_name(p)] = frozenset((w,) for w in ws)
        return cls(tuple(m.worlds), rels)

    def holds(self, name, values):
        return tuple(values) in self.relations.get(name, ())


@dataclass(frozen=True)
class FOTeam:
    vars: tuple
    rows: frozenset

    def assignments(self):
        return [dict(zip(self.vars, r)) for r in sorted(self.rows)]


def lift_team(t, var):
    return FOTeam((var,), frozenset((w,) for w in t))


def _extend(vars_, x):
    """Variables after binding x, and a function extending a row by a value."""
    if x in vars_:
        i = vars_.index(x)
        return vars_, lambda row, a: row[:i] + (a,) + row[i + 1 :]
    return vars_ + (x,), lambda row, a: row + (a,)


def _literal(structure, f, pos):
    if isinstance(f, Eq):
        return lambda row: row[pos[f.left]] == row[pos[f.right]]
    if isinstance(f, NegEq):
        return lambda row: row[pos[f.left]] != row[pos[f.right]]
    idx = [pos[t] for t in f.terms]
    table = structure.relations.get(f.name, frozenset())
    if isinstance(f, Rel):
        return lambda row: tuple(row[i] for i in idx) in table
    return lambda row: tuple(row[i] for i in idx) not in table


# ---------------------------------------------------------------- evaluation

class FOEvaluator:
    """Maximal satisfying subteams on one structure, memoized per formula node."""

    def __init__(self, structure):
        self.structure = structure
        self.memo = {}
        self.keep = []  # formulas whose ids key the memo

    def U(self, f, vars_, rows):
        key = (id(f), vars_, rows)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._compute(f, vars_, rows)
            self.memo[key] = hit
            self.keep.append(f)
        return hit

    def _compute(self, f, vars_, rows):
        if not rows or isinstance(f, FOTop):
            return rows
        if isinstance(f, FOBot):
            return frozenset()
        pos = {v: i for i, v in enumerate(vars_)}
        if isinstance(f, (Eq, NegEq, Rel, NegRel)):
            test = _literal(self.structure, f, pos)
            return frozenset(r for r in rows if test(r))
        if isinstance(f, FOInc):
            xi = [pos[v] for v in f.xvars]
            yi = [pos[v] for v in f.yvars]
            cur = rows
            while True:
                targets = {tuple(r[i] for i in yi) for r in cur}
                nxt = frozenset(r for r in cur if tuple(r[i] for i in xi) in targets)
                if nxt == cur:
                    return cur
                cur = nxt
        if isinstance(f, Or):
            return self.U(f.left, vars_, rows) | self.U(f.right, vars_, rows)
        if isinstance(f, And):
            cur = rows
            while True:
                nxt = self.U(f.left, vars_, self.U(f.right, vars_, cur))
                if nxt == cur:
                    return cur
                cur = nxt
        if isinstance(f, (Exists, Forall)):
            new_vars, ext = _extend(vars_, f.var)
            domain = self.structure.domain
            exts = {r: [ext(r, a) for a in domain] for r in rows}
            cur = rows
            while True:
                expanded = frozenset(e for r in cur for e in exts[r])
                good = self.U(f.sub, new_vars, expanded)
                if isinstance(f, Exists):
                    nxt = frozenset(r for r in cur if any(e in good for e in exts[r]))
                else:
                    nxt = frozenset(r for r in cur if all(e in good for e in exts[r]))
                if nxt == cur:
                    return cur
                cur = nxt
        raise TypeError(f"not a first-order formula: {f!r}")

    def eval(self, team, f):
        return self.U(f, team.vars, team.rows) == team.rows


def _check_free(team, f):
    missing = free_variables(f) - set(team.vars)
    if missing:
        raise FreeVariableError(f"free variables {sorted(missing)} are not in the team domain {list(team.vars)}")


def fo_eval(s, t, f):
    _check_free(t, f)
    return FOEvaluator(s).eval(t, f)


NAIVE_DOMAIN_CAP = 5
NAIVE_TEAM_CAP = 5
# quantifiers grow teams; splits of larger intermediate teams are not attempted
NAIVE_INNER_CAP = 10


def fo_eval_naive(s, t, f):
    """The satisfaction clauses taken literally; every team met must stay within the caps."""
    _check_free(t, f)
    if len(s.domain) > NAIVE_DOMAIN_CAP:
        raise BoundError(f"domain of size {len(s.domain)} exceeds {NAIVE_DOMAIN_CAP}")
    if len(t.rows) > NAIVE_TEAM_CAP:
        raise BoundError(f"team of size {len(t.rows)} exceeds {NAIVE_TEAM_CAP}")
    return _naive(s, f, t.vars, list(t.rows))


def _naive(s, f, vars_, rows):
    if len(rows) > NAIVE_INNER_CAP:
        raise BoundError(f"intermediate team of size {len(rows)} exceeds {NAIVE_INNER_CAP}")
    if not rows or isinstance(f, FOTop):
        return True
    if isinstance(f, FOBot):
        return False
    pos = {v: i for i, v in enumerate(vars_)}
    if isinstance(f, (Eq, NegEq, Rel, NegRel)):
        test = _literal(s, f, pos)
        return all(test(r) for r in rows)
    if isinstance(f, FOInc):
        return all(
            any(tuple(r[pos[v]] for v in f.xvars) == tuple(r2[pos[v]] for v in f.yvars) for r2 in rows)
            for r in rows
        )
    if isinstance(f, And):
        return _naive(s, f.left, vars_, rows) and _naive(s, f.right, vars_, rows)
    if isinstance(f, Or):
        # every cover Y1 u Y2 = Y: each row goes left, right or both
        for sides in itertools.product((1, 2, 3), repeat=len(rows)):
            left = [r for r, k in zip(rows, sides) if k & 1]
            right = [r for r, k in zip(rows, sides) if k & 2]
            if _naive(s, f.left, vars_, left) and _naive(s, f.right, vars_, right):
                return True
        return False
    new_vars, ext = _extend(vars_, f.var)
    if isinstance(f, Forall):
        return _naive(s, f.sub, new_vars, sorted({ext(r, a) for r in rows for a in s.domain}))
    if isinstance(f, Exists):
        n = len(s.domain)
        choices = [[s.domain[i] for i in iter_bits(m)] for m in range(1, 2**n)]
        for pick in itertools.product(choices, repeat=len(rows)):
            team = sorted({ext(r, a) for r, values in zip(rows, pick) for a in values})
            if _naive(s, f.sub, new_vars, team):
                return True
        return False
    raise TypeError(f"not a first-order formula: {f!r}")


# ---------------------------------------------------------------- translation

class _Fresh:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = itertools.count(1)

    def __call__(self):
        while True:
            name = f"y{next(self.counter)}"
            if name not in self.avoid:
                return name


def st_translate(f, var="x"):
    """The standard translation at variable `var`; classical parts go through
    negation normal form so that negation lands on atoms."""
    fresh = _Fresh([var])
    return _st(f, var, True, fresh)


def _st(f, x, positive, fresh):
    if isinstance(f, (Might, SMight)):
        raise UnsupportedConnective("might operators have no first-order inclusion translation")
    if isinstance(f, Prop):
        atom = (predicate_name(f.name), (x,))
        return Rel(*atom) if positive else NegRel(*atom)
    if isinstance(f, Bottom):
        return BOTTOM if positive else TOP
    if isinstance(f, Neg):
        return _st(f.sub, x, not positive, fresh)
    if isinstance(f, (MOr, MAnd)):
        left = _st(f.left, x, positive, fresh)
        right = _st(f.right, x, positive, fresh)
        joins = isinstance(f, MOr) == positive
        return Or(left, right) if joins else And(left, right)
    if isinstance(f, (Dia, Box)):
        y = fresh()
        edge = Rel(ACCESS, (x, y))
        body = _st(f.sub, y, positive, fresh)
        if isinstance(f, Dia) == positive:
            return Exists(y, And(edge, body))
        return Forall(y, Or(NegRel(ACCESS, (x, y)), And(edge, body)))
    if isinstance(f, Inc):
        if not positive:
            raise UnsupportedConnective("an inclusion atom cannot be negated")
        out = None
        for signs in itertools.product((True, False), repeat=len(f.lhs)):
            no_pattern = _st(pattern_conj(f.lhs, signs), x, False, fresh)
            y = fresh()
            witness = Exists(y, And(FOInc((y,), (x,)), _st(pattern_conj(f.rhs, signs), y, True, fresh)))
            part = Or(no_pattern, witness)
            out = part if out is None else And(out, part)
        return out
    raise TypeError(f"not a modal formula: {f!r}")
