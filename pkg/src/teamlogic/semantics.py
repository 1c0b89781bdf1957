"""Team satisfaction for ML, ML(inclusion), ML(might) and ML(singular might).

EvalContext is the fast evaluator used everywhere.  Every formula of these
logics is union closed and has the empty team property, so each team T has a
largest satisfying subteam U(f, T), and T satisfies f exactly when U(f, T) = T.
EvalContext computes U connective by connective:

- classical formulas are flat, so U(a, T) = T ∩ ext(a);
- U(f | g, T) = U(f, T) ∪ U(g, T);
- conjunction, inclusion atoms, diamond and box shrink T to a greatest
  fixpoint (drop worlds that cannot be part of a satisfying subteam);
- U(might f, T) is T when U(f, T) is nonempty and ∅ otherwise;
- U(smight f, T) is T when some singleton of T satisfies f and ∅ otherwise.

NaiveEvaluator implements the satisfaction clauses literally (split
enumeration, successor-team enumeration) and serves as the reference oracle.
"""
import sys

from .errors import BoundError, NotClassical, SignatureError, UnknownWorld
from .kripke import iter_bits, popcount, submasks, successor_masks
from .syntax import And, Bottom, Box, Dia, Inc, Might, Neg, Or, Prop, SMight

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def check_signature(m, f):
    missing = f.props - m.val.keys()
    if missing:
        raise SignatureError(f"propositions {sorted(missing)} are not in the model signature {list(m.signature)}")


class EvalContext:
    """Memoized evaluator for one model; reuse it across formulas and teams."""

    def __init__(self, model):
        self.model = model
        self._ext = {}
        self._memo = {}
        self._checked = set()

    def _check(self, f):
        if f not in self._checked:
            check_signature(self.model, f)
            self._checked.add(f)

    # classical extension as a world mask
    def ext(self, a):
        hit = self._ext.get(a)
        if hit is not None:
            return hit
        m = self.model
        t = type(a)
        if t is Prop:
            out = m.val.get(a.name)
            if out is None:
                raise SignatureError(f"proposition {a.name!r} is not in the model signature")
        elif t is Bottom:
            out = 0
        elif t is Neg:
            out = m.full & ~self.ext(a.sub)
        elif t is Or:
            out = self.ext(a.left) | self.ext(a.right)
        elif t is And:
            out = self.ext(a.left) & self.ext(a.right)
        elif t is Dia:
            out = m.preimage_mask(self.ext(a.sub))
        elif t is Box:
            out = m.full & ~m.preimage_mask(m.full & ~self.ext(a.sub))
        else:
            raise NotClassical(f"{a} is not classical")
        self._ext[a] = out
        return out

    def U(self, f, t):
        """Largest subteam (mask) of t satisfying f."""
        if f.classical:
            return t & self.ext(f)
        table = self._memo.get(f)
        if table is None:
            table = self._memo[f] = {}
        else:
            hit = table.get(t)
            if hit is not None:
                return hit
        out = self._compute(f, t)
        table[t] = out
        return out

    def _compute(self, f, t):
        if t == 0:
            return 0
        m = self.model
        kind = type(f)
        if kind is Or:
            return self.U(f.left, t) | self.U(f.right, t)
        if kind is And:
            s = t
            while True:
                nxt = self.U(f.left, s) & self.U(f.right, s)
                if nxt == s:
                    return s
                s = nxt
        if kind is Dia:
            s = t
            while True:
                nxt = s & m.preimage_mask(self.U(f.sub, m.image_mask(s)))
                if nxt == s:
                    return s
                s = nxt
        if kind is Box:
            s = t
            while True:
                img = m.image_mask(s)
                bad = img & ~self.U(f.sub, img)
                nxt = s & ~m.preimage_mask(bad)
                if nxt == s:
                    return s
                s = nxt
        if kind is Inc:
            return self._inc(f, t)
        if kind is Might:
            return t if self.U(f.sub, t) else 0
        if kind is SMight:
            for i in iter_bits(t):
                w = 1 << i
                if self.U(f.sub, w) == w:
                    return t
            return 0
        raise TypeError(f"not a formula: {f!r}")

    def _inc(self, f, t):
        lhs = [self.ext(a) for a in f.lhs]
        rhs = [self.ext(b) for b in f.rhs]
        left_pattern = {}
        right_pattern = {}
        for i in iter_bits(t):
            bit = 1 << i
            left_pattern[i] = tuple(bool(e & bit) for e in lhs)
            right_pattern[i] = tuple(bool(e & bit) for e in rhs)
        live = set(left_pattern)
        while True:
            available = {right_pattern[i] for i in live}
            drop = {i for i in live if left_pattern[i] not in available}
            if not drop:
                break
            live -= drop
        out = 0
        for i in live:
            out |= 1 << i
        return out

    # public API on teams of world ids
    def eval_mask(self, f, t):
        self._check(f)
        return self.U(f, t) == t

    def eval(self, f, team):
        return self.eval_mask(f, self.model.mask(team))

    def max_sat_subteam(self, f, team):
        self._check(f)
        return self.model.team(self.U(f, self.model.mask(team)))


def eval_team(m, t, f):
    return EvalContext(m).eval(f, t)


def max_sat_subteam(m, t, f):
    return EvalContext(m).max_sat_subteam(f, t)


def eval_classical_world(m, w, a):
    """Pointwise Kripke satisfaction of a classical formula at world w."""
    if not a.classical:
        raise NotClassical(f"{a} is not classical")
    check_signature(m, a)
    if w not in m.index:
        raise UnknownWorld(f"unknown world {w!r}")
    return _holds(m, w, a)


def _holds(m, w, a):
    t = type(a)
    if t is Prop:
        return w in m.valuation[a.name]
    if t is Bottom:
        return False
    if t is Neg:
        return not _holds(m, w, a.sub)
    if t is Or:
        return _holds(m, w, a.left) or _holds(m, w, a.right)
    if t is And:
        return _holds(m, w, a.left) and _holds(m, w, a.right)
    succ = m.successors(w)
    if t is Dia:
        return any(_holds(m, v, a.sub) for v in succ)
    if t is Box:
        return all(_holds(m, v, a.sub) for v in succ)
    raise NotClassical(f"{a} is not classical")


class NaiveEvaluator:
    """Direct implementation of the satisfaction clauses (reference oracle).

    Exponential in the team size; teams larger than `cap` worlds are refused.
    """

    def __init__(self, model, cap=8):
        self.model = model
        self.cap = cap
        self._memo = {}
        self._point = {}
        self._checked = set()

    def holds_at(self, i, a):
        key = (i, a)
        hit = self._point.get(key)
        if hit is None:
            hit = _holds(self.model, self.model.worlds[i], a)
            self._point[key] = hit
        return hit

    def eval(self, f, team):
        return self.eval_mask(f, self.model.mask(team))

    def eval_mask(self, f, t):
        if f not in self._checked:
            check_signature(self.model, f)
            self._checked.add(f)
        if popcount(t) > self.cap:
            raise BoundError(f"naive evaluation is capped at teams of {self.cap} worlds")
        return self._sat(f, t)

    def _sat(self, f, t):
        table = self._memo.get(f)
        if table is None:
            table = self._memo[f] = {}
        hit = table.get(t)
        if hit is None:
            hit = table[t] = self._clause(f, t)
        return hit

    def _clause(self, f, t):
        m = self.model
        kind = type(f)
        if kind is Prop:
            return t & ~m.val[f.name] == 0
        if kind is Bottom:
            return t == 0
        if kind is Neg:
            return all(not self.holds_at(i, f.sub) for i in iter_bits(t))
        if kind is Or:
            for t1 in submasks(t):
                if not self._sat(f.left, t1):
                    continue
                rest = t & ~t1
                for extra in submasks(t1):
                    if self._sat(f.right, rest | extra):
                        return True
            return False
        if kind is And:
            return self._sat(f.left, t) and self._sat(f.right, t)
        if kind is Dia:
            return any(self._sat(f.sub, s) for s in successor_masks(m, t))
        if kind is Box:
            return self._sat(f.sub, m.image_mask(t))
        if kind is Inc:
            worlds = list(iter_bits(t))
            for i in worlds:
                want = [self.holds_at(i, a) for a in f.lhs]
                if not any(all(self.holds_at(j, b) == x for b, x in zip(f.rhs, want)) for j in worlds):
                    return False
            return True
        if kind is Might:
            return t == 0 or any(self._sat(f.sub, s) for s in submasks(t) if s)
        if kind is SMight:
            return t == 0 or any(self._sat(f.sub, 1 << i) for i in iter_bits(t))
        raise TypeError(f"not a formula: {f!r}")


def naive_eval_team(m, t, f):
    return NaiveEvaluator(m).eval(f, t)
