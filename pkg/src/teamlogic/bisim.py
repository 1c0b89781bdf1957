"""Bounded bisimulation of worlds and teams, Hintikka formulas, and the
characteristic formulas of teams."""
from dataclasses import dataclass

from .errors import SignatureError, UnknownWorld
from .kripke import KripkeModel, iter_bits
from .syntax import TOP, And, Box, Dia, Inc, Logic, Might, Neg, Prop, SMight, conjoin, disjoin


@dataclass(frozen=True, eq=False)
class PointedModel:
    model: KripkeModel
    world: str

    def __post_init__(self):
        if self.world not in self.model.index:
            raise UnknownWorld(f"unknown world {self.world!r}")


def prop_set(x):
    """Normalize a signature to a sorted duplicate-free tuple."""
    if isinstance(x, str):
        x = [p for p in x.split(",") if p]
    return tuple(sorted(set(x)))


def _view(m, x):
    """Per-world truth vectors over x and successor index lists."""
    key = ("view", x)
    hit = m.cache.get(key)
    if hit is None:
        missing = [p for p in x if p not in m.val]
        if missing:
            raise SignatureError(f"propositions {missing} are not in the model signature {list(m.signature)}")
        labels = [tuple(bool(m.val[p] >> i & 1) for p in x) for i in range(m.n)]
        succ = [tuple(iter_bits(s)) for s in m.succ]
        hit = m.cache[key] = (labels, succ)
    return hit


class Bisimulator:
    """Memoized k-bisimilarity between the worlds of two models."""

    def __init__(self, left, right, x):
        self.x = prop_set(x)
        self.left, self.right = left, right
        self.left_labels, self.left_succ = _view(left, self.x)
        self.right_labels, self.right_succ = _view(right, self.x)
        self.memo = {}

    def related(self, i, j, k):
        key = (i, j, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.left_labels[i] != self.right_labels[j]:
            out = False
        elif k == 0:
            out = True
        else:
            ls, rs = self.left_succ[i], self.right_succ[j]
            rel = self.related
            out = all(any(rel(a, b, k - 1) for b in rs) for a in ls) and all(
                any(rel(a, b, k - 1) for a in ls) for b in rs
            )
        self.memo[key] = out
        return out

    def worlds(self, w, v, k):
        return self.related(self.left.index[w], self.right.index[v], k)

    def teams(self, t, s, k):
        left = [self.left.index[w] for w in t]
        right = [self.right.index[v] for v in s]
        forth = all(any(self.related(i, j, k) for j in right) for i in left)
        back = all(any(self.related(i, j, k) for i in left) for j in right)
        return forth and back


def world_bisim_k(a, b, x, k):
    return Bisimulator(a.model, b.model, x).related(a.model.index[a.world], b.model.index[b.world], k)


def team_bisim_k(a, b, x, k):
    (m1, t1), (m2, t2) = a, b
    for m, t in (a, b):
        for w in t:
            if w not in m.index:
                raise UnknownWorld(f"unknown world {w!r}")
    return Bisimulator(m1, m2, x).teams(t1, t2, k)


def representatives(bisim, worlds, k):
    """Least world id of each k-type among `worlds` (ids of bisim.left), sorted."""
    reps = []
    index = bisim.left.index
    for w in sorted(worlds):
        i = index[w]
        if not any(bisim.related(i, index[r], k) for r in reps):
            reps.append(w)
    return reps


class HintikkaBuilder:
    """Builds and caches the Hintikka formulas of the worlds of one model."""

    def __init__(self, m, x):
        self.model = m
        self.x = prop_set(x)
        self.bisim = Bisimulator(m, m, self.x)
        self.memo = {}

    def formula(self, w, k):
        key = (w, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        m = self.model
        if k == 0:
            labels = self.bisim.left_labels[m.index[w]]
            out = conjoin(Prop(p) if v else Neg(Prop(p)) for p, v in zip(self.x, labels))
        else:
            reps = representatives(self.bisim, m.successors(w), k - 1)
            chis = [self.formula(v, k - 1) for v in reps]
            parts = [self.formula(w, k - 1)]
            parts.extend(Dia(c) for c in chis)
            parts.append(Box(disjoin(chis)))
            out = conjoin(parts)
        self.memo[key] = out
        return out


def hintikka_builder(m, x):
    x = prop_set(x)
    key = ("hintikka", x)
    hit = m.cache.get(key)
    if hit is None:
        hit = m.cache[key] = HintikkaBuilder(m, x)
    return hit


def hintikka_world(p, x, k):
    return hintikka_builder(p.model, x).formula(p.world, k)


def type_atom(chi, logic=Logic.MLInc):
    """The atom asserting that some world of the team has Hintikka type chi."""
    if logic is Logic.MLMight:
        return Might(chi)
    if logic is Logic.MLSMight:
        return SMight(chi)
    return Inc((TOP,), (chi,))


def characteristic(chis, logic=Logic.MLInc):
    """(zeta, eta, theta) for a list of Hintikka formulas."""
    atoms = [type_atom(c, logic) for c in chis]
    zeta = conjoin(atoms)
    eta = disjoin(chis)
    theta = conjoin([eta] + atoms) if atoms else And(eta, TOP)
    return zeta, eta, theta


def theta_team(mt, x, k, logic=Logic.MLInc):
    m, t = mt
    for w in t:
        if w not in m.index:
            raise UnknownWorld(f"unknown world {w!r}")
    builder = hintikka_builder(m, x)
    reps = representatives(builder.bisim, t, k)
    return characteristic([builder.formula(w, k) for w in reps], logic)


def classify_worlds(pointeds, x, k):
    """Partition pointed models into k-bisimulation classes.

    Returns a list with the class index of each pointed model; classes are
    numbered in order of first appearance.  Each new pointed model is compared
    against one representative per existing class.
    """
    x = prop_set(x)
    reps = []
    sims = {}
    out = []
    for pm in pointeds:
        found = None
        for c, rep in enumerate(reps):
            key = (id(pm.model), id(rep.model))
            sim = sims.get(key)
            if sim is None:
                sim = sims[key] = Bisimulator(pm.model, rep.model, x)
            if sim.related(pm.model.index[pm.world], rep.model.index[rep.world], k):
                found = c
                break
        if found is None:
            found = len(reps)
            reps.append(pm)
        out.append(found)
    return out

