"""Entailment and equivalence: exact via normal forms, or refutation by
bounded countermodel search."""
import itertools
from dataclasses import dataclass

from .errors import TypeExplosion
from .kripke import KripkeModel, popcount
from .normal_form import DEFAULT_CAP, enumerate_world_types, failing_member, property_of
from .semantics import EvalContext, eval_team
from .syntax import conjoin, print_formula

ENTAILS = "Entails"
COUNTERMODEL = "CounterModel"
EXHAUSTED = "BoundExhausted"

NORMAL_FORM = "NormalForm"
BOUNDED = "BoundedSearch"


@dataclass
class EntailmentVerdict:
    status: str
    method: str
    model: KripkeModel = None
    team: frozenset = None
    note: str = ""

    @property
    def entails(self):
        return self.status == ENTAILS

    def to_json(self):
        out = {"status": self.status, "method": self.method}
        if self.model is not None:
            out["model"] = self.model.to_json()
            out["team"] = sorted(self.team)
        if self.note:
            out["note"] = self.note
        return out


def _signature(formulas):
    props = set()
    for f in formulas:
        props |= f.props
    return tuple(sorted(props))


def _replay(premises, conclusion, model, team):
    """Confirm a countermodel with a fresh evaluation."""
    ok = all(eval_team(model, team, f) for f in premises) and not eval_team(model, team, conclusion)
    if not ok:
        raise AssertionError("countermodel failed to replay")


# ---------------------------------------------------------------- models

def world_names(n):
    return [f"w{i + 1}" for i in range(n)]


def _block_perms(sig):
    blocks = [list(g) for _, g in itertools.groupby(range(len(sig)), key=lambda i: sig[i])]
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [0] * len(sig)
        for block, image in zip(blocks, choice):
            for a, b in zip(block, image):
                perm[a] = b
        yield perm


def _generate(n, props):
    names = world_names(n)
    pairs = [(a, b) for a in range(n) for b in range(n)]
    valuations = list(itertools.product(range(2 ** len(props)), repeat=n))
    seen = set()
    for edges in range(n * n + 1):
        for rel in itertools.combinations(pairs, edges):
            outdeg = [0] * n
            for a, _ in rel:
                outdeg[a] += 1
            for val in valuations:
                sig = [(val[i], outdeg[i]) for i in range(n)]
                if any(sig[i] > sig[i + 1] for i in range(n - 1)):
                    continue
                canon = min(tuple(sorted((perm[a], perm[b]) for a, b in rel)) for perm in _block_perms(sig))
                key = (tuple(sig), canon)
                if key in seen:
                    continue
                seen.add(key)
                valuation = {p: [names[i] for i in range(n) if val[i] >> j & 1] for j, p in enumerate(props)}
                yield KripkeModel(names, [(names[a], names[b]) for a, b in rel], valuation)


_model_cache = {}


def enumerate_models(n, props):
    """All models with n worlds over props up to isomorphism, sparsest first.

    Worlds are sorted by (valuation, out-degree) and a model is kept only if
    its relation is the least among the relabellings that preserve that order.
    """
    props = tuple(sorted(props))
    key = (n, props)
    hit = _model_cache.get(key)
    if hit is not None:
        yield from hit
        return
    found = []
    for m in _generate(n, props):
        found.append(m)
        yield m
    _model_cache[key] = found


def all_models(max_worlds, props):
    for n in range(1, max_worlds + 1):
        yield from enumerate_models(n, props)


# ---------------------------------------------------------------- deciders

def entails_bounded(premises, conclusion, max_worlds, props=None):
    premises = list(premises)
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    props = _signature(premises + [conclusion]) if props is None else tuple(sorted(props))
    hyp = conjoin(premises)
    for m in all_models(max_worlds, props):
        ctx = EvalContext(m)
        teams = sorted(range(m.full + 1), key=lambda t: (-popcount(t), t))
        for t in teams:
            if ctx.eval_mask(hyp, t) and not ctx.eval_mask(conclusion, t):
                team = m.team(t)
                _replay(premises, conclusion, m, team)
                return EntailmentVerdict(COUNTERMODEL, BOUNDED, m, team)
    return EntailmentVerdict(EXHAUSTED, BOUNDED, note=f"no countermodel with at most {max_worlds} worlds")


def entails_nf(premises, conclusion, x=None, cap=DEFAULT_CAP):
    premises = list(premises)
    x = _signature(premises + [conclusion]) if x is None else tuple(sorted(x))
    k = max(f.depth for f in premises + [conclusion])
    hyp = conjoin(premises)
    c = property_of(hyp, x, k, cap)
    d = property_of(conclusion, x, k, cap)
    bad = failing_member(c, d)
    if bad is None:
        return EntailmentVerdict(ENTAILS, NORMAL_FORM)
    _, canon = enumerate_world_types(x, k, cap)
    types = [c.universe[i] for i in range(len(c.universe)) if bad >> i & 1]
    team = canon.team_of(types)
    _replay(premises, conclusion, canon.model, team)
    return EntailmentVerdict(COUNTERMODEL, NORMAL_FORM, canon.model, team)


def entails(premises, conclusion, x=None, cap=DEFAULT_CAP, fallback_bound=3):
    """entails_nf, falling back to bounded search when the types explode."""
    try:
        return entails_nf(premises, conclusion, x, cap)
    except TypeExplosion:
        if fallback_bound is None:
            raise
        return entails_bounded(premises, conclusion, fallback_bound, x)


def equiv(f, g, x=None, cap=DEFAULT_CAP, fallback_bound=3):
    if x is None:
        x = _signature([f, g])
    forward = entails([f], g, x, cap, fallback_bound)
    if forward.status != ENTAILS:
        forward.note = f"{print_formula(f)} does not entail {print_formula(g)}"
        return forward
    backward = entails([g], f, x, cap, fallback_bound)
    if backward.status != ENTAILS:
        backward.note = f"{print_formula(g)} does not entail {print_formula(f)}"
    return backward
