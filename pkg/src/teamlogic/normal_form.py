"""World k-types, the canonical model realizing them, and normal forms.

A team is determined up to k-bisimulation by the set of world k-types it
realizes, so a formula of modal depth at most k is determined by the family of
type sets of the teams satisfying it.  That family is computed on the
canonical model and turned back into a disjunction of characteristic formulas.
"""
import itertools
from dataclasses import dataclass, field

from .bisim import characteristic, prop_set
from .errors import DepthError, SignatureError, TypeExplosion, UniverseMismatch
from .kripke import KripkeModel, iter_bits
from .semantics import EvalContext
from .syntax import BOT, Box, Dia, Logic, Neg, Prop, conjoin, disjoin

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class TypeId:
    """A world k-type: a valuation over the signature plus, for k > 0, the set
    of (k-1)-types of the successors."""

    depth: int
    valuation: tuple
    successors: frozenset = frozenset()
    key: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        succ_keys = tuple(sorted(s.key for s in self.successors))
        # truth-table order: true before false, then successor sets by size and content
        key = (tuple(not b for b in self.valuation), len(succ_keys), succ_keys)
        object.__setattr__(self, "key", key)

    def truncate(self):
        """The same world seen one level shallower."""
        if self.depth == 0:
            raise ValueError("a 0-type has no shallower type")
        if self.depth == 1:
            return TypeId(0, self.valuation)
        return TypeId(self.depth - 1, self.valuation, frozenset(s.truncate() for s in self.successors))


def count_types(nprops, k, cap=DEFAULT_CAP):
    """Number of world k-types, or None once it exceeds cap."""
    count = 2**nprops
    if count > cap:
        return None
    for _ in range(k):
        if nprops + count > cap.bit_length():
            return None
        count = 2**nprops * 2**count
        if count > cap:
            return None
    return count


def _explosion(nprops, k, what, cap):
    return TypeExplosion(
        f"{what} for |X|={nprops}, k={k} exceeds the cap of {cap} "
        f"(world types: t0 = 2^|X|, t(j+1) = 2^|X| * 2^t(j); team types: 2^t(k))"
    )


@dataclass(eq=False)
class CanonicalModel:
    props: tuple
    depth: int
    model: KripkeModel
    types: list  # types[j] lists the depth-j TypeIds in canonical order
    world_of: dict  # TypeId -> world id

    @property
    def top_types(self):
        return self.types[self.depth]

    def team_of(self, type_set):
        return frozenset(self.world_of[t] for t in type_set)


_canonical_cache = {}


def enumerate_world_types(x, k, cap=DEFAULT_CAP):
    x = prop_set(x)
    if count_types(len(x), k, cap) is None:
        raise _explosion(len(x), k, "the number of world types", cap)
    key = (x, k)
    hit = _canonical_cache.get(key)
    if hit is not None:
        return hit.top_types, hit
    valuations = list(itertools.product((True, False), repeat=len(x)))
    levels = [[TypeId(0, v) for v in valuations]]
    for j in range(1, k + 1):
        prev = levels[-1]
        subsets = []
        for size in range(len(prev) + 1):
            subsets.extend(frozenset(c) for c in itertools.combinations(prev, size))
        level = [TypeId(j, v, s) for v in valuations for s in subsets]
        level.sort(key=lambda t: t.key)
        levels.append(level)
    worlds, relation, world_of = [], [], {}
    valuation = {p: [] for p in x}
    for j, level in enumerate(levels):
        for i, t in enumerate(level):
            w = f"d{j}_{i}"
            worlds.append(w)
            world_of[(j, t)] = w
            for p, b in zip(x, t.valuation):
                if b:
                    valuation[p].append(w)
            for s in t.successors:
                relation.append((w, world_of[(j - 1, s)]))
    model = KripkeModel(worlds, relation, valuation)
    top = {t: world_of[(k, t)] for t in levels[k]}
    canon = CanonicalModel(x, k, model, levels, top)
    _canonical_cache[key] = canon
    return canon.top_types, canon


def type_of_world(m, w, x, k):
    """The k-type realized by world w of model m."""
    x = prop_set(x)
    memo = {}

    def go(i, j):
        hit = memo.get((i, j))
        if hit is None:
            val = tuple(bool(m.val[p] >> i & 1) for p in x)
            if j == 0:
                hit = TypeId(0, val)
            else:
                hit = TypeId(j, val, frozenset(go(v, j - 1) for v in iter_bits(m.succ[i])))
            memo[(i, j)] = hit
        return hit

    missing = [p for p in x if p not in m.val]
    if missing:
        raise SignatureError(f"propositions {missing} are not in the model signature")
    return go(m.index[w], k)


def type_set_of_team(m, t, x, k):
    return frozenset(type_of_world(m, w, x, k) for w in t)


_hintikka_cache = {}


def hintikka_of_type(t, x):
    """Hintikka formula of a type; successors are listed in canonical order."""
    key = (t, x)
    hit = _hintikka_cache.get(key)
    if hit is not None:
        return hit
    if t.depth == 0:
        out = conjoin(Prop(p) if b else Neg(Prop(p)) for p, b in zip(x, t.valuation))
    else:
        chis = [hintikka_of_type(s, x) for s in sorted(t.successors, key=lambda s: s.key)]
        parts = [hintikka_of_type(t.truncate(), x)]
        parts.extend(Dia(c) for c in chis)
        parts.append(Box(disjoin(chis)))
        out = conjoin(parts)
    _hintikka_cache[key] = out
    return out


@dataclass(frozen=True)
class TeamTypeSet:
    """A family of type sets over the universe of (props, depth) types.

    Members are stored as bitmasks over `universe` (canonical type order).
    """

    props: tuple
    depth: int
    universe: tuple
    masks: frozenset

    @property
    def members(self):
        return frozenset(frozenset(self.universe[i] for i in iter_bits(s)) for s in self.masks)

    def sorted_masks(self):
        return sorted(self.masks, key=lambda s: (bin(s).count("1"), list(iter_bits(s))))

    def type_sets(self):
        """Members as lists of TypeIds, in canonical order."""
        return [[self.universe[i] for i in iter_bits(s)] for s in self.sorted_masks()]

    def contains(self, type_set):
        index = {t: i for i, t in enumerate(self.universe)}
        mask = 0
        for t in type_set:
            mask |= 1 << index[t]
        return mask in self.masks


def _check_depth(f, x, k):
    missing = sorted(f.props - set(x))
    if missing:
        raise SignatureError(f"propositions {missing} are outside the signature {list(x)}")
    if k < f.depth:
        raise DepthError(f"depth {k} is below the modal depth {f.depth} of the formula")


def property_of(f, x, k, cap=DEFAULT_CAP):
    x = prop_set(x)
    _check_depth(f, x, k)
    types, canon = enumerate_world_types(x, k, cap)
    n = len(types)
    if 2**n > cap:
        raise _explosion(len(x), k, f"the number of team types (2^{n})", cap)
    m = canon.model
    bits = [1 << m.index[canon.world_of[t]] for t in types]
    ctx = canon_context(canon)
    masks = set()
    for s in range(2**n):
        team = 0
        for i in iter_bits(s):
            team |= bits[i]
        if ctx.eval_mask(f, team):
            masks.add(s)
    return TeamTypeSet(x, k, tuple(types), frozenset(masks))


_contexts = {}


def canon_context(canon):
    """A shared evaluation context on a canonical model."""
    key = (canon.props, canon.depth)
    ctx = _contexts.get(key)
    if ctx is None:
        ctx = _contexts[key] = EvalContext(canon.model)
    return ctx


_theta_cache = {}


def _theta_of_type_set(type_set, x, logic):
    # shared objects keep evaluation memo lookups cheap across normal forms
    key = (tuple(type_set), x, logic)
    out = _theta_cache.get(key)
    if out is None:
        chis = [hintikka_of_type(t, x) for t in type_set]
        out = _theta_cache[key] = characteristic(chis, logic)[2]
    return out


def normal_form_of_property(prop, logic=Logic.MLInc):
    thetas = [_theta_of_type_set(s, prop.props, logic) for s in prop.type_sets() if s]
    return disjoin(thetas, BOT)


def normal_form(f, x, k, logic=Logic.MLInc, cap=DEFAULT_CAP):
    if isinstance(logic, str):
        logic = Logic.parse(logic)
    if logic is Logic.MLClassical:
        raise ValueError("normal forms are built for mlinc, mlmight or mlsmight")
    return normal_form_of_property(property_of(f, x, k, cap), logic)


def nf_entails(c, d):
    if (c.props, c.depth) != (d.props, d.depth):
        raise UniverseMismatch(
            f"type sets over X={list(c.props)}, k={c.depth} and X={list(d.props)}, k={d.depth}"
        )
    return failing_member(c, d) is None


def failing_member(c, d):
    """A member of c that is not a union of members of d, or None."""
    for s in c.sorted_masks():
        covered = 0
        for e in d.masks:
            if e & ~s == 0:
                covered |= e
        if covered != s:
            return s
    return None
