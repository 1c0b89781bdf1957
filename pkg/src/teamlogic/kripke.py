"""Finite Kripke models and teams.

Teams are exposed as frozensets of world ids.  Internally every model numbers
its worlds and represents a team as an int bitmask, which is what the
evaluators work with.
"""
import json

from .errors import DataError, UnknownWorld


def iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask):
    return bin(mask).count("1")


def submasks(mask):
    """All submasks of mask, largest first (mask itself first, 0 last)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class KripkeModel:
    """A finite model (W, R, V) over a fixed signature of proposition names."""

    def __init__(self, worlds, relation=(), valuation=None):
        worlds = tuple(worlds)
        if len(set(worlds)) != len(worlds):
            raise DataError("duplicate world ids")
        for w in worlds:
            if not isinstance(w, str):
                raise DataError(f"world id {w!r} is not a string")
        self.worlds = worlds
        self.index = {w: i for i, w in enumerate(worlds)}
        rel = set()
        for pair in relation:
            a, b = pair
            for w in (a, b):
                if w not in self.index:
                    raise UnknownWorld(f"relation mentions unknown world {w!r}")
            rel.add((a, b))
        self.relation = frozenset(rel)
        val = {}
        for p, ws in (valuation or {}).items():
            ws = frozenset(ws)
            for w in ws:
                if w not in self.index:
                    raise UnknownWorld(f"valuation of {p} mentions unknown world {w!r}")
            val[p] = ws
        self.valuation = val
        self.signature = tuple(sorted(val))
        n = len(worlds)
        self.n = n
        self.full = (1 << n) - 1
        self.succ = [0] * n
        self.pred = [0] * n
        for a, b in rel:
            i, j = self.index[a], self.index[b]
            self.succ[i] |= 1 << j
            self.pred[j] |= 1 << i
        self.val = {p: self.mask(ws) for p, ws in val.items()}
        self._image = {}
        self._preimage = {}
        # derived per-model data (bisimulation views, Hintikka builders)
        self.cache = {}

    def __repr__(self):
        return f"KripkeModel({len(self.worlds)} worlds, {len(self.relation)} edges, signature={self.signature})"

    # conversions between teams and masks
    def mask(self, team):
        m = 0
        index = self.index
        for w in team:
            i = index.get(w)
            if i is None:
                raise UnknownWorld(f"unknown world {w!r}")
            m |= 1 << i
        return m

    def team(self, mask):
        worlds = self.worlds
        return frozenset(worlds[i] for i in iter_bits(mask))

    def image_mask(self, mask):
        hit = self._image.get(mask)
        if hit is None:
            hit = 0
            succ = self.succ
            for i in iter_bits(mask):
                hit |= succ[i]
            self._image[mask] = hit
        return hit

    def preimage_mask(self, mask):
        hit = self._preimage.get(mask)
        if hit is None:
            hit = 0
            pred = self.pred
            for i in iter_bits(mask):
                hit |= pred[i]
            self._preimage[mask] = hit
        return hit

    def successors(self, w):
        return self.team(self.succ[self.index[w]])

    def truth(self, p, w):
        return w in self.valuation[p]

    def to_json(self):
        return {
            "worlds": list(self.worlds),
            "relation": [list(pair) for pair in sorted(self.relation)],
            "valuation": {p: sorted(self.valuation[p]) for p in self.signature},
        }


def image(m, t):
    return m.team(m.image_mask(m.mask(t)))


def preimage(m, t):
    return m.team(m.preimage_mask(m.mask(t)))


def is_successor_team_mask(m, t, s):
    return s & ~m.image_mask(t) == 0 and t & ~m.preimage_mask(s) == 0


def is_successor_team(m, t, s):
    return is_successor_team_mask(m, m.mask(t), m.mask(s))


def successor_masks(m, t):
    """Successor teams of the team mask t, unordered."""
    return [s for s in submasks(m.image_mask(t)) if t & ~m.preimage_mask(s) == 0]


def team_order_key(team):
    return (len(team), tuple(sorted(team)))


def enumerate_successor_teams(m, t):
    masks = successor_masks(m, m.mask(t))
    return sorted((m.team(s) for s in masks), key=team_order_key)


STAR = "star"


def disjoint_union(parts, signature=()):
    """Tagged disjoint union of (model, team) pairs.

    World w of part i becomes "w#i".  The empty union is the one-world model
    with no edges and every proposition false, paired with the empty team.
    """
    parts = list(parts)
    if not parts:
        return KripkeModel([STAR], [], {p: [] for p in signature}), frozenset()
    props = set(signature)
    for m, _ in parts:
        props.update(m.signature)
    worlds, relation = [], []
    valuation = {p: [] for p in sorted(props)}
    team = set()
    for i, (m, t) in enumerate(parts):
        tag = f"#{i}"
        worlds.extend(w + tag for w in m.worlds)
        relation.extend((a + tag, b + tag) for a, b in m.relation)
        for p, ws in m.valuation.items():
            valuation[p].extend(w + tag for w in ws)
        for w in t:
            if w not in m.index:
                raise UnknownWorld(f"team of part {i} mentions unknown world {w!r}")
            team.add(w + tag)
    return KripkeModel(worlds, relation, valuation), frozenset(team)


def model_from_json(data):
    if not isinstance(data, dict):
        raise DataError("model must be an object with fields worlds, relation, valuation")
    for field in ("worlds", "relation", "valuation"):
        if field not in data:
            raise DataError(f"model is missing field {field!r}")
    worlds = data["worlds"]
    if not isinstance(worlds, list):
        raise DataError("field 'worlds' must be a list")
    relation = data["relation"]
    if not isinstance(relation, list):
        raise DataError("field 'relation' must be a list of pairs")
    for pair in relation:
        if not isinstance(pair, list) or len(pair) != 2:
            raise DataError(f"field 'relation' has a malformed pair {pair!r}")
    valuation = data["valuation"]
    if not isinstance(valuation, dict):
        raise DataError("field 'valuation' must be an object")
    for p, ws in valuation.items():
        if not isinstance(ws, list):
            raise DataError(f"field 'valuation.{p}' must be a list")
    return KripkeModel(worlds, [tuple(pair) for pair in relation], valuation)


def load_model(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"model file is not valid JSON: {exc}") from None
    return model_from_json(data)


def parse_team(text):
    """Comma-separated world ids; the empty string is the empty team."""
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(w.strip() for w in text.split(","))
