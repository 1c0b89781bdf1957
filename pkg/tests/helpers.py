"""Shared test utilities: a seeded formula generator and small model helpers."""
import random
from pathlib import Path

from hypothesis import strategies as st

from teamlogic.kripke import KripkeModel, load_model
from teamlogic.syntax import BOT, TOP, And, Box, Dia, Inc, Logic, Might, Neg, Or, Prop, SMight

DATA = Path(__file__).parent / "data"
EXAMPLE_MODEL_PATH = DATA / "example_model.json"


def example_model():
    """Two worlds u, v; u sees u', v sees v' and w'; p holds only at v'."""
    return load_model(EXAMPLE_MODEL_PATH)


def three_world_model():
    """w1 and w2 are reflexive and both see w3; p holds only at w3."""
    return KripkeModel(
        ["w1", "w2", "w3"],
        [("w1", "w1"), ("w1", "w3"), ("w2", "w2"), ("w2", "w3")],
        {"p": ["w3"]},
    )


def all_teams(m):
    return [m.team(t) for t in range(m.full + 1)]


def random_classical(rng, props, depth, size):
    """A classical formula of modal depth <= depth with about `size` nodes."""
    if size <= 1:
        roll = rng.random()
        if roll < 0.8:
            return Prop(rng.choice(props))
        return BOT if roll < 0.9 else TOP
    kinds = ["neg", "or", "and"]
    if depth > 0:
        kinds += ["dia", "box"]
    kind = rng.choice(kinds)
    if kind == "neg":
        return Neg(random_classical(rng, props, depth, size - 1))
    if kind in ("dia", "box"):
        sub = random_classical(rng, props, depth - 1, size - 1)
        return Dia(sub) if kind == "dia" else Box(sub)
    split = rng.randint(1, size - 2) if size > 2 else 1
    left = random_classical(rng, props, depth, split)
    right = random_classical(rng, props, depth, max(1, size - 1 - split))
    return Or(left, right) if kind == "or" else And(left, right)


def random_formula(rng, props, depth, logic=Logic.MLInc, size=6):
    """A formula of the given logic with modal depth <= depth."""
    if logic is Logic.MLClassical:
        return random_classical(rng, props, depth, size)
    if size <= 1:
        return random_atom(rng, props, depth, logic)
    kinds = ["classical", "or", "and", "or", "and", "atom"]
    if depth > 0:
        kinds += ["dia", "box", "dia", "box"]
    if logic is not Logic.MLInc:
        kinds.append("might")
    kind = rng.choice(kinds)
    if kind == "classical":
        return random_classical(rng, props, depth, size)
    if kind == "atom":
        return random_atom(rng, props, depth, logic)
    if kind in ("dia", "box"):
        sub = random_formula(rng, props, depth - 1, logic, size - 1)
        return Dia(sub) if kind == "dia" else Box(sub)
    if kind == "might":
        sub = random_formula(rng, props, depth, logic, size - 1)
        return Might(sub) if logic is Logic.MLMight else SMight(sub)
    split = rng.randint(1, size - 2) if size > 2 else 1
    left = random_formula(rng, props, depth, logic, split)
    right = random_formula(rng, props, depth, logic, max(1, size - 1 - split))
    return Or(left, right) if kind == "or" else And(left, right)


def random_atom(rng, props, depth, logic):
    """The logic's characteristic atom over small classical terms."""
    if logic is Logic.MLInc:
        n = 1 if rng.random() < 0.7 else 2
        lhs = tuple(_term(rng, props, depth) for _ in range(n))
        rhs = tuple(_term(rng, props, depth) for _ in range(n))
        return Inc(lhs, rhs)
    sub = random_classical(rng, props, depth, rng.randint(1, 3))
    return Might(sub) if logic is Logic.MLMight else SMight(sub)


def _term(rng, props, depth):
    roll = rng.random()
    if roll < 0.2:
        return TOP
    if roll < 0.3:
        return BOT
    return random_classical(rng, props, depth, rng.randint(1, 3))


def corpus(n, seed, props, depth, logic=Logic.MLInc, max_size=7):
    """n distinct formulas, each of modal depth <= depth, from a fixed seed."""
    rng = random.Random(seed)
    seen = []
    keys = set()
    while len(seen) < n:
        f = random_formula(rng, props, depth, logic, rng.randint(1, max_size))
        if f not in keys:
            keys.add(f)
            seen.append(f)
    return seen


def random_model(rng, n, props):
    worlds = [f"w{i + 1}" for i in range(n)]
    relation = [(a, b) for a in worlds for b in worlds if rng.random() < 0.4]
    valuation = {p: [w for w in worlds if rng.random() < 0.5] for p in props}
    return KripkeModel(worlds, relation, valuation)


# ------------------------------------------------------------ hypothesis strategies

def classical_formulas(props, leaves=6):
    atoms = st.sampled_from([Prop(p) for p in props] + [BOT, TOP])
    return st.recursive(
        atoms,
        lambda c: st.one_of(c.map(Neg), c.map(Dia), c.map(Box), st.builds(Or, c, c), st.builds(And, c, c)),
        max_leaves=leaves,
    )


def _inclusion_atoms(alpha):
    def of_width(n):
        side = st.lists(alpha, min_size=n, max_size=n).map(tuple)
        return st.builds(Inc, side, side)

    return st.integers(1, 2).flatmap(of_width)


def formulas(props, logic=Logic.MLInc, leaves=6):
    """Formulas of the given logic over props."""
    alpha = classical_formulas(props, 3)
    if logic is Logic.MLInc:
        atom = _inclusion_atoms(alpha)
    else:
        atom = alpha.map(Might if logic is Logic.MLMight else SMight)
    op = {Logic.MLMight: Might, Logic.MLSMight: SMight}.get(logic)

    def extend(c):
        options = [c.map(Dia), c.map(Box), st.builds(Or, c, c), st.builds(And, c, c)]
        if op is not None:
            options.append(c.map(op))
        return st.one_of(*options)

    return st.recursive(st.one_of(classical_formulas(props, 3), atom), extend, max_leaves=leaves)


def any_formulas(props, leaves=6):
    logics = st.sampled_from([Logic.MLInc, Logic.MLMight, Logic.MLSMight])
    return logics.flatmap(lambda logic: formulas(props, logic, leaves))


@st.composite
def models(draw, props, max_worlds=3):
    """Small Kripke models over props."""
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{i + 1}" for i in range(n)]
    relation = [(a, b) for a in worlds for b in worlds if draw(st.booleans())]
    valuation = {p: [w for w in worlds if draw(st.booleans())] for p in props}
    return KripkeModel(worlds, relation, valuation)


def model_and_team(props, max_worlds=3):
    """A model with a team given as a bitmask."""
    return models(props, max_worlds).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m.full)))
