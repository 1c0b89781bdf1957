import itertools
import random

import pytest

from helpers import corpus
from teamlogic.decision import (
    BOUNDED,
    COUNTERMODEL,
    ENTAILS,
    EXHAUSTED,
    NORMAL_FORM,
    entails,
    entails_bounded,
    entails_nf,
    enumerate_models,
    equiv,
)
from teamlogic.semantics import eval_team
from teamlogic.syntax import Logic, parse_any, substitute_classical


def _iso_classes(n, nprops):
    """Count n-world models over nprops propositions up to isomorphism by brute force."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    classes = set()
    perms = list(itertools.permutations(range(n)))
    for rel_bits in range(2 ** len(pairs)):
        rel = [pq for i, pq in enumerate(pairs) if rel_bits >> i & 1]
        for val in itertools.product(range(2**nprops), repeat=n):
            forms = []
            for perm in perms:
                inverse = [perm.index(i) for i in range(n)]
                forms.append(
                    (tuple(sorted((perm[a], perm[b]) for a, b in rel)), tuple(val[inverse[i]] for i in range(n)))
                )
            classes.add(min(forms))
    return len(classes)


def _canonical(m):
    n = len(m.worlds)
    idx = m.index
    rel = [(idx[a], idx[b]) for a, b in m.relation]
    props = sorted(m.valuation)
    val = [sum(1 << j for j, p in enumerate(props) if w in m.valuation[p]) for w in m.worlds]
    forms = []
    for perm in itertools.permutations(range(n)):
        inverse = [perm.index(i) for i in range(n)]
        forms.append((tuple(sorted((perm[a], perm[b]) for a, b in rel)), tuple(val[inverse[i]] for i in range(n))))
    return min(forms)


@pytest.mark.parametrize("n,props", [(1, ("p",)), (2, ("p",)), (3, ("p",)), (1, ("p", "q")), (2, ("p", "q")), (3, ("p", "q"))])
def test_models_are_enumerated_up_to_isomorphism(n, props):
    found = list(enumerate_models(n, props))
    assert len(found) == _iso_classes(n, len(props))
    assert len({_canonical(m) for m in found}) == len(found)


def test_search_order_is_sparsest_first():
    found = list(enumerate_models(2, ("p",)))
    edges = [len(m.relation) for m in found]
    assert edges == sorted(edges)


def test_entails_nf_examples():
    assert entails_nf([parse_any("<>(top<=p)")], parse_any("[](top<=p)"), ("p",)).status == ENTAILS
    premise = parse_any("(p|!p) & top<=p")
    conclusion = parse_any("(p & top<=p)|(!p & top<=p)")
    verdict = entails_nf([premise], conclusion)
    assert verdict.status == COUNTERMODEL and verdict.method == NORMAL_FORM
    assert eval_team(verdict.model, verdict.team, premise)
    assert not eval_team(verdict.model, verdict.team, conclusion)
    f = parse_any("<>p | [](top <= p)")
    assert entails_nf([f], f).status == ENTAILS


def test_entails_bounded_examples():
    verdict = entails_bounded([parse_any("smight p"), parse_any("smight q")], parse_any("smight (smight p & smight q)"), 2)
    assert verdict.status == COUNTERMODEL and verdict.method == BOUNDED
    assert entails_bounded([parse_any("p")], parse_any("p | q"), 3).status == EXHAUSTED
    assert entails_bounded([parse_any("might(might p & might q)")], parse_any("might p & might q"), 3).status == EXHAUSTED


def test_substitution_failure_needs_a_large_team():
    premise = parse_any("(p|!p) & top<=p")
    conclusion = parse_any("(p & top<=p)|(!p & top<=p)")
    verdict = entails_bounded([premise], conclusion, 3)
    assert verdict.status == COUNTERMODEL
    assert len(verdict.team) >= 2
    assert len(verdict.model.worlds) <= 3


def test_equiv_examples():
    assert equiv(parse_any("bot <= p"), parse_any("top <= !p")).status == ENTAILS
    assert equiv(parse_any("top <= p"), parse_any("might p")).status == ENTAILS
    verdict = equiv(parse_any("p"), parse_any("q"))
    assert verdict.status == COUNTERMODEL
    assert eval_team(verdict.model, verdict.team, parse_any("p")) != eval_team(verdict.model, verdict.team, parse_any("q"))


def test_bound_exhausted_is_not_entails():
    verdict = entails_bounded([parse_any("p")], parse_any("p"), 1)
    assert verdict.status == EXHAUSTED
    assert not verdict.entails


def test_fallback_to_search_when_types_explode():
    f = parse_any("<><>p")
    verdict = entails([f], parse_any("<>top"))
    assert verdict.method == BOUNDED and verdict.status == EXHAUSTED
    verdict = entails([parse_any("<><>p")], parse_any("<><>q"))
    assert verdict.status == COUNTERMODEL


def test_invalid_bound():
    with pytest.raises(ValueError):
        entails_bounded([], parse_any("p"), 0)


def test_entailment_is_a_preorder():
    x = ("p",)
    pool = corpus(30, 31, x, 1, Logic.MLInc) + corpus(10, 32, x, 1, Logic.MLMight)
    rng = random.Random(3)
    for f in pool:
        assert entails_nf([f], f, x).status == ENTAILS
    for _ in range(150):
        f, g, h = (rng.choice(pool) for _ in range(3))
        if entails_nf([f], g, x).entails and entails_nf([g], h, x).entails:
            assert entails_nf([f], h, x).entails


def test_methods_agree_on_generated_pairs():
    x = ("p",)
    pool = corpus(25, 41, x, 1, Logic.MLSMight)
    rng = random.Random(41)
    for _ in range(40):
        f, g = rng.choice(pool), rng.choice(pool)
        exact = entails_nf([f], g, x).status
        search = entails_bounded([f], g, 3, x).status
        assert (exact == ENTAILS) == (search == EXHAUSTED)


def test_entailment_is_closed_under_classical_substitution():
    x = ("p",)
    shallow = corpus(20, 51, x, 1, Logic.MLInc)
    flat = corpus(20, 52, x, 0, Logic.MLInc)
    images_md0 = [parse_any(t) for t in ["!p", "p & p", "top", "bot", "p | !p"]]
    images_md1 = [parse_any(t) for t in ["<>p", "[]!p", "!<>p | p"]]
    rng = random.Random(52)
    checked = 0
    for pool, images in ((shallow, images_md0), (flat, images_md1)):
        for _ in range(120):
            f, g = rng.choice(pool), rng.choice(pool)
            if not entails_nf([f], g, x).entails:
                continue
            sigma = {"p": rng.choice(images)}
            assert entails_nf([substitute_classical(f, sigma)], substitute_classical(g, sigma), x).entails
            checked += 1
    assert checked > 20
