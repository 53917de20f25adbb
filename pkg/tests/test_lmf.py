import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heartlab.errors import DomainError
from heartlab.families import P0, P0mu, P1, P2
from heartlab.lmf import (
    HEAD, LC, SADDLE, SC, SINK, SOURCE, SS, TAIL, US, VLC, Distinct, LmfGraph, REGIMES, Regime,
    WeaklyEquivalent, classify_pair, dumps, isotopic, loads, mirror, relabel, sc_edges,
    sparkling_sc_count, surgery, template, validate,
)


def lc_loop():
    return LmfGraph({"c": VLC}, {"l": ("c", "c", LC)}, {"c": (("l", TAIL), ("l", HEAD))})


def test_lc_self_loop_is_valid():
    assert validate(lc_loop()) == []


def test_lc_at_saddle_is_rejected():
    g = LmfGraph({"c": VLC, "s": SADDLE}, {"l": ("c", "s", LC)},
                 {"c": (("l", TAIL),), "s": (("l", HEAD),)})
    assert any("LC endpoint not VLC" in p for p in validate(g))


def test_bad_rotation_and_labels():
    g = LmfGraph({"c": VLC}, {"l": ("c", "c", LC)}, {"c": (("l", TAIL),)})
    assert any("rotation" in p for p in validate(g))
    assert validate(LmfGraph({"c": "blob"}, {}, {"c": ()}))


def test_euler_check_catches_a_non_planar_rotation():
    # swapping the two outgoing separatrices at E breaks the alternation or the sphere embedding
    g = template(Regime.PosEpsGeneric)
    rot = dict(g.rotation)
    r = list(g.rotation["E"])
    r[0], r[2] = r[2], r[0]
    rot["E"] = tuple(r)
    problems = validate(LmfGraph(g.vertices, g.edges, rot, g.nesting))
    assert problems


@pytest.mark.parametrize("regime", REGIMES)
def test_templates_validate(regime):
    assert validate(template(regime)) == []


def test_template_counts():
    neg = template("NegEps")
    assert neg.count(LC) == 2 and neg.count(VLC) == 2
    gen = template("PosEpsGeneric")
    assert gen.count(LC) == 0 and sparkling_sc_count(gen) == 0
    ei = template("PosEpsEI")
    sparkling = [e for e in sc_edges(ei) if e not in ("hLM", "hML")]
    assert len(sparkling) == 1
    assert ei.edges[sparkling[0]][:2] == ("E", "I")
    for tag, ends in (("PosEpsLE", ("E", "L")), ("PosEpsLI", ("L", "I"))):
        g = template(tag)
        assert sparkling_sc_count(g) == 1
        assert [g.edges[e][:2] for e in sc_edges(g) if e not in ("hLM", "hML")] == [ends]


def test_unknown_regime():
    with pytest.raises(DomainError):
        template("PosEpsXY")


@pytest.mark.parametrize("a, b", list(itertools.combinations(REGIMES, 2)))
def test_templates_pairwise_distinct(a, b):
    assert isotopic(template(a), template(b)) is None


@pytest.mark.parametrize("regime", REGIMES)
def test_templates_are_chiral(regime):
    g = template(regime)
    assert isotopic(g, g) is not None
    assert isotopic(g, mirror(g)) is None


@pytest.mark.parametrize("regime", [r for r in REGIMES if r != Regime.NegEps])
def test_shared_sink_and_source(regime):
    g = template(regime)
    assert g.edges["uI1"][:2] == ("I", "a") and g.edges["uI2"][:2] == ("I", "a")
    assert g.edges["sE1"][:2] == ("r", "E") and g.edges["sE2"][:2] == ("r", "E")
    assert g.vertices["a"] == SINK and g.vertices["r"] == SOURCE


@pytest.mark.parametrize("tag", ["LE", "LI", "EI"])
def test_surgery_matches_template(tag):
    g = surgery(template("PosEpsGeneric"), tag)
    assert validate(g) == []
    assert isotopic(g, template(f"PosEps{tag}")) is not None
    shuffled = relabel(template("PosEpsGeneric"), random.Random(5))
    assert isotopic(surgery(shuffled, tag), template(f"PosEps{tag}")) is not None


def test_surgery_errors():
    with pytest.raises(DomainError, match="sparkling"):
        surgery(surgery(template("PosEpsGeneric"), "LE"), "EI")
    with pytest.raises(DomainError):
        surgery(template("PosEpsGeneric"), "LL")
    with pytest.raises(DomainError):
        surgery(template("NegEps"), "LE")


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(REGIMES), st.integers(0, 10 ** 6))
def test_relabel_invariance(regime, seed):
    g = template(regime)
    h = relabel(g, random.Random(seed))
    assert validate(h) == []
    iso = isotopic(g, h)
    assert iso is not None
    assert all(g.vertices[v] == h.vertices[w] for v, w in iso.vertex_map.items())


def test_isotopy_is_an_equivalence_on_the_corpus():
    rng = random.Random(11)
    corpus = [(r, template(r)) for r in REGIMES]
    corpus += [(r, relabel(template(r), rng)) for r in REGIMES for _ in range(4)]
    for (ra, a), (rb, b) in itertools.product(corpus, repeat=2):
        assert (isotopic(a, b) is not None) == (ra == rb)


@pytest.mark.parametrize("regime", REGIMES)
def test_text_round_trip(regime):
    g = template(regime)
    text = dumps(g)
    h = loads(text)
    assert dumps(h) == text
    assert isotopic(g, h) is not None
    assert dumps(relabel(g)) != text


def test_loads_rejects_garbage():
    with pytest.raises(DomainError):
        loads("Q nonsense\n")
    with pytest.raises(DomainError):
        loads("V a SP:sink\nN a x+\n")


def test_classify_p0_p1(p0_scan, p1_scan):
    v = classify_pair(P0, P1)
    assert isinstance(v, WeaklyEquivalent)
    assert v.shift == (1, 0)
    assert set(v.certificates) == {r.value for r in REGIMES}
    assert v.h.check() == []


def test_classify_p0_p2():
    v = classify_pair(P0, P2)
    assert isinstance(v, Distinct) and v.reason == "tau"
    assert "words" in v.witness


def test_classify_mu_perturbed():
    v = classify_pair(P0, P0mu, word_evidence=False)
    assert isinstance(v, Distinct) and v.reason == "A"
