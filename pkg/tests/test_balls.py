"""Ball certificates, girth, relations and growth, checked against brute-force word enumeration."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from markedgroups import MarkedGroup, ball, balls_agree, first_divergence, girth, growth, parse_group
from markedgroups.balls import BallCertificate, BallOverflow, free_certificate, rate_upper_transfer, relations_up_to
from markedgroups.models import FinAbelian, Free, NilC2, Wreath
from markedgroups.words import Word, canonical_cyclic, cyclic_reduce, reduced_words


def std(text):
    return MarkedGroup.standard(parse_group(text))


def brute_counts(mg, R):
    """nu(r) by evaluating every reduced word of length <= r."""
    seen = {}
    k = mg.arity
    for n in range(R + 1):
        for letters in reduced_words(k, n):
            g = mg.evaluate(Word(letters, k)) if letters else mg.model.identity()
            seen.setdefault(g, n)
    return [sum(1 for v in seen.values() if v <= r) for r in range(R + 1)]


def brute_relations(mg, L):
    k = mg.arity
    out = set()
    for n in range(1, L + 1):
        for letters in reduced_words(k, n):
            w = Word(letters, k)
            if cyclic_reduce(w)[1] != w:
                continue
            if mg.model.is_identity(mg.evaluate(w)):
                out.add(canonical_cyclic(w))
    return out


# ------------------------------------------------------------ examples

def test_ball_examples():
    z = std("Z")
    c = ball(z, 2)
    assert len(c) == 5 and c.norms == [0, 1, 1, 2, 2]
    z2 = std("Z^2")
    assert balls_agree(ball(z2, 1), free_certificate(2, 1))
    assert len(ball(z2, 2)) == 13 and len(free_certificate(2, 2)) == 17
    assert not balls_agree(ball(z2, 2), free_certificate(2, 2))
    c = ball(std("F2"), 3)
    assert balls_agree(c, c)


def test_certificate_json_roundtrip():
    c = ball(std("BS(1,2)"), 3)
    data = json.loads(c.to_bytes())
    assert set(data) == {"radius", "arity", "states"}
    assert BallCertificate.from_json(data) == c
    assert c.to_bytes() == json.dumps(data, sort_keys=True, separators=(",", ":")).encode()


def test_certificate_consistency():
    for text in ["Z^2", "N2_2", "Z wr Z", "Grig", "BS(1,2)", "F2 * Z/2"]:
        c = ball(std(text), 3)
        k = c.arity
        for v, nx in enumerate(c.nexts):
            assert len(nx) == 2 * k
            for j, t in enumerate(nx):
                if t is not None:
                    assert abs(c.norms[t] - c.norms[v]) <= 1
                    assert c.nexts[t][(j + k) % (2 * k)] == v


def test_overflow_is_an_error():
    with pytest.raises(BallOverflow):
        ball(std("F3"), 6, cap=1000)


def test_girth_examples():
    for R in (1, 2, 4):
        assert girth(std("F2"), R).exceeds
    assert girth(std("Z^2"), 3).value == 4
    assert girth(std("Grig"), 2).value == 2


def test_growth_examples():
    assert growth(std("Z^2"), 3).counts == [1, 5, 13, 25]
    assert growth(std("F2"), 3).counts == [1, 5, 17, 53]
    assert growth(std("Grig"), 1).counts[1] == 5


@pytest.mark.parametrize("text,R", [("Z^2", 4), ("F2", 4), ("N2_2", 4), ("Grig", 5),
                                    ("BS(1,2)", 4), ("Z wr Z", 4), ("FM2", 3), ("Z/2 * Z/3", 6)])
def test_growth_matches_word_enumeration(text, R):
    mg = std(text)
    t = growth(mg, R)
    assert t.counts == brute_counts(mg, R)
    assert t.submultiplicative()


def test_relations_examples():
    rel = relations_up_to(std("Z^2"), 4)
    assert len(rel) == 1 and len(rel[0]) == 4
    assert relations_up_to(std("F2"), 6) == []
    assert relations_up_to(std("N2_2"), 2) == []


@pytest.mark.parametrize("text,L", [("Z^2", 6), ("N2_2", 8), ("Grig", 6), ("BS(1,2)", 6),
                                    ("Z/2 x Z/3", 6), ("Z wr Z", 8)])
def test_relations_match_brute_force(text, L):
    mg = std(text)
    got = {w.letters for w in relations_up_to(mg, L)}
    assert got == brute_relations(mg, L)


def test_rate_upper_transfer_examples():
    from markedgroups.witnesses import lamplighter_metab
    w = lamplighter_metab(4, 2)
    rep = rate_upper_transfer(w.source, w.target, 2)
    assert rep["agree"] and rep["nu_src"] == rep["nu_tgt"]
    mg = std("Z^2")
    assert rate_upper_transfer(mg, mg, 3)["agree"]
    rep = rate_upper_transfer(std("Z^2"), std("F2"), 2)
    assert not rep["agree"] and (rep["nu_src"], rep["nu_tgt"]) == (13, 17)


# ----------------------------------------------------------- properties

GIRTH_GROUPS = ["Z^2", "N2_2", "Z wr Z", "Grig", "BS(1,2)"]


@pytest.mark.parametrize("text", GIRTH_GROUPS)
def test_ball_detects_relations_up_to_2R_plus_1(text):
    """A relation of length L is visible in the ball of radius ceil(L/2) - in particular
    odd relations of length 2R+1 already show up at radius R, so the exact equivalence
    reads: girth > 2R+1 iff the radius-R ball is free."""
    mg = std(text)
    for R in range(1, 5):
        c = ball(mg, R)
        free = balls_agree(c, free_certificate(mg.arity, R))
        g = girth(mg, R + 1, cert=ball(mg, R + 1))
        assert free == (g.exceeds or g.value > 2 * R + 1)


@pytest.mark.parametrize("text", GIRTH_GROUPS + ["F2", "Z/2 * Z/3"])
def test_agreement_is_monotone(text):
    mg = std(text)
    c = ball(mg, 4)
    f = free_certificate(mg.arity, 4)
    d = first_divergence(c, f)
    for r in range(5):
        assert balls_agree(c.truncate(r), f.truncate(r)) == (d is None or r < d)
        assert c.truncate(r) == ball(mg, r)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=3), st.integers(0, 3))
def test_abelian_balls_deterministic(factors, R):
    factors = [0] + factors
    mg = MarkedGroup.standard(FinAbelian(factors))
    c1, c2 = ball(mg, R), ball(mg, R, threads=4)
    assert c1.to_bytes() == c2.to_bytes()
    assert c1.counts()[-1] == len(c1)


def test_threads_do_not_change_certificates():
    for text in ["F3", "Grig", "N2_2"]:
        mg = std(text)
        assert ball(mg, 5, threads=1).to_bytes() == ball(mg, 5, threads=8).to_bytes()
