"""Group models, words, parsing and the Grigorchuk automaton."""

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from markedgroups import grigorchuk as grig
from markedgroups.hall import single_colouring
from markedgroups.marked import GenerationError, MarkedGroup
from markedgroups.models import (BaumslagSolitar, Direct, FinAbelian, Free, FreeMetabelian,
                                 FreeProd, Grigorchuk, Hall, ModelError, NilC2, PermWreathGrig,
                                 Wreath, fox_derivatives, grig_apply, inv, is_identity, mul)
from markedgroups.parsing import GroupSyntaxError, parse_group
from markedgroups.words import (Word, WordSyntaxError, commutator, cyclic_reduce, free_reduce,
                                parse_sentence, parse_word)


def w(text, model):
    return parse_word(text, model.ngens(), model.gen_names())


# ------------------------------------------------------------ examples

def test_bs_defining_relation():
    bs = BaumslagSolitar(2)
    assert bs.is_identity(bs.eval_word(w("t^-1 a t a^-2", bs)))
    assert not bs.is_identity(bs.eval_word(w("t^-1 a t a^-1", bs)))


def test_nil_commutator_is_central_generator():
    n = NilC2(2)
    assert n.eval_word(w("[x,y]", n)) == ((0, 0), (1,))


def test_hall_order_two_commutator():
    h = Hall(single_colouring((1, 0), 2))
    c = h.eval_word(w("[a, x^-1 a x]", h))
    assert not h.is_identity(c)
    assert h.is_identity(h.mul(c, c))
    assert h.order(c) == 2


def test_inverses():
    assert Free(2).inv((1, 2)) == (-2, -1)
    assert FinAbelian([0, 6]).inv((3, 5)) == (-3, 1)
    assert Grigorchuk().inv(grig.from_letters("ab")) == grig.from_letters("ba")


def test_grigorchuk_identities():
    for word in ["aa", "bb", "cc", "dd", "bcd"]:
        assert grig.is_identity(grig.from_letters(word))
        assert grig.word_is_identity(word)


def test_free_metabelian():
    fm = FreeMetabelian(2)
    assert fm.is_identity(fm.eval_word(w("[[x,y],[x^2,y]]", fm)))
    assert not fm.is_identity(fm.eval_word(w("[x,y]", fm)))


def test_grig_apply_examples():
    assert grig_apply(grig.from_letters("a"), "01") == "11"
    assert grig_apply(grig.from_letters("d"), "0") == "0"
    assert grig_apply(grig.from_letters("b"), "10") == "10"


def _fox_oracle(letters, k):
    """Fox derivatives by the product rule on dicts {monomial: coeff}, abelianised."""
    ab = [0] * k
    ders = [dict() for _ in range(k)]
    for x in letters:
        i = abs(x) - 1
        if x > 0:
            mono = tuple(ab)
            ders[i][mono] = ders[i].get(mono, 0) + 1
            ab[i] += 1
        else:
            ab[i] -= 1
            mono = tuple(ab)
            ders[i][mono] = ders[i].get(mono, 0) - 1
    clean = [tuple(sorted((m, c) for m, c in d.items() if c)) for d in ders]
    return tuple(ab), tuple(clean)


def test_fox_examples():
    x = Word((1,), 2)
    assert fox_derivatives(x, 2) == ((1, 0), ((((0, 0), 1),), ()))
    ab, (dx, dy) = fox_derivatives(commutator(Word((1,), 2), Word((2,), 2)), 2)
    assert ab == (0, 0)
    assert dict(dx) == {(0, 0): 1, (0, 1): -1}          # 1 - y
    assert dict(dy) == {(0, 0): -1, (1, 0): 1}          # x - 1
    assert fox_derivatives(Word((1, -1), 2), 2) == ((0, 0), ((), ()))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=24))
def test_fox_matches_product_rule(letters):
    got = fox_derivatives(Word(tuple(letters), 3), 3)
    assert got == _fox_oracle(free_reduce(letters), 3)


def test_evaluate_examples():
    z2 = MarkedGroup.standard(FinAbelian([0, 0]))
    f2 = MarkedGroup.standard(Free(2))
    c = Word((1, 2, -1, -2), 2)
    assert z2.model.is_identity(z2.evaluate(c))
    assert not f2.model.is_identity(f2.evaluate(c))
    n = MarkedGroup.standard(NilC2(2, 3))
    assert n.model.is_identity(n.evaluate(parse_word("[g1,g2]^3", 2)))


def test_parse_examples():
    g = parse_group("Z^2 x Z/6")
    assert isinstance(g, FinAbelian) and list(g.factors) == [0, 0, 6]
    wr = parse_group("(F2) wr (Z)")
    assert isinstance(wr, Wreath) and isinstance(wr.lamp, Free) and list(wr.base.factors) == [0]
    assert len(parse_word("[g1,g2]^3", 2)) == 12
    assert isinstance(parse_group("(Z/2)wrXGrig"), PermWreathGrig)
    assert isinstance(parse_group("F2 * Z"), FreeProd)
    assert isinstance(parse_group("N2_2 x N2_2"), Direct)
    assert parse_group("N2_2/5").n == 5


@pytest.mark.parametrize("bad", ["Q^2", "Z/0", "Z x", "(Z", "F2 F3"])
def test_parse_group_errors(bad):
    with pytest.raises(GroupSyntaxError):
        parse_group(bad)


@pytest.mark.parametrize("bad", ["g3", "[g1,", "g1^", "g1 ) g2"])
def test_parse_word_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad, 2)


def test_sentence_parse():
    s = parse_sentence("[x,y]=1 & [y,z]=1 => [x,z]=1")
    assert s.nvars == 3
    assert len(s.atoms()) == 3


def test_checked_operations_reject_bad_payloads():
    with pytest.raises(ModelError):
        mul(FinAbelian([0, 6]), (1,), (1, 2))
    with pytest.raises(ModelError):
        inv(Free(2), (3,))
    with pytest.raises(ModelError):
        is_identity(NilC2(2), ((0, 0, 0), (0,)))


def test_generation_errors():
    with pytest.raises(GenerationError):
        MarkedGroup(FinAbelian([0, 0]), words=[Word((1,), 2)])
    with pytest.raises(GenerationError):
        MarkedGroup(FinAbelian([0]), elements=[(2,), (4,)])
    MarkedGroup(FinAbelian([0]), elements=[(2,), (3,)])


# ---------------------------------------------------- model-law properties

def _sample_models():
    return [FinAbelian([0, 6]), Free(2), NilC2(2), NilC2(3, 4), Grigorchuk(),
            BaumslagSolitar(2), FreeMetabelian(2), Hall(single_colouring((1, 0), 3)),
            Direct(Free(2), FinAbelian([3])), FreeProd(FinAbelian([2]), FinAbelian([0])),
            Wreath(FinAbelian([2]), FinAbelian([0])), PermWreathGrig(FinAbelian([2]))]


def _random_element(model, rng, length):
    k = model.ngens()
    letters = [rng.choice([1, -1]) * rng.randint(1, k) for _ in range(length)]
    return model.eval_word(Word(tuple(letters), k))


@pytest.mark.parametrize("model", _sample_models(), ids=lambda m: m.descriptor())
def test_group_laws(model):
    rng = random.Random(1)
    e = model.identity()
    for _ in range(1000 // len(_sample_models()) + 10):
        a, b, c = (_random_element(model, rng, rng.randint(0, 8)) for _ in range(3))
        assert model.mul(model.mul(a, b), c) == model.mul(a, model.mul(b, c))
        assert model.mul(a, e) == a == model.mul(e, a)
        assert model.is_identity(model.mul(a, model.inv(a)))
        assert model.inv(model.inv(a)) == a
        # serialization is canonical JSON and injective on the sample
        s = model.serialize(a)
        assert json.loads(s) == json.loads(json.dumps(model.to_json(a)))
        assert (s == model.serialize(b)) == (a == b)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=30))
def test_word_inverse_and_reduction(letters):
    u = Word(tuple(letters), 2)
    assert free_reduce(u.letters) == u.letters
    assert not (u * u.inverse()).letters
    core_conj, core = cyclic_reduce(u)
    assert core_conj * core * core_conj.inverse() == u


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=12))
def test_word_text_roundtrip(letters):
    u = Word(tuple(letters), 3)
    assert parse_word(u.to_text(), 3) == u


# ----------------------------------------------------------- Grigorchuk

def _random_grig_word(rng, n):
    return "".join(rng.choice("abcd") for _ in range(n))


def test_grig_portrait_vs_contraction():
    rng = random.Random(7)
    for _ in range(300):
        u = _random_grig_word(rng, rng.randint(0, 20))
        v = _random_grig_word(rng, rng.randint(0, 20))
        assert (grig.from_letters(u) == grig.from_letters(v)) == grig.words_equal(u, v)


def test_grig_orders_are_powers_of_two():
    assert [grig.element_order(grig.from_letters(x)) for x in ("ab", "ac", "ad")] == [16, 8, 4]
    assert [grig.word_order(x) for x in ("ab", "ac", "ad")] == [16, 8, 4]


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="abcd", max_size=16), st.text(alphabet="01", min_size=1, max_size=10))
def test_grig_action_is_a_right_action(u, point):
    g = grig.from_letters(u)
    step = point
    for ch in u:
        step = grig.apply(grig.from_letters(ch), step)
    assert grig.apply(g, point) == step
    assert grig.apply(grig.inv(g), grig.apply(g, point)) == point
    assert len(grig.apply(g, point)) == len(point)
