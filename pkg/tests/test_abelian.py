"""Abelian normal forms and the convergence order, checked against brute-force epimorphism search."""

import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from abelian_oracle import epimorphism_exists
from markedgroups.abelian import (AbelianNF, abelian_nf, catalog, direct_sum, is_quotient,
                                  kernel_shear, parse_abelian, poset_from_subsets, preceq_abelian,
                                  sigma_action, torsion_embeds, transposition, upper_bound)
from markedgroups.witnesses import abelian_witness, verify_witness

A = parse_abelian


def test_normal_form_examples():
    assert abelian_nf([0, 6]) == AbelianNF(1, (6,))
    assert abelian_nf([2, 3]) == AbelianNF(0, (6,))
    assert abelian_nf([6, 0, 35]) == AbelianNF(1, (210,))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 30), max_size=5))
def test_normal_form_matches_smith(raw):
    nf = abelian_nf(raw)
    tors = [n for n in raw if n > 1]
    if tors:
        snf = smith_normal_form(Matrix.diag(*tors), domain=ZZ)
        diag = sorted(abs(int(snf[i, i])) for i in range(len(tors)))
        assert tuple(d for d in diag if d > 1) == nf.factors
    assert nf.rank == raw.count(0)
    assert abelian_nf(nf.raw()) == nf


def test_is_quotient_examples():
    assert is_quotient(A("Z"), A("Z^2"))
    assert not is_quotient(A("Z x Z/2"), A("Z"))
    assert not is_quotient(A("Z/6 x Z"), A("Z/35 x Z"))


def test_torsion_embeds_examples():
    assert torsion_embeds(A("Z/2"), A("Z/4"))
    assert not torsion_embeds(A("Z/2 x Z/2"), A("Z/8"))
    assert torsion_embeds(A("Z/6"), A("Z/2 x Z/9"))


def _brute_mono(a, b):
    """Is there an injective hom torsion(a) -> torsion(b)?  Images of cyclic generators."""
    from abelian_oracle import _elements, _injective, _order
    mods = list(b.factors)
    elems = _elements(mods)
    cands = [[t for t in elems if o % _order(t, mods) == 0] for o in a.factors]
    return any(_injective(t, list(a.factors), mods) for t in product(*cands))


def test_torsion_embeds_matches_brute_search():
    groups = [AbelianNF(0, t) for t in sorted({g.factors for g in catalog(1, 16)})]
    for a in groups:
        for b in groups:
            if a.torsion_order * b.torsion_order <= 1 << 8:
                assert torsion_embeds(a, b) == _brute_mono(a, b), (a, b)


def test_preceq_examples():
    assert preceq_abelian(A("Z"), A("Z^2")) is True
    assert preceq_abelian(A("Z x Z/6"), A("Z^2 x Z/2")) is True
    assert preceq_abelian(A("Z^2"), A("Z")) is False
    with pytest.raises(ValueError):
        preceq_abelian(A("Z/2"), A("Z"))


def test_upper_bound_examples():
    assert upper_bound(A("Z x Z/2"), A("Z^2 x Z/3")) == A("Z^3")
    assert upper_bound(A("Z"), A("Z")) == A("Z")
    assert upper_bound(A("Z/2 x Z/2 x Z"), A("Z^2")) == A("Z^3")


def test_poset_examples():
    fam = poset_from_subsets([2, 3], [{1}, set(), {1, 2}])
    assert fam[frozenset({1})] == A("Z/2 x Z^2")
    assert fam[frozenset()] == A("Z^3")
    assert fam[frozenset({1, 2})] == A("Z/2 x Z/3 x Z")
    with pytest.raises(ValueError):
        poset_from_subsets([2, 2], [{1}])


def test_sigma_examples():
    assert sigma_action(transposition(2, 3), A("Z x Z/4")) == A("Z x Z/9")
    assert sigma_action({2: 2, 3: 3}, A("Z x Z/12")) == A("Z x Z/12")
    assert sigma_action({**transposition(2, 5), 3: 3}, A("Z x Z/6")) == A("Z x Z/15")
    with pytest.raises(ValueError):
        sigma_action(transposition(2, 5), A("Z x Z/3"))


# ----------------------------------------------------------- catalog

CAT = catalog()


def test_catalog_shape():
    assert all(1 <= g.rank <= 2 and g.torsion_order <= 12 for g in CAT)
    assert len(CAT) ** 2 >= 1000


def test_preceq_matches_oracle_on_catalog():
    for a in CAT:
        for b in CAT:
            v = preceq_abelian(a, b)
            assert v != "unknown"
            assert v == epimorphism_exists(a.rank, list(a.factors), b.rank, list(b.factors)), (a, b)


def test_is_quotient_matches_oracle_on_catalog():
    for a in CAT:
        for b in CAT:
            o = epimorphism_exists(a.rank, list(a.factors), b.rank, list(b.factors), injective=False)
            assert is_quotient(a, b) == o, (a, b)


def test_reflexive_and_transitive():
    rel = {(a, b): preceq_abelian(a, b) for a in CAT for b in CAT}
    for a in CAT:
        assert rel[(a, a)]
    for a in CAT:
        for b in CAT:
            if not rel[(a, b)]:
                continue
            for c in CAT:
                if rel[(b, c)]:
                    assert rel[(a, c)], (a, b, c)


def test_linearity_criterion():
    """Successors of A are linearly ordered iff A is torsion-free.

    The incomparable pair above a rank-d group with torsion has rank d+1, so
    successors are drawn from the rank <= 3 catalog.
    """
    bigger = catalog(max_rank=3)
    for a in CAT:
        ups = [b for b in bigger if preceq_abelian(a, b)]
        linear = all(preceq_abelian(x, y) or preceq_abelian(y, x) for x in ups for y in ups)
        if a.factors:
            assert not linear, a
        else:
            assert linear, a


def test_sigma_preserves_order():
    rng = random.Random(11)
    sigmas = [transposition(p, q) for p, q in [(2, 3), (2, 5), (3, 5), (2, 7), (5, 11)]]
    for s in sigmas:
        for p in (2, 3, 5, 7, 11):
            s.setdefault(p, p)
    for _ in range(100):
        a, b = rng.choice(CAT), rng.choice(CAT)
        s = rng.choice(sigmas)
        assert preceq_abelian(a, b) == preceq_abelian(sigma_action(s, a), sigma_action(s, b))


def test_quartet():
    a, b, c, d = A("Z/6 x Z"), A("Z/35 x Z"), A("Z/10 x Z"), A("Z/21 x Z")
    assert direct_sum(a, b) == direct_sum(c, d)
    quartet = [a, b, c, d]
    for i in range(4):
        for j in range(i + 1, 4):
            assert not preceq_abelian(quartet[i], quartet[j])
            assert not preceq_abelian(quartet[j], quartet[i])


def test_poset_three_primes():
    subsets = [frozenset(s) for n in range(8) for s in [{i + 1 for i in range(3) if n >> i & 1}]]
    fam = poset_from_subsets([2, 3, 5], subsets)
    for u in subsets:
        for v in subsets:
            assert preceq_abelian(fam[u], fam[v]) == (v <= u)


def test_kernel_shear_is_epimorphism():
    from markedgroups.abelian import subgroup_index_is_one
    for a in CAT[:12]:
        for b in CAT:
            if preceq_abelian(a, b):
                images = kernel_shear(a, b)
                assert subgroup_index_is_one(images, a.raw())
    with pytest.raises(ValueError):
        kernel_shear(A("Z^2"), A("Z"))


def test_witness_coherence_on_catalog():
    """Every true verdict is realised by a witness agreeing at radius 3."""
    count = 0
    for a in CAT:
        for b in CAT:
            if preceq_abelian(a, b) and a != b:
                assert verify_witness(abelian_witness(a, b, 3))["agree"], (a, b)
                count += 1
    assert count > 0
