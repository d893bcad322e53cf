"""Prime colourings, separating matrices, Hall quotients and poset realisation."""

import random

import pytest

from markedgroups.balls import ball
from markedgroups.hall import (HallWitnessError, PrimeColouring, constant_colouring, det, hall_quotient,
                               hall_witness, in_gamma2, normalize, positive_box, realize_finite_poset,
                               separates, single_colouring, sl2_separating_matrix, torsion_primes_in_ball,
                               universal_colouring, verify_hall_witness)
from markedgroups.models import Hall
from markedgroups.words import parse_word


def test_separating_matrix_examples():
    M = sl2_separating_matrix(2, 1)
    assert M == ((13, 3), (4, 1)) and det(M) == 1
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            if (m, n) != (0, 0):
                a, b = 13 * m + 3 * n, 4 * m + n
                assert max(abs(a), abs(b)) > 2


@pytest.mark.parametrize("S,R", [(s, r) for s in range(6) for r in range(6)])
def test_separating_matrix_property(S, R):
    M = sl2_separating_matrix(S, R)
    assert det(M) == 1 and separates(M, S, R)


def test_universal_colouring_examples():
    theta = {z: 2 for z in positive_box(1)}
    phi = universal_colouring({2, 3}, [theta])
    (M, _), = phi.log
    assert all(phi.value(normalize((M[0][0] * m + M[0][1] * n, M[1][0] * m + M[1][1] * n))) == 2
               for m, n in positive_box(1))
    assert universal_colouring({2, 3}, []).assignments == {}
    two = universal_colouring({2, 3}, [theta, {(1, 0): 3}])
    images = [{normalize((M[0][0] * m + M[0][1] * n, M[1][0] * m + M[1][1] * n))
               for m, n in th} for M, th in two.log]
    assert not images[0] & images[1]
    with pytest.raises(ValueError):
        universal_colouring({2}, [theta])


def test_seed_selects_gamma2():
    theta = {(1, 0): 2}
    for seed in [(), (1,), (2,), (1, 2), (1, 2, 3)]:
        phi = universal_colouring({2, 3}, [theta, {(0, 1): 3}, {(1, 1): 2}], seed=seed)
        assert [in_gamma2(M) for M, _ in phi.log] == [j in seed for j in (1, 2, 3)]


def test_log_replays_and_roundtrips():
    rng = random.Random(5)
    thetas = [{z: rng.choice([1, 2, 3]) for z in positive_box(rng.randint(1, 2))} for _ in range(4)]
    phi = universal_colouring({2, 3}, thetas, seed=(2,))
    assert phi.replay() == phi.assignments
    again = PrimeColouring.from_json(phi.to_json())
    assert again.assignments == phi.assignments and again.log == phi.log
    assert again.dumps() == phi.dumps()


def test_hall_quotient_examples():
    h = hall_quotient(constant_colouring(1)).model
    assert h.is_identity(h.eval_word(parse_word("[a, x^-1 a x]", 3, h.gen_names())))
    h2 = Hall(single_colouring((1, 0), 2))
    c = h2.eval_word(parse_word("[a, x^-1 a x]", 3, h2.gen_names()))
    assert h2.order(c) == 2


def test_hall_central_coordinates_are_shift_invariant():
    phi = universal_colouring({2, 3}, [{z: 3 for z in positive_box(1)}])
    h = Hall(phi)
    x, y, a = h.gens()
    rng = random.Random(2)
    for _ in range(100):
        p = (rng.randint(-3, 3), rng.randint(-3, 3))
        q = (rng.randint(-3, 3), rng.randint(-3, 3))
        ap = h.conj(a, h.head(p))
        aq = h.conj(a, h.head(q))
        c = h.commutator(ap, aq)
        assert not any(c[0]) and not c[1]
        for g in (x, y):
            assert h.conj(c, g) == c
        s = (rng.randint(-2, 2), rng.randint(-2, 2))
        shifted = h.commutator(h.conj(ap, h.head(s)), h.conj(aq, h.head(s)))
        assert shifted == c


def test_hall_witness_examples():
    from markedgroups.witnesses import hall_colouring
    w = hall_colouring(2)
    from markedgroups.witnesses import verify_witness
    assert verify_witness(w)["agree"]
    phi = universal_colouring({2, 3}, [{(1, 0): 3}])
    self_w = hall_witness(phi, phi, 2)
    assert self_w.matrix == ((1, 0), (0, 1)) and verify_hall_witness(self_w)["agree"]
    with pytest.raises(HallWitnessError):
        hall_witness(phi, single_colouring((1, 0), 5), 2)


def test_witness_agreement_is_monotone_and_torsion_transfers():
    phi = universal_colouring({2, 3}, [{(1, 0): 3, (0, 1): 2}])
    psi = PrimeColouring({(1, 0): 3, (0, 1): 2})
    w = hall_witness(phi, psi, 2)
    assert verify_hall_witness(w, 2)["agree"]
    for r in range(3):
        assert verify_hall_witness(w, r)["agree"]
    assert torsion_primes_in_ball(w.target, 2) <= phi.primes()
    h = w.target.model
    c = h.eval_word(parse_word("[a, x^-1 a x]", 3, h.gen_names()))
    assert h.order(c) == 3 and 3 in phi.primes()


def test_realize_poset_examples():
    r = realize_finite_poset([{5, 7}, {5}])
    v = [[c["verdict"] for c in row] for row in r["verdicts"]]
    assert v == [[True, True], [False, True]]
    assert "7" in r["verdicts"][1][0]["reason"]
    r = realize_finite_poset([{5}, {5}])
    assert all(c["verdict"] for row in r["verdicts"] for c in row)
    r = realize_finite_poset([{5}, {7}])
    v = [[c["verdict"] for c in row] for row in r["verdicts"]]
    assert v == [[True, False], [False, True]]
    with pytest.raises(ValueError):
        realize_finite_poset([{2}])
