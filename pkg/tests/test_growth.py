"""The alpha constant and the wreath-over-Grigorchuk growth signature."""

import pytest

from markedgroups.balls import ball
from markedgroups.growthlab import AlphaRoot, alpha_residual, nueg_csv, nueg_signature, solve_alpha
from markedgroups.parsing import parse_group
from markedgroups.witnesses import grig_wreath


def test_alpha_examples():
    r = solve_alpha(1e-6)
    assert abs(r.alpha - 0.7674) < 1e-4 and r.certified()
    assert alpha_residual(1.0) == pytest.approx(1.0)          # every exponent vanishes at 1
    assert alpha_residual(1.0) > 0
    assert alpha_residual(0.5) == pytest.approx(2 ** -3 + 2 ** -2 + 2 ** -1 - 2) and alpha_residual(0.5) < 0
    with pytest.raises(ValueError):
        solve_alpha(0)
    with pytest.raises(ValueError):
        solve_alpha(1e-6, lo=0.8, hi=0.9)


def test_alpha_intervals_nest():
    prev = None
    for k in range(2, 13):
        r = solve_alpha(10.0 ** -k)
        assert r.certified() and r.error <= 10.0 ** -k
        if prev is not None:
            assert prev.lo <= r.lo and r.hi <= prev.hi
        prev = r
    assert isinstance(prev, AlphaRoot) and abs(alpha_residual(prev.alpha)) < 1e-9


@pytest.mark.parametrize("lamp", ["F2", "Z/2", "Z/2 x Z/3"])
def test_nueg_agreement(lamp):
    rows = nueg_signature(parse_group(lamp), [1, 2])
    for row in rows:
        assert row["agree"] and row["nu_witness"] == row["nu_target"]
        assert row["nu_witness"] <= row["nu_std"]


def test_nueg_counts_match_at_every_smaller_radius():
    w = grig_wreath(parse_group("F2"), 2)
    c1, c2 = ball(w.source, 2), ball(w.target, 2)
    assert c1.counts() == c2.counts()


def test_nueg_csv_header():
    rows = nueg_signature(parse_group("Z/2"), [1])
    text = nueg_csv(rows)
    assert text.splitlines()[0] == "R,nu_witness,nu_std,rate_witness,rate_std,agree"
    assert text.splitlines()[1].endswith(",true")
