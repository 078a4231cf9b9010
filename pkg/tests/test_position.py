import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from movingheights import (
    MovingFamily,
    MovingForm,
    PositionError,
    certify_dim_at_most,
    check_position,
    macaulay_map_rank,
    only_trivial_zero,
    reduce_to_general,
    substitute,
    sylvester_resultant,
)
from movingheights.family import CoefficientEntry

from conftest import form, random_form

X0 = form(1, 1, {(1, 0): 1})
X1 = form(1, 1, {(0, 1): 1})


def test_macaulay_map_rank_examples():
    assert macaulay_map_rank([form(1, 2, {(2, 0): 1}), form(1, 2, {(0, 2): 1})], 3) == (4, 4)
    assert macaulay_map_rank([form(1, 2, {(1, 1): 1}), form(1, 2, {(2, 0): 1})], 3) == (3, 4)
    assert macaulay_map_rank([X0], 1) == (1, 2)
    with pytest.raises(ValueError):
        macaulay_map_rank([form(1, 2, {(2, 0): 1})], 1)


def test_only_trivial_zero_examples():
    assert only_trivial_zero([X0, X1, X0 + X1])
    assert only_trivial_zero([form(1, 2, {(1, 1): 1}), form(1, 2, {(2, 0): 1, (0, 2): -1})])
    assert not only_trivial_zero([form(1, 2, {(1, 1): 1}), form(1, 2, {(2, 0): 1})])
    with pytest.raises(ValueError):
        only_trivial_zero([X0])


def test_sylvester_resultant_examples():
    assert sylvester_resultant(form(1, 2, {(1, 1): 1}),
                               form(1, 2, {(2, 0): 1, (0, 2): -1})) == -1
    assert sylvester_resultant(form(1, 2, {(1, 1): 1}), form(1, 2, {(2, 0): 1})) == 0
    assert sylvester_resultant(X0, X1) == 1


def test_only_trivial_zero_invariance():
    forms = [form(1, 2, {(2, 0): 1, (0, 2): 1}), form(1, 2, {(1, 1): 1})]
    assert only_trivial_zero(forms)
    assert only_trivial_zero(list(reversed(forms)))
    M = [[1, 2], [1, 3]]  # invertible
    assert only_trivial_zero([substitute(F, M) for F in forms])
    degenerate = [form(1, 2, {(2, 0): 1}), form(1, 2, {(2, 0): 1, (1, 1): 1})]
    assert not only_trivial_zero(degenerate)
    assert not only_trivial_zero([substitute(F, M) for F in degenerate])


def test_certify_dim_at_most():
    # a single plane curve in P^2 has dimension 1
    curve = form(2, 2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
    assert certify_dim_at_most([curve], 1)
    # emptiness as the bound < 0 case
    assert certify_dim_at_most([X0, X1], -1)
    assert not certify_dim_at_most([form(1, 2, {(1, 1): 1}), form(1, 2, {(2, 0): 1})], -1)


def _constant_family(forms):
    n = forms[0].n
    moving = []
    for F in forms:
        entries = tuple(
            CoefficientEntry(exps, (int(c.numerator),), (int(c.denominator),))
            for exps, c in F.coeffs
        )
        moving.append(MovingForm(n, F.d, entries))
    return MovingFamily(n, tuple(moving))


def test_check_position_examples():
    fam = _constant_family([X0, X0, X1])
    verdict = check_position(fam, 2, [1])
    assert verdict.certified_weakly
    assert verdict.mode == "subgeneral"

    verdict = check_position(fam, 1, [1])
    assert not verdict.certified_weakly
    assert verdict.mode == "fails"
    assert verdict.witness is not None
    assert verdict.witness[0] == (0, 1)  # {Q1, Q2} shares (0:1)

    moving = MovingFamily(1, (
        MovingForm(1, 1, (CoefficientEntry((1, 0), (1,), (1,)),
                          CoefficientEntry((0, 1), (0, 1), (1,)))),  # x0 + alpha x1
        MovingForm(1, 1, (CoefficientEntry((0, 1), (1,), (1,)),)),
        MovingForm(1, 1, (CoefficientEntry((1, 0), (1,), (1,)),)),
    ))
    verdict = check_position(moving, 1, [5])
    assert verdict.certified_weakly
    assert verdict.mode == "general"
    assert verdict.sampled_alphas == (5,)


def test_check_position_preconditions():
    fam = _constant_family([X0, X1])
    with pytest.raises(PositionError):
        check_position(fam, 2, [1])  # q < N+1


def test_reduce_to_general_pinned():
    result = reduce_to_general([X0, X0, X1], 1, 2)
    assert result.coefficients == [[-1, -1]]
    assert result.forms[0] == X0
    assert result.forms[1] == form(1, 1, {(1, 0): -1, (0, 1): -1})
    assert only_trivial_zero(result.forms)


def test_reduce_to_general_degenerate_case():
    result = reduce_to_general([X0, X1], 1, 1)
    assert result.coefficients == [[-1]]
    assert result.forms[0] == X0
    assert only_trivial_zero(result.forms)


def test_reduce_to_general_quadric_catalog_case():
    Q = [form(1, 2, {(2, 0): 1}), form(1, 2, {(2, 0): 1}),
         form(1, 2, {(0, 2): 1}), form(1, 2, {(1, 1): 1, (0, 2): 1})]
    result = reduce_to_general(Q, 1, 3)
    # triangular support: P_2 combines Q_2..Q_4 only
    assert len(result.coefficients) == 1
    assert len(result.coefficients[0]) == 3
    assert only_trivial_zero(result.forms)


def test_reduce_to_general_deterministic():
    Q = [form(1, 2, {(2, 0): 1}), form(1, 2, {(2, 0): 1}),
         form(1, 2, {(0, 2): 1}), form(1, 2, {(1, 1): 1, (0, 2): 1})]
    a = reduce_to_general(Q, 1, 3)
    b = reduce_to_general(Q, 1, 3)
    assert a.coefficients == b.coefficients
    assert a.forms == b.forms


def test_reduce_to_general_rejects_bad_family():
    with pytest.raises(PositionError):
        reduce_to_general([X0, X0, X0], 1, 2)  # common zero (0:1)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**9),
       st.integers(min_value=1, max_value=4))
def test_macaulay_agrees_with_sylvester(seed, d):
    rng = random.Random(seed)
    f = random_form(rng, 1, d)
    g = random_form(rng, 1, d)
    assert only_trivial_zero([f, g]) == (sylvester_resultant(f, g) != 0)
